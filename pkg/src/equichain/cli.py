"""``equichain`` command line.

Exit codes: 0 ok / map exists, 1 verification failed, 2 usage or parse
error, 3 I/O error, 4 precondition unmet, 5 budget exceeded, 10 certified
nonexistence.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from math import comb

from . import __version__
from .chainmaps import map_from_json, resolve_complex, verify_all
from .chains import WindingError, chain_from_json, is_cycle, reduced_betti, supported_on, winding
from .complexes import build_annulus
from .solvability import (Certificate, binomial_gcd, renaming_verdict, search_equivariant_map,
                          solve_diophantine)
from .subdivision import (chromatic_subdivide, coloring_from_json, coloring_winding,
                          count_symmetric_colorings, monochromatic_count, signed_monochromatic_count,
                          subdivision_to_json, symmetric_colorings, wsb_decision_check)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO, EXIT_PRECONDITION, EXIT_BUDGET = 0, 1, 2, 3, 4, 5
EXIT_NONEXISTENCE = 10
DEFAULT_BUDGET = 10 ** 7


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def with_metadata(doc: dict, verb: str) -> dict:
    out = dict(doc)
    out["metadata"] = {"tool": "equichain", "version": __version__, "command": verb}
    return out


def strip_metadata(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k != "metadata"}


def emit(doc: dict, verb: str, out_path: str | None = None):
    text = dumps(with_metadata(doc, verb))
    if out_path:
        try:
            with open(out_path, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write {out_path}: {exc}") from None
    else:
        sys.stdout.write(text)


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_USAGE, f"{path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise CliError(EXIT_USAGE, f"{path}: expected a JSON object")
    return strip_metadata(doc)


def budget(args) -> int:
    if args.budget_facets is not None:
        return args.budget_facets
    env = os.environ.get("EQUICHAIN_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise CliError(EXIT_USAGE, f"EQUICHAIN_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


def fubini(m: int) -> int:
    a = [1]
    for k in range(1, m + 1):
        a.append(sum(comb(k, j) * a[k - j] for j in range(1, k + 1)))
    return a[m]


def subdivision_within(n: int, rounds: int, limit: int):
    facets = fubini(n + 1) ** rounds
    if facets > limit:
        raise CliError(EXIT_BUDGET, f"subdivision has {facets} facets; budget is {limit}")
    return chromatic_subdivide(n, rounds)


def need_n(n: int | None, lo: int = 1) -> int:
    if n is None or n < lo:
        raise CliError(EXIT_USAGE, f"--n must be an integer >= {lo}")
    return n


# -- verbs ----------------------------------------------------------------------

def cmd_solvable(args) -> int:
    n = need_n(args.n, 0)
    if n == 0:
        doc = {"n": 0, "gcd": 0, "diophantine": solve_diophantine(0).to_json(),
               "wait_free": {"impossible": True,
                             "verdict": "a single process cannot output a bit that is neither all 0 nor all 1"}}
        emit(doc, "solvable")
        return EXIT_NONEXISTENCE
    try:
        report = renaming_verdict(n, args.t)
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    report["diophantine"] = solve_diophantine(n).to_json()
    report["chain_map_exists"] = report["gcd"] == 1
    emit(report, "solvable")
    if args.t is not None:
        return EXIT_NONEXISTENCE if report["t_resilient"]["impossible"] else EXIT_OK
    return EXIT_NONEXISTENCE if report["wait_free"]["impossible"] else EXIT_OK


def cmd_search(args) -> int:
    n = need_n(args.n, 0)
    cert = search_equivariant_map(n)
    emit(cert.to_json(), "search", args.out)
    return EXIT_OK if cert.exists else EXIT_NONEXISTENCE


def cmd_verify(args) -> int:
    if not args.map:
        raise CliError(EXIT_USAGE, "verify needs --map")
    doc = load_json(args.map)
    try:
        if "kind" in doc:
            cert = Certificate.from_json(doc)
            if not cert.exists:
                ok = cert.check()
                emit({"kind": "nonexistence", "n": cert.n, "gcd": cert.g, "certificate_holds": ok},
                     "verify")
                return EXIT_OK if ok else EXIT_FAIL
            m = cert.map
        else:
            m = map_from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_USAGE, f"cannot parse map document: {exc}") from None
    try:
        reports = verify_all(m)
    except ValueError as exc:
        raise CliError(EXIT_PRECONDITION, str(exc)) from None
    emit({"n": m.n, "source": m.source, "target": m.target,
          "reports": {k: r.to_json() for k, r in reports.items()},
          "passed": all(r.passed for r in reports.values())}, "verify")
    return EXIT_OK if all(r.passed for r in reports.values()) else EXIT_FAIL


def cmd_wind(args) -> int:
    if not args.chain:
        raise CliError(EXIT_USAGE, "wind needs --chain")
    doc = load_json(args.chain)
    try:
        c = chain_from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_USAGE, f"cannot parse chain document: {exc}") from None
    n = args.n if args.n is not None else c.q + 1
    if n < 1 or (c.terms and c.q != n - 1):
        raise CliError(EXIT_PRECONDITION, f"expected an {n - 1}-chain, got degree {c.q}")
    if not supported_on(c, build_annulus(n)):
        raise CliError(EXIT_PRECONDITION, "chain is not supported on the annulus")
    if not is_cycle(c):
        raise CliError(EXIT_PRECONDITION, "chain is not a cycle")
    try:
        w = winding(c, n)
    except WindingError as exc:
        raise CliError(EXIT_PRECONDITION, str(exc)) from None
    emit({"n": n, "winding": w}, "wind")
    return EXIT_OK


def cmd_wsb(args) -> int:
    limit = budget(args)
    if args.coloring:
        doc = load_json(args.coloring)
        try:
            n, rounds = doc["n"], doc["rounds"]
        except KeyError as exc:
            raise CliError(EXIT_USAGE, f"coloring document is missing {exc}") from None
        if args.n is not None and args.n != n or args.rounds is not None and args.rounds != rounds:
            raise CliError(EXIT_USAGE, "coloring document does not match --n/--rounds")
        S = subdivision_within(n, rounds, limit)
        try:
            S, b = coloring_from_json(doc, S)
        except ValueError as exc:
            raise CliError(EXIT_USAGE, str(exc)) from None
        report = wsb_decision_check(S, b)
        report.update({"n": n, "rounds": rounds})
        if n >= 1:
            report["winding"] = coloring_winding(S, b) if report["symmetric"] else None
        emit(report, "wsb")
        return EXIT_OK
    if not args.exhaustive:
        raise CliError(EXIT_USAGE, "wsb needs --exhaustive or --coloring")
    n = need_n(args.n)
    rounds = args.rounds if args.rounds is not None else 1
    if rounds < 0:
        raise CliError(EXIT_USAGE, "--rounds must be >= 0")
    S = subdivision_within(n, rounds, limit)
    total = count_symmetric_colorings(S)
    work = total * len(S.complex.facets)
    if work > limit:
        raise CliError(EXIT_BUDGET, f"{total} symmetric colorings x {len(S.complex.facets)} facets "
                                    f"= {work} exceeds budget {limit}")
    g = binomial_gcd(n)
    counts, signed = Counter(), Counter()
    decisions = 0
    for b in symmetric_colorings(S):
        counts[monochromatic_count(S, b)] += 1
        signed[signed_monochromatic_count(S, b)] += 1
        decisions += wsb_decision_check(S, b)["decision"]
    report = {
        "n": n, "rounds": rounds, "gcd": g, "symmetric_colorings": total,
        "counts": {str(k): v for k, v in sorted(counts.items())},
        "signed_counts": {str(k): v for k, v in sorted(signed.items())},
        "min_count": min(counts),
        "counts_congruent": all((k - 1) % g == 0 for k in counts),
        "signed_counts_congruent": all((k - 1) % g == 0 for k in signed),
        "wsb_decisions": decisions,
    }
    emit(report, "wsb")
    return EXIT_OK if report["signed_counts_congruent"] else EXIT_FAIL


def cmd_subdivide(args) -> int:
    n = need_n(args.n, 0)
    rounds = args.rounds if args.rounds is not None else 1
    if rounds < 0:
        raise CliError(EXIT_USAGE, "--rounds must be >= 0")
    S = subdivision_within(n, rounds, budget(args))
    emit(subdivision_to_json(S), "subdivide", args.out)
    return EXIT_OK


def cmd_homology(args) -> int:
    n = need_n(args.n, 0)
    try:
        K = resolve_complex(args.complex, n)
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    groups = {}
    for q in range(-1, K.dim + 1):
        rank, torsion = reduced_betti(K, q)
        groups[str(q)] = {"rank": rank, "torsion": torsion}
    emit({"complex": args.complex, "n": n, "census": K.census(), "reduced_homology": groups},
         "homology")
    return EXIT_OK


VERBS = {
    "solvable": cmd_solvable, "search": cmd_search, "verify": cmd_verify, "wind": cmd_wind,
    "wsb": cmd_wsb, "subdivide": cmd_subdivide, "homology": cmd_homology,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="equichain",
                                description="Equivariant chain maps and weak symmetry breaking.")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, help):
        return sub.add_parser(name, help=help)

    s = verb("solvable", "gcd test and renaming verdicts")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--t", type=int)

    s = verb("search", "search for an equivariant chain map; write a certificate")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--out")

    s = verb("verify", "verify a chain map or certificate document")
    s.add_argument("--map", required=True)

    s = verb("wind", "winding number of an annulus cycle")
    s.add_argument("--chain", required=True)
    s.add_argument("--n", type=int)

    s = verb("wsb", "symmetric colorings of a chromatic subdivision")
    s.add_argument("--n", type=int)
    s.add_argument("--rounds", type=int)
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--coloring")
    s.add_argument("--budget-facets", type=int)

    s = verb("subdivide", "write an iterated chromatic subdivision")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--rounds", type=int)
    s.add_argument("--out")
    s.add_argument("--budget-facets", type=int)

    s = verb("homology", "reduced integral homology of a named complex")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--complex", default="annulus",
                   help="disk, disk-boundary, annulus, output or subdivision:<rounds>")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return VERBS[args.verb](args)
    except CliError as exc:
        print(f"equichain {args.verb}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
