"""Existence and non-existence of color-preserving equivariant chain maps
from the disk to the annulus.

Any such map is constant on the orbit classes L_{q,k} (binary simplexes on
colors 0..q with k ones), so the search reduces to a small integer system in
the unknowns c_{q,k}.  Infeasibility comes with a modular certificate; a
feasible solution is expanded to a full table and re-verified.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from itertools import product
from math import comb, gcd
from typing import Iterator

from . import intmat
from .chainmaps import (ChainMapTable, VerificationReport, apply, map_from_json, map_to_json,
                        verify_all)
from .chains import Chain, boundary, chain_sum, winding
from .complexes import UNIT, Simplex, Vertex, build_disk, build_disk_boundary, colors
from .symmetry import act_chain, act_simplex, order_preserving_transport, pi_m_i


class InternalError(RuntimeError):
    """An expanded witness failed re-verification."""


# -- number theory ---------------------------------------------------------

def _pascal_row(m: int) -> list[int]:
    row = [1]
    for _ in range(m):
        row = [a + b for a, b in zip([0] + row, row + [0])]
    return row


def _multiplicative_row(m: int) -> list[int]:
    row, c = [1], 1
    for k in range(1, m + 1):
        c = c * (m - k + 1) // k
        row.append(c)
    return row


def binomial_gcd(n: int) -> int:
    """gcd of C(n+1, 1), ..., C(n+1, n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = _pascal_row(n + 1)[1:n + 1]
    b = _multiplicative_row(n + 1)[1:n + 1]
    if a != b:
        raise InternalError(f"binomial rows disagree at n={n}")
    g1 = reduce(gcd, a)
    g2 = 0
    for x in b:
        g2 = gcd(g2, x)
    if g1 != g2:
        raise InternalError(f"gcd computations disagree at n={n}")
    return g1


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s a + t b = g >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


@dataclass
class DiophantineResult:
    n: int
    feasible: bool
    g: int
    k: list[int] | None = None

    def to_json(self) -> dict:
        return {"n": self.n, "feasible": self.feasible, "gcd": self.g, "k": self.k}


def solve_diophantine(n: int, search_budget: int = 200_000) -> DiophantineResult:
    """Integers k_0..k_{n-1} with 1 + sum k_i C(n+1, i+1) = 0.

    Feasibility and a first witness come from iterated extended gcd.  The
    witness is then replaced by the lexicographically first solution of least
    max-norm when that box is small enough to scan (``search_budget``).
    """
    if n < 1:
        return DiophantineResult(n, False, 0)
    coeffs = [comb(n + 1, i + 1) for i in range(n)]
    g, s = 0, []
    for a in coeffs:
        g2, x, y = extended_gcd(g, a)
        s = [x * si for si in s] + [y]
        g = g2
    assert sum(si * a for si, a in zip(s, coeffs)) == g
    if g != 1:
        return DiophantineResult(n, False, g)
    k = [-si for si in s]
    top = max(abs(x) for x in k)
    for bound in range(1, top):
        if (2 * bound + 1) ** n > search_budget:
            break
        rng = range(-bound, bound + 1)
        hit = next((list(v) for v in product(rng, repeat=n)
                    if 1 + sum(a * b for a, b in zip(v, coeffs)) == 0), None)
        if hit is not None:
            k = hit
            break
    if 1 + sum(a * b for a, b in zip(k, coeffs)) != 0:
        raise InternalError("diophantine witness failed substitution")
    return DiophantineResult(n, True, g, k)


def is_prime_power(m: int) -> bool:
    if m < 2:
        return False
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            return m == 1
        p += 1
    return True


# -- orbit classes and the reduced system ----------------------------------

@dataclass(frozen=True)
class OrbitClass:
    q: int
    k: int
    members: tuple[Simplex, ...]

    def chain(self) -> Chain:
        return Chain(self.q, {s: 1 for s in self.members})


@lru_cache(maxsize=None)
def orbit_class(q: int, k: int) -> OrbitClass:
    members = tuple(sorted(
        tuple(Vertex(c, b) for c, b in enumerate(bits))
        for bits in product((0, 1), repeat=q + 1) if sum(bits) == k))
    return OrbitClass(q, k, members)


def representative_face(q: int) -> Simplex:
    return tuple(Vertex(c, UNIT) for c in range(q + 1))


@dataclass
class ReducedSystem:
    n: int
    boundary_only: bool
    unknowns: list[tuple[int, int]]
    rows: list[list[int]]
    rhs: list[int]
    labels: list[str]

    @property
    def top(self) -> int:
        return self.n - 1 if self.boundary_only else self.n

    def residual(self, x: list[int]) -> list[int]:
        return [sum(a * b for a, b in zip(row, x)) - r for row, r in zip(self.rows, self.rhs)]

    def satisfied(self, x: list[int]) -> bool:
        return not any(self.residual(x))

    def as_dict(self, x: list[int]) -> dict[tuple[int, int], int]:
        return dict(zip(self.unknowns, x))

    def to_json(self) -> dict:
        return {"n": self.n, "boundary_only": self.boundary_only,
                "unknowns": [f"c[{q},{k}]" for q, k in self.unknowns],
                "rows": self.rows, "rhs": self.rhs, "labels": self.labels}


def build_reduced_system(n: int, boundary_only: bool = False) -> ReducedSystem:
    """Equations for the orbit-class ansatz a(<0..q>) = sum_k c[q,k] L_{q,k}.

    For every q >= 1 the coefficients of boundary(a(<0..q>)) - a(boundary <0..q>)
    must vanish, where a on the face missing i is transported from
    a(<0..q-1>) by pi^q_i.  Degree 0 contributes the augmentation row, and the
    full system pins the two monochromatic n-simplexes to zero.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    top = n - 1 if boundary_only else n
    unknowns = [(q, k) for q in range(top + 1) for k in range(q + 2)]
    col = {u: j for j, u in enumerate(unknowns)}
    rows: list[list[int]] = []
    rhs: list[int] = []
    labels: list[str] = []
    seen: set[tuple[int, ...]] = set()

    def add(row, r, label):
        key = tuple(row) + (r,)
        if key in seen or not any(row) and r == 0:
            return
        seen.add(key)
        rows.append(row)
        rhs.append(r)
        labels.append(label)

    # augmentation: the degree -1 component must be the identity
    row = [0] * len(unknowns)
    for k in range(2):
        row[col[(0, k)]] = boundary(orbit_class(0, k).chain()).value
    add(row, 1, "augmentation")

    for q in range(1, top + 1):
        contrib: dict[tuple[int, int], Chain] = {}
        for k in range(q + 2):
            contrib[(q, k)] = boundary(orbit_class(q, k).chain())
        for k in range(q + 1):
            lower = orbit_class(q - 1, k).chain()
            moved = [(-1) ** i * act_chain(pi_m_i(q, i, n), lower) for i in range(q + 1)]
            contrib[(q - 1, k)] = -chain_sum(moved, q - 1)
        support = sorted({s for c in contrib.values() for s in c.terms})
        for s in support:
            row = [0] * len(unknowns)
            for u, c in contrib.items():
                row[col[u]] += c.coeff(s)
            body = "".join(str(v.label) for v in s)
            add(row, 0, f"dim {q}: face {[v.color for v in s]} labels {body}")

    if not boundary_only:
        for k in (0, n + 1):
            row = [0] * len(unknowns)
            row[col[(n, k)]] = 1
            add(row, 0, f"pin c[{n},{k}]: monochromatic facet absent")
    return ReducedSystem(n, boundary_only, unknowns, rows, rhs, labels)


def expand_solution(system: ReducedSystem, x: list[int]) -> ChainMapTable:
    """Lift a solution of the reduced system to a full equivariant table."""
    n = system.n
    values = system.as_dict(x)
    source = build_disk_boundary(n) if system.boundary_only else build_disk(n)
    images: dict[int, dict[Simplex, Chain]] = {}
    for q in range(system.top + 1):
        rep_image = chain_sum([values[(q, k)] * orbit_class(q, k).chain() for k in range(q + 2)], q)
        rep = representative_face(q)
        layer = images.setdefault(q, {})
        for s in source.basis(q):
            g = order_preserving_transport(colors(s), n)
            t, sign = act_simplex(g, rep)
            assert t == s and sign == 1
            layer[s] = act_chain(g, rep_image)
    name = "disk-boundary" if system.boundary_only else "disk"
    return ChainMapTable(n, name, "annulus", images)


# -- lattice solutions -------------------------------------------------------

def enumerate_solutions(system: ReducedSystem, bound: int) -> Iterator[list[int]]:
    """All solutions with every coordinate in [-bound, bound], in
    lexicographic order.  Rows are checked as soon as their last unknown is set.
    """
    m = len(system.unknowns)
    last = [max((j for j, a in enumerate(row) if a), default=-1) for row in system.rows]
    due: dict[int, list[int]] = {}
    for i, j in enumerate(last):
        due.setdefault(j, []).append(i)
    if any(r != 0 for i, r in enumerate(system.rhs) if last[i] == -1):
        return
    x = [0] * m

    def rec(j):
        if j == m:
            yield list(x)
            return
        for v in range(-bound, bound + 1):
            x[j] = v
            ok = True
            for i in due.get(j, ()):
                row = system.rows[i]
                if sum(row[t] * x[t] for t in range(j + 1)) != system.rhs[i]:
                    ok = False
                    break
            if ok:
                yield from rec(j + 1)
        x[j] = 0

    yield from rec(0)


def sample_solutions(system: ReducedSystem, count: int, seed: int = 0,
                     spread: int = 3) -> list[list[int]]:
    """Random lattice points: particular solution plus a random kernel mix."""
    sol = intmat.solve(system.rows, system.rhs, len(system.unknowns))
    if not sol.feasible:
        return []
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        x = list(sol.x)
        for vec in sol.kernel:
            t = rng.randint(-spread, spread)
            x = [a + t * b for a, b in zip(x, vec)]
        out.append(x)
    return out


# -- certificates ------------------------------------------------------------

@dataclass
class Certificate:
    kind: str  # "existence" | "nonexistence"
    n: int
    g: int
    diophantine: DiophantineResult
    map: ChainMapTable | None = None
    reports: dict[str, VerificationReport] = field(default_factory=dict)
    coefficients: dict[tuple[int, int], int] | None = None
    system_congruence: dict | None = None
    class_equation: dict | None = None
    boundary_winding: int | None = None

    @property
    def exists(self) -> bool:
        return self.kind == "existence"

    def check(self) -> bool:
        """Re-verify the certificate from its own data."""
        if self.exists:
            if self.map is None:
                return False
            return all(r.passed for r in verify_all(self.map).values())
        eq = self.class_equation or {}
        g = eq.get("modulus", self.g)
        coeffs = eq.get("coefficients", [])
        divides = all((c == 0) if g == 0 else c % g == 0 for c in coeffs)
        const = eq.get("constant", 1)
        return divides and ((const != 0) if g == 0 else const % g != 0)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind, "n": self.n, "gcd": self.g,
            "diophantine": self.diophantine.to_json(),
            "reports": {k: r.to_json() for k, r in sorted(self.reports.items())},
            "coefficients": None if self.coefficients is None else
            {f"c[{q},{k}]": v for (q, k), v in sorted(self.coefficients.items())},
            "system_congruence": self.system_congruence,
            "class_equation": self.class_equation,
            "boundary_winding": self.boundary_winding,
            "map": None if self.map is None else map_to_json(self.map),
        }
        return out

    @classmethod
    def from_json(cls, doc: dict) -> "Certificate":
        d = doc["diophantine"]
        coeffs = None
        if doc.get("coefficients") is not None:
            coeffs = {}
            for key, v in doc["coefficients"].items():
                q, k = key[2:-1].split(",")
                coeffs[(int(q), int(k))] = v
        reports = {k: VerificationReport(r["property"], r["passed"], r["counterexample"], r["checked"])
                   for k, r in doc.get("reports", {}).items()}
        return cls(doc["kind"], doc["n"], doc["gcd"],
                   DiophantineResult(d["n"], d["feasible"], d["gcd"], d["k"]),
                   None if doc.get("map") is None else map_from_json(doc["map"]),
                   reports, coeffs, doc.get("system_congruence"), doc.get("class_equation"),
                   doc.get("boundary_winding"))


def _class_equation(n: int, g: int) -> dict:
    return {"coefficients": [comb(n + 1, q + 1) for q in range(n)], "constant": 1, "modulus": g,
            "statement": "1 + sum_q k_q C(n+1, q+1) = 0 has no integer solution"}


def search_equivariant_map(n: int, winding_limit: int = 5) -> Certificate:
    """Decide existence of a non-trivial color-preserving equivariant chain map
    from the disk to the annulus and return a checkable certificate."""
    if n == 0:
        # one process cannot output a bit that is neither all-0 nor all-1
        return Certificate("nonexistence", 0, 0, DiophantineResult(0, False, 0),
                           class_equation=_class_equation(0, 0))
    if n < 0:
        raise ValueError("n must be >= 0")
    g = binomial_gcd(n)
    dio = solve_diophantine(n)
    system = build_reduced_system(n)
    sol = intmat.solve(system.rows, system.rhs, len(system.unknowns))
    if sol.feasible:
        if g != 1:
            raise InternalError(f"reduced system feasible at n={n} although gcd={g}")
        table = expand_solution(system, sol.x)
        reports = verify_all(table)
        bad = [k for k, r in reports.items() if not r.passed]
        if bad:
            raise InternalError(f"expanded witness fails {bad} at n={n}")
        return Certificate("existence", n, g, dio, table.with_status(reports), reports,
                           system.as_dict(sol.x))
    if g == 1:
        raise InternalError(f"reduced system infeasible at n={n} although gcd=1")
    if not intmat.check_certificate(system.rows, system.rhs, sol.certificate, sol.modulus):
        raise InternalError("infeasibility certificate does not check")
    congruence = {
        "row_combination": sol.certificate,
        "modulus": sol.modulus,
        "combined_rhs": sum(a * b for a, b in zip(sol.certificate, system.rhs)),
    }
    cert = Certificate("nonexistence", n, g, dio, system_congruence=congruence,
                       class_equation=_class_equation(n, g))
    if n <= winding_limit:
        bsys = build_reduced_system(n, boundary_only=True)
        bsol = intmat.solve(bsys.rows, bsys.rhs, len(bsys.unknowns))
        cert.boundary_winding = winding_congruence(expand_solution(bsys, bsol.x), n).winding
    return cert


# -- winding congruence ------------------------------------------------------

@dataclass
class CongruenceReport:
    n: int
    winding: int
    modulus: int
    holds: bool

    def to_json(self) -> dict:
        return {"n": self.n, "winding": self.winding, "modulus": self.modulus, "holds": self.holds}


def disk_boundary_chain(n: int) -> Chain:
    return boundary(Chain(n, {representative_face(n): 1}))


def winding_congruence(m: ChainMapTable, n: int) -> CongruenceReport:
    """Winding of the image of the disk boundary, tested against 1 mod gcd."""
    reports = verify_all(m)
    bad = [k for k, r in reports.items() if not r.passed]
    if bad:
        raise ValueError(f"map fails {bad}; the congruence needs a verified map")
    w = winding(apply(m, disk_boundary_chain(n)), n)
    g = binomial_gcd(n)
    return CongruenceReport(n, w, g, (w - 1) % g == 0)


# -- renaming verdicts ---------------------------------------------------------

def renaming_verdict(n: int, t: int | None = None) -> dict:
    if n < 1:
        raise ValueError("n must be >= 1")
    g = binomial_gcd(n)
    report = {"n": n, "processes": n + 1, "gcd": g}
    if g > 1:
        report["wait_free"] = {
            "impossible": True,
            "verdict": f"no wait-free {2 * n}-renaming protocol for {n + 1} processes",
        }
    else:
        report["wait_free"] = {
            "impossible": False,
            "verdict": "equivariant chain map exists; impossibility not derivable "
                       f"(a wait-free {2 * n}-renaming protocol for this n is known from prior work)",
            "protocol_reference": "wait-free renaming construction for relatively prime binomials",
        }
    if t is not None:
        if not 1 <= t <= n:
            raise ValueError("need 1 <= t <= n")
        gt = binomial_gcd(t)
        if gt > 1:
            verdict = f"no {t}-resilient {n + t}-renaming protocol"
        else:
            verdict = f"unknown/possible: gcd is 1, so no {t}-resilient {n + t}-renaming lower bound follows"
        report["t_resilient"] = {"t": t, "gcd": gt, "impossible": gt > 1, "verdict": verdict}
    return report
