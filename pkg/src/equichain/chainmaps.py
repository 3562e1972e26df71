"""Chain maps between the constructed complexes and their verification.

A table stores, per dimension, the image chain of every canonical source
simplex.  The degree -1 component is not stored: it is read off as the
augmentation of the image of a vertex, and the chain-map check demands that
all vertices agree on it.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .chains import Chain, boundary, chain_from_json, chain_sum, chain_to_json
from .complexes import (Complex, Simplex, Vertex, build_annulus, build_disk,
                        build_disk_boundary, build_output_complex, canonical, colors,
                        simplex_to_json, vertex_from_json)
from .symmetry import act_chain, act_simplex, full_group, generators, perm_to_json

PROPERTIES = ("chainmap", "color", "equivariant", "augmented")


@dataclass
class VerificationReport:
    prop: str
    passed: bool
    counterexample: dict | None = None
    checked: int = 0

    def to_json(self) -> dict:
        return {"property": self.prop, "passed": self.passed,
                "checked": self.checked, "counterexample": self.counterexample}

    def __bool__(self):
        return self.passed


@dataclass
class ChainMapTable:
    n: int
    source: str
    target: str
    images: dict[int, dict[Simplex, Chain]]
    status: dict[str, str] = field(default_factory=lambda: {p: "unknown" for p in PROPERTIES})

    def entries(self) -> Iterable[tuple[Simplex, Chain]]:
        for q in sorted(self.images):
            for s in sorted(self.images[q]):
                yield s, self.images[q][s]

    def image(self, s: Simplex) -> Chain:
        try:
            return self.images[len(s) - 1][s]
        except KeyError:
            raise KeyError(f"simplex {s!r} is not mapped by this table") from None

    @property
    def dims(self) -> list[int]:
        return sorted(self.images)

    def minus_one(self) -> int:
        """Degree -1 component: augmentation of the first vertex image."""
        verts = self.images.get(0, {})
        if not verts:
            return 0
        return sum(verts[min(verts)].terms.values())

    def with_status(self, reports: Mapping[str, VerificationReport]) -> "ChainMapTable":
        status = dict(self.status)
        for k, r in reports.items():
            status[k] = "pass" if r.passed else "fail"
        return ChainMapTable(self.n, self.source, self.target, self.images, status)

    def replace(self, s: Simplex, image: Chain) -> "ChainMapTable":
        images = {q: dict(d) for q, d in self.images.items()}
        images[len(s) - 1][s] = image
        return ChainMapTable(self.n, self.source, self.target, images)


def resolve_complex(name: str, n: int) -> Complex:
    """Complex named by a table's source or target identifier."""
    if name == "disk":
        return build_disk(n)
    if name == "disk-boundary":
        return build_disk_boundary(n)
    if name == "annulus":
        return build_annulus(n)
    if name == "output":
        return build_output_complex(n)
    m = re.fullmatch(r"subdivision:(\d+)", name)
    if m:
        from .subdivision import chromatic_subdivide
        return chromatic_subdivide(n, int(m.group(1))).complex
    raise ValueError(f"unknown complex identifier {name!r}")


def apply(m: ChainMapTable, c: Chain) -> Chain:
    if c.q == -1:
        return Chain.integer(m.minus_one() * c.value)
    table = m.images.get(c.q)
    if table is None:
        if not c:
            return Chain.zero(c.q)
        raise KeyError(f"table has no dimension {c.q}")
    parts = []
    for s, k in c.terms.items():
        if s not in table:
            raise KeyError(f"simplex {s!r} is not mapped by this table")
        parts.append(k * table[s])
    return chain_sum(parts, c.q)


def _sx(s: Simplex):
    return simplex_to_json(s)


def verify_chain_map(m: ChainMapTable) -> VerificationReport:
    """Commutation with the boundary, degree by degree, plus support of every
    image in the target complex."""
    target = resolve_complex(m.target, m.n)
    checked = 0
    lam = m.minus_one()
    for s, img in m.entries():
        checked += 1
        bad = [t for t in img.terms if t not in target.simplex_set]
        if bad:
            return VerificationReport("chainmap", False, {
                "reason": "image leaves the target complex", "simplex": _sx(s),
                "outside": _sx(bad[0]), "image": chain_to_json(img)}, checked)
        if len(s) == 1:
            lhs, rhs = Chain.integer(sum(img.terms.values())), Chain.integer(lam)
        else:
            lhs = boundary(img)
            try:
                rhs = apply(m, boundary(Chain(len(s) - 1, {s: 1})))
            except KeyError as exc:
                return VerificationReport("chainmap", False, {
                    "reason": str(exc), "simplex": _sx(s)}, checked)
        if lhs != rhs:
            return VerificationReport("chainmap", False, {
                "simplex": _sx(s), "boundary_of_image": chain_to_json(lhs),
                "image_of_boundary": chain_to_json(rhs)}, checked)
    return VerificationReport("chainmap", True, None, checked)


def verify_color_preserving(m: ChainMapTable) -> VerificationReport:
    checked = 0
    for s, img in m.entries():
        checked += 1
        want = colors(s)
        for t in img.support():
            if colors(t) != want:
                return VerificationReport("color", False, {
                    "simplex": _sx(s), "offending": _sx(t), "image": chain_to_json(img)}, checked)
    return VerificationReport("color", True, None, checked)


def verify_equivariant(m: ChainMapTable, full: bool = False) -> VerificationReport:
    """apply(m, g s) == g apply(m, s) for every generator g and simplex s.

    Adjacent transpositions generate S_n and both sides are homomorphisms in
    g, so the generator check implies the full one; ``full=True`` runs every
    group element instead (practical for n <= 3).
    """
    group = full_group(m.n) if full else generators(m.n)
    checked = 0
    for g in group:
        for s, img in m.entries():
            checked += 1
            t, sign = act_simplex(g, s)
            try:
                lhs = sign * m.image(t)
            except KeyError:
                return VerificationReport("equivariant", False, {
                    "reason": "orbit not closed", "generator": perm_to_json(g),
                    "simplex": _sx(s)}, checked)
            rhs = act_chain(g, img)
            if lhs != rhs:
                return VerificationReport("equivariant", False, {
                    "generator": perm_to_json(g), "simplex": _sx(s),
                    "image_of_translate": chain_to_json(lhs),
                    "translate_of_image": chain_to_json(rhs)}, checked)
    return VerificationReport("equivariant", True, None, checked)


def verify_augmented(m: ChainMapTable) -> VerificationReport:
    checked = 0
    for v, img in sorted(m.images.get(0, {}).items()):
        checked += 1
        a = sum(img.terms.values())
        if a != 1:
            return VerificationReport("augmented", False, {
                "simplex": _sx(v), "augmentation": a, "image": chain_to_json(img)}, checked)
    if not checked:
        return VerificationReport("augmented", False, {"reason": "no vertices mapped"}, 0)
    return VerificationReport("augmented", True, None, checked)


def verify_all(m: ChainMapTable, full: bool = False) -> dict[str, VerificationReport]:
    return {
        "chainmap": verify_chain_map(m),
        "color": verify_color_preserving(m),
        "equivariant": verify_equivariant(m, full=full),
        "augmented": verify_augmented(m),
    }


def _faces_table(K: Complex, f: Callable[[Simplex], Chain]) -> dict[int, dict[Simplex, Chain]]:
    out: dict[int, dict[Simplex, Chain]] = {}
    for q in range(K.dim + 1):
        out[q] = {s: f(s) for s in K.basis(q)}
    return out


def z_map(n: int) -> ChainMapTable:
    """Disk boundary to annulus: each face goes to its all-0 copy."""
    K = build_disk_boundary(n)
    images = _faces_table(K, lambda s: Chain(len(s) - 1, {tuple(Vertex(v.color, 0) for v in s): 1}))
    return ChainMapTable(n, "disk-boundary", "annulus", images)


def identity_map(K: Complex, name: str) -> ChainMapTable:
    return ChainMapTable(K.n, name, name, _faces_table(K, lambda s: Chain(len(s) - 1, {s: 1})))


def induced_from_simplicial(f: Mapping[Vertex, Vertex] | Callable[[Vertex], Vertex],
                            source: Complex, target: Complex,
                            source_name: str, target_name: str,
                            require_color: bool = True) -> ChainMapTable:
    """Chain map of a vertex map; collapsed simplexes go to zero."""
    fv = f.__getitem__ if isinstance(f, Mapping) else f
    images: dict[int, dict[Simplex, Chain]] = {}
    for q in range(source.dim + 1):
        layer = images.setdefault(q, {})
        for s in source.basis(q):
            img = [fv(v) for v in s]
            if require_color and any(w.color != v.color for v, w in zip(s, img)):
                raise ValueError(f"vertex map is not color-preserving on {s!r}")
            if len(set(img)) < len(img):
                layer[s] = Chain.zero(q)
                continue
            if len({w.color for w in img}) < len(img):
                raise ValueError(f"image of {s!r} is not properly colored")
            t, sign = canonical(img)
            if t not in target.simplex_set:
                raise ValueError(f"vertex map is not simplicial: {s!r} -> {t!r}")
            layer[s] = Chain(q, {t: sign})
    return ChainMapTable(source.n, source_name, target_name, images)


def _kleene_and(a: str, b: str) -> str:
    if "fail" in (a, b):
        return "fail"
    if a == b == "pass":
        return "pass"
    return "unknown"


def compose(m2: ChainMapTable, m1: ChainMapTable) -> ChainMapTable:
    """``m2 o m1``."""
    if m1.target != m2.source or m1.n != m2.n:
        raise ValueError(f"cannot compose: {m1.target}({m1.n}) vs {m2.source}({m2.n})")
    images = {q: {s: apply(m2, c) for s, c in layer.items()} for q, layer in m1.images.items()}
    status = {p: _kleene_and(m1.status.get(p, "unknown"), m2.status.get(p, "unknown"))
              for p in PROPERTIES}
    return ChainMapTable(m1.n, m1.source, m2.target, images, status)


# -- JSON ------------------------------------------------------------------

def map_to_json(m: ChainMapTable) -> dict:
    entries = [{"q": len(s) - 1, "simplex": _sx(s), "image": chain_to_json(img)}
               for s, img in m.entries()]
    return {"n": m.n, "source": m.source, "target": m.target, "entries": entries}


def map_from_json(doc) -> ChainMapTable:
    for key in ("n", "source", "target", "entries"):
        if key not in doc:
            raise ValueError(f"map document is missing {key!r}")
    images: dict[int, dict[Simplex, Chain]] = {}
    for e in doc["entries"]:
        verts = [vertex_from_json(v) for v in e["simplex"]]
        s, sign = canonical(verts)
        if len(s) - 1 != e["q"]:
            raise ValueError(f"entry dimension mismatch for {verts!r}")
        img = chain_from_json(e["image"])
        if img.terms and img.q != e["q"]:
            raise ValueError("chain maps must preserve degree")
        images.setdefault(e["q"], {})[s] = sign * Chain(e["q"], img.terms)
    return ChainMapTable(doc["n"], doc["source"], doc["target"], images)
