"""Iterated chromatic (immediate-snapshot) subdivisions of the disk, their
chain maps, and symmetric binary colorings of their vertices.

A round-r vertex is ``(id, View(seen))`` where ``seen`` is the set of
round-(r-1) vertices the process saw in its snapshot.  Vertices are identified
by their views, so facets coming from different parents glue along common
faces automatically.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterator, Mapping

from .chainmaps import (ChainMapTable, VerificationReport, apply, compose, identity_map,
                        induced_from_simplicial, verify_chain_map)
from .chains import Chain, boundary, simplex_boundary, winding
from .complexes import (Complex, Simplex, Vertex, View, build_disk, build_output_complex,
                        canonical, colors, label_from_json, label_to_json, vertex_carrier)
from .symmetry import act_vertex

BinaryColoring = Mapping[Vertex, int]


# -- ordered partitions ------------------------------------------------------

@dataclass(frozen=True)
class OrderedPartition:
    blocks: tuple[frozenset, ...]

    def __post_init__(self):
        seen: set = set()
        for b in self.blocks:
            if not b or seen & b:
                raise ValueError("blocks must be non-empty and disjoint")
            seen |= b

    def prefixes(self) -> Iterator[frozenset]:
        acc: frozenset = frozenset()
        for b in self.blocks:
            acc = acc | b
            yield acc


def ordered_partitions(items) -> Iterator[OrderedPartition]:
    """Every ordered set partition of ``items`` (deterministic order)."""
    items = sorted(items)
    if not items:
        yield OrderedPartition(())
        return

    def rec(rest):
        if not rest:
            yield ()
            return
        for k in range(1, len(rest) + 1):
            for first in combinations(rest, k):
                remaining = [x for x in rest if x not in first]
                for tail in rec(remaining):
                    yield (frozenset(first),) + tail

    for blocks in rec(items):
        yield OrderedPartition(blocks)


# -- subdivisions ------------------------------------------------------------

@dataclass(frozen=True)
class SubdividedComplex:
    n: int
    rounds: int
    complex: Complex

    @property
    def name(self) -> str:
        return f"subdivision:{self.rounds}"

    def carrier(self, v: Vertex) -> frozenset[int]:
        return vertex_carrier(v)

    def simplex_carrier(self, s) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for v in s:
            out |= vertex_carrier(v)
        return out

    @cached_property
    def vertices(self) -> list[Vertex]:
        return list(self.complex.vertices)

    @cached_property
    def index(self) -> dict[Vertex, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def subcomplex(self, ids) -> Complex:
        """Subdivision of the face of the disk spanned by ``ids``."""
        ids = frozenset(ids)
        q = len(ids) - 1
        tops = [s for s in self.complex.basis(q) if self.simplex_carrier(s) <= ids]
        return Complex(self.n, frozenset(tops), f"{self.name}|{sorted(ids)}")

    def pieces(self, ids) -> list[Simplex]:
        """q-simplexes whose carrier is exactly ``ids`` (q = |ids| - 1)."""
        ids = frozenset(ids)
        return [s for s in self.complex.basis(len(ids) - 1) if self.simplex_carrier(s) == ids]


def _refine(facet: Simplex) -> Iterator[Simplex]:
    for part in ordered_partitions(facet):
        out = []
        for block, seen in zip(part.blocks, part.prefixes()):
            view = View(tuple(sorted(seen)))
            out.extend(Vertex(v.color, view) for v in block)
        yield canonical(out)[0]


@lru_cache(maxsize=None)
def chromatic_subdivide(n: int, rounds: int) -> SubdividedComplex:
    if n < 0 or rounds < 0:
        raise ValueError("need n >= 0 and rounds >= 0")
    facets = set(build_disk(n).facets)
    for _ in range(rounds):
        facets = {g for f in facets for g in _refine(f)}
    name = f"chi^{rounds}(disk({n}))"
    return SubdividedComplex(n, rounds, Complex(n, frozenset(facets), name))


# -- subdivision chain map ---------------------------------------------------

def _orient(pieces: list[Simplex], interior: frozenset[int], S: SubdividedComplex) -> dict[Simplex, int]:
    """Coherent signs on the pieces: shared interior faces must cancel."""
    by_face: dict[Simplex, list[tuple[Simplex, int]]] = {}
    for p in pieces:
        for f, sign in simplex_boundary(p).items():
            if S.simplex_carrier(f) == interior:
                by_face.setdefault(f, []).append((p, sign))
    adj: dict[Simplex, list[tuple[Simplex, int]]] = {p: [] for p in pieces}
    for f, inc in by_face.items():
        if len(inc) != 2:
            raise RuntimeError(f"interior face {f!r} lies in {len(inc)} pieces")
        (a, sa), (b, sb) = inc
        adj[a].append((b, -sa * sb))
        adj[b].append((a, -sa * sb))
    eps = {pieces[0]: 1}
    todo = deque([pieces[0]])
    while todo:
        p = todo.popleft()
        for r, rel in adj[p]:
            want = rel * eps[p]
            if r not in eps:
                eps[r] = want
                todo.append(r)
            elif eps[r] != want:
                raise RuntimeError("subdivision is not orientable along this face")
    if len(eps) != len(pieces):
        raise RuntimeError("face subdivision is not connected")
    return eps


def subdivision_chain_map(S: SubdividedComplex) -> ChainMapTable:
    """Each face of the disk goes to the coherently signed sum of its pieces."""
    disk = build_disk(S.n)
    if S.rounds == 0:
        m = identity_map(disk, "disk")
        return ChainMapTable(S.n, "disk", S.name, m.images)
    images: dict[int, dict[Simplex, Chain]] = {}
    for q in range(S.n + 1):
        layer = images.setdefault(q, {})
        for s in disk.basis(q):
            ids = colors(s)
            pieces = S.pieces(ids)
            eps = _orient(pieces, ids, S) if q else {pieces[0]: 1}
            layer[s] = Chain(q, eps)
    # fix each face's global sign so that boundary(a(s)) = a(boundary s)
    for q in range(1, S.n + 1):
        for s in disk.basis(q):
            img = images[q][s]
            lhs = boundary(img)
            rhs = Chain(q - 1, {})
            for f, sign in simplex_boundary(s).items():
                rhs = rhs + sign * images[q - 1][f]
            if lhs == -rhs:
                images[q][s] = -img
            elif lhs != rhs:
                raise RuntimeError(f"no consistent orientation for face {s!r}")
    m = ChainMapTable(S.n, "disk", S.name, images)
    rep = verify_chain_map(m)
    if not rep.passed:
        raise RuntimeError(f"subdivision chain map failed verification: {rep.counterexample}")
    return m


# -- symmetric colorings -------------------------------------------------------

def rank_map(a, b) -> dict[int, int]:
    """Order-preserving bijection between two id sets of equal size."""
    a, b = sorted(a), sorted(b)
    if len(a) != len(b):
        raise ValueError("faces of different dimension")
    return dict(zip(a, b))


def _face_pairs(n: int):
    ids = range(n + 1)
    for size in range(1, n + 1):
        faces = list(combinations(ids, size))
        for a in faces:
            for b in faces:
                if a < b:
                    yield frozenset(a), frozenset(b)


def _vertices_on(S: SubdividedComplex, ids: frozenset[int]) -> list[Vertex]:
    return [v for v in S.vertices if vertex_carrier(v) == ids]


def verify_symmetric_coloring(S: SubdividedComplex, b: BinaryColoring) -> VerificationReport:
    checked = 0
    missing = [v for v in S.vertices if v not in b]
    if missing:
        return VerificationReport("symmetric", False, {"reason": "coloring is not total",
                                                       "vertex": S.index[missing[0]]}, 0)
    for A, B in _face_pairs(S.n):
        mu = rank_map(A, B)
        for v in _vertices_on(S, A):
            checked += 1
            w = act_vertex(mu, v)
            if w not in b:
                raise RuntimeError(f"rank bijection left the subdivision at {v!r}")
            if b[v] != b[w]:
                return VerificationReport("symmetric", False, {
                    "faces": [sorted(A), sorted(B)], "vertex": S.index[v], "image": S.index[w],
                    "bits": [b[v], b[w]]}, checked)
    return VerificationReport("symmetric", True, None, checked)


def symmetry_classes(S: SubdividedComplex) -> list[list[Vertex]]:
    """Vertex classes forced to share a bit by symmetry (union-find)."""
    parent = {v: v for v in S.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for A, B in _face_pairs(S.n):
        mu = rank_map(A, B)
        for v in _vertices_on(S, A):
            ra, rb = find(v), find(act_vertex(mu, v))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[Vertex, list[Vertex]] = {}
    for v in S.vertices:
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda g: S.index[g[0]])


def count_symmetric_colorings(S: SubdividedComplex) -> int:
    return 2 ** len(symmetry_classes(S))


def coloring_from_bits(classes: list[list[Vertex]], bits: int) -> dict[Vertex, int]:
    out = {}
    for k, cls in enumerate(classes):
        bit = (bits >> k) & 1
        for v in cls:
            out[v] = bit
    return out


def symmetric_colorings(S: SubdividedComplex) -> Iterator[dict[Vertex, int]]:
    classes = symmetry_classes(S)
    for bits in range(2 ** len(classes)):
        yield coloring_from_bits(classes, bits)


def random_symmetric_coloring(S: SubdividedComplex, rng: random.Random) -> dict[Vertex, int]:
    classes = symmetry_classes(S)
    return coloring_from_bits(classes, rng.getrandbits(len(classes)) if classes else 0)


def constant_coloring(S: SubdividedComplex, bit: int = 0) -> dict[Vertex, int]:
    return {v: bit for v in S.vertices}


def monochromatic_count(S: SubdividedComplex, b: BinaryColoring) -> int:
    return sum(1 for f in S.complex.facets if len({b[v] for v in f}) == 1)


def signed_monochromatic_count(S: SubdividedComplex, b: BinaryColoring) -> int:
    """Monochromatic facets counted with orientation.

    The image of the disk's top simplex carries coefficients a on 0^n and c
    on 1^n; the count is a + c * winding(boundary 1^n), which equals the
    winding of the boundary image.
    """
    n = S.n
    top = top_image(S, b)
    zero = tuple(Vertex(i, 0) for i in range(n + 1))
    one = tuple(Vertex(i, 1) for i in range(n + 1))
    return top.coeff(zero) + top.coeff(one) * winding(boundary(Chain(n, {one: 1})), n)


def wsb_decision_check(S: SubdividedComplex, b: BinaryColoring) -> dict:
    sym = verify_symmetric_coloring(S, b)
    count = monochromatic_count(S, b)
    return {"symmetric": sym.passed, "monochromatic": count,
            "decision": sym.passed and count == 0,
            "counterexample": sym.counterexample}


# -- colorings as chain maps ---------------------------------------------------

def coloring_chain_map(S: SubdividedComplex, b: BinaryColoring) -> ChainMapTable:
    """Disk -> output complex: subdivide, then send v to (id(v), b(v))."""
    sub = subdivision_chain_map(S)
    mu = induced_from_simplicial(lambda v: Vertex(v.color, b[v]), S.complex,
                                 build_output_complex(S.n), S.name, "output")
    return compose(mu, sub)


def boundary_restriction(m: ChainMapTable) -> ChainMapTable:
    """The part of a disk -> output map living on the disk boundary, viewed
    as a map into the annulus."""
    images = {q: dict(layer) for q, layer in m.images.items() if q < m.n}
    return ChainMapTable(m.n, "disk-boundary", "annulus", images)


def coloring_winding(S: SubdividedComplex, b: BinaryColoring) -> int:
    """Winding number in the annulus of the image of the disk boundary."""
    n = S.n
    if n < 1:
        raise ValueError("winding needs n >= 1")
    m = coloring_chain_map(S, b)
    top = next(iter(build_disk(n).facets))
    c = apply(m, boundary(Chain(n, {top: 1})))
    for s in c.terms:
        if len({v.label for v in s}) == 1 and len(s) == n + 1:
            raise RuntimeError("boundary image touches a monochromatic facet")
    return winding(c, n)


def top_image(S: SubdividedComplex, b: BinaryColoring) -> Chain:
    m = coloring_chain_map(S, b)
    return m.image(next(iter(build_disk(S.n).facets)))


# -- JSON ------------------------------------------------------------------------

def subdivision_to_json(S: SubdividedComplex) -> dict:
    verts = [{"id": v.color, "view": label_to_json(v.label), "carrier": sorted(vertex_carrier(v))}
             for v in S.vertices]
    facets = sorted(sorted(S.index[v] for v in f) for f in S.complex.facets)
    return {"n": S.n, "rounds": S.rounds, "vertices": verts, "facets": facets}


def subdivision_from_json(doc) -> SubdividedComplex:
    for key in ("n", "rounds", "vertices", "facets"):
        if key not in doc:
            raise ValueError(f"subdivision document is missing {key!r}")
    verts = [Vertex(v["id"], label_from_json(v["view"])) for v in doc["vertices"]]
    for v, d in zip(verts, doc["vertices"]):
        if sorted(vertex_carrier(v)) != d["carrier"]:
            raise ValueError(f"carrier mismatch for vertex {d!r}")
    facets = frozenset(canonical([verts[i] for i in f])[0] for f in doc["facets"])
    K = Complex(doc["n"], facets, f"chi^{doc['rounds']}(disk({doc['n']}))")
    return SubdividedComplex(doc["n"], doc["rounds"], K)


def coloring_to_json(S: SubdividedComplex, b: BinaryColoring) -> dict:
    return {"n": S.n, "rounds": S.rounds, "bits": [int(b[v]) for v in S.vertices]}


def coloring_from_json(doc, S: SubdividedComplex | None = None) -> tuple[SubdividedComplex, dict[Vertex, int]]:
    for key in ("n", "rounds", "bits"):
        if key not in doc:
            raise ValueError(f"coloring document is missing {key!r}")
    if S is None:
        S = chromatic_subdivide(doc["n"], doc["rounds"])
    bits = doc["bits"]
    if len(bits) != len(S.vertices) or any(x not in (0, 1) or isinstance(x, bool) for x in bits):
        raise ValueError(f"expected {len(S.vertices)} bits in {{0, 1}}")
    return S, dict(zip(S.vertices, bits))
