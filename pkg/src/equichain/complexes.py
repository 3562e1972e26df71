"""Chromatic simplicial complexes: the disk, the binary annulus, the output
complex and the color spheres sitting inside the annulus.

A vertex is a ``(color, label)`` pair.  A simplex is stored canonically as a
tuple of vertices sorted by color; since every simplex is properly colored the
sort is total and the canonical form is unique.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Iterable, NamedTuple, Union

# Placeholder label carried by the vertices of the disk.
UNIT = "*"


class Vertex(NamedTuple):
    color: int
    label: "Label"


@dataclass(frozen=True, order=True)
class View:
    """Full-information view: the previous-round vertices a process saw."""

    seen: tuple[Vertex, ...]

    @cached_property
    def carrier(self) -> frozenset[int]:
        out: set[int] = set()
        for u in self.seen:
            out |= vertex_carrier(u)
        return frozenset(out)


Label = Union[int, str, View]
Simplex = tuple[Vertex, ...]


def vertex_carrier(v: Vertex) -> frozenset[int]:
    if isinstance(v.label, View):
        return v.label.carrier
    return frozenset((v.color,))


def colors(s: Iterable[Vertex]) -> frozenset[int]:
    return frozenset(v.color for v in s)


def permutation_sign(perm: list[int]) -> int:
    """Sign of a permutation given as a list of images, by cycle counting."""
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def canonical(vertices: Iterable[Vertex]) -> tuple[Simplex, int]:
    """Sort an oriented vertex sequence by color.

    Returns the canonical simplex and the parity (+1/-1) of the reordering.
    Raises ValueError on an improperly colored sequence.
    """
    seq = list(vertices)
    if not seq:
        raise ValueError("empty simplex")
    order = sorted(range(len(seq)), key=lambda k: seq[k].color)
    out = tuple(seq[k] for k in order)
    for a, b in zip(out, out[1:]):
        if a.color == b.color:
            raise ValueError(f"simplex is not properly colored: {seq!r}")
    return out, permutation_sign(order)


def faces(s: Simplex) -> Iterable[Simplex]:
    """All non-empty subsets of ``s``, canonical."""
    for k in range(1, len(s) + 1):
        yield from combinations(s, k)


@dataclass(frozen=True)
class Complex:
    """A finite chromatic complex, kept as its set of facets."""

    n: int
    facets: frozenset[Simplex]
    name: str = ""

    def __post_init__(self):
        for f in self.facets:
            canon, _ = canonical(f)
            if canon != f:
                raise ValueError(f"facet not in canonical order: {f!r}")
            for v in f:
                if not 0 <= v.color <= self.n:
                    raise ValueError(f"color {v.color} outside [0, {self.n}]")

    @classmethod
    def from_simplices(cls, n: int, simplices: Iterable[Iterable[Vertex]], name: str = "") -> "Complex":
        gens = {canonical(s)[0] for s in simplices}
        maximal = set()
        by_size = sorted(gens, key=len, reverse=True)
        for s in by_size:
            ss = set(s)
            if not any(len(m) > len(s) and ss <= set(m) for m in maximal):
                maximal.add(s)
        return cls(n, frozenset(maximal), name)

    @cached_property
    def simplex_set(self) -> frozenset[Simplex]:
        out: set[Simplex] = set()
        for f in self.facets:
            out.update(faces(f))
        return frozenset(out)

    @cached_property
    def _bases(self) -> dict[int, list[Simplex]]:
        out: dict[int, list[Simplex]] = {}
        for s in self.simplex_set:
            out.setdefault(len(s) - 1, []).append(s)
        return {q: sorted(v) for q, v in out.items()}

    @property
    def dim(self) -> int:
        return max((len(f) - 1 for f in self.facets), default=-1)

    def basis(self, q: int) -> list[Simplex]:
        """Canonical q-simplexes in sorted order; ``[()]`` for q = -1."""
        if q == -1:
            return [()] if self.facets else []
        return self._bases.get(q, [])

    def __contains__(self, s) -> bool:
        try:
            canon, _ = canonical(s)
        except ValueError:
            return False
        return canon in self.simplex_set

    def __len__(self) -> int:
        return len(self.simplex_set)

    def census(self) -> list[int]:
        return [len(self.basis(q)) for q in range(self.dim + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** q * c for q, c in enumerate(self.census()))

    @cached_property
    def vertices(self) -> list[Vertex]:
        return [s[0] for s in self.basis(0)]

    def __repr__(self) -> str:
        return f"Complex({self.name or '?'}, n={self.n}, census={self.census()})"


def _binary_simplices(cols: tuple[int, ...]) -> list[Simplex]:
    return [tuple(Vertex(c, b) for c, b in zip(cols, bits))
            for bits in product((0, 1), repeat=len(cols))]


@lru_cache(maxsize=None)
def build_disk(n: int) -> Complex:
    if n < 0:
        raise ValueError("n must be >= 0")
    facet = tuple(Vertex(c, UNIT) for c in range(n + 1))
    return Complex(n, frozenset([facet]), f"disk({n})")


@lru_cache(maxsize=None)
def build_annulus(n: int) -> Complex:
    # the annulus needs at least two colors to have a non-monochromatic facet
    if n < 1:
        raise ValueError("the annulus is defined for n >= 1")
    top = [s for s in _binary_simplices(tuple(range(n + 1)))
           if len({v.label for v in s}) == 2]
    return Complex(n, frozenset(top), f"annulus({n})")


@lru_cache(maxsize=None)
def build_output_complex(n: int) -> Complex:
    if n < 0:
        raise ValueError("n must be >= 0")
    return Complex(n, frozenset(_binary_simplices(tuple(range(n + 1)))), f"output({n})")


def build_sphere(cols: Iterable[int], n: int | None = None) -> Complex:
    """Subcomplex of the annulus of all binary simplexes colored by ``cols``.

    For fewer than n+1 colors this is the boundary of a cross-polytope, a
    q-sphere.  ``n`` defaults to the smallest ambient dimension in which the
    colors do not exhaust [n].
    """
    cols = tuple(cols)
    if len(set(cols)) != len(cols):
        raise ValueError(f"duplicate colors in {cols!r}")
    if not cols:
        raise ValueError("need at least one color")
    if n is None:
        n = max(max(cols), len(cols))
    if len(cols) > n + 1 or min(cols) < 0 or max(cols) > n:
        raise ValueError(f"colors {cols!r} do not fit in [0, {n}]")
    tops = _binary_simplices(tuple(sorted(cols)))
    if len(cols) == n + 1:
        tops = [s for s in tops if len({v.label for v in s}) == 2]
    name = "sphere(" + ",".join(map(str, sorted(cols))) + f";{n})"
    return Complex(n, frozenset(tops), name)


def skeleton(K: Complex, i: int) -> Complex:
    if i < 0:
        raise ValueError("skeleton index must be >= 0")
    if i >= K.dim:
        return K
    facets = {f for f in K.facets if len(f) - 1 <= i} | set(K.basis(i))
    return Complex(K.n, frozenset(facets), f"sk{i}({K.name})")


def boundary_complex(s: Simplex, n: int | None = None) -> Complex:
    s, _ = canonical(s)
    if len(s) < 2:
        raise ValueError("a vertex has no boundary complex; use chains instead")
    if n is None:
        n = max(v.color for v in s)
    return Complex(n, frozenset(combinations(s, len(s) - 1)), "bd")


@lru_cache(maxsize=None)
def build_disk_boundary(n: int) -> Complex:
    if n < 1:
        raise ValueError("the disk boundary is defined for n >= 1")
    K = boundary_complex(next(iter(build_disk(n).facets)), n)
    return Complex(n, K.facets, f"disk-boundary({n})")


# -- JSON documents -------------------------------------------------------

def label_to_json(label: Label):
    if isinstance(label, View):
        return [vertex_to_json(u) for u in label.seen]
    return label


def label_from_json(obj) -> Label:
    if isinstance(obj, list):
        return View(tuple(sorted(vertex_from_json(u) for u in obj)))
    if isinstance(obj, bool) or not isinstance(obj, (int, str)):
        raise ValueError(f"bad vertex label {obj!r}")
    return obj


def vertex_to_json(v: Vertex) -> dict:
    return {"color": v.color, "label": label_to_json(v.label)}


def vertex_from_json(obj) -> Vertex:
    if not isinstance(obj, dict) or set(obj) != {"color", "label"}:
        raise ValueError(f"bad vertex document {obj!r}")
    if not isinstance(obj["color"], int) or isinstance(obj["color"], bool):
        raise ValueError(f"bad color {obj['color']!r}")
    return Vertex(obj["color"], label_from_json(obj["label"]))


def simplex_to_json(s: Simplex) -> list:
    return [vertex_to_json(v) for v in s]


def complex_to_json(K: Complex) -> dict:
    return {"n": K.n, "facets": [simplex_to_json(f) for f in sorted(K.facets)]}


def complex_from_json(doc) -> Complex:
    if not isinstance(doc, dict) or "n" not in doc or "facets" not in doc:
        raise ValueError("complex document needs 'n' and 'facets'")
    facets = [[vertex_from_json(v) for v in f] for f in doc["facets"]]
    return Complex.from_simplices(doc["n"], facets)
