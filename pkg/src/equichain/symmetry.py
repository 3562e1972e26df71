"""The symmetric group on process ids and its action on vertices, oriented
simplexes and chains.

Colors are permuted and labels ride along; view labels are relabeled
recursively, so the same action covers the disk, the binary complexes and
iterated chromatic subdivisions.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Iterable, Mapping, Union

from .chains import Chain
from .complexes import Simplex, Vertex, View, canonical, permutation_sign


@dataclass(frozen=True)
class Perm:
    """Permutation of [n]; ``images[i]`` is the image of i."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images!r}")

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n + 1)))

    @classmethod
    def transposition(cls, i: int, j: int, n: int) -> "Perm":
        im = list(range(n + 1))
        im[i], im[j] = im[j], im[i]
        return cls(tuple(im))

    @property
    def n(self) -> int:
        return len(self.images) - 1

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm") -> "Perm":
        # (g * h)(i) = g(h(i))
        return Perm(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    @property
    def sign(self) -> int:
        return permutation_sign(list(self.images))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def __repr__(self):
        return f"Perm{list(self.images)}"


Relabel = Union[Perm, Mapping[int, int], Callable[[int], int]]


def _as_func(g: Relabel) -> Callable[[int], int]:
    if isinstance(g, Mapping):
        return g.__getitem__
    return g


def act_vertex(g: Relabel, v: Vertex) -> Vertex:
    f = _as_func(g)
    label = v.label
    if isinstance(label, View):
        label = View(tuple(sorted(act_vertex(f, u) for u in label.seen)))
    return Vertex(f(v.color), label)


def act_simplex(g: Relabel, s: Iterable[Vertex]) -> tuple[Simplex, int]:
    """Image of an oriented simplex: canonical form and orientation sign."""
    f = _as_func(g)
    return canonical(act_vertex(f, v) for v in s)


def act_chain(g: Relabel, c: Chain) -> Chain:
    if c.q == -1:
        return c
    f = _as_func(g)
    out = {}
    for s, k in c.terms.items():
        t, sign = act_simplex(f, s)
        out[t] = out.get(t, 0) + sign * k
    return Chain(c.q, out)


def pi_m_i(m: int, i: int, n: int | None = None) -> Perm:
    """The cycle i -> i+1 -> ... -> m -> i on [n], fixing everything else.

    It carries {0..m-1} onto {0..m} minus {i} preserving order.
    """
    if n is None:
        n = m
    if not 0 <= i <= m <= n:
        raise ValueError(f"need 0 <= i <= m <= n, got i={i}, m={m}, n={n}")
    im = list(range(n + 1))
    for k in range(i, m):
        im[k] = k + 1
    im[m] = i
    return Perm(tuple(im))


def order_preserving_transport(cols: Iterable[int], n: int) -> Perm:
    """Product of ``pi_m_i`` permutations carrying 0..q onto ``cols`` in order."""
    cols = sorted(cols)
    q = len(cols) - 1
    missing = [c for c in range(n + 1) if c not in cols]
    g = Perm.identity(n)
    for step, t in enumerate(missing):
        g = pi_m_i(q + 1 + step, t, n) * g
    assert [g(k) for k in range(q + 1)] == cols
    return g


def generators(n: int) -> list[Perm]:
    """Adjacent transpositions (i, i+1) of [n]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [Perm.transposition(i, i + 1, n) for i in range(n)]


def full_group(n: int) -> list[Perm]:
    return [Perm(p) for p in permutations(range(n + 1))]


def closure(gens: list[Perm]) -> set[Perm]:
    """Subgroup generated by ``gens`` (breadth-first)."""
    if not gens:
        return set()
    e = Perm.identity(gens[0].n)
    seen = {e}
    todo = deque([e])
    while todo:
        h = todo.popleft()
        for g in gens:
            k = g * h
            if k not in seen:
                seen.add(k)
                todo.append(k)
    return seen


def factor_into_generators(g: Perm) -> list[int]:
    """Indices i of adjacent transpositions whose product (left to right) is g.

    Bubble sort on the images; the returned word w satisfies
    ``s_{w[0]} * s_{w[1]} * ... == g``.
    """
    arr = list(g.images)
    word = []
    changed = True
    while changed:
        changed = False
        for i in range(len(arr) - 1):
            if arr[i] > arr[i + 1]:
                arr[i], arr[i + 1] = arr[i + 1], arr[i]
                word.append(i)
                changed = True
    # arr = g * s_{w0} * s_{w1} ... sorted => g = s_{wk} ... s_{w0}
    return word[::-1]


def orbit(x: Union[Chain, Simplex], n: int) -> set:
    """S_n-orbit of a simplex (unsigned, canonical) or of a chain."""
    group = closure(generators(n)) if n >= 1 else {Perm.identity(0)}
    if isinstance(x, Chain):
        return {act_chain(g, x) for g in group}
    return {act_simplex(g, x)[0] for g in group}


def perm_to_json(g: Perm) -> list[int]:
    return list(g.images)


def perm_from_json(obj) -> Perm:
    if not isinstance(obj, list) or not all(isinstance(i, int) for i in obj):
        raise ValueError(f"bad permutation document {obj!r}")
    return Perm(tuple(obj))
