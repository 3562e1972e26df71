"""Integer chains with augmentation, the boundary operator, and exact
homological decisions (cycles, boundaries, fillings, reduced homology,
winding numbers in the annulus).

Degree -1 is the augmented group Z, modelled as chains on the single empty
simplex ``()``; the boundary of a vertex is then ``+1 * ()``.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping

from . import intmat
from .complexes import (Complex, Simplex, Vertex, build_annulus, build_sphere,
                        canonical, simplex_to_json, vertex_from_json)


class Chain:
    """A q-chain: sparse map from canonical q-simplexes to non-zero ints."""

    __slots__ = ("q", "terms", "_hash")

    def __init__(self, q: int, terms: Mapping[Simplex, int] | None = None):
        self.q = q
        clean = {}
        for s, c in (terms or {}).items():
            if c:
                if len(s) != q + 1:
                    raise ValueError(f"simplex {s!r} has the wrong dimension for a {q}-chain")
                clean[s] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def simplex(cls, vertices: Iterable[Vertex], coeff: int = 1) -> "Chain":
        """Chain of one oriented simplex given in any vertex order."""
        s, sign = canonical(vertices)
        return cls(len(s) - 1, {s: sign * coeff})

    @classmethod
    def integer(cls, value: int) -> "Chain":
        return cls(-1, {(): value})

    @classmethod
    def zero(cls, q: int) -> "Chain":
        return cls(q)

    @property
    def value(self) -> int:
        """The integer of a degree -1 chain."""
        if self.q != -1:
            raise ValueError("only degree -1 chains carry a bare integer")
        return self.terms.get((), 0)

    def coeff(self, s: Simplex) -> int:
        return self.terms.get(s, 0)

    def support(self) -> list[Simplex]:
        return sorted(self.terms)

    def _combine(self, other: "Chain", k: int) -> "Chain":
        if not isinstance(other, Chain):
            return NotImplemented
        if other.q != self.q and self.terms and other.terms:
            raise ValueError(f"cannot add chains of degree {self.q} and {other.q}")
        q = self.q if self.terms else other.q
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, 0) + k * c
        return Chain(q, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Chain(self.q, {s: -c for s, c in self.terms.items()})

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return Chain(self.q, {s: k * c for s, c in self.terms.items()})

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.q == other.q and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.q, frozenset(self.terms.items())) if self.terms else 0)
        return self._hash

    def __repr__(self):
        if not self.terms:
            return f"Chain({self.q}, 0)"
        parts = []
        for s in self.support():
            body = " ".join(f"{v.color}:{v.label}" if not isinstance(v.label, str) else str(v.color)
                            for v in s)
            parts.append(f"{self.terms[s]:+d}<{body}>")
        return f"Chain({self.q}, {' '.join(parts)})"


def chain_sum(chains: Iterable[Chain], q: int) -> Chain:
    out: dict[Simplex, int] = {}
    for c in chains:
        if c.terms and c.q != q:
            raise ValueError(f"expected degree {q}, got {c.q}")
        for s, k in c.terms.items():
            out[s] = out.get(s, 0) + k
    return Chain(q, out)


def simplex_boundary(s: Simplex) -> dict[Simplex, int]:
    return {s[:j] + s[j + 1:]: (-1) ** j for j in range(len(s))}


def boundary(c: Chain) -> Chain:
    if c.q < 0:
        raise ValueError("degree -1 chains have no boundary")
    out: dict[Simplex, int] = {}
    for s, k in c.terms.items():
        for f, sign in simplex_boundary(s).items():
            out[f] = out.get(f, 0) + sign * k
    return Chain(c.q - 1, out)


def augmentation(c: Chain) -> int:
    if c.q != 0:
        raise ValueError("augmentation is defined on 0-chains")
    return sum(c.terms.values())


def is_cycle(c: Chain) -> bool:
    if c.q < 0:
        return True
    return not boundary(c)


def supported_on(c: Chain, K: Complex) -> bool:
    if c.q == -1:
        return True
    return all(s in K.simplex_set for s in c.terms)


# -- matrices --------------------------------------------------------------

@lru_cache(maxsize=256)
def boundary_matrix(K: Complex, q: int) -> list[list[int]]:
    """Matrix of the augmented boundary C_q(K) -> C_{q-1}(K).

    Rows follow ``K.basis(q-1)``, columns ``K.basis(q)``.
    """
    rows = K.basis(q - 1)
    cols = K.basis(q)
    index = {s: i for i, s in enumerate(rows)}
    M = [[0] * len(cols) for _ in rows]
    for j, s in enumerate(cols):
        for f, sign in simplex_boundary(s).items():
            M[index[f]][j] += sign
    return M


@lru_cache(maxsize=256)
def boundary_snf(K: Complex, q: int) -> intmat.SmithData:
    return intmat.smith_normal_form(boundary_matrix(K, q), len(K.basis(q)))


def to_vector(c: Chain, K: Complex) -> list[int]:
    index = {s: i for i, s in enumerate(K.basis(c.q))}
    v = [0] * len(index)
    for s, k in c.terms.items():
        if s not in index:
            raise ValueError(f"simplex {s!r} is not in {K.name or 'the complex'}")
        v[index[s]] = k
    return v


def from_vector(v: list[int], K: Complex, q: int) -> Chain:
    return Chain(q, dict(zip(K.basis(q), v)))


def is_boundary(c: Chain, K: Complex) -> tuple[bool, Chain | None]:
    """Decide whether ``c`` bounds in K; on success also return a witness."""
    if not supported_on(c, K):
        raise ValueError("chain is not supported on the complex")
    q = c.q
    if not c:
        return True, Chain.zero(q + 1)
    if q + 1 > K.dim:
        return False, None
    sol = intmat.solve(boundary_matrix(K, q + 1), to_vector(c, K),
                       snf=boundary_snf(K, q + 1))
    if not sol.feasible:
        return False, None
    beta = from_vector(sol.x, K, q + 1)
    if boundary(beta) != c:
        raise AssertionError("boundary witness failed re-application")
    return True, beta


def fill_cycle(K: Complex, c: Chain) -> Chain | None:
    """A chain whose boundary is the cycle ``c``, or None if none exists."""
    if not is_cycle(c):
        raise ValueError("fill_cycle needs a cycle")
    ok, beta = is_boundary(c, K)
    return beta if ok else None


def cycle_basis(K: Complex, q: int) -> list[Chain]:
    """A Z-basis of the reduced q-cycles of K."""
    ker = intmat.kernel_basis(boundary_matrix(K, q), len(K.basis(q)))
    return [from_vector(v, K, q) for v in ker]


def reduced_betti(K: Complex, q: int) -> tuple[int, list[int]]:
    """Rank and torsion coefficients of reduced integral homology in degree q."""
    nq = len(K.basis(q))
    rank_out = boundary_snf(K, q).rank if nq else 0
    if q + 1 <= K.dim:
        snf_in = boundary_snf(K, q + 1)
        rank_in, torsion = snf_in.rank, snf_in.torsion
    else:
        rank_in, torsion = 0, []
    return nq - rank_out - rank_in, torsion


# -- annulus classes -------------------------------------------------------

def distinguished_cycle(n: int) -> Chain:
    """Alternating sum of the all-0 (n-1)-simplexes of the annulus."""
    if n < 1:
        raise ValueError("n must be >= 1")
    zero = [Vertex(c, 0) for c in range(n + 1)]
    return Chain(n - 1, {tuple(zero[:i] + zero[i + 1:]): (-1) ** i for i in range(n + 1)})


def oriented_sphere_cycle(i: int, n: int) -> Chain:
    """Fundamental cycle of the color sphere on [n] minus {i}.

    Orientation is pinned by giving the all-0 simplex coefficient +1; the
    other simplexes then carry (-1)^(number of 1 labels).
    """
    if not 0 <= i <= n:
        raise ValueError("need 0 <= i <= n")
    cols = [c for c in range(n + 1) if c != i]
    S = build_sphere(cols, n)
    top = S.basis(n - 1)
    return Chain(n - 1, {s: (-1) ** sum(v.label for v in s) for s in top})


class WindingError(RuntimeError):
    pass


@lru_cache(maxsize=None)
def annulus_generator_check(n: int) -> intmat.SmithData:
    """Verify that reduced H_{n-1} of the annulus is Z generated by the
    distinguished cycle; return the SNF of ``[boundary_n | cycle]``."""
    A = build_annulus(n)
    rank, torsion = reduced_betti(A, n - 1)
    if rank != 1 or torsion:
        raise WindingError(f"reduced H_{n - 1}(annulus({n})) is not Z: rank {rank}, torsion {torsion}")
    d = to_vector(distinguished_cycle(n), A)
    B = boundary_matrix(A, n)
    M = [row + [d[i]] for i, row in enumerate(B)]
    snf = intmat.smith_normal_form(M, len(A.basis(n)) + 1)
    nz = len(A.basis(n - 1)) - boundary_snf(A, n - 1).rank
    # image of [B | d] must be the full (saturated) cycle lattice
    if snf.rank != nz or snf.torsion:
        raise WindingError(f"distinguished cycle does not generate H_{n - 1}(annulus({n}))")
    return snf


def winding(c: Chain, n: int) -> int:
    """The integer m with ``c - m * distinguished_cycle(n)`` a boundary."""
    if c.terms and c.q != n - 1:
        raise ValueError(f"expected an {n - 1}-chain")
    c = Chain(n - 1, c.terms)
    if not is_cycle(c):
        raise ValueError("winding is defined on cycles")
    A = build_annulus(n)
    snf = annulus_generator_check(n)
    sol = intmat.solve(None, to_vector(c, A), snf=snf)
    if not sol.feasible:
        raise WindingError("cycle is not homologous to a multiple of the generator")
    return sol.x[-1]


def homologous(a: Chain, b: Chain, K: Complex) -> bool:
    return is_boundary(a - b, K)[0]


# -- JSON ------------------------------------------------------------------

def chain_to_json(c: Chain) -> dict:
    return {"q": c.q, "terms": [{"simplex": simplex_to_json(s), "coeff": c.terms[s]}
                                for s in c.support()]}


def chain_from_json(doc) -> Chain:
    if not isinstance(doc, dict) or "q" not in doc or "terms" not in doc:
        raise ValueError("chain document needs 'q' and 'terms'")
    q = doc["q"]
    out: dict[Simplex, int] = {}
    for t in doc["terms"]:
        coeff = t["coeff"]
        if not isinstance(coeff, int) or isinstance(coeff, bool):
            raise ValueError(f"bad coefficient {coeff!r}")
        verts = [vertex_from_json(v) for v in t["simplex"]]
        if len(verts) != q + 1:
            raise ValueError(f"simplex of size {len(verts)} in a {q}-chain")
        if verts:
            s, sign = canonical(verts)
        else:
            s, sign = (), 1
        out[s] = out.get(s, 0) + sign * coeff
    return Chain(q, out)


__all__ = [
    "Chain", "WindingError", "annulus_generator_check", "augmentation", "boundary",
    "boundary_matrix", "chain_from_json", "chain_sum", "chain_to_json", "cycle_basis",
    "distinguished_cycle", "fill_cycle", "from_vector", "homologous", "is_boundary",
    "is_cycle", "oriented_sphere_cycle", "reduced_betti",
    "simplex_boundary", "supported_on", "to_vector", "winding",
]
