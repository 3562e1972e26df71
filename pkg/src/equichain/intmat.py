"""Exact integer matrices: Smith normal form with transforms, and solving
``A x = b`` over the integers.

Matrices are lists of lists of Python ints.  The pivot rule is fixed
(smallest non-zero magnitude, ties broken by row then column) so that
particular solutions are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass


def identity(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def matmul(A, B):
    if not A:
        return []
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [0] * cols
        for a, brow in zip(row, B):
            if a:
                for j, b in enumerate(brow):
                    if b:
                        acc[j] += a * b
        out.append(acc)
    return out


def matvec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def transpose(A, ncols: int | None = None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


@dataclass
class SmithData:
    """``U @ A @ V == D`` with U, V unimodular and D diagonal.

    ``factors`` holds the non-zero diagonal entries d_1 | d_2 | ... (all
    positive), so ``rank == len(factors)``.
    """

    U: list[list[int]]
    V: list[list[int]]
    D: list[list[int]]
    factors: list[int]
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.factors if d > 1]


def _pick(A, t, rows, cols):
    best = None
    for i in rows:
        row = A[i]
        for j in cols:
            a = row[j]
            if a and (best is None or abs(a) < best[0]):
                best = (abs(a), i, j)
                if best[0] == 1:
                    return best
    return best


def smith_normal_form(A: list[list[int]], ncols: int | None = None) -> SmithData:
    m = len(A)
    n = len(A[0]) if A else (ncols or 0)
    A = [list(r) for r in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        if k:
            ra, rs = A[dst], A[src]
            for j in range(n):
                if rs[j]:
                    ra[j] += k * rs[j]
            ua, us = U[dst], U[src]
            for j in range(m):
                if us[j]:
                    ua[j] += k * us[j]

    def add_col(dst, src, k):  # col_dst += k * col_src
        if k:
            for row in A:
                if row[src]:
                    row[dst] += k * row[src]
            for row in V:
                if row[src]:
                    row[dst] += k * row[src]

    factors: list[int] = []
    t = 0
    while t < min(m, n):
        found = _pick(A, t, range(t, m), range(t, n))
        if found is None:
            break
        _, i, j = found
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                # a remainder survived; bring the smallest one to the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-u for u in U[t]]
        factors.append(A[t][t])
        t += 1
    return SmithData(U, V, A, factors, (m, n))


@dataclass
class Solution:
    """Outcome of an integer linear solve.

    On failure ``certificate`` is an integer row vector y and ``modulus`` is
    an integer d such that y A == 0 (mod d) entrywise while y b != 0 (mod d).
    ``modulus == 0`` means y A == 0 exactly (rational infeasibility).
    """

    feasible: bool
    x: list[int] | None = None
    kernel: list[list[int]] | None = None
    certificate: list[int] | None = None
    modulus: int | None = None


def solve(A: list[list[int]], b: list[int], ncols: int | None = None,
          snf: SmithData | None = None) -> Solution:
    if snf is None:
        snf = smith_normal_form(A, ncols)
    m, n = snf.shape
    if len(b) != m:
        raise ValueError("right-hand side has the wrong length")
    y = matvec(snf.U, b)
    z = [0] * n
    for i, d in enumerate(snf.factors):
        if y[i] % d:
            return Solution(False, certificate=list(snf.U[i]), modulus=d)
        z[i] = y[i] // d
    for i in range(snf.rank, m):
        if y[i]:
            return Solution(False, certificate=list(snf.U[i]), modulus=0)
    x = matvec(snf.V, z)
    kernel = [[row[j] for row in snf.V] for j in range(snf.rank, n)]
    return Solution(True, x=x, kernel=kernel)


def kernel_basis(A: list[list[int]], ncols: int | None = None) -> list[list[int]]:
    snf = smith_normal_form(A, ncols)
    n = snf.shape[1]
    return [[row[j] for row in snf.V] for j in range(snf.rank, n)]


def check_certificate(A, b, y, modulus) -> bool:
    """True when (y, modulus) proves ``A x = b`` has no integer solution."""
    ncols = len(A[0]) if A else 0
    yA = [sum(y[i] * A[i][j] for i in range(len(A))) for j in range(ncols)]
    yb = sum(a * c for a, c in zip(y, b))
    if modulus == 0:
        return all(v == 0 for v in yA) and yb != 0
    return all(v % modulus == 0 for v in yA) and yb % modulus != 0
