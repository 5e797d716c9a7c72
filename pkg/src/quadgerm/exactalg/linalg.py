"""Dense exact linear algebra over Q and Q(i).

Matrices are lists of row lists; vectors are plain lists. Entries may be any
exact field element (mpq or GaussianRational). Nothing here mutates inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .scalars import Q, to_scalar

__all__ = [
    "matrix", "zeros", "identity", "transpose", "mat_mul", "mat_vec", "mat_add",
    "mat_sub", "mat_scale", "is_zero_matrix", "rref", "rank", "nullspace",
    "solve_linear", "LinearSolution", "inverse", "Subspace", "subspace_calc",
    "hstack", "vstack", "kron",
]


def matrix(rows) -> list[list]:
    return [[to_scalar(x) for x in row] for row in rows]


def zeros(m: int, n: int) -> list[list]:
    z = Q(0)
    return [[z] * n for _ in range(m)]


def identity(n: int) -> list[list]:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Q(1)
    return out


def transpose(A):
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def mat_mul(A, B):
    if not A:
        return []
    if len(A[0]) != len(B):
        raise ValueError(f"shape mismatch {len(A)}x{len(A[0])} @ {len(B)}x?")
    if not B:
        return [[] for _ in A]
    Bt = list(zip(*B))
    out = []
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if a]
        out.append([sum((a * col[k] for k, a in nz), Q(0)) for col in Bt])
    return out


def mat_vec(A, v):
    if A and len(A[0]) != len(v):
        raise ValueError("shape mismatch in mat_vec")
    nz = [(k, a) for k, a in enumerate(v) if a]
    return [sum((row[k] * a for k, a in nz), Q(0)) for row in A]


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(c, A):
    return [[c * a for a in row] for row in A]


def is_zero_matrix(A) -> bool:
    return all(not x for row in A for x in row)


def hstack(*blocks):
    return [sum((list(b[i]) for b in blocks), []) for i in range(len(blocks[0]))]


def vstack(*blocks):
    return [list(r) for b in blocks for r in b]


def kron(A, B):
    return [[a * b for a in ra for b in rb] for ra in A for rb in B]


def rref(M, ncols: int | None = None):
    """Reduced row echelon form. Returns (rows, pivot_columns); zero rows dropped."""
    R = [[to_scalar(x) for x in r] for r in M]
    if ncols is None:
        ncols = len(R[0]) if R else 0
    pivots: list[int] = []
    row = 0
    nrows = len(R)
    for col in range(ncols):
        if row >= nrows:
            break
        piv = None
        for r in range(row, nrows):
            if R[r][col]:
                piv = r
                break
        if piv is None:
            continue
        R[row], R[piv] = R[piv], R[row]
        prow = R[row]
        inv = 1 / prow[col]
        if inv != 1:
            prow = [x * inv for x in prow]
            R[row] = prow
        nzc = [(c, x) for c, x in enumerate(prow) if x and c >= col]
        for r in range(nrows):
            if r != row:
                f = R[r][col]
                if f:
                    rr = R[r]
                    for c, x in nzc:
                        rr[c] = rr[c] - f * x
        pivots.append(col)
        row += 1
    return R[:row], pivots


def rank(M) -> int:
    return len(rref(M)[1])


def nullspace(M, ncols: int | None = None):
    """Basis of {x : M x = 0}; one vector per free column (free entry = 1)."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    R, piv = rref(M, ncols)
    pivset = set(piv)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Q(0)] * ncols
        v[free] = Q(1)
        for r, pc in enumerate(piv):
            v[pc] = -R[r][free]
        basis.append(v)
    return basis


@dataclass(frozen=True)
class LinearSolution:
    """Affine solution set particular + span(kernel)."""

    particular: list
    kernel: list


def solve_linear(M, b, ncols: int | None = None):
    """Solve M x = b. Returns LinearSolution, or None when inconsistent.

    Free variables of the particular solution are set to zero.
    """
    if len(M) != len(b):
        raise ValueError("dimension mismatch between matrix and right-hand side")
    if ncols is None:
        ncols = len(M[0]) if M else 0
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    R, piv = rref(aug, ncols + 1)
    if piv and piv[-1] == ncols:
        return None
    x = [Q(0)] * ncols
    for r, pc in enumerate(piv):
        x[pc] = R[r][ncols]
    return LinearSolution(x, nullspace(M, ncols))


def inverse(M):
    n = len(M)
    aug = [list(row) + [Q(1) if i == j else Q(0) for j in range(n)]
           for i, row in enumerate(M)]
    R, piv = rref(aug, n)
    if piv != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


class Subspace:
    """Subspace of F^n stored as its canonical reduced echelon basis."""

    __slots__ = ("n", "basis", "pivots")

    def __init__(self, n: int, vectors: Sequence[Sequence] = ()):
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != n:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {n}")
        basis, piv = rref(vecs, n) if vecs else ([], [])
        self.n = n
        self.basis = basis
        self.pivots = piv

    @classmethod
    def full(cls, n: int):
        return cls(n, identity(n))

    @classmethod
    def zero(cls, n: int):
        return cls(n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v):
        """Remainder of v modulo the subspace (zero at every pivot)."""
        r = list(v)
        for row, pc in zip(self.basis, self.pivots):
            f = r[pc]
            if f:
                r = [a - f * b for a, b in zip(r, row)]
        return r

    def contains(self, v) -> bool:
        return all(not x for x in self.reduce(v))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def coordinates(self, v):
        """Coordinates of v in the echelon basis; raises if v is outside."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return [v[pc] for pc in self.pivots]

    def complement_indices(self) -> list[int]:
        ps = set(self.pivots)
        return [j for j in range(self.n) if j not in ps]

    def __add__(self, other: "Subspace") -> "Subspace":
        _check_ambient(self, other)
        return Subspace(self.n, self.basis + other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        _check_ambient(self, other)
        if not self.basis or not other.basis:
            return Subspace(self.n)
        # a.U = b.V  <=>  [U; -V]^T (a, b) = 0
        k = self.dim
        stacked = self.basis + [[-x for x in row] for row in other.basis]
        ker = nullspace(transpose(stacked), len(stacked))
        vecs = []
        for sol in ker:
            a = sol[:k]
            vecs.append([sum((a[i] * self.basis[i][j] for i in range(k) if a[i]), Q(0))
                         for j in range(self.n)])
        return Subspace(self.n, vecs)

    def quotient_dim(self, other: "Subspace") -> int:
        """dim(self) - dim(self ∩ other)."""
        return self.dim - self.intersect(other).dim

    def image(self, A) -> "Subspace":
        """Image under the matrix A (acting on column vectors)."""
        return Subspace(len(A), [mat_vec(A, v) for v in self.basis])

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.n == other.n and self.pivots == other.pivots and self.basis == other.basis

    def __hash__(self):
        return hash((self.n, tuple(tuple(r) for r in self.basis)))

    def __repr__(self):
        return f"Subspace(n={self.n}, dim={self.dim})"


def preimage(A, S: Subspace, ncols: int) -> Subspace:
    """{x in F^ncols : A x in S}."""
    comp = S.complement_indices()
    if not A:
        return Subspace.full(ncols)
    # coordinates of A x in the complement of S after reduction must vanish
    cols = [S.reduce([row[j] for row in A]) for j in range(ncols)]
    M = [[cols[j][i] for j in range(ncols)] for i in comp]
    if not M:
        return Subspace.full(ncols)
    return Subspace(ncols, nullspace(M, ncols))


def kernel_subspace(A, ncols: int) -> Subspace:
    if not A:
        return Subspace.full(ncols)
    return Subspace(ncols, nullspace(A, ncols))


def image_subspace(A, nrows: int) -> Subspace:
    return Subspace(nrows, transpose(A) if A and A[0] else [])


def _check_ambient(U: Subspace, V: Subspace) -> None:
    if U.n != V.n:
        raise ValueError(f"ambient dimension mismatch: {U.n} vs {V.n}")


def subspace_calc(op: str, U: Subspace, V: Subspace):
    """Dispatch 'intersect', 'sum' or 'quotient_dim'."""
    _check_ambient(U, V)
    if op == "intersect":
        return U.intersect(V)
    if op == "sum":
        return U + V
    if op == "quotient_dim":
        return U.quotient_dim(V)
    raise ValueError(f"unknown subspace operation {op!r}")


__all__ += ["preimage", "kernel_subspace", "image_subspace"]
