"""Truncated polynomial algebras k[t_1..t_s]/m^c and matrices over them.

Monomials are exponent tuples ordered degree-lexicographically; an element is a
dense coefficient tuple in that order.  ``ArtinMatrix`` stores a matrix over the
algebra as one scalar block per monomial, which keeps the group-word products in
the deformation code cheap.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, factorial

from .scalars import Q, scalar_str, to_scalar

__all__ = ["ArtinAlgebra", "ArtinElement", "ArtinMatrix", "artin_mul",
           "matrix_exp_truncated", "matrix_log_truncated", "algebra_hom"]


def _monomials(nvars: int, order: int) -> list[tuple[int, ...]]:
    out = []
    for deg in range(order):
        layer = []
        for combo in combinations_with_replacement(range(nvars), deg):
            e = [0] * nvars
            for v in combo:
                e[v] += 1
            layer.append(tuple(e))
        layer.sort(reverse=True)
        out.extend(layer)
    return out


class ArtinAlgebra:
    """k[t_1..t_s]/m^c with k = Q (or Q(i) via coefficients)."""

    def __new__(cls, nvars: int = 1, order: int = 2, names=None):
        if names is None:
            names = ("t",) if nvars == 1 else tuple(f"t{i + 1}" for i in range(nvars))
        return _make_algebra(nvars, order, tuple(names))

    @classmethod
    def _build(cls, nvars, order, names):
        if nvars < 1 or order < 1:
            raise ValueError("need at least one variable and order >= 1")
        self = object.__new__(cls)
        self.nvars = nvars
        self.order = order
        if len(names) != nvars:
            raise ValueError("one name per variable")
        self.names = names
        self.monomials = _monomials(nvars, order)
        self.index = {m: i for i, m in enumerate(self.monomials)}
        self.degrees = [sum(m) for m in self.monomials]
        table = []
        for i, a in enumerate(self.monomials):
            for j, b in enumerate(self.monomials):
                if self.degrees[i] + self.degrees[j] < order:
                    table.append((i, j, self.index[tuple(x + y for x, y in zip(a, b))]))
        self.mul_table = tuple(table)
        self.by_degree = [[i for i, d in enumerate(self.degrees) if d == k] for k in range(order)]
        return self

    @property
    def dim(self) -> int:
        return len(self.monomials)

    def __init__(self, *args, **kwargs):
        pass

    def __repr__(self):
        gens = ",".join(self.names)
        return f"Q[{gens}]/m^{self.order}"

    def __reduce__(self):
        return (ArtinAlgebra, (self.nvars, self.order, self.names))

    def element(self, coeffs=None) -> "ArtinElement":
        """Build from {exponent tuple: coeff} (or a dense sequence); drops degree >= c."""
        vals = [Q(0)] * self.dim
        if coeffs is None:
            pass
        elif isinstance(coeffs, dict):
            for mono, c in coeffs.items():
                if isinstance(mono, int):
                    mono = (mono,) if self.nvars == 1 else None
                if mono is None or len(mono) != self.nvars:
                    raise ValueError(f"bad exponent {mono!r} for {self!r}")
                if sum(mono) < self.order:
                    vals[self.index[tuple(mono)]] += to_scalar(c)
        else:
            seq = list(coeffs)
            if self.nvars == 1:
                for k, c in enumerate(seq[: self.order]):
                    vals[k] = to_scalar(c)
            else:
                if len(seq) != self.dim:
                    raise ValueError("dense coefficient list must match the algebra dimension")
                vals = [to_scalar(c) for c in seq]
        return ArtinElement(self, tuple(vals))

    def scalar(self, c) -> "ArtinElement":
        vals = [Q(0)] * self.dim
        vals[0] = to_scalar(c)
        return ArtinElement(self, tuple(vals))

    def zero(self):
        return self.scalar(0)

    def one(self):
        return self.scalar(1)

    def gen(self, k: int = 0) -> "ArtinElement":
        e = [0] * self.nvars
        e[k] = 1
        return self.element({tuple(e): 1})

    def basis_count(self) -> int:
        """Number of exponent tuples of total degree < c (binomial count)."""
        return comb(self.nvars + self.order - 1, self.nvars)


@lru_cache(maxsize=None)
def _make_algebra(nvars, order, names):
    return ArtinAlgebra._build(nvars, order, names)


class ArtinElement:
    __slots__ = ("alg", "coeffs")

    def __init__(self, alg: ArtinAlgebra, coeffs: tuple):
        self.alg = alg
        self.coeffs = coeffs

    def _same(self, other):
        if isinstance(other, ArtinElement):
            if other.alg is not self.alg:
                raise ValueError(f"elements of different algebras: {self.alg!r} vs {other.alg!r}")
            return other
        return self.alg.scalar(other)

    def __add__(self, other):
        try:
            o = self._same(other)
        except TypeError:
            return NotImplemented
        return ArtinElement(self.alg, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = self._same(other)
        except TypeError:
            return NotImplemented
        return ArtinElement(self.alg, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return ArtinElement(self.alg, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, ArtinElement):
            try:
                c = to_scalar(other)
            except TypeError:
                return NotImplemented
            return ArtinElement(self.alg, tuple(c * a for a in self.coeffs))
        return artin_mul(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, ArtinElement):
            raise TypeError("division by algebra elements is not supported")
        c = 1 / to_scalar(other)
        return self * c

    def __pow__(self, n: int):
        out = self.alg.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, ArtinElement):
            return self.alg is other.alg and self.coeffs == other.coeffs
        try:
            return self == self.alg.scalar(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((id(self.alg), self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    @property
    def constant(self):
        return self.coeffs[0]

    def in_maximal_ideal(self) -> bool:
        return not self.coeffs[0]

    def valuation(self) -> int | None:
        """Lowest degree carrying a nonzero coefficient (None for 0)."""
        for c, d in zip(self.coeffs, self.alg.degrees):
            if c:
                return d
        return None

    def coefficient(self, mono) -> object:
        if isinstance(mono, int):
            mono = (mono,)
        if sum(mono) >= self.alg.order:
            return Q(0)
        return self.coeffs[self.alg.index[tuple(mono)]]

    def as_dict(self) -> dict:
        return {m: c for m, c in zip(self.alg.monomials, self.coeffs) if c}

    def __repr__(self):
        terms = []
        for m, c in zip(self.alg.monomials, self.coeffs):
            if not c:
                continue
            mono = "*".join(
                (n if e == 1 else f"{n}^{e}") for n, e in zip(self.alg.names, m) if e)
            cs = scalar_str(c)
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            elif cs == "-1":
                terms.append("-" + mono)
            else:
                terms.append(f"({cs})*{mono}" if "i" in cs else f"{cs}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def artin_mul(x: ArtinElement, y: ArtinElement) -> ArtinElement:
    """Product in k[t]/m^c; monomials of degree >= c are discarded."""
    if x.alg is not y.alg:
        raise ValueError(f"elements of different algebras: {x.alg!r} vs {y.alg!r}")
    a, b = x.coeffs, y.coeffs
    out = [Q(0)] * len(a)
    for i, j, k in x.alg.mul_table:
        ai = a[i]
        if ai:
            bj = b[j]
            if bj:
                out[k] = out[k] + ai * bj
    return ArtinElement(x.alg, tuple(out))


def algebra_hom(x: ArtinElement, target: ArtinAlgebra, images) -> ArtinElement:
    """Apply the algebra morphism sending t_k to images[k] (each in the target's m)."""
    if len(images) != x.alg.nvars:
        raise ValueError("need one image per variable")
    for im in images:
        if im.alg is not target or not im.in_maximal_ideal():
            raise ValueError("variable images must lie in the maximal ideal of the target")
    out = target.zero()
    for mono, c in x.as_dict().items():
        term = target.scalar(c)
        for im, e in zip(images, mono):
            for _ in range(e):
                term = term * im
        out = out + term
    return out


def _block_mul(A, B):
    Bt = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col) if a and b), Q(0)) for col in Bt] for row in A]


def _block_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _block_is_zero(A) -> bool:
    return all(not x for row in A for x in row)


class ArtinMatrix:
    """Matrix over an ArtinAlgebra stored as {monomial index: scalar block}.

    Absent keys are zero blocks.  Scalars may be rationals, Gaussian rationals or
    any ring element supporting +, * (e.g. polynomials for symbolic expansion).
    """

    __slots__ = ("alg", "rows", "cols", "blocks")

    def __init__(self, alg: ArtinAlgebra, rows: int, cols: int, blocks: dict):
        self.alg = alg
        self.rows = rows
        self.cols = cols
        self.blocks = {k: b for k, b in blocks.items() if not _block_is_zero(b)}

    @classmethod
    def constant(cls, alg, M):
        M = [list(r) for r in M]
        return cls(alg, len(M), len(M[0]) if M else 0, {0: M})

    @classmethod
    def identity(cls, alg, n):
        return cls.constant(alg, [[Q(int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def from_entries(cls, entries):
        """Build from a rectangular list of ArtinElement (all in one algebra)."""
        alg = entries[0][0].alg
        rows, cols = len(entries), len(entries[0])
        blocks = {}
        for k in range(alg.dim):
            blk = [[entries[i][j].coeffs[k] for j in range(cols)] for i in range(rows)]
            blocks[k] = blk
        for row in entries:
            for e in row:
                if e.alg is not alg:
                    raise ValueError("entries from different algebras")
        return cls(alg, rows, cols, blocks)

    def entry(self, i: int, j: int) -> ArtinElement:
        vals = [Q(0)] * self.alg.dim
        for k, b in self.blocks.items():
            vals[k] = b[i][j]
        return ArtinElement(self.alg, tuple(vals))

    def entries(self):
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def block(self, mono) -> list:
        """Scalar coefficient matrix of a monomial (exponent tuple or index)."""
        k = mono if isinstance(mono, int) else self.alg.index[tuple(mono)]
        b = self.blocks.get(k)
        if b is None:
            return [[Q(0)] * self.cols for _ in range(self.rows)]
        return b

    def _check(self, other):
        if not isinstance(other, ArtinMatrix):
            raise TypeError("expected an ArtinMatrix")
        if other.alg is not self.alg:
            raise ValueError("matrices over different algebras")

    def __add__(self, other):
        self._check(other)
        blocks = dict(self.blocks)
        for k, b in other.blocks.items():
            blocks[k] = _block_add(blocks[k], b) if k in blocks else b
        return ArtinMatrix(self.alg, self.rows, self.cols, blocks)

    def __neg__(self):
        return ArtinMatrix(self.alg, self.rows, self.cols,
                           {k: [[-x for x in r] for r in b] for k, b in self.blocks.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return ArtinMatrix(self.alg, self.rows, self.cols,
                           {k: [[x * c for x in r] for r in b] for k, b in self.blocks.items()})

    def scale_by_element(self, a: ArtinElement):
        blocks = {}
        for k, b in self.blocks.items():
            for i, j, out in self.alg.mul_table:
                if i == k and a.coeffs[j]:
                    nb = [[x * a.coeffs[j] for x in r] for r in b]
                    blocks[out] = _block_add(blocks[out], nb) if out in blocks else nb
        return ArtinMatrix(self.alg, self.rows, self.cols, blocks)

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        A, B = self.blocks, other.blocks
        out: dict = {}
        for i, j, k in self.alg.mul_table:
            a = A.get(i)
            if a is None:
                continue
            b = B.get(j)
            if b is None:
                continue
            p = _block_mul(a, b)
            out[k] = _block_add(out[k], p) if k in out else p
        return ArtinMatrix(self.alg, self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not self.blocks

    def in_maximal_ideal(self) -> bool:
        return 0 not in self.blocks

    def min_degree(self) -> int | None:
        if not self.blocks:
            return None
        return min(self.alg.degrees[k] for k in self.blocks)

    def truncate(self, alg: ArtinAlgebra) -> "ArtinMatrix":
        """Reduce to a smaller-order algebra with the same variables."""
        if alg.nvars != self.alg.nvars:
            raise ValueError("variable count mismatch")
        blocks = {}
        for k, b in self.blocks.items():
            mono = self.alg.monomials[k]
            if sum(mono) < alg.order:
                blocks[alg.index[mono]] = b
        return ArtinMatrix(alg, self.rows, self.cols, blocks)

    def __eq__(self, other):
        if not isinstance(other, ArtinMatrix):
            return NotImplemented
        return (self.alg is other.alg and self.rows == other.rows
                and self.cols == other.cols and self.blocks == other.blocks)

    def __repr__(self):
        return f"ArtinMatrix({self.rows}x{self.cols} over {self.alg!r}, blocks={sorted(self.blocks)})"


def _as_artin_matrix(M) -> ArtinMatrix:
    if isinstance(M, ArtinMatrix):
        return M
    return ArtinMatrix.from_entries(M)


def matrix_exp_truncated(M) -> ArtinMatrix:
    """sum_k M^k / k! for M with entries in m (finite because m^c = 0)."""
    M = _as_artin_matrix(M)
    if M.rows != M.cols:
        raise ValueError("matrix must be square")
    if not M.in_maximal_ideal():
        raise ValueError("exp needs every entry in the maximal ideal")
    out = ArtinMatrix.identity(M.alg, M.rows)
    power = out
    k = 0
    while True:
        k += 1
        power = power @ M
        if power.is_zero():
            return out
        out = out + power.scale(Q(1, factorial(k)))


def matrix_log_truncated(U) -> ArtinMatrix:
    """sum_{k>=1} (-1)^{k+1} (U - I)^k / k for U congruent to I mod m."""
    U = _as_artin_matrix(U)
    if U.rows != U.cols:
        raise ValueError("matrix must be square")
    N = U - ArtinMatrix.identity(U.alg, U.rows)
    if not N.in_maximal_ideal():
        raise ValueError("log needs U = I mod m")
    out = ArtinMatrix(U.alg, U.rows, U.cols, {})
    power = ArtinMatrix.identity(U.alg, U.rows)
    k = 0
    while True:
        k += 1
        power = power @ N
        if power.is_zero():
            return out
        c = Q(1, k) if k % 2 else Q(-1, k)
        out = out + power.scale(c)
