"""Local structure of Hom(Gamma, G) at rho: cochains, quadratic cone, lifting oracle.

Coordinates are left-invariant: a deformation sends g to exp(U_g) rho(g) with
U_g in g (x) m.  With this choice d0 X = (X - Ad(rho(g_i)) X)_i and d1 is the Fox
matrix of the relators pushed through Ad o rho.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from .exactalg import (
    ArtinAlgebra, ArtinMatrix, Polynomial, Q, Subspace, identity, image_subspace,
    kernel_subspace, mat_mul, matrix_exp_truncated, scalar_str, solve_linear, to_scalar,
)
from .grouprep import Presentation, Representation, ad_action, check_representation, fox_derivative

__all__ = [
    "CochainData", "presentation_complex", "cocycle_spaces", "CocycleSpaces",
    "QuadraticConeResult", "quadratic_cone", "obstruction", "LiftCertificate", "lift_step",
    "lift_order", "OracleReport", "deformation_oracle", "oracle_samples", "InvalidInput",
]


class InvalidInput(ValueError):
    """The representation (or a sample) fails a precondition."""


@dataclass
class CochainData:
    presentation: Presentation
    rep: Representation
    ell: int
    n: int
    m: int
    d0: list  # (n*ell) x ell
    d1: list  # (m*ell) x (n*ell)

    @property
    def c1_dim(self) -> int:
        return self.n * self.ell

    @property
    def c2_dim(self) -> int:
        return self.m * self.ell

    def coordinate_names(self) -> list[str]:
        gens, lie = self.presentation.generators, self.rep.lie.names
        return [f"{g}_{b}" for g in gens for b in lie]


def _validate(rep: Representation):
    report = check_representation(rep, finite_image_bound=None)
    if not report.valid:
        problems = [f"relator {r} is not the identity" for r in report.failed_relators]
        problems += [f"conjugation by {g} leaves the Lie algebra" for g in report.ad_failures]
        raise InvalidInput("; ".join(problems))


def presentation_complex(pres: Presentation, rep: Representation) -> CochainData:
    if rep.presentation is not pres and rep.presentation != pres:
        raise InvalidInput("representation belongs to a different presentation")
    _validate(rep)
    ell, n, m = rep.lie.dim, pres.ngens, len(pres.relators)
    I_l = identity(ell)
    d0 = []
    for g in range(n):
        A = rep.ad_letter(g, 1)
        d0.extend([I_l[i][j] - A[i][j] for j in range(ell)] for i in range(ell))
    d1 = [[Q(0)] * (n * ell) for _ in range(m * ell)]
    for k, r in enumerate(pres.relators):
        for g in range(n):
            block = [[Q(0)] * ell for _ in range(ell)]
            for w, c in fox_derivative(r, g).items():
                A = ad_action(rep, w)
                for i in range(ell):
                    for j in range(ell):
                        if A[i][j]:
                            block[i][j] += c * A[i][j]
            for i in range(ell):
                for j in range(ell):
                    d1[k * ell + i][g * ell + j] = block[i][j]
    data = CochainData(pres, rep, ell, n, m, d0, d1)
    if m and any(any(x for x in row) for row in mat_mul(d1, d0)):
        raise InvalidInput("d1 d0 != 0; the representation is inconsistent")
    return data


@dataclass
class CocycleSpaces:
    Z1: Subspace
    B1: Subspace
    z1: int
    b1: int
    h1: int

    def dims(self) -> dict:
        return {"z1": self.z1, "b1": self.b1, "h1": self.h1}


def cocycle_spaces(c: CochainData) -> CocycleSpaces:
    N = c.c1_dim
    Z1 = kernel_subspace(c.d1, N) if c.m else Subspace.full(N)
    B1 = image_subspace(c.d0, N)
    return CocycleSpaces(Z1, B1, Z1.dim, B1.dim, Z1.dim - B1.dim)


# --- truncated evaluation ------------------------------------------------------------

def _layers_matrix(lie, A: ArtinAlgebra, layers, g: int):
    """sum_k t^k U_k restricted to generator g, as an ArtinMatrix."""
    ell, d = lie.dim, lie.d
    blocks = {}
    for k, U in enumerate(layers, start=1):
        if k >= A.order:
            break
        coords = U[g * ell:(g + 1) * ell]
        if any(coords):
            blocks[A.index[(k,)]] = lie.element(coords)
    return ArtinMatrix(A, d, d, blocks)


def _relator_residuals(c: CochainData, A: ArtinAlgebra, layers):
    """ρ_t(r) - I for every relator, as ArtinMatrices over A."""
    rep = c.rep
    factors = {}
    for g in range(c.n):
        E = matrix_exp_truncated(_layers_matrix(rep.lie, A, layers, g))
        Einv = matrix_exp_truncated(-_layers_matrix(rep.lie, A, layers, g))
        factors[(g, 1)] = E @ ArtinMatrix.constant(A, rep.images[g])
        factors[(g, -1)] = ArtinMatrix.constant(A, rep.inverses[g]) @ Einv
    I_A = ArtinMatrix.identity(A, rep.lie.d)
    out = []
    for r in c.presentation.relators:
        M = I_A
        for letter in r:
            M = M @ factors[letter]
        out.append(M - I_A)
    return out


def _residual_vector(c: CochainData, A: ArtinAlgebra, layers, K: int):
    """Degree-K block of every relator, in Lie coordinates (length m*ell)."""
    vec = []
    idx = A.index[(K,)]
    for R in _relator_residuals(c, A, layers):
        blk = R.blocks.get(idx)
        if blk is None:
            vec.extend([Q(0)] * c.ell)
            continue
        coords = c.rep.lie.coordinates(blk)
        if coords is None:
            raise ArithmeticError("relator residual left the Lie algebra")
        vec.extend(coords)
    return vec


def _low_residual(c: CochainData, A: ArtinAlgebra, layers, upto: int):
    """First degree <= upto with a nonzero relator block, with its vector."""
    res = _relator_residuals(c, A, layers)
    for K in range(1, upto + 1):
        idx = A.index[(K,)]
        if any(idx in R.blocks for R in res):
            vec = []
            for R in res:
                blk = R.blocks.get(idx)
                vec.extend([Q(0)] * c.ell if blk is None else c.rep.lie.coordinates_unchecked(blk))
            return K, vec
    return None, None


# --- quadratic cone ----------------------------------------------------------------

@dataclass
class QuadraticConeResult:
    cochains: CochainData
    spaces: CocycleSpaces
    variables: list
    relations: list  # Polynomial in Z1 coordinates
    complement: list  # indices of C2 coordinates kept
    obstruction_dim: int
    zeta: list = field(repr=False, default_factory=list)  # full obstruction, one poly per C2 coordinate

    @property
    def Z1(self) -> Subspace:
        return self.spaces.Z1

    def dims(self) -> dict:
        d = self.spaces.dims()
        d["obstruction_target"] = self.obstruction_dim
        return d

    def relation_strings(self) -> list[str]:
        return [p.to_string(self.variables) for p in self.relations]

    def z1_coordinates(self, u):
        if len(u) != self.cochains.c1_dim:
            raise InvalidInput(f"sample has length {len(u)}, expected {self.cochains.c1_dim}")
        if not self.Z1.contains(u):
            raise InvalidInput("sample is not a cocycle")
        return self.Z1.coordinates(u)

    def from_coordinates(self, y):
        N = self.cochains.c1_dim
        out = [Q(0)] * N
        for coef, row in zip(y, self.Z1.basis):
            if coef:
                out = [a + coef * b for a, b in zip(out, row)]
        return out

    def contains(self, u) -> bool:
        y = self.z1_coordinates(u)
        return all(not p.evaluate(y) for p in self.relations)

    def to_dict(self) -> dict:
        return {"dims": self.dims(), "variables": self.variables,
                "relations": self.relation_strings()}


def quadratic_cone(pres: Presentation, rep: Representation, cochains: CochainData | None = None) -> QuadraticConeResult:
    """Second-order obstruction on Z1, projected to the echelon complement of im d1."""
    c = cochains or presentation_complex(pres, rep)
    spaces = cocycle_spaces(c)
    Z1 = spaces.Z1
    names = c.coordinate_names()
    variables = [names[p] for p in Z1.pivots]
    nz = Z1.dim
    N = c.c1_dim
    # symbolic cocycle: u = sum_i y_i z_i
    u = [Polynomial(nz) for _ in range(N)]
    for i, row in enumerate(Z1.basis):
        yi = Polynomial.variable(nz, i)
        for j, x in enumerate(row):
            if x:
                u[j] = u[j] + yi * x
    A = ArtinAlgebra(1, 3)
    zeta = []
    if c.m:
        res = _relator_residuals(c, A, [u])
        i1, i2 = A.index[(1,)], A.index[(2,)]
        for R in res:
            if i1 in R.blocks:
                raise ArithmeticError("first-order residual of a cocycle is nonzero")
            blk = R.blocks.get(i2)
            if blk is None:
                zeta.extend([Polynomial(nz)] * c.ell)
            else:
                zeta.extend(c.rep.lie.coordinates_unchecked(blk))
    im = image_subspace(c.d1, c.c2_dim) if c.m else Subspace(0)
    reduced = im.reduce(zeta)
    comp = im.complement_indices()
    relations = [reduced[k] for k in comp if reduced[k]]
    return QuadraticConeResult(c, spaces, variables, relations, comp, len(comp), zeta)


def obstruction(c: CochainData, u) -> list:
    """Numeric second-order obstruction of a cocycle u, one entry per C2 coordinate."""
    if c.m and any(x for x in _matvec(c.d1, u)):
        raise InvalidInput("obstruction is only defined on cocycles")
    if not c.m:
        return []
    return _residual_vector(c, ArtinAlgebra(1, 3), [list(u)], 2)


def _matvec(M, v):
    return [sum((a * b for a, b in zip(row, v) if a and b), Q(0)) for row in M]


# --- lifting ---------------------------------------------------------------------

@dataclass
class LiftCertificate:
    order: int
    ok: bool
    layers: list  # U_1..U_order on success (left coordinates)
    obstruction: list | None = None  # residual mod the solvable directions, C2 coordinates
    failed_degree: int | None = None

    def verify(self, c: CochainData) -> bool:
        """Re-evaluate all relators: identity modulo t^(order+1)."""
        if not self.ok:
            return False
        A = ArtinAlgebra(1, self.order + 1)
        return all(R.is_zero() for R in _relator_residuals(c, A, self.layers[: self.order]))

    def to_dict(self):
        d = {"order": self.order, "ok": self.ok}
        if self.ok:
            d["layers"] = [[scalar_str(x) for x in U] for U in self.layers]
        else:
            d["failed_degree"] = self.failed_degree
            d["obstruction"] = [scalar_str(x) for x in self.obstruction]
        return d


def lift_step(pres: Presentation, rep: Representation, A: ArtinAlgebra, partial,
              cochains: CochainData | None = None, adjust: bool = True) -> LiftCertificate:
    """Extend a solution U_1..U_k (valid mod t^(k+1)) to the order of A = Q[t]/t^(K+1).

    If ``partial`` already has K layers it is only checked.  When the next layer has
    no solution, the free cocycle directions of layer K-1 (K-1 >= 2) are adjusted
    jointly, since they enter the degree-K residual linearly.
    """
    c = cochains or presentation_complex(pres, rep)
    if A.nvars != 1:
        raise ValueError("lifting runs over single-variable algebras Q[t]/t^c")
    K = A.order - 1
    layers = [list(map(to_scalar, U)) for U in (partial.layers if isinstance(partial, LiftCertificate) else partial)]
    if not layers:
        raise ValueError("partial solution needs at least the first-order layer")
    for U in layers:
        if len(U) != c.c1_dim:
            raise ValueError(f"layer of length {len(U)}, expected {c.c1_dim}")
    if not c.m:
        return LiftCertificate(K, True, layers + [[Q(0)] * c.c1_dim] * max(0, K - len(layers)))
    if len(layers) >= K:
        deg, vec = _low_residual(c, A, layers[:K], K)
        if deg is None:
            return LiftCertificate(K, True, layers[:K])
        return LiftCertificate(K, False, layers[:K], vec, deg)
    if len(layers) != K - 1:
        raise ValueError(f"partial has {len(layers)} layers; cannot jump to order {K}")
    prev = ArtinAlgebra(1, K)
    deg, _ = _low_residual(c, prev, layers, K - 1)
    if deg is not None:
        raise InvalidInput(f"partial solution fails at degree {deg}")
    N = c.c1_dim
    base = layers + [[Q(0)] * N]
    R0 = _residual_vector(c, A, base, K)
    rhs = [-x for x in R0]
    sol = solve_linear(c.d1, rhs, N)
    if sol is not None:
        return LiftCertificate(K, True, layers + [sol.particular])
    if not adjust or K - 1 < 2:
        return LiftCertificate(K, False, layers, _reduce_mod(c, R0, []), K)
    Z1 = cocycle_spaces(c).Z1
    cols = []
    for z in Z1.basis:
        trial = [list(U) for U in base]
        trial[K - 2] = [a + b for a, b in zip(trial[K - 2], z)]
        Rz = _residual_vector(c, A, trial, K)
        cols.append([a - b for a, b in zip(Rz, R0)])
    J = [list(r1) + [col[i] for col in cols] for i, r1 in enumerate(c.d1)]
    sol = solve_linear(J, rhs, N + len(cols))
    if sol is None:
        return LiftCertificate(K, False, layers, _reduce_mod(c, R0, cols), K)
    x, p = sol.particular[:N], sol.particular[N:]
    new_prev = list(layers[K - 2])
    for coef, z in zip(p, Z1.basis):
        if coef:
            new_prev = [a + coef * b for a, b in zip(new_prev, z)]
    return LiftCertificate(K, True, layers[: K - 2] + [new_prev, x])


def _reduce_mod(c: CochainData, R, extra_cols):
    cols = [[row[j] for row in c.d1] for j in range(c.c1_dim)] + list(extra_cols)
    return Subspace(c.c2_dim, cols).reduce(R)


def lift_order(c: CochainData, u, max_order: int) -> tuple[int, LiftCertificate]:
    """Largest k <= max_order for which the greedy layered solve reaches order k."""
    cert = lift_step(c.presentation, c.rep, ArtinAlgebra(1, 2), [u], cochains=c)
    if not cert.ok:
        return 0, cert
    best = cert
    for K in range(2, max_order + 1):
        cert = lift_step(c.presentation, c.rep, ArtinAlgebra(1, K + 1), best.layers, cochains=c)
        if not cert.ok:
            return K - 1, cert
        best = cert
    return max_order, best


# --- oracle --------------------------------------------------------------------------

def oracle_samples(dim: int, count: int, seed: int = 0, grid_limit: int | None = None,
                   denominators: int = 3, magnitude: int = 3):
    """{-1,0,1} grid points (all if they fit, else a seeded subset) then seeded rationals."""
    rng = random.Random(seed)
    limit = count if grid_limit is None else min(grid_limit, count)
    total = 3 ** dim
    if total <= limit:
        grid = [list(p) for p in product((-1, 0, 1), repeat=dim)]
    else:
        picks = sorted(rng.sample(range(total), limit))
        grid = []
        for n in picks:
            p = []
            for _ in range(dim):
                n, r = divmod(n, 3)
                p.append(r - 1)
            grid.append(p[::-1])
    out = [[Q(x) for x in p] for p in grid]
    while len(out) < count:
        out.append([Q(rng.randint(-magnitude, magnitude), rng.randint(1, denominators)) for _ in range(dim)])
    return out


@dataclass
class OracleReport:
    cone: QuadraticConeResult
    order: int
    entries: list  # dicts ordered by sample index
    disagreements: list

    @property
    def agree(self) -> bool:
        return not self.disagreements

    def to_dict(self) -> dict:
        return {
            "dims": self.cone.spaces.dims(),
            "variables": self.cone.variables,
            "relations": self.cone.relation_strings(),
            "order": self.order,
            "samples": len(self.entries),
            "disagreements": self.disagreements,
            "oracle": self.entries,
        }


def deformation_oracle(pres: Presentation, rep: Representation, order: int, samples=None,
                       count: int = 200, seed: int = 0, extra_samples=()) -> OracleReport:
    """Compare cone membership with lift order for cocycle samples.

    ``samples`` are full C1 vectors; when omitted, ``count`` grid/random points of Z1
    are generated from ``seed``.  ``extra_samples`` are appended either way.
    """
    if order < 3:
        raise ValueError("oracle order must be at least 3")
    c = presentation_complex(pres, rep)
    cone = quadratic_cone(pres, rep, cochains=c)
    if samples is None:
        samples = [cone.from_coordinates(y) for y in oracle_samples(cone.Z1.dim, count, seed)]
    samples = [list(map(to_scalar, s)) for s in samples] + [list(map(to_scalar, s)) for s in extra_samples]
    entries, bad = [], []
    for k, u in enumerate(samples):
        y = cone.z1_coordinates(u)
        in_cone = all(not p.evaluate(y) for p in cone.relations)
        lo, cert = lift_order(c, u, order)
        entry = {"index": k, "sample": [scalar_str(x) for x in y], "in_cone": in_cone, "lift_order": lo}
        if not cert.ok:
            entry["obstruction"] = [scalar_str(x) for x in cert.obstruction]
        entries.append(entry)
        if (in_cone and lo < order) or (not in_cone and lo >= 3):
            bad.append({"index": k, "sample": entry["sample"], "in_cone": in_cone, "lift_order": lo})
    return OracleReport(cone, order, entries, bad)
