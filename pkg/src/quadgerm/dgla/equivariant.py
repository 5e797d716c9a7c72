"""Finite-group invariants, averaged projectors and augmentations."""

from __future__ import annotations

from dataclasses import dataclass

from ..exactalg import Q, Subspace, identity, mat_add, mat_mul, mat_scale, mat_vec, matrix, nullspace, rank
from .algebra import WDGLA, DGLAMorphism, check_dgla_axioms, cohomology, subalgebra

__all__ = [
    "NotAutomorphic", "group_closure", "averaging_projector", "invariants",
    "cohomology_fixed_dims", "Augmentation", "average_augmentations", "augmentation_kernel",
    "AugmentationKernel",
]


class NotAutomorphic(ValueError):
    """The declared action is not by DGLA automorphisms."""


def _key(M):
    return tuple(tuple(r) for r in M)


def group_closure(mats, bound: int = 10_000) -> list:
    """All products of the given matrices (identity included)."""
    mats = [matrix(M) for M in mats]
    if not mats:
        return []
    n = len(mats[0])
    I_n = identity(n)
    seen = {_key(I_n): I_n}
    frontier = [I_n]
    while frontier:
        nxt = []
        for M in frontier:
            for G in mats:
                P = mat_mul(M, G)
                k = _key(P)
                if k not in seen:
                    seen[k] = P
                    nxt.append(P)
                    if len(seen) > bound:
                        raise ValueError("group generated by the action is too large (or infinite)")
        frontier = nxt
    return [seen[k] for k in sorted(seen)]


def averaging_projector(L: WDGLA):
    G = group_closure(list(L.action.values()))
    if not G:
        return identity(L.dim), 1
    total = G[0]
    for M in G[1:]:
        total = mat_add(total, M)
    return mat_scale(Q(1, len(G)), total), len(G)


def _check_action(L: WDGLA):
    if not L.action:
        return
    probe = WDGLA(L.names, L.degrees, L.weights, L.d, L.bracket, L.action)
    rep = check_dgla_axioms(probe, limit=5, jacobi=False)
    bad = [v for v in rep.violations if v["axiom"].startswith("action")]
    if bad:
        v = bad[0]
        raise NotAutomorphic(f"{v['axiom']} fails at {v['where']}")


def invariants(L: WDGLA, check: bool = True) -> tuple[WDGLA, DGLAMorphism]:
    """Sub-DGLA of fixed vectors, obtained blockwise as the image of the averaging projector."""
    if check:
        _check_action(L)
    P, _ = averaging_projector(L)
    spans = {}
    for (j, i) in L.bidegrees():
        idx = L.block(j, i)
        Pb = [[P[r][c] for c in idx] for r in idx]
        spans[(j, i)] = [[Pb[r][c] for r in range(len(idx))] for c in range(len(idx))]
    return subalgebra(L, spans, label=f"{L.label}^G")


def cohomology_fixed_dims(L: WDGLA) -> dict:
    """dim (H^j_i(L))^G for every bidegree: dim(P Z + B) - dim B."""
    P, _ = averaging_projector(L)
    H = cohomology(L)
    out = {}
    for (j, i), b in H.blocks.items():
        idx = b.indices
        Pb = [[P[r][c] for c in idx] for r in idx]
        PZ = [mat_vec(Pb, v) for v in b.Z.basis]
        out[(j, i)] = Subspace(len(idx), PZ + b.B.basis).dim - b.B.dim
    return out


@dataclass
class Augmentation:
    """Linear map eps: L^0 -> g given by images of the degree-0 basis elements.

    ``images`` maps a degree-0 basis index of L to a coordinate vector in g.
    """

    target: WDGLA
    images: dict

    def matrix_on(self, L: WDGLA):
        zero = [Q(0)] * self.target.dim
        cols = []
        for k in L.block(0):
            cols.append(list(self.images.get(k, zero)))
        return [[cols[c][r] for c in range(len(cols))] for r in range(self.target.dim)]

    def apply(self, L: WDGLA, x: dict) -> dict:
        out = {}
        for k, c in x.items():
            if L.degrees[k] != 0:
                continue
            for r, v in enumerate(self.images.get(k, [])):
                if v:
                    out[r] = out.get(r, Q(0)) + c * v
        return {k: v for k, v in out.items() if v}

    def is_surjective(self, L: WDGLA) -> bool:
        M = self.matrix_on(L)
        return bool(M) and rank(M) == self.target.dim if self.target.dim else True

    def lie_hom_failures(self, L: WDGLA) -> list[str]:
        bad = []
        deg0 = L.block(0)
        for a in deg0:
            for b in deg0:
                lhs = self.apply(L, L.br({a: Q(1)}, {b: Q(1)}))
                rhs = self.target.br(self.apply(L, {a: Q(1)}), self.apply(L, {b: Q(1)}))
                if self.target.sub(lhs, rhs):
                    bad.append(f"eps[{L.names[a]},{L.names[b]}] != [eps {L.names[a]}, eps {L.names[b]}]")
        return bad


def average_augmentations(augs) -> Augmentation:
    """(1/k) sum of augmentations with a common target."""
    augs = list(augs)
    target = augs[0].target
    keys = set().union(*(a.images for a in augs))
    images = {}
    for k in keys:
        v = [Q(0)] * target.dim
        for a in augs:
            for r, x in enumerate(a.images.get(k, [])):
                v[r] += x
        images[k] = [x * Q(1, len(augs)) for x in v]
    return Augmentation(target, images)


@dataclass
class AugmentationKernel:
    kernel: WDGLA
    inclusion: DGLAMorphism
    surjective: bool
    lie_hom: bool
    h0_zero: bool | None  # withheld (None) when eps is not surjective

    def to_dict(self):
        return {"dim": self.kernel.dim, "surjective": self.surjective, "lie_hom": self.lie_hom,
                "h0_zero": self.h0_zero}


def augmentation_kernel(L: WDGLA, eps: Augmentation | None = None, require_hom: bool = True) -> AugmentationKernel:
    """Sub-DGLA ker(eps) on L^0 plus all positive degrees."""
    eps = eps or L.augmentation
    if eps is None:
        raise ValueError("no augmentation given")
    failures = eps.lie_hom_failures(L)
    if failures and require_hom:
        raise ValueError("augmentation is not a Lie homomorphism: " + failures[0])
    for k, v in eps.images.items():
        for r, x in enumerate(v):
            if x and eps.target.weights[r] != L.weights[k]:
                raise ValueError(f"augmentation does not preserve the weight of {L.names[k]}")
    surj = eps.is_surjective(L)
    spans = {}
    for (j, i) in L.bidegrees():
        idx = L.block(j, i)
        n = len(idx)
        if j > 0:
            spans[(j, i)] = identity(n)
            continue
        M = [[eps.images.get(k, [Q(0)] * eps.target.dim)[r] for k in idx] for r in range(eps.target.dim)]
        spans[(j, i)] = nullspace(M, n) if M else identity(n)
    K, inc = subalgebra(L, spans, label=f"ker({L.label})")
    h0 = None
    if surj:
        h0 = cohomology(K, degrees={0}).dim(0) == 0
    return AugmentationKernel(K, inc, surj, not failures, h0)

