"""Weight axioms, the truncation L -> L/I, and the reduction to a quadratic cone."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from ..cones import WeightedCone, cone_to_dict, halve_weights
from ..exactalg import Polynomial, Q, Subspace, kernel_subspace
from .algebra import WDGLA, DGLAMorphism, NotClosed, cohomology, quasi_iso_report, quotient
from .builders import lie_dgla
from .mc import MCElement

__all__ = [
    "H1_WEIGHTS", "H2_WEIGHTS", "WeightReport", "check_weight_axioms", "TruncationResult",
    "truncate", "truncation_ideal", "ReductionResult", "reduce_to_quadratic", "PreconditionError",
]

H1_WEIGHTS = frozenset({1, 2})
H2_WEIGHTS = frozenset({2, 3, 4})


class PreconditionError(ValueError):
    def __init__(self, message: str, witnesses=()):
        super().__init__(message)
        self.witnesses = list(witnesses)


@dataclass
class WeightReport:
    ok: bool
    mode: str
    violations: list = field(default_factory=list)
    h1_weights: list = field(default_factory=list)
    h2_weights: list = field(default_factory=list)

    def to_dict(self):
        return {"ok": self.ok, "mode": self.mode, "violations": self.violations,
                "h1_weights": self.h1_weights, "h2_weights": self.h2_weights}


def check_weight_axioms(L: WDGLA, g=None) -> WeightReport:
    """With ``g`` (matrix Lie algebra or degree-0 WDGLA): weight-0 part = degree-0 part = g.  Without: L^0 = 0 and L_0 = 0.

    In both modes H^1 may only carry weights 1, 2 and H^2 only weights 2, 3, 4.
    """
    bad = []
    if g is not None:
        G = g if isinstance(g, WDGLA) else lie_dgla(g)
        w0 = [k for k in range(L.dim) if L.weights[k] == 0]
        d0 = L.block(0)
        for k in w0:
            if L.degrees[k] != 0:
                bad.append({"rule": "weight 0 sits in degree 0", "degree": L.degrees[k], "weight": 0,
                            "witness": L.names[k]})
        for k in d0:
            if L.weights[k] != 0:
                bad.append({"rule": "degree 0 sits in weight 0", "degree": 0, "weight": L.weights[k],
                            "witness": L.names[k]})
        base = L.block(0, 0)
        if len(base) != G.dim:
            bad.append({"rule": "L^0_0 = g", "degree": 0, "weight": 0,
                        "witness": f"dimension {len(base)} vs {G.dim}"})
        else:
            pos = {k: r for r, k in enumerate(base)}
            for a in range(G.dim):
                for b in range(G.dim):
                    lhs = {pos[k]: v for k, v in L.br({base[a]: Q(1)}, {base[b]: Q(1)}).items()
                           if k in pos}
                    if G.sub(lhs, G.br({a: Q(1)}, {b: Q(1)})):
                        bad.append({"rule": "L^0_0 = g", "degree": 0, "weight": 0,
                                    "witness": f"[{L.names[base[a]]},{L.names[base[b]]}]"})
        mode = "g"
    else:
        for k in range(L.dim):
            if L.degrees[k] == 0:
                bad.append({"rule": "L^0 = 0", "degree": 0, "weight": L.weights[k], "witness": L.names[k]})
            elif L.weights[k] == 0:
                bad.append({"rule": "L_0 = 0", "degree": L.degrees[k], "weight": 0, "witness": L.names[k]})
        mode = "augmented"
    H = cohomology(L, degrees={1, 2})
    for j, allowed in ((1, H1_WEIGHTS), (2, H2_WEIGHTS)):
        for i in sorted(H.weights(j)):
            if i not in allowed:
                rep = H.blocks[(j, i)].representatives()[0]
                bad.append({"rule": f"H^{j} weights in {sorted(allowed)}", "degree": j, "weight": i,
                            "witness": L.vec_str(rep)})
    return WeightReport(not bad, mode, bad, sorted(H.weights(1)), sorted(H.weights(2)))


# --- truncation ----------------------------------------------------------------------

@dataclass
class TruncationResult:
    Q: WDGLA
    pi: DGLAMorphism
    ideal_dims: dict
    quasi_iso: dict

    @property
    def ok(self) -> bool:
        return self.quasi_iso["ok"]

    def to_dict(self):
        return {
            "source_dims": _dims_list(self.pi.source),
            "quotient_dims": _dims_list(self.Q),
            "ideal_dims": [{"degree": j, "weight": i, "dim": d} for (j, i), d in sorted(self.ideal_dims.items()) if d],
            "one_quasi_iso": self.quasi_iso["ok"],
            "quasi_iso": {str(k): v for k, v in self.quasi_iso["degrees"].items()},
        }


def _dims_list(L: WDGLA):
    return [{"degree": j, "weight": i, "dim": d} for (j, i), d in sorted(L.block_dims().items())]


def truncation_ideal(L: WDGLA) -> dict:
    """I = L^1_4 + d(L^1_4) + all weights >= 5, blockwise."""
    ideal = {}
    for (j, i) in L.bidegrees():
        idx = L.block(j, i)
        if i >= 5 or (j, i) == (1, 4):
            ideal[(j, i)] = Subspace.full(len(idx))
        elif (j, i) == (2, 4):
            src = L.block(1, 4)
            D = L.d_matrix(idx, src)
            ideal[(j, i)] = Subspace(len(idx), [[D[r][c] for r in range(len(idx))] for c in range(len(src))])
    return ideal


def truncate(L: WDGLA) -> TruncationResult:
    report = check_weight_axioms(L)
    if not report.ok:
        raise PreconditionError("weight axioms fail: " + "; ".join(
            f"{v['rule']} at ({v['degree']},{v['weight']}): {v['witness']}" for v in report.violations[:3]),
            report.violations)
    ideal = truncation_ideal(L)
    try:
        Qa, pi = quotient(L, ideal, label=f"trunc({L.label})")
    except NotClosed as exc:
        raise RuntimeError(f"truncation ideal is not an ideal: {exc}") from None
    qi = quasi_iso_report(pi)
    return TruncationResult(Qa, pi, {k: S.dim for k, S in ideal.items()}, qi)


# --- reduction -------------------------------------------------------------------------

def _primitive(p: Polynomial) -> Polynomial:
    """Scale to coprime integer coefficients with a positive leading coefficient."""
    terms = p.sorted_terms()
    if not terms:
        return p
    fr = [Fraction(int(c.numerator), int(c.denominator)) for _, c in terms]
    den = reduce(lcm, (f.denominator for f in fr), 1)
    ints = [int(f * den) for f in fr]
    g = reduce(gcd, (abs(x) for x in ints), 0) or 1
    s = 1 if ints[0] > 0 else -1
    scale = Q(den * s, g)
    return p * scale


@dataclass
class ReductionResult:
    ok: bool
    checks: dict
    cone: WeightedCone | None = None
    unhalved: WeightedCone | None = None
    variables: list = field(default_factory=list)  # Z^1_2 basis vectors (dicts)
    refusal: dict | None = None
    algebra: WDGLA | None = None

    def cone_point(self, eta: MCElement):
        """Coordinates of eta in the Z^1_2 basis, or None if eta is not of that form."""
        L = self.algebra
        idx = L.block(1, 2)
        if any(k not in idx for k in eta.coeffs):
            return None
        S = Subspace(len(idx), [[v.get(k, Q(0)) for k in idx] for v in self.variables])
        # coordinates monomial by monomial
        A = eta.A
        out = [A.zero() for _ in self.variables]
        for m in range(A.dim):
            vec = [eta.coeffs[k].coeffs[m] if k in eta.coeffs else Q(0) for k in idx]
            if not any(vec):
                continue
            if not S.contains(vec):
                return None
            for r, c in enumerate(S.coordinates(vec)):
                if c:
                    coeffs = [Q(0)] * A.dim
                    coeffs[m] = c
                    out[r] = out[r] + A.element(coeffs)
        return out

    def to_dict(self):
        d = {"ok": self.ok, "checks": self.checks}
        if self.refusal:
            d["refusal"] = self.refusal
        if self.cone is not None:
            d["cone"] = cone_to_dict(self.cone)
        return d


def reduce_to_quadratic(Qa: WDGLA) -> ReductionResult:
    """Cone of 1/2[eta_2, eta_2] = 0 on Z^1_2, weights halved; refuses when the
    consequences Q^1_1 = 0 (via H^1(Q_1) = 0) or Z^1_3 = 0 fail."""
    pre = []
    for k in range(Qa.dim):
        j, i = Qa.bidegree(k)
        if j == 0:
            pre.append(f"Q^0 != 0 ({Qa.names[k]})")
        elif i == 0:
            pre.append(f"Q_0 != 0 ({Qa.names[k]})")
        elif i >= 5:
            pre.append(f"Q_{i} != 0 ({Qa.names[k]})")
        elif (j, i) == (1, 4):
            pre.append(f"Q^1_4 != 0 ({Qa.names[k]})")
    if pre:
        raise PreconditionError("not a truncated algebra: " + "; ".join(pre[:5]), pre)
    checks = {}
    H = cohomology(Qa, degrees={1})
    h11 = H.blocks.get((1, 1))
    checks["H1(Q_1)=0"] = not (h11 and h11.dim)
    if h11 and h11.dim:
        rep = h11.representatives()[0]
        return ReductionResult(False, checks, refusal={
            "reason": "H^1(Q_1) != 0", "degree": 1, "weight": 1, "class": Qa.vec_str(rep),
            "dim": h11.dim}, algebra=Qa)
    q11 = Qa.block(1, 1)
    checks["Q^1_1=0"] = not q11
    if q11:
        k = q11[0]
        return ReductionResult(False, checks, refusal={
            "reason": "Q^1_1 != 0 (d is not zero on it)", "degree": 1, "weight": 1,
            "element": Qa.names[k], "d": Qa.vec_str(Qa.apply_d({k: Q(1)}))}, algebra=Qa)
    idx3 = Qa.block(1, 3)
    Z3 = kernel_subspace(Qa.d_matrix(Qa.block(2, 3), idx3), len(idx3)) if Qa.block(2, 3) else Subspace.full(len(idx3))
    checks["Z^1_3=0"] = Z3.dim == 0
    if Z3.dim:
        v = {k: c for k, c in zip(idx3, Z3.basis[0]) if c}
        return ReductionResult(False, checks, refusal={
            "reason": "Z^1_3 != 0 (eta_3 not forced to vanish)", "degree": 1, "weight": 3,
            "element": Qa.vec_str(v)}, algebra=Qa)
    idx2 = Qa.block(1, 2)
    Z2 = kernel_subspace(Qa.d_matrix(Qa.block(2, 2), idx2), len(idx2)) if Qa.block(2, 2) else Subspace.full(len(idx2))
    variables = [{k: c for k, c in zip(idx2, v) if c} for v in Z2.basis]
    names = [Qa.names[idx2[p]] for p in Z2.pivots]
    nz = len(variables)
    eta = {}
    for r, v in enumerate(variables):
        y = Polynomial.variable(nz, r)
        for k, c in v.items():
            eta[k] = eta[k] + y * c if k in eta else y * c
    eta = {k: p for k, p in eta.items() if p}
    sq = Qa.br(eta, eta)  # [eta, eta] = 2 * (1/2 [eta, eta])
    idx4 = Qa.block(2, 4)
    src = Qa.block(1, 4)
    D = Qa.d_matrix(idx4, src) if src else []
    exact = Subspace(len(idx4), [[D[r][c] for r in range(len(idx4))] for c in range(len(src))])
    vec = exact.reduce([sq.get(k, Polynomial(nz)) for k in idx4])
    relations = []
    for c in exact.complement_indices():
        p = vec[c]
        if isinstance(p, Polynomial) and p.terms:
            relations.append(_primitive(p))
    unhalved = WeightedCone(names, [2] * nz, relations, [4] * len(relations))
    cone = halve_weights(unhalved)
    return ReductionResult(True, checks, cone, unhalved, variables, None, Qa)
