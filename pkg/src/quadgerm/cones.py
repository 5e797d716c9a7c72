"""Weighted homogeneous cones: homogeneity, quadraticity, weight halving, realification
and membership of Artin-algebra points."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .exactalg import (
    ArtinAlgebra, ArtinElement, GaussianRational, I, Polynomial, Q, algebra_hom, parse_polynomial,
    to_scalar,
)

__all__ = [
    "WeightedCone", "InhomogeneousError", "HomogeneityReport", "check_homogeneous",
    "is_quadratic", "halve_weights", "realify", "functor_points", "cone_compare_sampled",
    "CompareReport", "load_cone", "dump_cone", "cone_from_dict", "cone_to_dict",
]


class InhomogeneousError(ValueError):
    pass


def _weighted_degree(weights, exponent) -> int:
    return sum(w * a for w, a in zip(weights, exponent))


def _mono_str(names, exponent) -> str:
    parts = [n if a == 1 else f"{n}^{a}" for n, a in zip(names, exponent) if a]
    return "*".join(parts) or "1"


@dataclass
class HomogeneityReport:
    ok: bool
    relations: list  # {index, degree, ok, offending?}

    def to_dict(self):
        return {"ok": self.ok, "relations": self.relations}


class WeightedCone:
    """Variables with positive integer weights and weighted-homogeneous relations."""

    def __init__(self, variables, weights, relations=(), degrees=None, validate: bool = True):
        self.variables = list(variables)
        self.weights = [int(w) for w in weights]
        if len(self.variables) != len(self.weights):
            raise ValueError("one weight per variable")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be distinct")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive integers")
        n = len(self.variables)
        rels = []
        for r in relations:
            if isinstance(r, str):
                r = parse_polynomial(r, self.variables)
            if r.nvars != n:
                raise ValueError("relation variable count does not match the cone")
            rels.append(r)
        self.relations = rels
        if degrees is None:
            degrees = []
            for r in rels:
                terms = r.sorted_terms()
                degrees.append(_weighted_degree(self.weights, terms[0][0]) if terms else 0)
        self.degrees = [int(d) for d in degrees]
        if len(self.degrees) != len(self.relations):
            raise ValueError("one declared degree per relation")
        if validate:
            report = check_homogeneous(self)
            if not report.ok:
                bad = next(r for r in report.relations if not r["ok"])
                raise InhomogeneousError(
                    f"relation {bad['index']} is not homogeneous: {bad.get('offending', '')}")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def relation_strings(self) -> list[str]:
        return [r.to_string(self.variables) for r in self.relations]

    def is_real(self) -> bool:
        return all(not (isinstance(c, GaussianRational) and c.im)
                   for r in self.relations for c in r.terms.values())

    def __repr__(self):
        return f"WeightedCone({self.variables}, weights={self.weights}, relations={self.relation_strings()})"

    def __eq__(self, other):
        if not isinstance(other, WeightedCone):
            return NotImplemented
        return (self.variables == other.variables and self.weights == other.weights
                and self.relations == other.relations and self.degrees == other.degrees)


def check_homogeneous(c: WeightedCone) -> HomogeneityReport:
    rows = []
    ok = True
    for k, (r, d) in enumerate(zip(c.relations, c.degrees)):
        entry = {"index": k, "degree": d, "ok": True}
        if d <= 0 and r.terms:
            entry["ok"] = False
            entry["offending"] = "declared degree must be positive"
        for e, _ in r.sorted_terms():
            wd = _weighted_degree(c.weights, e)
            if wd != d:
                entry["ok"] = False
                entry["offending"] = f"monomial {_mono_str(c.variables, e)} has weighted degree {wd}"
                break
        ok = ok and entry["ok"]
        rows.append(entry)
    return HomogeneityReport(ok, rows)


def _require_homogeneous(c: WeightedCone):
    rep = check_homogeneous(c)
    if not rep.ok:
        bad = next(r for r in rep.relations if not r["ok"])
        raise InhomogeneousError(f"relation {bad['index']}: {bad['offending']}")


def is_quadratic(c: WeightedCone) -> bool:
    _require_homogeneous(c)
    return all(w == 1 for w in c.weights) and all(d == 2 for d in c.degrees)


def halve_weights(c: WeightedCone) -> WeightedCone:
    odd = [v for v, w in zip(c.variables, c.weights) if w % 2]
    if odd:
        raise ValueError(f"odd weight on {', '.join(odd)}")
    if any(d % 2 for d in c.degrees):
        raise ValueError("odd relation degree")
    return WeightedCone(c.variables, [w // 2 for w in c.weights], c.relations,
                        [d // 2 for d in c.degrees])


def _split(c):
    if isinstance(c, GaussianRational):
        return c.re, c.im
    return c, Q(0)


def realify(c: WeightedCone) -> WeightedCone:
    """Substitute X_k = x_k + i y_k and split every relation into real and imaginary parts."""
    _require_homogeneous(c)
    n = c.nvars
    names, weights = [], []
    for v, w in zip(c.variables, c.weights):
        names += [f"{v}_re", f"{v}_im"]
        weights += [w, w]
    subs = [Polynomial.variable(2 * n, 2 * k) + Polynomial.variable(2 * n, 2 * k + 1, I) for k in range(n)]
    rels, degs = [], []
    for r, d in zip(c.relations, c.degrees):
        p = r.substitute(subs) if r.terms else Polynomial(2 * n)
        re = Polynomial(2 * n, {e: _split(x)[0] for e, x in p.terms.items()})
        im = Polynomial(2 * n, {e: _split(x)[1] for e, x in p.terms.items()})
        rels += [re, im]
        degs += [d, d]
    return WeightedCone(names, weights, rels, degs)


def _as_element(A: ArtinAlgebra, v):
    if isinstance(v, ArtinElement):
        if v.alg is not A:
            raise ValueError("assigned value lives in a different algebra")
        return v
    if isinstance(v, dict) or isinstance(v, (list, tuple)):
        return A.element(v)
    return A.scalar(v)


def functor_points(c: WeightedCone, A: ArtinAlgebra, assignment) -> bool:
    """True iff every relation vanishes at the m-valued assignment."""
    if isinstance(assignment, dict):
        missing = [v for v in c.variables if v not in assignment]
        if missing:
            raise ValueError(f"no value for {', '.join(missing)}")
        vals = [_as_element(A, assignment[v]) for v in c.variables]
    else:
        vals = [_as_element(A, v) for v in assignment]
        if len(vals) != c.nvars:
            raise ValueError("one value per variable")
    for name, v in zip(c.variables, vals):
        if not v.in_maximal_ideal():
            raise ValueError(f"value of {name} is not in the maximal ideal")
    for r in c.relations:
        if r.terms and r.evaluate(vals):
            return False
    return True


@dataclass
class CompareReport:
    checked: int
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self):
        return {"checked": self.checked, "ok": self.ok, "mismatches": self.mismatches}


def cone_compare_sampled(c1: WeightedCone, c2: WeightedCone, dictionary, tower, samples,
                         embedding=None) -> CompareReport:
    """Compare membership in c2 of sampled points with membership in c1 of their images.

    ``dictionary`` maps every c1 variable to a linear form in the c2 variables
    (Polynomial or string).  Samples give each c2 variable a coefficient list
    [a_1, a_2, ...] meaning a_1 t + a_2 t^2 + ...  For each algebra A in ``tower``
    the c1 side is evaluated in ``embedding(A)`` = (B, images of t) when given,
    otherwise in A itself.
    """
    forms = []
    for v in c1.variables:
        if v not in dictionary:
            raise ValueError(f"dictionary misses {v}")
        f = dictionary[v]
        if isinstance(f, str):
            f = parse_polynomial(f, c2.variables)
        if f.degree() > 1 or (0,) * c2.nvars in f.terms:
            raise ValueError(f"dictionary entry for {v} is not linear")
        forms.append(f)
    ratios = set()
    for v, w1, f in zip(c1.variables, c1.weights, forms):
        for e in f.terms:
            w2 = c2.weights[e.index(1)]
            ratios.add(Q(w1, w2))
    if len(ratios) > 1:
        raise ValueError("dictionary is not weight-consistent")
    checked = 0
    mismatches = []
    for A in tower:
        if embedding is None:
            B, images = A, None
        else:
            B, images = embedding(A)
        for k, s in enumerate(samples):
            vals = []
            for v in c2.variables:
                coeffs = s[v] if isinstance(s, dict) else s[c2.variables.index(v)]
                vals.append(A.element([0] + [to_scalar(x) for x in coeffs]))
            m2 = functor_points(c2, A, vals)
            pulled = [f.evaluate(vals) if f.terms else A.zero() for f in forms]
            pulled = [x if isinstance(x, ArtinElement) else A.scalar(x) for x in pulled]
            if images is not None:
                pulled = [algebra_hom(x, B, images) for x in pulled]
            m1 = functor_points(c1, B, pulled)
            checked += 1
            if m1 != m2:
                mismatches.append({"algebra": repr(A), "sample": k, "c1": m1, "c2": m2})
    return CompareReport(checked, mismatches)


# --- JSON ----------------------------------------------------------------------------

def cone_to_dict(c: WeightedCone) -> dict:
    return {
        "variables": [{"name": v, "weight": w} for v, w in zip(c.variables, c.weights)],
        "relations": c.relation_strings(),
        "degrees": c.degrees,
    }


def cone_from_dict(data: dict, validate: bool = True) -> WeightedCone:
    try:
        vs = data["variables"]
        names = [v["name"] for v in vs]
        weights = [v.get("weight", 1) for v in vs]
        rels = [parse_polynomial(r, names) for r in data.get("relations", [])]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed cone data: {exc}") from None
    return WeightedCone(names, weights, rels, data.get("degrees"), validate=validate)


def load_cone(text: str, validate: bool = True) -> WeightedCone:
    return cone_from_dict(json.loads(text), validate=validate)


def dump_cone(c: WeightedCone) -> str:
    return json.dumps(cone_to_dict(c), indent=2, sort_keys=True)
