"""Maurer-Cartan elements over Artin algebras, the gauge action, and BCH."""

from __future__ import annotations

from math import factorial

from ..exactalg import ArtinAlgebra, ArtinElement, Q
from .algebra import WDGLA, add_into, scale_vec

__all__ = ["MCElement", "lift_element", "curvature", "is_mc", "gauge", "bch", "ad_power_series"]


class MCElement:
    """An element of L^1 (x) m: {basis index: ArtinElement in m}."""

    def __init__(self, L: WDGLA, A: ArtinAlgebra, coeffs: dict, degree: int = 1):
        self.L = L
        self.A = A
        clean = {}
        for k, c in coeffs.items():
            if isinstance(k, str):
                k = L.index[k]
            c = c if isinstance(c, ArtinElement) else A.element(c) if isinstance(c, (list, dict)) else A.scalar(c)
            if c.alg is not A:
                raise ValueError("coefficient from a different algebra")
            if L.degrees[k] != degree:
                raise ValueError(f"{L.names[k]} has degree {L.degrees[k]}, expected {degree}")
            if not c.in_maximal_ideal():
                raise ValueError(f"coefficient of {L.names[k]} is not in the maximal ideal")
            if c:
                clean[k] = c
        self.coeffs = clean

    def __eq__(self, other):
        if not isinstance(other, MCElement):
            return NotImplemented
        return self.L is other.L and self.A is other.A and self.coeffs == other.coeffs

    def __repr__(self):
        return f"MCElement({self.L.vec_str(self.coeffs)})"


def lift_element(L: WDGLA, A: ArtinAlgebra, x, degree: int) -> dict:
    """Normalize an element of L^degree (x) m to a dict; MCElement accepted."""
    if isinstance(x, MCElement):
        if x.A is not A:
            raise ValueError("element over a different algebra")
        if any(L.degrees[k] != degree for k in x.coeffs):
            raise ValueError(f"expected an element of degree {degree}")
        return dict(x.coeffs)
    return MCElement(L, A, x, degree).coeffs


def curvature(L: WDGLA, A: ArtinAlgebra, eta) -> dict:
    """d eta + 1/2 [eta, eta]."""
    x = lift_element(L, A, eta, 1)
    out = L.apply_d(x)
    for k, v in L.br(x, x).items():
        add_into(out, k, v * Q(1, 2))
    return out


def is_mc(L: WDGLA, A: ArtinAlgebra, eta) -> bool:
    return not curvature(L, A, eta)


def ad_power_series(L: WDGLA, alpha: dict, x: dict, coeff):
    """sum_n coeff(n) (ad alpha)^n x, stopping when the power vanishes."""
    out: dict = {}
    term = x
    n = 0
    while term:
        for k, v in scale_vec(term, coeff(n)).items():
            add_into(out, k, v)
        term = L.br(alpha, term)
        n += 1
    return out


def gauge(L: WDGLA, A: ArtinAlgebra, alpha, eta) -> MCElement:
    """exp(alpha).eta = eta + sum_n (ad alpha)^n / (n+1)! ([alpha, eta] - d alpha)."""
    a = lift_element(L, A, alpha, 0)
    x = lift_element(L, A, eta, 1)
    seed = L.sub(L.br(a, x), L.apply_d(a))
    corr = ad_power_series(L, a, seed, lambda n: Q(1, factorial(n + 1)))
    return MCElement(L, A, L.add(x, corr))


def _nested(L: WDGLA, letters):
    """Right-nested bracket [l1, [l2, ... [l_{k-1}, l_k]]]."""
    val = letters[-1]
    for y in reversed(letters[:-1]):
        if not val:
            return {}
        val = L.br(y, val)
    return val


def _dynkin_words(max_len: int):
    """Sequences of (r_i, s_i) with r_i + s_i >= 1 and total length <= max_len."""
    def grow(prefix, used):
        if prefix:
            yield tuple(prefix)
        for r in range(max_len - used + 1):
            for s in range(max_len - used - r + 1):
                if r + s:
                    yield from grow(prefix + [(r, s)], used + r + s)
    yield from grow([], 0)


def bch(L: WDGLA, A: ArtinAlgebra, alpha, beta, degree: int = 0) -> dict:
    """log(exp(alpha) exp(beta)) by Dynkin's formula, exact in L (x) m."""
    X = lift_element(L, A, alpha, degree)
    Y = lift_element(L, A, beta, degree)
    max_len = A.order - 1  # words of length >= order vanish
    out: dict = {}
    for combo in _dynkin_words(max_len):
        n = len(combo)
        m = sum(r + s for r, s in combo)
        r_n, s_n = combo[-1]
        if s_n > 1 or (s_n == 0 and r_n > 1):
            continue
        letters = []
        denom = 1
        for r, s in combo:
            letters += [X] * r + [Y] * s
            denom *= factorial(r) * factorial(s)
        val = _nested(L, letters)
        if not val:
            continue
        c = Q(1 if n % 2 else -1, n) * Q(1, m * denom)
        for k, v in val.items():
            add_into(out, k, v * c)
    return out
