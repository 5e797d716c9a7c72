"""Linear algebra of mixed Hodge structures: weight filtrations, purity, the Deligne
splitting, and the Dec filtration on filtered complexes.

Filtrations are step functions given by their values at finitely many indices
("jumps").  An increasing filtration W is zero below its first jump and keeps the
value of the last jump at or below the index.  A decreasing filtration F is the
whole space up to its first jump and zero beyond the last one.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .exactalg import (
    GaussianRational, Q, Subspace, conj, inverse, kernel_subspace, mat_mul, mat_vec,
    matrix, nullspace, parse_scalar, preimage, rank, scalar_str,
)

__all__ = [
    "FiltrationError", "NotMixedHodge", "Filtration", "FilteredVectorSpace", "FilteredComplex",
    "gr_weight", "is_pure", "hodge_numbers", "check_mhs", "DeligneSplitting", "deligne_splitting",
    "DecResult", "dec_filtration", "cohomology_filtration", "WeightSupport", "weight_support",
    "random_mhs", "random_filtered_complex", "load_filtered_space", "dump_filtered_space",
    "load_filtered_complex", "dump_filtered_complex",
]


class FiltrationError(ValueError):
    pass


class NotMixedHodge(ValueError):
    def __init__(self, message, weight=None, p=None):
        super().__init__(message)
        self.weight = weight
        self.p = p


def _conj_space(S: Subspace) -> Subspace:
    return Subspace(S.n, [[conj(x) for x in v] for v in S.basis])


class Filtration:
    """Increasing (W) or decreasing (F) filtration of F^n given by its jumps."""

    def __init__(self, n: int, jumps: dict, increasing: bool = True):
        self.n = n
        self.increasing = increasing
        self.jumps = {}
        for k, S in sorted(jumps.items()):
            if not isinstance(S, Subspace):
                S = Subspace(n, S)
            if S.n != n:
                raise FiltrationError(f"filtration step {k} lives in dimension {S.n}, not {n}")
            self.jumps[int(k)] = S
        keys = sorted(self.jumps)
        for a, b in zip(keys, keys[1:]):
            small, big = (self.jumps[a], self.jumps[b]) if increasing else (self.jumps[b], self.jumps[a])
            if not big.contains_subspace(small):
                rel = "W_{a} is not inside W_{b}" if increasing else "F^{b} is not inside F^{a}"
                raise FiltrationError("non-nested chain: " + rel.format(a=a, b=b))

    @property
    def keys(self) -> list[int]:
        return sorted(self.jumps)

    def at(self, k: int) -> Subspace:
        if self.increasing:
            best = None
            for a in self.keys:
                if a <= k:
                    best = a
            return self.jumps[best] if best is not None else Subspace(self.n)
        for a in self.keys:
            if a >= k:
                return self.jumps[a]
        return Subspace(self.n)

    def bounds(self) -> tuple[int, int]:
        """Indices outside of which the filtration is constant (0 or everything)."""
        if not self.jumps:
            return 0, 0
        return self.keys[0], self.keys[-1]

    def exhaustive(self) -> bool:
        if self.n == 0:
            return True
        if not self.jumps:
            return False
        top = self.jumps[self.keys[-1] if self.increasing else self.keys[0]]
        return top.dim == self.n

    def conjugate(self) -> "Filtration":
        return Filtration(self.n, {k: _conj_space(S) for k, S in self.jumps.items()}, self.increasing)

    def __eq__(self, other):
        if not isinstance(other, Filtration) or other.n != self.n or other.increasing != self.increasing:
            return NotImplemented
        lo = min(self.bounds()[0], other.bounds()[0]) - 1
        hi = max(self.bounds()[1], other.bounds()[1]) + 1
        return all(self.at(k) == other.at(k) for k in range(lo, hi + 1))


@dataclass
class FilteredVectorSpace:
    """V = Q^n with W over Q and F over Q(i)."""

    dim: int
    W: Filtration
    F: Filtration | None = None

    def __post_init__(self):
        if self.W.n != self.dim or (self.F is not None and self.F.n != self.dim):
            raise FiltrationError("filtrations live in the wrong dimension")
        if not self.W.increasing or (self.F is not None and self.F.increasing):
            raise FiltrationError("W must be increasing and F decreasing")
        if not self.W.exhaustive():
            raise FiltrationError("W is not exhaustive")
        for S in self.W.jumps.values():
            if any(isinstance(x, GaussianRational) and x.im for v in S.basis for x in v):
                raise FiltrationError("W must be defined over Q")
        if self.F is not None and not self.F.exhaustive():
            raise FiltrationError("F is not exhaustive (its first step must be the whole space)")

    @classmethod
    def from_jumps(cls, dim, W, F=None):
        return cls(dim, Filtration(dim, W, True), Filtration(dim, F, False) if F is not None else None)

    def weight_range(self) -> range:
        lo, hi = self.W.bounds()
        return range(lo, hi + 1)

    def hodge_range(self) -> range:
        if self.F is None:
            return range(0)
        lo, hi = self.F.bounds()
        return range(lo, hi + 1)


def gr_weight(V: FilteredVectorSpace) -> dict:
    """{n: dim W_n - dim W_(n-1)} over the weights where the filtration jumps."""
    out = {}
    for n in V.weight_range():
        d = V.W.at(n).dim - V.W.at(n - 1).dim
        if d < 0:
            raise FiltrationError(f"non-nested chain at weight {n}")
        if d:
            out[n] = d
    return out


def is_pure(V: FilteredVectorSpace, n: int) -> bool:
    """Gr_m^W = 0 for every m != n.  The zero space is pure of every weight."""
    return all(m == n for m in gr_weight(V))


def _induced(V: FilteredVectorSpace, Fp: Subspace, n: int) -> Subspace:
    """Lift of the image of F^p on Gr_n^W, i.e. F^p ∩ W_n + W_(n-1)."""
    return Fp.intersect(V.W.at(n)) + V.W.at(n - 1)


def hodge_numbers(V: FilteredVectorSpace) -> dict:
    """{(p, q): dim Gr_F^p Gr^W_(p+q)}."""
    if V.F is None:
        raise FiltrationError("no Hodge filtration given")
    out = {}
    lo, hi = V.F.bounds()
    for n, g in gr_weight(V).items():
        base = V.W.at(n - 1).dim
        for p in range(lo, hi + 1):
            a = _induced(V, V.F.at(p), n).dim - base
            b = _induced(V, V.F.at(p + 1), n).dim - base
            if a - b:
                out[(p, n - p)] = a - b
    return out


def check_mhs(V: FilteredVectorSpace) -> list[dict]:
    """Failures of F^p ⊕ conj(F)^(n-p+1) = Gr_n^W, located by (weight, p)."""
    if V.F is None:
        return [{"weight": None, "p": None, "reason": "no Hodge filtration given"}]
    Fb = V.F.conjugate()
    lo, hi = V.F.bounds()
    bad = []
    for n in gr_weight(V):
        low, top = V.W.at(n - 1), V.W.at(n)
        for p in range(lo, hi + 2):
            A = _induced(V, V.F.at(p), n)
            B = _induced(V, Fb.at(n - p + 1), n)
            if (A + B).dim != top.dim:
                bad.append({"weight": n, "p": p, "reason": "F^p + conj F^(n-p+1) misses part of Gr_n"})
            elif A.intersect(B).dim != low.dim:
                bad.append({"weight": n, "p": p, "reason": "F^p and conj F^(n-p+1) meet in Gr_n"})
    h = hodge_numbers(V)
    for (p, q), d in sorted(h.items()):
        if h.get((q, p), 0) != d:
            bad.append({"weight": p + q, "p": p, "reason": f"h^{p},{q} = {d} but h^{q},{p} = {h.get((q, p), 0)}"})
    return bad


@dataclass
class DeligneSplitting:
    space: FilteredVectorSpace
    pieces: dict  # (p, q) -> Subspace over Q(i)

    def dims(self) -> dict:
        return {k: S.dim for k, S in sorted(self.pieces.items()) if S.dim}

    def _sum(self, keys) -> Subspace:
        out = Subspace(self.space.dim)
        for k in keys:
            out = out + self.pieces[k]
        return out

    def recombination_failures(self) -> list[str]:
        V = self.space
        bad = []
        if sum(S.dim for S in self.pieces.values()) != V.dim or self._sum(self.pieces).dim != V.dim:
            bad.append("pieces do not form a direct sum decomposition of V")
        for n in V.weight_range():
            if self._sum([k for k in self.pieces if sum(k) <= n]) != V.W.at(n):
                bad.append(f"W_{n} differs from the sum of I^(p,q) with p+q <= {n}")
        for p in V.hodge_range():
            if self._sum([k for k in self.pieces if k[0] >= p]) != V.F.at(p):
                bad.append(f"F^{p} differs from the sum of I^(p',q) with p' >= {p}")
        gr = gr_weight(V)
        for n in set(gr) | {sum(k) for k in self.dims()}:
            tot = sum(d for k, d in self.dims().items() if sum(k) == n)
            if tot != gr.get(n, 0):
                bad.append(f"weight {n}: I-pieces have total dimension {tot}, Gr_{n} has {gr.get(n, 0)}")
        return bad

    def to_dict(self):
        return {"dims": [{"p": p, "q": q, "dim": d} for (p, q), d in self.dims().items()],
                "gr_weight": {str(k): v for k, v in gr_weight(self.space).items()},
                "recombination_ok": not self.recombination_failures()}


def deligne_splitting(V: FilteredVectorSpace) -> DeligneSplitting:
    """I^{p,q} = F^p ∩ W_{p+q} ∩ (conj F^q ∩ W_{p+q} + Σ_{j≥2} conj F^{q-j+1} ∩ W_{p+q-j})."""
    bad = check_mhs(V)
    if bad:
        b = bad[0]
        raise NotMixedHodge(f"not a mixed Hodge structure at weight {b['weight']}, p = {b['p']}: {b['reason']}",
                            b["weight"], b["p"])
    Fb = V.F.conjugate()
    wlo, _ = V.W.bounds()
    pieces = {}
    for n in gr_weight(V):
        Wn = V.W.at(n)
        for p in V.hodge_range():
            q = n - p
            inner = Fb.at(q).intersect(Wn)
            for j in range(2, n - wlo + 2):
                inner = inner + Fb.at(q - j + 1).intersect(V.W.at(n - j))
            S = V.F.at(p).intersect(Wn).intersect(inner)
            if S.dim:
                pieces[(p, q)] = S
    return DeligneSplitting(V, pieces)


# --- filtered complexes ----------------------------------------------------------------

@dataclass
class FilteredComplex:
    """Complex A^lo -> ... -> A^hi over Q with an increasing filtration W on each term.

    ``d[n]`` is the matrix of A^n -> A^(n+1) (rows = dim A^(n+1)).
    """

    dims: dict
    d: dict
    W: dict  # n -> Filtration
    label: str = ""

    def __post_init__(self):
        self.dims = {int(k): int(v) for k, v in self.dims.items()}
        self.d = {int(k): matrix(M) for k, M in self.d.items()}
        for n, M in self.d.items():
            src, tgt = self.dims.get(n, 0), self.dims.get(n + 1, 0)
            if len(M) != tgt or any(len(r) != src for r in M):
                raise FiltrationError(f"d^{n} should be {tgt}x{src}")
        for n in self.degrees:
            if n not in self.W:
                self.W[n] = Filtration(self.dims[n], {0: Subspace.full(self.dims[n])})
            if self.W[n].n != self.dims[n]:
                raise FiltrationError(f"W on A^{n} lives in the wrong dimension")
            if not self.W[n].exhaustive():
                raise FiltrationError(f"W on A^{n} is not exhaustive")
        for n in self.degrees:
            P = mat_mul(self.dmat(n + 1), self.dmat(n))
            if any(x for r in P for x in r):
                raise FiltrationError(f"d^{n + 1} d^{n} != 0")
        lo, hi = self.weight_bounds()
        for n in self.degrees:
            for i in range(lo, hi + 1):
                img = self.W[n].at(i).image(self.dmat(n))
                if not self.W.get(n + 1, Filtration(0, {})).at(i).contains_subspace(img) and img.dim:
                    raise FiltrationError(f"d^{n} does not preserve W_{i}")

    @property
    def degrees(self) -> list[int]:
        return sorted(n for n, v in self.dims.items() if v)

    def dmat(self, n: int):
        src, tgt = self.dims.get(n, 0), self.dims.get(n + 1, 0)
        if n in self.d:
            return self.d[n]
        return [[Q(0)] * src for _ in range(tgt)]

    def weight_bounds(self) -> tuple[int, int]:
        ks = [k for F in self.W.values() for k in F.keys]
        return (min(ks), max(ks)) if ks else (0, 0)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def cycles(self, n: int) -> Subspace:
        return kernel_subspace(self.dmat(n), self.dims.get(n, 0))

    def boundaries(self, n: int) -> Subspace:
        return Subspace.full(self.dims.get(n - 1, 0)).image(self.dmat(n - 1)) if self.dims.get(n - 1) \
            else Subspace(self.dims.get(n, 0))

    def betti(self, n: int) -> int:
        return self.cycles(n).dim - self.boundaries(n).dim


def cohomology_filtration(C: FilteredComplex, n: int, W: Filtration, k: int) -> Subspace:
    """Lift Z ∩ W_k + B of the induced filtration step on H^n."""
    return C.cycles(n).intersect(W.at(k)) + C.boundaries(n)


@dataclass
class DecResult:
    complex: FilteredComplex
    identity_ok: bool
    failures: list = field(default_factory=list)
    table: list = field(default_factory=list)

    def to_dict(self):
        return {"identity_ok": self.identity_ok, "failures": self.failures, "table": self.table,
                "dec_jumps": {str(n): {str(i): S.dim for i, S in F.jumps.items()}
                              for n, F in sorted(self.complex.W.items())}}


def dec_filtration(C: FilteredComplex) -> DecResult:
    """DecW_i(A^n) = {x in W_(i-n)(A^n) : dx in W_(i-n-1)(A^(n+1))}, with the identity
    DecW_i H^n = W_(i-n) H^n checked on every degree and index."""
    lo, hi = C.weight_bounds()
    new = {}
    for n in C.degrees:
        Wn = C.W[n]
        Wn1 = C.W.get(n + 1, Filtration(0, {}))
        jumps = {}
        for i in range(lo + n, hi + n + 2):
            target = Wn1.at(i - n - 1) if C.dims.get(n + 1) else Subspace(0)
            pre = preimage(C.dmat(n), target, C.dims[n]) if C.dims.get(n + 1) else Subspace.full(C.dims[n])
            jumps[i] = Wn.at(i - n).intersect(pre)
        new[n] = Filtration(C.dims[n], jumps)
    D = FilteredComplex(dict(C.dims), dict(C.d), new, label=f"Dec({C.label})")
    failures, table = [], []
    for n in C.degrees:
        for i in range(lo + n - 1, hi + n + 2):
            a = cohomology_filtration(D, n, D.W[n], i)
            b = cohomology_filtration(C, n, C.W[n], i - n)
            base = C.boundaries(n).dim
            table.append({"degree": n, "i": i, "dec": a.dim - base, "shifted": b.dim - base})
            if a != b:
                failures.append({"degree": n, "i": i})
    return DecResult(D, not failures, failures, table)


@dataclass
class WeightSupport:
    degree: int
    weights: dict  # weight -> dim Gr_i^W H^n
    conforms: bool
    allowed: list

    def to_dict(self):
        return {"degree": self.degree, "weights": {str(k): v for k, v in sorted(self.weights.items())},
                "conforms": self.conforms, "allowed": self.allowed}


def weight_support(C: FilteredComplex, n: int) -> WeightSupport:
    """Weights of the filtration W induces on H^n; allowed pattern is n..2n
    ({1,2} on H^1, {2,3,4} on H^2)."""
    out = {}
    if C.dims.get(n):
        lo, hi = C.weight_bounds()
        base = C.boundaries(n).dim
        prev = base
        for i in range(lo - 1, hi + 1):
            cur = cohomology_filtration(C, n, C.W[n], i).dim
            if i >= lo and cur - prev:
                out[i] = cur - prev
            prev = cur
    allowed = list(range(n, 2 * n + 1))
    return WeightSupport(n, out, all(w in allowed for w in out), allowed)


# --- random instances ------------------------------------------------------------------

def _rand_q(rng, mag=3):
    return Q(rng.randint(-mag, mag), rng.randint(1, 2))


def _rand_invertible(rng, n, mag=2):
    while True:
        M = [[Q(rng.randint(-mag, mag)) for _ in range(n)] for _ in range(n)]
        if rank(M) == n:
            return M


def random_mhs(rng: random.Random, max_dim: int = 8, weights=(0, 1, 2, 3, 4), split: bool = False):
    """Random MHS: an R-split model twisted by a W-unipotent complex change of basis,
    then moved by a random rational change of coordinates."""
    vecs = []  # (weight, p, vector over Q(i))
    dim = 0
    while True:
        n = rng.choice(weights)
        p = rng.randint(0, n)
        q = n - p
        step = 1 if p == q else 2
        if dim + step > max_dim:
            break
        if p == q:
            e = [0] * max_dim
            e[dim] = 1
            vecs.append((n, p, e))
        else:
            e = [0] * max_dim
            f = [0] * max_dim
            e[dim] = GaussianRational(1, 0)
            e[dim + 1] = GaussianRational(0, 1)
            f[dim] = GaussianRational(1, 0)
            f[dim + 1] = GaussianRational(0, -1)
            vecs.append((n, p, e))
            vecs.append((n, q, f))
        dim += step
        if rng.random() < 0.25:
            break
    if dim == 0:
        return random_mhs(rng, max_dim, weights, split)
    vecs = [(n, p, [_to_g(x) for x in v[:dim]]) for n, p, v in vecs]
    # W is spanned by the real coordinate vectors of weight <= n
    wt = [None] * dim
    for n, p, v in vecs:
        for k, x in enumerate(v):
            if x:
                wt[k] = n
    if not split:
        # v -> v + (complex combination of coordinate vectors of strictly lower weight)
        twisted = []
        for n, p, v in vecs:
            v = list(v)
            for k in range(dim):
                if wt[k] < n and rng.random() < 0.6:
                    v[k] = v[k] + GaussianRational(rng.randint(-2, 2), rng.randint(-2, 2))
            twisted.append((n, p, v))
        vecs = twisted
    g = _rand_invertible(rng, dim)
    move = lambda v: mat_vec(g, v)  # noqa: E731
    W = {}
    for n in sorted(set(wt)):
        W[n] = Subspace(dim, [move([Q(1) if j == k else Q(0) for j in range(dim)])
                              for k in range(dim) if wt[k] <= n])
    ps = sorted({p for _, p, _ in vecs})
    F = {p: Subspace(dim, [move(v) for _, pp, v in vecs if pp >= p]) for p in range(ps[0], ps[-1] + 1)}
    return FilteredVectorSpace.from_jumps(dim, W, F)


def _to_g(x):
    return x if isinstance(x, GaussianRational) else GaussianRational(x, 0)


def random_filtered_complex(rng: random.Random, max_total: int = 24, degrees=(0, 1, 2, 3),
                            weights=(0, 1, 2, 3, 4)) -> FilteredComplex:
    """Weight-respecting differentials (d maps weight w into weights <= w) with d^2 = 0,
    conjugated by random rational coordinate changes."""
    budget = max_total
    dims, wts = {}, {}
    for n in degrees:
        k = rng.randint(0, max(0, min(6, budget)))
        budget -= k
        dims[n] = k
        wts[n] = sorted(rng.choice(weights) for _ in range(k))
    d = {}
    for n in degrees[:-1]:
        src, tgt = dims[n], dims[n + 1]
        if not src or not tgt:
            continue
        free = [(r, c) for r in range(tgt) for c in range(src) if wts[n + 1][r] <= wts[n][c]]
        prev = d.get(n - 1)
        # linear conditions d^n d^(n-1) = 0 on the free entries
        if prev is not None:
            rows = []
            for r in range(tgt):
                for c in range(dims[n - 1]):
                    rows.append([prev[cc][c] if rr == r else Q(0) for rr, cc in free])
            basis = nullspace(rows, len(free)) if rows else [
                [Q(1) if a == b else Q(0) for b in range(len(free))] for a in range(len(free))]
        else:
            basis = [[Q(1) if a == b else Q(0) for b in range(len(free))] for a in range(len(free))]
        coeffs = [Q(0)] * len(free)
        for v in basis:
            c = rng.choice([0, 0, 1, -1, 2])
            if c:
                coeffs = [a + c * b for a, b in zip(coeffs, v)]
        M = [[Q(0)] * src for _ in range(tgt)]
        for (r, c), x in zip(free, coeffs):
            M[r][c] = x
        d[n] = M
    gs = {n: _rand_invertible(rng, dims[n]) for n in degrees if dims[n]}
    ginv = {n: inverse(g) for n, g in gs.items()}
    dd = {n: mat_mul(mat_mul(gs[n + 1], M), ginv[n]) for n, M in d.items()}
    W = {}
    for n in degrees:
        if not dims[n]:
            continue
        jumps = {}
        for w in sorted(set(wts[n])):
            jumps[w] = Subspace(dims[n], [mat_vec(gs[n], [Q(1) if j == k else Q(0) for j in range(dims[n])])
                                          for k in range(dims[n]) if wts[n][k] <= w])
        W[n] = Filtration(dims[n], jumps)
    return FilteredComplex({n: k for n, k in dims.items() if k}, dd, W, label="random")


# --- JSON ------------------------------------------------------------------------------

def _vecs(rows, n, what):
    out = []
    for r in rows:
        if len(r) != n:
            raise FiltrationError(f"{what}: vector {r!r} should have {n} entries")
        try:
            out.append([parse_scalar(str(x)) for x in r])
        except (ValueError, ZeroDivisionError) as exc:
            raise FiltrationError(f"{what}: {exc}") from None
    return out


def _jumps_from(obj, n, what):
    return {int(k): Subspace(n, _vecs(v, n, f"{what}[{k}]")) for k, v in obj.items()}


def _jumps_to(F: Filtration):
    return {str(k): [[scalar_str(x) for x in v] for v in S.basis] for k, S in F.jumps.items()}


def _load_json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FiltrationError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_filtered_space(text: str) -> FilteredVectorSpace:
    """{"dimension": n, "W": {"a": [vectors]}, "F": {"p": [Gaussian vectors]}}"""
    data = _load_json(text)
    try:
        n = int(data["dimension"])
        W = _jumps_from(data["W"], n, "W")
        F = _jumps_from(data["F"], n, "F") if "F" in data else None
    except (KeyError, TypeError) as exc:
        raise FiltrationError(f"missing or malformed field: {exc}") from None
    return FilteredVectorSpace.from_jumps(n, W, F)


def dump_filtered_space(V: FilteredVectorSpace) -> str:
    out = {"dimension": V.dim, "W": _jumps_to(V.W)}
    if V.F is not None:
        out["F"] = _jumps_to(V.F)
    return json.dumps(out, indent=1)


def load_filtered_complex(text: str) -> FilteredComplex:
    """{"dims": {"n": k}, "d": {"n": matrix}, "W": {"n": {"a": [vectors]}}}"""
    data = _load_json(text)
    try:
        dims = {int(k): int(v) for k, v in data["dims"].items()}
        d = {int(k): _vecs(M, dims.get(int(k), 0), f"d[{k}]") for k, M in data.get("d", {}).items()}
        W = {int(k): Filtration(dims[int(k)], _jumps_from(v, dims[int(k)], f"W[{k}]"))
             for k, v in data.get("W", {}).items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise FiltrationError(f"missing or malformed field: {exc}") from None
    return FilteredComplex(dims, d, W, label=data.get("name", ""))


def dump_filtered_complex(C: FilteredComplex) -> str:
    out = {"name": C.label, "dims": {str(k): v for k, v in sorted(C.dims.items())},
           "d": {str(k): [[scalar_str(x) for x in r] for r in M] for k, M in sorted(C.d.items())},
           "W": {str(k): _jumps_to(F) for k, F in sorted(C.W.items())}}
    return json.dumps(out, indent=1)
