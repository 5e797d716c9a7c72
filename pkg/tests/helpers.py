"""Seeded instance generators shared by the unit and acceptance tests."""

from __future__ import annotations

import random
from importlib.resources import files
from itertools import product

from quadgerm.cones import WeightedCone
from quadgerm.dgla import (
    WDGLA, chevalley_eilenberg, check_weight_axioms, exterior_algebra, graded_lie_from_matrices,
    lie_dgla, tensor_dgla,
)
from quadgerm.dgla.builders import GradedLie
from quadgerm.exactalg import (
    ArtinAlgebra, GaussianRational, Polynomial, Q, inverse, mat_mul, matrix, solve_linear,
)
from quadgerm.grouprep import LinearGroupData, parse_presentation, parse_representation

DATA = files("quadgerm") / "data"
SL2 = LinearGroupData.sl(2)


def data_text(name: str) -> str:
    return (DATA / name).read_text()


def data_path(name: str) -> str:
    return str(DATA / name)


def load_group(pres_name, rep_name):
    pres = parse_presentation(data_text(pres_name))
    return pres, parse_representation(data_text(rep_name), pres)


# --- Lie algebras and DGLAs ------------------------------------------------------------

def unit(n, i, j):
    M = [[0] * n for _ in range(n)]
    M[i][j] = 1
    return M


def heisenberg() -> GradedLie:
    return graded_lie_from_matrices(3, [(1, unit(3, 0, 1)), (1, unit(3, 1, 2))])


def abelian(k: int, weight: int = 1) -> GradedLie:
    return GradedLie([f"h{i + 1}" for i in range(k)], [weight] * k, {}, [])


def random_nilpotent(rng: random.Random, size: int = 4) -> GradedLie:
    """Lie algebra generated by 2 or 3 random matrices on the first two superdiagonals."""
    gens = []
    for _ in range(rng.choice([2, 2, 3])):
        w = rng.choice([1, 1, 2])
        M = [[0] * size for _ in range(size)]
        for i in range(size - w):
            M[i][i + w] = rng.choice([0, 1, 1, -1, 2])
        if any(any(r) for r in M):
            gens.append((w, M))
    if not gens:
        gens = [(1, unit(size, 0, 1))]
    return graded_lie_from_matrices(size, gens)


def sl2_dgla() -> WDGLA:
    return lie_dgla(SL2)


def torus_sl2(genus: int = 1) -> WDGLA:
    """Exterior algebra on a_i, b_i cut off above degree 2, with d = 0, tensor sl2."""
    names = [f"a{i + 1}" for i in range(genus)] + [f"b{i + 1}" for i in range(genus)]
    A = exterior_algebra(names, [1] * len(names), {}, max_degree=2)
    return tensor_dgla(A, SL2, label=f"surface{genus}")


def random_truncation_instance(rng: random.Random):
    """Positive part of CE(h) (degree <= 3) tensor sl2, or None if the weight axioms fail."""
    h = random_nilpotent(rng)
    if len(h.names) > 6:
        return None
    A = chevalley_eilenberg(h, max_degree=3)
    L = tensor_dgla(A, SL2, positive_only=True, label="ce+")
    return L if check_weight_axioms(L).ok else None


# --- equivariant fixtures --------------------------------------------------------------

def _ad_matrix(P):
    P = matrix(P)
    Pi = inverse(P)
    cols = [SL2.coordinates(mat_mul(mat_mul(P, B), Pi)) for B in SL2.basis]
    return [[cols[c][r] for c in range(3)] for r in range(3)]


def _copies(k: GradedLie, m: int) -> GradedLie:
    n = len(k.names)
    names = [f"{x}_{c + 1}" for c in range(m) for x in k.names]
    br = {}
    for (a, b), out in k.bracket.items():
        for c in range(m):
            br[(c * n + a, c * n + b)] = {c * n + x: v for x, v in out.items()}
    return GradedLie(names, list(k.weights) * m, br, [])


def _perm_matrix(perm, block):
    m = len(perm)
    n = m * block
    M = [[Q(0)] * n for _ in range(n)]
    for c in range(m):
        for x in range(block):
            M[perm[c] * block + x][c * block + x] = Q(1)
    return M


GROUPS = {
    "Z2": (2, {"s": [1, 0]}, {"s": [[1, 0], [0, -1]]}),
    "Z3": (3, {"r": [1, 2, 0]}, {"r": [[0, -1], [1, -1]]}),
    "S3": (3, {"s": [1, 0, 2], "r": [1, 2, 0]}, {"s": [[0, 1], [1, 0]], "r": [[0, -1], [1, -1]]}),
}


def equivariant_instance(rng: random.Random, group: str):
    """CE(k^m) tensor sl2 with the group permuting the copies and acting on sl2 by Ad."""
    m, perms, ads = GROUPS[group]
    kind = rng.choice(["ab1", "ab2", "heis"] if m == 2 else ["ab1", "ab2"])
    k = {"ab1": abelian(1), "ab2": GradedLie(["p", "q"], [1, 2], {}, []), "heis": heisenberg()}[kind]
    h = _copies(k, m)
    act = {g: _perm_matrix(p, len(k.names)) for g, p in perms.items()}
    A = chevalley_eilenberg(h, max_degree=2, action=act)
    G = lie_dgla(SL2, action={g: _ad_matrix(P) for g, P in ads.items()})
    positive = rng.random() < 0.5
    return tensor_dgla(A, G, positive_only=positive, label=f"{group}:{kind}:{int(positive)}")


# --- MC elements -----------------------------------------------------------------------

def t_power(A: ArtinAlgebra, k: int, c=1):
    coeffs = [Q(0)] * A.dim
    coeffs[A.index[(k,)]] = Q(c)
    return A.element(coeffs)


def random_mc(L: WDGLA, A: ArtinAlgebra, rng: random.Random, tries: int = 200):
    """eta = sum_k t^k eta_k solved order by order; None if every attempt is obstructed."""
    idx1, idx2 = L.block(1), L.block(2)
    D = L.d_matrix(idx2, idx1)
    for _ in range(tries):
        layers = []
        ok = True
        for k in range(1, A.order):
            rhs = {}
            for a in range(1, k):
                b = k - a
                for key, v in L.br(layers[a - 1], layers[b - 1]).items():
                    rhs[key] = rhs.get(key, Q(0)) - v * Q(1, 2)
            sol = solve_linear(D, [rhs.get(j, Q(0)) for j in idx2], len(idx1)) if idx2 else None
            if idx2 and sol is None:
                ok = False
                break
            x = list(sol.particular) if sol else [Q(0)] * len(idx1)
            kern = sol.kernel if sol else [[Q(int(i == j)) for j in range(len(idx1))] for i in range(len(idx1))]
            # sparse choices keep later orders unobstructed often enough
            for v in rng.sample(kern, min(len(kern), rng.choice([0, 1, 1, 2]))):
                c = rng.choice([1, -1, 2])
                x = [a + c * b for a, b in zip(x, v)]
            layers.append({i: c for i, c in zip(idx1, x) if c})
        if ok:
            coeffs = {}
            for k, lay in enumerate(layers, 1):
                for i, c in lay.items():
                    coeffs[i] = coeffs.get(i, A.zero()) + t_power(A, k, c)
            return {i: v for i, v in coeffs.items() if v}
    return None


def random_degree0(L: WDGLA, A: ArtinAlgebra, rng: random.Random):
    out = {}
    for i in L.block(0):
        v = A.zero()
        for k in range(1, A.order):
            c = rng.choice([0, 1, -1, Q(1, 2)])
            if c:
                v = v + t_power(A, k, c)
        if v:
            out[i] = v
    return out


# --- Q-fixtures for the reduction --------------------------------------------------------

def q_fixture(rng: random.Random, n2: int = 2, n3: int = 1, closed_q11: bool = False):
    """Truncated algebra with Q^1 = Q^1_2 + Q^1_3 (plus Q^1_1 when requested)."""
    names, deg, wt = [], [], []

    def add(nm, j, i):
        names.append(nm)
        deg.append(j)
        wt.append(i)
        return len(names) - 1

    x = [add(f"x{k + 1}", 1, 2) for k in range(n2)]
    y = [add(f"y{k + 1}", 1, 3) for k in range(n3)]
    s = [add(f"s{k + 1}", 2, 2) for k in range(rng.randint(0, 1))]
    u = [add(f"u{k + 1}", 2, 3) for k in range(n3 + rng.randint(0, 1))]
    z = [add(f"z{k + 1}", 2, 4) for k in range(rng.randint(1, 2))]
    if closed_q11:
        add("a1", 1, 1)
    d = {}
    for k, yk in enumerate(y):  # injective on Q^1_3
        d[yk] = {u[k]: Q(1)}
        if len(u) > n3 and rng.random() < 0.5:
            d[yk][u[-1]] = Q(rng.choice([1, -1]))
    if s:
        d[x[0]] = {s[0]: Q(1)}
    br = {}
    for i in range(n2):
        for j in range(i, n2):
            out = {zk: Q(rng.choice([0, 1, -1, 2])) for zk in z}
            out = {k: v for k, v in out.items() if v}
            if out:
                br[(x[i], x[j])] = out
    return WDGLA(names, deg, wt, d, br, label="qfix" + ("-impure" if closed_q11 else ""))


def grid_points(L: WDGLA, A: ArtinAlgebra, values=(-1, 0, 1), limit=None, rng=None):
    """All assignments of Q^1 x (t, t^2, ...) coefficients from ``values`` (or a sample)."""
    idx = L.block(1)
    slots = [(i, k) for i in idx for k in range(1, A.order)]
    total = len(values) ** len(slots)
    if limit is None or total <= limit:
        combos = product(values, repeat=len(slots))
    else:
        combos = (tuple(rng.choice(values) for _ in slots) for _ in range(limit))
    for combo in combos:
        eta = {}
        for (i, k), c in zip(slots, combo):
            if c:
                eta[i] = eta.get(i, A.zero()) + t_power(A, k, c)
        yield {i: v for i, v in eta.items() if v}


# --- complex cones -----------------------------------------------------------------------

def _rand_gauss(rng):
    return GaussianRational(rng.randint(-2, 2), rng.randint(-2, 2))


def _monomials(weights, degree):
    n = len(weights)
    out = []

    def rec(k, left, cur):
        if k == n:
            if left == 0:
                out.append(tuple(cur))
            return
        for e in range(left // weights[k] + 1):
            rec(k + 1, left - e * weights[k], cur + [e])
    rec(0, degree, [])
    return out


def random_complex_cone(rng: random.Random):
    """Homogeneous cone with Gaussian coefficients vanishing at a known point ``root``."""
    n = rng.randint(1, 3)
    weights = [rng.choice([1, 1, 2]) for _ in range(n)]
    names = [f"z{k + 1}" for k in range(n)]
    root = [_rand_gauss(rng) or GaussianRational(1, 1) for _ in range(n)]
    rels, degs = [], []
    for _ in range(rng.randint(1, 2)):
        deg = rng.choice([2, 3, 4])
        monos = _monomials(weights, deg)
        if not monos:
            continue
        terms = {}
        for m in rng.sample(monos, min(len(monos), 3)):
            c = _rand_gauss(rng)
            if c:
                terms[m] = c
        if not terms:
            terms[monos[0]] = GaussianRational(1, 0)
        p = Polynomial(n, terms)
        val = p.evaluate(root)
        if val:
            m = monos[0]
            mv = Polynomial(n, {m: GaussianRational(1, 0)}).evaluate(root)
            p = p - Polynomial(n, {m: val / mv})
        if p.terms:
            rels.append(p)
            degs.append(deg)
    if not rels:
        return random_complex_cone(rng)
    return WeightedCone(names, weights, rels, degs), root
