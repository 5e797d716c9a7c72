"""Constructors: graded-commutative algebras, exterior/Chevalley-Eilenberg algebras,
graded nilpotent Lie algebras and tensor products A (x) g."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from ..exactalg import Q, Subspace, inverse, kron, mat_mul, mat_sub, matrix, rref, to_scalar, transpose
from ..grouprep import LinearGroupData
from .algebra import WDGLA, add_into

__all__ = [
    "GradedAlgebra", "check_cdga_axioms", "ground_field", "exterior_algebra", "GradedLie",
    "graded_lie_from_matrices", "chevalley_eilenberg", "lie_dgla", "tensor_dgla",
]


class GradedAlgebra:
    """Finite graded-commutative algebra with differential; basis tagged (degree, weight)."""

    def __init__(self, names, degrees, weights, mult, d=None, action=None, unit: int | None = 0):
        self.names = list(names)
        self.degrees = list(degrees)
        self.weights = list(weights)
        self.mult = {k: {c: to_scalar(v) for c, v in out.items() if v} for k, out in mult.items()}
        self.mult = {k: v for k, v in self.mult.items() if v}
        self.d = {j: {i: to_scalar(c) for i, c in col.items() if c} for j, col in (d or {}).items()}
        self.action = {k: matrix(M) for k, M in (action or {}).items()}
        self.unit = unit

    @property
    def dim(self) -> int:
        return len(self.names)

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                r = self.mult.get((a, b))
                if r:
                    for c, v in r.items():
                        add_into(out, c, ca * cb * v)
        return out

    def apply_d(self, x: dict) -> dict:
        out: dict = {}
        for j, c in x.items():
            for i, v in self.d.get(j, {}).items():
                add_into(out, i, c * v)
        return out


def check_cdga_axioms(A: GradedAlgebra) -> list[str]:
    bad = []
    n = A.dim
    u = [{k: Q(1)} for k in range(n)]
    for (a, b), out in A.mult.items():
        for c in out:
            if A.degrees[c] != A.degrees[a] + A.degrees[b] or A.weights[c] != A.weights[a] + A.weights[b]:
                bad.append(f"product {A.names[a]}*{A.names[b]} breaks the grading")
    for j, col in A.d.items():
        for i in col:
            if A.degrees[i] != A.degrees[j] + 1 or A.weights[i] != A.weights[j]:
                bad.append(f"d({A.names[j]}) breaks the grading")
    for a in range(n):
        if A.apply_d(A.apply_d(u[a])):
            bad.append(f"d^2 != 0 on {A.names[a]}")
        for b in range(n):
            s = -1 if (A.degrees[a] * A.degrees[b]) % 2 else 1
            ab, ba = A.mul(u[a], u[b]), A.mul(u[b], u[a])
            if any(ab.get(k, 0) != s * ba.get(k, 0) for k in set(ab) | set(ba)):
                bad.append(f"{A.names[a]}*{A.names[b]} not graded commutative")
            sa = -1 if A.degrees[a] % 2 else 1
            lhs = A.apply_d(ab)
            rhs = A.mul(A.apply_d(u[a]), u[b])
            for k, v in A.mul(u[a], A.apply_d(u[b])).items():
                add_into(rhs, k, sa * v)
            if any(lhs.get(k, 0) != rhs.get(k, 0) for k in set(lhs) | set(rhs)):
                bad.append(f"Leibniz fails on {A.names[a]}, {A.names[b]}")
            for c in range(n):
                if A.mul(A.mul(u[a], u[b]), u[c]) != A.mul(u[a], A.mul(u[b], u[c])):
                    bad.append(f"associativity fails on {A.names[a]}, {A.names[b]}, {A.names[c]}")
    return bad


def ground_field() -> GradedAlgebra:
    return GradedAlgebra(["1"], [0], [0], {(0, 0): {0: 1}})


def _sign_merge(S, T):
    """Sign of sorting the concatenation S+T of disjoint sorted tuples, and the result."""
    inv = sum(1 for s in S for t in T if s > t)
    return (-1 if inv % 2 else 1), tuple(sorted(S + T))


def exterior_algebra(gen_names, gen_weights=None, dgen=None, max_degree: int | None = None,
                     gen_action=None) -> GradedAlgebra:
    """Exterior algebra on degree-1 generators, truncated above ``max_degree``.

    ``dgen`` maps a generator index to {(i, j): coef} with i < j, meaning
    d x_k = sum coef x_i x_j; d is extended as a derivation.  ``gen_action`` maps a
    group element to an n x n matrix acting on the generators (extended to wedges).
    """
    n = len(gen_names)
    gw = list(gen_weights) if gen_weights is not None else [1] * n
    top = n if max_degree is None else min(n, max_degree)
    subsets = [S for k in range(top + 1) for S in combinations(range(n), k)]
    pos = {S: k for k, S in enumerate(subsets)}
    names = ["1" if not S else "^".join(gen_names[s] for s in S) for S in subsets]
    degrees = [len(S) for S in subsets]
    weights = [sum(gw[s] for s in S) for S in subsets]
    mult = {}
    for S in subsets:
        for T in subsets:
            if set(S) & set(T) or len(S) + len(T) > top:
                continue
            sgn, U = _sign_merge(S, T)
            mult[(pos[S], pos[T])] = {pos[U]: sgn}
    d = {}
    if dgen:
        for S in subsets:
            col: dict = {}
            for p, s in enumerate(S):
                for (i, j), c in dgen.get(s, {}).items():
                    # x_{s_1}..x_{s_{p-1}} (x_i x_j) x_{s_{p+1}}.., sign (-1)^p from moving d past
                    rest_before, rest_after = S[:p], S[p + 1:]
                    if len(S) + 1 > top:
                        continue
                    if {i, j} & (set(rest_before) | set(rest_after)):
                        continue
                    sg1, U1 = _sign_merge(rest_before, (i, j) if i < j else (j, i))
                    if i > j:
                        sg1 = -sg1
                    sg2, U2 = _sign_merge(U1, rest_after)
                    sign = (-1) ** p * sg1 * sg2
                    add_into(col, pos[U2], sign * to_scalar(c))
            if col:
                d[pos[S]] = col
    action = {}
    for g, M in (gen_action or {}).items():
        M = matrix(M)
        big = [[Q(0)] * len(subsets) for _ in subsets]
        for S in subsets:
            # image of x_S = wedge of columns of M
            images = {(): Q(1)}
            for s in S:
                nxt: dict = {}
                for U, c in images.items():
                    for r in range(n):
                        if M[r][s] and r not in U:
                            sg, V = _sign_merge(U, (r,))
                            add_into(nxt, V, sg * c * M[r][s])
                images = nxt
            for U, c in images.items():
                big[pos[U]][pos[S]] = c
        action[g] = big
    return GradedAlgebra(names, degrees, weights, mult, d, action, unit=0)


@dataclass
class GradedLie:
    names: list
    weights: list
    bracket: dict  # (i, j) -> {k: coef}
    matrices: list | None = None


def graded_lie_from_matrices(size: int, generators, max_dim: int = 40) -> GradedLie:
    """Lie algebra generated by (weight, strictly upper triangular matrix) pairs.

    Matrices supported on the w-th superdiagonal get weight w; the span is closed under
    commutators, homogeneous weight by weight.
    """
    def flat(M):
        return [x for r in M for x in r]

    by_weight: dict = {}
    for w, M in generators:
        M = matrix(M)
        for i in range(size):
            for j in range(size):
                if M[i][j] and j - i != w:
                    raise ValueError("generator is not supported on its superdiagonal")
        by_weight.setdefault(w, []).append(M)
    spans: dict = {}
    basis: dict = {}

    def add(w, M):
        S = spans.get(w, Subspace(size * size))
        v = flat(M)
        if any(v) and not S.contains(v):
            spans[w] = Subspace(size * size, S.basis + [v])
            basis.setdefault(w, []).append(M)
            return True
        return False

    queue = [(w, M) for w, Ms in sorted(by_weight.items()) for M in Ms]
    for w, M in queue:
        add(w, M)
    changed = True
    while changed:
        changed = False
        items = [(w, M) for w in sorted(basis) for M in basis[w]]
        for w1, A in items:
            for w2, B in items:
                C = mat_sub(mat_mul(A, B), mat_mul(B, A))
                if add(w1 + w2, C):
                    changed = True
                    if sum(len(v) for v in basis.values()) > max_dim:
                        raise ValueError("generated Lie algebra is too large")
    mats, weights = [], []
    for w in sorted(basis):
        for M in basis[w]:
            mats.append(M)
            weights.append(w)
    n = len(mats)
    # coordinates through one joint echelon form
    flats = [flat(M) for M in mats]
    aug = [row + [Q(int(i == j)) for j in range(n)] for i, row in enumerate(flats)]
    R, piv = rref(aug, size * size)

    def coords(M):
        v = flat(M)
        r = [v[p] for p in piv]
        return [sum((r[k] * R[k][size * size + i] for k in range(len(piv)) if r[k]), Q(0)) for i in range(n)]

    bracket = {}
    for i in range(n):
        for j in range(n):
            C = mat_sub(mat_mul(mats[i], mats[j]), mat_mul(mats[j], mats[i]))
            c = coords(C)
            out = {k: x for k, x in enumerate(c) if x}
            if out:
                bracket[(i, j)] = out
    names = [f"h{k + 1}" for k in range(n)]
    return GradedLie(names, weights, bracket, mats)


def chevalley_eilenberg(h: GradedLie, max_degree: int | None = None, dual_names=None,
                        action=None) -> GradedAlgebra:
    """Lambda(h*) with d xi^k = -sum_{i<j} c^k_ij xi^i xi^j; xi^k has the weight of h_k."""
    n = len(h.names)
    names = dual_names or [f"x{k + 1}" for k in range(n)]
    dgen: dict = {}
    for (i, j), out in h.bracket.items():
        if i < j:
            for k, c in out.items():
                add_into(dgen.setdefault(k, {}), (i, j), -c)
    gen_action = None
    if action:
        # dual action on h*: transpose of the inverse
        gen_action = {g: transpose(inverse(matrix(M))) for g, M in action.items()}
    return exterior_algebra(names, h.weights, dgen, max_degree, gen_action)


def lie_dgla(g, label: str | None = None, action=None) -> WDGLA:
    """A Lie algebra placed in degree 0, weight 0."""
    if isinstance(g, WDGLA):
        return g
    if isinstance(g, LinearGroupData):
        br = {}
        for i in range(g.dim):
            for j in range(g.dim):
                out = {k: c for k, c in enumerate(g.structure[i][j]) if c}
                if out:
                    br[(i, j)] = out
        return WDGLA(g.names, [0] * g.dim, [0] * g.dim, {}, br, action, label=label or g.label)
    if isinstance(g, GradedLie):
        return WDGLA(g.names, [0] * len(g.names), [0] * len(g.names), {}, g.bracket, action,
                     label=label or "lie")
    raise TypeError("expected LinearGroupData, GradedLie or WDGLA")


def tensor_dgla(A: GradedAlgebra, g, positive_only: bool = False, label: str = "") -> WDGLA:
    """A (x) g with [a(x)u, b(x)v] = ab (x) [u,v] and d(a(x)u) = da (x) u.

    With ``positive_only`` only A^{>0} (x) g is kept (an ideal: the augmented kernel
    when A^0 is the ground field).  Group actions present on both factors under the
    same names are tensored.
    """
    bad = check_cdga_axioms(A)
    if bad:
        raise ValueError("graded algebra axioms fail: " + "; ".join(bad[:3]))
    G = lie_dgla(g)
    if any(x for x in G.degrees):
        raise ValueError("the Lie factor must sit in degree 0")
    a_idx = [a for a in range(A.dim) if not positive_only or A.degrees[a] > 0]
    pairs = [(a, u) for a in a_idx for u in range(G.dim)]
    pos = {p: k for k, p in enumerate(pairs)}
    names = [f"{A.names[a]}.{G.names[u]}" if A.names[a] != "1" else G.names[u] for a, u in pairs]
    degrees = [A.degrees[a] for a, u in pairs]
    weights = [A.weights[a] + G.weights[u] for a, u in pairs]
    d = {}
    for k, (a, u) in enumerate(pairs):
        col = {}
        for i, c in A.d.get(a, {}).items():
            if (i, u) in pos:
                col[pos[(i, u)]] = c
        if col:
            d[k] = col
    br = {}
    for (a, b), prod_ab in A.mult.items():
        if a not in a_idx or b not in a_idx:
            continue
        for (u, v), uv in G.bracket.items():
            out = {}
            for c, x in prod_ab.items():
                for w, y in uv.items():
                    if (c, w) in pos:
                        add_into(out, pos[(c, w)], x * y)
            if out:
                br[(pos[(a, u)], pos[(b, v)])] = out
    action = {}
    for name in set(A.action) & set(G.action):
        MA = [[A.action[name][i][j] for j in a_idx] for i in a_idx]
        action[name] = kron(MA, G.action[name])
    return WDGLA(names, degrees, weights, d, br, action or None, label=label or "tensor")
