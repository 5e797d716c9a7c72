"""Finite bigraded DGLAs: structure, axiom checks, cohomology, sub-objects and morphisms.

Elements are sparse dicts {basis index: coefficient}; coefficients may be rationals
or ArtinElements, so the same bracket and differential serve the MC code.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..exactalg import Q, Subspace, identity, kernel_subspace, matrix, rank, scalar_str, to_scalar

__all__ = [
    "WDGLA", "AxiomReport", "check_dgla_axioms", "BlockCohomology", "Cohomology", "cohomology",
    "DGLAMorphism", "subalgebra", "quotient", "induced_on_cohomology", "is_one_quasi_iso",
    "quasi_iso_report", "NotClosed", "add_into", "scale_vec",
]


class NotClosed(ValueError):
    """A proposed sub-object is not stable under d or the bracket."""


def add_into(acc: dict, k, c):
    v = acc.get(k)
    v = c if v is None else v + c
    if v:
        acc[k] = v
    elif k in acc:
        del acc[k]


def scale_vec(x: dict, c) -> dict:
    out = {}
    for k, v in x.items():
        p = v * c
        if p:
            out[k] = p
    return out


class WDGLA:
    """Basis tagged by (degree, weight); d and bracket given by sparse structure constants.

    ``d`` maps j -> {i: coef} (d e_j = sum coef e_i).  ``bracket`` maps (a, b) ->
    {c: coef}; a missing (b, a) entry is filled by graded antisymmetry.  ``action``
    maps group-element names to dense matrices acting on column vectors.
    """

    def __init__(self, names, degrees, weights, d=None, bracket=None, action=None,
                 augmentation=None, label: str = "", g_spec=None):
        self.names = list(names)
        self.degrees = [int(x) for x in degrees]
        self.weights = [int(x) for x in weights]
        n = len(self.names)
        if not (len(self.degrees) == len(self.weights) == n):
            raise ValueError("names, degrees and weights must have equal length")
        if len(set(self.names)) != n:
            raise ValueError("basis names must be distinct")
        if any(x < 0 for x in self.degrees + self.weights):
            raise ValueError("degrees and weights must be non-negative")
        self.label = label
        self.g_spec = g_spec  # optional Lie algebra name/spec for weight checks
        self.d = {}
        for j, col in (d or {}).items():
            clean = {i: to_scalar(c) for i, c in col.items() if c}
            if clean:
                self.d[j] = clean
        self.bracket = {}
        for (a, b), out in (bracket or {}).items():
            clean = {c: to_scalar(v) for c, v in out.items() if v}
            if clean:
                self.bracket[(a, b)] = clean
        for (a, b), out in list(self.bracket.items()):
            if (b, a) not in self.bracket and a != b:
                s = -1 if (self.degrees[a] * self.degrees[b]) % 2 == 0 else 1
                self.bracket[(b, a)] = {c: s * v for c, v in out.items()}
        self._left: dict = {}
        for (a, b), out in self.bracket.items():
            self._left.setdefault(a, []).append((b, out))
        self.action = {k: matrix(M) for k, M in (action or {}).items()}
        self.augmentation = augmentation
        self.index = {nm: k for k, nm in enumerate(self.names)}

    # --- shape -------------------------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.names)

    def bidegree(self, k: int) -> tuple[int, int]:
        return self.degrees[k], self.weights[k]

    def block(self, j: int, i: int | None = None) -> list[int]:
        """Basis indices of degree j (and weight i when given)."""
        return [k for k in range(self.dim)
                if self.degrees[k] == j and (i is None or self.weights[k] == i)]

    def bidegrees(self) -> list[tuple[int, int]]:
        return sorted({(self.degrees[k], self.weights[k]) for k in range(self.dim)})

    def block_dims(self) -> dict:
        out: dict = {}
        for k in range(self.dim):
            key = (self.degrees[k], self.weights[k])
            out[key] = out.get(key, 0) + 1
        return out

    def unit(self, k: int) -> dict:
        return {k: Q(1)}

    # --- operations ---------------------------------------------------------------------
    def apply_d(self, x: dict) -> dict:
        out: dict = {}
        for j, c in x.items():
            col = self.d.get(j)
            if col:
                for i, v in col.items():
                    add_into(out, i, c * v)
        return out

    def br(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for a, ca in x.items():
            row = self._left.get(a)
            if not row:
                continue
            for b, res in row:
                cb = y.get(b)
                if cb is None:
                    continue
                p = ca * cb
                if not p:
                    continue
                for c, v in res.items():
                    add_into(out, c, p * v)
        return out

    def add(self, x: dict, y: dict) -> dict:
        out = dict(x)
        for k, v in y.items():
            add_into(out, k, v)
        return out

    def sub(self, x: dict, y: dict) -> dict:
        out = dict(x)
        for k, v in y.items():
            add_into(out, k, -v)
        return out

    def act(self, g: str, x: dict) -> dict:
        M = self.action[g]
        out: dict = {}
        for j, c in x.items():
            for i in range(self.dim):
                if M[i][j]:
                    add_into(out, i, M[i][j] * c)
        return out

    def d_matrix(self, rows: list[int], cols: list[int]):
        pos = {r: k for k, r in enumerate(rows)}
        M = [[Q(0)] * len(cols) for _ in rows]
        for c, j in enumerate(cols):
            for i, v in self.d.get(j, {}).items():
                if i in pos:
                    M[pos[i]][c] = v
        return M

    def vec_str(self, x: dict) -> str:
        if not x:
            return "0"
        parts = []
        for k in sorted(x):
            c = scalar_str(x[k]) if not hasattr(x[k], "alg") else f"({x[k]!r})"
            parts.append(self.names[k] if c == "1" else f"{c}*{self.names[k]}")
        return " + ".join(parts)

    def with_action(self, action) -> "WDGLA":
        return WDGLA(self.names, self.degrees, self.weights, self.d, self.bracket, action,
                     self.augmentation, self.label, self.g_spec)

    def __repr__(self):
        return f"WDGLA({self.label or 'anonymous'}, dim={self.dim}, blocks={self.block_dims()})"


def _dense(x: dict, idx: list[int]):
    return [x.get(k, Q(0)) for k in idx]


def _sparse(v, idx: list[int]) -> dict:
    return {k: c for k, c in zip(idx, v) if c}


# --- axioms -------------------------------------------------------------------------------

@dataclass
class AxiomReport:
    ok: bool
    violations: list = field(default_factory=list)
    truncated: bool = False

    def to_dict(self):
        return {"ok": self.ok, "violations": self.violations, "truncated": self.truncated}


def check_dgla_axioms(L: WDGLA, limit: int = 50, jacobi: bool = True) -> AxiomReport:
    """Every axiom checked exactly on all basis pairs/triples; first ``limit`` failures kept."""
    bad: list = []
    state = {"truncated": False}

    def report(axiom, where, detail=""):
        if len(bad) < limit:
            bad.append({"axiom": axiom, "where": where, "detail": detail})
        else:
            state["truncated"] = True

    n, deg, wt, nm = L.dim, L.degrees, L.weights, L.names
    for j, col in L.d.items():
        for i in col:
            if deg[i] != deg[j] + 1 or wt[i] != wt[j]:
                report("differential bidegree", f"d({nm[j]})", f"hits {nm[i]}")
    for (a, b), out in L.bracket.items():
        for c in out:
            if deg[c] != deg[a] + deg[b] or wt[c] != wt[a] + wt[b]:
                report("bracket bidegree", f"[{nm[a]},{nm[b]}]", f"hits {nm[c]}")
    for j in range(n):
        dd = L.apply_d(L.apply_d({j: Q(1)}))
        if dd:
            report("d^2 = 0", f"d(d({nm[j]}))", L.vec_str(dd))
    units = [{k: Q(1)} for k in range(n)]
    for a in range(n):
        for b in range(a, n):
            s = -1 if (deg[a] * deg[b]) % 2 == 0 else 1
            lhs = L.br(units[a], units[b])
            rhs = scale_vec(L.br(units[b], units[a]), s)
            if L.sub(lhs, rhs):
                report("antisymmetry", f"[{nm[a]},{nm[b]}]", L.vec_str(L.sub(lhs, rhs)))
    for a in range(n):
        da = L.apply_d(units[a])
        for b in range(n):
            lhs = L.apply_d(L.br(units[a], units[b]))
            sign = -1 if deg[a] % 2 else 1
            rhs = L.add(L.br(da, units[b]), scale_vec(L.br(units[a], L.apply_d(units[b])), sign))
            diff = L.sub(lhs, rhs)
            if diff:
                report("Leibniz", f"d[{nm[a]},{nm[b]}]", L.vec_str(diff))
    if jacobi:
        br_cache = {}
        for a in range(n):
            for b in range(n):
                r = L.br(units[a], units[b])
                if r:
                    br_cache[(a, b)] = r
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    yz = br_cache.get((y, z))
                    xy = br_cache.get((x, y))
                    xz = br_cache.get((x, z))
                    if not (yz or xy or xz):
                        continue
                    lhs = L.br(units[x], yz) if yz else {}
                    t1 = L.br(xy, units[z]) if xy else {}
                    t2 = L.br(units[y], xz) if xz else {}
                    s = -1 if (deg[x] * deg[y]) % 2 else 1
                    diff = L.sub(lhs, L.add(t1, scale_vec(t2, s)))
                    if diff:
                        report("Jacobi", f"({nm[x]},{nm[y]},{nm[z]})", L.vec_str(diff))
    for g, M in L.action.items():
        if len(M) != n or any(len(r) != n for r in M):
            report("action shape", g, f"expected {n}x{n}")
            continue
        if rank(M) != n:
            report("action invertible", g)
        for j in range(n):
            for i in range(n):
                if M[i][j] and (deg[i], wt[i]) != (deg[j], wt[j]):
                    report("action bidegree", f"{g}({nm[j]})", f"hits {nm[i]}")
        for j in range(n):
            if L.sub(L.act(g, L.apply_d(units[j])), L.apply_d(L.act(g, units[j]))):
                report("action commutes with d", f"{g}, {nm[j]}")
        for a in range(n):
            ga = L.act(g, units[a])
            for b in range(n):
                lhs = L.act(g, L.br(units[a], units[b]))
                rhs = L.br(ga, L.act(g, units[b]))
                if L.sub(lhs, rhs):
                    report("action preserves bracket", f"{g}, [{nm[a]},{nm[b]}]")
    return AxiomReport(not bad and not state["truncated"], bad, state["truncated"])


# --- cohomology ---------------------------------------------------------------------------

@dataclass
class BlockCohomology:
    degree: int
    weight: int
    indices: list  # basis indices of L^j_i
    Z: Subspace  # in block coordinates
    B: Subspace
    reps: Subspace  # echelon complement representatives

    @property
    def dim(self) -> int:
        return self.reps.dim

    def representatives(self) -> list[dict]:
        return [_sparse(v, self.indices) for v in self.reps.basis]

    def class_coordinates(self, x: dict):
        """Coordinates of the class of a cocycle x in the representative basis."""
        v = _dense(x, self.indices)
        if not self.Z.contains(v):
            raise ValueError("not a cocycle")
        return self.reps.coordinates(self.B.reduce(v))


class Cohomology:
    def __init__(self, L: WDGLA, blocks: dict):
        self.L = L
        self.blocks = blocks

    def dim(self, j: int, i: int | None = None) -> int:
        if i is None:
            return sum(b.dim for (jj, _), b in self.blocks.items() if jj == j)
        b = self.blocks.get((j, i))
        return b.dim if b else 0

    def dims(self) -> dict:
        return {k: b.dim for k, b in sorted(self.blocks.items()) if b.dim}

    def weights(self, j: int) -> set[int]:
        return {i for (jj, i), b in self.blocks.items() if jj == j and b.dim}

    def to_dict(self):
        return {
            "dims": [{"degree": j, "weight": i, "dim": d} for (j, i), d in self.dims().items()],
            "representatives": [
                {"degree": j, "weight": i, "classes": [self.L.vec_str(r) for r in b.representatives()]}
                for (j, i), b in sorted(self.blocks.items()) if b.dim],
        }


def _block_cohomology(L: WDGLA, j: int, i: int) -> BlockCohomology:
    idx = L.block(j, i)
    up = L.block(j + 1, i)
    down = L.block(j - 1, i) if j > 0 else []
    n = len(idx)
    if up:
        Z = kernel_subspace(L.d_matrix(up, idx), n)
    else:
        Z = Subspace.full(n)
    if down:
        Dm = L.d_matrix(idx, down)
        B = Subspace(n, [[Dm[r][c] for r in range(n)] for c in range(len(down))])
    else:
        B = Subspace(n)
    reps = Subspace(n, [B.reduce(v) for v in Z.basis])
    return BlockCohomology(j, i, idx, Z, B, reps)


def cohomology(L: WDGLA, degrees=None) -> Cohomology:
    blocks = {}
    for (j, i) in L.bidegrees():
        if degrees is None or j in degrees:
            blocks[(j, i)] = _block_cohomology(L, j, i)
    return Cohomology(L, blocks)


# --- morphisms, sub-objects, quotients ------------------------------------------------

class DGLAMorphism:
    """Linear map source -> target given as a dense (target.dim x source.dim) matrix."""

    def __init__(self, source: WDGLA, target: WDGLA, M):
        self.source = source
        self.target = target
        self.M = matrix(M) if M else [[] for _ in range(target.dim)]

    def apply(self, x: dict) -> dict:
        out: dict = {}
        for j, c in x.items():
            for i in range(self.target.dim):
                v = self.M[i][j]
                if v:
                    add_into(out, i, v * c)
        return out

    def problems(self, limit: int = 20) -> list[str]:
        S, T = self.source, self.target
        out = []
        if len(self.M) != T.dim or any(len(r) != S.dim for r in self.M):
            return [f"matrix must be {T.dim}x{S.dim}"]
        for j in range(S.dim):
            for i in range(T.dim):
                if self.M[i][j] and T.bidegree(i) != S.bidegree(j):
                    out.append(f"{S.names[j]} -> {T.names[i]} changes bidegree")
        for j in range(S.dim):
            e = {j: Q(1)}
            if T.sub(self.apply(S.apply_d(e)), T.apply_d(self.apply(e))):
                out.append(f"does not commute with d on {S.names[j]}")
        for a in range(S.dim):
            fa = self.apply({a: Q(1)})
            for b in range(S.dim):
                if T.sub(self.apply(S.br({a: Q(1)}, {b: Q(1)})), T.br(fa, self.apply({b: Q(1)}))):
                    out.append(f"does not preserve [{S.names[a]},{S.names[b]}]")
                    if len(out) >= limit:
                        return out
        return out[:limit]

    def is_morphism(self) -> bool:
        return not self.problems(limit=1)

    @classmethod
    def identity(cls, L: WDGLA):
        return cls(L, L, identity(L.dim))

    @classmethod
    def zero(cls, source: WDGLA, target: WDGLA):
        return cls(source, target, [[Q(0)] * source.dim for _ in range(target.dim)])


def _combo_name(L: WDGLA, idx, v) -> str:
    nz = [(k, c) for k, c in zip(idx, v) if c]
    if len(nz) == 1 and nz[0][1] == 1:
        return L.names[nz[0][0]]
    return "(" + L.vec_str(dict(nz)) + ")"


def subalgebra(L: WDGLA, spans: dict, label: str = "") -> tuple[WDGLA, DGLAMorphism]:
    """Sub-DGLA spanned blockwise; ``spans`` maps (degree, weight) -> block-coordinate vectors."""
    names, degs, wts, vecs, subs = [], [], [], [], {}
    for (j, i) in L.bidegrees():
        idx = L.block(j, i)
        S = Subspace(len(idx), spans.get((j, i), []))
        subs[(j, i)] = (idx, S, len(names))
        for v in S.basis:
            names.append(_combo_name(L, idx, v))
            degs.append(j)
            wts.append(i)
            vecs.append(_sparse(v, idx))
    if len(set(names)) != len(names):
        names = [f"s{k}" for k in range(len(names))]

    def coords(x: dict, what: str) -> dict:
        out = {}
        by_block: dict = {}
        for k, c in x.items():
            by_block.setdefault(L.bidegree(k), {})[k] = c
        for key, part in by_block.items():
            idx, S, off = subs[key]
            v = _dense(part, idx)
            if not S.contains(v):
                raise NotClosed(f"{what} leaves the subspace in bidegree {key}")
            for r, c in enumerate(S.coordinates(v)):
                if c:
                    out[off + r] = c
        return out

    d = {}
    for k, v in enumerate(vecs):
        dv = coords(L.apply_d(v), f"d({names[k]})")
        if dv:
            d[k] = dv
    br = {}
    for a, va in enumerate(vecs):
        for b, vb in enumerate(vecs):
            r = coords(L.br(va, vb), f"[{names[a]},{names[b]}]")
            if r:
                br[(a, b)] = r
    action = {}
    for g in L.action:
        rows = [[Q(0)] * len(vecs) for _ in vecs]
        for k, v in enumerate(vecs):
            for r, c in coords(L.act(g, v), f"{g}({names[k]})").items():
                rows[r][k] = c
        action[g] = rows
    S = WDGLA(names, degs, wts, d, br, action or None, None, label or f"sub({L.label})")
    M = [[Q(0)] * len(vecs) for _ in range(L.dim)]
    for k, v in enumerate(vecs):
        for i, c in v.items():
            M[i][k] = c
    return S, DGLAMorphism(S, L, M)


def quotient(L: WDGLA, ideal: dict, label: str = "") -> tuple[WDGLA, DGLAMorphism]:
    """L / I for a bigraded ideal I given blockwise as Subspaces in block coordinates."""
    for (j, i) in L.bidegrees():
        idx = L.block(j, i)
        I_blk = ideal.get((j, i), Subspace(len(idx)))
        for v in I_blk.basis:
            x = _sparse(v, idx)
            if not _in_ideal(L, ideal, L.apply_d(x)):
                raise NotClosed(f"d does not preserve the ideal in bidegree {(j, i)}")
            for k in range(L.dim):
                if not _in_ideal(L, ideal, L.br({k: Q(1)}, x)):
                    raise NotClosed(f"[{L.names[k]}, -] leaves the ideal in bidegree {(j, i)}")
    keep = []  # (basis index in L)
    proj = {}  # bidegree -> (idx, I, positions of kept coordinates)
    for (j, i) in L.bidegrees():
        idx = L.block(j, i)
        I_blk = ideal.get((j, i), Subspace(len(idx)))
        comp = I_blk.complement_indices()
        proj[(j, i)] = (idx, I_blk, comp, len(keep))
        keep.extend(idx[c] for c in comp)
    pos_of = {}
    for key, (idx, I_blk, comp, off) in proj.items():
        for r, c in enumerate(comp):
            pos_of[(key, c)] = off + r

    def pi(x: dict) -> dict:
        out = {}
        by_block: dict = {}
        for k, c in x.items():
            by_block.setdefault(L.bidegree(k), {})[k] = c
        for key, part in by_block.items():
            idx, I_blk, comp, off = proj[key]
            v = I_blk.reduce(_dense(part, idx))
            for r, c in enumerate(comp):
                if v[c]:
                    out[off + r] = v[c]
        return out

    names = [L.names[k] for k in keep]
    degs = [L.degrees[k] for k in keep]
    wts = [L.weights[k] for k in keep]
    d, br = {}, {}
    for a, ka in enumerate(keep):
        dv = pi(L.apply_d({ka: Q(1)}))
        if dv:
            d[a] = dv
        for b, kb in enumerate(keep):
            r = pi(L.br({ka: Q(1)}, {kb: Q(1)}))
            if r:
                br[(a, b)] = r
    Qa = WDGLA(names, degs, wts, d, br, None, None, label or f"quot({L.label})")
    M = [[Q(0)] * L.dim for _ in keep]
    for j in range(L.dim):
        for r, c in pi({j: Q(1)}).items():
            M[r][j] = c
    return Qa, DGLAMorphism(L, Qa, M)


def _in_ideal(L: WDGLA, ideal: dict, x: dict) -> bool:
    by_block: dict = {}
    for k, c in x.items():
        by_block.setdefault(L.bidegree(k), {})[k] = c
    for key, part in by_block.items():
        idx = L.block(*key)
        I_blk = ideal.get(key, Subspace(len(idx)))
        if not I_blk.contains(_dense(part, idx)):
            return False
    return True


# --- induced maps ----------------------------------------------------------------------

def induced_on_cohomology(phi: DGLAMorphism, j: int, HS: Cohomology | None = None,
                          HT: Cohomology | None = None) -> dict:
    """Per weight i: (matrix of H^j_i(phi), dim source, dim target)."""
    HS = HS or cohomology(phi.source, degrees={j})
    HT = HT or cohomology(phi.target, degrees={j})
    weights = {i for (jj, i) in HS.blocks if jj == j} | {i for (jj, i) in HT.blocks if jj == j}
    out = {}
    for i in sorted(weights):
        bs, bt = HS.blocks.get((j, i)), HT.blocks.get((j, i))
        ds = bs.dim if bs else 0
        dt = bt.dim if bt else 0
        cols = []
        if bs and bt:
            for r in bs.representatives():
                cols.append(bt.class_coordinates(phi.apply(r)))
        elif bs:
            cols = [[] for _ in range(ds)]
        Mx = [[cols[c][r] for c in range(ds)] for r in range(dt)]
        out[i] = (Mx, ds, dt)
    return out


def quasi_iso_report(phi: DGLAMorphism) -> dict:
    probs = phi.problems(limit=5)
    if probs:
        raise ValueError("not a DGLA morphism: " + "; ".join(probs))
    HS = cohomology(phi.source, degrees={0, 1, 2})
    HT = cohomology(phi.target, degrees={0, 1, 2})
    rep = {"ok": True, "degrees": {}}
    for j in (0, 1, 2):
        entries = []
        for i, (Mx, ds, dt) in induced_on_cohomology(phi, j, HS, HT).items():
            rk = rank(Mx) if Mx and ds else 0
            good = (rk == ds == dt) if j < 2 else (rk == ds)
            entries.append({"weight": i, "source": ds, "target": dt, "rank": rk, "ok": good})
            rep["ok"] = rep["ok"] and good
        rep["degrees"][j] = entries
    return rep


def is_one_quasi_iso(phi: DGLAMorphism) -> bool:
    """Iso on H^0 and H^1, injective on H^2 (blockwise over weights)."""
    return quasi_iso_report(phi)["ok"]
