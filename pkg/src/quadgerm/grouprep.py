"""Finitely presented groups, Fox calculus and matrix representations.

A representation is given by its generator images together with a bracket-closed
basis of a matrix Lie algebra g; formal points near rho are rho(g) exp(g (x) m).
"""

from __future__ import annotations

import ast
import re
from collections import deque
from dataclasses import dataclass, field

from .exactalg import (
    ArtinAlgebra, ArtinElement, ArtinMatrix, Q, identity, inverse, mat_mul, matrix,
    matrix_exp_truncated, rref, scalar_str,
)

__all__ = [
    "ParseError", "Word", "free_reduce", "word_inverse", "word_str", "Presentation",
    "parse_presentation", "LinearGroupData", "Representation", "parse_representation",
    "evaluate_word", "fox_derivative", "group_ring_mul", "ad_action",
    "check_representation", "RepresentationReport",
]

Word = tuple  # tuple of (generator index, +1 | -1)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def free_reduce(word) -> Word:
    out: list = []
    for letter in word:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(tuple(letter))
    return tuple(out)


def word_inverse(word) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


def word_str(word, names) -> str:
    if not word:
        return "1"
    return " ".join(names[g] if e == 1 else f"{names[g]}^-1" for g, e in word)


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple = ()

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("generator names must be distinct")
        rels = tuple(free_reduce(r) for r in self.relators)
        for r in rels:
            for g, e in r:
                if not 0 <= g < len(self.generators) or e not in (1, -1):
                    raise ValueError(f"bad letter {(g, e)} in relator")
        object.__setattr__(self, "relators", rels)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise KeyError(f"unknown generator {name!r}") from None

    def word(self, text: str) -> Word:
        """Parse 'a b a^-1 b^-1' (also a^2, a^-3) into a freely reduced word."""
        letters = []
        for tok in text.split():
            name, _, exp = tok.partition("^")
            k = int(exp) if exp else 1
            g = self.index(name)
            letters.extend([(g, 1 if k > 0 else -1)] * abs(k))
        return free_reduce(letters)

    def relator_str(self, k: int) -> str:
        return word_str(self.relators[k], self.generators)


def _parse_letters(tokens, gens, lineno, line):
    letters = []
    pos = 0
    for tok in tokens:
        col = line.index(tok, pos) + 1
        pos = col - 1 + len(tok)
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?", tok)
        if not m:
            raise ParseError(f"malformed letter {tok!r}", lineno, col)
        name, exp = m.group(1), m.group(2)
        if name not in gens:
            raise ParseError(f"unknown generator {name!r}", lineno, col)
        k = int(exp) if exp is not None else 1
        if k == 0:
            raise ParseError("zero exponent", lineno, col)
        g = gens.index(name)
        letters.extend([(g, 1 if k > 0 else -1)] * abs(k))
    return letters


def parse_presentation(text: str) -> Presentation:
    """Parse 'gens a b' followed by 'rel ...' lines; '#' starts a comment."""
    gens = None
    rels = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = line.split()
        head = tokens[0]
        col = line.index(head) + 1
        if head == "gens":
            if gens is not None:
                raise ParseError("duplicate 'gens' line", lineno, col)
            names = tokens[1:]
            pos = col + len(head)
            for n in names:
                c = line.index(n, pos) + 1
                pos = c - 1 + len(n)
                if not _IDENT.fullmatch(n):
                    raise ParseError(f"invalid generator name {n!r}", lineno, c)
            if len(set(names)) != len(names):
                raise ParseError("generator names must be distinct", lineno, col)
            gens = names
        elif head == "rel":
            if gens is None:
                raise ParseError("'rel' before 'gens'", lineno, col)
            rels.append(_parse_letters(tokens[1:], gens, lineno, line))
        else:
            raise ParseError(f"unexpected keyword {head!r}", lineno, col)
    if gens is None:
        raise ParseError("missing 'gens' line", 1, 1)
    return Presentation(tuple(gens), tuple(rels))


# --- group ring / Fox calculus -------------------------------------------------

def _word_mul(u, v) -> Word:
    return free_reduce(tuple(u) + tuple(v))


def group_ring_mul(x: dict, y: dict) -> dict:
    out: dict = {}
    for u, a in x.items():
        for v, b in y.items():
            w = _word_mul(u, v)
            out[w] = out.get(w, 0) + a * b
    return {w: c for w, c in out.items() if c}


def fox_derivative(word, g: int) -> dict:
    """Fox derivative d(word)/d(g) as {freely reduced word: integer}."""
    out: dict = {}
    prefix: list = []
    for h, e in word:
        if h == g:
            if e == 1:
                key = free_reduce(prefix)
                out[key] = out.get(key, 0) + 1
            else:
                key = free_reduce(prefix + [(h, -1)])
                out[key] = out.get(key, 0) - 1
        prefix.append((h, e))
    return {w: c for w, c in out.items() if c}


# --- Lie algebra data -------------------------------------------------------------

def _flat(M):
    return [x for row in M for x in row]


def _commutator(A, B):
    AB, BA = mat_mul(A, B), mat_mul(B, A)
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(AB, BA)]


class LinearGroupData:
    """A matrix Lie algebra: d x d basis b_1..b_l closed under commutators."""

    def __init__(self, d: int, basis, names=None, label: str | None = None):
        self.d = d
        self.basis = [matrix(b) for b in basis]
        for b in self.basis:
            if len(b) != d or any(len(r) != d for r in b):
                raise ValueError(f"basis matrices must be {d}x{d}")
        self.dim = len(self.basis)
        self.names = list(names) if names else [f"b{k}" for k in range(self.dim)]
        self.label = label or "custom"
        flat = [_flat(b) for b in self.basis]
        aug = [row + [Q(int(i == j)) for j in range(self.dim)] for i, row in enumerate(flat)]
        R, piv = rref(aug, d * d)
        if len(piv) < self.dim or any(p >= d * d for p in piv):
            raise ValueError("Lie algebra basis is linearly dependent")
        self._pivots = piv
        self._transform = [row[d * d:] for row in R]
        self._echelon = [row[: d * d] for row in R]
        self.structure = [[None] * self.dim for _ in range(self.dim)]
        for i in range(self.dim):
            for j in range(self.dim):
                c = self.coordinates(_commutator(self.basis[i], self.basis[j]))
                if c is None:
                    raise ValueError(f"basis not bracket-closed: [{self.names[i]}, {self.names[j]}]")
                self.structure[i][j] = c

    @classmethod
    def gl(cls, d: int):
        basis, names = [], []
        for i in range(d):
            for j in range(d):
                E = [[Q(0)] * d for _ in range(d)]
                E[i][j] = Q(1)
                basis.append(E)
                names.append(f"E{i + 1}{j + 1}")
        return cls(d, basis, names, label=f"gl{d}")

    @classmethod
    def sl(cls, d: int):
        basis, names = [], []
        if d == 2:
            basis = [[[0, 1], [0, 0]], [[0, 0], [1, 0]], [[1, 0], [0, -1]]]
            return cls(2, basis, ["e", "f", "h"], label="sl2")
        pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
        for i, j in pairs + [(j, i) for i, j in pairs]:
            E = [[Q(0)] * d for _ in range(d)]
            E[i][j] = Q(1)
            basis.append(E)
            names.append(f"E{i + 1}{j + 1}")
        for k in range(d - 1):
            H = [[Q(0)] * d for _ in range(d)]
            H[k][k], H[k + 1][k + 1] = Q(1), Q(-1)
            basis.append(H)
            names.append(f"H{k + 1}")
        return cls(d, basis, names, label=f"sl{d}")

    @classmethod
    def named(cls, name: str):
        m = re.fullmatch(r"\s*(gl|sl)\s*_?\s*(\d+)\s*", name)
        if not m:
            raise ValueError(f"unknown Lie algebra {name!r} (expected gl<d> or sl<d>)")
        kind, d = m.group(1), int(m.group(2))
        if not 1 <= d <= 4 or (kind == "sl" and d < 2):
            raise ValueError(f"built-in Lie algebras cover d <= 4, got {name!r}")
        return cls.gl(d) if kind == "gl" else cls.sl(d)

    def coordinates(self, X):
        """Coordinates of the matrix X in the basis, or None if X is outside the span."""
        v = _flat(X)
        r = [v[p] for p in self._pivots]
        resid = list(v)
        for coef, row in zip(r, self._echelon):
            if coef:
                resid = [a - coef * b for a, b in zip(resid, row)]
        if any(resid):
            return None
        return [sum((r[k] * self._transform[k][i] for k in range(self.dim) if r[k]), Q(0))
                for i in range(self.dim)]

    def coordinates_unchecked(self, X):
        v = _flat(X)
        r = [v[p] for p in self._pivots]
        return [sum((r[k] * self._transform[k][i] for k in range(self.dim) if r[k]), Q(0))
                for i in range(self.dim)]

    def element(self, coords):
        out = [[Q(0)] * self.d for _ in range(self.d)]
        for c, b in zip(coords, self.basis):
            if c:
                out = [[x + c * y for x, y in zip(r1, r2)] for r1, r2 in zip(out, b)]
        return out

    def bracket_coords(self, x, y):
        out = [Q(0)] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if b:
                    ab = a * b
                    for k, c in enumerate(self.structure[i][j]):
                        if c:
                            out[k] += ab * c
        return out

    def jacobi_holds(self) -> bool:
        n = self.dim
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    e = [[Q(int(t == s)) for t in range(n)] for s in (i, j, k)]
                    a = self.bracket_coords(e[0], self.bracket_coords(e[1], e[2]))
                    b = self.bracket_coords(e[1], self.bracket_coords(e[2], e[0]))
                    c = self.bracket_coords(e[2], self.bracket_coords(e[0], e[1]))
                    if any(x + y + z for x, y, z in zip(a, b, c)):
                        return False
        return True

    def __repr__(self):
        return f"LinearGroupData({self.label}, d={self.d}, dim={self.dim})"


# --- representations -------------------------------------------------------------

class Representation:
    def __init__(self, presentation: Presentation, lie: LinearGroupData, images):
        self.presentation = presentation
        self.lie = lie
        if len(images) != presentation.ngens:
            raise ValueError("need one image per generator")
        self.images = [matrix(M) for M in images]
        for name, M in zip(presentation.generators, self.images):
            if len(M) != lie.d or any(len(r) != lie.d for r in M):
                raise ValueError(f"image of {name!r} is not {lie.d}x{lie.d}")
        self.inverses = []
        for name, M in zip(presentation.generators, self.images):
            try:
                self.inverses.append(inverse(M))
            except ZeroDivisionError:
                raise ValueError(f"image of {name!r} is singular") from None
        self._ad = [self._conj_matrix(M, Mi) for M, Mi in zip(self.images, self.inverses)]
        self._ad_inv = [self._conj_matrix(Mi, M) for M, Mi in zip(self.images, self.inverses)]

    def _conj_matrix(self, M, Minv):
        cols = []
        for b in self.lie.basis:
            c = self.lie.coordinates(mat_mul(mat_mul(M, b), Minv))
            if c is None:
                return None
            cols.append(c)
        return [[cols[j][i] for j in range(len(cols))] for i in range(self.lie.dim)]

    @property
    def ad_closed(self) -> bool:
        return all(a is not None for a in self._ad) and all(a is not None for a in self._ad_inv)

    def ad_letter(self, g: int, e: int):
        A = self._ad[g] if e == 1 else self._ad_inv[g]
        if A is None:
            name = self.presentation.generators[g]
            raise ValueError(f"conjugation by the image of {name!r} leaves the Lie algebra")
        return A

    def word_matrix(self, word):
        out = identity(self.lie.d)
        for g, e in word:
            out = mat_mul(out, self.images[g] if e == 1 else self.inverses[g])
        return out

    @classmethod
    def trivial(cls, presentation: Presentation, lie: LinearGroupData):
        return cls(presentation, lie, [identity(lie.d) for _ in range(presentation.ngens)])


def ad_action(rep: Representation, word):
    """Matrix of X -> rho(w) X rho(w)^-1 in the Lie basis."""
    out = identity(rep.lie.dim)
    for g, e in word:
        out = mat_mul(out, rep.ad_letter(g, e))
    return out


def evaluate_word(rep: Representation, word, ring=None, perturbation=None):
    """Evaluate a word with generator g sent to rho(g) exp(u_g).

    ``ring`` None gives a rational matrix; an ArtinAlgebra gives an ArtinMatrix.
    ``perturbation`` maps generator index -> Lie coordinates (ArtinElements in m)
    or an ArtinMatrix already in g (x) m.
    """
    word = free_reduce(word)
    if ring is None:
        if perturbation:
            raise ValueError("a perturbation needs an Artin algebra")
        return rep.word_matrix(word)
    if not isinstance(ring, ArtinAlgebra):
        raise TypeError("ring must be None or an ArtinAlgebra")
    factors = {}
    for g in range(rep.presentation.ngens):
        base = ArtinMatrix.constant(ring, rep.images[g])
        base_inv = ArtinMatrix.constant(ring, rep.inverses[g])
        u = (perturbation or {}).get(g)
        if u is None:
            factors[(g, 1)], factors[(g, -1)] = base, base_inv
            continue
        U = _lie_artin_matrix(rep.lie, ring, u)
        E, Einv = matrix_exp_truncated(U), matrix_exp_truncated(-U)
        factors[(g, 1)] = base @ E
        factors[(g, -1)] = Einv @ base_inv
    out = ArtinMatrix.identity(ring, rep.lie.d)
    for letter in word:
        out = out @ factors[letter]
    return out


def _lie_artin_matrix(lie: LinearGroupData, ring: ArtinAlgebra, u) -> ArtinMatrix:
    if isinstance(u, ArtinMatrix):
        if not u.in_maximal_ideal():
            raise ValueError("perturbation must lie in g (x) m")
        return u
    if len(u) != lie.dim:
        raise ValueError("perturbation needs one coefficient per Lie basis element")
    out = ArtinMatrix(ring, lie.d, lie.d, {})
    for c, b in zip(u, lie.basis):
        if not isinstance(c, ArtinElement):
            c = ring.scalar(c)
        if c.alg is not ring:
            raise ValueError("perturbation coefficient from a different algebra")
        if not c.in_maximal_ideal():
            raise ValueError("perturbation coefficient not in the maximal ideal")
        if c:
            out = out + ArtinMatrix.constant(ring, b).scale_by_element(c)
    return out


@dataclass
class RepresentationReport:
    relators_ok: bool
    failed_relators: list = field(default_factory=list)
    ad_closed: bool = True
    ad_failures: list = field(default_factory=list)
    image_order: int | None = None
    image_bound_exceeded: bool = False

    @property
    def valid(self) -> bool:
        return self.relators_ok and self.ad_closed

    def to_dict(self):
        return {
            "valid": self.valid,
            "relators_ok": self.relators_ok,
            "failed_relators": self.failed_relators,
            "ad_closed": self.ad_closed,
            "ad_failures": self.ad_failures,
            "image_order": self.image_order,
            "image_bound_exceeded": self.image_bound_exceeded,
        }


def _key(M):
    return tuple(tuple(r) for r in M)


DEFAULT_IMAGE_BOUND = 10_000


def check_representation(rep: Representation, finite_image_bound: int | None = DEFAULT_IMAGE_BOUND) -> RepresentationReport:
    """Relator and Ad-closure checks; closes up the image when a bound is given (None skips)."""
    pres = rep.presentation
    failed = []
    I_d = identity(rep.lie.d)
    for k, r in enumerate(pres.relators):
        if rep.word_matrix(r) != I_d:
            failed.append(pres.relator_str(k))
    ad_fail = [pres.generators[g] for g in range(pres.ngens)
               if rep._ad[g] is None or rep._ad_inv[g] is None]
    report = RepresentationReport(not failed, failed, not ad_fail, ad_fail)
    if finite_image_bound is not None:
        seen = {_key(I_d)}
        queue = deque([I_d])
        gens = rep.images + rep.inverses
        exceeded = False
        while queue and not exceeded:
            M = queue.popleft()
            for G in gens:
                P = mat_mul(M, G)
                k = _key(P)
                if k not in seen:
                    seen.add(k)
                    if len(seen) > finite_image_bound:
                        exceeded = True
                        break
                    queue.append(P)
        report.image_bound_exceeded = exceeded
        report.image_order = None if exceeded else len(seen)
    return report


# --- representation files ---------------------------------------------------------

def parse_matrix_literal(text: str):
    """Parse '[[1, 0], [0, -1/2]]' into a rational matrix."""
    try:
        tree = ast.parse(text.strip(), mode="eval").body
    except SyntaxError as exc:
        raise ValueError(f"malformed matrix {text!r}") from exc

    def num(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Q(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -num(node.operand)
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
            return num(node.left) / num(node.right)
        raise ValueError(f"non-rational entry in {text!r}")

    if not isinstance(tree, ast.List) or not tree.elts:
        raise ValueError(f"expected a nested list, got {text!r}")
    rows = []
    for r in tree.elts:
        if not isinstance(r, ast.List):
            raise ValueError(f"expected a nested list, got {text!r}")
        rows.append([num(x) for x in r.elts])
    if len({len(r) for r in rows}) != 1:
        raise ValueError(f"ragged matrix {text!r}")
    return rows


def _split_literals(text: str):
    out, depth, start = [], 0, None
    for k, ch in enumerate(text):
        if ch == "[":
            if depth == 0:
                start = k
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth == 0:
                out.append((start, text[start:k + 1]))
            if depth < 0:
                raise ValueError("unbalanced brackets")
    if depth != 0:
        raise ValueError("unbalanced brackets")
    return out


def parse_representation(text: str, presentation: Presentation) -> Representation:
    """Parse 'dim d', 'liealg <name | [[..]] ...>', 'basis [[..]]', 'gen a = [[..]]'."""
    d = None
    lie_name = None
    basis = []
    images: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        head = line.split()[0]
        col = line.index(head) + 1
        rest = line[line.index(head) + len(head):]
        try:
            if head == "dim":
                d = int(rest.strip())
            elif head == "liealg":
                if "[" in rest:
                    basis.extend(parse_matrix_literal(t) for _, t in _split_literals(rest))
                else:
                    lie_name = rest.strip()
            elif head == "basis":
                basis.extend(parse_matrix_literal(t) for _, t in _split_literals(rest))
            elif head == "gen":
                m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+?)\s*", rest)
                if not m:
                    raise ValueError("expected 'gen <name> = <matrix>'")
                name, val = m.group(1), m.group(2)
                if name not in presentation.generators:
                    raise ValueError(f"unknown generator {name!r}")
                if name in images:
                    raise ValueError(f"generator {name!r} assigned twice")
                if val == "identity":
                    images[name] = "identity"
                else:
                    images[name] = parse_matrix_literal(val)
            else:
                raise ValueError(f"unexpected keyword {head!r}")
        except ValueError as exc:
            raise ParseError(str(exc), lineno, col) from None
    if d is None:
        raise ParseError("missing 'dim' line", 1, 1)
    if lie_name and basis:
        raise ParseError("give either a named Lie algebra or inline basis rows", 1, 1)
    try:
        lie = LinearGroupData.named(lie_name) if lie_name else LinearGroupData(d, basis)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from None
    if lie.d != d:
        raise ParseError(f"Lie algebra acts on dimension {lie.d}, file says dim {d}", 1, 1)
    missing = [g for g in presentation.generators if g not in images]
    if missing:
        raise ParseError(f"no image given for generator(s) {', '.join(missing)}", 1, 1)
    mats = [identity(d) if images[g] == "identity" else images[g] for g in presentation.generators]
    try:
        return Representation(presentation, lie, mats)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from None


def representation_to_text(rep: Representation) -> str:
    lines = [f"dim {rep.lie.d}"]
    if rep.lie.label != "custom":
        lines.append(f"liealg {rep.lie.label}")
    else:
        for b in rep.lie.basis:
            lines.append("basis " + _mat_str(b))
    for name, M in zip(rep.presentation.generators, rep.images):
        lines.append(f"gen {name} = {_mat_str(M)}")
    return "\n".join(lines) + "\n"


def _mat_str(M) -> str:
    return "[" + ", ".join("[" + ", ".join(scalar_str(x) for x in r) + "]" for r in M) + "]"


__all__ += ["parse_matrix_literal", "representation_to_text"]
