"""Sparse multivariate polynomials with exact coefficients.

A ``Polynomial`` is a map exponent-tuple -> coefficient over a fixed number of
variables.  It doubles as a scalar type inside ``ArtinMatrix`` so group words can
be expanded with symbolic cocycle coordinates.
"""

from __future__ import annotations

import ast

from .scalars import GaussianRational, I, Q, scalar_str, to_scalar

__all__ = ["Polynomial", "parse_polynomial", "PolynomialSyntaxError"]


class PolynomialSyntaxError(ValueError):
    pass


class Polynomial:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    if len(e) != nvars:
                        raise ValueError("exponent length does not match variable count")
                    clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def constant(cls, nvars: int, c):
        return cls(nvars, {(0,) * nvars: to_scalar(c)})

    @classmethod
    def variable(cls, nvars: int, k: int, coeff=1):
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): to_scalar(coeff)})

    def _lift(self, other):
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError("polynomials in different variable counts")
            return other
        if isinstance(other, (int, GaussianRational)) or type(other) is type(Q(0)):
            return Polynomial.constant(self.nvars, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in o.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return Polynomial(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                c = to_scalar(other)
            except TypeError:
                return NotImplemented
            if not c:
                return Polynomial(self.nvars)
            return Polynomial(self.nvars, {e: v * c for e, v in self.terms.items()})
        if other.nvars != self.nvars:
            raise ValueError("polynomials in different variable counts")
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                out[e] = out[e] + v if e in out else v
        return Polynomial(self.nvars, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            raise TypeError("polynomial division is not supported")
        return self * (1 / to_scalar(other))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, Polynomial) else other
        if o is None:
            return NotImplemented
        return self.nvars == o.nvars and self.terms == o.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def weighted_degrees(self, weights) -> set[int]:
        return {sum(w * a for w, a in zip(weights, e)) for e in self.terms}

    def sorted_terms(self):
        """Terms in descending degree-lexicographic order."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def evaluate(self, values):
        """Evaluate at ring elements (scalars, ArtinElements, polynomials...)."""
        if len(values) != self.nvars:
            raise ValueError("need one value per variable")
        total = None
        for e, c in self.terms.items():
            term = None
            for v, k in zip(values, e):
                for _ in range(k):
                    term = v if term is None else term * v
            term = c if term is None else term * c
            total = term if total is None else total + term
        return Q(0) if total is None else total

    def substitute(self, polys):
        """Compose with polynomials (one per variable, all in a common ring)."""
        if len(polys) != self.nvars:
            raise ValueError("need one polynomial per variable")
        nv = polys[0].nvars
        out = Polynomial(nv)
        for e, c in self.terms.items():
            term = Polynomial.constant(nv, c)
            for p, k in zip(polys, e):
                for _ in range(k):
                    term = term * p
            out = out + term
        return out

    def map_coefficients(self, f):
        return Polynomial(self.nvars, {e: f(c) for e, c in self.terms.items()})

    def to_string(self, names) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            cs = scalar_str(c)
            if isinstance(c, GaussianRational) and c.im != 0 and c.re != 0:
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __repr__(self):
        names = [f"x{k}" for k in range(self.nvars)]
        return f"Polynomial({self.to_string(names)!r})"


def parse_polynomial(text: str, names) -> Polynomial:
    """Parse e.g. '2*x^2 - 1/3*x*y + (1+2*i)*y' over the named variables.

    The symbol ``i`` is the imaginary unit and cannot be a variable name.
    """
    names = list(names)
    if "i" in names:
        raise PolynomialSyntaxError("'i' is reserved for the imaginary unit")
    index = {n: k for k, n in enumerate(names)}
    nv = len(names)
    src = text.replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise PolynomialSyntaxError(f"cannot parse polynomial {text!r}: {exc.msg}") from None

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Polynomial.constant(nv, node.value)
        if isinstance(node, ast.Name):
            if node.id == "i":
                return Polynomial.constant(nv, I)
            if node.id not in index:
                raise PolynomialSyntaxError(f"unknown variable {node.id!r} in {text!r}")
            return Polynomial.variable(nv, index[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int) and exp.value >= 0):
                    raise PolynomialSyntaxError(f"exponents must be non-negative integers in {text!r}")
                return walk(node.left) ** exp.value
            a, b = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if b.degree() > 0 or not b.terms:
                    raise PolynomialSyntaxError(f"division by a non-constant in {text!r}")
                return a / b.terms[(0,) * nv]
        raise PolynomialSyntaxError(f"unsupported syntax in {text!r}")

    return walk(tree)
