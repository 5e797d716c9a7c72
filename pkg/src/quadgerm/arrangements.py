"""Line arrangements in the projective plane: intersection profiles, braid
sub-arrangements, Tayama's b(N, n), the resulting lower bound for b_1 of the
Hirzebruch covers, and the b_1 = 0 classification."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .exactalg import Q, scalar_str

__all__ = [
    "ArrangementError", "ProjLine", "Arrangement", "IntersectionProfile", "intersection_profile",
    "is_general_position", "braid_count", "tayama_b", "tayama_lower_bound", "hirzebruch_b1_zero",
    "cover_degree", "parse_arrangement", "arrangement_report", "braid_arrangement",
    "random_arrangement",
]


class ArrangementError(ValueError):
    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


def _normalize(v) -> tuple:
    v = tuple(Q(x) for x in v)
    for x in v:
        if x:
            return tuple(y / x for y in v)
    raise ArrangementError("the zero vector is not a projective point")


@dataclass(frozen=True)
class ProjLine:
    """The line a x + b y + c z = 0, scaled so the first nonzero coefficient is 1."""

    coeffs: tuple

    def __init__(self, a, b, c):
        object.__setattr__(self, "coeffs", _normalize((a, b, c)))

    def __str__(self):
        return " ".join(scalar_str(x) for x in self.coeffs)

    def meet(self, other: "ProjLine") -> tuple:
        a, b = self.coeffs, other.coeffs
        p = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
        if not any(p):
            raise ArrangementError(f"lines {self} and {other} coincide")
        return _normalize(p)


class Arrangement:
    def __init__(self, lines):
        self.lines = [ln if isinstance(ln, ProjLine) else ProjLine(*ln) for ln in lines]
        if not self.lines:
            raise ArrangementError("an arrangement needs at least one line")
        seen = {}
        for k, ln in enumerate(self.lines):
            if ln in seen:
                raise ArrangementError(f"duplicate line {ln} (entries {seen[ln] + 1} and {k + 1})")
            seen[ln] = k

    @property
    def n(self) -> int:
        return len(self.lines)

    def __len__(self):
        return self.n

    def sub(self, idx) -> "Arrangement":
        return Arrangement([self.lines[k] for k in idx])

    def incidences(self) -> dict:
        """point -> frozenset of line indices through it (points of multiplicity >= 2)."""
        pts: dict = {}
        for i, j in combinations(range(self.n), 2):
            p = self.lines[i].meet(self.lines[j])
            s = pts.setdefault(p, set())
            s.update((i, j))
        return {p: frozenset(s) for p, s in pts.items()}


@dataclass
class IntersectionProfile:
    n: int
    points: dict  # point -> frozenset of line indices
    m: dict  # multiplicity r -> number of points

    def pair_count_ok(self) -> bool:
        return sum(c * comb(r, 2) for r, c in self.m.items()) == comb(self.n, 2)

    def max_multiplicity(self) -> int:
        return max(self.m, default=1)


def intersection_profile(L: Arrangement) -> IntersectionProfile:
    pts = L.incidences()
    m = dict(sorted(Counter(len(s) for s in pts.values()).items()))
    prof = IntersectionProfile(L.n, pts, m)
    if not prof.pair_count_ok():  # cannot happen for distinct lines
        raise AssertionError("pair-count identity violated")
    return prof


def is_general_position(L: Arrangement) -> bool:
    return intersection_profile(L).max_multiplicity() <= 2


def _sub_profile(points: dict, subset: frozenset) -> Counter:
    """Multiplicities of the points of the sub-arrangement, read off the ambient points."""
    return Counter(r for r in (len(s & subset) for s in points.values()) if r >= 2)


def braid_count(L: Arrangement, profile: IntersectionProfile | None = None) -> int:
    """Number of 6-line subsets with exactly 4 triple points and 3 double points."""
    prof = profile or intersection_profile(L)
    if L.n < 6 or prof.max_multiplicity() < 3:
        return 0
    # only triple-or-higher points matter for pruning: a braid subset needs 4 of them
    rich = [s for s in prof.points.values() if len(s) >= 3]
    count = 0
    for sub in combinations(range(L.n), 6):
        S = frozenset(sub)
        if sum(1 for s in rich if len(s & S) >= 3) < 4:
            continue
        c = _sub_profile(prof.points, S)
        if c == Counter({3: 4, 2: 3}):
            count += 1
    return count


def tayama_b(N: int, n: int) -> int:
    """(N-1)((n-2) N^(n-2) - 2 sum_{k=0}^{n-3} N^k)."""
    if not isinstance(N, int) or not isinstance(n, int) or N < 1 or n < 2:
        raise ValueError(f"b(N, n) needs N >= 1 and n >= 2, got N={N}, n={n}")
    return (N - 1) * ((n - 2) * N ** (n - 2) - 2 * sum(N ** k for k in range(n - 2)))


def tayama_lower_bound(L: Arrangement, N: int, profile=None, beta=None) -> int:
    if N < 2:
        raise ValueError("N must be at least 2")
    prof = profile or intersection_profile(L)
    if beta is None:
        beta = braid_count(L, prof)
    return sum(c * tayama_b(N, r) for r, c in prof.m.items() if r >= 3) + beta * tayama_b(N, 3)


def hirzebruch_b1_zero(L: Arrangement, N: int, profile=None) -> bool:
    if N < 2:
        raise ValueError("N must be at least 2")
    top = (profile or intersection_profile(L)).max_multiplicity()
    return top <= 2 or (N == 2 and top <= 3)


def cover_degree(n: int, N: int) -> int:
    if n < 1 or N < 1:
        raise ValueError("n and N must be positive")
    return N ** (n - 1)


def parse_arrangement(text: str) -> Arrangement:
    lines = []
    seen = {}
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        parts = s.split()
        if len(parts) != 3:
            raise ArrangementError(f"expected three coefficients 'a b c', got {s!r}", no)
        try:
            ln = ProjLine(*(Q(p) for p in parts))
        except (ValueError, ZeroDivisionError) as exc:
            raise ArrangementError(str(exc) or f"bad coefficients {s!r}", no) from None
        if ln in seen:
            raise ArrangementError(f"duplicate of the line on line {seen[ln]}", no)
        seen[ln] = no
        lines.append(ln)
    if not lines:
        raise ArrangementError("no lines found")
    return Arrangement(lines)


def arrangement_report(L: Arrangement, Ns=(2, 3)) -> dict:
    prof = intersection_profile(L)
    beta = braid_count(L, prof)
    return {
        "n": L.n,
        "m": {str(r): c for r, c in prof.m.items()},
        "beta": beta,
        "bounds": {str(N): tayama_lower_bound(L, N, prof, beta) for N in Ns},
        "b1_zero": {str(N): hirzebruch_b1_zero(L, N, prof) for N in Ns},
        "degree": {str(N): cover_degree(L.n, N) for N in Ns},
    }


def braid_arrangement() -> Arrangement:
    return Arrangement([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, 0), (0, 1, -1), (1, 0, -1)])


def random_arrangement(rng: random.Random, n_max: int = 9, coeff: int = 2) -> Arrangement:
    """Small integer coefficients make multiple points common."""
    n = rng.randint(3, n_max)
    out, seen = [], set()
    while len(out) < n:
        v = [rng.randint(-coeff, coeff) for _ in range(3)]
        if not any(v):
            continue
        ln = ProjLine(*v)
        if ln not in seen:
            seen.add(ln)
            out.append(ln)
    return Arrangement(out)

