"""Closed-form optimal designs for slope estimation on [0, a].

The support is the set of extremal points of a rescaled Chebyshev polynomial,
the weights come from the derivatives of the Lagrange basis without intercept,
and the target points z for which this recipe is optimal form a union of n
open intervals bounded by roots of those derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .polynomial import Degenerate, Poly, RootList, real_roots


class AllDerivativesVanish(ArithmeticError):
    """Every basis derivative is ~0 at z; weights are undefined."""


class NotCovered(Exception):
    """z lies outside the admissible region; no closed-form design exists."""

    def __init__(self, z: float, region: "AdmissibleRegion"):
        super().__init__(f"z={z!r} is not in the admissible region")
        self.z = z
        self.region = region


class BoundaryPoint(Exception):
    """z coincides with a finite region endpoint; a weight degenerates to 0."""

    def __init__(self, z: float, endpoint: float):
        super().__init__(f"z={z!r} coincides with region endpoint {endpoint!r}")
        self.z = z
        self.endpoint = endpoint


@dataclass(frozen=True)
class DesignProblem:
    """Degree-n model x, x^2, ..., x^n observed on the interval [0, a]."""

    n: int
    a: float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("n must be an integer >= 1")
        if not (isinstance(self.a, (int, float)) and math.isfinite(self.a)
                and self.a > 0):
            raise ValueError("a must be a finite positive real")
        object.__setattr__(self, "a", float(self.a))


@dataclass(frozen=True)
class Design:
    """Finite probability measure: strictly increasing points, positive weights."""

    points: tuple[float, ...]
    weights: tuple[float, ...]

    def __init__(self, points, weights):
        pts = tuple(float(x) for x in points)
        ws = tuple(float(w) for w in weights)
        if len(pts) != len(ws) or not pts:
            raise ValueError("points and weights must be nonempty, same length")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("points must be strictly increasing")
        if any(w <= 0 for w in ws):
            raise ValueError("weights must be positive")
        if abs(math.fsum(ws) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1 within 1e-12")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", ws)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class AdmissibleRegion:
    """Ordered union of open intervals for z, with the labeled boundary roots.

    ``intervals[j-1]`` is the j-th interval; the first lower endpoint is -inf
    and the last upper endpoint is +inf.  ``boundary_roots[i-1]`` holds the
    ascending roots of the i-th basis derivative.
    """

    intervals: tuple[tuple[float, float], ...]
    boundary_roots: tuple[tuple[float, ...], ...]

    def locate(self, z: float, boundary_tol: float = 1e-10):
        """Classify z: ("inside", j) with 1-based j, ("boundary", endpoint),
        or ("outside", None)."""
        z = float(z)
        for lo, hi in self.intervals:
            for e in (lo, hi):
                if math.isfinite(e) and abs(z - e) <= boundary_tol:
                    return ("boundary", e)
        for j, (lo, hi) in enumerate(self.intervals, start=1):
            if lo < z < hi:
                return ("inside", j)
        return ("outside", None)

    def __contains__(self, z: float) -> bool:
        return self.locate(z)[0] == "inside"


def support_points(problem: DesignProblem) -> tuple[float, ...]:
    """The n extremal points of the rescaled Chebyshev polynomial, ascending.

    The k-th ascending point is a * (cos((n-k) pi / n) + cos(pi/2n)) /
    (1 + cos(pi/2n)); the largest is exactly a.
    """
    n, a = problem.n, problem.a
    c = math.cos(math.pi / (2 * n))
    den = 1.0 + c
    return tuple(a * ((math.cos((n - k) * math.pi / n) + c) / den)
                 for k in range(1, n + 1))


@lru_cache(maxsize=256)
def _basis_cached(problem: DesignProblem) -> tuple[Poly, ...]:
    s = support_points(problem)
    n = problem.n
    out = []
    for i in range(n):
        num = Poly((0.0, 1.0))
        den = s[i]
        for j in range(n):
            if j == i:
                continue
            num = num * Poly((-s[j], 1.0))
            den *= s[i] - s[j]
        out.append(num * (1.0 / den))
    return tuple(out)


def lagrange_basis(problem: DesignProblem) -> tuple[Poly, ...]:
    """Interpolation basis without intercept: L_i(s_j) = delta_ij, L_i(0) = 0.

    Each polynomial has degree exactly n and an exactly zero constant term.
    """
    return _basis_cached(problem)


@lru_cache(maxsize=256)
def weight_functions(problem: DesignProblem) -> tuple[Poly, ...]:
    """Derivatives of the intercept-free Lagrange basis (degree n-1 each)."""
    return tuple(p.derivative() for p in _basis_cached(problem))


def weights_at(problem: DesignProblem, z: float) -> tuple[float, ...]:
    """Normalized absolute basis-derivative values |L_i'(z)| / sum_j |L_j'(z)|."""
    vals = [abs(w(z)) for w in weight_functions(problem)]
    total = math.fsum(vals)
    if total < 1e-14:
        raise AllDerivativesVanish(f"all basis derivatives vanish at z={z!r}")
    return tuple(v / total for v in vals)


def _all_roots(p: Poly, a: float, expected: int, tol: float) -> RootList:
    # Roots may fall outside [0, a]; widen geometrically from (-2a, 2a) until
    # all expected ones are found, capped by the Cauchy bound on root modulus.
    d = p.degree
    cauchy = 1.0 + max(abs(c) for c in p.coeffs[:d]) / abs(p.coeffs[d])
    lo, hi = -2.0 * a, 2.0 * a
    while True:
        found = real_roots(p, lo, hi, tol)
        if len(found) == expected:
            return found
        if hi > cauchy:
            raise Degenerate(
                f"found {len(found)} of {expected} real roots within the "
                f"Cauchy bound {cauchy!r}")
        lo, hi = 2.0 * lo, 2.0 * hi


@lru_cache(maxsize=256)
def _region_cached(problem: DesignProblem, tol: float) -> AdmissibleRegion:
    n, a = problem.n, problem.a
    if n == 1:
        return AdmissibleRegion(((-math.inf, math.inf),), ((),))
    wfs = weight_functions(problem)
    roots = tuple(tuple(_all_roots(w, a, n - 1, tol)) for w in wfs)
    intervals = []
    for j in range(1, n + 1):
        lo = -math.inf if j == 1 else roots[0][j - 2]
        hi = math.inf if j == n else roots[n - 1][j - 1]
        if not lo < hi:
            raise Degenerate(f"interval {j} is empty: [{lo!r}, {hi!r}]")
        intervals.append((lo, hi))
    for (_, hi), (lo, _) in zip(intervals, intervals[1:]):
        if not hi < lo:
            raise Degenerate("region intervals are not disjoint")
    return AdmissibleRegion(tuple(intervals), roots)


def admissible_region(problem: DesignProblem,
                      tol_root: float = 1e-12) -> AdmissibleRegion:
    """The n open z-intervals on which the closed-form design is optimal.

    Interval j runs from the (j-1)-th root of the first basis derivative to
    the j-th root of the last one (conventionally -inf and +inf at the ends).
    """
    return _region_cached(problem, float(tol_root))


def optimal_design(problem: DesignProblem, z: float,
                   boundary_tol: float = 1e-10,
                   tol_root: float = 1e-12) -> Design:
    """The closed-form optimal design for slope estimation at z.

    For n = 1 all mass sits at a regardless of z.  For n > 1 the design exists
    only for z strictly inside the admissible region; :class:`NotCovered` and
    :class:`BoundaryPoint` report the other cases explicitly.
    """
    if problem.n == 1:
        return Design((problem.a,), (1.0,))
    region = admissible_region(problem, tol_root)
    kind, info = region.locate(z, boundary_tol)
    if kind == "boundary":
        raise BoundaryPoint(z, info)
    if kind == "outside":
        raise NotCovered(z, region)
    return Design(support_points(problem), weights_at(problem, z))
