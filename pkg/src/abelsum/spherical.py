"""Spherical t-designs from cyclic frequency sets, and their verification by monomial moments."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod
from typing import Sequence

import numpy as np

from .constructions import five_mod_six_set
from .groups import AbelianGroup
from .spanind import TheoremViolation, is_t_independent

NORM_TOL = 1e-12
MOMENT_TOL = 1e-9


class OffSphereError(ValueError):
    pass


@dataclass
class PointSet:
    points: np.ndarray
    frequencies: tuple[int, ...] | None = None

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim_ambient(self) -> int:
        return self.points.shape[1]

    @property
    def sphere_dim(self) -> int:
        return self.dim_ambient - 1

    def max_norm_error(self) -> float:
        return float(np.max(np.abs(np.linalg.norm(self.points, axis=1) - 1.0)))

    def to_csv(self) -> str:
        return "".join(",".join(f"{x:.17g}" for x in row) + "\n" for row in self.points)

    @classmethod
    def from_csv(cls, text: str) -> "PointSet":
        rows = [[float(x) for x in line.split(",")] for line in text.splitlines() if line.strip()]
        return cls(np.array(rows))


@dataclass
class Infeasible:
    reason: str

    def __bool__(self) -> bool:
        return False


@dataclass
class DesignReport:
    t_checked: int
    max_moment_error: float
    verdict: dict[int, bool]
    monomials_checked: int
    errors_by_degree: dict[int, float] = field(default_factory=dict)
    worst_monomial: tuple[int, ...] | None = None
    exact: bool = False

    @property
    def passed(self) -> bool:
        return all(self.verdict.values())

    def passes(self, k: int) -> bool:
        return all(v for d, v in self.verdict.items() if d <= k)

    @property
    def strength(self) -> int:
        """Largest k such that every degree up to k passes."""
        k = 0
        while k + 1 in self.verdict and self.verdict[k + 1]:
            k += 1
        return k

    def to_json(self) -> dict:
        return {
            "t_checked": self.t_checked,
            "passed": self.passed,
            "max_moment_error": self.max_moment_error,
            "verdict": {str(k): v for k, v in self.verdict.items()},
            "errors_by_degree": {str(k): v for k, v in self.errors_by_degree.items()},
            "monomials_checked": self.monomials_checked,
            "worst_monomial": list(self.worst_monomial) if self.worst_monomial else None,
            "exact": self.exact,
        }


# -- bounds and basic configurations ------------------------------------------


def dgs_bound(t: int, d: int) -> int:
    """Lower bound on the size of a spherical t-design on S^d."""
    if t < 0 or d < 1:
        raise ValueError("need t >= 0 and d >= 1")
    e, o = t // 2, (t - 1) // 2
    return comb(d + e, e) + (comb(d + o, o) if o >= 0 else 0)


def polygon(n: int) -> PointSet:
    if n < 1:
        raise ValueError("n must be positive")
    ang = 2 * np.pi * np.arange(1, n + 1) / n
    return PointSet(np.column_stack([np.cos(ang), np.sin(ang)]), (1,))


def power_sum_check(n: int, t: int, tol: float = MOMENT_TOL) -> bool:
    """True iff |sum_j exp(2 pi i j k / n)| <= tol for k = 1..t."""
    if n < 1 or t < 0:
        raise ValueError("need n >= 1 and t >= 0")
    j = np.arange(1, n + 1)
    for k in range(1, t + 1):
        if abs(np.exp(2j * np.pi * j * k / n).sum()) > tol:
            return False
    return True


def lift(A: Sequence[int], n: int) -> PointSet:
    """n points on S^{2m-1}: block i of point j is (cos, sin)(2 pi j a_i / n) / sqrt(m)."""
    A = [int(a) for a in A]
    m = len(A)
    if m < 1 or n < 1:
        raise ValueError("need a nonempty frequency list and n >= 1")
    j = np.arange(1, n + 1)[:, None]
    ang = 2 * np.pi * ((j * np.array(A)[None, :]) % n) / n
    pts = np.empty((n, 2 * m))
    pts[:, 0::2] = np.cos(ang)
    pts[:, 1::2] = np.sin(ang)
    return PointSet(pts / np.sqrt(m), tuple(A))


# -- moments ------------------------------------------------------------------


def _double_factorial_odd(k: int) -> int:
    # (k-1)!! for even k, i.e. 1*3*...*(k-1)
    return prod(range(1, k, 2))


def sphere_moment(alpha: Sequence[int]) -> Fraction:
    """Average of x^alpha over the unit sphere in R^len(alpha), exact."""
    alpha = [int(a) for a in alpha]
    if any(a < 0 for a in alpha) or not alpha:
        raise ValueError("alpha must be a nonempty multi-index")
    if any(a % 2 for a in alpha):
        return Fraction(0)
    N = len(alpha)
    half = sum(alpha) // 2
    num = prod(_double_factorial_odd(a) for a in alpha)
    den = prod(N + 2 * i for i in range(half))
    return Fraction(num, den)


def monomials(N: int, t: int, min_degree: int = 1) -> list[tuple[int, ...]]:
    """Exponent tuples of degree min_degree..t, graded, then lex with x1 highest."""
    out = []

    def rec(prefix: list[int], left: int, slots: int):
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for a in range(left, -1, -1):
            rec(prefix + [a], left - a, slots - 1)

    for k in range(min_degree, t + 1):
        rec([], k, N)
    return out


def verify_design(X: PointSet, t: int, tol: float = MOMENT_TOL, norm_tol: float = NORM_TOL) -> DesignReport:
    """Compare the sample mean of every monomial of degree 1..t with its sphere average."""
    if X.n == 0:
        raise ValueError("empty point set")
    if X.max_norm_error() > norm_tol:
        raise OffSphereError(f"points deviate from the unit sphere by {X.max_norm_error():.3g}")
    P = X.points
    N = X.dim_ambient
    cols = {(0,) * N: np.ones(X.n)}
    verdict, errs = {}, {}
    worst_err, worst = 0.0, None
    count = 0
    for alpha in monomials(N, t):
        # multiply a cached lower-degree monomial by one coordinate
        i = next(k for k, a in enumerate(alpha) if a)
        lower = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
        col = cols[lower] * P[:, i]
        cols[alpha] = col
        err = float(abs(col.mean() - float(sphere_moment(alpha))))
        k = sum(alpha)
        errs[k] = max(errs.get(k, 0.0), err)
        if err > worst_err:
            worst_err, worst = err, alpha
        count += 1
    for k in range(1, t + 1):
        verdict[k] = errs.get(k, 0.0) <= tol
    return DesignReport(t, worst_err, verdict, count, errs, worst)


def _lift_moment_numerator(A: Sequence[int], n: int, alpha: Sequence[int]) -> int:
    """Integer S with mean(x^alpha over lift) = S * (-1)^(Q/2) / (2^k m^(k/2)).

    Writes cos and sin as (z + 1/z)/2 and (z - 1/z)/2i in z_i = w^(j a_i);
    averaging over j keeps exactly the terms whose exponent is 0 mod n.
    """
    poly = {0: 1}
    for i, a in enumerate(A):
        p, q = alpha[2 * i], alpha[2 * i + 1]
        factor: dict[int, int] = {}
        for u in range(p + 1):
            for v in range(q + 1):
                e = (a * (p - 2 * u + q - 2 * v)) % n
                factor[e] = factor.get(e, 0) + comb(p, u) * comb(q, v) * (-1) ** v
        new: dict[int, int] = {}
        for e1, c1 in poly.items():
            for e2, c2 in factor.items():
                if c2:
                    e = (e1 + e2) % n
                    new[e] = new.get(e, 0) + c1 * c2
        poly = new
    return poly.get(0, 0)


def lift_moment_exact(A: Sequence[int], n: int, alpha: Sequence[int]) -> Fraction | None:
    """Exact sample mean over lift(A, n); None when it is nonzero but irrational (odd degree)."""
    m = len(A)
    k = sum(alpha)
    Q = sum(alpha[1::2])
    S = _lift_moment_numerator(A, n, alpha)
    if S == 0:
        return Fraction(0)
    if Q % 2 or k % 2:
        # a real mean forces S = 0 for odd Q; odd k leaves an irrational 1/sqrt(m)^k
        return None
    return Fraction((-1) ** (Q // 2) * S, 2**k * m ** (k // 2))


def verify_lift_exact(A: Sequence[int], n: int, t: int) -> DesignReport:
    """Design check on lift(A, n) in exact rational arithmetic."""
    N = 2 * len(A)
    verdict, errs = {}, {}
    worst_err, worst = 0.0, None
    count = 0
    for alpha in monomials(N, t):
        mean = lift_moment_exact(A, n, alpha)
        target = sphere_moment(alpha)
        if mean is None:
            err = float("inf")
        else:
            err = float(abs(mean - target))
        k = sum(alpha)
        errs[k] = max(errs.get(k, 0.0), err)
        if err > worst_err:
            worst_err, worst = err, alpha
        count += 1
    for k in range(1, t + 1):
        verdict[k] = errs.get(k, 0.0) == 0.0
    return DesignReport(t, worst_err, verdict, count, errs, worst, exact=True)


# -- constructions for t <= 3 --------------------------------------------------


def corollary_frequencies(t: int, d: int, n: int) -> list[int] | Infeasible:
    if d % 2 == 0 or d < 1:
        raise ValueError("only odd d is supported")
    if t not in (1, 2, 3):
        raise ValueError("constructions are available for t in {1, 2, 3}")
    m = (d + 1) // 2
    if t == 1:
        if n < 2:
            return Infeasible("no 1-design with a single point")
        return [1] * m
    if t == 2:
        if n <= d + 1:
            return Infeasible(f"a 2-design on S^{d} needs n >= {d + 2}")
        return list(range(1, m + 1))
    if n <= 2 * d + 1:
        return Infeasible(f"a 3-design on S^{d} needs n >= {2 * d + 2}")
    if n % 2 == 0 or n >= 3 * d + 3:
        # odd integers below n/2 (n even) or n/3 (n odd)
        return list(range(1, 2 * m, 2))
    for p in range(5, n + 1, 6):
        if n % p == 0 and n * (p + 1) >= p * (3 * d + 3):
            return five_mod_six_set(n, p)[:m]
    return Infeasible(f"odd n = {n} is below every available threshold for S^{d}")


def corollary_construct(t: int, d: int, n: int) -> PointSet | Infeasible:
    A = corollary_frequencies(t, d, n)
    if isinstance(A, Infeasible):
        return A
    return lift(A, n)


@dataclass
class ImplicationReport:
    independent: bool
    design: DesignReport
    guaranteed: bool
    note: str = ""

    def to_json(self) -> dict:
        return {
            "independent": self.independent,
            "design": self.design.to_json(),
            "guaranteed": self.guaranteed,
            "note": self.note,
        }


def independent_implies_design(A: Sequence[int], n: int, t: int, tol: float = MOMENT_TOL) -> ImplicationReport:
    """Check t-independence of A in Z_n and the t-design property of lift(A, n) side by side.

    For t <= 3 independence forces the design property, so a mismatch raises.
    """
    G = AbelianGroup.cyclic(n)
    indep = bool(is_t_independent(G, [a % n for a in A], t))
    design = verify_design(lift(A, n), t, tol)
    guaranteed = t <= 3
    note = "" if guaranteed else "implication not guaranteed for t > 3"
    if guaranteed and indep and not design.passed:
        raise TheoremViolation(f"{list(A)} is {t}-independent in Z_{n} but lift fails: {design.errors_by_degree}")
    return ImplicationReport(indep, design, guaranteed, note)
