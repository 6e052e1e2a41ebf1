"""Explicit spanning and independent families, and the closed forms p(G,1), q(G,1), q(G,2), q(Z_n,3)."""

from __future__ import annotations

from .groups import AbelianGroup
from .spanind import Claim, SubsetCertificate, certify

TRIAL_DIVISION_CAP = 10**9


class FamilyRangeError(ValueError):
    """Parameters outside the range where the family is known to work."""


def p_formula_s1(G: AbelianGroup) -> int:
    n = G.order
    if n == 1:
        return 0
    return (n + G.order2_count() - 1) // 2


def q_formula_t1(G: AbelianGroup) -> int:
    return G.order - 1


def q_formula_t2(G: AbelianGroup) -> int:
    # Ord(G,2) here is the elements of order exactly 2; 0 is removed separately
    return (G.order - G.order2_count() - 1) // 2


def smallest_prime_factor_5mod6(n: int) -> int | None:
    """Smallest prime p = 5 (mod 6) dividing n, by trial division."""
    if n < 1 or n > TRIAL_DIVISION_CAP:
        raise ValueError(f"n must lie in [1, {TRIAL_DIVISION_CAP}]")
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            if p % 6 == 5:
                return p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1 and m % 6 == 5:
        return m
    return None


def q3_branch(n: int) -> tuple[str, int]:
    """(branch name, value) of the exact q(Z_n, 3) formula."""
    if n < 1:
        raise ValueError("n must be positive")
    if n % 2 == 0:
        return "even", n // 4
    p = smallest_prime_factor_5mod6(n)
    if p is not None:
        num = n * (p + 1)
        if num % (6 * p):
            raise AssertionError(f"(1+1/p) n/6 is not an integer for n={n}, p={p}")
        return f"5mod6(p={p})", num // (6 * p)
    return "other", n // 6


def q3_exact(n: int) -> int:
    return q3_branch(n)[1]


# -- spanning families --------------------------------------------------------


def _cyclic_cert(n: int, A: list[int], claim: Claim) -> SubsetCertificate:
    cert = certify(AbelianGroup.cyclic(n), [a % n for a in A], claim)
    if not cert.holds:
        raise AssertionError(f"family {A} in Z_{n} fails its claim {claim}: witness {cert.witness}")
    return cert


def family_span(kind: str, n: int | None = None, s: int | None = None, m: int | None = None) -> SubsetCertificate:
    """Build a known s-spanning set in Z_n and certify it.

    kinds: ``single`` {1} for 2 <= n <= 2s+1; ``consec`` {s, s+1} for
    2s+2 <= n <= 2s^2+2s+1; ``alt`` {1, 2s+1} in Z_{2s^2+2s+1};
    ``halfrange`` {1..m} in Z_{2m+1} with s = 1.
    """
    if kind == "halfrange":
        if m is None:
            if n is None or n % 2 == 0:
                raise FamilyRangeError("halfrange needs m, or odd n = 2m+1")
            m = (n - 1) // 2
        if m < 1 or (n is not None and n != 2 * m + 1) or (s not in (None, 1)):
            raise FamilyRangeError("halfrange is {1..m} in Z_{2m+1} with s = 1")
        return _cyclic_cert(2 * m + 1, list(range(1, m + 1)), Claim("spanning", 1))
    if s is None or s < 1:
        raise FamilyRangeError(f"{kind} needs s >= 1")
    top = 2 * s * s + 2 * s + 1
    if kind == "single":
        if n is None or not 2 <= n <= 2 * s + 1:
            raise FamilyRangeError(f"single needs 2 <= n <= {2 * s + 1}")
        return _cyclic_cert(n, [1], Claim("spanning", s))
    if kind == "consec":
        if n is None or not 2 * s + 2 <= n <= top:
            raise FamilyRangeError(f"consec needs {2 * s + 2} <= n <= {top}")
        return _cyclic_cert(n, [s, s + 1], Claim("spanning", s))
    if kind == "alt":
        if n is not None and n != top:
            raise FamilyRangeError(f"alt lives in Z_{top} only")
        return _cyclic_cert(top, [1, 2 * s + 1], Claim("spanning", s))
    raise FamilyRangeError(f"unknown spanning family {kind!r}")


# -- independent families -----------------------------------------------------


def five_mod_six_set(n: int, p: int | None = None) -> list[int]:
    """{p*i1 + 2*i2 + 1 : 0 <= i1 < n/p, 0 <= i2 <= (p-5)/6} for a divisor p = 5 mod 6."""
    if p is None:
        p = smallest_prime_factor_5mod6(n)
        if p is None:
            raise FamilyRangeError(f"{n} has no prime divisor = 5 (mod 6)")
    if p % 6 != 5 or n % p:
        raise FamilyRangeError(f"p={p} must divide n={n} and be 5 mod 6")
    return sorted(p * i1 + 2 * i2 + 1 for i1 in range(n // p) for i2 in range((p - 5) // 6 + 1))


def family_indep(
    kind: str,
    n: int | None = None,
    t: int | None = None,
    p: int | None = None,
    m: int | None = None,
) -> SubsetCertificate:
    """Build a known t-independent set in Z_n and certify it.

    kinds: odd_below_n3, odd_below_n2 (n even), 5mod6, single_t, half_t_even,
    one_t_odd, sporadic38, tight2 ({1..m} in Z_{2m+1}), tight3
    ({1,3,..,2m-1} in Z_{4m}).
    """
    if kind == "odd_below_n3":
        _need(n is not None and n >= 1, "odd_below_n3 needs n >= 1")
        A = [a for a in range(1, n, 2) if 3 * a < n]
        return _cyclic_cert(n, A, Claim("independent", 3))
    if kind == "odd_below_n2":
        _need(n is not None and n >= 2 and n % 2 == 0, "odd_below_n2 needs even n >= 2")
        A = [a for a in range(1, n, 2) if 2 * a < n]
        return _cyclic_cert(n, A, Claim("independent", 3))
    if kind == "5mod6":
        _need(n is not None and n >= 5, "5mod6 needs n")
        return _cyclic_cert(n, five_mod_six_set(n, p), Claim("independent", 3))
    if kind == "single_t":
        _need(t is not None and t >= 1 and n is not None and n >= t + 1, "single_t needs n >= t+1")
        return _cyclic_cert(n, [1], Claim("independent", t))
    if kind == "half_t_even":
        _need(t is not None and t >= 2 and t % 2 == 0, "half_t_even needs even t >= 2")
        _need(n is not None and n >= t * t // 2 + t + 1, f"half_t_even needs n >= {t * t // 2 + t + 1}")
        return _cyclic_cert(n, [t // 2, t // 2 + 1], Claim("independent", t))
    if kind == "one_t_odd":
        _need(t is not None and t >= 3 and t % 2 == 1, "one_t_odd needs odd t >= 3")
        size = (t * t - 1) // 2 + t + 1
        _need(n is None or n == size, f"one_t_odd lives in Z_{size} only")
        return _cyclic_cert(size, [1, t], Claim("independent", t))
    if kind == "sporadic38":
        _need(n in (None, 38) and t in (None, 5), "sporadic38 is {1,7,11} in Z_38 with t = 5")
        return _cyclic_cert(38, [1, 7, 11], Claim("independent", 5))
    if kind == "tight2":
        m = _size_from(m, n, lambda k: 2 * k + 1, "tight2")
        return _cyclic_cert(2 * m + 1, list(range(1, m + 1)), Claim("independent", 2))
    if kind == "tight3":
        m = _size_from(m, n, lambda k: 4 * k, "tight3")
        return _cyclic_cert(4 * m, list(range(1, 2 * m, 2)), Claim("independent", 3))
    raise FamilyRangeError(f"unknown independent family {kind!r}")


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise FamilyRangeError(msg)


def _size_from(m, n, order_of, name) -> int:
    if m is None:
        _need(n is not None, f"{name} needs m or n")
        for k in range(1, n + 1):
            if order_of(k) == n:
                m = k
                break
        else:
            raise FamilyRangeError(f"{name}: n={n} is not of the required form")
    _need(m >= 1 and (n is None or order_of(m) == n), f"{name} needs m >= 1 matching n")
    return m


SPAN_FAMILIES = ("single", "consec", "alt", "halfrange")
INDEP_FAMILIES = (
    "odd_below_n3",
    "odd_below_n2",
    "5mod6",
    "single_t",
    "half_t_even",
    "one_t_odd",
    "sporadic38",
    "tight2",
    "tight3",
)
