"""Lattice-ball counts a(m, s), the independence bound q(m, t), and coefficient enumeration.

a(m, s) is the number of integer vectors of length m with l1 weight at most s.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .groups import DEFAULT_ELEMENT_BUDGET, BudgetExceeded


@dataclass(frozen=True)
class CoeffVector:
    lambdas: tuple[int, ...]

    @property
    def weight(self) -> int:
        return sum(abs(x) for x in self.lambdas)

    @property
    def support(self) -> int:
        return sum(1 for x in self.lambdas if x)

    def __len__(self) -> int:
        return len(self.lambdas)

    def __iter__(self):
        return iter(self.lambdas)

    def to_json(self) -> list[int]:
        return list(self.lambdas)


@dataclass(frozen=True)
class BoundParams:
    m: int
    s_or_t: int

    def __post_init__(self):
        if self.m < 0 or self.s_or_t < 0:
            raise ValueError("bound parameters must be non-negative")


def a_closed(m: int, s: int) -> int:
    """sum_k C(s,k) C(m,k) 2^k, exact."""
    if m < 0 or s < 0:
        raise ValueError("a(m, s) needs m, s >= 0")
    return sum(comb(s, k) * comb(m, k) * 2**k for k in range(min(m, s) + 1))


_memo: dict[tuple[int, int], int] = {(0, 0): 1}
_memo_lock = threading.Lock()


def a_recursive(m: int, s: int) -> int:
    """a(m,s) = a(m-1,s) + a(m,s-1) + a(m-1,s-1) with a(m,0) = a(0,s) = 1.

    Filled bottom-up so deep arguments do not hit the recursion limit.
    """
    if m < 0 or s < 0:
        raise ValueError("a(m, s) needs m, s >= 0")
    with _memo_lock:
        if (m, s) in _memo:
            return _memo[(m, s)]
        for i in range(m + 1):
            for j in range(s + 1):
                if (i, j) in _memo:
                    continue
                if i == 0 or j == 0:
                    _memo[(i, j)] = 1
                else:
                    _memo[(i, j)] = _memo[(i - 1, j)] + _memo[(i, j - 1)] + _memo[(i - 1, j - 1)]
        return _memo[(m, s)]


def q_bound(m: int, t: int) -> int:
    """Smallest group order that can hold a t-independent set of size m.

    For t >= 2 this is a(m, t/2) when t is even and
    a(m, (t-1)/2) + a(m-1, (t-1)/2) when t is odd.  t = 1 is outside the
    theorem; it is extended with the odd formula, which gives 2 for m >= 1.
    The empty set needs only the trivial group.
    """
    if m < 0 or t < 0:
        raise ValueError("q(m, t) needs m, t >= 0")
    if m == 0:
        return 1
    h = t // 2
    if t % 2 == 0:
        return a_closed(m, h)
    return a_closed(m, h) + a_closed(m - 1, h)


def max_size_for_order(n: int, t: int, cap: int | None = None) -> int:
    """Largest m with q_bound(m, t) <= n (the search upper bound)."""
    if t < 2:
        # bound is useless below the theorem range; only n - 1 nonzero elements exist
        return n - 1 if t == 1 else n
    m = 0
    while q_bound(m + 1, t) <= n and (cap is None or m < cap):
        m += 1
    return m


def min_size_for_order(n: int, s: int) -> int:
    """Smallest m with a(m, s) >= n (the spanning lower bound)."""
    if n <= 1:
        return 0
    if s == 0:
        raise ValueError("only the trivial group is 0-spanned")
    m = 0
    while a_closed(m, s) < n:
        m += 1
    return m


# -- enumeration of coefficient vectors -----------------------------------


@lru_cache(maxsize=None)
def _exact_weight(m: int, w: int) -> tuple[tuple[int, ...], ...]:
    """All vectors of length m with weight exactly w, lexicographic."""
    if m == 0:
        return ((),) if w == 0 else ()
    out = []
    for v in range(-w, w + 1):
        for rest in _exact_weight(m - 1, w - abs(v)):
            out.append((v,) + rest)
    return tuple(out)


def exact_weight_array(m: int, w: int) -> np.ndarray:
    rows = _exact_weight(m, w)
    return np.array(rows, dtype=np.int64).reshape(len(rows), m)


def enum_coeff_vectors(m: int, w: int, budget: int = DEFAULT_ELEMENT_BUDGET) -> list[CoeffVector]:
    """Every vector of weight <= w, ordered by weight and then lexicographically."""
    if m < 0 or w < 0:
        raise ValueError("m and w must be non-negative")
    if a_closed(m, w) > budget:
        raise BudgetExceeded(f"a({m},{w}) = {a_closed(m, w)} exceeds budget {budget}")
    return [CoeffVector(v) for k in range(w + 1) for v in _exact_weight(m, k)]


def enum_odd_layer(m: int, h: int) -> list[CoeffVector]:
    """Vectors with first coordinate >= 1 and total weight exactly h + 1."""
    if m < 1 or h < 0:
        raise ValueError("need m >= 1 and h >= 0")
    out = []
    for first in range(1, h + 2):
        for rest in _exact_weight(m - 1, h + 1 - first):
            out.append(CoeffVector((first,) + rest))
    return out


def support_profile(vectors) -> dict[int, int]:
    """Count vectors by number of nonzero coordinates."""
    prof: dict[int, int] = {}
    for v in vectors:
        prof[v.support] = prof.get(v.support, 0) + 1
    return prof
