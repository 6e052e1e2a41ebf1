"""Exhaustive search for p(G, s) (minimum s-spanning size) and q(G, t) (maximum t-independent size).

Sets are explored as increasing tuples of canonical representatives (one of
each pair {g, -g}); negating an element changes neither property.  Reach
sets are Python ints used as bitsets over packed element indices, and
translation by a group element is a per-coordinate rotation.

Independence mode uses a Russian-doll bound: t-independence is hereditary,
so the best size achievable from candidate suffix j onward (computed from
the back) caps every extension drawn from that suffix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .combinatorics import a_closed, max_size_for_order, min_size_for_order
from .groups import AbelianGroup, BudgetExceeded
from .spanind import Claim, SubsetCertificate, certify

DEFAULT_NODE_BUDGET = 10**9


class BitGroup:
    """Bitset arithmetic over the packed indices of a group."""

    def __init__(self, G: AbelianGroup):
        self.G = G
        self.n = G.order
        self.full = (1 << self.n) - 1
        self.factors = G.factors
        self.weights = G._weights
        self._masks: dict[tuple[int, int], tuple[int, int, int, int]] = {}

    def _rot_masks(self, i: int, k: int):
        key = (i, k)
        got = self._masks.get(key)
        if got is None:
            ni, wi = self.factors[i], self.weights[i]
            lo = 0
            for idx in range(self.n):
                if (idx // wi) % ni < ni - k:
                    lo |= 1 << idx
            got = (lo, self.full ^ lo, k * wi, (ni - k) * wi)
            self._masks[key] = got
        return got

    def translate(self, bits: int, idx: int) -> int:
        """The set bits + g, where g has packed index idx."""
        if idx == 0:
            return bits
        if len(self.factors) == 1:
            n = self.n
            lo = (1 << (n - idx)) - 1
            return ((bits & lo) << idx) | (bits >> (n - idx))
        for i, (w, ni) in enumerate(zip(self.weights, self.factors)):
            k = (idx // w) % ni
            if k:
                lo, hi, up, down = self._rot_masks(i, k)
                bits = ((bits & lo) << up) | ((bits & hi) >> down)
        return bits


@dataclass
class SearchResult:
    group: AbelianGroup
    mode: str
    param: int
    value: int | None
    certificate: SubsetCertificate | None
    nodes_explored: int = 0
    proved_optimal: bool = False
    lower: int | None = None
    upper: int | None = None

    def to_json(self) -> dict:
        return {
            "group": str(self.group),
            "mode": self.mode,
            "param": self.param,
            "value": self.value,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "nodes": self.nodes_explored,
            "proved": self.proved_optimal,
        }


@dataclass
class SearchTask:
    group: AbelianGroup
    mode: str  # "p" (min spanning) or "q" (max independent)
    param: int
    budget: int = DEFAULT_NODE_BUDGET
    symmetry_reduction: bool = False

    def __post_init__(self):
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.mode not in ("p", "q"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def run(self) -> SearchResult:
        if self.mode == "p":
            return p_min(self.group, self.param, self.budget, self.symmetry_reduction)
        return q_max(self.group, self.param, self.budget, self.symmetry_reduction)


@dataclass
class _Counter:
    budget: int
    nodes: int = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"node budget {self.budget} exhausted")


def representatives(G: AbelianGroup, include_zero: bool = False) -> list[int]:
    """Packed indices of one element from each pair {g, -g} (the smaller index)."""
    out = []
    for i in range(G.order):
        if i == 0 and not include_zero:
            continue
        if i <= G.neg_index(i):
            out.append(i)
    return out


def _order_of_index(G: AbelianGroup, i: int) -> int:
    return math.lcm(1, *(n // math.gcd(n, c) for c, n in zip(G.coords_of_index(i), G.factors)))


def _unit_orbit_roots(G: AbelianGroup, cands: list[int]) -> list[tuple[int, list[int]]]:
    """(forced first element d, allowed later candidates) pairs covering every unit orbit.

    Each orbit of a set under multiplication by units of Z_n holds a member
    whose least element d divides n and whose other elements x satisfy
    gcd(x, n) >= d.
    """
    n = G.order
    roots = []
    for d in cands:
        if n % d == 0:
            later = [x for x in cands if x > d and math.gcd(x, n) >= d]
            roots.append((d, later))
    return roots


# -- independence -------------------------------------------------------------


class _IndepSearch:
    def __init__(self, G: AbelianGroup, t: int, counter: _Counter):
        self.G, self.t, self.counter = G, t, counter
        self.bg = BitGroup(G)
        self._mult: dict[int, tuple[list[int], list[int]]] = {}

    def mult(self, c: int):
        got = self._mult.get(c)
        if got is None:
            pos = [self.G.mul_index(k, c) for k in range(self.t + 1)]
            got = (pos, [self.G.neg_index(x) for x in pos])
            self._mult[c] = got
        return got

    def extend(self, layers: tuple[int, ...], c: int) -> tuple[int, ...]:
        """Reach layers (radius 0..t-1) after adding element c."""
        pos, neg = self.mult(c)
        tr = self.bg.translate
        out = []
        for r in range(len(layers)):
            acc = layers[r]
            for k in range(1, r + 1):
                base = layers[r - k]
                acc |= tr(base, pos[k]) | tr(base, neg[k])
            out.append(acc)
        return tuple(out)

    def admissible(self, layers: tuple[int, ...], c: int) -> bool:
        # k*c must avoid every signed sum of weight <= t-k
        pos = self.mult(c)[0]
        t = self.t
        for k in range(1, t + 1):
            if (layers[t - k] >> pos[k]) & 1:
                return False
        return True

    def empty_layers(self) -> tuple[int, ...]:
        return (1,) * self.t

    def max_extension(self, base: list[int], cands: list[int], cap: int) -> list[int]:
        """Largest B within cands (lex-least among largest) with base + B independent."""
        layers = self.empty_layers()
        for b in base:
            layers = self.extend(layers, b)
        pool = [c for c in cands if self.admissible(layers, c)]
        N = len(pool)
        doll = [0] * (N + 1)
        self.doll = doll
        self.pool = pool
        for i in range(N - 1, -1, -1):
            if doll[i + 1] >= cap:
                doll[i] = doll[i + 1]
                continue
            target = doll[i + 1] + 1
            found = self._dfs_from(i, layers, target)
            doll[i] = target if found is not None else doll[i + 1]
        best = doll[0] if N else 0
        if best == 0:
            return []
        rows = list(range(N))
        found = self._dfs(0, (), layers, rows, best)
        assert found is not None
        return [pool[j] for j in found]

    def _dfs_from(self, i: int, layers, target: int):
        new = self.extend(layers, self.pool[i])
        rest = [j for j in range(i + 1, len(self.pool)) if self.admissible(new, self.pool[j])]
        return self._dfs(1, (i,), new, rest, target)

    def _dfs(self, size: int, chosen: tuple[int, ...], layers, rows: list[int], target: int):
        self.counter.tick()
        if size >= target:
            return chosen
        if size + len(rows) < target:
            return None
        doll, pool = self.doll, self.pool
        for p, j in enumerate(rows):
            if size + doll[j] < target or size + len(rows) - p < target:
                return None
            c = pool[j]
            new = self.extend(layers, c)
            rest = [k for k in rows[p + 1:] if self.admissible(new, pool[k])]
            got = self._dfs(size + 1, chosen + (j,), new, rest, target)
            if got is not None:
                return got
        return None


def q_max(
    G: AbelianGroup,
    t: int,
    budget: int = DEFAULT_NODE_BUDGET,
    symmetry_reduction: bool = False,
) -> SearchResult:
    """Maximum size of a t-independent subset of G, with a lex-least optimal witness."""
    if t < 0:
        raise ValueError("t must be non-negative")
    n = G.order
    claim = Claim("independent", t)
    if t == 0:
        elems = list(range(n))
        cert = certify(G, [G.from_index(i) for i in elems], claim)
        return SearchResult(G, "q", t, n, cert, 0, True, n, n)
    cap = max_size_for_order(n, t)
    counter = _Counter(budget)
    eng = _IndepSearch(G, t, counter)
    if t >= 2:
        cands = [i for i in representatives(G) if _order_of_index(G, i) > t]
    else:
        cands = list(range(1, n))
    best: list[int] = []
    proved = True
    try:
        if symmetry_reduction and G.is_cyclic and t >= 2:
            for d, later in _unit_orbit_roots(G, cands):
                if len(best) >= cap:
                    break
                if not eng.admissible(eng.empty_layers(), d):
                    continue
                ext = eng.max_extension([d], later, cap - 1)
                if 1 + len(ext) > len(best):
                    best = sorted({d, *ext})
        else:
            best = eng.max_extension([], cands, cap)
    except BudgetExceeded:
        proved = False
    cert = certify(G, [G.from_index(i) for i in best], claim)
    if not cert.holds:
        raise AssertionError(f"search produced a non-independent set {cert.values()}")
    return SearchResult(G, "q", t, len(best), cert, counter.nodes, proved, len(best), cap if not proved else len(best))


# -- spanning -----------------------------------------------------------------


class _SpanSearch:
    def __init__(self, G: AbelianGroup, s: int, counter: _Counter):
        self.G, self.s, self.counter = G, s, counter
        self.bg = BitGroup(G)
        self.n = G.order
        self._mult: dict[int, tuple[list[int], list[int]]] = {}

    def mult(self, c: int):
        got = self._mult.get(c)
        if got is None:
            pos = [self.G.mul_index(k, c) for k in range(self.s + 1)]
            got = (pos, [self.G.neg_index(x) for x in pos])
            self._mult[c] = got
        return got

    def extend(self, layers: tuple[int, ...], c: int, top_only: bool = False) -> tuple[int, ...]:
        pos, neg = self.mult(c)
        tr = self.bg.translate
        rng = [len(layers) - 1] if top_only else range(len(layers))
        out = []
        for r in rng:
            acc = layers[r]
            for k in range(1, r + 1):
                base = layers[r - k]
                acc |= tr(base, pos[k]) | tr(base, neg[k])
            out.append(acc)
        return tuple(out)

    def find(self, m: int, base: list[int], cands: list[int]) -> list[int] | None:
        """Lex-least m-set (base plus increasing cands) that s-spans G, or None."""
        self.m = m
        self.cands = cands
        self.ball = [a_closed(j, self.s) for j in range(m + 1)]
        # bits of +-c for every suffix; exact coverage test when s == 1
        pm = [0] * (len(cands) + 1)
        for j in range(len(cands) - 1, -1, -1):
            c = cands[j]
            pm[j] = pm[j + 1] | (1 << c) | (1 << self.G.neg_index(c))
        self.suffix_pm = pm
        layers = (1,) * (self.s + 1)
        for b in base:
            layers = self.extend(layers, b)
        got = self._dfs(len(base), (), layers, 0)
        return None if got is None else list(base) + [cands[j] for j in got]

    def _dfs(self, size: int, chosen, layers, start: int):
        self.counter.tick()
        m, n, s = self.m, self.n, self.s
        top = layers[-1]
        if size == m:
            return chosen if top == self.bg.full else None
        need = m - size
        N = len(self.cands)
        if N - start < need:
            return None
        if n - top.bit_count() > self.ball[m] - self.ball[size]:
            return None
        if s == 1 and (top | self.suffix_pm[start]) != self.bg.full:
            return None
        if need == 1:
            for j in range(start, N):
                if self.extend(layers, self.cands[j], top_only=True)[0] == self.bg.full:
                    return chosen + (j,)
            return None
        for j in range(start, N - need + 1):
            if s == 1 and (top | self.suffix_pm[j]) != self.bg.full:
                return None
            got = self._dfs(size + 1, chosen + (j,), self.extend(layers, self.cands[j]), j + 1)
            if got is not None:
                return got
        return None


def p_min(
    G: AbelianGroup,
    s: int,
    budget: int = DEFAULT_NODE_BUDGET,
    symmetry_reduction: bool = False,
) -> SearchResult:
    """Minimum size of an s-spanning subset of G, with a lex-least witness of that size."""
    n = G.order
    if n == 1:
        cert = certify(G, [], Claim("spanning", s))
        return SearchResult(G, "p", s, 0, cert, 0, True, 0, 0)
    if s < 1:
        raise ValueError("only the trivial group has a 0-spanning set")
    claim = Claim("spanning", s)
    counter = _Counter(budget)
    eng = _SpanSearch(G, s, counter)
    cands = representatives(G)
    m0 = min_size_for_order(n, s)
    m = m0
    try:
        while m <= len(cands):
            found = None
            if symmetry_reduction and G.is_cyclic:
                for d, later in _unit_orbit_roots(G, cands):
                    if len(later) < m - 1:
                        continue
                    got = eng.find(m, [d], later)
                    if got is not None and (found is None or sorted(got) < found):
                        found = sorted(got)
            else:
                found = eng.find(m, [], cands)
            if found is not None:
                cert = certify(G, [G.from_index(i) for i in found], claim)
                if not cert.holds:
                    raise AssertionError(f"search produced a non-spanning set {cert.values()}")
                return SearchResult(G, "p", s, m, cert, counter.nodes, True, m, m)
            m += 1
    except BudgetExceeded:
        return SearchResult(G, "p", s, None, None, counter.nodes, False, m, None)
    raise AssertionError("the set of all representatives always spans")  # pragma: no cover
