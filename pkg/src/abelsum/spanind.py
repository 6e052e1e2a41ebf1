"""Spanning and independence of a fixed subset A of a finite abelian group.

Two independent routes are kept on purpose: relations are searched by
enumerating coefficient vectors (the definition), while
``signed_sum_table`` builds representation counts with a per-element
convolution.  Tests cross-check one against the other.
"""

from __future__ import annotations

import enum
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .combinatorics import CoeffVector, a_closed, exact_weight_array, q_bound
from .groups import AbelianGroup, GroupElement, as_elements

log = logging.getLogger(__name__)


class Unbounded(enum.Enum):
    NOT_SPANNING = "not-spanning"
    INFINITE = "infinite"

    def __repr__(self) -> str:
        return self.value


NotSpanning = Unbounded.NOT_SPANNING
Infinite = Unbounded.INFINITE


class TheoremViolation(AssertionError):
    """A proved inequality failed on computed data, so some code path is wrong."""


@dataclass
class Verdict:
    holds: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.holds


def _prepare(G: AbelianGroup, A: Sequence) -> list[GroupElement]:
    elems = as_elements(G, A)
    if len(set(elems)) != len(elems):
        raise ValueError(f"set elements must be distinct: {[str(e) for e in elems]}")
    return elems


def _coord_matrix(elems: Sequence[GroupElement]) -> np.ndarray:
    if not elems:
        return np.zeros((0, 1), dtype=np.int64)
    return np.array([e.coords for e in elems], dtype=np.int64)


# -- spanning ---------------------------------------------------------------


def reach_layers(G: AbelianGroup, A: Sequence, radius: int) -> list[set[int]]:
    """layers[r] = packed indices of all signed sums of weight <= r."""
    elems = _prepare(G, A)
    steps = set()
    for e in elems:
        i = e.index
        steps.add(i)
        steps.add(G.neg_index(i))
    layers = [{0}]
    frontier = {0}
    for _ in range(radius):
        cur = set(layers[-1])
        new = set()
        for x in frontier:
            for st in steps:
                y = G.add_index(x, st)
                if y not in cur:
                    new.add(y)
        cur |= new
        layers.append(cur)
        frontier = new
    return layers


def signed_sum_set(G: AbelianGroup, A: Sequence, radius: int) -> set[GroupElement]:
    return {G.from_index(i) for i in reach_layers(G, A, radius)[-1]}


def is_s_spanning(G: AbelianGroup, A: Sequence, s: int) -> Verdict:
    """True iff every element is a signed sum of weight <= s.

    On failure the witness is the lexicographically least unreached element.
    """
    if s < 0:
        raise ValueError("s must be non-negative")
    reached = reach_layers(G, A, s)[-1]
    if len(reached) == G.order:
        return Verdict(True)
    missing = min(set(range(G.order)) - reached)
    return Verdict(False, G.from_index(missing))


def spanning_number(G: AbelianGroup, A: Sequence) -> int | Unbounded:
    elems = _prepare(G, A)
    steps = {e.index for e in elems} | {G.neg_index(e.index) for e in elems}
    reached = {0}
    frontier = {0}
    s = 0
    while len(reached) < G.order:
        new = set()
        for x in frontier:
            for st in steps:
                y = G.add_index(x, st)
                if y not in reached:
                    new.add(y)
        if not new:
            return NotSpanning
        reached |= new
        frontier = new
        s += 1
    return s


# -- independence -----------------------------------------------------------


def _first_relation(G: AbelianGroup, elems: Sequence[GroupElement], w: int) -> CoeffVector | None:
    """Lex-least vector of weight exactly w with zero signed sum, if any."""
    m = len(elems)
    V = exact_weight_array(m, w)
    if V.shape[0] == 0:
        return None
    sums = (V @ _coord_matrix(elems)) % np.array(G.factors, dtype=np.int64)
    zero = np.flatnonzero(~sums.any(axis=1))
    if zero.size == 0:
        return None
    return CoeffVector(tuple(int(x) for x in V[zero[0]]))


def is_t_independent(G: AbelianGroup, A: Sequence, t: int) -> Verdict:
    """True iff no nonzero relation of weight <= t exists.

    Relations are enumerated weight by weight, so a failing witness is a
    minimal-weight relation (lex-least among those).
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    elems = _prepare(G, A)
    if not elems:
        return Verdict(True)
    for w in range(1, t + 1):
        rel = _first_relation(G, elems, w)
        if rel is not None:
            return Verdict(False, rel)
    return Verdict(True)


def minimal_relation(G: AbelianGroup, A: Sequence) -> CoeffVector | None:
    elems = _prepare(G, A)
    if not elems:
        return None
    # n * a_1 = 0 bounds the search
    for w in range(1, G.order + 1):
        rel = _first_relation(G, elems, w)
        if rel is not None:
            return rel
    raise AssertionError("no relation up to weight |G|")  # pragma: no cover


def independence_number(G: AbelianGroup, A: Sequence) -> int | Unbounded:
    rel = minimal_relation(G, A)
    if rel is None:
        return Infinite
    return rel.weight - 1


# -- representation counts --------------------------------------------------


@dataclass
class SignedSumTable:
    radius: int
    sums: dict[GroupElement, int]
    m: int = 0

    @property
    def total(self) -> int:
        return sum(self.sums.values())

    @property
    def distinct(self) -> int:
        return len(self.sums)

    def all_unique(self) -> bool:
        return all(c == 1 for c in self.sums.values())

    def covers(self, G: AbelianGroup) -> bool:
        return len(self.sums) == G.order


def signed_sum_table(G: AbelianGroup, A: Sequence, radius: int) -> SignedSumTable:
    """Count, for every g, the coefficient vectors of weight <= radius with sum g.

    Built by convolving one element at a time over exact-weight layers, not by
    enumerating vectors.
    """
    elems = _prepare(G, A)
    # layer[w] maps packed index -> number of realizations with weight exactly w
    layer = [Counter({0: 1})] + [Counter() for _ in range(radius)]
    for e in elems:
        mult = [G.mul_index(k, e.index) for k in range(radius + 1)]
        negm = [G.neg_index(x) for x in mult]
        new = [Counter() for _ in range(radius + 1)]
        for w in range(radius + 1):
            for g, c in layer[w].items():
                new[w][g] += c
                for k in range(1, radius - w + 1):
                    new[w + k][G.add_index(g, mult[k])] += c
                    new[w + k][G.add_index(g, negm[k])] += c
        layer = new
    total: Counter = Counter()
    for lay in layer:
        total.update(lay)
    return SignedSumTable(radius, {G.from_index(i): c for i, c in sorted(total.items())}, len(elems))


def even_t_independent_by_table(G: AbelianGroup, A: Sequence, t: int) -> bool:
    """For even t: A is t-independent iff all weight <= t/2 sums are distinct."""
    if t % 2:
        raise ValueError("table criterion only applies to even t")
    return signed_sum_table(G, A, t // 2).all_unique()


# -- extremal cases ---------------------------------------------------------


def is_perfect_spanning(G: AbelianGroup, A: Sequence, s: int) -> bool:
    m = len(_prepare(G, A))
    return G.order == a_closed(m, s) and bool(is_s_spanning(G, A, s))


def is_tight_independent(G: AbelianGroup, A: Sequence, t: int) -> bool:
    if t < 2:
        raise ValueError("tightness is defined for t >= 2")
    m = len(_prepare(G, A))
    return G.order == q_bound(m, t) and bool(is_t_independent(G, A, t))


@dataclass
class DualityReport:
    n: int
    m: int
    span: int | Unbounded
    ind: int | Unbounded
    skipped: str | None = None
    checks: dict[str, bool] = field(default_factory=dict)
    perfect: bool = False
    tight: bool = False

    @property
    def ok(self) -> bool:
        return self.skipped is None and all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "span": self.span if isinstance(self.span, int) else self.span.value,
            "ind": self.ind if isinstance(self.ind, int) else self.ind.value,
            "skipped": self.skipped,
            "checks": self.checks,
            "perfect": self.perfect,
            "tight": self.tight,
        }


def duality_check(G: AbelianGroup, A: Sequence) -> DualityReport:
    """Evaluate a(m,t/2) <= n <= a(m,s), t <= 2s and (t = 2s <=> perfect <=> tight)."""
    elems = _prepare(G, A)
    m, n = len(elems), G.order
    s, t = spanning_number(G, elems), independence_number(G, elems)
    rep = DualityReport(n, m, s, t)
    if not isinstance(s, int):
        rep.skipped = "set does not span the group"
        return rep
    if not isinstance(t, int) or t < 2 or t % 2:
        rep.skipped = f"needs even ind(A) >= 2, got {t!r}"
        return rep
    rep.perfect = is_perfect_spanning(G, elems, s)
    rep.tight = is_tight_independent(G, elems, t)
    rep.checks = {
        "order_between_bounds": a_closed(m, t // 2) <= n <= a_closed(m, s),
        "t_le_2s": t <= 2 * s,
        "perfect_iff_t_eq_2s": rep.perfect == (t == 2 * s),
        "tight_iff_t_eq_2s": rep.tight == (t == 2 * s),
    }
    if not rep.ok:
        raise TheoremViolation(f"duality violated on {[str(e) for e in elems]} in Z[{G}]: {rep.checks}")
    return rep


# -- certificates -----------------------------------------------------------


CLAIM_KINDS = ("spanning", "independent", "perfect", "tight")


@dataclass(frozen=True)
class Claim:
    kind: str
    param: int

    def __post_init__(self):
        if self.kind not in CLAIM_KINDS:
            raise ValueError(f"unknown claim kind {self.kind!r}")
        if self.param < 0:
            raise ValueError("claim parameter must be non-negative")

    @classmethod
    def parse(cls, text: str) -> "Claim":
        kind, _, param = text.partition(":")
        return cls(kind.strip(), int(param))

    def __str__(self) -> str:
        return f"{self.kind}:{self.param}"


@dataclass
class GuardLog:
    """Tally of theorem-bound guard evaluations across the process."""

    checked: int = 0
    violations: list[str] = field(default_factory=list)

    def reset(self) -> None:
        self.checked = 0
        self.violations.clear()


GUARDS = GuardLog()


def _guard(G: AbelianGroup, m: int, claim: Claim, holds: bool) -> None:
    if not holds:
        return
    n = G.order
    bad = None
    if claim.kind in ("spanning", "perfect") and n > a_closed(m, claim.param):
        bad = f"n={n} > a({m},{claim.param})"
    if claim.kind in ("independent", "tight") and claim.param >= 2 and n < q_bound(m, claim.param):
        bad = f"n={n} < q({m},{claim.param})"
    GUARDS.checked += 1
    if bad:
        GUARDS.violations.append(bad)
        raise TheoremViolation(bad)


def evaluate_claim(G: AbelianGroup, elems: Sequence[GroupElement], claim: Claim) -> Verdict:
    p = claim.param
    if claim.kind == "spanning":
        return is_s_spanning(G, elems, p)
    if claim.kind == "independent":
        return is_t_independent(G, elems, p)
    if claim.kind == "perfect":
        v = is_s_spanning(G, elems, p)
        if v and G.order != a_closed(len(elems), p):
            return Verdict(False, {"order": G.order, "a": a_closed(len(elems), p)})
        return v
    v = is_t_independent(G, elems, p)
    if v and G.order != q_bound(len(elems), p):
        return Verdict(False, {"order": G.order, "q": q_bound(len(elems), p)})
    return v


def _witness_json(w):
    if w is None:
        return None
    if isinstance(w, (GroupElement, CoeffVector)):
        return w.to_json()
    return w


@dataclass(frozen=True)
class SubsetCertificate:
    group: AbelianGroup
    elements: tuple[GroupElement, ...]
    claim: Claim
    holds: bool
    witness: Any = None
    perfect: bool = False
    tight: bool = False

    @property
    def m(self) -> int:
        return len(self.elements)

    def verify(self) -> bool:
        """Re-run the definitional predicate; True iff it reproduces ``holds``."""
        return evaluate_claim(self.group, self.elements, self.claim).holds == self.holds

    def values(self) -> list:
        return [e.to_json() for e in self.elements]

    def to_json(self) -> dict:
        return {
            "group": str(self.group),
            "set": self.values(),
            "claim": str(self.claim),
            "holds": self.holds,
            "witness": _witness_json(self.witness),
            "perfect": self.perfect,
            "tight": self.tight,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SubsetCertificate":
        G = AbelianGroup.parse(data["group"])
        elems = tuple(G.element(x if isinstance(x, int) else tuple(x)) for x in data["set"])
        claim = Claim.parse(data["claim"])
        w = data.get("witness")
        if isinstance(w, list) and claim.kind in ("independent", "tight"):
            w = CoeffVector(tuple(w))
        elif w is not None and claim.kind in ("spanning", "perfect") and not isinstance(w, dict):
            w = G.element(w if isinstance(w, int) else tuple(w))
        return cls(G, elems, claim, bool(data["holds"]), w, bool(data.get("perfect")), bool(data.get("tight")))


def certify(G: AbelianGroup, A: Sequence, claim: Claim | str) -> SubsetCertificate:
    """Evaluate a claim on A and package the outcome, guarded by the order bounds."""
    if isinstance(claim, str):
        claim = Claim.parse(claim)
    elems = tuple(_prepare(G, A))
    v = evaluate_claim(G, elems, claim)
    m, n, p = len(elems), G.order, claim.param
    perfect = tight = False
    if claim.kind in ("spanning", "perfect"):
        perfect = v.holds and n == a_closed(m, p)
    else:
        tight = v.holds and p >= 2 and n == q_bound(m, p)
    _guard(G, m, claim, v.holds)
    return SubsetCertificate(G, elems, claim, v.holds, v.witness, perfect, tight)
