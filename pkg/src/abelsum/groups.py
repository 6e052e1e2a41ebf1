"""Finite abelian groups in invariant-factor form and their elements."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, Iterator, Sequence

DEFAULT_ELEMENT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    """An enumeration or search ran past its caller-supplied cap."""


class GroupMismatch(ValueError):
    pass


def canonical_factors(factors: Iterable[int]) -> tuple[int, ...]:
    """Normalize a factor list to the divisibility chain n1 | n2 | ... | nr.

    Repeatedly replaces a pair (a, b) by (gcd(a, b), lcm(a, b)) until every
    factor divides the next, then drops trivial factors.  The trivial group
    is represented as ``(1,)``.
    """
    fs = [int(f) for f in factors]
    if any(f < 1 for f in fs):
        raise ValueError(f"invariant factors must be >= 1, got {fs}")
    changed = True
    while changed:
        changed = False
        for i in range(len(fs)):
            for j in range(i + 1, len(fs)):
                a, b = fs[i], fs[j]
                if b % a:
                    g = math.gcd(a, b)
                    fs[i], fs[j] = g, a * b // g
                    changed = True
    fs = sorted(f for f in fs if f > 1)
    return tuple(fs) if fs else (1,)


@dataclass(frozen=True)
class AbelianGroup:
    """Z_{n1} x ... x Z_{nr} with n1 | n2 | ... | nr.

    Any factor list is accepted and canonicalized, so ``AbelianGroup((4, 2))``
    and ``AbelianGroup((2, 4))`` compare equal.  Element coordinates always
    refer to the canonical factors.
    """

    factors: tuple[int, ...]

    def __init__(self, factors: Iterable[int] | int):
        if isinstance(factors, int):
            factors = (factors,)
        object.__setattr__(self, "factors", canonical_factors(factors))

    @classmethod
    def parse(cls, text: str) -> "AbelianGroup":
        """Parse the literal syntax ``"25"`` or ``"2,4"``."""
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if not parts:
            raise ValueError(f"empty group literal {text!r}")
        return cls(int(p) for p in parts)

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroup":
        return cls((n,))

    def __str__(self) -> str:
        return ",".join(map(str, self.factors))

    def __repr__(self) -> str:
        return f"AbelianGroup({self})"

    @property
    def rank(self) -> int:
        return len(self.factors)

    @cached_property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def is_cyclic(self) -> bool:
        return len(self.factors) == 1

    @cached_property
    def exponent(self) -> int:
        return self.factors[-1]

    @cached_property
    def _weights(self) -> tuple[int, ...]:
        # mixed-radix place values, last coordinate fastest (lex order)
        w = [1] * self.rank
        for i in range(self.rank - 2, -1, -1):
            w[i] = w[i + 1] * self.factors[i + 1]
        return tuple(w)

    # -- elements ---------------------------------------------------------

    @property
    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def element(self, value) -> "GroupElement":
        """Coerce an int, a residue sequence, or a GroupElement into G."""
        if isinstance(value, GroupElement):
            if value.group != self:
                raise GroupMismatch(f"{value!r} is not an element of {self!r}")
            return value
        if isinstance(value, int):
            if self.rank != 1:
                raise GroupMismatch(f"integer {value} given for non-cyclic group {self}")
            value = (value,)
        coords = tuple(int(c) % n for c, n in zip(value, self.factors))
        if len(coords) != self.rank or len(tuple(value)) != self.rank:
            raise GroupMismatch(f"{value!r} has wrong length for group {self}")
        return GroupElement(self, coords)

    def parse_element(self, text: str) -> "GroupElement":
        return self.element(tuple(int(p) for p in text.split(",")))

    def parse_elements(self, text: str) -> list["GroupElement"]:
        """Parse a set literal.

        For cyclic groups ``"1,4,6"`` lists three elements.  For other groups
        elements are separated by ``;`` and residues by ``,``, e.g. ``"1,3;0,2"``.
        """
        text = text.strip()
        if not text:
            return []
        if self.is_cyclic and ";" not in text:
            return [self.element(int(p)) for p in text.split(",") if p.strip()]
        return [self.parse_element(p) for p in text.split(";") if p.strip()]

    def index(self, g: "GroupElement") -> int:
        return sum(c * w for c, w in zip(g.coords, self._weights))

    def from_index(self, idx: int) -> "GroupElement":
        coords = []
        for w, n in zip(self._weights, self.factors):
            coords.append((idx // w) % n)
        return GroupElement(self, tuple(coords))

    def coords_of_index(self, idx: int) -> tuple[int, ...]:
        return tuple((idx // w) % n for w, n in zip(self._weights, self.factors))

    def add_index(self, i: int, j: int) -> int:
        """Add two elements given as packed indices."""
        out = 0
        for w, n in zip(self._weights, self.factors):
            out += (((i // w) + (j // w)) % n) * w
        return out

    def mul_index(self, k: int, i: int) -> int:
        out = 0
        for w, n in zip(self._weights, self.factors):
            out += ((k * (i // w)) % n) * w
        return out

    def neg_index(self, i: int) -> int:
        return self.mul_index(-1, i)

    def elements(self, budget: int = DEFAULT_ELEMENT_BUDGET) -> list["GroupElement"]:
        """All elements in lexicographic order, starting with 0."""
        if self.order > budget:
            raise BudgetExceeded(f"|G| = {self.order} exceeds element budget {budget}")
        return [GroupElement(self, c) for c in itertools.product(*(range(n) for n in self.factors))]

    def __iter__(self) -> Iterator["GroupElement"]:
        return iter(self.elements())

    def __len__(self) -> int:
        return self.order

    def order2_count(self) -> int:
        """Number of elements of order exactly 2."""
        return 2 ** sum(1 for n in self.factors if n % 2 == 0) - 1

    @cached_property
    def order_table(self) -> "ElementOrderTable":
        return ElementOrderTable(self)


@dataclass(frozen=True, repr=False)
class GroupElement:
    group: AbelianGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.group.rank or not all(
            0 <= c < n for c, n in zip(self.coords, self.group.factors)
        ):
            raise ValueError(f"coords {self.coords} not reduced for {self.group}")

    def _check(self, other: "GroupElement") -> None:
        if not isinstance(other, GroupElement) or other.group != self.group:
            raise GroupMismatch(f"cannot combine {self!r} with {other!r}")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return add(self, other)

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return add(self, scalar_mul(-1, other))

    def __neg__(self) -> "GroupElement":
        return scalar_mul(-1, self)

    def __rmul__(self, k: int) -> "GroupElement":
        return scalar_mul(k, self)

    def __lt__(self, other: "GroupElement") -> bool:
        return self.coords < other.coords

    @property
    def index(self) -> int:
        return self.group.index(self)

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int:
        return element_order(self)

    def __str__(self) -> str:
        return ",".join(map(str, self.coords))

    def __repr__(self) -> str:
        return f"<{self} in Z[{self.group}]>"

    def to_json(self):
        return self.coords[0] if self.group.is_cyclic else list(self.coords)


def add(g: GroupElement, h: GroupElement) -> GroupElement:
    g._check(h)
    fs = g.group.factors
    return GroupElement(g.group, tuple((a + b) % n for a, b, n in zip(g.coords, h.coords, fs)))


def scalar_mul(k: int, g: GroupElement) -> GroupElement:
    fs = g.group.factors
    return GroupElement(g.group, tuple((k * a) % n for a, n in zip(g.coords, fs)))


def element_order(g: GroupElement) -> int:
    return reduce(
        math.lcm,
        (n // math.gcd(n, c) for c, n in zip(g.coords, g.group.factors)),
        1,
    )


def order2_count(G: AbelianGroup) -> int:
    return G.order2_count()


def elements(G: AbelianGroup, budget: int = DEFAULT_ELEMENT_BUDGET) -> list[GroupElement]:
    return G.elements(budget)


@dataclass(frozen=True)
class ElementOrderTable:
    group: AbelianGroup
    order_of: dict = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "order_of", {g: element_order(g) for g in self.group.elements()})

    def __getitem__(self, g: GroupElement) -> int:
        return self.order_of[g]

    def with_order_at_most(self, k: int) -> list[GroupElement]:
        return [g for g, o in self.order_of.items() if o <= k]


def abelian_groups_of_order(n: int) -> list[AbelianGroup]:
    """Every abelian group of order n up to isomorphism, one per invariant-factor chain."""
    out: list[tuple[int, ...]] = []

    def chains(rest: int, last: int, acc: tuple[int, ...]):
        # build n_r, n_{r-1}, ... with each new factor dividing the previous
        if rest == 1:
            out.append(tuple(reversed(acc)))
            return
        for d in range(2, rest + 1):
            if rest % d == 0 and (last % d == 0) and _chain_ok(d, rest // d):
                chains(rest // d, d, acc + (d,))

    def _chain_ok(d: int, remaining: int) -> bool:
        # every remaining factor must divide d, so remaining must divide a power of d
        r = remaining
        while r > 1:
            g = math.gcd(r, d)
            if g == 1:
                return False
            r //= g
        return True

    if n == 1:
        return [AbelianGroup((1,))]
    chains(n, n, ())
    groups = sorted({AbelianGroup(c) for c in out}, key=lambda G: G.factors)
    return groups


def as_elements(G: AbelianGroup, A: Sequence) -> list[GroupElement]:
    return [G.element(a) for a in A]
