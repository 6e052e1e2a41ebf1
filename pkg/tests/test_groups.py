import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abelsum.groups import (
    AbelianGroup,
    BudgetExceeded,
    GroupMismatch,
    abelian_groups_of_order,
    add,
    canonical_factors,
    element_order,
    elements,
    order2_count,
    scalar_mul,
)

Z25 = AbelianGroup.cyclic(25)
Z2Z4 = AbelianGroup((2, 4))


def test_add_examples():
    assert add(Z25.element(11), Z25.element(14)) == Z25.zero
    assert add(Z25.element(3), Z25.element(4)) == Z25.element(7)
    assert add(Z2Z4.element((1, 3)), Z2Z4.element((1, 2))) == Z2Z4.element((0, 1))


def test_scalar_mul_examples():
    assert scalar_mul(4, Z25.element(3)) == Z25.element(12)
    assert scalar_mul(-1, Z25.element(3)) == Z25.element(22)
    assert all(scalar_mul(25, g).is_zero for g in Z25)


def test_elements_listing():
    assert [g.to_json() for g in elements(AbelianGroup.cyclic(3))] == [0, 1, 2]
    assert [g.coords for g in elements(AbelianGroup((2, 2)))] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert [g.to_json() for g in elements(AbelianGroup.cyclic(1))] == [0]


def test_elements_budget():
    with pytest.raises(BudgetExceeded):
        elements(AbelianGroup.cyclic(100), budget=50)


def test_order2_count_examples():
    assert order2_count(Z25) == 0
    assert order2_count(Z2Z4) == 3
    for k in range(1, 6):
        assert order2_count(AbelianGroup((2,) * k)) == 2**k - 1


def test_element_order_examples():
    assert element_order(Z25.zero) == 1
    assert element_order(Z25.element(5)) == 5
    assert element_order(Z2Z4.element((1, 2))) == 2


def test_canonical_factors():
    assert canonical_factors((4, 2)) == (2, 4)
    assert canonical_factors((2, 3)) == (6,)
    assert canonical_factors((6, 4)) == (2, 12)
    assert canonical_factors((1, 1)) == (1,)
    assert AbelianGroup((3, 2)) == AbelianGroup.cyclic(6)
    with pytest.raises(ValueError):
        canonical_factors((0, 3))


def test_parse_and_mismatch():
    G = AbelianGroup.parse("2,4")
    assert G == Z2Z4
    assert [g.coords for g in G.parse_elements("1,3;0,2")] == [(1, 3), (0, 2)]
    assert [g.to_json() for g in Z25.parse_elements("1,4,6")] == [1, 4, 6]
    with pytest.raises(GroupMismatch):
        Z25.element(1) + AbelianGroup.cyclic(5).element(1)


def _brute_groups(n):
    # every divisibility chain of length <= 6 with product n, built independently of the library
    found = set()
    divs = [d for d in range(2, n + 1) if n % d == 0]
    for r in range(1, 7):
        for combo in itertools.product(divs, repeat=r):
            if all(combo[i + 1] % combo[i] == 0 for i in range(r - 1)) and _prod(combo) == n:
                found.add(combo)
    return found or {(1,)}


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


@pytest.mark.parametrize("n", range(1, 33))
def test_abelian_groups_of_order(n):
    got = {G.factors for G in abelian_groups_of_order(n)}
    assert got == _brute_groups(n)


def test_group_counts_known():
    # numbers of abelian groups of order 16, 32, 24
    assert len(abelian_groups_of_order(16)) == 5
    assert len(abelian_groups_of_order(32)) == 7
    assert len(abelian_groups_of_order(24)) == 3


factor_lists = st.lists(st.integers(1, 8), min_size=1, max_size=3)


@given(factor_lists, st.data())
def test_group_axioms(fs, data):
    G = AbelianGroup(fs)
    idx = st.integers(0, G.order - 1)
    g, h, k = (G.from_index(data.draw(idx)) for _ in range(3))
    assert (g + h) + k == g + (h + k)
    assert g + h == h + g
    assert g + G.zero == g
    assert g + (-g) == G.zero
    assert scalar_mul(G.exponent, g) == G.zero
    assert G.order % element_order(g) == 0


@given(factor_lists)
def test_canonical_is_isomorphism_invariant(fs):
    G = AbelianGroup(fs)
    assert G.order == _prod(fs)
    assert all(G.factors[i + 1] % G.factors[i] == 0 for i in range(len(G.factors) - 1))
    assert AbelianGroup(list(reversed(fs))) == G
    # the order statistics of elements are an isomorphism invariant
    direct = sorted(
        _lcm_all(n // _gcd(c, n) for c, n in zip(coords, fs))
        for coords in itertools.product(*(range(n) for n in fs))
    )
    assert direct == sorted(element_order(g) for g in G)


@given(factor_lists)
def test_index_roundtrip_is_lex(fs):
    G = AbelianGroup(fs)
    els = G.elements()
    assert [G.index(g) for g in els] == list(range(G.order))
    assert [g.coords for g in els] == sorted(g.coords for g in els)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _lcm_all(xs):
    out = 1
    for x in xs:
        out = out * x // _gcd(out, x)
    return out
