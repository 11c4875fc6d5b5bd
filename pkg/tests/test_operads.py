from itertools import combinations_with_replacement
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from cactikit.cacti import (BasedCactusCell, NecklaceCell, boundary_chain, enumerate_based_cells,
                            enumerate_necklaces)
from cactikit.homology import Chain
from cactikit.operads import (CompositionError, block_permutation, check_operad_axioms, compose_based,
                              compose_based_chains, compose_grav, grav_transfer_identity)


def B(*w):
    return BasedCactusCell.of(w)


def N(*w):
    return NecklaceCell.of(w)


def brute_compose(u, i, v):
    """Overlapping-block substitution, one word per multiset of cut positions."""
    n, m = u.arity, v.arity
    vv = [x + i - 1 for x in v.word]
    uu = [x if x < i else (x + m - 1 if x > i else x) for x in u.word]
    r, l = u.word.count(i), len(vv)
    out = []
    for cuts in combinations_with_replacement(range(1, l + 1), r - 1):
        bounds = (1,) + cuts + (l,)
        blocks = [vv[bounds[j] - 1:bounds[j + 1]] for j in range(r)]
        word, k = [], 0
        for x in uu:
            if x == i and u.word.count(i):
                word.extend(blocks[k])
                k += 1
            else:
                word.append(x)
        out.append(tuple(word))
    return out


def mod2(x):
    return {c.word for c, v in x.terms.items() if v % 2}


def test_compose_based_examples():
    assert compose_based(B(1, 2), 2, B(1, 2)).terms == {B(1, 2, 3): 1}
    x = compose_based(B(2, 1, 2), 2, B(1, 2, 1))
    assert mod2(x) == {(2, 1, 2, 3, 2), (2, 3, 1, 3, 2), (2, 3, 2, 1, 2)}
    assert x.terms == {B(2, 1, 2, 3, 2): 1, B(2, 3, 1, 3, 2): -1, B(2, 3, 2, 1, 2): -1}


@pytest.mark.parametrize("n,m", [(2, 2), (2, 3), (3, 2)])
def test_compose_based_matches_brute_force_mod2(n, m):
    for u in enumerate_based_cells(n):
        for v in enumerate_based_cells(m):
            for i in range(1, n + 1):
                want = brute_compose(u, i, v)
                r, l = u.word.count(i), len(v.word)
                assert len(want) == comb(l + r - 2, r - 1)
                got = compose_based(u, i, v)
                assert mod2(got) == set(want)
                assert all(c.dim == u.dim + v.dim for c in got.terms)


def test_unit_law():
    unit = B(1)
    for u in enumerate_based_cells(3):
        for i in range(1, 4):
            assert compose_based(u, i, unit).terms == {u: 1}
        assert compose_based(unit, 1, u).terms == {u: 1}


def test_slot_out_of_range():
    with pytest.raises(CompositionError):
        compose_grav(N(1, 2), 3, N(1, 2))


def test_compose_grav_examples():
    x = compose_grav(N(1, 2), 2, N(1, 2))
    assert x.terms == {N(1, 2, 3, 2): 1, N(1, 3, 2, 3): 1}
    # four summands when the inner cell is the row of three lobes
    y = compose_grav(N(1, 2), 2, N(1, 2, 3, 2))
    assert mod2(y) == {(1, 2, 3, 4, 3, 2), (1, 4, 3, 2, 3, 4), (1, 3, 2, 3, 4, 3), (1, 3, 4, 3, 2, 3)}
    assert len(compose_grav(N(1, 2), 2, N(1, 2, 3))) == 3


def test_grav_composition_of_points_is_one_dimensional():
    for a in enumerate_necklaces(3, dim=0):
        for b in enumerate_necklaces(2):
            for i in range(1, 4):
                assert all(c.dim == 1 for c in compose_grav(a, i, b).terms)


@pytest.mark.parametrize("n,m", [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3), (4, 2)])
def test_transfer_identity(n, m):
    for a in enumerate_necklaces(n):
        for b in enumerate_necklaces(m):
            for i in range(1, n + 1):
                assert grav_transfer_identity(a, i, b)


def test_leibniz_example():
    u, v = B(2, 1, 2), B(1, 2, 1)
    lhs = boundary_chain(compose_based(u, 2, v))
    du = compose_based_chains(boundary_chain(Chain(1, {u: 1})), 2, Chain(1, {v: 1}))
    dv = compose_based_chains(Chain(1, {u: 1}), 2, boundary_chain(Chain(1, {v: 1})))
    assert lhs == du - dv


def test_associativity_example():
    a = Chain(0, {B(1, 2): 1})
    left = compose_based_chains(compose_based_chains(a, 1, a), 1, a)
    right = compose_based_chains(a, 1, compose_based_chains(a, 1, a))
    assert left == right == Chain(0, {B(1, 2, 3, 4): 1})


def test_block_permutation_identity():
    assert block_permutation(3, 2, 2) == (1, 2, 3, 4)
    assert block_permutation(2, 1, 2, outer=(2, 1)) == (2, 3, 1)


def test_axioms_within_budget_four():
    report = check_operad_axioms(arity_budget=4)
    assert report
    for name, entry in report.items():
        assert entry["checked"] > 0, name
        assert entry["failures"] == [], name


cells = st.tuples(st.integers(2, 3), st.integers(2, 3)).flatmap(
    lambda nm: st.tuples(st.sampled_from(enumerate_based_cells(nm[0])), st.integers(1, nm[0]),
                         st.sampled_from(enumerate_based_cells(nm[1]))))


@settings(max_examples=150, deadline=None)
@given(cells)
def test_based_leibniz_property(triple):
    u, i, v = triple
    x, y = Chain(u.dim, {u: 1}), Chain(v.dim, {v: 1})
    lhs = boundary_chain(compose_based(u, i, v))
    rhs = compose_based_chains(boundary_chain(x), i, y)
    rhs = rhs + (-1) ** u.dim * compose_based_chains(x, i, boundary_chain(y))
    assert lhs == rhs
