from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from cactikit.homology import Chain, homology, verify_complex
from cactikit.moduli import (DecoratedTreeCell, ModuliError, act_cell, act_chain, compose_dual,
                             compose_dual_chains, dual_boundary, dual_boundary_chain, dual_complex,
                             fundamental_class, moduli_cells, primal_boundary, primal_complex, unit_cell)
from cactikit.operads import block_permutation
from cactikit.trees import NestedTree


def cell(vertices, *words):
    return DecoratedTreeCell.from_mapping(NestedTree.of(vertices),
                                          dict(zip(sorted(map(tuple, vertices), key=lambda v: (-len(v), v)), words)))


def sizes(c):
    return [len(v) for _, v in sorted(c.basis.items())]


def test_counts_n3():
    cells = moduli_cells(3)
    assert len(cells) == 8
    assert sizes(primal_complex(3)) == [2, 3, 3]
    assert sizes(dual_complex(3)) == [3, 3, 2]
    assert len(moduli_cells(2)) == 1 and moduli_cells(2)[0].primal_dim == 0


def test_counts_larger():
    assert sizes(primal_complex(4)) == [6, 24, 40, 30, 15]
    assert sizes(primal_complex(5)) == [24, 180, 490, 690, 600, 315, 105]


def test_dimensions_in_range():
    for n in (2, 3, 4):
        for c in moduli_cells(n):
            assert 0 <= c.primal_dim <= 2 * (n - 2)
            assert c.dual_degree == 2 * (n - 2) - c.primal_dim


def test_primal_boundary_example():
    a = DecoratedTreeCell(NestedTree.of([(1, 2, 3), (1, 2)]), ((1, 2), (1, 2)))
    d = primal_boundary(a)
    words = {c.decorations for c, v in d.terms.items() if v % 2}
    assert words == {((1, 2, 1, 3),), ((1, 2, 3, 2),)}
    corolla = DecoratedTreeCell(NestedTree.corolla(3), ((1, 2, 3),))
    assert primal_boundary(corolla).is_zero()


def test_sphere_structure():
    # each 2-cell of the n=3 complex is bounded by exactly two edges
    for c in moduli_cells(3):
        if c.primal_dim == 2:
            assert len(primal_boundary(c)) == 2


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_complexes_square_to_zero(n):
    assert verify_complex(primal_complex(n))[0]
    assert verify_complex(dual_complex(n))[0]


@pytest.mark.parametrize("n,betti", [(2, [1]), (3, [1, 0, 1]), (4, [1, 0, 5, 0, 1])])
def test_homology(n, betti):
    for cx in (primal_complex(n), dual_complex(n)):
        h = homology(cx)
        assert h.betti_list() == betti
        assert h.is_torsion_free()


def test_dual_boundary_is_transpose():
    for c in moduli_cells(4):
        for f, v in dual_boundary(c).terms.items():
            assert primal_boundary(f)[c] == v


def test_arity_guard():
    with pytest.raises(ModuliError):
        moduli_cells(6)
    with pytest.raises(ModuliError):
        moduli_cells(1)


def test_decorations_must_match_valence():
    with pytest.raises(ModuliError):
        DecoratedTreeCell(NestedTree.corolla(3), ((1, 2),))
    with pytest.raises(ModuliError):
        DecoratedTreeCell(NestedTree.corolla(3), ((2, 1, 3),))


def test_json_shape():
    a = DecoratedTreeCell(NestedTree.of([(1, 2, 3), (1, 2)]), ((1, 2), (1, 2)))
    assert a.to_json() == {"tree": [[1, 2], [1, 2, 3]], "decorations": {"1,2,3": [1, 2], "1,2": [1, 2]}}


def test_fundamental_classes():
    assert fundamental_class(2) == Chain(0, {moduli_cells(2)[0]: 1})
    fc3 = fundamental_class(3)
    assert {c.decorations for c in fc3.terms} == {((1, 2, 3),), ((1, 3, 2),)}
    assert set(fc3.terms.values()) == {1}
    for n in (2, 3, 4, 5):
        fc = fundamental_class(n)
        assert fc.degree == 2 * (n - 2)
        assert dual_boundary_chain(fc).is_zero()
        assert all(c.primal_dim == 0 for c in fc.terms)


@pytest.mark.parametrize("n", [3, 4])
def test_fundamental_class_is_invariant(n):
    fc = fundamental_class(n)
    for g in permutations(range(1, n + 1)):
        assert act_chain(g, fc) == fc


def test_compose_dual_example():
    pt = moduli_cells(2)[0]
    x = compose_dual(pt, 1, pt)
    (c, v), = x.terms.items()
    assert c.tree == NestedTree.of([(1, 2, 3), (1, 2)])
    assert c.decorations == ((1, 2), (1, 2))
    assert c.dual_degree == 0 and v == 1
    with pytest.raises(ModuliError):
        compose_dual(pt, 3, pt)


def test_unit_law():
    u = unit_cell()
    for x in moduli_cells(3):
        for i in range(1, 4):
            assert compose_dual(x, i, u) == Chain(x.dual_degree, {x: 1})
        assert compose_dual(u, 1, x) == Chain(x.dual_degree, {x: 1})


def one(x):
    return Chain(x.dual_degree, {x: 1})


pairs = st.tuples(st.integers(2, 3), st.integers(2, 3)).flatmap(
    lambda nm: st.tuples(st.sampled_from(moduli_cells(nm[0])), st.integers(1, nm[0]),
                         st.sampled_from(moduli_cells(nm[1]))))


@settings(max_examples=200, deadline=None)
@given(pairs)
def test_compose_dual_degree_and_leibniz(triple):
    x, i, y = triple
    z = compose_dual(x, i, y)
    (c, _), = z.terms.items()
    assert c.dual_degree == x.dual_degree + y.dual_degree
    lhs = dual_boundary_chain(z)
    rhs = compose_dual_chains(dual_boundary_chain(one(x)), i, one(y))
    rhs = rhs + (-1) ** x.dual_degree * compose_dual_chains(one(x), i, dual_boundary_chain(one(y)))
    assert lhs == rhs


def test_compose_dual_associative_exhaustive():
    cells = {n: moduli_cells(n) for n in (2, 3)}
    for a in cells[2] + cells[3]:
        for b in cells[2] + cells[3]:
            for c in cells[2]:
                if a.n + b.n + c.n - 2 > 5:
                    continue
                for i in range(1, a.n + 1):
                    for j in range(1, b.n + 1):
                        left = compose_dual_chains(compose_dual(a, i, b), i + j - 1, one(c))
                        right = compose_dual_chains(one(a), i, compose_dual(b, j, c))
                        assert left == right
                    for k in range(i + 1, a.n + 1):
                        left = compose_dual_chains(compose_dual(a, i, b), k + b.n - 1, one(c))
                        right = compose_dual_chains(compose_dual(a, k, c), i, one(b))
                        sign = (-1) ** (b.dual_degree * c.dual_degree)
                        assert left == sign * right


def test_compose_dual_equivariant():
    for a in moduli_cells(3):
        for b in moduli_cells(2) + moduli_cells(3):
            for i in range(1, 4):
                for outer in permutations(range(1, 4)):
                    for inner in permutations(range(1, b.n + 1)):
                        g = block_permutation(3, i, b.n, outer, inner)
                        lhs = act_chain(g, compose_dual(a, i, b))
                        sa, ga = act_cell(outer, a)
                        sb, gb = act_cell(inner, b)
                        assert lhs == sa * sb * compose_dual(ga, outer[i - 1], gb)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(moduli_cells(4)), st.permutations([1, 2, 3, 4]))
def test_action_commutes_with_boundary(c, g):
    x = Chain(c.primal_dim, {c: 1})
    lhs = act_chain(g, Chain(c.primal_dim - 1, dict(primal_boundary(c).terms)))
    s, gc = act_cell(tuple(g), c)
    rhs = s * Chain(c.primal_dim - 1, dict(primal_boundary(gc).terms))
    assert lhs == rhs
