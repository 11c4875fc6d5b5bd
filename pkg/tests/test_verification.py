import json

import pytest
from hypothesis import given, strategies as st

from cactikit.cacti import based_complex, unbased_complex
from cactikit.homology import homology
from cactikit.moduli import dual_complex
from cactikit.verification import (IntPolynomial, arnold_poincare, check_bar, check_d2, check_hycom,
                                   check_jacobi, check_koszul, check_oracles, check_poincare_duality,
                                   check_transfer, hycom_sum, jacobi_sum, moduli_betti_oracle, plan,
                                   run_checks)


def test_polynomial_arithmetic():
    p = IntPolynomial((1, 2))
    assert (p * p).coefficients == (1, 4, 4)
    assert (p + IntPolynomial((-1, -2))).coefficients == ()
    assert IntPolynomial((1, 0, 0)).degree == 0
    assert p(3) == 7


@given(st.lists(st.integers(-9, 9), max_size=5), st.lists(st.integers(-9, 9), max_size=5), st.integers(-5, 5))
def test_polynomial_evaluation_is_a_ring_map(a, b, x):
    p, q = IntPolynomial(tuple(a)), IntPolynomial(tuple(b))
    assert (p * q)(x) == p(x) * q(x)
    assert (p + q)(x) == p(x) + q(x)


def test_arnold_examples():
    assert arnold_poincare(3, reduced=True).coefficients == (1, 2)
    assert arnold_poincare(2, reduced=True).coefficients == (1,)
    assert arnold_poincare(4).coefficients == (1, 6, 11, 6)


def test_moduli_oracle_examples():
    assert moduli_betti_oracle(2).coefficients == (1,)
    assert moduli_betti_oracle(3).coefficients == (1, 1)
    assert moduli_betti_oracle(4).coefficients == (1, 5, 1)
    assert moduli_betti_oracle(5).coefficients == (1, 16, 16, 1)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_homology_matches_oracles(n):
    based = homology(based_complex(n))
    assert based.betti_list() == list(arnold_poincare(n).coefficients) and based.is_torsion_free()
    unbased = homology(unbased_complex(n))
    assert unbased.betti_list() == list(arnold_poincare(n, reduced=True).coefficients)
    assert unbased.is_torsion_free()
    assert check_oracles(n).passed


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_poincare_duality(n):
    assert check_poincare_duality(n).passed


def test_dual_betti_n5():
    assert homology(dual_complex(5)).betti_list() == [1, 0, 16, 0, 16, 0, 1]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_transfer_and_d2(n):
    assert check_transfer(n).passed
    assert check_d2(n).passed


def test_jacobi_three_zero_is_exact_zero():
    assert jacobi_sum(3, 0).is_zero()
    cert = check_jacobi(3, 0)
    assert cert.passed and cert.residual.is_zero()


@pytest.mark.parametrize("k,l", [(3, 1), (4, 0), (3, 2), (4, 1), (5, 0)])
def test_jacobi_witnesses(k, l):
    cert = check_jacobi(k, l)
    assert cert.passed
    assert not cert.residual.is_zero()
    assert unbased_complex(k + l).apply_d(cert.witness) == cert.residual


@pytest.mark.parametrize("l", [0, 1, 2])
def test_jacobi_degenerate_k2(l):
    assert check_jacobi(2, l).passed


def test_jacobi_with_a_wrong_sign_fails():
    # flipping the right-hand side must break the relation
    from cactikit.operads import compose_grav_chains
    from cactikit.verification import bracket
    wrong = jacobi_sum(3, 1) + 2 * compose_grav_chains(bracket(2), 1, bracket(3))
    assert wrong != jacobi_sum(3, 1)
    from cactikit.homology import is_boundary
    assert is_boundary(wrong, unbased_complex(4)) is None


@pytest.mark.parametrize("case,n", [(0, 3), (1, 4)])
def test_hycom(case, n):
    cert = check_hycom(case)
    assert cert.passed
    cx = dual_complex(n)
    assert cx.apply_d(cert.witness) == cert.residual
    assert cert.residual.degree == 2 * case


def test_hycom_sides_are_cycles():
    assert dual_complex(4).apply_d(hycom_sum(1)).is_zero()
    with pytest.raises(ValueError):
        hycom_sum(2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_koszul_and_bar(n):
    assert check_koszul(n).passed
    assert check_bar(n).passed


def test_certificate_json():
    cert = check_jacobi(3, 1)
    data = cert.to_json()
    assert set(data) == {"check", "status", "witness", "residual"}
    assert data["status"] == "pass"
    json.dumps(data)


def test_plan_and_run():
    with pytest.raises(ValueError):
        plan("nonsense", None, 4)
    certs = run_checks("duality", max_arity=4)
    assert [c.check for c in certs] == ["duality(n=2)", "duality(n=3)", "duality(n=4)"]
