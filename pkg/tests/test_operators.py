"""
Tests for the L^p, S_r and T_mu operators and the Laguerre/Turan expressions.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lkp_stability.errors import InvalidParameter, ZeroPolynomial
from lkp_stability.exactpoly import ExactPolynomial, TaylorData
from lkp_stability.identities import lkp_sr_decomposition
from lkp_stability.lpclass import rooted_product
from lkp_stability.operators import (
    MuSequence,
    OperatorSpec,
    apply_lkp,
    apply_sr,
    apply_tmu,
    extended_turan_at_zero,
    gamma_transform,
    laguerre_expression,
    lkp_coefficients,
)
from lkp_stability.rootcert import certify_all_real_negative

coeff_lists = st.lists(
    st.fractions(min_value=-10, max_value=10, max_denominator=6), min_size=1, max_size=8
).filter(lambda c: c[-1] != 0)
rhos = st.lists(st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=10), min_size=1, max_size=6)


def test_lkp_coefficients():
    assert lkp_coefficients(1) == [1, -1]
    assert lkp_coefficients(2) == [3, -4, 1]
    assert lkp_coefficients(4) == [35, -56, 28, -8, 1]
    with pytest.raises(InvalidParameter):
        lkp_coefficients(0)


def test_apply_lkp_examples():
    assert apply_lkp(ExactPolynomial([1, 1]) ** 5, 2) == ExactPolynomial([3, 35, 105, 105, 35, 3])
    assert apply_lkp(ExactPolynomial([1, 2, 1]), 1) == ExactPolynomial([1, 3, 1])
    assert apply_lkp(ExactPolynomial([3]), 2) == ExactPolynomial([27])
    with pytest.raises(ZeroPolynomial):
        apply_lkp(ExactPolynomial(), 1)


def test_apply_sr_examples():
    psi = ExactPolynomial([1, 2, 1])
    assert apply_sr(psi, 0).is_zero()
    assert apply_sr(psi, 1) == ExactPolynomial([1, 3, 1])
    assert apply_sr(psi, 3) == ExactPolynomial([1, 4, 1])
    with pytest.raises(InvalidParameter):
        apply_sr(psi, -1)


def test_apply_tmu_examples():
    one_plus_x = ExactPolynomial([1, 1])
    assert apply_tmu(one_plus_x, MuSequence([1, 0, -1])) == ExactPolynomial([1, 0, 1])
    assert apply_tmu(one_plus_x, MuSequence([0, 1])) == ExactPolynomial([0, 1])
    assert apply_tmu(one_plus_x, MuSequence([])).is_zero()


def test_mu_sequence():
    mu = MuSequence([1, 0, 0])
    assert len(mu) == 1
    assert mu[7] == 0
    assert MuSequence.of_lkp(1).to_list() == ["1", "0", "-1"]
    assert MuSequence.of_lkp(2).to_list() == ["3", "0", "-4", "0", "1"]


def test_gamma_transform():
    mu = MuSequence.of_lkp(1)
    assert gamma_transform(mu, 2) == 1
    assert gamma_transform(mu, 3) == 0
    assert gamma_transform(MuSequence.of_lkp(2), 0) == 3
    assert gamma_transform(mu, -1) == 0


def test_laguerre_expression():
    assert laguerre_expression(ExactPolynomial([0, 1]), 1) == ExactPolynomial([1])
    square = ExactPolynomial([1, 2, 1])
    assert laguerre_expression(square, 1) == square.scale(2)
    assert laguerre_expression(square, 0) == square * square
    with pytest.raises(ZeroPolynomial):
        laguerre_expression(ExactPolynomial(), 1)
    with pytest.raises(InvalidParameter):
        laguerre_expression(square, -1)


def test_extended_turan_at_zero():
    gammas = TaylorData([2, 3, 5, 7, 11])
    assert extended_turan_at_zero(gammas, 0, 1) == -1
    assert extended_turan_at_zero(gammas, 0, 2) == 13
    assert extended_turan_at_zero(TaylorData.exponential(6), 1, 2) == 0
    with pytest.raises(InvalidParameter):
        extended_turan_at_zero(gammas, -1, 1)


def test_operator_spec_json():
    assert OperatorSpec.lkp(2).to_dict() == {"kind": "Lkp", "p": 2}
    assert OperatorSpec.sr(6).to_dict() == {"kind": "Sr", "r": 6}
    tmu = OperatorSpec.tmu(["1", "0", "-1"])
    assert tmu.to_dict() == {"kind": "Tmu", "mu": ["1", "0", "-1"]}
    for spec in (OperatorSpec.lkp(2), OperatorSpec.sr(6), tmu):
        assert OperatorSpec.from_dict(spec.to_dict()) == spec
    assert OperatorSpec.lkp(3).label() == "L^3"
    assert OperatorSpec.sr(0).mu_sequence().is_zero()
    with pytest.raises(InvalidParameter):
        OperatorSpec.from_dict({"kind": "Lkp"})
    with pytest.raises(InvalidParameter):
        OperatorSpec.from_dict({"kind": "Gauss", "p": 1})
    with pytest.raises(InvalidParameter):
        OperatorSpec.lkp(0)


@settings(deadline=None, max_examples=50)
@given(coeff_lists, st.integers(1, 4))
def test_lkp_is_tmu_in_z_squared(coeffs, p):
    psi = ExactPolynomial(coeffs)
    direct = apply_lkp(psi, p)
    composed = apply_tmu(psi, MuSequence.of_lkp(p))
    for k in range(2 * psi.degree + 1):
        assert composed[k] == (direct[k // 2] if k % 2 == 0 else 0)


@settings(deadline=None, max_examples=50)
@given(coeff_lists, st.integers(1, 4))
def test_lkp_is_a_combination_of_sr(coeffs, p):
    psi = ExactPolynomial(coeffs)
    combined = ExactPolynomial()
    for r, weight in lkp_sr_decomposition(p):
        combined = combined + apply_sr(psi, r).scale(weight)
    assert combined == apply_lkp(psi, p)
    assert apply_sr(psi, 1) == apply_lkp(psi, 1)


@settings(deadline=None, max_examples=25)
@given(rhos, st.integers(1, 3))
def test_lkp_preserves_negative_real_roots(rs, p):
    output = apply_lkp(rooted_product(rs), p)
    assert certify_all_real_negative(output).all_real_negative
