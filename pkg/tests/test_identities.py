"""
Tests for the super Catalan, symmetric function, 2F1, Jacobi and Toeplitz identities.
"""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest
import sympy

from lkp_stability.errors import InvalidParameter, NonTerminating, SampleAtPole, ZeroPoint
from lkp_stability.exactpoly import ExactPolynomial, binomial, factorial, rising_factorial
from lkp_stability.identities import (
    Pochhammer,
    ToeplitzWindow,
    default_jacobi_samples,
    gauss_2f1_truncated,
    jacobi_parameters,
    jacobi_polynomial,
    jacobi_side,
    lkp_sr_decomposition,
    q_polynomial,
    super_catalan,
    szily_check,
    toeplitz_minor_scan,
    verify_jacobi_relation,
    verify_symmetric_identity,
)
from lkp_stability.operators import MuSequence

X = sympy.Symbol("x")


def test_super_catalan_values():
    assert super_catalan(1, 1) == 2
    assert super_catalan(2, 0) == 6
    assert super_catalan(2, 1) == 4
    assert super_catalan(2, 2) == 6
    assert super_catalan(0, 3) == binomial(6, 3)
    with pytest.raises(InvalidParameter):
        super_catalan(-1, 2)


def test_szily_exhaustive():
    for a in range(11):
        for b in range(a + 1):
            report = szily_check(a, b)
            assert report.passed, report.to_dict()
    with pytest.raises(InvalidParameter):
        szily_check(1, 2)


def test_symmetric_identity():
    assert verify_symmetric_identity(MuSequence.of_lkp(1), [1, 1]).passed
    assert verify_symmetric_identity(MuSequence([1]), ["1/2", -3]).passed
    assert verify_symmetric_identity(MuSequence.of_lkp(3), [1, 2, 3, 4]).passed
    assert verify_symmetric_identity(MuSequence(["2/3", 5, -1, 0, 7]), ["-1/2", 2, "5/3"]).passed
    with pytest.raises(ZeroPoint):
        verify_symmetric_identity(MuSequence([1]), [1, 0])


def test_pochhammer():
    assert Pochhammer(Fraction(1, 2), 3).value == Fraction(15, 8)
    assert Pochhammer(-2, 3).vanishes()
    assert not Pochhammer(-2, 2).vanishes()
    assert not Pochhammer(Fraction(-1, 2), 5).vanishes()


def test_q_polynomial():
    assert q_polynomial(2, 1) == ExactPolynomial([1, 1])
    assert q_polynomial(4, 1) == ExactPolynomial([1, 6, 2])
    assert q_polynomial(3, 1) == ExactPolynomial([1, 3])
    with pytest.raises(InvalidParameter):
        q_polynomial(0, 1)


def test_gauss_2f1_truncated():
    assert gauss_2f1_truncated(-1, 3, 2, 1, 10) == ExactPolynomial([1, Fraction(-3, 2)])
    assert gauss_2f1_truncated(0, 5, 3, 1, 10) == ExactPolynomial([1])
    # Q_4^1 through its hypergeometric form
    n, p = 4, 1
    q = gauss_2f1_truncated(Fraction(-n, 2), Fraction(1 - n, 2), p + 1, 4, n)
    assert q.scale(binomial(2 * p - 1, p)) == ExactPolynomial([1, 6, 2])
    with pytest.raises(NonTerminating):
        gauss_2f1_truncated(Fraction(1, 2), Fraction(1, 3), 1, 1, 10)
    with pytest.raises(NonTerminating):
        gauss_2f1_truncated(-20, 1, 1, 1, 5)
    with pytest.raises(InvalidParameter):
        gauss_2f1_truncated(-1, 1, 0, 1, 5)


def test_jacobi_polynomial_small_cases():
    assert jacobi_polynomial(0, 3, 1) == ExactPolynomial([1])
    assert jacobi_polynomial(1, 1, Fraction(-1, 2)) == ExactPolynomial([Fraction(3, 4), Fraction(5, 4)])
    with pytest.raises(InvalidParameter):
        jacobi_polynomial(-1, 0, 0)


def _sympy_rational(value):
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


@pytest.mark.parametrize("alpha,beta", [
    (1, Fraction(-1, 2)),
    (3, Fraction(1, 2)),
    (Fraction(2, 3), Fraction(-1, 5)),
])
def test_jacobi_polynomial_against_sympy(alpha, beta):
    for m in range(7):
        ours = jacobi_polynomial(m, alpha, beta)
        assert ours(1) == rising_factorial(1 + alpha, m) / factorial(m)
        expected = sympy.jacobi_poly(m, _sympy_rational(alpha), _sympy_rational(beta), X, polys=True)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(expected.all_coeffs())]
        assert ours == ExactPolynomial(coeffs)


def test_jacobi_polynomial_where_recurrence_degenerates():
    # alpha + beta = -2 zeroes the recurrence denominator at k = 2
    p2 = jacobi_polynomial(2, Fraction(-1, 2), Fraction(-3, 2))
    assert p2 == ExactPolynomial([Fraction(-1, 8), Fraction(1, 4), Fraction(1, 4)])
    assert p2(1) == Fraction(3, 8)


def test_jacobi_parameters_follow_parity():
    assert jacobi_parameters(6, 2) == (3, 2, Fraction(-1, 2))
    assert jacobi_parameters(7, 2) == (3, 2, Fraction(1, 2))
    assert len(default_jacobi_samples(12)) == 9
    assert len(default_jacobi_samples(40)) == 23
    assert Fraction(1, 4) not in default_jacobi_samples(40)


def test_jacobi_side_matches_q():
    for n in range(1, 9):
        for p in range(1, 4):
            for z in (Fraction(-1), Fraction(2), Fraction(1, 3)):
                assert jacobi_side(n, p, z) == q_polynomial(n, p)(z)
    with pytest.raises(SampleAtPole):
        jacobi_side(4, 1, Fraction(1, 4))


def test_jacobi_relation_maps_roots():
    report = verify_jacobi_relation(2, 1)
    assert report.passed, report.to_dict()
    [[lo, hi]] = report.details["mapped_roots"]
    assert lo < -1 < hi

    assert verify_jacobi_relation(1, 3).passed
    samples = ["-1", "-1/2", "1/3", "2", "5", "-7"]
    report = verify_jacobi_relation(6, 2, samples=samples)
    assert report.passed, report.to_dict()
    assert len(report.details["mapped_roots"]) == 3


def test_jacobi_relation_rejects_bad_samples():
    with pytest.raises(SampleAtPole):
        verify_jacobi_relation(4, 1, samples=[1, 2, "1/4", 5])
    with pytest.raises(InvalidParameter):
        verify_jacobi_relation(6, 1, samples=[1, 2, 3])


def test_lkp_sr_decomposition():
    assert lkp_sr_decomposition(1) == [(1, 1)]
    assert lkp_sr_decomposition(2) == [(1, 4), (2, -1)]
    assert lkp_sr_decomposition(3) == [(1, 15), (2, -6), (3, 1)]
    with pytest.raises(InvalidParameter):
        lkp_sr_decomposition(0)


def test_toeplitz_window():
    window = ToeplitzWindow((1, 2, 1), 0, 3)
    assert window.rows() == [[1, 0, 0], [2, 1, 0], [1, 2, 1]]
    assert window.minor((1, 2), (0, 1)) == 3
    assert ToeplitzWindow((1, 0, 1), 0, 3).minor((1, 2), (0, 1)) == -1


def test_toeplitz_scan():
    report = toeplitz_minor_scan([1, 2, 1], 2, 4)
    assert report.passed
    assert report.details["minimum"] == 0

    report = toeplitz_minor_scan([1, 0, 1], 2, 4)
    assert not report.passed
    assert report.counterexample == {"order": 2, "rows": [1, 2], "cols": [0, 1], "value": Fraction(-1)}

    full = toeplitz_minor_scan([1, 0, 1], 2, 3, mode="all")
    assert not full.passed
    assert full.details["minors_checked"] == 9 + 9

    with pytest.raises(InvalidParameter):
        toeplitz_minor_scan([1, 1], 5, 4)
    with pytest.raises(InvalidParameter):
        toeplitz_minor_scan([1, 1], 2, 4, mode="diagonal")


def test_toeplitz_scans_agree_across_threads():
    sequences = [[1, 5, 10, 10, 5, 1], [3, 35, 105, 105, 35, 3], [1, 0, 1], [2, 3, 1]] * 4
    serial = [toeplitz_minor_scan(seq, 3, 6, mode="all").to_dict() for seq in sequences]
    with ThreadPoolExecutor(max_workers=8) as executor:
        threaded = list(executor.map(lambda seq: toeplitz_minor_scan(seq, 3, 6, mode="all").to_dict(), sequences))
    assert threaded == serial
