"""
Tests for exact polynomial arithmetic, square-free decomposition and Taylor data.
"""

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from lkp_stability.errors import InvalidParameter, ZeroPolynomial
from lkp_stability.exactpoly import (
    ExactPolynomial,
    TaylorData,
    binomial,
    elementary_symmetric,
    elementary_symmetric_all,
    factorial,
    format_rational,
    generalized_binomial,
    poly_arith,
    poly_derivative,
    poly_eval,
    poly_gcd,
    primitive_integer_form,
    rising_factorial,
    set_factorial_cap,
    squarefree_decomposition,
    squarefree_part,
    to_rational,
)

X = sympy.Symbol("x")

small_coeffs = st.lists(st.integers(-9, 9), min_size=1, max_size=7).filter(lambda c: c[-1] != 0)
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def to_sympy(p):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)], X, domain="QQ")


def test_to_rational():
    assert to_rational("3/6") == Fraction(1, 2)
    assert to_rational(4) == Fraction(4)
    assert to_rational(Fraction(-2, 4)) == Fraction(-1, 2)
    with pytest.raises(InvalidParameter):
        to_rational(0.5)
    with pytest.raises(InvalidParameter):
        to_rational(True)
    with pytest.raises(InvalidParameter):
        to_rational("one half")
    assert format_rational(Fraction(-3, 2)) == "-3/2"


def test_factorials_and_binomials():
    assert factorial(0) == 1
    assert factorial(10) == 3628800
    assert binomial(6, 2) == 15
    assert binomial(3, 5) == 0
    assert binomial(3, -1) == 0
    assert rising_factorial(Fraction(1, 2), 2) == Fraction(3, 4)
    assert rising_factorial(-2, 3) == 0
    assert generalized_binomial(Fraction(3, 2), 2) == Fraction(3, 8)
    with pytest.raises(InvalidParameter):
        factorial(-1)


def test_factorial_cap_does_not_change_values():
    try:
        set_factorial_cap(4)
        assert factorial(12) == 479001600
        assert binomial(10, 3) == 120
    finally:
        set_factorial_cap(512)


def test_normalization_strips_trailing_zeros():
    p = ExactPolynomial([1, 2, 0, 0])
    assert p.coeffs == (1, 2)
    assert p.degree == 1
    assert ExactPolynomial([0, 0]).is_zero()
    assert ExactPolynomial().degree is None
    assert p[5] == 0
    assert p[-1] == 0


def test_arithmetic_examples():
    one_plus_x = ExactPolynomial([1, 1])
    assert poly_arith(one_plus_x, one_plus_x, "mul") == ExactPolynomial([1, 2, 1])
    assert poly_arith(one_plus_x, ExactPolynomial([0, -1]), "add") == ExactPolynomial([1])
    assert poly_arith(one_plus_x, None, "scale", "1/2") == ExactPolynomial(["1/2", "1/2"])
    squared = one_plus_x ** 2
    assert poly_arith(squared, None, "substitute_scaled_arg", "1/2") == ExactPolynomial([1, 1, "1/4"])
    assert squared - squared == ExactPolynomial()
    assert ExactPolynomial([1, 1]) ** 0 == ExactPolynomial([1])
    with pytest.raises(InvalidParameter):
        poly_arith(one_plus_x, one_plus_x, "divide")


def test_derivative_and_evaluation():
    p = ExactPolynomial([1, 2, 3])
    assert poly_derivative(p, 1) == ExactPolynomial([2, 6])
    assert poly_derivative(p, 2) == ExactPolynomial([6])
    assert poly_derivative(p, 3).is_zero()
    assert poly_eval(ExactPolynomial([1, -2]), 2) == -3
    assert p(Fraction(1, 2)) == Fraction(11, 4)


def test_division():
    p = ExactPolynomial([-1, 0, 1])
    quotient, remainder = p.divmod(ExactPolynomial([1, 1]))
    assert quotient == ExactPolynomial([-1, 1])
    assert remainder.is_zero()
    quotient, remainder = ExactPolynomial([1, 0, 1]).divmod(ExactPolynomial([0, 2]))
    assert quotient == ExactPolynomial([0, "1/2"])
    assert remainder == ExactPolynomial([1])
    with pytest.raises(ZeroPolynomial):
        p.divmod(ExactPolynomial())


def test_from_roots_and_shift():
    p = ExactPolynomial.from_roots([-1, -2], lead=3)
    assert p == ExactPolynomial([6, 9, 3])
    assert ExactPolynomial([0, 0, 1]).shift(1) == ExactPolynomial([1, 2, 1])


def test_format():
    assert ExactPolynomial([1, 2, 1]).format() == "1 + 2x + x^2"
    assert ExactPolynomial([0, "1/2"]).format() == "(1/2)x"
    assert ExactPolynomial([-1, 0, -3]).format("z") == "-1 - 3z^2"
    assert ExactPolynomial().format() == "0"


def test_json_round_trip_keeps_exact_strings():
    p = ExactPolynomial(["1/3", 0, "-7/2"])
    assert p.to_dict() == {"coeffs": ["1/3", "0", "-7/2"]}
    assert ExactPolynomial.from_json(p.to_json()) == p
    with pytest.raises(InvalidParameter):
        ExactPolynomial.from_dict({"coefficients": [1]})
    with pytest.raises(InvalidParameter):
        ExactPolynomial.from_json("{not json")


def test_primitive_integer_form():
    assert primitive_integer_form(ExactPolynomial(["1/2", "3/4"])) == [2, 3]
    assert primitive_integer_form(ExactPolynomial([4, 6])) == [2, 3]
    assert primitive_integer_form(ExactPolynomial()) == []


def test_gcd_and_squarefree_part():
    a = ExactPolynomial.from_roots([1, 2, 2])
    b = ExactPolynomial.from_roots([2, 3])
    assert poly_gcd(a, b) == ExactPolynomial.from_roots([2])
    assert squarefree_part(a).monic() == ExactPolynomial.from_roots([1, 2])


def test_squarefree_decomposition_example():
    p = ExactPolynomial.from_roots([-1, -1, -1, -2, 3, 3], lead=5)
    decomposition = squarefree_decomposition(p)
    assert decomposition.lead == 5
    factors = {m: f for f, m in decomposition.factors}
    assert factors == {
        1: ExactPolynomial.from_roots([-2]),
        2: ExactPolynomial.from_roots([3]),
        3: ExactPolynomial.from_roots([-1]),
    }
    assert decomposition.expand() == p
    assert squarefree_decomposition(ExactPolynomial([7])).factors == []


def test_elementary_symmetric():
    assert elementary_symmetric([1, 2, 3], 2) == 11
    assert elementary_symmetric([1, 2, 3], 0) == 1
    assert elementary_symmetric([1, 2, 3], 4) == 0
    assert elementary_symmetric_all(["1/2", 2]) == [1, Fraction(5, 2), 1]


def test_taylor_data():
    gammas = TaylorData([1, 3, 6, 6])
    assert gammas.to_polynomial() == ExactPolynomial([1, 3, 3, 1])
    assert TaylorData.from_polynomial(ExactPolynomial([1, 1]) ** 3) == gammas
    assert TaylorData.exponential(4).gammas == (1, 1, 1, 1)
    assert TaylorData.reciprocal_pochhammer(2, 3).gammas == (1, Fraction(1, 2), Fraction(1, 6))
    assert TaylorData.from_dict(gammas.to_dict()) == gammas
    with pytest.raises(InvalidParameter):
        TaylorData.reciprocal_pochhammer(0, 3)


@settings(deadline=None, max_examples=60)
@given(small_coeffs, small_coeffs, rationals)
def test_ring_operations_agree_with_evaluation(a, b, x):
    p, q = ExactPolynomial(a), ExactPolynomial(b)
    assert (p * q)(x) == p(x) * q(x)
    assert (p + q)(x) == p(x) + q(x)
    assert p.substitute_scaled_arg(3)(x) == p(3 * x)


@settings(deadline=None, max_examples=40)
@given(small_coeffs, small_coeffs)
def test_squarefree_decomposition_matches_sympy(a, b):
    p = ExactPolynomial(a) * ExactPolynomial(b) ** 2
    decomposition = squarefree_decomposition(p)
    assert decomposition.expand() == p

    _, sympy_factors = to_sympy(p).sqf_list()
    expected = {}
    for factor, multiplicity in sympy_factors:
        coeffs = [str(c) for c in reversed(factor.monic().all_coeffs())]
        expected[multiplicity] = coeffs
    ours = {m: [format_rational(c) for c in f.coeffs] for f, m in decomposition.factors}
    assert ours == expected


def test_documented_examples():
    cube = ExactPolynomial([1, 1]) ** 3
    assert poly_derivative(cube, 1) == ExactPolynomial([3, 6, 3])
    assert poly_derivative(cube, 0) == cube
    assert poly_derivative(cube, 4).is_zero()
    assert poly_eval(cube, 1) == 8
    assert poly_eval(ExactPolynomial([1, 6, 2]), -1) == -3
    assert poly_arith(cube, ExactPolynomial(), "add") == cube
    assert [elementary_symmetric([1, 2, 3], k) for k in range(4)] == [1, 6, 11, 6]
    assert squarefree_decomposition(ExactPolynomial([1, 1])).factors == [(ExactPolynomial([1, 1]), 1)]


@settings(deadline=None, max_examples=40)
@given(st.lists(rationals, min_size=0, max_size=8))
def test_product_coefficients_are_elementary_symmetric(points):
    product = ExactPolynomial([1])
    for z in points:
        product = product * ExactPolynomial([1, z])
    for k in range(len(points) + 1):
        assert product[k] == elementary_symmetric(points, k)


def test_polynomial_json_accepts_only_canonical_rationals():
    assert ExactPolynomial.from_dict({"coeffs": [1, "-3/4", "0"]}) == ExactPolynomial([1, "-3/4"])
    assert ExactPolynomial.from_dict({"coeffs": ["2/4"]}) == ExactPolynomial(["1/2"])
    for bad in ("1.5", " 1", "+2", "1e3", "1/-2", "", "1/0"):
        with pytest.raises(InvalidParameter):
            ExactPolynomial.from_dict({"coeffs": [bad]})
    for bad in (1.5, True, None, [1]):
        with pytest.raises(InvalidParameter):
            ExactPolynomial.from_dict({"coeffs": [bad]})
    with pytest.raises(InvalidParameter):
        ExactPolynomial.from_dict({"coeffs": "1, 2"})
    with pytest.raises(InvalidParameter):
        TaylorData.from_dict({"gammas": ["0.5"]})
