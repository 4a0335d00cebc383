"""
Exact polynomial ring over arbitrary-precision rationals.

Polynomials are immutable coefficient tuples (a_0 first) of normalized
Fractions. Coefficient access is defined for every integer index and returns
zero outside the support, so operator formulas can index past both ends.
"""

from __future__ import annotations

import json
import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import sympy

from .errors import InvalidParameter, ZeroPolynomial

logger = logging.getLogger("lkp_stability")

RationalLike = Union[int, Fraction, str]

SYMBOL = sympy.Symbol("x")

RATIONAL_TEXT = re.compile(r"-?[0-9]+(/[0-9]+)?\Z")

# Factorials and binomials up to this argument are memoized
DEFAULT_FACTORIAL_CAP = 512
_factorial_cap = DEFAULT_FACTORIAL_CAP


def set_factorial_cap(cap: int) -> None:
    """Change the memoization cap for factorials and binomials"""
    global _factorial_cap
    if cap < 0:
        raise InvalidParameter(f"factorial cap must be nonnegative, got {cap}")
    _factorial_cap = cap
    _cached_factorial.cache_clear()
    _cached_binomial.cache_clear()
    logger.debug(f"Factorial memoization cap set to {cap}")


@lru_cache(maxsize=None)
def _cached_factorial(n: int) -> int:
    return math.factorial(n)


@lru_cache(maxsize=None)
def _cached_binomial(n: int, k: int) -> int:
    return math.comb(n, k)


def factorial(n: int) -> int:
    """n! in arbitrary precision"""
    if n < 0:
        raise InvalidParameter(f"factorial of negative integer {n}")
    if n <= _factorial_cap:
        return _cached_factorial(n)
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """C(n, k) for integers, zero when k is outside 0..n"""
    if k < 0 or n < 0 or k > n:
        return 0
    if n <= _factorial_cap:
        return _cached_binomial(n, k)
    return math.comb(n, k)


def to_rational(value: RationalLike) -> Fraction:
    """Convert an int, Fraction or "num/den" string into a normalized Fraction"""
    if isinstance(value, bool) or isinstance(value, float):
        raise InvalidParameter(f"refusing inexact value {value!r}; use an int, Fraction or string")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InvalidParameter(f"not a rational number: {value!r} ({str(e)})") from e


def parse_rational(value) -> Fraction:
    """Wire-format rational: a JSON integer or a canonical "num" or "num/den" string"""
    if isinstance(value, str) and not RATIONAL_TEXT.match(value):
        raise InvalidParameter(f"not a \"num\" or \"num/den\" string: {value!r}")
    if not isinstance(value, (int, str)):
        raise InvalidParameter(f"rational must be an integer or a string, got {value!r}")
    return to_rational(value)


def format_rational(value: Fraction) -> str:
    """Canonical "num" or "num/den" string"""
    return str(Fraction(value))


def rising_factorial(base: RationalLike, length: int) -> Fraction:
    """(base)_length = base (base + 1) ... (base + length - 1); (base)_0 = 1"""
    if length < 0:
        raise InvalidParameter(f"Pochhammer length must be nonnegative, got {length}")
    base = to_rational(base)
    value = Fraction(1)
    for i in range(length):
        value *= base + i
    return value


def generalized_binomial(top: RationalLike, k: int) -> Fraction:
    """C(top, k) for a rational top and integer k"""
    if k < 0:
        return Fraction(0)
    top = to_rational(top)
    value = Fraction(1)
    for i in range(k):
        value *= top - i
    return value / factorial(k)


@dataclass(frozen=True, init=False)
class ExactPolynomial:
    """Polynomial sum(coeffs[k] x^k) with trailing zeros stripped"""

    coeffs: Tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        values = [to_rational(c) for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, "coeffs", tuple(values))

    @classmethod
    def constant(cls, value: RationalLike) -> "ExactPolynomial":
        return cls([value])

    @classmethod
    def monomial(cls, value: RationalLike, power: int) -> "ExactPolynomial":
        if power < 0:
            raise InvalidParameter(f"monomial power must be nonnegative, got {power}")
        return cls([0] * power + [value])

    @classmethod
    def from_roots(cls, roots: Sequence[RationalLike], lead: RationalLike = 1) -> "ExactPolynomial":
        """lead * prod(x - r)"""
        result = cls.constant(lead)
        for r in roots:
            result = result * cls([-to_rational(r), 1])
        return result

    @property
    def degree(self) -> Optional[int]:
        """Degree, or None for the zero polynomial"""
        if not self.coeffs:
            return None
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __add__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        other = _as_polynomial(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return ExactPolynomial(self[k] + other[k] for k in range(size))

    __radd__ = __add__

    def __neg__(self) -> "ExactPolynomial":
        return ExactPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        return self + (-_as_polynomial(other))

    def __rsub__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        return _as_polynomial(other) - self

    def __mul__(self, other) -> "ExactPolynomial":
        if not isinstance(other, ExactPolynomial):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return ExactPolynomial()
        product = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                product[i + j] += a * b
        return ExactPolynomial(product)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "ExactPolynomial":
        if exponent < 0:
            raise InvalidParameter(f"negative polynomial power {exponent}")
        result = ExactPolynomial.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, c: RationalLike) -> "ExactPolynomial":
        """c * p(x)"""
        c = to_rational(c)
        return ExactPolynomial(c * a for a in self.coeffs)

    def substitute_scaled_arg(self, c: RationalLike) -> "ExactPolynomial":
        """p(c * x)"""
        c = to_rational(c)
        power = Fraction(1)
        values = []
        for a in self.coeffs:
            values.append(a * power)
            power *= c
        return ExactPolynomial(values)

    def shift(self, c: RationalLike) -> "ExactPolynomial":
        """Taylor shift p(x + c)"""
        c = to_rational(c)
        result = ExactPolynomial()
        linear = ExactPolynomial([c, 1])
        for a in reversed(self.coeffs):
            result = result * linear + ExactPolynomial.constant(a)
        return result

    def derivative(self, order: int = 1) -> "ExactPolynomial":
        if order < 0:
            raise InvalidParameter(f"derivative order must be nonnegative, got {order}")
        if order == 0:
            return self
        values = []
        for k in range(order, len(self.coeffs)):
            # falling factorial k (k-1) ... (k-order+1)
            values.append(self.coeffs[k] * (factorial(k) // factorial(k - order)))
        return ExactPolynomial(values)

    def evaluate(self, x: RationalLike) -> Fraction:
        """Horner evaluation"""
        x = to_rational(x)
        value = Fraction(0)
        for a in reversed(self.coeffs):
            value = value * x + a
        return value

    __call__ = evaluate

    def truncate(self, degree: int) -> "ExactPolynomial":
        """Drop every term of degree above the given one"""
        return ExactPolynomial(self.coeffs[: max(degree + 1, 0)])

    def monic(self) -> "ExactPolynomial":
        if self.is_zero():
            raise ZeroPolynomial("the zero polynomial has no monic form")
        return self.scale(1 / self.leading)

    def divmod(self, divisor: "ExactPolynomial") -> Tuple["ExactPolynomial", "ExactPolynomial"]:
        """Quotient and remainder over the rationals"""
        if divisor.is_zero():
            raise ZeroPolynomial("division by the zero polynomial")
        remainder = list(self.coeffs)
        dlen = len(divisor.coeffs)
        lead = divisor.leading
        quotient = [Fraction(0)] * max(len(remainder) - dlen + 1, 0)
        for shift in range(len(remainder) - dlen, -1, -1):
            coef = remainder[shift + dlen - 1] / lead
            quotient[shift] = coef
            if coef == 0:
                continue
            for i, b in enumerate(divisor.coeffs):
                remainder[shift + i] -= coef * b
        return ExactPolynomial(quotient), ExactPolynomial(remainder[: dlen - 1])

    def exact_div(self, divisor: "ExactPolynomial") -> "ExactPolynomial":
        quotient, remainder = self.divmod(divisor)
        if not remainder.is_zero():
            raise InvalidParameter(f"{divisor} does not divide {self}")
        return quotient

    def to_dict(self) -> dict:
        return {"coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_dict(cls, data: dict) -> "ExactPolynomial":
        if not isinstance(data, dict) or "coeffs" not in data:
            raise InvalidParameter(f"polynomial JSON must be an object with 'coeffs', got {data!r}")
        if not isinstance(data["coeffs"], list):
            raise InvalidParameter(f"coeffs must be a list, got {data['coeffs']!r}")
        return cls(parse_rational(c) for c in data["coeffs"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ExactPolynomial":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InvalidParameter(f"invalid polynomial JSON: {str(e)}") from e
        return cls.from_dict(data)

    def format(self, var: str = "x") -> str:
        """Human readable form such as 1 + 2x + x^2"""
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            magnitude = abs(c)
            if k == 0:
                body = format_rational(magnitude)
            else:
                power = var if k == 1 else f"{var}^{k}"
                if magnitude == 1:
                    body = power
                elif magnitude.denominator == 1:
                    body = f"{magnitude}{power}"
                else:
                    body = f"({magnitude}){power}"
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"- {body}" if c < 0 else f"+ {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"ExactPolynomial({[format_rational(c) for c in self.coeffs]})"


def _as_polynomial(value) -> ExactPolynomial:
    if isinstance(value, ExactPolynomial):
        return value
    return ExactPolynomial.constant(value)


def poly_arith(lhs: ExactPolynomial, rhs: Optional[ExactPolynomial], op: str,
               scalar: Optional[RationalLike] = None) -> ExactPolynomial:
    """Ring operations: add, mul, scale(c) and substitute_scaled_arg(c)"""
    if op == "add":
        return lhs + rhs
    if op == "mul":
        return lhs * rhs
    if op == "scale":
        return lhs.scale(scalar)
    if op == "substitute_scaled_arg":
        return lhs.substitute_scaled_arg(scalar)
    raise InvalidParameter(f"unknown polynomial operation '{op}'")


def poly_derivative(p: ExactPolynomial, order: int) -> ExactPolynomial:
    return p.derivative(order)


def poly_eval(p: ExactPolynomial, x: RationalLike) -> Fraction:
    return p.evaluate(x)


def primitive_integer_form(p: ExactPolynomial) -> List[int]:
    """Integer coefficients of a positive rational multiple of p with content 1"""
    if p.is_zero():
        return []
    lcm = 1
    for c in p.coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    values = [int(c * lcm) for c in p.coeffs]
    return _remove_content(values)


def _remove_content(values: List[int]) -> List[int]:
    content = 0
    for v in values:
        content = math.gcd(content, v)
    if content > 1:
        values = [v // content for v in values]
    return values


def to_sympy_poly(p: ExactPolynomial) -> sympy.Poly:
    """p as a sympy polynomial in x over QQ"""
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)] or [0],
                      SYMBOL, domain=sympy.QQ)


def from_sympy_poly(poly: sympy.Poly) -> ExactPolynomial:
    return ExactPolynomial(Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs()))


def poly_gcd(a: ExactPolynomial, b: ExactPolynomial) -> ExactPolynomial:
    """Monic greatest common divisor"""
    if a.is_zero() and b.is_zero():
        raise ZeroPolynomial("gcd of two zero polynomials")
    return from_sympy_poly(to_sympy_poly(a).gcd(to_sympy_poly(b))).monic()


def squarefree_part(p: ExactPolynomial) -> ExactPolynomial:
    """Monic product of the distinct irreducible factors of p"""
    if p.is_zero():
        raise ZeroPolynomial("square-free part of the zero polynomial")
    if p.is_constant():
        return p
    return from_sympy_poly(to_sympy_poly(p).sqf_part()).monic()


class SquarefreeDecomposition(NamedTuple):
    lead: Fraction
    factors: List[Tuple[ExactPolynomial, int]]

    def expand(self) -> ExactPolynomial:
        result = ExactPolynomial.constant(self.lead)
        for factor, multiplicity in self.factors:
            result = result * factor ** multiplicity
        return result


def squarefree_decomposition(p: ExactPolynomial) -> SquarefreeDecomposition:
    """p = lead * prod(factor_i ** m_i) with monic, coprime, square-free factors"""
    if p.is_zero():
        raise ZeroPolynomial("square-free decomposition of the zero polynomial")
    lead = p.leading
    if p.is_constant():
        return SquarefreeDecomposition(lead, [])
    _, sqf = to_sympy_poly(p.monic()).sqf_list()
    factors = [(from_sympy_poly(f).monic(), m) for f, m in sqf]
    return SquarefreeDecomposition(lead, sorted(factors, key=lambda item: item[1]))


def elementary_symmetric(points: Sequence[RationalLike], k: int) -> Fraction:
    """e_k(points); e_0 = 1 and zero for k outside 0..n"""
    n = len(points)
    if k < 0 or k > n:
        return Fraction(0)
    # e[j] holds e_j of the points seen so far
    e = [Fraction(1)] + [Fraction(0)] * k
    for z in points:
        z = to_rational(z)
        for j in range(k, 0, -1):
            e[j] += z * e[j - 1]
    return e[k]


def elementary_symmetric_all(points: Sequence[RationalLike]) -> List[Fraction]:
    """[e_0, ..., e_n] of the points"""
    n = len(points)
    e = [Fraction(1)] + [Fraction(0)] * n
    for z in points:
        z = to_rational(z)
        for j in range(n, 0, -1):
            e[j] += z * e[j - 1]
    return e


@dataclass(frozen=True, init=False)
class TaylorData:
    """Taylor presentation phi(x) = sum(gammas[k] / k! x^k)"""

    gammas: Tuple[Fraction, ...]

    def __init__(self, gammas: Iterable[RationalLike] = ()):
        object.__setattr__(self, "gammas", tuple(to_rational(g) for g in gammas))

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.gammas):
            return self.gammas[k]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self.gammas)

    def to_polynomial(self) -> ExactPolynomial:
        """a_k = gamma_k / k!"""
        return ExactPolynomial(g / factorial(k) for k, g in enumerate(self.gammas))

    @classmethod
    def from_polynomial(cls, p: ExactPolynomial) -> "TaylorData":
        """gamma_k = k! a_k"""
        return cls(a * factorial(k) for k, a in enumerate(p.coeffs))

    @classmethod
    def exponential(cls, length: int) -> "TaylorData":
        """Taylor data of e^x truncated to gamma_0 .. gamma_{length-1}"""
        return cls([1] * length)

    @classmethod
    def reciprocal_pochhammer(cls, base: RationalLike, length: int) -> "TaylorData":
        """gamma_k = 1 / (base)_k, the Taylor data of 0F1(; base; x)"""
        base = to_rational(base)
        if base <= 0:
            raise InvalidParameter(f"0F1 base must be positive, got {base}")
        return cls(1 / rising_factorial(base, k) for k in range(length))

    def to_dict(self) -> dict:
        return {"gammas": [format_rational(g) for g in self.gammas]}

    @classmethod
    def from_dict(cls, data: dict) -> "TaylorData":
        if not isinstance(data, dict) or "gammas" not in data:
            raise InvalidParameter(f"Taylor data JSON must be an object with 'gammas', got {data!r}")
        if not isinstance(data["gammas"], list):
            raise InvalidParameter(f"gammas must be a list, got {data['gammas']!r}")
        return cls(parse_rational(g) for g in data["gammas"])
