"""
Combinatorial and special-function identities behind the L^p stability result.

Covers super Catalan numbers, Szily's formula, the symmetric-function identity
for T_mu, the auxiliary polynomials Q_n^p with their terminating 2F1 and Jacobi
forms, the S_r decomposition of L^p and bounded-order Toeplitz minor scans.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import sympy

from .errors import (
    IntegralityViolation,
    InvalidParameter,
    NonTerminating,
    SampleAtPole,
    ZeroPoint,
)
from .exactpoly import (
    ExactPolynomial,
    RationalLike,
    binomial,
    elementary_symmetric_all,
    factorial,
    format_rational,
    generalized_binomial,
    rising_factorial,
    to_rational,
)
from .operators import MuSequence, gamma_transform
from .report import VerificationReport
from .rootcert import approximate_real_roots, count_real_roots

logger = logging.getLogger("lkp_stability")

JACOBI_POLE = Fraction(1, 4)

# Deterministic sample points for the Jacobi relation; none equals the pole 1/4
BASE_JACOBI_SAMPLES = [
    Fraction(-1), Fraction(-1, 2), Fraction(1, 3), Fraction(2), Fraction(5),
    Fraction(-7), Fraction(1, 5), Fraction(-3), Fraction(3, 7), Fraction(-2, 9),
    Fraction(7), Fraction(-11, 3),
]


@dataclass(frozen=True)
class Pochhammer:
    """Ascending factorial (base)_length"""

    base: Fraction
    length: int

    def __post_init__(self):
        object.__setattr__(self, "base", to_rational(self.base))
        if self.length < 0:
            raise InvalidParameter(f"Pochhammer length must be nonnegative, got {self.length}")

    @property
    def value(self) -> Fraction:
        return rising_factorial(self.base, self.length)

    def vanishes(self) -> bool:
        """True when some factor base + i is zero"""
        return self.base.denominator == 1 and -self.length < self.base <= 0


def super_catalan(p: int, k: int) -> Fraction:
    """S(p, k) = C(2p, p) C(2k, k) / C(p + k, p)"""
    if p < 0 or k < 0:
        raise InvalidParameter(f"super Catalan indices must be nonnegative, got ({p}, {k})")
    value = Fraction(binomial(2 * p, p) * binomial(2 * k, k), binomial(p + k, p))
    if value.denominator != 1:
        raise IntegralityViolation(f"S({p}, {k}) = {value} is not an integer")
    return value


def szily_check(a: int, b: int) -> VerificationReport:
    """Compare the alternating binomial sum against the closed form C(2a,a)C(2b,b)/C(a+b,a)"""
    if b < 0 or a < b:
        raise InvalidParameter(f"Szily's formula needs a >= b >= 0, got a={a}, b={b}")
    lhs = sum(
        (-1) ** (r % 2) * binomial(2 * a, a - r) * binomial(2 * b, b - r)
        for r in range(-b, b + 1)
    )
    rhs = super_catalan(a, b)
    report = VerificationReport("szily", {"a": a, "b": b},
                                details={"lhs": Fraction(lhs), "rhs": rhs})
    if lhs != rhs:
        report.fail({"lhs": Fraction(lhs), "rhs": rhs})
    return report


def verify_symmetric_identity(mu: MuSequence, points: Sequence[RationalLike]) -> VerificationReport:
    """
    Check sum_{i<=j} mu_{j-i} e_i(z) e_j(z) = e_n(z) sum_k gamma_k e_{n-k}(z_i + 1/z_i)
    at the given points, gamma_k being the gamma transform of mu
    """
    zs = [to_rational(z) for z in points]
    if any(z == 0 for z in zs):
        raise ZeroPoint("symmetric identity needs nonzero points")
    n = len(zs)
    e = elementary_symmetric_all(zs)
    lhs = Fraction(0)
    for i in range(n + 1):
        for j in range(i, n + 1):
            weight = mu[j - i]
            if weight:
                lhs += weight * e[i] * e[j]
    w = elementary_symmetric_all([z + 1 / z for z in zs])
    rhs = e[n] * sum((gamma_transform(mu, k) * w[n - k] for k in range(n + 1)), Fraction(0))
    report = VerificationReport("symfun", {"mu": mu.to_list(), "points": zs},
                                details={"lhs": lhs, "rhs": rhs})
    if lhs != rhs:
        report.fail({"points": zs, "lhs": lhs, "rhs": rhs})
    return report


def q_polynomial(n: int, p: int) -> ExactPolynomial:
    """Q_n^p(z) = sum_k (S(p, k) / 2) C(n, 2k) z^k"""
    if n < 1 or p < 1:
        raise InvalidParameter(f"Q_n^p needs n, p >= 1, got n={n}, p={p}")
    return ExactPolynomial(super_catalan(p, k) / 2 * binomial(n, 2 * k) for k in range(n // 2 + 1))


def _termination_index(value: Fraction) -> Optional[int]:
    if value.denominator == 1 and value <= 0:
        return int(-value)
    return None


def gauss_2f1_truncated(a: RationalLike, b: RationalLike, c: RationalLike,
                        scale: RationalLike, n_cap: int) -> ExactPolynomial:
    """Terminating 2F1(a, b; c; scale z) as a polynomial in z"""
    a, b, c, scale = (to_rational(v) for v in (a, b, c, scale))
    if c.denominator == 1 and c <= 0:
        raise InvalidParameter(f"2F1 lower parameter must not be a nonpositive integer, got {c}")
    stops = [t for t in (_termination_index(a), _termination_index(b)) if t is not None]
    if not stops:
        raise NonTerminating(f"2F1({a}, {b}; {c}) has no nonpositive integer upper parameter")
    degree = min(stops)
    if degree > n_cap:
        raise NonTerminating(f"2F1({a}, {b}; {c}) terminates at degree {degree} > cap {n_cap}")
    coeffs = []
    term = Fraction(1)
    for k in range(degree + 1):
        coeffs.append(term)
        term = term * (a + k) * (b + k) / ((k + 1) * (c + k)) * scale
    return ExactPolynomial(coeffs)


def _jacobi_explicit(m: int, alpha: Fraction, beta: Fraction) -> ExactPolynomial:
    """sum_s C(m+alpha, m-s) C(m+beta, s) ((x-1)/2)^s ((x+1)/2)^(m-s)"""
    minus = ExactPolynomial([Fraction(-1, 2), Fraction(1, 2)])
    plus = ExactPolynomial([Fraction(1, 2), Fraction(1, 2)])
    result = ExactPolynomial()
    for s in range(m + 1):
        weight = generalized_binomial(m + alpha, m - s) * generalized_binomial(m + beta, s)
        if weight:
            result = result + (minus ** s * plus ** (m - s)).scale(weight)
    return result


def jacobi_polynomial(m: int, alpha: RationalLike, beta: RationalLike) -> ExactPolynomial:
    """P_m^(alpha, beta)(x) by the three-term recurrence, exact over the rationals"""
    if m < 0:
        raise InvalidParameter(f"Jacobi degree must be nonnegative, got {m}")
    a, b = to_rational(alpha), to_rational(beta)
    if m == 0:
        return ExactPolynomial.constant(1)
    apb = a + b
    x = ExactPolynomial.monomial(1, 1)
    previous = ExactPolynomial.constant(1)
    current = ExactPolynomial([(a - b) / 2, (apb + 2) / 2])
    for k in range(2, m + 1):
        a1 = 2 * k * (k + apb) * (2 * k + apb - 2)
        if a1 == 0:
            # recurrence degenerates for these parameters
            return _jacobi_explicit(m, a, b)
        a2 = (2 * k + apb - 1) * (a * a - b * b) / a1
        a3 = (2 * k + apb - 2) * (2 * k + apb - 1) * (2 * k + apb) / a1
        a4 = 2 * (k + a - 1) * (k + b - 1) * (2 * k + apb) / a1
        previous, current = current, (x.scale(a3) + ExactPolynomial.constant(a2)) * current - previous.scale(a4)
    return current


def jacobi_parameters(n: int, p: int) -> Tuple[int, Fraction, Fraction]:
    """(m, alpha, beta) of the Jacobi polynomial tied to Q_n^p; beta is -1/2 for even n and 1/2 for odd n"""
    beta = Fraction(-1, 2) if n % 2 == 0 else Fraction(1, 2)
    return n // 2, Fraction(p), beta


def default_jacobi_samples(n: int) -> List[Fraction]:
    """floor(n/2) + 3 deterministic sample points"""
    count = n // 2 + 3
    samples = list(BASE_JACOBI_SAMPLES[:count])
    extra = 1
    while len(samples) < count:
        samples.append(Fraction(-(10 + extra), extra + 1))
        extra += 1
    return samples


def jacobi_side(n: int, p: int, z: Fraction) -> Fraction:
    """C(2p-1,p) m!/(1+p)_m (1-4z)^m P_m^(p, beta)((1+4z)/(1-4z)) at z"""
    m, alpha, beta = jacobi_parameters(n, p)
    if z == JACOBI_POLE:
        raise SampleAtPole(f"z = {z} is the pole of the Jacobi argument map")
    x = (1 + 4 * z) / (1 - 4 * z)
    jac = jacobi_polynomial(m, alpha, beta)
    return binomial(2 * p - 1, p) * factorial(m) / rising_factorial(1 + alpha, m) * (1 - 4 * z) ** m * jac(x)


def _jacobi_to_z(gamma: Fraction) -> Fraction:
    return (gamma - 1) / (4 * (gamma + 1))


def _derivative_bound(q: ExactPolynomial, radius: Fraction) -> Fraction:
    """Upper bound of |q'| on [-radius, radius]"""
    return sum((k * abs(c) * radius ** (k - 1) for k, c in enumerate(q.coeffs) if k), Fraction(0))


def verify_jacobi_relation(n: int, p: int, samples: Optional[Sequence[RationalLike]] = None,
                           width: RationalLike = Fraction(1, 10 ** 6)) -> VerificationReport:
    """
    Check Q_n^p against its Jacobi form at sample points, then map every
    Jacobi root enclosure through z = (g - 1) / (4 (g + 1)) and confirm it
    lands on a negative root of Q_n^p
    """
    if n < 1 or p < 1:
        raise InvalidParameter(f"Jacobi relation needs n, p >= 1, got n={n}, p={p}")
    m, alpha, beta = jacobi_parameters(n, p)
    points = default_jacobi_samples(n) if samples is None else [to_rational(z) for z in samples]
    if len(points) <= m:
        raise InvalidParameter(f"need more than {m} sample points, got {len(points)}")
    if JACOBI_POLE in points:
        raise SampleAtPole("samples must exclude z = 1/4")

    q = q_polynomial(n, p)
    report = VerificationReport("jacobi", {"n": n, "p": p, "m": m, "beta": beta},
                                details={"samples": points})
    for z in points:
        lhs, rhs = q(z), jacobi_side(n, p, z)
        if lhs != rhs:
            return report.fail({"stage": "identity", "z": z, "q": lhs, "jacobi": rhs})
    if m == 0:
        report.details["mapped_roots"] = []
        return report

    jac = jacobi_polynomial(m, alpha, beta)
    width = to_rational(width)
    intervals = approximate_real_roots(jac, width)
    # enclosures must sit strictly inside (-1, 1) before mapping
    for _ in range(64):
        if all(-1 < lo and hi < 1 for lo, hi, _ in intervals):
            break
        width /= 16
        intervals = approximate_real_roots(jac, width)
    else:
        return report.fail({"stage": "enclosure", "intervals": [[lo, hi] for lo, hi, _ in intervals]})
    if sum(mult for _, _, mult in intervals) != m:
        return report.fail({"stage": "root-count", "real_roots": len(intervals), "degree": m})

    mapped = []
    for lo, hi, _ in intervals:
        z_lo, z_hi = _jacobi_to_z(lo), _jacobi_to_z(hi)
        mid = (z_lo + z_hi) / 2
        bound = (z_hi - z_lo) * _derivative_bound(q, max(abs(z_lo), abs(z_hi)))
        residual = abs(q(mid))
        if z_hi >= 0:
            return report.fail({"stage": "sign", "interval": [z_lo, z_hi]})
        if count_real_roots(q, z_lo, z_hi) != 1 or residual > bound:
            return report.fail({"stage": "residual", "interval": [z_lo, z_hi],
                                "residual": residual, "bound": bound})
        mapped.append([z_lo, z_hi])
    report.details["mapped_roots"] = mapped
    logger.debug(f"Jacobi relation n={n} p={p}: {len(mapped)} roots mapped into (-inf, 0)")
    return report


def lkp_sr_decomposition(p: int) -> List[Tuple[int, Fraction]]:
    """Weights w_j = (-1)^(j+1) C(2p, p-j) with L^p = sum_j w_j S_j"""
    if not isinstance(p, int) or p < 1:
        raise InvalidParameter(f"p must be a positive integer, got {p!r}")
    return [(j, Fraction((-1) ** (j + 1) * binomial(2 * p, p - j))) for j in range(1, p + 1)]


@dataclass(frozen=True)
class ToeplitzWindow:
    """Square section of the Toeplitz matrix (seq[center + i - j])"""

    seq: Tuple[Fraction, ...]
    center: int
    order: int

    def __post_init__(self):
        object.__setattr__(self, "seq", tuple(to_rational(s) for s in self.seq))
        if self.order < 1:
            raise InvalidParameter(f"Toeplitz window order must be positive, got {self.order}")

    def entry(self, i: int, j: int) -> Fraction:
        k = self.center + i - j
        if 0 <= k < len(self.seq):
            return self.seq[k]
        return Fraction(0)

    def rows(self) -> List[List[Fraction]]:
        return [[self.entry(i, j) for j in range(self.order)] for i in range(self.order)]

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
        return _determinant(tuple(tuple(self.entry(i, j) for j in cols) for i in rows))


@lru_cache(maxsize=65536)
def _determinant(matrix: Tuple[Tuple[Fraction, ...], ...]) -> Fraction:
    """Exact determinant through sympy's fraction-free Bareiss elimination"""
    m = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in matrix])
    det = sympy.Rational(m.det(method="bareiss"))
    return Fraction(int(det.p), int(det.q))


def toeplitz_minor_scan(seq: Sequence[RationalLike], max_order: int, window: int,
                        mode: str = "contiguous") -> VerificationReport:
    """
    Evaluate the square minors of order <= max_order of the window x window
    Toeplitz section T[i][j] = seq[i - j] and report the minimum and the first
    negative minor
    """
    if max_order < 1 or window < 1 or max_order > window:
        raise InvalidParameter(f"need 1 <= max_order <= window, got max_order={max_order}, window={window}")
    if mode not in ("contiguous", "all"):
        raise InvalidParameter(f"unknown Toeplitz scan mode '{mode}'")
    section = ToeplitzWindow(tuple(seq), 0, window)
    report = VerificationReport("toeplitz", {"max_order": max_order, "window": window, "mode": mode})
    minimum: Optional[Fraction] = None
    checked = 0
    for order in range(1, max_order + 1):
        if mode == "contiguous":
            # contiguous minors of a Toeplitz matrix depend only on the offset i - j
            span = window - order
            candidates = (
                (tuple(range(max(d, 0), max(d, 0) + order)), tuple(range(max(-d, 0), max(-d, 0) + order)))
                for d in range(-span, span + 1)
            )
        else:
            candidates = (
                (rows, cols)
                for rows in combinations(range(window), order)
                for cols in combinations(range(window), order)
            )
        for rows, cols in candidates:
            value = section.minor(rows, cols)
            checked += 1
            if minimum is None or value < minimum:
                minimum = value
            if value < 0 and report.passed:
                report.fail({"order": order, "rows": list(rows), "cols": list(cols), "value": value})
    report.details.update({"minimum": minimum, "minors_checked": checked})
    logger.debug(f"Toeplitz scan checked {checked} minors, minimum {format_rational(minimum)}")
    return report
