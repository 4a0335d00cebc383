"""
LP+ data: rooted products, Jensen polynomials and the Jensen approximation experiment
"""

import hashlib
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .errors import InvalidParameter, NegativeGamma
from .exactpoly import (
    ExactPolynomial,
    RationalLike,
    TaylorData,
    binomial,
    factorial,
    format_rational,
    to_rational,
)
from .operators import apply_lkp, lkp_coefficients
from .report import VerificationReport
from .rootcert import RootVerdict, certify_all_real_negative

logger = logging.getLogger("lkp_stability")

MAX_SEED = 2 ** 64


@dataclass(frozen=True, init=False)
class RootedProduct:
    """lead * prod(1 + rho_k z) with every rho_k > 0"""

    rhos: Tuple[Fraction, ...]
    lead: Fraction

    def __init__(self, rhos: Iterable[RationalLike] = (), lead: RationalLike = 1):
        rhos = tuple(to_rational(r) for r in rhos)
        lead = to_rational(lead)
        if any(r <= 0 for r in rhos):
            raise InvalidParameter(f"rooted product needs positive rhos, got {[str(r) for r in rhos]}")
        if lead <= 0:
            raise InvalidParameter(f"rooted product needs a positive lead, got {lead}")
        object.__setattr__(self, "rhos", rhos)
        object.__setattr__(self, "lead", lead)

    @property
    def degree(self) -> int:
        return len(self.rhos)

    def roots(self) -> List[Fraction]:
        return sorted(-1 / r for r in self.rhos)

    def expand(self) -> ExactPolynomial:
        result = ExactPolynomial.constant(self.lead)
        for r in self.rhos:
            result = result * ExactPolynomial([1, r])
        return result

    def to_dict(self) -> dict:
        return {
            "rhos": [format_rational(r) for r in self.rhos],
            "lead": format_rational(self.lead),
            "coeffs": self.expand().to_dict()["coeffs"],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RootedProduct":
        return cls(data.get("rhos", []), data.get("lead", "1"))


def rooted_product(rhos: Sequence[RationalLike], lead: RationalLike = 1) -> ExactPolynomial:
    """Expanded lead * prod(1 + rho_k z)"""
    return RootedProduct(rhos, lead).expand()


def _check_gammas(gammas: TaylorData) -> None:
    negative = [k for k, g in enumerate(gammas.gammas) if g < 0]
    if negative:
        raise NegativeGamma(f"LP+ Taylor data must be nonnegative, gamma_{negative[0]} = {gammas[negative[0]]}")


@dataclass(frozen=True)
class JensenFamily:
    """g_n(z) = sum_{k<=n} C(n, k) gamma_k z^k"""

    gammas: TaylorData
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidParameter(f"Jensen index must be a positive integer, got {self.n!r}")

    def polynomial(self, scaled: bool = False) -> ExactPolynomial:
        g = ExactPolynomial(binomial(self.n, k) * self.gammas[k] for k in range(self.n + 1))
        if scaled:
            return g.substitute_scaled_arg(Fraction(1, self.n))
        return g


def jensen_polynomial(gammas: TaylorData, n: int, scaled: bool = False) -> ExactPolynomial:
    """g_n(z), or g_n(z/n) when scaled"""
    return JensenFamily(gammas, n).polynomial(scaled)


def limit_coefficients(gammas: TaylorData, p: int, count: int) -> List[Fraction]:
    """L_k^p of a_k = gamma_k / k! for k < count"""
    coefficients = lkp_coefficients(p)

    def a(k: int) -> Fraction:
        if k < 0:
            return Fraction(0)
        return gammas[k] / factorial(k)

    limits = []
    for k in range(count):
        value = coefficients[0] * a(k) * a(k)
        for j in range(1, p + 1):
            value += coefficients[j] * a(k - j) * a(k + j)
        limits.append(value)
    return limits


def jensen_convergence_report(gammas: TaylorData, p: int, n_values: Sequence[int],
                              coeff_window: int, tolerance: RationalLike = 0) -> VerificationReport:
    """
    Apply L^p to the scaled Jensen polynomials g_n(z/n) and track how far their
    leading coefficients are from the limit L^p applied to gamma_k / k!.

    Distances per coefficient must not grow from one n to the next by more
    than the tolerance, limit coefficients must be nonnegative, and every
    output must have only real negative zeros.
    """
    _check_gammas(gammas)
    if not gammas.gammas or all(g == 0 for g in gammas.gammas):
        raise InvalidParameter("Jensen experiment needs a nonzero gamma sequence")
    if coeff_window < 1:
        raise InvalidParameter(f"coefficient window must be positive, got {coeff_window}")
    n_values = list(n_values)
    if not n_values or n_values[0] < 1 or any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise InvalidParameter(f"n values must be positive and strictly increasing, got {n_values}")
    tolerance = to_rational(tolerance)

    limits = limit_coefficients(gammas, p, coeff_window)
    report = VerificationReport(
        "jensen",
        {"p": p, "n_values": n_values, "coeff_window": coeff_window, "tolerance": tolerance},
        details={"limit": limits, "steps": []},
    )
    if any(b < 0 for b in limits):
        report.fail({"stage": "limit", "limit": limits})

    previous: Optional[List[Fraction]] = None
    for n in n_values:
        family = JensenFamily(gammas, n)
        output = apply_lkp(family.polynomial(scaled=True), p)
        distances = [abs(output[k] - limits[k]) for k in range(coeff_window)]
        # L^p[g_n(z/n)](z) = L^p[g_n](z/n^2), so the unscaled output has the same verdict
        certificate = certify_all_real_negative(apply_lkp(family.polynomial(), p), isolate=False)
        certified = certificate.verdict.value
        if certificate.verdict not in (RootVerdict.ALL_REAL_NEGATIVE, RootVerdict.VACUOUS_CONSTANT):
            report.fail({"stage": "certify", "n": n, "certificate": certificate.to_dict()})
        if previous is not None:
            grown = [k for k in range(coeff_window) if distances[k] > previous[k] + tolerance]
            if grown:
                report.fail({"stage": "monotone", "n": n, "coefficient": grown[0],
                             "distance": distances[grown[0]], "previous": previous[grown[0]]})
        report.details["steps"].append({"n": n, "degree": output.degree,
                                        "distances": distances, "certified": certified})
        previous = distances
        logger.debug(f"Jensen n={n}: max distance {float(max(distances)):.3e}, certified {certified}")
    return report


def member_seed(seed: int, index: Union[int, str]) -> int:
    """Per-member seed: 64-bit blake2b digest of (master seed, index)"""
    digest = hashlib.blake2b(f"{seed}:{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def _check_corpus_args(seed: int, degree_range: Tuple[int, int], rho_bound: int) -> None:
    if not 0 <= seed < MAX_SEED:
        raise InvalidParameter(f"seed must be an unsigned 64-bit integer, got {seed}")
    lo, hi = degree_range
    if lo < 0 or hi < lo:
        raise InvalidParameter(f"invalid degree range {lo}:{hi}")
    if rho_bound < 1:
        raise InvalidParameter(f"rho bound must be positive, got {rho_bound}")


def corpus_member(seed: int, index: int, degree_range: Tuple[int, int], rho_bound: int) -> RootedProduct:
    """Member `index` of the corpus; independent of every other member"""
    _check_corpus_args(seed, degree_range, rho_bound)
    rng = random.Random(member_seed(seed, index))
    degree = rng.randint(degree_range[0], degree_range[1])
    rhos = [Fraction(rng.randint(1, rho_bound), rng.randint(1, rho_bound)) for _ in range(degree)]
    return RootedProduct(rhos, 1)


def random_corpus(seed: int, count: int, degree_range: Tuple[int, int],
                  rho_bound: int) -> List[RootedProduct]:
    """Deterministic seeded corpus of rooted products with lead 1"""
    if count < 1:
        raise InvalidParameter(f"corpus size must be positive, got {count}")
    _check_corpus_args(seed, degree_range, rho_bound)
    return [corpus_member(seed, i, degree_range, rho_bound) for i in range(count)]
