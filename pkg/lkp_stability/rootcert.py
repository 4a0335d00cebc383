"""
Exact certification of real root location.

Sturm chains, root counts and root isolation run on sympy polynomials over QQ.
Chains are only ever built for square-free polynomials; multiplicities come
from the square-free decomposition.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import sympy

from .errors import InvalidParameter, ZeroPolynomial
from .exactpoly import (
    ExactPolynomial,
    RationalLike,
    format_rational,
    from_sympy_poly,
    to_rational,
    to_sympy_poly,
)

logger = logging.getLogger("lkp_stability")

Endpoint = Union[Fraction, float]
INF = math.inf

# Interval = (lo, hi, multiplicity)
Interval = Tuple[Fraction, Fraction, int]


class RootVerdict(str, Enum):
    ALL_REAL_NEGATIVE = "AllRealNegative"
    NOT_ALL_REAL = "NotAllReal"
    REAL_BUT_NOT_ALL_NEGATIVE = "RealButNotAllNegative"
    ZERO_ROOT = "ZeroRoot"
    VACUOUS_CONSTANT = "VacuousConstant"


class NonnegativityVerdict(str, Enum):
    NONNEGATIVE_EVERYWHERE = "NonnegativeEverywhere"
    ATTAINS_NEGATIVE = "AttainsNegative"


def _sign(value) -> int:
    return bool(value > 0) - bool(value < 0)


def _to_fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _sign_at(poly: sympy.Poly, x: Endpoint) -> int:
    """Sign of the polynomial at a rational point or at +-infinity"""
    if poly.is_zero:
        return 0
    if x == INF:
        return _sign(poly.LC())
    if x == -INF:
        return _sign(poly.LC()) * (-1 if poly.degree() % 2 else 1)
    return _sign(poly.eval(sympy.Rational(x.numerator, x.denominator)))


def _cauchy_bound(coeffs: Sequence) -> Fraction:
    """Every root r satisfies |r| < 1 + max |a_i / a_n|"""
    lead = abs(Fraction(coeffs[-1]))
    if len(coeffs) == 1:
        return Fraction(1)
    return 1 + max(abs(Fraction(c)) for c in coeffs[:-1]) / lead


@dataclass(frozen=True)
class SturmChain:
    """p, p', then the negated remainders"""

    chain: Tuple[ExactPolynomial, ...]
    _polys: Tuple[sympy.Poly, ...] = field(default=(), repr=False, compare=False)

    def sign_variations(self, x: Endpoint) -> int:
        """Number of sign changes of the chain at x, zeros skipped"""
        changes = 0
        previous = 0
        for poly in self._polys:
            s = _sign_at(poly, x)
            if s == 0:
                continue
            if previous and s != previous:
                changes += 1
            previous = s
        return changes

    @property
    def base(self) -> ExactPolynomial:
        return self.chain[0]

    def base_sign_at(self, x: Endpoint) -> int:
        return _sign_at(self._polys[0], x)

    def __len__(self) -> int:
        return len(self.chain)

    def to_dict(self) -> dict:
        return {"chain": [p.to_dict()["coeffs"] for p in self.chain]}


def sturm_chain(p: ExactPolynomial) -> SturmChain:
    """Canonical Sturm chain of the square-free part of p"""
    if p.is_zero():
        raise ZeroPolynomial("Sturm chain of the zero polynomial")
    if p.is_constant():
        return SturmChain((p,), (to_sympy_poly(p),))
    polys = tuple(to_sympy_poly(p).sturm())
    logger.debug(f"Sturm chain of length {len(polys)} for degree {p.degree} polynomial")
    return SturmChain(tuple(from_sympy_poly(q) for q in polys), polys)


def _separation_nudge(q: ExactPolynomial, root: Fraction) -> Fraction:
    """Half of a Cauchy lower bound on the distance from root to every other root of q"""
    deflated = q.shift(root).exact_div(ExactPolynomial([0, 1]))
    if deflated.is_constant():
        return Fraction(1)
    head = abs(deflated[0])
    rest = max(abs(c) for c in deflated.coeffs[1:])
    return head / (head + rest) / 2


def _nudge_endpoint(chain: SturmChain, x: Endpoint, direction: int) -> Endpoint:
    if x in (INF, -INF) or chain.base_sign_at(x) != 0:
        return x
    delta = _separation_nudge(chain.base, x)
    nudged = x + direction * delta
    logger.debug(f"Endpoint {x} is a root; nudged to {nudged}")
    return nudged


def _as_endpoint(x) -> Endpoint:
    if isinstance(x, float) and math.isinf(x):
        return x
    return to_rational(x)


def count_real_roots_in_chain(chain: SturmChain, lo: Endpoint, hi: Endpoint) -> int:
    """Distinct roots of the chain's base polynomial in the open interval (lo, hi)"""
    if not lo < hi:
        raise InvalidParameter(f"empty interval ({lo}, {hi})")
    if chain.base.is_constant():
        return 0
    lo = _nudge_endpoint(chain, lo, +1)
    hi = _nudge_endpoint(chain, hi, -1)
    if not lo < hi:
        return 0
    return chain.sign_variations(lo) - chain.sign_variations(hi)


def count_real_roots(p: ExactPolynomial, lo: Union[RationalLike, float] = -INF,
                     hi: Union[RationalLike, float] = INF) -> int:
    """Number of distinct real roots of p in (lo, hi); infinite endpoints allowed"""
    return count_real_roots_in_chain(sturm_chain(p), _as_endpoint(lo), _as_endpoint(hi))


class _Enclosures:
    """
    Open rational intervals around the distinct real roots of p.

    sympy isolates the roots; its intervals may be degenerate at exact
    rational roots or touch a neighbour's root. Both cases are widened or
    shrunk here so that every interval holds exactly one root strictly
    inside, no endpoint is a root and the intervals are pairwise disjoint.
    """

    def __init__(self, p: ExactPolynomial):
        self.poly = to_sympy_poly(p)
        self.base_poly = self.poly.sqf_part()
        self.base = from_sympy_poly(self.base_poly)

    def _is_root(self, x: Fraction) -> bool:
        return _sign_at(self.base_poly, x) == 0

    def _off_root(self, x: Fraction, direction: int) -> Fraction:
        if not self._is_root(x):
            return x
        return x + direction * _separation_nudge(self.base, x)

    def intervals(self, width: Optional[Fraction] = None) -> List[Interval]:
        isolated = []
        for (s, t), multiplicity in self.poly.intervals():
            isolated.append((_to_fraction(s), _to_fraction(t), multiplicity))

        proper = {}
        for i, (lo, hi, m) in enumerate(isolated):
            if lo != hi:
                proper[i] = (self._off_root(lo, +1), self._off_root(hi, -1), m)
        fixed_ends = [x for lo, hi, _ in proper.values() for x in (lo, hi)]

        results = []
        for i, (lo, hi, m) in enumerate(isolated):
            if i in proper:
                lo, hi, m = proper[i]
                if width is not None:
                    lo, hi = self._refine(lo, hi, width)
            else:
                lo, hi = self._around(lo, fixed_ends, width)
            results.append((lo, hi, m))
        return results

    def _around(self, root: Fraction, fixed_ends: List[Fraction],
                width: Optional[Fraction]) -> Tuple[Fraction, Fraction]:
        radius = _separation_nudge(self.base, root) / 2
        for x in fixed_ends:
            radius = min(radius, abs(x - root) / 2)
        if width is not None:
            radius = min(radius, width / 2)
        return root - radius, root + radius

    def _refine(self, lo: Fraction, hi: Fraction, width: Fraction) -> Tuple[Fraction, Fraction]:
        """Bisect an isolating interval of a simple root of the base down to the requested width"""
        lo_sign = _sign_at(self.base_poly, lo)
        while hi - lo > width:
            mid = (lo + hi) / 2
            mid_sign = _sign_at(self.base_poly, mid)
            if mid_sign == 0:
                # exact rational root: shrink symmetrically inside the current interval
                radius = min(width / 4, (mid - lo) / 2, (hi - mid) / 2)
                return mid - radius, mid + radius
            if mid_sign == lo_sign:
                lo = mid
            else:
                hi = mid
        return lo, hi


def approximate_real_roots(p: ExactPolynomial, width: RationalLike) -> List[Interval]:
    """Disjoint rational intervals of length <= width around each distinct real root, with multiplicity"""
    if p.is_zero():
        raise ZeroPolynomial("root approximation of the zero polynomial")
    width = to_rational(width)
    if width <= 0:
        raise InvalidParameter(f"interval width must be positive, got {width}")
    if p.is_constant():
        return []
    return _Enclosures(p).intervals(width)


@dataclass(frozen=True)
class RootCertificate:
    verdict: RootVerdict
    degree: int
    real_root_count: int
    nonreal_count: int
    isolating_intervals: Tuple[Interval, ...] = ()

    @property
    def all_real_negative(self) -> bool:
        return self.verdict == RootVerdict.ALL_REAL_NEGATIVE

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "degree": self.degree,
            "real_root_count": self.real_root_count,
            "nonreal_count": self.nonreal_count,
            "isolating_intervals": [
                [format_rational(lo), format_rational(hi), m] for lo, hi, m in self.isolating_intervals
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RootCertificate":
        return cls(
            verdict=RootVerdict(data["verdict"]),
            degree=data["degree"],
            real_root_count=data["real_root_count"],
            nonreal_count=data["nonreal_count"],
            isolating_intervals=tuple(
                (Fraction(lo), Fraction(hi), m) for lo, hi, m in data["isolating_intervals"]
            ),
        )


def certify_all_real_negative(p: ExactPolynomial, isolate: bool = True) -> RootCertificate:
    """
    Certify whether every zero of p is real and strictly negative.

    Distinct roots of each square-free factor are counted on (-inf, inf) and
    (-inf, 0] and weighted by the factor's multiplicity. With isolate=False
    the certificate carries no isolating intervals, which keeps high-degree
    certification to the counting step.
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot certify the zero polynomial")
    degree = p.degree
    if degree == 0:
        return RootCertificate(RootVerdict.VACUOUS_CONSTANT, 0, 0, 0)

    _, factors = to_sympy_poly(p).sqf_list()
    real_count = 0
    has_zero_root = False
    has_positive_root = False
    for factor, multiplicity in factors:
        real_distinct = int(factor.count_roots())
        # count_roots is inclusive at a finite endpoint
        at_zero = factor.eval(0) == 0
        nonpositive_distinct = int(factor.count_roots(None, 0))
        real_count += multiplicity * real_distinct
        has_zero_root = has_zero_root or at_zero
        if real_distinct > nonpositive_distinct:
            has_positive_root = True

    nonreal = degree - real_count
    if nonreal > 0:
        verdict = RootVerdict.NOT_ALL_REAL
    elif has_zero_root:
        verdict = RootVerdict.ZERO_ROOT
    elif has_positive_root:
        verdict = RootVerdict.REAL_BUT_NOT_ALL_NEGATIVE
    else:
        verdict = RootVerdict.ALL_REAL_NEGATIVE
    logger.debug(f"Certified degree {degree} polynomial: {verdict.value} "
                 f"(real {real_count}, non-real {nonreal})")
    intervals = tuple(_Enclosures(p).intervals()) if isolate and real_count else ()
    return RootCertificate(verdict, degree, real_count, nonreal, intervals)


@dataclass(frozen=True)
class NonnegativityCertificate:
    verdict: NonnegativityVerdict
    witness: Optional[Fraction] = None

    @property
    def nonnegative(self) -> bool:
        return self.verdict == NonnegativityVerdict.NONNEGATIVE_EVERYWHERE

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "witness": None if self.witness is None else format_rational(self.witness),
        }


def certify_nonnegative(p: ExactPolynomial) -> NonnegativityCertificate:
    """Certify p(x) >= 0 for every real x, or exhibit a point where p < 0"""
    if p.is_zero():
        raise ZeroPolynomial("cannot certify the zero polynomial")
    negative = NonnegativityVerdict.ATTAINS_NEGATIVE
    if p.degree == 0:
        if p[0] >= 0:
            return NonnegativityCertificate(NonnegativityVerdict.NONNEGATIVE_EVERYWHERE)
        return NonnegativityCertificate(negative, Fraction(0))

    # beyond the Cauchy bound p has the sign it has at infinity
    bound = _cauchy_bound(p.coeffs)
    for x in (bound, -bound):
        if p(x) < 0:
            return NonnegativityCertificate(negative, x)

    _, factors = to_sympy_poly(p).sqf_list()
    if any(m % 2 == 1 and f.count_roots() > 0 for f, m in factors):
        # p changes sign across every odd-multiplicity real root
        for lo, hi, m in _Enclosures(p).intervals():
            if m % 2 == 0:
                continue
            for x in (lo, hi):
                if p(x) < 0:
                    return NonnegativityCertificate(negative, x)
    return NonnegativityCertificate(NonnegativityVerdict.NONNEGATIVE_EVERYWHERE)
