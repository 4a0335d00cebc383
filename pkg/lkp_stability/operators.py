"""
Non-linear coefficient operators and Laguerre/Turán expressions.

Every operator acts on the a_k presentation of a polynomial. Callers holding
Taylor data (gamma_k with a_k = gamma_k / k!) convert explicitly through
TaylorData.to_polynomial().
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from .errors import InvalidParameter, ZeroPolynomial
from .exactpoly import (
    ExactPolynomial,
    RationalLike,
    TaylorData,
    binomial,
    factorial,
    format_rational,
    to_rational,
)

logger = logging.getLogger("lkp_stability")


@dataclass(frozen=True, init=False)
class MuSequence:
    """Finitely supported weights mu_0, mu_1, ... of the T_mu transform"""

    mus: Tuple[Fraction, ...]

    def __init__(self, mus: Iterable[RationalLike] = ()):
        values = [to_rational(m) for m in mus]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, "mus", tuple(values))

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.mus):
            return self.mus[k]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self.mus)

    def is_zero(self) -> bool:
        return not self.mus

    @classmethod
    def of_lkp(cls, p: int) -> "MuSequence":
        """mu_0 = C(2p-1, p), mu_2j = (-1)^j C(2p, p-j), odd entries zero"""
        coefficients = lkp_coefficients(p)
        mus = [Fraction(0)] * (2 * p + 1)
        for j, c in enumerate(coefficients):
            mus[2 * j] = c
        return cls(mus)

    def to_list(self) -> List[str]:
        return [format_rational(m) for m in self.mus]


def _check_positive(p: int, name: str = "p") -> None:
    if not isinstance(p, int) or p < 1:
        raise InvalidParameter(f"{name} must be a positive integer, got {p!r}")


def _check_nonzero(psi: ExactPolynomial) -> None:
    if psi.is_zero():
        raise ZeroPolynomial("operators need a nonzero polynomial")


def lkp_coefficients(p: int) -> List[Fraction]:
    """(c_0, ..., c_p) with c_0 = C(2p-1, p) and c_j = (-1)^j C(2p, p-j)"""
    _check_positive(p)
    return [Fraction(binomial(2 * p - 1, p))] + [
        Fraction((-1) ** j * binomial(2 * p, p - j)) for j in range(1, p + 1)
    ]


def apply_lkp(psi: ExactPolynomial, p: int) -> ExactPolynomial:
    """sum_k (C(2p-1,p) a_k^2 + sum_j (-1)^j C(2p,p-j) a_{k-j} a_{k+j}) z^k for k = 0..deg psi"""
    _check_nonzero(psi)
    coefficients = lkp_coefficients(p)
    values = []
    for k in range(psi.degree + 1):
        value = coefficients[0] * psi[k] * psi[k]
        for j in range(1, p + 1):
            value += coefficients[j] * psi[k - j] * psi[k + j]
        values.append(value)
    return ExactPolynomial(values)


def apply_sr(psi: ExactPolynomial, r: int) -> ExactPolynomial:
    """sum_k (a_k^2 - a_{k-r} a_{k+r}) z^k for k = 0..deg psi"""
    _check_nonzero(psi)
    if not isinstance(r, int) or r < 0:
        raise InvalidParameter(f"r must be a nonnegative integer, got {r!r}")
    return ExactPolynomial(
        psi[k] * psi[k] - psi[k - r] * psi[k + r] for k in range(psi.degree + 1)
    )


def apply_tmu(psi: ExactPolynomial, mu: MuSequence) -> ExactPolynomial:
    """sum_{i <= j} mu_{j-i} a_i a_j z^{i+j}"""
    _check_nonzero(psi)
    n = psi.degree
    values = [Fraction(0)] * (2 * n + 1)
    for i in range(n + 1):
        a_i = psi[i]
        if a_i == 0:
            continue
        for j in range(i, min(n, i + len(mu) - 1) + 1):
            weight = mu[j - i]
            if weight:
                values[i + j] += weight * a_i * psi[j]
    return ExactPolynomial(values)


def gamma_transform(mu: MuSequence, k: int) -> Fraction:
    """gamma_k = sum_{j=0}^{floor(k/2)} C(k, j) mu_{k-2j}"""
    if k < 0:
        return Fraction(0)
    return sum((binomial(k, j) * mu[k - 2 * j] for j in range(k // 2 + 1)), Fraction(0))


def laguerre_expression(phi: ExactPolynomial, p: int) -> ExactPolynomial:
    """L_p(phi) = sum_{j=0}^{2p} ((-1)^{p+j} / (2p)!) C(2p, j) phi^(j) phi^(2p-j)"""
    _check_nonzero(phi)
    if not isinstance(p, int) or p < 0:
        raise InvalidParameter(f"p must be a nonnegative integer, got {p!r}")
    derivatives = [phi.derivative(j) for j in range(2 * p + 1)]
    scale = Fraction(1, factorial(2 * p))
    result = ExactPolynomial()
    for j in range(2 * p + 1):
        weight = scale * (-1) ** (p + j) * binomial(2 * p, j)
        result = result + (derivatives[j] * derivatives[2 * p - j]).scale(weight)
    return result


def extended_turan_at_zero(gammas: TaylorData, k: int, p: int) -> Fraction:
    """((2p)!/2) L_p(phi^(k)) at x = 0, as a quadratic form in the gamma sequence"""
    _check_positive(p)
    if not isinstance(k, int) or k < 0:
        raise InvalidParameter(f"k must be a nonnegative integer, got {k!r}")
    coefficients = lkp_coefficients(p)
    centre = k + p
    value = coefficients[0] * gammas[centre] * gammas[centre]
    for j in range(1, p + 1):
        value += coefficients[j] * gammas[centre - j] * gammas[centre + j]
    return value


@dataclass(frozen=True)
class OperatorSpec:
    """One of the operators L^p, S_r or T_mu with its parameter"""

    kind: str
    parameter: int = 0
    mu: Optional[MuSequence] = None

    KINDS = ("Lkp", "Sr", "Tmu")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise InvalidParameter(f"unknown operator kind '{self.kind}'")
        if self.kind == "Lkp":
            _check_positive(self.parameter)
        elif self.kind == "Sr" and (not isinstance(self.parameter, int) or self.parameter < 0):
            raise InvalidParameter(f"r must be a nonnegative integer, got {self.parameter!r}")
        elif self.kind == "Tmu" and self.mu is None:
            raise InvalidParameter("T_mu needs a mu sequence")

    @classmethod
    def lkp(cls, p: int) -> "OperatorSpec":
        return cls("Lkp", p)

    @classmethod
    def sr(cls, r: int) -> "OperatorSpec":
        return cls("Sr", r)

    @classmethod
    def tmu(cls, mu: Iterable[RationalLike]) -> "OperatorSpec":
        return cls("Tmu", 0, mu if isinstance(mu, MuSequence) else MuSequence(mu))

    def mu_sequence(self) -> MuSequence:
        """The T_mu weights that realize this operator up to z -> z^2"""
        if self.kind == "Lkp":
            return MuSequence.of_lkp(self.parameter)
        if self.kind == "Sr":
            mus = [Fraction(0)] * (2 * self.parameter + 1)
            mus[0] = Fraction(1)
            if self.parameter:
                mus[2 * self.parameter] = Fraction(-1)
            else:
                mus[0] = Fraction(0)
            return MuSequence(mus)
        return self.mu

    def apply(self, psi: ExactPolynomial) -> ExactPolynomial:
        if self.kind == "Lkp":
            return apply_lkp(psi, self.parameter)
        if self.kind == "Sr":
            return apply_sr(psi, self.parameter)
        return apply_tmu(psi, self.mu)

    def label(self) -> str:
        if self.kind == "Lkp":
            return f"L^{self.parameter}"
        if self.kind == "Sr":
            return f"S_{self.parameter}"
        return f"T_mu({', '.join(self.mu.to_list())})"

    def to_dict(self) -> dict:
        if self.kind == "Lkp":
            return {"kind": "Lkp", "p": self.parameter}
        if self.kind == "Sr":
            return {"kind": "Sr", "r": self.parameter}
        return {"kind": "Tmu", "mu": self.mu.to_list()}

    @classmethod
    def from_dict(cls, data: dict) -> "OperatorSpec":
        kind = data.get("kind")
        try:
            if kind == "Lkp":
                return cls.lkp(int(data["p"]))
            if kind == "Sr":
                return cls.sr(int(data["r"]))
            if kind == "Tmu":
                return cls.tmu(data["mu"])
        except KeyError as e:
            raise InvalidParameter(f"operator JSON for {kind} is missing {str(e)}") from e
        raise InvalidParameter(f"unknown operator kind {kind!r}")
