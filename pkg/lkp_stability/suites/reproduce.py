"""
Reproduction of the worked examples: the two golden polynomials, the extended
Turan table for p = 0..4 and the L^p coefficient rows.
"""

import logging
from fractions import Fraction

from ..exactpoly import ExactPolynomial, TaylorData, factorial
from ..operators import apply_lkp, extended_turan_at_zero, laguerre_expression, lkp_coefficients
from ..report import VerificationReport, merge_reports
from ..rootcert import RootVerdict, certify_all_real_negative

logger = logging.getLogger("lkp_stability")

GOLDEN_LKP_OUTPUT = ExactPolynomial([3, 35, 105, 105, 35, 3])
GOLDEN_NOT_ALL_REAL = ExactPolynomial([12, 84, 36, 108])

# coefficients of gamma_p^2, gamma_{p-1} gamma_{p+1}, ..., gamma_0 gamma_{2p}
TURAN_TABLE = {
    0: [1],
    1: [1, -1],
    2: [3, -4, 1],
    3: [10, -15, 6, -1],
    4: [35, -56, 28, -8, 1],
}


def golden_lkp_example():
    """L^2((1+x)^5) and its degree-4 truncation"""
    report = VerificationReport("golden-lkp", {"p": 2, "input": "(1+x)^5"})
    output = apply_lkp(ExactPolynomial([1, 1]) ** 5, 2)
    if output != GOLDEN_LKP_OUTPUT:
        return report.fail({"stage": "coefficients", "output": output})
    full = certify_all_real_negative(output)
    truncated = certify_all_real_negative(output.truncate(4))
    report.details.update({"output": output, "certificate": full.to_dict(),
                           "truncated_certificate": truncated.to_dict()})
    if not full.all_real_negative:
        return report.fail({"stage": "certify", "certificate": full.to_dict()})
    if truncated.verdict != RootVerdict.NOT_ALL_REAL or truncated.nonreal_count != 2:
        return report.fail({"stage": "truncation", "certificate": truncated.to_dict()})
    return report


def golden_not_all_real_example():
    """12 + 84x + 36x^2 + 108x^3 has a pair of non-real zeros"""
    report = VerificationReport("golden-nonreal", {"input": GOLDEN_NOT_ALL_REAL})
    certificate = certify_all_real_negative(GOLDEN_NOT_ALL_REAL)
    report.details["certificate"] = certificate.to_dict()
    if certificate.verdict != RootVerdict.NOT_ALL_REAL or certificate.nonreal_count != 2:
        report.fail(certificate.to_dict())

    # what L^2 gives on the gammas of (1+x)^3, kept for reference only
    gammas = TaylorData.from_polynomial(ExactPolynomial([1, 1]) ** 3)
    computed = apply_lkp(ExactPolynomial(gammas.gammas), 2)
    report.details["computed_from_gammas"] = {
        "gammas": list(gammas.gammas),
        "output": computed,
        "certificate": certify_all_real_negative(computed).to_dict(),
    }
    return report


def _indicator(length, *indices):
    gammas = [Fraction(0)] * length
    for i in indices:
        gammas[i] += 1
    return TaylorData(gammas)


def turan_row_from_laguerre(p):
    """Row p of the table by polarizing ((2p)!/2) L_p(phi)(0) over indicator gammas"""
    length = 2 * p + 1
    if p == 0:
        return [laguerre_expression(_indicator(length, 0).to_polynomial(), 0)(0)]
    multiplier = Fraction(factorial(2 * p), 2)

    def value(*indices):
        phi = _indicator(length, *indices).to_polynomial()
        return multiplier * laguerre_expression(phi, p)(0)

    row = [value(p)]
    for j in range(1, p + 1):
        row.append(value(p - j, p + j) - value(p - j) - value(p + j))
    return row


def turan_row_from_gammas(p):
    """Row p of the table by polarizing the extended Turan expression"""
    length = 2 * p + 1
    if p == 0:
        return [Fraction(1)]

    def value(*indices):
        return extended_turan_at_zero(_indicator(length, *indices), 0, p)

    row = [value(p)]
    for j in range(1, p + 1):
        row.append(value(p - j, p + j) - value(p - j) - value(p + j))
    return row


def turan_table():
    report = VerificationReport("turan-table", {"p": list(TURAN_TABLE)})
    for p, expected in TURAN_TABLE.items():
        derived = turan_row_from_laguerre(p)
        polarized = turan_row_from_gammas(p)
        if derived != expected or polarized != expected:
            return report.fail({"p": p, "laguerre": derived, "gammas": polarized, "expected": expected})
    return report


def lkp_coefficient_table():
    report = VerificationReport("lkp-coefficients", {"p": [1, 2, 3, 4]})
    for p in range(1, 5):
        row = lkp_coefficients(p)
        if row != TURAN_TABLE[p]:
            return report.fail({"p": p, "row": row, "expected": TURAN_TABLE[p]})
    return report


def reproduce_all():
    reports = [golden_lkp_example(), golden_not_all_real_example(), turan_table(), lkp_coefficient_table()]
    merged = merge_reports("reproduce", reports)
    merged.details["checks"] = [r.to_dict() for r in reports]
    for r in reports:
        logger.info(f"reproduce {r.identity}: {'pass' if r.passed else 'FAIL'}")
    return merged
