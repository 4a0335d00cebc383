"""
Verification suites for the operators and identities.

Every suite returns one VerificationReport. Suites that draw random inputs
take an explicit seed and derive their generator from it, so a failing run
can be replayed exactly.
"""

import asyncio
import logging
import random
from fractions import Fraction

from ..errors import InvalidParameter
from ..exactpoly import ExactPolynomial, TaylorData, binomial, factorial, to_rational
from ..identities import (
    gauss_2f1_truncated,
    lkp_sr_decomposition,
    q_polynomial,
    super_catalan,
    szily_check,
    toeplitz_minor_scan,
    verify_jacobi_relation,
    verify_symmetric_identity,
)
from ..lpclass import jensen_convergence_report, member_seed, random_corpus
from ..operators import (
    MuSequence,
    OperatorSpec,
    apply_lkp,
    apply_sr,
    apply_tmu,
    extended_turan_at_zero,
    gamma_transform,
    laguerre_expression,
)
from ..report import VerificationReport, merge_reports
from ..rootcert import certify_all_real_negative, certify_nonnegative
from ..search import CounterexampleSearch

logger = logging.getLogger("lkp_stability")


def _rng(seed, suite):
    return random.Random(member_seed(seed, suite))


def random_polynomial(rng, max_degree, bound=9):
    """Integer coefficients in [-bound, bound] with a nonzero leading term"""
    degree = rng.randint(0, max_degree)
    coeffs = [rng.randint(-bound, bound) for _ in range(degree)]
    coeffs.append(rng.choice([c for c in range(-bound, bound + 1) if c]))
    return ExactPolynomial(coeffs)


def random_nonzero_rational(rng, bound=9):
    return Fraction(rng.choice([c for c in range(-bound, bound + 1) if c]), rng.randint(1, bound))


def suite_szily(max_value, seed, config):
    """Szily's formula for every 0 <= b <= a <= max"""
    top = 10 if max_value is None else max_value
    reports = [szily_check(a, b) for a in range(top + 1) for b in range(a + 1)]
    return merge_reports("szily", reports, {"max": top})


def suite_symfun(max_value, seed, config):
    """Symmetric-function identity for mu(L^p) and the gamma transform against super Catalan numbers"""
    rng = _rng(seed, "symfun")
    max_n = 6 if max_value is None else max_value
    reports = []
    for p in range(1, 5):
        mu = MuSequence.of_lkp(p)
        for n in range(1, max_n + 1):
            for _ in range(20):
                points = [random_nonzero_rational(rng) for _ in range(n)]
                reports.append(verify_symmetric_identity(mu, points))
        catalan = VerificationReport("gamma-transform", {"p": p})
        for k in range(9):
            even, odd = gamma_transform(mu, 2 * k), gamma_transform(mu, 2 * k + 1)
            if even != super_catalan(p, k) / 2 or odd != 0:
                catalan.fail({"k": k, "gamma_2k": even, "gamma_2k+1": odd})
                break
        reports.append(catalan)
    return merge_reports("symfun", reports, {"max_n": max_n, "seed": seed})


def suite_hyper(max_value, seed, config):
    """C(2p-1,p) 2F1(-n/2, (1-n)/2; p+1; 4z) = Q_n^p"""
    max_n = 12 if max_value is None else max_value
    reports = []
    for n in range(1, max_n + 1):
        for p in range(1, 6):
            report = VerificationReport("hyper", {"n": n, "p": p})
            series = gauss_2f1_truncated(Fraction(-n, 2), Fraction(1 - n, 2), p + 1, 4, n)
            scaled = series.scale(binomial(2 * p - 1, p))
            expected = q_polynomial(n, p)
            if scaled != expected:
                report.fail({"2f1": scaled, "q": expected})
            reports.append(report)
    return merge_reports("hyper", reports, {"max_n": max_n})


def suite_jacobi(max_value, seed, config):
    """Q_n^p is negative-rooted and matches its Jacobi form with roots mapped into (-inf, 0)"""
    max_n = 12 if max_value is None else max_value
    width = to_rational(config.get("root_width", "1/1000000"))
    reports = []
    for n in range(1, max_n + 1):
        for p in range(1, 6):
            certificate = certify_all_real_negative(q_polynomial(n, p))
            if certificate.degree and not certificate.all_real_negative:
                reports.append(VerificationReport("q-roots", {"n": n, "p": p}).fail(certificate.to_dict()))
                continue
            reports.append(verify_jacobi_relation(n, p, width=width))
    return merge_reports("jacobi", reports, {"max_n": max_n})


def _sr_combination(psi, p):
    """sum_j w_j S_j(psi) with the weights of the L^p decomposition"""
    combination = ExactPolynomial()
    for r, w in lkp_sr_decomposition(p):
        combination = combination + apply_sr(psi, r).scale(w)
    return combination


def suite_prop51(max_value, seed, config):
    """L^p = sum_j w_j S_j on random polynomials, and sum_j w_j = C(2p-1, p)"""
    rng = _rng(seed, "prop51")
    count = 200 if max_value is None else max_value
    reports = []
    weights = VerificationReport("prop51-weights", {"max_p": 12})
    for p in range(1, 13):
        total = sum(w for _, w in lkp_sr_decomposition(p))
        if total != binomial(2 * p - 1, p):
            weights.fail({"p": p, "sum": total})
            break
    reports.append(weights)
    identity = VerificationReport("prop51-identity", {"count": count})
    for i in range(count):
        psi = random_polynomial(rng, 10)
        mismatch = next((p for p in range(1, 6) if _sr_combination(psi, p) != apply_lkp(psi, p)), None)
        if mismatch is not None:
            identity.fail({"index": i, "p": mismatch, "psi": psi})
            break
    reports.append(identity)
    return merge_reports("prop51", reports, {"count": count, "seed": seed})


def _corpus(seed, count, suite, config):
    settings = config.get("search", {})
    degree_range = tuple(settings.get("degree_range", (1, 12)))
    return random_corpus(member_seed(seed, suite), count, degree_range, int(settings.get("rho_bound", 20)))


def suite_prop52(max_value, seed, config):
    """sum_j w_j S_j(psi) is negative-rooted for negative-rooted psi"""
    count = 50 if max_value is None else max_value
    report = VerificationReport("prop52", {"count": count, "seed": seed})
    for i, member in enumerate(_corpus(seed, count, "prop52", config)):
        psi = member.expand()
        for p in range(1, 6):
            certificate = certify_all_real_negative(_sr_combination(psi, p))
            if not certificate.all_real_negative:
                return report.fail({"index": i, "p": p, "input": psi, "certificate": certificate.to_dict()})
    return report


def suite_turan(max_value, seed, config):
    """((2p)!/2) L_p(phi^(k)) at 0 equals the extended Turan expression in the gammas"""
    rng = _rng(seed, "turan")
    count = 100 if max_value is None else max_value
    report = VerificationReport("turan", {"count": count, "seed": seed})
    for i in range(count):
        phi = random_polynomial(rng, 8)
        gammas = TaylorData.from_polynomial(phi)
        for p in range(1, 5):
            multiplier = Fraction(factorial(2 * p), 2)
            for k in range(7):
                derived = phi.derivative(k)
                via_laguerre = Fraction(0) if derived.is_zero() else multiplier * laguerre_expression(derived, p)(0)
                via_gammas = extended_turan_at_zero(gammas, k, p)
                if via_laguerre != via_gammas:
                    return report.fail({"index": i, "phi": phi, "k": k, "p": p,
                                        "laguerre": via_laguerre, "turan": via_gammas})
    return report


def suite_toeplitz(max_value, seed, config):
    """No negative minor of bounded order in the Toeplitz section of L^p outputs"""
    count = 50 if max_value is None else max_value
    settings = config.get("toeplitz", {})
    window = int(settings.get("window", 12))
    max_window = int(settings.get("max_window", 32))
    if window > max_window:
        raise InvalidParameter(f"Toeplitz window {window} exceeds the configured maximum {max_window}")
    order = min(3, int(settings.get("max_order", 4)), window)
    mode = settings.get("mode", "contiguous")
    report = VerificationReport("toeplitz", {"count": count, "order": order, "window": window,
                                             "mode": mode, "seed": seed})
    for i, member in enumerate(_corpus(seed, count, "toeplitz", config)):
        for p in range(1, 4):
            output = apply_lkp(member.expand(), p)
            scan = toeplitz_minor_scan(output.coeffs, order, window, mode)
            if not scan.passed:
                return report.fail({"index": i, "p": p, "output": output, "minor": scan.counterexample})
    return report


def suite_stability(max_value, seed, config):
    """L^p maps negative-rooted products to negative-rooted polynomials, p <= 5"""
    count = 500 if max_value is None else max_value
    report = VerificationReport("stability", {"count": count, "seed": seed})
    for i, member in enumerate(_corpus(seed, count, "stability", config)):
        psi = member.expand()
        for p in range(1, 6):
            certificate = certify_all_real_negative(apply_lkp(psi, p))
            if certificate.degree and not certificate.all_real_negative:
                return report.fail({"index": i, "p": p, "input": psi, "certificate": certificate.to_dict()})
        if (i + 1) % 100 == 0:
            logger.info(f"stability: {i + 1}/{count} products certified")
    return report


def suite_jensen(max_value, seed, config):
    """L^1 of scaled Jensen polynomials of e^z converges to 1/(k!^2 (k+1))"""
    settings = config.get("jensen", {})
    n_values = [int(n) for n in settings.get("n_values", [8, 16, 32, 64, 128, 256])]
    if max_value is not None:
        n_values = [n for n in n_values if n <= max_value]
    window = int(settings.get("coeff_window", 5))
    report = jensen_convergence_report(
        TaylorData.exponential(max(n_values) + 1), 1, n_values, window,
        tolerance=settings.get("tolerance", "0"),
    )
    expected = [Fraction(1, factorial(k) ** 2 * (k + 1)) for k in range(window)]
    if report.details["limit"] != expected:
        report.fail({"stage": "closed-form", "limit": report.details["limit"], "expected": expected})
    steps = report.details["steps"]
    if len(steps) > 1:
        first, last = steps[0]["distances"], steps[-1]["distances"]
        # coefficient 0 is exact for every n
        stalled = [k for k in range(window) if first[k] and not last[k] < first[k]]
        if stalled:
            report.fail({"stage": "convergence", "coefficient": stalled[0],
                         "first": first[stalled[0]], "last": last[stalled[0]]})
    return report


def suite_laguerre(max_value, seed, config):
    """L_p(phi) >= 0 everywhere for real-rooted phi, p <= 3"""
    rng = _rng(seed, "laguerre")
    count = 30 if max_value is None else max_value
    report = VerificationReport("laguerre", {"count": count, "seed": seed})
    for i in range(count):
        roots = [random_nonzero_rational(rng) for _ in range(rng.randint(1, 6))]
        phi = ExactPolynomial.from_roots(roots, random_nonzero_rational(rng))
        for p in range(1, 4):
            expression = laguerre_expression(phi, p)
            if expression.is_zero():
                continue
            certificate = certify_nonnegative(expression)
            if not certificate.nonnegative:
                return report.fail({"index": i, "phi": phi, "p": p, "witness": certificate.witness})
    return report


def suite_tmu(max_value, seed, config):
    """T_mu with the weights of L^p and S_r is the operator composed with z -> z^2"""
    count = 50 if max_value is None else max_value
    report = VerificationReport("tmu", {"count": count, "seed": seed})
    z_squared = ExactPolynomial.monomial(1, 2)
    for i, member in enumerate(_corpus(seed, count, "tmu", config)):
        psi = member.expand()
        specs = [OperatorSpec.lkp(p) for p in range(1, 6)] + [OperatorSpec.sr(r) for r in range(1, 7)]
        for spec in specs:
            direct = spec.apply(psi)
            composed = ExactPolynomial()
            for k, c in enumerate(direct.coeffs):
                composed = composed + (z_squared ** k).scale(c)
            transformed = apply_tmu(psi, spec.mu_sequence())
            if transformed != composed:
                return report.fail({"index": i, "operator": spec.to_dict(), "input": psi})
            if spec.kind == "Lkp" and not certify_all_real_negative(direct).all_real_negative:
                return report.fail({"index": i, "operator": spec.to_dict(), "stage": "certify"})
    return report


def suite_fisk(max_value, seed, config):
    """S_r for r <= 4 produces no counterexample on the seeded corpus"""
    budget = 500 if max_value is None else max_value
    reports = []
    for r in range(1, 5):
        search = CounterexampleSearch(OperatorSpec.sr(r), seed, budget, "count", "random", config)
        found = asyncio.run(search.run())
        report = VerificationReport("fisk", {"r": r, "budget": budget})
        if found:
            report.fail(found[0].to_dict())
        reports.append(report)
    return merge_reports("fisk", reports, {"budget": budget, "seed": seed})


# name -> (function, needs a seed)
SUITES = {
    "szily": (suite_szily, False),
    "symfun": (suite_symfun, True),
    "hyper": (suite_hyper, False),
    "jacobi": (suite_jacobi, False),
    "prop51": (suite_prop51, True),
    "prop52": (suite_prop52, True),
    "turan": (suite_turan, True),
    "toeplitz": (suite_toeplitz, True),
    "stability": (suite_stability, True),
    "jensen": (suite_jensen, False),
    "laguerre": (suite_laguerre, True),
    "tmu": (suite_tmu, True),
    "fisk": (suite_fisk, True),
}


def run_suite(name, max_value=None, seed=None, config=None):
    """Run one suite by name, or every suite for 'all'"""
    config = config or {}
    if name == "all":
        if seed is None:
            raise InvalidParameter("suite 'all' includes randomized suites and needs --seed")
        reports = [run_suite(suite, max_value, seed, config) for suite in SUITES]
        return merge_reports("all", reports, {"seed": seed})
    if name not in SUITES:
        raise InvalidParameter(f"unknown suite '{name}'")
    function, needs_seed = SUITES[name]
    if needs_seed and seed is None:
        raise InvalidParameter(f"suite '{name}' draws random inputs and needs --seed")
    logger.info(f"Running suite {name}")
    report = function(max_value, seed, config)
    logger.info(f"Suite {name}: {'pass' if report.passed else 'FAIL'}")
    return report
