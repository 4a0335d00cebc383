"""
Pass/fail outcome of an identity check or property suite
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .exactpoly import ExactPolynomial, TaylorData, format_rational


def to_jsonable(value):
    """Convert library values into plain JSON types with rationals as strings"""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, int):
        return value
    if isinstance(value, (ExactPolynomial, TaylorData)):
        return value.to_dict()
    if hasattr(value, "to_dict"):
        return value.to_dict()
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


@dataclass
class VerificationReport:
    identity: str
    params: dict = field(default_factory=dict)
    passed: bool = True
    counterexample: object = None
    details: dict = field(default_factory=dict)

    def fail(self, counterexample):
        """Mark as failed, keeping the first counterexample seen"""
        if self.passed:
            self.passed = False
            self.counterexample = counterexample
        return self

    def to_dict(self):
        data = {
            "identity": self.identity,
            "params": to_jsonable(self.params),
            "pass": self.passed,
            "counterexample": to_jsonable(self.counterexample),
        }
        if self.details:
            data["details"] = to_jsonable(self.details)
        return data

    def to_json(self):
        return json.dumps(self.to_dict())

    def render_text(self):
        status = "PASS" if self.passed else "FAIL"
        params = ", ".join(f"{k}={v}" for k, v in to_jsonable(self.params).items())
        line = f"[{status}] {self.identity}"
        if params:
            line += f" ({params})"
        if not self.passed:
            line += f"\n  counterexample: {json.dumps(to_jsonable(self.counterexample))}"
        return line


def merge_reports(identity, reports, params=None):
    """Fold sub-reports into one; the first failing sub-report supplies the counterexample"""
    merged = VerificationReport(identity, params or {})
    merged.details["checks"] = len(reports)
    for report in reports:
        if not report.passed:
            merged.fail({"check": report.identity, "params": report.params,
                         "counterexample": report.counterexample})
            break
    return merged
