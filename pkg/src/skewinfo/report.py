"""Property-suite outcome records and their JSON serialization."""

import json
from dataclasses import dataclass, field

__all__ = ["PropertyReport", "ReportBuilder"]


@dataclass
class PropertyReport:
    """Outcome of running one property over many trials.

    ``max_violation`` is the largest error measure seen over all trials,
    whether or not any trial failed.
    """

    suite: str
    trials: int
    failures: int
    max_violation: float
    seed: int
    cases: list = field(default_factory=list)

    def __post_init__(self):
        if self.failures > self.trials:
            raise ValueError("failures cannot exceed trials")

    @property
    def passed(self):
        return self.failures == 0

    def to_dict(self):
        return {
            "suite": self.suite,
            "trials": self.trials,
            "failures": self.failures,
            "max_violation": self.max_violation,
            "seed": self.seed,
            "passed": self.passed,
            "cases": self.cases,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    @classmethod
    def from_dict(cls, data):
        return cls(
            suite=data["suite"],
            trials=int(data["trials"]),
            failures=int(data["failures"]),
            max_violation=float(data["max_violation"]),
            seed=int(data["seed"]),
            cases=list(data.get("cases", [])),
        )


class ReportBuilder:
    """Accumulates trial outcomes in order; never raises on failure."""

    # keep reports small; the failure count is always exact
    max_cases = 20

    def __init__(self, suite, seed):
        self.suite = suite
        self.seed = seed
        self.trials = 0
        self.failures = 0
        self.max_violation = 0.0
        self.cases = []

    def record(self, violation, tol, **payload):
        """Record one trial; it fails when ``violation > tol`` or is NaN."""
        violation = float(violation)
        self.trials += 1
        if violation != violation:
            violation = float("inf")
        self.max_violation = max(self.max_violation, violation)
        if violation > tol:
            self.failures += 1
            if len(self.cases) < self.max_cases:
                case = {"trial": self.trials - 1, "violation": violation, "tol": tol}
                case.update({k: _plain(v) for k, v in payload.items()})
                self.cases.append(case)
            return False
        return True

    def absorb(self, report, **payload):
        """Fold a finished report into this one, keeping its failing cases."""
        self.trials += report.trials
        self.failures += report.failures
        self.max_violation = max(self.max_violation, report.max_violation)
        for case in report.cases:
            if len(self.cases) >= self.max_cases:
                break
            merged = dict(case)
            merged.update({k: _plain(v) for k, v in payload.items()})
            self.cases.append(merged)

    def build(self):
        return PropertyReport(
            suite=self.suite,
            trials=self.trials,
            failures=self.failures,
            max_violation=self.max_violation,
            seed=self.seed,
            cases=self.cases,
        )


def _plain(value):
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, complex):
        return [value.real, value.imag]
    try:
        return float(value)
    except (TypeError, ValueError):
        return repr(value)
