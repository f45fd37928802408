"""Check outcomes and their JSON form."""
from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field

PROVEN = "PROVEN-IN-PAPER"
EMPIRICAL = "EMPIRICAL"


@dataclass
class Report:
    """Outcome of one certification check."""

    check: str
    params: dict
    status: str = "exact-pass"
    label: str = PROVEN
    witness: object = None
    details: dict = field(default_factory=dict)
    millis: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "exact-pass"

    def fail(self, witness):
        if self.status == "exact-pass":
            self.status = "fail"
            self.witness = witness
        return self

    def to_json(self) -> dict:
        out = {
            "check": self.check,
            "params": self.params,
            "status": self.status,
            "label": self.label,
            "witness": self.witness,
        }
        if self.details:
            out["details"] = self.details
        out["millis"] = round(self.millis, 3)
        return out


@contextmanager
def timed(report: Report):
    t0 = time.perf_counter()
    try:
        yield report
    finally:
        report.millis = (time.perf_counter() - t0) * 1000.0
