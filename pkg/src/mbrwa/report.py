"""Machine-readable outcomes of symbolic and numeric checks."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .polyring import Poly


@dataclass
class VerificationReport:
    """Outcome of a single named check.

    ``status`` is "pass" iff every residual is the zero polynomial (symbolic
    checks) or within its stated tolerance (numeric checks).  Residuals are
    kept as canonical strings so a failure is diagnosable without re-running.
    """

    check: str
    status: str
    residuals: list[str] = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "status": self.status,
            "residuals": self.residuals,
            "witnesses": self.witnesses,
            "elapsed_ms": self.elapsed_ms,
        }


def report_from_residuals(
    check: str,
    residuals: Sequence[Poly],
    witnesses: Mapping | None = None,
    started: float | None = None,
) -> VerificationReport:
    """Build a report that passes iff every residual polynomial is zero.

    Only nonzero residuals are recorded, so a passing report has an empty
    residual list.
    """
    nonzero = [str(r) for r in residuals if not r.is_zero]
    elapsed = (time.perf_counter() - started) * 1e3 if started is not None else 0.0
    return VerificationReport(
        check=check,
        status="pass" if not nonzero else "fail",
        residuals=nonzero,
        witnesses=dict(witnesses or {}),
        elapsed_ms=elapsed,
    )
