"""Verification reports shared by every checking module."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

PASS = "PASS"
FAIL = "FAIL"
ADVISORY = "ADVISORY"
UNSUPPORTED = "UNSUPPORTED"
STATUSES = (PASS, FAIL, ADVISORY, UNSUPPORTED)


@dataclass
class VerificationReport:
    check_id: str
    spins: tuple | None = None
    k_or_ell: Fraction | None = None
    mode: str = "exact"
    samples: list[Fraction] = field(default_factory=list)
    status: str = PASS
    details: dict[str, Any] = field(default_factory=dict)
    wall_time_ms: int = 0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def fail(self, witness: Any, **more) -> "VerificationReport":
        """Mark as failed; a witness is mandatory."""
        if witness is None:
            raise ValueError("a failing report needs a witness")
        self.status = FAIL
        self.details["witness"] = witness
        self.details.update(more)
        return self

    def to_dict(self) -> dict[str, Any]:
        return {
            "check_id": self.check_id,
            "spins": None if self.spins is None else [str(s) for s in self.spins],
            "k_or_ell": None if self.k_or_ell is None else str(self.k_or_ell),
            "mode": self.mode,
            "samples": [str(s) for s in self.samples],
            "status": self.status,
            "details": _plain(self.details),
            "wall_time_ms": self.wall_time_ms,
        }


def _plain(x):
    """Recursively convert a payload into JSON-friendly values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


@contextmanager
def timed(report: VerificationReport):
    start = time.perf_counter()
    try:
        yield report
    finally:
        report.wall_time_ms = int(round((time.perf_counter() - start) * 1000))


def matrix_witness(name: str, m) -> dict[str, Any] | None:
    """First nonzero entry of a matrix that should vanish, or None."""
    hit = m.first_nonzero()
    if hit is None:
        return None
    i, j, value = hit
    return {"quantity": name, "entry": [i, j], "value": str(value)}
