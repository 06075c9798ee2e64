"""Structured record of a checked inequality ``lhs <= rhs``."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

PASS, FAIL, UNMET = "pass", "fail", "hypothesis_unmet"


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else repr(v)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if hasattr(value, "as_dict"):
        return _jsonable(value.as_dict())
    return value


@dataclass
class Report:
    """One checked claim.

    The claim holds when ``margin = rhs - lhs >= -tolerance`` (or ``> 0`` when
    ``strict``).  A report may bundle sub-checks; it passes only if all of them
    pass.  ``status`` is ``hypothesis_unmet`` when the claim's preconditions do
    not hold for the given parameters; such reports are neither passes nor
    failures.
    """

    claim: str
    params: dict = field(default_factory=dict)
    lhs: float = float("nan")
    rhs: float = float("nan")
    tolerance: float = 0.0
    strict: bool = False
    details: dict = field(default_factory=dict)
    checks: list["Report"] = field(default_factory=list)
    unmet: str | None = None

    @property
    def margin(self) -> float:
        return float(self.rhs - self.lhs)

    @property
    def own_pass(self) -> bool:
        if math.isnan(self.lhs) or math.isnan(self.rhs):
            return True
        return self.margin > 0 if self.strict else self.margin >= -self.tolerance

    @property
    def status(self) -> str:
        if self.unmet is not None:
            return UNMET
        if not self.own_pass or any(c.status == FAIL for c in self.checks):
            return FAIL
        return PASS

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def min_margin(self) -> float:
        margins = [self.margin] + [c.min_margin() for c in self.checks]
        margins = [m for m in margins if not math.isnan(m)]
        return min(margins) if margins else float("nan")

    def as_dict(self) -> dict:
        return _jsonable({
            "claim": self.claim, "status": self.status, "params": self.params,
            "lhs": self.lhs, "rhs": self.rhs, "margin": self.margin,
            "tolerance": self.tolerance, "strict": self.strict, "unmet": self.unmet,
            "details": self.details, "checks": [c.as_dict() for c in self.checks],
        })

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, **kw)

    def csv_row(self) -> list:
        p = self.params
        return [self.claim, p.get("body", ""), p.get("d", ""), p.get("t", ""), p.get("n", ""),
                p.get("seed", ""), repr(float(self.lhs)), repr(float(self.rhs)),
                repr(self.margin), repr(float(self.tolerance)), self.status]

    CSV_HEADER = ["claim", "body", "d", "t", "n", "seed", "lhs", "rhs", "margin",
                  "tolerance", "status"]

    def line(self) -> str:
        return (f"{self.claim:<14} {self.status:<17} lhs={self.lhs:.6g} rhs={self.rhs:.6g} "
                f"margin={self.margin:.3g}")


def bundle(claim: str, checks: list[Report], params: dict | None = None, **details) -> Report:
    """A report whose verdict is the conjunction of ``checks``."""
    unmet = None
    if checks and all(c.status == UNMET for c in checks):
        unmet = "; ".join(sorted({c.unmet for c in checks if c.unmet}))
    return Report(claim, params or {}, details=details, checks=checks, unmet=unmet)
