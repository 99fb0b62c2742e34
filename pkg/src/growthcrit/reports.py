"""Result containers shared by the verifiers and criteria."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

VERDICTS = ("supported", "not-supported", "inconclusive", "not-applicable")


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return str(obj)
        return obj
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        return _jsonable(obj.item())
    if isinstance(obj, (str, int, bool)) or obj is None:
        return obj
    return str(obj)


@dataclass
class VerificationReport:
    """Outcome of an exhaustive check.  ``status`` is one of ``verified``,
    ``failed``, ``consistent`` (holds, but one side used lower bounds) or
    ``not-applicable``."""

    name: str
    status: str
    details: dict = field(default_factory=dict)
    table: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status in ("verified", "consistent")

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))


@dataclass
class CriterionReport:
    criterion: str
    verdict: str
    inputs: dict = field(default_factory=dict)
    sequence: list = field(default_factory=list)
    trend: dict = field(default_factory=dict)
    caveats: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"criterion: {self.criterion}", f"verdict:   {self.verdict}"]
        for k, v in self.inputs.items():
            lines.append(f"  {k}: {_jsonable(v)}")
        if self.sequence:
            cols = list(self.sequence[0].keys())
            lines.append("  " + "  ".join(cols))
            for row in self.sequence:
                lines.append("  " + "  ".join(_fmt(row.get(c)) for c in cols))
        if self.trend:
            lines.append("trend: " + ", ".join(f"{k}={_fmt(v)}" for k, v in self.trend.items()))
        for c in self.caveats:
            lines.append(f"caveat: {c}")
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, Fraction):
        return f"{float(v):.6g}"
    return str(v)
