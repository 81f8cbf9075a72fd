"""Report objects returned by the report-style checks."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List


def to_jsonable(value: Any) -> Any:
    """Convert report payloads to JSON-ready values.

    Tuples become lists, Fractions become "p/q" strings and frozensets are
    sorted by their string form (callers that care about carrier order pass
    tuples instead).
    """
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return [to_jsonable(v) for v in sorted(value, key=str)]
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return value


def format_rational(value: Fraction) -> str:
    """Serialize a Fraction as "p/q", or "p" when it is an integer."""
    return str(value)


@dataclass
class CheckReport:
    """Violations of named conditions, each with its witnesses."""

    subject: str
    conditions: List[str]
    violations: Dict[str, List[Any]] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    def add(self, condition: str, witness: Any) -> None:
        self.violations.setdefault(condition, []).append(witness)

    def failed(self, condition: str) -> bool:
        return bool(self.violations.get(condition))

    def first(self, condition: str) -> Any:
        """Return the first witness recorded for a condition, if any."""
        witnesses = self.violations.get(condition) or [None]
        return witnesses[0]

    @property
    def passed(self) -> bool:
        return not any(self.violations.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "violations": {
                name: to_jsonable(self.violations.get(name, []))
                for name in self.conditions
            },
            **{key: to_jsonable(val) for key, val in self.details.items()},
        }
