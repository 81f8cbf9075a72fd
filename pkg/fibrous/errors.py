"""Error types shared by every fibrous module.

Two families exist. ``ViolationError`` means a mathematical check came out
false (CLI exit 1); ``InputError`` means the input itself is malformed or out
of domain (CLI exit 2).
"""

from typing import Any, Dict, Optional


class FibrousError(Exception):
    """Base class for all library errors."""

    exit_code = 2

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.message = message
        self.witness = witness

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, Any]:
        """Return the error object emitted by the CLI."""
        payload: Dict[str, Any] = {"code": self.code, "message": self.message}
        if self.witness is not None:
            payload["witness"] = self.witness
        return payload


class ViolationError(FibrousError):
    """Raised when a structure fails one of its defining conditions."""

    exit_code = 1


class InputError(FibrousError):
    """Raised when input cannot be interpreted."""

    exit_code = 2


# Magmas and tables


class UnitLawViolation(ViolationError):
    """The distinguished element is not a unit for the given element."""

    def __init__(self, element: str, detail: str = ""):
        message = f"unit law fails at element {element!r}"
        if detail:
            message += f": {detail}"
        super().__init__(message, witness=element)
        self.element = element


class NotClosed(ViolationError):
    """An operation table entry lies outside the element set."""

    def __init__(self, entry: Any):
        super().__init__(f"operation table is not closed: {entry!r}", witness=entry)
        self.entry = entry


class InvalidStructure(ViolationError):
    """A group, monoid, pseudometric or table fails its axioms."""


# Fibrous preorders


class MalformedPartialMap(InputError):
    """The domain of the partial map differs from the relation."""


class UnknownElement(InputError):
    """A label does not belong to the carrier or the magma."""

    def __init__(self, label: Any, where: str = "carrier"):
        super().__init__(f"unknown {where} element {label!r}", witness=label)
        self.label = label


class AxiomsFailed(ViolationError):
    """A structure was required to satisfy C1-C3 but does not."""


class MagmaMismatch(InputError):
    """Two structures were expected to share an indexing magma."""


# Topologies and preorders


class NotAPreorder(ViolationError):
    """A relation is not reflexive and transitive."""


class InvalidTopology(ViolationError):
    """A family of subsets is not a topology."""


class InconsistentTopology(ViolationError):
    """A stored topology disagrees with the one its data determines."""


# Representations


class NoWitnessK(ViolationError):
    """No index realizes a required neighbourhood inclusion."""


class ValidationFailed(ViolationError):
    """A representation failed its own validation."""


# Constructors


class CapTooSmall(ViolationError):
    """A capped magma cannot hold the index a construction needs."""

    def __init__(self, n: str, x: str, y: str, needed: int, cap: int):
        super().__init__(
            f"cap {cap} too small at (n={n}, x={x}, y={y}); "
            f"minimal sufficient cap is {needed}",
            witness=[n, x, y, needed],
        )
        self.needed = needed
        self.cap = cap


class ConditionFailed(ViolationError):
    """A numbered condition of a construction does not hold."""

    def __init__(self, condition: str, witness: Any, detail: str = ""):
        message = f"condition ({condition}) fails"
        if detail:
            message += f": {detail}"
        super().__init__(message, witness=witness)
        self.condition = condition


class LaxAxiomFailed(ConditionFailed):
    """A lax-left-associative Mal'tsev axiom does not hold."""


class LinkingFailed(ConditionFailed):
    """The linking-map inequality does not hold."""


class DeltaAxiomFailed(ConditionFailed):
    """A generalized distance violates zero diagonal or triangle law."""


class SubadditivityFailed(ConditionFailed):
    """A size function is not subadditive or does not vanish at zero."""


class FamilyConditionFailed(ConditionFailed):
    """An S_n family violates one of its three conditions."""


# Modules and worked examples


class MissingTopology(InputError):
    """A check that needs a topology was called without one."""


class OutOfDomain(InputError):
    """An argument lies outside the operation's domain."""


class NotEndomorphism(ViolationError):
    """A map was required to be a monoid endomorphism but is not."""


class BoundExceeded(ViolationError):
    """A bounded search ended without a conclusive answer."""


# Instance files


class ParseError(InputError):
    """The input is not valid JSON."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(message, witness={"line": line, "column": column})
        self.line = line
        self.column = column


class SchemaError(InputError):
    """The input JSON does not match the instance schema."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(message, witness={"path": path} if path else None)
        self.path = path
