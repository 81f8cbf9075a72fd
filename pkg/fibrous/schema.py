"""Instance-file schemas.

Every instance file is a single JSON object whose ``kind`` selects the model.
Rationals are written as "p/q" strings (or plain integers). Each model's
``build()`` returns the library object it describes.
"""

import json
from fractions import Fraction
from typing import Annotated, Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PlainValidator, TypeAdapter, ValidationError, model_validator

from .constructors import (
    FiniteGroupData,
    LaxMaltsevData,
    RationalPseudometric,
    ValueOrder,
    cyclic_group,
    from_group_subset,
    maltsev_from_delta,
)
from .core import FibrousPreorder
from .errors import ParseError, SchemaError
from .magma import (
    UnitaryMagma,
    capped_nat_add,
    capped_nat_mult,
    chain_magma,
    endomap_magma,
    make_table_magma,
)
from .module_theory import FiniteMonoidData, ModuleData, SnFamily
from .representations import EtaGammaRep, NeighborhoodMap, TernaryRep
from .topology import Carrier, FiniteTopology, Preorder
from .worked_examples import IntervalSet, RationalInterval


def parse_rational(value: Any) -> Fraction:
    """Read "p/q", "p" or an integer as an exact Fraction."""
    if isinstance(value, bool):
        raise ValueError("expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise ValueError(f"expected a rational string, got {value!r}")
    numerator, _, denominator = value.strip().partition("/")
    try:
        p = int(numerator)
        q = int(denominator) if denominator else 1
    except ValueError:
        raise ValueError(f"malformed rational {value!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {value!r}")
    return Fraction(p, q)


Rational = Annotated[Fraction, PlainValidator(parse_rational)]
Label = str


class InstanceModel(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True, frozen=True)


def _unique(labels: Sequence[str], path: str) -> None:
    seen = set()
    for pos, label in enumerate(labels):
        if label in seen:
            raise SchemaError(f"duplicate label {label!r}", f"{path}[{pos}]")
        seen.add(label)


def _known(label: str, allowed: Sequence[str], path: str) -> None:
    if label not in allowed:
        raise SchemaError(f"unknown label {label!r}", path)


# Magmas


class TableMagma(InstanceModel):
    kind: Literal["table"]
    elements: List[Label]
    unit: Label
    op: List[List[Label]]

    def build(self) -> UnitaryMagma:
        return make_table_magma(self.elements, self.unit, self.op)


class CappedMultMagma(InstanceModel):
    kind: Literal["capped_mult"]
    cap: int = Field(ge=1)

    def build(self) -> UnitaryMagma:
        return capped_nat_mult(self.cap)


class CappedAddMagma(InstanceModel):
    kind: Literal["capped_add"]
    cap: int = Field(ge=0)

    def build(self) -> UnitaryMagma:
        return capped_nat_add(self.cap)


class ChainMagma(InstanceModel):
    kind: Literal["chain"]
    labels: List[Label] = Field(min_length=1)

    def build(self) -> UnitaryMagma:
        return chain_magma(self.labels)


class EndomapMagma(InstanceModel):
    kind: Literal["endomap"]
    elements: List[Label]
    unit: Label
    mu: Dict[Label, Dict[Label, Label]]

    def build(self) -> UnitaryMagma:
        return endomap_magma(self.elements, self.unit, self.mu)


MagmaSpec = Annotated[
    Union[TableMagma, CappedMultMagma, CappedAddMagma, ChainMagma, EndomapMagma],
    Field(discriminator="kind"),
]


def _magma_labels(spec: Any) -> List[str]:
    if isinstance(spec, CappedMultMagma):
        return [str(v) for v in range(1, spec.cap + 1)]
    if isinstance(spec, CappedAddMagma):
        return [str(v) for v in range(0, spec.cap + 1)]
    if isinstance(spec, ChainMagma):
        return list(spec.labels)
    return list(spec.elements)


# Fibrous preorders, preorders and topologies


class FibrousPreorderInstance(InstanceModel):
    kind: Literal["fibrous_preorder"]
    magma: MagmaSpec
    carrier: List[Label] = Field(min_length=1)
    rel: List[Tuple[Label, Label, Label]]
    partial_d: List[Tuple[Label, Label, Label, Label]]

    @model_validator(mode="after")
    def _labels(self) -> "FibrousPreorderInstance":
        _unique(self.carrier, "carrier")
        indices = _magma_labels(self.magma)
        for pos, (i, x, y) in enumerate(self.rel):
            _known(i, indices, f"rel[{pos}][0]")
            _known(x, self.carrier, f"rel[{pos}][1]")
            _known(y, self.carrier, f"rel[{pos}][2]")
        for pos, (i, x, y, j) in enumerate(self.partial_d):
            _known(i, indices, f"partial_d[{pos}][0]")
            _known(x, self.carrier, f"partial_d[{pos}][1]")
            _known(y, self.carrier, f"partial_d[{pos}][2]")
            _known(j, indices, f"partial_d[{pos}][3]")
        return self

    def build(self) -> FibrousPreorder:
        return FibrousPreorder(
            self.magma.build(),
            Carrier.of(self.carrier),
            frozenset(self.rel),
            {(i, x, y): j for i, x, y, j in self.partial_d},
        )


class PreorderInstance(InstanceModel):
    kind: Literal["preorder"]
    carrier: List[Label] = Field(min_length=1)
    leq: List[Tuple[Label, Label]]

    @model_validator(mode="after")
    def _labels(self) -> "PreorderInstance":
        _unique(self.carrier, "carrier")
        for pos, (x, y) in enumerate(self.leq):
            _known(x, self.carrier, f"leq[{pos}][0]")
            _known(y, self.carrier, f"leq[{pos}][1]")
        return self

    def build(self) -> Preorder:
        return Preorder(Carrier.of(self.carrier), frozenset(self.leq))


class TopologyInstance(InstanceModel):
    kind: Literal["topology"]
    carrier: List[Label] = Field(min_length=1)
    opens: List[List[Label]]

    @model_validator(mode="after")
    def _labels(self) -> "TopologyInstance":
        _unique(self.carrier, "carrier")
        for pos, subset in enumerate(self.opens):
            for k, x in enumerate(subset):
                _known(x, self.carrier, f"opens[{pos}][{k}]")
        return self

    def build(self) -> FiniteTopology:
        return FiniteTopology.from_subsets(Carrier.of(self.carrier), self.opens)


# Representations


class NeighborhoodMapInstance(InstanceModel):
    kind: Literal["nmap"]
    magma: MagmaSpec
    carrier: List[Label] = Field(min_length=1)
    N: List[Tuple[Label, Label, List[Label]]]

    @model_validator(mode="after")
    def _labels(self) -> "NeighborhoodMapInstance":
        _unique(self.carrier, "carrier")
        indices = _magma_labels(self.magma)
        for pos, (n, x, ys) in enumerate(self.N):
            _known(n, indices, f"N[{pos}][0]")
            _known(x, self.carrier, f"N[{pos}][1]")
            for k, y in enumerate(ys):
                _known(y, self.carrier, f"N[{pos}][2][{k}]")
        return self

    def build(self) -> NeighborhoodMap:
        return NeighborhoodMap(
            self.magma.build(),
            Carrier.of(self.carrier),
            {(n, x): frozenset(ys) for n, x, ys in self.N},
        )


class TernaryInstance(InstanceModel):
    kind: Literal["ternary"]
    magma: MagmaSpec
    carrier: List[Label] = Field(min_length=1)
    R: List[Tuple[Label, Label, Label]]
    p: List[Tuple[Label, Label, Label, Label]]

    @model_validator(mode="after")
    def _labels(self) -> "TernaryInstance":
        _unique(self.carrier, "carrier")
        indices = _magma_labels(self.magma)
        for pos, (n, x, y) in enumerate(self.R):
            _known(n, indices, f"R[{pos}][0]")
            _known(x, self.carrier, f"R[{pos}][1]")
            _known(y, self.carrier, f"R[{pos}][2]")
        for pos, (n, x, y, k) in enumerate(self.p):
            _known(k, indices, f"p[{pos}][3]")
        return self

    def build(self) -> TernaryRep:
        return TernaryRep(
            self.magma.build(),
            Carrier.of(self.carrier),
            frozenset(self.R),
            {(n, x, y): k for n, x, y, k in self.p},
        )


class EtaGammaInstance(InstanceModel):
    kind: Literal["etagamma"]
    magma: MagmaSpec
    carrier: List[Label] = Field(min_length=1)
    opens: List[List[Label]]
    eta: List[Tuple[Label, Label, List[Label]]]
    gamma: List[Tuple[List[Label], Label, Label]]

    @model_validator(mode="after")
    def _labels(self) -> "EtaGammaInstance":
        _unique(self.carrier, "carrier")
        indices = _magma_labels(self.magma)
        for pos, subset in enumerate(self.opens):
            for k, x in enumerate(subset):
                _known(x, self.carrier, f"opens[{pos}][{k}]")
        for pos, (n, x, ys) in enumerate(self.eta):
            _known(n, indices, f"eta[{pos}][0]")
            _known(x, self.carrier, f"eta[{pos}][1]")
            for k, y in enumerate(ys):
                _known(y, self.carrier, f"eta[{pos}][2][{k}]")
        for pos, (u, x, k) in enumerate(self.gamma):
            for j, y in enumerate(u):
                _known(y, self.carrier, f"gamma[{pos}][0][{j}]")
            _known(x, self.carrier, f"gamma[{pos}][1]")
            _known(k, indices, f"gamma[{pos}][2]")
        return self

    def build(self) -> EtaGammaRep:
        carrier = Carrier.of(self.carrier)
        return EtaGammaRep(
            self.magma.build(),
            carrier,
            FiniteTopology.from_subsets(carrier, self.opens),
            {(n, x): frozenset(ys) for n, x, ys in self.eta},
            {(frozenset(u), x): k for u, x, k in self.gamma},
        )


# Constructor sources


class PseudometricInstance(InstanceModel):
    kind: Literal["pseudometric"]
    carrier: List[Label] = Field(min_length=1)
    d: List[List[Rational]]
    cap: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _shape(self) -> "PseudometricInstance":
        _unique(self.carrier, "carrier")
        size = len(self.carrier)
        if len(self.d) != size:
            raise SchemaError(f"d must have {size} rows", "d")
        for pos, row in enumerate(self.d):
            if len(row) != size:
                raise SchemaError(f"row must have {size} entries", f"d[{pos}]")
        return self

    def build(self) -> RationalPseudometric:
        return RationalPseudometric(
            Carrier.of(self.carrier),
            {
                (x, y): self.d[a][b]
                for a, x in enumerate(self.carrier)
                for b, y in enumerate(self.carrier)
            },
        )


class GroupSpec(InstanceModel):
    cyclic: Optional[int] = Field(default=None, ge=1)
    elements: Optional[List[Label]] = None
    zero: Optional[Label] = None
    add: Optional[List[List[Label]]] = None
    neg: Optional[List[Label]] = None

    def build(self) -> FiniteGroupData:
        if self.cyclic is not None:
            return cyclic_group(self.cyclic)
        if self.elements is None or self.zero is None or self.add is None or self.neg is None:
            raise SchemaError("a group needs cyclic, or elements, zero, add and neg", "group")
        _unique(self.elements, "group.elements")
        return FiniteGroupData(
            tuple(self.elements),
            {
                (a, b): self.add[i][j]
                for i, a in enumerate(self.elements)
                for j, b in enumerate(self.elements)
            },
            self.zero,
            dict(zip(self.elements, self.neg)),
        )


class GroupSubsetInstance(InstanceModel):
    kind: Literal["group_subset"]
    group: GroupSpec
    B: List[Label]
    alpha: Dict[Label, Label]
    magma: CappedMultMagma

    def build(self) -> FibrousPreorder:
        """Run the group-with-subset constructor on this instance."""
        return from_group_subset(self.group.build(), self.B, self.alpha, self.magma.build())


class ValueOrderSpec(InstanceModel):
    values: List[Rational] = Field(min_length=1)
    leq: Optional[List[Tuple[Rational, Rational]]] = None

    def build(self) -> ValueOrder:
        if self.leq is None:
            return ValueOrder.chain(self.values)
        return ValueOrder(tuple(self.values), frozenset(self.leq))


class LaxMaltsevInstance(InstanceModel):
    kind: Literal["lax_maltsev"]
    E: ValueOrderSpec
    B: List[Label] = Field(min_length=1)
    magma: MagmaSpec
    g: Dict[Label, Rational]
    p: Optional[List[Tuple[Rational, Label, Label, Rational]]] = None
    delta: Optional[List[List[Rational]]] = None
    linking: Literal["primary", "alternative"] = "primary"

    @model_validator(mode="after")
    def _one_source(self) -> "LaxMaltsevInstance":
        _unique(self.B, "B")
        if (self.p is None) == (self.delta is None):
            raise SchemaError("give exactly one of p and delta", "p")
        return self

    def build(self) -> LaxMaltsevData:
        E = self.E.build()
        B = Carrier.of(self.B)
        if self.delta is not None:
            delta = {
                (x, y): self.delta[a][b]
                for a, x in enumerate(self.B)
                for b, y in enumerate(self.B)
            }
            p = maltsev_from_delta(E, B, delta)
        else:
            p = {(a, x, y): v for a, x, y, v in self.p or []}
        return LaxMaltsevData(E, B, p, self.magma.build(), dict(self.g))


# Monoids and modules


class MonoidInstance(InstanceModel):
    kind: Literal["monoid"]
    elements: List[Label] = Field(min_length=1)
    zero: Label
    add: List[List[Label]]

    @model_validator(mode="after")
    def _labels(self) -> "MonoidInstance":
        _unique(self.elements, "elements")
        _known(self.zero, self.elements, "zero")
        return self

    def build(self) -> FiniteMonoidData:
        return _monoid(self.elements, self.zero, self.add)


class MonoidSpec(InstanceModel):
    elements: List[Label] = Field(min_length=1)
    zero: Label
    add: List[List[Label]]

    def build(self) -> FiniteMonoidData:
        _unique(self.elements, "monoid.elements")
        return _monoid(self.elements, self.zero, self.add)


def _monoid(elements: List[str], zero: str, add: List[List[str]]) -> FiniteMonoidData:
    size = len(elements)
    if len(add) != size or any(len(row) != size for row in add):
        raise SchemaError(f"addition table must be {size}x{size}", "add")
    return FiniteMonoidData(
        tuple(elements),
        {(a, b): add[i][j] for i, a in enumerate(elements) for j, b in enumerate(elements)},
        zero,
    )


class SnFamilyInstance(InstanceModel):
    kind: Literal["sn_family"]
    monoid: MonoidSpec
    magma: MagmaSpec
    S: Dict[Label, List[Label]]
    alpha: Dict[Label, Dict[Label, Label]]

    @model_validator(mode="after")
    def _labels(self) -> "SnFamilyInstance":
        indices = _magma_labels(self.magma)
        elements = self.monoid.elements
        for n, members in self.S.items():
            _known(n, indices, f"S.{n}")
            for k, a in enumerate(members):
                _known(a, elements, f"S.{n}[{k}]")
        for n, row in self.alpha.items():
            _known(n, indices, f"alpha.{n}")
            for a, m in row.items():
                _known(a, self.S.get(n, []), f"alpha.{n}.{a}")
                _known(m, indices, f"alpha.{n}.{a}")
        for n in indices:
            if n not in self.S:
                raise SchemaError(f"no set S_{n} for index {n!r}", "S")
            for a in self.S[n]:
                if a not in self.alpha.get(n, {}):
                    raise SchemaError(f"alpha_{n} is undefined at {a!r}", f"alpha.{n}")
        return self

    def build(self) -> SnFamily:
        return SnFamily(
            self.monoid.build(),
            self.magma.build(),
            {n: frozenset(members) for n, members in self.S.items()},
            {n: dict(a) for n, a in self.alpha.items()},
        )


class ModuleDataInstance(InstanceModel):
    kind: Literal["module_data"]
    monoid: MonoidSpec
    magma: MagmaSpec
    xi: Dict[Label, Dict[Label, Label]]
    S: List[Label]
    alpha: Optional[Dict[Label, Label]] = None

    @model_validator(mode="after")
    def _labels(self) -> "ModuleDataInstance":
        indices = _magma_labels(self.magma)
        elements = self.monoid.elements
        for n, row in self.xi.items():
            _known(n, indices, f"xi.{n}")
            for x, y in row.items():
                _known(x, elements, f"xi.{n}.{x}")
                _known(y, elements, f"xi.{n}.{x}")
        for k, a in enumerate(self.S):
            _known(a, elements, f"S[{k}]")
        for a, n in (self.alpha or {}).items():
            _known(a, elements, f"alpha.{a}")
            _known(n, indices, f"alpha.{a}")
        return self

    def build(self) -> ModuleData:
        return ModuleData(
            self.monoid.build(),
            self.magma.build(),
            {(n, x): y for n, row in self.xi.items() for x, y in row.items()},
            frozenset(self.S),
            dict(self.alpha) if self.alpha is not None else None,
        )


class IntervalSpec(InstanceModel):
    lower: Rational
    upper: Rational
    lower_closed: bool = True
    upper_closed: bool = False


class IntervalSetInstance(InstanceModel):
    kind: Literal["interval_set"]
    intervals: List[IntervalSpec]

    def build(self) -> IntervalSet:
        return IntervalSet.of(
            RationalInterval(i.lower, i.upper, i.lower_closed, i.upper_closed)
            for i in self.intervals
        )


class MorphismInstance(InstanceModel):
    kind: Literal["morphism"]
    src: FibrousPreorderInstance
    dst: FibrousPreorderInstance
    f: Dict[Label, Label]
    g: Dict[Label, Dict[Label, Label]]


Instance = Annotated[
    Union[
        FibrousPreorderInstance,
        PreorderInstance,
        TopologyInstance,
        NeighborhoodMapInstance,
        TernaryInstance,
        EtaGammaInstance,
        PseudometricInstance,
        GroupSubsetInstance,
        LaxMaltsevInstance,
        MonoidInstance,
        SnFamilyInstance,
        ModuleDataInstance,
        IntervalSetInstance,
        MorphismInstance,
    ],
    Field(discriminator="kind"),
]

_adapter: TypeAdapter = TypeAdapter(Instance)


def _path(loc: Sequence[Union[str, int]]) -> str:
    out = ""
    for part in loc:
        if isinstance(part, int):
            out += f"[{part}]"
        else:
            out += f".{part}" if out else str(part)
    return out


def parse_instance(data: Union[str, bytes]) -> Any:
    """Parse and schema-check one instance file.

    Raises:
        ParseError: If the text is not JSON, with its line and column
        SchemaError: If the JSON does not match any instance schema
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc.reason}", 1, exc.start + 1) from None
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    try:
        return _adapter.validate_python(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = list(first["loc"])
        # Discriminated unions prefix the location with the tag
        if loc and isinstance(raw, dict) and loc[0] == raw.get("kind"):
            loc = loc[1:]
        raise SchemaError(first["msg"], _path(loc)) from None
