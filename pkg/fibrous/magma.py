"""Unitary magmas indexing every relation family.

Elements are string labels. Integer-flavoured magmas (the capped stand-ins
for (N, *, 1) and (N_0, +, 0)) also carry the integer each label denotes.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple

from .errors import InvalidStructure, NotClosed, UnitLawViolation, UnknownElement

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UnitaryMagma:
    """A finite set with a unit and a (not necessarily associative) product."""

    elements: Tuple[str, ...]
    unit: str
    table: Tuple[Tuple[str, ...], ...]
    associative: bool
    unital: bool = True
    numeric: Optional[Tuple[int, ...]] = None
    _index: Dict[str, int] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        self._index.update({label: pos for pos, label in enumerate(self.elements)})

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownElement(label, "magma") from None

    def op(self, i: str, j: str) -> str:
        return self.table[self.index(i)][self.index(j)]

    @property
    def is_monoid(self) -> bool:
        return self.associative and self.unital

    def value(self, label: str) -> int:
        """Integer denoted by a label of an integer-flavoured magma."""
        if self.numeric is None:
            raise InvalidStructure(f"magma has no numeric interpretation: {label!r}")
        return self.numeric[self.index(label)]

    def label_of(self, value: int) -> str:
        """Label denoting an integer, if the magma has one."""
        if self.numeric is not None and value in self.numeric:
            return self.elements[self.numeric.index(value)]
        raise UnknownElement(value, "magma")

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": "table",
            "elements": list(self.elements),
            "unit": self.unit,
            "op": [list(row) for row in self.table],
        }


def _is_associative(elements: Sequence[str], table: Mapping[Tuple[str, str], str]) -> bool:
    for a, b, c in product(elements, repeat=3):
        if table[table[(a, b)], c] != table[a, table[(b, c)]]:
            return False
    return True


def _build(
    elements: Sequence[str],
    unit: str,
    op_table: Sequence[Sequence[str]],
    numeric: Optional[Tuple[int, ...]] = None,
    require_unit: bool = True,
) -> UnitaryMagma:
    labels = tuple(elements)
    if not labels:
        raise InvalidStructure("a magma needs at least one element")
    if len(set(labels)) != len(labels):
        raise InvalidStructure(f"duplicate magma labels in {list(labels)}")
    if unit not in labels:
        raise UnknownElement(unit, "magma")
    if len(op_table) != len(labels) or any(len(row) != len(labels) for row in op_table):
        raise InvalidStructure(
            f"operation table must be {len(labels)}x{len(labels)}"
        )

    members = set(labels)
    table: Dict[Tuple[str, str], str] = {}
    for (pos_i, i), (pos_j, j) in product(enumerate(labels), repeat=2):
        entry = op_table[pos_i][pos_j]
        if entry not in members:
            raise NotClosed((i, j, entry))
        table[(i, j)] = entry

    unital = all(table[(unit, i)] == i and table[(i, unit)] == i for i in labels)
    if require_unit and not unital:
        for i in labels:
            if table[(unit, i)] != i or table[(i, unit)] != i:
                raise UnitLawViolation(i)

    associative = _is_associative(labels, table)
    logger.debug(
        "Built magma of %d elements (associative=%s)", len(labels), associative
    )
    return UnitaryMagma(
        elements=labels,
        unit=unit,
        table=tuple(tuple(row) for row in op_table),
        associative=associative,
        unital=unital,
        numeric=numeric,
    )


def make_table_magma(
    elements: Sequence[str], unit: str, op_table: Sequence[Sequence[str]]
) -> UnitaryMagma:
    """Validate an operation table as a unitary magma.

    Args:
        elements: Ordered element labels
        unit: The distinguished unit label
        op_table: Row-major table, ``op_table[a][b]`` is the product of the
            a-th and b-th elements

    Raises:
        NotClosed: If an entry is not an element
        UnitLawViolation: Naming the first element the unit fails on
    """
    return _build(elements, unit, op_table)


def capped_nat_mult(cap: int) -> UnitaryMagma:
    """Finite stand-in for (N, *, 1): {1..cap} with saturating product."""
    if cap < 1:
        raise InvalidStructure(f"cap must be at least 1, got {cap}")
    values = tuple(range(1, cap + 1))
    labels = [str(v) for v in values]
    rows = [[str(min(i * j, cap)) for j in values] for i in values]
    return _build(labels, "1", rows, numeric=values)


def capped_nat_add(cap: int) -> UnitaryMagma:
    """Finite stand-in for (N_0, +, 0): {0..cap} with saturating sum."""
    if cap < 0:
        raise InvalidStructure(f"cap must be non-negative, got {cap}")
    values = tuple(range(0, cap + 1))
    labels = [str(v) for v in values]
    rows = [[str(min(i + j, cap)) for j in values] for i in values]
    return _build(labels, "0", rows, numeric=values)


def chain_magma(labels: Sequence[str]) -> UnitaryMagma:
    """An ascending chain as a magma: smallest element is the unit, product is max."""
    chain = list(labels)
    rows = [[chain[max(a, b)] for b in range(len(chain))] for a in range(len(chain))]
    return _build(chain, chain[0] if chain else "", rows)


def endomap_magma(
    elements: Sequence[str], unit: str, mu: Mapping[str, Mapping[str, str]]
) -> UnitaryMagma:
    """Magma from a family of endo-maps, with product m*n = mu_m(n).

    The family must satisfy mu_n(unit) = unit and mu_unit(n) = n. Only the
    second condition makes ``unit`` a left unit; the resulting magma records
    whether the two-sided unit laws also hold in its ``unital`` flag.

    Raises:
        UnitLawViolation: When mu_n(unit) != unit or mu_unit(n) != n
    """
    labels = list(elements)
    missing = [n for n in labels if n not in mu]
    if missing or len(mu) != len(labels):
        raise InvalidStructure(
            f"need exactly one endo-map per element; missing {missing}"
        )
    if unit not in labels:
        raise UnknownElement(unit, "magma")

    for n in labels:
        if any(m not in mu[n] for m in labels):
            raise InvalidStructure(f"endo-map mu_{n} is not total")
    for n in labels:
        if mu[n][unit] != unit:
            raise UnitLawViolation(n, f"mu_{n}({unit}) = {mu[n][unit]}")
        if mu[unit][n] != n:
            raise UnitLawViolation(n, f"mu_{unit}({n}) = {mu[unit][n]}")

    rows = [[mu[m][n] for n in labels] for m in labels]
    return _build(labels, unit, rows, require_unit=False)
