"""Finite topological spaces, preorders and the Alexandrov correspondence."""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import (
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Sequence,
    Set,
    Tuple,
)

import networkx as nx

from .errors import (
    InconsistentTopology,
    InvalidStructure,
    InvalidTopology,
    NotAPreorder,
    UnknownElement,
)
from .reports import CheckReport

logger = logging.getLogger(__name__)

Subset = FrozenSet[str]


@dataclass(frozen=True)
class Carrier:
    """The finite underlying set, in declared order."""

    elements: Tuple[str, ...]
    _index: Dict[str, int] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if not self.elements:
            raise InvalidStructure("a carrier needs at least one element")
        if len(set(self.elements)) != len(self.elements):
            raise InvalidStructure(f"duplicate carrier labels in {list(self.elements)}")
        self._index.update({label: pos for pos, label in enumerate(self.elements)})

    @classmethod
    def of(cls, labels: Iterable[str]) -> "Carrier":
        return cls(tuple(labels))

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
            raise UnknownElement(label) from None

    def full(self) -> Subset:
        return frozenset(self.elements)

    def subset(self, labels: Iterable[str]) -> Subset:
        """Frozen subset, checking every label belongs to the carrier."""
        result = frozenset(labels)
        for label in result:
            self.index(label)
        return result

    def ordered(self, subset: Iterable[str]) -> Tuple[str, ...]:
        """Subset as a tuple in carrier order."""
        return tuple(sorted(subset, key=self.index))

    def sort_key(self, subset: Iterable[str]) -> Tuple[int, Tuple[int, ...]]:
        """Canonical order of subsets: by size, then by carrier positions."""
        positions = tuple(sorted(self.index(x) for x in subset))
        return (len(positions), positions)

    def all_subsets(self) -> Iterator[Subset]:
        for size in range(len(self.elements) + 1):
            for combo in combinations(self.elements, size):
                yield frozenset(combo)


@dataclass(frozen=True)
class FiniteTopology:
    """A carrier with its open sets, stored canonically."""

    carrier: Carrier
    opens: Tuple[Subset, ...]

    @classmethod
    def from_subsets(cls, carrier: Carrier, subsets: Iterable[Iterable[str]]) -> "FiniteTopology":
        family = {carrier.subset(s) for s in subsets}
        return cls(carrier, tuple(sorted(family, key=carrier.sort_key)))

    def __contains__(self, subset: object) -> bool:
        return subset in self._open_set

    @cached_property
    def _open_set(self) -> FrozenSet[Subset]:
        return frozenset(self.opens)

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": "topology",
            "carrier": list(self.carrier.elements),
            "opens": [list(self.carrier.ordered(o)) for o in self.opens],
        }


@dataclass(frozen=True)
class Preorder:
    """A reflexive and transitive relation on a carrier."""

    carrier: Carrier
    leq: FrozenSet[Tuple[str, str]]

    @classmethod
    def generated(cls, carrier: Carrier, pairs: Iterable[Tuple[str, str]]) -> "Preorder":
        """Reflexive-transitive closure of the given pairs."""
        graph = nx.DiGraph()
        graph.add_nodes_from(carrier.elements)
        for x, y in pairs:
            carrier.index(x)
            carrier.index(y)
            graph.add_edge(x, y)
        closure = nx.transitive_closure(graph, reflexive=True)
        return cls(carrier, frozenset(closure.edges()))

    def up(self, x: str) -> Subset:
        return frozenset(y for y in self.carrier if (x, y) in self.leq)

    def to_dict(self) -> Dict[str, object]:
        pairs = sorted(
            self.leq, key=lambda p: (self.carrier.index(p[0]), self.carrier.index(p[1]))
        )
        return {
            "kind": "preorder",
            "carrier": list(self.carrier.elements),
            "leq": [list(p) for p in pairs],
        }


def union_closure(carrier: Carrier, basis: Iterable[Iterable[str]]) -> FiniteTopology:
    """All unions of the basis sets, together with the empty set."""
    opens: Set[Subset] = {frozenset()}
    for basic in {carrier.subset(b) for b in basis}:
        opens |= {existing | basic for existing in opens}
    logger.debug("Union closure produced %d open sets", len(opens))
    return FiniteTopology(carrier, tuple(sorted(opens, key=carrier.sort_key)))


def scan_topology(
    carrier: Carrier, neighbourhoods: Callable[[str], Iterable[Subset]]
) -> FiniteTopology:
    """Brute-force membership rule over all 2^|X| subsets.

    A subset O is kept iff every x in O has some neighbourhood inside O.
    """
    cache = {x: [frozenset(n) for n in neighbourhoods(x)] for x in carrier}
    opens = [
        subset
        for subset in carrier.all_subsets()
        if all(any(n <= subset for n in cache[x]) for x in subset)
    ]
    return FiniteTopology(carrier, tuple(sorted(opens, key=carrier.sort_key)))


def validate_topology(t: FiniteTopology) -> CheckReport:
    """Report missing empty set/carrier and missing unions or intersections."""
    report = CheckReport(
        "topology",
        ["foreign_subset", "missing_empty", "missing_carrier", "union", "intersection"],
    )
    carrier = t.carrier
    full = carrier.full()
    opens = list(t.opens)
    present = set(opens)

    for o in opens:
        stray = o - full
        if stray:
            report.add("foreign_subset", sorted(stray))
    if frozenset() not in present:
        report.add("missing_empty", [])
    if full not in present:
        report.add("missing_carrier", list(carrier.elements))

    clean = [o for o in opens if o <= full]
    for a, b in combinations(clean, 2):
        if a | b not in present:
            report.add("union", [carrier.ordered(a), carrier.ordered(b), carrier.ordered(a | b)])
        if a & b not in present:
            report.add(
                "intersection", [carrier.ordered(a), carrier.ordered(b), carrier.ordered(a & b)]
            )
    return report


def is_open(t: FiniteTopology, subset: Iterable[str]) -> bool:
    return frozenset(subset) in t


def validate_preorder(p: Preorder) -> None:
    """Raise NotAPreorder unless ``p.leq`` is reflexive and transitive."""
    for x in p.carrier:
        if (x, x) not in p.leq:
            raise NotAPreorder(f"not reflexive at {x!r}", witness=[x, x])
    for x, y in p.leq:
        p.carrier.index(x)
        p.carrier.index(y)
    ordered = sorted(p.leq, key=lambda q: (p.carrier.index(q[0]), p.carrier.index(q[1])))
    for x, y in ordered:
        for z in p.carrier:
            if (y, z) in p.leq and (x, z) not in p.leq:
                raise NotAPreorder(f"not transitive at {x}<={y}<={z}", witness=[x, y, z])


def alexandrov_topology(p: Preorder) -> FiniteTopology:
    """All up-closed sets of a preorder.

    On a finite carrier the up-closed sets are exactly the unions of the
    principal up-sets.
    """
    validate_preorder(p)
    return union_closure(p.carrier, [p.up(x) for x in p.carrier])


def specialization_preorder(t: FiniteTopology) -> Preorder:
    """x <= y iff every open set containing x also contains y."""
    report = validate_topology(t)
    if not report.passed:
        raise InvalidTopology("not a topology", witness=report.to_dict()["violations"])
    leq = frozenset(
        (x, y)
        for x, y in product(t.carrier, repeat=2)
        if all(y in o for o in t.opens if x in o)
    )
    return Preorder(t.carrier, leq)


def up_closed_under(t: FiniteTopology, p: Preorder) -> List[Tuple[str, ...]]:
    """Open sets of ``t`` that are not up-closed under ``p`` (empty when none)."""
    offenders = []
    for o in t.opens:
        if any(y not in o for x in o for y in p.up(x)):
            offenders.append(t.carrier.ordered(o))
    return offenders


def neighbourhood_topology(
    carrier: Carrier,
    neighbourhoods: Mapping[str, Sequence[Subset]],
    exhaustive_bound: int,
) -> FiniteTopology:
    """Topology generated by per-point neighbourhood sets.

    Built by union closure; for carriers up to ``exhaustive_bound`` points the
    result is compared with the subset-scan membership rule.

    Raises:
        InconsistentTopology: If the two disagree, i.e. some neighbourhood is
            not itself open under the membership rule
    """
    basis = [n for x in carrier for n in neighbourhoods[x]]
    fast = union_closure(carrier, basis)
    if len(carrier) <= exhaustive_bound:
        oracle = scan_topology(carrier, lambda x: neighbourhoods[x])
        if oracle != fast:
            logger.warning(
                "Union closure (%d opens) disagrees with subset scan (%d opens)",
                len(fast.opens),
                len(oracle.opens),
            )
            extra = [carrier.ordered(o) for o in fast.opens if o not in oracle]
            extra += [carrier.ordered(o) for o in oracle.opens if o not in fast]
            raise InconsistentTopology(
                "neighbourhood sets are not open under the membership rule",
                witness=extra[:1],
            )
    return fast
