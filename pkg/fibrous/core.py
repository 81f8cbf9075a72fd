"""Cartesian spacial fibrous preorders: the axiom checker, induced topology
and the morphism condition.

A fibrous preorder over a unitary magma I is a carrier X with relations
x <=^i y for every i in I and an index d^i(x, y) attached to every related
pair, subject to

    (C1) x <=^i x
    (C2) x <=^i y, d^i(x, y) = j and y <=^j z imply x <=^i z
    (C3) x <=^(i*j) y implies x <=^i y and x <=^j y
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Tuple

from .config import resolve_bound
from .errors import AxiomsFailed, MagmaMismatch, MalformedPartialMap, UnknownElement
from .magma import UnitaryMagma
from .topology import Carrier, FiniteTopology, Subset, neighbourhood_topology

logger = logging.getLogger(__name__)

Triple = Tuple[str, str, str]


@dataclass(frozen=True)
class FibrousPreorder:
    """Carrier, I-indexed relation family and the partial index map."""

    magma: UnitaryMagma
    carrier: Carrier
    rel: FrozenSet[Triple]
    partial_d: Mapping[Triple, str]

    def __post_init__(self) -> None:
        for i, x, y in self.rel:
            self.magma.index(i)
            self.carrier.index(x)
            self.carrier.index(y)
        for (i, x, y), j in self.partial_d.items():
            self.magma.index(i)
            self.magma.index(j)
            self.carrier.index(x)
            self.carrier.index(y)

    def related(self, i: str, x: str, y: str) -> bool:
        return (i, x, y) in self.rel

    def triple_key(self, triple: Triple) -> Tuple[int, int, int]:
        i, x, y = triple
        return (self.magma.index(i), self.carrier.index(x), self.carrier.index(y))

    def ordered_rel(self) -> List[Triple]:
        return sorted(self.rel, key=self.triple_key)

    @cached_property
    def neighbourhoods(self) -> Dict[Tuple[str, str], Subset]:
        table: Dict[Tuple[str, str], set] = {
            (i, x): set() for i, x in product(self.magma, self.carrier)
        }
        for i, x, y in self.rel:
            table[(i, x)].add(y)
        return {key: frozenset(value) for key, value in table.items()}

    def to_dict(self) -> Dict[str, Any]:
        ordered = self.ordered_rel()
        return {
            "kind": "fibrous_preorder",
            "magma": self.magma.to_dict(),
            "carrier": list(self.carrier.elements),
            "rel": [list(t) for t in ordered],
            "partial_d": [[*t, self.partial_d[t]] for t in ordered if t in self.partial_d],
        }


@dataclass
class AxiomReport:
    """Every C1/C2/C3 violation, each with a witness tuple.

    Witness shapes: C1 (i, x); C2 (i, x, y, j, z) with j = d^i(x, y);
    C3 (i, j, x, y).
    """

    c1_violations: List[Tuple[str, ...]] = field(default_factory=list)
    c2_violations: List[Tuple[str, ...]] = field(default_factory=list)
    c3_violations: List[Tuple[str, ...]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.c1_violations or self.c2_violations or self.c3_violations)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": "fibrous_preorder",
            "passed": self.passed,
            "violations": {
                "C1": [list(w) for w in self.c1_violations],
                "C2": [list(w) for w in self.c2_violations],
                "C3": [list(w) for w in self.c3_violations],
            },
        }


def ensure_well_formed(fp: FibrousPreorder) -> None:
    """Raise MalformedPartialMap unless the partial map is defined exactly on rel."""
    domain = set(fp.partial_d)
    if domain == fp.rel:
        return
    missing = sorted(fp.rel - domain, key=fp.triple_key)
    extra = sorted(domain - fp.rel, key=fp.triple_key)
    if missing:
        raise MalformedPartialMap(
            f"partial map undefined on related triple {missing[0]}",
            witness=list(missing[0]),
        )
    raise MalformedPartialMap(
        f"partial map defined on unrelated triple {extra[0]}", witness=list(extra[0])
    )


def check_axioms(fp: FibrousPreorder) -> AxiomReport:
    """Exhaustively check C1-C3, listing every violation in declared order.

    Raises:
        MalformedPartialMap: If the partial map's domain differs from rel
    """
    ensure_well_formed(fp)
    report = AxiomReport()
    magma, carrier = fp.magma, fp.carrier

    for i, x in product(magma, carrier):
        if (i, x, x) not in fp.rel:
            report.c1_violations.append((i, x))

    for i, x, y in fp.ordered_rel():
        j = fp.partial_d[(i, x, y)]
        for z in carrier:
            if (j, y, z) in fp.rel and (i, x, z) not in fp.rel:
                report.c2_violations.append((i, x, y, j, z))

    for i, j in product(magma, repeat=2):
        ij = magma.op(i, j)
        for x, y in product(carrier, repeat=2):
            if (ij, x, y) in fp.rel and not (
                (i, x, y) in fp.rel and (j, x, y) in fp.rel
            ):
                report.c3_violations.append((i, j, x, y))

    logger.debug(
        "Axiom check over %d indices and %d points: passed=%s",
        len(magma),
        len(carrier),
        report.passed,
    )
    return report


def require_axioms(fp: FibrousPreorder) -> None:
    """Raise AxiomsFailed carrying the first witness when C1-C3 fail."""
    report = check_axioms(fp)
    if not report.passed:
        raise AxiomsFailed("C1-C3 do not hold", witness=report.to_dict()["violations"])


def neighborhood(fp: FibrousPreorder, i: str, x: str) -> Subset:
    """N(i, x) = {y | x <=^i y}."""
    fp.magma.index(i)
    fp.carrier.index(x)
    return fp.neighbourhoods[(i, x)]


def induced_topology(
    fp: FibrousPreorder, exhaustive_bound: Optional[int] = None
) -> FiniteTopology:
    """Topology whose opens are the sets O with some N(i, x) inside O for every x in O.

    Raises:
        AxiomsFailed: If the structure is not a fibrous preorder
    """
    require_axioms(fp)
    per_point = {
        x: [fp.neighbourhoods[(i, x)] for i in fp.magma] for x in fp.carrier
    }
    return neighbourhood_topology(fp.carrier, per_point, resolve_bound(exhaustive_bound))


@dataclass(frozen=True)
class MorphismResult:
    """Outcome of the morphism check, with the first violating (x, y, j)."""

    holds: bool
    witness: Optional[Tuple[str, str, str]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "holds": self.holds,
            "witness": list(self.witness) if self.witness else None,
        }


def same_magma(left: UnitaryMagma, right: UnitaryMagma) -> bool:
    return (
        left.elements == right.elements
        and left.unit == right.unit
        and left.table == right.table
    )


def check_morphism(
    src: FibrousPreorder,
    dst: FibrousPreorder,
    f: Mapping[str, str],
    g: Mapping[str, Mapping[str, str]],
) -> MorphismResult:
    """Check x <=^(g_j(x)) y  =>  f(x) <=^j f(y) for all x, y and j.

    Args:
        src: Domain fibrous preorder
        dst: Codomain fibrous preorder over the same magma
        f: Carrier map
        g: For each index j, a map from the source carrier to indices

    Raises:
        MagmaMismatch: If the two magmas differ
        UnknownElement: If f or g is not total or lands outside its codomain
    """
    if not same_magma(src.magma, dst.magma):
        raise MagmaMismatch("source and target are indexed by different magmas")
    for x in src.carrier:
        if x not in f:
            raise UnknownElement(x)
        dst.carrier.index(f[x])
    for j in src.magma:
        if j not in g:
            raise UnknownElement(j, "magma")
        for x in src.carrier:
            if x not in g[j]:
                raise UnknownElement(x)
            src.magma.index(g[j][x])

    for j, x, y in product(src.magma, src.carrier, src.carrier):
        if (g[j][x], x, y) in src.rel and (j, f[x], f[y]) not in dst.rel:
            logger.debug("Morphism condition fails at x=%s y=%s j=%s", x, y, j)
            return MorphismResult(False, (x, y, j))
    return MorphismResult(True)


def uniform_family(
    magma: UnitaryMagma, carrier: Carrier, g: Mapping[str, str]
) -> Dict[str, Dict[str, str]]:
    """The x-independent family g_j(x) = g(j)."""
    for j in magma:
        magma.index(g[j])
    return {j: {x: g[j] for x in carrier} for j in magma}


@dataclass(frozen=True)
class SpacialFibrousPreorder:
    """The general structure (R, A, B, d, p, s, m) a cartesian one embeds into.

    A = I x X, B = X; d: R -> A, p: A -> B, s: B -> A, m: A x_B A -> A.
    """

    R: FrozenSet[Triple]
    A: Tuple[Tuple[str, str], ...]
    B: Tuple[str, ...]
    d: Mapping[Triple, Tuple[str, str]]
    p: Mapping[Tuple[str, str], str]
    s: Mapping[str, Tuple[str, str]]
    m: Mapping[Tuple[str, str, str], Tuple[str, str]]

    def fibres_agree(self) -> bool:
        """p(d(i,x,y)) = y, p(s(x)) = x and p(m(i,j,x)) = x."""
        return (
            all(self.p[self.d[(i, x, y)]] == y for i, x, y in self.R)
            and all(self.p[self.s[x]] == x for x in self.B)
            and all(self.p[self.m[(i, j, x)]] == x for i, j, x in self.m)
        )


def spacial_embedding(fp: FibrousPreorder) -> SpacialFibrousPreorder:
    """Embed a cartesian fibrous preorder into the general spacial structure."""
    ensure_well_formed(fp)
    magma, carrier = fp.magma, fp.carrier
    return SpacialFibrousPreorder(
        R=fp.rel,
        A=tuple(product(magma, carrier)),
        B=carrier.elements,
        d={(i, x, y): (fp.partial_d[(i, x, y)], y) for i, x, y in fp.rel},
        p={(i, x): x for i, x in product(magma, carrier)},
        s={x: (magma.unit, x) for x in carrier},
        m={
            (i, j, x): (magma.op(i, j), x)
            for i, j, x in product(magma, magma, carrier)
        },
    )
