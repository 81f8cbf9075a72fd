"""Equivalent presentations of an I-cartesian space and the conversions
between them.

Four presentations are modelled besides the fibrous preorder itself:

* ``NeighborhoodMap`` -- a map N: I x X -> P(X)
* ``TernaryRep`` -- a relation R in I x X x X with p: R -> I
* ``EtaGammaRep`` -- a topology with eta: I x X -> opens and gamma on
  pointed opens

The conversions fp -> nmap -> ternary -> etagamma -> fp follow the
constructive directions of the characterization. Every existential witness
is resolved as the first suitable index in magma order, so round trips are
reproducible; only the induced topology is expected to survive a full cycle.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Any, Dict, FrozenSet, Mapping, Optional, Tuple, Union

from .config import resolve_bound
from .core import FibrousPreorder, Triple, require_axioms
from .errors import (
    InconsistentTopology,
    InputError,
    NoWitnessK,
    ValidationFailed,
)
from .magma import UnitaryMagma
from .reports import CheckReport
from .topology import (
    Carrier,
    FiniteTopology,
    Subset,
    neighbourhood_topology,
    union_closure,
    validate_topology,
)

logger = logging.getLogger(__name__)

Pointed = Tuple[Subset, str]


@dataclass(frozen=True)
class NeighborhoodMap:
    """A neighbourhood assignment N(n, x)."""

    magma: UnitaryMagma
    carrier: Carrier
    N: Mapping[Tuple[str, str], Subset]

    kind = "nmap"

    def __post_init__(self) -> None:
        for n, x in product(self.magma, self.carrier):
            if (n, x) not in self.N:
                raise InputError(f"N is not total: missing ({n}, {x})")
            self.carrier.subset(self.N[(n, x)])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "magma": self.magma.to_dict(),
            "carrier": list(self.carrier.elements),
            "N": [
                [n, x, list(self.carrier.ordered(self.N[(n, x)]))]
                for n, x in product(self.magma, self.carrier)
            ],
        }


@dataclass(frozen=True)
class TernaryRep:
    """A ternary relation R with its witness map p."""

    magma: UnitaryMagma
    carrier: Carrier
    R: FrozenSet[Triple]
    p: Mapping[Triple, str]

    kind = "ternary"

    def __post_init__(self) -> None:
        for n, x, y in self.R:
            self.magma.index(n)
            self.carrier.index(x)
            self.carrier.index(y)
        if set(self.p) != set(self.R):
            raise InputError("p must be defined exactly on R")
        for k in self.p.values():
            self.magma.index(k)

    def section(self, n: str, x: str) -> Subset:
        """N_R(n, x) = {y | (n, x, y) in R}."""
        return frozenset(y for y in self.carrier if (n, x, y) in self.R)

    def to_dict(self) -> Dict[str, Any]:
        ordered = [
            t for t in product(self.magma, self.carrier, self.carrier) if t in self.R
        ]
        return {
            "kind": self.kind,
            "magma": self.magma.to_dict(),
            "carrier": list(self.carrier.elements),
            "R": [list(t) for t in ordered],
            "p": [[*t, self.p[t]] for t in ordered],
        }


@dataclass(frozen=True)
class EtaGammaRep:
    """A topology with the structuring maps eta and gamma."""

    magma: UnitaryMagma
    carrier: Carrier
    topology: FiniteTopology
    eta: Mapping[Tuple[str, str], Subset]
    gamma: Mapping[Pointed, str]

    kind = "etagamma"

    def __post_init__(self) -> None:
        for n, x in product(self.magma, self.carrier):
            if (n, x) not in self.eta:
                raise InputError(f"eta is not total: missing ({n}, {x})")
            self.carrier.subset(self.eta[(n, x)])
        for (subset, x), k in self.gamma.items():
            self.carrier.subset(subset)
            self.carrier.index(x)
            self.magma.index(k)

    def pointed_opens(self):
        for u in self.topology.opens:
            for x in self.carrier.ordered(u):
                yield u, x

    def to_dict(self) -> Dict[str, Any]:
        order = self.carrier.ordered
        return {
            "kind": self.kind,
            "magma": self.magma.to_dict(),
            "carrier": list(self.carrier.elements),
            "opens": [list(order(o)) for o in self.topology.opens],
            "eta": [
                [n, x, list(order(self.eta[(n, x)]))]
                for n, x in product(self.magma, self.carrier)
            ],
            "gamma": [
                [list(order(u)), x, self.gamma[(u, x)]]
                for u, x in self.pointed_opens()
                if (u, x) in self.gamma
            ],
        }


Representation = Union[NeighborhoodMap, TernaryRep, EtaGammaRep]


def _validate_nmap(nm: NeighborhoodMap, printed_form: bool) -> CheckReport:
    report = CheckReport("nmap", ["i", "ii", "iii"])
    magma, carrier, N = nm.magma, nm.carrier, nm.N
    for n, x in product(magma, carrier):
        if x not in N[(n, x)]:
            report.add("i", (n, x))
    for n, x in product(magma, carrier):
        here = N[(n, x)]
        if printed_form:
            if not any(N[(k, x)] <= here for k in magma):
                report.add("ii", (n, x))
            continue
        for y in carrier.ordered(here):
            if not any(N[(k, y)] <= here for k in magma):
                report.add("ii", (n, x, y))
    for n, m, x in product(magma, magma, carrier):
        if not N[(magma.op(n, m), x)] <= N[(n, x)] & N[(m, x)]:
            report.add("iii", (n, m, x))
    return report


def _validate_ternary(tr: TernaryRep) -> CheckReport:
    report = CheckReport("ternary", ["i", "ii", "iii"])
    magma, carrier, R = tr.magma, tr.carrier, tr.R
    for n, x in product(magma, carrier):
        if (n, x, x) not in R:
            report.add("i", (n, x))
    for n, x, y in product(magma, carrier, carrier):
        if (n, x, y) not in R:
            continue
        k = tr.p[(n, x, y)]
        for z in carrier:
            if (k, y, z) in R and (n, x, z) not in R:
                report.add("ii", (n, x, y, z))
    for n, m, x, y in product(magma, magma, carrier, carrier):
        if (magma.op(n, m), x, y) in R and not ((n, x, y) in R and (m, x, y) in R):
            report.add("iii", (n, m, x, y))
    return report


def _validate_etagamma(eg: EtaGammaRep) -> CheckReport:
    report = CheckReport("etagamma", ["topology", "open", "i", "ii", "iii"])
    magma, carrier, eta = eg.magma, eg.carrier, eg.eta
    stored = validate_topology(eg.topology)
    for condition in stored.conditions:
        for witness in stored.violations.get(condition, []):
            report.add("topology", [condition, witness])
    for n, x in product(magma, carrier):
        if eta[(n, x)] not in eg.topology:
            report.add("open", (n, x))
        if x not in eta[(n, x)]:
            report.add("i", (n, x))
    for u, x in eg.pointed_opens():
        k = eg.gamma.get((u, x))
        if k is None or not eta[(k, x)] <= u:
            report.add("ii", (carrier.ordered(u), x))
    for n, m, x in product(magma, magma, carrier):
        if not eta[(magma.op(n, m), x)] <= eta[(n, x)] & eta[(m, x)]:
            report.add("iii", (n, m, x))
    return report


def validate_rep(rep: Representation, printed_form: bool = False) -> CheckReport:
    """Exhaustively check the three conditions of the representation's kind.

    An eta/gamma representation also has its stored family checked as a
    topology; any missing union, intersection, empty set or carrier is
    reported under "topology" as [condition, witness].

    Args:
        rep: A neighbourhood map, ternary or eta/gamma representation
        printed_form: For neighbourhood maps, check condition (ii) in the
            form "exists k with N(k, x) inside N(n, x)" instead of the
            default "for every y in N(n, x) exists k with N(k, y) inside
            N(n, x)"
    """
    if isinstance(rep, NeighborhoodMap):
        return _validate_nmap(rep, printed_form)
    if isinstance(rep, TernaryRep):
        return _validate_ternary(rep)
    return _validate_etagamma(rep)


def _require_valid(rep: Representation) -> None:
    report = validate_rep(rep)
    if not report.passed:
        raise ValidationFailed(
            f"{rep.kind} representation is invalid",
            witness=report.to_dict()["violations"],
        )


def fp_to_nmap(fp: FibrousPreorder) -> NeighborhoodMap:
    """N(n, x) = {y | x <=^n y}."""
    require_axioms(fp)
    return NeighborhoodMap(fp.magma, fp.carrier, dict(fp.neighbourhoods))


def _first_index(magma: UnitaryMagma, sets: Mapping[Tuple[str, str], Subset], y: str, bound: Subset) -> Optional[str]:
    for k in magma:
        if sets[(k, y)] <= bound:
            return k
    return None


def nmap_to_ternary(nm: NeighborhoodMap) -> TernaryRep:
    """R = {(n, x, y) | y in N(n, x)} with p(n, x, y) the first k whose N(k, y) lies in N(n, x)."""
    _require_valid(nm)
    R = set()
    p: Dict[Triple, str] = {}
    for n, x in product(nm.magma, nm.carrier):
        here = nm.N[(n, x)]
        for y in nm.carrier.ordered(here):
            k = _first_index(nm.magma, nm.N, y, here)
            if k is None:
                raise NoWitnessK(f"no k with N(k, {y}) inside N({n}, {x})", witness=[n, x, y])
            R.add((n, x, y))
            p[(n, x, y)] = k
    return TernaryRep(nm.magma, nm.carrier, frozenset(R), p)


def ternary_to_etagamma(tr: TernaryRep) -> EtaGammaRep:
    """eta = N_R, topology = unions of N_R sets, gamma(U, x) = first k with N_R(k, x) inside U."""
    _require_valid(tr)
    eta = {(n, x): tr.section(n, x) for n, x in product(tr.magma, tr.carrier)}
    topology = union_closure(tr.carrier, eta.values())
    gamma: Dict[Pointed, str] = {}
    for u in topology.opens:
        for x in tr.carrier.ordered(u):
            k = _first_index(tr.magma, eta, x, u)
            if k is None:
                raise NoWitnessK(
                    f"no k with N_R(k, {x}) inside an open set",
                    witness=[list(tr.carrier.ordered(u)), x],
                )
            gamma[(u, x)] = k
    return EtaGammaRep(tr.magma, tr.carrier, topology, eta, gamma)


def etagamma_to_fp(eg: EtaGammaRep) -> FibrousPreorder:
    """x <=^i y iff y in eta(i, x), with d^i(x, y) = gamma(eta(i, x), y)."""
    _require_valid(eg)
    rel = set()
    partial_d: Dict[Triple, str] = {}
    for i, x in product(eg.magma, eg.carrier):
        here = eg.eta[(i, x)]
        for y in eg.carrier.ordered(here):
            rel.add((i, x, y))
            partial_d[(i, x, y)] = eg.gamma[(here, y)]
    fp = FibrousPreorder(eg.magma, eg.carrier, frozenset(rel), partial_d)
    require_axioms(fp)
    return fp


def induced_topology_of(
    rep: Representation, exhaustive_bound: Optional[int] = None
) -> FiniteTopology:
    """Topology determined by a representation's neighbourhood sets.

    Raises:
        ValidationFailed: If the representation does not validate
        InconsistentTopology: If an eta/gamma representation's stored
            topology is not the one its eta sets generate
    """
    _require_valid(rep)
    bound = resolve_bound(exhaustive_bound)
    if isinstance(rep, NeighborhoodMap):
        sets = rep.N
    elif isinstance(rep, TernaryRep):
        sets = {(n, x): rep.section(n, x) for n, x in product(rep.magma, rep.carrier)}
    else:
        sets = rep.eta
    per_point = {x: [sets[(n, x)] for n in rep.magma] for x in rep.carrier}
    generated = neighbourhood_topology(rep.carrier, per_point, bound)
    if isinstance(rep, EtaGammaRep) and generated != rep.topology:
        raise InconsistentTopology(
            "stored topology differs from the one eta generates",
            witness=generated.to_dict()["opens"],
        )
    return generated


def full_cycle(fp: FibrousPreorder) -> FibrousPreorder:
    """fp -> nmap -> ternary -> etagamma -> fp."""
    return etagamma_to_fp(ternary_to_etagamma(nmap_to_ternary(fp_to_nmap(fp))))


def convert(rep: Union[FibrousPreorder, Representation], target: str) -> Any:
    """Walk the conversion chain from ``rep`` until reaching ``target``.

    ``target`` is one of "nmap", "ternary", "etagamma" or "fp".
    """
    steps = {
        "fp": ("nmap", fp_to_nmap),
        "nmap": ("ternary", nmap_to_ternary),
        "ternary": ("etagamma", ternary_to_etagamma),
        "etagamma": ("fp", etagamma_to_fp),
    }
    if target not in steps:
        raise InputError(f"unknown conversion target {target!r}")
    current: Any = rep
    kind = "fp" if isinstance(rep, FibrousPreorder) else rep.kind
    # A target equal to the source kind walks the whole cycle
    for _ in range(len(steps)):
        kind, step = steps[kind]
        current = step(current)
        if kind == target:
            break
    logger.debug("Converted to %s", target)
    return current
