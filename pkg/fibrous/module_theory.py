"""Monoids with S_n families and I-modules as cartesian spaces.

A monoid (B, +, 0) with subsets S_n and maps alpha_n gives a fibrous
preorder x <=^n y iff y = x + a for some a in S_n. When an action xi of the
magma on B is available, the whole family is generated by a single subset
S through S_n = {xi(n, a) | a in S}.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .config import resolve_bound
from .core import FibrousPreorder, Triple, check_axioms, require_axioms
from .errors import (
    ConditionFailed,
    FamilyConditionFailed,
    InputError,
    InvalidStructure,
    MissingTopology,
    OutOfDomain,
    UnknownElement,
)
from .magma import UnitaryMagma
from .reports import CheckReport
from .representations import EtaGammaRep, validate_rep
from .topology import (
    Carrier,
    FiniteTopology,
    Subset,
    neighbourhood_topology,
    scan_topology,
    validate_topology,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteMonoidData:
    """A finite monoid (B, +, 0) given by its addition table."""

    elements: Tuple[str, ...]
    add: Mapping[Tuple[str, str], str]
    zero: str

    def __iter__(self):
        return iter(self.elements)

    @property
    def carrier(self) -> Carrier:
        return Carrier(self.elements)

    def plus(self, a: str, b: str) -> str:
        return self.add[(a, b)]

    def scalar(self, n: int, u: str) -> str:
        """n-fold sum of u; 0*u is zero."""
        total = self.zero
        for _ in range(n):
            total = self.add[(total, u)]
        return total

    def translate(self, x: str, subset: Iterable[str]) -> Subset:
        """x + subset."""
        return frozenset(self.add[(x, a)] for a in subset)

    def validate(self) -> None:
        """Raise InvalidStructure on the first failing monoid axiom."""
        members = set(self.elements)
        if len(members) != len(self.elements):
            raise InvalidStructure(f"duplicate monoid labels in {list(self.elements)}")
        if self.zero not in members:
            raise UnknownElement(self.zero, "monoid")
        for a, b in product(self.elements, repeat=2):
            if self.add.get((a, b)) not in members:
                raise InvalidStructure(f"addition not closed at ({a}, {b})", witness=[a, b])
        for a in self.elements:
            if self.add[(self.zero, a)] != a or self.add[(a, self.zero)] != a:
                raise InvalidStructure(f"zero is not neutral for {a}", witness=[a])
        for a, b, c in product(self.elements, repeat=3):
            if self.add[(self.add[(a, b)], c)] != self.add[(a, self.add[(b, c)])]:
                raise InvalidStructure(
                    f"addition not associative at ({a}, {b}, {c})", witness=[a, b, c]
                )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "monoid",
            "elements": list(self.elements),
            "zero": self.zero,
            "add": [[self.add[(a, b)] for b in self.elements] for a in self.elements],
        }


def cyclic_monoid(n: int) -> FiniteMonoidData:
    """(Z_n, +, 0) with labels "0".."n-1"."""
    if n < 1:
        raise OutOfDomain(f"order must be positive, got {n}")
    return FiniteMonoidData(
        tuple(str(v) for v in range(n)),
        {(str(a), str(b)): str((a + b) % n) for a in range(n) for b in range(n)},
        "0",
    )


def saturating_monoid(top: int) -> FiniteMonoidData:
    """({0..top}, min(a + b, top), 0)."""
    if top < 0:
        raise OutOfDomain(f"top must be non-negative, got {top}")
    values = range(top + 1)
    return FiniteMonoidData(
        tuple(str(v) for v in values),
        {(str(a), str(b)): str(min(a + b, top)) for a in values for b in values},
        "0",
    )


# S_n families


@dataclass(frozen=True)
class SnFamily:
    """Subsets S_n of a monoid with maps alpha_n: S_n -> I."""

    monoid: FiniteMonoidData
    magma: UnitaryMagma
    S: Mapping[str, FrozenSet[str]]
    alpha: Mapping[str, Mapping[str, str]]


def check_sn_family(sf: SnFamily) -> CheckReport:
    """Exhaustive check of the three family conditions.

    (i) 0 in S_n; (ii) a, a' in S_n and a' in S_alpha_n(a) imply a + a' in
    S_n; (iii) S_(n*m) inside S_n and S_m.
    """
    sf.monoid.validate()
    for n in sf.magma:
        if n not in sf.S or n not in sf.alpha:
            raise InputError(f"family is not defined at index {n!r}", witness=n)
        for a in sf.S[n]:
            if a not in sf.monoid.elements:
                raise UnknownElement(a, "monoid")
            if a not in sf.alpha[n]:
                raise InputError(f"alpha_{n} is undefined at {a!r}", witness=[n, a])
            sf.magma.index(sf.alpha[n][a])

    report = CheckReport("sn_family", ["i", "ii", "iii"])
    zero, plus = sf.monoid.zero, sf.monoid.plus
    for n in sf.magma:
        if zero not in sf.S[n]:
            report.add("i", (n,))
    for n in sf.magma:
        members = [a for a in sf.monoid.elements if a in sf.S[n]]
        for a, b in product(members, repeat=2):
            if b in sf.S[sf.alpha[n][a]] and plus(a, b) not in sf.S[n]:
                report.add("ii", (n, a, b))
    for n, m in product(sf.magma, repeat=2):
        stray = sf.S[sf.magma.op(n, m)] - (sf.S[n] & sf.S[m])
        if stray:
            first = next(a for a in sf.monoid.elements if a in stray)
            report.add("iii", (n, m, first))
    return report


def fp_from_sn_family(sf: SnFamily) -> FibrousPreorder:
    """x <=^n y iff x + a = y for some a in S_n, with d^n(x, y) = alpha_n(a) * n.

    ``a`` is the first such element in monoid order.

    Raises:
        FamilyConditionFailed: Naming the first failing condition
    """
    report = check_sn_family(sf)
    for condition in report.conditions:
        if report.failed(condition):
            raise FamilyConditionFailed(condition, list(report.first(condition)))

    carrier = sf.monoid.carrier
    rel = set()
    partial_d: Dict[Triple, str] = {}
    for n, x in product(sf.magma, carrier):
        for a in sf.monoid.elements:
            if a not in sf.S[n]:
                continue
            y = sf.monoid.plus(x, a)
            if (n, x, y) not in rel:
                rel.add((n, x, y))
                partial_d[(n, x, y)] = sf.magma.op(sf.alpha[n][a], n)
    fp = FibrousPreorder(sf.magma, carrier, frozenset(rel), partial_d)
    require_axioms(fp)
    return fp


# I-modules


@dataclass(frozen=True)
class ModuleData:
    """A monoid with an action xi of the magma and a distinguished subset S."""

    monoid: FiniteMonoidData
    magma: UnitaryMagma
    xi: Mapping[Tuple[str, str], str]
    S: FrozenSet[str]
    alpha: Optional[Mapping[str, str]] = None
    gamma: Optional[Mapping[Tuple[Subset, str], str]] = None

    def __post_init__(self) -> None:
        members = set(self.monoid.elements)
        for n, x in product(self.magma, self.monoid.elements):
            if self.xi.get((n, x)) not in members:
                raise InputError(f"xi is not a total map into B at ({n}, {x})", witness=[n, x])
        for a in self.S:
            if a not in members:
                raise UnknownElement(a, "monoid")
        if self.alpha is not None:
            for a in self.S:
                if a not in self.alpha:
                    raise InputError(f"alpha is undefined at {a!r}", witness=a)
                self.magma.index(self.alpha[a])

    def scaled(self, n: str) -> Subset:
        """S_n = {xi(n, a) | a in S}."""
        return frozenset(self.xi[(n, a)] for a in self.S)

    def ordered_S(self) -> List[str]:
        return [a for a in self.monoid.elements if a in self.S]


def scaling_action(monoid: FiniteMonoidData, magma: UnitaryMagma) -> Dict[Tuple[str, str], str]:
    """xi(n, x) = n*x by repeated addition, for a numeric magma."""
    if magma.numeric is None:
        raise OutOfDomain("scaling needs a numeric magma")
    return {(n, x): monoid.scalar(magma.value(n), x) for n, x in product(magma, monoid)}


def power_action(
    monoid: FiniteMonoidData, t: Mapping[str, str], magma: UnitaryMagma
) -> Dict[Tuple[str, str], str]:
    """xi(n, x) = t^n(x), for a numeric magma such as capped (N_0, +, 0)."""
    if magma.numeric is None:
        raise OutOfDomain("powers need a numeric magma")
    xi = {}
    for n in magma:
        for x in monoid:
            y = x
            for _ in range(magma.value(n)):
                y = t[y]
            xi[(n, x)] = y
    return xi


def validate_action(md: ModuleData) -> CheckReport:
    """Exhaustive check of the action laws.

    unit: xi(1, x) = x; zero: xi(n, 0) = 0; additive: xi(n, x + y) =
    xi(n, x) + xi(n, y); compose: xi(n*m, x) = xi(n, xi(m, x)) = xi(m, xi(n, x)).
    """
    report = CheckReport("action", ["unit", "zero", "additive", "compose"])
    xi, plus, op = md.xi, md.monoid.plus, md.magma.op
    elements = md.monoid.elements
    for x in elements:
        if xi[(md.magma.unit, x)] != x:
            report.add("unit", (x,))
    for n in md.magma:
        if xi[(n, md.monoid.zero)] != md.monoid.zero:
            report.add("zero", (n,))
    for n, x, y in product(md.magma, elements, elements):
        if xi[(n, plus(x, y))] != plus(xi[(n, x)], xi[(n, y)]):
            report.add("additive", (n, x, y))
    for n, m, x in product(md.magma, md.magma, elements):
        target = xi[(op(n, m), x)]
        if not target == xi[(n, xi[(m, x)])] == xi[(m, xi[(n, x)])]:
            report.add("compose", (n, m, x))
    return report


def _first_absorbing_index(md: ModuleData, x: str, target: Subset) -> Optional[str]:
    """First n with x + S_n inside ``target``."""
    for n in md.magma:
        if md.monoid.translate(x, md.scaled(n)) <= target:
            return n
    return None


def reconstruct_alpha(md: ModuleData) -> Dict[str, str]:
    """alpha(a) = first n with a + S_n inside S, where one exists."""
    alpha = {}
    for a in md.ordered_S():
        n = _first_absorbing_index(md, a, md.S)
        if n is not None:
            alpha[a] = n
    return alpha


def check_module_condition(
    md: ModuleData, kind: str, topology: Optional[FiniteTopology] = None
) -> CheckReport:
    """Check one of the three equivalent module conditions.

    Kind "a" uses the supplied alpha, or reconstructs it when absent. Kind
    "c" searches gamma(U, x) as the first n with x + S_n inside U unless the
    module supplies one.

    Raises:
        MissingTopology: For kind "c" without a topology
    """
    S = md.S
    plus, xi = md.monoid.plus, md.xi
    ordered = md.ordered_S()
    zero_in_S = md.monoid.zero in S

    if kind == "a":
        report = CheckReport("module_a", ["i", "ii"])
        if not zero_in_S:
            report.add("i", (md.monoid.zero,))
        alpha = dict(md.alpha) if md.alpha is not None else reconstruct_alpha(md)
        report.details["alpha"] = {a: alpha[a] for a in ordered if a in alpha}
        for a in ordered:
            if a not in alpha:
                report.add("ii", (a,))
                continue
            for b in ordered:
                if plus(a, xi[(alpha[a], b)]) not in S:
                    report.add("ii", (a, b))
        return report

    if kind == "b":
        report = CheckReport("module_b", ["i", "ii"])
        if not zero_in_S:
            report.add("i", (md.monoid.zero,))
        for y in ordered:
            if _first_absorbing_index(md, y, S) is None:
                report.add("ii", (y,))
        return report

    if kind != "c":
        raise InputError(f"unknown module condition kind {kind!r}")
    if topology is None:
        raise MissingTopology("kind (c) needs a topology")
    carrier = topology.carrier
    report = CheckReport("module_c", ["open", "i", "ii", "iii"])
    if S not in topology:
        report.add("open", (carrier.ordered(S),))
    if not zero_in_S:
        report.add("i", (md.monoid.zero,))
    for x, n in product(md.monoid.elements, md.magma):
        if md.monoid.translate(x, md.scaled(n)) not in topology:
            report.add("ii", (x, n))
    for u in topology.opens:
        for x in carrier.ordered(u):
            if md.gamma is not None and (u, x) in md.gamma:
                n = md.gamma[(u, x)]
                ok = md.monoid.translate(x, md.scaled(n)) <= u
            else:
                ok = _first_absorbing_index(md, x, u) is not None
            if not ok:
                report.add("iii", (carrier.ordered(u), x))
    return report


def module_rule_family(md: ModuleData) -> Dict[str, List[Subset]]:
    """Per point x, the sets x + S_n over n in magma order."""
    return {
        x: [md.monoid.translate(x, md.scaled(n)) for n in md.magma]
        for x in md.monoid.elements
    }


def module_topology(md: ModuleData, exhaustive_bound: Optional[int] = None) -> FiniteTopology:
    """Opens O such that every x in O has some x + S_n inside O.

    Raises:
        ConditionFailed: If xi is not an action or condition (b) does not hold
        InconsistentTopology: If the subset scan and basis closure disagree
    """
    laws = validate_action(md)
    for condition in laws.conditions:
        if laws.failed(condition):
            raise ConditionFailed(condition, list(laws.first(condition)), "xi is not an action")
    report = check_module_condition(md, "b")
    for condition in report.conditions:
        if report.failed(condition):
            raise ConditionFailed(condition, list(report.first(condition)))
    topology = neighbourhood_topology(
        md.monoid.carrier, module_rule_family(md), resolve_bound(exhaustive_bound)
    )
    valid = validate_topology(topology)
    if not valid.passed:
        raise ConditionFailed("topology", valid.to_dict()["violations"])
    return topology


def module_fp(md: ModuleData, alpha: Mapping[str, str]) -> FibrousPreorder:
    """x <=^n y iff y = x + xi(n, a) for some a in S, with d^n(x, y) = alpha(a) * n."""
    carrier = md.monoid.carrier
    rel = set()
    partial_d: Dict[Triple, str] = {}
    for n, x in product(md.magma, carrier):
        for a in md.ordered_S():
            y = md.monoid.plus(x, md.xi[(n, a)])
            if (n, x, y) not in rel:
                rel.add((n, x, y))
                partial_d[(n, x, y)] = md.magma.op(alpha[a], n)
    return FibrousPreorder(md.magma, carrier, frozenset(rel), partial_d)


def check_moreover_clause(md: ModuleData) -> CheckReport:
    """Compare closure of S under xi with the module being cartesian.

    ``closure`` is xi(n, a) in S for all n and a in S. ``cartesian`` is the
    fibrous preorder built from S passing C1-C3 while eta(n, x) = x + S_n
    satisfies the eta/gamma conditions over the rule topology. The report
    passes when kind (a) holds and the two booleans agree.
    """
    report = CheckReport("moreover_clause", ["a", "equivalence"])
    cond_a = check_module_condition(md, "a")
    if not cond_a.passed:
        for witness in cond_a.violations.values():
            for w in witness:
                report.add("a", w)
        return report
    alpha = dict(md.alpha) if md.alpha is not None else reconstruct_alpha(md)

    closure_witness = [
        (n, a) for n in md.magma for a in md.ordered_S() if md.xi[(n, a)] not in md.S
    ]
    closure = not closure_witness

    fp = module_fp(md, alpha)
    axioms = check_axioms(fp)
    carrier = md.monoid.carrier
    family = module_rule_family(md)
    topology = scan_topology(carrier, lambda x: family[x])
    eta = {
        (n, x): md.monoid.translate(x, md.scaled(n))
        for n, x in product(md.magma, carrier)
    }
    gamma = {}
    for u in topology.opens:
        for x in carrier.ordered(u):
            n = _first_absorbing_index(md, x, u)
            if n is not None:
                gamma[(u, x)] = n
    eta_report = validate_rep(EtaGammaRep(md.magma, carrier, topology, eta, gamma))
    cartesian = axioms.passed and eta_report.passed and validate_topology(topology).passed

    report.details.update(
        {
            "closure": closure,
            "cartesian": cartesian,
            "closure_witness": closure_witness[:1],
            "axioms": axioms.to_dict()["violations"],
        }
    )
    if closure != cartesian:
        report.add("equivalence", (closure, cartesian))
    logger.debug("Moreover clause: closure=%s cartesian=%s", closure, cartesian)
    return report


def check_beta_decomposition(eg: EtaGammaRep) -> CheckReport:
    """Check gamma(eta(n, x), y) = gamma(eta(1, x), y) * n for every y in eta(n, x)."""
    valid = validate_rep(eg)
    if not valid.passed:
        raise ConditionFailed("etagamma", valid.to_dict()["violations"])
    report = CheckReport("beta_decomposition", ["decomposition"])
    unit = eg.magma.unit
    for n, x in product(eg.magma, eg.carrier):
        here = eg.eta[(n, x)]
        base = eg.eta[(unit, x)]
        for y in eg.carrier.ordered(here):
            left = eg.gamma.get((here, y))
            right = eg.gamma.get((base, y))
            if left is None or right is None or left != eg.magma.op(right, n):
                report.add("decomposition", (n, x, y))
    return report
