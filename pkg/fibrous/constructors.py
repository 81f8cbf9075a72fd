"""Constructors turning familiar structures into fibrous preorders.

Sources covered: preorders (trivial magma), rational pseudometrics over a
capped (N, *, 1), groups with a distinguished subset, and lax-left-associative
Mal'tsev operations paired with a linking map. Every constructor re-checks
C1-C3 on its output before returning it.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Any, Dict, FrozenSet, Hashable, Iterable, Mapping, Optional, Tuple

from .core import (
    FibrousPreorder,
    MorphismResult,
    Triple,
    check_morphism,
    require_axioms,
    uniform_family,
)
from .errors import (
    CapTooSmall,
    ConditionFailed,
    DeltaAxiomFailed,
    InputError,
    InvalidStructure,
    LaxAxiomFailed,
    LinkingFailed,
    OutOfDomain,
    SubadditivityFailed,
    UnknownElement,
)
from .magma import UnitaryMagma, capped_nat_mult, make_table_magma
from .reports import CheckReport
from .topology import Carrier, Preorder, validate_preorder

logger = logging.getLogger(__name__)

Value = Hashable


def trivial_magma() -> UnitaryMagma:
    return make_table_magma(["1"], "1", [["1"]])


def from_preorder(p: Preorder) -> FibrousPreorder:
    """Preorder as a fibrous preorder over the one-element magma.

    Raises:
        NotAPreorder: If ``p`` is not reflexive and transitive
    """
    validate_preorder(p)
    rel = frozenset(("1", x, y) for x, y in p.leq)
    fp = FibrousPreorder(trivial_magma(), p.carrier, rel, {t: "1" for t in rel})
    require_axioms(fp)
    return fp


def check_monotone(src: Preorder, dst: Preorder, f: Mapping[str, str]) -> MorphismResult:
    """Monotonicity of ``f``, checked as the morphism condition over the trivial magma."""
    left, right = from_preorder(src), from_preorder(dst)
    g = uniform_family(left.magma, left.carrier, {"1": "1"})
    return check_morphism(left, right, f, g)


# Pseudometrics


@dataclass(frozen=True)
class RationalPseudometric:
    """Exact rational distances on a finite carrier; zero off-diagonal entries are allowed."""

    carrier: Carrier
    d: Mapping[Tuple[str, str], Fraction]

    def distance(self, x: str, y: str) -> Fraction:
        return self.d[(x, y)]

    def validate(self) -> None:
        """Raise InvalidStructure on the first failing pseudometric axiom."""
        for x, y in product(self.carrier, repeat=2):
            if (x, y) not in self.d:
                raise InvalidStructure(f"distance d({x}, {y}) is missing", witness=[x, y])
        for x in self.carrier:
            if self.d[(x, x)] != 0:
                raise InvalidStructure(f"d({x}, {x}) is not zero", witness=[x])
        for x, y in product(self.carrier, repeat=2):
            if self.d[(x, y)] < 0:
                raise InvalidStructure(f"d({x}, {y}) is negative", witness=[x, y])
            if self.d[(x, y)] != self.d[(y, x)]:
                raise InvalidStructure(f"d is not symmetric at ({x}, {y})", witness=[x, y])
        for x, y, z in product(self.carrier, repeat=3):
            if self.d[(x, z)] > self.d[(x, y)] + self.d[(y, z)]:
                raise InvalidStructure(
                    f"triangle inequality fails at ({x}, {y}, {z})", witness=[x, y, z]
                )

    def ball(self, x: str, radius: Fraction) -> FrozenSet[str]:
        return frozenset(y for y in self.carrier if self.d[(x, y)] < radius)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "pseudometric",
            "carrier": list(self.carrier.elements),
            "d": [[str(self.d[(x, y)]) for y in self.carrier] for x in self.carrier],
        }


def required_index(n: int, distance: Fraction) -> int:
    """Smallest k with 1/k <= 1/n - distance; assumes distance < 1/n."""
    return math.ceil(1 / (Fraction(1, n) - distance))


def minimal_cap(m: RationalPseudometric) -> int:
    """Smallest cap for which ``from_pseudometric`` succeeds."""
    m.validate()
    cap = 1
    while True:
        needed = [
            required_index(n, m.d[(x, y)])
            for n in range(1, cap + 1)
            for x, y in product(m.carrier, repeat=2)
            if m.d[(x, y)] < Fraction(1, n)
        ]
        if max(needed) <= cap:
            return cap
        cap += 1


def from_pseudometric(m: RationalPseudometric, cap: int) -> FibrousPreorder:
    """x <=^n y iff d(x, y) < 1/n, with d^n(x, y) the least k satisfying 1/k <= 1/n - d(x, y).

    Raises:
        InvalidStructure: If ``m`` is not a pseudometric
        CapTooSmall: If some required index exceeds ``cap``
    """
    if cap < 1:
        raise OutOfDomain(f"cap must be at least 1, got {cap}")
    m.validate()
    magma = capped_nat_mult(cap)
    rel = set()
    partial_d: Dict[Triple, str] = {}
    for n in range(1, cap + 1):
        for x, y in product(m.carrier, repeat=2):
            distance = m.d[(x, y)]
            if distance >= Fraction(1, n):
                continue
            k = required_index(n, distance)
            if k > cap:
                raise CapTooSmall(str(n), x, y, k, cap)
            rel.add((str(n), x, y))
            partial_d[(str(n), x, y)] = magma.label_of(k)
    fp = FibrousPreorder(magma, m.carrier, frozenset(rel), partial_d)
    require_axioms(fp)
    logger.debug("Pseudometric structure has %d related triples", len(rel))
    return fp


# Groups with a distinguished subset


@dataclass(frozen=True)
class FiniteGroupData:
    """Finite additive group given by its tables."""

    elements: Tuple[str, ...]
    add: Mapping[Tuple[str, str], str]
    zero: str
    neg: Mapping[str, str]

    def plus(self, a: str, b: str) -> str:
        return self.add[(a, b)]

    def minus(self, y: str, x: str) -> str:
        """y - x."""
        return self.add[(y, self.neg[x])]

    def scalar(self, n: int, u: str) -> str:
        """n*u as n-fold addition of u; 0*u is zero."""
        total = self.zero
        for _ in range(n):
            total = self.add[(total, u)]
        return total

    def validate(self) -> None:
        """Raise InvalidStructure on the first failing group axiom."""
        members = set(self.elements)
        if self.zero not in members:
            raise UnknownElement(self.zero, "group")
        for a, b in product(self.elements, repeat=2):
            if self.add.get((a, b)) not in members:
                raise InvalidStructure(f"addition not closed at ({a}, {b})", witness=[a, b])
        for a in self.elements:
            if self.add[(self.zero, a)] != a or self.add[(a, self.zero)] != a:
                raise InvalidStructure(f"zero is not neutral for {a}", witness=[a])
            if self.neg.get(a) not in members or self.add[(a, self.neg[a])] != self.zero:
                raise InvalidStructure(f"{a} has no inverse", witness=[a])
        for a, b, c in product(self.elements, repeat=3):
            if self.add[(self.add[(a, b)], c)] != self.add[(a, self.add[(b, c)])]:
                raise InvalidStructure(
                    f"addition not associative at ({a}, {b}, {c})", witness=[a, b, c]
                )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "elements": list(self.elements),
            "zero": self.zero,
            "add": [[self.add[(a, b)] for b in self.elements] for a in self.elements],
            "neg": [self.neg[a] for a in self.elements],
        }


def cyclic_group(n: int) -> FiniteGroupData:
    """Z_n with labels "0".."n-1"."""
    if n < 1:
        raise OutOfDomain(f"group order must be positive, got {n}")
    labels = tuple(str(v) for v in range(n))
    return FiniteGroupData(
        elements=labels,
        add={(str(a), str(b)): str((a + b) % n) for a in range(n) for b in range(n)},
        zero="0",
        neg={str(a): str(-a % n) for a in range(n)},
    )


def from_group_subset(
    group: FiniteGroupData,
    B: Iterable[str],
    alpha: Mapping[str, str],
    magma: UnitaryMagma,
) -> FibrousPreorder:
    """x <=^n y iff n(y - x) lies in B, with d^n(x, y) = alpha(n(y - x)) * n.

    Conditions are checked in the order (i) 0 in B, (iii) nu in B implies
    u in B, (ii) alpha(x)u in B implies u + x in B, since (iii) does not
    involve ``alpha``. Scalars range over the magma's numeric elements.

    Raises:
        ConditionFailed: Naming the first failing condition and its witness
        AxiomsFailed: If saturation in the magma breaks C1-C3
    """
    if magma.numeric is None:
        raise OutOfDomain("the magma must carry a numeric interpretation")
    group.validate()
    subset = frozenset(B)
    for b in subset:
        if b not in group.elements:
            raise UnknownElement(b, "group")
    for b in group.elements:
        if b in subset:
            if b not in alpha:
                raise InputError(f"alpha is undefined at {b!r}", witness=b)
            magma.index(alpha[b])

    if group.zero not in subset:
        raise ConditionFailed("i", [group.zero], "zero is not in B")
    for n, u in product(magma, group.elements):
        if group.scalar(magma.value(n), u) in subset and u not in subset:
            raise ConditionFailed("iii", [n, u], f"{n}*{u} is in B but {u} is not")
    for x, u in product(group.elements, group.elements):
        if x not in subset:
            continue
        scaled = group.scalar(magma.value(alpha[x]), u)
        if scaled in subset and group.plus(u, x) not in subset:
            raise ConditionFailed(
                "ii", [x, u], f"alpha({x})*{u} is in B but {u}+{x} is not"
            )

    carrier = Carrier.of(group.elements)
    rel = set()
    partial_d: Dict[Triple, str] = {}
    for n, x, y in product(magma, carrier, carrier):
        w = group.scalar(magma.value(n), group.minus(y, x))
        if w in subset:
            rel.add((n, x, y))
            partial_d[(n, x, y)] = magma.op(alpha[w], n)
    fp = FibrousPreorder(magma, carrier, frozenset(rel), partial_d)
    require_axioms(fp)
    return fp


# Lax Mal'tsev operations


@dataclass(frozen=True)
class ValueOrder:
    """A finite value set with a transitive relation <=E.

    Reflexivity is not required. Chains built by ``chain`` also support
    ``settle``, which rounds an arbitrary number down onto the chain.
    """

    values: Tuple[Value, ...]
    leq: FrozenSet[Tuple[Value, Value]]
    numeric: bool = False

    @classmethod
    def chain(cls, values: Iterable[Value]) -> "ValueOrder":
        ordered = tuple(sorted(set(values)))
        return cls(
            ordered,
            frozenset((a, b) for a, b in product(ordered, repeat=2) if a <= b),
            numeric=True,
        )

    @classmethod
    def window(cls, low: int, high: int) -> "ValueOrder":
        """The integer window {low..high}; ``settle`` saturates at both ends."""
        if low > high:
            raise OutOfDomain(f"empty window [{low}, {high}]")
        return cls.chain(range(low, high + 1))

    @classmethod
    def from_semigroup(
        cls, elements: Iterable[Value], op: Mapping[Tuple[Value, Value], Value]
    ) -> "ValueOrder":
        """a <= b iff a*b = a."""
        values = tuple(elements)
        return cls(values, frozenset((a, b) for a, b in product(values, repeat=2) if op[(a, b)] == a))

    def le(self, a: Value, b: Value) -> bool:
        return (a, b) in self.leq

    def __contains__(self, value: object) -> bool:
        return value in self.values

    @property
    def bottom(self) -> Value:
        if not self.numeric:
            raise OutOfDomain("only numeric chains have a bottom")
        return self.values[0]

    def settle(self, v: Any) -> Value:
        """Largest element <= v, or the bottom when there is none."""
        if not self.numeric:
            raise OutOfDomain("settle needs a numeric chain")
        below = [e for e in self.values if e <= v]
        return below[-1] if below else self.values[0]

    def transitivity_witness(self) -> Optional[Tuple[Value, Value, Value]]:
        for a, b in self.leq:
            for c in self.values:
                if (b, c) in self.leq and (a, c) not in self.leq:
                    return (a, b, c)
        return None


@dataclass(frozen=True)
class LaxMaltsevData:
    """A lax Mal'tsev operation p: E x B x B -> E together with a map g: I -> E."""

    E: ValueOrder
    B: Carrier
    p: Mapping[Tuple[Value, str, str], Value]
    magma: UnitaryMagma
    g: Mapping[str, Value]


def check_lax_axioms(E: ValueOrder, B: Carrier, p: Mapping[Tuple[Value, str, str], Value]) -> CheckReport:
    """Exhaustive check of the three lax axioms.

    1: a <= p(a, x, x); 2: p(p(a, x, y), y, z) <= p(a, x, z);
    3: a <= b implies p(a, x, y) <= p(b, x, y).
    """
    report = CheckReport("lax_maltsev", ["1", "2", "3"])
    for a, x, y in product(E.values, B, B):
        if (a, x, y) not in p or p[(a, x, y)] not in E:
            raise InputError(f"p is not a total map into E at ({a}, {x}, {y})")
    for a, x in product(E.values, B):
        if not E.le(a, p[(a, x, x)]):
            report.add("1", (a, x))
    for a, x, y, z in product(E.values, B, B, B):
        if not E.le(p[(p[(a, x, y)], y, z)], p[(a, x, z)]):
            report.add("2", (a, x, y, z))
    for a, b, x, y in product(E.values, E.values, B, B):
        if E.le(a, b) and not E.le(p[(a, x, y)], p[(b, x, y)]):
            report.add("3", (a, b, x, y))
    return report


def check_linking(
    magma: UnitaryMagma, E: ValueOrder, g: Mapping[str, Value], variant: str = "primary"
) -> CheckReport:
    """Check the linking condition on g.

    ``primary``: g(n*(k*m)) <= g(n*m) for all n, m, k.
    ``alternative``: g(n*m) <= g(n) and g(n*m) <= g(m) for all n, m.
    """
    for n in magma:
        if n not in g or g[n] not in E:
            raise InputError(f"g is not a map into E at {n!r}", witness=n)
    report = CheckReport("linking", [variant])
    op = magma.op
    if variant == "primary":
        for n, m, k in product(magma, repeat=3):
            if not E.le(g[op(n, op(k, m))], g[op(n, m)]):
                report.add(variant, (n, m, k))
    elif variant == "alternative":
        for n, m in product(magma, repeat=2):
            if not (E.le(g[op(n, m)], g[n]) and E.le(g[op(n, m)], g[m])):
                report.add(variant, (n, m))
    else:
        raise InputError(f"unknown linking variant {variant!r}")
    return report


def _require_lax(E: ValueOrder, B: Carrier, p: Mapping[Tuple[Value, str, str], Value]) -> None:
    witness = E.transitivity_witness()
    if witness is not None:
        raise InvalidStructure("value relation is not transitive", witness=list(witness))
    report = check_lax_axioms(E, B, p)
    for axiom in report.conditions:
        if report.failed(axiom):
            raise LaxAxiomFailed(axiom, list(report.first(axiom)))


def from_lax_maltsev(data: LaxMaltsevData, linking: str = "primary") -> FibrousPreorder:
    """x <=^n y iff g(m) <=E p(g(n), x, y) for some m; d^n(x, y) is the first such m.

    Raises:
        LaxAxiomFailed: If p is not lax-left-associative
        LinkingFailed: If g fails the chosen linking condition
    """
    _require_lax(data.E, data.B, data.p)
    linked = check_linking(data.magma, data.E, data.g, linking)
    if not linked.passed:
        raise LinkingFailed(linking, list(linked.first(linking)))

    rel = set()
    partial_d: Dict[Triple, str] = {}
    for n, x, y in product(data.magma, data.B, data.B):
        target = data.p[(data.g[n], x, y)]
        for m in data.magma:
            if data.E.le(data.g[m], target):
                rel.add((n, x, y))
                partial_d[(n, x, y)] = m
                break
    fp = FibrousPreorder(data.magma, data.B, frozenset(rel), partial_d)
    require_axioms(fp)
    return fp


def maltsev_from_delta(
    E: ValueOrder, B: Carrier, delta: Mapping[Tuple[str, str], Any]
) -> Dict[Tuple[Value, str, str], Value]:
    """p(a, x, y) = a - delta(x, y), settled onto the chain E.

    Raises:
        DeltaAxiomFailed: If delta(x, x) != 0 or the triangle law fails
        LaxAxiomFailed: If settling onto E breaks a lax axiom
    """
    for x in B:
        if delta[(x, x)] != 0:
            raise DeltaAxiomFailed("zero", [x], f"delta({x}, {x}) = {delta[(x, x)]}")
    for x, y, z in product(B, repeat=3):
        if delta[(x, y)] + delta[(y, z)] < delta[(x, z)]:
            raise DeltaAxiomFailed("triangle", [x, y, z])
    p = {(a, x, y): E.settle(a - delta[(x, y)]) for a, x, y in product(E.values, B, B)}
    _require_lax(E, B, p)
    return p


def maltsev_from_subadditive(
    group: FiniteGroupData, t: Mapping[str, Any], E: ValueOrder
) -> Dict[Tuple[Value, str, str], Value]:
    """p(a, x, y) = a - t(y - x), settled onto the chain E.

    Raises:
        SubadditivityFailed: If t(0) != 0 or t(u) + t(v) < t(u + v)
        LaxAxiomFailed: If settling onto E breaks a lax axiom
    """
    group.validate()
    if t[group.zero] != 0:
        raise SubadditivityFailed("zero", [group.zero], f"t(0) = {t[group.zero]}")
    for u, v in product(group.elements, repeat=2):
        if t[u] + t[v] < t[group.plus(u, v)]:
            raise SubadditivityFailed("subadditive", [u, v])
    B = Carrier.of(group.elements)
    p = {
        (a, x, y): E.settle(a - t[group.minus(y, x)])
        for a, x, y in product(E.values, B, B)
    }
    _require_lax(E, B, p)
    return p


def maltsev_from_pseudometric(m: RationalPseudometric, cap: int) -> LaxMaltsevData:
    """The pseudometric structure recast as p(a, x, y) = a - d(x, y) with g(n) = 1/n.

    E holds every 1/n, every 1/n - d(x, y) and one value below them all, so
    ``from_lax_maltsev`` agrees with ``from_pseudometric`` whenever the
    latter does not raise CapTooSmall.
    """
    m.validate()
    magma = capped_nat_mult(cap)
    tops = [Fraction(1, n) for n in range(1, cap + 1)]
    shifted = [a - m.d[(x, y)] for a in tops for x, y in product(m.carrier, repeat=2)]
    values = set(tops) | set(shifted)
    values.add(min(values) - 1)
    E = ValueOrder.chain(values)
    p = {
        (a, x, y): E.settle(a - m.d[(x, y)])
        for a, x, y in product(E.values, m.carrier, m.carrier)
    }
    g = {label: Fraction(1, magma.value(label)) for label in magma}
    return LaxMaltsevData(E, m.carrier, p, magma, g)
