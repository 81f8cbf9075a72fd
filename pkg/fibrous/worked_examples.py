"""Worked example families answered with exact rationals.

Two of the families live on infinite carriers (the real semiring with
S = [0, 1) and p = 1/2, and maps into (0, 1] with the square root), so they
are exposed as point queries rather than full topologies. The remaining
ones (capped natural scaling, function spaces, the pseudometric and coset
demos) are finite and computed outright.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Tuple

from .config import get_settings
from .constructors import RationalPseudometric, from_pseudometric, from_lax_maltsev, maltsev_from_pseudometric
from .core import induced_topology
from .errors import BoundExceeded, InputError, NotEndomorphism, OutOfDomain
from .magma import capped_nat_mult
from .module_theory import FiniteMonoidData, SnFamily, cyclic_monoid, fp_from_sn_family, saturating_monoid
from .reports import CheckReport, to_jsonable
from .topology import Carrier

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class RationalInterval:
    """An interval with rational endpoints; a single point needs both ends closed."""

    lower: Fraction
    upper: Fraction
    lower_closed: bool = True
    upper_closed: bool = False

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise OutOfDomain(f"interval bounds out of order: {self.lower} > {self.upper}")
        if self.lower == self.upper and not (self.lower_closed and self.upper_closed):
            raise OutOfDomain(f"empty interval at {self.lower}")

    @classmethod
    def closed(cls, lower: Fraction, upper: Fraction) -> "RationalInterval":
        return cls(Fraction(lower), Fraction(upper), True, True)

    @classmethod
    def right_open(cls, lower: Fraction, upper: Fraction) -> "RationalInterval":
        return cls(Fraction(lower), Fraction(upper), True, False)

    @classmethod
    def left_open(cls, lower: Fraction, upper: Fraction) -> "RationalInterval":
        return cls(Fraction(lower), Fraction(upper), False, True)

    @classmethod
    def open(cls, lower: Fraction, upper: Fraction) -> "RationalInterval":
        return cls(Fraction(lower), Fraction(upper), False, False)

    @classmethod
    def point(cls, value: Fraction) -> "RationalInterval":
        return cls(Fraction(value), Fraction(value), True, True)

    def contains(self, x: Fraction) -> bool:
        above = x > self.lower or (self.lower_closed and x == self.lower)
        below = x < self.upper or (self.upper_closed and x == self.upper)
        return above and below

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lower": str(self.lower),
            "upper": str(self.upper),
            "lower_closed": self.lower_closed,
            "upper_closed": self.upper_closed,
        }

    def __str__(self) -> str:
        left = "[" if self.lower_closed else "("
        right = "]" if self.upper_closed else ")"
        return f"{left}{self.lower}, {self.upper}{right}"


def _touches(current: RationalInterval, nxt: RationalInterval) -> bool:
    if nxt.lower < current.upper:
        return True
    return nxt.lower == current.upper and (current.upper_closed or nxt.lower_closed)


def _merge(current: RationalInterval, nxt: RationalInterval) -> RationalInterval:
    if nxt.upper > current.upper:
        upper, upper_closed = nxt.upper, nxt.upper_closed
    elif nxt.upper == current.upper:
        upper, upper_closed = current.upper, current.upper_closed or nxt.upper_closed
    else:
        upper, upper_closed = current.upper, current.upper_closed
    return RationalInterval(current.lower, upper, current.lower_closed, upper_closed)


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of intervals, kept sorted, disjoint and maximally merged."""

    intervals: Tuple[RationalInterval, ...]

    @classmethod
    def of(cls, intervals: Iterable[RationalInterval]) -> "IntervalSet":
        pending = sorted(intervals, key=lambda i: (i.lower, not i.lower_closed))
        merged: List[RationalInterval] = []
        for interval in pending:
            if merged and _touches(merged[-1], interval):
                merged[-1] = _merge(merged[-1], interval)
            else:
                merged.append(interval)
        return cls(tuple(merged))

    def contains(self, x: Fraction) -> bool:
        return any(i.contains(x) for i in self.intervals)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "interval_set", "intervals": [i.to_dict() for i in self.intervals]}


@dataclass(frozen=True)
class OpennessResult:
    is_open: bool
    witness: Optional[Fraction] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "open": self.is_open,
            "witness": None if self.witness is None else str(self.witness),
        }


def sorgenfrey_neighbourhood(x: Fraction, n: int) -> RationalInterval:
    """The basic set x + 2^-n [0, 1) = [x, x + 2^-n)."""
    if n < 0:
        raise OutOfDomain(f"n must be non-negative, got {n}")
    return RationalInterval.right_open(x, x + HALF ** n)


def sorgenfrey_is_open(s: IntervalSet) -> OpennessResult:
    """Openness in the lower-limit topology.

    After normalization only an included right endpoint can lack a margin
    [x, x + eps) inside the set; degenerate points are the extreme case.
    """
    normal = IntervalSet.of(s.intervals)
    for interval in normal.intervals:
        if interval.upper_closed:
            return OpennessResult(False, interval.upper)
    return OpennessResult(True)


def _require_unit_interval(value: Fraction, name: str) -> Fraction:
    value = Fraction(value)
    if not 0 <= value < 1:
        raise OutOfDomain(f"{name} must lie in [0, 1), got {value}", witness=str(value))
    return value


def semiring_alpha(a: Fraction) -> int:
    """Smallest n >= 0 with a + 2^-n a' in [0, 1) for every a' in [0, 1).

    The supremum of a + 2^-n a' over a' in [0, 1) is a + 2^-n and is never
    attained, so the condition is a + 2^-n <= 1.
    """
    a = _require_unit_interval(a, "a")
    n = 0
    while a + HALF ** n > 1:
        n += 1
    return n


def semiring_condition_holds(a: Fraction, n: int, a_prime: Fraction) -> bool:
    """a + 2^-n a' lies in [0, 1)."""
    value = Fraction(a) + HALF ** n * Fraction(a_prime)
    return 0 <= value < 1


def sqrt_condition_holds(e_u: Fraction, n: int) -> bool:
    """u * (1/2)^(1/2^n) > 1/2 for u = (1/2)^e_u, i.e. e_u + 2^-n < 1."""
    return Fraction(e_u) + HALF ** n < 1


def sqrt_example_alpha(e_u: Fraction) -> int:
    """Smallest n >= 0 with e_u + 2^-n < 1; u <= 1/2 is rejected."""
    e_u = _require_unit_interval(e_u, "e_u")
    n = 0
    while not sqrt_condition_holds(e_u, n):
        n += 1
    return n


def nat_monoid_check(
    monoid: FiniteMonoidData, S: Iterable[str], alpha: Mapping[str, int], cap: int
) -> CheckReport:
    """Check 0 in S, a + alpha(a)a' in S and na in S for n in 1..cap.

    On success the neighbourhoods N(n, x) = {x + na | a in S} are attached.
    """
    subset = frozenset(S)
    ordered = [a for a in monoid.elements if a in subset]
    report = CheckReport("nat_monoid", ["i", "ii", "iii"])
    if monoid.zero not in subset:
        report.add("i", (monoid.zero,))
    for a, b in product(ordered, repeat=2):
        if monoid.plus(a, monoid.scalar(alpha[a], b)) not in subset:
            report.add("ii", (a, b))
    for n, a in product(range(1, cap + 1), ordered):
        if monoid.scalar(n, a) not in subset:
            report.add("iii", (n, a))
    if report.passed:
        report.details["neighbourhoods"] = [
            [n, x, [y for y in monoid.elements if y in {monoid.plus(x, monoid.scalar(n, a)) for a in ordered}]]
            for n, x in product(range(1, cap + 1), monoid.elements)
        ]
    return report


@dataclass(frozen=True)
class FunctionSpaceResult:
    """Membership of f in S with its least exponent, and the shift check."""

    member: bool
    alpha: Optional[int]
    invariant_holds: Optional[bool] = None
    shifted_alpha: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "member": self.member,
            "alpha": self.alpha,
            "invariant_holds": self.invariant_holds,
            "shifted_alpha": self.shifted_alpha,
        }


def _require_endomorphism(monoid: FiniteMonoidData, t: Mapping[str, str]) -> None:
    if t[monoid.zero] != monoid.zero:
        raise NotEndomorphism("t does not fix zero", witness=[monoid.zero])
    for a, b in product(monoid.elements, repeat=2):
        if t[monoid.plus(a, b)] != monoid.plus(t[a], t[b]):
            raise NotEndomorphism(f"t is not additive at ({a}, {b})", witness=[a, b])


def _least_exponent(
    monoid: FiniteMonoidData,
    t: Mapping[str, str],
    P: frozenset,
    f: Mapping[str, str],
    n_max: int,
) -> Tuple[bool, Optional[int]]:
    """Walk t^0, t^1, ... until f(x) + t^n(y) stays in P, the powers cycle, or n_max passes."""
    power = {x: x for x in monoid.elements}
    seen = set()
    n = 0
    while True:
        if all(monoid.plus(f[x], power[y]) in P for x in monoid.elements for y in P):
            return True, n
        key = tuple(power[x] for x in monoid.elements)
        if key in seen:
            return False, None
        seen.add(key)
        if n >= n_max:
            raise BoundExceeded(
                f"membership not established within n <= {n_max}", witness=n_max
            )
        power = {x: t[power[x]] for x in monoid.elements}
        n += 1


def function_space_alpha(
    monoid: FiniteMonoidData,
    t: Mapping[str, str],
    P: Iterable[str],
    f: Mapping[str, str],
    n_max: Optional[int] = None,
) -> FunctionSpaceResult:
    """Decide f in S = {f | exists n: f(x) + t^n(y) in P for all x and y in P}.

    When t maps P into itself, t o f is also checked and its least exponent
    must not exceed alpha(f) + 1.

    Raises:
        NotEndomorphism: If t is not a monoid endomorphism
        OutOfDomain: If 0 is not in P
        BoundExceeded: If neither membership nor a cycle shows up by n_max
    """
    if n_max is None:
        n_max = get_settings().function_space_n_max
    monoid.validate()
    subset = frozenset(P)
    for x in monoid.elements:
        if x not in t or x not in f:
            raise InputError(f"t and f must be total; missing {x!r}", witness=x)
    for label in list(subset) + list(t.values()) + list(f.values()):
        if label not in monoid.elements:
            raise InputError(f"unknown element {label!r}", witness=label)
    _require_endomorphism(monoid, t)
    if monoid.zero not in subset:
        raise OutOfDomain("P must contain zero")

    member, alpha = _least_exponent(monoid, t, subset, f, n_max)
    if not member or not all(t[y] in subset for y in subset):
        return FunctionSpaceResult(member, alpha)

    shifted = {x: t[f[x]] for x in monoid.elements}
    shifted_member, shifted_alpha = _least_exponent(monoid, t, subset, shifted, n_max)
    holds = shifted_member and shifted_alpha is not None and shifted_alpha <= alpha + 1
    logger.debug("alpha(f)=%s alpha(t o f)=%s", alpha, shifted_alpha)
    return FunctionSpaceResult(member, alpha, holds, shifted_alpha)


# Demos


def _demo_semiring() -> Dict[str, Any]:
    samples = [Fraction(0), HALF, Fraction(3, 4)]
    return {
        "S": "[0, 1)",
        "p": "1/2",
        "alpha": [[a, semiring_alpha(a)] for a in samples],
    }


def _demo_sorgenfrey() -> Dict[str, Any]:
    cases = {
        "[0, 1)": IntervalSet.of([RationalInterval.right_open(0, 1)]),
        "(0, 1]": IntervalSet.of([RationalInterval.left_open(0, 1)]),
        "{0}": IntervalSet.of([RationalInterval.point(0)]),
    }
    return {
        "neighbourhood": str(sorgenfrey_neighbourhood(Fraction(0), 1)),
        "checks": [[name, sorgenfrey_is_open(s)] for name, s in cases.items()],
    }


def _demo_sqrt() -> Dict[str, Any]:
    samples = [Fraction(0), HALF, Fraction(7, 8)]
    return {"encoding": "u = (1/2)^e_u", "alpha": [[e, sqrt_example_alpha(e)] for e in samples]}


def _demo_funcspace() -> Dict[str, Any]:
    monoid = saturating_monoid(2)
    identity = {x: x for x in monoid.elements}
    P = ["0", "1"]
    out = []
    for const in ("0", "1"):
        f = {x: const for x in monoid.elements}
        out.append([f"f = {const}", function_space_alpha(monoid, identity, P, f)])
    return {"monoid": monoid, "t": "identity", "P": P, "results": out}


def _demo_metric() -> Dict[str, Any]:
    carrier = Carrier.of(["x", "y", "z"])
    distances = {("x", "y"): Fraction(0), ("x", "z"): HALF, ("y", "z"): HALF}
    d = {(a, a): Fraction(0) for a in carrier}
    for (a, b), value in distances.items():
        d[(a, b)] = d[(b, a)] = value
    metric = RationalPseudometric(carrier, d)
    fp = from_pseudometric(metric, 2)
    lax = from_lax_maltsev(maltsev_from_pseudometric(metric, 2))
    return {
        "pseudometric": metric,
        "cap": 2,
        "topology": induced_topology(fp),
        "lax_maltsev_agrees": lax.rel == fp.rel,
    }


def _demo_coset() -> Dict[str, Any]:
    monoid = cyclic_monoid(4)
    magma = capped_nat_mult(2)
    family = SnFamily(
        monoid,
        magma,
        {"1": frozenset(monoid.elements), "2": frozenset({"0", "2"})},
        {"1": {a: "1" for a in monoid.elements}, "2": {"0": "2", "2": "2"}},
    )
    return {"S_1": "Z4", "S_2": ["0", "2"], "topology": induced_topology(fp_from_sn_family(family))}


DEMOS: Dict[str, Callable[[], Dict[str, Any]]] = {
    "semiring": _demo_semiring,
    "sorgenfrey": _demo_sorgenfrey,
    "sqrt": _demo_sqrt,
    "funcspace": _demo_funcspace,
    "metric": _demo_metric,
    "coset": _demo_coset,
}


def run_demo(name: str) -> Dict[str, Any]:
    """Run a named demo and return its JSON-ready output."""
    if name not in DEMOS:
        raise InputError(f"unknown demo {name!r}; choose from {sorted(DEMOS)}")
    return {"demo": name, **to_jsonable(DEMOS[name]())}
