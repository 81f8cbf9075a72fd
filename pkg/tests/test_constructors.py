"""Tests for fibrous/constructors.py - preorder, pseudometric, group and lax Mal'tsev sources."""

import random
from fractions import Fraction
from itertools import combinations, permutations, product

import pytest

from fibrous.constructors import (
    LaxMaltsevData,
    RationalPseudometric,
    ValueOrder,
    check_lax_axioms,
    check_linking,
    check_monotone,
    cyclic_group,
    from_group_subset,
    from_lax_maltsev,
    from_preorder,
    from_pseudometric,
    maltsev_from_delta,
    maltsev_from_pseudometric,
    maltsev_from_subadditive,
    minimal_cap,
    required_index,
)
from fibrous.core import check_axioms, induced_topology
from fibrous.errors import (
    CapTooSmall,
    ConditionFailed,
    DeltaAxiomFailed,
    InvalidStructure,
    LaxAxiomFailed,
    LinkingFailed,
    NotAPreorder,
    OutOfDomain,
    SubadditivityFailed,
)
from fibrous.magma import capped_nat_mult
from fibrous.topology import Carrier, Preorder

from .factories import line_pseudometric, pseudometric

XY = Carrier.of(["x", "y"])


def two_point_delta(value: int) -> dict:
    return {("x", "x"): 0, ("y", "y"): 0, ("x", "y"): value, ("y", "x"): value}


class TestFromPreorder:
    """Tests for from_preorder and check_monotone."""

    def test_discrete(self, discrete_fp) -> None:
        """Test that the discrete preorder gives reflexive triples only."""
        assert discrete_fp.rel == frozenset(("1", x, x) for x in discrete_fp.carrier)
        assert len(induced_topology(discrete_fp).opens) == 8

    def test_chain(self, chain_fp) -> None:
        """Test the chain topology."""
        assert induced_topology(chain_fp).to_dict()["opens"] == [[], ["b"], ["a", "b"]]

    def test_indiscrete(self) -> None:
        """Test that the total preorder gives the indiscrete topology."""
        fp = from_preorder(Preorder.generated(XY, [("x", "y"), ("y", "x")]))
        assert induced_topology(fp).opens == (frozenset(), XY.full())
        assert set(fp.partial_d.values()) == {"1"}

    def test_rejects_non_preorder(self) -> None:
        """Test that a non-reflexive relation is rejected."""
        with pytest.raises(NotAPreorder):
            from_preorder(Preorder(XY, frozenset({("x", "x")})))

    def test_monotone(self, chain_preorder) -> None:
        """Test monotone and non-monotone self-maps of the chain."""
        assert check_monotone(chain_preorder, chain_preorder, {"a": "a", "b": "b"}).holds
        assert check_monotone(chain_preorder, chain_preorder, {"a": "b", "b": "b"}).holds
        result = check_monotone(chain_preorder, chain_preorder, {"a": "b", "b": "a"})
        assert not result.holds
        assert result.witness == ("a", "b", "1")


class TestPseudometric:
    """Tests for the pseudometric constructor."""

    def test_required_index(self) -> None:
        """Test the least index for 1/2 - 1/3 = 1/6."""
        assert required_index(2, Fraction(1, 3)) == 6
        assert required_index(1, Fraction(0)) == 1

    def test_two_points_at_a_third(self) -> None:
        """Test d = 1/3 with cap 6."""
        m = pseudometric(["x", "y"], {("x", "y"): Fraction(1, 3)})
        fp = from_pseudometric(m, 6)
        assert fp.partial_d[("2", "x", "y")] == "6"
        assert fp.partial_d[("1", "x", "y")] == "2"
        assert ("3", "x", "y") not in fp.rel
        assert check_axioms(fp).passed

    def test_cap_too_small(self) -> None:
        """Test that cap 5 cannot hold the index 6."""
        m = pseudometric(["x", "y"], {("x", "y"): Fraction(1, 3)})
        with pytest.raises(CapTooSmall) as exc:
            from_pseudometric(m, 5)
        assert exc.value.needed == 6
        assert exc.value.witness == ["2", "x", "y", 6]

    def test_minimal_cap(self) -> None:
        """Test the least cap that works."""
        m = pseudometric(["x", "y"], {("x", "y"): Fraction(1, 3)})
        assert minimal_cap(m) == 6

    def test_far_points_unrelated(self) -> None:
        """Test that d >= 1/n leaves (n, x, y) out of rel."""
        m = pseudometric(["x", "y"], {("x", "y"): Fraction(1)})
        fp = from_pseudometric(m, 2)
        assert ("1", "x", "y") not in fp.rel
        assert len(induced_topology(fp).opens) == 4

    def test_three_points(self, pseudometric3_fp) -> None:
        """Test the three-point example at cap 2."""
        opens = induced_topology(pseudometric3_fp).to_dict()["opens"]
        assert opens == [[], ["z"], ["x", "y"], ["x", "y", "z"]]

    def test_rejects_bad_cap(self, pseudometric3) -> None:
        """Test that the cap must be positive."""
        with pytest.raises(OutOfDomain):
            from_pseudometric(pseudometric3, 0)

    def test_triangle_inequality(self) -> None:
        """Test that a non-metric is rejected."""
        m = pseudometric(
            ["x", "y", "z"],
            {("x", "y"): Fraction(1), ("y", "z"): Fraction(1), ("x", "z"): Fraction(3)},
        )
        with pytest.raises(InvalidStructure):
            from_pseudometric(m, 2)

    def test_ball(self, pseudometric3: RationalPseudometric) -> None:
        """Test open balls."""
        assert pseudometric3.ball("x", Fraction(1, 2)) == frozenset({"x", "y"})
        assert pseudometric3.ball("z", Fraction(1)) == frozenset({"x", "y", "z"})

    def test_topology_is_ball_unions(self) -> None:
        """Test that the induced opens are exactly the unions of balls of radius 1/n."""
        rng = random.Random(11)
        for _ in range(10):
            m = line_pseudometric([rng.randint(0, 3) for _ in range(3)], rng.choice([1, 2, 4]))
            cap = minimal_cap(m)
            t = induced_topology(from_pseudometric(m, cap))
            balls = [m.ball(x, Fraction(1, n)) for n in range(1, cap + 1) for x in m.carrier]
            assert all(b in t for b in balls)
            for o in t.opens:
                assert o == frozenset().union(*[b for b in balls if b <= o])


DISTANCES = [Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1)]


def distance_table(size: int, values) -> dict:
    labels = [f"p{k}" for k in range(size)]
    return {(labels[a], labels[b]): v for (a, b), v in zip(combinations(range(size), 2), values)}


def canonical(size: int, values: tuple) -> bool:
    """True when ``values`` is the least relabelling of its distance assignment."""
    pairs = list(combinations(range(size), 2))
    lookup = dict(zip(pairs, values))
    for perm in permutations(range(size)):
        relabelled = tuple(lookup[tuple(sorted((perm[a], perm[b])))] for a, b in pairs)
        if relabelled < values:
            return False
    return True


def small_pseudometrics(size: int):
    """Every pseudometric on ``size`` points with distances in DISTANCES, up to relabelling."""
    for values in product(DISTANCES, repeat=size * (size - 1) // 2):
        if not canonical(size, values):
            continue
        m = pseudometric([f"p{k}" for k in range(size)], distance_table(size, values))
        try:
            m.validate()
        except InvalidStructure:
            continue
        yield m


def assert_ball_unions(m: RationalPseudometric) -> None:
    cap = minimal_cap(m)
    if cap > 1:
        with pytest.raises(CapTooSmall):
            from_pseudometric(m, cap - 1)
    fp = from_pseudometric(m, cap)
    assert check_axioms(fp).passed
    t = induced_topology(fp)
    balls = [m.ball(x, Fraction(1, n)) for n in range(1, cap + 1) for x in m.carrier]
    assert all(b in t for b in balls)
    for o in t.opens:
        assert o == frozenset().union(*[b for b in balls if b <= o])


class TestPseudometricSweep:
    """Ball-union topology over every small pseudometric on a fixed distance set."""

    @pytest.mark.parametrize("size", [1, 2, 3, 4])
    def test_every_small_pseudometric(self, size: int) -> None:
        """Test each pseudometric on up to four points at its minimal cap."""
        found = list(small_pseudometrics(size))
        assert found
        for m in found:
            assert_ball_unions(m)

    def test_every_four_point_shape_extended(self) -> None:
        """Test a fifth point added to every four-point pseudometric above."""
        rng = random.Random(17)
        labels = [f"p{k}" for k in range(5)]
        for m in small_pseudometrics(4):
            # A twin of p0 is always a valid fifth point
            fifth = {(x, "p4"): m.d[("p0", x)] for x in m.carrier}
            for _ in range(20):
                trial = {(x, "p4"): rng.choice(DISTANCES) for x in m.carrier}
                extended = pseudometric(labels, {**m.d, **trial})
                try:
                    extended.validate()
                except InvalidStructure:
                    continue
                fifth = trial
                break
            extended = pseudometric(labels, {**m.d, **fifth})
            extended.validate()
            assert_ball_unions(extended)

    def test_five_point_sample(self) -> None:
        """Test seeded five-point pseudometrics built as shortest-path distances."""
        rng = random.Random(5)
        labels = [f"p{k}" for k in range(5)]
        for _ in range(200):
            d = {(x, y): rng.choice(DISTANCES) for x, y in combinations(labels, 2)}
            d.update({(y, x): v for (x, y), v in list(d.items())})
            d.update({(x, x): Fraction(0) for x in labels})
            for via, x, y in product(labels, repeat=3):
                d[(x, y)] = min(d[(x, y)], d[(x, via)] + d[(via, y)])
            m = RationalPseudometric(Carrier.of(labels), d)
            m.validate()
            assert_ball_unions(m)


class TestGroupSubset:
    """Tests for from_group_subset."""

    def test_trivial_subset_is_discrete(self) -> None:
        """Test Z5 with B = {0} and cap 3."""
        fp = from_group_subset(cyclic_group(5), {"0"}, {"0": "1"}, capped_nat_mult(3))
        assert fp.rel == frozenset((n, x, x) for n in fp.magma for x in fp.carrier)
        assert len(induced_topology(fp).opens) == 2 ** 5

    def test_whole_group_is_indiscrete(self) -> None:
        """Test B = Z4."""
        group = cyclic_group(4)
        fp = from_group_subset(
            group, group.elements, {b: "2" for b in group.elements}, capped_nat_mult(2)
        )
        assert len(fp.rel) == 2 * 4 * 4
        assert induced_topology(fp).opens == (frozenset(), fp.carrier.full())

    def test_divisibility_condition_fails(self) -> None:
        """Test Z5 with B = {0, 1}: 2*3 = 1 lies in B but 3 does not."""
        with pytest.raises(ConditionFailed) as exc:
            from_group_subset(
                cyclic_group(5), {"0", "1"}, {"0": "1", "1": "1"}, capped_nat_mult(2)
            )
        assert exc.value.condition == "iii"
        assert exc.value.witness == ["2", "3"]

    def test_zero_required(self) -> None:
        """Test that 0 must lie in B."""
        with pytest.raises(ConditionFailed) as exc:
            from_group_subset(cyclic_group(3), {"1"}, {"1": "1"}, capped_nat_mult(1))
        assert exc.value.condition == "i"

    def test_subgroup_cosets(self) -> None:
        """Test that B = {0, 2} in Z4 gives the coset topology."""
        fp = from_group_subset(cyclic_group(4), {"0", "2"}, {"0": "1", "2": "1"}, capped_nat_mult(1))
        opens = induced_topology(fp).to_dict()["opens"]
        assert opens == [[], ["0", "2"], ["1", "3"], ["0", "1", "2", "3"]]

    def test_index_formula(self) -> None:
        """Test d^n(x, y) = alpha(n(y - x)) * n."""
        group = cyclic_group(4)
        fp = from_group_subset(group, group.elements, {b: "2" for b in group.elements}, capped_nat_mult(3))
        assert fp.partial_d[("1", "0", "1")] == "2"
        assert fp.partial_d[("2", "0", "1")] == "3"


class TestValueOrder:
    """Tests for ValueOrder."""

    def test_window_settles_at_both_ends(self) -> None:
        """Test rounding onto {-2..2}."""
        window = ValueOrder.window(-2, 2)
        assert window.settle(5) == 2
        assert window.settle(-7) == -2
        assert window.settle(Fraction(1, 2)) == 0
        assert window.bottom == -2

    def test_empty_window(self) -> None:
        """Test that an empty window is rejected."""
        with pytest.raises(OutOfDomain):
            ValueOrder.window(2, 1)

    def test_from_semigroup(self) -> None:
        """Test the order of the min semilattice."""
        values = [0, 1, 2]
        order = ValueOrder.from_semigroup(values, {(a, b): min(a, b) for a in values for b in values})
        assert order.le(0, 2)
        assert not order.le(2, 0)
        assert order.transitivity_witness() is None

    def test_transitivity_witness(self) -> None:
        """Test a non-transitive relation."""
        order = ValueOrder((0, 1, 2), frozenset({(0, 1), (1, 2)}))
        assert order.transitivity_witness() == (0, 1, 2)

    def test_settle_needs_chain(self) -> None:
        """Test that settle is only defined on numeric chains."""
        order = ValueOrder(("a",), frozenset({("a", "a")}))
        with pytest.raises(OutOfDomain):
            order.settle(1)


class TestLaxMaltsev:
    """Tests for lax Mal'tsev operations and the linking map."""

    def test_singleton(self) -> None:
        """Test a one-point B with g constant at the top of a 2-chain."""
        B = Carrier.of(["pt"])
        E = ValueOrder.chain([0, 1])
        magma = capped_nat_mult(2)
        p = {(a, "pt", "pt"): a for a in E.values}
        fp = from_lax_maltsev(LaxMaltsevData(E, B, p, magma, {"1": 1, "2": 1}))
        assert fp.rel == frozenset({("1", "pt", "pt"), ("2", "pt", "pt")})
        assert induced_topology(fp).to_dict()["opens"] == [[], ["pt"]]

    def test_delta_example(self) -> None:
        """Test delta(x, y) = 1 over {-2..2} with g(1) = 1, g(2) = 0."""
        E = ValueOrder.window(-2, 2)
        p = maltsev_from_delta(E, XY, two_point_delta(1))
        fp = from_lax_maltsev(LaxMaltsevData(E, XY, p, capped_nat_mult(2), {"1": 1, "2": 0}))
        assert ("1", "x", "y") in fp.rel
        assert fp.partial_d[("1", "x", "y")] == "2"
        assert ("2", "x", "y") not in fp.rel
        assert len(induced_topology(fp).opens) == 4

    def test_zero_delta_is_indiscrete(self) -> None:
        """Test that delta = 0 relates everything."""
        E = ValueOrder.window(-2, 2)
        p = maltsev_from_delta(E, XY, two_point_delta(0))
        fp = from_lax_maltsev(LaxMaltsevData(E, XY, p, capped_nat_mult(2), {"1": 1, "2": 0}))
        assert len(fp.rel) == 8
        assert induced_topology(fp).opens == (frozenset(), XY.full())

    def test_delta_table(self) -> None:
        """Test p(2, x, y) = 1 and the saturated p(-2, x, y) = -2."""
        p = maltsev_from_delta(ValueOrder.window(-2, 2), XY, two_point_delta(1))
        assert p[(2, "x", "y")] == 1
        assert p[(-2, "x", "y")] == -2
        assert p[(1, "x", "x")] == 1

    def test_delta_triangle(self) -> None:
        """Test that 1 + 1 < 3 is rejected."""
        B = Carrier.of(["x", "y", "z"])
        delta = {(u, u): 0 for u in B}
        for (u, v), value in {("x", "y"): 1, ("y", "z"): 1, ("x", "z"): 3}.items():
            delta[(u, v)] = delta[(v, u)] = value
        with pytest.raises(DeltaAxiomFailed) as exc:
            maltsev_from_delta(ValueOrder.window(-4, 4), B, delta)
        assert exc.value.condition == "triangle"
        assert exc.value.witness == ["x", "y", "z"]

    def test_delta_zero_diagonal(self) -> None:
        """Test that delta(x, x) must vanish."""
        delta = two_point_delta(1)
        delta[("y", "y")] = 1
        with pytest.raises(DeltaAxiomFailed) as exc:
            maltsev_from_delta(ValueOrder.window(-2, 2), XY, delta)
        assert exc.value.condition == "zero"

    def test_subadditive_z2(self) -> None:
        """Test t(0) = 0, t(1) = 1 on Z2."""
        p = maltsev_from_subadditive(cyclic_group(2), {"0": 0, "1": 1}, ValueOrder.window(-2, 2))
        assert p[(1, "0", "1")] == 0
        assert p[(1, "1", "1")] == 1
        assert p[(-2, "0", "1")] == -2

    def test_subadditive_zero_size(self) -> None:
        """Test that t = 0 leaves a unchanged."""
        E = ValueOrder.window(-1, 1)
        p = maltsev_from_subadditive(cyclic_group(3), {"0": 0, "1": 0, "2": 0}, E)
        assert all(p[(a, x, y)] == a for a, x, y in p)

    def test_subadditive_rejects_nonzero_origin(self) -> None:
        """Test that t(0) must be zero."""
        with pytest.raises(SubadditivityFailed) as exc:
            maltsev_from_subadditive(cyclic_group(2), {"0": 1, "1": 1}, ValueOrder.window(-2, 2))
        assert exc.value.condition == "zero"

    def test_subadditive_rejects_superadditive(self) -> None:
        """Test t(1) + t(1) < t(2) on Z3."""
        with pytest.raises(SubadditivityFailed) as exc:
            maltsev_from_subadditive(
                cyclic_group(3), {"0": 0, "1": 1, "2": 3}, ValueOrder.window(-4, 4)
            )
        assert exc.value.condition == "subadditive"
        assert exc.value.witness == ["1", "1"]

    def test_lax_axiom_failure(self) -> None:
        """Test that a <= p(a, x, x) is enforced."""
        B = Carrier.of(["pt"])
        E = ValueOrder.chain([0, 1])
        p = {(a, "pt", "pt"): 0 for a in E.values}
        report = check_lax_axioms(E, B, p)
        assert report.first("1") == (1, "pt")
        with pytest.raises(LaxAxiomFailed) as exc:
            from_lax_maltsev(LaxMaltsevData(E, B, p, capped_nat_mult(1), {"1": 0}))
        assert exc.value.condition == "1"
        assert exc.value.witness == [1, "pt"]

    def test_non_transitive_values(self) -> None:
        """Test that the value relation must be transitive."""
        E = ValueOrder((0, 1, 2), frozenset({(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)}))
        B = Carrier.of(["pt"])
        p = {(a, "pt", "pt"): a for a in E.values}
        with pytest.raises(InvalidStructure):
            from_lax_maltsev(LaxMaltsevData(E, B, p, capped_nat_mult(1), {"1": 0}))

    def test_linking_failure(self) -> None:
        """Test an increasing g."""
        E = ValueOrder.chain([0, 1])
        magma = capped_nat_mult(2)
        g = {"1": 0, "2": 1}
        assert check_linking(magma, E, g).first("primary") == ("1", "1", "2")
        B = Carrier.of(["pt"])
        p = {(a, "pt", "pt"): a for a in E.values}
        with pytest.raises(LinkingFailed) as exc:
            from_lax_maltsev(LaxMaltsevData(E, B, p, magma, g))
        assert exc.value.witness == ["1", "1", "2"]

    def test_alternative_linking(self) -> None:
        """Test the two-sided variant of the linking condition."""
        E = ValueOrder.window(-2, 2)
        magma = capped_nat_mult(2)
        assert check_linking(magma, E, {"1": 1, "2": 0}, "alternative").passed
        assert not check_linking(magma, E, {"1": 0, "2": 1}, "alternative").passed
        p = maltsev_from_delta(E, XY, two_point_delta(1))
        data = LaxMaltsevData(E, XY, p, magma, {"1": 1, "2": 0})
        assert from_lax_maltsev(data, "alternative").rel == from_lax_maltsev(data).rel

    def test_agrees_with_pseudometric(self, pseudometric3) -> None:
        """Test that the lax recasting reproduces the pseudometric structure."""
        direct = from_pseudometric(pseudometric3, 2)
        lax = from_lax_maltsev(maltsev_from_pseudometric(pseudometric3, 2))
        assert lax.rel == direct.rel
        assert dict(lax.partial_d) == dict(direct.partial_d)

    def test_agrees_with_pseudometric_on_lines(self) -> None:
        """Test agreement over seeded line pseudometrics."""
        rng = random.Random(3)
        for _ in range(6):
            m = line_pseudometric([rng.randint(0, 2) for _ in range(3)], rng.choice([1, 2]))
            cap = minimal_cap(m)
            direct = from_pseudometric(m, cap)
            lax = from_lax_maltsev(maltsev_from_pseudometric(m, cap))
            assert lax.rel == direct.rel
            for triple in product(direct.magma, m.carrier, m.carrier):
                assert lax.partial_d.get(triple) == direct.partial_d.get(triple)
