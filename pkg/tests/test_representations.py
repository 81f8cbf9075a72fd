"""Tests for fibrous/representations.py - equivalent presentations and conversions."""

from itertools import product

import pytest
from hypothesis import given, settings

from fibrous.constructors import from_preorder
from fibrous.core import FibrousPreorder, induced_topology
from fibrous.errors import InputError, ValidationFailed
from fibrous.magma import capped_nat_mult
from fibrous.representations import (
    EtaGammaRep,
    NeighborhoodMap,
    TernaryRep,
    convert,
    etagamma_to_fp,
    fp_to_nmap,
    full_cycle,
    induced_topology_of,
    nmap_to_ternary,
    ternary_to_etagamma,
    validate_rep,
)
from fibrous.topology import Carrier, FiniteTopology, Preorder

from .factories import fibrous_preorders

AB = Carrier.of(["a", "b"])


def constant_nmap(kind: str) -> NeighborhoodMap:
    """Discrete ({x}) or indiscrete (X) neighbourhoods over capped (N, *) with cap 2."""
    magma = capped_nat_mult(2)
    sets = {
        (n, x): frozenset({x}) if kind == "discrete" else AB.full()
        for n, x in product(magma, AB)
    }
    return NeighborhoodMap(magma, AB, sets)


class TestValidateRep:
    """Tests for validate_rep."""

    def test_discrete_nmap(self) -> None:
        """Test N(n, x) = {x}."""
        assert validate_rep(constant_nmap("discrete")).passed

    def test_indiscrete_nmap(self) -> None:
        """Test N(n, x) = X."""
        assert validate_rep(constant_nmap("indiscrete")).passed

    def test_ternary_missing_reflexive(self, chain_fp: FibrousPreorder) -> None:
        """Test that dropping (1, a, a) is reported under (i)."""
        tr = nmap_to_ternary(fp_to_nmap(chain_fp))
        R = tr.R - {("1", "a", "a")}
        broken = TernaryRep(tr.magma, tr.carrier, R, {t: tr.p[t] for t in R})
        report = validate_rep(broken)
        assert report.first("i") == ("1", "a")

    def test_printed_form_is_weaker(self) -> None:
        """Test a map that only satisfies the pointwise-at-x form of (ii)."""
        magma = capped_nat_mult(1)
        carrier = Carrier.of(["a", "b", "c"])
        nm = NeighborhoodMap(
            magma,
            carrier,
            {
                ("1", "a"): frozenset({"a", "b"}),
                ("1", "b"): frozenset({"b", "c"}),
                ("1", "c"): frozenset({"c"}),
            },
        )
        assert validate_rep(nm, printed_form=True).passed
        report = validate_rep(nm)
        assert report.first("ii") == ("1", "a", "b")

    def test_etagamma_non_open_eta(self) -> None:
        """Test an eta set outside the stored topology."""
        magma = capped_nat_mult(1)
        topology = FiniteTopology.from_subsets(AB, [[], ["a", "b"]])
        eta = {("1", "a"): frozenset({"a"}), ("1", "b"): AB.full()}
        gamma = {(AB.full(), "a"): "1", (AB.full(), "b"): "1"}
        report = validate_rep(EtaGammaRep(magma, AB, topology, eta, gamma))
        assert report.first("open") == ("1", "a")

    def test_nmap_must_be_total(self) -> None:
        """Test that N needs a set for every (n, x)."""
        with pytest.raises(InputError):
            NeighborhoodMap(capped_nat_mult(1), AB, {("1", "a"): frozenset({"a"})})


class TestConversions:
    """Tests for the conversion chain."""

    def test_fp_to_nmap_chain(self, chain_fp: FibrousPreorder) -> None:
        """Test N on the chain."""
        nm = fp_to_nmap(chain_fp)
        assert nm.N[("1", "a")] == frozenset({"a", "b"})
        assert nm.N[("1", "b")] == frozenset({"b"})

    def test_fp_to_nmap_discrete(self, discrete_fp: FibrousPreorder) -> None:
        """Test that the discrete structure gives singletons."""
        nm = fp_to_nmap(discrete_fp)
        assert all(nm.N[("1", x)] == frozenset({x}) for x in discrete_fp.carrier)

    def test_fp_to_nmap_pseudometric(self, pseudometric3_fp: FibrousPreorder) -> None:
        """Test N(2, z) on the three-point pseudometric."""
        assert fp_to_nmap(pseudometric3_fp).N[("2", "z")] == frozenset({"z"})

    def test_nmap_to_ternary_discrete(self) -> None:
        """Test that the first magma element is the witness."""
        tr = nmap_to_ternary(constant_nmap("discrete"))
        assert tr.p[("2", "a", "a")] == "1"

    def test_nmap_to_ternary_chain(self, chain_fp: FibrousPreorder) -> None:
        """Test p(1, a, b) on the chain."""
        tr = nmap_to_ternary(fp_to_nmap(chain_fp))
        assert tr.p[("1", "a", "b")] == "1"

    def test_nmap_to_ternary_indiscrete(self) -> None:
        """Test that the indiscrete map gives the total relation."""
        tr = nmap_to_ternary(constant_nmap("indiscrete"))
        assert len(tr.R) == 2 * 2 * 2

    def test_nmap_to_ternary_rejects_invalid(self) -> None:
        """Test that an invalid map is not converted."""
        nm = NeighborhoodMap(
            capped_nat_mult(1), AB, {("1", "a"): frozenset({"b"}), ("1", "b"): frozenset({"b"})}
        )
        with pytest.raises(ValidationFailed):
            nmap_to_ternary(nm)

    def test_ternary_to_etagamma_discrete(self) -> None:
        """Test that the discrete relation gives the power set."""
        eg = ternary_to_etagamma(nmap_to_ternary(constant_nmap("discrete")))
        assert len(eg.topology.opens) == 4
        assert set(eg.gamma.values()) == {"1"}

    def test_ternary_to_etagamma_chain(self, chain_fp: FibrousPreorder) -> None:
        """Test eta(1, a) and gamma({b}, b) on the chain."""
        eg = ternary_to_etagamma(nmap_to_ternary(fp_to_nmap(chain_fp)))
        assert eg.eta[("1", "a")] == frozenset({"a", "b"})
        assert eg.gamma[(frozenset({"b"}), "b")] == "1"

    def test_ternary_to_etagamma_pseudometric(self, pseudometric3_fp: FibrousPreorder) -> None:
        """Test gamma({x, y}, x) = 2 on the three-point pseudometric."""
        eg = ternary_to_etagamma(nmap_to_ternary(fp_to_nmap(pseudometric3_fp)))
        assert eg.gamma[(frozenset({"x", "y"}), "x")] == "2"

    def test_etagamma_to_fp_discrete(self) -> None:
        """Test that the discrete representation gives only reflexive triples."""
        fp = full_cycle_of(constant_nmap("discrete"))
        assert fp.rel == frozenset((n, x, x) for n in fp.magma for x in fp.carrier)

    def test_etagamma_to_fp_indiscrete(self) -> None:
        """Test that the indiscrete representation gives the total relation."""
        fp = full_cycle_of(constant_nmap("indiscrete"))
        assert len(fp.rel) == 8
        assert set(fp.partial_d.values()) == {"1"}

    def test_etagamma_to_fp_chain(self, chain_fp: FibrousPreorder) -> None:
        """Test that the chain comes back with the same relation."""
        assert full_cycle(chain_fp).rel == chain_fp.rel

    def test_convert_walks_chain(self, chain_fp: FibrousPreorder) -> None:
        """Test convert to each target."""
        assert isinstance(convert(chain_fp, "nmap"), NeighborhoodMap)
        assert isinstance(convert(chain_fp, "ternary"), TernaryRep)
        assert isinstance(convert(chain_fp, "etagamma"), EtaGammaRep)
        assert isinstance(convert(chain_fp, "fp"), FibrousPreorder)
        assert isinstance(convert(fp_to_nmap(chain_fp), "nmap"), NeighborhoodMap)

    def test_convert_unknown_target(self, chain_fp: FibrousPreorder) -> None:
        """Test that unknown targets are rejected."""
        with pytest.raises(InputError):
            convert(chain_fp, "topology")


def full_cycle_of(nm: NeighborhoodMap) -> FibrousPreorder:
    return etagamma_to_fp(ternary_to_etagamma(nmap_to_ternary(nm)))


class TestInducedTopologyOf:
    """Tests for induced_topology_of."""

    def test_discrete_nmap(self) -> None:
        """Test that the discrete map gives the power set."""
        assert len(induced_topology_of(constant_nmap("discrete")).opens) == 4

    def test_chain_ternary(self, chain_fp: FibrousPreorder) -> None:
        """Test the chain as a ternary relation."""
        t = induced_topology_of(nmap_to_ternary(fp_to_nmap(chain_fp)))
        assert t.to_dict()["opens"] == [[], ["b"], ["a", "b"]]

    def test_pseudometric_nmap(self, pseudometric3_fp: FibrousPreorder) -> None:
        """Test the three-point pseudometric as a neighbourhood map."""
        t = induced_topology_of(fp_to_nmap(pseudometric3_fp))
        assert t.to_dict()["opens"] == [[], ["z"], ["x", "y"], ["x", "y", "z"]]

    def test_etagamma_with_extra_open(self, chain_fp: FibrousPreorder) -> None:
        """Test that an open set without an eta set inside it fails (ii)."""
        eg = convert(chain_fp, "etagamma")
        bigger = FiniteTopology.from_subsets(eg.carrier, [[], ["a"], ["b"], ["a", "b"]])
        gamma = dict(eg.gamma)
        gamma[(frozenset({"a"}), "a")] = "1"
        with pytest.raises(ValidationFailed):
            induced_topology_of(EtaGammaRep(eg.magma, eg.carrier, bigger, eg.eta, gamma))

    def test_etagamma_missing_union(self) -> None:
        """Test that a stored family lacking a union of eta sets is flagged."""
        eg = ternary_to_etagamma(nmap_to_ternary(constant_nmap("discrete")))
        smaller = FiniteTopology.from_subsets(AB, [[], ["a"], ["b"]])
        rep = EtaGammaRep(eg.magma, AB, smaller, eg.eta, eg.gamma)
        report = validate_rep(rep)
        assert not report.passed
        assert report.first("topology") == ["missing_carrier", ["a", "b"]]
        assert ["union", [("a",), ("b",), ("a", "b")]] in report.violations["topology"]
        with pytest.raises(ValidationFailed):
            induced_topology_of(rep)


class TestEquivalence:
    """Properties of the full conversion cycle over a corpus."""

    def test_full_cycle_preserves_topology(self, fp_corpus) -> None:
        """Test that fp -> nmap -> ternary -> etagamma -> fp keeps the topology."""
        for fp in fp_corpus:
            assert induced_topology(full_cycle(fp)) == induced_topology(fp)

    def test_intermediates_validate(self, fp_corpus) -> None:
        """Test that every intermediate passes its own validator."""
        for fp in fp_corpus:
            nm = fp_to_nmap(fp)
            tr = nmap_to_ternary(nm)
            eg = ternary_to_etagamma(tr)
            assert validate_rep(nm).passed
            assert validate_rep(tr).passed
            assert validate_rep(eg).passed

    def test_sections_recover_neighbourhoods(self, fp_corpus) -> None:
        """Test that the sections of R are the original N sets."""
        for fp in fp_corpus:
            nm = fp_to_nmap(fp)
            tr = nmap_to_ternary(nm)
            for n, x in product(fp.magma, fp.carrier):
                assert tr.section(n, x) == nm.N[(n, x)]

    def test_topologies_agree_across_kinds(self, fp_corpus) -> None:
        """Test that every representation induces the same topology."""
        for fp in fp_corpus:
            expected = induced_topology(fp)
            assert induced_topology_of(convert(fp, "nmap")) == expected
            assert induced_topology_of(convert(fp, "ternary")) == expected
            assert induced_topology_of(convert(fp, "etagamma")) == expected

    def test_preorder_round_trip(self) -> None:
        """Test the cycle on an indiscrete preorder."""
        fp = from_preorder(Preorder.generated(AB, [("a", "b"), ("b", "a")]))
        assert induced_topology(full_cycle(fp)).opens == (frozenset(), AB.full())

    @settings(max_examples=500, deadline=None)
    @given(fibrous_preorders())
    def test_cycle_on_random_structures(self, fp: FibrousPreorder) -> None:
        """Test the full cycle and every intermediate on arbitrary magmas."""
        nm = fp_to_nmap(fp)
        tr = nmap_to_ternary(nm)
        eg = ternary_to_etagamma(tr)
        for rep in (nm, tr, eg):
            assert validate_rep(rep).passed
        expected = induced_topology(fp)
        assert eg.topology == expected
        assert induced_topology(etagamma_to_fp(eg)) == expected
