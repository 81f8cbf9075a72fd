"""Pytest configuration and fixtures."""

import random
from fractions import Fraction
from pathlib import Path
from typing import Callable, Generator, List

import pytest

from fibrous.config import get_settings
from fibrous.constructors import (
    RationalPseudometric,
    cyclic_group,
    from_group_subset,
    from_preorder,
    from_pseudometric,
    minimal_cap,
)
from fibrous.core import FibrousPreorder
from fibrous.magma import capped_nat_mult
from fibrous.module_theory import SnFamily, cyclic_monoid
from fibrous.topology import Carrier, Preorder

from .factories import line_pseudometric, pseudometric, random_preorder

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(autouse=True)
def clear_settings_cache() -> Generator[None, None, None]:
    """Reset cached settings between tests."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def chain_preorder() -> Preorder:
    """a <= b on {a, b}."""
    return Preorder.generated(Carrier.of(["a", "b"]), [("a", "b")])


@pytest.fixture
def chain_fp(chain_preorder: Preorder) -> FibrousPreorder:
    return from_preorder(chain_preorder)


@pytest.fixture
def discrete_fp() -> FibrousPreorder:
    carrier = Carrier.of(["a", "b", "c"])
    return from_preorder(Preorder(carrier, frozenset((x, x) for x in carrier)))


@pytest.fixture
def pseudometric3() -> RationalPseudometric:
    """d(x, y) = 0 and d(x, z) = d(y, z) = 1/2."""
    return pseudometric(
        ["x", "y", "z"],
        {("x", "y"): Fraction(0), ("x", "z"): Fraction(1, 2), ("y", "z"): Fraction(1, 2)},
    )


@pytest.fixture
def pseudometric3_fp(pseudometric3: RationalPseudometric) -> FibrousPreorder:
    return from_pseudometric(pseudometric3, 2)


@pytest.fixture
def z4_coset_family() -> SnFamily:
    """Z4 over capped (N, *) with S_1 = Z4 and S_2 = {0, 2}."""
    monoid = cyclic_monoid(4)
    return SnFamily(
        monoid,
        capped_nat_mult(2),
        {"1": frozenset(monoid.elements), "2": frozenset({"0", "2"})},
        {"1": {a: "1" for a in monoid.elements}, "2": {"0": "2", "2": "2"}},
    )


@pytest.fixture
def fp_corpus() -> List[FibrousPreorder]:
    """Seeded corpus of valid fibrous preorders from every finite constructor."""
    rng = random.Random(20240601)
    corpus: List[FibrousPreorder] = []
    for size in (1, 2, 3, 4, 5):
        for _ in range(3):
            corpus.append(from_preorder(random_preorder(rng, size)))
    for _ in range(8):
        coordinates = [rng.randint(0, 3) for _ in range(rng.randint(2, 4))]
        m = line_pseudometric(coordinates, rng.choice([1, 2, 3]))
        corpus.append(from_pseudometric(m, minimal_cap(m)))
    for order, members in ((4, {"0", "2"}), (6, {"0", "3"}), (6, {"0", "2", "4"}), (5, {"0"})):
        group = cyclic_group(order)
        corpus.append(
            from_group_subset(group, members, {b: "1" for b in members}, capped_nat_mult(1))
        )
    return corpus


@pytest.fixture
def write_instance(tmp_path: Path) -> Callable[[str, str], Path]:
    """Write JSON text to a temporary instance file."""

    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
