import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from moranlab import MoranSystem, PrimeSchedule, binary_system, build_schedule


@pytest.fixture(scope="session")
def toy_schedule() -> PrimeSchedule:
    # smallest schedule with a level-2 block: q = (7, 11), ell = (1, 2)
    return PrimeSchedule(d=1, q=(7, 11), ell=(1, 2))


@pytest.fixture(scope="session")
def small_schedule() -> PrimeSchedule:
    return build_schedule(d=2, count=4)


@pytest.fixture(scope="session")
def medium_schedule() -> PrimeSchedule:
    return build_schedule(d=2, count=7)


@pytest.fixture(scope="session")
def small_system(small_schedule) -> MoranSystem:
    return binary_system(small_schedule, Fraction(1, 2))


@pytest.fixture(scope="session")
def medium_system(medium_schedule) -> MoranSystem:
    return binary_system(medium_schedule, Fraction(1, 2))
