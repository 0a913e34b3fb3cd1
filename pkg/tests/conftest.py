import pytest

from finite_radon.enumeration import enumerate_all_complexes
from finite_radon.geometry import GeometrySpace


@pytest.fixture(scope="session")
def census():
    """Full Z_2^3 census, every verdict re-checked by the rank oracle."""
    return enumerate_all_complexes(verify_rank=True)


@pytest.fixture
def z23():
    return GeometrySpace(2, 3)
