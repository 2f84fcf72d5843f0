import pytest

from fibdecide import arith


@pytest.fixture(scope="session")
def catalog():
    """Certified builtin catalog with a moderate verification bound."""
    return arith.build_catalog(phin_verify=1 << 16)
