import pytest
from mpmath import mp


@pytest.fixture(autouse=True)
def _restore_mp_precision():
    prec = mp.prec
    yield
    mp.prec = prec
