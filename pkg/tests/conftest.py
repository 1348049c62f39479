import mpmath
import pytest
from mpmath import mp

from k43.cosets import build_tables

BITS = 128


@pytest.fixture(autouse=True)
def working_precision():
    old = mp.prec
    mp.prec = BITS
    yield
    mp.prec = old


@pytest.fixture(scope="session")
def tables():
    return build_tables()


def sample_point():
    """The fixed sample point: decimal coordinates, g forced by the constraint."""
    a = mpmath.mpc("0.31")
    b = mpmath.mpc("0.27", "0.11")
    c = mpmath.mpc("0.44")
    d = mpmath.mpc("0.52", "-0.11")
    e = mpmath.mpc("1.13")
    f = mpmath.mpc("1.21")
    return (a, b, c, d, e, f, 1 + a + b + c + d - e - f)


@pytest.fixture()
def x_star():
    return sample_point()
