"""Complex scalar special functions at configurable binary precision.

Thin, contract-enforcing wrappers around mpmath (gamma, 1/gamma,
sin(pi z)) plus a direct-product Pochhammer that also works over exact
rationals.  Precision is a runtime parameter in bits; every numeric
module works inside `precision(bits)` blocks, default 128.

mpmath carries bignum exponents, so sin(pi z) stays representable for
very large |Im z| (the spec's working range |Im z| <= 300 is nowhere
near a limit); non-finite intermediates are surfaced via NumericError
instead of propagating silently.
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction

import mpmath
from mpmath import mp

from .errors import NumericError, PoleError

DEFAULT_PRECISION = 128


@contextmanager
def precision(bits: int = DEFAULT_PRECISION):
    """Context manager setting the working precision in bits."""
    with mp.workprec(bits):
        yield mp


def to_mpc(z) -> mpmath.mpc:
    if isinstance(z, Fraction):
        return mpmath.mpc(mpmath.mpf(z.numerator) / z.denominator)
    return mpmath.mpc(z)


def is_nonpositive_integer(z, tol=None) -> bool:
    """True when z is within tol of {0, -1, -2, ...} (default: exact)."""
    z = to_mpc(z)
    if tol is None:
        return z.imag == 0 and z.real == mpmath.floor(z.real) and z.real <= 0
    n = mpmath.floor(z.real + mpmath.mpf("0.5"))
    return n <= 0 and abs(z - n) <= tol


def int_distance(z) -> mpmath.mpf:
    """Distance from z to the nearest integer (complex modulus)."""
    z = to_mpc(z)
    return abs(z - mpmath.floor(z.real + mpmath.mpf("0.5")))


def require_finite(z, what: str = "value"):
    if not mpmath.isfinite(z):
        raise NumericError(f"non-finite {what}: {z}")
    return z


def gamma(z) -> mpmath.mpc:
    """Gamma(z); raises PoleError at the nonpositive integers."""
    z = to_mpc(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"gamma pole at {z}")
    return require_finite(mpmath.gamma(z), "gamma")


def recip_gamma(z) -> mpmath.mpc:
    """1/Gamma(z), entire; exactly zero at the nonpositive integers."""
    z = to_mpc(z)
    if is_nonpositive_integer(z):
        return mpmath.mpc(0)
    return require_finite(mpmath.rgamma(z), "1/gamma")


def sin_pi(z) -> mpmath.mpc:
    """sin(pi z), computed without forming pi*z (stable for large Im z)."""
    return require_finite(mpmath.sinpi(to_mpc(z)), "sin(pi z)")


def pochhammer(a, k: int):
    """Rising factorial (a)_k = a (a+1) ... (a+k-1); (a)_0 = 1.

    Direct product, so it works unchanged for Fraction, mpf, or mpc
    arguments (exact over Fraction) and vanishes for a = -n once k > n.
    """
    if k < 0:
        raise ValueError("k must be a nonnegative integer")
    if isinstance(a, Fraction) or isinstance(a, int):
        out = Fraction(1)
        a = Fraction(a)
    else:
        out = mpmath.mpc(1)
        a = to_mpc(a)
    for i in range(k):
        out *= a + i
    return out
