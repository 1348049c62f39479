import random
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from k43.errors import PoleError
from k43.sf import gamma, pochhammer, precision, recip_gamma, sin_pi

from .oracles import spouge_gamma

TOL25 = mpmath.mpf("1e-25")


def _random_z(rng, box=20.0):
    while True:
        z = mpmath.mpc(rng.uniform(-box, box), rng.uniform(-box, box))
        # stay away from the pole line
        if abs(z.imag) > 0.05 or z.real > 0.05:
            return z


def test_gamma_factorial():
    assert abs(gamma(5) - 24) < TOL25


def test_gamma_half():
    assert abs(gamma(mpmath.mpf(1) / 2) - mpmath.sqrt(mpmath.pi)) < TOL25


def test_gamma_against_independent_oracle():
    with precision(256):
        ref = spouge_gamma(mpmath.mpc("0.5", "1.0"))
    got = gamma(mpmath.mpc("0.5", "1.0"))
    assert abs(got - ref) / abs(ref) < mpmath.mpf("1e-35")


def test_gamma_oracle_random_points():
    rng = random.Random(42)
    for _ in range(25):
        z = _random_z(rng, box=8.0)
        with precision(256):
            ref = spouge_gamma(z)
        got = gamma(z)
        assert abs(got - ref) / abs(ref) < mpmath.mpf("1e-30"), z


def test_gamma_pole_error():
    for z in (0, -1, -2, -7):
        with pytest.raises(PoleError):
            gamma(z)


def test_recurrence_thousand_points():
    rng = random.Random(1)
    worst = mpmath.mpf(0)
    for _ in range(1000):
        z = _random_z(rng)
        err = abs(gamma(z + 1) - z * gamma(z)) / abs(gamma(z + 1))
        worst = max(worst, err)
    assert worst <= TOL25


def test_reflection_thousand_points():
    rng = random.Random(2)
    worst = mpmath.mpf(0)
    for _ in range(1000):
        z = _random_z(rng)
        if abs(z.imag) < 0.05:  # sin pi z may vanish on the real axis
            continue
        err = abs(gamma(z) * gamma(1 - z) * sin_pi(z) / mpmath.pi - 1)
        worst = max(worst, err)
    assert worst <= TOL25


def test_residues_at_poles():
    # (z+n)Gamma(z) -> (-1)^n/n!; the deviation at distance eps is O(eps)
    fact = 1
    for n in range(11):
        if n >= 1:
            fact *= n
        want = mpmath.mpf((-1) ** n) / fact
        errs = []
        for eps in (mpmath.mpf("1e-8"), mpmath.mpf("1e-12")):
            got = eps * gamma(-n + eps)
            errs.append(abs(got - want) / abs(want))
        assert errs[0] < mpmath.mpf("1e-6"), n
        assert errs[1] < mpmath.mpf("1e-10"), n  # shrinks linearly with eps


def test_recip_gamma_values():
    assert recip_gamma(1) == 1
    assert recip_gamma(0) == 0
    assert recip_gamma(-3) == 0


def test_recip_gamma_times_gamma():
    rng = random.Random(3)
    for _ in range(200):
        z = _random_z(rng)
        assert abs(gamma(z) * recip_gamma(z) - 1) < TOL25


def test_sin_pi_values():
    assert sin_pi(4) == 0
    assert abs(sin_pi(mpmath.mpf(1) / 2) - 1) < TOL25


def test_sin_pi_against_oracle():
    z = mpmath.mpc("0.3", "0.7")
    with precision(256):
        # independent route: (e^{i pi z} - e^{-i pi z}) / 2i
        ipz = mpmath.mpc(0, 1) * mpmath.pi * z
        ref = (mpmath.exp(ipz) - mpmath.exp(-ipz)) / mpmath.mpc(0, 2)
    assert abs(sin_pi(z) - ref) / abs(ref) < mpmath.mpf("1e-35")


def test_sin_pi_large_imaginary():
    z = mpmath.mpc(mpmath.mpf("0.25"), mpmath.mpf("300"))
    val = sin_pi(z)
    # |sin pi z| ~ e^{pi |Im z|} / 2: check the log to a couple of digits
    assert abs(mpmath.log(abs(val)) - mpmath.pi * 300 + mpmath.log(2)) < mpmath.mpf("1e-6")


def test_pochhammer_examples():
    assert pochhammer(mpmath.mpc("1.7", "0.3"), 0) == 1
    assert pochhammer(2, 3) == 24
    assert pochhammer(-3, 5) == 0  # terminates past k = n
    assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)


def test_pochhammer_gamma_ratio():
    rng = random.Random(5)
    for _ in range(50):
        z = _random_z(rng, box=3.0) + 4
        k = rng.randrange(0, 12)
        want = gamma(z + k) * recip_gamma(z)
        assert abs(pochhammer(z, k) - want) / abs(want) < TOL25


def test_pochhammer_negative_k():
    with pytest.raises(ValueError):
        pochhammer(1, -1)
