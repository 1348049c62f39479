"""Independent reference implementations used only by the tests.

These deliberately avoid the code paths they are checking:

- `spouge_gamma` is a from-scratch complex gamma (Spouge's series plus
  reflection), run at elevated precision to referee the production gamma;
- `extrapolated_pfq` sums partial sums of a unit-argument series and
  Neville-extrapolates them in 1/N, a different acceleration family from
  the production fitted-tail engine;
- `brute_2f1` is plain high-precision summation for |z| < 1.
"""

from __future__ import annotations

import mpmath
from mpmath import mp


def spouge_gamma(z, terms: int = 130) -> mpmath.mpc:
    """Gamma(z) by Spouge's approximation with reflection for Re z < 1/2.

    With `terms` = a ~ 130 the relative error is around (2 pi)^-a, far
    below 256-bit working precision.
    """
    z = mpmath.mpc(z)
    if z.real < mpmath.mpf(1) / 2:
        # reflection: G(z) = pi / (sin(pi z) G(1 - z))
        return mpmath.pi / (mpmath.sinpi(z) * spouge_gamma(1 - z, terms))
    a = mpmath.mpf(terms)
    w = z - 1
    total = mpmath.sqrt(2 * mpmath.pi)
    fact = mpmath.mpf(1)
    for k in range(1, terms):
        if k > 1:
            fact *= -(k - 1)
        ak = mpmath.mpf(a) - k
        ck = ak ** (k - mpmath.mpf(1) / 2) * mpmath.exp(ak) / fact
        total += ck / (w + k)
    return mpmath.exp(-(w + a)) * (w + a) ** (w + mpmath.mpf(1) / 2) * total


def partial_sums(numerators, denominators, checkpoints) -> list:
    """Partial sums of the unit-argument series at the given term counts."""
    out = []
    nums = [mpmath.mpc(v) for v in numerators]
    dens = [mpmath.mpc(v) for v in denominators]
    t = mpmath.mpc(1)
    total = mpmath.mpc(0)
    cp = set(checkpoints)
    for k in range(max(checkpoints) + 1):
        total += t
        if (k + 1) in cp:
            out.append((k + 1, total))
        num = mpmath.mpc(1)
        for a in nums:
            num *= a + k
        den = mpmath.mpc(k + 1)
        for d in dens:
            den *= d + k
        t = t * num / den
    return out


def neville_limit(pairs) -> mpmath.mpc:
    """Polynomial extrapolation of (N, S_N) pairs in 1/N to N = infinity."""
    us = [mpmath.mpf(1) / n for n, _ in pairs]
    tab = [v for _, v in pairs]
    m = len(tab)
    for j in range(1, m):
        for i in range(m - 1, j - 1, -1):
            tab[i] = (us[i - j] * tab[i] - us[i] * tab[i - 1]) / (us[i - j] - us[i])
    return tab[m - 1]


def extrapolated_pfq(numerators, denominators, block: int = 2000,
                     nodes: int = 14) -> mpmath.mpc:
    """Unit-argument pFq by Richardson/Neville extrapolation of partial sums."""
    cps = [block * j for j in range(1, nodes + 1)]
    return neville_limit(partial_sums(numerators, denominators, cps))


def oracle_k(x, block: int = 2000, nodes: int = 14) -> mpmath.mpc:
    """K assembled from two extrapolated series and reciprocal gammas."""
    a, b, c, d, e, f, g = (mpmath.mpc(v) for v in x)
    rg = mpmath.rgamma
    f1 = extrapolated_pfq([a, b, c, d], [e, f, g], block, nodes)
    f2 = extrapolated_pfq([a, 1 + a - e, 1 + a - f, 1 + a - g],
                          [1 + a - b, 1 + a - c, 1 + a - d], block, nodes)
    return (
        f1 * rg(e) * rg(f) * rg(g) * rg(1 + a - e) * rg(1 + a - f) * rg(1 + a - g)
        + f2 * rg(b) * rg(c) * rg(d) * rg(1 + a - b) * rg(1 + a - c) * rg(1 + a - d)
    )


def brute_2f1(a, b, c, z, terms: int = 2000) -> mpmath.mpc:
    total = mpmath.mpc(0)
    t = mpmath.mpc(1)
    a, b, c, z = (mpmath.mpc(v) for v in (a, b, c, z))
    for k in range(terms):
        total += t
        t = t * (a + k) * (b + k) * z / ((k + 1) * (c + k))
    return total
