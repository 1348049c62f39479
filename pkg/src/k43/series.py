"""Hypergeometric series evaluation: 2F1, unit-argument pFq, and K.

Unit-argument Saalschutzian series have terms decaying like k^-2, far
too slow to sum to 25+ digits directly.  The engine sums a block of
terms by exact ratio recurrence, fits the last eight terms to
k^-s (c0 + c1/k + c2/k^2 + c3/k^3), and completes the tail with Hurwitz
zeta values; the block length doubles until the estimated tail error is
below tolerance.

K itself is the sum of two such series weighted by reciprocal gammas

    K = F(a,b,c,d;e,f,g) / [G(e)G(f)G(g)G(1+a-e)G(1+a-f)G(1+a-g)]
      + F(a,1+a-e,1+a-f,1+a-g;1+a-b,1+a-c,1+a-d) / [G(1+a-b)...G(d)]

and is entire: parameter sets with a denominator at a gamma pole reroute
through a termwise regularized sum (Pochhammers times 1/Gamma), and
nonpositive-integer numerator parameters terminate the series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import mp

from .errors import ConvergenceError, PoleError
from .sf import (
    gamma,
    int_distance,
    is_nonpositive_integer,
    pochhammer,
    recip_gamma,
    require_finite,
    to_mpc,
)

try:
    import gmpy2

    _HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _HAVE_GMPY2 = False

DEFAULT_BLOCK = 4000
MAX_DOUBLINGS = 4
FIT_POINTS = 8
FIT_COEFFS = 4
_GUARD_BITS = 16


def _mpf_to_mpfr(x):
    s, m, e, _ = mpmath.mpf(x)._mpf_
    r = gmpy2.mpfr(m)
    r = gmpy2.mul_2exp(r, e) if e >= 0 else gmpy2.div_2exp(r, -e)
    return -r if s else r


def _mpfr_to_mpf(r):
    if r == 0:
        return mpmath.mpf(0)
    man, exp = r.as_mantissa_exp()
    return mpmath.mpf(mpmath.libmp.from_man_exp(int(man), int(exp), mp.prec, "n"))


def _mpc_to_gmpy(z):
    z = mpmath.mpc(z)
    return gmpy2.mpc(_mpf_to_mpfr(z.real), _mpf_to_mpfr(z.imag))


def _gmpy_to_mpc(z):
    return mpmath.mpc(_mpfr_to_mpf(z.real), _mpfr_to_mpf(z.imag))


@dataclass
class SeriesResult:
    value: mpmath.mpc
    terms_used: int
    tail_bound: mpmath.mpf
    accelerated: bool


def _terminating_order(numerators) -> int | None:
    """Smallest n with some numerator equal to -n exactly, else None."""
    orders = [int(-z.real) for z in numerators if is_nonpositive_integer(z)]
    return min(orders) if orders else None


def _default_tol() -> mpmath.mpf:
    # half the working precision; suites pass explicit tolerances
    return mpmath.mpf(2) ** (-mp.prec // 2)


def _tail_fit(last_terms: list, k_last: int, s) -> tuple[mpmath.mpc, mpmath.mpf]:
    """Complete sum_{k > k_last} t_k for t_k ~ k^-s (c0 + c1/k + ...).

    `last_terms` holds t_k for k = k_last-7 .. k_last.  Least squares over
    the eight points with four coefficients (basis (k_last/k)^j for
    conditioning), solved at doubled precision; the returned bound
    combines the sensitivity to dropping one coefficient with a
    growth-based guess at the first neglected coefficient.
    """
    m = len(last_terms)
    ks = [k_last - m + 1 + i for i in range(m)]
    with mp.workprec(2 * mp.prec + 40):
        s = to_mpc(s)
        scale = mpmath.mpf(k_last)
        ys = [t * mpmath.exp(s * mpmath.log(k)) for t, k in zip(last_terms, ks)]
        basis = [[(scale / k) ** j for j in range(FIT_COEFFS)] for k in ks]

        def solve(ncoef):
            ata = mpmath.matrix(ncoef, ncoef)
            aty = mpmath.matrix(ncoef, 1)
            for i in range(m):
                for p in range(ncoef):
                    aty[p] += basis[i][p] * ys[i]
                    for q in range(ncoef):
                        ata[p, q] += basis[i][p] * basis[i][q]
            sol = mpmath.lu_solve(ata, aty)
            return [sol[j] for j in range(ncoef)]

        def tail(coeffs):
            total = mpmath.mpc(0)
            for j, cj in enumerate(coeffs):
                total += cj * scale**j * mpmath.zeta(s + j, k_last + 1)
            return total

        c_full = solve(FIT_COEFFS)
        t_full = tail(c_full)
        t_drop = tail(solve(FIT_COEFFS - 1))
        mags = [abs(c) for c in c_full]
        ratios = [mags[j + 1] / mags[j] for j in range(len(mags) - 1) if mags[j] > 0]
        growth = max(ratios) if ratios else mpmath.mpf(1)
        c_next = mags[-1] * max(growth, mpmath.mpf(1))
        bound = abs(t_full - t_drop) + c_next * scale**FIT_COEFFS * abs(
            mpmath.zeta(s.real + FIT_COEFFS, k_last + 1)
        )
    return mpmath.mpc(t_full), mpmath.mpf(bound)


def _series_with_tail(term_at, ratio, s, tol, block, max_doublings) -> SeriesResult:
    """Shared engine: block summation by recurrence + fitted-tail completion.

    `term_at(k)` computes a term directly (used at k=0 and at recurrence
    restarts), `ratio(k)` multiplies t_k into t_{k+1}; a None ratio value
    requests a direct recomputation at k+1 (pole crossing).
    """
    total = mpmath.mpc(0)
    window: list = []
    t = term_at(0)
    k = 0
    blocks = 0
    while True:
        while k < block:
            total += t
            window.append(t)
            if len(window) > FIT_POINTS:
                window.pop(0)
            r = ratio(k)
            t = term_at(k + 1) if r is None else t * r
            k += 1
        tail, bound = _tail_fit(window, k - 1, s)
        scale = max(abs(total + tail), mpmath.mpf("1e-300"))
        if bound <= tol * scale:
            return SeriesResult(require_finite(total + tail, "series"), k, bound, True)
        if blocks >= max_doublings:
            raise ConvergenceError(
                f"tail bound {mpmath.nstr(bound)} above tolerance after {k} terms"
            )
        blocks += 1
        block *= 2


def _ratio_series(nums, dens, s, tol, block, max_doublings) -> SeriesResult:
    """Pure ratio-recurrence series (generic pFq(1)); gmpy2-backed when available.

    The inner loop runs in gmpy2's C-level complex arithmetic at the
    working precision plus guard bits, converting exactly back to mpmath
    only for the per-block tail fit.
    """
    if not _HAVE_GMPY2:
        def ratio(k):
            num = mpmath.mpc(1)
            for a in nums:
                num *= a + k
            den = mpmath.mpc(k + 1)
            for d in dens:
                den *= d + k
            return num / den

        return _series_with_tail(lambda k: mpmath.mpc(1), ratio, s, tol, block, max_doublings)

    ctx = gmpy2.get_context()
    old_prec = ctx.precision
    ctx.precision = mp.prec + _GUARD_BITS
    try:
        gnums = [_mpc_to_gmpy(a) for a in nums]
        gdens = [_mpc_to_gmpy(d) for d in dens]
        total = gmpy2.mpc(0)
        t = gmpy2.mpc(1)
        window: list = []
        k = 0
        blocks = 0
        while True:
            while k < block:
                total += t
                window.append(t)
                if len(window) > FIT_POINTS:
                    window.pop(0)
                num = t
                for a in gnums:
                    num = num * (a + k)
                den = gmpy2.mpc(k + 1)
                for d in gdens:
                    den = den * (d + k)
                t = num / den
                k += 1
            tail, bound = _tail_fit([_gmpy_to_mpc(w) for w in window], k - 1, s)
            m_total = _gmpy_to_mpc(total)
            scale = max(abs(m_total + tail), mpmath.mpf("1e-300"))
            if bound <= tol * scale:
                return SeriesResult(require_finite(m_total + tail, "series"), k, bound, True)
            if blocks >= max_doublings:
                raise ConvergenceError(
                    f"tail bound {mpmath.nstr(bound)} above tolerance after {k} terms"
                )
            blocks += 1
            block *= 2
    finally:
        ctx.precision = old_prec


def _exact_terminating(numerators, denominators, n: int) -> Fraction:
    total = Fraction(0)
    for k in range(n + 1):
        t = Fraction(1)
        for a in numerators:
            t *= pochhammer(Fraction(a), k)
        for e in denominators:
            t /= pochhammer(Fraction(e), k)
        for i in range(1, k + 1):
            t /= i
        total += t
    return total


def pfq_unit(numerators: Sequence, denominators: Sequence,
             tol=None, block: int = DEFAULT_BLOCK,
             max_doublings: int = MAX_DOUBLINGS) -> SeriesResult:
    """Unit-argument series sum_k prod (a_i)_k / (k! prod (e_j)_k).

    Terminating numerators short-circuit to the exact finite sum (exact
    over Fractions); otherwise requires Re(sum e - sum a) > 0 and
    completes the k^-s tail by the fitted acceleration.
    """
    numerators = list(numerators)
    denominators = list(denominators)
    if all(isinstance(v, (int, Fraction)) for v in numerators + denominators):
        n = _terminating_order([to_mpc(v) for v in numerators])
        if n is not None:
            return SeriesResult(
                _exact_terminating(numerators, denominators, n), n + 1, mpmath.mpf(0), False
            )
    nums = [to_mpc(v) for v in numerators]
    dens = [to_mpc(v) for v in denominators]
    n = _terminating_order(nums)
    for d in dens:
        if is_nonpositive_integer(d) and (n is None or -int(d.real) <= n):
            raise PoleError(f"denominator parameter at a pole: {d}")
    tol = mpmath.mpf(tol) if tol is not None else _default_tol()

    def ratio(k):
        num = mpmath.mpc(1)
        for a in nums:
            num *= a + k
        den = mpmath.mpc(k + 1)
        for d in dens:
            den *= d + k
        return num / den

    if n is not None:
        total = mpmath.mpc(0)
        t = mpmath.mpc(1)
        for k in range(n + 1):
            total += t
            if k < n:
                t = t * ratio(k)
        return SeriesResult(require_finite(total, "series"), n + 1, mpmath.mpf(0), False)

    s = 1 + sum(dens) - sum(nums)
    if s.real <= 1:
        raise ConvergenceError(
            f"series diverges at unit argument: Re(sum den - sum num) = {s.real - 1}"
        )
    return _ratio_series(nums, dens, s, tol, block, max_doublings)


def regularized_sum(numerators: Sequence, denominators: Sequence, tol=None,
                    block: int = DEFAULT_BLOCK,
                    max_doublings: int = MAX_DOUBLINGS) -> SeriesResult:
    """sum_k prod (a_i)_k prod 1/Gamma(k + e_j) / k!  (entire in everything).

    Robust at denominator poles: terms there are computed directly via
    1/Gamma (vanishing exactly at the pole) and the recurrence restarts
    on the far side.  This is the slow path behind k_function's
    entirety; generically it agrees with pfq_unit times 1/Gamma weights.
    """
    nums = [to_mpc(v) for v in numerators]
    dens = [to_mpc(v) for v in denominators]
    tol = mpmath.mpf(tol) if tol is not None else _default_tol()
    term_order = _terminating_order(nums)
    # indices where a denominator ladder crosses a pole: direct evaluation
    special = set()
    for d in dens:
        if is_nonpositive_integer(d):
            special.update((int(-d.real), int(-d.real) + 1))

    def term_at(k):
        t = mpmath.mpc(1)
        for a in nums:
            t *= pochhammer(a, k)
        for d in dens:
            t *= recip_gamma(d + k)
        return t / mpmath.factorial(k)

    def ratio(k):
        if (k + 1) in special:
            return None
        num = mpmath.mpc(1)
        for a in nums:
            num *= a + k
        den = mpmath.mpc(k + 1)
        for d in dens:
            den *= d + k
        return num / den

    if term_order is not None:
        total = mpmath.mpc(0)
        for k in range(term_order + 1):
            total += term_at(k)
        return SeriesResult(require_finite(total, "series"), term_order + 1,
                            mpmath.mpf(0), False)

    s = 1 + sum(dens) - sum(nums)
    if s.real <= 1:
        raise ConvergenceError("series diverges at unit argument")
    return _series_with_tail(term_at, ratio, s, tol, block, max_doublings)


def gauss_f21(a, b, c, z, tol=None, max_terms: int = 2_000_000) -> mpmath.mpc:
    """Gauss series F(a,b;c;z) for |z| < 1 (or terminating).

    Plain term recurrence with a geometric tail estimate; raises
    ConvergenceError for non-terminating |z| >= 1 and PoleError for c a
    nonpositive integer (unless the series terminates first).
    """
    a, b, c, z = (to_mpc(v) for v in (a, b, c, z))
    tol = mpmath.mpf(tol) if tol is not None else _default_tol()
    n = _terminating_order([a, b])
    if n is None and abs(z) >= 1:
        raise ConvergenceError(
            f"|z| = {mpmath.nstr(abs(z))} >= 1 and series does not terminate"
        )
    if is_nonpositive_integer(c) and (n is None or -int(c.real) < n):
        raise PoleError(f"denominator parameter c = {c} is a nonpositive integer")
    total = mpmath.mpc(0)
    t = mpmath.mpc(1)
    k = 0
    while True:
        total += t
        if n is not None and k == n:
            return require_finite(total, "2F1")
        t = t * (a + k) * (b + k) * z / ((k + 1) * (c + k))
        k += 1
        if n is None and abs(t) < tol * max(abs(total), mpmath.mpf(1)):
            q = abs(z) * (1 + (abs(a) + abs(b) + 2) / k)
            if q < 1 and abs(t) / (1 - q) < tol * max(abs(total), mpmath.mpf(1)):
                return require_finite(total + t, "2F1")
        if k > max_terms:
            raise ConvergenceError("2F1 did not converge within the term budget")


def f43_star(a, b, c, d, e, f, g, tol=None) -> mpmath.mpc:
    """Regularized series sum_k G(k+a)G(k+b)G(k+c)G(k+d)/(k! G(k+e)G(k+f)G(k+g)).

    Equals Gamma-prefactor times 4F3(1) for generic parameters.
    Nonpositive-integer numerator parameters enter through the
    terminating limit convention: each polar Gamma(k + x) is replaced by
    the Pochhammer (x)_k, i.e. the value is divided by Gamma(x).
    """
    nums = [to_mpc(v) for v in (a, b, c, d)]
    dens = [to_mpc(v) for v in (e, f, g)]
    for v in dens:
        if is_nonpositive_integer(v):
            raise PoleError(f"denominator parameter at a pole: {v}")
    polar = [v for v in nums if is_nonpositive_integer(v)]
    if polar:
        finite = [v for v in nums if not is_nonpositive_integer(v)]
        n = min(int(-v.real) for v in polar)
        total = mpmath.mpc(0)
        for k in range(n + 1):
            t = mpmath.mpc(1) / mpmath.factorial(k)
            for v in finite:
                t *= gamma(v + k)
            for v in polar:
                t *= pochhammer(v, k)
            for v in dens:
                t *= recip_gamma(v + k)
            total += t
        return require_finite(total, "regularized 4F3")
    pref = mpmath.mpc(1)
    for v in nums:
        pref *= gamma(v)
    for v in dens:
        pref *= recip_gamma(v)
    return require_finite(pref * pfq_unit(nums, dens, tol=tol).value, "regularized 4F3")


_POLE_FALLBACK_MARGIN = mpmath.mpf("1e-8")


def check_on_hyperplane(x: Sequence, slack_bits: int = 4) -> None:
    a, b, c, d, e, f, g = (to_mpc(v) for v in x)
    resid = abs(e + f + g - a - b - c - d - 1)
    if resid > 10 * mpmath.mpf(2) ** (slack_bits - mp.prec):
        raise ValueError(f"point violates e+f+g-a-b-c-d=1 by {mpmath.nstr(resid)}")


def k_function(x: Sequence, tol=None, block: int = DEFAULT_BLOCK) -> mpmath.mpc:
    """The entire combination K(a;b,c,d;e,f,g) by series summation.

    `x` is a 7-sequence on the hyperplane e+f+g-a-b-c-d = 1.  Both
    constituent series are Saalschutzian there; each is evaluated by
    ratio recurrence with the fitted-tail completion and weighted by
    reciprocal gammas only, so polar parameter choices stay finite
    (denominator-side poles reroute through the regularized sum).
    """
    check_on_hyperplane(x)
    a, b, c, d, e, f, g = (to_mpc(v) for v in x)
    halves = (
        ((a, b, c, d), (e, f, g), (1 + a - e, 1 + a - f, 1 + a - g)),
        ((a, 1 + a - e, 1 + a - f, 1 + a - g),
         (1 + a - b, 1 + a - c, 1 + a - d), (b, c, d)),
    )
    total = mpmath.mpc(0)
    for nums, dens, mirror in halves:
        weight = mpmath.mpc(1)
        for v in mirror:
            weight *= recip_gamma(v)
        if any(int_distance(v) < _POLE_FALLBACK_MARGIN and v.real < 0.5 for v in dens):
            part = regularized_sum(nums, dens, tol=tol, block=block).value * weight
        else:
            for v in dens:
                weight *= recip_gamma(v)
            part = pfq_unit(nums, dens, tol=tol, block=block).value * weight
        total += part
    return require_finite(total, "K")


# -- terminating specialization ------------------------------------------


def terminating_f43(a, b, c, e, f, g, n: int):
    """4F3(a,b,c,-n; e,f,g; 1) as an exact finite sum.

    Exact (Fraction) whenever the inputs are rational; otherwise numeric
    at the working precision.
    """
    return pfq_unit([a, b, c, -n], [e, f, g]).value


def bls_transform(a, b, c, e, f, g, n: int):
    """Image of the parameter list under the terminating two-term relation."""
    return (a, e - c, e - b, e, 1 + a - g - n, 1 + a - f - n)


def bls_ratio(a, f, g, n: int):
    """Prefactor G(f)G(g)G(1+a-f)G(1+a-g) over its n-shifted version, exactly."""
    return (
        pochhammer(1 + a - f - n, n)
        * pochhammer(1 + a - g - n, n)
        / (pochhammer(f, n) * pochhammer(g, n))
    )


def terminating_identity_residual(a, b, c, e, f, g, n: int):
    """lhs - rhs of the terminating two-term relation, scaled by the larger side.

    Exact zero over Fractions; the Saalschutzian constraint
    e+f+g = 1+a+b+c-n is the caller's responsibility.
    """
    lhs = terminating_f43(a, b, c, e, f, g, n)
    a2, b2, c2, e2, f2, g2 = bls_transform(a, b, c, e, f, g, n)
    rhs = bls_ratio(a, f, g, n) * terminating_f43(a2, b2, c2, e2, f2, g2, n)
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        denom = max(abs(lhs), abs(rhs), Fraction(1))
        return (lhs - rhs) / denom
    denom = max(abs(lhs), abs(rhs), mpmath.mpf(1))
    return (lhs - rhs) / denom


def invariant_terminating_product(a, b, c, e, f, g, n: int):
    """(e)_n (f)_n (g)_n 4F3(a,b,c,-n;e,f,g;1): invariant under bls_transform."""
    return (
        pochhammer(e, n) * pochhammer(f, n) * pochhammer(g, n)
        * terminating_f43(a, b, c, e, f, g, n)
    )
