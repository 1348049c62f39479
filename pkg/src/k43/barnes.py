"""Numerical Mellin-Barnes contour integration.

Integrands are products Gamma^{e_k}(a_k + t) Gamma^{e_l}(b_l - t) z^t
evaluated along a vertical line chosen strictly between the two pole
ladders (left-opening ladders from the +t gammas, right-opening from the
-t gammas).  Vertical gamma products decay like exp(-n pi |y| / 2) with
n the net gamma count, so the trapezoid rule converges geometrically;
the driver halves the step (reusing nodes) and extends the truncation
height until two successive values agree.

Indented contours are not implemented: when no straight separating line
exists, ContourError is raised and the caller resamples parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp

from .errors import ContourError, ConvergenceError
from .sf import recip_gamma, require_finite, to_mpc

_MARGIN = mpmath.mpf("0.02")


@dataclass
class BarnesIntegrand:
    """prod Gamma^{eps}(a_k + t) * prod Gamma^{eps}(b_l - t) * z^t."""

    plus_factors: tuple  # pairs (a_k, eps) with eps in {+1, -1}
    minus_factors: tuple  # pairs (b_l, eps)
    z: mpmath.mpc = None

    def __post_init__(self):
        self.plus_factors = tuple((to_mpc(a), int(e)) for a, e in self.plus_factors)
        self.minus_factors = tuple((to_mpc(b), int(e)) for b, e in self.minus_factors)
        self.z = to_mpc(1 if self.z is None else self.z)
        self.log_z = mpmath.log(self.z)

    def net_gamma_count(self) -> int:
        return sum(e for _, e in self.plus_factors) + sum(e for _, e in self.minus_factors)

    def decay_rate(self) -> mpmath.mpf:
        """Coefficient of -|Im t| in log|integrand| far up the contour."""
        return self.net_gamma_count() * mpmath.pi / 2 - abs(mpmath.arg(self.z))

    def growth_exponent(self, t0) -> mpmath.mpf:
        """Power of |Im t| multiplying the exponential decay."""
        p = mpmath.mpf(0)
        for a, e in self.plus_factors:
            p += e * (a.real + t0 - mpmath.mpf(1) / 2)
        for b, e in self.minus_factors:
            p += e * (b.real - t0 - mpmath.mpf(1) / 2)
        return p

    def value(self, t) -> mpmath.mpc:
        out = mpmath.exp(t * self.log_z) if self.log_z != 0 else mpmath.mpc(1)
        for a, e in self.plus_factors:
            out *= mpmath.gamma(a + t) if e > 0 else recip_gamma(a + t)
        for b, e in self.minus_factors:
            out *= mpmath.gamma(b - t) if e > 0 else recip_gamma(b - t)
        return out


@dataclass
class Contour:
    t0: mpmath.mpf
    height: mpmath.mpf
    step: mpmath.mpf


def ladder_bounds(integrand: BarnesIntegrand) -> tuple[mpmath.mpf, mpmath.mpf]:
    """(L, R): rightmost left-ladder abscissa and leftmost right-ladder one."""
    left = [-a.real for a, e in integrand.plus_factors if e > 0]
    right = [b.real for b, e in integrand.minus_factors if e > 0]
    if not left or not right:
        return mpmath.mpf("-inf"), mpmath.mpf("+inf")
    return max(left), min(right)


def _ladders_interlock(a, b, margin) -> bool:
    """Left ladder of G(a+t) meets right ladder of G(b-t): a+b near {0,-1,...}."""
    s = a + b
    n = mpmath.floor(s.real + mpmath.mpf(1) / 2)
    return n <= 0 and abs(s - n) < margin


def is_admissible(integrand: BarnesIntegrand, margin=_MARGIN) -> bool:
    left, right = ladder_bounds(integrand)
    if right - left <= 2 * margin:
        return False
    for a, ea in integrand.plus_factors:
        for b, eb in integrand.minus_factors:
            if ea > 0 and eb > 0 and _ladders_interlock(a, b, margin):
                return False
    return integrand.decay_rate() > mpmath.mpf("0.1")


def choose_contour(integrand: BarnesIntegrand, tol=None) -> Contour:
    """Midpoint separating line with height/step sized from the decay rate.

    Raises ContourError when no straight line separates the ladders, when
    a +/+ parameter pair sums to an integer (the ladders interlock), or
    when the integrand does not decay.
    """
    tol = mpmath.mpf(tol) if tol is not None else mpmath.mpf(2) ** (-mp.prec // 2)
    left, right = ladder_bounds(integrand)
    if right - left <= 2 * _MARGIN:
        raise ContourError(
            f"pole ladders overlap: need {mpmath.nstr(left, 6)} < t0 < {mpmath.nstr(right, 6)}"
        )
    for a, ea in integrand.plus_factors:
        for b, eb in integrand.minus_factors:
            if ea > 0 and eb > 0 and _ladders_interlock(a, b, _MARGIN):
                raise ContourError(
                    f"pole ladders interlock: {a} + {b} is a nonpositive integer"
                )
    decay = integrand.decay_rate()
    if decay <= mpmath.mpf("0.1"):
        raise ContourError("integrand does not decay along vertical lines")
    t0 = (left + right) / 2
    delta = min(t0 - left, right - t0, mpmath.mpf(1))
    digits = -mpmath.log(tol)
    height = (digits + 5) / decay
    power = max(integrand.growth_exponent(t0), mpmath.mpf(0))
    for _ in range(4):  # absorb the polynomial factor into the height
        height = (digits + 5 + power * mpmath.log(height + 2)) / decay
    step = 2 * mpmath.pi * delta / (digits + 8)
    return Contour(t0, height, step)


def quadrature(integrand: BarnesIntegrand, contour: Contour, tol=None,
               max_refinements: int = 6) -> mpmath.mpc:
    """(1/2 pi i) integral along the contour by step-halving trapezoid.

    Node values are cached on the common refinement grid, so each halving
    only evaluates the new midpoints; the height is extended whenever the
    edge terms are not yet negligible.
    """
    tol = mpmath.mpf(tol) if tol is not None else mpmath.mpf(2) ** (-mp.prec // 2)
    t0 = contour.t0
    cache: dict = {}

    def node(y) -> mpmath.mpc:
        if y not in cache:
            cache[y] = integrand.value(mpmath.mpc(t0, y))
        return cache[y]

    h = contour.step
    height = contour.height
    prev = None
    for _ in range(max_refinements):
        n = int(mpmath.ceil(height / h))
        total = node(mpmath.mpf(0))
        for k in range(1, n + 1):
            total += node(k * h) + node(-k * h)
        # extend the height until the edge terms stop mattering
        edge_tol = tol * max(abs(total), mpmath.mpf("1e-30")) / 16
        while max(abs(node(n * h)), abs(node(-n * h))) > edge_tol:
            n += max(2, n // 4)
            for k in range(int(mpmath.ceil(height / h)) + 1, n + 1):
                total += node(k * h) + node(-k * h)
            height = n * h
        val = total * h / (2 * mpmath.pi)
        if prev is not None and abs(val - prev) <= tol * max(abs(val), mpmath.mpf("1e-300")):
            return require_finite(val, "Barnes integral")
        prev = val
        h = h / 2
    raise ConvergenceError("quadrature did not stabilize under step halving")


def barnes_integral(integrand: BarnesIntegrand, tol=None) -> mpmath.mpc:
    return quadrature(integrand, choose_contour(integrand, tol), tol)


# -- the classical closed forms used as quadrature oracles ------------------


def barnes_lemma_integrand(a, b, c, d) -> BarnesIntegrand:
    return BarnesIntegrand(((a, 1), (b, 1)), ((c, 1), (d, 1)))


def barnes_lemma_rhs(a, b, c, d) -> mpmath.mpc:
    a, b, c, d = (to_mpc(v) for v in (a, b, c, d))
    return (
        mpmath.gamma(a + c) * mpmath.gamma(b + c)
        * mpmath.gamma(a + d) * mpmath.gamma(b + d)
        * recip_gamma(a + b + c + d)
    )


def gamma_kernel_value(a, b, c, d, z, tol=None) -> mpmath.mpc:
    """Closed form of (1/2 pi i) int G(a+t)G(b+t)G(c-t)G(d-t) z^t dt.

    Two branches (|z| < 1 and |z| > 1), both Gauss functions in 1 - z^{+-1};
    z on the unit circle is outside scope except z = 1 (Barnes' lemma).
    """
    from .series import gauss_f21

    a, b, c, d, z = (to_mpc(v) for v in (a, b, c, d, z))
    pref = barnes_lemma_rhs(a, b, c, d)
    if abs(z) == 1:
        if z == 1:
            return pref
        raise ValueError("|z| = 1 requires z = 1")
    if abs(z) < 1:
        return mpmath.exp(c * mpmath.log(z)) * pref * gauss_f21(
            a + c, b + c, a + b + c + d, 1 - z, tol=tol)
    return mpmath.exp(-a * mpmath.log(z)) * pref * gauss_f21(
        a + c, a + d, a + b + c + d, 1 - 1 / z, tol=tol)


# -- the K integral representation ------------------------------------------


def k_integrand(x) -> BarnesIntegrand:
    a, b, c, d, e, f, g = (to_mpc(v) for v in x)
    plus = ((g - d, 1), (1 + a - e, 1), (1 + a - f, 1), (1 + a - d, -1))
    minus = ((d + b - g, 1), (d + c - g, 1), (mpmath.mpc(0), 1), (d, -1))
    return BarnesIntegrand(plus, minus)


def k_prefactor(x) -> mpmath.mpc:
    a, b, c, d, e, f, g = (to_mpc(v) for v in x)
    out = mpmath.mpc(1)
    for v in (1 + a - e, 1 + a - f, b, c, e - b, e - c, f - b, f - c, g - d):
        out *= recip_gamma(v)
    return out


def k_integral(x, tol=None) -> mpmath.mpc:
    """K via its Barnes integral representation (independent of the series).

    Requires a straight separating contour for the parameter point;
    raises ContourError otherwise (callers resample, or use
    `k_integral_any_image` to exploit the two-term invariance).
    """
    from .series import check_on_hyperplane

    check_on_hyperplane(x)
    integrand = k_integrand(x)
    contour = choose_contour(integrand, tol)
    return require_finite(
        k_prefactor(x) * quadrature(integrand, contour, tol), "K integral"
    )


def k_integral_admissible(x) -> bool:
    return is_admissible(k_integrand(x))


def k_integral_any_image(tables, x, tol=None) -> mpmath.mpc:
    """K at x via the integral of the first admissible G_K image of x.

    Uses the invariance of K under G_K, so it is not an independent check
    of that invariance; it widens the integral path's parameter coverage.
    """
    x = tuple(to_mpc(v) for v in x)
    if k_integral_admissible(x):
        return k_integral(x, tol)
    for g in tables.gk_closure.elements:
        gx = g.apply(x)
        if k_integral_admissible(gx):
            return k_integral(gx, tol)
    raise ContourError("no G_K image of the point admits a straight contour")
