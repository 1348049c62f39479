"""Deterministic sampling of generic parameter points on the hyperplane.

Real parts are uniform in [0.1, 0.9] and imaginary parts in [-0.5, 0.5]
for a..f, with g forced by e+f+g-a-b-c-d = 1 (so the constraint holds to
working precision exactly).  A point is *generic* when every gamma
argument of K at every one of the 32 coset images, and every sine
argument of the coefficient functions at those images, stays at least
`margin` away from the integers; degenerate draws are rejected.

`require_integral_path=True` additionally rejects points whose Barnes
integrand has no straight separating contour (and biases the draw into
the region where one usually exists).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import mpmath

from .barnes import k_integrand, is_admissible
from .cosets import GroupTables
from .exactlin import A, B, C, D, E, F, G, AffineLinearForm
from .sf import int_distance, to_mpc

#: gamma arguments of K(y) as forms in y, plus the coefficient sine arguments
_K_ARGUMENT_FORMS = (
    E, F, G, 1 + A - E, 1 + A - F, 1 + A - G,
    B, C, D, 1 + A - B, 1 + A - C, 1 + A - D, A,
)
_SINE_ARGUMENT_FORMS = (
    C - B, D - B, D - C, E - A - B, E - A - C, F - A - B, F - A - C,
    E - B, E - C, F - B, F - C, G - B, G - C, G - D, F - E, G - E, G - F,
    A - B, A - C, E - A, F - A, G - A,
)


def generic_forms(tables: GroupTables) -> list[AffineLinearForm]:
    """All argument forms whose integrality would degenerate some relation."""
    out: dict = {}
    for rep in tables.reps:
        for f in _K_ARGUMENT_FORMS + _SINE_ARGUMENT_FORMS:
            g = f.substitute(rep.matrix).canonical()
            out.setdefault(g.key(), g)
    return list(out.values())


def is_generic(x, forms, margin=mpmath.mpf("1e-3")) -> bool:
    return all(int_distance(f.evaluate(x)) >= margin for f in forms)


def _draw_point(rng: random.Random, integral_biased: bool):
    def u(lo, hi):
        return lo + (hi - lo) * rng.random()

    if integral_biased:
        res = [u(0.35, 0.9), u(0.1, 0.3), u(0.1, 0.3), u(0.12, 0.35),
               u(0.6, 0.9), u(0.6, 0.9)]
    else:
        res = [u(0.1, 0.9) for _ in range(6)]
    ims = [u(-0.5, 0.5) for _ in range(6)]
    vals = [mpmath.mpc(mpmath.mpf(r), mpmath.mpf(i)) for r, i in zip(res, ims)]
    a, b, c, d, e, f = vals
    return (a, b, c, d, e, f, 1 + a + b + c + d - e - f)


def sample_points(tables: GroupTables, n: int, seed: int = 0,
                  margin=mpmath.mpf("1e-3"), require_integral_path: bool = False,
                  max_tries: int = 100_000) -> list[tuple]:
    """n generic points, deterministic for a fixed (seed, precision)."""
    rng = random.Random(seed)
    forms = generic_forms(tables)
    out = []
    for _ in range(max_tries):
        if len(out) == n:
            return out
        x = _draw_point(rng, require_integral_path)
        if not is_generic(x, forms, margin):
            continue
        if require_integral_path and not is_admissible(k_integrand(x)):
            continue
        out.append(x)
    raise RuntimeError("rejection sampling failed to find enough generic points")


@dataclass
class RunConfig:
    """Knobs shared by the command-line entry points."""

    precision: int = 128
    tol: mpmath.mpf | None = None
    points: int = 3
    seed: int = 0
    path: str = "series"
    fmt: str = "text"
    out: str | None = None

    def __post_init__(self):
        if self.precision < 64:
            raise ValueError("precision must be at least 64 bits")
        if self.tol is not None and mpmath.mpf(self.tol) < mpmath.mpf(2) ** (8 - self.precision):
            raise ValueError("tolerance below what the precision supports")
