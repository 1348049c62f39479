"""Exact rational 7x7 matrices, affine-linear forms, and finite group closure.

Everything here is exact: matrices carry integer entries over a common
positive denominator (kept minimal), forms carry Fraction coefficients.
This is the substrate for the matrix groups acting on the hyperplane

    V = { (a,b,c,d,e,f,g) in C^7 : e+f+g-a-b-c-d = 1 }.

Two linear maps agree on V iff their rows differ by rational multiples of
the covector of the defining functional; `AffineLinearForm.canonical()`
quotients by exactly that ambiguity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import GroupOrderExceededError, SingularMatrixError

N = 7

VARS = "abcdefg"

# covector of the hyperplane functional e+f+g-a-b-c-d (value 1 on V)
_HYPER = (-1, -1, -1, -1, 1, 1, 1)


def _normalize(num: np.ndarray, den: int) -> tuple[np.ndarray, int]:
    if den < 0:
        num, den = -num, -den
    g = int(np.gcd.reduce(np.abs(num), axis=None))
    g = math.gcd(g, den)
    if g > 1:
        num = num // g
        den //= g
    num.setflags(write=False)
    return num, den


class ExactMatrix7:
    """7x7 matrix with exact rational entries, stored as num/den.

    `num` is an immutable int64 array, `den` a positive int with
    gcd(num, den) = 1.  Hashable, so closures can be stored in sets.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: np.ndarray, den: int = 1):
        num = np.asarray(num, dtype=np.int64).reshape(N, N).copy()
        self.num, self.den = _normalize(num, int(den))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Fraction | int]]) -> "ExactMatrix7":
        den = 1
        for row in rows:
            for x in row:
                den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
        num = [[int(Fraction(x) * den) for x in row] for row in rows]
        return cls(np.array(num, dtype=np.int64), den)

    @classmethod
    def identity(cls) -> "ExactMatrix7":
        return cls(np.eye(N, dtype=np.int64), 1)

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.num[i, j]), self.den)

    def rows(self) -> list[list[Fraction]]:
        return [[self.entry(i, j) for j in range(N)] for i in range(N)]

    def key(self) -> bytes:
        return self.num.tobytes() + self.den.to_bytes(4, "little")

    def __hash__(self):
        return hash(self.key())

    def __eq__(self, other):
        return isinstance(other, ExactMatrix7) and self.den == other.den and np.array_equal(self.num, other.num)

    def __matmul__(self, other: "ExactMatrix7") -> "ExactMatrix7":
        # int64 is ample: group entries stay tiny, and we guard anyway
        a, b = self.num, other.num
        if max(int(np.abs(a).max()), int(np.abs(b).max())) > 10**8:
            prod = np.array(
                [[sum(int(a[i, k]) * int(b[k, j]) for k in range(N)) for j in range(N)] for i in range(N)],
                dtype=object,
            ).astype(np.int64)
        else:
            prod = a @ b
        return ExactMatrix7(prod, self.den * other.den)

    def __neg__(self) -> "ExactMatrix7":
        return ExactMatrix7(-self.num, self.den)

    def apply(self, x: Sequence) -> tuple:
        """Matrix-vector product over whatever arithmetic the vector carries."""
        den = self.den
        return tuple(
            sum(x[j] * int(self.num[i, j]) for j in range(N) if self.num[i, j]) / den for i in range(N)
        )

    def is_identity(self) -> bool:
        return self.den == 1 and np.array_equal(self.num, np.eye(N, dtype=np.int64))

    def determinant(self) -> Fraction:
        det = _det_bareiss([[int(v) for v in row] for row in self.num])
        return Fraction(det, self.den**N)

    def transpose(self) -> "ExactMatrix7":
        return ExactMatrix7(self.num.T.copy(), self.den)

    def inverse(self) -> "ExactMatrix7":
        return mat_inverse(self)

    def row_form(self, i: int) -> "AffineLinearForm":
        """The i-th coordinate of self @ x, as a linear form (no constant)."""
        return AffineLinearForm(Fraction(0), tuple(self.entry(i, j) for j in range(N)))

    def __repr__(self):
        return f"ExactMatrix7({self.num.tolist()}, den={self.den})"


def mat_mul(m1: ExactMatrix7, m2: ExactMatrix7) -> ExactMatrix7:
    """Exact product m1 @ m2."""
    return m1 @ m2


def _det_bareiss(m: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    a = [row[:] for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def mat_inverse(m: ExactMatrix7) -> ExactMatrix7:
    """Exact inverse via Gauss-Jordan over Fractions.

    Raises SingularMatrixError when det = 0.
    """
    a = [[Fraction(int(m.num[i, j]), m.den) for j in range(N)] for i in range(N)]
    inv = [[Fraction(int(i == j)) for j in range(N)] for i in range(N)]
    for col in range(N):
        piv = next((r for r in range(col, N) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        inv[col] = [v / p for v in inv[col]]
        for r in range(N):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
                inv[r] = [v - f * w for v, w in zip(inv[r], inv[col])]
    return ExactMatrix7.from_rows(inv)


@dataclass(frozen=True)
class AffineLinearForm:
    """const + coeffs . (a,b,c,d,e,f,g), all rational."""

    const: Fraction
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != N:
            raise ValueError("expected 7 coefficients")

    @classmethod
    def variable(cls, name: str) -> "AffineLinearForm":
        i = VARS.index(name)
        return cls(Fraction(0), tuple(Fraction(int(j == i)) for j in range(N)))

    @classmethod
    def constant(cls, value) -> "AffineLinearForm":
        return cls(Fraction(value), (Fraction(0),) * N)

    def __add__(self, other):
        if isinstance(other, AffineLinearForm):
            return AffineLinearForm(
                self.const + other.const,
                tuple(x + y for x, y in zip(self.coeffs, other.coeffs)),
            )
        return AffineLinearForm(self.const + Fraction(other), self.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return AffineLinearForm(-self.const, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        return self + (-other if isinstance(other, AffineLinearForm) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + Fraction(other)

    def __mul__(self, k):
        k = Fraction(k)
        return AffineLinearForm(self.const * k, tuple(x * k for x in self.coeffs))

    __rmul__ = __mul__

    def substitute(self, m: ExactMatrix7) -> "AffineLinearForm":
        """The form x -> self(m @ x); constant term is unchanged."""
        coeffs = tuple(
            sum((self.coeffs[i] * m.entry(i, j) for i in range(N)), Fraction(0)) for j in range(N)
        )
        return AffineLinearForm(self.const, coeffs)

    def canonical(self) -> "AffineLinearForm":
        """Canonical representative of self modulo the hyperplane functional.

        Adds the right multiple of (e+f+g-a-b-c-d-1) to zero out the g
        coefficient; two forms agree on V iff their canonicals are equal.
        """
        cg = self.coeffs[6]
        if cg == 0:
            return self
        coeffs = tuple(x - Fraction(h) * cg for x, h in zip(self.coeffs, _HYPER))
        return AffineLinearForm(self.const + cg, coeffs)

    def key(self) -> tuple:
        c = self.canonical()
        return (c.const, c.coeffs)

    def equivalent_on_v(self, other: "AffineLinearForm") -> bool:
        return self.key() == other.key()

    def evaluate(self, x: Sequence):
        """Evaluate at a point given as a 7-sequence of numbers.

        Uses only integer multiplications/divisions against the point's own
        arithmetic, so mpf/mpc inputs stay at full working precision.
        """
        total = x[0] * 0
        for c, xi in zip(self.coeffs, x):
            if c:
                t = xi * c.numerator
                if c.denominator != 1:
                    t = t / c.denominator
                total = total + t
        if self.const:
            t = (x[0] * 0 + self.const.numerator)
            if self.const.denominator != 1:
                t = t / self.const.denominator
            total = total + t
        return total

    def __str__(self):
        parts = []
        if self.const:
            parts.append(str(self.const))
        for c, v in zip(self.coeffs, VARS):
            if not c:
                continue
            if c == 1:
                parts.append(f"+{v}" if parts else v)
            elif c == -1:
                parts.append(f"-{v}")
            else:
                parts.append(f"{'+' if c > 0 and parts else ''}{c}{v}")
        return "".join(parts) if parts else "0"


def form(spec) -> AffineLinearForm:
    """Convenience constructor: form('a'), form(1), or pass a form through."""
    if isinstance(spec, AffineLinearForm):
        return spec
    if isinstance(spec, str) and spec in VARS:
        return AffineLinearForm.variable(spec)
    return AffineLinearForm.constant(spec)


A, B, C, D, E, F, G = (AffineLinearForm.variable(v) for v in VARS)

#: the defining functional e+f+g-a-b-c-d (equal to 1 on V)
HYPERPLANE_FUNCTIONAL = AffineLinearForm(Fraction(0), tuple(Fraction(h) for h in _HYPER))


class GroupClosure:
    """Breadth-first closure of a set of generators, with word bookkeeping.

    Elements are stored in BFS order (identity first).  `parent[i]` and
    `via[i]` record one product decomposition elements[i] =
    elements[parent[i]] @ generators[via[i]], from which a (not
    necessarily reduced) word in the generators is reconstructed.
    """

    def __init__(self, elements, index, parent, via, generators):
        self.elements: list[ExactMatrix7] = elements
        self.index: dict[bytes, int] = index
        self.parent: list[int] = parent
        self.via: list[int] = via
        self.generators: list[ExactMatrix7] = generators

    def __len__(self):
        return len(self.elements)

    def __contains__(self, m: ExactMatrix7) -> bool:
        return m.key() in self.index

    def element_set(self) -> set[ExactMatrix7]:
        return set(self.elements)

    def index_of(self, m: ExactMatrix7) -> int:
        return self.index[m.key()]

    def word(self, i: int) -> tuple[int, ...]:
        """Generator indices whose left-to-right product is elements[i]."""
        out: list[int] = []
        while i != 0:
            out.append(self.via[i])
            i = self.parent[i]
        return tuple(reversed(out))


def enumerate_group(generators: Iterable[ExactMatrix7], max_order: int = 30000) -> GroupClosure:
    """Breadth-first closure under right multiplication by the generators.

    Deterministic: elements appear in BFS order starting from the identity.
    Raises GroupOrderExceededError if the closure passes `max_order`.
    """
    gens = list(generators)
    ident = ExactMatrix7.identity()
    elements = [ident]
    index = {ident.key(): 0}
    parent = [0]
    via = [-1]
    frontier = [0]
    while frontier:
        new_frontier = []
        for ei in frontier:
            cur = elements[ei]
            for gi, g in enumerate(gens):
                nxt = cur @ g
                k = nxt.key()
                if k not in index:
                    if len(elements) >= max_order:
                        raise GroupOrderExceededError(
                            f"closure exceeded max_order={max_order}"
                        )
                    index[k] = len(elements)
                    elements.append(nxt)
                    parent.append(ei)
                    via.append(gi)
                    new_frontier.append(index[k])
        frontier = new_frontier
    return GroupClosure(elements, index, parent, via, gens)
