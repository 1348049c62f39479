"""The Coxeter group W(D6) as signed 6x6 permutation matrices.

Generators follow the D6 diagram with vertices {1', 1, 2, 3, 4, 5}: the
five unprimed generators map to adjacent-transposition matrices and the
primed one to the sign-flipping transposition of the first two
coordinates.  The group acts on the 32-element set Omega of even-sign
vectors; Hamming distance on Omega classifies unordered triples into
five orbits, and `find_transporter` realizes the orbit equivalence
constructively (move first components to the all-ones vector, then match
the -1 index sets of the remaining two components block by block).
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import DistanceMismatchError, IllegalTypeError, ParityError

GENERATOR_NAMES = ("s1'", "s1", "s2", "s3", "s4", "s5")

#: Coxeter matrix m(i,j) in the order of GENERATOR_NAMES (1' adjacent to 2 only)
COXETER_MATRIX = np.array(
    [
        [1, 2, 3, 2, 2, 2],
        [2, 1, 3, 2, 2, 2],
        [3, 3, 1, 3, 2, 2],
        [2, 2, 3, 1, 3, 2],
        [2, 2, 2, 3, 1, 3],
        [2, 2, 2, 2, 3, 1],
    ]
)

OMEGA_0 = (1, 1, 1, 1, 1, 1)


def generator_matrix(n: int, i: int, j: int, sign: int = 1) -> np.ndarray:
    """The monomial matrix M_n^sign(i, j) for the transposition (i, j).

    1-based indices, 1 <= i < j <= n.  Off-diagonal entries carry `sign`.
    """
    if not (1 <= i < j <= n):
        raise IndexError(f"need 1 <= i < j <= n, got ({i}, {j}) with n={n}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    m = np.eye(n, dtype=np.int64)
    m[i - 1, i - 1] = m[j - 1, j - 1] = 0
    m[i - 1, j - 1] = m[j - 1, i - 1] = sign
    return m


def _generator_images() -> dict[str, np.ndarray]:
    imgs = {"s1'": generator_matrix(6, 1, 2, -1)}
    for k in range(1, 6):
        imgs[f"s{k}"] = generator_matrix(6, k, k + 1, 1)
    return imgs


GENERATOR_IMAGES = _generator_images()


def phi(word: Iterable[str]) -> np.ndarray:
    """Image of a word in the generators; the empty word maps to identity."""
    m = np.eye(6, dtype=np.int64)
    for name in word:
        m = m @ GENERATOR_IMAGES[name]
    return m


def is_signed_permutation(m: np.ndarray) -> bool:
    """Monomial with entries in {-1,0,1} and an even number of -1 entries."""
    if m.shape != (6, 6):
        return False
    if not np.all(np.isin(m, (-1, 0, 1))):
        return False
    nonzero = m != 0
    if not (np.all(nonzero.sum(axis=0) == 1) and np.all(nonzero.sum(axis=1) == 1)):
        return False
    return int((m == -1).sum()) % 2 == 0


def check_omega(w: Sequence[int]) -> tuple[int, ...]:
    w = tuple(int(v) for v in w)
    if len(w) != 6 or any(v not in (1, -1) for v in w):
        raise ParityError(f"not a sign vector: {w}")
    if sum(v == -1 for v in w) % 2:
        raise ParityError(f"odd number of -1 entries: {w}")
    return w


def omega_elements() -> list[tuple[int, ...]]:
    """The 32 even sign vectors, ordered by their 6-bit label."""
    out = []
    for bits in range(64):
        vec = tuple(-1 if (bits >> (5 - k)) & 1 else 1 for k in range(6))
        if sum(v == -1 for v in vec) % 2 == 0:
            out.append(vec)
    return out


OMEGA = omega_elements()


def vector_to_bits(w: Sequence[int]) -> str:
    """Label string: digit k is 0 where coordinate k is positive."""
    return "".join("0" if v > 0 else "1" for v in w)


def bits_to_vector(bits: str) -> tuple[int, ...]:
    return check_omega(tuple(1 if ch == "0" else -1 for ch in bits))


def act(m: np.ndarray, w: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(v) for v in (m @ np.array(w, dtype=np.int64)))


def hamming_distance(w1: Sequence[int], w2: Sequence[int]) -> int:
    """Number of disagreeing coordinates; always 0, 2, 4, or 6 on Omega."""
    w1, w2 = check_omega(w1), check_omega(w2)
    return sum(a != b for a, b in zip(w1, w2))


def classify_triple(triple: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """Sorted multiset of the three pairwise Hamming distances."""
    t = [check_omega(w) for w in triple]
    if len({t[0], t[1], t[2]}) != 3:
        raise ValueError("triple members must be pairwise distinct")
    dists = tuple(
        sorted(
            (
                hamming_distance(t[0], t[1]),
                hamming_distance(t[0], t[2]),
                hamming_distance(t[1], t[2]),
            )
        )
    )
    if dists not in LEGAL_TYPES:
        raise IllegalTypeError(f"impossible distance multiset {dists}")
    return dists


LEGAL_TYPES = ((2, 2, 2), (2, 2, 4), (2, 4, 4), (4, 4, 4), (2, 4, 6))


def type_string(t: Sequence[int]) -> str:
    return "".join(str(d) for d in t)


def _to_omega0(w: Sequence[int]) -> np.ndarray:
    """Matrix of a greedy generator word moving w to the all-ones vector.

    Repeatedly bubbles the two leftmost -1 entries to coordinates 1,2 with
    adjacent swaps (one generator per step, never increasing the distance
    to the all-ones vector) and clears the pair with the primed generator.
    """
    w = list(check_omega(w))
    m = np.eye(6, dtype=np.int64)

    def apply(name: str):
        nonlocal m, w
        g = GENERATOR_IMAGES[name]
        w = list(act(g, w))
        m = g @ m

    while any(v == -1 for v in w):
        neg = [k for k, v in enumerate(w) if v == -1]  # 0-based
        i, j = neg[0], neg[1]
        while i > 0:  # s_i swaps 0-based coordinates (i-1, i)
            apply(f"s{i}")
            i -= 1
        while j > 1:
            apply(f"s{j}")
            j -= 1
        apply("s1'")
    return m


def _block_matching_permutation(
    src_sets: tuple[set, set], dst_sets: tuple[set, set]
) -> np.ndarray:
    """Plain permutation matrix carrying the src -1 index partition to dst.

    Matches intersection, both differences, and the complement block by
    block, smallest index first (deterministic tie-break).
    """
    t = set(range(6))
    s2, s3 = src_sets
    d2, d3 = dst_sets
    out = np.zeros((6, 6), dtype=np.int64)
    for src_block, dst_block in (
        (s2 & s3, d2 & d3),
        (s2 - s3, d2 - d3),
        (s3 - s2, d3 - d2),
        (t - s2 - s3, t - d2 - d3),
    ):
        if len(src_block) != len(dst_block):
            raise DistanceMismatchError("incompatible -1 index blocks")
        for a, b in zip(sorted(src_block), sorted(dst_block)):
            out[b, a] = 1  # value at coordinate a moves to coordinate b
    return out


def find_transporter(
    src: Sequence[Sequence[int]], dst: Sequence[Sequence[int]]
) -> np.ndarray:
    """A signed permutation w with w@src[i] = dst[i] for i = 0,1,2.

    Requires matching pairwise distances; the construction moves src[0]
    and dst[0] to the all-ones vector and matches -1 index sets of the
    rest.  The postcondition is asserted before returning.
    """
    src = [check_omega(v) for v in src]
    dst = [check_omega(v) for v in dst]
    for i, j in combinations(range(len(src)), 2):
        if hamming_distance(src[i], src[j]) != hamming_distance(dst[i], dst[j]):
            raise DistanceMismatchError(
                f"d(src[{i}],src[{j}]) != d(dst[{i}],dst[{j}])"
            )
    w_src = _to_omega0(src[0])
    w_dst = _to_omega0(dst[0])
    src_moved = [set(k for k, v in enumerate(act(w_src, s)) if v == -1) for s in src[1:]]
    dst_moved = [set(k for k, v in enumerate(act(w_dst, d)) if v == -1) for d in dst[1:]]
    while len(src_moved) < 2:
        src_moved.append(set())
        dst_moved.append(set())
    perm = _block_matching_permutation(
        (src_moved[0], src_moved[1]), (dst_moved[0], dst_moved[1])
    )
    w = w_dst.T @ perm @ w_src
    for s, d in zip(src, dst):
        assert act(w, s) == d, "transporter postcondition failed"
    return w


def omega_orbit_census() -> dict[tuple[int, int, int], int]:
    """Exhaustive count of unordered distinct triples per Hamming type."""
    census: dict[tuple[int, int, int], int] = {}
    for t in combinations(OMEGA, 3):
        key = classify_triple(t)
        census[key] = census.get(key, 0) + 1
    return census


def enumerate_wd6() -> dict[bytes, tuple[str, ...]]:
    """All 23040 signed permutation matrices, keyed by bytes, with one word each."""
    ident = np.eye(6, dtype=np.int64)
    seen: dict[bytes, tuple[str, ...]] = {ident.tobytes(): ()}
    frontier = [(ident, ())]
    while frontier:
        new_frontier = []
        for m, word in frontier:
            for name in GENERATOR_NAMES:
                nxt = m @ GENERATOR_IMAGES[name]
                k = nxt.tobytes()
                if k not in seen:
                    seen[k] = word + (name,)
                    new_frontier.append((nxt, seen[k]))
        frontier = new_frontier
    return seen
