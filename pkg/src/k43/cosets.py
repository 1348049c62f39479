"""The matrix groups fixing the K combination, their cosets, and labels.

G_K is the S-conjugate of the block permutation group on coordinates
2..7 (isomorphic to S6, fixes K pointwise); M_K adjoins the plain
transposition of the first two coordinates and is isomorphic to W(D6).
The 32 right G_K-cosets of M_K carry 6-bit labels through the
isomorphism: the label of mu is the sign pattern of s(mu)^{-1} applied
to the all-ones vector, which is constant on right cosets and
equivariant under right multiplication.  Representatives p_0..p_15,
n_0..n_15 are pinned by their explicit images

    p_{4q+r} x = (1+a_r-1_q, ..., 1+g_q-1_q),
    n_{4q+r} x = (1_q-a_r, ..., 1+1_q-g_q),

where (a_j,b_j,c_j,d_j) and (1_j,e_j,f_j,g_j) are left rotations of
(a,b,c,d) and (1,e,f,g).  Cycle notation for matrices follows the same
image convention: coordinate i of the image reads x_{pi(i)}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import coxeter
from .errors import NotInGroupError
from .exactlin import (
    A, B, C, D, E, F, G,
    AffineLinearForm,
    ExactMatrix7,
    GroupClosure,
    enumerate_group,
    form,
    mat_inverse,
)

_HYPER_ROW = np.array([-1, -1, -1, -1, 1, 1, 1], dtype=np.int64)

S_MATRIX = ExactMatrix7(np.array(
    [
        [1, 0, 0, 0, 0, 0, 0],
        [0, 0, 1, 1, 0, 0, 0],
        [0, 1, 0, 1, 0, 0, 0],
        [0, 1, 1, 0, 0, 0, 0],
        [0, 1, 1, 1, 1, 0, 0],
        [0, 1, 1, 1, 0, 1, 0],
        [0, 1, 1, 1, 0, 0, 1],
    ],
    dtype=np.int64,
))

A1_MATRIX = ExactMatrix7.from_rows(
    [
        [1, 1, 1, 0, 0, 0, 0],
        [0, 0, -1, 0, 0, 0, 0],
        [0, -1, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 1],
    ]
)

_H = Fraction(1, 2)
A2_MATRIX = ExactMatrix7.from_rows(
    [
        [0, 1, 1, 0, 0, 0, 0],
        [_H, _H, -_H, 0, 0, 0, 0],
        [_H, -_H, _H, 0, 0, 0, 0],
        [-_H, _H, _H, 1, 0, 0, 0],
        [-_H, _H, _H, 0, 1, 0, 0],
        [-_H, _H, _H, 0, 0, 1, 0],
        [-_H, _H, _H, 0, 0, 0, 1],
    ]
)

A3_MATRIX = ExactMatrix7.from_rows(
    [
        [0, 0, 1, 1, 0, 0, 0],
        [-_H, 1, _H, _H, 0, 0, 0],
        [_H, 0, _H, -_H, 0, 0, 0],
        [_H, 0, -_H, _H, 0, 0, 0],
        [-_H, 0, _H, _H, 1, 0, 0],
        [-_H, 0, _H, _H, 0, 1, 0],
        [-_H, 0, _H, _H, 0, 0, 1],
    ]
)

#: W(D6) words of the six M_K generators (the five S-conjugated adjacent
#: transpositions, then the plain transposition of coordinates 1,2)
GENERATOR_WORDS = (
    ("s1",),
    ("s2",),
    ("s3",),
    ("s4",),
    ("s5",),
    ("s1", "s2", "s1'", "s2", "s1"),
)


def perm_matrix(*cycles: tuple[int, ...]) -> ExactMatrix7:
    """Permutation matrix from disjoint cycles of 1-based coordinates.

    Coordinate i of the image reads x_{pi(i)} where pi maps each cycle
    entry to its successor, so e.g. the 4-cycle (1,2,3,4) sends x to
    (b,c,d,a,e,f,g).
    """
    pi = list(range(7))
    for cyc in cycles:
        for pos, val in enumerate(cyc):
            pi[val - 1] = cyc[(pos + 1) % len(cyc)] - 1
    m = np.zeros((7, 7), dtype=np.int64)
    for i in range(7):
        m[i, pi[i]] = 1
    return ExactMatrix7(m)


def _row_from_form(f: AffineLinearForm) -> list[Fraction]:
    """Linear row agreeing with the affine form on V (constant absorbed)."""
    return [c + f.const * Fraction(int(h)) for c, h in zip(f.coeffs, _HYPER_ROW)]


def matrix_from_forms(forms) -> ExactMatrix7:
    """A linear map whose action on V is the given 7 coordinate forms."""
    return ExactMatrix7.from_rows([_row_from_form(form(f)) for f in forms])


def action_key(m: ExactMatrix7) -> bytes:
    """Canonical key for the action of m on V.

    Two matrices act identically on V iff their rows differ by multiples
    of the hyperplane covector; reducing the last coefficient to zero and
    recording the absorbed constant makes the key unique.
    """
    g = m.num[:, 6].copy()
    canon = m.num - np.outer(g, _HYPER_ROW)
    block = np.concatenate([canon, g.reshape(7, 1)], axis=1)
    div = int(np.gcd.reduce(np.abs(block), axis=None))
    div = max(int(np.gcd(div, m.den)), 1)
    if div > 1:
        block = block // div
    return block.tobytes() + (m.den // div).to_bytes(4, "little")


def _rotate(seq, j):
    j %= len(seq)
    return seq[j:] + seq[:j]


def rep_image_forms(kind: str, index: int) -> list[AffineLinearForm]:
    """The printed coordinate forms of p_index or n_index applied to x."""
    q, r = divmod(index, 4)
    abcd_r = _rotate([A, B, C, D], r)
    one_q, e_q, f_q, g_q = _rotate([form(1), E, F, G], q)
    if kind == "p":
        head = [1 + v - one_q for v in abcd_r]
        tail = [1 + v - one_q for v in (e_q, f_q, g_q)]
    elif kind == "n":
        head = [one_q - v for v in abcd_r]
        tail = [1 + one_q - v for v in (e_q, f_q, g_q)]
    else:
        raise ValueError("kind must be 'p' or 'n'")
    return head + tail


@dataclass(frozen=True)
class CosetRep:
    kind: str
    index: int
    matrix: ExactMatrix7
    label: tuple[int, ...]
    element_index: int

    @property
    def name(self) -> str:
        return f"{self.kind}{self.index}"

    @property
    def label_bits(self) -> str:
        return coxeter.vector_to_bits(self.label)


class GroupTables:
    """Enumerated G_K and M_K with words, shadows, labels, and coset reps.

    `shadow[i]` is the image of element i under the isomorphism onto the
    signed 6x6 permutation representation of W(D6); `label_of_index`
    reads off the right-coset invariant from it.
    """

    def __init__(self):
        s_inv = mat_inverse(S_MATRIX)
        conj = lambda p: (S_MATRIX @ p) @ s_inv
        gk_gens = [conj(perm_matrix((i, i + 1))) for i in range(2, 7)]
        mk_gens = gk_gens + [perm_matrix((1, 2))]

        self.S = S_MATRIX
        self.S_inv = s_inv
        self.gk_closure: GroupClosure = enumerate_group(gk_gens, max_order=30000)
        self.mk_closure: GroupClosure = enumerate_group(mk_gens, max_order=30000)
        self.g_k_elements = self.gk_closure.element_set()
        self.m_k_elements = self.mk_closure.element_set()

        gen_shadows = [coxeter.phi(w) for w in GENERATOR_WORDS]
        n_elem = len(self.mk_closure)
        shadow = np.empty((n_elem, 6, 6), dtype=np.int64)
        shadow[0] = np.eye(6, dtype=np.int64)
        for i in range(1, n_elem):
            shadow[i] = shadow[self.mk_closure.parent[i]] @ gen_shadows[self.mk_closure.via[i]]
        self.shadow = shadow
        self.shadow_index = {shadow[i].tobytes(): i for i in range(n_elem)}

        self.action_index = {
            action_key(m): i for i, m in enumerate(self.mk_closure.elements)
        }

        self.reps: list[CosetRep] = []
        for kind in "pn":
            for index in range(16):
                i = self.index_by_action(rep_image_forms(kind, index))
                self.reps.append(
                    CosetRep(kind, index, self.mk_closure.elements[i],
                             self.label_of_index(i), i)
                )
        self.rep_by_name = {r.name: r for r in self.reps}
        self.rep_by_label = {r.label: r for r in self.reps}
        if len(self.rep_by_label) != 32:
            raise NotInGroupError("coset labels are not pairwise distinct")

        self.iota_matrix = self.mk_closure.elements[
            self.index_by_action([1 - A, 1 - B, 1 - C, 1 - D, 2 - E, 2 - F, 2 - G])
        ]

    # -- lookups ---------------------------------------------------------

    def index_by_action(self, forms) -> int:
        key = action_key(matrix_from_forms(forms))
        if key not in self.action_index:
            raise NotInGroupError("no element of M_K has that action on V")
        return self.action_index[key]

    def element_by_action(self, forms) -> ExactMatrix7:
        return self.mk_closure.elements[self.index_by_action(forms)]

    def label_of_index(self, i: int) -> tuple[int, ...]:
        """Right-coset label: sign pattern of s(element)^{-1} on all-ones."""
        col_sums = self.shadow[i].sum(axis=0)
        return tuple(1 if v > 0 else -1 for v in col_sums)

    def word_of(self, m: ExactMatrix7) -> tuple[str, ...]:
        """A (not necessarily reduced) word in the W(D6) generators."""
        i = self.mk_closure.index_of(m)
        out: list[str] = []
        for gi in self.mk_closure.word(i):
            out.extend(GENERATOR_WORDS[gi])
        return tuple(out)

    def shadow_of(self, m: ExactMatrix7) -> np.ndarray:
        return self.shadow[self.mk_closure.index_of(m)]

    def element_by_shadow(self, w: np.ndarray) -> ExactMatrix7:
        k = np.asarray(w, dtype=np.int64).tobytes()
        if k not in self.shadow_index:
            raise NotInGroupError("signed permutation is not in the image of M_K")
        return self.mk_closure.elements[self.shadow_index[k]]

    def coset_of(self, m: ExactMatrix7) -> CosetRep:
        """The unique representative r with m @ r^{-1} in G_K."""
        key = m.key()
        if key not in self.mk_closure.index:
            raise NotInGroupError("matrix is not in M_K")
        label = self.label_of_index(self.mk_closure.index[key])
        return self.rep_by_label[label]

    def label_of(self, m: ExactMatrix7) -> tuple[int, ...]:
        key = m.key()
        if key not in self.mk_closure.index:
            raise NotInGroupError("matrix is not in M_K")
        return self.label_of_index(self.mk_closure.index[key])

    def in_g_k(self, m: ExactMatrix7) -> bool:
        return m in self.g_k_elements


_TABLES: GroupTables | None = None


def build_tables() -> GroupTables:
    """Build (once) and return the shared group tables."""
    global _TABLES
    if _TABLES is None:
        _TABLES = GroupTables()
    return _TABLES


def coset_representatives(tables: GroupTables | None = None) -> list[CosetRep]:
    tables = tables or build_tables()
    return list(tables.reps)


def iota(tables: GroupTables | None = None) -> ExactMatrix7:
    """The central involution: x -> (1-a, 1-b, 1-c, 1-d, 2-e, 2-f, 2-g)."""
    tables = tables or build_tables()
    return tables.iota_matrix


#: printed label table (golden data for the 32 cosets)
PRINTED_LABELS = {
    "p0": "000000", "p1": "011000", "p2": "101000", "p3": "110000",
    "p4": "000011", "p5": "011011", "p6": "101011", "p7": "110011",
    "p8": "000101", "p9": "011101", "p10": "101101", "p11": "110101",
    "p12": "000110", "p13": "011110", "p14": "101110", "p15": "110110",
    "n0": "111111", "n1": "100111", "n2": "010111", "n3": "001111",
    "n4": "111100", "n5": "100100", "n6": "010100", "n7": "001100",
    "n8": "111010", "n9": "100010", "n10": "010010", "n11": "001010",
    "n12": "111001", "n13": "100001", "n14": "010001", "n15": "001001",
}
