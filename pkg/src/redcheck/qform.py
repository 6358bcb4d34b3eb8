"""Quadratic forms over F_q, their normal forms and invariants.

A form is stored as an upper-triangular matrix C with Q(x) = Σ_{i<=j} C_ij x_i x_j.
In odd characteristic the normal form is diagonal; in characteristic 2 it is an
orthogonal sum of planes a x² + xy + b y², lines c z² and zero lines.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import linalg
from .cyclotomic import iter_points
from .gf_core import GF, get_field
from .poly import Poly


@dataclass(frozen=True)
class QuadForm:
    field: GF
    C: tuple[tuple[int, ...], ...]

    @classmethod
    def from_matrix(cls, F: GF, C) -> "QuadForm":
        m = len(C)
        rows = tuple(tuple(int(C[i][j]) if j >= i else 0 for j in range(m)) for i in range(m))
        return cls(F, rows)

    @classmethod
    def from_dict(cls, F: GF, m: int, coeffs: dict[tuple[int, int], int]) -> "QuadForm":
        """Build from {(i, j): c} with i <= j; repeated keys in the other order are merged."""
        C = [[0] * m for _ in range(m)]
        for (i, j), c in coeffs.items():
            i, j = min(i, j), max(i, j)
            C[i][j] = F.add(C[i][j], c)
        return cls.from_matrix(F, C)

    @classmethod
    def zero(cls, F: GF, m: int) -> "QuadForm":
        return cls.from_matrix(F, [[0] * m for _ in range(m)])

    @property
    def dim(self) -> int:
        return len(self.C)

    @property
    def p(self) -> int:
        return self.field.p

    def is_zero(self) -> bool:
        return all(c == 0 for row in self.C for c in row)

    def __call__(self, x) -> int:
        F = self.field
        acc = 0
        for i in range(self.dim):
            if x[i]:
                for j in range(i, self.dim):
                    c = self.C[i][j]
                    if c and x[j]:
                        acc = F.add(acc, F.mul(c, F.mul(x[i], x[j])))
        return acc

    def evaluate(self, arrays) -> np.ndarray:
        return self.to_poly().evaluate(arrays)

    def polar(self, u, v) -> int:
        """Q(u+v) - Q(u) - Q(v)."""
        F = self.field
        w = [F.add(a, b) for a, b in zip(u, v)]
        return F.sub(F.sub(self(w), self(u)), self(v))

    def polar_matrix(self) -> linalg.Matrix:
        F, m = self.field, self.dim
        A = [[0] * m for _ in range(m)]
        for i in range(m):
            A[i][i] = F.add(self.C[i][i], self.C[i][i])
            for j in range(i + 1, m):
                A[i][j] = A[j][i] = self.C[i][j]
        return A

    def gram_matrix(self) -> linalg.Matrix:
        """b_Q = polar/2; odd characteristic only."""
        F = self.field
        if F.p == 2:
            raise ValueError("the symmetric bilinear form needs odd characteristic")
        half = F.inv(2 % F.p)
        return [[F.mul(half, a) for a in row] for row in self.polar_matrix()]

    def compose(self, M: linalg.Matrix) -> "QuadForm":
        """The form u -> Q(M u); M is dim x m'."""
        F = self.field
        cols = linalg.columns(M)
        m2 = len(cols)
        C = [[0] * m2 for _ in range(m2)]
        for i in range(m2):
            C[i][i] = self(cols[i])
            for j in range(i + 1, m2):
                C[i][j] = self.polar(cols[i], cols[j])
        return QuadForm.from_matrix(F, C)

    def direct_sum(self, other: "QuadForm") -> "QuadForm":
        m1, m2 = self.dim, other.dim
        C = [[0] * (m1 + m2) for _ in range(m1 + m2)]
        for i in range(m1):
            for j in range(m1):
                C[i][j] = self.C[i][j]
        for i in range(m2):
            for j in range(m2):
                C[m1 + i][m1 + j] = other.C[i][j]
        return QuadForm.from_matrix(self.field, C)

    def to_poly(self) -> Poly:
        terms = {}
        for i in range(self.dim):
            for j in range(i, self.dim):
                if self.C[i][j]:
                    e = [0] * self.dim
                    e[i] += 1
                    e[j] += 1
                    terms[tuple(e)] = self.C[i][j]
        return Poly(self.field, self.dim, terms)

    def __neg__(self) -> "QuadForm":
        F = self.field
        return QuadForm.from_matrix(F, [[F.negate(c) for c in row] for row in self.C])


# ---------------------------------------------------------------------------
# normal forms


@dataclass(frozen=True)
class Block:
    """One summand of a normal form.

    kind: "diag" (d x², odd p), "hyp" (a x² + xy + b y², p = 2),
    "line" (c z², p = 2, c != 0), "zero".
    """

    kind: str
    coeffs: tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return 2 if self.kind == "hyp" else 1

    def form(self, F: GF) -> QuadForm:
        if self.kind == "hyp":
            a, b = self.coeffs
            return QuadForm.from_matrix(F, [[a, 1], [0, b]])
        if self.kind in ("diag", "line"):
            return QuadForm.from_matrix(F, [[self.coeffs[0]]])
        return QuadForm.zero(F, 1)


def block_form(F: GF, blocks: list[Block]) -> QuadForm:
    out = QuadForm.zero(F, 0)
    for b in blocks:
        out = out.direct_sum(b.form(F))
    return out


@dataclass(frozen=True)
class Decomposition:
    M: linalg.Matrix  # columns are the new basis vectors
    blocks: tuple[Block, ...]


def _diagonalize(Q: QuadForm) -> Decomposition:
    F, m = Q.field, Q.dim
    B = Q.gram_matrix()

    def b(u, v):
        return linalg.mat_vec(F, [u], linalg.mat_vec(F, B, v))[0]

    remaining = [[int(i == j) for i in range(m)] for j in range(m)]
    chosen, blocks = [], []
    while remaining:
        v = next((u for u in remaining if b(u, u)), None)
        if v is None:
            pair = next(
                ((u, w) for u, w in itertools.combinations(remaining, 2) if b(u, w)),
                None,
            )
            if pair is None:
                break
            v = linalg.vec_add(F, *pair)
        bvv = b(v, v)
        rest = []
        for u in remaining:
            c = F.mul(b(u, v), F.inv(bvv))
            u2 = [F.sub(x, F.mul(c, y)) for x, y in zip(u, v)]
            if any(u2):
                rest.append(u2)
        # keep a basis of the orthogonal complement
        rest = _independent(F, rest, len(remaining) - 1)
        chosen.append(v)
        blocks.append(Block("diag", (bvv,)))
        remaining = rest
    chosen.extend(remaining)
    blocks.extend(Block("zero") for _ in remaining)
    return Decomposition(linalg.from_columns(chosen) if chosen else [], tuple(blocks))


def _independent(F: GF, vecs: list[list[int]], want: int) -> list[list[int]]:
    out: list[list[int]] = []
    for v in vecs:
        if linalg.rank(F, out + [v]) > len(out):
            out.append(v)
        if len(out) == want:
            break
    return out


def _quasi_diagonalize(Q: QuadForm) -> Decomposition:
    F, m = Q.field, Q.dim
    remaining = [[int(i == j) for i in range(m)] for j in range(m)]
    chosen, blocks = [], []
    while True:
        pair = next(
            ((u, w) for u, w in itertools.combinations(remaining, 2) if Q.polar(u, w)),
            None,
        )
        if pair is None:
            break
        e, w = pair
        f = linalg.vec_scale(F, F.inv(Q.polar(e, w)), w)
        rest = []
        for x in remaining:
            if x is pair[0] or x is pair[1]:
                continue
            x2 = linalg.vec_add(F, x, linalg.vec_scale(F, Q.polar(x, f), e))
            x2 = linalg.vec_add(F, x2, linalg.vec_scale(F, Q.polar(x, e), f))
            rest.append(x2)
        chosen += [e, f]
        blocks.append(Block("hyp", (Q(e), Q(f))))
        remaining = rest
    # radical of the polar form: Q is additive there, Q = ℓ² with ℓ linear
    sqrt = [F.frob(Q(w), F.k - 1) for w in remaining]
    pivot = next((i for i, s in enumerate(sqrt) if s), None)
    zeros = []
    if pivot is not None:
        u = linalg.vec_scale(F, F.inv(sqrt[pivot]), remaining[pivot])
        chosen.append(u)
        blocks.append(Block("line", (1,)))
        for i, w in enumerate(remaining):
            if i != pivot:
                zeros.append(linalg.vec_add(F, w, linalg.vec_scale(F, sqrt[i], u)))
    else:
        zeros = remaining
    chosen += zeros
    blocks += [Block("zero") for _ in zeros]
    return Decomposition(linalg.from_columns(chosen) if chosen else [], tuple(blocks))


def decompose(Q: QuadForm) -> Decomposition:
    """Change of basis M and blocks with Q∘M equal to the block form."""
    if Q.dim == 0:
        return Decomposition([], ())
    dec = _quasi_diagonalize(Q) if Q.p == 2 else _diagonalize(Q)
    if Q.compose(dec.M) != block_form(Q.field, list(dec.blocks)):  # pragma: no cover
        raise ArithmeticError("normal form round trip failed")
    return dec


# ---------------------------------------------------------------------------
# invariants


@dataclass(frozen=True)
class FormInvariants:
    """Invariants under invertible linear substitution.

    rank: rank of the nondegenerate part (2r' in characteristic 2).
    det_square: odd p only; whether det of the nondegenerate part is a square.
    zero_lines: number of zero lines in the normal form.
    ql_lines: characteristic 2 only; 1 if Q is nonzero on the radical of its
        polar form (one line c z²), else 0.
    arf: characteristic 2 only; Tr_{k/F_2} of the Arf invariant (0 or 1), or
        None when ql_lines = 1 (then the class depends on the splitting).
    """

    p: int
    rank: int
    det_square: bool | None = None
    zero_lines: int = 0
    ql_lines: int = 0
    arf: int | None = None

    @property
    def det_class(self) -> str | None:
        if self.det_square is None:
            return None
        return "square" if self.det_square else "nonsquare"

    @property
    def arf_sign(self) -> int | None:
        """ψ_0(Tr Arf) in {+1, -1}."""
        return None if self.arf is None else (-1) ** self.arf


def invariants(Q: QuadForm) -> FormInvariants:
    F = Q.field
    dec = decompose(Q)
    zeros = sum(1 for b in dec.blocks if b.kind == "zero")
    if Q.p != 2:
        d = 1
        r = 0
        for b in dec.blocks:
            if b.kind == "diag":
                d = F.mul(d, b.coeffs[0])
                r += 1
        return FormInvariants(Q.p, r, det_square=F.is_square(d), zero_lines=zeros)
    hyps = [b for b in dec.blocks if b.kind == "hyp"]
    lines = sum(1 for b in dec.blocks if b.kind == "line")
    arf = None
    if lines == 0:
        s = 0
        for b in hyps:
            s = F.add(s, F.mul(*b.coeffs))
        arf = absolute_trace(F, s)
    return FormInvariants(2, 2 * len(hyps), zero_lines=zeros, ql_lines=lines, arf=arf)


def absolute_trace(F: GF, x: int) -> int:
    acc, t = 0, x
    for _ in range(F.k):
        acc = F.add(acc, t)
        t = F.frob(t, 1)
    return acc


def nondegenerate(Q: QuadForm) -> bool:
    inv = invariants(Q)
    return inv.rank == Q.dim


def fiber_count(Q: QuadForm, t: int, budget: float = 1e7) -> int:
    F = Q.field
    if F.order**Q.dim > budget:
        from .cyclotomic import BudgetExceeded

        raise BudgetExceeded("fiber enumeration exceeds budget")
    P = Q.to_poly()
    count = 0
    for xs in iter_points(F.order, Q.dim):
        count += int(np.count_nonzero(P.evaluate(xs) == t)) if xs else int(t == 0)
    return count


def arf_by_counting(Q: QuadForm) -> int:
    F, m = Q.field, Q.dim
    if F.order != 2:
        raise ValueError("Arf by counting is stated over F_2")
    if m % 2 or not nondegenerate(Q):
        raise ValueError("form must be nondegenerate")
    r2 = m // 2
    n1 = fiber_count(Q, 1)
    lo, hi = 2 ** (m - 1) - 2 ** (r2 - 1), 2 ** (m - 1) + 2 ** (r2 - 1)
    if n1 == lo:
        return 0
    if n1 == hi:
        return 1
    raise ArithmeticError(f"fiber size {n1} matches neither {lo} nor {hi}")


def arf_census_f2(m: int) -> tuple[int, int]:
    """All nondegenerate quadratic forms on F_2^m: Arf by fiber counting vs Σ Q(e_i)Q(f_i).

    The symplectic basis (e_i, f_i) is taken for the polar form.  Forms are
    grouped by polar form so the 2^m choices of diagonal are handled at once.
    Returns (forms checked, disagreements).
    """
    if m % 2:
        return 0, 0
    size = 1 << m
    xs = np.arange(size)
    bits = (xs[:, None] >> np.arange(m)) & 1
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    cross = np.stack([bits[:, i] & bits[:, j] for i, j in pairs], axis=1) if pairs else np.zeros((size, 0), int)
    diag = np.array([[bin(x & d).count("1") & 1 for d in range(size)] for x in range(size)], dtype=np.int64)
    r2 = m // 2
    lo, hi = 2 ** (m - 1) - 2 ** (r2 - 1), 2 ** (m - 1) + 2 ** (r2 - 1)
    checked = bad = 0
    for mask in range(1 << len(pairs)):
        a = np.array([(mask >> k) & 1 for k in range(len(pairs))], dtype=np.int64)
        A = np.zeros((m, m), dtype=np.int64)
        for (i, j), v in zip(pairs, a):
            A[i, j] = A[j, i] = v
        basis = symplectic_basis_f2(A)
        if basis is None:
            continue
        off = (cross @ a) % 2
        Q = off[:, None] ^ diag  # Q[x, d]
        n1 = Q.sum(axis=0)
        counted = np.where(n1 == lo, 0, np.where(n1 == hi, 1, -1))
        algebraic = np.zeros(size, dtype=np.int64)
        for e, f in basis:
            algebraic ^= Q[e] & Q[f]
        checked += size
        bad += int(np.count_nonzero(counted != algebraic))
    return checked, bad


# ---------------------------------------------------------------------------
# corpora


def all_forms(F: GF, m: int) -> Iterator[QuadForm]:
    slots = [(i, j) for i in range(m) for j in range(i, m)]
    for vals in itertools.product(range(F.order), repeat=len(slots)):
        yield QuadForm.from_dict(F, m, dict(zip(slots, vals)))


def random_form(F: GF, m: int, rng: np.random.Generator) -> QuadForm:
    C = [[int(rng.integers(F.order)) if j >= i else 0 for j in range(m)] for i in range(m)]
    return QuadForm.from_matrix(F, C)


def random_invertible(F: GF, m: int, rng: np.random.Generator) -> linalg.Matrix:
    while True:
        M = [[int(rng.integers(F.order)) for _ in range(m)] for _ in range(m)]
        if linalg.det(F, M):
            return M


def symplectic_basis_f2(A: np.ndarray) -> list[tuple[int, int]] | None:
    """Symplectic basis of a nondegenerate alternating form over F_2.

    ``A`` is an m x m 0/1 matrix; vectors are returned as bit masks.  Returns
    None when the form is degenerate.
    """
    m = A.shape[0]
    rows = [sum(int(A[i, j]) << j for j in range(m)) for i in range(m)]

    def pair(u: int, v: int) -> int:
        acc = 0
        i = 0
        while u:
            if u & 1:
                acc ^= bin(rows[i] & v).count("1") & 1
            u >>= 1
            i += 1
        return acc

    vecs = [1 << i for i in range(m)]
    out = []
    while vecs:
        e = vecs[0]
        j = next((j for j in range(1, len(vecs)) if pair(e, vecs[j])), None)
        if j is None:
            return None
        f = vecs[j]
        rest = []
        for k, x in enumerate(vecs):
            if k in (0, j):
                continue
            if pair(x, f):
                x ^= e
            if pair(x, e):
                x ^= f
            rest.append(x)
        out.append((e, f))
        vecs = rest
    return out


def field_for(q: int) -> GF:
    from .gf_core import prime_factors

    (p,) = prime_factors(q)
    k = round(np.log(q) / np.log(p))
    return get_field(p, k)
