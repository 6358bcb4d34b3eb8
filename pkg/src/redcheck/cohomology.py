"""Predicted compactly supported cohomology and its Lefschetz comparison.

A prediction is a list of pieces H_c^i ⊇ (ψ-isotypic part).  The alternating
trace of g ∘ Frob^m over all pieces must equal the number of fixed points of
g ∘ Frob^m, and the ψ-part alone must equal the character sum
S_ψ(m) = Σ_{y} ψ(Tr rhs(y)) over the linear locus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .actions import (
    VarietyAction,
    shift_action,
    sign_action,
    translation_action,
    twisted_count,
)
from .cyclic_rep import restrict_to_sum_zero, q_nu_form
from .cyclotomic import AdditiveChar, CycInt, gauss_sum
from .gf_core import GF, jacobi_symbol, legendre
from .qform import QuadForm, invariants
from .variety import VarietySystem, count_points, reduction_case, rhs_trace_histogram


@dataclass(frozen=True)
class Twist:
    """An automorphism g composed with Frob^m; ``kind`` in id/translate/gamma/sign/central."""

    kind: str = "id"
    arg: int = 0

    def __str__(self) -> str:
        return self.kind if self.kind in ("id", "sign") else f"{self.kind}({self.arg})"


@dataclass
class CohPiece:
    degree: int
    psi: int
    dim: int
    frob: CycInt | None  # scalar of Frob_q when the piece is one-dimensional
    frob_trace: CycInt | None = None  # trace of Frob_q when only that is known
    actions: dict = field(default_factory=dict)  # twist kind -> scalar (or callable arg -> scalar)
    traces0: dict = field(default_factory=dict)  # twist kind -> trace of g alone, g not scalar

    def scalar(self, tw: Twist) -> CycInt | int | None:
        if tw.kind == "id":
            return 1
        a = self.actions.get(tw.kind)
        if a is None:
            return None
        return a(tw.arg) if callable(a) else a

    def frob_power_trace(self, m: int, N: int) -> CycInt | None:
        if m == 0:
            return CycInt.integer(N, self.dim)
        if self.frob is not None and self.dim == 1:
            return self.frob**m
        if m == 1 and self.frob_trace is not None:
            return self.frob_trace
        return None


@dataclass
class CohPrediction:
    q: int
    p: int
    pieces: list[CohPiece]
    label: str = ""
    notes: tuple[str, ...] = ()

    @property
    def N(self) -> int:
        return self.p

    def trace(self, m: int, tw: Twist = Twist(), psi: int | None = None) -> CycInt | None:
        """Σ_i (-1)^i tr(g Frob^m | H_c^i) over all pieces (or one ψ-part)."""
        acc = CycInt.integer(self.N, 0)
        for pc in self.pieces:
            if psi is not None and pc.psi != psi:
                continue
            if m == 0 and tw.kind in pc.traces0:
                term = CycInt.integer(self.N, pc.traces0[tw.kind])
            else:
                s = pc.scalar(tw)
                t = pc.frob_power_trace(m, self.N)
                if s is None or t is None:
                    return None
                term = t * s
            acc = acc + (term if pc.degree % 2 == 0 else -term)
        return acc

    def degrees(self) -> list[int]:
        return sorted({pc.degree for pc in self.pieces})


def _psi(F: GF, a: int) -> AdditiveChar:
    return AdditiveChar(F, a)


# ---------------------------------------------------------------------------
# quadratic forms


def predict_quadratic(Q: QuadForm, literal: bool = False) -> CohPrediction:
    """Cohomology of {z^q - z = Q(y)} over F_q (Q nonzero).

    Odd p: ψ-parts in degree 2m - r with Frobenius (-1)^{2m-r} (det Q_nd | q) g(ψ)^r q^{m-r}.
    p = 2: if Q is nonzero on the radical of its polar form, the ψ-parts vanish;
    otherwise they sit in degree 2m - r with Frobenius (-1)^r ψ_0(Tr Arf) q^{m-r/2}.
    ``literal`` uses degree 2m - 2ε - r and q^{m-ε-r/2} with ε = [a zero line occurs]
    in characteristic 2, which disagrees with point counts whenever Q has a radical.
    """
    F = Q.field
    if Q.is_zero():
        raise ValueError("Q must be nonzero")
    inv = invariants(Q)
    m, r, q, p = Q.dim, inv.rank, F.order, F.p
    N = p
    pieces = [CohPiece(2 * m, 0, 1, CycInt.integer(N, q**m), actions={"translate": CycInt.integer(N, 1)})]
    notes: list[str] = []
    if p != 2:
        sym = 1 if inv.det_square else -1
        deg = 2 * m - r
        for a in range(1, q):
            chi = _psi(F, a)
            g = gauss_sum(chi)
            scal = g**r * (sym * (-1) ** deg * q ** (m - r))
            pieces.append(CohPiece(deg, a, 1, scal, actions={"translate": _translate(chi)}))
        return CohPrediction(q, p, pieces, "quadratic", tuple(notes))
    if literal:
        eps = 1 if inv.zero_lines else 0
        deg = 2 * m - 2 * eps - r
        exp = m - eps - r // 2
        sign = 1 if inv.arf in (0, None) else -1  # arf is undefined when a line is nonzero
        notes.append("literal characteristic-2 formula")
    else:
        if inv.ql_lines:
            notes.append("Q is nonzero on the radical: ψ-parts vanish")
            return CohPrediction(q, p, pieces, "quadratic", tuple(notes))
        deg = 2 * m - r
        exp = m - r // 2
        sign = inv.arf_sign
    for a in range(1, q):
        chi = _psi(F, a)
        scal = CycInt.integer(N, sign * (-1) ** deg * q**exp)
        pieces.append(CohPiece(deg, a, 1, scal, actions={"translate": _translate(chi)}))
    return CohPrediction(q, p, pieces, "quadratic", tuple(notes))


def _translate(chi: AdditiveChar):
    return lambda x: chi(x)


# ---------------------------------------------------------------------------
# odd ν


def predict_odd(n: int, nu: int, F: GF) -> CohPrediction:
    """Cohomology of Z_ν for odd ν from the closed formulas (1 <= ν < 2n)."""
    if nu % 2 == 0:
        raise ValueError("ν must be odd")
    nu_r = nu % (2 * n)
    d = math.gcd(n, nu_r)
    q, p = F.order, F.p
    N = p
    mu = (nu_r - 1) // 2
    shift_sign = (-1) ** (n - 1)
    pieces = []
    top = 2 * (n - 1)
    if d == n:
        for a in range(q):
            chi = _psi(F, a)
            acts = {"translate": _translate(chi), "gamma": 1 if a == 0 else shift_sign, "sign": 1 if a == 0 else shift_sign}
            pieces.append(CohPiece(top, a, 1, CycInt.integer(N, q ** (n - 1)), actions=acts))
        return CohPrediction(q, p, pieces, f"odd n={n} nu={nu}")
    pieces.append(
        CohPiece(top, 0, 1, CycInt.integer(N, q ** (n - 1)), actions={"translate": CycInt.integer(N, 1), "gamma": 1, "sign": 1})
    )
    deg = n + d - 2
    for a in range(1, q):
        chi = _psi(F, a)
        if p == 2:
            if n % 2 == 0:  # pragma: no cover
                raise ValueError("p = 2 needs n odd")
            scal = CycInt.integer(N, jacobi_symbol(q, n // d) * q ** ((n + d - 2) // 2))
        elif n % 2:
            g = gauss_sum(chi)
            scal = g ** (n - d) * (legendre(n // d, F) * q ** (d - 1))
        else:
            g = gauss_sum(chi)
            c = -(legendre(-1 % p, F) ** mu) * legendre(2, F) * legendre(n // d, F)
            scal = g ** (n - d) * (c * q ** (d - 1))
        acts = {"translate": _translate(chi), "gamma": shift_sign, "sign": shift_sign}
        pieces.append(CohPiece(deg, a, 1, scal, actions=acts))
    return CohPrediction(q, p, pieces, f"odd n={n} nu={nu}")


def odd_via_quadratic(n: int, nu: int, F: GF) -> CohPrediction:
    """Second route for odd ν: the quadratic-form prediction for Q_ν on Σ y = 0."""
    _, r = reduction_case(n, nu)
    Q = restrict_to_sum_zero(q_nu_form(n, r, F))  # equals the right-hand side of Z_ν
    if Q.is_zero():
        raise ValueError("Q_ν vanishes on the sum-zero hyperplane")
    return predict_quadratic(Q)


# ---------------------------------------------------------------------------
# even ν


def predict_even(n: int, nu: int, F: GF) -> CohPrediction:
    """Even ν with gcd(n, ν) = 1: one block of dimension q^{n-1} per ψ ≠ 1 in degree n - 1."""
    if nu % 2:
        raise ValueError("ν must be even")
    if math.gcd(n, nu % (2 * n)) != 1:
        raise ValueError("gcd(n, ν) must be 1")
    q, p = F.order, F.p
    N = p
    pieces = [
        CohPiece(
            2 * (n - 1),
            0,
            1,
            CycInt.integer(N, q ** (n - 1)),
            actions={"central": CycInt.integer(N, 1), "gamma": 1},
        )
    ]
    for a in range(1, q):
        chi = _psi(F, a)
        pieces.append(
            CohPiece(
                n - 1,
                a,
                q ** (n - 1),
                None,
                frob_trace=CycInt.integer(N, q ** (n - 1)),
                actions={"central": _translate(chi)},
                traces0={"gamma": 1},
            )
        )
    return CohPrediction(q, p, pieces, f"even n={n} nu={nu}", ("Frobenius traces beyond m = 1 are not predicted",))


def even_block_dimension(sys: VarietySystem, a: int, budget: float = 1e7) -> int | None:
    """dim of the ψ_a-block from |S_ψ(n)|^2 = dim^2 q^{n(n-1)} (Frob^n is a scalar of weight n-1)."""
    n = sys.m
    F = sys.field
    hist = rhs_trace_histogram(sys, n, budget)
    S = _psi(F, a).from_histogram(hist)
    norm = (S * S.conj()).to_int()
    q = F.order
    w = q ** (n * (n - 1))
    if norm % w:
        return None
    d = math.isqrt(norm // w)
    return d if d * d * w == norm else None


# ---------------------------------------------------------------------------
# verification


@dataclass
class LefschetzRecord:
    twist: str
    m: int
    psi: int | None
    predicted: str
    observed: str
    ok: bool


def psi_sums(sys: VarietySystem, e: int, budget: float = 1e7, cache=None) -> dict[int, CycInt]:
    if cache is None:
        hist = rhs_trace_histogram(sys, e, budget)
    else:
        key = f"{sys.to_text()}\ne={e}\nhistogram"
        hist = np.array(cache.get_or_compute(key, lambda: rhs_trace_histogram(sys, e, budget).tolist()))
    F = sys.field
    return {a: _psi(F, a).from_histogram(hist) for a in range(F.order)}


def _action_for(sys: VarietySystem, tw: Twist) -> VarietyAction:
    if tw.kind == "gamma":
        return shift_action(sys, tw.arg)
    if tw.kind == "sign":
        return sign_action(sys)
    if tw.kind in ("translate", "central"):
        # a central S_1/S_2 element (v, 0) acts as the translation z -> z + v
        return translation_action(sys, tw.arg)
    raise ValueError(f"no action for {tw}")


def observed_count(sys: VarietySystem, tw: Twist, m: int, budget: float = 1e7, cache=None, action=None) -> int:
    """#{P : g(F^m P) = P}, optionally through a persistent cache keyed by the system text."""

    def compute() -> int:
        if tw.kind == "id":
            return count_points(sys, m, budget)
        return twisted_count(action or _action_for(sys, tw), m, budget)

    if cache is None:
        return compute()
    return cache.get_or_compute(f"{sys.to_text()}\ne={m}\ntwist={tw}", compute)


def lefschetz_verify(pred: CohPrediction, sys: VarietySystem, jobs, budget: float = 1e7, by_psi: bool = True, cache=None):
    """Compare the prediction with counts for each (Twist, m) in ``jobs``.

    Untwisted jobs are also compared ψ-part by ψ-part against S_ψ(m).
    """
    out: list[LefschetzRecord] = []
    for tw, m in jobs:
        predicted = pred.trace(m, tw)
        if predicted is None:
            raise ValueError(f"prediction does not cover {tw} with m = {m}")
        observed = observed_count(sys, tw, m, budget, cache)
        ok = predicted.is_integer() and predicted.to_int() == observed
        out.append(LefschetzRecord(str(tw), m, None, str(predicted), str(observed), ok))
        if by_psi and tw.kind == "id" and m >= 1:
            sums = psi_sums(sys, m, budget, cache)
            for a, S in sums.items():
                pa = pred.trace(m, tw, psi=a)
                if pa is None:
                    continue
                out.append(LefschetzRecord(str(tw), m, a, str(pa), str(S), pa == S))
    return out
