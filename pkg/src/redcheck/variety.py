"""Polynomial systems for Z_ν, X_0(Q) and Z_{ν,0}, with exact point counts.

Every system here has the shape

    y_1 + … + y_n = 0   (optional),    z^q - z = P(y),

so a point count over F_{q^e} reduces to a loop over y: the fibre of ℘ over c
has q points when Tr_{F_{q^e}/F_q}(c) = 0 and is empty otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cyclic_rep import q_nu_form
from .cyclotomic import BudgetExceeded, iter_points
from .gf_core import GF, embedding, get_field, relative_trace_vec
from .poly import Poly


def index_set_T(m: int, n: int) -> set[tuple[int, int]]:
    """T(m) as 1-based pairs (i, j), i < j."""
    if not 0 <= m <= n - 1:
        raise ValueError("need 0 <= m <= n-1")
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    if 2 * m < n:
        return {(i, j) for i, j in pairs if m < j - i < n - m}
    return {(i, j) for i, j in pairs if n - m <= j - i <= m}


def reduction_case(n: int, nu: int) -> tuple[int, int]:
    """(case number 1..5, ν mod 2n)."""
    if nu < 1:
        raise ValueError("ν must be positive")
    r = nu % (2 * n)
    if r % n == 0:
        return 1, r
    if r % 2:
        return (2 if r < n else 3), r
    return (4 if r < n else 5), r


@dataclass(frozen=True)
class VarietySystem:
    """{Σ y = 0 (if sum_zero), z^q - z = rhs(y)} over the field of ``rhs``.

    ``equations`` holds the same system as polynomials in (z, y_1, …, y_m).
    """

    rhs: Poly
    sum_zero: bool
    names: tuple[str, ...]
    equations: tuple[Poly, ...]
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def field(self) -> GF:
        return self.rhs.field

    @property
    def q(self) -> int:
        return self.field.order

    @property
    def m(self) -> int:
        return self.rhs.nvars

    @property
    def free_dim(self) -> int:
        return self.m - (1 if self.sum_zero else 0)

    def to_text(self) -> str:
        head = f"field GF({self.field.p}^{self.field.k}) modulus {list(self.field.modulus)}"
        lines = [head, "vars " + ",".join(self.names)]
        lines += ["eq " + eq.to_text(self.names) + " = 0" for eq in self.equations]
        return "\n".join(lines)


def _build(rhs: Poly, sum_zero: bool, yname: str = "y", meta=None) -> VarietySystem:
    F, m = rhs.field, rhs.nvars
    names = ("z",) + tuple(f"{yname}{i}" for i in range(1, m + 1))
    big_rhs = rhs.extend_vars(m + 1, list(range(1, m + 1)))
    z = Poly.var(F, m + 1, 0)
    eqs = [z ** F.order - z - big_rhs]
    if sum_zero:
        eqs.append(sum((Poly.var(F, m + 1, i) for i in range(1, m + 1)), Poly(F, m + 1)))
    return VarietySystem(rhs, sum_zero, names, tuple(eqs), dict(meta or {}))


def artin_schreier_system(P, m: int | None = None) -> VarietySystem:
    """{z^q - z = P(y)}; ``P`` is a Poly or a QuadForm."""
    if not isinstance(P, Poly):
        P = P.to_poly()
    if m is not None and m != P.nvars:
        raise ValueError("variable count mismatch")
    return _build(P, False, meta={"kind": "artin-schreier"})


def wp(P: Poly) -> Poly:
    """℘(P) = P^q - P."""
    return P.frobenius(P.field.k) - P


def z_nu_rhs(n: int, nu: int, F: GF) -> Poly:
    case, r = reduction_case(n, nu)
    ys = Poly.gens(F, n)
    zero = Poly(F, n)
    q = F.order
    Y = lambda i: ys[i - 1]  # noqa: E731
    if case == 1:
        return zero
    if case in (2, 3):
        mu = (r - 1) // 2
        s = sum((Y(i) * Y(j) for i, j in sorted(index_set_T(mu, n))), zero)
        return -s if case == 2 else s
    mu = r // 2
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    if case == 4:
        out = sum((wp(Y(i)) * wp(Y(j)) for i, j in sorted(index_set_T(mu, n))), zero)
        out += sum((wp(Y(i)) * Y(j) ** q for i, j in pairs if j - i == mu), zero)
        out += sum((Y(i) ** q * wp(Y(j)) for i, j in pairs if j - i == n - mu), zero)
        return out
    out = -sum((wp(Y(i)) * wp(Y(j)) for i, j in sorted(index_set_T(n - mu, n))), zero)
    out += sum((wp(Y(i)) * Y(j) for i, j in pairs if j - i == mu), zero)
    out += sum((Y(i) * wp(Y(j)) for i, j in pairs if j - i == n - mu), zero)
    return out


def z_nu_system(n: int, nu: int, F: GF) -> VarietySystem:
    case, r = reduction_case(n, nu)
    meta = {"kind": "z_nu", "n": n, "nu": nu, "nu_mod": r, "case": case}
    return _build(z_nu_rhs(n, nu, F), True, meta=meta)


def odd_quadratic_rhs(n: int, nu: int, F: GF) -> Poly:
    """Q_ν as a polynomial (odd ν), matching the case (2)/(3) right-hand side."""
    return q_nu_form(n, nu % (2 * n), F).to_poly()


# ---------------------------------------------------------------------------
# counting

_HIST_CACHE: dict = {}


def rhs_trace_histogram(
    sys: VarietySystem, e: int, budget: float = 1e7, chunk: int = 1 << 20, method: str = "auto"
) -> np.ndarray:
    """Histogram over F_q of Tr_{F_{q^e}/F_q} rhs(y) for y in the linear locus.

    ``method`` is "plain" (enumerate every free coordinate), "fibered" (tabulate
    one or two free coordinates, see ``fibered_histogram``) or "auto" (plain within
    the budget, fibered beyond it when the system allows).
    """
    if method not in ("auto", "plain", "fibered"):
        raise ValueError(f"unknown method {method}")
    F = sys.field
    big = get_field(F.p, F.k * e)
    total = big.order**sys.free_dim
    # the budget test runs before the memo lookup so results never depend on call order
    use_plain = method == "plain" or (method == "auto" and total <= budget)
    plan = None if use_plain else _fibered_plan(sys, e)
    need = total if use_plain else min(plan[-1].values()) if plan else math.inf
    if need > budget:
        raise BudgetExceeded(f"{total} points exceed budget {budget:g}")
    key = (sys.to_text(), e, use_plain)
    if key not in _HIST_CACHE:
        if use_plain:
            _HIST_CACHE[key] = _plain_histogram(sys, big, e, chunk)
        else:
            _HIST_CACHE[key] = _fibered_from_plan(sys, e, plan, None, chunk)
    return _HIST_CACHE[key]


def _plain_histogram(sys: VarietySystem, big: GF, e: int, chunk: int) -> np.ndarray:
    F = sys.field
    p, f = F.p, F.k
    P = sys.rhs.change_field(big)
    hist = np.zeros(F.order, dtype=np.int64)
    for free in iter_points(big.order, sys.free_dim, chunk):
        if sys.sum_zero:
            if free:
                y1 = big.vneg(big.vsum(free))
            else:
                y1 = np.zeros(1, dtype=np.int64)
            ys = [y1] + list(free)
        else:
            ys = list(free)
        if ys:
            vals = P.evaluate(ys)
        else:
            vals = np.array([P(())], dtype=np.int64)
        tr = relative_trace_vec(p, f, f * e, vals)
        hist += np.bincount(tr, minlength=F.order)
    return hist


def free_rhs(sys: VarietySystem) -> Poly:
    """rhs in the free coordinates, with y_1 = -(y_2 + … + y_m) on the sum-zero locus."""
    P = sys.rhs
    if not sys.sum_zero:
        return P
    F, k = P.field, sys.free_dim
    gens = Poly.gens(F, k)
    return P.compose([-sum(gens, Poly(F, k))] + gens)


def split_first(P: Poly) -> tuple[int, Poly, Poly] | None:
    """(a, L, R) with P = a x_1^2 + L x_1 + R and L, R free of x_1; None if P has no such shape."""
    F, k = P.field, P.nvars
    a, L, R = 0, {}, {}
    for ex, c in P.terms.items():
        head, tail = ex[0], ex[1:]
        if head == 0:
            R[tail] = c
        elif head == 1:
            L[tail] = c
        elif head == 2 and not any(tail):
            a = c
        else:
            return None
    return a, Poly(F, k - 1, L), Poly(F, k - 1, R)


def _split_linear(L: Poly) -> tuple[int, Poly] | None:
    """(c, L') with L = c x_1 + L' and L' free of x_1."""
    parts = split_first(L)
    if parts is None or parts[0]:
        return None
    lin, rest = parts[1], parts[2]
    if any(any(ex) for ex in lin.terms):
        return None
    return lin.terms.get((0,) * lin.nvars, 0), rest


def fibered_histogram(
    sys: VarietySystem, e: int, budget: float = 1e7, chunk: int = 1 << 20, levels: int | None = None
) -> np.ndarray | None:
    """The trace histogram with the first one or two free coordinates tabulated.

    One level: for rhs = a x^2 + L x + R, enumerate x once per value l of L into
    G[l, t] = #{x : Tr(a x^2 + l x) = t}, then enumerate the other coordinates
    and add G[L, ·] shifted by Tr R.  Two levels: write L = c x' + L' and
    R = b x'^2 + L_R x' + R' and tabulate x' as well, indexing by (L', L_R).
    Costs |K|^(d-1) + |K|^2 or |K|^(d-2) + |K|^3 evaluations instead of |K|^d.
    None when rhs has no such shape or the cost exceeds the budget.
    """
    plan = _fibered_plan(sys, e)
    if plan is None:
        return None
    costs = plan[-1]
    if levels is None:
        levels = min(costs, key=costs.get)
    if levels not in costs or costs[levels] > budget:
        return None
    return _fibered_from_plan(sys, e, plan, levels, chunk)


def _fibered_plan(sys: VarietySystem, e: int):
    """(a, L, R, second, costs) for ``fibered_histogram``, or None if rhs has no such shape."""
    big = get_field(sys.field.p, sys.field.k * e)
    K, d = big.order, sys.free_dim
    if d < 2:
        return None
    parts = split_first(free_rhs(sys).change_field(big))
    if parts is None:
        return None
    a, L, R = parts
    second = None
    if d >= 3:
        lin, quad = _split_linear(L), split_first(R)
        if lin is not None and quad is not None:
            second = (*lin, *quad)
    costs = {1: K ** (d - 1) + K * K}
    if second is not None:
        costs[2] = K ** (d - 2) + K**3
    return a, L, R, second, costs


def _fibered_from_plan(sys: VarietySystem, e: int, plan, levels: int | None, chunk: int) -> np.ndarray:
    a, L, R, second, costs = plan
    if levels is None:
        levels = min(costs, key=costs.get)
    F = sys.field
    p, f, q = F.p, F.k, F.order
    big = get_field(p, f * e)
    K, d = big.order, sys.free_dim

    def tr(vals):
        return relative_trace_vec(p, f, f * e, vals)

    x = np.arange(K, dtype=np.int64)
    sq = big.vmul(x, x)
    G = np.empty((K, q), dtype=np.int64)
    quad1 = big.vmul(np.full(K, a, dtype=np.int64), sq)
    for l in range(K):
        G[l] = np.bincount(tr(big.vadd(quad1, big.vmul(np.full(K, l, dtype=np.int64), x))), minlength=q)
    ts, ss = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    sub = F.vsub(ts, ss)  # sub[t, s] = t - s
    forms, rest = [L], R
    if levels == 2:
        c, L2, b, LR, R2 = second
        G2 = np.zeros((K, K, q), dtype=np.int64)
        for xv in range(K):
            rows = G[big.vadd(x, np.full(K, big.mul(c, xv), dtype=np.int64))]  # indexed by l'
            shift = tr(big.vadd(np.full(K, big.mul(b, int(sq[xv])), dtype=np.int64), big.vmul(x, np.full(K, xv))))
            G2 += rows[:, sub[:, shift].T]  # [l', l_R, t]
        G, forms, rest = G2, [L2, LR], R2
    M = np.zeros(G.size, dtype=np.int64)
    for ys in iter_points(K, d - levels, chunk):
        idx = tr(rest.evaluate(ys))
        stride = q
        for form in reversed(forms):
            idx = idx + form.evaluate(ys) * stride
            stride *= K
        idx = np.broadcast_to(idx, np.broadcast(*ys).shape if ys else idx.shape)
        M += np.bincount(idx.ravel(), minlength=G.size)
    W = M.reshape(-1, q).T @ G.reshape(-1, q)  # W[s, u]: Tr of the untabulated part s, tabulated part u
    hist = np.zeros(q, dtype=np.int64)
    np.add.at(hist, F.vadd(ss, ts).ravel(), W.ravel())
    return hist


def count_points(sys: VarietySystem, e: int = 1, budget: float = 1e7) -> int:
    hist = rhs_trace_histogram(sys, e, budget)
    return sys.q * int(hist[0])


def naive_count(sys: VarietySystem, e: int = 1, budget: float = 1e6) -> int:
    """Enumerate every variable over F_{q^e} and test all equations."""
    F = sys.field
    big = get_field(F.p, F.k * e)
    nv = len(sys.names)
    if big.order**nv > budget:
        raise BudgetExceeded("naive enumeration exceeds budget")
    eqs = [eq.change_field(big) for eq in sys.equations]
    count = 0
    for xs in iter_points(big.order, nv):
        ok = np.ones(len(xs[0]), dtype=bool)
        for eq in eqs:
            ok &= eq.evaluate(xs) == 0
        count += int(ok.sum())
    return count


# ---------------------------------------------------------------------------
# reduction modulo the image of ℘ (even ν)


def wp_reduce(P: Poly) -> Poly:
    """Replace c·M^q by c·M (c in F_q) until no monomial is a q-th power.

    ψ(Tr(c M^q)) = ψ(Tr(c M)) on F_{q^e}-points, so exponential sums are unchanged.
    """
    q = P.field.order
    terms: dict = {}
    for e, c in P.terms.items():
        while any(e) and all(a % q == 0 for a in e):
            e = tuple(a // q for a in e)
        terms[e] = P.field.add(terms.get(e, 0), c)
    return Poly(P.field, P.nvars, terms)


def even_top_form(n: int, nu: int, F: GF) -> Poly:
    """-Σ_i y_i Σ_{μ <= d < n-μ} y_{i+d}^q (indices mod n), case (4)."""
    case, r = reduction_case(n, nu)
    if case != 4:
        raise ValueError("the top form is stated for case (4)")
    mu = r // 2
    ys = Poly.gens(F, n)
    q = F.order
    out = Poly(F, n)
    for i in range(n):
        for d in range(mu, n - mu):
            out = out - ys[i] * ys[(i + d) % n] ** q
    return out


def smooth_proxy_zeros(n: int, nu: int, F: GF, e: int, budget: float = 1e7) -> int:
    """Number of y with Σ y = 0 and all partials of the top form vanishing."""
    case, r = reduction_case(n, nu)
    mu = r // 2
    big = get_field(F.p, F.k * e)
    if big.order ** (n - 1) > budget:
        raise BudgetExceeded("smoothness proxy exceeds budget")
    q = F.order
    zeros = 0
    for free in iter_points(big.order, n - 1):
        ys = [big.vneg(big.vsum(free))] + list(free)
        ok = np.ones(len(free[0]), dtype=bool)
        for i in range(n):
            s = big.vsum([ys[(i + d) % n] for d in range(mu, n - mu)])
            ok &= big.vpow(s, q) == 0
        zeros += int(ok.sum())
    return zeros


# ---------------------------------------------------------------------------
# the algebraic group 𝒢_ν and its Lang torsor


@dataclass(frozen=True)
class AlgGroupNu:
    """Coordinates (v, w_1..w_n); (v,w)(v',w') = (v+v'+Σ_i w_i w'_{i+μ}, w+w')."""

    n: int
    nu: int

    @property
    def mu(self) -> int:
        return self.nu // 2

    def mul(self, F, g, h):
        """Works on scalars (GF ops) or on arrays when F ops are the v* variants."""
        (v, w), (v2, w2) = g, h
        n, mu = self.n, self.mu
        acc = F.add(v, v2)
        for i in range(n):
            acc = F.add(acc, F.mul(w[i], w2[(i + mu) % n]))
        return acc, tuple(F.add(a, b) for a, b in zip(w, w2))

    def inv(self, F, g):
        v, w = g
        n, mu = self.n, self.mu
        acc = F.negate(v)
        for i in range(n):
            acc = F.add(acc, F.mul(w[i], w[(i + mu) % n]))
        return acc, tuple(F.negate(a) for a in w)

    def identity(self):
        return 0, (0,) * self.n

    def frob(self, F, g, f: int):
        v, w = g
        return F.frob(v, f), tuple(F.frob(a, f) for a in w)

    def lang(self, F, g, f: int):
        """L(g) = F_q(g) g^{-1}."""
        return self.mul(F, self.frob(F, g, f), self.inv(F, g))


class PolyOps:
    """Adapter so that AlgGroupNu formulas run on Poly coordinates."""

    def __init__(self, F: GF, nvars: int):
        self.F, self.nvars = F, nvars

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def negate(self, a):
        return -a

    def frob(self, a, j):
        return a.frobenius(j)


class VecOps:
    """Adapter running AlgGroupNu formulas on numpy arrays over F."""

    def __init__(self, F: GF):
        self.F = F

    def add(self, a, b):
        return self.F.vadd(a, b)

    def mul(self, a, b):
        return self.F.vmul(a, b)

    def negate(self, a):
        return self.F.vneg(a)

    def frob(self, a, j):
        return self.F.vfrob(a, j)


def lang_torsor_system(n: int, nu: int, F: GF) -> list[Poly]:
    """Equations of Z_{ν,0} in variables (v, w_1..w_n, y_1..y_n).

    Odd ν: the Lang torsor of G_a is ℘ and Z_{ν,0} is the Z_ν system itself
    (returned as its equation list in (z, y)).
    """
    if nu % 2:
        return list(z_nu_system(n, nu, F).equations)
    if math.gcd(n, nu) != 1:
        raise ValueError("even ν needs gcd(n, ν) = 1")
    r = nu % (2 * n)
    G = AlgGroupNu(n, r)
    nv = 1 + 2 * n
    ops = PolyOps(F, nv)
    v = Poly.var(F, nv, 0)
    w = tuple(Poly.var(F, nv, 1 + i) for i in range(n))
    y = [Poly.var(F, nv, 1 + n + i) for i in range(n)]
    L = G.lang(ops, (v, w), F.k)
    target = G.inv(ops, L) if r < n else L
    Q = q_nu_form(n, r, F).to_poly().compose(y)
    eqs = [target[0] - Q] + [target[1][i] - y[i] for i in range(n)]
    eqs.append(sum(w[1:], w[0]))
    return eqs


def count_lang_torsor(n: int, nu: int, F: GF, e: int, budget: float = 1e7) -> int:
    """#Z_{ν,0}(F_{q^e}) for even ν, computed from the group law.

    For w with Σ w = 0, the point of Z_{ν,0} over (v, w) forces y to be the
    w-part of (·)^{-1}∘L or L; the v-part equation reads ±℘(v) = c(w), which
    has q solutions exactly when Tr c(w) = 0.
    """
    if nu % 2:
        return count_points(z_nu_system(n, nu, F), e, budget)
    r = nu % (2 * n)
    G = AlgGroupNu(n, r)
    big = get_field(F.p, F.k * e)
    if big.order ** (n - 1) > budget:
        raise BudgetExceeded("Lang torsor enumeration exceeds budget")
    ops = VecOps(big)
    Q = q_nu_form(n, r, F).to_poly().change_field(big)
    hist = np.zeros(F.order, dtype=np.int64)
    for free in iter_points(big.order, n - 1):
        w = tuple([big.vneg(big.vsum(free))] + list(free))
        zero = np.zeros_like(w[0])
        L = G.lang(ops, (zero, w), F.k)
        target = G.inv(ops, L) if r < n else L
        y = list(target[1])
        if (big.vsum(y) != 0).any():  # pragma: no cover
            raise ArithmeticError("Lang image left the subgroup")
        c = big.vsub(Q.evaluate(y), target[0])
        hist += np.bincount(relative_trace_vec(F.p, F.k, F.k * e, c), minlength=F.order)
    return F.order * int(hist[0])


def lang_closed_form(n: int, nu: int, F: GF) -> tuple[Poly, list[Poly], Poly]:
    """The displayed formulas for L(v, w) and (·)^{-1}∘L(v, w) in (v, w) variables.

    Returns (first coordinate of L, the w-part of L, first coordinate of L^{-1}).
    """
    mu = (nu % (2 * n)) // 2
    nv = 1 + n
    v = Poly.var(F, nv, 0)
    w = [Poly.var(F, nv, 1 + i) for i in range(n)]
    L0 = wp(v) - sum((wp(w[(i - mu) % n]) * w[i] for i in range(n)), Poly(F, nv))
    Linv0 = -wp(v) + sum((wp(w[(i - mu) % n]) * w[i] ** F.order for i in range(n)), Poly(F, nv))
    return L0, [wp(x) for x in w], Linv0
