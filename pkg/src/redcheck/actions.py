"""Automorphisms of Z_ν and fixed-point counts of g ∘ Frob^m.

Every action here has the affine shape

    y'_i = c · y_{π(i)} + t_i,      z' = z + v + Σ_i s_i y_i,

with c = ±1, π a permutation of Z/n, and t, v, s in F_{q^level}.  Points are
numpy arrays (z, y_1, …, y_n) over a field containing F_{q^level}.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from . import linalg
from .cyclotomic import BudgetExceeded, iter_points
from .gf_core import GF, embedding, get_field, partial_trace_vec, relative_trace_vec
from .heisenberg import S1Group, S2Group
from .poly import Poly
from .variety import AlgGroupNu, VarietySystem, VecOps, lang_torsor_system, rhs_trace_histogram, z_nu_system


@dataclass(frozen=True)
class VarietyAction:
    sys: VarietySystem
    label: str
    level: int = 1
    perm: tuple[int, ...] = ()
    scale: int = 1
    t: tuple[int, ...] = ()
    v: int = 0
    s: tuple[int, ...] = ()

    def __post_init__(self):
        n = self.sys.m
        if not self.perm:
            object.__setattr__(self, "perm", tuple(range(n)))
        if not self.t:
            object.__setattr__(self, "t", (0,) * n)
        if not self.s:
            object.__setattr__(self, "s", (0,) * n)

    @property
    def n(self) -> int:
        return self.sys.m

    def is_z_translation(self) -> bool:
        return (
            self.perm == tuple(range(self.n))
            and self.scale % self.sys.field.p == 1
            and not any(self.t)
            and not any(self.s)
        )

    @property
    def coeff_field(self) -> GF:
        F = self.sys.field
        return get_field(F.p, F.k * self.level)

    def _emb(self, E: GF, x):
        K = self.coeff_field
        if E.k % K.k:
            raise ValueError("point field does not contain the coefficient field")
        return embedding(K.p, K.k, E.k)[np.asarray(x, dtype=np.int64)]

    # -- symbolic check ---------------------------------------------------
    def preserves(self) -> bool:
        """rhs(y') - rhs(y) = ℘(z' - z) identically on Σ y = 0, and Σ y' = 0 there."""
        K, n, F = self.coeff_field, self.n, self.sys.field
        P = self.sys.rhs.change_field(K)
        ys = Poly.gens(K, n)
        c = self.scale % F.p
        new = [ys[self.perm[i]].scale(c) + Poly.const(K, n, self.t[i]) for i in range(n)]
        D = Poly.const(K, n, self.v)
        for i in range(n):
            D = D + ys[i].scale(self.s[i])
        expr = P.compose(new) - P - (D.frobenius(F.k) - D)
        if self.sys.sum_zero:
            lin = sum(new, Poly(K, n))
            return _on_sum_zero(expr).is_zero() and _on_sum_zero(lin).is_zero()
        return expr.is_zero()

    # -- pointwise --------------------------------------------------------
    def apply(self, E: GF, z, ys):
        c = self.scale % E.p
        t = self._emb(E, self.t)
        s = self._emb(E, self.s)
        dz = np.full_like(np.asarray(z), int(self._emb(E, self.v)))
        for i in range(self.n):
            dz = E.vadd(dz, E.vmul(int(s[i]), ys[i]))
        new = [E.vadd(E.vmul(c, ys[self.perm[i]]), int(t[i])) for i in range(self.n)]
        return E.vadd(z, dz), new

    def inverse_exists(self) -> bool:
        return sorted(self.perm) == list(range(self.n))


def _on_sum_zero(P: Poly) -> Poly:
    n, F = P.nvars, P.field
    g = Poly.gens(F, n)
    y1 = Poly(F, n)
    for x in g[1:]:
        y1 = y1 - x
    return P.compose([y1] + g[1:])


# ---------------------------------------------------------------------------
# the actions


def shift_action(sys: VarietySystem, j: int = 1) -> VarietyAction:
    """γ^j: y_i -> y_{i-j} (so y_1 -> y_n for j = 1), z fixed."""
    n = sys.m
    return VarietyAction(sys, f"gamma^{j % n}", perm=tuple((i - j) % n for i in range(n)))


def sign_action(sys: VarietySystem) -> VarietyAction:
    nu = sys.meta.get("nu")
    if nu is not None and nu % 2 == 0:
        raise ValueError("the sign action is defined for odd ν")
    return VarietyAction(sys, "sign", scale=-1)


def translation_action(sys: VarietySystem, x: int) -> VarietyAction:
    return VarietyAction(sys, f"z+{x}", v=x)


def s1_action(sys: VarietySystem, G: S1Group, g) -> VarietyAction:
    """z -> z + v + Σ_i w_i y_{i-μ}, y_i -> y_i + w_i (odd ν: z -> z + v)."""
    v, w = g
    if not G.even:
        return translation_action(sys, v)
    n, mu = G.n, G.mu
    s = tuple(w[(j + mu) % n] for j in range(n))
    return VarietyAction(sys, f"S1{g}", t=tuple(w), v=v, s=s)


def s2_action(sys: VarietySystem, G: S2Group, g) -> VarietyAction:
    """z -> z + v + Σ_i w^{q^{r-ν+i-1}} y_i, y_i -> y_i + w^{q^{r-μ+i-1}}, r = ⌊ν/n⌋."""
    v, w = g
    if not G.even:
        return translation_action(sys, v)
    n, nu, mu = G.n, G.nu, G.mu
    r = nu // n
    K, f = G.big, G.field.k
    emb = embedding(K.p, f, K.k)
    t = tuple(K.frob(w, f * ((r - mu + i - 1) % n)) for i in range(1, n + 1))
    s = tuple(K.frob(w, f * ((r - nu + i - 1) % n)) for i in range(1, n + 1))
    return VarietyAction(sys, f"S2{g}", level=n, t=t, v=int(emb[v]), s=s)


def identity_action(sys: VarietySystem) -> VarietyAction:
    return VarietyAction(sys, "id")


# ---------------------------------------------------------------------------
# points


def list_points(sys: VarietySystem, E: GF, budget: float = 2e6):
    """All points of the system over E as arrays (z, [y_1..y_m])."""
    F = sys.field
    if E.k % F.k:
        raise ValueError("E must contain the base field")
    if E.order ** sys.free_dim > budget:
        raise BudgetExceeded("point listing exceeds budget")
    q = F.order
    xs = E.elements()
    wp = E.vsub(E.vpow(xs, q), xs)
    order = np.argsort(wp, kind="stable")
    sorted_vals = wp[order]
    P = sys.rhs.change_field(E)
    zs, yss = [], []
    for free in iter_points(E.order, sys.free_dim):
        if sys.sum_zero:
            ys = [E.vneg(E.vsum(free))] + list(free) if free else [np.zeros(1, dtype=np.int64)]
        else:
            ys = list(free) if free else []
        vals = P.evaluate(ys) if ys else np.array([P(())], dtype=np.int64)
        start = np.searchsorted(sorted_vals, vals)
        ok = (start < len(sorted_vals)) & (sorted_vals[np.minimum(start, len(sorted_vals) - 1)] == vals)
        idx = np.nonzero(ok)[0]
        for k in range(q):
            zs.append(order[start[idx] + k])
            yss.append([y[idx] if y.shape else np.full(len(idx), int(y)) for y in ys])
    if not zs:
        return np.zeros(0, dtype=np.int64), [np.zeros(0, dtype=np.int64) for _ in range(sys.m)]
    z = np.concatenate(zs)
    ys = [np.concatenate([yy[i] for yy in yss]) for i in range(sys.m)]
    return z, ys


def naive_twisted_count(action: VarietyAction, m: int, E: GF, budget: float = 2e6) -> int:
    """#{P in Z(E) : g(Frob^m P) = P}; E must contain every fixed point."""
    sys = action.sys
    f = sys.field.k
    z, ys = list_points(sys, E, budget)
    fz, fys = E.vfrob(z, f * m), [E.vfrob(y, f * m) for y in ys]
    gz, gys = action.apply(E, fz, fys)
    ok = gz == z
    for a, b in zip(gys, ys):
        ok &= a == b
    return int(ok.sum())


# ---------------------------------------------------------------------------
# twisted counts by linear algebra


def _cycles(perm) -> list[list[int]]:
    seen, out = set(), []
    for i in range(len(perm)):
        if i in seen:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = perm[j]
        out.append(cyc)
    return out


def search_level(action: VarietyAction, m: int) -> int:
    """Degree over F_q of a field holding all homogeneous y-solutions and the coefficients."""
    L = action.level * max(m, 1)
    for cyc in _cycles(action.perm):
        ell = len(cyc)
        sign = pow(action.scale, ell)
        L = math.lcm(L, m * ell * (1 if sign == 1 or action.sys.field.p == 2 else 2))
    return L


def naive_level(action: VarietyAction, m: int) -> int:
    """Level holding every fixed point, z included.

    A y-translation puts fixed y in an Artin-Schreier extension of the search
    level, and fixed z satisfy one more such equation over that.
    """
    p = action.sys.field.p
    L = search_level(action, m) if m else action.level
    if any(action.t):
        L *= p
    if action.v or any(action.s) or any(action.t):
        L *= p
    return L


def _fp_matrix(E: GF, cols_fn, nin: int) -> list[list[int]]:
    """Matrix over F_p of an F_p-linear map E^nin -> E^nout given on basis vectors."""
    kdim = E.k
    cols = []
    for i in range(nin):
        for d in range(kdim):
            vec = [0] * nin
            vec[i] = E.p**d
            out = cols_fn(vec)
            cols.append([int(x) for y in out for x in E.digits(y)])
    return linalg.from_columns(cols)


def twisted_count(action: VarietyAction, m: int, budget: float = 1e7, max_level_steps: int = 2) -> int:
    """#{P in Z(F̄_q) : g(Frob^m P) = P}.

    For m >= 1 the y-part of a fixed point solves y_i - c·y_{π(i)}^{q^m} = t_i,
    an F_p-affine system over a finite field E chosen by ``search_level``; the
    z-part then contributes q points exactly when
    T_m(rhs(y)) + v + Σ s_i y_i^{q^m} = 0 with T_m(c) = Σ_{k<m} c^{q^k}.
    For m = 0 the fixed y must be unique; its fibre contributes q or 0 points.
    """
    sys = action.sys
    F = sys.field
    n, q, f = action.n, F.order, F.k
    if m == 0:
        return _fixed_count_m0(action)
    L = search_level(action, m)
    for _ in range(max_level_steps + 1):
        E = get_field(F.p, f * L)
        if E.order > (1 << 23):
            raise BudgetExceeded(f"search field F_{{q^{L}}} is too large")
        sol = _solve_y(action, m, E)
        if sol is not None:
            break
        L *= F.p
    else:
        raise ArithmeticError("no particular solution in the searched extensions")
    base, kernel = sol
    npts = F.p ** len(kernel)
    if npts > budget:
        if action.is_z_translation() and action.level == 1:
            # fixed points have y over F_{q^m} and Tr_{F_{q^m}/F_q} rhs(y) = -v
            return q * int(rhs_trace_histogram(sys, m, budget)[F.negate(action.v)])
        raise BudgetExceeded(f"{npts} fixed y-points exceed budget {budget:g}")
    P = sys.rhs.change_field(E)
    v = int(action._emb(E, action.v))
    s = action._emb(E, action.s)
    hits = 0
    for digs in iter_points(F.p, len(kernel)):
        size = len(digs[0]) if digs else 1
        ys = [np.full(size, base[i], dtype=np.int64) for i in range(n)]
        for d, kv in zip(digs, kernel):
            for i in range(n):
                if kv[i]:
                    ys[i] = E.vadd(ys[i], E.vmul(d, kv[i]))
        c = P.evaluate(ys)
        val = partial_trace_vec(E, c, m, f)
        val = E.vadd(val, v)
        for i in range(n):
            if s[i]:
                val = E.vadd(val, E.vmul(int(s[i]), E.vfrob(ys[i], f * m)))
        hits += int((val == 0).sum())
    return q * hits


def _solve_y(action: VarietyAction, m: int, E: GF):
    """Particular solution and F_p-kernel basis of the y-fixed system over E, or None."""
    n, f = action.n, action.sys.field.k
    c = action.scale % E.p
    perm = action.perm
    sum_zero = action.sys.sum_zero

    def image(vec):
        out = [E.sub(vec[i], E.mul(c, E.frob(vec[perm[i]], f * m))) for i in range(n)]
        if sum_zero:
            acc = 0
            for x in vec:
                acc = E.add(acc, x)
            out.append(acc)
        return out

    A = _fp_matrix(E, image, n)
    t = action._emb(E, action.t)
    rhs_vec = [int(x) for x in t] + ([0] if sum_zero else [])
    b = [int(d) for y in rhs_vec for d in E.digits(y)]
    Fp = get_field(E.p, 1)
    x = linalg.solve(Fp, A, b)
    if x is None:
        return None
    # without the sum condition the homogeneous solutions number exactly q^{m n}
    A0 = A[: n * E.k]
    if linalg.rank(Fp, A0) != n * E.k - m * n * f:  # pragma: no cover
        raise ArithmeticError("search field misses homogeneous solutions")
    ker = linalg.kernel(Fp, A, n * E.k)

    def to_elems(vec):
        return [int(E.digits_to_int(vec[i * E.k : (i + 1) * E.k])) for i in range(n)]

    return to_elems(x), [to_elems(k) for k in ker]


def _fixed_count_m0(action: VarietyAction) -> int:
    K = action.coeff_field
    n = action.n
    c = action.scale % K.p
    rows = []
    for i in range(n):
        row = [0] * n
        row[i] = K.add(row[i], 1)
        row[action.perm[i]] = K.sub(row[action.perm[i]], c)
        rows.append(row)
    rhs = list(action.t)
    if action.sys.sum_zero:
        rows.append([1] * n)
        rhs.append(0)
    if linalg.rank(K, rows) < n:
        raise ValueError("fixed locus is not finite")
    y = linalg.solve(K, rows, rhs)
    if y is None:
        return 0
    delta = action.v
    for si, yi in zip(action.s, y):
        delta = K.add(delta, K.mul(si, yi))
    return action.sys.q if delta == 0 else 0


# ---------------------------------------------------------------------------
# group-law checks


def composition_check(G, act_fn, sys: VarietySystem, E: GF, pairs: int = 50, seed: int = 0, budget: float = 2e6):
    """Compare act(g)∘act(h) with act(h·g) and act(g·h) on all points over E.

    Returns (right_ok, left_ok): which composition law holds on every sampled pair.
    """
    z, ys = list_points(sys, E, budget)
    rng = random.Random(seed)
    right = left = True
    for _ in range(pairs):
        g, h = G.random_element(rng), G.random_element(rng)
        z1, y1 = act_fn(sys, G, h).apply(E, z, ys)
        z2, y2 = act_fn(sys, G, g).apply(E, z1, y1)
        zr, yr = act_fn(sys, G, G.mul(h, g)).apply(E, z, ys)
        zl, yl = act_fn(sys, G, G.mul(g, h)).apply(E, z, ys)
        right &= bool((z2 == zr).all() and all((a == b).all() for a, b in zip(y2, yr)))
        left &= bool((z2 == zl).all() and all((a == b).all() for a, b in zip(y2, yl)))
    return right, left


def bijective_on_points(action: VarietyAction, E: GF, budget: float = 2e6) -> bool:
    z, ys = list_points(action.sys, E, budget)
    z2, y2 = action.apply(E, z, ys)
    before = set(zip(z.tolist(), *[y.tolist() for y in ys]))
    after = set(zip(z2.tolist(), *[y.tolist() for y in y2]))
    return before == after


# ---------------------------------------------------------------------------
# Lang torsor comparison


@dataclass(frozen=True)
class EquivarianceReport:
    points: int
    image_in_target: bool
    bijective: bool
    equivariant: bool

    @property
    def ok(self) -> bool:
        return self.image_in_target and self.bijective and self.equivariant


def lang_equivariance(n: int, nu: int, F: GF, e: int, budget: float = 2e6) -> EquivarianceReport:
    """Points (v, w, y) of Z_{ν,0} map to (z, y) = (v, w) on Z_ν, S_1-equivariantly.

    S_1 = 𝒢_ν(F_q) acts on Z_{ν,0} by right multiplication on (v, w).
    """
    if nu % 2:
        raise ValueError("the group-law comparison is for even ν")
    E = get_field(F.p, F.k * e)
    if E.order ** n > budget:
        raise BudgetExceeded("equivariance check exceeds budget")
    eqs = [eq.change_field(E) for eq in lang_torsor_system(n, nu, F)]
    target = z_nu_system(n, nu, F)
    teqs = [eq.change_field(E) for eq in target.equations]
    r = nu % (2 * n)
    Gal = AlgGroupNu(n, r)
    ops = VecOps(E)
    # enumerate (v, w) with Σ w = 0; y is forced by the torsor equations
    pts = []
    for free in iter_points(E.order, n):
        v = free[0]
        w = tuple([E.vneg(E.vsum(free[1:]))] + list(free[1:]))
        Lg = Gal.lang(ops, (v, w), F.k)
        tgt = Gal.inv(ops, Lg) if r < n else Lg
        y = list(tgt[1])
        ok = np.ones(len(v), dtype=bool)
        for eq in eqs:
            ok &= eq.evaluate([v, *w, *y]) == 0
        idx = np.nonzero(ok)[0]
        pts.append((v[idx], [x[idx] for x in w], [x[idx] for x in y]))
    V = np.concatenate([p[0] for p in pts])
    W = [np.concatenate([p[1][i] for p in pts]) for i in range(n)]
    Y = [np.concatenate([p[2][i] for p in pts]) for i in range(n)]
    in_target = all(bool((eq.evaluate([V, *W]) == 0).all()) for eq in teqs)
    image = set(zip(V.tolist(), *[x.tolist() for x in W]))
    z_t, y_t = list_points(target, E, budget)
    full = set(zip(z_t.tolist(), *[x.tolist() for x in y_t]))
    bij = len(image) == len(V) and image == full
    G = S1Group(n, r, F)
    emb = embedding(F.p, F.k, E.k)
    equiv = True
    for h in G.elements():
        hv = np.full_like(V, int(emb[h[0]]))
        hw = tuple(np.full_like(V, int(emb[x])) for x in h[1])
        nv, nw = Gal.mul(ops, (V, tuple(W)), (hv, hw))
        ok = all(bool((eq.evaluate([nv, *nw, *Y]) == 0).all()) for eq in eqs)
        az, ay = s1_action(target, G, h).apply(E, V, W)
        equiv &= ok and bool((az == nv).all()) and all(bool((a == b).all()) for a, b in zip(ay, nw))
    return EquivarianceReport(len(V), in_target, bij, equiv)
