"""Verification suites over a parameter grid, producing deterministic records."""

from __future__ import annotations

import json
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import perfectoid_series as ps
from .actions import (
    bijective_on_points,
    composition_check,
    lang_equivariance,
    naive_level,
    naive_twisted_count,
    s1_action,
    s2_action,
    shift_action,
    sign_action,
    translation_action,
    twisted_count,
)
from .cache import CountCache
from .cohomology import (
    Twist,
    even_block_dimension,
    lefschetz_verify,
    observed_count,
    odd_via_quadratic,
    predict_even,
    predict_odd,
    predict_quadratic,
)
from .cyclic_rep import restricted_invariants
from .cyclotomic import AdditiveChar, BudgetExceeded
from .gf_core import FieldError, get_field, is_prime
from .heisenberg import characters_agree, check_axioms, irrep, s1_group, s2_group, verify_rep
from .qform import all_forms, arf_census_f2, random_form
from .variety import artin_schreier_system, count_lang_torsor, z_nu_system

SUITES = ("quad", "odd", "even", "heisenberg", "series", "actions")
VERDICTS = ("pass", "fail", "skipped-budget", "deferred-open-question")


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    p: tuple[int, ...] = (2, 3)
    f: tuple[int, ...] = (1,)
    n: tuple[int, ...] = (2, 3, 4)
    nu: tuple[int, ...] | None = None  # None: every 1 <= ν <= 2n
    ext: tuple[int, ...] = (1, 2)
    budget: float = 1e7
    suites: tuple[str, ...] = ("all",)
    seed: int = 0
    quad_max_dim: int = 3
    quad_random: int = 50
    quad_random_dim: int = 5
    series_samples: int = 100
    series_max_n: int = 3
    heisenberg_max_order: int = 1 << 16
    heisenberg_all_psi_order: int = 5000

    def __post_init__(self):
        if self.budget <= 0:
            raise GridError("budget must be positive")
        for p in self.p:
            if not is_prime(p):
                raise GridError(f"{p} is not prime")
        if any(x < 1 for x in self.f + self.n + self.ext):
            raise GridError("f, n and ext entries must be positive")
        if self.nu is not None and any(x < 1 for x in self.nu):
            raise GridError("ν entries must be positive")
        bad = [s for s in self.suites if s not in SUITES + ("all",)]
        if bad:
            raise GridError(f"unknown suites {bad}")

    @classmethod
    def from_dict(cls, d: dict) -> GridSpec:
        if not isinstance(d, dict):
            raise GridError("grid must be a JSON object")
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise GridError(f"unknown grid keys {sorted(extra)}")
        kw = {}
        try:
            for k, v in d.items():
                if k in ("p", "f", "n", "nu", "ext", "suites"):
                    if not isinstance(v, list):
                        raise GridError(f"{k} must be a list")
                    kw[k] = tuple(str(x) if k == "suites" else int(x) for x in v)
                elif k == "budget":
                    kw[k] = float(v)
                else:
                    kw[k] = int(v)
        except (TypeError, ValueError) as ex:
            if isinstance(ex, GridError):
                raise
            raise GridError(str(ex)) from ex
        return cls(**kw)

    @classmethod
    def load(cls, path) -> GridSpec:
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except (OSError, json.JSONDecodeError) as ex:
            raise GridError(f"cannot read grid: {ex}") from ex

    @property
    def selected(self) -> tuple[str, ...]:
        return SUITES if "all" in self.suites else tuple(s for s in SUITES if s in self.suites)

    def fields(self) -> list[tuple[int, int]]:
        return sorted({(p, f) for p in self.p for f in self.f}, key=lambda t: (t[0] ** t[1], t))

    def nus(self, n: int) -> list[int]:
        return sorted(self.nu) if self.nu is not None else list(range(1, 2 * n + 1))


@dataclass
class Record:
    suite: str
    params: dict
    twist: str
    predicted: str
    observed: str
    verdict: str
    reason: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))


def _sortable(v):
    if v is None:
        return (0, 0, "")
    if isinstance(v, bool):
        return (1, int(v), "")
    if isinstance(v, int):
        return (1, v, "")
    return (2, 0, str(v))


def sort_key(r: Record):
    return (
        SUITES.index(r.suite) if r.suite in SUITES else len(SUITES),
        tuple((k, _sortable(v)) for k, v in sorted(r.params.items())),
        r.twist,
        r.predicted,
        r.observed,
        r.verdict,
    )


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


@dataclass
class Context:
    budget: float
    seed: int
    cache: CountCache | None = None


# ---------------------------------------------------------------------------
# quadratic forms


def _form_label(Q) -> str:
    return ";".join(",".join(str(c) for c in row) for row in Q.C)


def _quad_records(Q, ext, ctx: Context, base: dict) -> list[Record]:
    F = Q.field
    q = F.order
    m = Q.dim
    params = dict(base, form=_form_label(Q))
    pred = predict_quadratic(Q)
    sys = artin_schreier_system(Q)
    out = []
    jobs = [(Twist(), e) for e in ext] + [(Twist("translate", 1), 1)]
    for tw, e in jobs:
        try:
            recs = lefschetz_verify(pred, sys, [(tw, e)], ctx.budget, cache=ctx.cache)
        except BudgetExceeded as ex:
            out.append(Record("quad", dict(params, e=e), str(tw), "", "", "skipped-budget", str(ex)))
            continue
        for r in recs:
            out.append(Record("quad", dict(params, e=e, psi=r.psi), r.twist, r.predicted, r.observed, _verdict(r.ok)))
    if F.p == 2 and q**m <= ctx.budget:
        lit = predict_quadratic(Q, literal=True).trace(1)
        obs = observed_count(sys, Twist(), 1, ctx.budget, ctx.cache)
        agree = lit.is_integer() and lit.to_int() == obs
        out.append(
            Record(
                "quad",
                dict(params, e=1),
                "literal-char2-formula",
                str(lit),
                str(obs),
                "pass" if agree else "deferred-open-question",
                "" if agree else "literal degree/scalar rule disagrees with the count; corrected rule is used",
            )
        )
    return out


def quad_exhaustive(p: int, f: int, m: int, ext, ctx: Context) -> list[Record]:
    F = get_field(p, f)
    out = []
    for Q in all_forms(F, m):
        if not Q.is_zero():
            out += _quad_records(Q, ext, ctx, {"q": F.order, "dim": m, "corpus": "all"})
    return out


def quad_random(p: int, f: int, count: int, max_dim: int, ext, ctx: Context) -> list[Record]:
    F = get_field(p, f)
    rng = np.random.default_rng([ctx.seed, p, f])
    out = []
    for idx in range(count):
        m = int(rng.integers(1, max_dim + 1))
        Q = random_form(F, m, rng)
        if Q.is_zero():
            continue
        out += _quad_records(Q, ext, ctx, {"q": F.order, "dim": m, "corpus": "random", "index": idx})
    return out


# ---------------------------------------------------------------------------
# Z_ν, odd ν


def _lefschetz_records(suite, pred, sys, jobs, ctx: Context, base: dict) -> list[Record]:
    out = []
    for tw, m in jobs:
        try:
            recs = lefschetz_verify(pred, sys, [(tw, m)], ctx.budget, cache=ctx.cache)
        except BudgetExceeded as ex:
            out.append(Record(suite, dict(base, m=m), str(tw), "", "", "skipped-budget", str(ex)))
            continue
        for r in recs:
            out.append(Record(suite, dict(base, m=m, psi=r.psi), r.twist, r.predicted, r.observed, _verdict(r.ok)))
    return out


def _precondition_skip(suite: str, base: dict, why: str) -> Record:
    return Record(suite, base, "-", "", "", "skipped-budget", why)


def odd_suite(p: int, f: int, n: int, nu: int, ext, ctx: Context) -> list[Record]:
    F = get_field(p, f)
    q = F.order
    base = {"p": p, "f": f, "n": n, "nu": nu}
    if n % p == 0:
        return [_precondition_skip("odd", base, "p divides n")]
    sys = z_nu_system(n, nu, F)
    pred = predict_odd(n, nu, F)
    es = sorted(set(ext) | ({3} if q ** (3 * (n - 1)) <= 1e7 else set()))
    jobs = [(Twist(), e) for e in es]
    jobs += [(Twist("gamma", j), m) for j in range(1, n) if math.gcd(j, n) == 1 for m in (0, 1)]
    # at m = 0 the sign action is the identity in characteristic 2
    jobs += [(Twist("sign"), m) for m in ((0, 1) if p > 2 else (1,))]
    jobs += [(Twist("translate", x), m) for x in range(1, min(q, 3)) for m in (1, 2)]
    out = _lefschetz_records("odd", pred, sys, jobs, ctx, base)
    r = nu % (2 * n)
    if r % n:
        via = odd_via_quadratic(n, nu, F)
        for e in (1, 2):
            for a in range(q):
                x, y = pred.trace(e, psi=a), via.trace(e, psi=a)
                out.append(Record("odd", dict(base, m=e, psi=a), "route:closed-vs-quadratic", str(x), str(y), _verdict(x == y)))
    if r:
        chk = restricted_invariants(n, r, F)
        pred_s = f"rank={n - chk.d} " + (
            f"arf_sign={chk.predicted_arf_sign}" if p == 2 else f"det_square={chk.predicted_det_square}"
        )
        c = chk.computed
        obs_s = f"rank={c.rank} " + (f"arf_sign={c.arf_sign}" if p == 2 else f"det_square={c.det_square}")
        out.append(Record("odd", dict(base, d=chk.d), "restricted-invariants", pred_s, obs_s, _verdict(chk.ok)))
        out.append(
            Record(
                "odd",
                dict(base, d=chk.d),
                "orthogonality",
                "True",
                str(chk.orthogonal and chk.vanishes_on_small),
                _verdict(chk.orthogonal and chk.vanishes_on_small),
            )
        )
    return out


# ---------------------------------------------------------------------------
# Z_ν, even ν


def even_applicable(n: int, nu: int) -> bool:
    return nu % 2 == 0 and nu % (2 * n) != 0 and math.gcd(n, nu % (2 * n)) == 1


def even_suite(p: int, f: int, n: int, nu: int, ext, ctx: Context) -> list[Record]:
    F = get_field(p, f)
    q = F.order
    base = {"p": p, "f": f, "n": n, "nu": nu}
    if n % p == 0:
        return [_precondition_skip("even", base, "p divides n")]
    sys = z_nu_system(n, nu, F)
    pred = predict_even(n, nu, F)
    jobs = [(Twist(), e) for e in ext if e == 1]
    jobs += [(Twist("gamma", j), 0) for j in range(1, n) if math.gcd(j, n) == 1]
    out = _lefschetz_records("even", pred, sys, jobs, ctx, base)
    # central elements of S_1 and S_2, through the group actions themselves
    G1, G2 = s1_group(n, nu, F), s2_group(n, nu, F)
    for v in range(1, q):
        tw = Twist("central", v)
        want = pred.trace(1, tw)
        for name, G, act in (("S1", G1, s1_action), ("S2", G2, s2_action)):
            action = act(sys, G, G.central(v))
            try:
                got = observed_count(sys, Twist(f"central-{name}", v), 1, ctx.budget, ctx.cache, action=action)
            except BudgetExceeded as ex:
                out.append(Record("even", dict(base, m=1), f"central-{name}({v})", "", "", "skipped-budget", str(ex)))
                continue
            ok = want.is_integer() and want.to_int() == got
            out.append(Record("even", dict(base, m=1), f"central-{name}({v})", str(want), str(got), _verdict(ok)))
    # #Z_ν(F_q) = q^n, and the block dimension from |S_ψ(n)|^2
    try:
        cnt = observed_count(sys, Twist(), 1, ctx.budget, ctx.cache)
        out.append(Record("even", dict(base, m=1), "count=q^n", str(q**n), str(cnt), _verdict(cnt == q**n)))
    except BudgetExceeded as ex:
        out.append(Record("even", dict(base, m=1), "count=q^n", "", "", "skipped-budget", str(ex)))
    for a in range(1, q):
        if q ** (n * (n - 1)) > ctx.budget:
            out.append(Record("even", dict(base, psi=a), "block-dimension", "", "", "skipped-budget", f"q^(n(n-1)) = {q ** (n * (n - 1))}"))
            continue
        d = even_block_dimension(sys, a, ctx.budget)
        out.append(Record("even", dict(base, psi=a), "block-dimension", str(q ** (n - 1)), str(d), _verdict(d == q ** (n - 1))))
    for e in ext:
        try:
            lt = count_lang_torsor(n, nu, F, e, ctx.budget)
            zc = observed_count(sys, Twist(), e, ctx.budget, ctx.cache)
        except BudgetExceeded as ex:
            out.append(Record("even", dict(base, m=e), "lang-torsor-count", "", "", "skipped-budget", str(ex)))
            continue
        out.append(Record("even", dict(base, m=e), "lang-torsor-count", str(zc), str(lt), _verdict(lt == zc)))
    if n == 3 and q == 2:
        rep = lang_equivariance(n, nu % (2 * n), F, 1)
        out.append(Record("even", dict(base, m=1), "lang-equivariance", "True", str(rep.ok), _verdict(rep.ok)))
    return out


# ---------------------------------------------------------------------------
# group actions


def actions_suite(p: int, f: int, n: int, nu: int, ctx: Context) -> list[Record]:
    """Twisted counts by linear algebra against brute force; group laws of S_1, S_2 on points."""
    F = get_field(p, f)
    base = {"p": p, "f": f, "n": n, "nu": nu}
    if n % p == 0:
        return [_precondition_skip("actions", base, "p divides n")]
    sys = z_nu_system(n, nu, F)
    acts = [shift_action(sys, 1), translation_action(sys, 1)]
    if nu % 2:
        acts.append(sign_action(sys))
    rng = random.Random(f"actions:{ctx.seed}:{p}:{f}:{n}:{nu}")
    if even_applicable(n, nu):
        G1, G2 = s1_group(n, nu, F), s2_group(n, nu, F)
        for _ in range(2):
            acts.append(s1_action(sys, G1, G1.random_element(rng)))
            acts.append(s2_action(sys, G2, G2.random_element(rng)))
    out = []
    for a in acts:
        out.append(Record("actions", base, f"{a.label}:preserves", "True", str(a.preserves()), _verdict(a.preserves())))
        for m in (1, 2):
            L = naive_level(a, m)
            try:
                E = get_field(p, f * L)
                if E.order ** sys.free_dim > 2e6:
                    raise BudgetExceeded("brute-force twisted count exceeds budget")
                lin = twisted_count(a, m, ctx.budget)
                naive = naive_twisted_count(a, m, E)
            except (BudgetExceeded, FieldError) as ex:
                out.append(Record("actions", dict(base, m=m), f"{a.label}:twisted-count", "", "", "skipped-budget", str(ex)))
                continue
            out.append(Record("actions", dict(base, m=m), f"{a.label}:twisted-count", str(naive), str(lin), _verdict(lin == naive)))
    if even_applicable(n, nu):
        for e in (1, n):
            E = get_field(p, f * e)
            if E.order ** (n - 1) > 3e5:
                continue
            for name, G, act in (("S1", s1_group(n, nu, F), s1_action), ("S2", s2_group(n, nu, F), s2_action)):
                if name == "S2" and e % n:
                    continue
                right, _ = composition_check(G, act, sys, E, pairs=10, seed=ctx.seed)
                out.append(Record("actions", dict(base, e=e), f"{name}:right-action", "True", str(right), _verdict(right)))
                g = G.random_element(rng)
                bij = bijective_on_points(act(sys, G, g), E)
                out.append(Record("actions", dict(base, e=e), f"{name}:bijective", "True", str(bij), _verdict(bij)))
    return out


# ---------------------------------------------------------------------------
# Heisenberg groups


def heisenberg_suite(
    p: int, f: int, n: int, nu: int, max_order: int, all_psi_order: int, ctx: Context
) -> list[Record]:
    F = get_field(p, f)
    q = F.order
    base = {"p": p, "f": f, "n": n, "nu": nu}
    if n % p == 0:
        return [_precondition_skip("heisenberg", base, "p divides n")]
    out = []
    for name, mk in (("S1", s1_group), ("S2", s2_group)):
        G = mk(n, nu, F)
        if G.order > max_order:
            out.append(Record("heisenberg", dict(base, group=name), "all", "", "", "skipped-budget", f"|S| = {G.order}"))
            continue
        ax = check_axioms(G)
        out.append(Record("heisenberg", dict(base, group=name), "axioms", "True", str(ax.ok), _verdict(ax.ok), ax.method))
        want_exp = 4 if p == 2 else p
        out.append(Record("heisenberg", dict(base, group=name), "exponent", str(want_exp), str(ax.exponent), _verdict(ax.exponent == want_exp)))
        # every character on small groups; ψ_1 alone on large ones
        for a in range(1, q) if G.order <= all_psi_order else (1,):
            psi = AdditiveChar(F, a)
            rep = irrep(G, psi)
            rr = verify_rep(rep, seed=ctx.seed, samples=3000 if G.order <= all_psi_order else 300)
            dim = q ** ((n - 1) // 2)
            prm = dict(base, group=name, psi=a)
            out.append(Record("heisenberg", prm, "dimension", str(dim), str(rr.dim), _verdict(rr.dim == dim)))
            out.append(Record("heisenberg", prm, "representation", "True", str(rr.ok), _verdict(rr.ok)))
            out.append(Record("heisenberg", prm, "character-norm", "1", "1" if rr.norm_ok else "!=1", _verdict(rr.norm_ok)))
            same = characters_agree(rep, irrep(G, psi, use_second=True))
            out.append(Record("heisenberg", prm, "uniqueness", "True", str(same), _verdict(same)))
    return out


def arf_suite(max_dim: int = 6) -> list[Record]:
    out = []
    for m in range(2, max_dim + 1, 2):
        checked, bad = arf_census_f2(m)
        out.append(Record("heisenberg", {"dim": m, "q": 2}, "arf-count-vs-algebraic", f"0/{checked}", f"{bad}/{checked}", _verdict(bad == 0)))
    return out


# ---------------------------------------------------------------------------
# series


def _estimate_records(n: int, q: int, which: str, fixed: dict, samples: int, seed: int, label: str) -> list[Record]:
    recs = ps.check_estimates(which, n, q, samples=samples, seed=seed, **fixed)
    base = {"n": n, "q": q, "lemma": which, "case": label}
    total = len(recs)
    good = sum(r.ok for r in recs)
    bound = sum(r.bound_ok for r in recs)
    lit = sum(r.literal_ok for r in recs)
    quarantined = sum(r.quarantined for r in recs)
    out = [
        Record("series", base, "bound", f"{total}/{total}", f"{bound}/{total}", _verdict(bound == total)),
        Record(
            "series",
            base,
            "leading-term",
            f"{total}/{total}",
            f"{good}/{total}",
            _verdict(good == total),
            f"{quarantined} re-run at doubled cutoff" if quarantined else "",
        ),
    ]
    if lit != total:
        out.append(
            Record(
                "series",
                base,
                "literal-display",
                f"{total}/{total}",
                f"{lit}/{total}",
                "deferred-open-question",
                "displayed leading term misses the bound; the corrected display passes" if good == total else "",
            )
        )
    return out


def series_suite(n: int, q: int, samples: int, seed: int) -> list[Record]:
    F = ps.series_field(q)
    rng = random.Random(f"series:{n}:{q}:{seed}")
    S = ps.SeriesSampler(F, q, rng)
    base = {"n": n, "q": q}
    out = []
    # δ_0 identities
    bad: dict[str, int] = {}
    total = 0
    for _ in range(max(1, samples // 10)):
        xs = [S.series(Fraction(rng.randint(1, 4 * q), q)) for _ in range(n)]
        cutoff = 2 * max(x.val() for x in xs) * q ** (n - 1)
        for r in ps.remark_identities(xs, cutoff):
            key = r.name.split("(")[0]
            bad.setdefault(key, 0)
            bad[key] += not r.ok
        total += 1
    for key in sorted(bad):
        out.append(Record("series", dict(base, identity=key), "delta-identity", "0", str(bad[key]), _verdict(bad[key] == 0)))
    # cancellation
    fails = 0
    runs = 0
    for _ in range(samples):
        i = rng.randint(1, n)
        xn = S.series(Fraction(rng.randint(1, 3), rng.choice([1, q])))
        T = S.series(Fraction(rng.randint(1, 4 * q**n), q))
        verdict = ps.check_cancel_lemma(i, xn, T, n, 2 * q ** (n - 1) * max(xn.val(), T.val()) * q)
        fails += verdict != "pass"
        runs += 1
    out.append(Record("series", base, "cancellation", f"{runs}/{runs}", f"{runs - fails}/{runs}", _verdict(fails == 0)))
    # estimates
    out += _estimate_records(n, q, "estimate", {}, samples, seed, "main")
    for mu in range(n):
        out += _estimate_records(n, q, "estimate1", {"mu": mu}, samples, seed, f"({1 if mu == 0 else 2}) mu={mu}")
    if n >= 2:
        for case in ps.ESTIMATE2_CASES:
            if ps.estimate2_params_for_case(n, q, case):
                out += _estimate_records(n, q, "estimate2", {"case": case}, samples, seed, f"({case})")
    # the displayed valuation consistency
    for nu in range(1, 3 * n + 1):
        routes = ps.m3_routes(n, q, nu)
        vals = sorted({str(v) for v in routes.values()})
        out.append(Record("series", dict(base, nu=nu), "M3-routes", str(routes["direct"]), "|".join(vals), _verdict(len(vals) == 1)))
    return out


# ---------------------------------------------------------------------------
# driving


@dataclass(frozen=True)
class Unit:
    suite: str
    args: tuple

    def label(self) -> str:
        return f"{self.suite}{self.args}"


def plan(grid: GridSpec) -> list[Unit]:
    units: list[Unit] = []
    sel = grid.selected
    ext = tuple(sorted(set(grid.ext)))
    for p, f in grid.fields():
        q = p**f
        if "quad" in sel:
            for m in range(1, grid.quad_max_dim + 1):
                if q ** (m * (m + 1) // 2) <= 1e4:
                    units.append(Unit("quad", ("exhaustive", p, f, m, ext)))
            if grid.quad_random:
                units.append(Unit("quad", ("random", p, f, grid.quad_random, grid.quad_random_dim, ext)))
        for n in sorted(set(grid.n)):
            for nu in grid.nus(n):
                if "odd" in sel and nu % 2:
                    units.append(Unit("odd", (p, f, n, nu, ext)))
                if "even" in sel and even_applicable(n, nu):
                    units.append(Unit("even", (p, f, n, nu, ext)))
                if "actions" in sel:
                    units.append(Unit("actions", (p, f, n, nu)))
                if "heisenberg" in sel and even_applicable(n, nu):
                    units.append(Unit("heisenberg", (p, f, n, nu, grid.heisenberg_max_order, grid.heisenberg_all_psi_order)))
            if "series" in sel and 2 <= n <= grid.series_max_n:
                units.append(Unit("series", (n, q)))
    if "heisenberg" in sel and grid.fields() and grid.n:
        units.append(Unit("arf", (6,)))
    return units


def run_unit(unit: Unit, budget: float, seed: int, cache_root: str | None, samples: int) -> tuple[list[Record], float, dict]:
    cache = CountCache(Path(cache_root)) if cache_root else None
    ctx = Context(budget, seed, cache)
    t0 = time.perf_counter()
    s, a = unit.suite, unit.args
    if s == "quad":
        recs = quad_exhaustive(*a[1:], ctx) if a[0] == "exhaustive" else quad_random(*a[1:], ctx)
    elif s == "odd":
        recs = odd_suite(*a, ctx)
    elif s == "even":
        recs = even_suite(*a, ctx)
    elif s == "actions":
        recs = actions_suite(*a, ctx)
    elif s == "heisenberg":
        recs = heisenberg_suite(*a, ctx=ctx)
    elif s == "arf":
        recs = arf_suite(*a)
    elif s == "series":
        recs = series_suite(*a, samples, seed)
    else:  # pragma: no cover
        raise ValueError(s)
    stats = {"hits": cache.hits, "misses": cache.misses, "corrupt": cache.corrupt} if cache else {}
    return recs, time.perf_counter() - t0, stats


@dataclass
class RunResult:
    records: list[Record]
    timings: list[tuple[str, float]] = field(default_factory=list)
    cache_stats: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(r.verdict == "fail" for r in self.records)


def run_suite(grid: GridSpec, jobs: int = 1, cache_root: str | None = None) -> RunResult:
    units = plan(grid)
    args = [(u, grid.budget, grid.seed, cache_root, grid.series_samples) for u in units]
    if jobs > 1 and len(units) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_unit, *zip(*args)))
    else:
        results = [run_unit(*x) for x in args]
    records: list[Record] = []
    timings = []
    stats = {"hits": 0, "misses": 0, "corrupt": 0}
    for u, (recs, dt, st) in zip(units, results):
        records += recs
        timings.append((u.label(), dt))
        for k, v in st.items():
            stats[k] += v
    records.sort(key=sort_key)
    return RunResult(records, timings, stats)


def write_reports(result: RunResult, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "records.jsonl", "w") as fh:
        for r in result.records:
            fh.write(r.to_json() + "\n")
    (out / "summary.csv").write_text(summary_csv(result.records))
    with open(out / "timings.jsonl", "w") as fh:
        for label, dt in result.timings:
            fh.write(json.dumps({"unit": label, "seconds": round(dt, 3)}) + "\n")


def summary_rows(records: list[Record]) -> list[tuple[str, dict]]:
    counts: dict[str, dict] = {}
    for r in records:
        row = counts.setdefault(r.suite, {v: 0 for v in VERDICTS})
        row[r.verdict] += 1
    return sorted(counts.items(), key=lambda kv: SUITES.index(kv[0]) if kv[0] in SUITES else len(SUITES))


def summary_csv(records: list[Record]) -> str:
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", *VERDICTS, "total"])
    for suite, row in summary_rows(records):
        w.writerow([suite, *(row[v] for v in VERDICTS), sum(row.values())])
    return buf.getvalue()


def load_records(path: Path) -> list[Record]:
    return [Record(**json.loads(line)) for line in Path(path).read_text().splitlines() if line.strip()]
