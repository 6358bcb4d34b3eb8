import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from redcheck.gf_core import get_field
from redcheck.perfectoid_series import (
    M1,
    M2,
    M3,
    HypothesisError,
    PrecisionError,
    SeriesSampler,
    TruncSeries,
    check_cancel_lemma,
    check_estimates,
    delta0,
    delta_m,
    delta_tuples,
    estimate2_case,
    estimate2_params_for_case,
    m3_routes,
    moore_det,
    remark_identities,
    series_field,
)

F2, F4, F3 = get_field(2, 1), get_field(2, 2), get_field(3, 1)


def mono(F, q, e, c=1):
    return TruncSeries.monomial(F, q, e, c)


def sampler(q, seed):
    return SeriesSampler(series_field(q), q, random.Random(seed), denominators=(1, q))


def test_series_ring_basics():
    t = mono(F3, 3, 1)
    s = t + mono(F3, 3, 2, 2)
    assert s.val() == 1 and s.leading() == (1, 1)
    assert (s - s).is_zero()
    assert s.mul(t) == mono(F3, 3, 2) + mono(F3, 3, 3, 2)
    # Frobenius is exact in characteristic p: (t + 2t^2)^3 = t^3 + 2t^6
    assert s.frob(1) == s.pow(3) == mono(F3, 3, 3) + mono(F3, 3, 6, 2)
    assert s.frob(1).frob(-1) == s


def test_truncation_and_inverse():
    t = mono(F2, 2, 1)
    one_plus = mono(F2, 2, 0) + t
    inv = one_plus.inverse(8)
    assert one_plus.mul(inv).truncate(8) == mono(F2, 2, 0).truncate(8)
    assert TruncSeries.zero(F2, 2, cutoff=3).lower_val() == 3
    with pytest.raises(PrecisionError):
        TruncSeries.zero(F2, 2, cutoff=3).leading()


def test_moore_det_examples():
    t = mono(F2, 2, 1)
    assert moore_det([t]) == t
    # det [[t, t^2], [t^2, t^4]] = t^5 - t^4
    assert moore_det([t, mono(F2, 2, 2)]) == mono(F2, 2, 4) + mono(F2, 2, 5)
    assert moore_det([t, t]).is_zero()
    with pytest.raises(ValueError):
        moore_det([])


def test_moore_det_vanishes_on_linearly_dependent_inputs():
    x, y = mono(F3, 3, 1), mono(F3, 3, Fraction(5, 3), 2)
    assert moore_det([x, y, x + y.scale(2)]).is_zero()


@given(st.integers(0, 10**6))
def test_moore_det_is_alternating(seed):
    S = sampler(2, seed)
    xs = [S.series(Fraction(S.rng.randint(1, 6), S.rng.choice([1, 2]))) for _ in range(3)]
    base = moore_det(xs)
    swapped = moore_det([xs[1], xs[0], xs[2]])
    assert swapped == -base


def test_delta_tuples_have_fixed_sum_and_distinct_residues():
    for n, m in [(2, 0), (3, 0), (3, 1), (3, -1)]:
        for ks, sign in delta_tuples(n, 2, [1] * n, m, 40):
            assert sum(ks) == n * (n - 1) // 2
            assert len({k % n for k in ks}) == n
            assert sign in (1, -1)


def test_delta_n1_is_identity():
    x = mono(F2, 2, 3) + mono(F2, 2, 5)
    assert delta0([x], 20) == x


def test_delta_n2_first_terms():
    # tuples (k1, k2) with k1 + k2 = 1 and k1 != k2 mod 2: (0,1) sign +, (1,0) sign -, (2,-1) sign +, ...
    x, y = mono(F2, 2, 1), mono(F2, 2, 2)
    d = delta0([x, y], 6)
    # x y^2 = t^5, x^2 y = t^4, x^4 y^(1/2) = t^5, x^(1/2) y^4 = t^8.5
    expected = mono(F2, 2, 4)  # t^5 terms cancel in characteristic 2
    assert d == expected.truncate(6)


def test_delta_rejects_nonpositive_valuation():
    with pytest.raises(ValueError):
        delta0([mono(F2, 2, 0), mono(F2, 2, 1)], 5)


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2)])
def test_delta_identities_hold(n, q):
    S = sampler(q, 7 * n + q)
    for _ in range(3):
        xs = [S.series(Fraction(S.rng.randint(1, 4), S.rng.choice([1, q]))) for _ in range(n)]
        recs = remark_identities(xs, 3 * q ** (n - 1))
        assert all(r.ok for r in recs), [r.name for r in recs if not r.ok]


@pytest.mark.parametrize("n,q", [(2, 2), (3, 2), (2, 3)])
def test_cancel_lemma(n, q):
    S = sampler(q, n * q)
    for _ in range(4):
        xn = S.series(Fraction(S.rng.randint(1, 3)))
        T = S.series(Fraction(S.rng.randint(1, 5)))
        for i in range(1, n + 1):
            assert check_cancel_lemma(i, xn, T, n, 4 * q**n) == "pass"


def test_cancel_lemma_hypotheses():
    with pytest.raises(HypothesisError):
        check_cancel_lemma(1, mono(F2, 2, 0), mono(F2, 2, 1), 2, 8)
    with pytest.raises(ValueError):
        check_cancel_lemma(3, mono(F2, 2, 1), mono(F2, 2, 1), 2, 8)


def test_bound_examples():
    assert M1(2, 2, 0) == 4
    assert M1(3, 2, 1) == (3 + 1) * 4
    assert M2(3, 2, 0, 1) == 3 * 4
    assert M2(2, 3, 1, 1) == (2 + 0) * 9
    assert M3(3, 2, 3) == 2
    assert M3(3, 2, 4) == Fraction(2, 3) * 2 + Fraction(1, 3) * 4


@given(st.integers(1, 4), st.sampled_from([2, 3, 4, 5, 7, 8, 9]), st.integers(1, 40))
def test_m3_routes_agree(n, q, nu):
    routes = m3_routes(n, q, nu)
    assert routes["direct"] == routes["via_M1"]
    if nu % 2 == 0:
        assert routes["direct"] == routes["via_M2"]


@given(st.integers(1, 4), st.sampled_from([2, 3, 4]), st.integers(1, 30))
def test_m3_is_monotone(n, q, nu):
    assert M3(n, q, nu) < M3(n, q, nu + 1)


def test_estimate2_cases_cover_parameter_space():
    assert estimate2_case(3, 0, Fraction(3, 2)) == 2
    assert estimate2_case(3, 2, Fraction(3, 2)) == 3
    assert estimate2_case(3, 0, 1) == 4
    assert estimate2_case(3, 1, 1) == 5
    assert estimate2_case(2, 1, 1) == 6
    assert estimate2_case(3, 2, 1) == 7
    assert estimate2_params_for_case(3, 2, 6) == []


@pytest.mark.parametrize("which", ["estimate", "estimate1", "estimate2"])
@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2)])
def test_estimates_hold_on_samples(which, n, q):
    recs = check_estimates(which, n, q, samples=8, seed=1)
    assert len(recs) == 8
    assert all(r.ok for r in recs), [(r.case, r.params) for r in recs if not r.ok]


def test_estimates_are_deterministic_in_seed():
    a = check_estimates("estimate1", 2, 2, samples=5, seed=3)
    b = check_estimates("estimate1", 2, 2, samples=5, seed=3)
    assert [(r.params, r.ok) for r in a] == [(r.params, r.ok) for r in b]


def test_estimate_hypothesis_errors():
    with pytest.raises(HypothesisError):
        check_estimates("estimate2", 1, 2, samples=1)
    with pytest.raises(HypothesisError):
        check_estimates("estimate2", 3, 2, samples=1, case=6)
    with pytest.raises(HypothesisError):
        check_estimates("estimate2", 3, 2, samples=1, c=5)
    with pytest.raises(ValueError):
        check_estimates("nope", 2, 2, samples=1)


def test_sampler_respects_bounds():
    S = sampler(3, 0)
    for b in itertools.islice(itertools.cycle([1, Fraction(4, 3), 7]), 30):
        assert S.at_least(b).val() >= b
