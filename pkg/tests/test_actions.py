import math
import random

import pytest

from redcheck.actions import (
    bijective_on_points,
    composition_check,
    identity_action,
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
from redcheck.cohomology import Twist, predict_odd
from redcheck.gf_core import get_field
from redcheck.heisenberg import s1_group, s2_group
from redcheck.variety import count_points, rhs_trace_histogram, z_nu_system

F2, F3, F4 = get_field(2, 1), get_field(3, 1), get_field(2, 2)
SMALL = [(2, 1), (2, 2), (3, 1)]


def tuples(max_q_n=100):
    for pk in SMALL:
        F = get_field(*pk)
        for n in (2, 3, 4, 5):
            if n % F.p == 0 or F.order ** (n - 1) > max_q_n:
                continue
            for nu in range(1, 2 * n + 1):
                yield F, n, nu


def tuples_ok(max_q_n=100):
    return list(tuples(max_q_n))


def test_shift_order_n():
    sys = z_nu_system(5, 1, F2)
    g = shift_action(sys)
    perm = list(range(5))
    for _ in range(5):
        perm = [perm[i] for i in g.perm]
    assert perm == list(range(5))
    assert shift_action(sys, 5).perm == identity_action(sys).perm


@pytest.mark.parametrize("F,n,nu", tuples_ok())
def test_actions_preserve_system(F, n, nu):
    sys = z_nu_system(n, nu, F)
    for j in range(n):
        assert shift_action(sys, j).preserves()
    if nu % 2:
        assert sign_action(sys).preserves()
        assert translation_action(sys, 1).preserves()
    elif math.gcd(n, nu) == 1 or nu % n:
        for mk, act in ((s1_group, s1_action), (s2_group, s2_action)):
            G = mk(n, nu, F)
            rng = random.Random(0)
            for _ in range(5):
                assert act(sys, G, G.random_element(rng)).preserves()


def test_sign_examples():
    sys = z_nu_system(3, 1, F2)
    z, ys = 1, [0, 1, 1]
    assert sign_action(sys).apply(F2, z, ys)[1] == ys
    sys3 = z_nu_system(2, 1, F3)
    assert sign_action(sys3).preserves()
    y = [1, 2]
    _, once = sign_action(sys3).apply(F3, 0, y)
    _, twice = sign_action(sys3).apply(F3, 0, once)
    assert [int(a) for a in twice] == y


def test_sign_needs_odd_nu():
    with pytest.raises(ValueError):
        sign_action(z_nu_system(3, 2, F2))


def test_s1_central_and_identity():
    sys = z_nu_system(3, 2, F2)
    G = s1_group(3, 2, F2)
    c = s1_action(sys, G, G.central(1))
    assert c.v == 1 and not any(c.t) and not any(c.s)
    e = s1_action(sys, G, G.identity())
    assert e.v == 0 and not any(e.t) and not any(e.s)


def test_noncentral_bijection_n3_q2_nu2():
    sys = z_nu_system(3, 2, F2)
    # S2 coefficients live in F_8, so its check runs over F_64
    for mk, act, E in ((s1_group, s1_action, F4), (s2_group, s2_action, get_field(2, 6))):
        G = mk(3, 2, F2)
        for g in G.elements():
            if g[1] != G.w_zero():
                assert bijective_on_points(act(sys, G, g), E)


@pytest.mark.parametrize("F,n,nu", tuples_ok())
def test_gamma_fixed_points_are_q(F, n, nu):
    if nu % n == 0:
        return
    sys = z_nu_system(n, nu, F)
    for j in range(1, n):
        if math.gcd(j, n) == 1:
            assert twisted_count(shift_action(sys, j), 0) == F.order


def test_gamma_frobenius_fixed_points_n3_nu1_q2():
    sys = z_nu_system(3, 1, F2)
    assert twisted_count(shift_action(sys), 1) == 2


@pytest.mark.parametrize("F,n,nu", tuples_ok())
def test_identity_twisted_count_is_point_count(F, n, nu):
    sys = z_nu_system(n, nu, F)
    for m in (1, 2):
        assert twisted_count(identity_action(sys), m) == count_points(sys, m)


@pytest.mark.parametrize("F,n,nu", tuples_ok(max_q_n=16))
def test_twisted_count_matches_naive(F, n, nu):
    sys = z_nu_system(n, nu, F)
    acts = [shift_action(sys, 1), translation_action(sys, 1)]
    if nu % 2:
        acts.append(sign_action(sys))
    elif math.gcd(n, nu) == 1:
        rng = random.Random(1)
        G1, G2 = s1_group(n, nu, F), s2_group(n, nu, F)
        acts += [s1_action(sys, G1, G1.random_element(rng)), s2_action(sys, G2, G2.random_element(rng))]
    for a in acts:
        for m in (1, 2):
            k = F.k * naive_level(a, m)
            if k > 22 or F.p ** (k * sys.free_dim) > 2e6:
                continue
            E = get_field(F.p, k)
            assert twisted_count(a, m) == naive_twisted_count(a, m, E)


@pytest.mark.parametrize("n,nu,pk", [(3, 2, (2, 1)), (3, 4, (2, 1)), (3, 2, (2, 2)), (5, 2, (2, 1))])
def test_actions_compose_on_the_right(n, nu, pk):
    F = get_field(*pk)
    sys = z_nu_system(n, nu, F)
    # S2 coefficients live in F_{q^n}
    for mk, act, e in ((s1_group, s1_action, 2), (s2_group, s2_action, n)):
        E = get_field(F.p, F.k * e)
        if E.order ** sys.free_dim > 1e5:
            continue
        right, _ = composition_check(mk(n, nu, F), act, sys, E, pairs=50)
        assert right


@pytest.mark.parametrize("nu", [2, 4])
def test_lang_equivariance_n3_q2(nu):
    rep = lang_equivariance(3, nu, F2, 1)
    assert rep.ok
    assert rep.points == count_points(z_nu_system(3, nu, F2), 1)


@pytest.mark.parametrize("pk,n,nu", [((2, 1), 3, 1), ((2, 2), 3, 1), ((3, 1), 4, 3), ((5, 1), 3, 5), ((2, 2), 5, 1)])
def test_translation_count_is_a_trace_histogram_bin(pk, n, nu):
    F = get_field(*pk)
    sys = z_nu_system(n, nu, F)
    for v in range(1, min(F.order, 3)):
        for m in (1, 2):
            hist = rhs_trace_histogram(sys, m, method="plain")
            assert twisted_count(translation_action(sys, v), m) == F.order * int(hist[F.negate(v)])


def test_translation_count_beyond_enumeration_budget():
    F = get_field(2, 3)
    sys = z_nu_system(5, 1, F)
    # 64^4 fixed y-points over F_{q^2}; the count falls back to the fibered histogram
    predicted = predict_odd(5, 1, F).trace(2, Twist("translate", 1))
    assert twisted_count(translation_action(sys, 1), 2) == predicted.to_int()
