import numpy as np
import pytest

from redcheck.cyclotomic import AdditiveChar, CycInt, exp_sum, gauss_sum
from redcheck.gf_core import get_field
from redcheck.qform import QuadForm, random_form
from redcheck.variety import artin_schreier_system, count_points, z_nu_system
from redcheck.cohomology import (
    Twist,
    even_block_dimension,
    lefschetz_verify,
    odd_via_quadratic,
    predict_even,
    predict_odd,
    predict_quadratic,
)

F2, F3, F4, F5 = (get_field(p, k) for p, k in [(2, 1), (3, 1), (2, 2), (5, 1)])


def _psi_piece(pred, a):
    (pc,) = [pc for pc in pred.pieces if pc.psi == a]
    return pc


def test_square_over_f3_sits_in_degree_one():
    Q = QuadForm.from_dict(F3, 1, {(0, 0): 1})
    pred = predict_quadratic(Q)
    pc = _psi_piece(pred, 1)
    assert pc.degree == 1
    assert pc.frob == -gauss_sum(AdditiveChar(F3, 1))
    assert pred.trace(1).to_int() == count_points(artin_schreier_system(Q), 1)


def test_hyperbolic_plane_over_f2():
    Q = QuadForm.from_dict(F2, 2, {(0, 1): 1})
    pred = predict_quadratic(Q)
    pc = _psi_piece(pred, 1)
    assert (pc.degree, pc.frob) == (2, CycInt.integer(2, 2))
    # z^2 + z = xy over F_2: xy = 0 on three pairs, two z each
    assert pred.trace(1).to_int() == 6 == count_points(artin_schreier_system(Q), 1)


def test_anisotropic_plane_over_f2_has_negative_scalar():
    Q = QuadForm.from_dict(F2, 2, {(0, 0): 1, (0, 1): 1, (1, 1): 1})
    pc = _psi_piece(predict_quadratic(Q), 1)
    assert (pc.degree, pc.frob) == (2, CycInt.integer(2, -2))


def test_char2_form_nonzero_on_radical_has_no_psi_part():
    Q = QuadForm.from_dict(F2, 1, {(0, 0): 1})
    pred = predict_quadratic(Q)
    assert [pc.psi for pc in pred.pieces] == [0]
    assert pred.trace(1).to_int() == 2 == count_points(artin_schreier_system(Q), 1)


def test_literal_char2_rule_disagrees_with_count_on_radical():
    Q = QuadForm.from_dict(F2, 1, {(0, 0): 1})
    lit = predict_quadratic(Q, literal=True).trace(1)
    assert lit.to_int() != count_points(artin_schreier_system(Q), 1)


def test_zero_form_rejected():
    with pytest.raises(ValueError):
        predict_quadratic(QuadForm.zero(F3, 2))


@pytest.mark.parametrize("F", [F2, F3, F4, F5], ids=str)
def test_quadratic_psi_parts_match_exponential_sums(F):
    rng = np.random.default_rng(F.order)
    checked = 0
    while checked < 30:
        Q = random_form(F, int(rng.integers(1, 4)), rng)
        if Q.is_zero():
            continue
        pred = predict_quadratic(Q)
        for e in (1, 2):
            if F.order ** (e * Q.dim) > 1e5:
                continue
            for a in range(1, F.order):
                assert pred.trace(e, psi=a) == exp_sum(Q.to_poly(), AdditiveChar(F, a), e)
        checked += 1


@pytest.mark.parametrize("F", [F2, F3, F4, F5], ids=str)
def test_lefschetz_verify_accepts_quadratic_predictions(F):
    rng = np.random.default_rng(100 + F.order)
    for _ in range(10):
        Q = random_form(F, int(rng.integers(1, 4)), rng)
        if Q.is_zero():
            continue
        jobs = [(Twist(), 1), (Twist(), 2), (Twist("translate", 1), 1)]
        recs = lefschetz_verify(predict_quadratic(Q), artin_schreier_system(Q), jobs, budget=1e6)
        assert recs and all(r.ok for r in recs)


def test_odd_example_n3_nu1_q2():
    pred = predict_odd(3, 1, F2)
    pc = _psi_piece(pred, 1)
    assert (pc.degree, pc.frob) == (2, CycInt.integer(2, -2))
    assert pred.trace(1).to_int() == 2 == count_points(z_nu_system(3, 1, F2), 1)


def test_odd_nu_equal_n_gives_top_degree_only():
    pred = predict_odd(3, 3, F2)
    assert pred.degrees() == [4]
    assert pred.trace(1).to_int() == 2 * 4 == count_points(z_nu_system(3, 3, F2), 1)
    assert _psi_piece(pred, 1).scalar(Twist("gamma", 1)) == 1


def test_odd_rejects_even_nu():
    with pytest.raises(ValueError):
        predict_odd(3, 2, F2)


@pytest.mark.parametrize("n,nu,F", [(3, 1, F2), (3, 5, F4), (2, 1, F3), (4, 1, F3), (4, 3, F5), (5, 3, F2), (2, 3, F5)])
def test_odd_closed_form_matches_quadratic_route(n, nu, F):
    pred, via = predict_odd(n, nu, F), odd_via_quadratic(n, nu, F)
    for e in (1, 2):
        for a in range(F.order):
            assert pred.trace(e, psi=a) == via.trace(e, psi=a)


@pytest.mark.parametrize("n,nu,F", [(3, 1, F2), (3, 5, F2), (2, 1, F3), (4, 1, F3), (4, 3, F5), (3, 1, F4)])
def test_odd_prediction_passes_twisted_lefschetz(n, nu, F):
    jobs = [(Twist(), 1), (Twist(), 2), (Twist("gamma", 1), 1), (Twist("sign"), 1), (Twist("translate", 1), 1)]
    recs = lefschetz_verify(predict_odd(n, nu, F), z_nu_system(n, nu, F), jobs, budget=1e6)
    assert all(r.ok for r in recs)


def test_even_prediction_shape():
    pred = predict_even(3, 2, F2)
    pc = _psi_piece(pred, 1)
    assert (pc.degree, pc.dim) == (2, 4)
    assert pred.trace(1).to_int() == count_points(z_nu_system(3, 2, F2), 1)


def test_even_preconditions():
    with pytest.raises(ValueError):
        predict_even(3, 1, F2)
    with pytest.raises(ValueError):
        predict_even(4, 2, F3)


def test_even_prediction_does_not_cover_high_frobenius_powers():
    with pytest.raises(ValueError):
        lefschetz_verify(predict_even(3, 2, F2), z_nu_system(3, 2, F2), [(Twist(), 2)])


@pytest.mark.parametrize("n,nu,F", [(3, 2, F2), (3, 4, F2), (2, 2, F3), (3, 2, F4)])
def test_even_block_dimension_from_frobenius_n(n, nu, F):
    sys = z_nu_system(n, nu, F)
    for a in range(1, F.order):
        assert even_block_dimension(sys, a) == F.order ** (n - 1)
