import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from redcheck.gf_core import (
    FieldElem,
    FieldError,
    get_field,
    is_irreducible,
    jacobi_symbol,
    legendre,
    make_tower,
    quad_res_symbol,
    smallest_irreducible,
    trace_to,
)

SMALL_FIELDS = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)]


def brute_irreducible(m, p):
    """No root and no monic factor of degree <= deg/2, by trial division over all monic polys."""
    from redcheck.gf_core import poly_mod

    deg = len(m) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(poly_mod(list(m), list(low) + [1], p)):
                return False
    return True


def test_prime_field_f2():
    T = make_tower(2, 1, 1)
    assert T.q == 2 and T.base.order == 2
    assert sorted(T.base.elements().tolist()) == [0, 1]


def test_f9_modulus_is_x2_plus_1():
    assert smallest_irreducible(3, 2) == (1, 0, 1)
    assert brute_irreducible((1, 0, 1), 3)


def test_f4_modulus_is_x2_x_1():
    assert make_tower(2, 2, 1).base.modulus == (1, 1, 1)


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_moduli_irreducible_by_trial_division(p, k):
    m = smallest_irreducible(p, k)
    assert brute_irreducible(m, p)
    assert is_irreducible(list(m), p)


@pytest.mark.parametrize("p,f,e", [(4, 1, 1), (2, 0, 1), (2, 32, 1)])
def test_make_tower_errors(p, f, e):
    with pytest.raises(FieldError):
        make_tower(p, f, e)


def test_trace_examples_f4():
    F4, F2 = get_field(2, 2), get_field(2, 1)
    assert trace_to(FieldElem(F4, 0), F2).value == 0
    assert trace_to(FieldElem(F4, 1), F2).value == 0
    alpha = FieldElem(F4, F4.generator)
    assert trace_to(alpha, F2).value == 1


def test_trace_needs_subfield():
    with pytest.raises(FieldError):
        trace_to(FieldElem(get_field(2, 3), 1), get_field(2, 2))


@pytest.mark.parametrize("p,k,d", [(2, 2, 1), (2, 4, 2), (3, 2, 1), (2, 6, 3), (2, 6, 2)])
def test_trace_surjective_and_frobenius_invariant(p, k, d):
    src, tgt = get_field(p, k), get_field(p, d)
    counts = {}
    for x in range(src.order):
        t = trace_to(FieldElem(src, x), tgt).value
        counts[t] = counts.get(t, 0) + 1
        assert trace_to(FieldElem(src, src.frob(x, d)), tgt).value == t
    assert sorted(counts) == list(range(tgt.order))
    assert set(counts.values()) == {src.order // tgt.order}


def test_quad_res_examples():
    F3, F9 = get_field(3, 1), get_field(3, 2)
    assert quad_res_symbol(FieldElem(F3, 1)) == 1
    assert quad_res_symbol(FieldElem(F3, 2)) == -1
    assert quad_res_symbol(FieldElem(F9, F9.generator)) == -1


def test_quad_res_errors():
    with pytest.raises(FieldError):
        quad_res_symbol(FieldElem(get_field(2, 1), 1))
    with pytest.raises(FieldError):
        quad_res_symbol(FieldElem(get_field(3, 1), 0))


@pytest.mark.parametrize("p,k", [(3, 1), (3, 2), (5, 1), (7, 1)])
def test_quad_res_multiplicative_and_euler(p, k):
    F = get_field(p, k)
    for x in range(1, F.order):
        euler = F.pow(x, (F.order - 1) // 2)
        assert quad_res_symbol(FieldElem(F, x)) == (1 if euler == 1 else -1)
        for y in range(1, F.order):
            xy = FieldElem(F, F.mul(x, y))
            assert quad_res_symbol(xy) == quad_res_symbol(FieldElem(F, x)) * quad_res_symbol(FieldElem(F, y))


def test_jacobi_examples():
    assert all(jacobi_symbol(1, m) == 1 for m in (1, 3, 5, 9, 15, 21))
    assert jacobi_symbol(2, 3) == -1
    assert jacobi_symbol(2, 15) == 1


@pytest.mark.parametrize("a,m", [(1, 4), (3, 9), (1, 0)])
def test_jacobi_errors(a, m):
    with pytest.raises(FieldError):
        jacobi_symbol(a, m)


def _prime_factorization(m):
    out, d = [], 3
    while m > 1:
        while m % d == 0:
            out.append(d)
            m //= d
        d += 2
    return out


@given(st.integers(1, 200), st.integers(0, 60))
def test_jacobi_is_product_of_legendre(a, k):
    m = 2 * k + 1
    if math.gcd(a, m) != 1:
        return
    expect = 1
    for r in _prime_factorization(m):
        expect *= legendre(a, get_field(r, 1))
    assert jacobi_symbol(a, m) == expect


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_frobenius_fixed_field_is_prime_field(p, k):
    F = get_field(p, k)
    fixed = [x for x in range(F.order) if F.pow(x, p) == x]
    assert fixed == list(range(p))


@pytest.mark.parametrize("p,f,e", [(2, 1, 3), (2, 2, 2), (3, 1, 2)])
def test_base_field_fixed_by_q_power(p, f, e):
    T = make_tower(p, f, e)
    top = T.top
    fixed = sorted(x for x in range(top.order) if top.pow(x, T.q) == x)
    assert len(fixed) == T.q
    assert fixed == sorted(T.embed(np.arange(T.q), 1, e).tolist())


@given(st.sampled_from(SMALL_FIELDS), st.data())
def test_field_axioms(pk, data):
    F = get_field(*pk)
    a, b, c = (FieldElem(F, data.draw(st.integers(0, F.order - 1))) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == FieldElem(F, 0)
    if a:
        assert a / a == FieldElem(F, 1)
    assert a ** F.order == a


@given(st.sampled_from(SMALL_FIELDS), st.data())
def test_vector_ops_match_scalar(pk, data):
    F = get_field(*pk)
    xs = data.draw(st.lists(st.integers(0, F.order - 1), min_size=1, max_size=8))
    ys = data.draw(st.lists(st.integers(0, F.order - 1), min_size=len(xs), max_size=len(xs)))
    assert F.vadd(xs, ys).tolist() == [F.add(x, y) for x, y in zip(xs, ys)]
    assert F.vmul(xs, ys).tolist() == [F.mul(x, y) for x, y in zip(xs, ys)]
    assert F.vneg(xs).tolist() == [F.negate(x) for x in xs]


def test_embedding_is_ring_map():
    T = make_tower(2, 2, 3)
    F, E = T.base, T.top
    for x in range(F.order):
        for y in range(F.order):
            assert T.embed(F.mul(x, y), 1, 3) == E.mul(int(T.embed(x, 1, 3)), int(T.embed(y, 1, 3)))
            assert T.embed(F.add(x, y), 1, 3) == E.add(int(T.embed(x, 1, 3)), int(T.embed(y, 1, 3)))
