import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from redcheck import linalg
from redcheck.gf_core import get_field
from redcheck.qform import (
    Block,
    QuadForm,
    all_forms,
    arf_by_counting,
    arf_census_f2,
    block_form,
    decompose,
    fiber_count,
    invariants,
    nondegenerate,
    random_form,
    random_invertible,
)

F2, F3 = get_field(2, 1), get_field(3, 1)
FIELDS = [(2, 1), (2, 2), (2, 3), (3, 1), (5, 1), (7, 1)]


def form(F, m, coeffs):
    return QuadForm.from_dict(F, m, coeffs)


XY = form(F2, 2, {(0, 1): 1})
X2_XY_Y2 = form(F2, 2, {(0, 0): 1, (0, 1): 1, (1, 1): 1})


def test_decompose_zero_form():
    dec = decompose(QuadForm.zero(F3, 3))
    assert [b.kind for b in dec.blocks] == ["zero"] * 3
    assert dec.M == linalg.identity(3)


def test_decompose_xy():
    dec = decompose(XY)
    assert dec.blocks == (Block("hyp", (0, 0)),)
    assert invariants(XY).rank == 2


def test_decompose_hyp_plus_line():
    Q = form(F2, 3, {(0, 0): 1, (0, 1): 1, (1, 1): 1, (2, 2): 1})
    dec = decompose(Q)
    assert sorted(b.kind for b in dec.blocks) == ["hyp", "line"]
    inv = invariants(Q)
    assert (inv.rank, inv.ql_lines, inv.zero_lines) == (2, 1, 0)


def test_invariants_examples():
    inv = invariants(form(F3, 1, {(0, 0): 1}))
    assert inv.rank == 1 and inv.det_class == "square"
    assert invariants(X2_XY_Y2).arf == 1
    assert invariants(XY).arf == 0


def test_fiber_examples():
    assert fiber_count(QuadForm.zero(F3, 3), 0) == 27
    assert fiber_count(XY, 1) == 1
    assert fiber_count(X2_XY_Y2, 1) == 3


def test_arf_by_counting_examples():
    assert arf_by_counting(XY) == 0
    assert arf_by_counting(X2_XY_Y2) == 1
    Q = form(F2, 4, {(0, 1): 1, (2, 3): 1})
    assert fiber_count(Q, 1) == 6
    assert arf_by_counting(Q) == 0


def test_arf_by_counting_rejects_degenerate():
    with pytest.raises(ValueError):
        arf_by_counting(form(F2, 2, {(0, 0): 1}))


def _roundtrip_exact(Q):
    dec = decompose(Q)
    assert linalg.det(Q.field, dec.M) != 0
    B = block_form(Q.field, list(dec.blocks))
    assert Q.compose(dec.M) == B
    return dec, B


@pytest.mark.parametrize("pk,m", [((2, 1), 3), ((3, 1), 2), ((2, 2), 2)])
def test_roundtrip_all_forms(pk, m):
    F = get_field(*pk)
    for Q in all_forms(F, m):
        dec, B = _roundtrip_exact(Q)
        # evaluation check on every vector: B(u) = Q(M u)
        for u in itertools.product(range(F.order), repeat=m):
            assert B(list(u)) == Q(linalg.mat_vec(F, dec.M, list(u)))


@pytest.mark.parametrize("pk", FIELDS)
def test_invariants_stable_under_substitution(pk):
    F = get_field(*pk)
    rng = np.random.default_rng(sum(pk))
    for _ in range(200):
        m = int(rng.integers(1, 7))
        Q = random_form(F, m, rng)
        M = random_invertible(F, m, rng)
        assert invariants(Q.compose(M)) == invariants(Q)
        _roundtrip_exact(Q)


@given(st.sampled_from(FIELDS), st.integers(0, 2**32 - 1))
def test_direct_sum_additivity(pk, seed):
    F = get_field(*pk)
    rng = np.random.default_rng(seed)
    Q1 = random_form(F, int(rng.integers(1, 4)), rng)
    Q2 = random_form(F, int(rng.integers(1, 4)), rng)
    i1, i2, i = invariants(Q1), invariants(Q2), invariants(Q1.direct_sum(Q2))
    if F.p != 2:
        assert i.rank == i1.rank + i2.rank
        assert i.det_square == (i1.det_square == i2.det_square)
    elif i1.arf is not None and i2.arf is not None:
        assert i.arf == (i1.arf + i2.arf) % 2


def test_arf_counting_agrees_on_random_forms():
    rng = np.random.default_rng(7)
    seen = 0
    while seen < 100:
        m = int(rng.choice([2, 4, 6]))
        Q = random_form(F2, m, rng)
        if not nondegenerate(Q):
            continue
        assert arf_by_counting(Q) == invariants(Q).arf
        seen += 1


@pytest.mark.parametrize("m,count", [(2, 4), (4, 448)])
def test_arf_census_small(m, count):
    # 2^m diagonals times |GL_m(F_2)| / |Sp_m(F_2)| alternating forms: 2 * 1 * 2, 16 * 20160 / 720
    assert arf_census_f2(m) == (count, 0)


def test_arf_census_counts_nondegenerate_forms():
    # brute force for m = 2: count nondegenerate forms among all 8
    n = sum(nondegenerate(Q) for Q in all_forms(F2, 2))
    assert arf_census_f2(2)[0] == n
