#!/usr/bin/env python3
"""Ортогональные группы O⁺(2n,q), SO⁺(2n,q): принадлежность, δ⁺, переписи, суммы Гаусса."""
import numpy as np
import pytest

from app.errors import DomainError, ResourceError
from app.expsum import kloosterman
from app.gf2r import field_new, mat_identity
from app.ogroup import (
    build_census,
    count_nonsingular_symmetric,
    coset_transversal,
    dickson,
    dickson_rank_parity,
    enumerate_o_plus_4,
    enumerate_so_plus_4,
    gauss_formula_params,
    gauss_sum_enumerated,
    gauss_sum_formula,
    group_order_formula,
    is_member,
    membership_via_form,
    multiply,
    nonsingular_symmetric_count,
    o_plus_2_elements,
    pack_matrix,
    q_binomial,
    sigma,
    so_plus_2_elements,
    theta_plus,
    trace_histogram,
    trace_histogram_formula,
    unpack_matrix,
)

OMEGA, OMEGA2 = 2, 3


def test_so2_gf4():
    census = so_plus_2_elements(field_new(2))
    assert census.order == 3
    assert sorted(int(t) for t in census.traces) == [0, 1, 1]
    assert trace_histogram(census) == {0: 1, 1: 2, OMEGA: 0, OMEGA2: 0}


def test_small_orders():
    assert so_plus_2_elements(field_new(1)).order == 1
    assert o_plus_2_elements(field_new(1)).order == 2
    assert so_plus_2_elements(field_new(4)).order == 15
    assert o_plus_2_elements(field_new(4)).order == 30


def test_o2_gf4_histogram_and_dickson():
    census = o_plus_2_elements(field_new(2))
    assert trace_histogram(census) == {0: 4, 1: 2, OMEGA: 0, OMEGA2: 0}
    assert census.dickson_counts == {0: 3, 1: 3}


def test_dickson_examples():
    ctx = field_new(3)
    assert dickson(ctx, mat_identity(2)) == 0
    assert dickson(ctx, mat_identity(4)) == 0
    assert dickson(ctx, sigma(1, 1)) == 1
    assert dickson(ctx, sigma(2, 2)) == 0
    assert dickson(ctx, sigma(2, 1)) == 1


def test_dickson_rejects_non_member():
    ctx = field_new(2)
    with pytest.raises(DomainError):
        dickson(ctx, ((1, 1), (0, 1)))


def test_membership_predicates_agree():
    ctx = field_new(2)
    candidates = [
        mat_identity(2),
        sigma(1, 1),
        ((1, 1), (0, 1)),
        ((OMEGA, 0), (0, OMEGA2)),
        ((OMEGA, 0), (0, OMEGA)),
        sigma(2, 1),
        ((1, 0, 0, 1), (0, 1, 1, 0), (0, 0, 1, 0), (0, 0, 0, 1)),
        ((1, 0, 0, 0), (0, 1, 0, 0), (1, 0, 1, 0), (0, 0, 0, 1)),
    ]
    for w in candidates:
        assert is_member(ctx, w) == membership_via_form(ctx, w)
    assert is_member(ctx, mat_identity(4))
    assert not is_member(ctx, ((1, 1), (0, 1)))
    with pytest.raises(DomainError):
        is_member(ctx, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))


def test_theta_plus():
    ctx = field_new(2)
    assert theta_plus(ctx, (1, 0, 0, 0), 2) == 0
    assert theta_plus(ctx, (1, 0, 1, 0), 2) == 1
    assert theta_plus(ctx, (OMEGA, 0, OMEGA, 0), 2) == OMEGA2


@pytest.mark.parametrize("r, order", [(1, 36), (2, 3600), (3, 254016)])
def test_so4_orders(r, order):
    census = enumerate_so_plus_4(field_new(r), threads=2)
    assert census.order == order
    assert census.dickson_counts == {0: order, 1: 0}


def test_so4_gf4_histogram():
    census = enumerate_so_plus_4(field_new(2))
    assert trace_histogram(census) == {0: 1664, 1: 688, OMEGA: 624, OMEGA2: 624}


@pytest.mark.parametrize("r", [1, 2, 3])
def test_histograms_match_formulas(r):
    ctx = field_new(r)
    assert trace_histogram(so_plus_2_elements(ctx)) == trace_histogram_formula(ctx, 1)
    assert trace_histogram(o_plus_2_elements(ctx)) == trace_histogram_formula(ctx, 2)
    assert trace_histogram(enumerate_so_plus_4(ctx)) == trace_histogram_formula(ctx, 3)


def test_histogram_formula_values():
    gf16 = field_new(4)
    assert trace_histogram_formula(gf16, 1)[0] == 1
    for beta in gf16.nonzero():
        if gf16.trace(gf16.inv(beta)) == 1:
            assert trace_histogram_formula(gf16, 2)[beta] == 0
    assert trace_histogram_formula(field_new(2), 3)[0] == 1664


def test_so4_enumeration_is_deterministic():
    ctx = field_new(2)
    forward = enumerate_so_plus_4(ctx, store_elements=True, threads=1)
    backward = enumerate_so_plus_4(ctx, store_elements=True, threads=3, reverse=True)
    assert np.array_equal(forward.elements, backward.elements)
    assert np.array_equal(forward.traces, backward.traces)


def test_so4_elements_are_members_and_closed():
    ctx = field_new(1)
    census = enumerate_so_plus_4(ctx, store_elements=True)
    elements = [census.element(k) for k in range(census.order)]
    packed = {int(v) for v in census.elements}
    for w in elements:
        assert is_member(ctx, w)
        assert dickson(ctx, w) == 0
    for x in elements[:6]:
        for y in elements:
            assert multiply(ctx, x, y).packed(ctx.q) in packed


def test_coset_transversal_size():
    assert len(coset_transversal(field_new(2))) == 5
    assert len(coset_transversal(field_new(2), with_sigma1=True)) == 10


def test_so4_budget():
    with pytest.raises(ResourceError):
        enumerate_so_plus_4(field_new(5))
    with pytest.raises(ResourceError):
        enumerate_o_plus_4(field_new(4))


@pytest.mark.parametrize("r", [1, 2])
def test_dickson_two_descriptions(r):
    ctx = field_new(r)
    census = enumerate_o_plus_4(ctx, store_elements=True)
    assert census.order == group_order_formula(ctx.q, 2, "O")
    assert census.dickson_counts == {0: census.order // 2, 1: census.order // 2}
    for k in range(0, census.order, 7):
        w = census.element(k)
        assert dickson(ctx, w) == dickson_rank_parity(ctx, w)


@pytest.mark.parametrize("r", [1, 2])
def test_dickson_is_homomorphism_on_o4(r):
    ctx = field_new(r)
    census = enumerate_o_plus_4(ctx, store_elements=True)
    rng = np.random.default_rng(r)
    for i, j in rng.integers(0, census.order, size=(300, 2)):
        x, y = census.element(int(i)), census.element(int(j))
        xy = multiply(ctx, x, y)
        assert is_member(ctx, xy)
        assert dickson(ctx, xy) == dickson(ctx, x) ^ dickson(ctx, y)


def test_membership_predicates_agree_on_so4_census():
    ctx = field_new(2)
    census = enumerate_so_plus_4(ctx, store_elements=True)
    for k in range(census.order):
        w = census.element(k)
        assert is_member(ctx, w)
        assert membership_via_form(ctx, w)


def test_membership_predicates_agree_on_random_matrices():
    ctx = field_new(2)
    rng = np.random.default_rng(11)
    members = 0
    for raw in rng.integers(0, ctx.q, size=(2000, 4, 4)):
        w = tuple(tuple(int(v) for v in row) for row in raw)
        expected = is_member(ctx, w)
        assert membership_via_form(ctx, w) == expected
        members += expected
    assert members < 2000
    census = enumerate_so_plus_4(ctx, store_elements=True)
    for k in range(0, census.order, 37):
        rows = [list(row) for row in census.element(k).mat]
        rows[k % 4][(k // 4) % 4] ^= 1 + k % 3
        w = tuple(tuple(row) for row in rows)
        assert membership_via_form(ctx, w) == is_member(ctx, w)
        assert not is_member(ctx, w)


def test_pack_matrix():
    mat = ((1, 2, 3, 0), (0, 1, 0, 3), (2, 2, 1, 0), (0, 0, 0, 1))
    assert unpack_matrix(pack_matrix(mat, 4), 4, 4) == mat
    assert pack_matrix(mat_identity(4), 4) >> 60 == 1


def test_gauss_sums_enumerated():
    gf4 = field_new(2)
    assert gauss_sum_enumerated(so_plus_2_elements(gf4), 1) == kloosterman(gf4, 1)
    assert gauss_sum_enumerated(o_plus_2_elements(gf4), 1) == 6
    assert gauss_sum_enumerated(enumerate_so_plus_4(gf4), 1) == 1104


def test_gauss_sum_formula_examples():
    gf4 = field_new(2)
    gf16 = field_new(4)
    for a in gf16.nonzero():
        assert gauss_sum_formula(gf16, 1, "SO", a) == kloosterman(gf16, a)
    assert gauss_sum_formula(gf16, 1, "O", 1) == kloosterman(gf16, 1) + 15
    assert gauss_sum_formula(gf4, 2, "SO", 1) == 1104


@pytest.mark.parametrize("r", [2, 3, 4])
def test_gauss_sums_formula_vs_enumeration_n1(r):
    ctx = field_new(r)
    so2, o2 = so_plus_2_elements(ctx), o_plus_2_elements(ctx)
    for a in ctx.nonzero():
        assert gauss_sum_enumerated(so2, a) == gauss_sum_formula(ctx, 1, "SO", a)
        assert gauss_sum_enumerated(o2, a) == gauss_sum_formula(ctx, 1, "O", a)


@pytest.mark.parametrize("r", [2, 3])
def test_gauss_sums_formula_vs_enumeration_n2(r):
    ctx = field_new(r)
    so4 = build_census(ctx, "so4")
    for a in ctx.nonzero():
        k = kloosterman(ctx, a)
        expected = ctx.q ** 2 * (k * k + ctx.q ** 3 - ctx.q)
        assert gauss_sum_enumerated(so4, a) == expected
        assert gauss_sum_formula(ctx, 2, "SO", a) == expected


def test_gauss_sum_o4_formula_vs_enumeration():
    ctx = field_new(2)
    o4 = build_census(ctx, "o4")
    for a in ctx.nonzero():
        assert gauss_sum_enumerated(o4, a) == gauss_sum_formula(ctx, 2, "O", a)


def test_group_order_formula():
    assert group_order_formula(16, 1, "O") == 30
    assert group_order_formula(4, 2, "SO") == 3600
    assert group_order_formula(2, 2, "O") == 72


def test_symmetric_counts():
    for r_field, sizes in ((1, (1, 2, 3)), (2, (1, 2, 3))):
        ctx = field_new(r_field)
        for r in sizes:
            assert count_nonsingular_symmetric(ctx, r) == nonsingular_symmetric_count(ctx.q, r)


def test_gauss_formula_params():
    for q in (2, 4, 8):
        for n in (1, 2, 3):
            params = gauss_formula_params(q, n)
            assert params.bruhat_order_sum == group_order_formula(q, n, "O")
    assert q_binomial(2, 4, 2) == 35


@pytest.mark.slow
def test_so4_gf16_census():
    ctx = field_new(4)
    census = enumerate_so_plus_4(ctx, threads=4)
    assert census.order == 16_646_400
    assert trace_histogram(census) == trace_histogram_formula(ctx, 3)
    for a in (1, ctx.generator):
        assert gauss_sum_enumerated(census, a) == gauss_sum_formula(ctx, 2, "SO", a)
