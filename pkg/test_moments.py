#!/usr/bin/env python3
"""Моменты сумм Клоостермана: перебор, тождество Плесс, рекурсии через спектры кодов."""
import pytest

from app.codes import build_code_spec, dual_weights, weight_distribution_dp, weight_distribution_macwilliams
from app.errors import PreconditionError
from app.expsum import salie_counts
from app.gf2r import field_new
from app.moments import (
    binomial_moment_check,
    closed_forms_check,
    mk_recursive,
    moments_bruteforce,
    pless_check,
    salie_identity_check,
    stirling2,
    stirling2_explicit,
)
from app.tables_data import POWER_MOMENTS


def test_stirling():
    assert stirling2(4, 2) == 7
    assert stirling2(5, 5) == 1
    assert stirling2(5, 0) == 0
    assert stirling2(0, 0) == 1
    for h in range(12):
        for t in range(h + 1):
            assert stirling2(h, t) == stirling2_explicit(h, t)


def test_moments_bruteforce_examples():
    assert moments_bruteforce(field_new(4), 1, 4).values == (15, 1, 239, 289, 7631)
    assert moments_bruteforce(field_new(5), 1, 3)[3] == -959
    assert moments_bruteforce(field_new(2), 1, 2)[2] == 11


@pytest.mark.parametrize("r", [4, 5])
def test_moments_bruteforce_golden(r):
    assert list(moments_bruteforce(field_new(r), 1, 29).values) == POWER_MOMENTS[r]


def test_moments_bruteforce_rejects_bad_m():
    with pytest.raises(PreconditionError):
        moments_bruteforce(field_new(3), 3, 4)


def test_closed_forms():
    for r in range(1, 8):
        report = closed_forms_check(field_new(r))
        assert report["holds"], report


def test_pless_degenerate_h0():
    ctx = field_new(4)
    spec = build_code_spec(ctx, 1)
    assert pless_check(dual_weights(spec), weight_distribution_dp(spec), ctx.r, 0)["holds"]


@pytest.mark.parametrize("r, which", [(3, 1), (4, 1), (5, 1), (4, 2), (5, 2)])
def test_pless_identity_small_codes(r, which):
    ctx = field_new(r)
    spec = build_code_spec(ctx, which, with_coordinates=False)
    dist = weight_distribution_dp(spec, max_weight=10)
    weights = dual_weights(spec)
    for h in range(11):
        assert pless_check(weights, dist, ctx.r, h)["holds"]


def test_pless_identity_so4_code():
    ctx = field_new(2)
    spec = build_code_spec(ctx, 3, with_coordinates=False)
    dist = weight_distribution_macwilliams(spec, max_weight=6)
    weights = dual_weights(spec)
    for h in range(7):
        assert pless_check(weights, dist, ctx.r, h)["holds"]


def test_pless_needs_enough_weights():
    ctx = field_new(4)
    spec = build_code_spec(ctx, 1)
    dist = weight_distribution_dp(spec, max_weight=3)
    with pytest.raises(PreconditionError):
        pless_check(dual_weights(spec), dist, ctx.r, 5)


@pytest.mark.parametrize("r", [4, 5])
@pytest.mark.parametrize("variant", ["a", "b"])
def test_recursions_reproduce_golden(r, variant):
    series = mk_recursive(field_new(r), variant, 29)
    assert list(series.values) == POWER_MOMENTS[r]


def test_recursion_gf32_odd_moments():
    series = mk_recursive(field_new(5), "a", 9)
    assert series[3] == -959
    assert series[5] == -63359
    assert series[9] == 613044481


@pytest.mark.parametrize("r", [3, 6])
def test_recursion_a_matches_bruteforce(r):
    ctx = field_new(r)
    assert mk_recursive(ctx, "a", 12).values == moments_bruteforce(ctx, 1, 12).values


def test_recursion_variant_preconditions():
    with pytest.raises(PreconditionError):
        mk_recursive(field_new(2), "a", 5)
    with pytest.raises(PreconditionError):
        mk_recursive(field_new(1), "c2", 3)
    with pytest.raises(PreconditionError):
        mk_recursive(field_new(4), "x", 3)


def test_recursion_rejects_short_distribution():
    ctx = field_new(4)
    spec = build_code_spec(ctx, 1)
    with pytest.raises(PreconditionError):
        mk_recursive(ctx, "a", 10, dist=weight_distribution_dp(spec, max_weight=4))


@pytest.mark.parametrize("r", [2, 3])
def test_recursions_from_so4_code(r):
    ctx = field_new(r)
    h = 6
    c2 = mk_recursive(ctx, "c2", h)
    ck = mk_recursive(ctx, "cK", h)
    brute1 = moments_bruteforce(ctx, 1, 2 * h)
    brute2 = moments_bruteforce(ctx, 2, h)
    assert c2.values == brute2.values
    assert ck.values == tuple(brute1[2 * l] for l in range(h + 1))
    assert ck.exponents() == [2 * l for l in range(h + 1)]
    assert binomial_moment_check(ck, c2, ctx.q)["holds"]


def test_binomial_moment_check_on_bruteforce():
    ctx = field_new(4)
    k = moments_bruteforce(ctx, 1, 20)
    k2 = moments_bruteforce(ctx, 2, 10)
    report = binomial_moment_check(k, k2, ctx.q)
    assert report["holds"]
    assert report["checked"] == 11


def test_salie_identity():
    for r, h_max in ((2, 4), (3, 3), (4, 3)):
        rows = salie_identity_check(field_new(r), h_max)
        assert all(row["holds"] for row in rows), rows
    rows = salie_identity_check(field_new(2), 1)
    assert rows[0]["M_prev"] == 0
    assert rows[0]["MK"] == 1
    assert salie_identity_check(field_new(4), 3)[2]["MK"] == 289


def test_salie_identity_uses_previous_length_counts():
    ctx = field_new(3)
    rows = salie_identity_check(ctx, 4)
    for row in rows[1:]:
        assert row["M_prev"] == salie_counts(ctx, row["h"] - 1).M_h
        assert row["via_M"] == row["MK"]
    assert salie_identity_check(field_new(2), 2)[1]["M_prev"] == 1


@pytest.mark.slow
def test_recursions_from_complete_so4_code_gf4():
    ctx = field_new(2)
    spec = build_code_spec(ctx, 3, with_coordinates=False)
    dist = weight_distribution_macwilliams(spec)
    c2 = mk_recursive(ctx, "c2", 8, dist=dist)
    ck = mk_recursive(ctx, "cK", 8, dist=dist)
    assert c2.values == moments_bruteforce(ctx, 2, 8).values
    assert ck.values == tuple(moments_bruteforce(ctx, 1, 16)[2 * l] for l in range(9))
