#!/usr/bin/env python3
"""Коды C(SO⁺(2,q)), C(O⁺(2,q)), C(SO⁺(4,q)): двойственные веса и весовые спектры."""
import pytest

from app.codes import (
    build_code_spec,
    coordinate_classes,
    dual_codeword,
    dual_kernel_check,
    dual_weight,
    dual_weight_from_histogram,
    dual_weights,
    iter_codewords,
    krawtchouk_values,
    weight_distribution_bruteforce,
    weight_distribution_dp,
    weight_distribution_macwilliams,
)
from app.errors import PreconditionError, ResourceError
from app.expsum import kloosterman_table
from app.gf2r import field_new
from app.tables_data import WEIGHT_DISTRIBUTIONS

OMEGA = 2


def _as_list(dist):
    return [dist[j] for j in range(dist.length + 1)]


def test_code_lengths():
    assert build_code_spec(field_new(4), 1).length == 15
    assert build_code_spec(field_new(5), 2).length == 62
    assert build_code_spec(field_new(2), 3).length == 3600


def test_unknown_code_rejected():
    with pytest.raises(PreconditionError):
        build_code_spec(field_new(3), 4)


def test_dual_codewords_gf4():
    spec = build_code_spec(field_new(2), 1)
    assert not dual_codeword(spec, 0).any()
    assert not dual_codeword(spec, 1).any()
    assert int(dual_codeword(spec, OMEGA).sum()) == 2


def test_dual_codeword_needs_coordinates():
    spec = build_code_spec(field_new(2), 3, with_coordinates=False)
    with pytest.raises(PreconditionError):
        dual_codeword(spec, 1)


def test_dual_weights_so4_gf4():
    spec = build_code_spec(field_new(2), 3)
    assert dual_weight(spec, 1) == 1248
    assert dual_weight(spec, OMEGA) == 1312
    assert dual_weight_from_histogram(spec, 1) == 1248


def test_dual_weight_from_kloosterman_value():
    ctx = field_new(4)
    spec = build_code_spec(ctx, 1)
    table = kloosterman_table(ctx).values
    a = next(x for x in ctx.nonzero() if table[x] == 7)
    assert dual_weight(spec, a) == 4
    assert int(dual_codeword(spec, a).sum()) == 4


@pytest.mark.parametrize("r, which", [(2, 1), (3, 1), (4, 1), (5, 1), (3, 2), (4, 2), (2, 3)])
def test_dual_weight_three_ways(r, which):
    ctx = field_new(r)
    spec = build_code_spec(ctx, which, with_coordinates=True)
    for a in ctx.nonzero():
        w = dual_weight(spec, a)
        assert w == dual_weight_from_histogram(spec, a)
        assert w == int(dual_codeword(spec, a).sum())


def test_dual_kernel():
    assert dual_kernel_check(build_code_spec(field_new(2), 1))["kernel_size"] == 2
    assert dual_kernel_check(build_code_spec(field_new(4), 1))["injective"]
    assert dual_kernel_check(build_code_spec(field_new(2), 3, with_coordinates=False))["injective"]


def test_gf16_code_all_methods():
    spec = build_code_spec(field_new(4), 1)
    expected = WEIGHT_DISTRIBUTIONS[4]
    assert expected[7] == 403
    assert _as_list(weight_distribution_dp(spec)) == expected
    assert _as_list(weight_distribution_macwilliams(spec)) == expected
    assert _as_list(weight_distribution_bruteforce(spec)) == expected


def test_gf32_code_dp_and_macwilliams():
    spec = build_code_spec(field_new(5), 1)
    expected = WEIGHT_DISTRIBUTIONS[5]
    assert expected[15] == 9392163
    dp = weight_distribution_dp(spec)
    assert _as_list(dp) == expected
    assert _as_list(weight_distribution_macwilliams(spec)) == expected
    assert dp.is_symmetric()


@pytest.mark.slow
def test_gf32_code_bruteforce():
    spec = build_code_spec(field_new(5), 1)
    assert _as_list(weight_distribution_bruteforce(spec)) == WEIGHT_DISTRIBUTIONS[5]


def test_gf4_code_has_free_coordinate():
    spec = build_code_spec(field_new(2), 1)
    dist = weight_distribution_dp(spec)
    assert dist.freqs == {0: 1, 1: 1, 2: 1, 3: 1}
    assert weight_distribution_bruteforce(spec).freqs == dist.freqs


def test_small_codes_match_bruteforce():
    for r, which in ((3, 1), (3, 2), (4, 2), (1, 3)):
        spec = build_code_spec(field_new(r), which, with_coordinates=True)
        brute = weight_distribution_bruteforce(spec)
        assert weight_distribution_dp(spec).freqs == brute.freqs
        assert weight_distribution_macwilliams(spec).freqs == brute.freqs


def test_code_sizes():
    gf8 = field_new(3)
    assert weight_distribution_bruteforce(build_code_spec(gf8, 1)).total() == 2 ** 4
    assert weight_distribution_bruteforce(build_code_spec(gf8, 2)).total() == 2 ** 11


def test_o2_code_symmetric():
    spec = build_code_spec(field_new(4), 2)
    dist = weight_distribution_macwilliams(spec)
    assert dist.is_symmetric()
    assert all(dist[j] == dist[30 - j] for j in range(31))


def test_so4_code_truncated():
    spec = build_code_spec(field_new(2), 3, with_coordinates=False)
    mw = weight_distribution_macwilliams(spec, max_weight=12)
    dp = weight_distribution_dp(spec, max_weight=12)
    assert mw[0] == 1
    assert mw.freqs == dp.freqs
    assert not mw.complete
    with pytest.raises(PreconditionError):
        mw.is_symmetric()


def test_so4_code_complete_gf4():
    spec = build_code_spec(field_new(2), 3, with_coordinates=False)
    dp = weight_distribution_dp(spec)
    mw = weight_distribution_macwilliams(spec)
    assert dp.complete
    assert dp.freqs == mw.freqs
    assert dp.total() == 2 ** (3600 - 2)
    assert dp.is_symmetric()


def test_budgets():
    with pytest.raises(ResourceError):
        weight_distribution_dp(build_code_spec(field_new(9), 1, with_coordinates=False))
    with pytest.raises(ResourceError):
        weight_distribution_dp(build_code_spec(field_new(3), 3, with_coordinates=False))
    with pytest.raises(ResourceError):
        weight_distribution_bruteforce(build_code_spec(field_new(6), 1))


def test_delsarte_orthogonality():
    ctx = field_new(4)
    spec = build_code_spec(ctx, 1)
    duals = []
    for a in ctx.nonzero():
        bits = dual_codeword(spec, a)
        duals.append(sum(1 << j for j, b in enumerate(bits) if b))
    count = 0
    for word in iter_codewords(spec):
        count += 1
        assert all(bin(word & d).count("1") % 2 == 0 for d in duals)
    assert count == 2 ** (15 - 4)


def test_krawtchouk():
    assert krawtchouk_values(5, 0, 5) == [1, 5, 10, 10, 5, 1]
    assert krawtchouk_values(4, 4, 4) == [1, -4, 6, -4, 1]


def test_dual_weights_include_zero():
    spec = build_code_spec(field_new(3), 1)
    weights = dual_weights(spec)
    assert weights[0] == 0
    assert len(weights) == 8


def test_coordinate_classes():
    ctx = field_new(2)
    report = coordinate_classes(ctx, 3)
    assert report["nu0"] == 1664
    assert sum(entry["count"] for entry in report["classes"].values()) == 3
    assert coordinate_classes(field_new(4), 1)["nu0"] == 1


@pytest.mark.parametrize("r, which", [(2, 1), (3, 1), (3, 2), (4, 1)])
def test_code_size_follows_dual_rank(r, which):
    spec = build_code_spec(field_new(r), which)
    rank = dual_kernel_check(spec)["support_rank"]
    assert rank == (1 if r == 2 else r)
    assert weight_distribution_dp(spec).total() == 2 ** (spec.length - rank)
