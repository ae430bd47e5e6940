#!/usr/bin/env python3
"""Суммы Клоостермана K, K_m, K_GL и тождества для них."""
import pytest

from app.errors import DomainError, ResourceError
from app.expsum import (
    artin_schreier_sum,
    class_number_kronecker,
    irreducible_quadratic_sum,
    kloosterman,
    kloosterman_gl,
    kloosterman_m,
    kloosterman_m_table,
    kloosterman_table,
    salie_counts,
    twisted_sum,
    twisted_sum_rhs,
    value_set_report,
)
from app.gf2r import field_new

OMEGA = 2


def test_kloosterman_gf4():
    ctx = field_new(2)
    assert kloosterman(ctx, 1) == 3
    assert kloosterman(ctx, OMEGA) == -1


def test_kloosterman_zero_argument_rejected():
    ctx = field_new(3)
    with pytest.raises(DomainError):
        kloosterman(ctx, 0)
    with pytest.raises(DomainError):
        kloosterman(ctx, 1, scale=0)


def test_first_moment_is_one():
    ctx = field_new(4)
    assert sum(kloosterman(ctx, a) for a in ctx.nonzero()) == 1


@pytest.mark.parametrize("r, expected", [
    (2, {-1: 2, 3: 1}),
    (3, {-5: 1, -1: 3, 3: 3}),
    (4, {-5: 4, -1: 5, 3: 4, 7: 2}),
])
def test_table_multiplicities(r, expected):
    table = kloosterman_table(field_new(r))
    assert table.multiplicities == expected
    assert sum(table.multiplicities.values()) == table.ctx.q - 1


@pytest.mark.parametrize("r", [2, 3, 4, 5, 6, 8])
def test_direct_and_convolution_agree(r):
    ctx = field_new(r)
    direct = kloosterman_table(ctx, method="direct", threads=2)
    conv = kloosterman_table(ctx, method="convolution")
    assert direct.values == conv.values


def test_direct_table_budget():
    with pytest.raises(ResourceError):
        kloosterman_table(field_new(11), method="direct")


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_value_set_and_weil_bound(r):
    report = value_set_report(kloosterman_table(field_new(r)))
    assert report["range_matches"]
    assert report["weil_bound_holds"]
    assert report["mod4_holds"]
    assert all(row["matches_t2_minus_4q"] for row in report["rows"])


def test_value_set_reports_rejected_hypothesis():
    report = value_set_report(kloosterman_table(field_new(4)))
    assert any(not row["matches_t2_minus_q"] for row in report["rows"])


def test_class_numbers():
    assert class_number_kronecker(-3) == 1
    assert class_number_kronecker(-4) == 1
    assert class_number_kronecker(-7) == 1
    assert class_number_kronecker(-15) == 2
    assert class_number_kronecker(-39) == 4
    with pytest.raises(DomainError):
        class_number_kronecker(-5)


def test_kloosterman_m_gf4():
    ctx = field_new(2)
    assert kloosterman_m(ctx, 2, 1) == 5
    assert kloosterman_m(ctx, 2, OMEGA) == -3


@pytest.mark.parametrize("method", ["direct", "eliminate", "convolution"])
def test_kloosterman_m_methods(method):
    ctx = field_new(3)
    for a in ctx.nonzero():
        assert kloosterman_m(ctx, 1, a, method) == kloosterman(ctx, a)
        assert kloosterman_m(ctx, 3, a, method) == kloosterman_m_table(ctx, 3)[a]


def test_k2_is_k_squared_minus_q():
    ctx = field_new(5)
    k = kloosterman_table(ctx).values
    k2 = kloosterman_m_table(ctx, 2)
    assert all(k2[a] == k[a] ** 2 - ctx.q for a in ctx.nonzero())


def test_frobenius_invariance():
    ctx = field_new(5)
    k = kloosterman_table(ctx).values
    assert all(k[ctx.mul(a, a)] == k[a] for a in ctx.nonzero())


def test_kloosterman_gl():
    ctx = field_new(2)
    assert kloosterman_gl(ctx, 1, 1) == kloosterman(ctx, 1)
    assert kloosterman_gl(ctx, 2, 1) == 84
    assert kloosterman_gl(ctx, 2, 1, method="bruteforce") == 84
    assert kloosterman_gl(ctx, 0, 1) == 1


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_kloosterman_gl_recursive_equals_explicit(r):
    ctx = field_new(r)
    for t in range(1, 6):
        for a in (1, ctx.generator):
            assert kloosterman_gl(ctx, t, a, "recursive") == kloosterman_gl(ctx, t, a, "explicit")


def test_kloosterman_gl_bruteforce_gf8():
    ctx = field_new(3)
    for a in ctx.nonzero():
        assert kloosterman_gl(ctx, 2, a, "bruteforce") == kloosterman_gl(ctx, 2, a)


def test_kloosterman_gl_scale():
    ctx = field_new(3)
    for a in ctx.nonzero():
        assert kloosterman_gl(ctx, 1, 1, scale=a) == kloosterman(ctx, a)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_artin_schreier_identities(r):
    ctx = field_new(r)
    for beta in ctx.nonzero():
        k = kloosterman(ctx, beta)
        assert artin_schreier_sum(ctx, beta) == k - 1
        assert irreducible_quadratic_sum(ctx, beta) == -k - 1


def test_irreducible_quadratic_rejects_split_constant():
    ctx = field_new(3)
    with pytest.raises(DomainError):
        irreducible_quadratic_sum(ctx, 1, c=0)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_twisted_sum(m):
    ctx = field_new(4)
    for beta in ctx.elements():
        assert twisted_sum(ctx, m, beta) == twisted_sum_rhs(ctx, m, beta)


def test_salie_counts_small():
    gf4 = field_new(2)
    assert salie_counts(gf4, 1).M_h == 1
    assert salie_counts(gf4, 1).A_h == 0
    assert salie_counts(gf4, 2).A_h == 3
    assert salie_counts(field_new(3), 1).M_h == 1
