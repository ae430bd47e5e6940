"""Степенные моменты сумм Клоостермана: перебор, тождество Плесс и рекурсии через спектры кодов."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .codes import (
    CodeSpec,
    WeightDistribution,
    build_code_spec,
    weight_distribution_dp,
    weight_distribution_macwilliams,
)
from .errors import ConsistencyError, PreconditionError
from .expsum import kloosterman_m_table, kloosterman_table, salie_counts
from .gf2r import FieldCtx
from .intpoly import binom

logger = logging.getLogger(__name__)

MAX_H = 64
DEFAULT_H_MAX = 29

VARIANTS = ("a", "b", "c2", "cK")
_VARIANT_CODE = {"a": 1, "b": 2, "c2": 3, "cK": 3}


@dataclass(frozen=True)
class MomentSeries:
    """values[l] = MK_m^{stride·l}."""

    ctx: FieldCtx
    m: int
    values: tuple[int, ...]
    stride: int = 1
    method: str = "bruteforce"

    def __getitem__(self, h: int) -> int:
        return self.values[h]

    def __len__(self) -> int:
        return len(self.values)

    def exponents(self) -> list[int]:
        return [self.stride * l for l in range(len(self.values))]


@lru_cache(maxsize=None)
def stirling2(h: int, t: int) -> int:
    if h < 0 or t < 0:
        raise PreconditionError("числа Стирлинга определены для неотрицательных аргументов")
    if h == t:
        return 1
    if t == 0 or t > h:
        return 0
    return t * stirling2(h - 1, t) + stirling2(h - 1, t - 1)


def stirling2_explicit(h: int, t: int) -> int:
    """S(h,t) = (1/t!) Σ_j (−1)^{t−j} C(t,j) j^h."""
    total = sum((-1) ** (t - j) * binom(t, j) * j ** h for j in range(t + 1))
    if total % factorial(t):
        raise ConsistencyError(f"S({h},{t}): сумма {total} не делится на {t}!")
    return total // factorial(t)


@dataclass(frozen=True)
class PlessInputs:
    length: int
    dual_dimension: int
    h: int
    stirling: tuple[int, ...] = field(repr=False)

    @classmethod
    def build(cls, length: int, dual_dimension: int, h: int) -> "PlessInputs":
        return cls(length, dual_dimension, h, tuple(stirling2(h, t) for t in range(h + 1)))

    def inner(self, j: int, power_of_two: int) -> int:
        """Σ_{t=j}^h t!·S(h,t)·2^{power_of_two−t}·C(N−j, N−t)."""
        n = self.length
        return sum(
            factorial(t) * self.stirling[t] * 2 ** (power_of_two - t) * binom(n - j, n - t)
            for t in range(j, self.h + 1)
        )


def _require_truncation(dist: WeightDistribution, h: int):
    need = min(dist.length, h)
    if dist.max_weight is not None and dist.max_weight < need:
        raise PreconditionError(f"спектр усечён до веса {dist.max_weight}, а нужно не меньше {need}")


def moments_bruteforce(ctx: FieldCtx, m: int, h_max: int) -> MomentSeries:
    """MK_m^h = Σ_a K_m(λ;a)^h для h = 0..h_max по таблице значений."""
    if m not in (1, 2):
        raise PreconditionError(f"m должно быть 1 или 2, получено {m}")
    if not 0 <= h_max <= MAX_H:
        raise PreconditionError(f"h_max должно быть в диапазоне 0..{MAX_H}")
    if m == 1:
        summary = kloosterman_table(ctx).summary
    else:
        counts: dict[int, int] = {}
        for v in kloosterman_m_table(ctx, 2).values():
            counts[v] = counts.get(v, 0) + 1
        summary = tuple(sorted(counts.items()))
    values = tuple(sum(mult * v ** h for v, mult in summary) for h in range(h_max + 1))
    return MomentSeries(ctx, m, values, 1, "bruteforce")


def pless_check(dual_weights: dict[int, int], dist: WeightDistribution, r: int, h: int) -> dict:
    """Σ_a w(c(a))^h против правой части тождества Плесс для двойственного [N, r]-кода.

    Обе части умножены на 2^h, чтобы остаться в целых.
    """
    if h < 0:
        raise PreconditionError("h должно быть неотрицательным")
    _require_truncation(dist, h)
    lhs = sum(w ** h for w in dual_weights.values())
    inputs = PlessInputs.build(dist.length, r, h)
    scaled = sum(
        (-1) ** j * dist[j] * inputs.inner(j, r + h)
        for j in range(min(dist.length, h) + 1)
    )
    rhs = Fraction(scaled, 2 ** h)
    return {"holds": lhs == rhs, "lhs": lhs, "rhs": rhs, "h": h}


def _default_distribution(ctx: FieldCtx, which: int, h_max: int) -> WeightDistribution:
    spec: CodeSpec = build_code_spec(ctx, which, with_coordinates=False)
    if which == 3:
        return weight_distribution_macwilliams(spec, max_weight=h_max)
    return weight_distribution_dp(spec, max_weight=h_max)


def mk_recursive(ctx: FieldCtx, variant: str, h_max: int = DEFAULT_H_MAX,
                 dist: WeightDistribution | None = None) -> MomentSeries:
    """Ряд моментов по рекурсии через спектр кода.

    a: MK^h через C(SO⁺(2,q)); b: MK^h через C(O⁺(2,q));
    c2: MK_2^h через C(SO⁺(4,q)); cK: MK^{2h} через C(SO⁺(4,q)).
    """
    if variant not in VARIANTS:
        raise PreconditionError(f"вариант {variant!r}: допустимы {', '.join(VARIANTS)}")
    if variant in ("a", "b") and ctx.r < 3:
        raise PreconditionError(f"вариант {variant} требует r ≥ 3, получено r={ctx.r}")
    if variant in ("c2", "cK") and ctx.r < 2:
        raise PreconditionError(f"вариант {variant} требует r ≥ 2, получено r={ctx.r}")
    if not 0 <= h_max <= MAX_H:
        raise PreconditionError(f"h_max должно быть в диапазоне 0..{MAX_H}")
    q = ctx.q
    which = _VARIANT_CODE[variant]
    if dist is None:
        dist = _default_distribution(ctx, which, h_max)
    expected_length = {1: q - 1, 2: 2 * (q - 1), 3: q * q * (q * q - 1) ** 2}[which]
    if dist.length != expected_length:
        raise PreconditionError(f"спектр длины {dist.length}, а код C{which} имеет длину {expected_length}")
    _require_truncation(dist, h_max)
    shift = {
        "a": q - 1,
        "b": q - 1,
        "c2": q ** 4 - q ** 3 - 2 * q * q + 1,
        "cK": q ** 4 - q ** 3 - 2 * q * q + q + 1,
    }[variant]
    n = dist.length
    values = [q - 1]
    for h in range(1, h_max + 1):
        head = sum((-1) ** (h + l + 1) * binom(h, l) * shift ** (h - l) * values[l] for l in range(h))
        inputs = PlessInputs.build(n, ctx.r, h)
        bracket = sum(
            (-1) ** (h + j) * dist[j] * inputs.inner(j, h)
            for j in range(min(n, h) + 1)
        )
        if which == 3:
            scaled = q * bracket
            divisor = q ** (2 * h)
            if scaled % divisor:
                raise ConsistencyError(f"вариант {variant}, h={h}: q^(1−2h)-член не целый")
            tail = scaled // divisor
        else:
            tail = q * bracket
        values.append(head + tail)
    logger.debug(f"рекурсия {variant} над GF({q}) до h={h_max}")
    return MomentSeries(ctx, 2 if variant == "c2" else 1, tuple(values), 2 if variant == "cK" else 1,
                        f"recursive-{variant}")


def salie_identity_check(ctx: FieldCtx, h_max: int, brute: MomentSeries | None = None) -> list[dict]:
    """MK^h = q²M_{h−1} − (q−1)^{h−1} + 2(−1)^{h−1} и та же форма через A_h."""
    q = ctx.q
    if brute is None:
        brute = moments_bruteforce(ctx, 1, h_max)
    rows = []
    m_prev = 0
    for h in range(1, h_max + 1):
        counts = salie_counts(ctx, h)
        tail = -(q - 1) ** (h - 1) + 2 * (-1) ** (h - 1)
        via_m = q * q * m_prev + tail
        num = q * q * counts.A_h
        via_a = num // (q - 1) + tail if num % (q - 1) == 0 else None
        rows.append({
            "h": h,
            "M_prev": m_prev,
            "A_h": counts.A_h,
            "MK": brute[h],
            "via_M": via_m,
            "via_A": via_a,
            "holds": via_m == brute[h] and via_a == brute[h],
        })
        m_prev = counts.M_h
    return rows


def binomial_moment_check(series_k: MomentSeries, series_k2: MomentSeries, q: int) -> dict:
    """MK^{2h} = Σ_l C(h,l) q^{h−l} MK_2^l, так как K² = K_2 + q."""
    if series_k.stride == 2:
        even = list(series_k.values)
    else:
        even = [series_k[2 * h] for h in range((len(series_k) + 1) // 2)]
    count = min(len(even), len(series_k2))
    mismatches = []
    for h in range(count):
        expected = sum(binom(h, l) * q ** (h - l) * series_k2[l] for l in range(h + 1))
        if expected != even[h]:
            mismatches.append(h)
    return {"holds": not mismatches, "checked": count, "mismatches": mismatches}


def closed_forms_check(ctx: FieldCtx) -> dict:
    """В характеристике 2 проверяются только MK¹ = 1 и MK² = q² − q − 1."""
    series = moments_bruteforce(ctx, 1, 2)
    q = ctx.q
    return {
        "MK1": series[1],
        "MK2": series[2],
        "holds": series[1] == 1 and series[2] == q * q - q - 1,
    }
