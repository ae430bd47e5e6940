"""Двоичные коды C(G_i(q)) = {u ∈ F_2^N : Σ u_j Tr g_j = 0} и их весовые спектры.

G_1 = SO⁺(2,q), G_2 = O⁺(2,q), G_3 = SO⁺(4,q). Двойственный код состоит из
слов c(a) = (tr(a·Tr g_1), …, tr(a·Tr g_N)).

Три независимых способа получить спектр: динамика по частичным суммам
в F_q, преобразование Мак-Вильямс от весов двойственных слов и перебор
«встреча посередине». Все счётчики точные.
"""
import logging
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import ConsistencyError, PreconditionError, ResourceError
from .expsum import kloosterman_table
from .gf2r import FieldCtx
from .intpoly import binom, poly_mul
from .ogroup import SO4_MAX_Q, WHICH_TO_GROUP, build_census, trace_histogram_formula

logger = logging.getLogger(__name__)

DP_COMPLETE_BUDGET = 1 << 16
DP_MAX_Q = 256
MACWILLIAMS_MAX_N = 10 ** 4
BRUTE_MAX_N = 40
ITER_MAX_N = 24
VECTOR_DP_MAX_LEN = 64


@dataclass(frozen=True)
class CodeSpec:
    ctx: FieldCtx
    which: int
    length: int
    histogram: dict[int, int] = field(repr=False)
    traces: np.ndarray | None = field(default=None, repr=False)


@dataclass(frozen=True)
class WeightDistribution:
    length: int
    freqs: dict[int, int]
    max_weight: int | None = None
    method: str = "dp"

    @property
    def complete(self) -> bool:
        return self.max_weight is None or self.max_weight >= self.length

    def __getitem__(self, j: int) -> int:
        return self.freqs.get(j, 0)

    def total(self) -> int:
        return sum(self.freqs.values())

    def is_symmetric(self) -> bool:
        if not self.complete:
            raise PreconditionError("симметрия проверяется только на полном спектре")
        return all(self[j] == self[self.length - j] for j in range(self.length + 1))

    def truncated(self, max_weight: int) -> "WeightDistribution":
        freqs = {j: c for j, c in self.freqs.items() if j <= max_weight}
        return WeightDistribution(self.length, freqs, max_weight, self.method)


def _check_which(which: int):
    if which not in (1, 2, 3):
        raise PreconditionError(f"which должно быть 1, 2 или 3, получено {which}")


def build_code_spec(ctx: FieldCtx, which: int, with_coordinates: bool | None = None,
                    threads: int = 1) -> CodeSpec:
    """Параметры кода C(G_which(q)).

    Для which=3 координаты (следы в каноническом порядке) строятся только
    по запросу и при q ≤ 16; гистограмма следов всегда берётся из формулы.
    """
    _check_which(which)
    histogram = trace_histogram_formula(ctx, which)
    length = sum(histogram.values())
    if with_coordinates is None:
        with_coordinates = which != 3
    traces = None
    if with_coordinates:
        if which == 3 and ctx.q > SO4_MAX_Q:
            raise ResourceError(f"координаты кода C(SO⁺(4,q)) строятся при q ≤ {SO4_MAX_Q}")
        census = build_census(ctx, WHICH_TO_GROUP[which], threads=threads)
        if census.histogram != histogram:
            raise ConsistencyError(f"гистограмма следов {census.group} расходится с формулой при q={ctx.q}")
        traces = census.traces
    return CodeSpec(ctx, which, length, histogram, traces)


def _require_coordinates(spec: CodeSpec):
    if spec.traces is None:
        raise PreconditionError("нужны координаты кода: постройте CodeSpec с with_coordinates=True")


def dual_codeword(spec: CodeSpec, a: int) -> np.ndarray:
    """c(a) как массив битов uint8 в каноническом порядке координат."""
    _require_coordinates(spec)
    ctx = spec.ctx
    return ctx.trace_table[ctx.mul_array(a, spec.traces)]


def dual_weight(spec: CodeSpec, a: int) -> int:
    """w(c(a)) по значению K(λ;a)."""
    ctx = spec.ctx
    if a == 0:
        return 0
    k = kloosterman_table(ctx).values[a]
    q = ctx.q
    if spec.which in (1, 2):
        twice = q - 1 - k
    else:
        twice = q * q * (q ** 4 - q ** 3 - 2 * q * q + q + 1 - k * k)
    if twice % 2:
        raise ConsistencyError(f"нечётное удвоенное значение веса при a={a}")
    return twice // 2


def dual_weight_from_histogram(spec: CodeSpec, a: int) -> int:
    """Σ_{β : tr(aβ)=1} n(β)."""
    ctx = spec.ctx
    return sum(n for beta, n in spec.histogram.items() if n and ctx.trace(ctx.mul(a, beta)))


def dual_weights(spec: CodeSpec) -> dict[int, int]:
    weights = {0: 0}
    for a in spec.ctx.nonzero():
        weights[a] = dual_weight(spec, a)
    return weights


def dual_kernel_check(spec: CodeSpec) -> dict:
    """Ядро отображения a ↦ c(a): ортогональное дополнение к опоре гистограммы."""
    basis: list[int] = []
    for beta, n in spec.histogram.items():
        if not n or not beta:
            continue
        v = beta
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    kernel_size = 1 << (spec.ctx.r - len(basis))
    return {"injective": kernel_size == 1, "kernel_size": kernel_size, "support_rank": len(basis)}


def coordinate_classes(ctx: FieldCtx, which: int) -> dict:
    """Группировка координат: кратность нулевого следа и классы β с одинаковым n(β)."""
    _check_which(which)
    histogram = trace_histogram_formula(ctx, which)
    if which in (1, 2):
        free = sum(1 for beta in ctx.nonzero() if histogram[beta] == 2)
        return {"nu0": histogram[0], "classes": {2: free}}
    table = kloosterman_table(ctx).values
    q = ctx.q
    classes: dict[int, dict] = {}
    for beta in ctx.nonzero():
        t = table[ctx.inv(beta)]
        entry = classes.setdefault(t, {"m_t": q * q * (q ** 3 - q * q - 2 * q + t), "count": 0})
        entry["count"] += 1
    return {"nu0": histogram[0], "classes": dict(sorted(classes.items()))}


# --- динамика по частичным суммам

def _binomial_parts(n: int, limit: int) -> tuple[list[int], list[int]]:
    even = [binom(n, v) if v % 2 == 0 else 0 for v in range(min(n, limit) + 1)]
    odd = [binom(n, v) if v % 2 == 1 else 0 for v in range(min(n, limit) + 1)]
    return even, odd


def _shift_mul(rows: np.ndarray, poly: list[int], length: int) -> np.ndarray:
    out = np.zeros_like(rows)
    for k, c in enumerate(poly):
        if c and k < length:
            out[:, k:] += rows[:, : length - k] * c
    return out


def weight_distribution_dp(spec: CodeSpec, max_weight: int | None = None) -> WeightDistribution:
    """Спектр веса ≤ max_weight динамикой по (частичная сумма в F_q, вес).

    Координаты со следом β выбираются по ν штук; в характеристике 2 их вклад
    в сумму равен β при нечётном ν и 0 при чётном.
    """
    ctx, q = spec.ctx, spec.ctx.q
    if q > DP_MAX_Q:
        raise ResourceError(f"динамика по частичным суммам ограничена q ≤ {DP_MAX_Q}")
    limit = spec.length if max_weight is None else min(max_weight, spec.length)
    if max_weight is None and spec.length * q > DP_COMPLETE_BUDGET:
        raise ResourceError(f"полный спектр динамикой: N·q = {spec.length * q} > {DP_COMPLETE_BUDGET}")
    length = limit + 1
    idx = np.arange(q)
    state = np.zeros((q, length), dtype=object)
    state[:, :] = 0
    state[0, 0] = 1
    for beta, n in spec.histogram.items():
        if not n:
            continue
        even, odd = _binomial_parts(n, limit)
        if length <= VECTOR_DP_MAX_LEN:
            moved = state[idx ^ beta] if beta else None
            if beta:
                state = _shift_mul(state, even, length) + _shift_mul(moved, odd, length)
            else:
                state = _shift_mul(state, [e + o for e, o in zip(even, odd)], length)
            continue
        new = np.zeros_like(state)
        new[:, :] = 0
        for s in range(q):
            row = list(state[s])
            if beta:
                a = poly_mul(row, even, limit)
                b = poly_mul(list(state[s ^ beta]), odd, limit)
                combined = [x + y for x, y in zip(a + [0] * (length - len(a)), b + [0] * (length - len(b)))]
            else:
                combined = poly_mul(row, [e + o for e, o in zip(even, odd)], limit)
            new[s, : len(combined)] = combined
        state = new
    freqs = {j: int(c) for j, c in enumerate(state[0]) if c}
    logger.debug(f"спектр C{spec.which} над GF({q}) динамикой до веса {limit}")
    return WeightDistribution(spec.length, freqs, max_weight, "dp")


# --- Мак-Вильямс

def krawtchouk_values(length: int, w: int, limit: int) -> list[int]:
    """K_j(w) для j = 0..limit по трёхчленному рекуррентному соотношению."""
    values = [1]
    if limit >= 1:
        values.append(length - 2 * w)
    for j in range(1, limit):
        num = (length - 2 * w) * values[j] - (length - j + 1) * values[j - 1]
        if num % (j + 1):
            raise ConsistencyError(f"неточное деление в многочлене Кравчука: N={length}, w={w}, j={j}")
        values.append(num // (j + 1))
    return values


def weight_distribution_macwilliams(spec: CodeSpec, max_weight: int | None = None) -> WeightDistribution:
    """C_j = (1/q) Σ_a K_j(w(c(a))) по всем a ∈ F_q."""
    if max_weight is None and spec.length > MACWILLIAMS_MAX_N:
        raise ResourceError(f"полный спектр преобразованием Мак-Вильямс при N ≤ {MACWILLIAMS_MAX_N}")
    limit = spec.length if max_weight is None else min(max_weight, spec.length)
    by_weight: dict[int, int] = {}
    for w in dual_weights(spec).values():
        by_weight[w] = by_weight.get(w, 0) + 1
    sums = [0] * (limit + 1)
    for w, mult in sorted(by_weight.items()):
        for j, k in enumerate(krawtchouk_values(spec.length, w, limit)):
            sums[j] += mult * k
    q = spec.ctx.q
    freqs = {}
    for j, s in enumerate(sums):
        if s % q:
            raise ConsistencyError(f"Σ_a K_{j} = {s} не делится на q={q}")
        if s:
            freqs[j] = s // q
    return WeightDistribution(spec.length, freqs, max_weight, "macwilliams")


# --- перебор

def _half_tables(traces: np.ndarray, q: int) -> tuple[np.ndarray, np.ndarray]:
    syn = np.zeros(1, dtype=np.int64)
    wt = np.zeros(1, dtype=np.int64)
    for t in traces:
        syn = np.concatenate([syn, syn ^ int(t)])
        wt = np.concatenate([wt, wt + 1])
    return syn, wt


def weight_distribution_bruteforce(spec: CodeSpec) -> WeightDistribution:
    """Перебор F_2^N «встречей посередине»: гистограммы (синдром, вес) двух половин."""
    _require_coordinates(spec)
    n, q = spec.length, spec.ctx.q
    if n > BRUTE_MAX_N:
        raise ResourceError(f"перебор кода длины {n} > {BRUTE_MAX_N}")
    half = n // 2
    left, right = spec.traces[:half], spec.traces[half:]
    tables = []
    for part in (left, right):
        syn, wt = _half_tables(part, q)
        width = len(part) + 1
        hist = np.bincount(syn * width + wt, minlength=q * width).reshape(q, width)
        tables.append(hist)
    hl, hr = tables
    total = np.zeros(n + 1, dtype=np.int64)
    for s in range(q):
        if hl[s].any() and hr[s].any():
            total += np.convolve(hl[s], hr[s])
    freqs = {j: int(c) for j, c in enumerate(total) if c}
    return WeightDistribution(n, freqs, None, "bruteforce")


def iter_codewords(spec: CodeSpec) -> Iterator[int]:
    """Все кодовые слова как битовые маски (бит j соответствует координате j)."""
    _require_coordinates(spec)
    n = spec.length
    if n > ITER_MAX_N:
        raise ResourceError(f"перечисление кодовых слов при N ≤ {ITER_MAX_N}")
    half = n // 2
    left_syn, _ = _half_tables(spec.traces[:half], spec.ctx.q)
    right_syn, _ = _half_tables(spec.traces[half:], spec.ctx.q)
    by_syn: dict[int, list[int]] = {}
    for mask, s in enumerate(right_syn.tolist()):
        by_syn.setdefault(s, []).append(mask)
    for lmask, s in enumerate(left_syn.tolist()):
        for rmask in by_syn.get(s, ()):
            yield lmask | (rmask << half)
