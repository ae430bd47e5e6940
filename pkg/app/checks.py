"""Набор проверок для `kloost.py verify`: каждое тождество сверяется с перебором или формулой.

Проверка возвращает (прошла ли, комментарий). ResourceError и
PreconditionError превращаются в SKIPPED, ConsistencyError в FAIL.
"""
import logging
import random
from dataclasses import dataclass
from typing import Callable

from .codes import (
    build_code_spec,
    dual_codeword,
    dual_kernel_check,
    dual_weight,
    dual_weights,
    iter_codewords,
    weight_distribution_bruteforce,
    weight_distribution_dp,
    weight_distribution_macwilliams,
)
from .errors import ConsistencyError, PreconditionError, ResourceError
from .expsum import (
    artin_schreier_sum,
    irreducible_quadratic_sum,
    kloosterman_gl,
    kloosterman_m_table,
    kloosterman_table,
    twisted_sum_rhs,
    twisted_sum,
    value_set_report,
)
from .gf2r import FieldCtx, trace_by_definition
from .moments import (
    binomial_moment_check,
    closed_forms_check,
    mk_recursive,
    moments_bruteforce,
    pless_check,
    salie_identity_check,
)
from .ogroup import (
    build_census,
    dickson,
    dickson_rank_parity,
    gauss_sum_enumerated,
    gauss_sum_formula,
    is_member,
    multiply,
    membership_via_form,
    trace_histogram_formula,
)
from .tables_data import POWER_MOMENTS, WEIGHT_DISTRIBUTIONS

logger = logging.getLogger(__name__)

PASS, FAIL, SKIP, ERROR = "PASS", "FAIL", "SKIPPED", "ERROR"

FIELD_ORACLE_MAX_Q = 1 << 12
IDENTITY_MAX_Q = 1024
SALIE_CHECK_MAX_Q = 64
SO4_DEFAULT_MAX_Q = 8
PLESS_H = 10
SALIE_H = 5
GL_T = 5
DOUBLED_MOMENT_H = 8


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    note: str = ""


class _Context:
    """Общие вычисления, переиспользуемые разными проверками."""

    def __init__(self, ctx: FieldCtx, full: bool, threads: int):
        self.ctx = ctx
        self.full = full
        self.threads = threads
        self._cache: dict = {}

    def memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def table(self) -> dict[int, int]:
        return self.memo("table", lambda: kloosterman_table(self.ctx, threads=self.threads).values)

    def census(self, group: str):
        return self.memo(("census", group),
                         lambda: build_census(self.ctx, group, store_elements=True, threads=self.threads))

    def spec(self, which: int):
        def make():
            with_coords = which != 3 or self.ctx.q <= SO4_DEFAULT_MAX_Q
            return build_code_spec(self.ctx, which, with_coordinates=with_coords, threads=self.threads)
        return self.memo(("spec", which), make)

    def brute_moments(self, m: int, h: int):
        return self.memo(("mk", m, h), lambda: moments_bruteforce(self.ctx, m, h))


def _require(cond: bool, what: str):
    if not cond:
        raise PreconditionError(what)


def check_field_trace(c: _Context):
    ctx = c.ctx
    if ctx.q > FIELD_ORACLE_MAX_Q:
        raise ResourceError("след по определению проверяется при q ≤ 4096")
    bad = [x for x in ctx.elements() if ctx.trace(x) != trace_by_definition(ctx, x)]
    return not bad, f"{len(bad)} расхождений"


def check_value_set(c: _Context):
    report = value_set_report(kloosterman_table(c.ctx))
    ok = report["range_matches"] and report["weil_bound_holds"] and report["mod4_holds"]
    return ok, f"значения {report['attained']}"


def check_class_numbers(c: _Context):
    _require(c.ctx.r >= 2, "кратности сверяются при r ≥ 2")
    report = value_set_report(kloosterman_table(c.ctx))
    ok = all(row["matches_t2_minus_4q"] for row in report["rows"])
    printed = sum(1 for row in report["rows"] if row["matches_t2_minus_q"])
    return ok, f"H(t²−4q) совпадает; H(t²−q) совпало в {printed} из {len(report['rows'])} случаев"


def check_carlitz(c: _Context):
    q = c.ctx.q
    k2 = kloosterman_m_table(c.ctx, 2)
    bad = [a for a, v in c.table.items() if k2[a] != v * v - q]
    return not bad, f"{len(bad)} расхождений"


def check_frobenius(c: _Context):
    ctx = c.ctx
    bad = [a for a, v in c.table.items() if c.table[ctx.mul(a, a)] != v]
    return not bad, f"{len(bad)} расхождений"


def check_twisted_sum(c: _Context):
    ctx = c.ctx
    if ctx.q > IDENTITY_MAX_Q:
        raise ResourceError(f"проверка при q ≤ {IDENTITY_MAX_Q}")
    bad = []
    for m in (1, 2, 3):
        for beta in ctx.elements():
            if twisted_sum(ctx, m, beta) != twisted_sum_rhs(ctx, m, beta):
                bad.append((m, beta))
    return not bad, f"{len(bad)} расхождений"


def check_artin_schreier(c: _Context):
    ctx = c.ctx
    if ctx.q > IDENTITY_MAX_Q:
        raise ResourceError(f"проверка при q ≤ {IDENTITY_MAX_Q}")
    bad_a = [b for b in ctx.nonzero() if artin_schreier_sum(ctx, b) != c.table[b] - 1]
    bad_b = [b for b in ctx.nonzero() if irreducible_quadratic_sum(ctx, b) != -c.table[b] - 1]
    return not bad_a and not bad_b, f"{len(bad_a)} + {len(bad_b)} расхождений"


def check_salie(c: _Context):
    if c.ctx.q > SALIE_CHECK_MAX_Q:
        raise ResourceError(f"счётчики Салье проверяются при q ≤ {SALIE_CHECK_MAX_Q}")
    rows = salie_identity_check(c.ctx, SALIE_H, c.brute_moments(1, SALIE_H))
    bad = [row["h"] for row in rows if not row["holds"]]
    return not bad, f"h с расхождением: {bad}"


def check_gl_methods(c: _Context):
    ctx = c.ctx
    bad = []
    for a in list(ctx.nonzero())[:8]:
        for t in range(1, GL_T + 1):
            if kloosterman_gl(ctx, t, a, "recursive") != kloosterman_gl(ctx, t, a, "explicit"):
                bad.append((a, t))
        if ctx.q ** 4 <= 1 << 20:
            if kloosterman_gl(ctx, 2, a, "bruteforce") != kloosterman_gl(ctx, 2, a, "recursive"):
                bad.append((a, "brute"))
    return not bad, f"{len(bad)} расхождений"


def _census_check(c: _Context, group: str, which: int):
    census = c.census(group)
    formula = trace_histogram_formula(c.ctx, which)
    return census.histogram == formula, f"|G| = {census.order}"


def check_so2(c: _Context):
    return _census_check(c, "so2", 1)


def check_o2(c: _Context):
    return _census_check(c, "o2", 2)


def check_so4(c: _Context):
    if c.ctx.q > SO4_DEFAULT_MAX_Q and not c.full:
        raise ResourceError("перепись SO⁺(4,q) при q > 8 включается флагом --full")
    return _census_check(c, "so4", 3)


def check_gauss_sums(c: _Context):
    ctx = c.ctx
    if ctx.q > IDENTITY_MAX_Q:
        raise ResourceError(f"проверка при q ≤ {IDENTITY_MAX_Q}")
    bad = []
    pairs = [("so2", 1, "SO"), ("o2", 1, "O")]
    if ctx.q <= SO4_DEFAULT_MAX_Q or c.full:
        pairs.append(("so4", 2, "SO"))
    for group, n, variant in pairs:
        census = c.census(group)
        for a in ctx.nonzero():
            k = c.table[a]
            closed = {"so2": k, "o2": k + ctx.q - 1, "so4": ctx.q ** 2 * (k * k + ctx.q ** 3 - ctx.q)}[group]
            enumerated = gauss_sum_enumerated(census, a)
            if enumerated != closed or gauss_sum_formula(ctx, n, variant, a) != closed:
                bad.append((group, a))
    return not bad, f"{len(bad)} расхождений"


def check_dickson(c: _Context):
    ctx = c.ctx
    census = c.census("o2")
    if census.order > 512:
        rng = random.Random(ctx.q)
        idx = [rng.randrange(census.order) for _ in range(256)]
    else:
        idx = list(range(census.order))
    elems = [census.element(k) for k in idx]
    bad = 0
    for x in elems:
        if not membership_via_form(ctx, x) or dickson(ctx, x) != dickson_rank_parity(ctx, x):
            bad += 1
    for x in elems[:32]:
        for y in elems[:32]:
            xy = multiply(ctx, x, y)
            if not is_member(ctx, xy) or dickson(ctx, xy) != dickson(ctx, x) ^ dickson(ctx, y):
                bad += 1
    balanced = census.dickson_counts[0] == census.dickson_counts[1]
    return bad == 0 and balanced, f"{bad} нарушений"


def check_code_methods(c: _Context):
    ctx = c.ctx
    notes = []
    ok = True
    for which in (1, 2):
        spec = c.spec(which)
        dp = weight_distribution_dp(spec)
        mw = weight_distribution_macwilliams(spec)
        ok &= dp.freqs == mw.freqs and dp.is_symmetric()
        if spec.length <= 40:
            ok &= weight_distribution_bruteforce(spec).freqs == dp.freqs
        kernel = dual_kernel_check(spec)
        expected_injective = ctx.r >= 3
        ok &= kernel["injective"] == expected_injective
        notes.append(f"C{which}: N={spec.length}")
    if ctx.q <= 4:
        spec = c.spec(3)
        ok &= weight_distribution_dp(spec).freqs == weight_distribution_macwilliams(spec).freqs
        ok &= dual_kernel_check(spec)["injective"]
    return ok, ", ".join(notes)


def check_dual_weights(c: _Context):
    bad = []
    for which in (1, 2, 3):
        try:
            spec = c.spec(which)
        except ResourceError:
            continue
        if spec.traces is None:
            continue
        for a in c.ctx.nonzero():
            if int(dual_codeword(spec, a).sum()) != dual_weight(spec, a):
                bad.append((which, a))
    return not bad, f"{len(bad)} расхождений"


def check_delsarte(c: _Context):
    spec = c.spec(1)
    if spec.length > 24:
        raise ResourceError("перечисление кодовых слов при N ≤ 24")
    masks = []
    for a in c.ctx.nonzero():
        bits = dual_codeword(spec, a)
        masks.append(sum(1 << j for j, b in enumerate(bits) if b))
    bad = 0
    for word in iter_codewords(spec):
        bad += sum(1 for m in masks if bin(word & m).count("1") % 2)
    return bad == 0, f"{bad} нечётных пересечений"


def check_pless(c: _Context):
    bad = []
    for which in (1, 2, 3):
        spec = c.spec(which)
        dist = weight_distribution_macwilliams(spec, max_weight=PLESS_H)
        weights = dual_weights(spec)
        for h in range(PLESS_H + 1):
            if not pless_check(weights, dist, c.ctx.r, h)["holds"]:
                bad.append((which, h))
    return not bad, f"{len(bad)} расхождений"


def check_recursions_ab(c: _Context):
    _require(c.ctx.r >= 3, "варианты a и b требуют r ≥ 3")
    brute = c.brute_moments(1, 29)
    a = mk_recursive(c.ctx, "a", 29)
    b = mk_recursive(c.ctx, "b", 29)
    return a.values == brute.values == b.values, "h = 0..29"


def check_recursions_c(c: _Context):
    _require(c.ctx.r >= 2, "вариант c требует r ≥ 2")
    brute1 = c.brute_moments(1, 2 * DOUBLED_MOMENT_H)
    brute2 = c.brute_moments(2, DOUBLED_MOMENT_H)
    c2 = mk_recursive(c.ctx, "c2", DOUBLED_MOMENT_H)
    ck = mk_recursive(c.ctx, "cK", DOUBLED_MOMENT_H)
    even = tuple(brute1[2 * h] for h in range(DOUBLED_MOMENT_H + 1))
    binom_ok = binomial_moment_check(ck, c2, c.ctx.q)["holds"]
    return c2.values == brute2.values and ck.values == even and binom_ok, f"h = 0..{DOUBLED_MOMENT_H}"


def check_closed_forms(c: _Context):
    report = closed_forms_check(c.ctx)
    return report["holds"], f"MK¹={report['MK1']}, MK²={report['MK2']}"


def check_golden(c: _Context):
    r = c.ctx.r
    _require(r in WEIGHT_DISTRIBUTIONS, "эталонные таблицы есть для r = 4 и r = 5")
    spec = c.spec(1)
    dist = weight_distribution_dp(spec)
    weights = [dist[j] for j in range(spec.length + 1)]
    moments = moments_bruteforce(c.ctx, 1, 29).values
    return weights == WEIGHT_DISTRIBUTIONS[r] and list(moments) == POWER_MOMENTS[r], "спектр и моменты"


CHECKS: list[tuple[str, Callable]] = [
    ("field.trace", check_field_trace),
    ("ksum.value_set", check_value_set),
    ("ksum.class_numbers", check_class_numbers),
    ("ksum.carlitz", check_carlitz),
    ("ksum.frobenius", check_frobenius),
    ("ksum.twisted_sum", check_twisted_sum),
    ("ksum.artin_schreier", check_artin_schreier),
    ("ksum.salie", check_salie),
    ("ksum.gl_methods", check_gl_methods),
    ("group.so2", check_so2),
    ("group.o2", check_o2),
    ("group.so4", check_so4),
    ("group.gauss_sums", check_gauss_sums),
    ("group.dickson", check_dickson),
    ("code.methods", check_code_methods),
    ("code.dual_weights", check_dual_weights),
    ("code.delsarte", check_delsarte),
    ("code.pless", check_pless),
    ("moments.recursions_ab", check_recursions_ab),
    ("moments.recursions_c", check_recursions_c),
    ("moments.closed_forms", check_closed_forms),
    ("tables.golden", check_golden),
]


def run_checks(ctx: FieldCtx, full: bool = False, threads: int = 1, only: list[str] | None = None) -> list[CheckResult]:
    shared = _Context(ctx, full, threads)
    results = []
    for name, fn in CHECKS:
        if only and not any(name.startswith(prefix) for prefix in only):
            continue
        try:
            ok, note = fn(shared)
            status = PASS if ok else FAIL
        except (ResourceError, PreconditionError) as e:
            status, note = SKIP, str(e)
        except ConsistencyError as e:
            status, note = FAIL, str(e)
        except Exception as e:
            logger.error(f"Ошибка в проверке {name}: {e}", exc_info=True)
            status, note = ERROR, str(e)
        if status in (FAIL, ERROR):
            logger.error(f"{name}: {status} ({note})")
        else:
            logger.info(f"{name}: {status}")
        results.append(CheckResult(name, status, note))
    return results
