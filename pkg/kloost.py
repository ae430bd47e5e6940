#!/usr/bin/env python3
"""
kloost: суммы Клоостермана над GF(2^r), ортогональные группы и коды на их основе.
Каталог кэша и параметры по умолчанию берутся из .env (KLOOST_CACHE_DIR, KLOOST_THREADS, KLOOST_LOG_LEVEL).
"""
import argparse
import logging
import os
import signal
import sys
from dataclasses import dataclass, field

from dotenv import load_dotenv

from app.errors import KloostError, PreconditionError, ConsistencyError

load_dotenv()

logging.basicConfig(
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    level=os.environ.get("KLOOST_LOG_LEVEL", "INFO").upper(),
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)

DEFAULT_THREADS = int(os.environ.get("KLOOST_THREADS") or os.cpu_count() or 1)
SUBCOMMANDS = ("field", "ksum", "group", "code", "moments", "tables", "verify", "cache")

EXIT_STATUS = {0: "ok", 1: "error", 2: "precondition", 3: "resource", 4: "consistency"}


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    r: int | None = None
    modulus: int | None = None
    which: str | None = None
    variant: str | None = None
    h_max: int = 29
    max_weight: int | None = None
    fmt: str = "json"
    output: str | None = None
    threads: int = 1
    method: str | None = None
    extra: dict = field(default_factory=dict)

    def validate(self):
        from app.report import FORMATS

        if self.subcommand not in SUBCOMMANDS:
            raise PreconditionError(f"неизвестная подкоманда {self.subcommand!r}")
        if self.fmt not in FORMATS:
            raise PreconditionError(f"формат {self.fmt!r}: допустимы {', '.join(FORMATS)}")
        if self.threads < 1:
            raise PreconditionError("--threads должно быть положительным")
        needs_r = self.subcommand in ("field", "ksum", "group", "code", "moments", "verify")
        if needs_r and self.r is None:
            raise PreconditionError(f"подкоманда {self.subcommand} требует --r")
        if self.modulus is not None and self.r is None:
            raise PreconditionError("--modulus задаётся вместе с --r")
        if self.h_max < 0:
            raise PreconditionError("--hmax должно быть неотрицательным")
        if self.max_weight is not None and self.max_weight < 0:
            raise PreconditionError("--max-weight должно быть неотрицательным")
        if self.subcommand == "code" and self.which not in ("1", "2", "3"):
            raise PreconditionError("code требует --which 1|2|3")
        if self.subcommand == "group" and self.which not in ("so2", "o2", "so4", "o4"):
            raise PreconditionError("group требует --which so2|o2|so4|o4")
        if self.subcommand == "moments":
            from app.moments import VARIANTS

            if self.variant not in VARIANTS + ("brute",):
                raise PreconditionError(f"moments требует --variant {'|'.join(VARIANTS)}|brute")
        return self


def _ctx(config: RunConfig):
    from app.gf2r import field_new

    return field_new(config.r, config.modulus)


def _hex(value: str) -> int:
    return int(value, 16)


# --- подкоманды

def cmd_field(config: RunConfig) -> dict:
    from app.gf2r import arith, irreducible_polys, poly_to_str, trace_zero_count
    from app.report import envelope

    ctx = _ctx(config)
    results = {
        "generator": f"{ctx.generator:#x}",
        "trace_zero_count": trace_zero_count(ctx),
        "irreducible_moduli": len(irreducible_polys(ctx.r)) if ctx.r <= 12 else None,
    }
    op = config.extra.get("op")
    if op:
        if config.extra.get("x") is None:
            raise PreconditionError(f"операция {op} требует --x")
        operands = [x for x in (config.extra.get("x"), config.extra.get("y")) if x is not None]
        if len(operands) != (1 if op == "inv" else 2):
            raise PreconditionError(f"операция {op}: неверное число операндов")
        results["op"] = op
        results["value"] = f"{arith(ctx, op, *operands):#x}"
    if config.extra.get("list_moduli"):
        results["moduli"] = [poly_to_str(p) for p in irreducible_polys(ctx.r)]
    return envelope(ctx, {"op": op}, results, "tables")


def cmd_ksum(config: RunConfig) -> dict:
    from app.expsum import (
        KloostermanTable,
        kloosterman,
        kloosterman_gl,
        kloosterman_m,
        kloosterman_table,
        summarize_values,
        value_set_report,
    )
    from app.report import envelope
    from app.store import cached_kloosterman_table

    ctx = _ctx(config)
    m = config.extra.get("m") or 1
    gl = config.extra.get("gl")
    a = config.extra.get("a")
    if config.extra.get("table"):
        if m != 1:
            from app.expsum import kloosterman_m_table

            values = kloosterman_m_table(ctx, m)
            rows = [{"a": f"{x:#x}", "value": v} for x, v in sorted(values.items())]
            return envelope(ctx, {"m": m}, {"rows": rows}, "convolution")
        method = config.method or "auto"
        if method == "auto" and not config.extra.get("no_cache"):
            values = cached_kloosterman_table(ctx, threads=config.threads)
            table = KloostermanTable(ctx, values, summarize_values(values), "cache")
        else:
            table = kloosterman_table(ctx, method=method, threads=config.threads)
        report = value_set_report(table)
        results = {
            "rows": [{"a": f"{x:#x}", "value": v} for x, v in sorted(table.values.items())],
            "summary": report["rows"],
            "value_set": {k: v for k, v in report.items() if k != "rows"},
        }
        return envelope(ctx, {"table": True}, results, table.method)
    if a is None:
        raise PreconditionError("ksum требует --a HEX или --table")
    if gl:
        value = kloosterman_gl(ctx, gl, a, method=config.method or "recursive")
        return envelope(ctx, {"a": f"{a:#x}", "t": gl}, {"value": value}, config.method or "recursive")
    if m == 1:
        return envelope(ctx, {"a": f"{a:#x}"}, {"value": kloosterman(ctx, a)}, "direct")
    method = config.method or "convolution"
    value = kloosterman_m(ctx, m, a, method=method)
    return envelope(ctx, {"a": f"{a:#x}", "m": m}, {"value": value}, method)


def cmd_group(config: RunConfig) -> dict:
    from app.census_io import census_path, export_hex, read_census, write_census
    from app.db import CACHE_DIR
    from app.ogroup import build_census, gauss_sum_enumerated
    from app.report import envelope

    ctx = _ctx(config)
    group = config.which
    export = config.extra.get("export")
    path = census_path(CACHE_DIR, ctx, group)
    if os.path.exists(path) and not config.extra.get("no_cache"):
        census = read_census(path, ctx, group)
    else:
        census = build_census(ctx, group, store_elements=bool(export) or group == "so4", threads=config.threads)
        if group == "so4" and census.elements is not None:
            write_census(path, census)
    results = {"order": census.order, "dickson_counts": census.dickson_counts}
    if config.extra.get("histogram"):
        results["rows"] = [{"beta": f"{b:#x}", "count": c} for b, c in census.histogram.items()]
    gauss = config.extra.get("gauss")
    if gauss is not None:
        results["gauss_sum"] = gauss_sum_enumerated(census, gauss)
    if export:
        with open(export, "w") as fh:
            fh.write("\n".join(export_hex(census)) + "\n")
        results["exported"] = export
    return envelope(ctx, {"group": group}, results, census.method)


def cmd_code(config: RunConfig) -> dict:
    from app.codes import (
        build_code_spec,
        dual_kernel_check,
        coordinate_classes,
        weight_distribution_bruteforce,
        weight_distribution_dp,
        weight_distribution_macwilliams,
    )
    from app.report import envelope

    ctx = _ctx(config)
    which = int(config.which)
    method = config.method or "dp"
    needs_coords = method == "brute"
    spec = build_code_spec(ctx, which, with_coordinates=needs_coords or None, threads=config.threads)
    if method == "dp":
        dist = weight_distribution_dp(spec, config.max_weight)
    elif method == "macwilliams":
        dist = weight_distribution_macwilliams(spec, config.max_weight)
    elif method == "brute":
        dist = weight_distribution_bruteforce(spec)
        if config.max_weight is not None:
            dist = dist.truncated(config.max_weight)
    else:
        raise PreconditionError(f"метод {method!r}: допустимы dp|macwilliams|brute")
    results = {
        "length": spec.length,
        "rows": [{"w": j, "frequency": c} for j, c in sorted(dist.freqs.items())],
        "total": dist.total(),
        "dual_kernel": dual_kernel_check(spec),
    }
    if config.extra.get("explain"):
        results["grouping"] = coordinate_classes(ctx, which)
    params = {"which": which, "max_weight": config.max_weight}
    return envelope(ctx, params, results, method)


def cmd_moments(config: RunConfig) -> dict:
    from app.moments import mk_recursive, moments_bruteforce
    from app.report import envelope
    from app.store import cached_moments

    ctx = _ctx(config)
    if config.variant == "brute":
        m = config.extra.get("m") or 1
        if config.extra.get("no_cache"):
            series = moments_bruteforce(ctx, m, config.h_max)
        else:
            series = cached_moments(ctx, m, config.h_max)
    else:
        series = mk_recursive(ctx, config.variant, config.h_max)
    rows = [{"i": e, "value": v} for e, v in zip(series.exponents(), series.values)]
    params = {"variant": config.variant, "hmax": config.h_max, "m": series.m, "stride": series.stride}
    return envelope(ctx, params, {"rows": rows}, series.method)


def _render_golden_table(name: str, values: list[int]) -> str:
    from app.report import columns_layout, markdown_table
    from app.tables_data import TABLES, TITLES

    kind, r = TABLES[name]
    pairs = list(enumerate(values))
    if kind == "weights":
        header, rows = columns_layout(pairs, 4, ("w", "frequency"))
    else:
        header, rows = columns_layout(pairs, 3, ("i", "MK^i"))
    return markdown_table(header, rows, TITLES[kind].format(r=r))


def cmd_tables(config: RunConfig) -> dict:
    from app.codes import build_code_spec, weight_distribution_dp, weight_distribution_macwilliams
    from app.gf2r import field_new
    from app.moments import mk_recursive, moments_bruteforce
    from app.report import envelope
    from app.tables_data import POWER_MOMENTS, TABLE_ALIASES, TABLES, WEIGHT_DISTRIBUTIONS

    wanted = config.which or "all"
    names = list(TABLES) if wanted == "all" else [TABLE_ALIASES.get(wanted, wanted)]
    for name in names:
        if name not in TABLES:
            allowed = ", ".join([*TABLES, *TABLE_ALIASES])
            raise PreconditionError(f"таблица {wanted!r}: допустимы {allowed} или all")
    rows, rendered, mismatches = [], [], []
    for name in names:
        kind, r = TABLES[name]
        ctx = field_new(r)
        if kind == "weights":
            spec = build_code_spec(ctx, 1)
            computed = [weight_distribution_dp(spec)[j] for j in range(spec.length + 1)]
            cross = [weight_distribution_macwilliams(spec)[j] for j in range(spec.length + 1)]
            golden = WEIGHT_DISTRIBUTIONS[r]
        else:
            computed = list(mk_recursive(ctx, "a", config.h_max).values)
            cross = list(moments_bruteforce(ctx, 1, config.h_max).values)
            golden = POWER_MOMENTS[r][: config.h_max + 1]
        for i, (value, other, gold) in enumerate(zip(computed, cross, golden)):
            if value != gold or other != gold:
                mismatches.append({"table": name, "index": i, "computed": value, "cross": other, "golden": gold})
        rows.append({"table": name, "entries": len(computed), "matches": not any(m["table"] == name for m in mismatches)})
        rendered.append(_render_golden_table(name, computed))
    payload = envelope(None, {"which": wanted}, {"rows": rows, "mismatches": mismatches}, "dp+recursive")
    payload["rendered"] = "\n".join(rendered)
    if mismatches:
        for m in mismatches:
            logger.error(f"расхождение с эталоном: {m}")
        payload["failed"] = ConsistencyError(f"{len(mismatches)} расхождений с эталонными таблицами")
    return payload


def cmd_verify(config: RunConfig) -> dict:
    from app.checks import ERROR, FAIL, run_checks
    from app.report import envelope

    ctx = _ctx(config)
    if ctx.r > 5 and not config.extra.get("full"):
        raise PreconditionError("verify при r > 5 включается флагом --full")
    only = config.extra.get("only")
    results = run_checks(ctx, full=bool(config.extra.get("full")), threads=config.threads, only=only)
    rows = [{"check": res.name, "status": res.status, "note": res.note} for res in results]
    payload = envelope(ctx, {"only": only, "full": bool(config.extra.get("full"))}, {"rows": rows}, "suite")
    failed = [res.name for res in results if res.status in (FAIL, ERROR)]
    if failed:
        payload["failed"] = ConsistencyError(f"не прошли проверки: {', '.join(failed)}")
    return payload


def cmd_cache(config: RunConfig) -> dict:
    from app import seed
    from app.db import DB_PATH
    from app.report import envelope
    from app.store import recent_runs

    if config.extra.get("warm"):
        rs = tuple(config.extra.get("rs") or seed.DEFAULT_R)
        seed.run(reset=bool(config.extra.get("reset")), rs=rs, threads=config.threads)
    runs = [
        {"subcommand": run.subcommand, "r": run.r, "status": run.status,
         "started_at": run.started_at.isoformat(), "note": run.note}
        for run in recent_runs()
    ]
    return envelope(None, {"db": DB_PATH}, {"rows": runs}, "cache")


HANDLERS = {
    "field": cmd_field,
    "ksum": cmd_ksum,
    "group": cmd_group,
    "code": cmd_code,
    "moments": cmd_moments,
    "tables": cmd_tables,
    "verify": cmd_verify,
    "cache": cmd_cache,
}


# --- разбор аргументов

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kloost", description="Kloosterman sums over GF(2^r) and codes from orthogonal groups")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=int)
    common.add_argument("--modulus", type=_hex)
    common.add_argument("--format", dest="fmt", default="json")
    common.add_argument("--output")
    common.add_argument("--threads", type=int, default=DEFAULT_THREADS)
    common.add_argument("--log-level")
    common.add_argument("--no-cache", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("field", parents=[common])
    p.add_argument("--op", choices=("add", "mul", "inv", "pow"))
    p.add_argument("--x", type=_hex)
    p.add_argument("--y")
    p.add_argument("--list-moduli", action="store_true")

    p = sub.add_parser("ksum", parents=[common])
    p.add_argument("--a", type=_hex)
    p.add_argument("--m", type=int)
    p.add_argument("--gl", type=int)
    p.add_argument("--table", action="store_true")
    p.add_argument("--method")

    p = sub.add_parser("group", parents=[common])
    p.add_argument("--which", required=True)
    p.add_argument("--histogram", action="store_true")
    p.add_argument("--gauss", type=_hex)
    p.add_argument("--export")

    p = sub.add_parser("code", parents=[common])
    p.add_argument("--which", required=True)
    p.add_argument("--method", choices=("dp", "macwilliams", "brute"), default="dp")
    p.add_argument("--max-weight", type=int)
    p.add_argument("--explain", action="store_true")

    p = sub.add_parser("moments", parents=[common])
    p.add_argument("--variant", required=True)
    p.add_argument("--hmax", type=int, default=29)
    p.add_argument("--m", type=int)

    p = sub.add_parser("tables", parents=[common])
    p.add_argument("--which", default="all")
    p.add_argument("--hmax", type=int, default=29)

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--full", action="store_true")
    p.add_argument("--only", nargs="*")

    p = sub.add_parser("cache", parents=[common])
    p.add_argument("--warm", action="store_true")
    p.add_argument("--reset", action="store_true")
    p.add_argument("--rs", type=int, nargs="*")
    return parser


_CONFIG_KEYS = {"subcommand", "r", "modulus", "which", "variant", "fmt", "output", "threads", "method"}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    raw = vars(args)
    extra = {k: v for k, v in raw.items() if k not in _CONFIG_KEYS and k not in ("hmax", "max_weight", "log_level")}
    if raw.get("subcommand") == "field" and raw.get("y") is not None:
        extra["y"] = int(raw["y"]) if raw.get("op") == "pow" else int(raw["y"], 16)
    return RunConfig(
        subcommand=raw["subcommand"],
        r=raw.get("r"),
        modulus=raw.get("modulus"),
        which=raw.get("which"),
        variant=raw.get("variant"),
        h_max=raw.get("hmax") if raw.get("hmax") is not None else 29,
        max_weight=raw.get("max_weight"),
        fmt=raw.get("fmt") or "json",
        output=raw.get("output"),
        threads=raw.get("threads") or 1,
        method=raw.get("method"),
        extra=extra,
    ).validate()


def emit(payload: dict, config: RunConfig):
    from app.report import render

    body = {k: v for k, v in payload.items() if k not in ("rendered", "failed")}
    if config.subcommand == "tables" and config.fmt == "md":
        text = payload["rendered"]
    else:
        text = render(body, config.fmt)
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(text)
        logger.info(f"результат записан в {config.output}")
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    from app.store import log_run

    args = build_parser().parse_args(argv)
    if args.log_level:
        logging.getLogger().setLevel(args.log_level.upper())
    config = None
    code = 0
    note = None
    try:
        config = config_from_args(args)
        payload = HANDLERS[config.subcommand](config)
        emit(payload, config)
        failed = payload.get("failed")
        if failed is not None:
            raise failed
    except KloostError as e:
        logger.error(f"{type(e).__name__}: {e}")
        code, note = e.exit_code, str(e)
    except Exception as e:
        logger.error(f"❌ Критическая ошибка: {e}", exc_info=True)
        raise
    finally:
        if config is not None and not getattr(args, "no_cache", False):
            try:
                log_run(config.subcommand, config.r, config.modulus, EXIT_STATUS.get(code, "error"), note)
            except Exception as e:
                logger.warning(f"не удалось записать журнал запуска: {e}")
    return code


def main() -> None:
    def signal_handler(sig, frame):
        logger.info("⚠️ Получен сигнал остановки. Завершаю работу...")
        sys.exit(130)

    signal.signal(signal.SIGINT, signal_handler)
    signal.signal(signal.SIGTERM, signal_handler)
    sys.exit(run())


if __name__ == "__main__":
    main()
