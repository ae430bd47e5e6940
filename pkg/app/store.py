"""Чтение и запись кэша: таблицы Клоостермана, ряды моментов, журнал запусков."""
import logging
from datetime import datetime, timezone

from .db import SessionLocal, ensure_db_exists
from .errors import PreconditionError
from .models import KloostermanValue, MomentValue, RunLog
from .expsum import KloostermanTable, kloosterman_table
from .gf2r import FieldCtx
from .moments import MomentSeries, moments_bruteforce

logger = logging.getLogger(__name__)


def load_kloosterman_table(ctx: FieldCtx) -> dict[int, int] | None:
    """Таблица из кэша, только если она полная (q−1 строк) для того же модуля."""
    ensure_db_exists()
    db = SessionLocal()
    try:
        rows = (
            db.query(KloostermanValue)
            .filter(KloostermanValue.r == ctx.r, KloostermanValue.modulus == ctx.modulus)
            .all()
        )
        if len(rows) != ctx.q - 1:
            return None
        return {row.a: row.value for row in rows}
    finally:
        db.close()


def save_kloosterman_table(table: KloostermanTable) -> int:
    ctx = table.ctx
    db = SessionLocal()
    try:
        db.query(KloostermanValue).filter(
            KloostermanValue.r == ctx.r, KloostermanValue.modulus == ctx.modulus
        ).delete()
        db.add_all(
            KloostermanValue(r=ctx.r, modulus=ctx.modulus, a=a, value=v)
            for a, v in sorted(table.values.items())
        )
        db.commit()
        return len(table.values)
    finally:
        db.close()


def cached_kloosterman_table(ctx: FieldCtx, threads: int = 1) -> dict[int, int]:
    values = load_kloosterman_table(ctx)
    if values is not None:
        logger.debug(f"таблица K для GF({ctx.q}) взята из кэша")
        return values
    table = kloosterman_table(ctx, threads=threads)
    save_kloosterman_table(table)
    return table.values


def load_moments(ctx: FieldCtx, m: int) -> list[int]:
    ensure_db_exists()
    db = SessionLocal()
    try:
        rows = (
            db.query(MomentValue)
            .filter(MomentValue.r == ctx.r, MomentValue.modulus == ctx.modulus, MomentValue.m == m)
            .order_by(MomentValue.h)
            .all()
        )
        values = []
        for expected_h, row in enumerate(rows):
            if row.h != expected_h:
                break
            values.append(int(row.value))
        return values
    finally:
        db.close()


def save_moments(series: MomentSeries) -> int:
    if series.stride != 1:
        raise PreconditionError("в кэш пишутся только ряды с шагом 1")
    ctx = series.ctx
    db = SessionLocal()
    try:
        db.query(MomentValue).filter(
            MomentValue.r == ctx.r, MomentValue.modulus == ctx.modulus, MomentValue.m == series.m
        ).delete()
        db.add_all(
            MomentValue(r=ctx.r, modulus=ctx.modulus, m=series.m, h=h, value=str(v))
            for h, v in enumerate(series.values)
        )
        db.commit()
        return len(series.values)
    finally:
        db.close()


def cached_moments(ctx: FieldCtx, m: int, h_max: int) -> MomentSeries:
    values = load_moments(ctx, m)
    if len(values) > h_max:
        return MomentSeries(ctx, m, tuple(values[: h_max + 1]), 1, "cache")
    series = moments_bruteforce(ctx, m, h_max)
    save_moments(series)
    return series


def log_run(subcommand: str, r: int | None, modulus: int | None, status: str, note: str | None = None):
    ensure_db_exists()
    db = SessionLocal()
    try:
        db.add(RunLog(
            subcommand=subcommand,
            r=r,
            modulus=modulus,
            status=status,
            started_at=datetime.now(timezone.utc),
            note=note,
        ))
        db.commit()
    finally:
        db.close()


def recent_runs(limit: int = 20) -> list[RunLog]:
    ensure_db_exists()
    db = SessionLocal()
    try:
        return db.query(RunLog).order_by(RunLog.id.desc()).limit(limit).all()
    finally:
        db.close()
