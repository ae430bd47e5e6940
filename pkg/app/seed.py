"""Прогрев кэша: таблицы Клоостермана, ряды моментов и переписи SO⁺(4,q). Запуск: python -m app.seed"""
import logging
import sys
import os

# Запуск из корня проекта
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.census_io import census_path, write_census
from app.db import engine, Base, CACHE_DIR, SessionLocal
from app.gf2r import field_new
from app.models import KloostermanValue, MomentValue
from app.moments import DEFAULT_H_MAX
from app.ogroup import enumerate_so_plus_4
from app.store import cached_kloosterman_table, cached_moments

logger = logging.getLogger(__name__)

DEFAULT_R = (2, 3, 4, 5)
CENSUS_MAX_R = 3


def run(reset: bool = False, rs=DEFAULT_R, threads: int = 1):
    if reset:
        Base.metadata.drop_all(bind=engine)
    os.makedirs(CACHE_DIR, exist_ok=True)
    Base.metadata.create_all(bind=engine)
    censuses = 0
    for r in rs:
        ctx = field_new(r)
        cached_kloosterman_table(ctx, threads=threads)
        cached_moments(ctx, 1, DEFAULT_H_MAX)
        cached_moments(ctx, 2, DEFAULT_H_MAX)
        if r <= CENSUS_MAX_R:
            path = census_path(CACHE_DIR, ctx, "so4")
            if reset or not os.path.exists(path):
                write_census(path, enumerate_so_plus_4(ctx, store_elements=True, threads=threads))
                censuses += 1
    db = SessionLocal()
    try:
        logger.info(
            f"Готово. Значений K в кэше: {db.query(KloostermanValue).count()}, "
            f"моментов: {db.query(MomentValue).count()}, новых переписей: {censuses}"
        )
    finally:
        db.close()


if __name__ == "__main__":
    logging.basicConfig(format="%(asctime)s - %(name)s - %(levelname)s - %(message)s", level=logging.INFO)
    reset = "--reset" in sys.argv or "-r" in sys.argv
    rs = tuple(int(a) for a in sys.argv[1:] if a.isdigit()) or DEFAULT_R
    run(reset=reset, rs=rs)
