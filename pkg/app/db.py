import os

from dotenv import load_dotenv
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker, DeclarativeBase

load_dotenv()

# Кэш в каталоге KLOOST_CACHE_DIR, по умолчанию .cache в корне проекта
_project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CACHE_DIR = os.environ.get("KLOOST_CACHE_DIR") or os.path.join(_project_root, ".cache")
DB_PATH = os.path.join(CACHE_DIR, "kloost.db")
DB_URL = f"sqlite:///{DB_PATH}"

engine = create_engine(
    DB_URL,
    connect_args={"check_same_thread": False},
)
SessionLocal = sessionmaker(bind=engine, autocommit=False, autoflush=False)


class Base(DeclarativeBase):
    pass


def ensure_db_exists():
    """Создаёт каталог кэша, файл БД и таблицы, если их ещё нет."""
    from . import models  # noqa: F401  регистрируем таблицы
    os.makedirs(CACHE_DIR, exist_ok=True)
    Base.metadata.create_all(bind=engine)
