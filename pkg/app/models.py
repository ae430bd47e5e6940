from sqlalchemy import Integer, String, DateTime, UniqueConstraint
from sqlalchemy.orm import Mapped, mapped_column
from datetime import datetime

from .db import Base


class KloostermanValue(Base):
    __tablename__ = "kloosterman_values"
    __table_args__ = (UniqueConstraint("r", "modulus", "a"),)

    id: Mapped[int] = mapped_column(Integer, primary_key=True, index=True)
    r: Mapped[int] = mapped_column(Integer, index=True)
    modulus: Mapped[int] = mapped_column(Integer, index=True)
    a: Mapped[int] = mapped_column(Integer)
    value: Mapped[int] = mapped_column(Integer)  # |K| < 2√q, помещается в INTEGER


class MomentValue(Base):
    __tablename__ = "moment_values"
    __table_args__ = (UniqueConstraint("r", "modulus", "m", "h"),)

    id: Mapped[int] = mapped_column(Integer, primary_key=True, index=True)
    r: Mapped[int] = mapped_column(Integer, index=True)
    modulus: Mapped[int] = mapped_column(Integer, index=True)
    m: Mapped[int] = mapped_column(Integer)
    h: Mapped[int] = mapped_column(Integer)
    value: Mapped[str] = mapped_column(String)  # десятичная запись, моменты не влезают в 64 бита


class RunLog(Base):
    __tablename__ = "run_log"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, index=True)
    subcommand: Mapped[str] = mapped_column(String, index=True)
    r: Mapped[int | None] = mapped_column(Integer, nullable=True)
    modulus: Mapped[int | None] = mapped_column(Integer, nullable=True)
    status: Mapped[str] = mapped_column(String)  # ok / precondition / resource / consistency / error
    started_at: Mapped[datetime] = mapped_column(DateTime)
    note: Mapped[str | None] = mapped_column(String, nullable=True)
