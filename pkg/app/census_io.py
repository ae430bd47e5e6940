"""Двоичные файлы переписей групп и текстовый экспорт.

Формат (little-endian):
    magic  b"KLSC"
    version u16, r u16, modulus u32, group u8, 3 байта выравнивания, count u64
    count × u64: упакованные элементы по возрастанию
    count × u8 : следы элементов в том же порядке
"""
import logging
import os
import struct

import numpy as np

from .errors import ConsistencyError, PreconditionError
from .gf2r import FieldCtx
from .ogroup import GROUPS, GroupCensus, assemble_census

logger = logging.getLogger(__name__)

MAGIC = b"KLSC"
VERSION = 1
HEADER = struct.Struct("<4sHHIB3xQ")


def census_path(cache_dir: str, ctx: FieldCtx, group: str) -> str:
    return os.path.join(cache_dir, f"{group}-r{ctx.r}-{ctx.modulus:x}.klsc")


def write_census(path: str, census: GroupCensus):
    if census.elements is None:
        raise PreconditionError("для записи перепись должна хранить элементы")
    if census.ctx.q > 256:
        raise PreconditionError("следы хранятся байтами: q ≤ 256")
    ctx = census.ctx
    header = HEADER.pack(MAGIC, VERSION, ctx.r, ctx.modulus, GROUPS.index(census.group), census.order)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(census.elements.astype("<u8").tobytes())
        fh.write(census.traces.astype(np.uint8).tobytes())
    logger.info(f"перепись {census.group} ({census.order} элементов) записана в {path}")


def read_census(path: str, ctx: FieldCtx, group: str) -> GroupCensus:
    with open(path, "rb") as fh:
        raw = fh.read(HEADER.size)
        if len(raw) != HEADER.size:
            raise ConsistencyError(f"{path}: обрезанный заголовок")
        magic, version, r, modulus, group_idx, count = HEADER.unpack(raw)
        if magic != MAGIC:
            raise ConsistencyError(f"{path}: неверная сигнатура {magic!r}")
        if version != VERSION:
            raise ConsistencyError(f"{path}: версия {version}, ожидалась {VERSION}")
        if r != ctx.r or modulus != ctx.modulus:
            raise ConsistencyError(f"{path}: файл для r={r}, модуль {modulus:#x}, а поле r={ctx.r}, {ctx.modulus:#x}")
        if group_idx >= len(GROUPS) or GROUPS[group_idx] != group:
            raise ConsistencyError(f"{path}: в файле другая группа")
        elements = np.frombuffer(fh.read(8 * count), dtype="<u8").astype(np.uint64)
        traces = np.frombuffer(fh.read(count), dtype=np.uint8).copy()
    if len(elements) != count or len(traces) != count:
        raise ConsistencyError(f"{path}: ожидалось {count} элементов")
    if traces.max(initial=0) >= ctx.q:
        raise ConsistencyError(f"{path}: след вне GF({ctx.q})")
    # δ⁺ в файле не хранится; для SO-групп он тождественно 0
    dicksons = np.zeros(count, dtype=np.int64) if group.startswith("so") else None
    return assemble_census(ctx, group, elements, traces, dicksons, True, "file")


def export_hex(census: GroupCensus) -> list[str]:
    """Отсортированные упакованные матрицы, по одной в строке."""
    if census.elements is None:
        raise PreconditionError("для экспорта перепись должна хранить элементы")
    width = 16
    return [f"{int(v):0{width}x}" for v in census.elements]
