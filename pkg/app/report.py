"""Вывод результатов: JSON со стабильной схемой, TSV и Markdown."""
import json
from fractions import Fraction

import numpy as np

from .gf2r import FieldCtx, poly_to_str

FORMATS = ("json", "tsv", "md")
SCHEMA_VERSION = "1"


def field_info(ctx: FieldCtx) -> dict:
    return {"r": ctx.r, "q": ctx.q, "modulus": f"{ctx.modulus:#x}", "polynomial": poly_to_str(ctx.modulus)}


def envelope(ctx: FieldCtx | None, parameters: dict, results: dict, method: str) -> dict:
    return {
        "field": field_info(ctx) if ctx is not None else None,
        "parameters": parameters,
        "results": results,
        "provenance": {"method": method, "version": SCHEMA_VERSION},
    }


def _plain(value):
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def render_json(payload: dict) -> str:
    return json.dumps(_plain(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _rows(results: dict) -> tuple[list[str], list[list]]:
    rows = results.get("rows")
    if rows:
        header = list(rows[0].keys())
        return header, [[row.get(k) for k in header] for row in rows]
    return ["key", "value"], [[k, v] for k, v in results.items()]


def _cell(value) -> str:
    value = _plain(value)
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, ensure_ascii=False)
    if value is None:
        return ""
    return str(value)


def render_tsv(payload: dict) -> str:
    header, rows = _rows(payload["results"])
    lines = ["\t".join(header)]
    lines += ["\t".join(_cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def markdown_table(header: list[str], rows: list[list], title: str | None = None) -> str:
    lines = []
    if title:
        lines += [f"**{title}**", ""]
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|" + "|".join("---:" for _ in header) + "|")
    lines += ["| " + " | ".join(_cell(v) for v in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def render_md(payload: dict) -> str:
    header, rows = _rows(payload["results"])
    title = None
    if payload.get("field"):
        title = f"GF(2^{payload['field']['r']}), {payload['provenance']['method']}"
    return markdown_table(header, rows, title)


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return render_json(payload)
    if fmt == "tsv":
        return render_tsv(payload)
    return render_md(payload)


def columns_layout(pairs: list[tuple[int, int]], columns: int, labels: tuple[str, str]) -> tuple[list[str], list[list]]:
    """Раскладка длинного списка (индекс, значение) в несколько пар колонок."""
    height = -(-len(pairs) // columns)
    header = [labels[k % 2] for k in range(2 * columns)]
    rows = []
    for i in range(height):
        row = []
        for c in range(columns):
            k = c * height + i
            row += list(pairs[k]) if k < len(pairs) else ["", ""]
        rows.append(row)
    return header, rows
