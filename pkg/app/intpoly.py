"""Точная целочисленная комбинаторика: биномы, произведения многочленов, циклические свёртки.

Длинные произведения считаются подстановкой Кронекера: коэффициенты
упаковываются в одно большое целое с запасом разрядов, после умножения
распаковываются обратно. Никакой плавающей точки.
"""
import math

SCHOOLBOOK_MAX = 32


def binom(n: int, k: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def _pack(coeffs: list[int], width: int) -> int:
    return int.from_bytes(b"".join(c.to_bytes(width, "little") for c in coeffs), "little")


def _unpack(value: int, width: int, count: int) -> list[int]:
    raw = value.to_bytes(width * count, "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") for i in range(count)]


def poly_mul(f: list[int], g: list[int], limit: int | None = None) -> list[int]:
    """Произведение многочленов с неотрицательными целыми коэффициентами.

    limit: старшая сохраняемая степень; None означает без усечения.
    """
    if not f or not g:
        return []
    if limit is not None:
        f = f[: limit + 1]
        g = g[: limit + 1]
    out_len = len(f) + len(g) - 1
    if limit is not None:
        out_len = min(out_len, limit + 1)

    if min(len(f), len(g)) <= SCHOOLBOOK_MAX:
        out = [0] * out_len
        for i, a in enumerate(f):
            if not a:
                continue
            for j in range(min(len(g), out_len - i)):
                out[i + j] += a * g[j]
        return out

    if min(f) < 0 or min(g) < 0:
        raise ValueError("подстановка Кронекера требует неотрицательных коэффициентов")
    if max(f) == 0 or max(g) == 0:
        return [0] * out_len
    bound = max(f) * max(g) * min(len(f), len(g))
    width = (bound.bit_length() + 8) // 8
    full = len(f) + len(g) - 1
    prod = _pack(f, width) * _pack(g, width)
    return _unpack(prod, width, full)[:out_len]


def cyclic_convolve(x: list[int], y: list[int]) -> list[int]:
    """Точная циклическая свёртка z_k = Σ_i x_i y_{k-i mod n} для знаковых целых.

    Знак снимается сдвигом x = x' - bx, y = y' - by; поправки собираются из
    полных сумм, так как при циклическом сдвиге они не меняются.
    """
    n = len(x)
    if len(y) != n:
        raise ValueError("свёртка требует последовательностей одной длины")
    bx = -min(0, min(x))
    by = -min(0, min(y))
    xs = [v + bx for v in x]
    ys = [v + by for v in y]
    lin = poly_mul(xs, ys)
    sx, sy = sum(xs), sum(ys)
    out = []
    for k in range(n):
        c = lin[k] + (lin[k + n] if k + n < len(lin) else 0)
        out.append(c - by * sx - bx * sy + n * bx * by)
    return out
