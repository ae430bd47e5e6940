"""Арифметика в GF(2^r): полиномиальный базис, след tr и канонический характер λ.

Элемент поля задаётся целым числом в [0, q), биты которого суть коэффициенты
представителя-многочлена. Сложение выполняется как XOR, умножение через таблицы
exp/log по примитивному элементу.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError, PreconditionError

logger = logging.getLogger(__name__)

MAX_R = 16
# Полная таблица умножения строится только для маленьких полей
MUL_TABLE_MAX_Q = 256

FieldElement = int


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mod(a: int, m: int) -> int:
    dm = poly_degree(m)
    while a and poly_degree(a) >= dm:
        a ^= m << (poly_degree(a) - dm)
    return a


def poly_to_str(p: int) -> str:
    """0b10011 -> 'x^4+x+1'"""
    if p == 0:
        return "0"
    terms = []
    for d in range(poly_degree(p), -1, -1):
        if not (p >> d) & 1:
            continue
        terms.append("1" if d == 0 else "x" if d == 1 else f"x^{d}")
    return "+".join(terms)


def find_factor(poly: int) -> int | None:
    """Нетривиальный делитель poly наименьшей степени или None.

    Перебираются все многочлены степени 1..deg/2 (для deg ≤ 16 это не
    больше 2^9 делителей).
    """
    deg = poly_degree(poly)
    for d in range(1, deg // 2 + 1):
        for cand in range(1 << d, 1 << (d + 1)):
            if poly_mod(poly, cand) == 0:
                return cand
    return None


def is_irreducible(poly: int) -> bool:
    return poly_degree(poly) >= 1 and find_factor(poly) is None


def irreducible_polys(r: int) -> list[int]:
    return [p for p in range((1 << r) | 1, 1 << (r + 1), 2) if is_irreducible(p)]


@lru_cache(maxsize=None)
def smallest_irreducible(r: int) -> int:
    """Лексикографически наименьший неприводимый многочлен степени r со свободным членом 1."""
    for p in range((1 << r) | 1, 1 << (r + 1), 2):
        if is_irreducible(p):
            return p
    raise DomainError(f"нет неприводимых многочленов степени {r}")


def _clmul_mod(a: int, b: int, modulus: int, r: int) -> int:
    res = 0
    while b:
        if b & 1:
            res ^= a
        b >>= 1
        a <<= 1
        if (a >> r) & 1:
            a ^= modulus
    return res


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class FieldCtx:
    """Конкретное поле GF(2^r). Неизменяемо после построения.

    При построении модуль проверяется на неприводимость пробным делением,
    а примитивный элемент проверяется по цикличности (у примитивного элемента
    ровно q−1 различных степеней).
    """

    r: int
    modulus: int
    q: int = field(init=False, compare=False)
    generator: int = field(init=False, compare=False)
    exp_table: np.ndarray = field(init=False, repr=False, compare=False)
    log_table: np.ndarray = field(init=False, repr=False, compare=False)
    trace_table: np.ndarray = field(init=False, repr=False, compare=False)
    inv_table: np.ndarray = field(init=False, repr=False, compare=False)
    _exp: list = field(init=False, repr=False, compare=False)
    _log: list = field(init=False, repr=False, compare=False)
    _tr: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        r, modulus = self.r, self.modulus
        if not 1 <= r <= MAX_R:
            raise PreconditionError(f"r должно быть в диапазоне 1..{MAX_R}, получено {r}")
        if poly_degree(modulus) != r:
            raise DomainError(
                f"модуль {poly_to_str(modulus)} имеет степень {poly_degree(modulus)}, а не {r}"
            )
        factor = find_factor(modulus)
        if factor is not None:
            raise DomainError(
                f"модуль {poly_to_str(modulus)} приводим: делится на {poly_to_str(factor)}"
            )
        q = 1 << r
        object.__setattr__(self, "q", q)

        g = self._find_generator()
        exp = [1] * (2 * (q - 1))
        for i in range(1, 2 * (q - 1)):
            exp[i] = _clmul_mod(exp[i - 1], g, modulus, r)
        if len(set(exp[: q - 1])) != q - 1:
            raise DomainError(f"мультипликативная группа GF({q}) не циклична при модуле {modulus:#x}")
        log = [0] * q
        for i in range(q - 1):
            log[exp[i]] = i
        object.__setattr__(self, "generator", g)
        object.__setattr__(self, "_exp", exp)
        object.__setattr__(self, "_log", log)
        object.__setattr__(self, "exp_table", np.array(exp, dtype=np.int64))
        object.__setattr__(self, "log_table", np.array(log, dtype=np.int64))

        inv = np.zeros(q, dtype=np.int64)
        nz = np.arange(1, q)
        inv[1:] = self.exp_table[(q - 1 - self.log_table[nz]) % (q - 1)]
        object.__setattr__(self, "inv_table", inv)

        # tr(x) = x + x^2 + ... + x^(2^(r-1)), считаем векторно
        xs = np.arange(q, dtype=np.int64)
        acc = xs.copy()
        cur = xs
        for _ in range(r - 1):
            cur = self.square_array(cur)
            acc ^= cur
        if acc.max(initial=0) > 1:
            raise DomainError("след вышел за пределы GF(2): таблицы поля повреждены")
        object.__setattr__(self, "trace_table", acc.astype(np.uint8))
        object.__setattr__(self, "_tr", [int(t) for t in acc])

    def _find_generator(self) -> int:
        q, r, modulus = self.q, self.r, self.modulus
        if q == 2:
            return 1
        primes = _prime_factors(q - 1)

        def power(a: int, e: int) -> int:
            res = 1
            while e:
                if e & 1:
                    res = _clmul_mod(res, a, modulus, r)
                a = _clmul_mod(a, a, modulus, r)
                e >>= 1
            return res

        for g in range(2, q):
            if all(power(g, (q - 1) // p) != 1 for p in primes):
                return g
        raise DomainError(f"в GF({q}) не найден элемент порядка {q - 1}")

    # --- скалярная арифметика

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("обратный к нулю не существует")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DomainError("отрицательная степень нуля")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def trace(self, x: int) -> int:
        return self._tr[x]

    def lam(self, x: int) -> int:
        return 1 - 2 * self._tr[x]

    def log(self, a: int) -> int:
        if a == 0:
            raise DomainError("логарифм нуля не определён")
        return self._log[a]

    def exp(self, k: int) -> int:
        return self._exp[k % (self.q - 1)]

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    # --- векторные версии для numpy-кода

    def square_array(self, xs: np.ndarray) -> np.ndarray:
        out = self.exp_table[(2 * self.log_table[xs]) % (self.q - 1)]
        return np.where(xs == 0, 0, out)

    def mul_array(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        out = self.exp_table[self.log_table[xs] + self.log_table[ys]]
        return np.where((xs == 0) | (ys == 0), 0, out)

    @property
    def mul_table(self) -> np.ndarray:
        return _mul_table(self)


@lru_cache(maxsize=32)
def _mul_table(ctx: FieldCtx) -> np.ndarray:
    if ctx.q > MUL_TABLE_MAX_Q:
        raise PreconditionError(f"таблица умножения строится только для q ≤ {MUL_TABLE_MAX_Q}")
    xs = np.arange(ctx.q)
    table = ctx.mul_array(xs[:, None], xs[None, :])
    dtype = np.uint8 if ctx.q <= 256 else np.uint16
    return table.astype(dtype)


@lru_cache(maxsize=64)
def field_new(r: int, modulus: int | None = None) -> FieldCtx:
    """Проверенный контекст GF(2^r); без модуля берётся наименьший неприводимый."""
    if not 1 <= r <= MAX_R:
        raise PreconditionError(f"r должно быть в диапазоне 1..{MAX_R}, получено {r}")
    if modulus is None:
        modulus = smallest_irreducible(r)
    ctx = FieldCtx(r, modulus)
    logger.debug(f"GF(2^{r}) с модулем {poly_to_str(modulus)}, примитивный элемент {ctx.generator}")
    return ctx


def _check_operand(ctx: FieldCtx, x: int):
    if not 0 <= x < ctx.q:
        raise DomainError(f"элемент {x} вне GF({ctx.q})")


def arith(ctx: FieldCtx, op: str, *operands: int) -> FieldElement:
    """Единая точка входа: add|mul|inv|pow."""
    if op == "add":
        a, b = operands
        _check_operand(ctx, a)
        _check_operand(ctx, b)
        return ctx.add(a, b)
    if op == "mul":
        a, b = operands
        _check_operand(ctx, a)
        _check_operand(ctx, b)
        return ctx.mul(a, b)
    if op == "inv":
        (a,) = operands
        _check_operand(ctx, a)
        return ctx.inv(a)
    if op == "pow":
        a, e = operands
        _check_operand(ctx, a)
        return ctx.pow(a, e)
    raise PreconditionError(f"неизвестная операция {op!r}")


def trace(ctx: FieldCtx, x: FieldElement) -> int:
    _check_operand(ctx, x)
    return ctx.trace(x)


def trace_by_definition(ctx: FieldCtx, x: FieldElement) -> int:
    """tr(x) прямым суммированием x + x^2 + ..., эталон для таблицы следа."""
    acc, cur = 0, x
    for _ in range(ctx.r):
        acc ^= cur
        cur = ctx.mul(cur, cur)
    if acc not in (0, 1):
        raise DomainError(f"tr({x}) = {acc} не лежит в GF(2)")
    return acc


def lambda_char(ctx: FieldCtx, x: FieldElement) -> int:
    _check_operand(ctx, x)
    return ctx.lam(x)


def artin_schreier_image(ctx: FieldCtx) -> frozenset[int]:
    """Θ(F_q) = {α² + α}."""
    return frozenset(ctx.mul(a, a) ^ a for a in ctx.elements())


def trace_zero_count(ctx: FieldCtx) -> int:
    return int(ctx.q - int(ctx.trace_table.sum()))


def smallest_trace_one(ctx: FieldCtx) -> int:
    """Наименьший c с tr(c) = 1, т.е. c ∉ Θ(F_q): x² + x + c неприводим."""
    for c in ctx.elements():
        if ctx.trace(c) == 1:
            return c
    raise DomainError("в поле нет элементов со следом 1")


# --- малые матрицы над GF(q): кортежи кортежей

Matrix = tuple[tuple[int, ...], ...]


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def mat_mul(ctx: FieldCtx, x: Matrix, y: Matrix) -> Matrix:
    cols = list(zip(*y))
    out = []
    for row in x:
        out_row = []
        for col in cols:
            acc = 0
            for a, b in zip(row, col):
                if a and b:
                    acc ^= ctx.mul(a, b)
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def mat_add(x: Matrix, y: Matrix) -> Matrix:
    return tuple(tuple(a ^ b for a, b in zip(rx, ry)) for rx, ry in zip(x, y))


def mat_trace(m: Matrix) -> int:
    acc = 0
    for i in range(len(m)):
        acc ^= m[i][i]
    return acc


def _row_reduce(ctx: FieldCtx, rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Приведение к ступенчатому виду на месте; возвращает строки и столбцы-пивоты."""
    pivots = []
    lead = 0
    for c in range(ncols):
        pivot = next((i for i in range(lead, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[lead], rows[pivot] = rows[pivot], rows[lead]
        inv = ctx.inv(rows[lead][c])
        rows[lead] = [ctx.mul(inv, v) for v in rows[lead]]
        for i in range(len(rows)):
            if i != lead and rows[i][c]:
                f = rows[i][c]
                rows[i] = [v ^ ctx.mul(f, w) for v, w in zip(rows[i], rows[lead])]
        pivots.append(c)
        lead += 1
        if lead == len(rows):
            break
    return rows, pivots


def rank(ctx: FieldCtx, m: Matrix) -> int:
    if not m:
        return 0
    _, pivots = _row_reduce(ctx, [list(row) for row in m], len(m[0]))
    return len(pivots)


def rref(ctx: FieldCtx, m: Matrix) -> Matrix:
    rows, pivots = _row_reduce(ctx, [list(row) for row in m], len(m[0]))
    return tuple(tuple(row) for row in rows[: len(pivots)])


def mat_inv(ctx: FieldCtx, m: Matrix) -> Matrix:
    n = len(m)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(m)]
    rows, pivots = _row_reduce(ctx, aug, n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise DomainError("матрица вырождена")
    return tuple(tuple(row[n:]) for row in rows)


def det(ctx: FieldCtx, m: Matrix) -> int:
    n = len(m)
    rows = [list(row) for row in m]
    acc = 1
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c]), None)
        if pivot is None:
            return 0
        rows[c], rows[pivot] = rows[pivot], rows[c]
        acc = ctx.mul(acc, rows[c][c])
        inv = ctx.inv(rows[c][c])
        for i in range(c + 1, n):
            if rows[i][c]:
                f = ctx.mul(rows[i][c], inv)
                rows[i] = [v ^ ctx.mul(f, w) for v, w in zip(rows[i], rows[c])]
    return acc


def batch_mat_mul(ctx: FieldCtx, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Произведение стопок матриц (..., n, k) · (..., k, m) через таблицу умножения."""
    table = ctx.mul_table
    out = None
    for j in range(x.shape[-1]):
        term = table[x[..., :, j, None], y[..., None, j, :]]
        out = term if out is None else out ^ term
    return out
