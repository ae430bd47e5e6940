"""Ортогональные группы O⁺(2n,q), SO⁺(2n,q) над GF(2^r) при n ∈ {1, 2}.

Матрица w = [[A, B], [C, D]] (блоки n×n) лежит в O⁺(2n,q), если ᵗAC и ᵗBD
альтернированные (нулевая диагональ, симметричны) и ᵗAD + ᵗCB = 1.
Инвариант Диксона δ⁺(w) = Tr(BᵗC).

SO⁺(4,q) перечисляется как объединение левых смежных классов t·P⁺, где t
пробегает трансверсаль орбиты подпространства span(e1, e2): орбиту
строим обходом в ширину по образующим P⁺ и σ_2⁺. Порядок группы из
формулы служит сертификатом полноты.
"""
import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import ConsistencyError, DomainError, PreconditionError, ResourceError
from .expsum import kloosterman_gl, kloosterman_table
from .gf2r import (
    FieldCtx,
    Matrix,
    batch_mat_mul,
    det,
    mat_add,
    mat_identity,
    mat_mul,
    mat_trace,
    mat_transpose,
    rank,
    rref,
)

logger = logging.getLogger(__name__)

SO4_MAX_Q = 16
O4_MAX_Q = 8
GAUSS_FORMULA_MAX_N = 4
SYMMETRIC_BRUTE_BUDGET = 1 << 16

GROUPS = ("so2", "o2", "so4", "o4")
WHICH_TO_GROUP = {1: "so2", 2: "o2", 3: "so4"}


# --- упаковка матриц в машинные слова

def entry_bits(q: int) -> int:
    if q <= 16:
        return 4
    if q <= 256:
        return 8
    return 16


def pack_matrices(mats: np.ndarray, q: int) -> np.ndarray:
    """Стопка (N, d, d) → uint64, элемент (0,0) в старших битах."""
    bits = entry_bits(q)
    d = mats.shape[-1]
    if bits * d * d > 64:
        raise ResourceError(f"матрица {d}×{d} над GF({q}) не помещается в 64 бита")
    flat = mats.reshape(len(mats), d * d).astype(np.uint64)
    packed = np.zeros(len(mats), dtype=np.uint64)
    shift = np.uint64(bits)
    for k in range(d * d):
        packed = (packed << shift) | flat[:, k]
    return packed


def unpack_matrix(value: int, q: int, dim: int) -> Matrix:
    bits = entry_bits(q)
    mask = (1 << bits) - 1
    entries = [(value >> (bits * (dim * dim - 1 - k))) & mask for k in range(dim * dim)]
    return tuple(tuple(entries[i * dim:(i + 1) * dim]) for i in range(dim))


def pack_matrix(mat: Matrix, q: int) -> int:
    bits = entry_bits(q)
    value = 0
    for row in mat:
        for x in row:
            value = (value << bits) | x
    return value


@dataclass(frozen=True)
class GroupElement:
    n: int
    mat: Matrix

    def packed(self, q: int) -> int:
        return pack_matrix(self.mat, q)

    @classmethod
    def from_packed(cls, value: int, q: int, n: int) -> "GroupElement":
        return cls(n, unpack_matrix(value, q, 2 * n))


def _as_matrix(w) -> Matrix:
    return w.mat if isinstance(w, GroupElement) else w


def multiply(ctx: FieldCtx, x, y) -> GroupElement:
    mat = mat_mul(ctx, _as_matrix(x), _as_matrix(y))
    return GroupElement(len(mat) // 2, mat)


def _blocks(mat: Matrix) -> tuple[Matrix, Matrix, Matrix, Matrix]:
    n = len(mat) // 2
    a = tuple(row[:n] for row in mat[:n])
    b = tuple(row[n:] for row in mat[:n])
    c = tuple(row[:n] for row in mat[n:])
    d = tuple(row[n:] for row in mat[n:])
    return a, b, c, d


def _is_alternating(m: Matrix) -> bool:
    size = len(m)
    return all(m[i][i] == 0 for i in range(size)) and all(
        m[i][j] == m[j][i] for i in range(size) for j in range(i + 1, size)
    )


# --- принадлежность группе

def is_member(ctx: FieldCtx, w) -> bool:
    mat = _as_matrix(w)
    size = len(mat)
    if size % 2 or any(len(row) != size for row in mat):
        raise DomainError(f"ожидалась квадратная матрица чётного порядка, получено {size} строк")
    a, b, c, d = _blocks(mat)
    at, ct = mat_transpose(a), mat_transpose(c)
    if not _is_alternating(mat_mul(ctx, at, c)):
        return False
    if not _is_alternating(mat_mul(ctx, mat_transpose(b), d)):
        return False
    return mat_add(mat_mul(ctx, at, d), mat_mul(ctx, ct, b)) == mat_identity(size // 2)


def theta_plus(ctx: FieldCtx, x: tuple[int, ...], n: int) -> int:
    """θ⁺(x) = Σ x_i x_{n+i}."""
    if len(x) != 2 * n:
        raise DomainError(f"вектор длины {len(x)} вместо {2 * n}")
    acc = 0
    for i in range(n):
        acc ^= ctx.mul(x[i], x[n + i])
    return acc


def membership_via_form(ctx: FieldCtx, w) -> bool:
    """Проверка сохранения θ⁺ и её поляры на базисных векторах."""
    mat = _as_matrix(w)
    size = len(mat)
    n = size // 2
    cols = [tuple(mat[i][j] for i in range(size)) for j in range(size)]
    basis = [tuple(1 if i == j else 0 for i in range(size)) for j in range(size)]

    def polar(x, y):
        s = tuple(u ^ v for u, v in zip(x, y))
        return theta_plus(ctx, s, n) ^ theta_plus(ctx, x, n) ^ theta_plus(ctx, y, n)

    for i in range(size):
        if theta_plus(ctx, cols[i], n) != theta_plus(ctx, basis[i], n):
            return False
        for j in range(i + 1, size):
            if polar(cols[i], cols[j]) != polar(basis[i], basis[j]):
                return False
    return True


def member_mask(ctx: FieldCtx, mats: np.ndarray) -> np.ndarray:
    """Векторная проверка блочных условий для стопки (N, 2n, 2n), q ≤ 256."""
    n = mats.shape[-1] // 2
    a, b = mats[:, :n, :n], mats[:, :n, n:]
    c, d = mats[:, n:, :n], mats[:, n:, n:]
    at = np.swapaxes(a, 1, 2)
    ok = np.ones(len(mats), dtype=bool)
    for prod in (batch_mat_mul(ctx, at, c), batch_mat_mul(ctx, np.swapaxes(b, 1, 2), d)):
        ok &= (np.diagonal(prod, axis1=1, axis2=2) == 0).all(axis=1)
        ok &= (prod == np.swapaxes(prod, 1, 2)).all(axis=(1, 2))
    cross = batch_mat_mul(ctx, at, d) ^ batch_mat_mul(ctx, np.swapaxes(c, 1, 2), b)
    ok &= (cross == np.eye(n, dtype=cross.dtype)).all(axis=(1, 2))
    return ok


# --- инвариант Диксона

def dickson(ctx: FieldCtx, w) -> int:
    mat = _as_matrix(w)
    if not is_member(ctx, mat):
        raise DomainError("матрица не лежит в O⁺(2n,q)")
    _, b, c, _ = _blocks(mat)
    value = mat_trace(mat_mul(ctx, b, mat_transpose(c)))
    if value not in (0, 1):
        raise ConsistencyError(f"Tr(BᵗC) = {value:#x} не лежит в GF(2)")
    return value


def dickson_rank_parity(ctx: FieldCtx, w) -> int:
    """rank(1 + w) mod 2: независимое описание δ⁺."""
    mat = _as_matrix(w)
    return rank(ctx, mat_add(mat, mat_identity(len(mat)))) % 2


def _dickson_array(ctx: FieldCtx, mats: np.ndarray) -> np.ndarray:
    n = mats.shape[-1] // 2
    prods = ctx.mul_table[mats[:, :n, n:], mats[:, n:, :n]]
    return np.bitwise_xor.reduce(prods.reshape(len(mats), -1), axis=1)


# --- явные элементы

def sigma(n: int, r: int) -> Matrix:
    """Представитель Брюа σ_r⁺ ∈ O⁺(2n,q)."""
    if not 0 <= r <= n:
        raise PreconditionError(f"σ_r⁺ определён при 0 ≤ r ≤ n, получено r={r}, n={n}")
    size = 2 * n
    rows = [[0] * size for _ in range(size)]
    for i in range(r):
        rows[i][n + i] = 1
        rows[n + i][i] = 1
    for i in range(r, n):
        rows[i][i] = 1
        rows[n + i][n + i] = 1
    return tuple(tuple(row) for row in rows)


def _gl2_arrays(ctx: FieldCtx) -> np.ndarray:
    q = ctx.q
    abcd = np.indices((q, q, q, q)).reshape(4, -1).T.astype(np.int64)
    a, b, c, d = abcd.T
    dets = ctx.mul_array(a, d) ^ ctx.mul_array(b, c)
    return abcd[dets != 0]


def parabolic_elements(ctx: FieldCtx, n: int) -> np.ndarray:
    """P⁺(2n,q) = {[[A, AB], [0, ᵗA⁻¹]]} стопкой (N, 2n, 2n)."""
    q = ctx.q
    if n == 1:
        a = np.arange(1, q, dtype=np.int64)
        out = np.zeros((q - 1, 2, 2), dtype=np.int64)
        out[:, 0, 0] = a
        out[:, 1, 1] = ctx.inv_table[a]
        return out
    if n != 2:
        raise PreconditionError(f"P⁺(2n,q) строится только при n ∈ {{1, 2}}, получено n={n}")
    if q > SO4_MAX_Q:
        raise ResourceError(f"P⁺(4,q) перечисляется при q ≤ {SO4_MAX_Q}")
    gl = _gl2_arrays(ctx)
    a, b, c, d = gl.T
    inv_det = ctx.inv_table[ctx.mul_array(a, d) ^ ctx.mul_array(b, c)]
    betas = np.arange(q, dtype=np.int64)
    count = len(gl) * q
    out = np.zeros((count, 4, 4), dtype=np.int64)
    rep = lambda x: np.repeat(x, q)  # noqa: E731
    beta = np.tile(betas, len(gl))
    out[:, 0, 0], out[:, 0, 1] = rep(a), rep(b)
    out[:, 1, 0], out[:, 1, 1] = rep(c), rep(d)
    out[:, 0, 2] = ctx.mul_array(rep(b), beta)
    out[:, 0, 3] = ctx.mul_array(rep(a), beta)
    out[:, 1, 2] = ctx.mul_array(rep(d), beta)
    out[:, 1, 3] = ctx.mul_array(rep(c), beta)
    out[:, 2, 2] = rep(ctx.mul_array(inv_det, d))
    out[:, 2, 3] = rep(ctx.mul_array(inv_det, c))
    out[:, 3, 2] = rep(ctx.mul_array(inv_det, b))
    out[:, 3, 3] = rep(ctx.mul_array(inv_det, a))
    return out.astype(np.uint8)


def _levi(ctx: FieldCtx, a: Matrix) -> Matrix:
    """diag(A, ᵗA⁻¹) для A ∈ GL(2,q)."""
    (x, y), (z, t) = a
    inv_det = ctx.inv(ctx.mul(x, t) ^ ctx.mul(y, z))
    at_inv = ((ctx.mul(inv_det, t), ctx.mul(inv_det, z)), (ctx.mul(inv_det, y), ctx.mul(inv_det, x)))
    return (
        (x, y, 0, 0),
        (z, t, 0, 0),
        (0, 0) + at_inv[0],
        (0, 0) + at_inv[1],
    )


def _generators(ctx: FieldCtx, with_sigma1: bool) -> list[Matrix]:
    zeta = ctx.generator
    gens = [_levi(ctx, a) for a in (((zeta, 0), (0, 1)), ((1, 1), (0, 1)), ((0, 1), (1, 0)))]
    gens.append(((1, 0, 0, 1), (0, 1, 1, 0), (0, 0, 1, 0), (0, 0, 0, 1)))
    gens.append(sigma(2, 2))
    if with_sigma1:
        gens.append(sigma(2, 1))
    return gens


def _subspace_key(ctx: FieldCtx, t: Matrix) -> Matrix:
    """Канонический вид подпространства t·span(e1, e2)."""
    return rref(ctx, tuple(tuple(t[i][j] for i in range(4)) for j in range(2)))


def coset_transversal(ctx: FieldCtx, with_sigma1: bool = False, reverse: bool = False) -> list[Matrix]:
    """Представители t_k левых смежных классов по P⁺ обходом орбиты span(e1, e2)."""
    gens = _generators(ctx, with_sigma1)
    if reverse:
        gens = gens[::-1]
    start = mat_identity(4)
    seen = {_subspace_key(ctx, start): start}
    frontier = deque([start])
    while frontier:
        t = frontier.popleft()
        for g in gens:
            nt = mat_mul(ctx, g, t)
            key = _subspace_key(ctx, nt)
            if key not in seen:
                seen[key] = nt
                frontier.append(nt)
    return list(seen.values())


# --- переписи

@dataclass(frozen=True)
class GroupCensus:
    ctx: FieldCtx
    group: str
    order: int
    traces: np.ndarray = field(repr=False)
    elements: np.ndarray | None = field(default=None, repr=False)
    histogram: dict[int, int] = field(default_factory=dict, repr=False)
    dickson_counts: dict[int, int] = field(default_factory=dict)
    method: str = "direct"

    @property
    def n(self) -> int:
        return 1 if self.group in ("so2", "o2") else 2

    def element(self, k: int) -> GroupElement:
        if self.elements is None:
            raise PreconditionError("перепись построена без хранения элементов")
        return GroupElement.from_packed(int(self.elements[k]), self.ctx.q, self.n)


def _histogram(q: int, traces: np.ndarray) -> dict[int, int]:
    counts = np.bincount(traces.astype(np.int64), minlength=q)
    return {beta: int(c) for beta, c in enumerate(counts)}


def assemble_census(ctx: FieldCtx, group: str, packed: np.ndarray, traces: np.ndarray,
                    dicksons: np.ndarray | None, store_elements: bool, method: str) -> GroupCensus:
    """Сортирует элементы, проверяет отсутствие повторов и порядок группы по формуле."""
    order_idx = np.argsort(packed, kind="stable")
    packed = packed[order_idx]
    traces = traces[order_idx]
    if len(packed) > 1 and not (np.diff(packed) > 0).all():
        raise ConsistencyError(f"в переписи {group} над GF({ctx.q}) есть повторяющиеся элементы")
    n = 1 if group in ("so2", "o2") else 2
    expected = group_order_formula(ctx.q, n, "SO" if group.startswith("so") else "O")
    if len(packed) != expected:
        raise ConsistencyError(f"|{group}| = {len(packed)}, а формула даёт {expected}")
    dickson_counts = {}
    if dicksons is not None:
        ones = int(np.count_nonzero(dicksons))
        dickson_counts = {0: len(packed) - ones, 1: ones}
    return GroupCensus(
        ctx=ctx,
        group=group,
        order=len(packed),
        traces=traces,
        elements=packed if store_elements else None,
        histogram=_histogram(ctx.q, traces),
        dickson_counts=dickson_counts,
        method=method,
    )


def so_plus_2_elements(ctx: FieldCtx, store_elements: bool = True) -> GroupCensus:
    """SO⁺(2,q) = {diag(a, a⁻¹)}."""
    mats = parabolic_elements(ctx, 1)
    traces = mats[:, 0, 0] ^ mats[:, 1, 1]
    return assemble_census(ctx, "so2", pack_matrices(mats, ctx.q), traces, np.zeros(len(mats), dtype=np.int64),
                   store_elements, "direct")


def o_plus_2_elements(ctx: FieldCtx, store_elements: bool = True) -> GroupCensus:
    """O⁺(2,q) = {diag(a, a⁻¹)} ∪ {antidiag(b, b⁻¹)}."""
    diag = parabolic_elements(ctx, 1)
    anti = np.zeros_like(diag)
    anti[:, 0, 1] = diag[:, 0, 0]
    anti[:, 1, 0] = diag[:, 1, 1]
    mats = np.concatenate([diag, anti])
    traces = mats[:, 0, 0] ^ mats[:, 1, 1]
    dicksons = np.concatenate([np.zeros(len(diag), dtype=np.int64), np.ones(len(anti), dtype=np.int64)])
    return assemble_census(ctx, "o2", pack_matrices(mats, ctx.q), traces, dicksons, store_elements, "direct")


def _enumerate_4(ctx: FieldCtx, group: str, store_elements: bool, threads: int, reverse: bool,
                 check_membership: bool) -> GroupCensus:
    transversal = coset_transversal(ctx, with_sigma1=group == "o4", reverse=reverse)
    parabolic = parabolic_elements(ctx, 2)
    logger.info(
        f"перечисление {group} над GF({ctx.q}): {len(transversal)} смежных классов по {len(parabolic)} элементов"
    )

    def coset(t: Matrix):
        mats = batch_mat_mul(ctx, np.array(t, dtype=np.uint8)[None], parabolic)
        if check_membership and not member_mask(ctx, mats).all():
            raise ConsistencyError(f"смежный класс {group} содержит матрицу вне O⁺(4,{ctx.q})")
        traces = np.bitwise_xor.reduce(np.diagonal(mats, axis1=1, axis2=2), axis=1)
        dicks = _dickson_array(ctx, mats)
        if dicks.max(initial=0) > 1:
            raise ConsistencyError("Tr(BᵗC) вышел за пределы GF(2)")
        if len(np.unique(dicks)) > 1:
            raise ConsistencyError("δ⁺ не постоянен на смежном классе по P⁺")
        return pack_matrices(mats, ctx.q), traces, dicks

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        parts = list(pool.map(coset, transversal))
    packed = np.concatenate([p for p, _, _ in parts])
    traces = np.concatenate([t for _, t, _ in parts])
    dicks = np.concatenate([d for _, _, d in parts])
    if group == "so4" and dicks.any():
        raise ConsistencyError("в SO⁺(4,q) попал элемент с δ⁺ = 1")
    census = assemble_census(ctx, group, packed, traces, dicks, store_elements, "coset-orbit")
    logger.info(f"{group} над GF({ctx.q}): {census.order} элементов")
    return census


def enumerate_so_plus_4(ctx: FieldCtx, store_elements: bool = False, threads: int = 1,
                        reverse: bool = False, check_membership: bool = True) -> GroupCensus:
    if ctx.q > SO4_MAX_Q:
        raise ResourceError(f"SO⁺(4,q) перечисляется при q ≤ {SO4_MAX_Q}, запрошено q={ctx.q}")
    return _enumerate_4(ctx, "so4", store_elements, threads, reverse, check_membership)


def enumerate_o_plus_4(ctx: FieldCtx, store_elements: bool = False, threads: int = 1,
                       reverse: bool = False, check_membership: bool = True) -> GroupCensus:
    if ctx.q > O4_MAX_Q:
        raise ResourceError(f"O⁺(4,q) перечисляется при q ≤ {O4_MAX_Q}, запрошено q={ctx.q}")
    return _enumerate_4(ctx, "o4", store_elements, threads, reverse, check_membership)


def build_census(ctx: FieldCtx, group: str, store_elements: bool = False, threads: int = 1) -> GroupCensus:
    if group == "so2":
        return so_plus_2_elements(ctx, store_elements)
    if group == "o2":
        return o_plus_2_elements(ctx, store_elements)
    if group == "so4":
        return enumerate_so_plus_4(ctx, store_elements, threads)
    if group == "o4":
        return enumerate_o_plus_4(ctx, store_elements, threads)
    raise PreconditionError(f"неизвестная группа {group!r}; допустимы {', '.join(GROUPS)}")


# --- гистограммы следов и суммы Гаусса

def trace_histogram(census: GroupCensus) -> dict[int, int]:
    return dict(census.histogram)


def trace_histogram_formula(ctx: FieldCtx, which: int) -> dict[int, int]:
    """n_i(β): число элементов G_i(q) со следом β, по явным формулам."""
    q = ctx.q
    if which not in (1, 2, 3):
        raise PreconditionError(f"which должно быть 1, 2 или 3, получено {which}")
    out = {}
    if which == 3:
        table = kloosterman_table(ctx).values
        out[0] = q ** 3 * (2 * q * q - q - 2)
        for beta in ctx.nonzero():
            out[beta] = q * q * (q * (q + 1) * (q - 2) + table[ctx.inv(beta)])
        return out
    out[0] = 1 if which == 1 else q
    for beta in ctx.nonzero():
        out[beta] = 2 if ctx.trace(ctx.inv(beta)) == 0 else 0
    return out


def gauss_sum_enumerated(census: GroupCensus, a: int) -> int:
    """Σ_w λ(a·Tr w) = Σ_β N(β) λ(aβ)."""
    ctx = census.ctx
    if not 0 < a < ctx.q:
        raise DomainError(f"a={a} должно быть ненулевым элементом GF({ctx.q})")
    return sum(count * ctx.lam(ctx.mul(a, beta)) for beta, count in census.histogram.items() if count)


def gl_order(q: int, k: int) -> int:
    order = 1
    for j in range(k):
        order *= q ** k - q ** j
    return order


def q_binomial(q: int, n: int, r: int) -> int:
    if not 0 <= r <= n:
        return 0
    num, den = 1, 1
    for j in range(r):
        num *= q ** (n - j) - 1
        den *= q ** (r - j) - 1
    if num % den:
        raise ConsistencyError(f"q-биномиальный коэффициент [{n} {r}] при q={q} нецелый")
    return num // den


def nonsingular_symmetric_count(q: int, r: int) -> int:
    """s_r: число невырожденных симметричных r×r матриц над F_q (s_0 = 1)."""
    if r == 0:
        return 1
    acc = 1
    if r % 2 == 0:
        for j in range(1, r // 2 + 1):
            acc *= q ** (2 * j - 1) - 1
        return q ** (r * (r + 2) // 4) * acc
    for j in range(1, (r + 1) // 2 + 1):
        acc *= q ** (2 * j - 1) - 1
    return q ** ((r * r - 1) // 4) * acc


def count_nonsingular_symmetric(ctx: FieldCtx, r: int) -> int:
    """Перебор всех симметричных r×r матриц; оракул для s_r."""
    free = r * (r + 1) // 2
    if ctx.q ** free > SYMMETRIC_BRUTE_BUDGET:
        raise ResourceError(f"перебор симметричных {r}×{r} над GF({ctx.q}) вне бюджета")
    slots = [(i, j) for i in range(r) for j in range(i, r)]
    count = 0
    for values in np.ndindex(*([ctx.q] * free)):
        rows = [[0] * r for _ in range(r)]
        for (i, j), v in zip(slots, values):
            rows[i][j] = rows[j][i] = int(v)
        if det(ctx, tuple(tuple(row) for row in rows)):
            count += 1
    return count


def group_order_formula(q: int, n: int, variant: str) -> int:
    if n < 1:
        raise PreconditionError("n должно быть положительным")
    if variant not in ("O", "SO"):
        raise PreconditionError(f"вариант {variant!r}: допустимы O и SO")
    order = 2 * q ** (n * n - n) * (q ** n - 1)
    for j in range(1, n):
        order *= q ** (2 * j) - 1
    return order if variant == "O" else order // 2


@dataclass(frozen=True)
class GaussFormulaParams:
    n: int
    q: int
    g: tuple[int, ...]
    s: tuple[int, ...]
    q_binomials: tuple[int, ...]
    parabolic_order: int
    a_orders: tuple[int, ...]
    coset_counts: tuple[int, ...]
    bruhat_order_sum: int


def gauss_formula_params(q: int, n: int) -> GaussFormulaParams:
    g = tuple(gl_order(q, k) for k in range(n + 1))
    s = tuple(nonsingular_symmetric_count(q, k) for k in range(n + 1))
    qb = tuple(q_binomial(q, n, r) for r in range(n + 1))
    cn2 = comb(n, 2)
    parabolic = q ** cn2 * g[n]
    a_orders = []
    for r in range(n + 1):
        e2 = 2 * cn2 + r * (2 * n - 3 * r + 1)
        if e2 < 0 or e2 % 2:
            raise ConsistencyError(f"|A_r⁺| при n={n}, r={r}: показатель степени q не целый неотрицательный")
        a_orders.append(g[r] * g[n - r] * q ** (e2 // 2))
    cosets = tuple(qb[r] * q ** comb(r, 2) for r in range(n + 1))
    for r in range(n + 1):
        if a_orders[r] * cosets[r] != parabolic:
            raise ConsistencyError(f"|A_r⁺|·|A_r⁺\\P⁺| ≠ |P⁺| при n={n}, r={r}")
    total = sum(q ** cn2 * g[n] * qb[r] * q ** comb(r, 2) for r in range(n + 1))
    if total != group_order_formula(q, n, "O"):
        raise ConsistencyError(f"сумма по клеткам Брюа {total} не равна |O⁺({2 * n},{q})|")
    return GaussFormulaParams(n, q, g, s, qb, parabolic, tuple(a_orders), cosets, total)


def gauss_sum_formula(ctx: FieldCtx, n: int, variant: str, a: int) -> int:
    """Σ_{w∈G} λ(a·Tr w) по разложению Брюа через s_r и K_GL(n−r)."""
    if not 1 <= n <= GAUSS_FORMULA_MAX_N:
        raise ResourceError(f"формула суммы Гаусса вычисляется при 1 ≤ n ≤ {GAUSS_FORMULA_MAX_N}")
    if variant not in ("O", "SO"):
        raise PreconditionError(f"вариант {variant!r}: допустимы O и SO")
    params = gauss_formula_params(ctx.q, n)
    q = ctx.q
    total = 0
    for r in range(n + 1):
        if variant == "SO" and r % 2:
            continue
        e2 = 2 * r * n - r * r - r
        total += params.q_binomials[r] * q ** (e2 // 2) * params.s[r] * kloosterman_gl(ctx, n - r, 1, scale=a)
    return q ** comb(n, 2) * total
