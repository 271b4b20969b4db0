"""Плотная линейная алгебра над простым полем F_p."""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.utils.validators import SUPPORTED_PRIMES

logger = logging.getLogger(__name__)


class FieldMatrixError(Exception):
    """Исключение для ошибок арифметики над F_p."""

    pass


def check_prime(p: int) -> int:
    """
    Проверить, что характеристика поддерживается.

    Raises:
        FieldMatrixError: если p не входит в SUPPORTED_PRIMES.
    """
    if p not in SUPPORTED_PRIMES:
        raise FieldMatrixError(
            f"Unsupported field prime {p}; expected one of {SUPPORTED_PRIMES}"
        )
    return p


def as_matrix(entries, p: int, shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
    """Привести данные к матрице int64 с элементами в [0, p)."""
    matrix = np.array(entries, dtype=np.int64)
    if shape is not None:
        matrix = matrix.reshape(shape)
    if matrix.ndim != 2:
        raise FieldMatrixError(f"Expected a 2-dimensional matrix, got shape {matrix.shape}")
    return np.mod(matrix, p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return np.mod(a @ b, p)


def inverse_table(p: int) -> np.ndarray:
    """Таблица обратных по модулю p (обратный к 0 условно равен 0)."""
    table = np.zeros(p, dtype=np.int64)
    for value in range(1, p):
        table[value] = pow(value, -1, p)
    return table


def rref(m: np.ndarray, p: int) -> Tuple[np.ndarray, int, List[int]]:
    """
    Приведённая ступенчатая форма над F_p.

    Ведущий элемент — первый ненулевой в столбце, начиная с текущей строки.

    Args:
        m: Матрица.
        p: Характеристика поля.

    Returns:
        (R, rank, pivot_columns).
    """
    reduced = np.mod(np.array(m, dtype=np.int64, copy=True), p)
    rows, cols = reduced.shape
    pivots: List[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        nonzero = np.nonzero(reduced[row:, col])[0]
        if nonzero.size == 0:
            continue
        pivot = row + int(nonzero[0])
        if pivot != row:
            reduced[[row, pivot]] = reduced[[pivot, row]]
        reduced[row] = np.mod(reduced[row] * pow(int(reduced[row, col]), -1, p), p)
        factors = reduced[:, col].copy()
        factors[row] = 0
        reduced = np.mod(reduced - np.outer(factors, reduced[row]), p)
        pivots.append(col)
        row += 1
    return reduced, row, pivots


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    return rref(m, p)[1]


def kernel_basis(m: np.ndarray, p: int) -> List[np.ndarray]:
    """Базис ядра как список векторов длины cols; размер равен cols − rank."""
    reduced, _, pivots = rref(m, p)
    cols = reduced.shape[1]
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        vector = np.zeros(cols, dtype=np.int64)
        vector[free] = 1
        for i, pivot_col in enumerate(pivots):
            vector[pivot_col] = (-reduced[i, free]) % p
        basis.append(vector)
    return basis


def solve_all(
    a: np.ndarray, b: np.ndarray, p: int
) -> Optional[Tuple[np.ndarray, List[np.ndarray]]]:
    """
    Решить AX = B над F_p.

    Args:
        a: Матрица системы.
        b: Правая часть с тем же числом строк.
        p: Характеристика поля.

    Returns:
        (частное решение, базис однородных решений) или None, если система несовместна.

    Raises:
        FieldMatrixError: если число строк a и b различается.
    """
    if a.shape[0] != b.shape[0]:
        raise FieldMatrixError(
            f"Row count mismatch: system has {a.shape[0]} rows, right side {b.shape[0]}"
        )
    n = a.shape[1]
    k = b.shape[1]
    reduced, _, pivots = rref(np.hstack([a, b]), p)
    if any(pivot_col >= n for pivot_col in pivots):
        return None
    particular = zeros(n, k)
    for i, pivot_col in enumerate(pivots):
        particular[pivot_col, :] = reduced[i, n:]
    homogeneous = []
    for j in range(k):
        for vector in kernel_basis(a, p):
            solution = zeros(n, k)
            solution[:, j] = vector
            homogeneous.append(solution)
    return particular, homogeneous


def is_invertible(m: np.ndarray, p: int) -> Tuple[bool, Optional[np.ndarray]]:
    """Обратима ли матрица; обратная проверяется умножением."""
    rows, cols = m.shape
    if rows != cols:
        return False, None
    if rows == 0:
        return True, zeros(0, 0)
    reduced, _, pivots = rref(np.hstack([m, identity(rows)]), p)
    if pivots[:rows] != list(range(rows)) or len(pivots) < rows:
        return False, None
    inverse = reduced[:, rows:]
    if not np.array_equal(matmul(m, inverse, p), identity(rows)):
        raise FieldMatrixError("Inverse verification failed")
    return True, inverse


def batch_rank(stack: np.ndarray, p: int) -> np.ndarray:
    """
    Ранги пачки матриц одинаковой формы (N, r, c) одновременным исключением Гаусса.

    Returns:
        Массив рангов длины N.
    """
    work = np.mod(np.array(stack, dtype=np.int64, copy=True), p)
    count, rows, cols = work.shape
    ranks = np.zeros(count, dtype=np.int64)
    if count == 0 or rows == 0 or cols == 0:
        return ranks
    inverses = inverse_table(p)
    row_index = np.arange(rows)
    for col in range(cols):
        candidates = (row_index[None, :] >= ranks[:, None]) & (work[:, :, col] != 0)
        active = np.nonzero(candidates.any(axis=1) & (ranks < rows))[0]
        if active.size == 0:
            continue
        pivot_rows = candidates[active].argmax(axis=1)
        current = ranks[active]
        pivot_data = work[active, pivot_rows].copy()
        work[active, pivot_rows] = work[active, current]
        work[active, current] = pivot_data
        scale = inverses[work[active, current, col]]
        work[active, current] = np.mod(work[active, current] * scale[:, None], p)
        factors = work[active, :, col].copy()
        factors[np.arange(active.size), current] = 0
        work[active] = np.mod(
            work[active] - factors[:, :, None] * work[active, current][:, None, :], p
        )
        ranks[active] += 1
    return ranks


def stack_vectors(vectors: Sequence[np.ndarray], length: int) -> np.ndarray:
    """Сложить векторы в строки матрицы (пустой список — матрица 0 × length)."""
    if not vectors:
        return zeros(0, length)
    return np.vstack([np.asarray(v, dtype=np.int64).reshape(1, -1) for v in vectors])
