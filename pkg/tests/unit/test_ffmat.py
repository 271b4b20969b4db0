"""Юнит-тесты линейной алгебры над F_p."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.services import ffmat
from src.services.ffmat import FieldMatrixError

PRIMES = st.sampled_from([2, 3, 5, 7])


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    p = draw(PRIMES)
    rows = draw(st.integers(min_value=1, max_value=max_rows))
    cols = draw(st.integers(min_value=1, max_value=max_cols))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols))
    return ffmat.as_matrix(entries, p, (rows, cols)), p


@st.composite
def square_matrices(draw, max_size=4):
    p = draw(PRIMES)
    n = draw(st.integers(min_value=1, max_value=max_size))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n))
    return ffmat.as_matrix(entries, p, (n, n)), p


class TestCheckPrime:
    """Проверка поддерживаемых характеристик."""

    def test_supported_prime_returned(self):
        """Поддерживаемое p возвращается без изменений."""
        assert ffmat.check_prime(3) == 3

    @pytest.mark.parametrize("p", [0, 1, 4, 11])
    def test_unsupported_prime_rejected(self, p):
        """Неподдерживаемое p отклоняется."""
        with pytest.raises(FieldMatrixError, match="Unsupported field prime"):
            ffmat.check_prime(p)


class TestAsMatrix:
    """Проверка приведения данных к матрице."""

    def test_entries_reduced_mod_p(self):
        """Элементы приводятся в диапазон [0, p)."""
        m = ffmat.as_matrix([[3, -1], [5, 2]], 3)
        assert m.tolist() == [[0, 2], [2, 2]]
        assert m.dtype == np.int64

    def test_vector_rejected(self):
        """Одномерные данные без формы отклоняются."""
        with pytest.raises(FieldMatrixError, match="2-dimensional"):
            ffmat.as_matrix([1, 2, 3], 5)


class TestRref:
    """Свойства приведённой ступенчатой формы."""

    @settings(max_examples=60, deadline=None)
    @given(matrices())
    def test_rref_is_idempotent(self, data):
        """Повторное приведение не меняет форму."""
        m, p = data
        reduced, rank, pivots = ffmat.rref(m, p)
        again, rank_again, pivots_again = ffmat.rref(reduced, p)
        assert np.array_equal(reduced, again)
        assert rank == rank_again == len(pivots)
        assert pivots == pivots_again

    @settings(max_examples=60, deadline=None)
    @given(matrices())
    def test_pivot_columns_are_unit_vectors(self, data):
        """Ведущие столбцы — единичные векторы."""
        m, p = data
        reduced, rank, pivots = ffmat.rref(m, p)
        for row, col in enumerate(pivots):
            expected = np.zeros(m.shape[0], dtype=np.int64)
            expected[row] = 1
            assert np.array_equal(reduced[:, col], expected)

    def test_known_rank(self):
        """Ранг известной матрицы над F_2 и F_3 различается."""
        m = np.array([[1, 1], [1, 2]], dtype=np.int64)
        assert ffmat.rank(m, 3) == 2
        assert ffmat.rank(np.mod(m, 2), 2) == 1


class TestKernelBasis:
    """Проверка базиса ядра."""

    @settings(max_examples=60, deadline=None)
    @given(matrices())
    def test_rank_nullity(self, data):
        """dim ker = cols − rank, и все векторы лежат в ядре."""
        m, p = data
        basis = ffmat.kernel_basis(m, p)
        assert len(basis) == m.shape[1] - ffmat.rank(m, p)
        for vector in basis:
            assert not np.any(np.mod(m @ vector, p))
        if basis:
            assert ffmat.rank(ffmat.stack_vectors(basis, m.shape[1]), p) == len(basis)


class TestSolveAll:
    """Проверка решения линейных систем."""

    @settings(max_examples=60, deadline=None)
    @given(matrices(), st.data())
    def test_consistent_system_solved(self, data, draw):
        """Для B = A·X0 решение находится и проверяется подстановкой."""
        a, p = data
        x0 = ffmat.as_matrix(
            draw.draw(st.lists(st.integers(0, p - 1), min_size=a.shape[1], max_size=a.shape[1])),
            p,
            (a.shape[1], 1),
        )
        b = ffmat.matmul(a, x0, p)
        solved = ffmat.solve_all(a, b, p)
        assert solved is not None
        particular, homogeneous = solved
        assert np.array_equal(ffmat.matmul(a, particular, p), b)
        for h in homogeneous:
            assert not np.any(ffmat.matmul(a, h, p))

    def test_inconsistent_system_returns_none(self):
        """Несовместная система даёт None."""
        a = np.array([[1], [1]], dtype=np.int64)
        b = np.array([[0], [1]], dtype=np.int64)
        assert ffmat.solve_all(a, b, 2) is None

    def test_row_mismatch_rejected(self):
        """Разное число строк — ошибка."""
        with pytest.raises(FieldMatrixError, match="Row count mismatch"):
            ffmat.solve_all(ffmat.identity(2), ffmat.zeros(3, 1), 5)


class TestIsInvertible:
    """Проверка обращения матриц."""

    @settings(max_examples=60, deadline=None)
    @given(square_matrices())
    def test_inverse_verified(self, data):
        """Обратная существует ровно при полном ранге и даёт единицу."""
        m, p = data
        ok, inverse = ffmat.is_invertible(m, p)
        assert ok == (ffmat.rank(m, p) == m.shape[0])
        if ok:
            assert np.array_equal(ffmat.matmul(m, inverse, p), ffmat.identity(m.shape[0]))
            assert np.array_equal(ffmat.matmul(inverse, m, p), ffmat.identity(m.shape[0]))

    def test_rectangular_not_invertible(self):
        """Прямоугольная матрица необратима."""
        assert ffmat.is_invertible(ffmat.zeros(2, 3), 2) == (False, None)

    def test_gl2_f2_exhaustive(self):
        """Перебором: |GL_2(F_2)| = 6."""
        count = 0
        for entries in itertools.product(range(2), repeat=4):
            ok, _ = ffmat.is_invertible(ffmat.as_matrix(entries, 2, (2, 2)), 2)
            count += ok
        assert count == 6


class TestBatchRank:
    """Пакетный ранг совпадает с поштучным."""

    @settings(max_examples=30, deadline=None)
    @given(PRIMES, st.integers(1, 4), st.integers(1, 4), st.data())
    def test_matches_single_rank(self, p, rows, cols, draw):
        """Ранги пачки равны рангам по отдельности."""
        count = draw.draw(st.integers(1, 6))
        entries = draw.draw(
            st.lists(st.integers(0, p - 1), min_size=count * rows * cols, max_size=count * rows * cols)
        )
        stack = np.array(entries, dtype=np.int64).reshape(count, rows, cols)
        expected = [ffmat.rank(stack[k], p) for k in range(count)]
        assert ffmat.batch_rank(stack, p).tolist() == expected

    def test_exhaustive_f2_2x2(self):
        """Все 16 матриц 2 × 2 над F_2."""
        stack = np.array(list(itertools.product(range(2), repeat=4)), dtype=np.int64).reshape(16, 2, 2)
        ranks = ffmat.batch_rank(stack, 2).tolist()
        assert ranks.count(0) == 1
        assert ranks.count(2) == 6
        assert ranks.count(1) == 9
