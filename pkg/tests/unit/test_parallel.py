"""Юнит-тесты пула потоков."""

import pytest

from src.utils import parallel
from src.utils.parallel import THREADS_ENV, ordered_map, thread_count


class TestThreadCount:
    """Проверка thread_count."""

    def test_default(self):
        assert thread_count({}) == 1

    def test_from_environment(self):
        assert thread_count({THREADS_ENV: "4"}) == 4

    @pytest.mark.parametrize("raw", ["many", "0", "-3", "  "])
    def test_invalid_values_fall_back(self, raw):
        assert thread_count({THREADS_ENV: raw}) == 1

    def test_reads_process_environment(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "2")
        assert thread_count() == 2


class TestOrderedMap:
    """Проверка ordered_map."""

    def test_sequential(self, monkeypatch):
        monkeypatch.delenv(THREADS_ENV, raising=False)
        assert ordered_map(lambda x: x * x, range(5)) == [0, 1, 4, 9, 16]

    def test_threaded_keeps_order(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "4")
        assert ordered_map(lambda x: -x, range(50)) == [-x for x in range(50)]

    def test_single_thread_skips_pool(self, monkeypatch, mocker):
        monkeypatch.setenv(THREADS_ENV, "1")
        pool = mocker.patch.object(parallel, "ThreadPoolExecutor")
        ordered_map(str, [1, 2, 3])
        pool.assert_not_called()

    def test_empty(self):
        assert ordered_map(str, []) == []
