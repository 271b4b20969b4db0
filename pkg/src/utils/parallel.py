"""Настройка пула потоков для переборов с детерминированным порядком результатов."""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

logger = logging.getLogger(__name__)

THREADS_ENV = "EXACT_LAB_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def thread_count(environ: Optional[dict] = None) -> int:
    """
    Число рабочих потоков из переменной окружения EXACT_LAB_THREADS.

    Returns:
        Положительное целое; 1, если переменная не задана или некорректна.
    """
    environ = os.environ if environ is None else environ
    raw = environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {THREADS_ENV}={raw!r}")
        return 1
    if value < 1:
        logger.warning(f"Ignoring non-positive {THREADS_ENV}={value}")
        return 1
    return value


def ordered_map(func: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """
    Применить func к каждому элементу; порядок результатов совпадает с порядком items.

    При одном потоке вычисление идёт последовательно в текущем потоке.
    """
    items = list(items)
    workers = thread_count()
    if workers == 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
