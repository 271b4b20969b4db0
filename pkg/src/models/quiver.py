"""Модель колчана без ориентированных циклов."""

from dataclasses import dataclass
from typing import List, Tuple


@dataclass(frozen=True)
class Quiver:
    """
    Конечный ациклический колчан.

    Атрибуты:
        vertex_count: Число вершин (индексы 0..n-1).
        arrows: Стрелки как пары (source, target) в порядке объявления.
        labels: Подписи вершин для вывода (например, "1", "2").
    """

    vertex_count: int
    arrows: Tuple[Tuple[int, int], ...]
    labels: Tuple[str, ...] = ()

    def label(self, vertex: int) -> str:
        if self.labels:
            return self.labels[vertex]
        return str(vertex + 1)

    def spec(self) -> str:
        """Текстовая запись в грамматике `i->j`, изолированные вершины отдельно."""
        parts = [f"{self.label(s)}->{self.label(t)}" for s, t in self.arrows]
        touched = {v for arrow in self.arrows for v in arrow}
        parts.extend(self.label(v) for v in range(self.vertex_count) if v not in touched)
        return ",".join(parts)

    def paths(self) -> List[Tuple[int, ...]]:
        """Все пути положительной длины как кортежи индексов стрелок."""
        result: List[Tuple[int, ...]] = []
        frontier = [(a,) for a in range(len(self.arrows))]
        while frontier:
            result.extend(frontier)
            extended = []
            for path in frontier:
                end = self.arrows[path[-1]][1]
                for a, (source, _) in enumerate(self.arrows):
                    if source == end:
                        extended.append(path + (a,))
            frontier = extended
        return result

    def doubled(self) -> "Quiver":
        """Колчан Q ⊔ Q' со стрелкой v → v' для каждой вершины (морфизмы как объекты)."""
        n = self.vertex_count
        arrows = (
            self.arrows
            + tuple((s + n, t + n) for s, t in self.arrows)
            + tuple((v, v + n) for v in range(n))
        )
        return Quiver(vertex_count=2 * n, arrows=arrows)
