"""Представления колчана, морфизмы и конфляции над F_p."""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from src.models.quiver import Quiver


def _frozen(matrix: np.ndarray) -> np.ndarray:
    matrix = np.array(matrix, dtype=np.int64, copy=True)
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True, eq=False)
class Representation:
    """
    Конечномерное представление колчана над F_p.

    Атрибуты:
        quiver: Колчан.
        p: Характеристика поля.
        dims: Вектор размерностей по вершинам.
        maps: Для каждой стрелки a: i→j матрица формы dims[j] × dims[i].

    Равенство и хэш считаются по точным матрицам (не по изоморфизму).
    """

    quiver: Quiver
    p: int
    dims: Tuple[int, ...]
    maps: Tuple[np.ndarray, ...]
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        maps = tuple(_frozen(m) for m in self.maps)
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        key = (
            self.quiver,
            self.p,
            self.dims,
            tuple(m.tobytes() for m in maps),
        )
        object.__setattr__(self, "_key", key)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def key(self) -> tuple:
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, Representation) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)


@dataclass(frozen=True, eq=False)
class Morphism:
    """
    Морфизм представлений: семейство матриц по вершинам.

    Атрибуты:
        source: Источник.
        target: Цель.
        components: Для вершины i матрица формы target.dims[i] × source.dims[i].
    """

    source: Representation
    target: Representation
    components: Tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "components", tuple(_frozen(c) for c in self.components)
        )

    def key(self) -> tuple:
        return (
            self.source.key(),
            self.target.key(),
            tuple(c.tobytes() for c in self.components),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Morphism) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


@dataclass(frozen=True)
class Conflation:
    """
    Пара ядро–коядро X ↣ Y ↠ Z.

    Атрибуты:
        inflation: Мономорфизм X → Y.
        deflation: Эпиморфизм Y → Z.
    """

    inflation: Morphism
    deflation: Morphism

    @property
    def x(self) -> Representation:
        return self.inflation.source

    @property
    def y(self) -> Representation:
        return self.inflation.target

    @property
    def z(self) -> Representation:
        return self.deflation.target
