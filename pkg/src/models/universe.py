"""Модель конечной вселенной классов объектов и орбит конфляций."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from src.models.quiver import Quiver
from src.models.representation import Morphism, Representation


@dataclass(frozen=True)
class CanonicalConflation:
    """
    Представитель орбиты конфляций X ↣ Y ↠ Z между хранимыми классами.

    Атрибуты:
        id: Номер орбиты.
        x: Индекс класса X.
        y: Индекс класса Y.
        z: Индекс класса Z.
        inflation: Представитель-мономорфизм между хранимыми объектами x → y.
        deflation: Согласованное коядро y → z (цель равна хранимому объекту z).
        splits: Расщепляется ли конфляция.
    """

    id: int
    x: int
    y: int
    z: int
    inflation: Morphism
    deflation: Morphism
    splits: bool


@dataclass
class Universe:
    """
    Все классы изоморфизма представлений суммарной размерности ≤ bound.

    Атрибуты:
        quiver: Колчан.
        p: Характеристика поля.
        bound: Граница суммарной размерности B.
        objects: Представители классов; objects[0] — нулевой объект.
        summands: Мультимножество неразложимых слагаемых каждого класса.
        names: Отображаемые имена классов.
        conflations: Таблица орбит конфляций.
        cache: Кэш вычислений (Hom, орбиты, Ext); не участвует в сравнении.
    """

    quiver: Quiver
    p: int
    bound: int
    objects: List[Representation]
    summands: List[Tuple[int, ...]]
    names: List[str]
    conflations: List[CanonicalConflation] = field(default_factory=list)
    cache: Dict[Any, Any] = field(default_factory=dict, repr=False, compare=False)

    @property
    def headroom(self) -> int:
        return 2 * self.bound

    @property
    def indecomposables(self) -> List[int]:
        return [i for i, parts in enumerate(self.summands) if parts == (i,)]

    @property
    def window(self) -> int:
        """Размерности, для которых относительная делимость решается внутри вселенной."""
        largest = max(
            (self.objects[i].total_dim for i in self.indecomposables), default=0
        )
        return max(self.bound - largest, 0)

    def name_of(self, index: int) -> str:
        return self.names[index]

    def index_of(self, name: str) -> Optional[int]:
        lookup = self.cache.get("name_index")
        if lookup is None:
            lookup = {n: i for i, n in enumerate(self.names)}
            self.cache["name_index"] = lookup
        return lookup.get(name)

    def orbits_with(
        self, x: Optional[int] = None, y: Optional[int] = None, z: Optional[int] = None
    ) -> List[CanonicalConflation]:
        """Орбиты с заданными концами (None — любой)."""
        key = ("orbits_with", x, y, z)
        found = self.cache.get(key)
        if found is None:
            found = [
                c
                for c in self.conflations
                if (x is None or c.x == x)
                and (y is None or c.y == y)
                and (z is None or c.z == z)
            ]
            self.cache[key] = found
        return found
