"""Модель сессии командной строки: загруженная вселенная и именованные сущности."""

from dataclasses import dataclass, field
from typing import Dict

from src.models.structures import CotorsionPair, ExactStructure, ObjectClass
from src.models.universe import Universe


@dataclass
class Session:
    """
    Состояние одной команды CLI.

    Атрибуты:
        universe: Загруженная вселенная.
        structures: Именованные точные структуры (например, "d", "e").
        classes: Именованные классы объектов.
        pairs: Именованные пары кручения.
        output_format: "human" или "machine".

    Имена уникальны в пределах своего вида; обращение к отсутствующему имени — KeyError.
    """

    universe: Universe
    structures: Dict[str, ExactStructure] = field(default_factory=dict)
    classes: Dict[str, ObjectClass] = field(default_factory=dict)
    pairs: Dict[str, CotorsionPair] = field(default_factory=dict)
    output_format: str = "human"

    def _registry(self, kind: str) -> Dict:
        registries = {"structure": self.structures, "class": self.classes, "pair": self.pairs}
        if kind not in registries:
            raise KeyError(f"Unknown entity kind {kind!r}")
        return registries[kind]

    def add(self, kind: str, name: str, value) -> None:
        registry = self._registry(kind)
        if name in registry:
            raise ValueError(f"{kind} {name!r} is already defined")
        owner = value.a.universe if isinstance(value, CotorsionPair) else value.universe
        if owner is not self.universe:
            raise ValueError(f"{kind} {name!r} belongs to another universe")
        registry[name] = value

    def get(self, kind: str, name: str):
        registry = self._registry(kind)
        if name not in registry:
            raise KeyError(f"{kind} {name!r} is not defined")
        return registry[name]
