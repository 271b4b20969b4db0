"""Точные структуры, классы объектов, пары кручения и свидетели аппроксимаций."""

from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional, Tuple

from src.models.representation import Morphism
from src.models.universe import Universe

PROVENANCE_KINDS = (
    "split",
    "maximal",
    "proj_gen",
    "inj_gen",
    "intersection",
    "extensional",
)


@dataclass(frozen=True)
class Provenance:
    """
    Происхождение точной структуры.

    Атрибуты:
        kind: Один из PROVENANCE_KINDS.
        generators: Индексы неразложимых классов M для proj_gen / inj_gen.
        parents: Базовая структура (proj_gen, inj_gen) или две структуры (intersection).
    """

    kind: str
    generators: Tuple[int, ...] = ()
    parents: Tuple["ExactStructure", ...] = ()

    def describe(self, universe: Universe) -> str:
        if self.kind in ("split", "maximal", "extensional"):
            return {"split": "split", "maximal": "max"}.get(self.kind, "extensional")
        if self.kind == "intersection":
            left, right = (p.provenance.describe(universe) for p in self.parents)
            return f"meet({left},{right})"
        names = ",".join(universe.name_of(g) for g in self.generators) or "-"
        base = self.parents[0].provenance.describe(universe)
        prefix = "proj_gen" if self.kind == "proj_gen" else "inj_gen"
        return f"{prefix}:{names}" if base == "max" else f"{prefix}[{base}]:{names}"


@dataclass(frozen=True)
class ExactStructure:
    """
    Точная структура как множество орбит конфляций вселенной.

    Атрибуты:
        universe: Вселенная (не участвует в сравнении).
        orbits: Номера орбит; равенство структур — равенство этих множеств.
        provenance: Происхождение (метаданные, не участвуют в сравнении).
    """

    universe: Universe = field(compare=False, repr=False)
    orbits: FrozenSet[int]
    provenance: Provenance = field(compare=False)

    def __contains__(self, orbit_id: int) -> bool:
        return orbit_id in self.orbits


@dataclass(frozen=True)
class ObjectClass:
    """
    Класс объектов: множество индексов хранимых классов изоморфизма.

    Атрибуты:
        universe: Вселенная (не участвует в сравнении).
        members: Индексы классов.
        skipped: Число пар, оставшихся нерешёнными из-за границы (не участвует в сравнении).
    """

    universe: Universe = field(compare=False, repr=False)
    members: FrozenSet[int]
    skipped: int = field(default=0, compare=False)

    def __contains__(self, index: int) -> bool:
        return index in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> List[int]:
        return sorted(self.members)

    def names(self) -> List[str]:
        return [self.universe.name_of(i) for i in self.sorted()]

    def issubset(self, other: "ObjectClass") -> bool:
        return self.members <= other.members


@dataclass(frozen=True)
class CotorsionPair:
    """
    D-пара кручения (𝒜, ℬ).

    Атрибуты:
        base: Структура D (не участвует в сравнении).
        a: Класс 𝒜.
        b: Класс ℬ.
    """

    base: ExactStructure = field(compare=False, repr=False)
    a: ObjectClass
    b: ObjectClass


@dataclass(frozen=True)
class Certificate:
    """Факторизация: морфизм class_member → x (или x → class_member) и его подъём."""

    member: int
    original: Morphism
    factor: Morphism


@dataclass(frozen=True)
class ApproxWitness:
    """
    Свидетель (пред)накрытия или (пред)оболочки.

    Атрибуты:
        kind: precover | cover | preenvelope | envelope.
        orbit: Номер орбиты, чей представитель даёт отображение.
        morphism: Дефляция Y ↠ X (накрытия) или инфляция X ↣ Y (оболочки).
        certificates: Факторизации базисных морфизмов через morphism.
    """

    kind: str
    orbit: int
    morphism: Morphism
    certificates: Tuple[Certificate, ...] = ()


@dataclass(frozen=True)
class BoundedVerdict:
    """
    Трёхзначный ответ в пределах вселенной.

    Атрибуты:
        value: True, False или None («неизвестно в пределах границы»).
        skipped: Индексы объектов, для которых решение не найдено.
    """

    value: Optional[bool]
    skipped: Tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.value is True

    def label(self) -> str:
        return {True: "yes", False: "no", None: "unknown-within-bound"}[self.value]


@dataclass
class StructurePoset:
    """
    Множество DPEx или DIEx относительно базовой структуры.

    Атрибуты:
        kind: "DPEx" или "DIEx".
        base: Базовая структура D.
        elements: Попарно различные (по множеству орбит) структуры.
        generating: Для каждого элемента — все порождающие подмножества неразложимых,
            первое из них — наименьшее в порядке перебора.
    """

    kind: str
    base: ExactStructure
    elements: List[ExactStructure] = field(default_factory=list)
    generating: List[List[Tuple[int, ...]]] = field(default_factory=list)


@dataclass
class CotorsionPoset:
    """
    Множество DCot: D-пары кручения, порядок (A₁,B₁) ≥ (A₂,B₂) ⇔ A₂ ⊇ A₁.

    Атрибуты:
        base: Базовая структура D.
        elements: Попарно различные пары.
        sources: Для каждой пары — способы её получения ("gen:{...}", "cogen:{...}").
    """

    base: ExactStructure
    elements: List[CotorsionPair] = field(default_factory=list)
    sources: List[List[str]] = field(default_factory=list)
