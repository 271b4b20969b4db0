"""Записи отчётов: аксиомы, законы, связи Галуа."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple


@dataclass(frozen=True)
class Violation:
    """
    Нарушение с полным свидетелем.

    Атрибуты:
        statement: Какое утверждение нарушено.
        witness: Сериализуемые данные свидетеля (индексы, имена, матрицы).
    """

    statement: str
    witness: Dict[str, Any]


@dataclass
class AxiomReport:
    """
    Результат проверки аксиом точной структуры.

    Атрибуты:
        structure: Описание структуры.
        checked: Число проверенных конфигураций.
        skipped: Число конфигураций за пределами запаса 2B.
        violations: Нарушения аксиом.
        warnings: Диагностика «obscure axiom» (не является ошибкой).
    """

    structure: str
    checked: int = 0
    skipped: int = 0
    violations: List[Violation] = field(default_factory=list)
    warnings: List[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class SkippedInstance:
    """
    Экземпляр закона, оставшийся без решения.

    Атрибуты:
        kind: Утверждение или гипотеза, которую не удалось решить.
        objects: Имена участвующих классов; пусто, если пропущена вся конфигурация.
    """

    kind: str
    objects: Tuple[str, ...] = ()


@dataclass
class LawReport:
    """
    Результат проверки одного закона на одной конфигурации параметров.

    Атрибуты:
        law: Имя закона.
        universe_id: Дайджест вселенной.
        parameters: Параметры (структуры, пары, порождающие множества).
        checked: Число проверенных экземпляров.
        skipped: Число пропущенных экземпляров.
        violations: Нарушения со свидетелями.
        notes: Причины пропусков (невыполненные гипотезы).
        skips: Пропущенные экземпляры; их число всегда равно skipped.
    """

    law: str
    universe_id: str
    parameters: Dict[str, str]
    checked: int = 0
    skipped: int = 0
    violations: List[Violation] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    skips: List[SkippedInstance] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass
class GaloisReport:
    """
    Проверка законов связей Галуа (Ψ, Ψ̃) и (Φ, Φ̃).

    Атрибуты:
        dpex: Описания элементов DPEx с порождающими подмножествами.
        diex: Описания элементов DIEx.
        dcot: Описания пар DCot.
        maps: Таблицы значений отображений: имя → список (аргумент, значение).
        laws: Закон → (число проверок, нарушения).
        hasse: Рёбра диаграмм Хассе по имени частично упорядоченного множества.
    """

    dpex: List[str] = field(default_factory=list)
    diex: List[str] = field(default_factory=list)
    dcot: List[str] = field(default_factory=list)
    maps: Dict[str, List[Tuple[str, str]]] = field(default_factory=dict)
    laws: Dict[str, Tuple[int, List[Violation]]] = field(default_factory=dict)
    hasse: Dict[str, List[Tuple[int, int]]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(not violations for _, violations in self.laws.values())


@dataclass
class BijectionReport:
    """
    Соответствие между DCot и Xu-структурами.

    Атрибуты:
        dcot_count: |DCot|.
        xu_proj_count: |Xu-DPEx|.
        xu_inj_count: |Xu-DIEx|.
        pairs: Тройки (пара, Xu-DPEx элемент, Xu-DIEx элемент) в виде описаний.
        violations: Нарушения взаимной обратности.
    """

    dcot_count: int
    xu_proj_count: int
    xu_inj_count: int
    pairs: List[Tuple[str, str, str]] = field(default_factory=list)
    violations: List[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        counts_agree = self.dcot_count == self.xu_proj_count == self.xu_inj_count
        return counts_agree and not self.violations


@dataclass
class XuReport:
    """
    Истинностные значения трёх эквивалентных утверждений о Xu-структуре.

    Атрибуты:
        side: "proj" или "inj".
        values: Значения утверждений (i), (ii), (iii); пусто, если предпосылка не выполнена.
        precondition_met: Найдены ли накрытия (оболочки) для всех неразложимых.
        reason: Причина пропуска.
    """

    side: str
    values: Tuple[bool, ...] = ()
    precondition_met: bool = True
    reason: Optional[str] = None

    @property
    def agrees(self) -> bool:
        return not self.precondition_met or len(set(self.values)) <= 1


@dataclass
class ComparisonReport:
    """
    Сравнение относительной и абсолютной оболочечности (накрываемости) класса.

    Атрибуты:
        side: "envelope" или "cover".
        relative: Каждый неразложимый объект имеет D-оболочку (D-накрытие) из класса.
        absolute: Каждый неразложимый объект имеет абсолютную оболочку (накрытие).
        contains_extremes: Inj(D) ⊆ класса (для накрытий — Proj(D) ⊆ класса).
        witnesses: Объекты без относительной аппроксимации.
        skipped: Объекты без абсолютной аппроксимации внутри вселенной.
    """

    side: str
    relative: bool
    absolute: bool
    contains_extremes: bool
    witnesses: List[int] = field(default_factory=list)
    skipped: List[int] = field(default_factory=list)

    @property
    def agrees(self) -> bool:
        return self.relative == (self.absolute and self.contains_extremes)
