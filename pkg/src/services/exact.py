"""Точные структуры: конструкторы, порядок, пересечение, проверка аксиом, Proj/Inj."""

import logging
from typing import Callable, Iterable, List, Optional, Tuple

from src.models.representation import Conflation, Morphism
from src.models.reports import AxiomReport, Violation
from src.models.structures import ExactStructure, ObjectClass, Provenance
from src.models.universe import Universe
from src.services import repcat, universe_builder
from src.services.universe_builder import BoundaryError
from src.utils.parallel import ordered_map

logger = logging.getLogger(__name__)


class ExactStructureError(Exception):
    """Исключение для некорректных операций с точными структурами."""

    pass


def same_universe(*items) -> Universe:
    universe = items[0].universe
    if any(item.universe is not universe for item in items[1:]):
        raise ExactStructureError("Operands belong to different universes")
    return universe


# Классы объектов


def object_class(universe: Universe, members: Iterable[int], skipped: int = 0) -> ObjectClass:
    return ObjectClass(universe=universe, members=frozenset(members), skipped=skipped)


def all_objects(universe: Universe) -> ObjectClass:
    return object_class(universe, range(len(universe.objects)))


def additive_class(universe: Universe, indecomposables: Iterable[int], skipped: int = 0) -> ObjectClass:
    """Класс add(M): конечные прямые суммы данных неразложимых, хранимые во вселенной."""
    return object_class(
        universe, universe_builder.additive_members(universe, list(indecomposables)), skipped
    )


def generators(m: ObjectClass) -> Tuple[int, ...]:
    """Неразложимые слагаемые членов класса."""
    return universe_builder.indecomposable_parts(m.universe, m.members)


# Конструкторы


def split_structure(universe: Universe) -> ExactStructure:
    """Минимальная структура: расщепимые конфляции."""
    orbits = frozenset(c.id for c in universe.conflations if c.splits)
    return ExactStructure(universe=universe, orbits=orbits, provenance=Provenance("split"))


def maximal_structure(universe: Universe) -> ExactStructure:
    """Максимальная структура: все пары ядро–коядро."""
    orbits = frozenset(c.id for c in universe.conflations)
    return ExactStructure(universe=universe, orbits=orbits, provenance=Provenance("maximal"))


def extensional(universe: Universe, orbits: Iterable[int]) -> ExactStructure:
    """Структура, заданная только множеством орбит (без правила членства вне границы)."""
    return ExactStructure(
        universe=universe, orbits=frozenset(orbits), provenance=Provenance("extensional")
    )


def _lifts(universe: Universe, gens: Tuple[int, ...], deflation: Morphism) -> bool:
    return all(repcat.lifting_surjective(universe.objects[g], deflation) for g in gens)


def _extends(universe: Universe, gens: Tuple[int, ...], inflation: Morphism) -> bool:
    return all(repcat.extension_surjective(universe.objects[g], inflation) for g in gens)


def proj_generate(d: ExactStructure, m: ObjectClass) -> ExactStructure:
    """
    Структура π⁻¹_D(M): конфляции D, относительно которых все M ∈ M обладают
    свойством поднятия (Hom(M, Y) → Hom(M, Z) сюръективно).

    Зависит только от неразложимых слагаемых членов M.
    """
    universe = same_universe(d, m)
    gens = generators(m)
    orbits = frozenset(
        orbit
        for orbit in d.orbits
        if _lifts(universe, gens, universe.conflations[orbit].deflation)
    )
    return ExactStructure(
        universe=universe,
        orbits=orbits,
        provenance=Provenance("proj_gen", generators=gens, parents=(d,)),
    )


def inj_generate(d: ExactStructure, m: ObjectClass) -> ExactStructure:
    """Структура ι⁻¹_D(M): двойственно, через свойство продолжения Hom(Y, M) → Hom(X, M)."""
    universe = same_universe(d, m)
    gens = generators(m)
    orbits = frozenset(
        orbit
        for orbit in d.orbits
        if _extends(universe, gens, universe.conflations[orbit].inflation)
    )
    return ExactStructure(
        universe=universe,
        orbits=orbits,
        provenance=Provenance("inj_gen", generators=gens, parents=(d,)),
    )


def intersect(e1: ExactStructure, e2: ExactStructure) -> ExactStructure:
    universe = same_universe(e1, e2)
    return ExactStructure(
        universe=universe,
        orbits=e1.orbits & e2.orbits,
        provenance=Provenance("intersection", parents=(e1, e2)),
    )


def leq(e1: ExactStructure, e2: ExactStructure) -> bool:
    """e1 ≤ e2: каждая e1-конфляция является e2-конфляцией."""
    same_universe(e1, e2)
    return e1.orbits <= e2.orbits


def describe(e: ExactStructure) -> str:
    return e.provenance.describe(e.universe)


# Членство произвольных конфляций


def contains(e: ExactStructure, conflation: Conflation) -> Optional[bool]:
    """
    Лежит ли конфляция (возможно, за границей вселенной) в структуре.

    Правило членства выводится из происхождения структуры.

    Returns:
        True / False, либо None, если для экстенсиональной структуры средний
        объект больше границы.
    """
    universe = e.universe
    provenance = e.provenance
    if provenance.kind == "maximal":
        return True
    if provenance.kind == "split":
        return repcat.splits(conflation)
    if provenance.kind in ("proj_gen", "inj_gen"):
        base = contains(provenance.parents[0], conflation)
        if base is False:
            return False
        if provenance.kind == "proj_gen":
            ok = _lifts(universe, provenance.generators, conflation.deflation)
        else:
            ok = _extends(universe, provenance.generators, conflation.inflation)
        return base if ok else False
    if provenance.kind == "intersection":
        answers = [contains(parent, conflation) for parent in provenance.parents]
        if False in answers:
            return False
        return None if None in answers else True
    try:
        return universe_builder.orbit_of(universe, conflation.inflation) in e.orbits
    except BoundaryError:
        return None


def membership_key(e: ExactStructure) -> tuple:
    """Ключ правила членства: множество орбит и рекурсивное происхождение."""
    provenance = e.provenance
    return (
        e.orbits,
        provenance.kind,
        provenance.generators,
        tuple(membership_key(parent) for parent in provenance.parents),
    )


def ext_status(d: ExactStructure, z: int, x: int) -> Optional[bool]:
    """
    Ext¹_D(Z, X) = 0 для неразложимых Z, X: перебор ненулевых классов расширений.

    Returns:
        True (обращается в нуль), False, или None (нерешаемо внутри вселенной).
    """
    universe = d.universe
    key = ("ext", membership_key(d), z, x)
    if key in universe.cache:
        return universe.cache[key]
    status: Optional[bool] = True
    classes = repcat.extension_classes(universe.objects[z], universe.objects[x])
    for conflation in classes[1:]:
        member = contains(d, conflation)
        if member is True:
            status = False
            break
        if member is None:
            status = None
    universe.cache[key] = status
    return status


def additive_scan(
    universe: Universe,
    keep: Callable[[int, int], Optional[bool]],
    others: Optional[Iterable[int]] = None,
) -> ObjectClass:
    """
    Неразложимые X, для которых keep(X, C) не равно False ни для одного C из others
    (по умолчанию все неразложимые); результат продолжается аддитивно.
    Ответ None считается пропущенной парой.
    """
    indecomposables = universe.indecomposables
    others = indecomposables if others is None else list(others)

    def scan(candidate: int) -> Tuple[bool, int]:
        skipped = 0
        for other in others:
            status = keep(candidate, other)
            if status is False:
                return False, skipped
            if status is None:
                skipped += 1
        return True, skipped

    results = ordered_map(scan, indecomposables)
    members = [i for i, (ok, _) in zip(indecomposables, results) if ok]
    return additive_class(universe, members, sum(s for _, s in results))


def proj_objects(e: ExactStructure) -> ObjectClass:
    """Proj(E): Ext¹_E(X, −) = 0 (все E-конфляции с концом X расщепляются)."""
    return additive_scan(e.universe, lambda x, c: ext_status(e, x, c))


def inj_objects(e: ExactStructure) -> ObjectClass:
    """Inj(E): Ext¹_E(−, X) = 0."""
    return additive_scan(e.universe, lambda x, c: ext_status(e, c, x))


def _lifting_projective(e: ExactStructure, x: int) -> bool:
    universe = e.universe
    rep = universe.objects[x]
    for orbit in sorted(e.orbits):
        if not repcat.lifting_surjective(rep, universe.conflations[orbit].deflation):
            return False
    for c in universe.indecomposables:
        for conflation in repcat.extension_classes(rep, universe.objects[c])[1:]:
            if contains(e, conflation) and not repcat.lifting_surjective(rep, conflation.deflation):
                return False
    return True


def _extension_injective(e: ExactStructure, x: int) -> bool:
    universe = e.universe
    rep = universe.objects[x]
    for orbit in sorted(e.orbits):
        if not repcat.extension_surjective(rep, universe.conflations[orbit].inflation):
            return False
    for c in universe.indecomposables:
        for conflation in repcat.extension_classes(universe.objects[c], rep)[1:]:
            if contains(e, conflation) and not repcat.extension_surjective(rep, conflation.inflation):
                return False
    return True


def proj_objects_by_lifting(e: ExactStructure) -> ObjectClass:
    """Proj(E) через свойство поднятия относительно всех E-дефляций."""
    universe = e.universe
    return additive_class(
        universe, [x for x in universe.indecomposables if _lifting_projective(e, x)]
    )


def inj_objects_by_extension(e: ExactStructure) -> ObjectClass:
    """Inj(E) через свойство продолжения вдоль всех E-инфляций."""
    universe = e.universe
    return additive_class(
        universe, [x for x in universe.indecomposables if _extension_injective(e, x)]
    )


# Аксиомы


class _Tally:
    def __init__(self) -> None:
        self.checked = 0
        self.skipped = 0
        self.violations: List[Violation] = []
        self.warnings: List[Violation] = []

    def merge(self, other: "_Tally") -> None:
        self.checked += other.checked
        self.skipped += other.skipped
        self.violations.extend(other.violations)
        self.warnings.extend(other.warnings)


def _orbit_in(e: ExactStructure, inflation: Morphism, tally: _Tally) -> Optional[bool]:
    try:
        found = universe_builder.orbit_of(e.universe, inflation)
    except BoundaryError:
        tally.skipped += 1
        return None
    tally.checked += 1
    return found in e.orbits


def _check_e0(e: ExactStructure, tally: _Tally) -> None:
    universe = e.universe
    for index in range(len(universe.objects)):
        for x, y, z in ((0, index, index), (index, index, 0)):
            tally.checked += 1
            if not any(c.id in e.orbits for c in universe.orbits_with(x=x, y=y, z=z)):
                tally.violations.append(
                    Violation(
                        "E0",
                        {
                            "object": universe.name_of(index),
                            "missing": f"{universe.name_of(x)} -> {universe.name_of(y)} -> {universe.name_of(z)}",
                        },
                    )
                )


def _check_orbit(e: ExactStructure, orbit: int) -> _Tally:
    """E1, E1op, E2, E2op для одной орбиты структуры."""
    universe = e.universe
    record = universe.conflations[orbit]
    tally = _Tally()
    objects = universe.objects

    for w in range(len(objects)):
        for second, second_orbit in universe_builder.deflation_table(universe, record.z, w):
            if second_orbit not in e.orbits:
                continue
            composite = repcat.compose(second, record.deflation)
            _, inclusion = repcat.kernel(composite)
            if _orbit_in(e, inclusion, tally) is False:
                tally.violations.append(
                    Violation(
                        "E1",
                        {
                            "first_orbit": orbit,
                            "second_orbit": second_orbit,
                            "second_deflation": repcat.morphism_payload(second),
                            "composite": repcat.morphism_payload(composite),
                        },
                    )
                )
        for second, second_orbit in universe_builder.inflation_table(universe, record.y, w):
            if second_orbit not in e.orbits:
                continue
            composite = repcat.compose(second, record.inflation)
            if _orbit_in(e, composite, tally) is False:
                tally.violations.append(
                    Violation(
                        "E1op",
                        {
                            "first_orbit": orbit,
                            "second_orbit": second_orbit,
                            "second_inflation": repcat.morphism_payload(second),
                            "composite": repcat.morphism_payload(composite),
                        },
                    )
                )

    for other in range(len(objects)):
        for g in repcat.all_morphisms(objects[other], objects[record.z]):
            _, _, projection = repcat.pullback(record.deflation, g)
            _, inclusion = repcat.kernel(projection)
            if _orbit_in(e, inclusion, tally) is False:
                tally.violations.append(
                    Violation(
                        "E2",
                        {
                            "orbit": orbit,
                            "along": repcat.morphism_payload(g),
                            "pulled_back_deflation": repcat.morphism_payload(projection),
                        },
                    )
                )
        for f in repcat.all_morphisms(objects[record.x], objects[other]):
            _, _, pushed = repcat.pushout(record.inflation, f)
            if _orbit_in(e, pushed, tally) is False:
                tally.violations.append(
                    Violation(
                        "E2op",
                        {
                            "orbit": orbit,
                            "along": repcat.morphism_payload(f),
                            "pushed_inflation": repcat.morphism_payload(pushed),
                        },
                    )
                )
    return tally


def _check_obscure(e: ExactStructure, orbit: int) -> _Tally:
    """Диагностика: i ∉ E, но j ∘ i — E-инфляция (и двойственно для дефляций)."""
    universe = e.universe
    record = universe.conflations[orbit]
    tally = _Tally()
    for w, target in enumerate(universe.objects):
        for j in repcat.all_morphisms(universe.objects[record.y], target):
            composite = repcat.compose(j, record.inflation)
            if not repcat.is_injective(composite):
                continue
            if _orbit_in(e, composite, tally):
                tally.warnings.append(
                    Violation("obscure", {"orbit": orbit, "completing_map": repcat.morphism_payload(j)})
                )
                return tally
        for q in repcat.all_morphisms(target, universe.objects[record.y]):
            composite = repcat.compose(record.deflation, q)
            if not repcat.is_surjective(composite):
                continue
            _, inclusion = repcat.kernel(composite)
            if _orbit_in(e, inclusion, tally):
                tally.warnings.append(
                    Violation("obscure_op", {"orbit": orbit, "completing_map": repcat.morphism_payload(q)})
                )
                return tally
    return tally


def axioms_check(e: ExactStructure) -> AxiomReport:
    """
    Проверить аксиомы точной структуры перебором конфигураций внутри вселенной.

    Проверяются:
    1. [E0] тождественные конфляции 0 → X → X и X → X → 0.
    2. [E1] композиция E-дефляций; [E1op] композиция E-инфляций.
    3. [E2] обратные образы E-дефляций вдоль всех морфизмов.
    4. [E2op] кодекартовы квадраты E-инфляций вдоль всех морфизмов.
    5. Диагностика «obscure axiom» (предупреждения, не нарушения).

    Returns:
        AxiomReport; конфигурации, чьи объекты выходят за границу, считаются пропущенными.
    """
    universe = e.universe
    logger.info(f"Checking exact structure axioms for {describe(e)}")
    tally = _Tally()
    _check_e0(e, tally)
    members = sorted(e.orbits)
    for part in ordered_map(lambda orbit: _check_orbit(e, orbit), members):
        tally.merge(part)
    outsiders = [c.id for c in universe.conflations if c.id not in e.orbits]
    for part in ordered_map(lambda orbit: _check_obscure(e, orbit), outsiders):
        tally.merge(part)
    if tally.warnings:
        logger.warning(f"Obscure-axiom diagnostic fired {len(tally.warnings)} times for {describe(e)}")
    if tally.skipped:
        logger.warning(f"Skipped {tally.skipped} configurations beyond the bound")
    return AxiomReport(
        structure=describe(e),
        checked=tally.checked,
        skipped=tally.skipped,
        violations=tally.violations,
        warnings=tally.warnings,
    )


def orbit_ids(e: ExactStructure) -> List[int]:
    return sorted(e.orbits)
