"""Относительно делимые и плоские объекты, обращение Ext в нуль, ортогональные классы."""

import itertools
import logging
from typing import Dict, List, Optional, Tuple

from src.models.quiver import Quiver
from src.models.structures import ExactStructure, ObjectClass
from src.models.universe import Universe
from src.services import exact, repcat, universe_builder
from src.services.exact import contains, ext_status, membership_key
from src.services.universe_builder import BoundaryError

logger = logging.getLogger(__name__)


def ext_vanishes(d: ExactStructure, z: int, x: int) -> bool:
    """
    Ext¹_D(Z, X) = 0 для хранимых классов Z и X.

    Ext аддитивен по обоим аргументам, поэтому достаточно пар неразложимых слагаемых.

    Raises:
        BoundaryError: если ответ нельзя решить внутри вселенной.
    """
    universe = d.universe
    unknown = False
    for a in universe.summands[z]:
        for b in universe.summands[x]:
            status = ext_status(d, a, b)
            if status is False:
                return False
            if status is None:
                unknown = True
    if unknown:
        raise BoundaryError(
            f"Ext({universe.name_of(z)}, {universe.name_of(x)}) is undecidable within bound {universe.bound}"
        )
    return True


def ext_table(d: ExactStructure) -> Dict[Tuple[int, int], Optional[bool]]:
    """Таблица Ext¹_D(Z, X) = 0 по парам неразложимых (None — нерешаемо)."""
    indecomposables = d.universe.indecomposables
    return {(z, x): ext_status(d, z, x) for z in indecomposables for x in indecomposables}


def euler_form(quiver: Quiver, dz: Tuple[int, ...], dx: Tuple[int, ...]) -> int:
    """⟨d, e⟩ = Σ d_i e_i − Σ_{a: i→j} d_i e_j."""
    vertices = sum(a * b for a, b in zip(dz, dx))
    arrows = sum(dz[s] * dx[t] for s, t in quiver.arrows)
    return vertices - arrows


def euler_ext_dim_oracle(universe: Universe, z: int, x: int) -> int:
    """dim Ext¹(Z, X) = dim Hom(Z, X) − ⟨dim Z, dim X⟩ для наследственной алгебры путей."""
    source, target = universe.objects[z], universe.objects[x]
    return repcat.hom_dim(source, target) - euler_form(universe.quiver, source.dims, target.dims)


def _transfer_status(d: ExactStructure, e: ExactStructure, z: int, x: int) -> Optional[bool]:
    """Каждая D-конфляция X ↣ Y ↠ Z (неразложимые X, Z) является E-конфляцией."""
    universe = d.universe
    key = ("transfer", membership_key(d), membership_key(e), z, x)
    if key in universe.cache:
        return universe.cache[key]
    status: Optional[bool] = True
    for conflation in repcat.extension_classes(universe.objects[z], universe.objects[x])[1:]:
        in_d = contains(d, conflation)
        if in_d is False:
            continue
        in_e = contains(e, conflation) if in_d else None
        if in_e is False:
            status = False
            break
        if in_e is None or in_d is None:
            status = None
    universe.cache[key] = status
    return status


def div_objects(d: ExactStructure, e: ExactStructure) -> ObjectClass:
    """
    Div(D-E): объекты X, у которых каждая D-инфляция X ↣ Y является E-инфляцией.

    Returns:
        Класс; skipped — число нерешённых пар неразложимых.
    """
    universe = exact.same_universe(d, e)
    return exact.additive_scan(universe, lambda x, z: _transfer_status(d, e, z, x))


def flat_objects(d: ExactStructure, e: ExactStructure) -> ObjectClass:
    """Flat(D-E): каждая D-дефляция Y ↠ Z является E-дефляцией."""
    universe = exact.same_universe(d, e)
    return exact.additive_scan(universe, lambda z, x: _transfer_status(d, e, z, x))


def _relative_scan(
    d: ExactStructure, e: ExactStructure, middles: ObjectClass, outgoing: bool
) -> ObjectClass:
    universe = exact.same_universe(d, e, middles)
    members: List[int] = []
    skipped = 0
    for index, rep in enumerate(universe.objects):
        orbits = (
            universe.orbits_with(x=index) if outgoing else universe.orbits_with(z=index)
        )
        if all(
            c.id in e.orbits for c in orbits if c.id in d.orbits and c.y in middles
        ):
            members.append(index)
        if rep.total_dim > universe.window:
            skipped += 1
    return exact.object_class(universe, members, skipped)


def div_objects_rel(d: ExactStructure, e: ExactStructure, a: ObjectClass) -> ObjectClass:
    """
    Div(D-E-A): каждая D-инфляция X ↣ A с A ∈ A является E-инфляцией.

    Для A = все объекты совпадает с div_objects. Иначе перебираются хранимые
    орбиты; объекты за окном разрешимости учитываются в skipped.
    """
    if len(a) == len(a.universe.objects):
        return div_objects(d, e)
    return _relative_scan(d, e, a, outgoing=True)


def flat_objects_rel(d: ExactStructure, e: ExactStructure, b: ObjectClass) -> ObjectClass:
    """Flat(D-E-B): каждая D-дефляция B ↠ X с B ∈ B является E-дефляцией."""
    if len(b) == len(b.universe.objects):
        return flat_objects(d, e)
    return _relative_scan(d, e, b, outgoing=False)


def perp_right(d: ExactStructure, a: ObjectClass) -> ObjectClass:
    """A^⊥: объекты X с Ext¹_D(A, X) = 0 для всех A ∈ A."""
    universe = exact.same_universe(d, a)
    return exact.additive_scan(
        universe, lambda x, g: ext_status(d, g, x), others=exact.generators(a)
    )


def perp_left(d: ExactStructure, b: ObjectClass) -> ObjectClass:
    """^⊥B: объекты X с Ext¹_D(X, B) = 0 для всех B ∈ B."""
    universe = exact.same_universe(d, b)
    return exact.additive_scan(
        universe, lambda x, g: ext_status(d, x, g), others=exact.generators(b)
    )


# Замкнутость


def extension_closure_violations(d: ExactStructure, cls: ObjectClass) -> List[int]:
    """Орбиты D с X, Z ∈ класса и Y ∉ класса."""
    universe = d.universe
    return [
        c.id
        for c in universe.conflations
        if c.id in d.orbits and c.x in cls and c.z in cls and c.y not in cls
    ]


def biproduct_violations(cls: ObjectClass) -> List[Tuple[int, int]]:
    """Пары членов класса, чья хранимая прямая сумма не лежит в классе."""
    universe = cls.universe
    members = cls.sorted()
    violations = []
    for i, a in enumerate(members):
        for b in members[i:]:
            total = universe_builder.biproduct_index(universe, a, b)
            if total is not None and total not in cls:
                violations.append((a, b))
    return violations


def summand_violations(cls: ObjectClass) -> List[int]:
    """Члены класса, у которых некоторое хранимое прямое слагаемое не лежит в классе."""
    universe = cls.universe
    violations = []
    for index in cls.sorted():
        parts = universe.summands[index]
        pieces = {
            universe_builder.biproduct_index(universe, *combo)
            for size in range(1, len(parts))
            for combo in itertools.combinations(parts, size)
        }
        if any(piece not in cls for piece in pieces):
            violations.append(index)
    return violations


def in_window(universe: Universe, index: int) -> bool:
    return universe.objects[index].total_dim <= universe.window
