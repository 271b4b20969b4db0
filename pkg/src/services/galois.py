"""Частично упорядоченные множества DPEx, DIEx, DCot и связи Галуа между ними."""

import itertools
import logging
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from src.models.reports import BijectionReport, GaloisReport, Violation, XuReport
from src.models.structures import (
    CotorsionPair,
    CotorsionPoset,
    ExactStructure,
    ObjectClass,
    StructurePoset,
)
from src.models.universe import Universe
from src.services import cotorsion, exact, relative
from src.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

MAX_INDECOMPOSABLES = 20


class GaloisError(Exception):
    """Исключение для ошибок перебора частично упорядоченных множеств."""

    pass


def indecomposable_subsets(universe: Universe) -> Iterator[Tuple[int, ...]]:
    """
    Подмножества неразложимых классов: по возрастанию размера, затем лексикографически.

    Raises:
        GaloisError: если неразложимых больше MAX_INDECOMPOSABLES.
    """
    indecomposables = universe.indecomposables
    if len(indecomposables) > MAX_INDECOMPOSABLES:
        raise GaloisError(
            f"{len(indecomposables)} indecomposable classes exceed the sweep limit "
            f"of {MAX_INDECOMPOSABLES}"
        )
    for size in range(len(indecomposables) + 1):
        yield from itertools.combinations(indecomposables, size)


def subset_names(universe: Universe, subset: Sequence[int]) -> str:
    return "{" + ",".join(universe.name_of(i) for i in subset) + "}"


def _structure_poset(
    d: ExactStructure, kind: str, build: Callable[[ExactStructure, object], ExactStructure]
) -> StructurePoset:
    universe = d.universe
    subsets = list(indecomposable_subsets(universe))
    logger.info(f"Sweeping {len(subsets)} generating subsets for {kind}")
    built = ordered_map(lambda s: build(d, exact.object_class(universe, s)), subsets)
    poset = StructurePoset(kind=kind, base=d)
    positions: Dict[frozenset, int] = {}
    for subset, structure in zip(subsets, built):
        position = positions.get(structure.orbits)
        if position is None:
            positions[structure.orbits] = len(poset.elements)
            poset.elements.append(structure)
            poset.generating.append([subset])
        else:
            poset.generating[position].append(subset)
    logger.info(f"{kind} has {len(poset.elements)} elements")
    return poset


def enumerate_dpex(d: ExactStructure) -> StructurePoset:
    """DPEx: структуры, D-проективно порождённые подмножествами неразложимых."""
    return _structure_poset(d, "DPEx", exact.proj_generate)


def enumerate_diex(d: ExactStructure) -> StructurePoset:
    """DIEx: структуры, D-инъективно порождённые подмножествами неразложимых."""
    return _structure_poset(d, "DIEx", exact.inj_generate)


def pair_key(pair: CotorsionPair) -> Tuple[frozenset, frozenset]:
    return pair.a.members, pair.b.members


def enumerate_dcot(d: ExactStructure) -> CotorsionPoset:
    """DCot: пары, порождённые и копорождённые подмножествами неразложимых."""
    universe = d.universe
    subsets = list(indecomposable_subsets(universe))

    def both(subset):
        cls = exact.object_class(universe, subset)
        return cotorsion.pair_generated(d, cls), cotorsion.pair_cogenerated(d, cls)

    poset = CotorsionPoset(base=d)
    positions: Dict[tuple, int] = {}
    for subset, pairs in zip(subsets, ordered_map(both, subsets)):
        for label, pair in zip(("gen", "cogen"), pairs):
            source = f"{label}:{subset_names(universe, subset)}"
            position = positions.get(pair_key(pair))
            if position is None:
                positions[pair_key(pair)] = len(poset.elements)
                poset.elements.append(pair)
                poset.sources.append([source])
            else:
                poset.sources[position].append(source)
    logger.info(f"DCot has {len(poset.elements)} elements")
    return poset


def posets(d: ExactStructure) -> Tuple[StructurePoset, StructurePoset, CotorsionPoset]:
    """Все три множества (кэшируются во вселенной)."""
    universe = d.universe
    key = ("posets", exact.membership_key(d))
    cached = universe.cache.get(key)
    if cached is None:
        cached = (enumerate_dpex(d), enumerate_diex(d), enumerate_dcot(d))
        universe.cache[key] = cached
    return cached


# Отображения


def _checked_pair(
    d: ExactStructure, mapping: str, e: ExactStructure, a: ObjectClass, b: ObjectClass
) -> CotorsionPair:
    try:
        return cotorsion.make_pair(d, a, b)
    except cotorsion.CotorsionError as err:
        raise GaloisError(f"{mapping}({exact.describe(e)}) is not a cotorsion pair: {err}") from err


def psi(d: ExactStructure, e: ExactStructure) -> CotorsionPair:
    """Ψ(E) = (^⊥Div(D-E), Div(D-E))."""
    divisible = relative.div_objects(d, e)
    return _checked_pair(d, "Psi", e, relative.perp_left(d, divisible), divisible)


def psi_tilde(d: ExactStructure, pair: CotorsionPair) -> ExactStructure:
    """Ψ̃(A, B) = π⁻¹_D(A)."""
    return exact.proj_generate(d, pair.a)


def phi(d: ExactStructure, e: ExactStructure) -> CotorsionPair:
    """Φ(E) = (Flat(D-E), Flat(D-E)^⊥)."""
    flat = relative.flat_objects(d, e)
    return _checked_pair(d, "Phi", e, flat, relative.perp_right(d, flat))


def phi_tilde(d: ExactStructure, pair: CotorsionPair) -> ExactStructure:
    """Φ̃(A, B) = ι⁻¹_D(B)."""
    return exact.inj_generate(d, pair.b)


def pair_leq(p1: CotorsionPair, p2: CotorsionPair) -> bool:
    """(A₁,B₁) ≤ (A₂,B₂) ⇔ A₁ ⊇ A₂."""
    return p2.a.members <= p1.a.members


def pair_leq_by_b(p1: CotorsionPair, p2: CotorsionPair) -> bool:
    """(A₁,B₁) ≤ (A₂,B₂) ⇔ B₁ ⊆ B₂."""
    return p1.b.members <= p2.b.members


def hasse_edges(count: int, leq: Callable[[int, int], bool]) -> List[Tuple[int, int]]:
    """Рёбра покрытия (нижний, верхний) конечного частично упорядоченного множества."""
    below = {
        (i, j) for i in range(count) for j in range(count) if i != j and leq(i, j)
    }
    return sorted(
        (i, j)
        for i, j in below
        if not any((i, k) in below and (k, j) in below for k in range(count))
    )


# Проверка законов


def _describe_structure(poset: StructurePoset, index: int) -> str:
    universe = poset.base.universe
    subsets = "; ".join(subset_names(universe, s) for s in poset.generating[index])
    return f"{exact.describe(poset.elements[index])} [{subsets}]"


def describe_pair(pair: CotorsionPair) -> str:
    return cotorsion.describe_pair(pair)


def check_galois(d: ExactStructure) -> GaloisReport:
    """
    Проверить законы связей Галуа (Ψ, Ψ̃) — монотонной и (Φ, Φ̃) — антитонной.

    Проверяются:
    1. Монотонность Ψ, Ψ̃ и антитонность Φ, Φ̃.
    2. E ⊇ Ψ̃Ψ(E) и E ⊇ Φ̃Φ(E); ΨΨ̃(A,B) = (A,B) и ΦΦ̃(A,B) = (A,B).
    3. Сюръективность Ψ и Φ на DCot, попадание их значений в DCot.
    4. Согласованность двух описаний порядка на DCot.
    """
    dpex, diex, dcot = posets(d)
    report = GaloisReport(
        dpex=[_describe_structure(dpex, i) for i in range(len(dpex.elements))],
        diex=[_describe_structure(diex, i) for i in range(len(diex.elements))],
        dcot=[
            f"{describe_pair(p)} [{'; '.join(s)}]" for p, s in zip(dcot.elements, dcot.sources)
        ],
    )
    dcot_keys = {pair_key(p) for p in dcot.elements}
    psi_values = ordered_map(lambda e: psi(d, e), dpex.elements)
    phi_values = ordered_map(lambda e: phi(d, e), diex.elements)
    psi_tilde_values = ordered_map(lambda p: psi_tilde(d, p), dcot.elements)
    phi_tilde_values = ordered_map(lambda p: phi_tilde(d, p), dcot.elements)

    report.maps = {
        "psi": [(exact.describe(e), describe_pair(v)) for e, v in zip(dpex.elements, psi_values)],
        "phi": [(exact.describe(e), describe_pair(v)) for e, v in zip(diex.elements, phi_values)],
        "psi_tilde": [
            (describe_pair(p), exact.describe(v)) for p, v in zip(dcot.elements, psi_tilde_values)
        ],
        "phi_tilde": [
            (describe_pair(p), exact.describe(v)) for p, v in zip(dcot.elements, phi_tilde_values)
        ],
    }

    def law(name: str, instances) -> None:
        checked, violations = 0, []
        for ok, witness in instances:
            checked += 1
            if not ok:
                violations.append(Violation(name, witness))
        report.laws[name] = (checked, violations)

    n_p, n_i, n_c = len(dpex.elements), len(diex.elements), len(dcot.elements)
    law(
        "psi_monotone",
        (
            (
                not exact.leq(dpex.elements[i], dpex.elements[j])
                or pair_leq(psi_values[i], psi_values[j]),
                {"lower": exact.describe(dpex.elements[i]), "upper": exact.describe(dpex.elements[j])},
            )
            for i in range(n_p)
            for j in range(n_p)
        ),
    )
    law(
        "psi_tilde_monotone",
        (
            (
                not pair_leq(dcot.elements[i], dcot.elements[j])
                or exact.leq(psi_tilde_values[i], psi_tilde_values[j]),
                {"lower": describe_pair(dcot.elements[i]), "upper": describe_pair(dcot.elements[j])},
            )
            for i in range(n_c)
            for j in range(n_c)
        ),
    )
    law(
        "phi_antitone",
        (
            (
                not exact.leq(diex.elements[i], diex.elements[j])
                or pair_leq(phi_values[j], phi_values[i]),
                {"lower": exact.describe(diex.elements[i]), "upper": exact.describe(diex.elements[j])},
            )
            for i in range(n_i)
            for j in range(n_i)
        ),
    )
    law(
        "phi_tilde_antitone",
        (
            (
                not pair_leq(dcot.elements[i], dcot.elements[j])
                or exact.leq(phi_tilde_values[j], phi_tilde_values[i]),
                {"lower": describe_pair(dcot.elements[i]), "upper": describe_pair(dcot.elements[j])},
            )
            for i in range(n_c)
            for j in range(n_c)
        ),
    )
    law(
        "psi_unit",
        (
            (
                exact.leq(psi_tilde(d, v), e),
                {"structure": exact.describe(e), "image": describe_pair(v)},
            )
            for e, v in zip(dpex.elements, psi_values)
        ),
    )
    law(
        "phi_unit",
        (
            (
                exact.leq(phi_tilde(d, v), e),
                {"structure": exact.describe(e), "image": describe_pair(v)},
            )
            for e, v in zip(diex.elements, phi_values)
        ),
    )
    law(
        "psi_counit",
        (
            (
                pair_key(psi(d, v)) == pair_key(p),
                {"pair": describe_pair(p), "structure": exact.describe(v)},
            )
            for p, v in zip(dcot.elements, psi_tilde_values)
        ),
    )
    law(
        "phi_counit",
        (
            (
                pair_key(phi(d, v)) == pair_key(p),
                {"pair": describe_pair(p), "structure": exact.describe(v)},
            )
            for p, v in zip(dcot.elements, phi_tilde_values)
        ),
    )
    law(
        "psi_in_dcot",
        ((pair_key(v) in dcot_keys, {"image": describe_pair(v)}) for v in psi_values),
    )
    law(
        "phi_in_dcot",
        ((pair_key(v) in dcot_keys, {"image": describe_pair(v)}) for v in phi_values),
    )
    psi_image = {pair_key(v) for v in psi_values}
    phi_image = {pair_key(v) for v in phi_values}
    law(
        "psi_surjective",
        ((pair_key(p) in psi_image, {"missed": describe_pair(p)}) for p in dcot.elements),
    )
    law(
        "phi_surjective",
        ((pair_key(p) in phi_image, {"missed": describe_pair(p)}) for p in dcot.elements),
    )
    law(
        "dcot_order_consistent",
        (
            (
                pair_leq(dcot.elements[i], dcot.elements[j])
                == pair_leq_by_b(dcot.elements[i], dcot.elements[j]),
                {"first": describe_pair(dcot.elements[i]), "second": describe_pair(dcot.elements[j])},
            )
            for i in range(n_c)
            for j in range(n_c)
        ),
    )

    report.hasse = {
        "DPEx": hasse_edges(n_p, lambda i, j: exact.leq(dpex.elements[i], dpex.elements[j])),
        "DIEx": hasse_edges(n_i, lambda i, j: exact.leq(diex.elements[i], diex.elements[j])),
        "DCot": hasse_edges(n_c, lambda i, j: pair_leq(dcot.elements[i], dcot.elements[j])),
    }
    failed = [name for name, (_, violations) in report.laws.items() if violations]
    if failed:
        logger.warning(f"Galois laws violated: {failed}")
    return report


# Структуры Xu


def is_xu_proj(d: ExactStructure, e: ExactStructure) -> bool:
    """
    Proj(E) = ^⊥Div(D-E).

    Raises:
        GaloisError: если Proj(E) по расщеплению и по поднятию различаются.
    """
    projectives = exact.proj_objects(e)
    if projectives.members != exact.proj_objects_by_lifting(e).members:
        raise GaloisError(f"Projectives of {exact.describe(e)} disagree between definitions")
    return projectives.members == relative.perp_left(d, relative.div_objects(d, e)).members


def is_xu_inj(d: ExactStructure, e: ExactStructure) -> bool:
    """Inj(E) = Flat(D-E)^⊥."""
    injectives = exact.inj_objects(e)
    if injectives.members != exact.inj_objects_by_extension(e).members:
        raise GaloisError(f"Injectives of {exact.describe(e)} disagree between definitions")
    return injectives.members == relative.perp_right(d, relative.flat_objects(d, e)).members


def check_bijection(d: ExactStructure) -> BijectionReport:
    """
    DCot ↔ Xu-DPEx ↔ Xu-DIEx: равенство мощностей и взаимная обратность
    ограничений Ψ/Ψ̃ и Φ/Φ̃.
    """
    dpex, diex, dcot = posets(d)
    xu_proj = [e for e in dpex.elements if is_xu_proj(d, e)]
    xu_inj = [e for e in diex.elements if is_xu_inj(d, e)]
    report = BijectionReport(
        dcot_count=len(dcot.elements),
        xu_proj_count=len(xu_proj),
        xu_inj_count=len(xu_inj),
    )
    xu_proj_keys = {e.orbits for e in xu_proj}
    xu_inj_keys = {e.orbits for e in xu_inj}
    for pair in dcot.elements:
        proj_side, inj_side = psi_tilde(d, pair), phi_tilde(d, pair)
        report.pairs.append((describe_pair(pair), exact.describe(proj_side), exact.describe(inj_side)))
        if proj_side.orbits not in xu_proj_keys:
            report.violations.append(Violation("psi_tilde_not_xu", {"pair": describe_pair(pair)}))
        elif pair_key(psi(d, proj_side)) != pair_key(pair):
            report.violations.append(Violation("psi_not_inverse", {"pair": describe_pair(pair)}))
        if inj_side.orbits not in xu_inj_keys:
            report.violations.append(Violation("phi_tilde_not_xu", {"pair": describe_pair(pair)}))
        elif pair_key(phi(d, inj_side)) != pair_key(pair):
            report.violations.append(Violation("phi_not_inverse", {"pair": describe_pair(pair)}))
    for e in xu_proj:
        if psi_tilde(d, psi(d, e)).orbits != e.orbits:
            report.violations.append(Violation("psi_tilde_not_inverse", {"structure": exact.describe(e)}))
    for e in xu_inj:
        if phi_tilde(d, phi(d, e)).orbits != e.orbits:
            report.violations.append(Violation("phi_tilde_not_inverse", {"structure": exact.describe(e)}))
    return report


def check_xu_characterization(d: ExactStructure, e: ExactStructure, side: str = "proj") -> XuReport:
    """
    Три равносильных утверждения о Xu-структуре при существовании накрытий
    Proj(E) (для side="inj" — оболочек Inj(E)):

    (i) E — Xu-структура;
    (ii) Proj(E) замкнут относительно D-расширений;
    (iii) ядро D-накрытия X ↣ P(Z) ↠ Z каждого неразложимого Z лежит в Div(D-E).

    Raises:
        GaloisError: если side неизвестен.
    """
    universe = d.universe
    if side == "proj":
        extremes = exact.proj_objects(e)
        approximations = [cotorsion.cover(d, extremes, z) for z in universe.indecomposables]
        special = relative.div_objects(d, e)
        xu = is_xu_proj(d, e)
        ends = [universe.conflations[w.orbit].x for w in approximations if w is not None]
    elif side == "inj":
        extremes = exact.inj_objects(e)
        approximations = [cotorsion.envelope(d, extremes, x) for x in universe.indecomposables]
        special = relative.flat_objects(d, e)
        xu = is_xu_inj(d, e)
        ends = [universe.conflations[w.orbit].z for w in approximations if w is not None]
    else:
        raise GaloisError(f"Unknown side {side!r}")
    if any(w is None for w in approximations):
        return XuReport(
            side=side,
            precondition_met=False,
            reason=f"Not every indecomposable has a {'cover' if side == 'proj' else 'envelope'} in the universe",
        )
    closed = not relative.extension_closure_violations(d, extremes)
    kernels_special = all(end in special for end in ends)
    return XuReport(side=side, values=(xu, closed, kernels_special))


def find_structure(poset: StructurePoset, e: ExactStructure) -> Optional[int]:
    for index, element in enumerate(poset.elements):
        if element.orbits == e.orbits:
            return index
    return None
