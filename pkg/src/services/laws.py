"""Проверка законов об относительно делимых и плоских объектах перебором во вселенной."""

import logging
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from src.models.reports import LawReport, SkippedInstance, Violation
from src.models.representation import Morphism
from src.models.structures import CotorsionPair, ExactStructure, ObjectClass
from src.models.universe import CanonicalConflation, Universe
from src.services import cotorsion, exact, galois, relative, repcat, universe_builder, universe_store
from src.services.universe_builder import BoundaryError
from src.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

LAW_NAMES = (
    "diagram",
    "cohcot",
    "coh",
    "resolving",
    "ses",
    "covenv",
    "closure_de",
    "closure_rel",
)

# Одна документированная порча движка на каждый из шести основных законов.
MUTATIONS: Dict[str, str] = {
    "diagram": "swap_divisible_flat",
    "cohcot": "drop_projective_filter",
    "coh": "drop_projective_filter",
    "resolving": "resolving_checks_injectives",
    "ses": "ignore_e_in_witness",
    "covenv": "drop_class_filter",
}


class LawError(Exception):
    """Исключение для некорректных параметров запуска законов."""

    pass


@dataclass
class LawConfig:
    """
    Параметры прогона законов.

    Атрибуты:
        base: Базовая структура D (по умолчанию максимальная).
        laws: Какие законы запускать.
        mutations: Закон → имя порчи из MUTATIONS.
        sweep_generators: Перебирать все порождающие подмножества структуры,
            а не только первое.
    """

    base: Optional[ExactStructure] = None
    laws: Tuple[str, ...] = LAW_NAMES
    mutations: Dict[str, str] = field(default_factory=dict)
    sweep_generators: bool = True

    def validate(self) -> None:
        unknown = [law for law in self.laws if law not in LAW_NAMES]
        if unknown:
            raise LawError(f"Unknown laws: {unknown}")
        for law, mutation in self.mutations.items():
            if MUTATIONS.get(law) != mutation:
                raise LawError(f"Unknown mutation {mutation!r} for law {law!r}")


# Общие помощники


def _new_report(universe: Universe, law: str, parameters: Dict[str, str]) -> LawReport:
    return LawReport(
        law=law,
        universe_id=universe_store.universe_digest(universe),
        parameters=parameters,
    )


def _skip(report: LawReport, kind: str, objects: Sequence[str] = ()) -> None:
    report.skipped += 1
    report.skips.append(SkippedInstance(kind, tuple(objects)))


def _orbit_names(universe: Universe, *orbits: CanonicalConflation) -> Tuple[str, ...]:
    indices = sorted({i for c in orbits for i in (c.x, c.y, c.z)})
    return tuple(universe.name_of(i) for i in indices)


def _orbit_payload(universe: Universe, c: CanonicalConflation) -> dict:
    return {
        "orbit": c.id,
        "x": universe.name_of(c.x),
        "y": universe.name_of(c.y),
        "z": universe.name_of(c.z),
        "inflation": repcat.morphism_payload(c.inflation),
        "deflation": repcat.morphism_payload(c.deflation),
    }


def _orbits(e: ExactStructure) -> List[CanonicalConflation]:
    universe = e.universe
    return [universe.conflations[i] for i in sorted(e.orbits)]


def _vanishes(d: ExactStructure, z: int, x: int) -> Optional[bool]:
    try:
        return relative.ext_vanishes(d, z, x)
    except BoundaryError:
        return None


def _generation(
    e: ExactStructure, side: Optional[str], generators: Optional[Sequence[int]]
) -> Tuple[Optional[str], Tuple[int, ...]]:
    """Сторона порождения E (proj / inj) и порождающие неразложимые."""
    if side is None:
        side = {"proj_gen": "proj", "inj_gen": "inj"}.get(e.provenance.kind)
    if side not in (None, "proj", "inj"):
        raise LawError(f"Unknown generation side {side!r}")
    if generators is None:
        generators = e.provenance.generators
    return side, tuple(generators)


def _require_generation(e: ExactStructure, side: Optional[str], generators) -> Tuple[str, Tuple[int, ...]]:
    side, gens = _generation(e, side, generators)
    if side is None:
        raise LawError(
            f"Structure {exact.describe(e)} is neither projectively nor injectively generated"
        )
    return side, gens


def _enough(d: ExactStructure) -> Tuple[bool, bool]:
    """Достаточно ли D-инъективных и D-проективных (по неразложимым, внутри вселенной)."""
    universe = d.universe
    key = ("enough", exact.membership_key(d))
    cached = universe.cache.get(key)
    if cached is None:
        everything = exact.all_objects(universe)
        injectives = cotorsion.make_pair(d, everything, exact.inj_objects(d))
        projectives = cotorsion.make_pair(d, exact.proj_objects(d), everything)
        cached = (
            cotorsion.enough_injectives(injectives).value is True,
            cotorsion.enough_projectives(projectives).value is True,
        )
        universe.cache[key] = cached
    return cached


def _hypotheses_met(report: LawReport, d: ExactStructure, injectives: bool, projectives: bool) -> bool:
    enough_inj, enough_proj = _enough(d)
    missing = []
    if injectives and not enough_inj:
        missing.append("enough D-injectives")
    if projectives and not enough_proj:
        missing.append("enough D-projectives")
    if missing:
        _skip(report, "hypotheses")
        report.notes.append(f"Hypotheses not verified within the bound: {', '.join(missing)}")
        logger.warning(f"Law {report.law} skipped: {', '.join(missing)} not verified")
        return False
    return True


def _record_values(report: LawReport, statement: str, values: Dict[str, bool], witness: dict) -> None:
    report.checked += 1
    if len(set(values.values())) > 1:
        report.violations.append(Violation(statement, dict(witness, values=values)))


# Диаграмма из двух строк


def _frames(
    d: ExactStructure,
) -> List[Tuple[CanonicalConflation, CanonicalConflation, Morphism, Morphism]]:
    """
    Пары D-орбит X ↣ Y ↠ Z, X ↣ Y' ↠ Z' с f: Y → Y' и α ∈ Aut(X), f ∘ i = i' ∘ α.

    Нижняя строка с инфляцией i' ∘ α изоморфна записанной орбите, поэтому квадрат
    с тождеством на X существует ровно тогда, когда найдено такое α.
    """
    orbits = _orbits(d)

    def frames_from(first: CanonicalConflation):
        found = []
        for second in orbits:
            if second.x != first.x:
                continue
            extension = repcat.extend_up_to_automorphism(first.inflation, second.inflation)
            if extension is not None:
                f, twist = extension
                found.append((first, second, f, twist))
        return found

    return [frame for part in ordered_map(frames_from, orbits) for frame in part]


def diagram_payload(
    universe: Universe,
    top: CanonicalConflation,
    bottom: CanonicalConflation,
    f: Morphism,
    continuation: Optional[CanonicalConflation] = None,
    twist: Optional[Morphism] = None,
) -> dict:
    """
    Полная диаграмма с матрицами: строки X ↣ Y ↠ Z ↣ U ↠ V и X ↣ Y' ↠ Z' ↣ U' ↠ V,
    g: Z → Z' индуцирован f, нижнее продолжение — кодекартов квадрат Z ↣ U вдоль g.
    Инфляция нижней строки — i' ∘ twist (twist = 1, если не задан).

    Raises:
        LawError: если построенная диаграмма не коммутативна.
    """
    if twist is None:
        twist = repcat.identity(bottom.inflation.source)
    g = repcat.extend(repcat.compose(bottom.deflation, f), top.deflation)
    if g is None or repcat.compose(f, top.inflation) != repcat.compose(bottom.inflation, twist):
        raise LawError(f"Orbits {top.id} and {bottom.id} do not form a commutative frame")
    payload = {
        "top": _orbit_payload(universe, top),
        "bottom": _orbit_payload(universe, bottom),
        "twist": repcat.morphism_payload(twist),
        "f": repcat.morphism_payload(f),
        "g": repcat.morphism_payload(g),
    }
    if continuation is not None:
        u_prime, h, j_prime = repcat.pushout(continuation.inflation, g)
        if repcat.compose(h, continuation.inflation) != repcat.compose(j_prime, g):
            raise LawError(f"Pushout along orbit {continuation.id} does not commute")
        payload.update(
            {
                "continuation": _orbit_payload(universe, continuation),
                "pushed_object": repcat.representation_payload(u_prime),
                "h": repcat.morphism_payload(h),
                "pushed_inflation": repcat.morphism_payload(j_prime),
            }
        )
    return payload


def law_diagram(d: ExactStructure, e: ExactStructure, mutation: Optional[str] = None) -> LawReport:
    """
    Диаграмма из двух строк по две D-конфляции с тождествами на X и V.

    Проверяются для каждого экземпляра внутри вселенной:
    1. Ext¹_D(Z, X) = 0 и Y' ∈ Div(D-E) ⇒ Z' ∈ Div(D-E).
    2. Ext¹_D(V, Z') = 0 и U ∈ Flat(D-E) ⇒ Z ∈ Flat(D-E).

    Экземпляр задаётся тройкой орбит; морфизм f ищется решением f ∘ i = i' ∘ α
    с α ∈ Aut(X), остальная часть нижней строки строится кодекартовым квадратом.
    Пары с нерешаемым Ext учитываются как пропущенные.
    """
    universe = exact.same_universe(d, e)
    report = _new_report(
        universe, "diagram", {"base": exact.describe(d), "structure": exact.describe(e)}
    )
    divisible = relative.div_objects(d, e)
    flat = relative.flat_objects(d, e)
    if mutation == MUTATIONS["diagram"]:
        divisible_conclusion, flat_conclusion = flat, divisible
    else:
        divisible_conclusion, flat_conclusion = divisible, flat

    for top, bottom, f, twist in _frames(d):
        vanishes = _vanishes(d, top.z, top.x)
        if vanishes is None:
            _skip(report, "diagram_divisible", _orbit_names(universe, top, bottom))
        else:
            report.checked += 1
            if vanishes and bottom.y in divisible and bottom.z not in divisible_conclusion:
                report.violations.append(
                    Violation(
                        "diagram_divisible", diagram_payload(universe, top, bottom, f, twist=twist)
                    )
                )
        for continuation in universe.orbits_with(x=top.z):
            if continuation.id not in d.orbits:
                continue
            vanishes = _vanishes(d, continuation.z, bottom.z)
            if vanishes is None:
                _skip(report, "diagram_flat", _orbit_names(universe, top, bottom, continuation))
                continue
            report.checked += 1
            if vanishes and continuation.y in flat and top.z not in flat_conclusion:
                report.violations.append(
                    Violation(
                        "diagram_flat",
                        diagram_payload(universe, top, bottom, f, continuation, twist),
                    )
                )
    return report


# Когерентность относительно пары кручения


def _failures(
    orbits: Iterable[CanonicalConflation], condition: Callable[[CanonicalConflation], bool]
) -> List[CanonicalConflation]:
    return [c for c in orbits if condition(c)]


def _record_equivalence(
    report: LawReport,
    universe: Universe,
    statement: str,
    failures: Dict[str, List[CanonicalConflation]],
) -> None:
    """Утверждения вида «контрпримеров нет» должны быть одновременно истинны или ложны."""
    values = {name: not found for name, found in failures.items()}
    witness = {
        "counterexamples": {
            name: _orbit_payload(universe, found[0]) for name, found in failures.items() if found
        }
    }
    _record_values(report, statement, values, witness)


def law_cohcot(
    d: ExactStructure,
    e: ExactStructure,
    pair: CotorsionPair,
    side: Optional[str] = None,
    generators: Optional[Sequence[int]] = None,
    mutation: Optional[str] = None,
) -> LawReport:
    """
    Равносильность двух утверждений о D-паре кручения (A, B) при E, порождённой M.

    Для E = π⁻¹_D(M):
    (i) D-конфляции X ↣ Y' ↠ Z' с X ∈ B и Y' ∈ Div(D-E) имеют Z' ∈ Div(D-E);
    (ii) D-конфляции Z ↣ U ↠ V с V ∈ add(M) и U ∈ Proj(D) имеют Z ∈ A.
    Для E = ι⁻¹_D(M) — двойственно через Flat(D-E) и Inj(D).

    Raises:
        LawError: если E не порождена проективно или инъективно.
    """
    universe = exact.same_universe(d, e, pair.a)
    side, gens = _require_generation(e, side, generators)
    report = _new_report(
        universe,
        "cohcot",
        {
            "base": exact.describe(d),
            "structure": exact.describe(e),
            "side": side,
            "generators": galois.subset_names(universe, gens),
            "pair": cotorsion.describe_pair(pair),
        },
    )
    if not _hypotheses_met(report, d, injectives=True, projectives=True):
        return report
    filtered = mutation != MUTATIONS["cohcot"]
    m_class = exact.additive_class(universe, gens)
    orbits = _orbits(d)
    if side == "proj":
        divisible = relative.div_objects(d, e)
        projectives = exact.proj_objects(d)
        failures = {
            "i": _failures(
                orbits, lambda c: c.x in pair.b and c.y in divisible and c.z not in divisible
            ),
            "ii": _failures(
                orbits,
                lambda c: c.z in m_class
                and (not filtered or c.y in projectives)
                and c.x not in pair.a,
            ),
        }
    else:
        flat = relative.flat_objects(d, e)
        injectives = exact.inj_objects(d)
        failures = {
            "i": _failures(orbits, lambda c: c.z in pair.a and c.y in flat and c.x not in flat),
            "ii": _failures(
                orbits,
                lambda c: c.x in m_class
                and (not filtered or c.y in injectives)
                and c.z not in pair.b,
            ),
        }
    _record_equivalence(report, universe, f"cohcot_{side}", failures)
    return report


def law_coh(
    d: ExactStructure,
    e: ExactStructure,
    side: Optional[str] = None,
    generators: Optional[Sequence[int]] = None,
    mutation: Optional[str] = None,
) -> LawReport:
    """
    Для E = π⁻¹_D(M): Div(D-E) замкнут относительно D-дефляций тогда и только тогда,
    когда ядра D-дефляций U ↠ V с U ∈ Proj(D), V ∈ add(M) D-проективны.
    Для E = ι⁻¹_D(M) — двойственно (Flat(D-E), D-инфляции, Inj(D)).
    """
    universe = exact.same_universe(d, e)
    side, gens = _require_generation(e, side, generators)
    report = _new_report(
        universe,
        "coh",
        {
            "base": exact.describe(d),
            "structure": exact.describe(e),
            "side": side,
            "generators": galois.subset_names(universe, gens),
        },
    )
    if not _hypotheses_met(report, d, injectives=True, projectives=True):
        return report
    filtered = mutation != MUTATIONS["coh"]
    m_class = exact.additive_class(universe, gens)
    orbits = _orbits(d)
    if side == "proj":
        divisible = relative.div_objects(d, e)
        projectives = exact.proj_objects(d)
        failures = {
            "i": _failures(orbits, lambda c: c.y in divisible and c.z not in divisible),
            "ii": _failures(
                orbits,
                lambda c: c.z in m_class
                and (not filtered or c.y in projectives)
                and c.x not in projectives,
            ),
        }
    else:
        flat = relative.flat_objects(d, e)
        injectives = exact.inj_objects(d)
        failures = {
            "i": _failures(orbits, lambda c: c.y in flat and c.x not in flat),
            "ii": _failures(
                orbits,
                lambda c: c.x in m_class
                and (not filtered or c.y in injectives)
                and c.z not in injectives,
            ),
        }
    _record_equivalence(report, universe, f"coh_{side}", failures)
    return report


# Резольвентность


def _generating_subset(
    poset, matches: Callable[[ExactStructure], bool]
) -> Optional[Tuple[ExactStructure, Tuple[int, ...]]]:
    for element, subsets in zip(poset.elements, poset.generating):
        if matches(element):
            return element, subsets[0]
    return None


def law_resolving(d: ExactStructure, pair: CotorsionPair, mutation: Optional[str] = None) -> LawReport:
    """
    Равносильность четырёх утверждений о D-паре кручения (A, B):

    (i) B — D-корезольвентный класс;
    (ii) D-конфляции Z ↣ U ↠ V с V ∈ add(N), U ∈ Proj(D) имеют Z ∈ A;
    (iii) A — D-резольвентный класс;
    (iv) D-конфляции X ↣ Y' ↠ Z' с X ∈ add(M), Y' ∈ Inj(D) имеют Z' ∈ B;

    где B = Div(D-π⁻¹_D(N)) и A = Flat(D-ι⁻¹_D(M)) — первые подходящие
    порождающие подмножества из DPEx и DIEx.
    """
    universe = exact.same_universe(d, pair.a)
    report = _new_report(
        universe,
        "resolving",
        {"base": exact.describe(d), "pair": cotorsion.describe_pair(pair)},
    )
    if not _hypotheses_met(report, d, injectives=True, projectives=True):
        return report
    dpex, diex, _ = galois.posets(d)
    divisible_side = _generating_subset(
        dpex, lambda e: relative.div_objects(d, e).members == pair.b.members
    )
    flat_side = _generating_subset(
        diex, lambda e: relative.flat_objects(d, e).members == pair.a.members
    )
    if divisible_side is None or flat_side is None:
        _skip(report, "generating_class")
        report.notes.append("No generating class realizes the pair as Div / Flat")
        return report
    _, n_gens = divisible_side
    _, m_gens = flat_side
    report.parameters["n"] = galois.subset_names(universe, n_gens)
    report.parameters["m"] = galois.subset_names(universe, m_gens)

    n_class = exact.additive_class(universe, n_gens)
    m_class = exact.additive_class(universe, m_gens)
    projectives = exact.proj_objects(d)
    injectives = exact.inj_objects(d)
    orbits = _orbits(d)
    resolving = cotorsion.is_resolving(d, pair.a)
    if mutation == MUTATIONS["resolving"]:
        resolving = resolving and injectives.issubset(pair.a)
    values = {
        "i": cotorsion.is_coresolving(d, pair.b),
        "ii": not _failures(
            orbits, lambda c: c.z in n_class and c.y in projectives and c.x not in pair.a
        ),
        "iii": resolving,
        "iv": not _failures(
            orbits, lambda c: c.x in m_class and c.y in injectives and c.z not in pair.b
        ),
    }
    _record_values(report, "resolving", values, {"pair": cotorsion.describe_pair(pair)})
    return report


# Характеризация через конфляции


def law_ses(
    d: ExactStructure,
    e: ExactStructure,
    side: Optional[str] = None,
    generators: Optional[Sequence[int]] = None,
    mutation: Optional[str] = None,
) -> LawReport:
    """
    Характеризации D-E-делимости (и двойственно плоскости) объекта X:

    (i) X ∈ Div(D-E);
    (ii) есть E-конфляция X ↣ Y ↠ Z с Y ∈ Inj(D);
    (iii) есть E-конфляция X ↣ Y ↠ Z с Y ∈ Div(D-E);
    (iv) при E = ι⁻¹_D(M): любой X → M (M ∈ M) пропускается через D-инъективный объект.

    Объекты без D-конфляции X ↣ I (I ∈ Inj(D)) внутри вселенной пропускаются.
    """
    universe = exact.same_universe(d, e)
    side, gens = _generation(e, side, generators)
    report = _new_report(
        universe,
        "ses",
        {
            "base": exact.describe(d),
            "structure": exact.describe(e),
            "side": side or "-",
            "generators": galois.subset_names(universe, gens) if side else "-",
        },
    )
    in_e = (lambda c: True) if mutation == MUTATIONS["ses"] else (lambda c: c.id in e.orbits)
    objects = universe.objects

    if _hypotheses_met(report, d, injectives=True, projectives=False):
        injectives = exact.inj_objects(d)
        divisible = relative.div_objects(d, e)
        for x in range(len(objects)):
            outgoing = universe.orbits_with(x=x)
            resolution = next(
                (c for c in outgoing if c.id in d.orbits and c.y in injectives), None
            )
            if resolution is None:
                _skip(report, "ses_divisible", [universe.name_of(x)])
                continue
            values = {
                "i": x in divisible,
                "ii": any(in_e(c) and c.y in injectives for c in outgoing),
                "iii": any(c.id in e.orbits and c.y in divisible for c in outgoing),
            }
            if side == "inj":
                values["iv"] = all(
                    repcat.extension_surjective(objects[g], resolution.inflation) for g in gens
                )
            _record_values(
                report,
                "ses_divisible",
                values,
                {"object": universe.name_of(x), "resolution": _orbit_payload(universe, resolution)},
            )

    if _hypotheses_met(report, d, injectives=False, projectives=True):
        projectives = exact.proj_objects(d)
        flat = relative.flat_objects(d, e)
        for z in range(len(objects)):
            incoming = universe.orbits_with(z=z)
            resolution = next(
                (c for c in incoming if c.id in d.orbits and c.y in projectives), None
            )
            if resolution is None:
                _skip(report, "ses_flat", [universe.name_of(z)])
                continue
            values = {
                "i": z in flat,
                "ii": any(in_e(c) and c.y in projectives for c in incoming),
                "iii": any(c.id in e.orbits and c.y in flat for c in incoming),
            }
            if side == "proj":
                values["iv"] = all(
                    repcat.lifting_surjective(objects[g], resolution.deflation) for g in gens
                )
            _record_values(
                report,
                "ses_flat",
                values,
                {"object": universe.name_of(z), "resolution": _orbit_payload(universe, resolution)},
            )
    return report


# Совершенные пары и (накрытия, оболочки)


def _unconfirmed_existence(values: Dict[str, bool]) -> bool:
    """Существование в (iii), (iv) подтверждается только найденной внутри окна конфляцией."""
    return not (values["iii"] and values["iv"]) and (values["i"] or values["ii"])


def _covenv_divisible(
    report: LawReport,
    d: ExactStructure,
    pair: CotorsionPair,
    mutation: Optional[str],
) -> None:
    universe = d.universe
    e = galois.phi_tilde(d, pair)
    if relative.flat_objects(d, e).members != pair.a.members or not exact.leq(e, d):
        _skip(report, "realization")
        report.notes.append(f"{exact.describe(e)} does not realize A as its flat class")
        return
    filtered = mutation != MUTATIONS["covenv"]
    divisible = relative.div_objects_rel(d, e, pair.a)
    for x in range(len(universe.objects)):
        if not relative.in_window(universe, x):
            _skip(report, "covenv_divisible", [universe.name_of(x)])
            continue
        witness = cotorsion.envelope(d, pair.b, x)
        if witness is None or not relative.in_window(universe, universe.conflations[witness.orbit].y):
            _skip(report, "covenv_divisible", [universe.name_of(x)])
            continue
        hull = universe.conflations[witness.orbit].y
        candidates = [
            c
            for c in universe.orbits_with(x=x)
            if c.id in e.orbits
            and (not filtered or c.z in pair.a)
            and relative.in_window(universe, c.y)
        ]
        values = {
            "i": x in divisible,
            "ii": hull in divisible,
            "iii": any(c.y in pair.b and c.y in divisible for c in candidates),
            "iv": any(c.y in divisible for c in candidates),
        }
        if _unconfirmed_existence(values):
            _skip(report, "covenv_divisible", [universe.name_of(x)])
            continue
        _record_values(
            report,
            "covenv_divisible",
            values,
            {
                "object": universe.name_of(x),
                "structure": exact.describe(e),
                "envelope": _orbit_payload(universe, universe.conflations[witness.orbit]),
            },
        )


def _covenv_flat(
    report: LawReport,
    d: ExactStructure,
    pair: CotorsionPair,
    mutation: Optional[str],
) -> None:
    universe = d.universe
    e = galois.psi_tilde(d, pair)
    if relative.div_objects(d, e).members != pair.b.members or not exact.leq(e, d):
        _skip(report, "realization")
        report.notes.append(f"{exact.describe(e)} does not realize B as its divisible class")
        return
    filtered = mutation != MUTATIONS["covenv"]
    flat = relative.flat_objects_rel(d, e, pair.b)
    for z in range(len(universe.objects)):
        if not relative.in_window(universe, z):
            _skip(report, "covenv_flat", [universe.name_of(z)])
            continue
        witness = cotorsion.cover(d, pair.a, z)
        if witness is None or not relative.in_window(universe, universe.conflations[witness.orbit].y):
            _skip(report, "covenv_flat", [universe.name_of(z)])
            continue
        hull = universe.conflations[witness.orbit].y
        candidates = [
            c
            for c in universe.orbits_with(z=z)
            if c.id in e.orbits
            and (not filtered or c.x in pair.b)
            and relative.in_window(universe, c.y)
        ]
        values = {
            "i": z in flat,
            "ii": hull in flat,
            "iii": any(c.y in pair.a and c.y in flat for c in candidates),
            "iv": any(c.y in flat for c in candidates),
        }
        if _unconfirmed_existence(values):
            _skip(report, "covenv_flat", [universe.name_of(z)])
            continue
        _record_values(
            report,
            "covenv_flat",
            values,
            {
                "object": universe.name_of(z),
                "structure": exact.describe(e),
                "cover": _orbit_payload(universe, universe.conflations[witness.orbit]),
            },
        )


def law_covenv(d: ExactStructure, pair: CotorsionPair, mutation: Optional[str] = None) -> LawReport:
    """
    Для D-совершенной пары (A, B) четыре утверждения о каждом объекте окна
    разрешимости равносильны:

    (i) X является D-E-A-делимым, где E = ι⁻¹_D(B) (так что A = Flat(D-E), E ⊆ D);
    (ii) B-оболочка X относительно D является D-E-A-делимой;
    (iii) есть E-конфляция X ↣ B' ↠ A' с A' ∈ A и D-E-A-делимым B' ∈ B;
    (iv) есть E-конфляция X ↣ Y ↠ A' с A' ∈ A и D-E-A-делимым Y.

    Двойственно для D-E-B-плоских объектов, E = π⁻¹_D(A), и A-накрытий.
    Пары без подтверждённой совершенности пропускаются с указанием причины;
    экземпляры, где конфляции (iii), (iv) не найдены внутри окна, а (i) или (ii)
    истинны, считаются пропущенными.
    """
    universe = exact.same_universe(d, pair.a)
    report = _new_report(
        universe,
        "covenv",
        {"base": exact.describe(d), "pair": cotorsion.describe_pair(pair)},
    )
    verdict = cotorsion.is_perfect(pair)
    if verdict.value is not True:
        _skip(report, "perfection")
        report.notes.append(f"Pair is D-perfect: {verdict.label()}")
        logger.warning(f"covenv skipped for {cotorsion.describe_pair(pair)}: perfect={verdict.label()}")
        return report
    _covenv_divisible(report, d, pair, mutation)
    _covenv_flat(report, d, pair, mutation)
    return report


# Замкнутость классов


def _record_failures(report: LawReport, statement: str, candidates: int, failures: List[dict]) -> None:
    report.checked += candidates
    report.violations.extend(Violation(statement, witness) for witness in failures)


def law_closure_de(
    d: ExactStructure,
    e: ExactStructure,
    side: Optional[str] = None,
    generators: Optional[Sequence[int]] = None,
) -> LawReport:
    """
    Свойства замкнутости Div(D-E) и Flat(D-E).

    Проверяются:
    1. Div замкнут относительно D-расширений и E-инфляций; Flat — D-расширений и E-дефляций.
    2. Div и Flat замкнуты относительно конечных прямых сумм.
    3. Все объекты D-E-делимы (плоски) ⇔ D ⊆ E.
    4. Для E = π⁻¹_D(M): все объекты делимы ⇔ M ⊆ Proj(D);
       для E = ι⁻¹_D(M): все объекты плоски ⇔ M ⊆ Inj(D).
    """
    universe = exact.same_universe(d, e)
    side, gens = _generation(e, side, generators)
    report = _new_report(
        universe,
        "closure_de",
        {
            "base": exact.describe(d),
            "structure": exact.describe(e),
            "side": side or "-",
            "generators": galois.subset_names(universe, gens) if side else "-",
        },
    )
    divisible = relative.div_objects(d, e)
    flat = relative.flat_objects(d, e)
    d_orbits = _orbits(d)
    e_orbits = _orbits(e)

    for name, cls in (("divisible", divisible), ("flat", flat)):
        broken = relative.extension_closure_violations(d, cls)
        _record_failures(
            report,
            f"{name}_d_extensions",
            len(d_orbits),
            [_orbit_payload(universe, universe.conflations[i]) for i in broken],
        )
        pairs = relative.biproduct_violations(cls)
        _record_failures(
            report,
            f"{name}_biproducts",
            len(cls) * (len(cls) + 1) // 2,
            [{"summands": [universe.name_of(a), universe.name_of(b)]} for a, b in pairs],
        )
    _record_failures(
        report,
        "divisible_e_inflations",
        len(e_orbits),
        [
            _orbit_payload(universe, c)
            for c in e_orbits
            if c.y in divisible and c.x not in divisible
        ],
    )
    _record_failures(
        report,
        "flat_e_deflations",
        len(e_orbits),
        [_orbit_payload(universe, c) for c in e_orbits if c.y in flat and c.z not in flat],
    )

    everything = len(universe.objects)
    contained = exact.leq(d, e)
    _record_values(
        report,
        "all_divisible_iff_contained",
        {"all_divisible": len(divisible) == everything, "contained": contained},
        {"structure": exact.describe(e)},
    )
    _record_values(
        report,
        "all_flat_iff_contained",
        {"all_flat": len(flat) == everything, "contained": contained},
        {"structure": exact.describe(e)},
    )
    if side == "proj":
        _record_values(
            report,
            "all_divisible_iff_generators_projective",
            {
                "all_divisible": len(divisible) == everything,
                "generators_projective": set(gens) <= exact.proj_objects(d).members,
            },
            {"generators": galois.subset_names(universe, gens)},
        )
    elif side == "inj":
        _record_values(
            report,
            "all_flat_iff_generators_injective",
            {
                "all_flat": len(flat) == everything,
                "generators_injective": set(gens) <= exact.inj_objects(d).members,
            },
            {"generators": galois.subset_names(universe, gens)},
        )
    return report


def _relative_closure(
    report: LawReport,
    d: ExactStructure,
    cls: ObjectClass,
    name: str,
) -> None:
    universe = d.universe
    in_window = lambda i: relative.in_window(universe, i)  # noqa: E731
    candidates = [c for c in _orbits(d) if c.x in cls and c.z in cls]
    decided = [c for c in candidates if in_window(c.y)]
    for c in candidates:
        if not in_window(c.y):
            _skip(report, f"{name}_d_extensions", _orbit_names(universe, c))
    _record_failures(
        report,
        f"{name}_d_extensions",
        len(decided),
        [_orbit_payload(universe, c) for c in decided if c.y not in cls],
    )
    members = [i for i in cls.sorted() if in_window(i)]
    pairs = [(a, b) for i, a in enumerate(members) for b in members[i:]]
    failures = []
    for a, b in pairs:
        total = universe_builder.biproduct_index(universe, a, b)
        if total is None or not in_window(total):
            _skip(report, f"{name}_biproducts", [universe.name_of(a), universe.name_of(b)])
            continue
        report.checked += 1
        if total not in cls:
            failures.append({"summands": [universe.name_of(a), universe.name_of(b)]})
    _record_failures(report, f"{name}_biproducts", 0, failures)


def law_closure_rel(d: ExactStructure, e: ExactStructure, a: ObjectClass) -> LawReport:
    """
    Замкнутость A-относительно делимых и плоских объектов внутри окна разрешимости.

    Проверяются:
    1. Если A замкнут относительно E-дефляций, Div(D-E-A) замкнут относительно D-расширений.
    2. Если A замкнут относительно E-инфляций, Flat(D-E-A) замкнут относительно D-расширений.
    3. Оба класса замкнуты относительно конечных прямых сумм.
    """
    universe = exact.same_universe(d, e, a)
    report = _new_report(
        universe,
        "closure_rel",
        {
            "base": exact.describe(d),
            "structure": exact.describe(e),
            "class": ",".join(a.names()),
        },
    )
    e_orbits = _orbits(e)
    closed_under_deflations = all(c.z in a for c in e_orbits if c.y in a)
    closed_under_inflations = all(c.x in a for c in e_orbits if c.y in a)

    divisible = relative.div_objects_rel(d, e, a)
    if closed_under_deflations:
        _relative_closure(report, d, divisible, "relative_divisible")
    else:
        _skip(report, "closure_hypothesis")
        report.notes.append("Class is not closed under E-deflations; divisible closure not required")
    flat = relative.flat_objects_rel(d, e, a)
    if closed_under_inflations:
        _relative_closure(report, d, flat, "relative_flat")
    else:
        _skip(report, "closure_hypothesis")
        report.notes.append("Class is not closed under E-inflations; flat closure not required")
    return report


# Полный прогон


def _distinct_classes(pairs: Iterable[CotorsionPair], universe: Universe) -> List[ObjectClass]:
    seen: Dict[frozenset, ObjectClass] = {}
    for cls in [exact.all_objects(universe)] + [c for p in pairs for c in (p.a, p.b)]:
        seen.setdefault(cls.members, cls)
    return [seen[key] for key in sorted(seen, key=lambda m: (len(m), sorted(m)))]


def generator_disagreements(reports: Sequence[LawReport]) -> List[Tuple[str, str]]:
    """
    Найти конфигурации, для которых разные порождающие подмножества одной структуры
    дают разный результат закона.

    Returns:
        Пары (закон, описание конфигурации без порождающих) в порядке первого появления.
    """
    outcomes: Dict[Tuple[str, str], set] = {}
    for report in reports:
        if "generators" not in report.parameters:
            continue
        rest = ", ".join(
            f"{k}={v}" for k, v in sorted(report.parameters.items()) if k != "generators"
        )
        outcomes.setdefault((report.law, rest), set()).add(report.passed)
    return [key for key, seen in outcomes.items() if len(seen) > 1]


def run_all(universe: Universe, config: Optional[LawConfig] = None) -> List[LawReport]:
    """
    Запустить выбранные законы на всех конфигурациях, перечисленных через DPEx, DIEx и DCot.

    Returns:
        Отчёты в каноническом порядке (закон, затем конфигурация).

    Raises:
        LawError: если конфигурация содержит неизвестный закон или порчу.
    """
    config = config or LawConfig()
    config.validate()
    d = config.base or exact.maximal_structure(universe)
    exact.same_universe(d, exact.all_objects(universe))
    dpex, diex, dcot = galois.posets(d)
    logger.info(
        f"Running laws {list(config.laws)} over |DPEx|={len(dpex.elements)}, "
        f"|DIEx|={len(diex.elements)}, |DCot|={len(dcot.elements)}"
    )

    generated: List[Tuple[ExactStructure, str, Tuple[int, ...]]] = []
    for poset, side in ((dpex, "proj"), (diex, "inj")):
        for element, subsets in zip(poset.elements, poset.generating):
            chosen = subsets if config.sweep_generators else subsets[:1]
            generated.extend((element, side, subset) for subset in chosen)
    structures: List[ExactStructure] = []
    for element in dpex.elements + diex.elements:
        if all(element.orbits != known.orbits for known in structures):
            structures.append(element)
    pairs = dcot.elements
    classes = _distinct_classes(pairs, universe)

    tasks: List[Callable[[], LawReport]] = []
    for law in config.laws:
        mutation = config.mutations.get(law)
        if law == "diagram":
            tasks.extend(partial(law_diagram, d, e, mutation) for e in structures)
        elif law == "cohcot":
            tasks.extend(
                partial(law_cohcot, d, e, p, s, g, mutation)
                for e, s, g in generated
                for p in pairs
            )
        elif law == "coh":
            tasks.extend(partial(law_coh, d, e, s, g, mutation) for e, s, g in generated)
        elif law == "resolving":
            tasks.extend(partial(law_resolving, d, p, mutation) for p in pairs)
        elif law == "ses":
            tasks.extend(partial(law_ses, d, e, s, g, mutation) for e, s, g in generated)
        elif law == "covenv":
            tasks.extend(partial(law_covenv, d, p, mutation) for p in pairs)
        elif law == "closure_de":
            tasks.extend(partial(law_closure_de, d, e, s, g) for e, s, g in generated)
        elif law == "closure_rel":
            tasks.extend(partial(law_closure_rel, d, e, a) for e in structures for a in classes)

    reports = ordered_map(lambda task: task(), tasks)
    failed = [r for r in reports if not r.passed]
    if failed:
        logger.warning(f"{len(failed)} of {len(reports)} law reports have violations")
    else:
        logger.info(f"All {len(reports)} law reports passed")
    for law, configuration in generator_disagreements(reports):
        logger.warning(f"Law {law} depends on the generating subset for {configuration}")
    return reports


def count_violations(reports: Sequence[LawReport]) -> int:
    return sum(len(r.violations) for r in reports)


def skipped_within(report: LawReport, universe: Universe) -> int:
    """
    Число пропусков отчёта, все классы которых хранятся в universe.

    Для отчёта, полученного на большей границе, и вселенной меньшей границы
    результат сравним со skipped отчёта меньшей границы и не превосходит его.
    """
    names = set(universe.names)
    return sum(1 for s in report.skips if set(s.objects) <= names)
