"""Пары кручения относительно D, (пред)накрытия и (пред)оболочки, совершенность."""

import logging
from typing import List, Optional, Tuple

import numpy as np

from src.models.reports import ComparisonReport
from src.models.representation import Conflation, Morphism
from src.models.structures import (
    ApproxWitness,
    BoundedVerdict,
    Certificate,
    CotorsionPair,
    ExactStructure,
    ObjectClass,
)
from src.services import exact, ffmat, relative, repcat, universe_builder
from src.services.universe_builder import BoundaryError, UniverseError

logger = logging.getLogger(__name__)

COVER_KINDS = ("precover", "cover")
ENVELOPE_KINDS = ("preenvelope", "envelope")


class CotorsionError(Exception):
    """Исключение для нарушенных инвариантов пар кручения и предусловий сравнения."""

    pass


# Пары кручения


def make_pair(d: ExactStructure, a: ObjectClass, b: ObjectClass) -> CotorsionPair:
    """
    Собрать D-пару кручения (A, B) после проверки A = ^⊥B, B = A^⊥ и замкнутости обоих классов
    относительно D-расширений.

    Raises:
        CotorsionError: если (A, B) не D-пара кручения.
    """
    if not is_cotorsion_pair(d, a, b):
        raise CotorsionError(f"Classes {a.names()} / {b.names()} do not form a cotorsion pair")
    for cls in (a, b):
        broken = relative.extension_closure_violations(d, cls)
        if broken:
            raise CotorsionError(f"Class {cls.names()} is not closed under extensions: orbits {broken}")
    return CotorsionPair(base=d, a=a, b=b)


def pair_generated(d: ExactStructure, a: ObjectClass) -> CotorsionPair:
    """Пара (^⊥A, (^⊥A)^⊥), порождённая классом A."""
    left = relative.perp_left(d, a)
    return make_pair(d, left, relative.perp_right(d, left))


def pair_cogenerated(d: ExactStructure, a: ObjectClass) -> CotorsionPair:
    """Пара (^⊥(A^⊥), A^⊥), копорождённая классом A."""
    right = relative.perp_right(d, a)
    return make_pair(d, relative.perp_left(d, right), right)


def is_cotorsion_pair(d: ExactStructure, a: ObjectClass, b: ObjectClass) -> bool:
    """A^⊥ = B и ^⊥B = A."""
    return (
        relative.perp_right(d, a).members == b.members
        and relative.perp_left(d, b).members == a.members
    )


def describe_pair(pair: CotorsionPair) -> str:
    return f"({','.join(pair.a.names())} | {','.join(pair.b.names())})"


def _search_conflations(d: ExactStructure, x: int, b: ObjectClass, a: ObjectClass, outgoing: bool):
    universe = d.universe
    orbits = universe.orbits_with(x=x) if outgoing else universe.orbits_with(z=x)
    for c in orbits:
        if c.id not in d.orbits:
            continue
        end = c.z if outgoing else c.x
        if c.y in b and end in a:
            return c
    return None


def enough_injectives(pair: CotorsionPair) -> BoundedVerdict:
    """
    Для каждого неразложимого X ищется D-конфляция X ↣ B ↠ A (B ∈ B, A ∈ A).

    Returns:
        yes, либо unknown-within-bound со списком объектов без найденного свидетеля.
    """
    d = pair.base
    missing = tuple(
        x
        for x in d.universe.indecomposables
        if _search_conflations(d, x, pair.b, pair.a, outgoing=True) is None
    )
    return BoundedVerdict(value=None if missing else True, skipped=missing)


def enough_projectives(pair: CotorsionPair) -> BoundedVerdict:
    """Для каждого неразложимого X ищется D-конфляция B ↣ A ↠ X (A ∈ A, B ∈ B)."""
    d = pair.base
    missing = tuple(
        x
        for x in d.universe.indecomposables
        if _search_conflations(d, x, pair.a, pair.b, outgoing=False) is None
    )
    return BoundedVerdict(value=None if missing else True, skipped=missing)


# Аппроксимации


def _is_minimal(f: Morphism, right: bool) -> bool:
    """
    right=True: каждое g ∈ End(Y) с f ∘ g = f обратимо (Y — источник f).
    right=False: каждое g ∈ End(Y) с g ∘ f = f обратимо (Y — цель f).

    Решения имеют вид id + h, где h пробегает ядро h ↦ f ∘ h (h ↦ h ∘ f).
    """
    y = f.source if right else f.target
    p = y.p
    basis = repcat.hom_basis(y, y)
    if not basis:
        return True
    length = repcat.hom_vector(f).size
    images = [repcat.compose(f, g) if right else repcat.compose(g, f) for g in basis]
    system = ffmat.stack_vectors([repcat.hom_vector(i) for i in images], length).T
    kernel = ffmat.kernel_basis(system, p)
    if not kernel:
        return True
    directions = np.stack(kernel)
    vertices = [i for i, dim in enumerate(y.dims) if dim > 0]
    stacks = {i: np.stack([g.components[i] for g in basis]) for i in vertices}
    for coeffs in repcat.coefficient_chunks(len(kernel), p):
        combos = np.mod(coeffs @ directions, p)
        for i in vertices:
            shifts = np.mod(
                np.einsum("nk,kab->nab", combos, stacks[i]) + ffmat.identity(y.dims[i])[None], p
            )
            if np.any(ffmat.batch_rank(shifts, p) < y.dims[i]):
                return False
    return True


def _cover_certificates(gens, universe, f: Morphism) -> Tuple[Certificate, ...]:
    certificates = []
    for g in gens:
        for original in repcat.hom_basis(universe.objects[g], f.target):
            factor = repcat.lift(original, f)
            certificates.append(Certificate(member=g, original=original, factor=factor))
    return tuple(certificates)


def _envelope_certificates(gens, universe, f: Morphism) -> Tuple[Certificate, ...]:
    certificates = []
    for g in gens:
        for original in repcat.hom_basis(f.source, universe.objects[g]):
            factor = repcat.extend(original, f)
            certificates.append(Certificate(member=g, original=original, factor=factor))
    return tuple(certificates)


def _cover_candidates(d: ExactStructure, a: ObjectClass, x: int):
    universe = d.universe
    gens = exact.generators(a)
    pool = exact.additive_class(universe, gens)
    for c in universe.orbits_with(z=x):
        if c.id in d.orbits and c.y in pool:
            if all(repcat.lifting_surjective(universe.objects[g], c.deflation) for g in gens):
                yield c, gens


def _envelope_candidates(d: ExactStructure, b: ObjectClass, x: int):
    universe = d.universe
    gens = exact.generators(b)
    pool = exact.additive_class(universe, gens)
    for c in universe.orbits_with(x=x):
        if c.id in d.orbits and c.y in pool:
            if all(repcat.extension_surjective(universe.objects[g], c.inflation) for g in gens):
                yield c, gens


def precover(d: ExactStructure, a: ObjectClass, x: int) -> Optional[ApproxWitness]:
    """
    A-предпокрытие X относительно D: первая в каноническом порядке D-дефляция
    Y ↠ X с Y ∈ add(A), через которую пропускается любой морфизм из A.

    Returns:
        ApproxWitness или None, если во вселенной предпокрытие не найдено.
    """
    universe = exact.same_universe(d, a)
    for c, gens in _cover_candidates(d, a, x):
        return ApproxWitness(
            kind="precover",
            orbit=c.id,
            morphism=c.deflation,
            certificates=_cover_certificates(gens, universe, c.deflation),
        )
    return None


def cover(d: ExactStructure, a: ObjectClass, x: int) -> Optional[ApproxWitness]:
    """A-накрытие: предпокрытие f, для которого каждое g с f ∘ g = f обратимо."""
    universe = exact.same_universe(d, a)
    for c, gens in _cover_candidates(d, a, x):
        if _is_minimal(c.deflation, right=True):
            return ApproxWitness(
                kind="cover",
                orbit=c.id,
                morphism=c.deflation,
                certificates=_cover_certificates(gens, universe, c.deflation),
            )
    return None


def preenvelope(d: ExactStructure, b: ObjectClass, x: int) -> Optional[ApproxWitness]:
    """B-предоболочка X относительно D: D-инфляция X ↣ Y с Y ∈ add(B)."""
    universe = exact.same_universe(d, b)
    for c, gens in _envelope_candidates(d, b, x):
        return ApproxWitness(
            kind="preenvelope",
            orbit=c.id,
            morphism=c.inflation,
            certificates=_envelope_certificates(gens, universe, c.inflation),
        )
    return None


def envelope(d: ExactStructure, b: ObjectClass, x: int) -> Optional[ApproxWitness]:
    """B-оболочка: предоболочка f, для которой каждое g с g ∘ f = f обратимо."""
    universe = exact.same_universe(d, b)
    for c, gens in _envelope_candidates(d, b, x):
        if _is_minimal(c.inflation, right=False):
            return ApproxWitness(
                kind="envelope",
                orbit=c.id,
                morphism=c.inflation,
                certificates=_envelope_certificates(gens, universe, c.inflation),
            )
    return None


def verify_witness(d: ExactStructure, cls: ObjectClass, witness: ApproxWitness) -> bool:
    """
    Перепроверить свидетеля по исходным матрицам.

    Валидируется:
    1. Морфизм — дефляция (накрытия) или инфляция (оболочки).
    2. Его конфляция лежит в D и в заявленной орбите.
    3. Средний объект лежит в add(класса).
    4. Сертификаты: факторизации решают уравнения и покрывают базисы Hom.
    5. Для накрытий и оболочек — условие на эндоморфизмы.
    """
    universe = d.universe
    f = witness.morphism
    on_cover_side = witness.kind in COVER_KINDS
    if on_cover_side:
        if not repcat.is_surjective(f):
            return False
        conflation = repcat.conflation_from_deflation(f)
        middle = f.source
    else:
        if not repcat.is_injective(f):
            return False
        conflation = repcat.conflation_from_inflation(f)
        middle = f.target
    try:
        orbit = universe_builder.orbit_of_conflation(universe, conflation)
        middle_index = universe_builder.classify(universe, middle)
    except UniverseError:
        return False
    if orbit != witness.orbit or orbit not in d.orbits:
        return False
    gens = exact.generators(cls)
    if middle_index not in exact.additive_class(universe, gens):
        return False
    for certificate in witness.certificates:
        if certificate.factor is None:
            return False
        if on_cover_side:
            rebuilt = repcat.compose(f, certificate.factor)
        else:
            rebuilt = repcat.compose(certificate.factor, f)
        if rebuilt != certificate.original:
            return False
    for g in gens:
        originals = [c.original for c in witness.certificates if c.member == g]
        member = universe.objects[g]
        if on_cover_side:
            expected, length = repcat.hom_dim(member, f.target), sum(
                a * b for a, b in zip(member.dims, f.target.dims)
            )
        else:
            expected, length = repcat.hom_dim(f.source, member), sum(
                a * b for a, b in zip(f.source.dims, member.dims)
            )
        if repcat.span_rank(originals, length, universe.p) != expected:
            return False
    if witness.kind == "cover":
        return _is_minimal(f, right=True)
    if witness.kind == "envelope":
        return _is_minimal(f, right=False)
    return True


def _approximation_verdict(d, cls, approx, preapprox) -> Tuple[Optional[bool], Tuple[int, ...]]:
    unknown = []
    for x in d.universe.indecomposables:
        if approx(d, cls, x) is not None:
            continue
        if preapprox(d, cls, x) is not None:
            return False, (x,)
        unknown.append(x)
    return (None if unknown else True), tuple(unknown)


def is_perfect(pair: CotorsionPair) -> BoundedVerdict:
    """
    A — D-накрывающий класс и B — D-оболочечный класс.

    no: найдено предпокрытие (предоболочка) без накрытия (оболочки) среди хранимых
    кандидатов; unknown-within-bound: для некоторых объектов предпокрытие не найдено.
    """
    d = pair.base
    covers, cover_gaps = _approximation_verdict(d, pair.a, cover, precover)
    envelopes, envelope_gaps = _approximation_verdict(d, pair.b, envelope, preenvelope)
    if covers is False or envelopes is False:
        return BoundedVerdict(value=False, skipped=cover_gaps + envelope_gaps)
    if covers is None or envelopes is None:
        return BoundedVerdict(value=None, skipped=cover_gaps + envelope_gaps)
    return BoundedVerdict(value=True)


# Резольвентные классы


def is_resolving(d: ExactStructure, m: ObjectClass) -> bool:
    """Proj(D) ⊆ M, замкнутость относительно D-расширений и ядер D-дефляций внутри M."""
    if not exact.proj_objects(d).issubset(m):
        return False
    if relative.extension_closure_violations(d, m):
        return False
    universe = d.universe
    return all(
        c.x in m
        for c in universe.conflations
        if c.id in d.orbits and c.y in m and c.z in m
    )


def is_coresolving(d: ExactStructure, m: ObjectClass) -> bool:
    """Inj(D) ⊆ M, замкнутость относительно D-расширений и коядер D-инфляций внутри M."""
    if not exact.inj_objects(d).issubset(m):
        return False
    if relative.extension_closure_violations(d, m):
        return False
    universe = d.universe
    return all(
        c.z in m
        for c in universe.conflations
        if c.id in d.orbits and c.x in m and c.y in m
    )


# Абсолютные аппроксимации


def _absolute_search(m: ObjectClass, x: int, envelope_side: bool, minimal: bool) -> Optional[Tuple[int, Morphism]]:
    universe = m.universe
    gens = exact.generators(m)
    source = universe.objects[x]
    for target in sorted(exact.additive_class(universe, gens).members):
        member = universe.objects[target]
        if envelope_side:
            maps = repcat.all_morphisms(source, member)
        else:
            maps = repcat.all_morphisms(member, source)
        for f in maps:
            if envelope_side:
                ok = all(repcat.extension_surjective(universe.objects[g], f) for g in gens)
            else:
                ok = all(repcat.lifting_surjective(universe.objects[g], f) for g in gens)
            if ok and (not minimal or _is_minimal(f, right=not envelope_side)):
                return target, f
    return None


def absolute_preenvelope(m: ObjectClass, x: int) -> Optional[Tuple[int, Morphism]]:
    """Морфизм X → M (M ∈ add(M)), через который пропускается любой X → M'."""
    return _absolute_search(m, x, envelope_side=True, minimal=False)


def absolute_envelope(m: ObjectClass, x: int) -> Optional[Tuple[int, Morphism]]:
    return _absolute_search(m, x, envelope_side=True, minimal=True)


def absolute_precover(m: ObjectClass, x: int) -> Optional[Tuple[int, Morphism]]:
    return _absolute_search(m, x, envelope_side=False, minimal=False)


def absolute_cover(m: ObjectClass, x: int) -> Optional[Tuple[int, Morphism]]:
    return _absolute_search(m, x, envelope_side=False, minimal=True)


def env_cover_comparison(d: ExactStructure, m: ObjectClass, side: str = "envelope") -> ComparisonReport:
    """
    Сравнить «M — D-оболочечный класс» с «M — оболочечный класс и Inj(D) ⊆ M»
    (для side="cover" — двойственно с Proj(D)).

    Raises:
        CotorsionError: если D не инъективно (проективно) порождена или side неизвестен.
    """
    exact.same_universe(d, m)
    kind = d.provenance.kind
    if side == "envelope":
        if kind not in ("inj_gen", "maximal"):
            raise CotorsionError("Envelope comparison needs an injectively generated base structure")
        relative_approx, absolute_approx, absolute_pre = envelope, absolute_envelope, absolute_preenvelope
        extremes = exact.inj_objects(d)
    elif side == "cover":
        if kind not in ("proj_gen", "maximal"):
            raise CotorsionError("Cover comparison needs a projectively generated base structure")
        relative_approx, absolute_approx, absolute_pre = cover, absolute_cover, absolute_precover
        extremes = exact.proj_objects(d)
    else:
        raise CotorsionError(f"Unknown comparison side {side!r}")

    witnesses: List[int] = []
    skipped: List[int] = []
    absolute_ok = True
    for x in d.universe.indecomposables:
        if relative_approx(d, m, x) is None:
            witnesses.append(x)
        if absolute_approx(m, x) is None:
            if absolute_pre(m, x) is None:
                skipped.append(x)
            else:
                absolute_ok = False
    report = ComparisonReport(
        side=side,
        relative=not witnesses,
        absolute=absolute_ok and not skipped,
        contains_extremes=extremes.issubset(m),
        witnesses=witnesses,
        skipped=skipped,
    )
    if not report.agrees:
        logger.warning(f"Relative and absolute {side} notions disagree for {m.names()}")
    return report


def conflation_payload(universe, conflation: Conflation) -> dict:
    """Конфляция с классами концов и полными матрицами."""
    payload = {
        "inflation": repcat.morphism_payload(conflation.inflation),
        "deflation": repcat.morphism_payload(conflation.deflation),
    }
    try:
        payload["orbit"] = universe_builder.orbit_of_conflation(universe, conflation)
    except BoundaryError:
        payload["orbit"] = None
    return payload
