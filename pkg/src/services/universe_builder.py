"""Построение вселенной: классы изоморфизма объектов и орбиты конфляций."""

import itertools
import logging
from collections import Counter
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.models.quiver import Quiver
from src.models.representation import Conflation, Morphism, Representation
from src.models.universe import CanonicalConflation, Universe
from src.services import ffmat, repcat
from src.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

MAX_BOUND = 6
MAX_LAYER_CANDIDATES = 2_000_000


class UniverseError(Exception):
    """Исключение для ошибок построения и использования вселенной."""

    pass


class BoundaryError(UniverseError):
    """Объект или конфигурация выходит за границу вселенной."""

    pass


def dimension_vectors(vertex_count: int, total: int) -> List[Tuple[int, ...]]:
    """Векторы размерностей с данной суммой, в убывающем лексикографическом порядке."""
    vectors = [
        dims
        for dims in itertools.product(range(total + 1), repeat=vertex_count)
        if sum(dims) == total
    ]
    return sorted(vectors, reverse=True)


def _signature(rep: Representation) -> tuple:
    return (rep.dims, repcat.path_ranks(rep))


def _layer_classes(quiver: Quiver, p: int, dims: Tuple[int, ...]) -> List[Representation]:
    """Представители классов изоморфизма с данным вектором размерностей."""
    shapes = [(dims[t], dims[s]) for s, t in quiver.arrows]
    entries = sum(r * c for r, c in shapes)
    if p**entries > MAX_LAYER_CANDIDATES:
        raise UniverseError(
            f"Dimension vector {dims} needs {p}^{entries} candidate tuples; "
            f"the limit is {MAX_LAYER_CANDIDATES}"
        )
    classes: List[Representation] = []
    buckets: Dict[tuple, List[Representation]] = {}
    for flat in itertools.product(range(p), repeat=entries):
        maps, offset = [], 0
        for rows, cols in shapes:
            maps.append(np.array(flat[offset : offset + rows * cols], dtype=np.int64).reshape(rows, cols))
            offset += rows * cols
        rep = repcat.make_representation(quiver, p, dims, maps)
        bucket = buckets.setdefault(_signature(rep), [])
        if any(repcat.find_iso(known, rep) is not None for known in bucket):
            continue
        bucket.append(rep)
        classes.append(rep)
    return classes


def _decompose(objects: List[Representation]) -> List[Tuple[int, ...]]:
    """Разложения Крулля–Шмидта: слагаемые находятся среди меньших классов."""
    summands: List[Tuple[int, ...]] = []
    by_dims: Dict[Tuple[int, ...], List[int]] = {}
    for index, rep in enumerate(objects):
        by_dims.setdefault(rep.dims, []).append(index)
    indecomposable: List[int] = []
    for index, rep in enumerate(objects):
        if rep.total_dim == 0:
            summands.append(())
            continue
        found: Optional[Tuple[int, ...]] = None
        for part in indecomposable:
            part_dims = objects[part].dims
            rest = tuple(a - b for a, b in zip(rep.dims, part_dims))
            if min(rest) < 0 or sum(rest) == 0:
                continue
            for other in by_dims.get(rest, []):
                if other >= index:
                    continue
                total, _, _ = repcat.biproduct([objects[part], objects[other]])
                if repcat.find_iso(total, rep) is not None:
                    found = tuple(sorted((part,) + summands[other]))
                    break
            if found:
                break
        if found is None:
            found = (index,)
            indecomposable.append(index)
        summands.append(found)
    return summands


def _names(
    quiver: Quiver, p: int, bound: int, objects: List[Representation], summands: List[Tuple[int, ...]]
) -> List[str]:
    names = [""] * len(objects)
    names[0] = "0"
    draft = Universe(quiver=quiver, p=p, bound=bound, objects=objects, summands=summands, names=names)
    special = [
        ("S", repcat.simple),
        ("P", repcat.projective_indecomposable),
        ("I", repcat.injective_indecomposable),
    ]
    for prefix, factory in special:
        for vertex in range(quiver.vertex_count):
            rep = factory(quiver, p, vertex)
            if rep.total_dim > bound:
                continue
            index = classify(draft, rep)
            if not names[index]:
                names[index] = f"{prefix}{quiver.label(vertex)}"
    for index, parts in enumerate(summands):
        if parts == (index,) and not names[index]:
            names[index] = f"M{index}"
    for index, parts in enumerate(summands):
        if names[index]:
            continue
        counts = Counter(parts)
        names[index] = "+".join(
            names[part] if counts[part] == 1 else f"{names[part]}^{counts[part]}"
            for part in sorted(counts)
        )
    return names


def finalize(quiver: Quiver, p: int, bound: int, objects: List[Representation]) -> Universe:
    """Собрать вселенную по списку объектов: разложения и имена."""
    summands = _decompose(objects)
    names = _names(quiver, p, bound, objects, summands)
    return Universe(quiver=quiver, p=p, bound=bound, objects=objects, summands=summands, names=names)


def enumerate_objects(quiver: Quiver, p: int, bound: int) -> Universe:
    """
    Перечислить классы изоморфизма представлений суммарной размерности ≤ bound.

    Args:
        quiver: Ациклический колчан.
        p: Характеристика поля.
        bound: Граница суммарной размерности.

    Returns:
        Вселенная без таблицы конфляций.

    Raises:
        UniverseError: если граница превышает MAX_BOUND или слой слишком велик.
    """
    ffmat.check_prime(p)
    if bound > MAX_BOUND or bound < 0:
        raise UniverseError(f"Bound {bound} is outside the supported range 0..{MAX_BOUND}")
    logger.info(f"Enumerating objects of {quiver.spec()} over F_{p} up to dimension {bound}")
    layers = [
        dims
        for total in range(bound + 1)
        for dims in dimension_vectors(quiver.vertex_count, total)
    ]
    objects: List[Representation] = []
    for classes in ordered_map(lambda dims: _layer_classes(quiver, p, dims), layers):
        objects.extend(classes)
    universe = finalize(quiver, p, bound, objects)
    logger.info(
        f"Found {len(objects)} classes, {len(universe.indecomposables)} indecomposable"
    )
    return universe


def _signature_index(universe: Universe) -> Dict[tuple, List[int]]:
    index = universe.cache.get("signature_index")
    if index is None:
        index = {}
        for i, rep in enumerate(universe.objects):
            index.setdefault(_signature(rep), []).append(i)
        universe.cache["signature_index"] = index
    return index


def classify_with_iso(universe: Universe, rep: Representation) -> Tuple[int, Morphism]:
    """
    Найти хранимый класс и изоморфизм rep → objects[index].

    Raises:
        BoundaryError: если размерность rep больше границы.
        UniverseError: если класс не найден (таблица неполна).
    """
    if rep.total_dim > universe.bound:
        raise BoundaryError(
            f"Object of dimension {rep.total_dim} exceeds the bound {universe.bound}"
        )
    key = ("classify", rep)
    cached = universe.cache.get(key)
    if cached is not None:
        return cached
    for index in _signature_index(universe).get(_signature(rep), []):
        iso = repcat.find_iso(rep, universe.objects[index])
        if iso is not None:
            universe.cache[key] = (index, iso)
            return index, iso
    raise UniverseError(f"Representation with dims {rep.dims} matches no stored class")


def classify(universe: Universe, rep: Representation) -> int:
    return classify_with_iso(universe, rep)[0]


def injective_maps(x: Representation, y: Representation) -> List[Morphism]:
    """Все поточечно инъективные морфизмы X → Y в лексикографическом порядке."""
    if x.total_dim == 0:
        return [repcat.zero_morphism(x, y)]
    basis = repcat.hom_basis(x, y)
    if not basis:
        return []
    vertices = [i for i, d in enumerate(x.dims) if d > 0]
    stacks = {i: np.stack([f.components[i] for f in basis]) for i in vertices}
    result = []
    for coeffs in repcat.coefficient_chunks(len(basis), x.p):
        mask = np.ones(coeffs.shape[0], dtype=bool)
        for i in vertices:
            candidates = np.mod(np.einsum("nk,kab->nab", coeffs, stacks[i]), x.p)
            mask &= ffmat.batch_rank(candidates, x.p) == x.dims[i]
        for row in np.nonzero(mask)[0]:
            result.append(repcat.linear_combination(basis, coeffs[row], x, y))
    return result


def surjective_maps(y: Representation, z: Representation) -> List[Morphism]:
    """Все поточечно сюръективные морфизмы Y → Z в лексикографическом порядке."""
    if z.total_dim == 0:
        return [repcat.zero_morphism(y, z)]
    basis = repcat.hom_basis(y, z)
    if not basis:
        return []
    vertices = [i for i, d in enumerate(z.dims) if d > 0]
    stacks = {i: np.stack([f.components[i] for f in basis]) for i in vertices}
    result = []
    for coeffs in repcat.coefficient_chunks(len(basis), y.p):
        mask = np.ones(coeffs.shape[0], dtype=bool)
        for i in vertices:
            candidates = np.mod(np.einsum("nk,kab->nab", coeffs, stacks[i]), y.p)
            mask &= ffmat.batch_rank(candidates, y.p) == z.dims[i]
        for row in np.nonzero(mask)[0]:
            result.append(repcat.linear_combination(basis, coeffs[row], y, z))
    return result


def stored_deflation(universe: Universe, inflation: Morphism) -> Tuple[int, Morphism]:
    """Коядро инфляции, перенесённое на хранимый объект."""
    quotient_rep, quotient = repcat.cokernel(inflation)
    z, iso = classify_with_iso(universe, quotient_rep)
    return z, repcat.compose(iso, quotient)


def _pair_orbits(universe: Universe, x: int, y: int) -> List[Tuple[Morphism, int, Morphism]]:
    """Локальные орбиты конфляций objects[x] ↣ objects[y] ↠ ·."""
    source, target = universe.objects[x], universe.objects[y]
    representatives: List[Tuple[Morphism, int, Morphism]] = []
    for inflation in injective_maps(source, target):
        z, deflation = stored_deflation(universe, inflation)
        if any(
            z == known_z and repcat.equivalent_inflations(inflation, known)
            for known, known_z, _ in representatives
        ):
            continue
        representatives.append((inflation, z, deflation))
    return representatives


def _fits(small: Tuple[int, ...], large: Tuple[int, ...]) -> bool:
    return all(a <= b for a, b in zip(small, large))


def _candidate_pairs(universe: Universe) -> List[Tuple[int, int]]:
    return [
        (x, y)
        for x, source in enumerate(universe.objects)
        for y, target in enumerate(universe.objects)
        if _fits(source.dims, target.dims)
    ]


def orbit_counts(universe: Universe) -> Dict[Tuple[int, int, int], int]:
    """Число орбит конфляций X ↣ Y ↠ Z для каждой тройки (x, y, z), пересчитанное заново."""
    pairs = _candidate_pairs(universe)
    results = ordered_map(lambda pair: _pair_orbits(universe, *pair), pairs)
    counts: Counter = Counter()
    for (x, y), orbits in zip(pairs, results):
        for _, z, _ in orbits:
            counts[(x, y, z)] += 1
    return dict(counts)


def enumerate_conflations(universe: Universe) -> Universe:
    """
    Перечислить орбиты конфляций между хранимыми объектами.

    Для каждой пары (X, Y) перебираются все инъективные морфизмы, коядро
    классифицируется, орбиты под действием Aut(X) × Aut(Y) различаются через
    изоморфизм морфизмов как представлений удвоенного колчана.
    """
    logger.info("Enumerating conflation orbits")
    pairs = _candidate_pairs(universe)
    results = ordered_map(lambda pair: _pair_orbits(universe, *pair), pairs)
    conflations: List[CanonicalConflation] = []
    for (x, y), orbits in zip(pairs, results):
        for inflation, z, deflation in orbits:
            conflations.append(
                CanonicalConflation(
                    id=len(conflations),
                    x=x,
                    y=y,
                    z=z,
                    inflation=inflation,
                    deflation=deflation,
                    splits=repcat.splits(Conflation(inflation, deflation)),
                )
            )
    universe.conflations = conflations
    universe.cache.clear()
    logger.info(f"Found {len(conflations)} conflation orbits")
    return universe


def build_universe(quiver: Quiver, p: int, bound: int) -> Universe:
    """Полная вселенная: объекты и орбиты конфляций."""
    return enumerate_conflations(enumerate_objects(quiver, p, bound))


def orbit_of(universe: Universe, inflation: Morphism) -> int:
    """
    Номер орбиты конфляции с данной инфляцией.

    Raises:
        BoundaryError: если средний объект больше границы.
        UniverseError: если морфизм не инъективен или орбита не найдена.
    """
    if not repcat.is_injective(inflation):
        raise UniverseError("Orbit lookup needs an injective morphism")
    x, iso_x = classify_with_iso(universe, inflation.source)
    y, iso_y = classify_with_iso(universe, inflation.target)
    transported = repcat.compose(iso_y, repcat.compose(inflation, repcat.inverse(iso_x)))
    key = ("orbit", transported)
    cached = universe.cache.get(key)
    if cached is not None:
        return cached
    candidates = universe.orbits_with(x=x, y=y)
    if len(candidates) > 1:
        z, _ = stored_deflation(universe, transported)
        candidates = [c for c in candidates if c.z == z]
    if len(candidates) == 1:
        found = candidates[0].id
    else:
        matches = [
            c.id for c in candidates if repcat.equivalent_inflations(transported, c.inflation)
        ]
        if not matches:
            raise UniverseError(f"No stored orbit for an inflation {x} -> {y}")
        found = matches[0]
    universe.cache[key] = found
    return found


def orbit_of_conflation(universe: Universe, conflation: Conflation) -> int:
    return orbit_of(universe, conflation.inflation)


def inflation_table(universe: Universe, x: int, y: int) -> List[Tuple[Morphism, int]]:
    """Все инфляции objects[x] → objects[y] с номерами их орбит."""
    key = ("inflations", x, y)
    table = universe.cache.get(key)
    if table is None:
        source, target = universe.objects[x], universe.objects[y]
        table = [(f, orbit_of(universe, f)) for f in injective_maps(source, target)]
        universe.cache[key] = table
    return table


def deflation_table(universe: Universe, y: int, z: int) -> List[Tuple[Morphism, int]]:
    """Все дефляции objects[y] → objects[z] с номерами орбит их конфляций."""
    key = ("deflations", y, z)
    table = universe.cache.get(key)
    if table is None:
        source, target = universe.objects[y], universe.objects[z]
        table = []
        for d in surjective_maps(source, target):
            _, inclusion = repcat.kernel(d)
            table.append((d, orbit_of(universe, inclusion)))
        universe.cache[key] = table
    return table


def conflation(universe: Universe, orbit_id: int) -> Conflation:
    record = universe.conflations[orbit_id]
    return Conflation(inflation=record.inflation, deflation=record.deflation)


def additive_members(universe: Universe, indecomposable_members: Sequence[int]) -> frozenset:
    """Классы, все неразложимые слагаемые которых лежат в данном множестве."""
    allowed = set(indecomposable_members)
    return frozenset(
        index for index, parts in enumerate(universe.summands) if set(parts) <= allowed
    )


def indecomposable_parts(universe: Universe, members: Sequence[int]) -> Tuple[int, ...]:
    """Неразложимые слагаемые членов класса (отсортированные, без повторов)."""
    return tuple(sorted({part for index in members for part in universe.summands[index]}))


def biproduct_index(universe: Universe, *members: int) -> Optional[int]:
    """Индекс класса прямой суммы хранимых классов или None за границей."""
    lookup = universe.cache.get("summand_index")
    if lookup is None:
        lookup = {parts: index for index, parts in enumerate(universe.summands)}
        universe.cache["summand_index"] = lookup
    parts = tuple(sorted(part for m in members for part in universe.summands[m]))
    return lookup.get(parts)
