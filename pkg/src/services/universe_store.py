"""Сохранение и загрузка вселенной в текстовом JSON-документе."""

import hashlib
import json
import logging
from typing import Any, Dict, List

from src.models.quiver import Quiver
from src.models.representation import Conflation
from src.models.universe import CanonicalConflation, Universe
from src.services import repcat, universe_builder
from src.services.repcat import RepCatError
from src.utils.validators import FORMAT_VERSION, validate_universe_payload

logger = logging.getLogger(__name__)


class UniverseFormatError(Exception):
    """Исключение для повреждённых или несовместимых файлов вселенной."""

    pass


def _flat(matrix) -> List[int]:
    return [int(v) for v in matrix.reshape(-1)]


def to_document(universe: Universe) -> Dict[str, Any]:
    """Документ вселенной: матрицы построчно в виде плоских списков целых."""
    quiver = universe.quiver
    return {
        "version": FORMAT_VERSION,
        "quiver": {
            "vertices": [quiver.label(v) for v in range(quiver.vertex_count)],
            "arrows": [[s, t] for s, t in quiver.arrows],
        },
        "prime": universe.p,
        "bound": universe.bound,
        "objects": [
            {
                "id": index,
                "dims": list(rep.dims),
                "arrow_matrices": [_flat(m) for m in rep.maps],
            }
            for index, rep in enumerate(universe.objects)
        ],
        "conflations": [
            {
                "id": c.id,
                "x": c.x,
                "y": c.y,
                "z": c.z,
                "inflation_components": [_flat(m) for m in c.inflation.components],
            }
            for c in universe.conflations
        ],
    }


def dumps(universe: Universe) -> str:
    return json.dumps(to_document(universe), indent=2) + "\n"


def universe_digest(universe: Universe) -> str:
    """SHA-256 канонической формы документа (ключи отсортированы, без пробелов)."""
    key = "digest"
    digest = universe.cache.get(key)
    if digest is None:
        canonical = json.dumps(to_document(universe), sort_keys=True, separators=(",", ":"))
        digest = hashlib.sha256(canonical.encode("utf-8")).hexdigest()
        universe.cache[key] = digest
    return digest


def save(universe: Universe, path: str) -> str:
    """
    Записать вселенную в файл.

    Returns:
        Путь к файлу.

    Raises:
        IOError: при ошибке записи.
    """
    try:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(dumps(universe))
    except OSError as e:
        raise IOError(f"Failed to write universe file: {e}") from e
    logger.info(f"Saved universe with {len(universe.objects)} classes to {path}")
    return path


def _check_distinct(universe: Universe) -> None:
    buckets: Dict[tuple, List[int]] = {}
    for index, rep in enumerate(universe.objects):
        if rep.total_dim > universe.bound:
            raise UniverseFormatError(f"Object {index} exceeds the bound {universe.bound}")
        bucket = buckets.setdefault((rep.dims, repcat.path_ranks(rep)), [])
        for other in bucket:
            if repcat.find_iso(universe.objects[other], rep) is not None:
                raise UniverseFormatError(
                    f"Objects {other} and {index} are isomorphic (duplicated class)"
                )
        bucket.append(index)


def _load_conflations(universe: Universe, records: List[Dict[str, Any]]) -> List[CanonicalConflation]:
    conflations: List[CanonicalConflation] = []
    for record in records:
        x, y, z = record["x"], record["y"], record["z"]
        source, target = universe.objects[x], universe.objects[y]
        try:
            inflation = repcat.make_morphism(source, target, record["inflation_components"])
        except (RepCatError, ValueError) as e:
            raise UniverseFormatError(f"Conflation {record['id']}: {e}") from e
        if not repcat.is_injective(inflation):
            raise UniverseFormatError(f"Conflation {record['id']} has a non-injective inflation")
        try:
            found_z, deflation = universe_builder.stored_deflation(universe, inflation)
        except universe_builder.UniverseError as e:
            raise UniverseFormatError(f"Conflation {record['id']}: {e}") from e
        if found_z != z:
            raise UniverseFormatError(
                f"Conflation {record['id']} declares z={z} but its cokernel is class {found_z}"
            )
        for known in conflations:
            if (known.x, known.y, known.z) == (x, y, z) and repcat.equivalent_inflations(
                known.inflation, inflation
            ):
                raise UniverseFormatError(
                    f"Conflations {known.id} and {record['id']} lie in the same orbit"
                )
        conflations.append(
            CanonicalConflation(
                id=record["id"],
                x=x,
                y=y,
                z=z,
                inflation=inflation,
                deflation=deflation,
                splits=repcat.splits(Conflation(inflation, deflation)),
            )
        )
    return conflations


def _check_complete(universe: Universe) -> None:
    """Каждая орбита X ↣ Y ↠ Z между хранимыми объектами должна быть записана."""
    loaded: Dict[tuple, int] = {}
    for c in universe.conflations:
        loaded[(c.x, c.y, c.z)] = loaded.get((c.x, c.y, c.z), 0) + 1
    expected = universe_builder.orbit_counts(universe)
    missing = sorted(k for k, n in expected.items() if loaded.get(k, 0) < n)
    if missing:
        x, y, z = missing[0]
        raise UniverseFormatError(
            f"Conflation table is incomplete: {len(missing)} end triple(s) lack orbits, "
            f"first {universe.name_of(x)} -> {universe.name_of(y)} -> {universe.name_of(z)}"
        )
    extra = sorted(k for k, n in loaded.items() if n > expected.get(k, 0))
    if extra:
        raise UniverseFormatError(f"Conflation table lists more orbits than exist for ends {extra[0]}")


def loads(text: str) -> Universe:
    """
    Разобрать документ вселенной и проверить все инварианты.

    Raises:
        UniverseFormatError: если документ повреждён или нарушает инварианты.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise UniverseFormatError(f"Malformed universe file: {e}") from e
    if not isinstance(payload, dict):
        raise UniverseFormatError("Universe document must be a JSON object")
    is_valid, error_msg = validate_universe_payload(payload)
    if not is_valid:
        raise UniverseFormatError(f"Invalid universe file: {error_msg}")

    quiver = Quiver(
        vertex_count=len(payload["quiver"]["vertices"]),
        arrows=tuple(tuple(a) for a in payload["quiver"]["arrows"]),
        labels=tuple(str(v) for v in payload["quiver"]["vertices"]),
    )
    p, bound = payload["prime"], payload["bound"]
    objects = []
    for record in payload["objects"]:
        try:
            objects.append(
                repcat.make_representation(quiver, p, record["dims"], record["arrow_matrices"])
            )
        except (RepCatError, ValueError) as e:
            raise UniverseFormatError(f"Object {record['id']}: {e}") from e

    try:
        universe = universe_builder.finalize(quiver, p, bound, objects)
    except universe_builder.UniverseError as e:
        raise UniverseFormatError(f"Inconsistent object table: {e}") from e
    _check_distinct(universe)
    universe.conflations = _load_conflations(universe, payload["conflations"])
    _check_complete(universe)
    universe.cache.clear()
    return universe


def load(path: str) -> Universe:
    """
    Загрузить вселенную из файла.

    Raises:
        UniverseFormatError: если файл не читается или повреждён.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as e:
        raise UniverseFormatError(f"Cannot read universe file: {e}") from e
    universe = loads(text)
    logger.info(
        f"Loaded universe {path}: {len(universe.objects)} classes, "
        f"{len(universe.conflations)} conflation orbits"
    )
    return universe
