"""Функции валидации колчанов, представлений и документов вселенной."""

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.models.quiver import Quiver
from src.models.representation import Representation

SUPPORTED_PRIMES = (2, 3, 5, 7)
FORMAT_VERSION = 1


def validate_prime(p: Any) -> tuple[bool, Optional[str]]:
    """
    Проверить характеристику поля.

    Returns:
        (is_valid, error_message). При успехе error_message = None.
    """
    if not isinstance(p, int) or isinstance(p, bool):
        return False, f"Field prime must be an integer, got {p!r}"
    if p not in SUPPORTED_PRIMES:
        return False, f"Unsupported field prime {p}; expected one of {SUPPORTED_PRIMES}"
    return True, None


def validate_quiver(vertex_count: int, arrows: Sequence[Tuple[int, int]]) -> tuple[bool, Optional[str]]:
    """
    Проверить колчан.

    Валидируется:
    1. Хотя бы одна вершина.
    2. Концы стрелок — существующие вершины.
    3. Нет петель и ориентированных циклов.

    Returns:
        (is_valid, error_message)
    """
    if vertex_count < 1:
        return False, "Quiver must have at least one vertex"
    for source, target in arrows:
        if not (0 <= source < vertex_count and 0 <= target < vertex_count):
            return False, f"Arrow {source}->{target} references a missing vertex"
        if source == target:
            return False, f"Loop at vertex {source} makes the quiver cyclic"

    # Алгоритм Кана: все вершины должны уйти из очереди
    indegree = [0] * vertex_count
    for _, target in arrows:
        indegree[target] += 1
    queue = [v for v in range(vertex_count) if indegree[v] == 0]
    removed = 0
    while queue:
        vertex = queue.pop()
        removed += 1
        for source, target in arrows:
            if source == vertex:
                indegree[target] -= 1
                if indegree[target] == 0:
                    queue.append(target)
    if removed != vertex_count:
        return False, "Quiver contains an oriented cycle"
    return True, None


def validate_representation(
    quiver: Quiver, p: int, dims: Tuple[int, ...], maps: Sequence[np.ndarray]
) -> tuple[bool, Optional[str]]:
    """
    Проверить данные представления.

    Валидируется:
    1. Длина вектора размерностей и число матриц.
    2. Неотрицательные размерности.
    3. Формы матриц dims[j] × dims[i] для стрелок i → j.
    4. Элементы в диапазоне [0, p).

    Returns:
        (is_valid, error_message)
    """
    if len(dims) != quiver.vertex_count:
        return False, f"Expected {quiver.vertex_count} dimensions, got {len(dims)}"
    if any(d < 0 for d in dims):
        return False, f"Negative dimension in {dims}"
    if len(maps) != len(quiver.arrows):
        return False, f"Expected {len(quiver.arrows)} arrow maps, got {len(maps)}"
    for a, ((source, target), matrix) in enumerate(zip(quiver.arrows, maps)):
        expected = (dims[target], dims[source])
        if matrix.shape != expected:
            return False, f"Arrow {a} matrix has shape {matrix.shape}, expected {expected}"
        if matrix.size and (matrix.min() < 0 or matrix.max() >= p):
            return False, f"Arrow {a} matrix has entries outside [0, {p})"
    return True, None


def validate_intertwining(
    source: Representation, target: Representation, components: Sequence[np.ndarray]
) -> tuple[bool, Optional[str]]:
    """
    Проверить, что компоненты образуют морфизм представлений.

    Валидируется:
    1. По одной компоненте на вершину с формой target.dims[i] × source.dims[i].
    2. Для каждой стрелки a: i → j выполнено c_j · X_a = Y_a · c_i.

    Returns:
        (is_valid, error_message)
    """
    if len(components) != source.quiver.vertex_count:
        return False, f"Expected {source.quiver.vertex_count} components, got {len(components)}"
    for i, component in enumerate(components):
        expected = (target.dims[i], source.dims[i])
        if component.shape != expected:
            return False, f"Component {i} has shape {component.shape}, expected {expected}"
    p = source.p
    for a, (s, t) in enumerate(source.quiver.arrows):
        left = np.mod(components[t] @ source.maps[a], p)
        right = np.mod(target.maps[a] @ components[s], p)
        if not np.array_equal(left, right):
            return False, f"Components do not commute with arrow {a} ({s}->{t})"
    return True, None


def validate_universe_payload(payload: Dict[str, Any]) -> tuple[bool, Optional[str]]:
    """
    Проверить структуру документа вселенной (до построения объектов).

    Валидируется:
    1. Наличие всех обязательных полей и поддерживаемая версия.
    2. Корректные колчан и характеристика.
    3. Объекты: последовательные id, длины векторов размерностей, число матриц.
    4. Конфляции: последовательные id, ссылки x, y, z на существующие объекты.

    Returns:
        (is_valid, error_message)
    """
    required_keys = ["version", "quiver", "prime", "bound", "objects", "conflations"]
    missing_keys = [key for key in required_keys if key not in payload]
    if missing_keys:
        return False, f"Missing required keys: {missing_keys}"
    if payload["version"] != FORMAT_VERSION:
        return False, f"Unsupported universe file version {payload['version']!r}"

    quiver = payload["quiver"]
    if not isinstance(quiver, dict) or "vertices" not in quiver or "arrows" not in quiver:
        return False, "Quiver must contain 'vertices' and 'arrows'"
    vertex_count = len(quiver["vertices"])
    try:
        arrows = [tuple(arrow) for arrow in quiver["arrows"]]
    except TypeError:
        return False, "Arrows must be [source, target] pairs"
    if any(len(arrow) != 2 for arrow in arrows):
        return False, "Arrows must be [source, target] pairs"
    is_valid, error_msg = validate_quiver(vertex_count, arrows)
    if not is_valid:
        return False, error_msg
    is_valid, error_msg = validate_prime(payload["prime"])
    if not is_valid:
        return False, error_msg
    if not isinstance(payload["bound"], int) or payload["bound"] < 0:
        return False, f"Invalid bound {payload['bound']!r}"

    objects: List[Dict[str, Any]] = payload["objects"]
    for position, obj in enumerate(objects):
        if obj.get("id") != position:
            return False, f"Object ids must be consecutive, found {obj.get('id')!r} at {position}"
        if len(obj.get("dims", [])) != vertex_count:
            return False, f"Object {position} has a malformed dimension vector"
        if len(obj.get("arrow_matrices", [])) != len(arrows):
            return False, f"Object {position} has {len(obj.get('arrow_matrices', []))} arrow matrices"
    if not objects or any(objects[0]["dims"]):
        return False, "Object 0 must be the zero object"

    for position, conflation in enumerate(payload["conflations"]):
        if conflation.get("id") != position:
            return False, f"Conflation ids must be consecutive, found {conflation.get('id')!r}"
        for end in ("x", "y", "z"):
            index = conflation.get(end)
            if not isinstance(index, int) or not 0 <= index < len(objects):
                return False, f"Conflation {position} references missing object {index!r}"
        if len(conflation.get("inflation_components", [])) != vertex_count:
            return False, f"Conflation {position} has a malformed inflation"
    return True, None
