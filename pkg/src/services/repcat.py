"""Абелева категория конечномерных представлений ациклического колчана над F_p."""

import itertools
import logging
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.models.quiver import Quiver
from src.models.representation import Conflation, Morphism, Representation
from src.services import ffmat
from src.utils.validators import validate_intertwining, validate_representation

logger = logging.getLogger(__name__)

ISO_SCAN_CHUNK = 4096


class RepCatError(Exception):
    """Исключение для некорректных операций с представлениями."""

    pass


def _kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.size == 0 or b.size == 0:
        return ffmat.zeros(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
    return np.kron(a, b)


def _same_category(x: Representation, y: Representation) -> None:
    if x.quiver != y.quiver or x.p != y.p:
        raise RepCatError(
            f"Representations live over different quivers or fields: "
            f"{x.quiver.spec()} / F_{x.p} vs {y.quiver.spec()} / F_{y.p}"
        )


# Конструкторы


def make_representation(
    quiver: Quiver, p: int, dims: Sequence[int], maps: Sequence
) -> Representation:
    """
    Построить представление с проверкой форм матриц.

    Raises:
        RepCatError: если формы не согласованы с размерностями.
    """
    if len(maps) != len(quiver.arrows) or len(dims) != quiver.vertex_count:
        raise RepCatError(
            f"Expected {quiver.vertex_count} dimensions and {len(quiver.arrows)} arrow maps, "
            f"got {len(dims)} and {len(maps)}"
        )
    matrices = []
    for (source, target), entries in zip(quiver.arrows, maps):
        shape = (dims[target], dims[source])
        if np.size(entries) == shape[0] * shape[1]:
            matrices.append(ffmat.as_matrix(entries, p, shape))
        else:
            matrices.append(np.array(entries, dtype=np.int64))
    is_valid, error_msg = validate_representation(quiver, p, tuple(dims), matrices)
    if not is_valid:
        raise RepCatError(f"Invalid representation: {error_msg}")
    return Representation(quiver=quiver, p=p, dims=tuple(dims), maps=tuple(matrices))


def zero_object(quiver: Quiver, p: int) -> Representation:
    dims = (0,) * quiver.vertex_count
    return make_representation(quiver, p, dims, [ffmat.zeros(0, 0)] * len(quiver.arrows))


def simple(quiver: Quiver, p: int, vertex: int) -> Representation:
    dims = tuple(1 if v == vertex else 0 for v in range(quiver.vertex_count))
    maps = [ffmat.zeros(dims[t], dims[s]) for s, t in quiver.arrows]
    return make_representation(quiver, p, dims, maps)


def _paths_from(quiver: Quiver, vertex: int) -> List[Tuple[Tuple[int, ...], int]]:
    """Пути (последовательности стрелок) из вершины вместе с их концами."""
    result = [((), vertex)]
    frontier = [((), vertex)]
    while frontier:
        extended = []
        for path, end in frontier:
            for a, (source, target) in enumerate(quiver.arrows):
                if source == end:
                    extended.append((path + (a,), target))
        result.extend(extended)
        frontier = extended
    return result


def _paths_to(quiver: Quiver, vertex: int) -> List[Tuple[Tuple[int, ...], int]]:
    """Пути, заканчивающиеся в вершине, вместе с их началами."""
    result = [((), vertex)]
    frontier = [((), vertex)]
    while frontier:
        extended = []
        for path, start in frontier:
            for a, (source, target) in enumerate(quiver.arrows):
                if target == start:
                    extended.append(((a,) + path, source))
        result.extend(extended)
        frontier = extended
    return result


def projective_indecomposable(quiver: Quiver, p: int, vertex: int) -> Representation:
    """P_v: базис в вершине w — пути из v в w."""
    paths = _paths_from(quiver, vertex)
    basis = {w: [path for path, end in paths if end == w] for w in range(quiver.vertex_count)}
    dims = tuple(len(basis[w]) for w in range(quiver.vertex_count))
    maps = []
    for a, (source, target) in enumerate(quiver.arrows):
        matrix = ffmat.zeros(dims[target], dims[source])
        for col, path in enumerate(basis[source]):
            matrix[basis[target].index(path + (a,)), col] = 1
        maps.append(matrix)
    return make_representation(quiver, p, dims, maps)


def injective_indecomposable(quiver: Quiver, p: int, vertex: int) -> Representation:
    """I_v: двойственное к путям, заканчивающимся в v."""
    paths = _paths_to(quiver, vertex)
    basis = {w: [path for path, start in paths if start == w] for w in range(quiver.vertex_count)}
    dims = tuple(len(basis[w]) for w in range(quiver.vertex_count))
    maps = []
    for a, (source, target) in enumerate(quiver.arrows):
        opposite = ffmat.zeros(dims[source], dims[target])
        for col, path in enumerate(basis[target]):
            opposite[basis[source].index((a,) + path), col] = 1
        maps.append(opposite.T.copy())
    return make_representation(quiver, p, dims, maps)


def make_morphism(
    source: Representation, target: Representation, components: Sequence, check: bool = True
) -> Morphism:
    """
    Построить морфизм; при check=True проверяется коммутирование со стрелками.

    Raises:
        RepCatError: если компоненты не сплетают представления.
    """
    _same_category(source, target)
    matrices = [
        np.mod(np.array(c, dtype=np.int64).reshape(target.dims[i], source.dims[i]), source.p)
        for i, c in enumerate(components)
    ]
    if check:
        is_valid, error_msg = validate_intertwining(source, target, matrices)
        if not is_valid:
            raise RepCatError(f"Invalid morphism: {error_msg}")
    return Morphism(source=source, target=target, components=tuple(matrices))


def identity(x: Representation) -> Morphism:
    return make_morphism(x, x, [ffmat.identity(d) for d in x.dims], check=False)


def zero_morphism(x: Representation, y: Representation) -> Morphism:
    return make_morphism(x, y, [ffmat.zeros(b, a) for a, b in zip(x.dims, y.dims)], check=False)


def compose(g: Morphism, f: Morphism) -> Morphism:
    """g ∘ f."""
    if f.target != g.source:
        raise RepCatError("Morphisms are not composable")
    p = f.source.p
    components = [ffmat.matmul(gc, fc, p) for gc, fc in zip(g.components, f.components)]
    return make_morphism(f.source, g.target, components, check=False)


def add(f: Morphism, g: Morphism) -> Morphism:
    p = f.source.p
    components = [np.mod(a + b, p) for a, b in zip(f.components, g.components)]
    return make_morphism(f.source, f.target, components, check=False)


def scale(c: int, f: Morphism) -> Morphism:
    p = f.source.p
    return make_morphism(f.source, f.target, [np.mod(c * m, p) for m in f.components], check=False)


def is_zero(f: Morphism) -> bool:
    return all(not np.any(c) for c in f.components)


def hom_vector(f: Morphism) -> np.ndarray:
    """Координаты морфизма в объемлющем пространстве ⊕ Hom_F(X_i, Y_i)."""
    if not f.components:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate([c.reshape(-1) for c in f.components])


def linear_combination(
    basis: Sequence[Morphism], coeffs: Sequence[int], source: Representation, target: Representation
) -> Morphism:
    p = source.p
    components = [ffmat.zeros(b, a) for a, b in zip(source.dims, target.dims)]
    for c, f in zip(coeffs, basis):
        if c:
            components = [np.mod(acc + c * m, p) for acc, m in zip(components, f.components)]
    return make_morphism(source, target, components, check=False)


def coefficient_chunks(k: int, p: int, chunk: int = ISO_SCAN_CHUNK) -> Iterator[np.ndarray]:
    """Все векторы F_p^k в лексикографическом порядке, порциями."""
    iterator = itertools.product(range(p), repeat=k)
    while True:
        block = list(itertools.islice(iterator, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.int64).reshape(len(block), k)


def all_morphisms(x: Representation, y: Representation) -> Iterator[Morphism]:
    """Все морфизмы X → Y (F_p-комбинации базиса Hom в лексикографическом порядке)."""
    basis = hom_basis(x, y)
    for coeffs in itertools.product(range(x.p), repeat=len(basis)):
        yield linear_combination(basis, coeffs, x, y)


# Hom


@lru_cache(maxsize=200_000)
def _hom_basis(x: Representation, y: Representation) -> Tuple[Morphism, ...]:
    quiver = x.quiver
    p = x.p
    offsets = []
    total = 0
    for i in range(quiver.vertex_count):
        offsets.append(total)
        total += y.dims[i] * x.dims[i]
    blocks = []
    for a, (s, t) in enumerate(quiver.arrows):
        # φ_t X_a − Y_a φ_s = 0
        block = ffmat.zeros(y.dims[t] * x.dims[s], total)
        width_t = y.dims[t] * x.dims[t]
        width_s = y.dims[s] * x.dims[s]
        block[:, offsets[t] : offsets[t] + width_t] += _kron(ffmat.identity(y.dims[t]), x.maps[a].T)
        block[:, offsets[s] : offsets[s] + width_s] -= _kron(y.maps[a], ffmat.identity(x.dims[s]))
        blocks.append(block)
    system = np.mod(np.vstack(blocks), p) if blocks else ffmat.zeros(0, total)
    basis = []
    for vector in ffmat.kernel_basis(system, p):
        components = [
            vector[offsets[i] : offsets[i] + y.dims[i] * x.dims[i]].reshape(y.dims[i], x.dims[i])
            for i in range(quiver.vertex_count)
        ]
        basis.append(make_morphism(x, y, components))
    return tuple(basis)


def hom_basis(x: Representation, y: Representation) -> List[Morphism]:
    """
    Базис пространства сплетающих отображений X → Y.

    Raises:
        RepCatError: если представления над разными колчанами или полями.
    """
    _same_category(x, y)
    return list(_hom_basis(x, y))


def hom_dim(x: Representation, y: Representation) -> int:
    return len(hom_basis(x, y))


def span_rank(morphisms: Sequence[Morphism], length: int, p: int) -> int:
    return ffmat.rank(ffmat.stack_vectors([hom_vector(f) for f in morphisms], length), p)


def solve_in_span(
    images: Sequence[Morphism], target: Morphism
) -> Optional[np.ndarray]:
    """Коэффициенты c с Σ c_k images[k] = target или None."""
    p = target.source.p
    vector = hom_vector(target)
    if not images:
        return np.zeros(0, dtype=np.int64) if not np.any(vector) else None
    system = ffmat.stack_vectors([hom_vector(f) for f in images], vector.size).T
    solved = ffmat.solve_all(system, vector.reshape(-1, 1), p)
    if solved is None:
        return None
    return solved[0][:, 0]


def lift(f: Morphism, deflation: Morphism) -> Optional[Morphism]:
    """Подъём h: A → Y с deflation ∘ h = f для f: A → Z."""
    basis = hom_basis(f.source, deflation.source)
    coeffs = solve_in_span([compose(deflation, h) for h in basis], f)
    if coeffs is None:
        return None
    return linear_combination(basis, coeffs, f.source, deflation.source)


def extend(f: Morphism, inflation: Morphism) -> Optional[Morphism]:
    """Продолжение h: Y → M с h ∘ inflation = f для f: X → M."""
    basis = hom_basis(inflation.target, f.target)
    coeffs = solve_in_span([compose(h, inflation) for h in basis], f)
    if coeffs is None:
        return None
    return linear_combination(basis, coeffs, inflation.target, f.target)


def extend_up_to_automorphism(
    inflation: Morphism, other: Morphism
) -> Optional[Tuple[Morphism, Morphism]]:
    """
    Пара (f, α) с f ∘ inflation = other ∘ α и α ∈ Aut(X), X — общий источник.

    Сначала пробуется α = 1. Иначе решается линейная система на пары (α, h) с
    other ∘ α = h ∘ inflation, и среди допустимых α ищется обратимый.

    Returns:
        (f, α) или None, если подходящего автоморфизма нет.
    """
    x = inflation.source
    f = extend(other, inflation)
    if f is not None:
        return f, identity(x)
    endomorphisms = hom_basis(x, x)
    if not endomorphisms:
        return None
    length = sum(a * b for a, b in zip(x.dims, other.target.dims))
    columns = [compose(other, a) for a in endomorphisms] + [
        compose(h, inflation) for h in hom_basis(inflation.target, other.target)
    ]
    system = ffmat.stack_vectors([hom_vector(m) for m in columns], length).T
    relations = ffmat.kernel_basis(system, x.p)
    if not relations:
        return None
    k = len(endomorphisms)
    projected = ffmat.stack_vectors([v[:k] for v in relations], k)
    reduced, rank, _ = ffmat.rref(projected, x.p)
    admissible = [linear_combination(endomorphisms, reduced[r], x, x) for r in range(rank)]
    alpha = _first_invertible(admissible, x, x) if admissible else None
    if alpha is None:
        return None
    return extend(compose(other, alpha), inflation), alpha


def lifting_surjective(m: Representation, deflation: Morphism) -> bool:
    """Hom(M, Y) → Hom(M, Z) сюръективно."""
    target_dim = hom_dim(m, deflation.target)
    if target_dim == 0:
        return True
    length = sum(a * b for a, b in zip(m.dims, deflation.target.dims))
    images = [compose(deflation, h) for h in hom_basis(m, deflation.source)]
    return span_rank(images, length, m.p) == target_dim


def extension_surjective(m: Representation, inflation: Morphism) -> bool:
    """Hom(Y, M) → Hom(X, M) сюръективно."""
    target_dim = hom_dim(inflation.source, m)
    if target_dim == 0:
        return True
    length = sum(a * b for a, b in zip(inflation.source.dims, m.dims))
    images = [compose(h, inflation) for h in hom_basis(inflation.target, m)]
    return span_rank(images, length, m.p) == target_dim


# Конструкции


def kernel(f: Morphism) -> Tuple[Representation, Morphism]:
    """Ядро: поточечные пространства нулей и индуцированные стрелки."""
    x = f.source
    p = x.p
    bases = []
    for i, component in enumerate(f.components):
        vectors = ffmat.kernel_basis(component, p)
        bases.append(
            np.column_stack(vectors) if vectors else ffmat.zeros(x.dims[i], 0)
        )
    dims = tuple(b.shape[1] for b in bases)
    maps = []
    for a, (s, t) in enumerate(x.quiver.arrows):
        solved = ffmat.solve_all(bases[t], ffmat.matmul(x.maps[a], bases[s], p), p)
        if solved is None:
            raise RepCatError("Kernel is not a subrepresentation")
        maps.append(solved[0])
    k = make_representation(x.quiver, p, dims, maps)
    return k, make_morphism(k, x, bases)


def cokernel(f: Morphism) -> Tuple[Representation, Morphism]:
    """Коядро: проекции на фактор по образу (аннуляторы образа) и индуцированные стрелки."""
    y = f.target
    p = y.p
    quotients = []
    for i, component in enumerate(f.components):
        rows = ffmat.kernel_basis(component.T.copy(), p)
        quotients.append(ffmat.stack_vectors(rows, y.dims[i]))
    dims = tuple(q.shape[0] for q in quotients)
    maps = []
    for a, (s, t) in enumerate(y.quiver.arrows):
        right = ffmat.matmul(quotients[t], y.maps[a], p).T.copy()
        solved = ffmat.solve_all(quotients[s].T.copy(), right, p)
        if solved is None:
            raise RepCatError("Image is not a subrepresentation")
        maps.append(solved[0].T.copy())
    c = make_representation(y.quiver, p, dims, maps)
    return c, make_morphism(y, c, quotients)


def biproduct(
    xs: Sequence[Representation], quiver: Optional[Quiver] = None, p: Optional[int] = None
) -> Tuple[Representation, List[Morphism], List[Morphism]]:
    """
    Прямая сумма с каноническими вложениями и проекциями.

    Args:
        xs: Слагаемые.
        quiver, p: Обязательны для пустого списка.
    """
    if xs:
        quiver, p = xs[0].quiver, xs[0].p
        for x in xs[1:]:
            _same_category(xs[0], x)
    if quiver is None or p is None:
        raise RepCatError("Empty biproduct needs an explicit quiver and field")
    n = quiver.vertex_count
    dims = tuple(sum(x.dims[i] for x in xs) for i in range(n))
    maps = []
    for a, (s, t) in enumerate(quiver.arrows):
        block = ffmat.zeros(dims[t], dims[s])
        row = col = 0
        for x in xs:
            block[row : row + x.dims[t], col : col + x.dims[s]] = x.maps[a]
            row += x.dims[t]
            col += x.dims[s]
        maps.append(block)
    total = make_representation(quiver, p, dims, maps)
    injections, projections = [], []
    offsets = [0] * n
    for x in xs:
        inj = []
        for i in range(n):
            m = ffmat.zeros(dims[i], x.dims[i])
            m[offsets[i] : offsets[i] + x.dims[i], :] = ffmat.identity(x.dims[i])
            inj.append(m)
        injections.append(make_morphism(x, total, inj, check=False))
        projections.append(make_morphism(total, x, [m.T.copy() for m in inj], check=False))
        offsets = [offsets[i] + x.dims[i] for i in range(n)]
    return total, injections, projections


def pushout(i: Morphism, f: Morphism) -> Tuple[Representation, Morphism, Morphism]:
    """
    Кодекартов квадрат инфляции i: X → Y вдоль f: X → X'.

    Returns:
        (Y', f': Y → Y', i': X' → Y') с f' ∘ i = i' ∘ f.
    """
    if i.source != f.source:
        raise RepCatError("Pushout needs morphisms with a common source")
    y, x_prime = i.target, f.target
    total, (inj_y, inj_x), _ = biproduct([y, x_prime])
    difference = add(compose(inj_y, i), scale(-1, compose(inj_x, f)))
    y_prime, quotient = cokernel(difference)
    return y_prime, compose(quotient, inj_y), compose(quotient, inj_x)


def pullback(d: Morphism, g: Morphism) -> Tuple[Representation, Morphism, Morphism]:
    """
    Декартов квадрат дефляции d: Y → Z вдоль g: Z' → Z.

    Returns:
        (W, W → Y, W → Z').
    """
    if d.target != g.target:
        raise RepCatError("Pullback needs morphisms with a common target")
    total, _, (proj_y, proj_z) = biproduct([d.source, g.source])
    difference = add(compose(d, proj_y), scale(-1, compose(g, proj_z)))
    w, inclusion = kernel(difference)
    return w, compose(proj_y, inclusion), compose(proj_z, inclusion)


# Изоморфизмы


def path_ranks(x: Representation) -> Tuple[int, ...]:
    """Ранги отображений вдоль всех путей: инвариант класса изоморфизма."""
    ranks = []
    for path in x.quiver.paths():
        s = x.quiver.arrows[path[0]][0]
        matrix = ffmat.identity(x.dims[s])
        for a in path:
            matrix = ffmat.matmul(x.maps[a], matrix, x.p)
        ranks.append(ffmat.rank(matrix, x.p))
    return tuple(ranks)


def _first_invertible(
    basis: Sequence[Morphism], x: Representation, y: Representation
) -> Optional[Morphism]:
    p = x.p
    vertices = [i for i, d in enumerate(x.dims) if d > 0]
    stacks = {i: np.stack([f.components[i] for f in basis]) for i in vertices}
    for coeffs in coefficient_chunks(len(basis), p):
        mask = np.ones(coeffs.shape[0], dtype=bool)
        for i in vertices:
            candidates = np.mod(np.einsum("nk,kab->nab", coeffs, stacks[i]), p)
            mask &= ffmat.batch_rank(candidates, p) == x.dims[i]
            if not mask.any():
                break
        hits = np.nonzero(mask)[0]
        if hits.size:
            return linear_combination(basis, coeffs[hits[0]], x, y)
    return None


def find_iso(x: Representation, y: Representation) -> Optional[Morphism]:
    """
    Найти изоморфизм X → Y, если он существует.

    Сначала сравниваются инварианты (размерности, ранги путей, размерности Hom),
    затем перебираются F_p-комбинации базиса Hom в лексикографическом порядке.
    """
    _same_category(x, y)
    if x.dims != y.dims:
        return None
    if x == y:
        return identity(x)
    if path_ranks(x) != path_ranks(y):
        return None
    basis = hom_basis(x, y)
    if not (len(basis) == hom_dim(x, x) == hom_dim(y, y) == hom_dim(y, x)):
        return None
    if not basis:
        return None
    return _first_invertible(basis, x, y)


def is_iso(f: Morphism) -> bool:
    return all(
        c.shape[0] == c.shape[1] and ffmat.rank(c, f.source.p) == c.shape[0]
        for c in f.components
    )


def inverse(f: Morphism) -> Morphism:
    components = []
    for c in f.components:
        ok, inv = ffmat.is_invertible(c, f.source.p)
        if not ok:
            raise RepCatError("Morphism is not invertible")
        components.append(inv)
    return make_morphism(f.target, f.source, components, check=False)


def morphism_representation(f: Morphism) -> Representation:
    """Морфизм как представление удвоенного колчана (стрелка v → v' несёт f_v)."""
    source, target = f.source, f.target
    return make_representation(
        source.quiver.doubled(),
        source.p,
        source.dims + target.dims,
        list(source.maps) + list(target.maps) + list(f.components),
    )


def equivalent_inflations(i1: Morphism, i2: Morphism) -> bool:
    """Изоморфны ли конфляции с данными инфляциями (тройка изоморфизмов)."""
    return find_iso(morphism_representation(i1), morphism_representation(i2)) is not None


# Конфляции


def is_injective(f: Morphism) -> bool:
    return all(ffmat.rank(c, f.source.p) == c.shape[1] for c in f.components)


def is_surjective(f: Morphism) -> bool:
    return all(ffmat.rank(c, f.source.p) == c.shape[0] for c in f.components)


def is_conflation(i: Morphism, d: Morphism) -> bool:
    """Поточечная точность X ↣ Y ↠ Z."""
    if i.target != d.source:
        return False
    p = i.source.p
    for v, (ic, dc) in enumerate(zip(i.components, d.components)):
        if ffmat.rank(ic, p) != ic.shape[1] or ffmat.rank(dc, p) != dc.shape[0]:
            return False
        if ic.shape[0] != ic.shape[1] + dc.shape[0]:
            return False
        if np.any(ffmat.matmul(dc, ic, p)):
            return False
    return True


def conflation_from_inflation(i: Morphism) -> Conflation:
    if not is_injective(i):
        raise RepCatError("Inflation must be injective at every vertex")
    _, quotient = cokernel(i)
    return Conflation(inflation=i, deflation=quotient)


def conflation_from_deflation(d: Morphism) -> Conflation:
    if not is_surjective(d):
        raise RepCatError("Deflation must be surjective at every vertex")
    _, inclusion = kernel(d)
    return Conflation(inflation=inclusion, deflation=d)


def splits(c: Conflation) -> bool:
    """Существует ли ретракция r с r ∘ inflation = id_X."""
    x = c.x
    if x.total_dim == 0:
        return True
    basis = hom_basis(c.y, x)
    return solve_in_span([compose(r, c.inflation) for r in basis], identity(x)) is not None


# Расширения


def extension_space(z: Representation, x: Representation) -> Tuple[List[Tuple[int, int]], List[int]]:
    """
    Коядро δ: ⊕ Hom(Z_i, X_i) → ⊕_a Hom(Z_s, X_t), δ(φ)_a = X_a φ_s − φ_t Z_a.

    Returns:
        (формы блоков η_a, координаты-дополнения к образу δ).
    """
    _same_category(z, x)
    quiver = z.quiver
    p = z.p
    domain_offsets, domain = [], 0
    for i in range(quiver.vertex_count):
        domain_offsets.append(domain)
        domain += x.dims[i] * z.dims[i]
    shapes = [(x.dims[t], z.dims[s]) for s, t in quiver.arrows]
    codomain = sum(r * c for r, c in shapes)
    delta = ffmat.zeros(codomain, domain)
    row = 0
    for a, (s, t) in enumerate(quiver.arrows):
        height = x.dims[t] * z.dims[s]
        width_s = x.dims[s] * z.dims[s]
        width_t = x.dims[t] * z.dims[t]
        delta[row : row + height, domain_offsets[s] : domain_offsets[s] + width_s] += _kron(
            x.maps[a], ffmat.identity(z.dims[s])
        )
        delta[row : row + height, domain_offsets[t] : domain_offsets[t] + width_t] -= _kron(
            ffmat.identity(x.dims[t]), z.maps[a].T
        )
        row += height
    _, _, pivots = ffmat.rref(np.mod(delta.T, p), p)
    pivot_set = set(pivots)
    return shapes, [k for k in range(codomain) if k not in pivot_set]


def ext_dimension(z: Representation, x: Representation) -> int:
    return len(extension_space(z, x)[1])


def build_extension(z: Representation, x: Representation, eta: Sequence[np.ndarray]) -> Conflation:
    """Конфляция X ↣ Y_η ↠ Z, стрелки Y_η равны [[X_a, η_a], [0, Z_a]]."""
    quiver = z.quiver
    p = z.p
    dims = tuple(a + b for a, b in zip(x.dims, z.dims))
    maps = []
    for a, (s, t) in enumerate(quiver.arrows):
        block = ffmat.zeros(dims[t], dims[s])
        block[: x.dims[t], : x.dims[s]] = x.maps[a]
        block[: x.dims[t], x.dims[s] :] = eta[a]
        block[x.dims[t] :, x.dims[s] :] = z.maps[a]
        maps.append(block)
    y = make_representation(quiver, p, dims, maps)
    inflation = [
        np.vstack([ffmat.identity(x.dims[i]), ffmat.zeros(z.dims[i], x.dims[i])])
        for i in range(quiver.vertex_count)
    ]
    deflation = [
        np.hstack([ffmat.zeros(z.dims[i], x.dims[i]), ffmat.identity(z.dims[i])])
        for i in range(quiver.vertex_count)
    ]
    return Conflation(
        inflation=make_morphism(x, y, inflation),
        deflation=make_morphism(y, z, deflation),
    )


def extension_classes(z: Representation, x: Representation) -> List[Conflation]:
    """По одной конфляции на каждый класс Ext¹(Z, X); нулевой класс первым."""
    shapes, free = extension_space(z, x)
    codomain = sum(r * c for r, c in shapes)
    result = []
    for coeffs in itertools.product(range(z.p), repeat=len(free)):
        vector = np.zeros(codomain, dtype=np.int64)
        vector[free] = coeffs
        eta, offset = [], 0
        for rows, cols in shapes:
            eta.append(vector[offset : offset + rows * cols].reshape(rows, cols))
            offset += rows * cols
        result.append(build_extension(z, x, eta))
    return result


# Сериализация


def representation_payload(x: Representation) -> dict:
    return {
        "dims": list(x.dims),
        "arrow_matrices": [[int(v) for v in m.reshape(-1)] for m in x.maps],
    }


def morphism_payload(f: Morphism) -> dict:
    """Морфизм с полными матрицами для ручной перепроверки."""
    return {
        "source": representation_payload(f.source),
        "target": representation_payload(f.target),
        "components": [[int(v) for v in c.reshape(-1)] for c in f.components],
    }
