"""Общие фикстуры: вселенные U_A1, U_A2 (B2 и B4), U_A3."""

import pytest

from src.models.quiver import Quiver
from src.services import exact, universe_builder

A1 = Quiver(vertex_count=1, arrows=(), labels=("1",))
A2 = Quiver(vertex_count=2, arrows=((0, 1),), labels=("1", "2"))
A3 = Quiver(vertex_count=3, arrows=((0, 1), (1, 2)), labels=("1", "2", "3"))


@pytest.fixture(scope="session")
def u_a1():
    """A1 над F_2, граница 2."""
    return universe_builder.build_universe(A1, 2, 2)


@pytest.fixture(scope="session")
def u_a2():
    """A2 (1 → 2) над F_2, граница 2."""
    return universe_builder.build_universe(A2, 2, 2)


@pytest.fixture(scope="session")
def u_a2_b3():
    """A2 над F_2, граница 3."""
    return universe_builder.build_universe(A2, 2, 3)


@pytest.fixture(scope="session")
def u_a2_b4():
    """A2 над F_2, граница 4."""
    return universe_builder.build_universe(A2, 2, 4)


@pytest.fixture(scope="session")
def u_a3():
    """Линейный A3 над F_2, граница 3."""
    return universe_builder.build_universe(A3, 2, 3)


@pytest.fixture(params=["u_a1", "u_a2", "u_a3"])
def fixture_universe(request):
    """Все три основные вселенные по очереди."""
    return request.getfixturevalue(request.param)


@pytest.fixture
def a2_max(u_a2):
    return exact.maximal_structure(u_a2)


@pytest.fixture
def a2_split(u_a2):
    return exact.split_structure(u_a2)
