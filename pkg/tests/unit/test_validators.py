"""Юнит-тесты модуля validators."""

import numpy as np
import pytest

from src.services import repcat, universe_store
from src.utils.validators import (
    validate_intertwining,
    validate_prime,
    validate_quiver,
    validate_representation,
    validate_universe_payload,
)
from tests.conftest import A2


class TestValidatePrime:
    """Проверка validate_prime."""

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_supported(self, p):
        assert validate_prime(p) == (True, None)

    @pytest.mark.parametrize("p", [4, 11, 0, -2])
    def test_unsupported(self, p):
        is_valid, error_msg = validate_prime(p)
        assert is_valid is False
        assert "Unsupported field prime" in error_msg

    @pytest.mark.parametrize("p", ["2", 2.0, True, None])
    def test_not_an_integer(self, p):
        is_valid, error_msg = validate_prime(p)
        assert is_valid is False
        assert "must be an integer" in error_msg


class TestValidateQuiver:
    """Проверка validate_quiver."""

    def test_valid_linear(self):
        assert validate_quiver(3, [(0, 1), (1, 2)]) == (True, None)

    def test_parallel_arrows_allowed(self):
        """Кронекер без циклов допустим."""
        assert validate_quiver(2, [(0, 1), (0, 1)])[0] is True

    def test_no_vertices(self):
        assert validate_quiver(0, [])[0] is False

    def test_missing_vertex(self):
        is_valid, error_msg = validate_quiver(2, [(0, 2)])
        assert is_valid is False
        assert "missing vertex" in error_msg

    def test_loop(self):
        assert "Loop" in validate_quiver(1, [(0, 0)])[1]

    def test_long_cycle(self):
        is_valid, error_msg = validate_quiver(3, [(0, 1), (1, 2), (2, 0)])
        assert is_valid is False
        assert "oriented cycle" in error_msg


class TestValidateRepresentation:
    """Проверка validate_representation."""

    def test_valid(self):
        assert validate_representation(A2, 2, (1, 1), [np.array([[1]])]) == (True, None)

    def test_wrong_dimension_count(self):
        assert validate_representation(A2, 2, (1,), [np.array([[1]])])[0] is False

    def test_negative_dimension(self):
        assert "Negative" in validate_representation(A2, 2, (1, -1), [np.zeros((0, 1))])[1]

    def test_wrong_shape(self):
        error_msg = validate_representation(A2, 2, (1, 2), [np.array([[1]])])[1]
        assert "expected (2, 1)" in error_msg

    def test_entries_out_of_field(self):
        error_msg = validate_representation(A2, 2, (1, 1), [np.array([[2]])])[1]
        assert "outside [0, 2)" in error_msg


class TestValidateIntertwining:
    """Проверка validate_intertwining."""

    def test_inclusion_commutes(self):
        s2 = repcat.simple(A2, 2, 1)
        p1 = repcat.projective_indecomposable(A2, 2, 0)
        assert validate_intertwining(s2, p1, [np.zeros((1, 0)), np.array([[1]])]) == (True, None)

    def test_projection_from_simple_does_not_commute(self):
        """S1 → P1 с ненулевой компонентой в вершине 1 не является морфизмом."""
        s1 = repcat.simple(A2, 2, 0)
        p1 = repcat.projective_indecomposable(A2, 2, 0)
        is_valid, error_msg = validate_intertwining(s1, p1, [np.array([[1]]), np.zeros((1, 0))])
        assert is_valid is False
        assert "do not commute" in error_msg

    def test_wrong_component_shape(self):
        s1 = repcat.simple(A2, 2, 0)
        assert validate_intertwining(s1, s1, [np.array([[1]]), np.zeros((1, 1))])[0] is False


class TestValidateUniversePayload:
    """Проверка validate_universe_payload."""

    @pytest.fixture
    def document(self, u_a2):
        return universe_store.to_document(u_a2)

    def test_valid(self, document):
        assert validate_universe_payload(document) == (True, None)

    def test_missing_keys(self, document):
        del document["conflations"]
        is_valid, error_msg = validate_universe_payload(document)
        assert is_valid is False
        assert "conflations" in error_msg

    def test_unsupported_version(self, document):
        document["version"] = 99
        assert "version" in validate_universe_payload(document)[1]

    def test_nonzero_first_object(self, document):
        document["objects"][0]["dims"] = [1, 0]
        assert "zero object" in validate_universe_payload(document)[1]

    def test_dangling_reference(self, document):
        document["conflations"][0]["z"] = 42
        assert "missing object" in validate_universe_payload(document)[1]

    def test_non_consecutive_ids(self, document):
        document["objects"][3]["id"] = 7
        assert "consecutive" in validate_universe_payload(document)[1]

    def test_invalid_bound(self, document):
        document["bound"] = -1
        assert "Invalid bound" in validate_universe_payload(document)[1]
