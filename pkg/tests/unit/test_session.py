"""Юнит-тесты сессии командной строки."""

import pytest

from src.models.session import Session
from src.services import cotorsion, exact


@pytest.fixture
def session(u_a2):
    return Session(universe=u_a2)


class TestSession:
    """Регистрация и поиск именованных сущностей."""

    def test_add_and_get(self, session, a2_max):
        session.add("structure", "d", a2_max)
        assert session.get("structure", "d") is a2_max

    def test_pair_owned_through_its_classes(self, session, u_a2, a2_max):
        pair = cotorsion.pair_generated(a2_max, exact.additive_class(u_a2, [5]))
        session.add("pair", "p", pair)
        assert session.pairs == {"p": pair}

    def test_duplicate_name(self, session, a2_max, a2_split):
        session.add("structure", "d", a2_max)
        with pytest.raises(ValueError, match="already defined"):
            session.add("structure", "d", a2_split)

    def test_foreign_universe(self, session, u_a1):
        with pytest.raises(ValueError, match="another universe"):
            session.add("class", "m", exact.all_objects(u_a1))

    def test_undefined_name(self, session):
        with pytest.raises(KeyError, match="not defined"):
            session.get("class", "m")

    def test_unknown_kind(self, session, a2_max):
        with pytest.raises(KeyError, match="Unknown entity kind"):
            session.add("functor", "f", a2_max)

    def test_default_format(self, session):
        assert session.output_format == "human"
