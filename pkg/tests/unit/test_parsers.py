"""Юнит-тесты разбора колчанов, структур и списков классов."""

import pytest

from src.services import exact
from src.utils.parsers import SpecParseError, parse_class_list, parse_quiver, parse_structure


class TestParseQuiver:
    """Проверка parse_quiver."""

    def test_single_arrow(self):
        quiver = parse_quiver("1->2")
        assert quiver.vertex_count == 2
        assert quiver.arrows == ((0, 1),)
        assert quiver.spec() == "1->2"

    def test_isolated_vertex(self):
        quiver = parse_quiver("1")
        assert quiver.vertex_count == 1
        assert quiver.arrows == ()

    def test_linear_a3_with_spaces(self):
        quiver = parse_quiver(" 1 -> 2 , 2 -> 3 ")
        assert quiver.arrows == ((0, 1), (1, 2))
        assert quiver.labels == ("1", "2", "3")

    def test_labels_sorted_numerically(self):
        quiver = parse_quiver("10->2")
        assert quiver.labels == ("2", "10")
        assert quiver.arrows == ((1, 0),)

    @pytest.mark.parametrize("text", ["1->2,2->1", "1->1"])
    def test_cycles_rejected(self, text):
        with pytest.raises(SpecParseError, match="Invalid quiver"):
            parse_quiver(text)

    @pytest.mark.parametrize("text", ["", "1->", "a->b", "1,,2", "1->2->3"])
    def test_malformed(self, text):
        with pytest.raises(SpecParseError):
            parse_quiver(text)


class TestParseClassList:
    """Проверка parse_class_list."""

    def test_names_and_ids(self, u_a2):
        assert parse_class_list("S1, 5", u_a2).members == {1, 5}

    def test_all_and_empty(self, u_a2):
        assert len(parse_class_list("all", u_a2)) == 7
        assert len(parse_class_list("-", u_a2)) == 0

    def test_unknown_name(self, u_a2):
        with pytest.raises(SpecParseError, match="Unknown class name"):
            parse_class_list("S3", u_a2)

    def test_id_out_of_range(self, u_a2):
        with pytest.raises(SpecParseError, match="out of range"):
            parse_class_list("7", u_a2)


class TestParseStructure:
    """Проверка parse_structure."""

    def test_extremes(self, u_a2, a2_max, a2_split):
        assert parse_structure("max", u_a2) == a2_max
        assert parse_structure(" split ", u_a2) == a2_split

    def test_generated(self, u_a2, a2_split):
        e = parse_structure("proj_gen:S1", u_a2)
        assert e == a2_split
        assert exact.describe(e) == "proj_gen:S1"

    def test_generated_with_base(self, u_a2):
        e = parse_structure("inj_gen[split]:S1,P1", u_a2)
        assert exact.describe(e) == "inj_gen[split]:S1,P1"

    def test_meet_of_generated(self, u_a2, a2_split):
        """Запятая внутри meet отделяет аргументы, а не классы."""
        e = parse_structure("meet(proj_gen:S2,P1,inj_gen:S2)", u_a2)
        assert e == a2_split
        assert exact.describe(e) == "meet(proj_gen:S2,P1,inj_gen:S2)"

    def test_describe_parses_back(self, u_a2):
        for text in ("max", "split", "proj_gen[split]:S1", "meet(max,split)", "inj_gen:-"):
            e = parse_structure(text, u_a2)
            assert parse_structure(exact.describe(e), u_a2) == e

    @pytest.mark.parametrize(
        "text", ["maximal", "proj_gen S1", "meet(max)", "max extra", "proj_gen:Q7"]
    )
    def test_malformed(self, u_a2, text):
        with pytest.raises(SpecParseError):
            parse_structure(text, u_a2)
