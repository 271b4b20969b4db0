"""Юнит-тесты форматирования отчётов."""

import json

import pytest

from src.services import cotorsion, exact, galois, laws, report_formatter, universe_store
from src.services.report_formatter import ReportFormatError


@pytest.fixture
def universe_report(u_a2):
    return report_formatter.universe_payload(u_a2)


class TestPayloads:
    """Содержимое полезной нагрузки."""

    def test_universe_header(self, u_a2, universe_report):
        assert universe_report["kind"] == "universe"
        assert universe_report["universe_hash"] == universe_store.universe_digest(u_a2)
        assert universe_report["prime"] == 2
        assert universe_report["bound"] == 2
        assert universe_report["quiver"] == "1->2"

    def test_universe_classes(self, universe_report):
        names = [row["name"] for row in universe_report["classes"]]
        assert names == ["0", "S1", "S2", "S1^2", "S1+S2", "P1", "S2^2"]
        assert [row["id"] for row in universe_report["classes"] if row["indecomposable"]] == [1, 2, 5]
        assert universe_report["nonsplit_orbits"] == ["S2 -> P1 -> S1"]

    def test_structure_with_axioms(self, a2_split):
        payload = report_formatter.structure_payload(a2_split, exact.axioms_check(a2_split))
        assert payload["structure"] == "split"
        assert all(orbit["splits"] for orbit in payload["orbits"])
        assert payload["axioms"]["passed"] is True
        assert len(payload["projectives"]) == 7

    def test_class_payload(self, u_a2, a2_max, a2_split):
        cls = exact.proj_objects(a2_max)
        payload = report_formatter.class_payload("Div", cls, {"d": "max", "e": "split"})
        assert [m["name"] for m in payload["members"]] == ["0", "S2", "P1", "S2^2"]
        assert payload["skipped"] == 0

    def test_cotorsion_payload(self, u_a2, a2_max):
        pair = cotorsion.pair_generated(a2_max, exact.additive_class(u_a2, [5]))
        payload = report_formatter.cotorsion_payload(
            pair,
            {"perfect": cotorsion.is_perfect(pair)},
            {"cotorsion_pair": True},
        )
        assert payload["verdicts"]["perfect"] == {"value": "yes", "unresolved": []}
        assert "approximations" not in payload

    def test_laws_payload(self, u_a2, a2_max):
        reports = laws.run_all(u_a2, laws.LawConfig(laws=("closure_de",)))
        payload = report_formatter.laws_payload(u_a2, a2_max, reports)
        assert payload["passed"] is True
        assert payload["violations"] == 0
        assert len(payload["reports"]) == len(reports)

    def test_laws_payload_lists_skipped_objects(self, u_a2, a2_max):
        """Пропуски ses при B = 2 перечислены с именами объектов."""
        reports = laws.run_all(u_a2, laws.LawConfig(laws=("ses",), sweep_generators=False))
        payload = report_formatter.laws_payload(u_a2, a2_max, reports)
        skips = [s for r in payload["reports"] for s in r["skips"]]
        assert {"kind": "ses_divisible", "objects": ["S2^2"]} in skips
        assert all(len(r["skips"]) == r["skipped"] for r in payload["reports"])

    def test_galois_payload(self, u_a2, a2_max):
        payload = report_formatter.galois_payload(
            u_a2, a2_max, galois.check_galois(a2_max), galois.check_bijection(a2_max)
        )
        assert payload["passed"] is True
        assert payload["hasse"]["DCot"] == [[0, 1]]
        assert payload["bijection"]["dcot"] == 2


class TestRender:
    """Отрисовка в обоих форматах."""

    def test_machine_round_trip(self, universe_report):
        text = report_formatter.render(universe_report, "machine")
        assert report_formatter.parse_machine_report(text) == universe_report
        assert text.endswith("\n")

    def test_machine_is_canonical(self, universe_report):
        """Ключи отсортированы, повторная отрисовка побайтно совпадает."""
        first = report_formatter.render(universe_report, "machine")
        second = report_formatter.render(json.loads(first), "machine")
        assert first == second

    def test_human_universe(self, universe_report):
        text = report_formatter.render(universe_report)
        assert "Classes: 7" in text
        assert "S2 -> P1 -> S1" in text
        assert "F_2" in text

    def test_human_laws_result_line(self, u_a2, a2_max):
        reports = laws.run_all(u_a2, laws.LawConfig(laws=("closure_de",)))
        text = report_formatter.render(report_formatter.laws_payload(u_a2, a2_max, reports))
        assert text.rstrip().endswith("RESULT: PASS")

    def test_unknown_format(self, universe_report):
        with pytest.raises(ReportFormatError, match="Unknown format"):
            report_formatter.render(universe_report, "xml")


class TestParseMachineReport:
    """Разбор машиночитаемых отчётов."""

    def test_malformed_json(self):
        with pytest.raises(ReportFormatError, match="Malformed report"):
            report_formatter.parse_machine_report("{not json")

    def test_not_an_object(self):
        with pytest.raises(ReportFormatError, match="JSON object"):
            report_formatter.parse_machine_report("[1, 2]")

    def test_unknown_kind(self):
        with pytest.raises(ReportFormatError, match="Unknown report kind"):
            report_formatter.parse_machine_report('{"kind": "weather"}')

    def test_missing_header(self):
        with pytest.raises(ReportFormatError, match="missing 'bound'"):
            report_formatter.parse_machine_report(
                '{"kind": "laws", "universe_hash": "x", "prime": 2, "quiver": "1"}'
            )
