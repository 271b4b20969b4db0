"""Интеграционные тесты end-to-end: от командной строки до отчётов и Parquet-файлов."""

import json
import os

import pyarrow.parquet as pq
import pytest

from src.cli.main import main
from src.services import exact, report_formatter, universe_store


def _build(path, quiver="1->2", prime="2", bound="2"):
    return main(
        [
            "universe",
            "--quiver", quiver,
            "--prime", prime,
            "--bound", bound,
            "--out", str(path),
            "--format", "machine",
        ]
    )


@pytest.fixture(scope="module")
def universe_files(tmp_path_factory):
    """Файлы вселенных A1 и A2, построенные через CLI."""
    root = tmp_path_factory.mktemp("universes")
    files = {"a1": root / "a1.json", "a2": root / "a2.json"}
    assert _build(files["a1"], quiver="1") == 0
    assert _build(files["a2"]) == 0
    return {name: str(path) for name, path in files.items()}


def _machine(capsys):
    return report_formatter.parse_machine_report(capsys.readouterr().out)


class TestUniverseCommand:
    """Построение и сохранение вселенной."""

    def test_build_reports_classes(self, tmp_path, capsys):
        path = tmp_path / "u.json"
        assert _build(path) == 0

        payload = _machine(capsys)
        assert payload["kind"] == "universe"
        assert len(payload["classes"]) == 7
        assert payload["nonsplit_orbits"] == ["S2 -> P1 -> S1"]
        assert payload["universe_hash"] == universe_store.universe_digest(universe_store.load(str(path)))

    def test_repeated_builds_are_identical(self, tmp_path):
        """Повторная сборка даёт побайтно одинаковый файл."""
        first, second = tmp_path / "first.json", tmp_path / "second.json"
        assert _build(first) == 0
        assert _build(second) == 0
        assert first.read_bytes() == second.read_bytes()

    @pytest.mark.parametrize(
        "quiver,prime,bound",
        [("1->2,2->1", "2", "2"), ("1->2", "4", "2"), ("1->2", "2", "-1")],
    )
    def test_invalid_input(self, tmp_path, capsys, quiver, prime, bound):
        assert _build(tmp_path / "u.json", quiver, prime, bound) == 2
        assert "Error:" in capsys.readouterr().err

    def test_missing_arguments(self):
        assert main(["universe", "--quiver", "1->2"]) == 2

    def test_no_command(self):
        assert main([]) == 2


class TestStructureCommands:
    """Команды exact, div и flat."""

    def test_exact_with_axioms(self, universe_files, capsys):
        code = main(
            ["exact", "--universe", universe_files["a2"], "--structure", "proj_gen:S1", "--axioms", "--format", "machine"]
        )
        assert code == 0
        payload = _machine(capsys)
        assert payload["structure"] == "proj_gen:S1"
        assert payload["axioms"]["passed"] is True
        assert all(orbit["splits"] for orbit in payload["orbits"])

    def test_exact_human(self, universe_files, capsys):
        assert main(["exact", "--universe", universe_files["a2"], "--structure", "max"]) == 0
        assert "S2 -> P1 -> S1" in capsys.readouterr().out

    def test_div_of_generated_structure(self, universe_files, capsys):
        code = main(
            ["div", "--universe", universe_files["a2"], "--d", "max", "--e", "proj_gen:S1", "--format", "machine"]
        )
        assert code == 0
        payload = _machine(capsys)
        assert payload["title"] == "Div"
        assert [m["name"] for m in payload["members"]] == ["0", "S1", "S1^2", "P1"]

    def test_flat_relative(self, universe_files, capsys):
        code = main(
            [
                "flat",
                "--universe", universe_files["a2"],
                "--d", "max",
                "--e", "split",
                "--relative", "P1",
                "--format", "machine",
            ]
        )
        assert code == 0
        payload = _machine(capsys)
        assert payload["parameters"]["relative"] == "P1"

    def test_unknown_class_name(self, universe_files, capsys):
        code = main(["exact", "--universe", universe_files["a2"], "--structure", "proj_gen:S7"])
        assert code == 2
        err = capsys.readouterr().err
        assert "S7" in err

    def test_internal_lookup_failure_is_not_usage_error(self, universe_files, mocker, capsys):
        """Ошибка поиска внутри движка — код 1, а не ошибка использования."""
        mocker.patch.object(exact, "axioms_check", side_effect=KeyError("orbit 17"))
        code = main(["exact", "--universe", universe_files["a2"], "--structure", "max", "--axioms"])
        assert code == 1
        assert "Error:" in capsys.readouterr().err

    def test_missing_universe_file(self, tmp_path, capsys):
        code = main(["exact", "--universe", str(tmp_path / "absent.json"), "--structure", "max"])
        assert code == 2


class TestCotorsionCommand:
    """Команда cotorsion."""

    def test_generated_pair_with_approximations(self, universe_files, capsys):
        code = main(
            [
                "cotorsion",
                "--universe", universe_files["a2"],
                "--d", "max",
                "--generated", "P1",
                "--approximations",
                "--format", "machine",
            ]
        )
        assert code == 0
        payload = _machine(capsys)
        assert payload["flags"]["cotorsion_pair"] is True
        assert payload["verdicts"]["perfect"]["value"] == "yes"
        assert [m["name"] for m in payload["b"]] == ["0", "S1", "S1^2", "P1"]
        envelopes = {row["object"]: row for row in payload["approximations"] if row["kind"] == "envelope"}
        assert envelopes["S2"]["conflation"] == "S2 -> P1 -> S1"

    def test_comparison(self, universe_files, capsys):
        code = main(
            [
                "cotorsion",
                "--universe", universe_files["a2"],
                "--d", "max",
                "--cogenerated", "P1",
                "--compare-class", "P1",
                "--side", "envelope",
                "--format", "machine",
            ]
        )
        assert code == 0
        assert _machine(capsys)["comparison"]["side"] == "envelope"


class TestGaloisCommand:
    """Команда galois и выгрузка диаграмм Хассе."""

    def test_galois_passes_and_writes_parquet(self, universe_files, tmp_path, capsys):
        parquet_dir = tmp_path / "hasse"
        code = main(
            [
                "galois",
                "--universe", universe_files["a2"],
                "--parquet-dir", str(parquet_dir),
                "--format", "machine",
            ]
        )
        assert code == 0
        payload = _machine(capsys)
        assert payload["passed"] is True
        assert payload["hasse"]["DCot"] == [[0, 1]]

        files = os.listdir(parquet_dir)
        assert len(files) == 1
        df = pq.read_table(os.path.join(parquet_dir, files[0])).to_pandas()
        assert sorted(df["poset"]) == ["DCot", "DIEx", "DPEx"]

    def test_galois_trivial_universe(self, universe_files, capsys):
        assert main(["galois", "--universe", universe_files["a1"]]) == 0
        assert "RESULT: PASS" in capsys.readouterr().out


class TestLawsCommand:
    """Команда laws run: коды выхода и детерминизм."""

    def test_clean_run_on_a1(self, universe_files, capsys):
        assert main(["laws", "run", "--universe", universe_files["a1"]]) == 0
        assert "RESULT: PASS" in capsys.readouterr().out

    def test_mutation_is_detected(self, universe_files, capsys):
        code = main(
            [
                "laws", "run",
                "--universe", universe_files["a2"],
                "--law", "diagram",
                "--mutate", "diagram",
                "--format", "machine",
            ]
        )
        assert code == 1
        payload = _machine(capsys)
        assert payload["passed"] is False
        assert payload["violations"] > 0

    def test_machine_output_is_reproducible(self, universe_files, capsys):
        """Два прогона дают побайтно одинаковый машиночитаемый отчёт."""
        argv = ["laws", "run", "--universe", universe_files["a2"], "--law", "ses", "--format", "machine"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        second = capsys.readouterr().out
        assert first == second
        assert json.loads(first)["kind"] == "laws"

    def test_parquet_summary(self, universe_files, tmp_path, capsys):
        parquet_dir = tmp_path / "laws"
        code = main(
            [
                "laws", "run",
                "--universe", universe_files["a2"],
                "--law", "closure_de",
                "--parquet-dir", str(parquet_dir),
            ]
        )
        assert code == 0
        (filename,) = os.listdir(parquet_dir)
        with pq.ParquetFile(os.path.join(parquet_dir, filename)) as parquet_file:
            metadata = {
                k.decode("utf-8"): v.decode("utf-8") for k, v in parquet_file.metadata.metadata.items()
            }
        assert metadata["quiver"] == "1->2"
        assert metadata["base_structure"] == "max"

    def test_laws_without_subcommand(self):
        assert main(["laws"]) == 2

    def test_unknown_law(self, universe_files):
        assert main(["laws", "run", "--universe", universe_files["a2"], "--law", "nonsense"]) == 2
