"""Юнит-тесты ParquetWriter."""

import os
import tempfile

import pyarrow.parquet as pq
import pytest

from src.models.reports import GaloisReport, LawReport, Violation
from src.services.parquet_writer import REQUIRED_METADATA, ParquetWriter

METADATA = {
    "universe_hash": "ab" * 32,
    "prime": "2",
    "bound": "2",
    "quiver": "1->2",
    "base_structure": "max",
}


@pytest.fixture
def law_reports():
    return [
        LawReport(law="diagram", universe_id="ab" * 32, parameters={"structure": "split"}, checked=12),
        LawReport(
            law="ses",
            universe_id="ab" * 32,
            parameters={"structure": "split", "side": "proj"},
            checked=5,
            skipped=2,
            violations=[Violation("ses_divisible", {"object": "S2"})],
            notes=["Hypotheses not verified within the bound: enough D-projectives"],
        ),
    ]


@pytest.fixture
def galois_report():
    return GaloisReport(
        dpex=["proj_gen:- [{}]", "proj_gen:S1 [{S1}]"],
        diex=["inj_gen:- [{}]", "inj_gen:S2 [{S2}]"],
        dcot=["(all | inj)", "(proj | all)"],
        hasse={"DPEx": [(1, 0)], "DIEx": [(1, 0)], "DCot": [(0, 1)]},
    )


class TestWriteLawSummary:
    """Проверка метода ParquetWriter.write_law_summary."""

    def test_creates_file(self, law_reports):
        """Создаётся Parquet-файл с детерминированным именем."""
        with tempfile.TemporaryDirectory() as tmpdir:
            filename = ParquetWriter().write_law_summary(law_reports, METADATA, tmpdir)

            assert os.path.exists(filename)
            assert os.path.basename(filename) == f"laws_{'ab' * 8}_max.parquet"

    def test_stores_metadata(self, law_reports):
        """Метаданные файла сохраняются корректно."""
        with tempfile.TemporaryDirectory() as tmpdir:
            filename = ParquetWriter().write_law_summary(law_reports, METADATA, tmpdir)

            with pq.ParquetFile(filename) as parquet_file:
                file_metadata = parquet_file.metadata.metadata
                decoded_metadata = {
                    k.decode("utf-8"): v.decode("utf-8") for k, v in file_metadata.items()
                }
            for key in REQUIRED_METADATA:
                assert decoded_metadata[key] == METADATA[key]

    def test_stores_rows(self, law_reports):
        """Строки сводки читаются обратно через pandas."""
        with tempfile.TemporaryDirectory() as tmpdir:
            filename = ParquetWriter().write_law_summary(law_reports, METADATA, tmpdir)
            df = pq.read_table(filename).to_pandas()

        assert list(df["law"]) == ["diagram", "ses"]
        assert list(df["checked"]) == [12, 5]
        assert list(df["violations"]) == [0, 1]
        assert list(df["passed"]) == [True, False]
        assert df.iloc[1]["parameters"] == '{"side": "proj", "structure": "split"}'
        assert "enough D-projectives" in df.iloc[1]["notes"]

    def test_rewrite_replaces_file(self, law_reports):
        """Повторная запись с теми же метаданными перезаписывает файл."""
        with tempfile.TemporaryDirectory() as tmpdir:
            writer = ParquetWriter()
            first = writer.write_law_summary(law_reports, METADATA, tmpdir)
            second = writer.write_law_summary(law_reports[:1], METADATA, tmpdir)

            assert first == second
            assert pq.read_table(second).num_rows == 1

    def test_missing_metadata(self, law_reports):
        """Отсутствие обязательных ключей — ValueError."""
        metadata = {k: v for k, v in METADATA.items() if k != "quiver"}
        with tempfile.TemporaryDirectory() as tmpdir:
            with pytest.raises(ValueError, match="Missing required metadata keys"):
                ParquetWriter().write_law_summary(law_reports, metadata, tmpdir)

    def test_unwritable_directory(self, law_reports):
        """Ошибка записи оборачивается в IOError."""
        with tempfile.TemporaryDirectory() as tmpdir:
            missing = os.path.join(tmpdir, "no", "such", "dir")
            with pytest.raises(IOError, match="Failed to write Parquet file"):
                ParquetWriter().write_law_summary(law_reports, METADATA, missing)


class TestWriteHasseEdges:
    """Проверка метода ParquetWriter.write_hasse_edges."""

    def test_rows_and_labels(self, galois_report):
        with tempfile.TemporaryDirectory() as tmpdir:
            filename = ParquetWriter().write_hasse_edges(galois_report, METADATA, tmpdir)
            df = pq.read_table(filename).to_pandas()

        assert list(df["poset"]) == ["DPEx", "DIEx", "DCot"]
        assert list(df["lower"]) == [1, 1, 0]
        assert list(df["upper"]) == [0, 0, 1]
        assert df.iloc[0]["lower_label"] == "proj_gen:S1 [{S1}]"
        assert df.iloc[2]["upper_label"] == "(proj | all)"

    def test_filename_sanitized(self, galois_report):
        """Скобки и двоеточия в описании базы заменяются."""
        metadata = dict(METADATA, base_structure="proj_gen[split]:S1")
        with tempfile.TemporaryDirectory() as tmpdir:
            filename = ParquetWriter().write_hasse_edges(galois_report, metadata, tmpdir)

        assert os.path.basename(filename) == f"hasse_{'ab' * 8}_proj_gen_split__S1.parquet"

    def test_empty_diagram(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            filename = ParquetWriter().write_hasse_edges(GaloisReport(), METADATA, tmpdir)
            assert pq.read_table(filename).num_rows == 0
