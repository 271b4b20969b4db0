"""Запись сводок законов и рёбер диаграмм Хассе в Parquet с метаданными."""

import json
import logging
import os
from typing import Dict, List, Sequence

import pyarrow as pa
import pyarrow.parquet as pq

from src.models.reports import GaloisReport, LawReport

logger = logging.getLogger(__name__)

REQUIRED_METADATA = ("universe_hash", "prime", "bound", "quiver", "base_structure")


class ParquetWriter:
    """
    Писатель отчётов в Parquet с метаданными.

    Создаёт файлы с:
    - строками сводки законов: закон, параметры, счётчики, итог
    - строками рёбер Хассе: множество, нижний и верхний элементы с описаниями
    - метаданными файла: universe_hash, prime, bound, quiver, base_structure
    """

    def write_law_summary(
        self,
        reports: Sequence[LawReport],
        metadata: Dict[str, str],
        output_dir: str = ".",
    ) -> str:
        """
        Записать сводку прогона законов.

        Args:
            reports: Отчёты законов.
            metadata: Словарь с ключами REQUIRED_METADATA.
            output_dir: каталог для сохранения (по умолчанию текущий).

        Returns:
            Полный путь к созданному файлу.

        Raises:
            ValueError: если отсутствуют обязательные ключи.
            IOError: при ошибке записи файла.
        """
        self._check_metadata(metadata)
        schema = pa.schema(
            [
                pa.field("law", pa.string()),
                pa.field("parameters", pa.string()),
                pa.field("checked", pa.int64()),
                pa.field("skipped", pa.int64()),
                pa.field("violations", pa.int64()),
                pa.field("passed", pa.bool_()),
                pa.field("notes", pa.string()),
            ]
        )
        columns = [
            pa.array([r.law for r in reports], type=pa.string()),
            pa.array([json.dumps(r.parameters, sort_keys=True) for r in reports], type=pa.string()),
            pa.array([r.checked for r in reports], type=pa.int64()),
            pa.array([r.skipped for r in reports], type=pa.int64()),
            pa.array([len(r.violations) for r in reports], type=pa.int64()),
            pa.array([r.passed for r in reports], type=pa.bool_()),
            pa.array(["; ".join(r.notes) for r in reports], type=pa.string()),
        ]
        filename = self._generate_filename("laws", metadata, output_dir)
        return self._write(filename, schema, columns, metadata)

    def write_hasse_edges(
        self,
        report: GaloisReport,
        metadata: Dict[str, str],
        output_dir: str = ".",
    ) -> str:
        """
        Записать рёбра диаграмм Хассе DPEx, DIEx и DCot.

        Returns:
            Полный путь к созданному файлу.

        Raises:
            ValueError: если отсутствуют обязательные ключи.
            IOError: при ошибке записи файла.
        """
        self._check_metadata(metadata)
        labels = {"DPEx": report.dpex, "DIEx": report.diex, "DCot": report.dcot}
        rows: List[tuple] = [
            (poset, lower, upper, labels[poset][lower], labels[poset][upper])
            for poset in ("DPEx", "DIEx", "DCot")
            for lower, upper in report.hasse.get(poset, [])
        ]
        schema = pa.schema(
            [
                pa.field("poset", pa.string()),
                pa.field("lower", pa.int32()),
                pa.field("upper", pa.int32()),
                pa.field("lower_label", pa.string()),
                pa.field("upper_label", pa.string()),
            ]
        )
        columns = [
            pa.array([r[0] for r in rows], type=pa.string()),
            pa.array([r[1] for r in rows], type=pa.int32()),
            pa.array([r[2] for r in rows], type=pa.int32()),
            pa.array([r[3] for r in rows], type=pa.string()),
            pa.array([r[4] for r in rows], type=pa.string()),
        ]
        filename = self._generate_filename("hasse", metadata, output_dir)
        return self._write(filename, schema, columns, metadata)

    def _check_metadata(self, metadata: Dict[str, str]) -> None:
        missing_keys = [key for key in REQUIRED_METADATA if key not in metadata]
        if missing_keys:
            raise ValueError(f"Missing required metadata keys: {missing_keys}")

    def _write(self, filename: str, schema: pa.Schema, columns: list, metadata: Dict[str, str]) -> str:
        # PyArrow хранит метаданные как байты
        parquet_metadata = pa.KeyValueMetadata(
            {k.encode("utf-8"): str(v).encode("utf-8") for k, v in metadata.items()}
        )
        schema = schema.with_metadata(parquet_metadata)
        table = pa.Table.from_arrays(columns, schema=schema)
        try:
            with pq.ParquetWriter(filename, schema) as writer:
                writer.write_table(table)
        except Exception as e:
            raise IOError(f"Failed to write Parquet file: {e}") from e
        logger.info(f"Wrote {table.num_rows} rows to {filename}")
        return filename

    def _generate_filename(self, kind: str, metadata: Dict[str, str], output_dir: str) -> str:
        """
        Имя по шаблону {kind}_{universe_hash[:16]}_{base_structure}.parquet.

        Имя зависит только от метаданных, поэтому повторные прогоны перезаписывают файл.
        """
        base = "".join(ch if ch.isalnum() else "_" for ch in metadata["base_structure"])
        filename = f"{kind}_{metadata['universe_hash'][:16]}_{base}.parquet"
        return os.path.join(output_dir, filename)
