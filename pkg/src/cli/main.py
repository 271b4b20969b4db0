"""CLI-точка входа: вселенные, точные структуры, классы, пары кручения, связи Галуа и законы."""

import argparse
import logging
import os
import sys
from typing import Dict, List, Optional

from src.models.reports import LawReport
from src.models.session import Session
from src.models.structures import ExactStructure
from src.services import (
    cotorsion,
    exact,
    galois,
    laws,
    relative,
    report_formatter,
    universe_builder,
    universe_store,
)
from src.services.cotorsion import CotorsionError
from src.services.exact import ExactStructureError
from src.services.ffmat import FieldMatrixError
from src.services.galois import GaloisError
from src.services.laws import LawConfig, LawError
from src.services.parquet_writer import ParquetWriter
from src.services.report_formatter import FORMATS, ReportFormatError, render
from src.services.universe_builder import UniverseError
from src.services.universe_store import UniverseFormatError
from src.utils.parsers import SpecParseError, parse_class_list, parse_quiver, parse_structure
from src.utils.validators import validate_prime

# Логи идут в stderr, отчёты — в stdout
logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

# Коды выхода (контракты CLI)
EXIT_SUCCESS = 0
EXIT_VIOLATION = 1
EXIT_USAGE_ERROR = 2

# Ошибки входных данных: разбор, границы, отсутствующие или повреждённые файлы
USAGE_ERRORS = (
    SpecParseError,
    UniverseError,
    UniverseFormatError,
    FieldMatrixError,
    ExactStructureError,
    CotorsionError,
    LawError,
    ReportFormatError,
)


def _add_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=FORMATS,
        default="human",
        help="Формат отчёта: human (таблица) или machine (JSON)",
    )


def _add_universe(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--universe", required=True, help="Файл вселенной, созданный командой universe")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exact-lab",
        description="Точные структуры на представлениях колчанов над F_p",
    )
    subparsers = parser.add_subparsers(dest="command")

    universe = subparsers.add_parser("universe", help="Построить и сохранить вселенную объектов и конфляций")
    universe.add_argument("--quiver", required=True, help='Колчан: стрелки "1->2,2->3", отдельная вершина "1"')
    universe.add_argument("--prime", required=True, type=int, help="Характеристика поля p")
    universe.add_argument("--bound", required=True, type=int, help="Граница суммарной размерности")
    universe.add_argument("--out", required=True, help="Путь для сохранения вселенной")
    _add_format(universe)

    exact_cmd = subparsers.add_parser("exact", help="Описать точную структуру и её проективные/инъективные")
    _add_universe(exact_cmd)
    exact_cmd.add_argument("--structure", required=True, help="Выражение структуры, например proj_gen:S1")
    exact_cmd.add_argument("--axioms", action="store_true", help="Проверить аксиомы перебором")
    _add_format(exact_cmd)

    for name, title in (("div", "D-E-делимые"), ("flat", "D-E-плоские")):
        cmd = subparsers.add_parser(name, help=f"Вычислить класс {title} объектов")
        _add_universe(cmd)
        cmd.add_argument("--d", required=True, help="Базовая структура D")
        cmd.add_argument("--e", required=True, help="Структура E")
        cmd.add_argument("--relative", help="Класс A (B), относительно которого проверять")
        _add_format(cmd)

    cot = subparsers.add_parser("cotorsion", help="Построить D-пару кручения и проверить её свойства")
    _add_universe(cot)
    cot.add_argument("--d", required=True, help="Базовая структура D")
    source = cot.add_mutually_exclusive_group(required=True)
    source.add_argument("--generated", help="Пара (^⊥A, (^⊥A)^⊥), порождённая классом")
    source.add_argument("--cogenerated", help="Пара (^⊥(A^⊥), A^⊥), копорождённая классом")
    cot.add_argument("--approximations", action="store_true", help="Показать накрытия A и оболочки B")
    cot.add_argument("--compare-class", help="Класс для сравнения относительной и абсолютной аппроксимации")
    cot.add_argument("--side", choices=("envelope", "cover"), default="envelope")
    _add_format(cot)

    gal = subparsers.add_parser("galois", help="Перечислить DPEx, DIEx, DCot и проверить законы связей Галуа")
    _add_universe(gal)
    gal.add_argument("--base", default="max", help="Базовая структура D (по умолчанию max)")
    gal.add_argument("--parquet-dir", help="Каталог для рёбер диаграмм Хассе в Parquet")
    _add_format(gal)

    laws_cmd = subparsers.add_parser("laws", help="Проверка законов")
    laws_sub = laws_cmd.add_subparsers(dest="laws_command")
    run = laws_sub.add_parser("run", help="Запустить законы на всех конфигурациях")
    _add_universe(run)
    run.add_argument("--base", default="max", help="Базовая структура D (по умолчанию max)")
    run.add_argument("--law", action="append", choices=laws.LAW_NAMES, help="Закон (можно повторять)")
    run.add_argument(
        "--mutate",
        action="append",
        default=[],
        choices=sorted(laws.MUTATIONS),
        help="Включить документированную порчу для закона",
    )
    run.add_argument(
        "--first-generator-only",
        action="store_true",
        help="Не перебирать все порождающие подмножества",
    )
    run.add_argument("--parquet-dir", help="Каталог для сводки законов в Parquet")
    _add_format(run)

    return parser


def _emit(payload: Dict, fmt: str) -> None:
    sys.stdout.write(render(payload, fmt))


def _load_session(args: argparse.Namespace) -> Session:
    return Session(universe=universe_store.load(args.universe), output_format=args.format)


def _structure(session: Session, name: str, text: str) -> ExactStructure:
    session.add("structure", name, parse_structure(text, session.universe))
    return session.get("structure", name)


def _metadata(session: Session, base: ExactStructure) -> Dict[str, str]:
    universe = session.universe
    return {
        "universe_hash": universe_store.universe_digest(universe),
        "prime": str(universe.p),
        "bound": str(universe.bound),
        "quiver": universe.quiver.spec(),
        "base_structure": exact.describe(base),
    }


def _run_universe(args: argparse.Namespace) -> int:
    is_valid, error_msg = validate_prime(args.prime)
    if not is_valid:
        raise SpecParseError(error_msg)
    quiver = parse_quiver(args.quiver)
    universe = universe_builder.build_universe(quiver, args.prime, args.bound)
    universe_store.save(universe, args.out)
    logger.info(f"Успешно создан файл вселенной: {args.out}")
    _emit(report_formatter.universe_payload(universe), args.format)
    return EXIT_SUCCESS


def _run_exact(args: argparse.Namespace) -> int:
    session = _load_session(args)
    e = _structure(session, "e", args.structure)
    axioms = exact.axioms_check(e) if args.axioms else None
    _emit(report_formatter.structure_payload(e, axioms), session.output_format)
    if axioms is not None and not axioms.passed:
        logger.error(f"Axiom check failed with {len(axioms.violations)} violations")
        return EXIT_VIOLATION
    return EXIT_SUCCESS


def _run_relative_class(args: argparse.Namespace) -> int:
    session = _load_session(args)
    d = _structure(session, "d", args.d)
    e = _structure(session, "e", args.e)
    parameters = {"d": exact.describe(d), "e": exact.describe(e)}
    if args.relative is not None:
        session.add("class", "relative", parse_class_list(args.relative, session.universe))
        cls = session.get("class", "relative")
        parameters["relative"] = ",".join(cls.names())
        build = relative.div_objects_rel if args.command == "div" else relative.flat_objects_rel
        result = build(d, e, cls)
    else:
        build = relative.div_objects if args.command == "div" else relative.flat_objects
        result = build(d, e)
    title = "Div" if args.command == "div" else "Flat"
    _emit(report_formatter.class_payload(title, result, parameters), session.output_format)
    return EXIT_SUCCESS


def _approximation_rows(session: Session, pair) -> List[Dict]:
    universe = session.universe
    d = pair.base
    rows: List[Dict] = []
    for x in universe.indecomposables:
        for kind, best, fallback, cls in (
            ("cover", cotorsion.cover, cotorsion.precover, pair.a),
            ("envelope", cotorsion.envelope, cotorsion.preenvelope, pair.b),
        ):
            witness = best(d, cls, x) or fallback(d, cls, x)
            conflation = None
            if witness is not None:
                c = universe.conflations[witness.orbit]
                conflation = f"{universe.name_of(c.x)} -> {universe.name_of(c.y)} -> {universe.name_of(c.z)}"
            rows.append(
                {
                    "kind": witness.kind if witness is not None else kind,
                    "object": universe.name_of(x),
                    "conflation": conflation,
                }
            )
    return rows


def _run_cotorsion(args: argparse.Namespace) -> int:
    session = _load_session(args)
    d = _structure(session, "d", args.d)
    if args.generated is not None:
        session.add("class", "source", parse_class_list(args.generated, session.universe))
        pair = cotorsion.pair_generated(d, session.get("class", "source"))
    else:
        session.add("class", "source", parse_class_list(args.cogenerated, session.universe))
        pair = cotorsion.pair_cogenerated(d, session.get("class", "source"))
    session.add("pair", "pair", pair)

    verdicts = {
        "enough_injectives": cotorsion.enough_injectives(pair),
        "enough_projectives": cotorsion.enough_projectives(pair),
        "perfect": cotorsion.is_perfect(pair),
    }
    flags = {
        "cotorsion_pair": cotorsion.is_cotorsion_pair(d, pair.a, pair.b),
        "a_resolving": cotorsion.is_resolving(d, pair.a),
        "b_coresolving": cotorsion.is_coresolving(d, pair.b),
    }
    approximations = _approximation_rows(session, pair) if args.approximations else None
    comparison = None
    if args.compare_class is not None:
        session.add("class", "compare", parse_class_list(args.compare_class, session.universe))
        report = cotorsion.env_cover_comparison(d, session.get("class", "compare"), args.side)
        comparison = {
            "side": report.side,
            "relative": report.relative,
            "absolute": report.absolute,
            "contains_extremes": report.contains_extremes,
            "agrees": report.agrees,
            "witnesses": [session.universe.name_of(i) for i in report.witnesses],
            "skipped": [session.universe.name_of(i) for i in report.skipped],
        }
    payload = report_formatter.cotorsion_payload(pair, verdicts, flags, approximations, comparison)
    _emit(payload, session.output_format)
    return EXIT_SUCCESS


def _run_galois(args: argparse.Namespace) -> int:
    session = _load_session(args)
    d = _structure(session, "d", args.base)
    report = galois.check_galois(d)
    bijection = galois.check_bijection(d)
    dpex, diex, _ = galois.posets(d)
    xu = [
        {"structure": exact.describe(e), "report": galois.check_xu_characterization(d, e, side)}
        for poset, side in ((dpex, "proj"), (diex, "inj"))
        for e in poset.elements
    ]
    payload = report_formatter.galois_payload(session.universe, d, report, bijection, xu)
    if args.parquet_dir:
        os.makedirs(args.parquet_dir, exist_ok=True)
        filename = ParquetWriter().write_hasse_edges(report, _metadata(session, d), args.parquet_dir)
        logger.info(f"Успешно создан Parquet файл: {filename}")
    _emit(payload, session.output_format)
    return EXIT_SUCCESS if payload["passed"] else EXIT_VIOLATION


def _run_laws(args: argparse.Namespace) -> int:
    session = _load_session(args)
    d = _structure(session, "d", args.base)
    config = LawConfig(
        base=d,
        laws=tuple(args.law) if args.law else laws.LAW_NAMES,
        mutations={law: laws.MUTATIONS[law] for law in args.mutate},
        sweep_generators=not args.first_generator_only,
    )
    reports: List[LawReport] = laws.run_all(session.universe, config)
    if args.parquet_dir:
        os.makedirs(args.parquet_dir, exist_ok=True)
        filename = ParquetWriter().write_law_summary(reports, _metadata(session, d), args.parquet_dir)
        logger.info(f"Успешно создан Parquet файл: {filename}")
    _emit(report_formatter.laws_payload(session.universe, d, reports), session.output_format)
    violations = laws.count_violations(reports)
    if violations:
        logger.error(f"Law run found {violations} violations")
        return EXIT_VIOLATION
    return EXIT_SUCCESS


COMMANDS = {
    "universe": _run_universe,
    "exact": _run_exact,
    "div": _run_relative_class,
    "flat": _run_relative_class,
    "cotorsion": _run_cotorsion,
    "galois": _run_galois,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Главная точка входа CLI.

    Коды выхода: 0 — успех, 1 — нарушение закона или аксиомы, 2 — ошибка использования.
    """
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_SUCCESS if e.code in (0, None) else EXIT_USAGE_ERROR

    if args.command == "laws":
        if args.laws_command != "run":
            parser.print_help(sys.stderr)
            return EXIT_USAGE_ERROR
        handler = _run_laws
    elif args.command in COMMANDS:
        handler = COMMANDS[args.command]
    else:
        parser.print_help(sys.stderr)
        return EXIT_USAGE_ERROR

    try:
        return handler(args)
    except USAGE_ERRORS as e:
        error_message = str(e)
        logger.error(error_message)
        print(f"Error: {error_message}", file=sys.stderr)
        return EXIT_USAGE_ERROR
    except IOError as e:
        error_message = f"Ошибка файловой системы: {e}"
        logger.error(error_message)
        print(f"Error: {error_message}", file=sys.stderr)
        return EXIT_USAGE_ERROR
    except GaloisError as e:
        error_message = f"Внутреннее противоречие: {e}"
        logger.error(error_message)
        print(f"Error: {error_message}", file=sys.stderr)
        return EXIT_VIOLATION
    except KeyboardInterrupt:
        logger.info("Прервано пользователем")
        print("\nПрервано пользователем", file=sys.stderr)
        return EXIT_USAGE_ERROR
    except Exception as e:
        error_message = f"Неожиданная ошибка: {e}"
        logger.error(error_message, exc_info=True)
        print(f"Error: {error_message}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
