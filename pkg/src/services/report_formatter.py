"""Отчёты в двух форматах: человекочитаемая таблица и машиночитаемый JSON."""

import json
from typing import Any, Callable, Dict, List, Optional, Sequence

from src.models.reports import AxiomReport, BijectionReport, GaloisReport, LawReport, Violation, XuReport
from src.models.structures import BoundedVerdict, CotorsionPair, ExactStructure, ObjectClass
from src.models.universe import Universe
from src.services import exact, universe_store

FORMATS = ("human", "machine")
REPORT_KINDS = ("universe", "structure", "class", "cotorsion", "galois", "laws")


class ReportFormatError(ValueError):
    """Исключение для неизвестного формата или повреждённого машиночитаемого отчёта."""

    pass


# Полезная нагрузка


def _header(universe: Universe, kind: str) -> Dict[str, Any]:
    return {
        "kind": kind,
        "universe_hash": universe_store.universe_digest(universe),
        "prime": universe.p,
        "bound": universe.bound,
        "quiver": universe.quiver.spec(),
    }


def violation_payload(violation: Violation) -> Dict[str, Any]:
    return {"statement": violation.statement, "witness": violation.witness}


def class_members(cls: ObjectClass) -> List[Dict[str, Any]]:
    return [{"id": i, "name": cls.universe.name_of(i)} for i in cls.sorted()]


def universe_payload(universe: Universe) -> Dict[str, Any]:
    payload = _header(universe, "universe")
    indecomposables = set(universe.indecomposables)
    payload["classes"] = [
        {
            "id": index,
            "name": universe.name_of(index),
            "dims": list(rep.dims),
            "indecomposable": index in indecomposables,
        }
        for index, rep in enumerate(universe.objects)
    ]
    payload["orbits"] = len(universe.conflations)
    payload["nonsplit_orbits"] = [
        f"{universe.name_of(c.x)} -> {universe.name_of(c.y)} -> {universe.name_of(c.z)}"
        for c in universe.conflations
        if not c.splits
    ]
    return payload


def structure_payload(e: ExactStructure, axioms: Optional[AxiomReport] = None) -> Dict[str, Any]:
    universe = e.universe
    payload = _header(universe, "structure")
    payload["structure"] = exact.describe(e)
    payload["orbits"] = [
        {
            "id": c.id,
            "conflation": f"{universe.name_of(c.x)} -> {universe.name_of(c.y)} -> {universe.name_of(c.z)}",
            "splits": c.splits,
        }
        for c in (universe.conflations[i] for i in exact.orbit_ids(e))
    ]
    payload["projectives"] = class_members(exact.proj_objects(e))
    payload["injectives"] = class_members(exact.inj_objects(e))
    if axioms is not None:
        payload["axioms"] = {
            "checked": axioms.checked,
            "skipped": axioms.skipped,
            "passed": axioms.passed,
            "violations": [violation_payload(v) for v in axioms.violations],
            "warnings": [violation_payload(v) for v in axioms.warnings],
        }
    return payload


def class_payload(title: str, cls: ObjectClass, parameters: Dict[str, str]) -> Dict[str, Any]:
    payload = _header(cls.universe, "class")
    payload.update(
        {
            "title": title,
            "parameters": parameters,
            "members": class_members(cls),
            "skipped": cls.skipped,
        }
    )
    return payload


def cotorsion_payload(
    pair: CotorsionPair,
    verdicts: Dict[str, BoundedVerdict],
    flags: Dict[str, bool],
    approximations: Optional[List[Dict[str, Any]]] = None,
    comparison: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    universe = pair.a.universe
    payload = _header(universe, "cotorsion")
    payload.update(
        {
            "base": exact.describe(pair.base),
            "a": class_members(pair.a),
            "b": class_members(pair.b),
            "verdicts": {
                name: {
                    "value": verdict.label(),
                    "unresolved": [universe.name_of(i) for i in verdict.skipped],
                }
                for name, verdict in verdicts.items()
            },
            "flags": flags,
        }
    )
    if approximations is not None:
        payload["approximations"] = approximations
    if comparison is not None:
        payload["comparison"] = comparison
    return payload


def _xu_payload(report: XuReport) -> Dict[str, Any]:
    return {
        "side": report.side,
        "values": list(report.values),
        "precondition_met": report.precondition_met,
        "reason": report.reason,
        "agrees": report.agrees,
    }


def galois_payload(
    universe: Universe,
    base: ExactStructure,
    report: GaloisReport,
    bijection: BijectionReport,
    xu: Sequence[Dict[str, Any]] = (),
) -> Dict[str, Any]:
    payload = _header(universe, "galois")
    payload.update(
        {
            "base": exact.describe(base),
            "dpex": report.dpex,
            "diex": report.diex,
            "dcot": report.dcot,
            "maps": {name: [list(row) for row in rows] for name, rows in report.maps.items()},
            "laws": {
                name: {
                    "checked": checked,
                    "violations": [violation_payload(v) for v in violations],
                }
                for name, (checked, violations) in report.laws.items()
            },
            "hasse": {name: [list(edge) for edge in edges] for name, edges in report.hasse.items()},
            "bijection": {
                "dcot": bijection.dcot_count,
                "xu_dpex": bijection.xu_proj_count,
                "xu_diex": bijection.xu_inj_count,
                "pairs": [list(row) for row in bijection.pairs],
                "violations": [violation_payload(v) for v in bijection.violations],
                "passed": bijection.passed,
            },
            "xu": [dict(entry, report=_xu_payload(entry["report"])) for entry in xu],
            "passed": report.passed
            and bijection.passed
            and all(entry["report"].agrees for entry in xu),
        }
    )
    return payload


def laws_payload(universe: Universe, base: ExactStructure, reports: Sequence[LawReport]) -> Dict[str, Any]:
    payload = _header(universe, "laws")
    payload["base"] = exact.describe(base)
    payload["reports"] = [
        {
            "law": r.law,
            "universe_id": r.universe_id,
            "parameters": r.parameters,
            "checked": r.checked,
            "skipped": r.skipped,
            "skips": [{"kind": s.kind, "objects": list(s.objects)} for s in r.skips],
            "violations": [violation_payload(v) for v in r.violations],
            "notes": r.notes,
        }
        for r in reports
    ]
    payload["violations"] = sum(len(r.violations) for r in reports)
    payload["passed"] = payload["violations"] == 0
    return payload


# Форматы


def to_machine(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_machine_report(text: str) -> Dict[str, Any]:
    """
    Разобрать машиночитаемый отчёт.

    Raises:
        ReportFormatError: если текст не является отчётом известного вида.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ReportFormatError(f"Malformed report: {e}") from e
    if not isinstance(payload, dict):
        raise ReportFormatError("Report must be a JSON object")
    if payload.get("kind") not in REPORT_KINDS:
        raise ReportFormatError(f"Unknown report kind {payload.get('kind')!r}")
    for key in ("universe_hash", "prime", "bound", "quiver"):
        if key not in payload:
            raise ReportFormatError(f"Report is missing {key!r}")
    return payload


def _names(members: List[Dict[str, Any]]) -> str:
    return "{" + ", ".join(m["name"] for m in members) + "}"


def _human_header(payload: Dict[str, Any]) -> List[str]:
    return [
        f"Universe {payload['universe_hash'][:16]}  quiver {payload['quiver']}  "
        f"F_{payload['prime']}  bound {payload['bound']}"
    ]


def _human_universe(payload: Dict[str, Any]) -> List[str]:
    lines = _human_header(payload)
    lines.append(f"Classes: {len(payload['classes'])}  orbits: {payload['orbits']}")
    lines.append(f"{'id':>4}  {'name':<12} {'dims':<12} indecomposable")
    for row in payload["classes"]:
        dims = ",".join(str(d) for d in row["dims"])
        lines.append(f"{row['id']:>4}  {row['name']:<12} {dims:<12} {'yes' if row['indecomposable'] else ''}")
    lines.append("Nonsplit orbits:")
    lines.extend(f"  {text}" for text in payload["nonsplit_orbits"])
    return lines


def _human_violations(violations: List[Dict[str, Any]], indent: str = "    ") -> List[str]:
    return [
        f"{indent}{v['statement']}: {json.dumps(v['witness'], sort_keys=True, ensure_ascii=False)}"
        for v in violations
    ]


def _human_structure(payload: Dict[str, Any]) -> List[str]:
    lines = _human_header(payload)
    lines.append(f"Structure {payload['structure']}: {len(payload['orbits'])} orbits")
    for orbit in payload["orbits"]:
        lines.append(f"  [{orbit['id']:>3}] {orbit['conflation']}{'' if orbit['splits'] else '  (nonsplit)'}")
    lines.append(f"Proj: {_names(payload['projectives'])}")
    lines.append(f"Inj:  {_names(payload['injectives'])}")
    axioms = payload.get("axioms")
    if axioms is not None:
        status = "PASS" if axioms["passed"] else "FAIL"
        lines.append(f"Axioms: {status}  checked {axioms['checked']}  skipped {axioms['skipped']}")
        lines.extend(_human_violations(axioms["violations"]))
        if axioms["warnings"]:
            lines.append(f"  obscure-axiom warnings: {len(axioms['warnings'])}")
    return lines


def _human_class(payload: Dict[str, Any]) -> List[str]:
    lines = _human_header(payload)
    parameters = "  ".join(f"{k}={v}" for k, v in sorted(payload["parameters"].items()))
    lines.append(f"{payload['title']}  {parameters}")
    lines.append(f"  {_names(payload['members'])}")
    if payload["skipped"]:
        lines.append(f"  unresolved pairs: {payload['skipped']}")
    return lines


def _human_cotorsion(payload: Dict[str, Any]) -> List[str]:
    lines = _human_header(payload)
    lines.append(f"Base {payload['base']}")
    lines.append(f"A = {_names(payload['a'])}")
    lines.append(f"B = {_names(payload['b'])}")
    for name, verdict in sorted(payload["verdicts"].items()):
        unresolved = f"  unresolved {verdict['unresolved']}" if verdict["unresolved"] else ""
        lines.append(f"  {name:<20} {verdict['value']}{unresolved}")
    for name, flag in sorted(payload["flags"].items()):
        lines.append(f"  {name:<20} {'yes' if flag else 'no'}")
    for row in payload.get("approximations", []):
        lines.append(f"  {row['kind']:<10} {row['object']:<10} {row['conflation'] or 'not found'}")
    comparison = payload.get("comparison")
    if comparison is not None:
        lines.append(
            f"  {comparison['side']} comparison: relative={comparison['relative']} "
            f"absolute={comparison['absolute']} extremes={comparison['contains_extremes']} "
            f"agrees={comparison['agrees']}"
        )
    return lines


def _human_galois(payload: Dict[str, Any]) -> List[str]:
    lines = _human_header(payload)
    lines.append(f"Base {payload['base']}")
    for name in ("dpex", "diex", "dcot"):
        lines.append(f"{name.upper()} ({len(payload[name])}):")
        lines.extend(f"  [{i}] {text}" for i, text in enumerate(payload[name]))
    for name, rows in sorted(payload["maps"].items()):
        lines.append(f"{name}:")
        lines.extend(f"  {source}  ->  {target}" for source, target in rows)
    lines.append(f"{'law':<24} {'checked':>8}  result")
    for name, law in payload["laws"].items():
        lines.append(f"{name:<24} {law['checked']:>8}  {'PASS' if not law['violations'] else 'FAIL'}")
        lines.extend(_human_violations(law["violations"]))
    for name, edges in sorted(payload["hasse"].items()):
        lines.append(f"Hasse {name}: {' '.join(f'{a}<{b}' for a, b in edges) or '-'}")
    bijection = payload["bijection"]
    lines.append(
        f"Xu bijection: |DCot|={bijection['dcot']} |Xu-DPEx|={bijection['xu_dpex']} "
        f"|Xu-DIEx|={bijection['xu_diex']}  {'PASS' if bijection['passed'] else 'FAIL'}"
    )
    lines.extend(_human_violations(bijection["violations"]))
    for entry in payload["xu"]:
        report = entry["report"]
        if report["precondition_met"]:
            values = ", ".join("yes" if v else "no" for v in report["values"])
            result = f"({values})  {'PASS' if report['agrees'] else 'FAIL'}"
        else:
            result = f"skipped: {report['reason']}"
        lines.append(f"Xu {report['side']} {entry['structure']}: {result}")
    lines.append("RESULT: " + ("PASS" if payload["passed"] else "FAIL"))
    return lines


def _human_laws(payload: Dict[str, Any]) -> List[str]:
    lines = _human_header(payload)
    lines.append(f"Base {payload['base']}")
    lines.append(f"{'law':<12} {'checked':>8} {'skipped':>8} {'violations':>10}  parameters")
    for report in payload["reports"]:
        parameters = " ".join(f"{k}={v}" for k, v in sorted(report["parameters"].items()))
        lines.append(
            f"{report['law']:<12} {report['checked']:>8} {report['skipped']:>8} "
            f"{len(report['violations']):>10}  {parameters}"
        )
        lines.extend(_human_violations(report["violations"]))
        lines.extend(f"    note: {note}" for note in report["notes"])
    lines.append(f"Reports: {len(payload['reports'])}  violations: {payload['violations']}")
    lines.append("RESULT: " + ("PASS" if payload["passed"] else "FAIL"))
    return lines


_HUMAN: Dict[str, Callable[[Dict[str, Any]], List[str]]] = {
    "universe": _human_universe,
    "structure": _human_structure,
    "class": _human_class,
    "cotorsion": _human_cotorsion,
    "galois": _human_galois,
    "laws": _human_laws,
}


def render(payload: Dict[str, Any], fmt: str = "human") -> str:
    """
    Отрисовать отчёт в выбранном формате.

    Raises:
        ReportFormatError: если формат неизвестен.
    """
    if fmt == "machine":
        return to_machine(payload)
    if fmt == "human":
        return "\n".join(_HUMAN[payload["kind"]](payload)) + "\n"
    raise ReportFormatError(f"Unknown format {fmt!r}; expected one of {FORMATS}")
