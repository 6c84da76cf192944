"""Workspace persistence and interchange formats.

A workspace bundles everything one TTP defence analysis needs: the
interaction matrix, per-control benefit assessments, weights and beta,
performance series, and optional previously-reported reference values.

On disk a workspace is a directory holding a human-editable
``workspace.yaml`` plus an adjacent matrix CSV (matrices get edited in
spreadsheets, the rest is config). The exact key names are normative and
documented in docs/format.md. Loading is strict: any parse error or
invariant violation aborts with a diagnostic locating the offending file,
line or field.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from pathlib import Path

import yaml

from .beneficial import BenefitWeights, ControlAssessment
from .complexity import DstarMode
from .errors import CdsmError, FormatError
from .model import (
    ATTACK_ID_PATTERN,
    Cdsm,
    Component,
    ComponentKind,
    Interaction,
    Violation,
    validate_cdsm,
)
from .performance import Metric, MetricPoint, MetricSeries

WORKSPACE_SCHEMA_VERSION = 1
WORKSPACE_FILENAME = "workspace.yaml"

TOKEN_TO_INTERACTION = {
    "X": Interaction.SELF,
    "0": Interaction.NEUTRAL,
    "+1": Interaction.POSITIVE,
    "1": Interaction.POSITIVE,  # spreadsheet exports drop plus signs
    "-1": Interaction.NEGATIVE,
}
INTERACTION_TO_TOKEN = {
    Interaction.SELF: "X",
    Interaction.NEUTRAL: "0",
    Interaction.POSITIVE: "+1",
    Interaction.NEGATIVE: "-1",
}


@dataclass(frozen=True)
class ReferenceValues:
    """Previously-reported quantities a workspace wants its analysis compared
    against; any subset may be present. Divergences show up as report notes."""

    d_star: float | None = None
    d_b: float | None = None
    d_e: float | None = None
    alpha: float | None = None
    gamma: float | None = None


@dataclass(frozen=True)
class Workspace:
    """Immutable, fully-validated input set for one TTP defence analysis."""

    name: str
    ttp: str
    matrix: Cdsm
    assessments: tuple[ControlAssessment, ...]
    weights: BenefitWeights = BenefitWeights()
    beta: float = 0.5
    series: tuple[MetricSeries, ...] = ()
    canonical_metric: Metric = Metric.PREVENTION_RATE
    mode: DstarMode = DstarMode.DEGREE
    description: str = ""
    reference: ReferenceValues | None = None


def with_overrides(
    workspace: Workspace,
    mode: DstarMode | None = None,
    beta: float | None = None,
    weights: BenefitWeights | None = None,
    canonical_metric: Metric | None = None,
) -> Workspace:
    """Copy of the workspace with analysis settings replaced (CLI/service flags)."""
    ws = workspace
    if mode is not None:
        ws = replace(ws, mode=mode)
    if beta is not None:
        ws = replace(ws, beta=beta)
    if weights is not None:
        ws = replace(ws, weights=weights)
    if canonical_metric is not None:
        ws = replace(ws, canonical_metric=canonical_metric)
    return ws


def validate_workspace(workspace: Workspace) -> list[Violation]:
    """Cross-reference checks on top of the per-type invariants.

    Controls and assessments must be in one-to-one correspondence, and
    every named id must exist in the matrix with the right kind.
    """
    violations = list(validate_cdsm(workspace.matrix))
    if not workspace.name:
        violations.append(Violation("name", "workspace name must be non-empty"))
    if not ATTACK_ID_PATTERN.match(workspace.ttp):
        violations.append(
            Violation("ttp", f"{workspace.ttp!r} does not match the ATT&CK pattern T####(.###)")
        )
    if not 0.0 <= workspace.beta <= 1.0:
        violations.append(Violation("beta", f"must be within [0,1], got {workspace.beta}"))

    by_id = {c.id: c for c in workspace.matrix.components}
    assessed: dict[str, int] = {}
    for idx, assessment in enumerate(workspace.assessments):
        where = f"assessments[{idx}]"
        comp = by_id.get(assessment.control)
        if comp is None:
            violations.append(
                Violation(where, f"references unknown control {assessment.control!r}")
            )
            continue
        if comp.kind is not ComponentKind.CONTROL:
            violations.append(
                Violation(where, f"{assessment.control!r} is a {comp.kind.value}, not a control")
            )
        if assessment.control in assessed:
            violations.append(
                Violation(where, f"duplicate assessment for control {assessment.control!r}")
            )
        assessed[assessment.control] = idx
    for comp in workspace.matrix.components:
        if comp.kind is ComponentKind.CONTROL and comp.id not in assessed:
            violations.append(
                Violation(f"component {comp.id!r}", "control has no benefit assessment")
            )

    seen_metrics: set[Metric] = set()
    for idx, series in enumerate(workspace.series):
        if series.metric in seen_metrics:
            violations.append(
                Violation(f"series[{idx}]", f"duplicate series for metric {series.metric.value}")
            )
        seen_metrics.add(series.metric)
    return violations


# ---------------------------------------------------------------------------
# Matrix CSV
# ---------------------------------------------------------------------------


def _infer_component(component_id: str, source: str) -> Component:
    try:
        if ATTACK_ID_PATTERN.match(component_id):
            return Component(
                id=component_id, kind=ComponentKind.TECHNIQUE, attack_id=component_id
            )
        return Component(id=component_id, kind=ComponentKind.CONTROL)
    except ValueError as exc:
        raise FormatError(str(exc), source=source)


def parse_matrix_csv(text: str, source: str = "<matrix>") -> Cdsm:
    """Parse a matrix CSV into a validated interaction matrix.

    Grammar: leading lines may be ``#`` comments; the first data row is the
    header (corner cell ignored, then component ids); every following row
    is a row id followed by cell tokens from {X, 0, +1, -1} ("1" is
    accepted for "+1"). Row ids must repeat the header ids in order. Any
    deviation raises a located :class:`FormatError`.
    """
    lines = text.splitlines()
    start = 0
    while start < len(lines) and (not lines[start].strip() or lines[start].lstrip().startswith("#")):
        start += 1
    data_lines = [(i + 1, lines[i]) for i in range(start, len(lines)) if lines[i].strip()]
    if not data_lines:
        raise FormatError("missing header row", source=source)

    def parse_line(raw: str) -> list[str]:
        return next(csv.reader(io.StringIO(raw)))

    header_line_no, header_raw = data_lines[0]
    header = [f.strip() for f in parse_line(header_raw)]
    if len(header) < 2:
        raise FormatError(
            "header must list at least one component id", source=source,
            where=f"line {header_line_no}",
        )
    ids = header[1:]
    n = len(ids)
    seen: dict[str, int] = {}
    for pos, component_id in enumerate(ids):
        if not component_id:
            raise FormatError(
                f"empty component id in header column {pos + 2}", source=source,
                where=f"line {header_line_no}",
            )
        if component_id in seen:
            raise FormatError(
                f"duplicate component id {component_id!r} in header", source=source,
                where=f"line {header_line_no}",
            )
        seen[component_id] = pos

    body = data_lines[1:]
    if len(body) != n:
        raise FormatError(
            f"matrix is not square: header lists {n} components but found {len(body)} rows",
            source=source,
        )
    rows: list[tuple[Interaction, ...]] = []
    for row_pos, (line_no, raw) in enumerate(body):
        fields = [f.strip() for f in parse_line(raw)]
        if len(fields) != n + 1:
            raise FormatError(
                f"expected {n + 1} fields (row id + {n} cells), found {len(fields)}",
                source=source, where=f"line {line_no}",
            )
        row_id = fields[0]
        if row_id != ids[row_pos]:
            raise FormatError(
                f"row id {row_id!r} does not match header id {ids[row_pos]!r} at position "
                f"{row_pos + 1}; rows must repeat the header order",
                source=source, where=f"line {line_no}",
            )
        cells = []
        for col_pos, token in enumerate(fields[1:]):
            value = TOKEN_TO_INTERACTION.get(token)
            if value is None:
                raise FormatError(
                    f"unknown cell token {token!r} (expected X, 0, +1 or -1)",
                    source=source,
                    where=f"line {line_no}, row {row_id!r}, column {ids[col_pos]!r}",
                )
            cells.append(value)
        rows.append(tuple(cells))

    matrix = Cdsm(
        components=tuple(_infer_component(cid, source) for cid in ids),
        cells=tuple(rows),
    )
    violations = validate_cdsm(matrix)
    if violations:
        raise FormatError(
            "invalid matrix: " + "; ".join(str(v) for v in violations), source=source
        )
    return matrix


def matrix_csv_text(matrix: Cdsm) -> str:
    """Serialize a matrix back to its CSV form (inverse of parse_matrix_csv)."""
    ids = matrix.component_ids()
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["", *ids])
    for i, row in enumerate(matrix.cells):
        writer.writerow([ids[i], *(INTERACTION_TO_TOKEN[cell] for cell in row)])
    return out.getvalue()


# ---------------------------------------------------------------------------
# Workspace document (YAML on disk, JSON over the wire)
# ---------------------------------------------------------------------------


def _fail(message: str, source: str, where: str = "") -> FormatError:
    return FormatError(message, source=source, where=where)


def _opt_str(doc: dict, key: str, source: str, default: str = "") -> str:
    value = doc.get(key, default)
    if not isinstance(value, str):
        raise _fail(f"must be a string, got {type(value).__name__}", source, key)
    return value


def _req_str(doc: dict, key: str, source: str) -> str:
    if key not in doc:
        raise _fail("required field is missing", source, key)
    value = doc[key]
    if not isinstance(value, str) or not value:
        raise _fail("must be a non-empty string", source, key)
    return value


def _opt_number(doc: dict, key: str, source: str, default: float) -> float:
    value = doc.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _fail(f"must be a number, got {value!r}", source, key)
    return float(value)


def _parse_enum(enum_cls, value, source: str, where: str):
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise _fail(f"unknown value {value!r} (expected one of: {allowed})", source, where)


def _parse_components(entries, matrix: Cdsm, source: str) -> Cdsm:
    """Overlay YAML component metadata onto the CSV roster.

    The declared id set must equal the CSV id set exactly; matrix order
    stays authoritative.
    """
    if not isinstance(entries, list):
        raise _fail("must be a list of component entries", source, "components")
    declared: dict[str, Component] = {}
    for idx, entry in enumerate(entries):
        where = f"components[{idx}]"
        if not isinstance(entry, dict):
            raise _fail("must be a mapping", source, where)
        cid = _req_str(entry, "id", source)
        kind = _parse_enum(ComponentKind, entry.get("kind"), source, f"{where}.kind")
        attack_id = entry.get("attack_id")
        if attack_id is None and kind is ComponentKind.TECHNIQUE and ATTACK_ID_PATTERN.match(cid):
            attack_id = cid
        try:
            component = Component(
                id=cid, kind=kind, name=entry.get("name", ""), attack_id=attack_id
            )
        except ValueError as exc:
            raise _fail(str(exc), source, where)
        if cid in declared:
            raise _fail(f"duplicate component id {cid!r}", source, where)
        declared[cid] = component

    matrix_ids = set(matrix.component_ids())
    missing = sorted(matrix_ids - declared.keys())
    extra = sorted(declared.keys() - matrix_ids)
    if missing:
        raise _fail(
            f"components missing for matrix ids: {', '.join(missing)}", source, "components"
        )
    if extra:
        raise _fail(
            f"components not present in the matrix: {', '.join(extra)}", source, "components"
        )
    return Cdsm(
        components=tuple(declared[cid] for cid in matrix.component_ids()),
        cells=matrix.cells,
    )


def _parse_weights(doc: dict, source: str) -> BenefitWeights:
    raw = doc.get("weights")
    if raw is None:
        return BenefitWeights()
    if not isinstance(raw, dict):
        raise _fail("must be a mapping with diversity/independence/coverage", source, "weights")
    unknown = sorted(set(raw) - {"diversity", "independence", "coverage"})
    if unknown:
        raise _fail(f"unknown weight keys: {', '.join(unknown)}", source, "weights")
    try:
        return BenefitWeights(
            diversity=_opt_number(raw, "diversity", source, 1.0),
            independence=_opt_number(raw, "independence", source, 1.0),
            coverage=_opt_number(raw, "coverage", source, 1.0),
        )
    except CdsmError as exc:
        raise _fail(str(exc), source, "weights")


def _parse_assessments(doc: dict, source: str) -> tuple[ControlAssessment, ...]:
    raw = doc.get("assessments", [])
    if not isinstance(raw, list):
        raise _fail("must be a list", source, "assessments")
    out = []
    for idx, entry in enumerate(raw):
        where = f"assessments[{idx}]"
        if not isinstance(entry, dict):
            raise _fail("must be a mapping", source, where)
        for key in ("diversity", "independence", "coverage"):
            if key not in entry:
                raise _fail(f"missing score {key!r}", source, where)
        try:
            out.append(
                ControlAssessment(
                    control=_req_str(entry, "control", source),
                    diversity=_opt_number(entry, "diversity", source, 0.0),
                    independence=_opt_number(entry, "independence", source, 0.0),
                    coverage=_opt_number(entry, "coverage", source, 0.0),
                )
            )
        except CdsmError as exc:
            raise _fail(str(exc), source, where)
    return tuple(out)


def _parse_series(doc: dict, source: str) -> tuple[MetricSeries, ...]:
    raw = doc.get("series", [])
    if not isinstance(raw, list):
        raise _fail("must be a list", source, "series")
    out = []
    for idx, entry in enumerate(raw):
        where = f"series[{idx}]"
        if not isinstance(entry, dict):
            raise _fail("must be a mapping", source, where)
        metric = _parse_enum(Metric, entry.get("metric"), source, f"{where}.metric")
        points_raw = entry.get("points")
        if not isinstance(points_raw, list) or not points_raw:
            raise _fail("must list at least one point", source, f"{where}.points")
        points = []
        for p_idx, point in enumerate(points_raw):
            p_where = f"{where}.points[{p_idx}]"
            if not isinstance(point, dict):
                raise _fail("must be a mapping with period and value", source, p_where)
            period = point.get("period")
            if isinstance(period, bool) or not isinstance(period, int):
                raise _fail(f"period must be an integer, got {period!r}", source, p_where)
            if "value" not in point:
                raise _fail("missing 'value'", source, p_where)
            points.append(MetricPoint(period=period, value=_opt_number(point, "value", source, 0.0)))
        try:
            out.append(
                MetricSeries(
                    metric=metric,
                    points=tuple(points),
                    note=_opt_str(entry, "note", source),
                )
            )
        except CdsmError as exc:
            raise _fail(str(exc), source, where)
    return tuple(out)


REFERENCE_KEYS = ("d_star", "d_b", "d_e", "alpha", "gamma")


def _parse_reference(doc: dict, source: str) -> ReferenceValues | None:
    raw = doc.get("reference")
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise _fail("must be a mapping", source, "reference")
    unknown = sorted(set(raw) - set(REFERENCE_KEYS))
    if unknown:
        raise _fail(f"unknown reference keys: {', '.join(unknown)}", source, "reference")
    values = {}
    for key in REFERENCE_KEYS:
        if key in raw:
            values[key] = _opt_number(raw, key, source, float("nan"))
    return ReferenceValues(**values)


def parse_workspace_doc(doc: dict, matrix: Cdsm, source: str = "<workspace>") -> Workspace:
    """Assemble and fully validate a workspace from its parsed document and matrix."""
    if not isinstance(doc, dict):
        raise _fail("workspace document must be a mapping", source)
    version = doc.get("schema_version")
    if version != WORKSPACE_SCHEMA_VERSION:
        raise _fail(
            f"unsupported schema_version {version!r} (expected {WORKSPACE_SCHEMA_VERSION})",
            source,
        )
    if "components" in doc:
        matrix = _parse_components(doc["components"], matrix, source)
    workspace = Workspace(
        name=_req_str(doc, "name", source),
        ttp=_req_str(doc, "ttp", source),
        matrix=matrix,
        assessments=_parse_assessments(doc, source),
        weights=_parse_weights(doc, source),
        beta=_opt_number(doc, "beta", source, 0.5),
        series=_parse_series(doc, source),
        canonical_metric=_parse_enum(
            Metric, doc.get("canonical_metric", Metric.PREVENTION_RATE.value),
            source, "canonical_metric",
        ),
        mode=_parse_enum(DstarMode, doc.get("mode", DstarMode.DEGREE.value), source, "mode"),
        description=_opt_str(doc, "description", source),
        reference=_parse_reference(doc, source),
    )
    violations = validate_workspace(workspace)
    if violations:
        raise _fail("; ".join(str(v) for v in violations), source)
    return workspace


def load_workspace(path: str | Path) -> Workspace:
    """Load a workspace from a directory (or the workspace.yaml inside it).

    Strict: every parse error or invariant violation aborts with a
    diagnostic naming the file and the offending field/line.
    """
    path = Path(path)
    doc_path = path / WORKSPACE_FILENAME if path.is_dir() else path
    try:
        text = doc_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read workspace: {exc}", source=str(doc_path))
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise FormatError(f"invalid YAML: {exc}", source=str(doc_path))
    if not isinstance(doc, dict):
        raise FormatError("workspace document must be a mapping", source=str(doc_path))

    matrix_name = doc.get("matrix", "matrix.csv")
    if not isinstance(matrix_name, str) or not matrix_name:
        raise _fail("must be a file name", str(doc_path), "matrix")
    matrix_path = doc_path.parent / matrix_name
    try:
        matrix_text = matrix_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read matrix: {exc}", source=str(matrix_path))
    matrix = parse_matrix_csv(matrix_text, source=str(matrix_path))
    return parse_workspace_doc(doc, matrix, source=str(doc_path))


def workspace_doc(workspace: Workspace, matrix_filename: str = "matrix.csv") -> dict:
    """The YAML document form of a workspace (matrix kept in its own CSV)."""
    doc: dict = {
        "schema_version": WORKSPACE_SCHEMA_VERSION,
        "name": workspace.name,
        "ttp": workspace.ttp,
    }
    if workspace.description:
        doc["description"] = workspace.description
    doc["mode"] = workspace.mode.value
    doc["beta"] = workspace.beta
    doc["weights"] = {
        "diversity": workspace.weights.diversity,
        "independence": workspace.weights.independence,
        "coverage": workspace.weights.coverage,
    }
    doc["canonical_metric"] = workspace.canonical_metric.value
    doc["matrix"] = matrix_filename
    doc["components"] = [_component_entry(c) for c in workspace.matrix.components]
    doc["assessments"] = [
        {
            "control": a.control,
            "diversity": a.diversity,
            "independence": a.independence,
            "coverage": a.coverage,
        }
        for a in workspace.assessments
    ]
    doc["series"] = [_series_entry(s) for s in workspace.series]
    if workspace.reference is not None:
        ref = {
            key: getattr(workspace.reference, key)
            for key in REFERENCE_KEYS
            if getattr(workspace.reference, key) is not None
        }
        if ref:
            doc["reference"] = ref
    return doc


def _component_entry(component: Component) -> dict:
    entry = {"id": component.id, "kind": component.kind.value, "name": component.name}
    if component.attack_id is not None:
        entry["attack_id"] = component.attack_id
    return entry


def _series_entry(series: MetricSeries) -> dict:
    entry: dict = {"metric": series.metric.value}
    if series.note:
        entry["note"] = series.note
    entry["points"] = [{"period": p.period, "value": p.value} for p in series.points]
    return entry


def save_workspace(workspace: Workspace, directory: str | Path) -> Path:
    """Write workspace.yaml plus matrix.csv into a directory; returns the yaml path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    matrix_filename = "matrix.csv"
    (directory / matrix_filename).write_text(matrix_csv_text(workspace.matrix), encoding="utf-8")
    doc = workspace_doc(workspace, matrix_filename)
    text = yaml.safe_dump(doc, sort_keys=False, allow_unicode=True, default_flow_style=False)
    doc_path = directory / WORKSPACE_FILENAME
    doc_path.write_text(text, encoding="utf-8")
    return doc_path


def workspace_to_json_dict(workspace: Workspace) -> dict:
    """Wire form: the YAML document with the matrix inlined as cell tokens."""
    doc = workspace_doc(workspace)
    del doc["matrix"]
    doc["cells"] = [
        [INTERACTION_TO_TOKEN[cell] for cell in row] for row in workspace.matrix.cells
    ]
    return doc


def workspace_from_json_dict(obj: dict, source: str = "<request>") -> Workspace:
    """Inverse of :func:`workspace_to_json_dict`, with full validation."""
    if not isinstance(obj, dict):
        raise _fail("workspace payload must be an object", source)
    components = obj.get("components")
    if not isinstance(components, list) or not components:
        raise _fail("must list the matrix components", source, "components")
    ids = []
    for idx, entry in enumerate(components):
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), str):
            raise _fail("must be a mapping with an id", source, f"components[{idx}]")
        ids.append(entry["id"])
    cells_raw = obj.get("cells")
    if not isinstance(cells_raw, list) or len(cells_raw) != len(ids):
        raise _fail(f"must be a {len(ids)}x{len(ids)} grid of tokens", source, "cells")
    rows = []
    for i, row in enumerate(cells_raw):
        if not isinstance(row, list) or len(row) != len(ids):
            raise _fail(f"row {i} must hold {len(ids)} tokens", source, "cells")
        cells = []
        for j, token in enumerate(row):
            value = TOKEN_TO_INTERACTION.get(token if isinstance(token, str) else "")
            if value is None:
                raise _fail(
                    f"unknown cell token {token!r} (expected X, 0, +1 or -1)",
                    source, f"cells[{i}][{j}]",
                )
            cells.append(value)
        rows.append(tuple(cells))
    matrix = Cdsm(
        components=tuple(_infer_component(cid, source) for cid in ids),
        cells=tuple(rows),
    )
    return parse_workspace_doc(obj, matrix, source=source)
