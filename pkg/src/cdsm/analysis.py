"""End-to-end pipeline over a workspace, plus what-if evaluation.

``analyze`` runs structure metrics, benefit aggregation, effective
complexity, the improvement-rate regressions and the gamma estimate, and
assembles a deterministic report. ``what_if`` applies an ordered list of
edits to a copy of the workspace (never the original), re-analyzes after
each step and classifies every edit as beneficial or harmful from the
direction it moved effective complexity and the model-predicted rate.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .beneficial import (
    BenefitWeights,
    ControlAssessment,
    aggregate_db,
    control_score,
    effective_complexity,
)
from .complexity import ComplexitySummary, DstarMode, rank_components
from .errors import CdsmError, ConflictError, DomainError, EditError, PipelineError
from .model import Cdsm, Component, ComponentKind, Interaction
from .performance import (
    GammaEstimate,
    Metric,
    MetricSeries,
    RegressionFit,
    estimate_gamma,
    fit_alpha,
    predict_alpha,
)
from .workspace import ReferenceValues, Workspace, validate_workspace

DB_DIVERGENCE_TOLERANCE = 1e-3


@dataclass(frozen=True)
class AnalysisReport:
    """All derived quantities for one workspace; invariants:
    d_e = d_star - beta * d_b and gamma * alpha * d_e = 1 (when gamma exists)."""

    workspace: str
    ttp: str
    mode: DstarMode
    complexity: ComplexitySummary
    per_control_scores: tuple[tuple[str, float], ...]
    d_b: float
    beta: float
    d_e: float
    fits: tuple[tuple[Metric, RegressionFit], ...]
    canonical_metric: Metric
    alpha: float
    gamma: GammaEstimate | None
    reference: ReferenceValues | None
    notes: tuple[str, ...]


def _stage(name: str, func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except CdsmError as exc:
        raise PipelineError(name, exc) from exc


def _reference_notes(workspace: Workspace, d_b: float) -> list[str]:
    ref = workspace.reference
    if ref is None or ref.d_b is None:
        return []
    if abs(d_b - ref.d_b) <= DB_DIVERGENCE_TOLERANCE:
        return []
    w = workspace.weights
    note = (
        f"replication: computed d_b {d_b:.6f} differs from the declared reference "
        f"d_b {ref.d_b} by {abs(d_b - ref.d_b):.6f}"
    )
    if w.diversity == w.independence == w.coverage and workspace.assessments:
        k = 3 * len(workspace.assessments)
        total = sum(
            a.diversity + a.independence + a.coverage for a in workspace.assessments
        )
        note += (
            f"; the shipped factor scores sum to {total:g} over {k} values "
            f"({total:g}/{k} = {d_b:.6f}) while the reference implies a sum of "
            f"{ref.d_b * k:.4g}, so the reference is inconsistent with its own addends"
        )
    note += "; reports use the computed value"
    return [note]


def analyze(workspace: Workspace) -> AnalysisReport:
    """Run the full pipeline and return a deterministic report.

    Domain failures in sub-modules propagate as :class:`PipelineError`
    tagged with the stage that raised them.
    """
    violations = validate_workspace(workspace)
    if violations:
        raise PipelineError(
            "validation", CdsmError("; ".join(str(v) for v in violations))
        )

    summary = _stage("complexity", rank_components, workspace.matrix, workspace.mode)

    controls = [c.id for c in workspace.matrix.components if c.kind is ComponentKind.CONTROL]
    by_control = {a.control: a for a in workspace.assessments}
    per_control = tuple(
        (cid, _stage("beneficial", control_score, by_control[cid], workspace.weights))
        for cid in controls
    )
    d_b = _stage("beneficial", aggregate_db, workspace.assessments, workspace.weights)
    d_e = _stage(
        "effective-complexity", effective_complexity, summary.d_star, workspace.beta, d_b
    )

    fits = tuple(
        (series.metric, _stage("performance", fit_alpha, series)) for series in workspace.series
    )
    canonical = dict(fits).get(workspace.canonical_metric)
    if canonical is None:
        raise PipelineError(
            "performance",
            CdsmError(
                f"no series for canonical metric {workspace.canonical_metric.value!r}"
            ),
        )
    alpha = canonical.slope

    notes = _reference_notes(workspace, d_b)
    gamma: GammaEstimate | None = None
    if alpha < 0:
        notes.append("gamma unavailable: negative alpha")
    elif alpha == 0:
        notes.append("gamma unavailable: zero alpha")
    elif d_e <= 0:
        notes.append("gamma unavailable: non-positive effective complexity")
    else:
        gamma = _stage("gamma", estimate_gamma, alpha, d_e)
    for series in workspace.series:
        if series.note:
            notes.append(f"series {series.metric.value}: {series.note}")

    return AnalysisReport(
        workspace=workspace.name,
        ttp=workspace.ttp,
        mode=workspace.mode,
        complexity=summary,
        per_control_scores=per_control,
        d_b=d_b,
        beta=workspace.beta,
        d_e=d_e,
        fits=fits,
        canonical_metric=workspace.canonical_metric,
        alpha=alpha,
        gamma=gamma,
        reference=workspace.reference,
        notes=tuple(notes),
    )


def multi_ttp_scores(
    workspaces: list[Workspace] | tuple[Workspace, ...],
    mode: DstarMode | None = None,
) -> list[tuple[str, float]]:
    """One (ttp, d_e) pair per workspace, in input order, for the heatmap.

    ``mode`` overrides every workspace's own d* mode when given. Duplicate
    TTP ids are a conflict: one workspace per defended technique.
    """
    seen: set[str] = set()
    scores: list[tuple[str, float]] = []
    for workspace in workspaces:
        if workspace.ttp in seen:
            raise ConflictError(f"duplicate TTP id {workspace.ttp!r} across workspaces")
        seen.add(workspace.ttp)
        if mode is not None:
            workspace = replace(workspace, mode=mode)
        scores.append((workspace.ttp, analyze(workspace).d_e))
    return scores


# ---------------------------------------------------------------------------
# What-if edits
# ---------------------------------------------------------------------------


class EditKind(str, Enum):
    ADD_CONTROL = "add_control"
    REMOVE_COMPONENT = "remove_component"
    SET_INTERACTION = "set_interaction"
    SET_ASSESSMENT = "set_assessment"
    SET_WEIGHTS = "set_weights"
    SET_BETA = "set_beta"


_TOKEN_TO_VALUE = {
    "0": Interaction.NEUTRAL,
    "+1": Interaction.POSITIVE,
    "1": Interaction.POSITIVE,
    "-1": Interaction.NEGATIVE,
    "neutral": Interaction.NEUTRAL,
    "positive": Interaction.POSITIVE,
    "negative": Interaction.NEGATIVE,
}


@dataclass(frozen=True)
class EditLink:
    """Cross interaction created together with an added control."""

    other: str
    value: Interaction
    direction: str = "both"  # out | in | both


@dataclass(frozen=True)
class WhatIfEdit:
    """One edit; ``kind`` selects which payload fields apply."""

    kind: EditKind
    component: str | None = None  # add_control / remove_component / set_assessment
    name: str = ""
    diversity: float | None = None
    independence: float | None = None
    coverage: float | None = None
    links: tuple[EditLink, ...] = ()
    source: str | None = None  # set_interaction
    target: str | None = None
    value: Interaction | None = None
    weights: BenefitWeights | None = None
    beta: float | None = None

    @staticmethod
    def from_dict(obj: dict) -> "WhatIfEdit":
        """Build an edit from its JSON form; raises ValueError on bad payloads."""
        if not isinstance(obj, dict):
            raise ValueError("edit must be an object")
        try:
            kind = EditKind(obj.get("kind"))
        except ValueError:
            allowed = ", ".join(k.value for k in EditKind)
            raise ValueError(f"unknown edit kind {obj.get('kind')!r} (expected one of: {allowed})")
        value = None
        if "value" in obj:
            token = obj["value"]
            value = _TOKEN_TO_VALUE.get(str(token))
            if value is None:
                raise ValueError(f"unknown interaction value {token!r} (expected 0, +1 or -1)")
        weights = None
        if "weights" in obj:
            w = obj["weights"]
            if not isinstance(w, dict):
                raise ValueError("weights must be an object")
            weights = BenefitWeights(
                diversity=float(w.get("diversity", 1.0)),
                independence=float(w.get("independence", 1.0)),
                coverage=float(w.get("coverage", 1.0)),
            )
        links = []
        for raw in obj.get("links", []):
            if not isinstance(raw, dict) or "other" not in raw:
                raise ValueError("link must be an object naming 'other'")
            link_value = _TOKEN_TO_VALUE.get(str(raw.get("value")))
            if link_value is None:
                raise ValueError(f"unknown link value {raw.get('value')!r}")
            direction = raw.get("direction", "both")
            if direction not in ("out", "in", "both"):
                raise ValueError(f"unknown link direction {direction!r}")
            links.append(EditLink(other=str(raw["other"]), value=link_value, direction=direction))
        return WhatIfEdit(
            kind=kind,
            component=obj.get("component"),
            name=obj.get("name", ""),
            diversity=obj.get("diversity"),
            independence=obj.get("independence"),
            coverage=obj.get("coverage"),
            links=tuple(links),
            source=obj.get("source"),
            target=obj.get("target"),
            value=value,
            weights=weights,
            beta=obj.get("beta"),
        )


@dataclass(frozen=True)
class EditEffect:
    """Incremental effect of one edit, relative to the state just before it."""

    index: int
    kind: EditKind
    flag: str  # beneficial | harmful | neutral
    d_star_delta: int
    d_b_delta: float
    d_e_delta: float
    predicted_alpha_delta: float | None


@dataclass(frozen=True)
class DeltaSummary:
    """Signed end-to-end changes plus the per-edit breakdown."""

    d_star_delta: int
    d_b_delta: float
    d_e_delta: float
    predicted_alpha_before: float | None
    predicted_alpha_after: float | None
    predicted_alpha_delta: float | None
    effects: tuple[EditEffect, ...]


@dataclass(frozen=True)
class WhatIfResult:
    before: AnalysisReport
    after: AnalysisReport
    delta: DeltaSummary


def _require(condition: bool, index: int, reason: str) -> None:
    if not condition:
        raise EditError(index, reason)


def _apply_edit(workspace: Workspace, edit: WhatIfEdit, index: int) -> Workspace:
    matrix = workspace.matrix
    ids = matrix.component_ids()

    if edit.kind is EditKind.ADD_CONTROL:
        _require(bool(edit.component), index, "add_control needs a component id")
        _require(edit.component not in ids, index, f"component {edit.component!r} already exists")
        for score_name in ("diversity", "independence", "coverage"):
            _require(
                getattr(edit, score_name) is not None,
                index,
                f"add_control needs an assessment ({score_name} missing)",
            )
        try:
            component = Component(
                id=edit.component, kind=ComponentKind.CONTROL, name=edit.name
            )
            assessment = ControlAssessment(
                control=edit.component,
                diversity=edit.diversity,
                independence=edit.independence,
                coverage=edit.coverage,
            )
        except (ValueError, CdsmError) as exc:
            raise EditError(index, str(exc))
        n = matrix.n
        outgoing = {cid: Interaction.NEUTRAL for cid in ids}
        incoming = {cid: Interaction.NEUTRAL for cid in ids}
        for link in edit.links:
            _require(link.other in ids, index, f"link references unknown component {link.other!r}")
            _require(
                link.value is not Interaction.SELF, index, "link value must not be self"
            )
            if link.direction in ("out", "both"):
                outgoing[link.other] = link.value
            if link.direction in ("in", "both"):
                incoming[link.other] = link.value
        new_rows = [
            (*row, incoming[ids[i]]) for i, row in enumerate(matrix.cells)
        ]
        new_rows.append(tuple(outgoing[cid] for cid in ids) + (Interaction.SELF,))
        new_matrix = Cdsm(components=(*matrix.components, component), cells=tuple(new_rows))
        return replace(
            workspace, matrix=new_matrix, assessments=(*workspace.assessments, assessment)
        )

    if edit.kind is EditKind.REMOVE_COMPONENT:
        _require(bool(edit.component), index, "remove_component needs a component id")
        _require(edit.component in ids, index, f"unknown component {edit.component!r}")
        _require(matrix.n > 1, index, "cannot remove the last component")
        k = matrix.index_of(edit.component)
        new_components = tuple(c for i, c in enumerate(matrix.components) if i != k)
        new_cells = tuple(
            tuple(cell for j, cell in enumerate(row) if j != k)
            for i, row in enumerate(matrix.cells)
            if i != k
        )
        new_assessments = tuple(
            a for a in workspace.assessments if a.control != edit.component
        )
        return replace(
            workspace,
            matrix=Cdsm(components=new_components, cells=new_cells),
            assessments=new_assessments,
        )

    if edit.kind is EditKind.SET_INTERACTION:
        _require(bool(edit.source), index, "set_interaction needs a source component")
        _require(bool(edit.target), index, "set_interaction needs a target component")
        _require(edit.source in ids, index, f"unknown component {edit.source!r}")
        _require(edit.target in ids, index, f"unknown component {edit.target!r}")
        _require(
            edit.source != edit.target, index, "set_interaction must not target the diagonal"
        )
        _require(edit.value is not None, index, "set_interaction needs a value")
        _require(edit.value is not Interaction.SELF, index, "value must not be self")
        i, j = matrix.index_of(edit.source), matrix.index_of(edit.target)
        rows = [list(row) for row in matrix.cells]
        rows[i][j] = edit.value
        return replace(
            workspace,
            matrix=Cdsm(components=matrix.components, cells=tuple(tuple(r) for r in rows)),
        )

    if edit.kind is EditKind.SET_ASSESSMENT:
        _require(bool(edit.component), index, "set_assessment needs a control id")
        _require(edit.component in ids, index, f"unknown component {edit.component!r}")
        current = {a.control: a for a in workspace.assessments}
        _require(
            edit.component in current, index, f"{edit.component!r} has no assessment to replace"
        )
        base = current[edit.component]
        try:
            updated = ControlAssessment(
                control=edit.component,
                diversity=base.diversity if edit.diversity is None else edit.diversity,
                independence=(
                    base.independence if edit.independence is None else edit.independence
                ),
                coverage=base.coverage if edit.coverage is None else edit.coverage,
            )
        except CdsmError as exc:
            raise EditError(index, str(exc))
        return replace(
            workspace,
            assessments=tuple(
                updated if a.control == edit.component else a for a in workspace.assessments
            ),
        )

    if edit.kind is EditKind.SET_WEIGHTS:
        _require(edit.weights is not None, index, "set_weights needs weights")
        return replace(workspace, weights=edit.weights)

    if edit.kind is EditKind.SET_BETA:
        _require(edit.beta is not None, index, "set_beta needs a beta value")
        _require(0.0 <= edit.beta <= 1.0, index, f"beta must be within [0,1], got {edit.beta}")
        return replace(workspace, beta=edit.beta)

    raise EditError(index, f"unsupported edit kind {edit.kind!r}")


def _predicted_alpha(gamma0: float | None, report: AnalysisReport) -> float | None:
    if gamma0 is None:
        return None
    try:
        return predict_alpha(gamma0, report.complexity.d_star, report.beta, report.d_b)
    except DomainError:
        return None


def what_if(
    workspace: Workspace, edits: list[WhatIfEdit] | tuple[WhatIfEdit, ...]
) -> WhatIfResult:
    """Apply edits in order to a copy of the workspace and report the deltas.

    The original workspace is never mutated. Gamma is held at the baseline
    estimate while predicting the rate after edits: edits change structure,
    not the intrinsic difficulty of improving individual components. An
    invalid edit aborts the whole evaluation with its index and reason.
    """
    before = analyze(workspace)
    gamma0 = before.gamma.gamma if before.gamma is not None else None

    current_ws = workspace
    current_report = before
    current_pred = _predicted_alpha(gamma0, before)
    effects: list[EditEffect] = []
    for index, edit in enumerate(edits):
        current_ws = _apply_edit(current_ws, edit, index)
        violations = validate_workspace(current_ws)
        if violations:
            raise EditError(index, "; ".join(str(v) for v in violations))
        try:
            next_report = analyze(current_ws)
        except CdsmError as exc:
            raise EditError(index, f"analysis impossible after edit: {exc}")
        next_pred = _predicted_alpha(gamma0, next_report)
        d_e_delta = next_report.d_e - current_report.d_e
        pred_delta = (
            None if (next_pred is None or current_pred is None) else next_pred - current_pred
        )
        if d_e_delta < 0 or (pred_delta is not None and pred_delta > 0):
            flag = "beneficial"
        elif d_e_delta == 0 and (pred_delta is None or pred_delta == 0):
            flag = "neutral"
        else:
            flag = "harmful"
        effects.append(
            EditEffect(
                index=index,
                kind=edit.kind,
                flag=flag,
                d_star_delta=next_report.complexity.d_star - current_report.complexity.d_star,
                d_b_delta=next_report.d_b - current_report.d_b,
                d_e_delta=d_e_delta,
                predicted_alpha_delta=pred_delta,
            )
        )
        current_report = next_report
        current_pred = next_pred

    after = current_report
    pred_before = _predicted_alpha(gamma0, before)
    pred_after = _predicted_alpha(gamma0, after)
    delta = DeltaSummary(
        d_star_delta=after.complexity.d_star - before.complexity.d_star,
        d_b_delta=after.d_b - before.d_b,
        d_e_delta=after.d_e - before.d_e,
        predicted_alpha_before=pred_before,
        predicted_alpha_after=pred_after,
        predicted_alpha_delta=(
            None if (pred_before is None or pred_after is None) else pred_after - pred_before
        ),
        effects=tuple(effects),
    )
    return WhatIfResult(before=before, after=after, delta=delta)
