"""Shared builders for tests."""

from __future__ import annotations

import random

from cdsm import (
    BenefitWeights,
    Cdsm,
    Component,
    ComponentKind,
    ControlAssessment,
    Interaction,
    Metric,
    MetricPoint,
    MetricSeries,
    Workspace,
)

TOKEN = {
    "X": Interaction.SELF,
    "0": Interaction.NEUTRAL,
    "+1": Interaction.POSITIVE,
    "-1": Interaction.NEGATIVE,
}


def component(cid: str) -> Component:
    if cid.startswith("T") and cid[1:5].isdigit():
        return Component(id=cid, kind=ComponentKind.TECHNIQUE, attack_id=cid[:5] + cid[5:9])
    return Component(id=cid, kind=ComponentKind.CONTROL)


def build_matrix(ids: list[str], rows: list[list[str]]) -> Cdsm:
    return Cdsm(
        components=tuple(component(cid) for cid in ids),
        cells=tuple(tuple(TOKEN[t] for t in row) for row in rows),
    )


def toy_matrix() -> Cdsm:
    """A affects {A,B,C}; B affects {B}; C affects {B,C}."""
    return build_matrix(
        ["A", "B", "C"],
        [
            ["X", "+1", "+1"],
            ["0", "X", "0"],
            ["0", "+1", "X"],
        ],
    )


def diagonal_matrix(n: int) -> Cdsm:
    ids = [f"C{i}" for i in range(n)]
    rows = [["X" if i == j else "0" for j in range(n)] for i in range(n)]
    return build_matrix(ids, rows)


def random_matrix(rng: random.Random, n: int) -> Cdsm:
    """Random valid matrix with a random mix of +1 / -1 / 0 densities."""
    p_link = rng.uniform(0.1, 0.8)
    p_negative = rng.uniform(0.0, 0.5)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append("X")
            elif rng.random() < p_link:
                row.append("-1" if rng.random() < p_negative else "+1")
            else:
                row.append("0")
        rows.append(row)
    return build_matrix([f"N{i}" for i in range(n)], rows)


def flat_series(metric: Metric = Metric.PREVENTION_RATE, value: float = 7.0, n: int = 6) -> MetricSeries:
    return MetricSeries(
        metric=metric,
        points=tuple(MetricPoint(period=t, value=value) for t in range(1, n + 1)),
    )


def power_series(
    prefactor: float,
    exponent: float,
    n: int = 12,
    metric: Metric = Metric.PREVENTION_RATE,
) -> MetricSeries:
    return MetricSeries(
        metric=metric,
        points=tuple(MetricPoint(period=t, value=prefactor * t**exponent) for t in range(1, n + 1)),
    )


def tiny_workspace(series=None, **overrides) -> Workspace:
    """Minimal valid workspace: one technique, one control, no cross links."""
    matrix = build_matrix(
        ["T1059.001", "CTL-A"],
        [
            ["X", "0"],
            ["0", "X"],
        ],
    )
    if series is None:
        series = (flat_series(),)
    elif isinstance(series, MetricSeries):
        series = (series,)
    else:
        series = tuple(series)
    fields = dict(
        name="tiny",
        ttp="T1059",
        matrix=matrix,
        assessments=(
            ControlAssessment(control="CTL-A", diversity=0.5, independence=0.5, coverage=0.5),
        ),
        weights=BenefitWeights(),
        beta=0.5,
        series=series,
        canonical_metric=Metric.PREVENTION_RATE,
    )
    fields.update(overrides)
    return Workspace(**fields)
