"""Degree metrics, per-component d_min, design complexity d* and rankings.

Two d_min modes are exposed because the published step-by-step definition
("the minimum of a component's out-degree and the minimum out-degree of the
components affecting it") is arithmetically incompatible with the reported
results it accompanies; ``degree`` mode (d_min = out-degree) reproduces the
reported numbers and is the replication default, ``strict`` mode follows
the literal step text. Both are first-class and oracle-tested.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .model import Cdsm, affects


class DstarMode(str, Enum):
    STRICT = "strict"
    DEGREE = "degree"


@dataclass(frozen=True)
class DegreeProfile:
    """Degree quantities for one component. All counts include self."""

    component: str
    out_degree: int
    in_degree: int
    d_min: int


@dataclass(frozen=True)
class ComplexitySummary:
    """Full degree roster plus d* and the bottleneck/opportunity rankings."""

    profiles: tuple[DegreeProfile, ...]
    d_star: int
    mode: DstarMode
    bottlenecks: tuple[tuple[str, int], ...]
    opportunities: tuple[tuple[str, int], ...]


def out_degree(matrix: Cdsm, i: int) -> int:
    """Number of components ``i`` affects, including itself."""
    return sum(1 for j in range(matrix.n) if affects(matrix, i, j))


def in_degree(matrix: Cdsm, i: int) -> int:
    """Number of components affecting ``i``, including itself."""
    return sum(1 for j in range(matrix.n) if affects(matrix, j, i))


def d_min(matrix: Cdsm, i: int, mode: DstarMode = DstarMode.DEGREE) -> int:
    """Per-component d_min under the chosen mode.

    degree mode: the component's own out-degree.
    strict mode: minimum out-degree over the components affecting ``i``.
    The affector set includes ``i`` itself, so the strict value is also
    min(out_degree(i), min over other affectors) and never exceeds the
    degree-mode value.
    """
    matrix._check_index(i)
    if mode is DstarMode.DEGREE:
        return out_degree(matrix, i)
    return min(out_degree(matrix, j) for j in range(matrix.n) if affects(matrix, j, i))


def d_star(matrix: Cdsm, mode: DstarMode = DstarMode.DEGREE) -> int:
    """Design complexity: the maximum d_min across all components."""
    return max(d_min(matrix, i, mode) for i in range(matrix.n))


def rank_components(matrix: Cdsm, mode: DstarMode = DstarMode.DEGREE) -> ComplexitySummary:
    """Compute all degree profiles, d*, and deterministic rankings.

    Bottlenecks are sorted by d_min descending, opportunities ascending;
    ties break on component id ascending so output order is reproducible.
    """
    profiles = tuple(
        DegreeProfile(
            component=comp.id,
            out_degree=out_degree(matrix, i),
            in_degree=in_degree(matrix, i),
            d_min=d_min(matrix, i, mode),
        )
        for i, comp in enumerate(matrix.components)
    )
    pairs = [(p.component, p.d_min) for p in profiles]
    bottlenecks = tuple(sorted(pairs, key=lambda cd: (-cd[1], cd[0])))
    opportunities = tuple(sorted(pairs, key=lambda cd: (cd[1], cd[0])))
    return ComplexitySummary(
        profiles=profiles,
        d_star=max(p.d_min for p in profiles),
        mode=mode,
        bottlenecks=bottlenecks,
        opportunities=opportunities,
    )
