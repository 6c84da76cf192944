"""Beneficial complexity (d_b) and effective design complexity (d_e).

Beneficial complexity credits defence-in-depth: each control is scored on
diversity, independence and coverage in [0,1]; the weighted mean of those
factors is the control's benefit score, and the aggregate d_b is the plain
mean over controls. Effective complexity subtracts the credited part:
d_e = d* - beta * d_b with beta in [0,1].
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, EmptyInputError, InvalidWeightsError


def _check_unit(value: float, what: str) -> None:
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{what} must be within [0,1], got {value}")


@dataclass(frozen=True)
class ControlAssessment:
    """Expert scores for one control. ``control`` must name a control component;
    the cross-reference against the matrix is enforced at workspace level."""

    control: str
    diversity: float
    independence: float
    coverage: float

    def __post_init__(self):
        _check_unit(self.diversity, f"{self.control}: diversity")
        _check_unit(self.independence, f"{self.control}: independence")
        _check_unit(self.coverage, f"{self.control}: coverage")


@dataclass(frozen=True)
class BenefitWeights:
    """Non-negative weights for the three benefit factors; must not all be zero."""

    diversity: float = 1.0
    independence: float = 1.0
    coverage: float = 1.0

    def __post_init__(self):
        for name, w in (
            ("diversity", self.diversity),
            ("independence", self.independence),
            ("coverage", self.coverage),
        ):
            if w < 0:
                raise InvalidWeightsError(f"{name} weight must be >= 0, got {w}")
        if self.total() == 0:
            raise InvalidWeightsError("benefit weights must not all be zero")

    def total(self) -> float:
        return self.diversity + self.independence + self.coverage


def control_score(assessment: ControlAssessment, weights: BenefitWeights) -> float:
    """Weighted mean of the three factor scores; always within [0,1]."""
    total = weights.total()
    if total <= 0:
        raise InvalidWeightsError("benefit weights must not all be zero")
    return (
        weights.diversity * assessment.diversity
        + weights.independence * assessment.independence
        + weights.coverage * assessment.coverage
    ) / total


def aggregate_db(
    assessments: list[ControlAssessment] | tuple[ControlAssessment, ...],
    weights: BenefitWeights,
) -> float:
    """Aggregate beneficial complexity: mean of per-control scores.

    With equal weights this collapses to the grand mean of all individual
    factor scores (sum of 3k values over 3k), so it matches the published
    computation shape while generalizing to unequal weights.
    """
    if not assessments:
        raise EmptyInputError("aggregate_db needs at least one control assessment")
    scores = [control_score(a, weights) for a in assessments]
    return sum(scores) / len(scores)


def effective_complexity(d_star: float, beta: float, d_b: float) -> float:
    """d_e = d* - beta * d_b. beta and d_b must lie in [0,1]."""
    _check_unit(beta, "beta")
    _check_unit(d_b, "d_b")
    return d_star - beta * d_b
