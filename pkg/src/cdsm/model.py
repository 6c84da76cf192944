"""Domain model: defence components and their interaction matrix.

The central object is the :class:`Cdsm`, a square matrix over components
(attack techniques and the security controls layered against them) whose
cells record how row component affects column component: ``self`` on the
diagonal, ``positive`` / ``negative`` / ``neutral`` off it.

All types are frozen values; operations are pure functions, so instances
can be shared freely between threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

ATTACK_ID_PATTERN = re.compile(r"^T\d{4}(\.\d{3})?$")


class ComponentKind(str, Enum):
    TECHNIQUE = "technique"
    CONTROL = "control"


class Interaction(str, Enum):
    """One matrix cell: how the row component relates to the column component."""

    SELF = "self"
    NEUTRAL = "neutral"
    POSITIVE = "positive"
    NEGATIVE = "negative"


def validate_component_id(value: str) -> str:
    """Check a component id token: non-empty, no whitespace. Returns it unchanged."""
    if not isinstance(value, str) or not value:
        raise ValueError("component id must be a non-empty string")
    if any(ch.isspace() for ch in value):
        raise ValueError(f"component id {value!r} must not contain whitespace")
    return value


@dataclass(frozen=True)
class Component:
    """A node of the matrix: an ATT&CK (sub-)technique or a security control.

    Techniques must carry an ATT&CK identifier (``T`` + 4 digits, optional
    ``.`` + 3 digits sub-technique suffix); controls must not.
    """

    id: str
    kind: ComponentKind
    name: str = ""
    attack_id: str | None = None

    def __post_init__(self):
        validate_component_id(self.id)
        if self.attack_id is not None and not ATTACK_ID_PATTERN.match(self.attack_id):
            raise ValueError(
                f"component {self.id!r}: attack_id {self.attack_id!r} does not match "
                "the ATT&CK identifier pattern T####(.###)"
            )
        if self.kind is ComponentKind.TECHNIQUE and self.attack_id is None:
            raise ValueError(f"component {self.id!r}: techniques require an attack_id")
        if self.kind is ComponentKind.CONTROL and self.attack_id is not None:
            raise ValueError(f"component {self.id!r}: controls must not carry an attack_id")
        if not self.name:
            object.__setattr__(self, "name", self.id)


@dataclass(frozen=True)
class Violation:
    """One structural problem found by :func:`validate_cdsm`."""

    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.where}: {self.message}"


@dataclass(frozen=True)
class Cdsm:
    """Square interaction matrix over an ordered component roster.

    Construction is deliberately permissive so that malformed matrices can
    be represented and reported on; :func:`validate_cdsm` is the
    authoritative invariant check. Parsers and the analysis pipeline only
    ever hand out validated instances.

    Cell convention: ``cells[i][j]`` means "component i affects component j"
    (row affects column). The matrix need not be symmetric.
    """

    components: tuple[Component, ...]
    cells: tuple[tuple[Interaction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.components)

    def index_of(self, component_id: str) -> int:
        for i, c in enumerate(self.components):
            if c.id == component_id:
                return i
        raise KeyError(f"unknown component id {component_id!r}")

    def component_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.components)

    def cell(self, i: int, j: int) -> Interaction:
        self._check_index(i)
        self._check_index(j)
        return self.cells[i][j]

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise IndexError(f"component index {i} out of range for {self.n} components")


def validate_cdsm(matrix: Cdsm) -> list[Violation]:
    """Check every structural invariant of a matrix.

    Returns an empty list when the matrix is well formed, otherwise one
    :class:`Violation` per problem, each naming the offending cell or
    component. Violations are data, not exceptions: callers decide whether
    to abort or report.
    """
    violations: list[Violation] = []
    n = len(matrix.components)
    if n < 1:
        violations.append(Violation("matrix", "must contain at least one component"))
        return violations

    seen: dict[str, int] = {}
    for i, comp in enumerate(matrix.components):
        if comp.id in seen:
            violations.append(
                Violation(
                    f"component {i}",
                    f"duplicate component id {comp.id!r} (also at index {seen[comp.id]})",
                )
            )
        else:
            seen[comp.id] = i

    if len(matrix.cells) != n:
        violations.append(
            Violation("matrix", f"expected {n} rows to match {n} components, found {len(matrix.cells)}")
        )
        return violations
    for i, row in enumerate(matrix.cells):
        if len(row) != n:
            violations.append(Violation(f"row {i}", f"expected {n} cells, found {len(row)}"))
    if any(len(row) != n for row in matrix.cells):
        return violations

    for i in range(n):
        for j in range(n):
            value = matrix.cells[i][j]
            if i == j and value is not Interaction.SELF:
                violations.append(Violation(f"cell ({i},{i})", "diagonal must be self"))
            elif i != j and value is Interaction.SELF:
                violations.append(
                    Violation(f"cell ({i},{j})", "self is only valid on the diagonal")
                )
    return violations


def affects(matrix: Cdsm, i: int, j: int) -> bool:
    """Whether component ``i`` affects component ``j``.

    A component always affects itself; off the diagonal, positive and
    negative interactions both count (interference is still coupling) while
    neutral never does.
    """
    matrix._check_index(i)
    matrix._check_index(j)
    if i == j:
        return True
    return matrix.cells[i][j] in (Interaction.POSITIVE, Interaction.NEGATIVE)
