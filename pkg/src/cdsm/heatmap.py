"""Cross-TTP normalization, colour banding and heatmap emission.

Effective-complexity scores from many TTP workspaces are min-max scaled to
[0, 100] and banded: green up to 50, orange above 50 up to 75, red above
75. Banding applies to the normalized scale, so it reflects relative
position only. Emission produces a machine-readable score table plus a
dependency-free SVG tile grid; both are byte-deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import EmptyInputError, LayoutError
from .jsonio import canonical_json_bytes

HEATMAP_SCHEMA_VERSION = 1


class Band(str, Enum):
    GREEN = "green"
    ORANGE = "orange"
    RED = "red"


BAND_FILL = {Band.GREEN: "#4caf50", Band.ORANGE: "#ff9800", Band.RED: "#f44336"}


@dataclass(frozen=True)
class TtpComplexityScore:
    ttp: str
    d_e: float
    normalized: float
    band: Band


def band_for(normalized: float) -> Band:
    """Band for a normalized score: green (-inf,50], orange (50,75], red (75,inf).

    The closed/open boundaries make every value classifiable; 50 is still
    green and 75 still orange.
    """
    if normalized <= 50.0:
        return Band.GREEN
    if normalized <= 75.0:
        return Band.ORANGE
    return Band.RED


def normalize_scores(scores: list[tuple[str, float]]) -> list[TtpComplexityScore]:
    """Min-max scale raw d_e values to [0,100] and assign bands.

    When all inputs are equal there is no relative complexity signal, so
    every score maps to 0 (green) rather than alarming arbitrarily.
    """
    if not scores:
        raise EmptyInputError("normalize_scores needs at least one (ttp, d_e) pair")
    values = [de for _, de in scores]
    lo, hi = min(values), max(values)
    span = hi - lo
    out = []
    for ttp, de in scores:
        # (de - lo) / span first, so the extremes land on exactly 0 and 100
        normalized = 0.0 if span == 0 else 100.0 * ((de - lo) / span)
        out.append(TtpComplexityScore(ttp=ttp, d_e=de, normalized=normalized, band=band_for(normalized)))
    return out


@dataclass(frozen=True)
class HeatmapDocument:
    """Structured score table plus the rendered SVG grid."""

    table: dict
    svg: str

    def table_bytes(self) -> bytes:
        return canonical_json_bytes(self.table)


def heatmap_table(scores: list[TtpComplexityScore]) -> dict:
    return {
        "schema_version": HEATMAP_SCHEMA_VERSION,
        "scores": [
            {"ttp": s.ttp, "d_e": s.d_e, "normalized": s.normalized, "band": s.band.value}
            for s in scores
        ],
    }


TILE_W = 118
TILE_H = 64
GAP = 6
MARGIN = 10


def heatmap_svg(scores: list[TtpComplexityScore], rows: int, cols: int) -> str:
    """Render the tile grid. Tile order follows input order, row-major."""
    if rows < 1 or cols < 1:
        raise LayoutError(f"grid must be at least 1x1, got {rows}x{cols}")
    if rows * cols < len(scores):
        raise LayoutError(f"grid {rows}x{cols} holds {rows * cols} tiles, need {len(scores)}")
    width = 2 * MARGIN + cols * TILE_W + (cols - 1) * GAP
    height = 2 * MARGIN + rows * TILE_H + (rows - 1) * GAP
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
    ]
    for idx, score in enumerate(scores):
        r, c = divmod(idx, cols)
        x = MARGIN + c * (TILE_W + GAP)
        y = MARGIN + r * (TILE_H + GAP)
        fill = BAND_FILL[score.band]
        label = _escape(score.ttp)
        parts.append(f'<g transform="translate({x},{y})">')
        parts.append(f'<rect width="{TILE_W}" height="{TILE_H}" rx="4" fill="{fill}"/>')
        parts.append(
            f'<text x="{TILE_W / 2:.0f}" y="26" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14" fill="#ffffff">{label}</text>'
        )
        parts.append(
            f'<text x="{TILE_W / 2:.0f}" y="46" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" fill="#ffffff">{score.normalized:.1f}</text>'
        )
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_heatmap(scores: list[TtpComplexityScore], rows: int, cols: int) -> HeatmapDocument:
    """Build the full heatmap document for a grid of the given dimensions."""
    if not scores:
        raise EmptyInputError("emit_heatmap needs at least one score")
    return HeatmapDocument(table=heatmap_table(scores), svg=heatmap_svg(scores, rows, cols))


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
    )


def parse_grid(text: str) -> tuple[int, int]:
    """Parse an ``RxC`` grid spec like ``6x5`` into (rows, cols)."""
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise LayoutError(f"grid must look like RxC (e.g. 6x5), got {text!r}")
    try:
        rows, cols = int(parts[0]), int(parts[1])
    except ValueError:
        raise LayoutError(f"grid must use integers, got {text!r}")
    if rows < 1 or cols < 1:
        raise LayoutError(f"grid must be at least 1x1, got {text!r}")
    return rows, cols


def auto_grid(count: int) -> tuple[int, int]:
    """Near-square grid that fits ``count`` tiles."""
    if count < 1:
        raise LayoutError("cannot lay out zero tiles")
    cols = 1
    while cols * cols < count:
        cols += 1
    rows = (count + cols - 1) // cols
    return rows, cols
