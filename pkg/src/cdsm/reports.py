"""Report serialization: canonical JSON and the human-readable text form.

The structured form keeps every numeric field at full precision and is
byte-deterministic (canonical JSON); the text form rounds to 4 decimals
for reading. Field names of the structured report are normative for the
service API and are documented in docs/format.md.
"""

from __future__ import annotations

from .analysis import AnalysisReport, WhatIfResult
from .jsonio import canonical_json_bytes
from .workspace import REFERENCE_KEYS

REPORT_SCHEMA_VERSION = 1


def report_to_dict(report: AnalysisReport) -> dict:
    """Full-precision structured form of a report."""
    gamma = None
    if report.gamma is not None:
        gamma = {"alpha": report.gamma.alpha, "d_e": report.gamma.d_e, "gamma": report.gamma.gamma}
    reference = None
    if report.reference is not None:
        reference = {
            key: getattr(report.reference, key)
            for key in REFERENCE_KEYS
            if getattr(report.reference, key) is not None
        }
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "workspace": report.workspace,
        "ttp": report.ttp,
        "mode": report.mode.value,
        "complexity": {
            "d_star": report.complexity.d_star,
            "profiles": [
                {
                    "component": p.component,
                    "out_degree": p.out_degree,
                    "in_degree": p.in_degree,
                    "d_min": p.d_min,
                }
                for p in report.complexity.profiles
            ],
            "bottlenecks": [
                {"component": cid, "d_min": value} for cid, value in report.complexity.bottlenecks
            ],
            "opportunities": [
                {"component": cid, "d_min": value}
                for cid, value in report.complexity.opportunities
            ],
        },
        "beneficial": {
            "per_control_scores": [
                {"control": cid, "score": score} for cid, score in report.per_control_scores
            ],
            "d_b": report.d_b,
            "beta": report.beta,
        },
        "d_e": report.d_e,
        "performance": {
            "canonical_metric": report.canonical_metric.value,
            "alpha": report.alpha,
            "fits": {
                metric.value: {
                    "slope": fit.slope,
                    "intercept": fit.intercept,
                    "r_squared": fit.r_squared,
                    "n_points": fit.n_points,
                }
                for metric, fit in report.fits
            },
            "gamma": gamma,
        },
        "reference": reference,
        "notes": list(report.notes),
    }


def report_json_bytes(report: AnalysisReport) -> bytes:
    return canonical_json_bytes(report_to_dict(report))


def _fmt(value: float | None) -> str:
    return "unavailable" if value is None else f"{value:.4f}"


def report_text(report: AnalysisReport) -> str:
    """Human-readable report, numbers rounded to 4 decimals."""
    top = report.complexity.bottlenecks[0][0]
    lines = [
        f"Defence complexity report: {report.workspace} ({report.ttp})",
        f"mode: {report.mode.value}",
        "",
        f"Design complexity d*: {report.complexity.d_star}  (arg-max: {top})",
        f"Beneficial complexity d_b: {_fmt(report.d_b)}  (beta {report.beta:g})",
        f"Effective complexity d_e: {_fmt(report.d_e)}",
        f"Improvement rate alpha ({report.canonical_metric.value}): {_fmt(report.alpha)}",
        f"Intrinsic difficulty gamma: {_fmt(report.gamma.gamma if report.gamma else None)}",
        "",
        "Degrees (per component):",
        "  component                 out   in  d_min",
    ]
    for p in report.complexity.profiles:
        lines.append(f"  {p.component:<24} {p.out_degree:>4} {p.in_degree:>4} {p.d_min:>6}")
    lines.append("")
    lines.append("Bottlenecks (highest d_min first):")
    for rank, (cid, value) in enumerate(report.complexity.bottlenecks[:5], start=1):
        lines.append(f"  {rank}. {cid} ({value})")
    lines.append("Opportunities (lowest d_min first):")
    for rank, (cid, value) in enumerate(report.complexity.opportunities[:5], start=1):
        lines.append(f"  {rank}. {cid} ({value})")
    lines.append("")
    lines.append("Per-control benefit scores:")
    for cid, score in report.per_control_scores:
        lines.append(f"  {cid:<24} {score:.4f}")
    lines.append("")
    lines.append("Regression fits (log-log OLS):")
    lines.append("  metric               slope     intercept  r^2     n")
    for metric, fit in report.fits:
        lines.append(
            f"  {metric.value:<19} {fit.slope:>8.4f}  {fit.intercept:>9.4f}  "
            f"{fit.r_squared:.4f}  {fit.n_points}"
        )
    if report.reference is not None:
        lines.append("")
        lines.append("Declared reference values:")
        for key in REFERENCE_KEYS:
            value = getattr(report.reference, key)
            if value is not None:
                lines.append(f"  {key}: {value:g}")
    if report.notes:
        lines.append("")
        lines.append("Notes:")
        for note in report.notes:
            lines.append(f"  - {note}")
    return "\n".join(lines) + "\n"


def whatif_to_dict(result: WhatIfResult) -> dict:
    delta = result.delta
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "before": report_to_dict(result.before),
        "after": report_to_dict(result.after),
        "delta": {
            "d_star_delta": delta.d_star_delta,
            "d_b_delta": delta.d_b_delta,
            "d_e_delta": delta.d_e_delta,
            "predicted_alpha_before": delta.predicted_alpha_before,
            "predicted_alpha_after": delta.predicted_alpha_after,
            "predicted_alpha_delta": delta.predicted_alpha_delta,
            "effects": [
                {
                    "index": e.index,
                    "kind": e.kind.value,
                    "flag": e.flag,
                    "d_star_delta": e.d_star_delta,
                    "d_b_delta": e.d_b_delta,
                    "d_e_delta": e.d_e_delta,
                    "predicted_alpha_delta": e.predicted_alpha_delta,
                }
                for e in delta.effects
            ],
        },
    }


def whatif_json_bytes(result: WhatIfResult) -> bytes:
    return canonical_json_bytes(whatif_to_dict(result))


def whatif_text(result: WhatIfResult) -> str:
    delta = result.delta
    lines = [
        f"What-if evaluation: {result.before.workspace} ({result.before.ttp})",
        "",
        f"  d*:    {result.before.complexity.d_star} -> {result.after.complexity.d_star} "
        f"({delta.d_star_delta:+d})",
        f"  d_b:   {result.before.d_b:.4f} -> {result.after.d_b:.4f} ({delta.d_b_delta:+.4f})",
        f"  d_e:   {result.before.d_e:.4f} -> {result.after.d_e:.4f} ({delta.d_e_delta:+.4f})",
    ]
    if delta.predicted_alpha_before is not None and delta.predicted_alpha_after is not None:
        lines.append(
            f"  predicted alpha: {delta.predicted_alpha_before:.4f} -> "
            f"{delta.predicted_alpha_after:.4f} ({delta.predicted_alpha_delta:+.4f})"
        )
    else:
        lines.append("  predicted alpha: unavailable (no baseline gamma)")
    if delta.effects:
        lines.append("")
        lines.append("Per-edit effects:")
        for e in delta.effects:
            pred = "" if e.predicted_alpha_delta is None else f", alpha {e.predicted_alpha_delta:+.4f}"
            lines.append(
                f"  {e.index}. {e.kind.value}: {e.flag} "
                f"(d* {e.d_star_delta:+d}, d_b {e.d_b_delta:+.4f}, d_e {e.d_e_delta:+.4f}{pred})"
            )
    return "\n".join(lines) + "\n"
