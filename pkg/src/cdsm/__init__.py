"""Complexity analytics for layered cyber defences.

Quantifies how interconnected a defence against a MITRE ATT&CK technique
is (design complexity d*), credits defence-in-depth (beneficial complexity
d_b, effective complexity d_e), measures the improvement rate alpha from
performance telemetry, estimates the intrinsic difficulty gamma, and
supports what-if exploration of control changes with bottleneck rankings
and cross-TTP heatmaps.
"""

from .analysis import (
    AnalysisReport,
    DeltaSummary,
    EditEffect,
    EditKind,
    EditLink,
    WhatIfEdit,
    WhatIfResult,
    analyze,
    multi_ttp_scores,
    what_if,
)
from .beneficial import (
    BenefitWeights,
    ControlAssessment,
    aggregate_db,
    control_score,
    effective_complexity,
)
from .catalog import AttackCatalog, CatalogEntry, fetch_attack_catalog, load_attack_catalog
from .complexity import (
    ComplexitySummary,
    DegreeProfile,
    DstarMode,
    d_min,
    d_star,
    in_degree,
    out_degree,
    rank_components,
)
from .errors import (
    CatalogError,
    CdsmError,
    ConflictError,
    DomainError,
    EditError,
    EmptyInputError,
    FormatError,
    InsufficientDataError,
    InvalidWeightsError,
    LayoutError,
    PipelineError,
)
from .heatmap import (
    Band,
    HeatmapDocument,
    TtpComplexityScore,
    band_for,
    emit_heatmap,
    heatmap_svg,
    heatmap_table,
    normalize_scores,
)
from .model import (
    Cdsm,
    Component,
    ComponentKind,
    Interaction,
    Violation,
    affects,
    validate_cdsm,
)
from .performance import (
    GammaEstimate,
    Metric,
    MetricPoint,
    MetricSeries,
    RegressionFit,
    estimate_gamma,
    fit_alpha,
    predict_alpha,
)
from .reports import report_json_bytes, report_text, report_to_dict, whatif_to_dict
from .workspace import (
    ReferenceValues,
    Workspace,
    load_workspace,
    matrix_csv_text,
    parse_matrix_csv,
    save_workspace,
    validate_workspace,
    with_overrides,
    workspace_from_json_dict,
    workspace_to_json_dict,
)

__version__ = "0.1.0"
