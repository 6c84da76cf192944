/**
 * Wire types mirroring the service's JSON formats (docs/format.md in the
 * repository root). The UI treats all of these as read-only server facts:
 * every number rendered anywhere comes out of one of these payloads.
 */

export type CellToken = "X" | "0" | "+1" | "-1";
export type Band = "green" | "orange" | "red";
export type DstarMode = "strict" | "degree";

export interface WorkspaceListEntry {
  name: string;
  ttp: string;
}

export interface WorkspaceList {
  schema_version: number;
  workspaces: WorkspaceListEntry[];
}

export interface ComponentEntry {
  id: string;
  kind: "technique" | "control";
  name: string;
  attack_id?: string;
}

export interface AssessmentEntry {
  control: string;
  diversity: number;
  independence: number;
  coverage: number;
}

export interface SeriesPoint {
  period: number;
  value: number;
}

export interface SeriesEntry {
  metric: string;
  note?: string;
  points: SeriesPoint[];
}

/** Workspace document as served by GET /workspaces/{name} (cells inlined). */
export interface WorkspaceDoc {
  schema_version: number;
  name: string;
  ttp: string;
  description?: string;
  mode: DstarMode;
  beta: number;
  weights: { diversity: number; independence: number; coverage: number };
  canonical_metric: string;
  components: ComponentEntry[];
  cells: CellToken[][];
  assessments: AssessmentEntry[];
  series: SeriesEntry[];
  reference?: Record<string, number>;
}

export interface DegreeProfile {
  component: string;
  out_degree: number;
  in_degree: number;
  d_min: number;
}

export interface RankedComponent {
  component: string;
  d_min: number;
}

export interface RegressionFit {
  slope: number;
  intercept: number;
  r_squared: number;
  n_points: number;
}

export interface GammaEstimate {
  alpha: number;
  d_e: number;
  gamma: number;
}

export interface StructuredReport {
  schema_version: number;
  workspace: string;
  ttp: string;
  mode: DstarMode;
  complexity: {
    d_star: number;
    profiles: DegreeProfile[];
    bottlenecks: RankedComponent[];
    opportunities: RankedComponent[];
  };
  beneficial: {
    per_control_scores: { control: string; score: number }[];
    d_b: number;
    beta: number;
  };
  d_e: number;
  performance: {
    canonical_metric: string;
    alpha: number;
    fits: Record<string, RegressionFit>;
    gamma: GammaEstimate | null;
  };
  reference: Record<string, number> | null;
  notes: string[];
}

export interface EditEffect {
  index: number;
  kind: string;
  flag: "beneficial" | "harmful" | "neutral";
  d_star_delta: number;
  d_b_delta: number;
  d_e_delta: number;
  predicted_alpha_delta: number | null;
}

export interface WhatIfResponse {
  schema_version: number;
  before: StructuredReport;
  after: StructuredReport;
  delta: {
    d_star_delta: number;
    d_b_delta: number;
    d_e_delta: number;
    predicted_alpha_before: number | null;
    predicted_alpha_after: number | null;
    predicted_alpha_delta: number | null;
    effects: EditEffect[];
  };
}

export interface HeatmapScore {
  ttp: string;
  d_e: number;
  normalized: number;
  band: Band;
}

export interface HeatmapTable {
  schema_version: number;
  scores: HeatmapScore[];
}

/** Edit payloads sent to POST /workspaces/{name}/whatif. */
export interface SetInteractionEdit {
  kind: "set_interaction";
  source: string;
  target: string;
  value: "0" | "+1" | "-1";
}

export interface SetAssessmentEdit {
  kind: "set_assessment";
  component: string;
  diversity: number;
  independence: number;
  coverage: number;
}

export interface SetBetaEdit {
  kind: "set_beta";
  beta: number;
}

export type EditJson = SetInteractionEdit | SetAssessmentEdit | SetBetaEdit;

/** Tile fills keyed by the server-assigned band; identical to the core's rule. */
export const BAND_FILL: Record<Band, string> = {
  green: "#4caf50",
  orange: "#ff9800",
  red: "#f44336",
};
