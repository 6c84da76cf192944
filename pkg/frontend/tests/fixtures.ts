/** Canned service payloads built around the case-study report numbers. */

import type {
  EditJson,
  StructuredReport,
  WhatIfResponse,
  WorkspaceDoc,
} from "../src/types.js";

export function caseStudyDoc(): WorkspaceDoc {
  return {
    schema_version: 1,
    name: "case-study-t1059",
    ttp: "T1059",
    mode: "degree",
    beta: 0.5,
    weights: { diversity: 1, independence: 1, coverage: 1 },
    canonical_metric: "prevention_rate",
    components: [
      { id: "T1059.001", kind: "technique", name: "PowerShell", attack_id: "T1059.001" },
      { id: "T1059.003", kind: "technique", name: "Windows Command Shell", attack_id: "T1059.003" },
      { id: "CTL-EDR", kind: "control", name: "Endpoint Detection & Response" },
      { id: "CTL-NETSEG", kind: "control", name: "Network Segmentation" },
    ],
    cells: [
      ["X", "+1", "+1", "0"],
      ["+1", "X", "+1", "0"],
      ["+1", "+1", "X", "-1"],
      ["0", "0", "-1", "X"],
    ],
    assessments: [
      { control: "CTL-EDR", diversity: 0.7, independence: 0.2, coverage: 1.0 },
      { control: "CTL-NETSEG", diversity: 0.5, independence: 0.9, coverage: 0.1 },
    ],
    series: [
      {
        metric: "prevention_rate",
        note: "synthetic",
        points: [
          { period: 1, value: 55.0 },
          { period: 2, value: 57.963 },
          { period: 3, value: 59.7697 },
        ],
      },
    ],
    reference: { d_b: 0.7042, d_e: 15.6479 },
  };
}

export function caseStudyReport(): StructuredReport {
  return {
    schema_version: 1,
    workspace: "case-study-t1059",
    ttp: "T1059",
    mode: "degree",
    complexity: {
      d_star: 16,
      profiles: [
        { component: "T1059.001", out_degree: 9, in_degree: 9, d_min: 9 },
        { component: "T1059.003", out_degree: 7, in_degree: 7, d_min: 7 },
        { component: "CTL-EDR", out_degree: 16, in_degree: 16, d_min: 16 },
        { component: "CTL-NETSEG", out_degree: 3, in_degree: 3, d_min: 3 },
      ],
      bottlenecks: [
        { component: "CTL-EDR", d_min: 16 },
        { component: "T1059.001", d_min: 9 },
        { component: "T1059.003", d_min: 7 },
        { component: "CTL-NETSEG", d_min: 3 },
      ],
      opportunities: [
        { component: "CTL-NETSEG", d_min: 3 },
        { component: "T1059.003", d_min: 7 },
        { component: "T1059.001", d_min: 9 },
        { component: "CTL-EDR", d_min: 16 },
      ],
    },
    beneficial: {
      per_control_scores: [
        { control: "CTL-EDR", score: 0.6333333333333333 },
        { control: "CTL-NETSEG", score: 0.5 },
      ],
      d_b: 0.6583333333333334,
      beta: 0.5,
    },
    d_e: 15.670833333333333,
    performance: {
      canonical_metric: "prevention_rate",
      alpha: 0.0757,
      fits: {
        prevention_rate: { slope: 0.0757, intercept: 4.007, r_squared: 1.0, n_points: 12 },
      },
      gamma: { alpha: 0.0757, d_e: 15.670833333333333, gamma: 0.8429703940784952 },
    },
    reference: { d_b: 0.7042, d_e: 15.6479 },
    notes: [
      "replication: computed d_b 0.658333 differs from the declared reference d_b 0.7042 by 0.045867",
    ],
  };
}

/** A plausible what-if response: slightly lower d_e, every edit beneficial. */
export function whatIfResponse(edits: EditJson[]): WhatIfResponse {
  const before = caseStudyReport();
  const after = caseStudyReport();
  after.beneficial.d_b = 0.7;
  after.d_e = 15.65;
  return {
    schema_version: 1,
    before,
    after,
    delta: {
      d_star_delta: 0,
      d_b_delta: after.beneficial.d_b - before.beneficial.d_b,
      d_e_delta: after.d_e - before.d_e,
      predicted_alpha_before: 0.0757,
      predicted_alpha_after: 0.0758,
      predicted_alpha_delta: 0.0001,
      effects: edits.map((edit, index) => ({
        index,
        kind: edit.kind,
        flag: "beneficial" as const,
        d_star_delta: 0,
        d_b_delta: 0.01,
        d_e_delta: -0.005,
        predicted_alpha_delta: 0.0001,
      })),
    },
  };
}
