/**
 * Decision panel: live readouts (d*, d_b, d_e, alpha, gamma), bottleneck and
 * opportunity rankings, per-edit beneficial/harmful flags, assessment
 * sliders, the beta knob, and the cross-TTP heatmap tile strip.
 *
 * Every displayed number is a field from a service response; this module
 * only formats. Tile colours come from the server-assigned band through the
 * shared BAND_FILL table, so they match the core's banding rule exactly.
 */

import { WorkspaceView } from "./state.js";
import { BAND_FILL, type HeatmapScore, type StructuredReport } from "./types.js";

function fmt(value: number | null | undefined, digits = 4): string {
  if (value === null || value === undefined) {
    return "unavailable";
  }
  return value.toFixed(digits);
}

function readout(label: string, value: string, id: string): HTMLElement {
  const tile = document.createElement("div");
  tile.className = "readout";
  tile.id = id;
  const name = document.createElement("span");
  name.className = "label";
  name.textContent = label;
  const number = document.createElement("strong");
  number.className = "value";
  number.textContent = value;
  tile.append(name, number);
  return tile;
}

function rankingList(title: string, entries: { component: string; d_min: number }[]): HTMLElement {
  const box = document.createElement("div");
  box.className = "ranking";
  const heading = document.createElement("h3");
  heading.textContent = title;
  const list = document.createElement("ol");
  for (const entry of entries.slice(0, 5)) {
    const item = document.createElement("li");
    item.textContent = `${entry.component} (${entry.d_min})`;
    list.appendChild(item);
  }
  box.append(heading, list);
  return box;
}

export class DecisionPanel {
  private readonly view: WorkspaceView;
  private readonly root: HTMLElement;
  private heatmapScores: HeatmapScore[] = [];

  constructor(view: WorkspaceView, root: HTMLElement) {
    this.view = view;
    this.root = root;
    view.subscribe(() => this.render());
    this.render();
  }

  setHeatmap(scores: HeatmapScore[]): void {
    this.heatmapScores = scores;
    this.render();
  }

  render(): void {
    const report = this.view.currentReport();
    const fragment = document.createDocumentFragment();

    fragment.appendChild(this.renderReadouts(report));
    fragment.appendChild(this.renderEffects());

    const rankings = document.createElement("div");
    rankings.className = "rankings";
    rankings.append(
      rankingList("Bottlenecks", report.complexity.bottlenecks),
      rankingList("Opportunities", report.complexity.opportunities),
    );
    fragment.appendChild(rankings);

    fragment.appendChild(this.renderAssessments());
    fragment.appendChild(this.renderHeatmapStrip());
    fragment.appendChild(this.renderNotes(report));

    this.root.replaceChildren(fragment);
  }

  private renderReadouts(report: StructuredReport): HTMLElement {
    const row = document.createElement("div");
    row.className = "readouts";
    row.append(
      readout("d*", String(report.complexity.d_star), "readout-d-star"),
      readout("d_b", fmt(report.beneficial.d_b), "readout-d-b"),
      readout("d_e", fmt(report.d_e), "readout-d-e"),
      readout(`alpha (${report.performance.canonical_metric})`, fmt(report.performance.alpha), "readout-alpha"),
      readout("gamma", fmt(report.performance.gamma?.gamma ?? null), "readout-gamma"),
    );
    return row;
  }

  private renderEffects(): HTMLElement {
    const box = document.createElement("div");
    box.className = "effects";
    const response = this.view.lastResponse;
    if (this.view.pending.length === 0 || response === null) {
      return box;
    }
    const heading = document.createElement("h3");
    heading.textContent = "Pending edits";
    const list = document.createElement("ul");
    for (const effect of response.delta.effects) {
      const item = document.createElement("li");
      item.className = `effect ${effect.flag}`;
      const alpha =
        effect.predicted_alpha_delta === null
          ? ""
          : `, predicted alpha ${effect.predicted_alpha_delta >= 0 ? "+" : ""}${effect.predicted_alpha_delta.toFixed(4)}`;
      item.textContent =
        `${effect.kind}: ${effect.flag} ` +
        `(d* ${effect.d_star_delta >= 0 ? "+" : ""}${effect.d_star_delta}, ` +
        `d_e ${effect.d_e_delta >= 0 ? "+" : ""}${effect.d_e_delta.toFixed(4)}${alpha})`;
      list.appendChild(item);
    }
    box.append(heading, list);
    return box;
  }

  private renderAssessments(): HTMLElement {
    const box = document.createElement("div");
    box.className = "assessments";
    const heading = document.createElement("h3");
    heading.textContent = "Control assessments";
    box.appendChild(heading);

    for (const baseline of this.view.baselineDoc.assessments) {
      const current = this.view.assessmentValue(baseline.control);
      const row = document.createElement("div");
      row.className = "assessment";
      const label = document.createElement("span");
      label.textContent = baseline.control;
      row.appendChild(label);
      for (const factor of ["diversity", "independence", "coverage"] as const) {
        const slider = document.createElement("input");
        slider.type = "range";
        slider.min = "0";
        slider.max = "1";
        slider.step = "0.05";
        slider.value = String(current[factor]);
        slider.title = `${factor}: ${current[factor]}`;
        slider.dataset.control = baseline.control;
        slider.dataset.factor = factor;
        slider.addEventListener("change", () => {
          const latest = this.view.assessmentValue(baseline.control);
          this.view.setAssessment(baseline.control, {
            diversity: factor === "diversity" ? Number(slider.value) : latest.diversity,
            independence: factor === "independence" ? Number(slider.value) : latest.independence,
            coverage: factor === "coverage" ? Number(slider.value) : latest.coverage,
          });
        });
        row.appendChild(slider);
      }
      box.appendChild(row);
    }

    const betaRow = document.createElement("div");
    betaRow.className = "assessment beta";
    const betaLabel = document.createElement("span");
    betaLabel.textContent = "beta";
    const beta = document.createElement("input");
    beta.type = "range";
    beta.min = "0";
    beta.max = "1";
    beta.step = "0.05";
    beta.id = "beta-slider";
    beta.value = String(this.view.betaValue());
    beta.addEventListener("change", () => this.view.setBeta(Number(beta.value)));
    betaRow.append(betaLabel, beta);
    box.appendChild(betaRow);
    return box;
  }

  private renderHeatmapStrip(): HTMLElement {
    const box = document.createElement("div");
    box.className = "heatmap-strip";
    if (this.heatmapScores.length === 0) {
      return box;
    }
    const heading = document.createElement("h3");
    heading.textContent = "TTP complexity heatmap";
    box.appendChild(heading);
    const strip = document.createElement("div");
    strip.className = "tiles";
    for (const score of this.heatmapScores) {
      const tile = document.createElement("div");
      tile.className = `tile band-${score.band}`;
      tile.style.backgroundColor = BAND_FILL[score.band];
      tile.dataset.ttp = score.ttp;
      tile.title = `${score.ttp}: d_e ${score.d_e}, normalized ${score.normalized.toFixed(1)}`;
      tile.textContent = score.ttp;
      strip.appendChild(tile);
    }
    box.appendChild(strip);
    return box;
  }

  private renderNotes(report: StructuredReport): HTMLElement {
    const box = document.createElement("div");
    box.className = "notes";
    if (report.notes.length === 0) {
      return box;
    }
    const heading = document.createElement("h3");
    heading.textContent = "Notes";
    const list = document.createElement("ul");
    for (const note of report.notes) {
      const item = document.createElement("li");
      item.textContent = note;
      list.appendChild(item);
    }
    box.append(heading, list);
    return box;
  }
}
