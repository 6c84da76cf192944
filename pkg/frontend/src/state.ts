/**
 * Workbench view state for one workspace.
 *
 * Invariants the whole UI leans on:
 *  - Readouts always come from the latest what-if response (or the committed
 *    baseline report when no edits are pending). The client never recomputes
 *    domain math locally.
 *  - Pending edits are a diff against the committed baseline: one entry per
 *    edited cell / control / knob, replaced in place on further edits and
 *    dropped entirely when an edit lands back on the baseline value.
 *  - At most one what-if request is in flight; edits arriving meanwhile are
 *    coalesced into the next round trip.
 *  - A server-rejected edit is removed from the pending list (so pending
 *    length is always edits kept = edits sent minus edits rejected) and the
 *    rejection reason is surfaced for the editor to display.
 */

import { ApiClient, ApiError, ServiceUnreachableError, parseEditRejection } from "./api.js";
import type {
  AssessmentEntry,
  CellToken,
  EditJson,
  StructuredReport,
  WhatIfResponse,
  WorkspaceDoc,
} from "./types.js";

export interface PendingEdit {
  /** Identity of the thing edited (cell, control, knob) for diff semantics. */
  key: string;
  edit: EditJson;
}

export interface Rejection {
  key: string;
  reason: string;
}

export type Listener = () => void;

export function cellKey(source: string, target: string): string {
  return `cell:${source}:${target}`;
}

export function assessmentKey(control: string): string {
  return `assessment:${control}`;
}

export const BETA_KEY = "beta";

export class WorkspaceView {
  readonly name: string;
  baselineDoc: WorkspaceDoc;
  baselineReport: StructuredReport;
  pending: PendingEdit[] = [];
  lastResponse: WhatIfResponse | null = null;
  /** Non-empty while the service is unreachable; shown as a banner. */
  connectionError = "";
  /** Last server rejection, consumed by the matrix editor for its revert UI. */
  rejection: Rejection | null = null;
  syncing = false;

  private readonly api: ApiClient;
  private inFlight = false;
  private dirty = false;
  private listeners: Listener[] = [];

  constructor(api: ApiClient, doc: WorkspaceDoc, report: StructuredReport) {
    this.api = api;
    this.name = doc.name;
    this.baselineDoc = doc;
    this.baselineReport = report;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) {
      listener();
    }
  }

  /** The report the readouts must display right now. */
  currentReport(): StructuredReport {
    if (this.pending.length > 0 && this.lastResponse !== null) {
      return this.lastResponse.after;
    }
    return this.baselineReport;
  }

  /** Cell value as displayed: committed baseline plus the pending diff. */
  cellValue(source: string, target: string): CellToken {
    const pendingEdit = this.pending.find((p) => p.key === cellKey(source, target));
    if (pendingEdit && pendingEdit.edit.kind === "set_interaction") {
      return pendingEdit.edit.value;
    }
    const i = this.componentIndex(source);
    const j = this.componentIndex(target);
    return this.baselineDoc.cells[i][j];
  }

  /** Assessment as displayed: committed baseline plus the pending diff. */
  assessmentValue(control: string): AssessmentEntry {
    const pendingEdit = this.pending.find((p) => p.key === assessmentKey(control));
    if (pendingEdit && pendingEdit.edit.kind === "set_assessment") {
      const edit = pendingEdit.edit;
      return {
        control,
        diversity: edit.diversity,
        independence: edit.independence,
        coverage: edit.coverage,
      };
    }
    const entry = this.baselineDoc.assessments.find((a) => a.control === control);
    if (!entry) {
      throw new Error(`no assessment for control ${control}`);
    }
    return entry;
  }

  betaValue(): number {
    const pendingEdit = this.pending.find((p) => p.key === BETA_KEY);
    if (pendingEdit && pendingEdit.edit.kind === "set_beta") {
      return pendingEdit.edit.beta;
    }
    return this.baselineDoc.beta;
  }

  setCell(source: string, target: string, value: "0" | "+1" | "-1"): void {
    const i = this.componentIndex(source);
    const j = this.componentIndex(target);
    if (i === j) {
      return; // diagonal is locked; never emit an edit
    }
    const key = cellKey(source, target);
    if (this.baselineDoc.cells[i][j] === value) {
      // back to the committed value: a no-op diff, drop any pending edit
      this.pending = this.pending.filter((p) => p.key !== key);
    } else {
      this.upsert(key, { kind: "set_interaction", source, target, value });
    }
    this.scheduleSync();
  }

  setAssessment(control: string, scores: Omit<AssessmentEntry, "control">): void {
    const baseline = this.baselineDoc.assessments.find((a) => a.control === control);
    const key = assessmentKey(control);
    if (
      baseline &&
      baseline.diversity === scores.diversity &&
      baseline.independence === scores.independence &&
      baseline.coverage === scores.coverage
    ) {
      this.pending = this.pending.filter((p) => p.key !== key);
    } else {
      this.upsert(key, { kind: "set_assessment", component: control, ...scores });
    }
    this.scheduleSync();
  }

  setBeta(beta: number): void {
    if (beta === this.baselineDoc.beta) {
      this.pending = this.pending.filter((p) => p.key !== BETA_KEY);
    } else {
      this.upsert(BETA_KEY, { kind: "set_beta", beta });
    }
    this.scheduleSync();
  }

  /** Drop all pending edits; readouts return to the committed baseline exactly. */
  discard(): void {
    this.pending = [];
    this.lastResponse = null;
    this.rejection = null;
    this.notify();
  }

  /** Manual retry after a connectivity banner. */
  retry(): void {
    this.connectionError = "";
    this.scheduleSync();
  }

  /**
   * Baseline document with the pending diff applied structurally; sent to
   * PUT /workspaces/{name} on commit. Pure data transformation, no math.
   */
  commitDoc(): WorkspaceDoc {
    const doc: WorkspaceDoc = JSON.parse(JSON.stringify(this.baselineDoc));
    for (const { edit } of this.pending) {
      if (edit.kind === "set_interaction") {
        const i = this.componentIndex(edit.source);
        const j = this.componentIndex(edit.target);
        doc.cells[i][j] = edit.value;
      } else if (edit.kind === "set_assessment") {
        const entry = doc.assessments.find((a) => a.control === edit.component);
        if (entry) {
          entry.diversity = edit.diversity;
          entry.independence = edit.independence;
          entry.coverage = edit.coverage;
        }
      } else if (edit.kind === "set_beta") {
        doc.beta = edit.beta;
      }
    }
    return doc;
  }

  /** After a successful PUT: the commit becomes the new baseline. */
  adoptBaseline(doc: WorkspaceDoc, report: StructuredReport): void {
    this.baselineDoc = doc;
    this.baselineReport = report;
    this.pending = [];
    this.lastResponse = null;
    this.rejection = null;
    this.notify();
  }

  private componentIndex(id: string): number {
    const index = this.baselineDoc.components.findIndex((c) => c.id === id);
    if (index < 0) {
      throw new Error(`unknown component ${id}`);
    }
    return index;
  }

  private upsert(key: string, edit: EditJson): void {
    const existing = this.pending.findIndex((p) => p.key === key);
    if (existing >= 0) {
      this.pending[existing] = { key, edit };
    } else {
      this.pending.push({ key, edit });
    }
  }

  /**
   * Single-in-flight what-if synchronization. Edits made while a request is
   * out are coalesced into one follow-up request. A rejected edit is removed
   * (with its reason kept for the UI) and the remainder re-evaluated.
   */
  scheduleSync(): void {
    this.notify();
    if (this.inFlight) {
      this.dirty = true;
      return;
    }
    void this.runSync();
  }

  private async runSync(): Promise<void> {
    this.inFlight = true;
    this.syncing = true;
    this.notify();
    try {
      for (;;) {
        this.dirty = false;
        if (this.pending.length === 0) {
          this.lastResponse = null;
          break;
        }
        const snapshot = [...this.pending];
        try {
          const response = await this.api.postWhatIf(
            this.name,
            snapshot.map((p) => p.edit),
          );
          if (!this.dirty) {
            this.lastResponse = response;
          }
        } catch (error) {
          if (error instanceof ApiError) {
            const rejection = parseEditRejection(error);
            if (rejection !== null) {
              // the index refers to the list as sent, which may have been
              // re-edited while the request was out: remove by key
              const rejected = snapshot[rejection.index];
              if (rejected) {
                this.pending = this.pending.filter((p) => p.key !== rejected.key);
              }
              this.rejection = {
                key: rejected ? rejected.key : "",
                reason: rejection.reason,
              };
              this.dirty = true; // re-evaluate the surviving edits
              continue;
            }
            this.connectionError = error.message;
            break;
          }
          if (error instanceof ServiceUnreachableError) {
            this.connectionError = error.message;
            break;
          }
          throw error;
        }
        if (!this.dirty) {
          break;
        }
      }
    } finally {
      this.inFlight = false;
      this.syncing = false;
      this.notify();
    }
  }
}
