/**
 * Interaction matrix grid editor.
 *
 * Off-diagonal cells cycle 0 -> +1 -> -1 -> 0 on click; each click becomes a
 * set_interaction edit on the view (which round-trips to the service). The
 * diagonal is locked to self and clicks there emit nothing. Cells with a
 * pending edit are marked; a server rejection reverts the cell (the state
 * already dropped the edit) and surfaces the reason next to the grid.
 */

import { cellKey, WorkspaceView } from "./state.js";
import type { CellToken } from "./types.js";

const CYCLE: Record<string, "0" | "+1" | "-1"> = {
  "0": "+1",
  "+1": "-1",
  "-1": "0",
};

const CELL_LABEL: Record<CellToken, string> = {
  X: "X",
  "0": "·",
  "+1": "+1",
  "-1": "−1",
};

export class MatrixEditor {
  private readonly view: WorkspaceView;
  private readonly root: HTMLElement;

  constructor(view: WorkspaceView, root: HTMLElement) {
    this.view = view;
    this.root = root;
    view.subscribe(() => this.render());
    this.render();
  }

  render(): void {
    const doc = this.view.baselineDoc;
    const ids = doc.components.map((c) => c.id);
    const table = document.createElement("table");
    table.className = "matrix";

    const head = table.createTHead().insertRow();
    head.appendChild(document.createElement("th"));
    for (const id of ids) {
      const th = document.createElement("th");
      th.textContent = id;
      th.title = doc.components.find((c) => c.id === id)?.name ?? id;
      head.appendChild(th);
    }

    const body = table.createTBody();
    for (const source of ids) {
      const row = body.insertRow();
      const th = document.createElement("th");
      th.textContent = source;
      row.appendChild(th);
      for (const target of ids) {
        const td = row.insertCell();
        td.dataset.source = source;
        td.dataset.target = target;
        if (source === target) {
          td.className = "cell self";
          td.textContent = "X";
          continue; // locked: no handler, no edit ever emitted
        }
        const value = this.view.cellValue(source, target);
        td.className = `cell v${value === "+1" ? "pos" : value === "-1" ? "neg" : "zero"}`;
        if (this.view.pending.some((p) => p.key === cellKey(source, target))) {
          td.classList.add("pending");
        }
        td.textContent = CELL_LABEL[value];
        td.tabIndex = 0;
        td.addEventListener("click", () => this.cycle(source, target));
        td.addEventListener("keydown", (event) => this.typeValue(source, target, event));
      }
    }

    const rejection = document.createElement("div");
    rejection.className = "rejection";
    if (this.view.rejection) {
      rejection.textContent = `edit rejected: ${this.view.rejection.reason}`;
    }

    this.root.replaceChildren(table, rejection);
  }

  private cycle(source: string, target: string): void {
    const current = this.view.cellValue(source, target);
    const next = CYCLE[current];
    if (next === undefined) {
      return;
    }
    this.view.setCell(source, target, next);
  }

  /** Direct keyboard entry: 0, + (or 1), and - set the cell value. */
  private typeValue(source: string, target: string, event: KeyboardEvent): void {
    const byKey: Record<string, "0" | "+1" | "-1"> = {
      "0": "0",
      "+": "+1",
      "1": "+1",
      "-": "-1",
    };
    const value = byKey[event.key];
    if (value === undefined) {
      return;
    }
    event.preventDefault();
    this.view.setCell(source, target, value);
  }
}
