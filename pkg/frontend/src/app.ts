/**
 * Workbench bootstrap: workspace picker, grid editor + decision panel
 * wiring, discard/commit actions, and the connectivity banner with retry.
 */

import { ApiClient } from "./api.js";
import { DecisionPanel } from "./decisionPanel.js";
import { MatrixEditor } from "./matrixEditor.js";
import { WorkspaceView } from "./state.js";

export async function startApp(root: HTMLElement, api = new ApiClient()): Promise<void> {
  root.innerHTML = `
    <header>
      <h1>Defence complexity workbench</h1>
      <select id="workspace-picker"></select>
      <button id="discard">Discard edits</button>
      <button id="commit">Commit</button>
      <span id="sync-indicator"></span>
    </header>
    <div id="banner" class="banner" hidden></div>
    <main>
      <section id="matrix-editor"></section>
      <section id="decision-panel"></section>
    </main>
  `;

  const picker = root.querySelector<HTMLSelectElement>("#workspace-picker")!;
  const banner = root.querySelector<HTMLDivElement>("#banner")!;
  const matrixRoot = root.querySelector<HTMLElement>("#matrix-editor")!;
  const panelRoot = root.querySelector<HTMLElement>("#decision-panel")!;
  const syncIndicator = root.querySelector<HTMLSpanElement>("#sync-indicator")!;

  const list = await api.listWorkspaces();
  for (const entry of list.workspaces) {
    const option = document.createElement("option");
    option.value = entry.name;
    option.textContent = `${entry.name} (${entry.ttp})`;
    picker.appendChild(option);
  }

  let view: WorkspaceView | null = null;

  async function open(name: string): Promise<void> {
    const [doc, report] = await Promise.all([api.getWorkspace(name), api.getReport(name)]);
    view = new WorkspaceView(api, doc, report);
    const panel = new DecisionPanel(view, panelRoot);
    new MatrixEditor(view, matrixRoot);
    view.subscribe(() => {
      syncIndicator.textContent = view!.syncing ? "evaluating…" : "";
      if (view!.connectionError) {
        banner.hidden = false;
        banner.replaceChildren();
        const text = document.createElement("span");
        text.textContent = view!.connectionError;
        const retry = document.createElement("button");
        retry.id = "retry";
        retry.textContent = "Retry";
        retry.addEventListener("click", () => view!.retry());
        banner.append(text, retry);
      } else {
        banner.hidden = true;
      }
    });
    try {
      const heatmap = await api.getHeatmap();
      panel.setHeatmap(heatmap.scores);
    } catch {
      // heatmap is a nicety; the panel stays usable without it
    }
  }

  picker.addEventListener("change", () => void open(picker.value));
  root.querySelector<HTMLButtonElement>("#discard")!.addEventListener("click", () => {
    view?.discard();
  });
  root.querySelector<HTMLButtonElement>("#commit")!.addEventListener("click", () => {
    void (async () => {
      if (!view || view.pending.length === 0) {
        return;
      }
      const doc = view.commitDoc();
      await api.putWorkspace(view.name, doc);
      const report = await api.getReport(view.name);
      view.adoptBaseline(doc, report);
    })();
  });

  if (list.workspaces.length > 0) {
    picker.value = list.workspaces[0].name;
    await open(picker.value);
  }
}
