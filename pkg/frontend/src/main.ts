/** Page wiring: connects the upload controls, the injection draft, the
 * what-if button, and the optimizer form to the service client and the
 * renderers.  This file owns the DOM and nothing else; state changes
 * live in state.ts and all arithmetic shown on screen was done by the
 * service.
 */

import { ApiClient, ApiError } from "./api.js";
import { currency } from "./format.js";
import {
  renderGraph,
  renderOutcomePanel,
  renderOverlayPanel,
} from "./render.js";
import {
  applyOutcome,
  beginOptimize,
  clearDraft,
  copyOverlayToDraft,
  createState,
  draftInjections,
  draftTotal,
  endOptimize,
  loadSession,
  outcomeDeltas,
  restoreDraft,
  setBudget,
  setDraftAmount,
  setOverlay,
} from "./state.js";
import { treeNetworkDoc } from "./tree.js";
import type { NetworkDoc, OptimizeRequest } from "./types.js";

const client = new ApiClient({ baseUrl: "" });
const state = createState();
let currentDoc: NetworkDoc | null = null;
let undoSnapshot: Map<string, number> | null = null;

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) return `${error.code}: ${error.message}`;
  return String(error);
}

function setText(id: string, text: string): void {
  element(id).textContent = text;
}

function renderDraft(): void {
  const entries = draftInjections(state);
  const rows = entries.map((entry) =>
    `<tr><td>${entry.id}</td><td>${currency(entry.amount)}</td>` +
    `<td><button type="button" class="draft-remove" ` +
    `data-id="${entry.id}">remove</button></td></tr>`)
    .join("");
  element("draft-list").innerHTML = entries.length === 0
    ? `<p class="muted">no injections drafted</p>`
    : `<table><thead><tr><th>node</th><th>amount</th><th></th></tr>` +
      `</thead><tbody>${rows}</tbody></table>` +
      `<p>total ${currency(draftTotal(state))}</p>`;
}

function renderOutcome(): void {
  if (!currentDoc || !state.lastOutcome) return;
  element("graph").innerHTML = renderGraph(currentDoc, state.lastOutcome);
  element("outcome").innerHTML =
    renderOutcomePanel(state.lastOutcome, outcomeDeltas(state));
}

function renderOverlay(): void {
  const container = element("overlay");
  if (!state.overlay) {
    container.innerHTML = `<p class="muted">no suggestion yet</p>`;
    return;
  }
  container.innerHTML = renderOverlayPanel({
    mode: state.overlay.mode,
    allocationTotal: state.overlay.allocation.total,
    entries: state.overlay.allocation.entries,
    unpaidTotal: state.overlay.outcome.unpaid_total,
    nDefaults: state.overlay.outcome.n_defaults,
  });
}

async function loadNetwork(doc: NetworkDoc): Promise<void> {
  setText("load-status", "registering network...");
  try {
    const sessionId = await client.registerNetwork(doc);
    const summary = await client.networkSummary(sessionId);
    currentDoc = doc;
    loadSession(state, sessionId, doc.nodes.map((node) => node.id));
    undoSnapshot = null;
    setText("load-status",
            `${summary.n} nodes, obligations ${currency(summary.total_obligations)}, ` +
            `${summary.baseline_defaults} defaults with no help`);
    // Baseline picture: settle with no injections so every number on
    // screen comes from the service.
    const outcome = await client.whatIf(sessionId, []);
    applyOutcome(state, outcome);
    renderDraft();
    renderOutcome();
    renderOverlay();
  } catch (error) {
    setText("load-status", describeError(error));
  }
}

async function onFileChosen(input: HTMLInputElement): Promise<void> {
  const file = input.files?.[0];
  if (!file) return;
  try {
    const doc = JSON.parse(await file.text()) as NetworkDoc;
    await loadNetwork(doc);
  } catch (error) {
    setText("load-status", describeError(error));
  }
}

function onSetInjection(): void {
  const id = element<HTMLInputElement>("inject-id").value.trim();
  const amount = Number(element<HTMLInputElement>("inject-amount").value);
  try {
    setDraftAmount(state, id, amount);
    setText("whatif-error", "");
    renderDraft();
  } catch (error) {
    setText("whatif-error", describeError(error));
  }
}

async function onRunWhatIf(): Promise<void> {
  if (!state.sessionId) return;
  setText("whatif-error", "");
  try {
    const outcome = await client.whatIf(state.sessionId,
                                        draftInjections(state));
    applyOutcome(state, outcome);
    renderOutcome();
  } catch (error) {
    setText("whatif-error", describeError(error));
  }
}

function readOptimizeRequest(): OptimizeRequest {
  const mode = element<HTMLSelectElement>("opt-mode").value;
  if (mode === "lagrangian") {
    return {
      mode,
      lambda: Number(element<HTMLInputElement>("opt-lambda").value),
    };
  }
  setBudget(state, Number(element<HTMLInputElement>("opt-budget").value));
  if (mode === "liabilities") {
    return { mode, budget: state.budget };
  }
  return {
    mode: "defaults",
    budget: state.budget,
    starts: Number(element<HTMLInputElement>("opt-starts").value),
    seed: Number(element<HTMLInputElement>("opt-seed").value),
  };
}

async function onRunOptimize(): Promise<void> {
  if (!state.sessionId) return;
  try {
    beginOptimize(state);
  } catch (error) {
    setText("opt-error", describeError(error));
    return;
  }
  const button = element<HTMLButtonElement>("opt-run");
  button.disabled = true;
  setText("opt-error", "");
  setText("opt-progress", "submitting...");
  try {
    const result = await client.runOptimize(
      state.sessionId, readOptimizeRequest(),
      (status) => setText("opt-progress", `job ${status}`));
    setOverlay(state, result);
    setText("opt-progress", "done");
    renderOverlay();
  } catch (error) {
    setText("opt-progress", "");
    setText("opt-error", describeError(error));
  } finally {
    endOptimize(state);
    button.disabled = false;
  }
}

function onCopyOverlay(): void {
  try {
    undoSnapshot = copyOverlayToDraft(state);
    element<HTMLButtonElement>("undo-copy").hidden = false;
    renderDraft();
  } catch (error) {
    setText("opt-error", describeError(error));
  }
}

function onUndoCopy(): void {
  if (!undoSnapshot) return;
  restoreDraft(state, undoSnapshot);
  undoSnapshot = null;
  element<HTMLButtonElement>("undo-copy").hidden = true;
  renderDraft();
}

function wire(): void {
  element<HTMLInputElement>("file-input").addEventListener(
    "change", (event) => {
      void onFileChosen(event.currentTarget as HTMLInputElement);
    });
  element("load-tree").addEventListener("click", () => {
    void loadNetwork(treeNetworkDoc(10));
  });
  element("inject-set").addEventListener("click", onSetInjection);
  element("inject-clear").addEventListener("click", () => {
    clearDraft(state);
    renderDraft();
  });
  element("whatif-run").addEventListener("click", () => {
    void onRunWhatIf();
  });
  element("opt-run").addEventListener("click", () => {
    void onRunOptimize();
  });
  element("undo-copy").addEventListener("click", onUndoCopy);
  // Clicking a node in the picture fills the injection form with its id.
  element("graph").addEventListener("click", (event) => {
    const target = (event.target as Element | null)?.closest("[data-id]");
    const id = target?.getAttribute("data-id");
    if (id !== null && id !== undefined) {
      element<HTMLInputElement>("inject-id").value = id;
      element<HTMLInputElement>("inject-amount").focus();
    }
  });
  // The copy button lives inside re-rendered overlay HTML; delegate.
  element("overlay").addEventListener("click", (event) => {
    const target = event.target as Element | null;
    if (target && target.id === "copy-overlay") onCopyOverlay();
  });
  // Budget and lambda inputs only apply to some modes; grey out the rest.
  const modeSelect = element<HTMLSelectElement>("opt-mode");
  const syncModeInputs = () => {
    const mode = modeSelect.value;
    element<HTMLInputElement>("opt-budget").disabled = mode === "lagrangian";
    element<HTMLInputElement>("opt-lambda").disabled = mode !== "lagrangian";
    element<HTMLInputElement>("opt-starts").disabled = mode !== "defaults";
    element<HTMLInputElement>("opt-seed").disabled = mode !== "defaults";
  };
  modeSelect.addEventListener("change", syncModeInputs);
  syncModeInputs();
  renderDraft();
  renderOverlay();
}

wire();
