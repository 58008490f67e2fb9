/** Page state: one loaded network session, an editable injection
 * draft, the latest settlement and the one before it (for deltas), and
 * at most one optimizer suggestion overlaid on top.
 *
 * All outcome numbers held here came from the service verbatim and are
 * kept at full precision; rounding happens only at render time.
 */

import type {
  AllocationSummary,
  InjectionEntry,
  OptimizationSummary,
  OutcomeSummary,
} from "./types.js";

export interface Overlay {
  mode: string;
  allocation: AllocationSummary;
  outcome: OutcomeSummary;
}

export interface ViewState {
  sessionId: string | null;
  nodeIds: string[];
  draft: Map<string, number>;
  lastOutcome: OutcomeSummary | null;
  previousOutcome: OutcomeSummary | null;
  overlay: Overlay | null;
  optimizeInFlight: boolean;
  /** Budget the optimizer forms will ask for. */
  budget: number;
}

export function createState(): ViewState {
  return {
    sessionId: null,
    nodeIds: [],
    draft: new Map(),
    lastOutcome: null,
    previousOutcome: null,
    overlay: null,
    optimizeInFlight: false,
    budget: 0,
  };
}

/** Point the state at a freshly registered session, dropping
 * everything tied to the previous network. */
export function loadSession(state: ViewState, sessionId: string,
                            nodeIds: string[]): void {
  state.sessionId = sessionId;
  state.nodeIds = [...nodeIds];
  state.draft = new Map();
  state.lastOutcome = null;
  state.previousOutcome = null;
  state.overlay = null;
  state.optimizeInFlight = false;
  state.budget = 0;
}

/** Set the optimizer budget; it must be a finite nonnegative number. */
export function setBudget(state: ViewState, budget: number): void {
  if (!Number.isFinite(budget) || budget < 0) {
    throw new Error("budget must be finite and nonnegative");
  }
  state.budget = budget;
}

/** Set one node's draft injection.  Zero removes the entry; negative
 * or non-finite amounts and unknown nodes are rejected. */
export function setDraftAmount(state: ViewState, id: string,
                               amount: number): void {
  if (!state.nodeIds.includes(id)) {
    throw new Error(`unknown node ${JSON.stringify(id)}`);
  }
  if (!Number.isFinite(amount) || amount < 0) {
    throw new Error("injection amounts must be finite and nonnegative");
  }
  if (amount === 0) {
    state.draft.delete(id);
  } else {
    state.draft.set(id, amount);
  }
}

export function clearDraft(state: ViewState): void {
  state.draft.clear();
}

/** The draft as a service injection list, ordered by node id so the
 * same draft always produces the same request body. */
export function draftInjections(state: ViewState): InjectionEntry[] {
  return [...state.draft.entries()]
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([id, amount]) => ({ id, amount }));
}

export function draftTotal(state: ViewState): number {
  let total = 0;
  for (const amount of state.draft.values()) total += amount;
  return total;
}

/** Record a settlement, keeping the previous one for the delta view. */
export function applyOutcome(state: ViewState,
                             outcome: OutcomeSummary): void {
  state.previousOutcome = state.lastOutcome;
  state.lastOutcome = outcome;
}

export interface OutcomeDeltas {
  unpaid: number;
  defaults: number;
}

/** Change from the previous settlement to the latest one, or null
 * until two settlements exist. */
export function outcomeDeltas(state: ViewState): OutcomeDeltas | null {
  if (!state.lastOutcome || !state.previousOutcome) return null;
  return {
    unpaid: state.lastOutcome.unpaid_total - state.previousOutcome.unpaid_total,
    defaults: state.lastOutcome.n_defaults - state.previousOutcome.n_defaults,
  };
}

export function setOverlay(state: ViewState,
                           suggestion: OptimizationSummary): void {
  state.overlay = {
    mode: suggestion.mode,
    allocation: suggestion.allocation,
    outcome: suggestion.outcome,
  };
}

export function clearOverlay(state: ViewState): void {
  state.overlay = null;
}

/** Replace the draft with the overlay's allocation.  Returns a
 * snapshot of the prior draft; passing it to restoreDraft undoes the
 * copy exactly. */
export function copyOverlayToDraft(state: ViewState): Map<string, number> {
  if (!state.overlay) {
    throw new Error("no suggestion to copy");
  }
  const snapshot = new Map(state.draft);
  state.draft = new Map();
  for (const entry of state.overlay.allocation.entries) {
    if (entry.amount > 0) {
      state.draft.set(entry.id, entry.amount);
    }
  }
  return snapshot;
}

export function restoreDraft(state: ViewState,
                             snapshot: Map<string, number>): void {
  state.draft = new Map(snapshot);
}

/** Mark an optimize call in flight; only one may run at a time
 * (what-if calls stay allowed). */
export function beginOptimize(state: ViewState): void {
  if (state.optimizeInFlight) {
    throw new Error("an optimize call is already running");
  }
  state.optimizeInFlight = true;
}

export function endOptimize(state: ViewState): void {
  state.optimizeInFlight = false;
}
