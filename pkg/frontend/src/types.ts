/** Shapes of the documents the HTTP service accepts and returns. */

export interface NodeDoc {
  id: string;
  cash?: number;
}

export interface LiabilityDoc {
  from: string;
  to: string;
  amount: number;
}

export interface NetworkDoc {
  nodes: NodeDoc[];
  liabilities: LiabilityDoc[];
}

export interface InjectionEntry {
  id: string;
  amount: number;
}

export interface InjectionDoc {
  injections: InjectionEntry[];
}

/** Per-node row of a settlement report. */
export interface NodeReport {
  id: string;
  obligation: number;
  payment: number;
  received: number;
  funds: number;
  injection: number;
  shortfall: number;
  in_default: boolean;
}

/** Settlement report for one network plus injection. */
export interface OutcomeSummary {
  n: number;
  total_obligations: number;
  injection_total: number;
  payments_total: number;
  unpaid_total: number;
  n_defaults: number;
  defaults: string[];
  nodes: NodeReport[];
}

export interface AllocationSummary {
  total: number;
  entries: InjectionEntry[];
}

/** Optimizer response: the chosen allocation plus its settlement. */
export interface OptimizationSummary {
  mode: string;
  allocation: AllocationSummary;
  outcome: OutcomeSummary;
  budget?: number;
  cost_weight?: number;
  [extra: string]: unknown;
}

export interface NetworkSummary {
  network_id: string;
  n: number;
  total_obligations: number;
  baseline_defaults: number;
}

export type JobStatus = "queued" | "running" | "done" | "failed";

export interface JobDoc {
  job_id: string;
  status: JobStatus;
  result?: OptimizationSummary;
  error?: string;
}

export type OptimizeRequest =
  | { mode: "liabilities"; budget: number }
  | { mode: "lagrangian"; lambda: number }
  | {
      mode: "defaults";
      budget: number;
      starts?: number;
      seed?: number;
      k?: number;
      epsilon?: number;
      delta?: number;
      max_iterations?: number;
    };
