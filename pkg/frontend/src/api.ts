/** Thin typed client for the clearing service.
 *
 * Every number the page displays comes back through this module; the
 * page never settles a network on its own.  Service errors carry
 * {code, message} and are rethrown as ApiError with the message kept
 * verbatim so the page can surface exactly what the service said.
 */

import type {
  InjectionEntry,
  JobDoc,
  JobStatus,
  NetworkDoc,
  NetworkSummary,
  OptimizationSummary,
  OptimizeRequest,
  OutcomeSummary,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(code: string, message: string, status: number) {
    super(message);
    this.name = "ApiError";
    this.code = code;
    this.status = status;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface ClientOptions {
  baseUrl?: string;
  fetchFn?: FetchLike;
  /** Milliseconds between job polls. */
  pollIntervalMs?: number;
  /** Give up waiting for a job after this many milliseconds. */
  pollTimeoutMs?: number;
}

export type OptimizeStarted =
  | { kind: "done"; result: OptimizationSummary }
  | { kind: "job"; jobId: string };

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;
  readonly pollIntervalMs: number;
  readonly pollTimeoutMs: number;

  constructor(options: ClientOptions = {}) {
    this.baseUrl = options.baseUrl ?? "";
    this.fetchFn = options.fetchFn ?? ((url, init) => fetch(url, init));
    this.pollIntervalMs = options.pollIntervalMs ?? 500;
    this.pollTimeoutMs = options.pollTimeoutMs ?? 120000;
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (error) {
      throw new ApiError("unreachable", `service unreachable: ${error}`, 0);
    }
    if (response.ok || response.status === 202) {
      return response;
    }
    let code = "error";
    let message = `request failed with status ${response.status}`;
    try {
      const body = (await response.json()) as { code?: string; message?: string };
      if (typeof body.code === "string") code = body.code;
      if (typeof body.message === "string") message = body.message;
    } catch {
      // Non-JSON error body; keep the status-based message.
    }
    throw new ApiError(code, message, response.status);
  }

  private post(path: string, body: unknown): Promise<Response> {
    return this.request(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async registerNetwork(doc: NetworkDoc): Promise<string> {
    const response = await this.post("/networks", doc);
    const body = (await response.json()) as { network_id: string };
    return body.network_id;
  }

  async networkSummary(sessionId: string): Promise<NetworkSummary> {
    const response = await this.request(`/networks/${sessionId}`);
    return (await response.json()) as NetworkSummary;
  }

  async whatIf(sessionId: string,
               injections: InjectionEntry[]): Promise<OutcomeSummary> {
    const response = await this.post(`/networks/${sessionId}/whatif`,
                                     { injections });
    return (await response.json()) as OutcomeSummary;
  }

  /** Kick off an optimize call; small runs answer inline, large ones
   * come back as a job to poll. */
  async optimize(sessionId: string,
                 request: OptimizeRequest): Promise<OptimizeStarted> {
    const response = await this.post(`/networks/${sessionId}/optimize`,
                                     request);
    if (response.status === 202) {
      const body = (await response.json()) as { job_id: string };
      return { kind: "job", jobId: body.job_id };
    }
    return { kind: "done", result: (await response.json()) as OptimizationSummary };
  }

  async jobStatus(jobId: string): Promise<JobDoc> {
    const response = await this.request(`/jobs/${jobId}`);
    return (await response.json()) as JobDoc;
  }

  /** Poll a job until it finishes; reports each observed status. */
  async pollJob(jobId: string,
                onProgress?: (status: JobStatus) => void,
                ): Promise<OptimizationSummary> {
    const deadline = Date.now() + this.pollTimeoutMs;
    for (;;) {
      const job = await this.jobStatus(jobId);
      onProgress?.(job.status);
      if (job.status === "done" && job.result) {
        return job.result;
      }
      if (job.status === "failed") {
        throw new ApiError("job_failed", job.error ?? "job failed", 500);
      }
      if (Date.now() >= deadline) {
        throw new ApiError(
          "timeout",
          `job still ${job.status} after ${this.pollTimeoutMs / 1000}s`,
          0);
      }
      await sleep(this.pollIntervalMs);
    }
  }

  /** Optimize and, if queued, wait for the job to finish. */
  async runOptimize(sessionId: string, request: OptimizeRequest,
                    onProgress?: (status: JobStatus) => void,
                    ): Promise<OptimizationSummary> {
    const started = await this.optimize(sessionId, request);
    if (started.kind === "done") {
      onProgress?.("done");
      return started.result;
    }
    return this.pollJob(started.jobId, onProgress);
  }
}
