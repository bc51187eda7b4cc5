/**
 * Session state machine behind the annotation view.
 *
 * Candidates are reviewed strictly one at a time, in the exact order
 * the service ranked them. The local reviewed counter is the effort
 * ledger: each Reject moves to the next candidate and costs one unit,
 * Accept costs one more (so accepting after r-1 rejections posts
 * reviewed_count = r, the accepted candidate's rank), and New cluster
 * always posts the full presented count, because a no-match decision
 * pays for every presented candidate.
 */

import { ApiError, OfflineError } from "./api.js";
import type { AnnotationApi } from "./api.js";
import type { CandidateView, MentionView, NextPayload } from "./types.js";

export type Phase =
  | "connecting"
  | "reviewing"
  | "exhausted"
  | "error"
  | "offline";

/** Everything the view renders; tests assert on this directly. */
export interface ViewState {
  phase: Phase;
  target: MentionView | null;
  /** Candidate currently under review (null once all are rejected). */
  candidate: CandidateView | null;
  candidateIndex: number;
  candidateCount: number;
  reviewedCount: number;
  done: number;
  total: number;
  comparisonsTotal: number;
  canAccept: boolean;
  canReject: boolean;
  canNewCluster: boolean;
  error: { message: string; status: number | null } | null;
}

export class SessionController {
  private phase: Phase = "connecting";
  private payload: NextPayload | null = null;
  private candidateIndex = 0;
  private reviewedCount = 0;
  private comparisonsTotal = 0;
  private done = 0;
  private total = 0;
  private lastError: { message: string; status: number | null } | null = null;
  private listeners: ((state: ViewState) => void)[] = [];

  constructor(
    private readonly api: AnnotationApi,
    private readonly sessionId: string,
  ) {}

  onChange(listener: (state: ViewState) => void): void {
    this.listeners.push(listener);
  }

  state(): ViewState {
    const candidates = this.payload?.candidates ?? [];
    const reviewing = this.phase === "reviewing";
    const candidate =
      reviewing && this.candidateIndex < candidates.length
        ? candidates[this.candidateIndex] ?? null
        : null;
    return {
      phase: this.phase,
      target: this.payload?.target ?? null,
      candidate,
      candidateIndex: this.candidateIndex,
      candidateCount: candidates.length,
      reviewedCount: this.reviewedCount,
      done: this.done,
      total: this.total,
      comparisonsTotal: this.comparisonsTotal,
      canAccept: reviewing && candidate !== null,
      canReject: reviewing && candidate !== null,
      canNewCluster: reviewing,
      error: this.lastError,
    };
  }

  private emit(): void {
    const snapshot = this.state();
    for (const listener of this.listeners) {
      listener(snapshot);
    }
  }

  private fail(cause: unknown): void {
    if (cause instanceof OfflineError) {
      this.phase = "offline";
      this.lastError = { message: cause.message, status: null };
    } else if (cause instanceof ApiError) {
      this.phase = "error";
      this.lastError = { message: cause.detail, status: cause.status };
    } else {
      this.phase = "error";
      this.lastError = { message: String(cause), status: null };
    }
    this.emit();
  }

  /** Fetch the pending target (also the retry path after any error). */
  async start(): Promise<void> {
    this.lastError = null;
    try {
      const result = await this.api.next(this.sessionId);
      if (result.status === "exhausted") {
        this.phase = "exhausted";
        this.payload = null;
      } else {
        this.phase = "reviewing";
        this.payload = result.payload;
        this.candidateIndex = 0;
        this.reviewedCount = 0;
        this.done = result.payload.progress.done;
        this.total = result.payload.progress.total;
        // resync the running effort total with the server's ledger
        this.comparisonsTotal = result.payload.progress.comparisons_so_far;
      }
      this.emit();
    } catch (cause) {
      this.fail(cause);
    }
  }

  /** Dismiss the current candidate and move to the next one. */
  reject(): void {
    const state = this.state();
    if (!state.canReject) {
      return;
    }
    this.reviewedCount += 1;
    this.candidateIndex += 1;
    this.emit();
  }

  /** Mark the current candidate coreferent with the target. */
  async accept(): Promise<void> {
    const state = this.state();
    if (!state.canAccept || !state.candidate || !state.target) {
      return;
    }
    const cost = this.reviewedCount + 1;
    try {
      await this.api.decide(this.sessionId, {
        target_id: state.target.mention_id,
        kind: "accept",
        cluster_id: state.candidate.cluster_id,
        reviewed_count: cost,
      });
      this.comparisonsTotal += cost;
      await this.start();
    } catch (cause) {
      this.fail(cause);
    }
  }

  /** No presented candidate is coreferent: open a new cluster. */
  async newCluster(): Promise<void> {
    const state = this.state();
    if (!state.canNewCluster || !state.target) {
      return;
    }
    // a no-accept decision pays for every presented candidate, even if
    // the annotator bails out before stepping through all of them
    const cost = state.candidateCount;
    try {
      await this.api.decide(this.sessionId, {
        target_id: state.target.mention_id,
        kind: "new_cluster",
        reviewed_count: cost,
      });
      this.comparisonsTotal += cost;
      await this.start();
    } catch (cause) {
      this.fail(cause);
    }
  }

  /** Re-fetch the pending target after an error or offline spell. */
  async retry(): Promise<void> {
    await this.start();
  }
}
