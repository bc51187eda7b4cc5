/**
 * Wire types for the annotation service JSON API.
 */

/** One mention as rendered by the service: sentence plus trigger span. */
export interface MentionView {
  mention_id: string;
  doc_id: string;
  topic_id: string;
  sentence_id: number;
  sentence_tokens: string[];
  trigger_start: number;
  trigger_token_count: number;
  trigger_text: string;
}

/** One ranked candidate cluster with its member mentions. */
export interface CandidateView {
  cluster_id: string;
  score: number;
  rank: number;
  mentions: MentionView[];
}

export interface Progress {
  done: number;
  total: number;
  comparisons_so_far: number;
}

/** Response of GET /sessions/{id}/next (when a target is pending). */
export interface NextPayload {
  session_id: string;
  target: MentionView;
  candidates: CandidateView[];
  progress: Progress;
}

export type DecisionKind = "accept" | "new_cluster";

export interface DecisionBody {
  target_id: string;
  kind: DecisionKind;
  cluster_id?: string;
  reviewed_count: number;
}

export interface DecisionResult {
  applied: boolean;
  cluster_id: string;
  done: number;
  total: number;
}

export interface SessionSummary {
  session_id: string;
  done: number;
  total: number;
}

export interface CreateSessionBody {
  corpus_path?: string;
  corpus?: unknown[];
  scorer?: string;
  k?: number;
  lambda?: number;
  seed?: number;
}

export interface CreateSessionResult {
  session_id: string;
  total: number;
}

export interface PerTargetRow {
  target_id: string;
  kind: DecisionKind;
  cluster_id: string;
  presented_count: number;
  comparisons: number;
  hit_rank: number | null;
  had_coreferent_in_store: boolean | null;
}

export interface MetricsPayload {
  session_id: string;
  done: number;
  total: number;
  comparisons_total: number;
  recall: number | null;
  per_target: PerTargetRow[];
}

export interface ClusterExport {
  cluster_id: string;
  mention_ids: string[];
}

export interface ExportPayload {
  session_id: string;
  topics: { topic_id: string; clusters: ClusterExport[] }[];
}
