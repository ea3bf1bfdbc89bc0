/** Wire types mirroring the server's published JSON schemas. */

export type Phase = "awaiting_answer" | "ready_to_step" | "stopped";

export type StopReason =
  | "gradient_tolerance"
  | "dm_satisfied"
  | "iteration_cap"
  | "empty_localization"
  | null;

export interface QuestionDoc {
  kind: string;
  s: number[];
  eps: number[];
  probe_points: number[][];
}

export interface TraceLineDoc {
  k: number;
  w: number[];
  x: number[];
  y: number[];
  s: number[];
  g: number[] | null;
  value: number | null;
  u: number[] | null;
}

export interface BoundRowDoc {
  row: number;
  delta_ratio: number;
  robust_feasible: boolean;
  hoeffding: number;
  binomial: number | null;
}

export interface ReportDoc {
  rows: BoundRowDoc[];
}

export interface HistoryPointDoc {
  k: number;
  objective: number;
  value: number | null;
}

export interface SessionDoc {
  schema: number;
  id: string;
  mode: "interactive" | "simulated";
  phase: Phase;
  stop_reason: StopReason;
  created: number;
  updated: number;
  problem: unknown;
  uncertainty: { rows: Record<string, { delta: number[]; N: number }>; symmetric: boolean };
  config: Record<string, unknown>;
  utility: unknown;
  question: QuestionDoc | null;
  pending_answer: unknown;
  current: {
    w: number[];
    x: number[];
    s: number[];
    y: number[];
    objective: number;
    iteration: number;
  };
  y0: number[];
  trace: TraceLineDoc[];
  history: HistoryPointDoc[];
  report: ReportDoc | null;
  warnings: string[];
  row_labels: string[];
}

export interface ApiErrorDoc {
  status: number;
  kind: string;
  detail: string;
}

export interface CreateSessionBody {
  problem?: unknown;
  uncertainty?: unknown;
  utility?: unknown;
  config?: Record<string, unknown>;
  mode?: "interactive" | "simulated";
  start_weight?: number[];
  fork?: { session_id: string; iteration: number };
}

export type AnswerBody =
  | { priorities: number[]; idempotency_key?: string }
  | { g: number[]; satisfied?: boolean; idempotency_key?: string }
  | { satisfied: true; idempotency_key?: string };
