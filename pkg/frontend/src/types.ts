// Body shapes for the /v1 session API, mirroring docs/api_schema.json.

export interface Candidate {
  id: string;
  params: Record<string, number | string>;
  descriptor: string;
}

export interface CandidateSet {
  round: number;
  candidates: Candidate[];
  selected_ids: string[];
}

export interface SelectionRequest {
  round: number;
  selected_ids: string[];
  rejection_reasons?: Record<string, string>;
  want_diversity?: boolean;
}

export interface HistoryEntry {
  round: number;
  selected_ids: string[];
  rejection_reasons: Record<string, string>;
}

export interface LoopBody {
  status: "collecting" | "finalizing" | "done";
  round: number;
  current: Candidate[];
  selected_ids: string[];
  history: HistoryEntry[];
}

export interface ReportStep {
  index: number;
  description: string;
  attempts: number;
  status: "ok" | "escalated" | "not_run";
  error: string | null;
}

export interface Report {
  candidate_id: string;
  completed: boolean;
  steps: ReportStep[];
}

export interface ConversationBody {
  stage: string;
  dirty_bit: number;
  enable_increment: number;
  stage_num: number;
  stages: string[];
  max_inspection_count: number;
  remaining_inspection_count: number;
  user_vars: Record<string, string>;
}

export interface Session {
  id: string;
  prompt: string;
  n: number;
  created_at: number;
  updated_at: number;
  conversation: ConversationBody;
  loop: LoopBody;
  reports: Report[];
}

export type SessionEvent =
  | { seq: number; event: "round_opened"; round: number; candidate_ids: string[] }
  | {
      seq: number;
      event: "finalization_step";
      candidate_id: string;
      step_index: number;
      description: string;
      attempts: number;
      status: string;
    }
  | { seq: number; event: "escalation"; candidate_id: string; step_index: number; message: string }
  | { seq: number; event: "done"; snapshot_ids: string[]; completed: Record<string, boolean> };

export interface SceneTransform {
  tx: number; ty: number; tz: number;
  rx: number; ry: number; rz: number;
  sx: number; sy: number; sz: number;
}

export interface SceneObject {
  name: string;
  kind: string;
  transform: SceneTransform;
  params: Record<string, number | string>;
}

export interface SceneBinding {
  target: string;
  expr: string;
}

export interface Scene {
  schema: "scene/1";
  objects: SceneObject[];
  bindings: SceneBinding[];
}

export interface ErrorBody {
  code: string;
  message: string;
  round?: number;
}
