/** Server payload types, mirroring the published JSON schemas. */

export type StepKind =
  | "correct"
  | "replacement"
  | "insertion"
  | "deletion"
  | "wildcard_absorbed";

export type WordCategory =
  | "correct"
  | "error"
  | "not_yet_transcribed"
  | "wildcard_absorbed";

export interface ErrorCounts {
  correct: number;
  replacements: number;
  deletions: number;
  insertions_raw: number;
  insertions_capped: number;
  wildcard_absorbed: number;
  ref_len: number;
}

export interface MetricReport {
  wer: number;
  wer_relaxed: number;
  cer: number;
  mode: string;
  counts: ErrorCounts;
}

export interface Column {
  kind: "ref" | "wildcard" | "insertion";
  node: number | null;
  text: string | null;
  segment: number | null;
  option: number | null;
  width: number;
}

export interface Cell {
  kind: StepKind;
  hyp: string[];
  ref: string | null;
  option: number | null;
  char_errors: number;
}

export interface MultiAlignRow {
  name: string;
  cells: (Cell | null)[];
  report: MetricReport;
}

export interface MultiAlignPayload {
  columns: Column[];
  rows: MultiAlignRow[];
}

export interface MultiAlignResponse {
  id: string;
  annotation: string;
  multialign: MultiAlignPayload;
  disagreements: [number, number][];
}

export interface SampleSummary {
  id: string;
  annotation: string;
  hypotheses: string[];
  wer: number | null;
  max_disagreement: number | null;
  has_streaming: boolean;
}

export interface CorpusResponse {
  v: number;
  samples: SampleSummary[];
}

export interface RowStep {
  kind: StepKind;
  category: WordCategory;
  ref: string | null;
  hyp: string | null;
  center: number | null;
  start?: number | null;
  end?: number | null;
}

export interface StreamingRow {
  eval_time: number;
  audio_sent: number;
  steps: RowStep[];
  counts: ErrorCounts;
}

export interface Histogram {
  bin_edges: number[];
  correct: number[];
  error: number[];
  not_yet: number[];
}

export interface StreamingPayload {
  id: string;
  rows: StreamingRow[];
  histogram: Histogram;
}

export interface EditDiagnostics {
  error: string;
  message: string;
  offset: number | null;
  span: string;
}

export type EditOutcome =
  | { ok: true; annotation: string }
  | { ok: false; diagnostics: EditDiagnostics };
