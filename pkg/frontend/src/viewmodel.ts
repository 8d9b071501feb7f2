/** Pure transforms from server payloads to things the renderer can draw.
 * Keeping these free of DOM access makes the whole view a function of
 * (server JSON, view state). */
import type {
  Column,
  MultiAlignPayload,
  SampleSummary,
  StepKind,
  WordCategory,
} from "./types.js";

export type SortKey = "wer" | "disagreement";
export type PaletteName = "default" | "colorblind";

export interface Palette {
  correct: string;
  replacement: string;
  insertion: string;
  deletion: string;
  wildcard: string;
  notYet: string;
}

// green/red/gray by default; the alternate palette keeps error hues
// distinguishable under red-green color blindness
export const PALETTES: Record<PaletteName, Palette> = {
  default: {
    correct: "#2e9e4f",
    replacement: "#e0a030",
    insertion: "#d64541",
    deletion: "#b03a99",
    wildcard: "#c8d1dc",
    notYet: "#9aa0a6",
  },
  colorblind: {
    correct: "#0072b2",
    replacement: "#e69f00",
    insertion: "#d55e00",
    deletion: "#cc79a7",
    wildcard: "#c8d1dc",
    notYet: "#999999",
  },
};

export function kindColor(kind: StepKind, palette: Palette): string {
  switch (kind) {
    case "correct":
      return palette.correct;
    case "replacement":
      return palette.replacement;
    case "insertion":
      return palette.insertion;
    case "deletion":
      return palette.deletion;
    case "wildcard_absorbed":
      return palette.wildcard;
  }
}

export function categoryColor(category: WordCategory, palette: Palette): string {
  switch (category) {
    case "correct":
      return palette.correct;
    case "error":
      return palette.insertion;
    case "not_yet_transcribed":
      return palette.notYet;
    case "wildcard_absorbed":
      return palette.wildcard;
  }
}

export function sortSamples(samples: SampleSummary[], key: SortKey): SampleSummary[] {
  const value = (s: SampleSummary) =>
    key === "wer" ? s.wer ?? -1 : s.max_disagreement ?? -1;
  return [...samples].sort((a, b) => value(b) - value(a) || a.id.localeCompare(b.id));
}

/** Consecutive columns of the same block segment form one display group,
 * sub-labeled by option index. */
export interface ColumnGroup {
  segment: number | null;
  columns: number[]; // indices into payload.columns
}

export function columnGroups(columns: Column[]): ColumnGroup[] {
  const groups: ColumnGroup[] = [];
  for (let i = 0; i < columns.length; i++) {
    const col = columns[i]!;
    const seg = col.kind === "insertion" ? null : col.segment;
    const last = groups[groups.length - 1];
    if (last && seg !== null && last.segment === seg) {
      last.columns.push(i);
    } else {
      groups.push({ segment: seg, columns: [i] });
    }
  }
  return groups;
}

/** Disagreement badges: column index -> fraction, filtered by threshold. */
export function disagreementMap(
  disagreements: [number, number][],
  threshold: number,
): Map<number, number> {
  const out = new Map<number, number>();
  for (const [col, fraction] of disagreements) {
    if (fraction >= threshold) {
      out.set(col, fraction);
    }
  }
  return out;
}

/** Minimal structural check so a wrong or stale payload produces a
 * banner instead of a broken grid. Returns a problem description or null. */
export function multialignShapeProblem(payload: unknown): string | null {
  const p = payload as Partial<MultiAlignPayload> | null;
  if (!p || typeof p !== "object") return "payload is not an object";
  if (!Array.isArray(p.columns)) return "payload.columns missing";
  if (!Array.isArray(p.rows)) return "payload.rows missing";
  for (const row of p.rows) {
    if (typeof row?.name !== "string") return "row without a name";
    if (!Array.isArray(row.cells)) return `row ${row?.name}: cells missing`;
    if (row.cells.length !== p.columns.length) {
      return `row ${row.name}: ${row.cells.length} cells for ${p.columns.length} columns`;
    }
    if (!row.report || typeof row.report.wer !== "number") {
      return `row ${row.name}: report missing`;
    }
  }
  return null;
}

export function formatWer(wer: number | null): string {
  return wer === null ? "n/a" : (wer * 100).toFixed(1) + "%";
}
