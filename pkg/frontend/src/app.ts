/** View state and the actions that evolve it. The state is the single
 * source of truth for the UI; every action returns a new state, so the
 * page can always be re-rendered from (state, last payloads) alone.
 *
 * Annotation edits are never applied optimistically: the buffer and the
 * displayed annotation only converge after the server confirms the save.
 */
import { ApiClient } from "./api.js";
import type {
  CorpusResponse,
  EditDiagnostics,
  MultiAlignResponse,
  StreamingPayload,
} from "./types.js";
import type { PaletteName, SortKey } from "./viewmodel.js";

export interface ViewState {
  samples: CorpusResponse["samples"];
  sortKey: SortKey;
  selectedId: string | null;
  view: "multialign" | "streaming";
  threshold: number;
  palette: PaletteName;
  multialign: MultiAlignResponse | null;
  streaming: StreamingPayload | null;
  editBuffer: string;
  diagnostics: EditDiagnostics | null;
  toast: string | null;
}

export function initialState(): ViewState {
  return {
    samples: [],
    sortKey: "wer",
    selectedId: null,
    view: "multialign",
    threshold: 0.5,
    palette: "default",
    multialign: null,
    streaming: null,
    editBuffer: "",
    diagnostics: null,
    toast: null,
  };
}

export async function loadCorpus(api: ApiClient, state: ViewState): Promise<ViewState> {
  const corpus = await api.corpus();
  return { ...state, samples: corpus.samples };
}

export async function selectSample(
  api: ApiClient,
  state: ViewState,
  id: string,
): Promise<ViewState> {
  const multialign = await api.multialign(id);
  const summary = state.samples.find((s) => s.id === id);
  let streaming: StreamingPayload | null = null;
  if (summary?.has_streaming) {
    try {
      streaming = await api.streaming(id);
    } catch {
      streaming = null; // streaming view shows its empty state
    }
  }
  return {
    ...state,
    selectedId: id,
    multialign,
    streaming,
    editBuffer: multialign.annotation,
    diagnostics: null,
    toast: null,
  };
}

/** POST the edited annotation. On parse rejection the diagnostics are
 * shown inline and the buffer is kept for fixing; on success the
 * multialign payload is re-fetched so recomputed cells replace the old
 * ones. Transport failures keep the buffer and surface a toast. */
export async function submitEdit(
  api: ApiClient,
  state: ViewState,
  text: string,
): Promise<ViewState> {
  if (state.selectedId === null) {
    return state;
  }
  let outcome;
  try {
    outcome = await api.saveAnnotation(state.selectedId, text);
  } catch (err) {
    return {
      ...state,
      editBuffer: text,
      toast: `could not reach the server: ${String(err)}`,
    };
  }
  if (!outcome.ok) {
    return {
      ...state,
      editBuffer: text,
      diagnostics: outcome.diagnostics,
      toast: null,
    };
  }
  const refreshed = await api.multialign(state.selectedId);
  const corpus = await api.corpus();
  return {
    ...state,
    samples: corpus.samples,
    multialign: refreshed,
    editBuffer: refreshed.annotation,
    diagnostics: null,
    toast: null,
  };
}

export function setSort(state: ViewState, sortKey: SortKey): ViewState {
  return { ...state, sortKey };
}

export function setThreshold(state: ViewState, threshold: number): ViewState {
  return { ...state, threshold };
}

export function togglePalette(state: ViewState): ViewState {
  return {
    ...state,
    palette: state.palette === "default" ? "colorblind" : "default",
  };
}

export function setView(state: ViewState, view: "multialign" | "streaming"): ViewState {
  return { ...state, view };
}
