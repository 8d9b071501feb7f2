/** DOM wiring: events in, innerHTML out. Everything interesting lives in
 * app.ts / render.ts and is covered by the unit suite. */
import { ApiClient } from "./api.js";
import * as app from "./app.js";
import {
  renderDiagnostics,
  renderGrid,
  renderHistogram,
  renderSampleList,
  renderStreaming,
  renderToast,
} from "./render.js";
import { PALETTES } from "./viewmodel.js";

const api = new ApiClient();
let state = app.initialState();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function draw(): void {
  el("samples").innerHTML = renderSampleList(state.samples, state.sortKey, state.selectedId);
  const palette = PALETTES[state.palette];

  const main = el("detail");
  if (!state.multialign) {
    main.innerHTML = '<div class="empty-state">select a sample</div>';
  } else if (state.view === "multialign") {
    main.innerHTML = renderGrid(state.multialign, palette, state.threshold);
  } else if (state.streaming) {
    main.innerHTML =
      renderStreaming(state.streaming, palette) +
      renderHistogram(state.streaming.histogram, palette);
  } else {
    main.innerHTML = '<div class="empty-state">no streaming data for this sample</div>';
  }

  const editor = el<HTMLTextAreaElement>("annotation-input");
  if (document.activeElement !== editor) {
    editor.value = state.editBuffer;
  }
  el("diagnostics").innerHTML = state.diagnostics
    ? renderDiagnostics(state.diagnostics)
    : "";
  el("toast").innerHTML = state.toast ? renderToast(state.toast) : "";
  el<HTMLButtonElement>("view-streaming").disabled = !state.streaming;
}

async function refresh(action: Promise<app.ViewState>): Promise<void> {
  try {
    state = await action;
  } catch (err) {
    state = { ...state, toast: String(err) };
  }
  draw();
}

function bind(): void {
  el("samples").addEventListener("click", (ev) => {
    const item = (ev.target as HTMLElement).closest("[data-sample]");
    if (item) {
      void refresh(app.selectSample(api, state, item.getAttribute("data-sample")!));
    }
  });
  el<HTMLSelectElement>("sort-key").addEventListener("change", (ev) => {
    state = app.setSort(state, (ev.target as HTMLSelectElement).value as "wer" | "disagreement");
    draw();
  });
  el<HTMLInputElement>("threshold").addEventListener("change", (ev) => {
    state = app.setThreshold(state, Number((ev.target as HTMLInputElement).value));
    draw();
  });
  el("palette-toggle").addEventListener("click", () => {
    state = app.togglePalette(state);
    draw();
  });
  el("view-multialign").addEventListener("click", () => {
    state = app.setView(state, "multialign");
    draw();
  });
  el("view-streaming").addEventListener("click", () => {
    state = app.setView(state, "streaming");
    draw();
  });
  el("annotation-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    const text = el<HTMLTextAreaElement>("annotation-input").value;
    void refresh(app.submitEdit(api, state, text));
  });
}

bind();
void refresh(app.loadCorpus(api, state));
