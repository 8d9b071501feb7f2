/** Thin client for the evaluation server. All scores come from the
 * server; the browser never computes alignments itself. */
import type {
  CorpusResponse,
  EditOutcome,
  MultiAlignResponse,
  StreamingPayload,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(private fetcher: FetchLike = (u, i) => fetch(u, i)) {}

  private async getJson<T>(url: string): Promise<T> {
    const resp = await this.fetcher(url);
    if (!resp.ok) {
      throw new ApiError(resp.status, `${url}: HTTP ${resp.status}`);
    }
    return (await resp.json()) as T;
  }

  corpus(): Promise<CorpusResponse> {
    return this.getJson("/api/corpus");
  }

  multialign(id: string): Promise<MultiAlignResponse> {
    return this.getJson(`/api/sample/${encodeURIComponent(id)}/multialign`);
  }

  streaming(id: string, rows = 12): Promise<StreamingPayload> {
    return this.getJson(`/api/sample/${encodeURIComponent(id)}/streaming?rows=${rows}`);
  }

  /** Resolves with the parse outcome; rejects only on transport failure
   * or unexpected server errors. */
  async saveAnnotation(id: string, text: string): Promise<EditOutcome> {
    const resp = await this.fetcher(
      `/api/sample/${encodeURIComponent(id)}/annotation`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ text }),
      },
    );
    if (resp.status === 400) {
      const body = await resp.json();
      return { ok: false, diagnostics: body.detail };
    }
    if (!resp.ok) {
      throw new ApiError(resp.status, `annotation save failed: HTTP ${resp.status}`);
    }
    const body = await resp.json();
    return { ok: true, annotation: body.annotation };
  }
}
