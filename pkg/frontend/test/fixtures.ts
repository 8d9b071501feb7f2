/** Payloads captured from the evaluation server over the fixture corpus:
 * "the {quick|} brown fox" with hypotheses ending in "fax". The AFTER
 * variant is the same sample once "{fox|fax}" was added. */
import type {
  CorpusResponse,
  MultiAlignResponse,
  StreamingPayload,
} from "../src/types.js";

export const BEFORE_EDIT: MultiAlignResponse = {
  id: "s1",
  annotation: "the {quick|} brown fox",
  multialign: {
    columns: [
      { kind: "ref", node: 1, text: "the", segment: 0, option: null, width: 1 },
      { kind: "ref", node: 2, text: "quick", segment: 1, option: 0, width: 1 },
      { kind: "ref", node: 3, text: "brown", segment: 2, option: null, width: 1 },
      { kind: "ref", node: 4, text: "fox", segment: 3, option: null, width: 1 },
    ],
    rows: [
      {
        name: "ctc",
        cells: [
          { kind: "correct", hyp: ["the"], ref: "the", option: null, char_errors: 0 },
          { kind: "correct", hyp: ["quick"], ref: "quick", option: 0, char_errors: 0 },
          { kind: "correct", hyp: ["brown"], ref: "brown", option: null, char_errors: 0 },
          { kind: "replacement", hyp: ["fax"], ref: "fox", option: null, char_errors: 1 },
        ],
        report: {
          wer: 0.25, wer_relaxed: 0.25, cer: 0.0625, mode: "permissive",
          counts: { correct: 3, replacements: 1, deletions: 0, insertions_raw: 0, insertions_capped: 0, wildcard_absorbed: 0, ref_len: 4 },
        },
      },
      {
        name: "whisper",
        cells: [
          { kind: "correct", hyp: ["the"], ref: "the", option: null, char_errors: 0 },
          null,
          { kind: "correct", hyp: ["brown"], ref: "brown", option: null, char_errors: 0 },
          { kind: "replacement", hyp: ["fax"], ref: "fox", option: null, char_errors: 1 },
        ],
        report: {
          wer: 0.3333333333333333, wer_relaxed: 0.3333333333333333, cer: 0.09090909090909091, mode: "permissive",
          counts: { correct: 2, replacements: 1, deletions: 0, insertions_raw: 0, insertions_capped: 0, wildcard_absorbed: 0, ref_len: 3 },
        },
      },
    ],
  },
  disagreements: [[3, 1.0]],
};

export const AFTER_EDIT: MultiAlignResponse = {
  id: "s1",
  annotation: "the {quick|} brown {fox|fax}",
  multialign: {
    columns: [
      { kind: "ref", node: 1, text: "the", segment: 0, option: null, width: 1 },
      { kind: "ref", node: 2, text: "quick", segment: 1, option: 0, width: 1 },
      { kind: "ref", node: 3, text: "brown", segment: 2, option: null, width: 1 },
      { kind: "ref", node: 5, text: "fax", segment: 3, option: 1, width: 1 },
    ],
    rows: [
      {
        name: "ctc",
        cells: [
          { kind: "correct", hyp: ["the"], ref: "the", option: null, char_errors: 0 },
          { kind: "correct", hyp: ["quick"], ref: "quick", option: 0, char_errors: 0 },
          { kind: "correct", hyp: ["brown"], ref: "brown", option: null, char_errors: 0 },
          { kind: "correct", hyp: ["fax"], ref: "fax", option: 1, char_errors: 0 },
        ],
        report: {
          wer: 0, wer_relaxed: 0, cer: 0, mode: "permissive",
          counts: { correct: 4, replacements: 0, deletions: 0, insertions_raw: 0, insertions_capped: 0, wildcard_absorbed: 0, ref_len: 4 },
        },
      },
      {
        name: "whisper",
        cells: [
          { kind: "correct", hyp: ["the"], ref: "the", option: null, char_errors: 0 },
          null,
          { kind: "correct", hyp: ["brown"], ref: "brown", option: null, char_errors: 0 },
          { kind: "correct", hyp: ["fax"], ref: "fax", option: 1, char_errors: 0 },
        ],
        report: {
          wer: 0, wer_relaxed: 0, cer: 0, mode: "permissive",
          counts: { correct: 3, replacements: 0, deletions: 0, insertions_raw: 0, insertions_capped: 0, wildcard_absorbed: 0, ref_len: 3 },
        },
      },
    ],
  },
  disagreements: [],
};

export const CORPUS: CorpusResponse = {
  v: 1,
  samples: [
    {
      id: "s1",
      annotation: "the {quick|} brown fox",
      hypotheses: ["ctc", "whisper"],
      wer: 0.3333333333333333,
      max_disagreement: 1.0,
      has_streaming: false,
    },
    {
      id: "s2",
      annotation: "a <*> b",
      hypotheses: ["ctc"],
      wer: 0.0,
      max_disagreement: 0.0,
      has_streaming: true,
    },
  ],
};

export const STREAMING: StreamingPayload = {
  id: "s2",
  rows: [
    {
      eval_time: 1.0,
      audio_sent: 1.0,
      steps: [
        { kind: "correct", category: "correct", ref: "a", hyp: "a", center: 0.5, start: 0, end: 1 },
        { kind: "deletion", category: "not_yet_transcribed", ref: "b", hyp: null, center: 1.5, start: 1, end: 2 },
      ],
      counts: { correct: 1, replacements: 0, deletions: 0, insertions_raw: 0, insertions_capped: 0, wildcard_absorbed: 0, ref_len: 1 },
    },
    {
      eval_time: 2.0,
      audio_sent: 2.0,
      steps: [
        { kind: "correct", category: "correct", ref: "a", hyp: "a", center: 0.5, start: 0, end: 1 },
        { kind: "insertion", category: "error", ref: null, hyp: "oops", center: 0.5 },
        { kind: "correct", category: "correct", ref: "b", hyp: "b", center: 1.5, start: 1, end: 2 },
      ],
      counts: { correct: 2, replacements: 0, deletions: 0, insertions_raw: 1, insertions_capped: 1, wildcard_absorbed: 0, ref_len: 2 },
    },
  ],
  histogram: {
    bin_edges: [-1, -0.5, 0, 0.5, 1],
    correct: [0, 1, 2, 1],
    error: [0, 0, 1, 0],
    not_yet: [1, 0, 0, 0],
  },
};
