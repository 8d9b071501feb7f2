import { describe, expect, it } from "vitest";

import {
  PALETTES,
  columnGroups,
  disagreementMap,
  formatWer,
  kindColor,
  multialignShapeProblem,
  sortSamples,
} from "../src/viewmodel.js";
import { BEFORE_EDIT, CORPUS } from "./fixtures.js";

describe("sortSamples", () => {
  it("sorts by wer descending", () => {
    const ids = sortSamples(CORPUS.samples, "wer").map((s) => s.id);
    expect(ids).toEqual(["s1", "s2"]);
  });

  it("sorts by disagreement descending", () => {
    const ids = sortSamples(CORPUS.samples, "disagreement").map((s) => s.id);
    expect(ids).toEqual(["s1", "s2"]);
  });

  it("does not mutate its input", () => {
    const before = CORPUS.samples.map((s) => s.id);
    sortSamples(CORPUS.samples, "wer");
    expect(CORPUS.samples.map((s) => s.id)).toEqual(before);
  });

  it("treats missing metrics as lowest", () => {
    const samples = [
      { ...CORPUS.samples[0]!, id: "broken", wer: null },
      CORPUS.samples[1]!,
    ];
    const ids = sortSamples(samples, "wer").map((s) => s.id);
    expect(ids[ids.length - 1]).toBe("broken");
  });
});

describe("palettes", () => {
  it("every step kind has a color in both palettes", () => {
    for (const palette of [PALETTES.default, PALETTES.colorblind]) {
      for (const kind of [
        "correct",
        "replacement",
        "insertion",
        "deletion",
        "wildcard_absorbed",
      ] as const) {
        expect(kindColor(kind, palette)).toMatch(/^#/);
      }
    }
  });

  it("palettes actually differ", () => {
    expect(PALETTES.default.correct).not.toBe(PALETTES.colorblind.correct);
  });
});

describe("columnGroups", () => {
  it("keeps singleton groups for plain columns", () => {
    const groups = columnGroups(BEFORE_EDIT.multialign.columns);
    expect(groups).toHaveLength(4);
  });

  it("merges consecutive columns of one block", () => {
    const groups = columnGroups([
      { kind: "ref", node: 1, text: "one", segment: 0, option: 0, width: 1 },
      { kind: "ref", node: 2, text: "1", segment: 0, option: 1, width: 1 },
      { kind: "ref", node: 3, text: "x", segment: 1, option: null, width: 1 },
    ]);
    expect(groups.map((g) => g.columns)).toEqual([[0, 1], [2]]);
  });

  it("insertion slots never merge into a block group", () => {
    const groups = columnGroups([
      { kind: "ref", node: 1, text: "a", segment: 0, option: null, width: 1 },
      { kind: "insertion", node: null, text: null, segment: null, option: null, width: 2 },
      { kind: "ref", node: 2, text: "b", segment: 1, option: null, width: 1 },
    ]);
    expect(groups).toHaveLength(3);
  });
});

describe("disagreementMap", () => {
  it("filters by threshold", () => {
    const map = disagreementMap(
      [
        [3, 1.0],
        [1, 0.4],
      ],
      0.5,
    );
    expect(map.get(3)).toBe(1.0);
    expect(map.has(1)).toBe(false);
  });

  it("threshold zero keeps every listed column", () => {
    const map = disagreementMap(
      [
        [3, 1.0],
        [1, 0.4],
      ],
      0,
    );
    expect(map.size).toBe(2);
  });
});

describe("multialignShapeProblem", () => {
  it("accepts a real payload", () => {
    expect(multialignShapeProblem(BEFORE_EDIT.multialign)).toBeNull();
  });

  it("rejects missing columns", () => {
    expect(multialignShapeProblem({ rows: [] })).toMatch(/columns/);
  });

  it("rejects row and column count mismatch", () => {
    const broken = JSON.parse(JSON.stringify(BEFORE_EDIT.multialign));
    broken.rows[0].cells.pop();
    expect(multialignShapeProblem(broken)).toMatch(/cells for/);
  });

  it("rejects rows without reports", () => {
    const broken = JSON.parse(JSON.stringify(BEFORE_EDIT.multialign));
    delete broken.rows[0].report;
    expect(multialignShapeProblem(broken)).toMatch(/report/);
  });
});

describe("formatWer", () => {
  it("renders percentages and handles missing values", () => {
    expect(formatWer(0.25)).toBe("25.0%");
    expect(formatWer(null)).toBe("n/a");
  });
});
