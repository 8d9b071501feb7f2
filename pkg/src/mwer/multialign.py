"""Side-by-side alignment of several hypotheses against one annotation.

Each hypothesis is aligned independently, then the rows are anchored to a
shared spine of reference columns (the union of reference nodes any row
used, in flat-view order) with insertion slots between them. Columns where
many models disagree with the annotation are the dataset-validation
signal: a cluster of "errors" usually means a missing option.
"""
from __future__ import annotations

from dataclasses import dataclass

from .align import Alignment, StepKind, flatten, levenshtein
from .annotation import Annotation, apply_mode, tokenize
from .metrics import EvalConfig, MetricReport, evaluate_tokens


@dataclass(frozen=True)
class Column:
    kind: str  # "ref" | "wildcard" | "insertion"
    node_id: int | None
    text: str | None
    segment_index: int | None
    option_index: int | None
    width: int = 1

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "node": self.node_id,
            "text": self.text,
            "segment": self.segment_index,
            "option": self.option_index,
            "width": self.width,
        }


@dataclass(frozen=True)
class Cell:
    kind: StepKind
    hyp: tuple[str, ...]
    ref: str | None
    option_index: int | None
    char_errors: int

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "hyp": list(self.hyp),
            "ref": self.ref,
            "option": self.option_index,
            "char_errors": self.char_errors,
        }


@dataclass(frozen=True)
class MultiAlignmentRow:
    name: str
    cells: tuple[Cell | None, ...]
    report: MetricReport
    alignment: Alignment

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "cells": [c.to_json() if c else None for c in self.cells],
            "report": self.report.to_json(),
        }


@dataclass(frozen=True)
class MultiAlignment:
    columns: tuple[Column, ...]
    rows: tuple[MultiAlignmentRow, ...]

    def to_json(self) -> dict:
        return {
            "columns": [c.to_json() for c in self.columns],
            "rows": [r.to_json() for r in self.rows],
        }


def _row_placement(alignment: Alignment):
    """Bucket a row's steps: ref node -> step, wildcard node -> absorbed
    texts, (anchor node -> insertion run texts)."""
    by_node: dict[int, object] = {}
    absorbed: dict[int, list[str]] = {}
    inserts: dict[int, list[str]] = {}
    anchor = 0
    for step in alignment.steps:
        if step.kind == StepKind.INSERTION:
            inserts.setdefault(anchor, []).append(step.hyp_token.text)
        elif step.kind == StepKind.WILDCARD_ABSORBED:
            absorbed.setdefault(step.ref_node_id, []).append(step.hyp_token.text)
            anchor = step.ref_node_id
        else:
            by_node[step.ref_node_id] = step
            anchor = step.ref_node_id
    return by_node, absorbed, inserts


def multi_align(
    annotation: Annotation,
    hypotheses: list[tuple[str, str]],
    config: EvalConfig | None = None,
) -> MultiAlignment:
    if not hypotheses:
        raise ValueError("need at least one hypothesis")
    config = config or EvalConfig()
    flat = flatten(apply_mode(annotation, config.mode))

    names = []
    placements = []
    reports = []
    alignments = []
    for name, text in hypotheses:
        tokens = tokenize(text, config.tokenizer)
        report, alignment = evaluate_tokens(flat, tokens, config)
        names.append(name)
        reports.append(report)
        alignments.append(alignment)
        placements.append(_row_placement(alignment))

    used_nodes = sorted(
        {nid for by_node, absorbed, _ in placements for nid in (*by_node, *absorbed)}
    )
    ins_widths: dict[int, int] = {}
    wild_widths: dict[int, int] = {}
    for by_node, absorbed, inserts in placements:
        for anchor, run in inserts.items():
            ins_widths[anchor] = max(ins_widths.get(anchor, 0), len(run))
        for nid, run in absorbed.items():
            wild_widths[nid] = max(wild_widths.get(nid, 0), len(run))

    # spine: ref columns in node order, each insertion slot right after its
    # anchoring column (anchor 0 = leading insertions, before everything)
    keyed: list[tuple[tuple[int, int], Column]] = []
    for nid in used_nodes:
        node = flat.nodes[nid]
        if nid in wild_widths:
            col = Column("wildcard", nid, None, node.segment_index, None, wild_widths[nid])
        else:
            col = Column("ref", nid, node.text, node.segment_index, node.option_index)
        keyed.append(((nid, 0), col))
    for anchor, width in ins_widths.items():
        keyed.append(((anchor, 1), Column("insertion", None, None, None, None, width)))
    keyed.sort(key=lambda kv: kv[0])
    columns = tuple(col for _, col in keyed)
    keys = [key for key, _ in keyed]

    rows = []
    for name, report, alignment, (by_node, absorbed, inserts) in zip(
        names, reports, alignments, placements
    ):
        cells: list[Cell | None] = []
        for key, col in zip(keys, columns):
            if col.kind == "insertion":
                run = inserts.get(key[0])
                cells.append(
                    Cell(StepKind.INSERTION, tuple(run), None, None, sum(map(len, run)))
                    if run
                    else None
                )
            elif col.kind == "wildcard":
                run = absorbed.get(col.node_id)
                cells.append(
                    Cell(StepKind.WILDCARD_ABSORBED, tuple(run), None, None, 0)
                    if run
                    else None
                )
            else:
                step = by_node.get(col.node_id)
                if step is None:
                    cells.append(None)
                elif step.kind == StepKind.DELETION:
                    cells.append(
                        Cell(step.kind, (), step.ref_token.text, col.option_index, len(step.ref_token.text))
                    )
                else:
                    chars = (
                        levenshtein(step.ref_token.text, step.hyp_token.text)
                        if step.kind == StepKind.REPLACEMENT
                        else 0
                    )
                    cells.append(
                        Cell(step.kind, (step.hyp_token.text,), step.ref_token.text, col.option_index, chars)
                    )
        rows.append(MultiAlignmentRow(name, tuple(cells), report, alignment))

    return MultiAlignment(columns=columns, rows=tuple(rows))


def disagreement_report(ma: MultiAlignment, threshold: float = 0.5) -> list[tuple[int, float]]:
    """Columns where at least ``threshold`` of the rows are in error,
    sorted by error fraction descending. High-disagreement columns are
    where the annotation itself deserves a second look."""
    n_rows = len(ma.rows)
    out = []
    for idx, col in enumerate(ma.columns):
        if col.kind == "wildcard":
            continue
        errors = 0
        for row in ma.rows:
            cell = row.cells[idx]
            if cell is None:
                continue
            if col.kind == "insertion" or cell.kind in (StepKind.REPLACEMENT, StepKind.DELETION):
                errors += 1
        fraction = errors / n_rows
        if errors and fraction >= threshold:
            out.append((idx, fraction))
    out.sort(key=lambda cf: (-cf[1], cf[0]))
    return out
