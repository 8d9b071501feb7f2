"""Command-line interface: one-off alignment, corpus evaluation, streaming
evaluation, and the dashboard server."""
from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .align import StepKind, align, flatten
from .annotation import AnnotationError, EvalMode, parse_annotation, tokenize
from .corpus import load_corpus
from .metrics import EvalConfig, aggregate, evaluate_sample
from .schemas import validate
from .streaming import (
    RemapError,
    history_from_events,
    load_timed_words,
    prescription_histogram,
    remap_history,
    streaming_diagram,
)
from .svg import render_histogram, render_streaming_diagram

STEP_COLORS = {
    StepKind.CORRECT: "green",
    StepKind.REPLACEMENT: "yellow",
    StepKind.INSERTION: "red",
    StepKind.DELETION: "red",
    StepKind.WILDCARD_ABSORBED: "cyan",
}
STEP_MARKS = {
    StepKind.CORRECT: "=",
    StepKind.REPLACEMENT: "~",
    StepKind.INSERTION: "+",
    StepKind.DELETION: "-",
    StepKind.WILDCARD_ABSORBED: "*",
}


def _use_color() -> bool:
    return not os.environ.get("MWER_NO_COLOR")


def _paint(text: str, color: str) -> str:
    return click.style(text, fg=color) if _use_color() else text


def _dump(data) -> str:
    return json.dumps(data, ensure_ascii=False, sort_keys=True)


class InsertionCap(click.ParamType):
    name = "cap"

    def convert(self, value, param, ctx):
        if isinstance(value, int) or value is None:
            return value
        if str(value).lower() == "none":
            return None
        try:
            cap = int(value)
        except ValueError:
            self.fail(f"{value!r} is not an integer or 'none'", param, ctx)
        if cap < 1:
            self.fail("insertion cap must be positive", param, ctx)
        return cap


def _config(mode: str, insertion_cap) -> EvalConfig:
    return EvalConfig(mode=EvalMode(mode), insertion_cap=insertion_cap)


mode_option = click.option(
    "--mode",
    type=click.Choice(["strict", "permissive"]),
    default="permissive",
    show_default=True,
)
cap_option = click.option(
    "--insertion-cap",
    type=InsertionCap(),
    default=4,
    show_default=True,
    help="cap for consecutive insertion runs, or 'none'",
)


@click.group()
def main():
    """Multi-reference speech recognition evaluation toolkit."""


@main.command("align")
@click.option("--ref", required=True, help="annotation markup")
@click.option("--hyp", required=True, help="hypothesis text")
@mode_option
@cap_option
@click.option("--json", "as_json", is_flag=True, help="print alignment JSON")
def cmd_align(ref, hyp, mode, insertion_cap, as_json):
    """Align one hypothesis against one annotation."""
    config = _config(mode, insertion_cap)
    try:
        annotation = parse_annotation(ref)
        from .annotation import apply_mode

        flat = flatten(apply_mode(annotation, config.mode))
    except AnnotationError as exc:
        click.echo(f"annotation error: {exc}", err=True)
        sys.exit(2)
    alignment = align(flat, tokenize(hyp, config.tokenizer), config.cost)
    report = evaluate_sample(annotation, hyp, config)

    if as_json:
        payload = alignment.to_json()
        validate(payload, "alignment")
        click.echo(_dump(payload))
        return

    for step in alignment.steps:
        mark = STEP_MARKS[step.kind]
        color = STEP_COLORS[step.kind]
        left = step.ref_token.text if step.ref_token else ""
        right = step.hyp_token.text if step.hyp_token else ""
        if step.kind == StepKind.CORRECT:
            line = f"{mark} {left}"
        elif step.kind == StepKind.REPLACEMENT:
            line = f"{mark} {left} -> {right}"
        elif step.kind == StepKind.DELETION:
            line = f"{mark} {left}"
        else:
            line = f"{mark} {right}"
        click.echo(_paint(line, color))
    click.echo(
        f"wer {report.wer:.4f}  wer_relaxed {report.wer_relaxed:.4f}  "
        f"cer {report.cer:.4f}  "
        f"({report.counts.errors()} errors / {report.counts.ref_len} ref tokens)"
    )


@main.command("eval")
@click.argument("corpus", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("eval_report"), show_default=True)
@mode_option
@cap_option
@click.option("--weighting", type=click.Choice(["micro", "macro"]), default="micro", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def cmd_eval(corpus, out, mode, insertion_cap, weighting, seed):
    """Evaluate every hypothesis of every corpus record; write per-sample
    JSONL and an aggregate JSON with a bootstrap confidence interval."""
    config = _config(mode, insertion_cap)
    records = load_corpus(corpus)
    out.mkdir(parents=True, exist_ok=True)

    per_sample_lines = []
    reports = []
    failures = 0
    for record in records:
        for name in sorted(record.hypotheses):
            sample_id = f"{record.id}/{name}"
            try:
                annotation = parse_annotation(record.annotation)
                report = evaluate_sample(annotation, record.hypotheses[name], config)
            except ValueError as exc:
                failures += 1
                line = {"id": sample_id, "error": str(exc)}
            else:
                reports.append(report)
                line = {"id": sample_id, "report": report.to_json()}
            validate(line, "per_sample_line")
            per_sample_lines.append(_dump(line))

    (out / "per_sample.jsonl").write_text(
        "".join(line + "\n" for line in per_sample_lines), encoding="utf-8"
    )

    if reports:
        agg = aggregate(reports, weighting, seed=seed)
        payload = {
            "v": 1,
            "weighting": weighting,
            "seed": seed,
            "n_samples": len(reports),
            "n_failed": failures,
            "report": agg.to_json(),
        }
        validate(payload, "aggregate_report")
        (out / "aggregate.json").write_text(
            _dump(payload) + "\n", encoding="utf-8"
        )
        click.echo(
            f"{len(reports)} samples  wer {agg.wer:.4f}  "
            f"wer_relaxed {agg.wer_relaxed:.4f}  cer {agg.cer:.4f}  "
            f"ci [{agg.ci[0]:.4f}, {agg.ci[1]:.4f}]"
        )
    if failures:
        click.echo(f"{failures} records failed", err=True)
        sys.exit(1)


@main.command("stream-eval")
@click.argument("history", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--timed-words", "timed_words_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--annotation", "annotation_text", help="annotation markup")
@click.option("--annotation-file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("stream_report"), show_default=True)
@click.option("--remap", is_flag=True, help="remap a flood-paced history to real-time")
@click.option("--rows", type=int, default=12, show_default=True)
@click.option("--bins", type=float, default=0.25, show_default=True, help="histogram bin width, seconds")
@mode_option
@cap_option
def cmd_stream_eval(
    history, timed_words_path, annotation_text, annotation_file,
    out, remap, rows, bins, mode, insertion_cap,
):
    """Streaming diagram and prescription histogram from a session history."""
    if not annotation_text and not annotation_file:
        raise click.UsageError("need --annotation or --annotation-file")
    if annotation_file:
        annotation_text = Path(annotation_file).read_text(encoding="utf-8").strip()
    config = _config(mode, insertion_cap)

    try:
        annotation = parse_annotation(annotation_text)
    except AnnotationError as exc:
        click.echo(f"annotation error: {exc}", err=True)
        sys.exit(2)
    timed = load_timed_words(
        json.loads(Path(timed_words_path).read_text(encoding="utf-8"))
    )
    events = [
        json.loads(line)
        for line in history.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    session = history_from_events(events)
    if remap:
        try:
            session = remap_history(session)
        except RemapError as exc:
            click.echo(f"inconsistent history: {exc}", err=True)
            sys.exit(2)

    diagram = streaming_diagram(
        annotation,
        timed,
        list(session.inputs),
        list(session.outputs),
        n_rows=rows,
        config=config,
    )
    histogram = prescription_histogram(diagram, bin_width=bins)

    out.mkdir(parents=True, exist_ok=True)
    rows_payload = [r.to_json() for r in diagram]
    hist_payload = histogram.to_json()
    validate(rows_payload, "streaming_rows")
    validate(hist_payload, "histogram")
    (out / "rows.json").write_text(_dump(rows_payload) + "\n", encoding="utf-8")
    (out / "histogram.json").write_text(_dump(hist_payload) + "\n", encoding="utf-8")
    (out / "diagram.svg").write_text(render_streaming_diagram(diagram), encoding="utf-8")
    (out / "histogram.svg").write_text(render_histogram(histogram), encoding="utf-8")
    click.echo(f"wrote {out}/rows.json, histogram.json, diagram.svg, histogram.svg")


@main.command("serve")
@click.argument("corpus", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--port", type=int, default=8008, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--static-dir", type=click.Path(file_okay=False, path_type=Path), help="dashboard bundle directory")
def cmd_serve(corpus, port, host, static_dir):
    """Serve the review dashboard and its JSON API over a corpus file."""
    import uvicorn

    from .service import create_app

    app = create_app(corpus, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
