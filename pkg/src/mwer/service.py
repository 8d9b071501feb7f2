"""Dashboard server: read-only evaluation payloads plus the
annotation-edit loop that writes corrected annotations back to the corpus
and recomputes alignments on the spot.

Corpora are desk-scale (hundreds of samples), so recomputation is
synchronous; reads are served from a per-sample cache and writes to the
corpus file are serialized behind a lock.
"""
from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .annotation import AnnotationError, EvalMode, parse_annotation
from .corpus import CorpusError, load_corpus, load_history_events, save_corpus
from .metrics import EvalConfig
from .multialign import disagreement_report, multi_align
from .schemas import validate
from .streaming import (
    EmptyInput,
    history_from_events,
    load_timed_words,
    prescription_histogram,
    streaming_diagram,
)


class SampleSummary(BaseModel):
    id: str
    annotation: str
    hypotheses: list[str]
    wer: float | None = None
    max_disagreement: float | None = None
    has_streaming: bool = False


class CorpusResponse(BaseModel):
    v: int = 1
    samples: list[SampleSummary]


class MultiAlignResponse(BaseModel):
    id: str
    annotation: str
    multialign: dict
    disagreements: list[tuple[int, float]]


class StreamingResponse(BaseModel):
    id: str
    rows: list[dict]
    histogram: dict


class AnnotationEdit(BaseModel):
    text: str


class EditResult(BaseModel):
    ok: bool
    id: str
    annotation: str


class EditDiagnostics(BaseModel):
    error: str
    message: str
    offset: int | None = None
    span: str = ""


def create_app(
    corpus_path: Path | str,
    static_dir: Path | str | None = None,
    config: EvalConfig | None = None,
    disagreement_threshold: float = 0.5,
) -> FastAPI:
    corpus_path = Path(corpus_path)
    config = config or EvalConfig()
    app = FastAPI(title="mwer dashboard")

    state = {
        "records": load_corpus(corpus_path),
        "lock": threading.Lock(),
        "cache": {},
    }

    def record_for(sample_id: str):
        for record in state["records"]:
            if record.id == sample_id:
                return record
        raise HTTPException(status_code=404, detail=f"unknown sample id {sample_id!r}")

    def multialign_payload(record):
        cached = state["cache"].get(record.id)
        if cached is not None:
            return cached
        annotation = parse_annotation(record.annotation)
        hypotheses = [(name, record.hypotheses[name]) for name in sorted(record.hypotheses)]
        ma = multi_align(annotation, hypotheses, config)
        payload = ma.to_json()
        validate(payload, "multialign")
        result = {
            "payload": payload,
            "disagreements": disagreement_report(ma, disagreement_threshold),
            "wer": max((row.report.wer for row in ma.rows), default=None),
        }
        state["cache"][record.id] = result
        return result

    @app.get("/api/corpus", response_model=CorpusResponse)
    def get_corpus():
        samples = []
        for record in state["records"]:
            wer = None
            max_disagreement = None
            if record.hypotheses:
                try:
                    computed = multialign_payload(record)
                except (AnnotationError, ValueError):
                    computed = None
                if computed:
                    wer = computed["wer"]
                    fractions = [f for _, f in computed["disagreements"]]
                    max_disagreement = max(fractions) if fractions else 0.0
            samples.append(
                SampleSummary(
                    id=record.id,
                    annotation=record.annotation,
                    hypotheses=sorted(record.hypotheses),
                    wer=wer,
                    max_disagreement=max_disagreement,
                    has_streaming=record.session_history is not None
                    and record.timed_words is not None,
                )
            )
        return CorpusResponse(samples=samples)

    @app.get("/api/sample/{sample_id}/multialign", response_model=MultiAlignResponse)
    def get_multialign(sample_id: str):
        record = record_for(sample_id)
        try:
            computed = multialign_payload(record)
        except AnnotationError as exc:
            raise HTTPException(status_code=500, detail=f"stored annotation broken: {exc}")
        return MultiAlignResponse(
            id=record.id,
            annotation=record.annotation,
            multialign=computed["payload"],
            disagreements=computed["disagreements"],
        )

    @app.get("/api/sample/{sample_id}/streaming", response_model=StreamingResponse)
    def get_streaming(sample_id: str, rows: int = 12, bin_width: float = 0.25):
        record = record_for(sample_id)
        if record.session_history is None or record.timed_words is None:
            raise HTTPException(
                status_code=404, detail=f"sample {sample_id!r} has no streaming data"
            )
        try:
            session = history_from_events(load_history_events(record, corpus_path))
            timed = load_timed_words(record.timed_words)
            annotation = parse_annotation(record.annotation)
            diagram = streaming_diagram(
                annotation,
                timed,
                list(session.inputs),
                list(session.outputs),
                n_rows=rows,
                config=config,
            )
            histogram = prescription_histogram(diagram, bin_width=bin_width)
        except (CorpusError, EmptyInput, ValueError) as exc:
            raise HTTPException(status_code=500, detail=str(exc))
        rows_payload = [r.to_json() for r in diagram]
        hist_payload = histogram.to_json()
        validate(rows_payload, "streaming_rows")
        validate(hist_payload, "histogram")
        return StreamingResponse(id=record.id, rows=rows_payload, histogram=hist_payload)

    @app.post(
        "/api/sample/{sample_id}/annotation",
        response_model=EditResult,
        responses={400: {"model": EditDiagnostics}},
    )
    def post_annotation(sample_id: str, edit: AnnotationEdit):
        record = record_for(sample_id)
        try:
            parse_annotation(edit.text)
        except AnnotationError as exc:
            raise HTTPException(
                status_code=400,
                detail=EditDiagnostics(
                    error=type(exc).__name__,
                    message=str(exc),
                    offset=exc.offset,
                    span=exc.span,
                ).model_dump(),
            )
        with state["lock"]:
            record.annotation = edit.text
            state["cache"].pop(record.id, None)
            save_corpus(corpus_path, state["records"])
        return EditResult(ok=True, id=record.id, annotation=record.annotation)

    resolved_static = _resolve_static_dir(static_dir)
    if resolved_static is not None:
        app.mount("/", StaticFiles(directory=resolved_static, html=True), name="dashboard")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index():
            return (
                "<h1>mwer API</h1><p>No dashboard bundle found; build the "
                "frontend and pass --static-dir, or use /api/corpus "
                "directly.</p>"
            )

    return app


def _resolve_static_dir(static_dir: Path | str | None) -> Path | None:
    import os

    candidates = []
    if static_dir:
        candidates.append(Path(static_dir))
    env = os.environ.get("MWER_DASHBOARD_DIST")
    if env:
        candidates.append(Path(env))
    candidates.append(Path.cwd() / "frontend" / "dist")
    for cand in candidates:
        if cand.is_dir():
            return cand
    return None
