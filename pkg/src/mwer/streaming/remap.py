"""Post-hoc time remapping: make a flood-paced run look real-time.

Sending audio in real time wastes wall clock whenever the system finishes
early and idles until the next chunk is due. Instead the whole session is
flood-sent and processed back to back, then the recorded timestamps are
rewritten to the schedule a real-time sender would have produced: chunk i
is re-sent at its scheduled moment, processing keeps its measured
duration but cannot start before the chunk arrives nor before the
previous chunk finished, and every output shifts with the busy span that
produced it. Only single-threaded systems can be remapped.
"""
from __future__ import annotations

from .session import (
    BusySpan,
    InputChunk,
    OutputChunk,
    ProcessingRecord,
    SessionHistory,
)


class RemapError(ValueError):
    pass


class OverlappingBusyIntervals(RemapError):
    pass


class MultiThreadedSessionDetected(RemapError):
    pass


def _check_single_threaded(spans: list[BusySpan]) -> None:
    ordered = sorted(spans, key=lambda s: (s.busy_start, s.busy_end))
    for a, b in zip(ordered, ordered[1:]):
        if b.busy_start < a.busy_end - 1e-9:
            raise OverlappingBusyIntervals(
                f"busy spans overlap: {a.recording_id}/{a.seq} "
                f"[{a.busy_start}, {a.busy_end}] and "
                f"{b.recording_id}/{b.seq} [{b.busy_start}, {b.busy_end}]"
            )
    # recordings must be processed as contiguous blocks, otherwise the
    # system was serving several streams at once and per-recording
    # schedules cannot be reconstructed
    seen: set[str] = set()
    current = None
    for span in ordered:
        if span.recording_id != current:
            if span.recording_id in seen:
                raise MultiThreadedSessionDetected(
                    f"busy spans of recording {span.recording_id!r} interleave "
                    "with another recording"
                )
            seen.add(span.recording_id)
            current = span.recording_id


def remap_time(
    inputs: list[InputChunk],
    processing: ProcessingRecord,
    outputs: list[OutputChunk],
    chunk_interval: float | None = None,
) -> tuple[tuple[InputChunk, ...], ProcessingRecord, tuple[OutputChunk, ...]]:
    """Rewrite flood-run timestamps to the real-time schedule.

    ``chunk_interval`` fixes a uniform send period (chunk i of each
    recording is re-sent at i * chunk_interval); ``None`` schedules each
    chunk at its position in the recording's audio timeline, which is
    what real-time pacing does for non-uniform chunks. Each recording is
    remapped on its own timeline starting at zero.
    """
    spans = list(processing.spans)
    _check_single_threaded(spans)

    by_rec_inputs: dict[str, list[InputChunk]] = {}
    for chunk in inputs:
        by_rec_inputs.setdefault(chunk.recording_id, []).append(chunk)
    by_rec_spans: dict[str, list[BusySpan]] = {}
    for span in spans:
        by_rec_spans.setdefault(span.recording_id, []).append(span)

    new_inputs: dict[tuple[str, int], InputChunk] = {}
    new_spans: dict[tuple[str, int], BusySpan] = {}
    offsets: dict[tuple[str, int], float] = {}

    for rec, rec_inputs in by_rec_inputs.items():
        rec_inputs = sorted(rec_inputs, key=lambda c: c.seq)
        rec_spans = {s.seq: s for s in by_rec_spans.get(rec, [])}
        if set(rec_spans) != {c.seq for c in rec_inputs}:
            raise RemapError(f"recording {rec!r}: busy spans do not match inputs")
        prev_end = 0.0
        audio_clock = 0.0
        for i, chunk in enumerate(rec_inputs):
            scheduled = i * chunk_interval if chunk_interval is not None else audio_clock
            audio_clock += chunk.duration
            span = rec_spans[chunk.seq]
            duration = span.busy_end - span.busy_start
            start = max(scheduled, prev_end)
            prev_end = start + duration
            key = (rec, chunk.seq)
            new_inputs[key] = InputChunk(rec, chunk.seq, chunk.duration, scheduled)
            new_spans[key] = BusySpan(rec, chunk.seq, start, prev_end)
            offsets[key] = start - span.busy_start

    new_outputs = []
    for out in outputs:
        owner = None
        if out.source_seq is not None and (out.recording_id, out.source_seq) in offsets:
            owner = (out.recording_id, out.source_seq)
        else:
            for span in by_rec_spans.get(out.recording_id, []):
                if span.busy_start - 1e-9 <= out.emit_time <= span.busy_end + 1e-9:
                    owner = (span.recording_id, span.seq)
                    break
        if owner is None:
            raise RemapError(
                f"output {out.recording_id}/{out.part_id} at {out.emit_time} "
                "falls outside every busy span"
            )
        new_outputs.append(
            OutputChunk(
                out.recording_id,
                out.part_id,
                out.text,
                out.emit_time + offsets[owner],
                source_seq=out.source_seq,
            )
        )

    ordered_inputs = tuple(
        sorted(new_inputs.values(), key=lambda c: (c.send_time, c.recording_id, c.seq))
    )
    ordered_spans = tuple(sorted(new_spans.values(), key=lambda s: s.busy_start))
    new_outputs.sort(key=lambda o: o.emit_time)
    return ordered_inputs, ProcessingRecord(ordered_spans), tuple(new_outputs)


def remap_history(history: SessionHistory, chunk_interval: float | None = None) -> SessionHistory:
    inputs, processing, outputs = remap_time(
        list(history.inputs), history.processing, list(history.outputs), chunk_interval
    )
    return SessionHistory(inputs, processing, outputs)
