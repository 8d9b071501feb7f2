"""Streaming session harness: buffers, clocks, and timestamp recording.

A streaming system accepts audio chunks labeled by recording id and emits
text parts labeled by recording id and part id; re-emitting a part id
replaces that part, which lets a system correct earlier output. The
harness drives a system over an audio plan, either flood-paced (all
chunks at once, for later time remapping) or realtime-paced, and records
every send, busy span and emission against an injectable clock, so tests
run instantly on virtual time.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Protocol


class Clock(Protocol):
    def now(self) -> float: ...

    def sleep(self, seconds: float) -> None: ...


class VirtualClock:
    """Simulated time: sleeping advances the counter and nothing else."""

    def __init__(self, start: float = 0.0):
        self._t = start

    def now(self) -> float:
        return self._t

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            self._t += seconds


class RealClock:
    def __init__(self):
        self._origin = time.monotonic()

    def now(self) -> float:
        return time.monotonic() - self._origin

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            time.sleep(seconds)


@dataclass(frozen=True)
class InputChunk:
    recording_id: str
    seq: int
    duration: float
    send_time: float

    def to_json(self) -> dict:
        return {
            "type": "input",
            "recording_id": self.recording_id,
            "seq": self.seq,
            "duration": self.duration,
            "send_time": self.send_time,
        }


@dataclass(frozen=True)
class OutputChunk:
    recording_id: str
    part_id: str
    text: str
    emit_time: float
    # seq of the input chunk whose processing emitted this part, when the
    # harness recorded it; lets remapping attribute outputs exactly even
    # when several zero-length busy spans share a timestamp
    source_seq: int | None = None

    def to_json(self) -> dict:
        out = {
            "type": "output",
            "recording_id": self.recording_id,
            "part_id": self.part_id,
            "text": self.text,
            "emit_time": self.emit_time,
        }
        if self.source_seq is not None:
            out["source_seq"] = self.source_seq
        return out


@dataclass(frozen=True)
class BusySpan:
    recording_id: str
    seq: int
    busy_start: float
    busy_end: float

    def to_json(self) -> dict:
        return {
            "type": "busy",
            "recording_id": self.recording_id,
            "seq": self.seq,
            "busy_start": self.busy_start,
            "busy_end": self.busy_end,
        }


@dataclass(frozen=True)
class ProcessingRecord:
    """Busy spans, one per input chunk, in processing order."""

    spans: tuple[BusySpan, ...]

    def for_recording(self, recording_id: str) -> list[BusySpan]:
        return [s for s in self.spans if s.recording_id == recording_id]


@dataclass(frozen=True)
class SessionHistory:
    inputs: tuple[InputChunk, ...]
    processing: ProcessingRecord
    outputs: tuple[OutputChunk, ...]

    def recording_ids(self) -> list[str]:
        seen: list[str] = []
        for c in self.inputs:
            if c.recording_id not in seen:
                seen.append(c.recording_id)
        return seen


class StreamingSystem(Protocol):
    """Push-chunk / poll-output contract.

    ``push_chunk`` may advance the supplied clock to model processing
    time; everything emitted since the previous poll is returned by
    ``poll_outputs`` as (recording_id, part_id, text) triples.
    """

    def push_chunk(self, chunk: InputChunk, clock: Clock) -> None: ...

    def poll_outputs(self) -> list[tuple[str, str, str]]: ...


class SystemStalled(RuntimeError):
    pass


def run_session(
    system: StreamingSystem,
    audio_plan: list[tuple[str, list[float]]],
    pacing: str = "flood",
    clock: Clock | None = None,
    stall_timeout: float = 300.0,
) -> SessionHistory:
    """Drive a system over the audio plan and record all timestamps.

    Flood pacing sends every chunk immediately (remap the history
    afterwards); realtime pacing schedules each chunk at its position in
    the recording's audio timeline. Send times record the scheduled
    buffer-arrival moment even when the system is still busy, so queueing
    shows up as busy_start > send_time.
    """
    if pacing not in ("flood", "realtime"):
        raise ValueError(f"unknown pacing: {pacing}")
    clock = clock or VirtualClock()

    schedule: list[tuple[float, InputChunk]] = []
    for recording_id, durations in audio_plan:
        offset = 0.0
        for seq, duration in enumerate(durations):
            at = offset if pacing == "realtime" else 0.0
            schedule.append((at, InputChunk(recording_id, seq, duration, at)))
            offset += duration
    schedule.sort(key=lambda sc: sc[0])

    inputs: list[InputChunk] = []
    spans: list[BusySpan] = []
    outputs: list[OutputChunk] = []
    for at, chunk in schedule:
        if clock.now() < at:
            clock.sleep(at - clock.now())
        inputs.append(chunk)
        busy_start = clock.now()
        system.push_chunk(chunk, clock)
        busy_end = clock.now()
        if busy_end - busy_start > stall_timeout:
            raise SystemStalled(
                f"chunk {chunk.recording_id}/{chunk.seq} busy for "
                f"{busy_end - busy_start:.1f}s (timeout {stall_timeout}s)"
            )
        spans.append(BusySpan(chunk.recording_id, chunk.seq, busy_start, busy_end))
        for recording_id, part_id, text in system.poll_outputs():
            outputs.append(
                OutputChunk(recording_id, part_id, text, busy_end, source_seq=chunk.seq)
            )

    return SessionHistory(
        inputs=tuple(inputs),
        processing=ProcessingRecord(spans=tuple(spans)),
        outputs=tuple(outputs),
    )


def history_to_events(history: SessionHistory) -> list[dict]:
    """Flatten a history into JSONL-ready event dicts, deterministically
    ordered by timestamp."""
    order = {"input": 0, "busy": 1, "output": 2}

    def key(event: dict):
        t = event.get("send_time", event.get("busy_start", event.get("emit_time")))
        return (t, order[event["type"]], event["recording_id"],
                event.get("seq", -1), event.get("part_id", ""))

    events = [c.to_json() for c in history.inputs]
    events += [s.to_json() for s in history.processing.spans]
    events += [o.to_json() for o in history.outputs]
    events.sort(key=key)
    return events


def history_from_events(events: list[dict]) -> SessionHistory:
    inputs = []
    spans = []
    outputs = []
    for e in events:
        kind = e.get("type")
        if kind == "input":
            inputs.append(
                InputChunk(e["recording_id"], e["seq"], e["duration"], e["send_time"])
            )
        elif kind == "busy":
            spans.append(
                BusySpan(e["recording_id"], e["seq"], e["busy_start"], e["busy_end"])
            )
        elif kind == "output":
            outputs.append(
                OutputChunk(
                    e["recording_id"],
                    e["part_id"],
                    e["text"],
                    e["emit_time"],
                    source_seq=e.get("source_seq"),
                )
            )
        else:
            raise ValueError(f"unknown history event type: {kind!r}")
    inputs.sort(key=lambda c: (c.send_time, c.recording_id, c.seq))
    spans.sort(key=lambda s: s.busy_start)
    outputs.sort(key=lambda o: o.emit_time)
    return SessionHistory(tuple(inputs), ProcessingRecord(tuple(spans)), tuple(outputs))
