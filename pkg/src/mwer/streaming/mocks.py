"""Deterministic mock systems for harness tests and demo fixtures."""
from __future__ import annotations

from typing import Callable

from .session import Clock, InputChunk


class ScriptedSystem:
    """Processing time and emissions are a pure function of the chunk,
    which is what time remapping requires of a system."""

    def __init__(self, script: Callable[[str, int], tuple[float, list[tuple[str, str]]]]):
        self._script = script
        self._pending: list[tuple[str, str, str]] = []

    def push_chunk(self, chunk: InputChunk, clock: Clock) -> None:
        delay, emissions = self._script(chunk.recording_id, chunk.seq)
        if delay:
            clock.sleep(delay)
        for part_id, text in emissions:
            self._pending.append((chunk.recording_id, part_id, text))

    def poll_outputs(self) -> list[tuple[str, str, str]]:
        out, self._pending = self._pending, []
        return out


def echo_system(words: list[str], delay: float = 0.0) -> ScriptedSystem:
    """Emits one word per chunk: word i arrives as part ``p<i>``."""

    def script(recording_id: str, seq: int):
        if seq < len(words):
            return delay, [(f"p{seq}", words[seq])]
        return delay, []

    return ScriptedSystem(script)


def delay_system(words: list[str], delay: float) -> ScriptedSystem:
    """echo_system with fixed per-chunk processing time."""
    return echo_system(words, delay=delay)


class ContextAccumulatorSystem:
    """Withholds a word until ``context`` seconds of audio beyond the
    word's end have been received, the classic streaming-latency shape."""

    def __init__(
        self,
        timed_words: list[tuple[str, float, float]],
        context: float = 1.0,
        delay: float = 0.0,
    ):
        self._words = timed_words
        self._context = context
        self._delay = delay
        self._received: dict[str, float] = {}
        self._emitted: dict[str, int] = {}
        self._pending: list[tuple[str, str, str]] = []

    def push_chunk(self, chunk: InputChunk, clock: Clock) -> None:
        if self._delay:
            clock.sleep(self._delay)
        rec = chunk.recording_id
        self._received[rec] = self._received.get(rec, 0.0) + chunk.duration
        cursor = self._emitted.get(rec, 0)
        while cursor < len(self._words):
            word, _, end = self._words[cursor]
            if end + self._context > self._received[rec]:
                break
            self._pending.append((rec, f"w{cursor}", word))
            cursor += 1
        self._emitted[rec] = cursor

    def poll_outputs(self) -> list[tuple[str, str, str]]:
        out, self._pending = self._pending, []
        return out


class RevisingSystem:
    """Emits a rough guess for each chunk, then corrects the previous part
    in place one chunk later; exercises part-id replacement."""

    def __init__(self, drafts: list[str], finals: list[str], delay: float = 0.0):
        assert len(drafts) == len(finals)
        self._drafts = drafts
        self._finals = finals
        self._delay = delay
        self._pending: list[tuple[str, str, str]] = []

    def push_chunk(self, chunk: InputChunk, clock: Clock) -> None:
        if self._delay:
            clock.sleep(self._delay)
        seq = chunk.seq
        if seq < len(self._drafts):
            self._pending.append((chunk.recording_id, f"p{seq}", self._drafts[seq]))
        if 0 < seq <= len(self._finals):
            self._pending.append(
                (chunk.recording_id, f"p{seq - 1}", self._finals[seq - 1])
            )

    def poll_outputs(self) -> list[tuple[str, str, str]]:
        out, self._pending = self._pending, []
        return out
