"""Streaming-quality evaluation from a recorded session history.

At each probe time the emitted parts are merged into a partial
transcript and aligned against the reference truncated to the audio sent
so far; a word the probe cuts in half is wrapped as an optional block so
its absence costs nothing. The trailing run of deletions plus all unsent
words are categorized "not yet transcribed" rather than errors. Rows over
a whole corpus aggregate into a prescription histogram: how long after a
word was spoken does it come out right?
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from ..align import Alignment, StepKind, align, flatten
from ..annotation import (
    Annotation,
    Block,
    Option,
    Plain,
    Token,
    Wildcard,
    apply_mode,
    tokenize,
)
from ..metrics import ErrorCounts, EvalConfig, count_errors
from .session import InputChunk, OutputChunk


class EmptyInput(ValueError):
    pass


@dataclass(frozen=True)
class TimedWord:
    """A reference word with its span in the audio, from forced alignment
    or any other word timestamp source (timestamps are an input here)."""

    word: Token
    start: float
    end: float

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError(f"word {self.word.text!r}: start must precede end")

    @property
    def center(self) -> float:
        return (self.start + self.end) / 2

    def to_json(self) -> dict:
        return {"word": self.word.text, "start": self.start, "end": self.end}


def load_timed_words(entries: list[dict]) -> list[TimedWord]:
    out = []
    for e in entries:
        tokens = tokenize(e["word"])
        if len(tokens) != 1:
            raise ValueError(f"timed word {e['word']!r} is not a single token")
        out.append(TimedWord(tokens[0], float(e["start"]), float(e["end"])))
    for a, b in zip(out, out[1:]):
        if b.start < a.start:
            raise ValueError("timed words must be ordered by start time")
    return out


class WordCategory(str, enum.Enum):
    CORRECT = "correct"
    ERROR = "error"
    NOT_YET_TRANSCRIBED = "not_yet_transcribed"
    WILDCARD_ABSORBED = "wildcard_absorbed"


@dataclass(frozen=True)
class RowStep:
    kind: StepKind
    category: WordCategory
    ref: str | None
    hyp: str | None
    center: float | None
    start: float | None = None
    end: float | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "category": self.category.value,
            "ref": self.ref,
            "hyp": self.hyp,
            "center": self.center,
            "start": self.start,
            "end": self.end,
        }


@dataclass(frozen=True)
class PartialAlignmentRow:
    eval_time: float
    audio_sent: float
    steps: tuple[RowStep, ...]
    alignment: Alignment
    counts: ErrorCounts

    def to_json(self) -> dict:
        return {
            "eval_time": self.eval_time,
            "audio_sent": self.audio_sent,
            "steps": [s.to_json() for s in self.steps],
            "counts": self.counts.to_json(),
        }


def merge_parts(outputs: list[OutputChunk], upto: float | None = None) -> str:
    """Merge emitted parts into the transcript at a moment in time.

    A re-emitted part id replaces the earlier text in place; new part ids
    append. Parts are joined by single spaces in first-appearance order.
    """
    recordings = {o.recording_id for o in outputs}
    if len(recordings) > 1:
        raise ValueError(f"outputs span several recordings: {sorted(recordings)}")
    parts: dict[str, str] = {}
    for out in sorted(outputs, key=lambda o: o.emit_time):
        if upto is not None and out.emit_time > upto:
            break
        parts[out.part_id] = out.text
    return " ".join(text for text in parts.values() if text)


@dataclass(frozen=True)
class _TimedSegment:
    """One annotation segment tagged with its audio span; blocks borrow
    the span of their first option's words, wildcards have none."""

    segment: object
    words: tuple[TimedWord, ...]

    @property
    def start(self):
        return self.words[0].start if self.words else None

    @property
    def end(self):
        return self.words[-1].end if self.words else None


def _attach_times(annotation: Annotation, timed_words: list[TimedWord]) -> list[_TimedSegment]:
    cursor = 0
    out = []
    for seg in annotation.segments:
        if isinstance(seg, Plain):
            need = 1
        elif isinstance(seg, Block):
            need = len(seg.options[0].tokens)
        else:
            need = 0
        words = timed_words[cursor : cursor + need]
        if len(words) != need:
            raise ValueError(
                "timed words exhausted: annotation needs one timestamp per "
                "plain word and per first-option block word"
            )
        cursor += need
        out.append(_TimedSegment(seg, tuple(words)))
    if cursor != len(timed_words):
        raise ValueError(
            f"{len(timed_words) - cursor} timed words left over after walking the annotation"
        )
    return out


def _truncate(
    timed_segments: list[_TimedSegment], audio_sent: float
) -> tuple[Annotation, dict[int, _TimedSegment], list[int], list[TimedWord]]:
    """Reference restricted to words with start < audio_sent.

    Returns the truncated annotation, a map from its segment indices to
    timed segments, the indices of segments wrapped as optional because
    the probe falls inside their span, and the unsent words.
    """
    kept: list = []
    seg_map: dict[int, _TimedSegment] = {}
    wrapped: list[int] = []
    unsent: list[TimedWord] = []
    prev_timed_included = True
    done = False
    for ts in timed_segments:
        seg = ts.segment
        if not ts.words:
            # wildcards and empty-first-option blocks ride along with the
            # preceding timed content
            if isinstance(seg, Wildcard):
                include = prev_timed_included and audio_sent > 0 and not done
            else:
                include = prev_timed_included and not done
            if include:
                seg_map[len(kept)] = ts
                kept.append(seg)
            continue
        if done or ts.start >= audio_sent:
            done = True
            unsent.extend(ts.words)
            prev_timed_included = False
            continue
        if ts.end <= audio_sent:
            seg_map[len(kept)] = ts
            kept.append(seg)
            prev_timed_included = True
            continue
        # probe falls inside this segment's span: make it optional
        if isinstance(seg, Plain):
            optional = Block(options=(Option(tokens=(seg.token,)), Option()))
        else:
            options = seg.options
            if not any(o.is_empty for o in options):
                options = options + (Option(),)
            optional = Block(options=options)
        wrapped.append(len(kept))
        seg_map[len(kept)] = ts
        kept.append(optional)
        prev_timed_included = True
        done = True  # nothing after a straddled segment has been sent
    truncated = Annotation(segments=tuple(kept))
    return truncated, seg_map, wrapped, unsent


def partial_alignment(
    annotation: Annotation,
    timed_words: list[TimedWord],
    outputs: list[OutputChunk],
    eval_time: float,
    audio_sent: float,
    config: EvalConfig | None = None,
) -> PartialAlignmentRow:
    """Align the transcript-so-far against the reference-so-far."""
    config = config or EvalConfig()
    # timestamps pair with the original annotation's first options; strict
    # mode may drop options but never whole segments, so the pairing holds
    timed_segments = _attach_times(annotation, timed_words)
    reduced = apply_mode(annotation, config.mode)
    timed_segments = [
        _TimedSegment(seg, ts.words)
        for seg, ts in zip(reduced.segments, timed_segments)
    ]
    truncated, seg_map, wrapped, unsent = _truncate(timed_segments, audio_sent)

    hyp_text = merge_parts(list(outputs), upto=eval_time)
    hyp_tokens = tokenize(hyp_text, config.tokenizer)

    # an empty truncation still flattens to Start->End, so a bare flood of
    # early output aligns as pure insertions
    flat = flatten(truncated)
    alignment = align(flat, hyp_tokens, config.cost)
    flat_nodes = flat.nodes

    # word span per step: first-option block tokens and plain tokens get
    # their own word's span, alternative-option tokens share the block's
    def locate(step) -> tuple[float, float, float] | None:
        if step.ref_node_id is None:
            return None
        node = flat_nodes[step.ref_node_id]
        ts = seg_map.get(node.segment_index)
        if ts is None or not ts.words:
            return None
        word = None
        if isinstance(ts.segment, Plain) or len(ts.words) == 1:
            word = ts.words[0]
        elif node.option_index in (None, 0):
            idx = _index_within_option(flat_nodes, step.ref_node_id)
            if idx is not None and idx < len(ts.words):
                word = ts.words[idx]
        if word is not None:
            return word.center, word.start, word.end
        return (ts.start + ts.end) / 2, ts.start, ts.end

    raw: list[RowStep] = []
    last_center: float | None = None
    used_segments: set[int] = set()
    for step in alignment.steps:
        if step.kind == StepKind.WILDCARD_ABSORBED:
            raw.append(
                RowStep(step.kind, WordCategory.WILDCARD_ABSORBED, None,
                        step.hyp_token.text, None)
            )
            if step.ref_node_id is not None:
                used_segments.add(flat_nodes[step.ref_node_id].segment_index)
            continue
        if step.kind == StepKind.INSERTION:
            center = last_center if last_center is not None else audio_sent
            raw.append(
                RowStep(step.kind, WordCategory.ERROR, None, step.hyp_token.text, center)
            )
            continue
        where = locate(step)
        center = start = end = None
        if where is not None:
            center, start, end = where
            last_center = center
        used_segments.add(flat_nodes[step.ref_node_id].segment_index)
        category = (
            WordCategory.CORRECT if step.kind == StepKind.CORRECT else WordCategory.ERROR
        )
        raw.append(
            RowStep(
                step.kind,
                category,
                step.ref_token.text if step.ref_token else None,
                step.hyp_token.text if step.hyp_token else None,
                center,
                start,
                end,
            )
        )

    # the trailing run of deletions is "not yet transcribed", not an error
    tail = len(raw)
    while tail > 0 and raw[tail - 1].kind == StepKind.DELETION:
        tail -= 1
    steps = [
        RowStep(s.kind, WordCategory.NOT_YET_TRANSCRIBED, s.ref, s.hyp,
                s.center, s.start, s.end)
        if i >= tail
        else s
        for i, s in enumerate(raw)
    ]

    # a straddled word the system skipped is pending, not wrong
    pending = [seg_map[idx].words for idx in wrapped if idx not in used_segments]
    for words in pending + [tuple(unsent)]:
        for w in words:
            steps.append(
                RowStep(
                    StepKind.DELETION,
                    WordCategory.NOT_YET_TRANSCRIBED,
                    w.word.text,
                    None,
                    w.center,
                    w.start,
                    w.end,
                )
            )

    return PartialAlignmentRow(
        eval_time=eval_time,
        audio_sent=audio_sent,
        steps=tuple(steps),
        alignment=alignment,
        counts=count_errors(alignment, config.insertion_cap),
    )


def _index_within_option(flat_nodes, node_id: int) -> int | None:
    """Position of a token node within its option's chain."""
    node = flat_nodes[node_id]
    idx = 0
    for other in flat_nodes:
        if other.id == node_id:
            return idx
        if (
            other.segment_index == node.segment_index
            and other.option_index == node.option_index
        ):
            idx += 1
    return None


def audio_sent_at(inputs: list[InputChunk], at: float) -> float:
    """Audio delivered by a moment: each chunk's audio accumulates at
    real-time rate from its send moment (exact for real-time-paced or
    remapped histories; a probe mid-chunk interpolates linearly)."""
    sent = 0.0
    for chunk in inputs:
        if chunk.send_time <= at:
            sent += min(chunk.duration, at - chunk.send_time)
    return sent


def streaming_diagram(
    annotation: Annotation,
    timed_words: list[TimedWord],
    inputs: list[InputChunk],
    outputs: list[OutputChunk],
    n_rows: int = 10,
    config: EvalConfig | None = None,
) -> list[PartialAlignmentRow]:
    """Partial alignments at evenly spaced probe times over the session."""
    if n_rows < 1:
        raise ValueError("need at least one row")
    if not inputs:
        raise EmptyInput("no input chunks in the history")
    recordings = {c.recording_id for c in inputs}
    if len(recordings) != 1:
        raise ValueError(f"diagram wants a single recording, got {sorted(recordings)}")

    audio_end = max(c.send_time + c.duration for c in inputs)
    emit_end = max((o.emit_time for o in outputs), default=0.0)
    session_end = max(audio_end, emit_end)

    rows = []
    for i in range(1, n_rows + 1):
        t = session_end * i / n_rows
        rows.append(
            partial_alignment(
                annotation,
                timed_words,
                outputs,
                eval_time=t,
                audio_sent=audio_sent_at(inputs, t),
                config=config,
            )
        )
    return rows


@dataclass(frozen=True)
class StreamingHistogram:
    bin_edges: tuple[float, ...]
    correct: tuple[int, ...]
    error: tuple[int, ...]
    not_yet: tuple[int, ...]

    def total(self) -> int:
        return sum(self.correct) + sum(self.error) + sum(self.not_yet)

    def to_json(self) -> dict:
        return {
            "bin_edges": list(self.bin_edges),
            "correct": list(self.correct),
            "error": list(self.error),
            "not_yet": list(self.not_yet),
        }


def prescription_histogram(
    rows: list[PartialAlignmentRow],
    bin_width: float = 0.25,
    lo: float = -1.0,
    hi: float = 10.0,
) -> StreamingHistogram:
    """Bin every categorized word of every row by how long before the
    probe its audio was spoken. Bins are left-closed; outliers clamp into
    the edge bins, so no word is lost."""
    if not rows:
        raise EmptyInput("no partial alignment rows")
    if bin_width <= 0 or hi <= lo:
        raise ValueError("bad bin geometry")
    n_bins = max(1, round((hi - lo) / bin_width))
    edges = tuple(lo + i * bin_width for i in range(n_bins + 1))
    correct = [0] * n_bins
    error = [0] * n_bins
    not_yet = [0] * n_bins
    for row in rows:
        for step in row.steps:
            if step.category == WordCategory.WILDCARD_ABSORBED:
                continue
            center = step.center if step.center is not None else row.audio_sent
            prescription = row.audio_sent - center
            idx = int((prescription - lo) // bin_width)
            idx = min(max(idx, 0), n_bins - 1)
            if step.category == WordCategory.CORRECT:
                correct[idx] += 1
            elif step.category == WordCategory.ERROR:
                error[idx] += 1
            else:
                not_yet[idx] += 1
    return StreamingHistogram(
        bin_edges=edges,
        correct=tuple(correct),
        error=tuple(error),
        not_yet=tuple(not_yet),
    )
