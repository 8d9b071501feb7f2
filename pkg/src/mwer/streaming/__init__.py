"""Streaming-evaluation harness: session recording, time remapping,
partial alignments and the prescription histogram."""
from .evaluate import (
    EmptyInput,
    PartialAlignmentRow,
    RowStep,
    StreamingHistogram,
    TimedWord,
    WordCategory,
    audio_sent_at,
    load_timed_words,
    merge_parts,
    partial_alignment,
    prescription_histogram,
    streaming_diagram,
)
from .mocks import (
    ContextAccumulatorSystem,
    RevisingSystem,
    ScriptedSystem,
    delay_system,
    echo_system,
)
from .remap import (
    MultiThreadedSessionDetected,
    OverlappingBusyIntervals,
    RemapError,
    remap_history,
    remap_time,
)
from .session import (
    BusySpan,
    Clock,
    InputChunk,
    OutputChunk,
    ProcessingRecord,
    RealClock,
    SessionHistory,
    StreamingSystem,
    SystemStalled,
    VirtualClock,
    history_from_events,
    history_to_events,
    run_session,
)

__all__ = [
    "BusySpan",
    "Clock",
    "ContextAccumulatorSystem",
    "EmptyInput",
    "InputChunk",
    "MultiThreadedSessionDetected",
    "OutputChunk",
    "OverlappingBusyIntervals",
    "PartialAlignmentRow",
    "ProcessingRecord",
    "RealClock",
    "RemapError",
    "RevisingSystem",
    "RowStep",
    "ScriptedSystem",
    "SessionHistory",
    "StreamingHistogram",
    "StreamingSystem",
    "SystemStalled",
    "TimedWord",
    "VirtualClock",
    "WordCategory",
    "audio_sent_at",
    "delay_system",
    "echo_system",
    "history_from_events",
    "history_to_events",
    "load_timed_words",
    "merge_parts",
    "partial_alignment",
    "prescription_histogram",
    "remap_history",
    "remap_time",
    "run_session",
    "streaming_diagram",
]
