"""Published JSON schemas for every artifact the toolkit emits.

All CLI and server payloads validate against these; the dashboard and any
other consumer can rely on them.
"""
from __future__ import annotations

import jsonschema

STEP_KINDS = ["correct", "replacement", "insertion", "deletion", "wildcard_absorbed"]
WORD_CATEGORIES = ["correct", "error", "not_yet_transcribed", "wildcard_absorbed"]

_count = {"type": "integer", "minimum": 0}
_number = {"type": "number"}
_nullable_str = {"type": ["string", "null"]}
_nullable_num = {"type": ["number", "null"]}
_nullable_int = {"type": ["integer", "null"]}

SCORE = {
    "type": "object",
    "properties": {
        "word_errors": _count,
        "correct_matches": _count,
        "char_errors": _count,
    },
    "required": ["word_errors", "correct_matches", "char_errors"],
    "additionalProperties": False,
}

ALIGNMENT = {
    "type": "object",
    "properties": {
        "score": SCORE,
        "steps": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "kind": {"enum": STEP_KINDS},
                    "ref": _nullable_str,
                    "hyp": _nullable_str,
                    "ref_node": _nullable_int,
                },
                "required": ["kind", "ref", "hyp", "ref_node"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["score", "steps"],
    "additionalProperties": False,
}

ERROR_COUNTS = {
    "type": "object",
    "properties": {
        "correct": _count,
        "replacements": _count,
        "deletions": _count,
        "insertions_raw": _count,
        "insertions_capped": _count,
        "wildcard_absorbed": _count,
        "ref_len": _count,
    },
    "required": [
        "correct",
        "replacements",
        "deletions",
        "insertions_raw",
        "insertions_capped",
        "wildcard_absorbed",
        "ref_len",
    ],
    "additionalProperties": False,
}

_ci = {
    "type": "array",
    "items": _number,
    "minItems": 2,
    "maxItems": 2,
}

METRIC_REPORT = {
    "type": "object",
    "properties": {
        "wer": _number,
        "wer_relaxed": _number,
        "cer": _number,
        "mode": {"enum": ["strict", "permissive"]},
        "counts": ERROR_COUNTS,
        "char_counts": ERROR_COUNTS,
        "denominator": {"enum": ["path", "first_option", "shortest", "longest"]},
        "degenerate": {"type": "boolean"},
        "ci": _ci,
        "ci_relaxed": _ci,
    },
    "required": ["wer", "wer_relaxed", "cer", "mode", "counts"],
    "additionalProperties": False,
}

MULTIALIGN_CELL = {
    "type": ["object", "null"],
    "properties": {
        "kind": {"enum": STEP_KINDS},
        "hyp": {"type": "array", "items": {"type": "string"}},
        "ref": _nullable_str,
        "option": _nullable_int,
        "char_errors": _count,
    },
    "required": ["kind", "hyp", "ref", "option", "char_errors"],
    "additionalProperties": False,
}

MULTIALIGN = {
    "type": "object",
    "properties": {
        "columns": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "kind": {"enum": ["ref", "wildcard", "insertion"]},
                    "node": _nullable_int,
                    "text": _nullable_str,
                    "segment": _nullable_int,
                    "option": _nullable_int,
                    "width": {"type": "integer", "minimum": 1},
                },
                "required": ["kind", "node", "text", "segment", "option", "width"],
                "additionalProperties": False,
            },
        },
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "name": {"type": "string"},
                    "cells": {"type": "array", "items": MULTIALIGN_CELL},
                    "report": METRIC_REPORT,
                },
                "required": ["name", "cells", "report"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["columns", "rows"],
    "additionalProperties": False,
}

ROW_STEP = {
    "type": "object",
    "properties": {
        "kind": {"enum": STEP_KINDS},
        "category": {"enum": WORD_CATEGORIES},
        "ref": _nullable_str,
        "hyp": _nullable_str,
        "center": _nullable_num,
        "start": _nullable_num,
        "end": _nullable_num,
    },
    "required": ["kind", "category", "ref", "hyp", "center"],
    "additionalProperties": False,
}

STREAMING_ROWS = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {
            "eval_time": _number,
            "audio_sent": _number,
            "steps": {"type": "array", "items": ROW_STEP},
            "counts": ERROR_COUNTS,
        },
        "required": ["eval_time", "audio_sent", "steps", "counts"],
        "additionalProperties": False,
    },
}

HISTOGRAM = {
    "type": "object",
    "properties": {
        "bin_edges": {"type": "array", "items": _number, "minItems": 2},
        "correct": {"type": "array", "items": _count},
        "error": {"type": "array", "items": _count},
        "not_yet": {"type": "array", "items": _count},
    },
    "required": ["bin_edges", "correct", "error", "not_yet"],
    "additionalProperties": False,
}

TIMED_WORDS = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {
            "word": {"type": "string"},
            "start": _number,
            "end": _number,
        },
        "required": ["word", "start", "end"],
        "additionalProperties": False,
    },
}

HISTORY_EVENT = {
    "type": "object",
    "oneOf": [
        {
            "properties": {
                "type": {"const": "input"},
                "recording_id": {"type": "string"},
                "seq": _count,
                "duration": _number,
                "send_time": _number,
            },
            "required": ["type", "recording_id", "seq", "duration", "send_time"],
            "additionalProperties": False,
        },
        {
            "properties": {
                "type": {"const": "busy"},
                "recording_id": {"type": "string"},
                "seq": _count,
                "busy_start": _number,
                "busy_end": _number,
            },
            "required": ["type", "recording_id", "seq", "busy_start", "busy_end"],
            "additionalProperties": False,
        },
        {
            "properties": {
                "type": {"const": "output"},
                "recording_id": {"type": "string"},
                "part_id": {"type": "string"},
                "text": {"type": "string"},
                "emit_time": _number,
                "source_seq": _count,
            },
            "required": ["type", "recording_id", "part_id", "text", "emit_time"],
            "additionalProperties": False,
        },
    ],
}

CORPUS_RECORD = {
    "type": "object",
    "properties": {
        "v": {"const": 1},
        "id": {"type": "string", "minLength": 1},
        "annotation": {"type": "string"},
        "hypotheses": {
            "type": "object",
            "additionalProperties": {"type": "string"},
        },
        "timed_words": TIMED_WORDS,
        "session_history": {
            "oneOf": [
                {"type": "string"},
                {"type": "array", "items": HISTORY_EVENT},
            ]
        },
    },
    "required": ["v", "id", "annotation", "hypotheses"],
    "additionalProperties": False,
}

PER_SAMPLE_LINE = {
    "type": "object",
    "properties": {
        "id": {"type": "string"},
        "report": METRIC_REPORT,
        "error": {"type": "string"},
    },
    "required": ["id"],
    "oneOf": [{"required": ["report"]}, {"required": ["error"]}],
    "additionalProperties": False,
}

AGGREGATE_REPORT = {
    "type": "object",
    "properties": {
        "v": {"const": 1},
        "weighting": {"enum": ["micro", "macro"]},
        "seed": {"type": "integer"},
        "n_samples": _count,
        "n_failed": _count,
        "report": METRIC_REPORT,
    },
    "required": ["v", "weighting", "seed", "n_samples", "n_failed", "report"],
    "additionalProperties": False,
}

SCHEMAS = {
    "alignment": ALIGNMENT,
    "metric_report": METRIC_REPORT,
    "multialign": MULTIALIGN,
    "streaming_rows": STREAMING_ROWS,
    "histogram": HISTOGRAM,
    "timed_words": TIMED_WORDS,
    "history_event": HISTORY_EVENT,
    "corpus_record": CORPUS_RECORD,
    "per_sample_line": PER_SAMPLE_LINE,
    "aggregate_report": AGGREGATE_REPORT,
}


def validate(instance, schema_name: str) -> None:
    """Raise jsonschema.ValidationError if the artifact breaks its contract."""
    jsonschema.validate(instance, SCHEMAS[schema_name])
