"""Multi-reference speech recognition evaluation toolkit.

Annotations may list several acceptable readings in braces ({one|1}),
mark optional text ({well}), flag misspelled-but-acceptable options
(~option) and absorb unclear speech with a wildcard (<*>). The alignment
engine scores hypotheses against the whole annotation at once, WER/CER
come with a relaxed insertion penalty for oscillatory hallucinations,
and a streaming harness measures latency and quality over time.
"""
from .align import (
    Alignment,
    AlignmentStep,
    CostConfig,
    FlatView,
    ScoreTuple,
    StepKind,
    WildcardInHypothesis,
    align,
    align_chars,
    char_cost,
    flatten,
    levenshtein,
)
from .annotation import (
    Annotation,
    AnnotationError,
    Block,
    EvalMode,
    Option,
    Plain,
    Token,
    TokenizerConfig,
    Wildcard,
    apply_mode,
    parse_annotation,
    serialize,
    tokenize,
)
from .metrics import (
    ErrorCounts,
    EvalConfig,
    MetricReport,
    aggregate,
    compute_wer,
    count_errors,
    evaluate_sample,
)
from .multialign import MultiAlignment, disagreement_report, multi_align

__version__ = "0.1.0"

__all__ = [
    "Alignment",
    "AlignmentStep",
    "Annotation",
    "AnnotationError",
    "Block",
    "CostConfig",
    "ErrorCounts",
    "EvalConfig",
    "EvalMode",
    "FlatView",
    "MetricReport",
    "MultiAlignment",
    "Option",
    "Plain",
    "ScoreTuple",
    "StepKind",
    "Token",
    "TokenizerConfig",
    "Wildcard",
    "WildcardInHypothesis",
    "aggregate",
    "align",
    "align_chars",
    "apply_mode",
    "char_cost",
    "compute_wer",
    "count_errors",
    "disagreement_report",
    "evaluate_sample",
    "flatten",
    "levenshtein",
    "multi_align",
    "parse_annotation",
    "serialize",
    "tokenize",
]
