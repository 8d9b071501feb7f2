"""WER/CER computation over alignments, with a relaxed insertion penalty.

Generative models sometimes repeat a word or phrase until the generation
limit; a single such oscillatory hallucination swamps classic WER. The
relaxed penalty counts every maximal run of consecutive insertions as at
most ``insertion_cap`` errors (default 4).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .align import Alignment, CostConfig, FlatView, NodeKind, StepKind, align, align_chars, flatten
from .annotation import Annotation, EvalMode, TokenizerConfig, apply_mode, tokenize


class EmptyCorpus(ValueError):
    pass


# WER denominator under multivariance: "path" divides by the reference
# tokens actually on the optimal path; the alternatives pin a fixed
# expansion instead.
DENOMINATOR_POLICIES = ("path", "first_option", "shortest", "longest")


@dataclass(frozen=True)
class ErrorCounts:
    correct: int = 0
    replacements: int = 0
    deletions: int = 0
    insertions_raw: int = 0
    insertions_capped: int = 0
    wildcard_absorbed: int = 0
    ref_len: int = 0

    def errors(self, relaxed: bool = False) -> int:
        ins = self.insertions_capped if relaxed else self.insertions_raw
        return self.replacements + self.deletions + ins

    def __add__(self, other: "ErrorCounts") -> "ErrorCounts":
        return ErrorCounts(
            self.correct + other.correct,
            self.replacements + other.replacements,
            self.deletions + other.deletions,
            self.insertions_raw + other.insertions_raw,
            self.insertions_capped + other.insertions_capped,
            self.wildcard_absorbed + other.wildcard_absorbed,
            self.ref_len + other.ref_len,
        )

    def to_json(self) -> dict:
        return {
            "correct": self.correct,
            "replacements": self.replacements,
            "deletions": self.deletions,
            "insertions_raw": self.insertions_raw,
            "insertions_capped": self.insertions_capped,
            "wildcard_absorbed": self.wildcard_absorbed,
            "ref_len": self.ref_len,
        }


def count_errors(alignment: Alignment, cap: int | None = 4) -> ErrorCounts:
    """Tally step kinds; each maximal insertion run contributes
    min(run length, cap) to the capped count. ``cap=None`` disables capping.
    Wildcard-absorbed steps are tracked separately and are not errors."""
    correct = replacements = deletions = raw = capped = absorbed = 0
    run = 0
    for step in alignment.steps:
        if step.kind == StepKind.INSERTION:
            run += 1
            continue
        if run:
            raw += run
            capped += run if cap is None else min(run, cap)
            run = 0
        if step.kind == StepKind.CORRECT:
            correct += 1
        elif step.kind == StepKind.REPLACEMENT:
            replacements += 1
        elif step.kind == StepKind.DELETION:
            deletions += 1
        else:
            absorbed += 1
    if run:
        raw += run
        capped += run if cap is None else min(run, cap)
    return ErrorCounts(
        correct=correct,
        replacements=replacements,
        deletions=deletions,
        insertions_raw=raw,
        insertions_capped=capped,
        wildcard_absorbed=absorbed,
        ref_len=correct + replacements + deletions,
    )


def compute_wer(counts: ErrorCounts, relaxed: bool = False, denominator: int | None = None) -> float:
    """Error ratio; a zero denominator with errors present divides by 1
    (callers flag that case as degenerate rather than raising)."""
    errors = counts.errors(relaxed)
    den = counts.ref_len if denominator is None else denominator
    if den <= 0:
        return 0.0 if errors == 0 else float(errors)
    return errors / den


@dataclass(frozen=True)
class EvalConfig:
    mode: EvalMode = EvalMode.PERMISSIVE
    insertion_cap: int | None = 4
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)
    cost: CostConfig = field(default_factory=CostConfig)
    denominator: str = "path"

    def __post_init__(self):
        if self.denominator not in DENOMINATOR_POLICIES:
            raise ValueError(f"unknown denominator policy: {self.denominator}")


@dataclass(frozen=True)
class MetricReport:
    wer: float
    wer_relaxed: float
    cer: float
    counts: ErrorCounts
    char_counts: ErrorCounts
    mode: EvalMode
    denominator: str = "path"
    degenerate: bool = False
    ci: tuple[float, float] | None = None
    ci_relaxed: tuple[float, float] | None = None

    def to_json(self) -> dict:
        out = {
            "wer": self.wer,
            "wer_relaxed": self.wer_relaxed,
            "cer": self.cer,
            "mode": self.mode.value,
            "counts": self.counts.to_json(),
            "char_counts": self.char_counts.to_json(),
            "denominator": self.denominator,
            "degenerate": self.degenerate,
        }
        if self.ci is not None:
            out["ci"] = list(self.ci)
        if self.ci_relaxed is not None:
            out["ci_relaxed"] = list(self.ci_relaxed)
        return out


def _fixed_denominator(flat: FlatView, policy: str) -> int | None:
    """Token count of the expansion a fixed-denominator policy selects."""
    if policy == "path":
        return None
    if policy == "first_option":
        count = 0
        for node in flat.nodes:
            if node.kind == NodeKind.TOKEN and node.option_index in (None, 0):
                count += 1
        return count
    best: list[int | None] = [None] * len(flat.nodes)
    best[0] = 0
    pick = min if policy == "shortest" else max
    for nid in range(1, len(flat.nodes)):
        weight = 1 if flat.nodes[nid].kind == NodeKind.TOKEN else 0
        cands = [best[p] for p in flat.predecessors[nid] if best[p] is not None]
        if cands:
            best[nid] = pick(cands) + weight
    return best[-1] or 0


def evaluate_tokens(flat: FlatView, hyp_tokens, config: EvalConfig) -> tuple[MetricReport, Alignment]:
    """Report plus the word-level alignment for an already-tokenized
    hypothesis against an already-flattened (mode-applied) reference."""
    word_alignment = align(flat, hyp_tokens, config.cost)
    counts = count_errors(word_alignment, config.insertion_cap)
    char_alignment = align_chars(flat, hyp_tokens, config.cost)
    char_counts = count_errors(char_alignment, cap=None)

    den = _fixed_denominator(flat, config.denominator)
    effective_den = counts.ref_len if den is None else den
    report = MetricReport(
        wer=compute_wer(counts, relaxed=False, denominator=den),
        wer_relaxed=compute_wer(counts, relaxed=True, denominator=den),
        cer=compute_wer(char_counts, relaxed=False),
        counts=counts,
        char_counts=char_counts,
        mode=config.mode,
        denominator=config.denominator,
        degenerate=effective_den == 0 and counts.errors() > 0,
    )
    return report, word_alignment


def evaluate_sample(annotation: Annotation, hypothesis: str, config: EvalConfig | None = None) -> MetricReport:
    """The full pipeline: mode application, tokenization, word- and
    character-level alignment, error counting."""
    config = config or EvalConfig()
    flat = flatten(apply_mode(annotation, config.mode))
    hyp_tokens = tokenize(hypothesis, config.tokenizer)
    report, _ = evaluate_tokens(flat, hyp_tokens, config)
    return report


def _ratio(errors: int, den: int) -> float:
    if den <= 0:
        return 0.0 if errors == 0 else float(errors)
    return errors / den


def _bootstrap_ci(
    reports: list[MetricReport],
    weighting: str,
    relaxed: bool,
    resamples: int,
    seed: int,
) -> tuple[float, float]:
    rng = random.Random(seed)
    n = len(reports)
    stats = []
    for _ in range(resamples):
        picked = [reports[rng.randrange(n)] for _ in range(n)]
        if weighting == "micro":
            pooled = sum((r.counts for r in picked), ErrorCounts())
            stats.append(_ratio(pooled.errors(relaxed), pooled.ref_len))
        else:
            stats.append(
                sum(r.wer_relaxed if relaxed else r.wer for r in picked) / n
            )
    stats.sort()
    lo = stats[int(0.025 * (resamples - 1))]
    hi = stats[int(0.975 * (resamples - 1))]
    return (lo, hi)


def aggregate(
    reports: list[MetricReport],
    weighting: str = "micro",
    seed: int = 0,
    resamples: int = 1000,
) -> MetricReport:
    """Corpus-level report: micro pools counts before dividing, macro
    averages per-sample ratios. Includes a seeded bootstrap percentile
    95% confidence interval over samples."""
    if not reports:
        raise EmptyCorpus("no reports to aggregate")
    if weighting not in ("micro", "macro"):
        raise ValueError(f"unknown weighting: {weighting}")

    pooled = sum((r.counts for r in reports), ErrorCounts())
    pooled_chars = sum((r.char_counts for r in reports), ErrorCounts())
    if weighting == "micro":
        wer = _ratio(pooled.errors(False), pooled.ref_len)
        wer_relaxed = _ratio(pooled.errors(True), pooled.ref_len)
        cer = _ratio(pooled_chars.errors(False), pooled_chars.ref_len)
    else:
        n = len(reports)
        wer = sum(r.wer for r in reports) / n
        wer_relaxed = sum(r.wer_relaxed for r in reports) / n
        cer = sum(r.cer for r in reports) / n

    return MetricReport(
        wer=wer,
        wer_relaxed=wer_relaxed,
        cer=cer,
        counts=pooled,
        char_counts=pooled_chars,
        mode=reports[0].mode,
        denominator=reports[0].denominator,
        degenerate=any(r.degenerate for r in reports),
        ci=_bootstrap_ci(reports, weighting, False, resamples, seed),
        ci_relaxed=_bootstrap_ci(reports, weighting, True, resamples, seed),
    )
