"""Annotation grammar: multi-reference blocks, wildcards, and tokenization.

The grammar accepted here::

    annotation := (segment)*          separated by whitespace
    segment    := wildcard | block | word
    wildcard   := "<*>"
    block      := "{" option ("|" option)* "}"
    option     := "~"? text

``{A|B}`` lists equally acceptable readings, ``{A}`` marks optional text
(an empty option is added automatically when a block has a single option),
``~`` flags an option as containing minor spelling errors so it can be
dropped in strict evaluation, and ``<*>`` matches any word sequence,
including the empty one.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

WILDCARD_MARK = "<*>"

# Stripped from token edges by default: sentence punctuation and quoting,
# plus the grammar's structural characters so stray braces/pipes in a
# hypothesis cannot collide with annotation markup. In-word hyphens,
# apostrophes and '%' survive ("4-th" is one token, "1 %" is two).
DEFAULT_PUNCTUATION = '.,!?;:"«»()[]…{}|'


class AnnotationError(ValueError):
    """Base for annotation grammar errors, carrying the offending span."""

    def __init__(self, message: str, offset: int | None = None, span: str = ""):
        self.offset = offset
        self.span = span
        detail = message
        if span:
            detail += f": {span!r}"
        if offset is not None:
            detail += f" (offset {offset})"
        super().__init__(detail)


class UnbalancedBrace(AnnotationError):
    pass


class NestedBlock(AnnotationError):
    pass


class WildcardInsideBlock(AnnotationError):
    pass


class EmptyAnnotation(AnnotationError):
    pass


class BlockEmptiedByStrictMode(AnnotationError):
    pass


class EvalMode(str, enum.Enum):
    STRICT = "strict"
    PERMISSIVE = "permissive"


@dataclass(frozen=True)
class TokenizerConfig:
    """How raw text becomes tokens: the separator is Unicode whitespace."""

    lowercase: bool = True
    punctuation: str = DEFAULT_PUNCTUATION

    def strip_chars(self) -> str:
        return self.punctuation


@dataclass(frozen=True)
class Token:
    """One alignment element: a normalized word plus its raw surface form."""

    text: str
    original: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.text:
            raise ValueError("Token text must be non-empty")
        if not self.original:
            object.__setattr__(self, "original", self.text)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Option:
    """One reading of a block; ``strict_violation`` marks the tilde flag."""

    tokens: tuple[Token, ...] = ()
    strict_violation: bool = False

    @property
    def is_empty(self) -> bool:
        return not self.tokens


@dataclass(frozen=True)
class Plain:
    token: Token


@dataclass(frozen=True)
class Block:
    options: tuple[Option, ...]

    def has_empty_option(self) -> bool:
        return any(o.is_empty for o in self.options)


@dataclass(frozen=True)
class Wildcard:
    pass


AnnotationSegment = Plain | Block | Wildcard


@dataclass(frozen=True)
class Annotation:
    segments: tuple[AnnotationSegment, ...]
    source_text: str = field(default="", compare=False)


def tokenize(text: str, config: TokenizerConfig | None = None) -> list[Token]:
    """Split on whitespace, strip edge punctuation, lowercase.

    Fragments that are punctuation-only are dropped.
    """
    config = config or TokenizerConfig()
    strip_set = config.strip_chars()
    tokens = []
    for raw in text.split():
        norm = raw.strip(strip_set)
        if not norm:
            continue
        if config.lowercase:
            norm = norm.lower()
        tokens.append(Token(text=norm, original=raw))
    return tokens


def _parse_block(content: str, open_offset: int, config: TokenizerConfig) -> Block:
    options = []
    for piece in content.split("|"):
        stripped = piece.lstrip()
        strict = stripped.startswith("~")
        if strict:
            stripped = stripped[1:]
        tokens = tuple(tokenize(stripped, config))
        if not tokens:
            # a bare "~" option degenerates to the empty option
            strict = False
        options.append(Option(tokens=tokens, strict_violation=strict))

    # keep at most one empty option
    deduped: list[Option] = []
    seen_empty = False
    for opt in options:
        if opt.is_empty:
            if seen_empty:
                continue
            seen_empty = True
        deduped.append(opt)

    # a single-option block is implicitly optional: {well} == {well|}
    if len(deduped) == 1 and not deduped[0].is_empty:
        deduped.append(Option())
    return Block(options=tuple(deduped))


def parse_annotation(text: str, config: TokenizerConfig | None = None) -> Annotation:
    """Parse annotation markup into an AST.

    Raises UnbalancedBrace, NestedBlock, WildcardInsideBlock or
    EmptyAnnotation; messages carry the offending span and offset.
    """
    config = config or TokenizerConfig()
    segments: list[AnnotationSegment] = []
    plain_buf: list[str] = []

    def flush():
        if plain_buf:
            for tok in tokenize("".join(plain_buf), config):
                segments.append(Plain(tok))
            plain_buf.clear()

    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "{":
            flush()
            close = -1
            j = i + 1
            while j < n:
                cj = text[j]
                if cj == "}":
                    close = j
                    break
                if cj == "{":
                    raise NestedBlock("nested block", j, text[i : j + 1])
                if text.startswith(WILDCARD_MARK, j):
                    raise WildcardInsideBlock(
                        "wildcard inside block", j, text[i : j + len(WILDCARD_MARK)]
                    )
                j += 1
            if close < 0:
                raise UnbalancedBrace("unbalanced brace", i, text[i : i + 16])
            segments.append(_parse_block(text[i + 1 : close], i, config))
            i = close + 1
        elif ch == "}":
            raise UnbalancedBrace("unbalanced brace", i, text[max(0, i - 15) : i + 1])
        elif text.startswith(WILDCARD_MARK, i):
            flush()
            segments.append(Wildcard())
            i += len(WILDCARD_MARK)
        else:
            plain_buf.append(ch)
            i += 1
    flush()

    if not segments:
        raise EmptyAnnotation("annotation has no segments", 0, text[:16])
    return Annotation(segments=tuple(segments), source_text=text)


def _serialize_option(option: Option) -> str:
    prefix = "~" if option.strict_violation else ""
    return prefix + " ".join(t.text for t in option.tokens)


def serialize(annotation: Annotation) -> str:
    """Canonical text form; parsing it back yields an equal AST."""
    parts = []
    for seg in annotation.segments:
        if isinstance(seg, Plain):
            parts.append(seg.token.text)
        elif isinstance(seg, Wildcard):
            parts.append(WILDCARD_MARK)
        else:
            parts.append("{" + "|".join(_serialize_option(o) for o in seg.options) + "}")
    return " ".join(parts)


def apply_mode(annotation: Annotation, mode: EvalMode | str) -> Annotation:
    """Strict mode drops tilde-flagged options; permissive is the identity."""
    mode = EvalMode(mode)
    if mode is EvalMode.PERMISSIVE:
        return annotation
    segments: list[AnnotationSegment] = []
    for seg in annotation.segments:
        if isinstance(seg, Block):
            kept = tuple(o for o in seg.options if not o.strict_violation)
            if not kept:
                raise BlockEmptiedByStrictMode(
                    "strict mode removed every option of block "
                    + "{" + "|".join(_serialize_option(o) for o in seg.options) + "}"
                )
            seg = Block(options=kept)
        segments.append(seg)
    return Annotation(segments=tuple(segments), source_text=annotation.source_text)
