"""Corpus records: one annotated sample with named model hypotheses,
optionally word timestamps and a streaming session history, stored as
JSONL (one record per line, ``"v": 1`` schema tag on every record)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .annotation import parse_annotation
from .schemas import validate


class CorpusError(ValueError):
    pass


@dataclass
class CorpusRecord:
    id: str
    annotation: str
    hypotheses: dict[str, str] = field(default_factory=dict)
    timed_words: list[dict] | None = None
    # path (relative to the corpus file) or inline event list
    session_history: str | list[dict] | None = None

    def to_json(self) -> dict:
        out = {
            "v": 1,
            "id": self.id,
            "annotation": self.annotation,
            "hypotheses": self.hypotheses,
        }
        if self.timed_words is not None:
            out["timed_words"] = self.timed_words
        if self.session_history is not None:
            out["session_history"] = self.session_history
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CorpusRecord":
        validate(data, "corpus_record")
        return cls(
            id=data["id"],
            annotation=data["annotation"],
            hypotheses=dict(data["hypotheses"]),
            timed_words=data.get("timed_words"),
            session_history=data.get("session_history"),
        )


def load_corpus(path: Path | str) -> list[CorpusRecord]:
    path = Path(path)
    records = []
    seen = set()
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = CorpusRecord.from_json(json.loads(line))
        except Exception as exc:
            raise CorpusError(f"{path}:{lineno}: {exc}") from exc
        if record.id in seen:
            raise CorpusError(f"{path}:{lineno}: duplicate sample id {record.id!r}")
        seen.add(record.id)
        records.append(record)
    return records


def save_corpus(path: Path | str, records: list[CorpusRecord]) -> None:
    """Atomic rewrite: the server serializes concurrent edits around this."""
    path = Path(path)
    payload = "".join(
        json.dumps(r.to_json(), ensure_ascii=False, sort_keys=True) + "\n"
        for r in records
    )
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(payload, encoding="utf-8")
    tmp.replace(path)


def check_annotations(records: list[CorpusRecord]) -> dict[str, str]:
    """Parse every annotation; returns {id: error message} for the bad ones."""
    problems = {}
    for record in records:
        try:
            parse_annotation(record.annotation)
        except ValueError as exc:
            problems[record.id] = str(exc)
    return problems


def load_history_events(record: CorpusRecord, corpus_path: Path | str) -> list[dict]:
    if record.session_history is None:
        raise CorpusError(f"sample {record.id!r} has no session history")
    if isinstance(record.session_history, list):
        return record.session_history
    hist_path = Path(corpus_path).parent / record.session_history
    return [
        json.loads(line)
        for line in hist_path.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
