"""Document type and JSONL corpus input/output.

Corpus format: one JSON object per line, UTF-8:

    {"text": str, "topic": str|null, "sentiment": "pos"|"neg"|"neu"|null,
     "sarcasm": true|false|null}

Null labels are allowed only where the consuming command permits.
"""

import json
from dataclasses import dataclass

from .errors import DataFormatError

SENTIMENTS = ("neg", "neu", "pos")


@dataclass
class Document:
    text: str
    topic: str | None = None
    sentiment: str | None = None
    sarcasm: bool | None = None

    def __post_init__(self):
        if self.sentiment is not None and self.sentiment not in SENTIMENTS:
            raise DataFormatError(
                f"sentiment must be one of {SENTIMENTS}, got {self.sentiment!r}"
            )

    def resolved_label(self):
        """Gold final label: a sarcastic positive resolves to negative."""
        if self.sentiment == "pos" and self.sarcasm:
            return "neg"
        return self.sentiment

    def to_dict(self):
        return {
            "text": self.text,
            "topic": self.topic,
            "sentiment": self.sentiment,
            "sarcasm": self.sarcasm,
        }


def read_jsonl(path):
    """Load a corpus from JSONL, validating each row."""
    docs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"invalid JSON ({exc.msg})", path, lineno)
            if not isinstance(obj, dict) or "text" not in obj:
                raise DataFormatError("row must be an object with a 'text' field",
                                      path, lineno)
            try:
                docs.append(Document(
                    text=str(obj["text"]),
                    topic=obj.get("topic"),
                    sentiment=obj.get("sentiment"),
                    sarcasm=obj.get("sarcasm"),
                ))
            except DataFormatError as exc:
                raise DataFormatError(exc.reason, path, lineno)
    return docs


def write_jsonl(docs, path):
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc.to_dict(), ensure_ascii=False,
                                sort_keys=True) + "\n")
