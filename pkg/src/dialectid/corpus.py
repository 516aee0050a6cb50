"""Labeled text corpora: TSV ingestion, writing, and descriptive statistics.

A corpus is an ordered, immutable collection of documents. The TSV format
is ``id<TAB>text<TAB>label`` for labeled data and ``id<TAB>text`` for
unlabeled data; tabs inside the text field are forbidden rather than
escaped. Files must be UTF-8.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import (
    DuplicateId,
    EmptyCorpus,
    InvalidEncoding,
    MalformedRow,
    UnlabeledDocument,
)


@dataclass(frozen=True, slots=True)
class Document:
    """One text record: a unique id, the text, and an optional label."""

    id: str
    text: str
    label: str | None = None


@dataclass(frozen=True)
class Corpus:
    """Ordered documents plus the sorted set of distinct label names.

    ``label_set`` is sorted lexicographically; its positions define the
    canonical label indices used by every downstream model.
    """

    documents: tuple[Document, ...]
    label_set: tuple[str, ...]

    @classmethod
    def from_documents(cls, documents) -> "Corpus":
        docs = tuple(documents)
        seen: set[str] = set()
        for doc in docs:
            if doc.id in seen:
                raise DuplicateId(doc.id)
            seen.add(doc.id)
        labels = sorted({d.label for d in docs if d.label is not None})
        return cls(documents=docs, label_set=tuple(labels))

    def texts(self) -> list[str]:
        return [d.text for d in self.documents]

    def label_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.label_set)}

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)


@dataclass(frozen=True, slots=True)
class StatsReport:
    """Descriptive counts over a corpus (raw or preprocessed)."""

    sentence_count: int
    word_count: int
    max_words_per_sentence: int
    min_words_per_sentence: int
    max_chars_per_sentence: int
    min_chars_per_sentence: int

    def as_kv(self) -> dict[str, int]:
        return {
            "sentence_count": self.sentence_count,
            "word_count": self.word_count,
            "max_words_per_sentence": self.max_words_per_sentence,
            "min_words_per_sentence": self.min_words_per_sentence,
            "max_chars_per_sentence": self.max_chars_per_sentence,
            "min_chars_per_sentence": self.min_chars_per_sentence,
        }

    def format_table(self) -> str:
        rows = [
            ("# sentences", self.sentence_count),
            ("# words", self.word_count),
            ("Max # word per sentence", self.max_words_per_sentence),
            ("Min # word per sentence", self.min_words_per_sentence),
            ("Max # char per sentence", self.max_chars_per_sentence),
            ("Min # char per sentence", self.min_chars_per_sentence),
        ]
        width = max(len(name) for name, _ in rows)
        return "\n".join(f"{name:<{width}}  {value}" for name, value in rows)


def load_tsv(path: str | os.PathLike, has_labels: bool = True) -> Corpus:
    """Load a corpus from a TSV file, preserving line order.

    Raises MalformedRow for a wrong field count, an empty id or empty
    text (documents must carry text at ingestion), DuplicateId for a
    repeated id, and InvalidEncoding for non-UTF-8 bytes. Empty lines
    are skipped.
    """
    expected_fields = 3 if has_labels else 2
    documents: list[Document] = []
    seen: set[str] = set()
    with open(path, "rb") as fh:
        raw = fh.read()
    for line_no, raw_line in enumerate(raw.split(b"\n"), start=1):
        if raw_line.endswith(b"\r"):
            raw_line = raw_line[:-1]
        if not raw_line:
            continue
        try:
            line = raw_line.decode("utf-8")
        except UnicodeDecodeError:
            raise InvalidEncoding(line_no) from None
        fields = line.split("\t")
        if len(fields) != expected_fields:
            raise MalformedRow(line_no)
        doc_id, text = fields[0], fields[1]
        if not doc_id:
            raise MalformedRow(line_no, "empty id")
        if not text:
            raise MalformedRow(line_no, "empty text")
        label: str | None = None
        if has_labels:
            label = fields[2]
            if not label:
                raise MalformedRow(line_no, "empty label")
        if doc_id in seen:
            raise DuplicateId(doc_id)
        seen.add(doc_id)
        documents.append(Document(id=doc_id, text=text, label=label))
    labels = sorted({d.label for d in documents if d.label is not None})
    return Corpus(documents=tuple(documents), label_set=tuple(labels))


def write_tsv(corpus: Corpus, path: str | os.PathLike) -> None:
    """Write a corpus back to TSV; inverse of load_tsv up to line endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for doc in corpus.documents:
            if doc.label is None:
                fh.write(f"{doc.id}\t{doc.text}\n")
            else:
                fh.write(f"{doc.id}\t{doc.text}\t{doc.label}\n")


def compute_stats(corpus: Corpus) -> StatsReport:
    """Sentence/word/char counts. Words are maximal runs of non-whitespace;
    chars are Unicode scalar values, nothing excluded."""
    if len(corpus) == 0:
        raise EmptyCorpus()
    word_counts = [len(d.text.split()) for d in corpus.documents]
    char_counts = [len(d.text) for d in corpus.documents]
    return StatsReport(
        sentence_count=len(corpus),
        word_count=sum(word_counts),
        max_words_per_sentence=max(word_counts),
        min_words_per_sentence=min(word_counts),
        max_chars_per_sentence=max(char_counts),
        min_chars_per_sentence=min(char_counts),
    )


def split_labels(corpus: Corpus) -> tuple[list[str], list[int]]:
    """Return (texts, label indices into the sorted label_set), order preserved."""
    index = corpus.label_index()
    texts: list[str] = []
    indices: list[int] = []
    for doc in corpus.documents:
        if doc.label is None:
            raise UnlabeledDocument(doc.id)
        texts.append(doc.text)
        indices.append(index[doc.label])
    return texts, indices
