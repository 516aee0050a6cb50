"""Subword-aware text embeddings: unsupervised skipgram and a supervised
one-vs-all classifier sharing the embedding input layer.

Words are whitespace tokens. Each vocabulary word owns one input row;
character n-grams of the bracketed word ("<word>") are hashed (FNV-1a,
32-bit) into ``bucket_count`` extra rows placed after the vocabulary.
A word's vector is the mean of its word row and subword rows; a
sentence vector is the mean of the word vectors of all its tokens,
out-of-vocabulary tokens contributing subword rows only (or a zero
vector when they have none).

Training is single-threaded and bit-reproducible for a fixed seed.
Progress is reported as one "epoch<TAB>mean_loss" line per epoch on
standard error.
"""

from __future__ import annotations

import sys
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ._kernels import skipgram_train, supervised_train
from .errors import EmptyVocabulary, InvalidValue, LengthMismatch, SingleClass

_FNV_OFFSET = 2166136261
_FNV_PRIME = 16777619
_NEG_TABLE_SIZE = 1 << 20


@dataclass(frozen=True, slots=True)
class FastTextParams:
    dim: int = 100
    window: int = 5
    epochs: int = 5
    min_count: int = 1
    subword_min: int = 2
    subword_max: int = 5
    bucket_count: int = 2_000_000
    negatives: int = 5
    learning_rate: float = 0.05
    seed: int = 1

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise InvalidValue("fasttext.dim", "must be positive")
        if self.window < 1:
            raise InvalidValue("fasttext.window", "must be positive")
        if self.epochs < 0:
            raise InvalidValue("fasttext.epochs", "must be >= 0")
        if self.min_count < 1:
            raise InvalidValue("fasttext.min_count", "must be positive")
        if self.bucket_count < 1:
            raise InvalidValue("fasttext.bucket_count", "must be positive")
        if self.negatives < 1:
            raise InvalidValue("fasttext.negatives", "must be positive")
        if self.learning_rate <= 0:
            raise InvalidValue("fasttext.learning_rate", "must be positive")

    @property
    def subwords_enabled(self) -> bool:
        # minn > maxn is the documented sentinel for "no subwords"
        return self.subword_min <= self.subword_max


def fnv1a_32(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFF
    return h


def subword_ids(word: str, params: FastTextParams, vocab_size: int = 0) -> list[int]:
    """Hashed row ids of the character n-grams of ``<word>``.

    Grams are emitted with length ascending then position ascending and
    hashed modulo bucket_count, offset past the ``vocab_size`` word rows.
    Duplicated grams keep their repeated ids.
    """
    if not word:
        raise InvalidValue("word", "must be non-empty")
    if not params.subwords_enabled:
        return []
    wrapped = "<" + word + ">"
    ids: list[int] = []
    for k in range(params.subword_min, params.subword_max + 1):
        for i in range(len(wrapped) - k + 1):
            gram = wrapped[i:i + k]
            ids.append(vocab_size + fnv1a_32(gram.encode("utf-8")) % params.bucket_count)
    return ids


@dataclass(frozen=True)
class EmbeddingModel:
    """Skipgram word + subword vectors (input side) and context vectors."""

    params: FastTextParams
    words: tuple[str, ...]
    word_index: dict[str, int]
    input_vectors: np.ndarray   # (vocab + buckets, dim)
    output_vectors: np.ndarray  # (vocab, dim)

    @property
    def vocab_size(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class SupervisedTextModel:
    """One binary logistic output per label over the shared input layer."""

    params: FastTextParams
    words: tuple[str, ...]
    word_index: dict[str, int]
    input_vectors: np.ndarray
    label_matrix: np.ndarray    # (labels, dim)

    @property
    def vocab_size(self) -> int:
        return len(self.words)

    @property
    def label_count(self) -> int:
        return self.label_matrix.shape[0]


def _build_vocab(texts, min_count: int) -> tuple[list[str], Counter]:
    counts: Counter[str] = Counter()
    for text in texts:
        counts.update(text.split())
    words = sorted(
        (w for w, c in counts.items() if c >= min_count),
        key=lambda w: (-counts[w], w),
    )
    return words, counts


def _subword_table(words, params: FastTextParams, vocab_size: int):
    flat: list[int] = []
    offsets = np.zeros(len(words) + 1, dtype=np.int64)
    for i, word in enumerate(words):
        subs = subword_ids(word, params, vocab_size)
        flat.extend(subs)
        offsets[i + 1] = len(flat)
    return np.asarray(flat, dtype=np.int64), offsets


def _encode_stream(texts, word_index):
    stream: list[int] = []
    offsets = np.zeros(len(texts) + 1, dtype=np.int64)
    for i, text in enumerate(texts):
        for tok in text.split():
            idx = word_index.get(tok)
            if idx is not None:
                stream.append(idx)
        offsets[i + 1] = len(stream)
    return np.asarray(stream, dtype=np.int64), offsets


def _negative_table(words, counts) -> np.ndarray:
    """Unigram^0.75 sampling table, filled deterministically."""
    freq = np.array([counts[w] for w in words], dtype=np.float64) ** 0.75
    cum = np.cumsum(freq)
    positions = (np.arange(_NEG_TABLE_SIZE) + 0.5) / _NEG_TABLE_SIZE * cum[-1]
    return np.searchsorted(cum, positions).astype(np.int64)


def _init_vectors(params: FastTextParams, vocab_size: int, rng: np.random.Generator):
    n_rows = vocab_size + (params.bucket_count if params.subwords_enabled else 0)
    # uniform in (-1/dim, 1/dim), the usual embedding init scale
    input_vectors = (rng.random((n_rows, params.dim)) * 2.0 - 1.0) / params.dim
    return input_vectors


def _report_progress(tag: str, losses) -> None:
    for epoch, loss in enumerate(losses):
        print(f"{tag}\tepoch {epoch}\tmean_loss {loss:.6f}", file=sys.stderr)


def train_skipgram(texts, params: FastTextParams) -> EmbeddingModel:
    """SGD skipgram with negative sampling; window half-width sampled
    uniformly in [1, window] per position; learning rate decays linearly
    to zero over the scheduled updates."""
    texts = list(texts)
    words, counts = _build_vocab(texts, params.min_count)
    if not words:
        raise EmptyVocabulary("no word reaches min_count")
    word_index = {w: i for i, w in enumerate(words)}
    vocab_size = len(words)
    sub_flat, sub_offsets = _subword_table(words, params, vocab_size)
    stream, text_offsets = _encode_stream(texts, word_index)
    rng = np.random.default_rng(params.seed)
    input_vectors = _init_vectors(params, vocab_size, rng)
    output_vectors = np.zeros((vocab_size, params.dim))
    if params.epochs > 0 and len(stream) > 0:
        neg_table = _negative_table(words, counts)
        loss_sums, pair_counts = skipgram_train(
            stream, text_offsets, sub_flat, sub_offsets,
            input_vectors, output_vectors, neg_table,
            int(params.window), int(params.negatives),
            float(params.learning_rate), int(params.epochs), int(params.seed),
        )
        means = np.divide(loss_sums, np.maximum(pair_counts, 1))
        _report_progress("skipgram", means)
    return EmbeddingModel(
        params=params, words=tuple(words), word_index=word_index,
        input_vectors=input_vectors, output_vectors=output_vectors,
    )


def _doc_rows(text: str, word_index, sub_cache, params: FastTextParams,
              vocab_size: int) -> list[int]:
    """All input rows of a text: word row + subword rows per token;
    OOV tokens contribute subword rows only."""
    rows: list[int] = []
    for tok in text.split():
        idx = word_index.get(tok)
        if idx is not None:
            rows.append(idx)
        if params.subwords_enabled:
            cached = sub_cache.get(tok)
            if cached is None:
                cached = subword_ids(tok, params, vocab_size)
                sub_cache[tok] = cached
            rows.extend(cached)
    return rows


def train_supervised(texts, labels, params: FastTextParams,
                     label_count: int | None = None) -> SupervisedTextModel:
    """One-vs-all binary logistic SGD over mean-pooled input rows."""
    texts = list(texts)
    labels = list(labels)
    if len(texts) != len(labels):
        raise LengthMismatch("texts and labels must have equal lengths")
    if not texts:
        raise EmptyVocabulary("no training texts")
    distinct = sorted(set(labels))
    if len(distinct) < 2:
        raise SingleClass()
    if label_count is None:
        label_count = max(labels) + 1
    if min(labels) < 0 or max(labels) >= label_count:
        raise InvalidValue("labels", f"indices outside [0, {label_count})")
    words, _counts = _build_vocab(texts, params.min_count)
    if not words:
        raise EmptyVocabulary("no word reaches min_count")
    word_index = {w: i for i, w in enumerate(words)}
    vocab_size = len(words)
    sub_cache: dict[str, list[int]] = {}
    flat: list[int] = []
    offsets = np.zeros(len(texts) + 1, dtype=np.int64)
    for i, text in enumerate(texts):
        flat.extend(_doc_rows(text, word_index, sub_cache, params, vocab_size))
        offsets[i + 1] = len(flat)
    doc_rows = np.asarray(flat, dtype=np.int64)
    rng = np.random.default_rng(params.seed)
    input_vectors = _init_vectors(params, vocab_size, rng)
    label_matrix = np.zeros((label_count, params.dim))
    if params.epochs > 0:
        losses = supervised_train(
            doc_rows, offsets, np.asarray(labels, dtype=np.int64),
            int(label_count), input_vectors, label_matrix,
            float(params.learning_rate), int(params.epochs),
        )
        _report_progress("supervised", losses)
    return SupervisedTextModel(
        params=params, words=tuple(words), word_index=word_index,
        input_vectors=input_vectors, label_matrix=label_matrix,
    )


def _word_vector(model, token: str, sub_cache) -> np.ndarray | None:
    rows: list[int] = []
    idx = model.word_index.get(token)
    if idx is not None:
        rows.append(idx)
    if model.params.subwords_enabled:
        cached = sub_cache.get(token)
        if cached is None:
            cached = subword_ids(token, model.params, model.vocab_size)
            sub_cache[token] = cached
        rows.extend(cached)
    if not rows:
        return None
    return model.input_vectors[np.asarray(rows, dtype=np.int64)].mean(axis=0)


def sentence_vector(model, text: str) -> np.ndarray:
    """Mean of the word vectors of all whitespace tokens; tokens without
    any row (OOV with subwords disabled) contribute zero vectors; empty
    text gives the zero vector."""
    tokens = text.split()
    dim = model.params.dim
    if not tokens:
        return np.zeros(dim)
    sub_cache: dict[str, list[int]] = {}
    acc = np.zeros(dim)
    for tok in tokens:
        vec = _word_vector(model, tok, sub_cache)
        if vec is not None:
            acc += vec
    return acc / len(tokens)


def extract_features(model, texts) -> np.ndarray:
    """Order-preserving (len(texts), dim) matrix of sentence vectors."""
    texts = list(texts)
    out = np.zeros((len(texts), model.params.dim))
    for i, text in enumerate(texts):
        out[i] = sentence_vector(model, text)
    return out


def _supervised_hidden(model: SupervisedTextModel, text: str) -> np.ndarray:
    """Flat mean over all input rows of the text (training-time pooling)."""
    sub_cache: dict[str, list[int]] = {}
    rows = _doc_rows(text, model.word_index, sub_cache, model.params,
                     model.vocab_size)
    if not rows:
        return np.zeros(model.params.dim)
    return model.input_vectors[np.asarray(rows, dtype=np.int64)].mean(axis=0)


def predict_scores(model: SupervisedTextModel, text: str) -> np.ndarray:
    """Per-label sigmoid scores of one text under the supervised model."""
    hidden = _supervised_hidden(model, text)
    raw = model.label_matrix @ hidden
    clamped = np.clip(raw, -30.0, 30.0)
    return 1.0 / (1.0 + np.exp(-clamped))


def ova_batch_loss_grad(input_vectors, label_matrix, doc_rows, doc_offsets,
                        labels):
    """Total OVA logistic loss over a frozen batch with analytic gradients.

    Returns (loss, grad_label_matrix, grad_input_vectors). This mirrors
    the per-example math inside the supervised kernel (mean pooling with
    1/m chain rule) and exists so finite-difference checks can exercise
    the same formulas outside the SGD loop.
    """
    n_docs = len(doc_offsets) - 1
    n_labels = label_matrix.shape[0]
    loss = 0.0
    grad_labels = np.zeros_like(label_matrix)
    grad_inputs = np.zeros_like(input_vectors)
    for i in range(n_docs):
        rows = doc_rows[doc_offsets[i]:doc_offsets[i + 1]]
        if len(rows) == 0:
            continue
        hidden = input_vectors[rows].mean(axis=0)
        f = label_matrix @ hidden
        f = np.clip(f, -30.0, 30.0)
        e = np.exp(-f)
        p = 1.0 / (1.0 + e)
        y = np.zeros(n_labels)
        y[labels[i]] = 1.0
        loss += -np.sum(y * np.log(p) + (1.0 - y) * np.log(e / (1.0 + e)))
        coef = p - y  # dL/df
        grad_labels += np.outer(coef, hidden)
        g_hidden = label_matrix.T @ coef
        for r in rows:
            grad_inputs[r] += g_hidden / len(rows)
    return loss, grad_labels, grad_inputs
