"""Word and character n-gram TF-IDF with a weighted three-block union.

Three analyzers produce term sequences:

* ``word``   — k-grams of consecutive whitespace tokens joined by single
  spaces, k in [m, n];
* ``char``   — all k-length scalar windows over the whole text, spaces
  included;
* ``char_wb`` — per whitespace token, padded with one space on each side,
  all k-length windows within the padded token; a padded token shorter
  than k is emitted once, whole, for that k.

Terms are emitted with k ascending, then position ascending. Fitting uses
smoothed idf ``ln((1 + N) / (1 + df)) + 1``; transforms multiply raw term
counts by idf and L2-normalize. The union concatenates the word, char and
char_wb blocks with per-block weights applied after normalization and no
re-normalization.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import EmptyCorpus, EmptyVocabulary, InvalidValue

ANALYZER_KINDS: tuple[str, ...] = ("word", "char", "char_wb")


@dataclass(frozen=True, slots=True)
class AnalyzerConfig:
    kind: str
    ngram_min: int
    ngram_max: int
    max_features: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ANALYZER_KINDS:
            raise InvalidValue("analyzer.kind", f"must be one of {ANALYZER_KINDS}")
        if not (1 <= self.ngram_min <= self.ngram_max):
            raise InvalidValue("analyzer.ngram_range", "need 1 <= m <= n")
        if self.max_features is not None and self.max_features < 1:
            raise InvalidValue("analyzer.max_features", "must be positive")


@dataclass(frozen=True)
class SparseVector:
    """Strictly increasing indices in [0, dimension), finite non-zero values."""

    dimension: int
    indices: np.ndarray
    values: np.ndarray

    def entries(self) -> list[tuple[int, float]]:
        return list(zip(self.indices.tolist(), self.values.tolist()))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dimension)
        out[self.indices] = self.values
        return out


def _empty_sparse(dimension: int) -> SparseVector:
    return SparseVector(
        dimension=dimension,
        indices=np.empty(0, dtype=np.int64),
        values=np.empty(0, dtype=np.float64),
    )


def analyze(text: str, config: AnalyzerConfig) -> list[str]:
    """Emit the term sequence for one text under the analyzer config."""
    m, n = config.ngram_min, config.ngram_max
    out: list[str] = []
    if config.kind == "word":
        tokens = text.split()
        for k in range(m, n + 1):
            for i in range(len(tokens) - k + 1):
                out.append(" ".join(tokens[i:i + k]))
    elif config.kind == "char":
        for k in range(m, n + 1):
            for i in range(len(text) - k + 1):
                out.append(text[i:i + k])
    else:  # char_wb
        tokens = text.split()
        for k in range(m, n + 1):
            for tok in tokens:
                padded = " " + tok + " "
                if len(padded) < k:
                    out.append(padded)
                else:
                    for i in range(len(padded) - k + 1):
                        out.append(padded[i:i + k])
    return out


@dataclass(frozen=True)
class TfidfModel:
    config: AnalyzerConfig
    vocabulary: dict[str, int]
    idf: np.ndarray
    document_count: int

    @property
    def dimension(self) -> int:
        return len(self.vocabulary)

    def terms_in_index_order(self) -> list[str]:
        terms = [""] * len(self.vocabulary)
        for term, idx in self.vocabulary.items():
            terms[idx] = term
        return terms


def fit(texts, config: AnalyzerConfig) -> TfidfModel:
    """Fit vocabulary and idf weights on a text collection.

    With max_features set, the terms with the highest total corpus
    frequency are kept, ties broken toward the lexicographically smaller
    term. Surviving terms get indices in lexicographic order.
    """
    texts = list(texts)
    if not texts:
        raise EmptyCorpus("cannot fit on an empty text collection")
    df: Counter[str] = Counter()
    tf: Counter[str] = Counter()
    for text in texts:
        counts = Counter(analyze(text, config))
        tf.update(counts)
        df.update(counts.keys())
    if not tf:
        raise EmptyVocabulary()
    if config.max_features is not None and len(tf) > config.max_features:
        kept = sorted(tf, key=lambda t: (-tf[t], t))[: config.max_features]
    else:
        kept = list(tf)
    vocabulary = {term: i for i, term in enumerate(sorted(kept))}
    n_docs = len(texts)
    idf = np.empty(len(vocabulary))
    for term, idx in vocabulary.items():
        idf[idx] = math.log((1.0 + n_docs) / (1.0 + df[term])) + 1.0
    return TfidfModel(
        config=config, vocabulary=vocabulary, idf=idf, document_count=n_docs
    )


def transform(text: str, model: TfidfModel) -> SparseVector:
    """Raw term counts times idf, L2-normalized; OOV terms are ignored."""
    vocab = model.vocabulary
    counts: Counter[int] = Counter()
    for term in analyze(text, model.config):
        idx = vocab.get(term)
        if idx is not None:
            counts[idx] += 1
    if not counts:
        return _empty_sparse(model.dimension)
    indices = np.array(sorted(counts), dtype=np.int64)
    values = np.array([counts[i] for i in indices], dtype=np.float64)
    values *= model.idf[indices]
    norm = math.sqrt(float(np.dot(values, values)))
    values /= norm
    return SparseVector(dimension=model.dimension, indices=indices, values=values)


@dataclass(frozen=True)
class UnionModel:
    """Word, char and char_wb blocks concatenated with per-block weights."""

    blocks: tuple[TfidfModel, TfidfModel, TfidfModel]
    weights: tuple[float, float, float]

    @property
    def dimension(self) -> int:
        return sum(b.dimension for b in self.blocks)

    def block_offsets(self) -> tuple[int, int, int]:
        d0 = self.blocks[0].dimension
        d1 = self.blocks[1].dimension
        return (0, d0, d0 + d1)


def _check_weights(weights) -> tuple[float, float, float]:
    ws = tuple(float(w) for w in weights)
    if len(ws) != 3:
        raise InvalidValue("weights", "need exactly three block weights")
    for w in ws:
        if not (0.0 < w <= 1.0):
            raise InvalidValue("weights", f"weight {w} outside (0, 1]")
    return ws


def fit_union(texts, configs, weights=(1.0, 1.0, 1.0)) -> UnionModel:
    """Fit the three blocks independently on the same texts."""
    configs = tuple(configs)
    if len(configs) != 3 or tuple(c.kind for c in configs) != ANALYZER_KINDS:
        raise InvalidValue("configs", "expect (word, char, char_wb) in that order")
    ws = _check_weights(weights)
    texts = list(texts)
    blocks = tuple(fit(texts, cfg) for cfg in configs)
    return UnionModel(blocks=blocks, weights=ws)


def transform_union(text: str, model: UnionModel) -> SparseVector:
    """Concatenate the weighted block vectors with index offsets."""
    offsets = model.block_offsets()
    idx_parts: list[np.ndarray] = []
    val_parts: list[np.ndarray] = []
    for block, weight, offset in zip(model.blocks, model.weights, offsets):
        vec = transform(text, block)
        if len(vec.indices):
            idx_parts.append(vec.indices + offset)
            val_parts.append(vec.values * weight)
    if not idx_parts:
        return _empty_sparse(model.dimension)
    return SparseVector(
        dimension=model.dimension,
        indices=np.concatenate(idx_parts),
        values=np.concatenate(val_parts),
    )


def stack_sparse(vectors) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Stack SparseVectors into CSR arrays (indptr, indices, data, dim)."""
    vectors = list(vectors)
    if not vectors:
        raise EmptyCorpus("no vectors to stack")
    dim = vectors[0].dimension
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    for i, vec in enumerate(vectors):
        if vec.dimension != dim:
            raise InvalidValue("vectors", "inconsistent dimensions")
        indptr[i + 1] = indptr[i] + len(vec.indices)
    if indptr[-1] == 0:
        indices = np.empty(0, dtype=np.int64)
        data = np.empty(0, dtype=np.float64)
    else:
        indices = np.concatenate([v.indices for v in vectors])
        data = np.concatenate([v.values for v in vectors])
    return indptr, indices, data, dim


def transform_union_csr(texts, model: UnionModel):
    """Batch transform_union into CSR arrays; one row per text."""
    return stack_sparse([transform_union(t, model) for t in texts])
