"""End-to-end fitted pipelines: preprocessing + features + linear SVC.

A pipeline is fitted on training data only and is immutable afterwards.
``save_model``/``load_model`` round-trip every fitted pipeline variant to
a versioned binary file such that predictions are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

import numpy as np

from . import embedding as emb
from . import svc as svc_mod
from . import tfidf as tfidf_mod
from .corpus import Corpus, split_labels
from .errors import CorruptFile, InvalidValue
from .morph import MORPH_MODES, Lexicon, MorphConfig, apply_morph
from .persist import BinaryReader, BinaryWriter
from .surface import SurfaceConfig, apply_surface

FEATURE_SOURCES: tuple[str, ...] = (
    "tfidf_union", "fasttext_supervised", "fasttext_unsupervised"
)


@dataclass(frozen=True)
class PipelineParams:
    """Fully pinned parameter assignment for one fitted pipeline."""

    surface: SurfaceConfig
    morph: MorphConfig
    feature_source: str
    ngram: tuple[int, int] | None
    max_features: int | None
    weights: tuple[float, float, float]
    svc: svc_mod.SvcParams
    fasttext: emb.FastTextParams | None

    def __post_init__(self) -> None:
        if self.feature_source not in FEATURE_SOURCES:
            raise InvalidValue(
                "feature_source", f"must be one of {FEATURE_SOURCES}"
            )
        if self.feature_source == "tfidf_union":
            if self.ngram is None:
                raise InvalidValue("ngram", "required for tfidf_union")
        elif self.fasttext is None:
            raise InvalidValue("fasttext", "required for fasttext sources")

    def with_seed(self, seed: int) -> "PipelineParams":
        new_svc = replace(self.svc, seed=seed)
        new_ft = replace(self.fasttext, seed=seed) if self.fasttext else None
        return replace(self, svc=new_svc, fasttext=new_ft)


@dataclass
class Pipeline:
    params: PipelineParams
    stoplist: frozenset[str]
    lexicon: Lexicon
    union: tfidf_mod.UnionModel | None
    skipgram: emb.EmbeddingModel | None
    supervised: emb.SupervisedTextModel | None
    svc: svc_mod.LinearSvcModel

    @property
    def class_names(self) -> tuple[str, ...]:
        return self.svc.class_names

    def preprocess(self, text: str) -> str:
        text = apply_surface(text, self.params.surface, self.stoplist)
        return apply_morph(text, self.params.morph, self.lexicon)

    def features(self, texts):
        cleaned = [self.preprocess(t) for t in texts]
        if self.params.feature_source == "tfidf_union":
            return tfidf_mod.transform_union_csr(cleaned, self.union)
        model = (
            self.supervised
            if self.params.feature_source == "fasttext_supervised"
            else self.skipgram
        )
        return emb.extract_features(model, cleaned)

    def predict_indices(self, texts) -> np.ndarray:
        return svc_mod.predict_many(self.svc, self.features(texts))

    def predict_labels(self, texts) -> list[str]:
        names = self.svc.class_names
        return [names[int(i)] for i in self.predict_indices(texts)]


def fit_pipeline(train: Corpus, params: PipelineParams,
                 stoplist=frozenset(), lexicon: Lexicon | None = None) -> Pipeline:
    """Fit every stage on the training corpus only."""
    if lexicon is None:
        lexicon = Lexicon()
    texts, label_idx = split_labels(train)
    cleaned = [
        apply_morph(apply_surface(t, params.surface, stoplist),
                    params.morph, lexicon)
        for t in texts
    ]
    union = skipgram = supervised = None
    if params.feature_source == "tfidf_union":
        m, n = params.ngram
        configs = tuple(
            tfidf_mod.AnalyzerConfig(kind=k, ngram_min=m, ngram_max=n,
                                     max_features=params.max_features)
            for k in tfidf_mod.ANALYZER_KINDS
        )
        union = tfidf_mod.fit_union(cleaned, configs, params.weights)
        features = tfidf_mod.transform_union_csr(cleaned, union)
    elif params.feature_source == "fasttext_supervised":
        supervised = emb.train_supervised(
            cleaned, label_idx, params.fasttext,
            label_count=len(train.label_set),
        )
        features = emb.extract_features(supervised, cleaned)
    else:
        skipgram = emb.train_skipgram(cleaned, params.fasttext)
        features = emb.extract_features(skipgram, cleaned)
    model = svc_mod.train_ovr(
        features, label_idx, len(train.label_set), params.svc,
        class_names=train.label_set,
    )
    return Pipeline(
        params=params, stoplist=frozenset(stoplist), lexicon=lexicon,
        union=union, skipgram=skipgram, supervised=supervised, svc=model,
    )


# --- persistence ------------------------------------------------------------

def _write_surface(w: BinaryWriter, config: SurfaceConfig) -> None:
    mask = 0
    for bit, f in enumerate(fields(SurfaceConfig)):
        if getattr(config, f.name):
            mask |= 1 << bit
    w.u8(mask)


def _read_surface(r: BinaryReader) -> SurfaceConfig:
    mask = r.u8()
    flags = {
        f.name: bool((mask >> bit) & 1)
        for bit, f in enumerate(fields(SurfaceConfig))
    }
    return SurfaceConfig(**flags)


def _write_tfidf_block(w: BinaryWriter, block: tfidf_mod.TfidfModel) -> None:
    w.u8(tfidf_mod.ANALYZER_KINDS.index(block.config.kind))
    w.u32(block.config.ngram_min)
    w.u32(block.config.ngram_max)
    w.u64(block.config.max_features or 0)
    w.u64(block.document_count)
    terms = block.terms_in_index_order()
    w.u64(len(terms))
    for term in terms:
        w.text(term)
    w.f64_array(block.idf)


def _read_tfidf_block(r: BinaryReader) -> tfidf_mod.TfidfModel:
    kind_idx = r.u8()
    if kind_idx >= len(tfidf_mod.ANALYZER_KINDS):
        raise CorruptFile(r.offset, "bad analyzer kind")
    m = r.u32()
    n = r.u32()
    maxf = r.u64()
    doc_count = r.u64()
    term_count = r.u64()
    vocabulary = {r.text(): i for i in range(term_count)}
    if len(vocabulary) != term_count:
        raise CorruptFile(r.offset, "duplicate vocabulary terms")
    idf = r.f64_array((term_count,))
    config = tfidf_mod.AnalyzerConfig(
        kind=tfidf_mod.ANALYZER_KINDS[kind_idx], ngram_min=m, ngram_max=n,
        max_features=maxf or None,
    )
    return tfidf_mod.TfidfModel(
        config=config, vocabulary=vocabulary, idf=idf, document_count=doc_count
    )


def _write_ft_params(w: BinaryWriter, p: emb.FastTextParams) -> None:
    w.u32(p.dim)
    w.u32(p.window)
    w.u32(p.epochs)
    w.u32(p.min_count)
    w.i64(p.subword_min)
    w.i64(p.subword_max)
    w.u64(p.bucket_count)
    w.u32(p.negatives)
    w.f64(p.learning_rate)
    w.i64(p.seed)


def _read_ft_params(r: BinaryReader) -> emb.FastTextParams:
    return emb.FastTextParams(
        dim=r.u32(), window=r.u32(), epochs=r.u32(), min_count=r.u32(),
        subword_min=r.i64(), subword_max=r.i64(), bucket_count=r.u64(),
        negatives=r.u32(), learning_rate=r.f64(), seed=r.i64(),
    )


def _write_matrix(w: BinaryWriter, arr: np.ndarray) -> None:
    w.u64(arr.shape[0])
    w.u64(arr.shape[1])
    w.f64_array(arr)


def _read_matrix(r: BinaryReader) -> np.ndarray:
    rows = r.u64()
    cols = r.u64()
    return r.f64_array((rows, cols))


def save_model(path, pipeline: Pipeline) -> None:
    params = pipeline.params
    with open(path, "wb") as fh:
        w = BinaryWriter(fh)
        w.header()
        _write_surface(w, params.surface)
        w.u8(MORPH_MODES.index(params.morph.mode))
        stoplist = sorted(pipeline.stoplist)
        w.u32(len(stoplist))
        for tok in stoplist:
            w.text(tok)
        entries = sorted(pipeline.lexicon.entries.items())
        w.u32(len(entries))
        for surface_form, lemma in entries:
            w.text(surface_form)
            w.text(lemma)
        w.u8(FEATURE_SOURCES.index(params.feature_source))
        if params.feature_source == "tfidf_union":
            union = pipeline.union
            w.u32(union.blocks[0].config.ngram_min)  # shared (m, n) of the point
            w.u32(union.blocks[0].config.ngram_max)
            for block in union.blocks:
                _write_tfidf_block(w, block)
            for weight in union.weights:
                w.f64(weight)
        else:
            model = (
                pipeline.supervised
                if params.feature_source == "fasttext_supervised"
                else pipeline.skipgram
            )
            _write_ft_params(w, model.params)
            w.u64(len(model.words))
            for word in model.words:
                w.text(word)
            _write_matrix(w, model.input_vectors)
            if params.feature_source == "fasttext_supervised":
                _write_matrix(w, model.label_matrix)
            else:
                _write_matrix(w, model.output_vectors)
        model = pipeline.svc
        w.u32(model.class_count)
        for name in model.class_names:
            w.text(name)
        _write_matrix(w, model.weight_matrix)
        w.f64_array(model.bias)
        w.f64(model.params.C)
        w.f64(model.params.tolerance)
        w.u32(model.params.max_sweeps)
        w.i64(model.params.seed)


def load_model(path) -> Pipeline:
    with open(path, "rb") as fh:
        r = BinaryReader(fh)
        r.header()
        surface = _read_surface(r)
        mode_idx = r.u8()
        if mode_idx >= len(MORPH_MODES):
            raise CorruptFile(r.offset, "bad morph mode")
        morph = MorphConfig(mode=MORPH_MODES[mode_idx])
        stoplist = frozenset(r.text() for _ in range(r.u32()))
        lexicon = Lexicon(entries={r.text(): r.text() for _ in range(r.u32())})
        source_idx = r.u8()
        if source_idx >= len(FEATURE_SOURCES):
            raise CorruptFile(r.offset, "bad feature source")
        feature_source = FEATURE_SOURCES[source_idx]
        union = skipgram = supervised = None
        ngram = None
        max_features = None
        weights = (1.0, 1.0, 1.0)
        ft_params = None
        if feature_source == "tfidf_union":
            ngram = (r.u32(), r.u32())
            blocks = tuple(_read_tfidf_block(r) for _ in range(3))
            weights = (r.f64(), r.f64(), r.f64())
            union = tfidf_mod.UnionModel(blocks=blocks, weights=weights)
            max_features = blocks[0].config.max_features
        else:
            ft_params = _read_ft_params(r)
            words = tuple(r.text() for _ in range(r.u64()))
            word_index = {word: i for i, word in enumerate(words)}
            input_vectors = _read_matrix(r)
            if feature_source == "fasttext_supervised":
                label_matrix = _read_matrix(r)
                supervised = emb.SupervisedTextModel(
                    params=ft_params, words=words, word_index=word_index,
                    input_vectors=input_vectors, label_matrix=label_matrix,
                )
            else:
                output_vectors = _read_matrix(r)
                skipgram = emb.EmbeddingModel(
                    params=ft_params, words=words, word_index=word_index,
                    input_vectors=input_vectors, output_vectors=output_vectors,
                )
        class_count = r.u32()
        class_names = tuple(r.text() for _ in range(class_count))
        weight_matrix = _read_matrix(r)
        bias = r.f64_array((class_count,))
        svc_params = svc_mod.SvcParams(
            C=r.f64(), tolerance=r.f64(), max_sweeps=r.u32(), seed=r.i64(),
        )
        model = svc_mod.LinearSvcModel(
            weight_matrix=weight_matrix, bias=bias,
            class_names=class_names, params=svc_params,
        )
    params = PipelineParams(
        surface=surface, morph=morph, feature_source=feature_source,
        ngram=ngram, max_features=max_features, weights=weights,
        svc=svc_params, fasttext=ft_params,
    )
    return Pipeline(
        params=params, stoplist=stoplist, lexicon=lexicon,
        union=union, skipgram=skipgram, supervised=supervised, svc=model,
    )
