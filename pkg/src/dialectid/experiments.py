"""Experiment engine: declarative configs, grid search, runs, reporting.

Four experiment layouts are supported:

* ``exp1`` — enumerate all 32 surface-cleanup combinations, n-gram TF-IDF
  union with unit weights;
* ``exp2`` — enumerate the 4 morphological modes, same features;
* ``exp3`` — embedding features (supervised or unsupervised), fixed
  preprocessing;
* ``exp4`` — weighted TF-IDF union with the weight triples searched.

A grid is the Cartesian product of the active dimensions in a fixed
order; every grid point is fitted on the training split and scored on
the dev split by macro-F1. Runs differ only by seed (base seed + run
index). The worker count for grid evaluation comes from the
``DIALECTID_WORKERS`` environment variable unless passed explicitly.
"""

from __future__ import annotations

import json
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from itertools import product

import numpy as np

from . import embedding as emb
from . import svc as svc_mod
from . import tfidf as tfidf_mod
from .corpus import Corpus
from .embedding import FastTextParams
from .errors import (
    EmptyGrid,
    EmptyResults,
    DialectIdError,
    GridPointError,
    InvalidValue,
    LabelMismatch,
    SchemaViolation,
    UnknownKey,
    UnlabeledDocument,
)
from .metrics import evaluate
from .morph import MORPH_MODES, Lexicon, MorphConfig, apply_morph, enumerate_morph_configs
from .pipeline import FEATURE_SOURCES, PipelineParams, Pipeline, fit_pipeline
from .surface import SurfaceConfig, apply_surface, enumerate_surface_configs
from .svc import SvcParams

EXPERIMENT_IDS: tuple[str, ...] = ("exp1", "exp2", "exp3", "exp4")

NGRAM_M_LIMIT = 3
NGRAM_N_LIMIT = 10

# all valid (m, n) pairs with m <= n inside the supported ranges: 27 pairs
FULL_NGRAM_PAIRS: tuple[tuple[int, int], ...] = tuple(
    (m, n)
    for m in range(1, NGRAM_M_LIMIT + 1)
    for n in range(1, NGRAM_N_LIMIT + 1)
    if m <= n
)

_DEFAULT_SMALL_PAIRS: tuple[tuple[int, int], ...] = ((1, 1), (1, 2))
_DEFAULT_WEIGHT_CANDIDATES: tuple[float, ...] = (0.5, 0.75, 1.0)


@dataclass(frozen=True)
class ExperimentSpec:
    id: str
    runs: int
    seed: int
    surface_all: bool
    surface: SurfaceConfig
    morph_all: bool
    morph: MorphConfig
    feature_source: str
    ngram_pairs: tuple[tuple[int, int], ...]
    max_features: tuple[int | None, ...]
    weight_grid: tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]]
    svc: SvcParams
    fasttext: FastTextParams


@dataclass(frozen=True)
class GridPoint:
    index: int
    surface: SurfaceConfig
    morph: MorphConfig
    feature_source: str
    ngram: tuple[int, int] | None
    max_features: int | None
    weights: tuple[float, float, float]

    def pipeline_params(self, spec: ExperimentSpec, run_seed: int) -> PipelineParams:
        params = PipelineParams(
            surface=self.surface,
            morph=self.morph,
            feature_source=self.feature_source,
            ngram=self.ngram,
            max_features=self.max_features,
            weights=self.weights,
            svc=spec.svc,
            fasttext=spec.fasttext if self.feature_source != "tfidf_union" else None,
        )
        return params.with_seed(run_seed)

    def flatten(self, spec: ExperimentSpec, run_seed: int) -> dict:
        out: dict = {"experiment": spec.id, "seed": run_seed}
        out.update(self.surface.as_dict())
        out["morph_mode"] = self.morph.mode
        out["feature_source"] = self.feature_source
        if self.ngram is not None:
            out["ngram_m"], out["ngram_n"] = self.ngram
            out["max_features"] = self.max_features
            out["w_word"], out["w_char"], out["w_char_wb"] = self.weights
        else:
            ft = spec.fasttext
            out.update(
                dim=ft.dim, window=ft.window, epochs=ft.epochs,
                min_count=ft.min_count, subword_min=ft.subword_min,
                subword_max=ft.subword_max, bucket_count=ft.bucket_count,
                negatives=ft.negatives, learning_rate=ft.learning_rate,
            )
        out["svc_C"] = spec.svc.C
        out["svc_tolerance"] = spec.svc.tolerance
        out["svc_max_sweeps"] = spec.svc.max_sweeps
        return out


@dataclass(frozen=True)
class GridScore:
    index: int
    point: GridPoint
    dev_macro_f1: float


@dataclass(frozen=True)
class RunResult:
    spec_id: str
    run_index: int
    chosen_config: dict
    dev_macro_f1: float
    test_macro_f1: float | None
    wall_time: float


# --- config parsing ---------------------------------------------------------

_TOP_KEYS = {
    "experiment", "runs", "seed", "surface", "morph", "feature_source",
    "ngram", "max_features", "weights", "svc", "fasttext", "gamma",
}
_SVC_KEYS = {"C", "tolerance", "max_sweeps", "gamma"}
_FT_KEYS = {
    "dim", "window", "epochs", "min_count", "subword_min", "subword_max",
    "bucket_count", "negatives", "learning_rate",
}
_NGRAM_KEYS = {"pairs", "m_range", "n_range"}
_WEIGHT_KEYS = {"word", "char", "char_wb"}


def _check_unknown(section: dict, allowed: set[str], prefix: str = "") -> None:
    for key in section:
        if key not in allowed:
            raise UnknownKey(prefix + key)


def _warn_gamma(where: str) -> None:
    warnings.warn(
        f"config key {where!r} is parsed but ignored: the classifier is "
        "linear and has no kernel coefficient",
        stacklevel=3,
    )


def _parse_surface(value, key: str) -> tuple[bool, SurfaceConfig]:
    if value == "all":
        return True, SurfaceConfig.none()
    if value == "none":
        return False, SurfaceConfig.none()
    if isinstance(value, dict):
        flag_names = set(SurfaceConfig.none().as_dict())
        _check_unknown(value, flag_names, prefix=f"{key}.")
        for name, flag in value.items():
            if not isinstance(flag, bool):
                raise InvalidValue(f"{key}.{name}", "must be a boolean")
        return False, SurfaceConfig(**{n: value.get(n, False) for n in flag_names})
    raise InvalidValue(key, 'must be "all", "none", or a flag object')


def _parse_morph(value, key: str) -> tuple[bool, MorphConfig]:
    if value == "all":
        return True, MorphConfig()
    if isinstance(value, str) and value in MORPH_MODES:
        return False, MorphConfig(mode=value)
    raise InvalidValue(key, f'must be "all" or one of {MORPH_MODES}')


def _parse_ngram(value) -> tuple[tuple[int, int], ...]:
    if not isinstance(value, dict):
        raise SchemaViolation('"ngram" must be an object')
    _check_unknown(value, _NGRAM_KEYS, prefix="ngram.")
    if "pairs" in value:
        if "m_range" in value or "n_range" in value:
            raise SchemaViolation('"ngram" takes either "pairs" or ranges, not both')
        pairs = []
        for raw in value["pairs"]:
            if not (isinstance(raw, (list, tuple)) and len(raw) == 2):
                raise InvalidValue("ngram.pairs", "each pair must be [m, n]")
            pairs.append((int(raw[0]), int(raw[1])))
    else:
        m_lo, m_hi = value.get("m_range", [1, 1])
        n_lo, n_hi = value.get("n_range", [1, 1])
        pairs = [
            (m, n)
            for m in range(int(m_lo), int(m_hi) + 1)
            for n in range(int(n_lo), int(n_hi) + 1)
            if m <= n
        ]
    for m, n in pairs:
        if not (1 <= m <= NGRAM_M_LIMIT):
            raise InvalidValue("ngram", f"m={m} outside [1, {NGRAM_M_LIMIT}]")
        if not (m <= n <= NGRAM_N_LIMIT):
            raise InvalidValue("ngram", f"n={n} outside [m, {NGRAM_N_LIMIT}]")
    return tuple(pairs)


def _parse_max_features(value) -> tuple[int | None, ...]:
    if value is None:
        return (None,)
    if isinstance(value, int) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, list):
        raise InvalidValue("max_features", "must be null, an int, or a list")
    out: list[int | None] = []
    for item in value:
        if item is None:
            out.append(None)
        elif isinstance(item, int) and not isinstance(item, bool) and item >= 1:
            out.append(item)
        else:
            raise InvalidValue("max_features", f"bad entry {item!r}")
    return tuple(out)


def _parse_weights(value) -> tuple[tuple[float, ...], ...]:
    if not isinstance(value, dict):
        raise SchemaViolation('"weights" must be an object with per-block lists')
    _check_unknown(value, _WEIGHT_KEYS, prefix="weights.")
    grid = []
    for block in ("word", "char", "char_wb"):
        raw = value.get(block, [1.0])
        if not isinstance(raw, list) or not raw:
            raise InvalidValue(f"weights.{block}", "must be a non-empty list")
        cands = []
        for w in raw:
            if not isinstance(w, (int, float)) or isinstance(w, bool):
                raise InvalidValue(f"weights.{block}", f"bad weight {w!r}")
            w = float(w)
            if not (0.0 < w <= 1.0):
                raise InvalidValue(f"weights.{block}", f"weight {w} outside (0, 1]")
            cands.append(w)
        grid.append(tuple(cands))
    return tuple(grid)


def _parse_svc(value, base_seed: int) -> SvcParams:
    if not isinstance(value, dict):
        raise SchemaViolation('"svc" must be an object')
    _check_unknown(value, _SVC_KEYS, prefix="svc.")
    if "gamma" in value:
        _warn_gamma("svc.gamma")
    kwargs = {}
    for key, attr in (("C", "C"), ("tolerance", "tolerance"),
                      ("max_sweeps", "max_sweeps")):
        if key in value:
            raw = value[key]
            if not isinstance(raw, (int, float)) or isinstance(raw, bool):
                raise InvalidValue(f"svc.{key}", f"bad value {raw!r}")
            kwargs[attr] = int(raw) if attr == "max_sweeps" else float(raw)
    return SvcParams(seed=base_seed, **kwargs)


def _parse_fasttext(value, base_seed: int) -> FastTextParams:
    if not isinstance(value, dict):
        raise SchemaViolation('"fasttext" must be an object')
    _check_unknown(value, _FT_KEYS, prefix="fasttext.")
    kwargs = {}
    for key in _FT_KEYS:
        if key in value:
            raw = value[key]
            if not isinstance(raw, (int, float)) or isinstance(raw, bool):
                raise InvalidValue(f"fasttext.{key}", f"bad value {raw!r}")
            kwargs[key] = float(raw) if key == "learning_rate" else int(raw)
    return FastTextParams(seed=base_seed, **kwargs)


def spec_from_dict(data: dict) -> ExperimentSpec:
    """Validate a parsed config mapping and build the experiment spec."""
    if not isinstance(data, dict):
        raise SchemaViolation("config root must be an object")
    _check_unknown(data, _TOP_KEYS)
    if "gamma" in data:
        _warn_gamma("gamma")
    if "experiment" not in data:
        raise SchemaViolation('missing required key "experiment"')
    exp_id = data["experiment"]
    if exp_id not in EXPERIMENT_IDS:
        raise InvalidValue("experiment", f"must be one of {EXPERIMENT_IDS}")

    runs = data.get("runs", 1)
    if not isinstance(runs, int) or isinstance(runs, bool) or runs < 1:
        raise InvalidValue("runs", "must be a positive integer")
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise InvalidValue("seed", "must be an integer")

    # per-experiment defaults
    surface_default = "all" if exp_id == "exp1" else "none"
    morph_default = "all" if exp_id == "exp2" else "none"
    surface_all, surface = _parse_surface(data.get("surface", surface_default),
                                          "surface")
    morph_all, morph = _parse_morph(data.get("morph", morph_default), "morph")

    if exp_id == "exp3":
        if "feature_source" not in data:
            raise SchemaViolation(
                'exp3 requires "feature_source" (fasttext_supervised or '
                "fasttext_unsupervised)"
            )
        feature_source = data["feature_source"]
        if feature_source not in ("fasttext_supervised", "fasttext_unsupervised"):
            raise SchemaViolation("exp3 feature_source must be a fasttext mode")
    else:
        feature_source = data.get("feature_source", "tfidf_union")
        if feature_source != "tfidf_union":
            raise SchemaViolation(f"{exp_id} feature_source must be tfidf_union")
    if feature_source not in FEATURE_SOURCES:
        raise InvalidValue("feature_source", f"must be one of {FEATURE_SOURCES}")

    # experiment invariants
    if exp_id == "exp1":
        if not surface_all:
            raise SchemaViolation('exp1 enumerates surface configs: surface must be "all"')
        if morph_all or morph.mode != "none":
            raise SchemaViolation('exp1 requires morph "none"')
    elif exp_id == "exp2":
        if not morph_all:
            raise SchemaViolation('exp2 enumerates morph modes: morph must be "all"')
        if surface_all or surface.any_enabled():
            raise SchemaViolation('exp2 requires surface "none"')
    else:
        if surface_all:
            raise SchemaViolation(f'{exp_id} does not enumerate surface configs')
        if morph_all:
            raise SchemaViolation(f'{exp_id} does not enumerate morph modes')

    if feature_source == "tfidf_union":
        if exp_id == "exp4":
            ngram_default: tuple = FULL_NGRAM_PAIRS
        else:
            ngram_default = _DEFAULT_SMALL_PAIRS
        ngram_pairs = (
            _parse_ngram(data["ngram"]) if "ngram" in data else ngram_default
        )
        max_features = _parse_max_features(data.get("max_features"))
        if exp_id == "exp4":
            weight_default = {
                "word": list(_DEFAULT_WEIGHT_CANDIDATES),
                "char": list(_DEFAULT_WEIGHT_CANDIDATES),
                "char_wb": list(_DEFAULT_WEIGHT_CANDIDATES),
            }
            weight_grid = _parse_weights(data.get("weights", weight_default))
        else:
            weight_grid = _parse_weights(data.get("weights", {}))
            if weight_grid != ((1.0,), (1.0,), (1.0,)):
                raise SchemaViolation(
                    f"{exp_id} uses the plain union: weights must all be 1"
                )
        if "fasttext" in data:
            raise SchemaViolation(f'"fasttext" section is not used by {exp_id}')
        fasttext = FastTextParams(seed=seed)
    else:
        for key in ("ngram", "max_features", "weights"):
            if key in data:
                raise SchemaViolation(f'"{key}" is not used by {exp_id}')
        ngram_pairs = ()
        max_features = ()
        weight_grid = ((1.0,), (1.0,), (1.0,))
        fasttext = _parse_fasttext(data.get("fasttext", {}), seed)

    svc = _parse_svc(data.get("svc", {}), seed)
    return ExperimentSpec(
        id=exp_id, runs=runs, seed=seed,
        surface_all=surface_all, surface=surface,
        morph_all=morph_all, morph=morph,
        feature_source=feature_source,
        ngram_pairs=tuple(ngram_pairs), max_features=tuple(max_features),
        weight_grid=weight_grid, svc=svc, fasttext=fasttext,
    )


def parse_config(path) -> ExperimentSpec:
    """Load and validate a JSON experiment config file."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(f"config is not valid JSON: {exc}") from None
    return spec_from_dict(data)


def with_full_ngram_grid(spec: ExperimentSpec) -> ExperimentSpec:
    """Expand the n-gram dimension to all 27 supported (m, n) pairs."""
    if spec.feature_source != "tfidf_union":
        return spec
    return replace(spec, ngram_pairs=FULL_NGRAM_PAIRS)


# --- grid -------------------------------------------------------------------

def enumerate_grid(spec: ExperimentSpec) -> list[GridPoint]:
    """Cartesian product of the active dimensions, deterministic order."""
    surface_dim = (
        enumerate_surface_configs() if spec.surface_all else [spec.surface]
    )
    morph_dim = enumerate_morph_configs() if spec.morph_all else [spec.morph]
    if spec.feature_source == "tfidf_union":
        if not spec.ngram_pairs:
            raise EmptyGrid("ngram_pairs")
        if not spec.max_features:
            raise EmptyGrid("max_features")
        for block, cands in zip(("word", "char", "char_wb"), spec.weight_grid):
            if not cands:
                raise EmptyGrid(f"weights.{block}")
        ngram_dim: list = list(spec.ngram_pairs)
        maxf_dim: list = list(spec.max_features)
        weight_dim = [
            (w1, w2, w3)
            for w1 in spec.weight_grid[0]
            for w2 in spec.weight_grid[1]
            for w3 in spec.weight_grid[2]
        ]
    else:
        ngram_dim = [None]
        maxf_dim = [None]
        weight_dim = [(1.0, 1.0, 1.0)]
    points = []
    for surface, morph, ngram, maxf, weights in product(
        surface_dim, morph_dim, ngram_dim, maxf_dim, weight_dim
    ):
        points.append(GridPoint(
            index=len(points), surface=surface, morph=morph,
            feature_source=spec.feature_source, ngram=ngram,
            max_features=maxf, weights=weights,
        ))
    if not points:
        raise EmptyGrid()
    return points


# --- evaluation -------------------------------------------------------------

def _label_indices(corpus: Corpus, label_index: dict[str, int]) -> list[int]:
    missing = sorted(
        {d.label for d in corpus if d.label is not None} - set(label_index)
    )
    if missing:
        raise LabelMismatch(missing)
    out = []
    for doc in corpus:
        if doc.label is None:
            raise UnlabeledDocument(doc.id)
        out.append(label_index[doc.label])
    return out


def _group_key(point: GridPoint):
    if point.feature_source == "tfidf_union":
        return (point.surface, point.morph, point.ngram, point.max_features)
    return (point.surface, point.morph)


def _evaluate_group(spec: ExperimentSpec, points: list[GridPoint],
                    train_texts, train_labels, dev_texts, dev_labels,
                    class_count: int, run_seed: int,
                    stoplist, lexicon: Lexicon) -> list[GridScore]:
    """Score one featurization group: all points share preprocessing and
    fitted feature models and differ only in block weights."""
    first = points[0]
    try:
        def prep(text: str) -> str:
            return apply_morph(
                apply_surface(text, first.surface, stoplist), first.morph, lexicon
            )

        train_clean = [prep(t) for t in train_texts]
        dev_clean = [prep(t) for t in dev_texts]
        svc_params = replace(spec.svc, seed=run_seed)
        scores: list[GridScore] = []
        if first.feature_source == "tfidf_union":
            m, n = first.ngram
            configs = tuple(
                tfidf_mod.AnalyzerConfig(kind=k, ngram_min=m, ngram_max=n,
                                         max_features=first.max_features)
                for k in tfidf_mod.ANALYZER_KINDS
            )
            blocks = tuple(tfidf_mod.fit(train_clean, cfg) for cfg in configs)
            train_blocks = [
                [tfidf_mod.transform(t, b) for t in train_clean] for b in blocks
            ]
            dev_blocks = [
                [tfidf_mod.transform(t, b) for t in dev_clean] for b in blocks
            ]
            dims = [b.dimension for b in blocks]
            offsets = (0, dims[0], dims[0] + dims[1])
            total_dim = sum(dims)

            def combine(block_vecs, weights):
                united = []
                for row in zip(*block_vecs):
                    idx_parts, val_parts = [], []
                    for vec, weight, offset in zip(row, weights, offsets):
                        if len(vec.indices):
                            idx_parts.append(vec.indices + offset)
                            val_parts.append(vec.values * weight)
                    if idx_parts:
                        united.append(tfidf_mod.SparseVector(
                            dimension=total_dim,
                            indices=np.concatenate(idx_parts),
                            values=np.concatenate(val_parts),
                        ))
                    else:
                        united.append(tfidf_mod.SparseVector(
                            dimension=total_dim,
                            indices=np.empty(0, dtype=np.int64),
                            values=np.empty(0, dtype=np.float64),
                        ))
                return tfidf_mod.stack_sparse(united)

            for point in points:
                train_feats = combine(train_blocks, point.weights)
                dev_feats = combine(dev_blocks, point.weights)
                model = svc_mod.train_ovr(train_feats, train_labels,
                                          class_count, svc_params)
                preds = svc_mod.predict_many(model, dev_feats)
                f1 = evaluate(dev_labels, preds, class_count).macro_f1
                scores.append(GridScore(point.index, point, f1))
        else:
            ft_params = replace(spec.fasttext, seed=run_seed)
            if first.feature_source == "fasttext_supervised":
                ft_model = emb.train_supervised(
                    train_clean, train_labels, ft_params,
                    label_count=class_count,
                )
            else:
                ft_model = emb.train_skipgram(train_clean, ft_params)
            train_feats = emb.extract_features(ft_model, train_clean)
            dev_feats = emb.extract_features(ft_model, dev_clean)
            for point in points:
                model = svc_mod.train_ovr(train_feats, train_labels,
                                          class_count, svc_params)
                preds = svc_mod.predict_many(model, dev_feats)
                f1 = evaluate(dev_labels, preds, class_count).macro_f1
                scores.append(GridScore(point.index, point, f1))
        return scores
    except DialectIdError as exc:
        if isinstance(exc, GridPointError):
            raise
        point = points[0]
        raise GridPointError(
            point.index, json.dumps(point.flatten(spec, run_seed), default=str),
            exc,
        ) from exc


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    raw = os.environ.get("DIALECTID_WORKERS", "").strip()
    if raw.isdigit() and int(raw) > 0:
        return int(raw)
    return 1


def evaluate_grid(spec: ExperimentSpec, train: Corpus, dev: Corpus,
                  run_seed: int, workers: int | None = None,
                  stoplist=frozenset(), lexicon: Lexicon | None = None
                  ) -> list[GridScore]:
    """Score every grid point: fit on train, macro-F1 on dev."""
    if lexicon is None:
        lexicon = Lexicon()
    label_index = train.label_index()
    train_labels = _label_indices(train, label_index)
    dev_labels = _label_indices(dev, label_index)
    class_count = len(train.label_set)
    train_texts = train.texts()
    dev_texts = dev.texts()
    points = enumerate_grid(spec)
    groups: dict = {}
    for point in points:
        groups.setdefault(_group_key(point), []).append(point)
    group_list = list(groups.values())
    n_workers = _worker_count(workers)
    results: list[GridScore] = []
    if n_workers == 1 or len(group_list) == 1:
        for group in group_list:
            results.extend(_evaluate_group(
                spec, group, train_texts, train_labels, dev_texts, dev_labels,
                class_count, run_seed, stoplist, lexicon,
            ))
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            futures = [
                pool.submit(_evaluate_group, spec, group, train_texts,
                            train_labels, dev_texts, dev_labels, class_count,
                            run_seed, stoplist, lexicon)
                for group in group_list
            ]
            for future in futures:
                results.extend(future.result())
    results.sort(key=lambda s: s.index)
    return results


def run_experiment(spec: ExperimentSpec, train: Corpus, dev: Corpus,
                   test: Corpus | None = None, workers: int | None = None,
                   stoplist=frozenset(), lexicon: Lexicon | None = None
                   ) -> list[RunResult]:
    """Evaluate the full grid once per run; runs differ only by seed.

    The best dev point is re-fitted on train alone and, when a labeled
    test corpus is given, rescored on it.
    """
    if lexicon is None:
        lexicon = Lexicon()
    label_index = train.label_index()
    _label_indices(dev, label_index)  # raises LabelMismatch early
    if test is not None:
        _label_indices(test, label_index)
    results: list[RunResult] = []
    for run_index in range(spec.runs):
        run_seed = spec.seed + run_index
        started = time.perf_counter()
        scores = evaluate_grid(spec, train, dev, run_seed, workers=workers,
                               stoplist=stoplist, lexicon=lexicon)
        best = scores[0]
        for score in scores[1:]:
            if score.dev_macro_f1 > best.dev_macro_f1:
                best = score
        test_f1: float | None = None
        if test is not None:
            params = best.point.pipeline_params(spec, run_seed)
            fitted = fit_pipeline(train, params, stoplist=stoplist,
                                  lexicon=lexicon)
            test_labels = _label_indices(test, label_index)
            preds = fitted.predict_indices(test.texts())
            test_f1 = evaluate(test_labels, preds,
                               len(train.label_set)).macro_f1
        wall = time.perf_counter() - started
        results.append(RunResult(
            spec_id=spec.id, run_index=run_index,
            chosen_config=best.point.flatten(spec, run_seed),
            dev_macro_f1=best.dev_macro_f1, test_macro_f1=test_f1,
            wall_time=wall,
        ))
    return results


def fit_best_pipeline(spec: ExperimentSpec, train: Corpus, dev: Corpus,
                      run_seed: int | None = None, workers: int | None = None,
                      stoplist=frozenset(), lexicon: Lexicon | None = None
                      ) -> Pipeline:
    """Grid-search on dev, then fit the winning point on train."""
    if lexicon is None:
        lexicon = Lexicon()
    seed = spec.seed if run_seed is None else run_seed
    scores = evaluate_grid(spec, train, dev, seed, workers=workers,
                           stoplist=stoplist, lexicon=lexicon)
    best = max(scores, key=lambda s: (s.dev_macro_f1, -s.index))
    return fit_pipeline(train, best.point.pipeline_params(spec, seed),
                        stoplist=stoplist, lexicon=lexicon)


# --- reporting --------------------------------------------------------------

def _cell(value: float) -> str:
    return f"{value * 100:.2f}"


def emit_report(results) -> str:
    """Rows = runs, columns = experiments, cells = dev macro-F1 x 100 to
    two decimals; the best cell of each row is flagged with '*'."""
    results = list(results)
    if not results:
        raise EmptyResults()
    exp_ids = [e for e in EXPERIMENT_IDS if any(r.spec_id == e for r in results)]
    run_indices = sorted({r.run_index for r in results})
    table: dict[tuple[int, str], float] = {}
    for r in results:
        table[(r.run_index, r.spec_id)] = r.dev_macro_f1
    headers = ["Runs/Exp"] + [f"Exp_{e[3:]}" for e in exp_ids]
    rows: list[list[str]] = []
    for run_index in run_indices:
        row = [f"Run {run_index + 1}"]
        values = {e: table.get((run_index, e)) for e in exp_ids}
        present = [v for v in values.values() if v is not None]
        best = max(present) if present else None
        for e in exp_ids:
            v = values[e]
            if v is None:
                row.append("-")
            else:
                cell = _cell(v)
                row.append(f"*{cell}" if v == best else cell)
        rows.append(row)
    widths = [
        max(len(headers[i]), *(len(row[i]) for row in rows))
        for i in range(len(headers))
    ]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    for row in rows:
        lines.append("  ".join(c.rjust(widths[i]) if i else c.ljust(widths[i])
                               for i, c in enumerate(row)))
    return "\n".join(lines)


def report_tsv(results) -> str:
    """The same table as emit_report, tab-separated and unflagged."""
    results = list(results)
    if not results:
        raise EmptyResults()
    exp_ids = [e for e in EXPERIMENT_IDS if any(r.spec_id == e for r in results)]
    run_indices = sorted({r.run_index for r in results})
    table = {(r.run_index, r.spec_id): r.dev_macro_f1 for r in results}
    lines = ["run\t" + "\t".join(exp_ids)]
    for run_index in run_indices:
        cells = [
            _cell(table[(run_index, e)]) if (run_index, e) in table else "-"
            for e in exp_ids
        ]
        lines.append(f"{run_index + 1}\t" + "\t".join(cells))
    return "\n".join(lines)
