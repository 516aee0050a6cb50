"""Command-line interface.

Subcommands: stats, preprocess, synth, train, predict, evaluate,
experiment, grid. Exit codes: 0 success, 1 usage/config error, 2 data
error, 3 internal error. Grid evaluation honours the DIALECTID_WORKERS
environment variable; ``--seed`` overrides the config seed wherever
randomness exists.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import experiments as exps
from . import metrics as metrics_mod
from .corpus import compute_stats, load_tsv, write_tsv, Corpus, Document
from .errors import ConfigError, DataError, DialectIdError, InvalidValue
from .morph import MORPH_MODES, MorphConfig, apply_morph, default_lexicon, load_lexicon
from .pipeline import fit_pipeline, load_model, save_model
from .surface import (
    SurfaceConfig,
    apply_surface,
    default_stoplist,
    load_stoplist,
)
from .synthetic import generate_affix_corpus, generate_synthetic

_SURFACE_FLAGS = tuple(SurfaceConfig.none().as_dict())


def _add_surface_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--surface", choices=["all", "none"], default=None,
                        help="enable all or none of the surface steps")
    for flag in _SURFACE_FLAGS:
        parser.add_argument(f"--{flag.replace('_', '-')}", action="store_true",
                            help=f"enable the {flag} step")


def _surface_from_args(args) -> SurfaceConfig:
    if args.surface == "all":
        return SurfaceConfig.all()
    if args.surface == "none":
        return SurfaceConfig.none()
    return SurfaceConfig(**{f: getattr(args, f) for f in _SURFACE_FLAGS})


def _resolve_stoplist(args):
    if getattr(args, "stoplist", None):
        return load_stoplist(args.stoplist)
    return default_stoplist()


def _resolve_lexicon(args):
    if getattr(args, "lexicon", None):
        return load_lexicon(args.lexicon)
    return default_lexicon()


def _cmd_stats(args) -> int:
    corpus = load_tsv(args.input, has_labels=not args.unlabeled)
    report = compute_stats(corpus)
    if args.format == "kv":
        for key, value in report.as_kv().items():
            print(f"{key}\t{value}")
    else:
        print(report.format_table())
    return 0


def _cmd_preprocess(args) -> int:
    corpus = load_tsv(args.input, has_labels=not args.unlabeled)
    surface = _surface_from_args(args)
    morph = MorphConfig(mode=args.morph)
    stoplist = _resolve_stoplist(args) if surface.remove_stopwords else frozenset()
    lexicon = _resolve_lexicon(args) if morph.mode in ("lemma", "lemma_then_stem") else None
    docs = [
        Document(
            id=d.id,
            text=apply_morph(apply_surface(d.text, surface, stoplist), morph, lexicon),
            label=d.label,
        )
        for d in corpus
    ]
    write_tsv(Corpus(documents=tuple(docs), label_set=corpus.label_set), args.output)
    return 0


def _cmd_synth(args) -> int:
    if args.profile == "affix":
        train, dev, test = generate_affix_corpus(
            args.classes, args.docs_per_class, args.stems,
            (args.min_len, args.max_len), args.seed,
        )
    else:
        train, dev, test = generate_synthetic(
            args.classes, args.docs_per_class, args.vocab_per_class,
            args.shared_vocab, (args.min_len, args.max_len), args.seed,
        )
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, corpus in (("train", train), ("dev", dev), ("test", test)):
        write_tsv(corpus, outdir / f"{name}.tsv")
    print(f"wrote {len(train)}/{len(dev)}/{len(test)} docs to {outdir}")
    return 0


def _load_spec(args) -> exps.ExperimentSpec:
    spec = exps.parse_config(args.config)
    if getattr(args, "seed", None) is not None:
        spec = replace(spec, seed=args.seed,
                       svc=replace(spec.svc, seed=args.seed),
                       fasttext=replace(spec.fasttext, seed=args.seed))
    if getattr(args, "full_grid", False):
        spec = exps.with_full_ngram_grid(spec)
    return spec


def _cmd_grid(args) -> int:
    spec = _load_spec(args)
    points = exps.enumerate_grid(spec)
    print(f"{len(points)} grid points")
    limit = args.limit if args.limit is not None else len(points)
    for point in points[:limit]:
        print(json.dumps(point.flatten(spec, spec.seed), ensure_ascii=False))
    return 0


def _cmd_experiment(args) -> int:
    spec = _load_spec(args)
    train = load_tsv(args.train)
    dev = load_tsv(args.dev)
    test = load_tsv(args.test) if args.test else None
    results = exps.run_experiment(
        spec, train, dev, test=test, workers=args.workers,
        stoplist=_resolve_stoplist(args), lexicon=_resolve_lexicon(args),
    )
    print(exps.emit_report(results))
    for r in results:
        line = (f"run {r.run_index + 1}: dev_macro_f1 {r.dev_macro_f1:.4f}"
                f"  wall_time {r.wall_time:.1f}s")
        if r.test_macro_f1 is not None:
            line += f"  test_macro_f1 {r.test_macro_f1:.4f}"
        print(line)
        print("  best config:", json.dumps(r.chosen_config, ensure_ascii=False))
    if args.out:
        Path(args.out).write_text(exps.report_tsv(results) + "\n", encoding="utf-8")
        print(f"wrote TSV report to {args.out}")
    return 0


def _cmd_train(args) -> int:
    spec = _load_spec(args)
    train = load_tsv(args.train)
    stoplist = _resolve_stoplist(args)
    lexicon = _resolve_lexicon(args)
    if args.dev:
        dev = load_tsv(args.dev)
        pipe = exps.fit_best_pipeline(spec, train, dev, workers=args.workers,
                                      stoplist=stoplist, lexicon=lexicon)
    else:
        points = exps.enumerate_grid(spec)
        if len(points) != 1 and args.grid_index is None:
            raise InvalidValue(
                "grid", f"{len(points)} grid points; pass --dev to search or "
                        "--grid-index to pin one",
            )
        point = points[args.grid_index or 0]
        pipe = fit_pipeline(train, point.pipeline_params(spec, spec.seed),
                            stoplist=stoplist, lexicon=lexicon)
    save_model(args.model, pipe)
    print(f"saved model to {args.model}")
    return 0


def _cmd_predict(args) -> int:
    pipe = load_model(args.model)
    corpus = load_tsv(args.input, has_labels=not args.unlabeled)
    labels = pipe.predict_labels(corpus.texts())
    lines = [f"{doc.id}\t{label}" for doc, label in zip(corpus, labels)]
    if args.output:
        Path(args.output).write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        print("\n".join(lines))
    return 0


def _cmd_evaluate(args) -> int:
    pipe = load_model(args.model)
    corpus = load_tsv(args.input)
    name_to_index = {name: i for i, name in enumerate(pipe.class_names)}
    missing = sorted(set(corpus.label_set) - set(name_to_index))
    if missing:
        raise DataError(f"labels unknown to the model: {missing}")
    true_idx = [name_to_index[d.label] for d in corpus]
    pred_idx = pipe.predict_indices(corpus.texts())
    report = metrics_mod.evaluate(true_idx, pred_idx, len(pipe.class_names))
    if args.format == "kv":
        for key, value in report.as_kv().items():
            print(f"{key}\t{value}")
    else:
        print(report.format_table(pipe.class_names))
    if args.confusion_out:
        Path(args.confusion_out).write_text(
            report.confusion_tsv(pipe.class_names) + "\n", encoding="utf-8"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dialectid",
        description="Arabic dialect identification toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="corpus statistics")
    p.add_argument("input")
    p.add_argument("--unlabeled", action="store_true")
    p.add_argument("--format", choices=["table", "kv"], default="table")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("preprocess", help="apply surface/morph cleanup to a TSV")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--unlabeled", action="store_true")
    _add_surface_args(p)
    p.add_argument("--morph", choices=list(MORPH_MODES), default="none")
    p.add_argument("--stoplist", help="stoplist file (one token per line)")
    p.add_argument("--lexicon", help="lexicon TSV (surface, lemma)")
    p.set_defaults(func=_cmd_preprocess)

    p = sub.add_parser("synth", help="generate synthetic train/dev/test TSVs")
    p.add_argument("--outdir", required=True)
    p.add_argument("--profile", choices=["separable", "affix"], default="separable")
    p.add_argument("--classes", type=int, default=18)
    p.add_argument("--docs-per-class", type=int, default=100)
    p.add_argument("--vocab-per-class", type=int, default=40)
    p.add_argument("--shared-vocab", type=int, default=200)
    p.add_argument("--stems", type=int, default=30)
    p.add_argument("--min-len", type=int, default=5)
    p.add_argument("--max-len", type=int, default=30)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("grid", help="enumerate the experiment grid")
    p.add_argument("config")
    p.add_argument("--full-grid", action="store_true",
                   help="expand to all 27 supported n-gram pairs")
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("experiment", help="run an experiment config")
    p.add_argument("config")
    p.add_argument("--train", required=True)
    p.add_argument("--dev", required=True)
    p.add_argument("--test")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--full-grid", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="write the TSV report here")
    p.add_argument("--stoplist")
    p.add_argument("--lexicon")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("train", help="fit a pipeline and save it")
    p.add_argument("config")
    p.add_argument("--train", required=True)
    p.add_argument("--dev", help="grid-search on this split first")
    p.add_argument("--model", required=True)
    p.add_argument("--grid-index", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--stoplist")
    p.add_argument("--lexicon")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="label a TSV with a saved model")
    p.add_argument("model")
    p.add_argument("input")
    p.add_argument("--unlabeled", action="store_true", default=True)
    p.add_argument("--labeled", dest="unlabeled", action="store_false")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("evaluate", help="score a saved model on labeled data")
    p.add_argument("model")
    p.add_argument("input")
    p.add_argument("--format", choices=["table", "kv"], default="table")
    p.add_argument("--confusion-out", help="write the confusion matrix TSV here")
    p.set_defaults(func=_cmd_evaluate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except DialectIdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - map anything else to exit 3
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
