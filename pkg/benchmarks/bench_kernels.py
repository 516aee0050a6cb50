#!/usr/bin/env python3
"""Benchmark the hot kernels on both backends.

Times the dual coordinate descent solver and the two embedding SGD
kernels under the active backend (numba by default, pure numpy with
DIALECTID_PURE_NUMPY=1). ``--compare`` re-runs the script in both modes
and prints a speedup table; results are identical bit-for-bit between
backends, only the wall time differs.

    python benchmarks/bench_kernels.py --compare
    DIALECTID_PURE_NUMPY=1 python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np


def build_svc_problem(rng, n_rows=800, dim=2000, nnz_per_row=30):
    indptr = np.arange(n_rows + 1, dtype=np.int64) * nnz_per_row
    indices = np.empty(n_rows * nnz_per_row, dtype=np.int64)
    for i in range(n_rows):
        cols = np.sort(rng.choice(dim, size=nnz_per_row, replace=False))
        indices[i * nnz_per_row:(i + 1) * nnz_per_row] = cols
    data = rng.normal(size=n_rows * nnz_per_row)
    targets = np.where(rng.random(n_rows) < 0.5, 1.0, -1.0)
    targets[:2] = (1.0, -1.0)
    return indptr, indices, data, targets, dim


def build_skipgram_problem(rng, n_tokens=4000, vocab=300, dim=50, buckets=2000):
    stream = rng.integers(0, vocab, size=n_tokens).astype(np.int64)
    text_offsets = np.arange(0, n_tokens + 1, 20, dtype=np.int64)
    if text_offsets[-1] != n_tokens:
        text_offsets = np.append(text_offsets, n_tokens)
    sub_counts = rng.integers(2, 6, size=vocab)
    sub_offsets = np.zeros(vocab + 1, dtype=np.int64)
    np.cumsum(sub_counts, out=sub_offsets[1:])
    sub_flat = rng.integers(vocab, vocab + buckets,
                            size=int(sub_offsets[-1])).astype(np.int64)
    input_vecs = rng.normal(scale=0.01, size=(vocab + buckets, dim))
    output_vecs = np.zeros((vocab, dim))
    neg_table = rng.integers(0, vocab, size=1 << 16).astype(np.int64)
    return (stream, text_offsets, sub_flat, sub_offsets, input_vecs,
            output_vecs, neg_table)


def build_supervised_problem(rng, n_docs=1500, n_rows=5000, rows_per_doc=15,
                             dim=50, n_labels=18):
    doc_rows = rng.integers(0, n_rows, size=n_docs * rows_per_doc).astype(np.int64)
    doc_offsets = np.arange(n_docs + 1, dtype=np.int64) * rows_per_doc
    labels = rng.integers(0, n_labels, size=n_docs).astype(np.int64)
    input_vecs = rng.normal(scale=0.01, size=(n_rows, dim))
    label_matrix = np.zeros((n_labels, dim))
    return doc_rows, doc_offsets, labels, n_labels, input_vecs, label_matrix


def run_benchmarks(repeats: int) -> dict[str, float]:
    from dialectid._kernels import BACKEND, dual_cd, skipgram_train, supervised_train

    rng = np.random.default_rng(0)
    timings: dict[str, float] = {}

    indptr, indices, data, targets, dim = build_svc_problem(rng)

    def bench_dual_cd():
        dual_cd(indptr, indices, data, targets, dim, 1.0, 1e-12, 25, 7)

    sg_args = build_skipgram_problem(rng)

    def bench_skipgram():
        args = (sg_args[0], sg_args[1], sg_args[2], sg_args[3],
                sg_args[4].copy(), sg_args[5].copy(), sg_args[6])
        skipgram_train(*args, 5, 5, 0.05, 1, 7)

    sup_args = build_supervised_problem(rng)

    def bench_supervised():
        doc_rows, doc_offsets, labels, n_labels, iv, lm = sup_args
        supervised_train(doc_rows, doc_offsets, labels, n_labels,
                         iv.copy(), lm.copy(), 0.1, 2)

    for name, fn in (("dual_cd", bench_dual_cd),
                     ("skipgram_train", bench_skipgram),
                     ("supervised_train", bench_supervised)):
        fn()  # warmup; JIT-compiles on the numba backend
        best = min(_timed(fn) for _ in range(repeats))
        timings[name] = best
        print(f"{BACKEND:>6}  {name:<18} {best * 1000:10.1f} ms")
    return timings


def _timed(fn) -> float:
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def compare(repeats: int) -> None:
    results = {}
    for backend, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ)
        env["DIALECTID_PURE_NUMPY"] = flag
        proc = subprocess.run(
            [sys.executable, __file__, "--repeats", str(repeats)],
            env=env, capture_output=True, text=True,
        )
        if proc.returncode != 0:
            print(proc.stderr, file=sys.stderr)
            raise SystemExit(1)
        for line in proc.stdout.splitlines():
            parts = line.split()
            if len(parts) == 4 and parts[3] == "ms":
                results.setdefault(parts[1], {})[parts[0]] = float(parts[2])
        print(proc.stdout, end="")
    print()
    print(f"{'kernel':<18} {'numba ms':>10} {'numpy ms':>10} {'speedup':>9}")
    for kernel, times in results.items():
        speedup = times["numpy"] / times["numba"]
        print(f"{kernel:<18} {times['numba']:>10.1f} {times['numpy']:>10.1f} "
              f"{speedup:>8.1f}x")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--compare", action="store_true",
                        help="run both backends and report speedups")
    args = parser.parse_args()
    if args.compare:
        compare(args.repeats)
    else:
        run_benchmarks(args.repeats)


if __name__ == "__main__":
    main()
