"""Synthetic labeled corpora for desk-scale verification.

Two generators:

* ``generate_synthetic`` — separable topic-style classes: each class owns
  a private vocabulary and draws 70% of its tokens from it, 30% from a
  shared pool. Any sane pipeline separates disjoint private vocabularies.
* ``generate_affix_corpus`` — classes share one stem vocabulary and are
  distinguishable only through surface decoration: class-specific affixes,
  diacritics, punctuation marks, and Latin hashtag tokens. Aggressive
  preprocessing strips exactly that signal, so it must score worse than
  no preprocessing on this corpus.

Both are deterministic for a fixed seed and split 80/10/10 into
train/dev/test per class.
"""

from __future__ import annotations

import numpy as np

from .corpus import Corpus, Document
from .errors import InvalidValue
from .morph import PREFIXES, SUFFIXES

_ARABIC_LETTERS = "ابتثجحخدذرزسشصضطظعغفقكلمنهوي"

# decoration pools for the affix corpus (all in Unicode P* categories)
_CLASS_MARKS = ("!", "?", "،", "؛", ":", ".", "-", ")", "(", "؟")
_CLASS_DIACRITICS = ("ً", "ٌ", "ٍ", "َ",
                     "ُ", "ِ", "ّ", "ْ")
_CLASS_EMOJI = ("\U0001F600", "\U0001F602", "\U0001F60D", "\U0001F622",
                "\U0001F621", "\U0001F914", "\U0001F389", "\U0001F525")


def _random_word(rng: np.random.Generator, lo: int = 3, hi: int = 7) -> str:
    length = int(rng.integers(lo, hi + 1))
    return "".join(
        _ARABIC_LETTERS[int(i)]
        for i in rng.integers(0, len(_ARABIC_LETTERS), size=length)
    )


def _distinct_words(rng: np.random.Generator, count: int, taken: set[str],
                    lo: int = 3, hi: int = 7, avoid_affixes: bool = False) -> list[str]:
    words: list[str] = []
    while len(words) < count:
        w = _random_word(rng, lo, hi)
        if w in taken:
            continue
        if avoid_affixes and any(w.startswith(p) for p in PREFIXES):
            # a stem opening with a prefix-rule string would get partially
            # stripped once decorated, leaking class signal past cleanup
            continue
        taken.add(w)
        words.append(w)
    return words


def _split_class_docs(docs: list[Document]):
    n = len(docs)
    n_train = int(0.8 * n)
    n_dev = int(0.1 * n)
    return docs[:n_train], docs[n_train:n_train + n_dev], docs[n_train + n_dev:]


def _finish(train, dev, test, rng: np.random.Generator):
    # shuffle each split so class blocks are interleaved
    for bucket in (train, dev, test):
        order = rng.permutation(len(bucket))
        bucket[:] = [bucket[int(i)] for i in order]
    return (
        Corpus.from_documents(train),
        Corpus.from_documents(dev),
        Corpus.from_documents(test),
    )


def generate_synthetic(class_count: int, docs_per_class: int,
                       vocab_per_class: int, shared_vocab: int,
                       doc_len_range, seed: int):
    """Separable synthetic corpora; returns (train, dev, test)."""
    if min(class_count, docs_per_class, vocab_per_class) < 1:
        raise InvalidValue("synthetic", "counts must be positive")
    if shared_vocab < 0:
        raise InvalidValue("shared_vocab", "must be >= 0")
    len_lo, len_hi = int(doc_len_range[0]), int(doc_len_range[1])
    if not (1 <= len_lo <= len_hi):
        raise InvalidValue("doc_len_range", "need 1 <= lo <= hi")
    rng = np.random.default_rng(seed)
    taken: set[str] = set()
    shared = _distinct_words(rng, shared_vocab, taken) if shared_vocab else []
    private = [
        _distinct_words(rng, vocab_per_class, taken) for _ in range(class_count)
    ]
    labels = [f"class{c:02d}" for c in range(class_count)]
    train: list[Document] = []
    dev: list[Document] = []
    test: list[Document] = []
    for c, label in enumerate(labels):
        docs: list[Document] = []
        for j in range(docs_per_class):
            length = int(rng.integers(len_lo, len_hi + 1))
            tokens = []
            for _ in range(length):
                if shared and rng.random() >= 0.7:
                    pool = shared
                else:
                    pool = private[c]
                tokens.append(pool[int(rng.integers(0, len(pool)))])
            docs.append(Document(id=f"{label}-{j:04d}", text=" ".join(tokens),
                                 label=label))
        tr, dv, te = _split_class_docs(docs)
        train.extend(tr)
        dev.extend(dv)
        test.extend(te)
    return _finish(train, dev, test, rng)


def generate_affix_corpus(class_count: int, docs_per_class: int,
                          stem_count: int, doc_len_range, seed: int):
    """Affix-signal corpora: shared stems, class-specific decoration only.

    Stems are 3 scalars long, so the light stemmer cannot shorten them;
    class signal lives in one prefix + one suffix from the stemmer rule
    tables, a class diacritic, a class punctuation mark or emoji, and a
    Latin hashtag token. Full surface + morph preprocessing collapses all
    classes onto the same bare stems.
    """
    if class_count < 2 or class_count > len(PREFIXES):
        raise InvalidValue(
            "class_count", f"affix corpus supports 2..{len(PREFIXES)} classes"
        )
    if min(docs_per_class, stem_count) < 1:
        raise InvalidValue("affix corpus", "counts must be positive")
    len_lo, len_hi = int(doc_len_range[0]), int(doc_len_range[1])
    if not (1 <= len_lo <= len_hi):
        raise InvalidValue("doc_len_range", "need 1 <= lo <= hi")
    rng = np.random.default_rng(seed)
    taken: set[str] = set()
    stems = _distinct_words(rng, stem_count, taken, lo=3, hi=3,
                            avoid_affixes=True)
    labels = [f"class{c:02d}" for c in range(class_count)]
    train: list[Document] = []
    dev: list[Document] = []
    test: list[Document] = []
    for c, label in enumerate(labels):
        prefix = PREFIXES[c % len(PREFIXES)]
        suffix = SUFFIXES[c % len(SUFFIXES)]
        mark = _CLASS_MARKS[c % len(_CLASS_MARKS)]
        diacritic = _CLASS_DIACRITICS[c % len(_CLASS_DIACRITICS)]
        emoji = _CLASS_EMOJI[c % len(_CLASS_EMOJI)]
        hashtag = f"#tag{c}"
        docs: list[Document] = []
        for j in range(docs_per_class):
            length = int(rng.integers(len_lo, len_hi + 1))
            tokens = []
            for _ in range(length):
                stem = stems[int(rng.integers(0, len(stems)))]
                tok = stem
                r = rng.random()
                if r < 0.45:
                    tok = prefix + tok
                elif r < 0.9:
                    tok = tok + suffix
                if rng.random() < 0.5:
                    tok = tok[0] + diacritic + tok[1:]
                if rng.random() < 0.3:
                    tok = tok + mark
                tokens.append(tok)
            if rng.random() < 0.5:
                tokens.append(hashtag)
            if rng.random() < 0.3:
                tokens.append(emoji)
            docs.append(Document(id=f"{label}-{j:04d}", text=" ".join(tokens),
                                 label=label))
        tr, dv, te = _split_class_docs(docs)
        train.extend(tr)
        dev.extend(dv)
        test.extend(te)
    return _finish(train, dev, test, rng)
