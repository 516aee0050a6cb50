"""Token-level morphological simplification: light stemming and lemma lookup.

The stemmer strips at most one prefix and at most one suffix from fixed,
longest-first rule tables, never leaving fewer than three scalars. The
lemmatizer is an exact-match lookup over a lexicon with identity fallback
for unknown tokens.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .errors import InvalidValue

# Longest-first rule tables. A rule fires only if the remainder keeps at
# least MIN_STEM scalars; otherwise the next rule is tried.
PREFIXES: tuple[str, ...] = ("وال", "بال", "كال", "فال", "لل", "ال", "و")
SUFFIXES: tuple[str, ...] = (
    "هما", "كما", "تين", "تان", "ات", "ون", "ين", "ان",
    "ها", "ية", "ته", "ة", "ه", "ي", "ا",
)
MIN_STEM = 3

MORPH_MODES: tuple[str, ...] = ("none", "stem", "lemma", "lemma_then_stem")


@dataclass(frozen=True, slots=True)
class MorphConfig:
    """Word-form reduction mode; ``none`` is the identity."""

    mode: str = "none"

    def __post_init__(self) -> None:
        if self.mode not in MORPH_MODES:
            raise InvalidValue("morph.mode", f"must be one of {MORPH_MODES}")


@dataclass(frozen=True)
class Lexicon:
    """Exact-match surface-form to lemma table."""

    entries: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)


def light_stem(token: str) -> str:
    """Strip at most one prefix and one suffix from the rule tables.

    A strip that would leave fewer than 3 scalars is skipped and the
    next (shorter) rule is tried. Never lengthens a token.
    """
    for prefix in PREFIXES:
        if token.startswith(prefix) and len(token) - len(prefix) >= MIN_STEM:
            token = token[len(prefix):]
            break
    for suffix in SUFFIXES:
        if token.endswith(suffix) and len(token) - len(suffix) >= MIN_STEM:
            token = token[: len(token) - len(suffix)]
            break
    return token


def lemmatize(token: str, lexicon: Lexicon | None) -> str:
    """Lexicon lookup with identity fallback for unknown tokens."""
    if lexicon is None:
        return token
    return lexicon.entries.get(token, token)


def apply_morph(text: str, config: MorphConfig, lexicon: Lexicon | None = None) -> str:
    """Map each whitespace token per the mode and rejoin with single spaces."""
    if config.mode == "none":
        return text
    tokens = text.split()
    if config.mode == "stem":
        out = [light_stem(t) for t in tokens]
    elif config.mode == "lemma":
        out = [lemmatize(t, lexicon) for t in tokens]
    else:  # lemma_then_stem
        out = [light_stem(lemmatize(t, lexicon)) for t in tokens]
    return " ".join(out)


def enumerate_morph_configs() -> list[MorphConfig]:
    """The four modes in fixed order: none, stem, lemma, lemma_then_stem."""
    return [MorphConfig(mode=m) for m in MORPH_MODES]


def load_lexicon(path) -> Lexicon:
    """Read a lexicon TSV of (surface, lemma) pairs, UTF-8, blanks ignored."""
    entries: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip():
                continue
            surface, lemma = line.split("\t")
            entries[surface] = lemma
    return Lexicon(entries=entries)


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    """Bundled small lexicon (inflected surface forms of common lemmas)."""
    data = resources.files("dialectid.data").joinpath("lexicon_ar.tsv")
    entries: dict[str, str] = {}
    for line in data.read_text("utf-8").splitlines():
        if not line.strip():
            continue
        surface, lemma = line.split("\t")
        entries[surface] = lemma
    return Lexicon(entries=entries)
