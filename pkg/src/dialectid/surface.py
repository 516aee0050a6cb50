"""Surface-level text cleanup: five independently toggleable steps.

Steps, in the fixed application order used by apply_surface:

1. letter folding (alef/yaa/taa-marbuta/hamza-carrier variants)
2. diacritic removal (tanwin..sukun, superscript alef, tatweel)
3. punctuation and emoji removal (replaced by spaces, runs collapsed)
4. non-Arabic token removal (a token survives iff it has >= 1 scalar
   in the Arabic blocks U+0600..U+06FF or U+0750..U+077F)
5. stopword removal (exact token match against a stoplist)

Every step is idempotent and never lengthens the text.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, fields
from functools import lru_cache
from importlib import resources

from .errors import MissingStoplist

# Variant -> canonical letter folding. Targets are outside the domain, so
# the mapping is idempotent by construction.
LETTER_FOLD: dict[str, str] = {
    "آ": "ا",  # alef madda -> alef
    "أ": "ا",  # alef hamza above -> alef
    "إ": "ا",  # alef hamza below -> alef
    "ٱ": "ا",  # alef wasla -> alef
    "ى": "ي",  # alef maksura -> yaa
    "ة": "ه",  # taa marbuta -> haa
    "ؤ": "و",  # waw hamza -> waw
    "ئ": "ي",  # yaa hamza -> yaa
}
_FOLD_TABLE = str.maketrans(LETTER_FOLD)

# Tanwin through sukun, the superscript alef, and tatweel.
DIACRITICS: frozenset[str] = frozenset(
    [chr(cp) for cp in range(0x064B, 0x0653)] + ["ٰ", "ـ"]
)

EMOJI_RANGES: tuple[tuple[int, int], ...] = ((0x1F300, 0x1FAFF), (0x2600, 0x27BF))
EMOJI_SINGLETONS: frozenset[int] = frozenset({0xFE0F, 0x200D})

ARABIC_BLOCKS: tuple[tuple[int, int], ...] = ((0x0600, 0x06FF), (0x0750, 0x077F))


@dataclass(frozen=True, slots=True)
class SurfaceConfig:
    """Toggle set for the five cleanup steps. All-false is the identity."""

    normalize_letters: bool = False
    remove_punct_emoji: bool = False
    remove_stopwords: bool = False
    remove_diacritics: bool = False
    remove_non_arabic: bool = False

    @classmethod
    def none(cls) -> "SurfaceConfig":
        return cls()

    @classmethod
    def all(cls) -> "SurfaceConfig":
        return cls(True, True, True, True, True)

    def any_enabled(self) -> bool:
        return any(getattr(self, f.name) for f in fields(self))

    def as_dict(self) -> dict[str, bool]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, d: dict[str, bool]) -> "SurfaceConfig":
        return cls(**d)


def normalize_letters(text: str) -> str:
    """Fold Arabic letter variants onto canonical forms (see LETTER_FOLD)."""
    return text.translate(_FOLD_TABLE)


def remove_diacritics(text: str) -> str:
    """Drop tanwin/haraka/shadda/sukun marks, superscript alef, and tatweel."""
    return "".join(ch for ch in text if ch not in DIACRITICS)


def _is_punct_or_emoji(ch: str) -> bool:
    if unicodedata.category(ch).startswith("P"):
        return True
    cp = ord(ch)
    if cp in EMOJI_SINGLETONS:
        return True
    return any(lo <= cp <= hi for lo, hi in EMOJI_RANGES)


def remove_punct_emoji(text: str) -> str:
    """Replace punctuation and emoji scalars by spaces, collapse whitespace
    runs to single spaces, and trim the ends."""
    cleaned = "".join(" " if _is_punct_or_emoji(ch) else ch for ch in text)
    return " ".join(cleaned.split())


def remove_stopwords(text: str, stoplist) -> str:
    """Drop whitespace tokens that exactly match a stoplist entry."""
    if not stoplist:
        raise MissingStoplist()
    return " ".join(tok for tok in text.split() if tok not in stoplist)


def _has_arabic(token: str) -> bool:
    return any(
        lo <= ord(ch) <= hi for ch in token for lo, hi in ARABIC_BLOCKS
    )


def remove_non_arabic(text: str) -> str:
    """Drop whitespace tokens containing no scalar in the Arabic blocks."""
    return " ".join(tok for tok in text.split() if _has_arabic(tok))


def apply_surface(text: str, config: SurfaceConfig, stoplist=frozenset()) -> str:
    """Apply the enabled steps in the fixed order; idempotent for any config."""
    if config.normalize_letters:
        text = normalize_letters(text)
    if config.remove_diacritics:
        text = remove_diacritics(text)
    if config.remove_punct_emoji:
        text = remove_punct_emoji(text)
    if config.remove_non_arabic:
        text = remove_non_arabic(text)
    if config.remove_stopwords:
        text = remove_stopwords(text, stoplist)
    return text


def enumerate_surface_configs() -> list[SurfaceConfig]:
    """All 32 configs in binary counting order, normalize_letters as the
    least significant flag; first is all-false, last all-true."""
    names = [f.name for f in fields(SurfaceConfig)]
    configs = []
    for code in range(2 ** len(names)):
        flags = {name: bool((code >> bit) & 1) for bit, name in enumerate(names)}
        configs.append(SurfaceConfig(**flags))
    return configs


def load_stoplist(path) -> frozenset[str]:
    """Read a stoplist file: one token per line, UTF-8, blanks ignored."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip() for line in fh if line.strip())


@lru_cache(maxsize=1)
def default_stoplist() -> frozenset[str]:
    """Bundled list of common function words (raw and letter-folded forms)."""
    data = resources.files("dialectid.data").joinpath("stopwords_ar.txt")
    return frozenset(
        line.strip() for line in data.read_text("utf-8").splitlines() if line.strip()
    )
