"""Phonetic token inventory, voicing attributes, and place-of-articulation classes."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

TOKEN_KINDS = ("phonetic", "blank", "silence", "unknown", "noise")

# Place-of-articulation class labels, in reporting order. "Others" collects
# every token without an explicit class entry.
CLASS_LABELS = (
    "Dental",
    "Labial",
    "Palatal",
    "FrontVowels",
    "BackVowels",
    "OpenVowels",
    "FrontRoundedVowels",
    "Others",
)


class VocabularyError(ValueError):
    """Raised for malformed token inventories or unresolvable symbols."""


@dataclass(frozen=True)
class Token:
    symbol: str
    index: int
    kind: str = "phonetic"
    voiced: Optional[bool] = None  # defined only for phonetic tokens

    @property
    def is_phonetic(self) -> bool:
        return self.kind == "phonetic"


@dataclass(frozen=True)
class Vocabulary:
    """Ordered token inventory with dense indices and the blank at index 0."""

    tokens: tuple[Token, ...]
    symbol_index: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def blank_index(self) -> int:
        return 0

    @property
    def blank_symbol(self) -> str:
        return self.tokens[0].symbol

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.symbol_index

    def index_of(self, symbol: str) -> int:
        try:
            return self.symbol_index[symbol]
        except KeyError:
            raise VocabularyError(f"unknown token symbol: {symbol!r}") from None

    def token(self, symbol: str) -> Token:
        return self.tokens[self.index_of(symbol)]

    def symbols(self, indices: Iterable[int]) -> list[str]:
        return [self.tokens[i].symbol for i in indices]

    def encode(self, symbols: Iterable[str]) -> list[int]:
        return [self.index_of(s) for s in symbols]

    def phonetic_tokens(self) -> list[Token]:
        return [t for t in self.tokens if t.is_phonetic]


def is_voiced(vocab: Vocabulary, symbol: str) -> Optional[bool]:
    """Voicing flag of a phonetic token; None for non-phonetic tokens."""
    return vocab.token(symbol).voiced


def build_vocabulary(spec: Iterable[tuple[str, str, Optional[bool]]]) -> Vocabulary:
    """Build a vocabulary from (symbol, kind, voiced) entries.

    Entries keep their order; the single blank entry must come first so that it
    lands at index 0, which the CTC construction relies on.
    """
    tokens: list[Token] = []
    seen: set[str] = set()
    n_blank = 0
    for i, (symbol, kind, voiced) in enumerate(spec):
        if kind not in TOKEN_KINDS:
            raise VocabularyError(f"unknown token kind {kind!r} for symbol {symbol!r}")
        if symbol in seen:
            raise VocabularyError(f"duplicate token symbol: {symbol!r}")
        seen.add(symbol)
        if kind == "blank":
            n_blank += 1
            if i != 0:
                raise VocabularyError("blank token must be the first entry")
        if kind != "phonetic":
            voiced = None
        tokens.append(Token(symbol=symbol, index=i, kind=kind, voiced=voiced))
    if n_blank != 1:
        raise VocabularyError(f"expected exactly one blank token, got {n_blank}")
    return Vocabulary(
        tokens=tuple(tokens),
        symbol_index={t.symbol: t.index for t in tokens},
    )


@dataclass(frozen=True)
class PhoneticClassMap:
    """Maps every vocabulary token to a place-of-articulation class."""

    class_of_symbol: dict[str, str]

    def class_of(self, symbol: str) -> str:
        try:
            return self.class_of_symbol[symbol]
        except KeyError:
            raise VocabularyError(f"unknown token symbol: {symbol!r}") from None

    @property
    def labels(self) -> tuple[str, ...]:
        return CLASS_LABELS


def phonetic_class_of(class_map: PhoneticClassMap, symbol: str) -> str:
    return class_map.class_of(symbol)


def build_class_map(vocab: Vocabulary, table: dict[str, str]) -> PhoneticClassMap:
    """Resolve each vocabulary token against a symbol -> class table.

    Tokens absent from the table fall into Others, so the map is total over
    the vocabulary by construction.
    """
    for symbol, label in table.items():
        if label not in CLASS_LABELS:
            raise VocabularyError(f"unknown class label {label!r} for symbol {symbol!r}")
    mapping = {
        t.symbol: table.get(t.symbol, "Others") for t in vocab.tokens
    }
    return PhoneticClassMap(class_of_symbol=mapping)


# Default French inventory. The unvoiced plosives split into closure and burst
# tokens (pcl/p, tcl/t, kcl/k); the burst keeps the plain phoneme symbol.
# Noise tokens mark noise following /i, e, u, y, 2/.
_UNVOICED = {"pcl", "p", "tcl", "t", "kcl", "k", "f", "s", "S", "tS"}

_FRENCH_PHONETIC = (
    "pcl", "p", "tcl", "t", "kcl", "k",
    "b", "d", "g",
    "f", "v", "s", "z", "S", "Z",
    "tS", "dZ",
    "m", "n", "gn", "ng",
    "l", "R",
    "j", "w", "H",
    "i", "e", "E", "a", "A", "o", "O", "u", "y", "2", "9", "@",
    "e~", "a~", "o~", "9~",
)

_FRENCH_SPECIAL = (
    ("<blank>", "blank"),
    ("sil", "silence"),
    ("unk", "unknown"),
    ("noise_i", "noise"),
    ("noise_e", "noise"),
    ("noise_u", "noise"),
    ("noise_y", "noise"),
    ("noise_2", "noise"),
)

# Place-of-articulation grouping; closure tokens share the parent's class.
DEFAULT_CLASS_TABLE = {
    "t": "Dental", "tcl": "Dental", "d": "Dental", "n": "Dental",
    "l": "Dental", "z": "Dental", "s": "Dental",
    "p": "Labial", "pcl": "Labial", "b": "Labial", "m": "Labial",
    "f": "Labial", "v": "Labial",
    "k": "Palatal", "kcl": "Palatal", "g": "Palatal", "Z": "Palatal", "S": "Palatal",
    "i": "FrontVowels", "e": "FrontVowels", "E": "FrontVowels",
    "e~": "FrontVowels", "9~": "FrontVowels", "j": "FrontVowels",
    "u": "BackVowels", "o": "BackVowels", "O": "BackVowels",
    "o~": "BackVowels", "w": "BackVowels",
    "a": "OpenVowels", "a~": "OpenVowels",
    "y": "FrontRoundedVowels", "2": "FrontRoundedVowels",
    "9": "FrontRoundedVowels", "H": "FrontRoundedVowels",
}


def default_french_spec() -> list[tuple[str, str, Optional[bool]]]:
    spec: list[tuple[str, str, Optional[bool]]] = [
        (sym, kind, None) for sym, kind in _FRENCH_SPECIAL
    ]
    spec.extend(
        (sym, "phonetic", sym not in _UNVOICED) for sym in _FRENCH_PHONETIC
    )
    return spec


def default_french_vocabulary() -> Vocabulary:
    """The 50-token French inventory: 8 special + 42 phonetic tokens."""
    return build_vocabulary(default_french_spec())


def default_class_map(vocab: Vocabulary) -> PhoneticClassMap:
    return build_class_map(vocab, DEFAULT_CLASS_TABLE)


def read_vocab_file(path: str | Path) -> Vocabulary:
    """Read a vocabulary file: one `symbol<TAB>kind<TAB>voiced|unvoiced|na` per line."""
    spec: list[tuple[str, str, Optional[bool]]] = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise VocabularyError(f"{path}:{lineno}: expected 3 tab-separated fields")
        symbol, kind, voicing = parts
        if voicing == "voiced":
            voiced: Optional[bool] = True
        elif voicing == "unvoiced":
            voiced = False
        elif voicing == "na":
            voiced = None
        else:
            raise VocabularyError(f"{path}:{lineno}: bad voicing field {voicing!r}")
        spec.append((symbol, kind, voiced))
    return build_vocabulary(spec)


def write_vocab_file(vocab: Vocabulary, path: str | Path) -> None:
    lines = []
    for t in vocab.tokens:
        if t.voiced is None:
            voicing = "na"
        else:
            voicing = "voiced" if t.voiced else "unvoiced"
        lines.append(f"{t.symbol}\t{t.kind}\t{voicing}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_class_file(path: str | Path, vocab: Vocabulary) -> PhoneticClassMap:
    """Read a class map file: one `symbol<TAB>class` per line."""
    table: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise VocabularyError(f"{path}:{lineno}: expected 2 tab-separated fields")
        table[parts[0]] = parts[1]
    return build_class_map(vocab, table)


def write_class_file(class_map: PhoneticClassMap, path: str | Path) -> None:
    lines = [f"{sym}\t{label}" for sym, label in class_map.class_of_symbol.items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
