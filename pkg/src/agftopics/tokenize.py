"""Tokenization and normalization of raw post text.

A post is split into typed tokens (url, mention, hashtag, emoji, number,
word, compound-word) by a first-match rule: more specific patterns take
precedence so that "#tag" is never read as a bare word. Only word,
compound-word, and number tokens survive filtering; their normalized
forms, minus stopwords, constitute the processed post.

Normalization targets mixed Persian/Latin social-media text: Unicode NFC,
Arabic Yeh/Kaf folded to their Persian forms, Latin case folded, and
Arabic-Indic digits mapped to ASCII. Zero-width non-joiners are preserved
so compound words stay intact.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

ZWNJ = "‌"

# Kinds whose tokens survive filtering into a processed post.
WORD_KINDS = frozenset({"word", "compound-word", "number"})

_CHAR_MAP = str.maketrans(
    {
        "ي": "ی",  # Arabic Yeh -> Farsi Yeh
        "ى": "ی",  # Alef Maksura -> Farsi Yeh
        "ك": "ک",  # Arabic Kaf -> Keheh
    }
)

_DIGIT_MAP = str.maketrans(
    {chr(0x0660 + d): str(d) for d in range(10)}
    | {chr(0x06F0 + d): str(d) for d in range(10)}
)

_EMOJI = (
    "\U0001f300-\U0001f5ff"
    "\U0001f600-\U0001f64f"
    "\U0001f680-\U0001f6ff"
    "\U0001f900-\U0001f9ff"
    "\U0001fa70-\U0001faff"
    "☀-➿"
)

# Alternation order defines kind precedence: url > mention > hashtag >
# emoji > number > word. A number is a standalone digit run; digit runs
# attached to letters ("covid19") stay one word token. Compound words
# (ZWNJ-joined) are matched before simple words so the joiner is not
# treated as a separator.
_TOKEN_RE = re.compile(
    rf"""
    (?P<url>https?://\S+|www\.\S+)
    |(?P<mention>@\w+)
    |(?P<hashtag>\#\w+(?:{ZWNJ}\w+)*)
    |(?P<emoji>[{_EMOJI}])
    |(?P<number>\d+(?:[.,]\d+)*(?![^\W_]))
    |(?P<compound>[^\W_]+(?:{ZWNJ}[^\W_]+)+)
    |(?P<word>[^\W_]+)
    """,
    re.VERBOSE,
)

_GROUP_KIND = {
    "url": "url",
    "mention": "mention",
    "hashtag": "hashtag",
    "emoji": "emoji",
    "number": "number",
    "compound": "compound-word",
    "word": "word",
}


@dataclass(frozen=True)
class Token:
    surface: str
    kind: str


# A processed post is an ordered multiset of normalized word strings.
ProcessedPost = list[str]


def tokenize(text: str) -> list[Token]:
    """Split text into typed tokens; unmatched characters are separators."""
    tokens = []
    for match in _TOKEN_RE.finditer(text):
        kind = _GROUP_KIND[match.lastgroup]
        tokens.append(Token(surface=match.group(), kind=kind))
    return tokens


def normalize(word: str) -> str:
    """Canonical form of a word token; idempotent by fixpoint iteration."""
    current = word
    while True:
        folded = unicodedata.normalize("NFC", current)
        folded = folded.translate(_CHAR_MAP).casefold()
        folded = folded.translate(_DIGIT_MAP)
        if folded == current:
            return folded
        current = folded


def filter_tokens(tokens: list[Token], stopwords: frozenset[str] | set[str]) -> ProcessedPost:
    """Normalized word/number tokens not in the stopword set, order and
    multiplicity preserved."""
    words = []
    for token in tokens:
        if token.kind not in WORD_KINDS:
            continue
        norm = normalize(token.surface)
        if norm in stopwords:
            continue
        words.append(norm)
    return words


def process_text(text: str, stopwords: frozenset[str] | set[str]) -> ProcessedPost:
    """Tokenize and filter in one step."""
    return filter_tokens(tokenize(text), stopwords)


def load_stopwords(path: str) -> frozenset[str]:
    """Stopword file: one entry per line, '#' comments, normalized on load."""
    entries = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            entry = line.split("#", 1)[0].strip()
            if entry:
                entries.add(normalize(entry))
    return frozenset(entries)
