"""Tokenization and rule-based sentence segmentation.

Deliberately simple and dependency-free: the algorithms built on top only
require a consistent segmentation, not a linguistically perfect one. Source
datasets usually ship pre-segmented units; these are the fallbacks.
"""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)

# Words that end with a period without ending a sentence. Dotted entries
# ("e.g", "i.e", "u.s") are matched against the text preceding the final dot.
_ABBREVIATIONS = frozenset(
    {
        "dr", "mr", "mrs", "ms", "prof", "sr", "jr", "st", "no", "vs", "etc",
        "fig", "eq", "al", "inc", "ltd", "co", "dept", "est", "approx",
        "e.g", "i.e", "cf", "u.s", "u.k",
    }
)

_BOUNDARY_RE = re.compile(r"[.?!]+(?=\s+[A-Z0-9])")
_TRAILING_WORD_RE = re.compile(r"[\w.]*\w$")


def tokenize(text: str) -> list[str]:
    """Split into word and single-punctuation tokens."""
    return _TOKEN_RE.findall(text)


def tokenize_with_offsets(text: str) -> list[tuple[str, int, int]]:
    """Like :func:`tokenize` but with (token, char_start, char_end) triples."""
    return [(m.group(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def split_sentences(text: str) -> list[str]:
    """Split on sentence-final punctuation followed by whitespace and an
    uppercase letter or digit, guarding a list of common abbreviations."""
    boundaries: list[int] = []
    for match in _BOUNDARY_RE.finditer(text):
        before = _TRAILING_WORD_RE.search(text[: match.start()])
        if before is not None and before.group().lower() in _ABBREVIATIONS:
            continue
        boundaries.append(match.end())
    sentences = []
    start = 0
    for cut in boundaries:
        piece = text[start:cut].strip()
        if piece:
            sentences.append(piece)
        start = cut
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences
