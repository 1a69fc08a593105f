"""Map an abstractive answer back onto the context sentences it came from.

Each sentence is scored by token overlap with the generated answer; the
selection keeps the best-scoring sentence plus every sentence whose score
lies within ``delta`` of it (knee-style selection, since the number of
answer sentences is unknown). Lets text-generating baselines be scored
under the extractive regimes.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .core import AnswerSet, Granularity, QAInstance
from .text import tokenize


@dataclass(frozen=True)
class LinkbackConfig:
    """``delta`` is the score deviation tolerated below the maximum; zero
    keeps only score-maximal sentences. ``normalize`` divides overlap by
    sentence length, making delta comparable across sentence sizes."""

    delta: float = 0.05
    normalize: bool = True
    lowercase: bool = True

    def __post_init__(self) -> None:
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")


DEFAULT_CONFIG = LinkbackConfig()


def overlap_score(
    sentence_tokens: Sequence[str],
    answer_tokens: Sequence[str],
    cfg: LinkbackConfig = DEFAULT_CONFIG,
) -> float:
    """Multiset token overlap between a sentence and the generated answer,
    optionally normalized by sentence length. An empty sentence scores 0."""
    if not sentence_tokens:
        return 0.0
    if cfg.lowercase:
        sentence_tokens = [t.lower() for t in sentence_tokens]
        answer_tokens = [t.lower() for t in answer_tokens]
    hit = sum((Counter(sentence_tokens) & Counter(answer_tokens)).values())
    if cfg.normalize:
        return hit / len(sentence_tokens)
    return float(hit)


def link_back(
    answer_text: str, inst: QAInstance, cfg: LinkbackConfig = DEFAULT_CONFIG
) -> AnswerSet:
    """Select the context sentences the answer most overlaps.

    Returns the empty answer when nothing overlaps at all: with a zero
    maximum every sentence ties, and selecting the whole context would be
    absurd.
    """
    if inst.granularity is not Granularity.SENTENCE:
        raise ValueError("link_back requires a sentence-granularity instance")
    answer_tokens = tokenize(answer_text)
    scores = [
        overlap_score(tokenize(unit), answer_tokens, cfg)
        for unit in inst.context_units
    ]
    best = max(scores)
    if best <= 0:
        return AnswerSet((), inst.n_units)
    selected = (
        i for i, s in enumerate(scores) if s > 0 and s >= best - cfg.delta
    )
    return AnswerSet.from_unit_indexes(selected, inst.n_units)
