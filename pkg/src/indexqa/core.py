"""Core answer-span types and span algebra.

Every other module speaks in these types. Indexing is 0-based and inclusive
throughout; 1-based display conventions exist only at the codec boundary.
All types are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence


class Granularity(Enum):
    """Unit of context segmentation: individual tokens or whole sentences."""

    TOKEN = "token"
    SENTENCE = "sentence"


@dataclass(frozen=True, order=True)
class Span:
    """Closed interval of unit indexes, 0-based, both endpoints inclusive."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0:
            raise ValueError(f"span start must be >= 0, got {self.start}")
        if self.end < self.start:
            raise ValueError(f"span end ({self.end}) must be >= start ({self.start})")

    def __len__(self) -> int:
        return self.end - self.start + 1

    def units(self) -> range:
        """All unit indexes covered by this span."""
        return range(self.start, self.end + 1)

    def overlaps(self, other: Span) -> bool:
        return self.start <= other.end and other.start <= self.end


def _merge_overlapping(spans: Iterable[Span]) -> list[Span]:
    # Overlapping or nested spans coalesce; adjacent spans (end + 1 == start)
    # stay separate because span count is significant for exact-match scoring.
    ordered = sorted(spans)
    merged: list[Span] = []
    for span in ordered:
        if merged and span.start <= merged[-1].end:
            if span.end > merged[-1].end:
                merged[-1] = Span(merged[-1].start, span.end)
        else:
            merged.append(span)
    return merged


@dataclass(frozen=True)
class AnswerSet:
    """Canonical multi-span answer over a context of ``n_units`` units.

    Construction sorts the given spans and merges any that overlap or nest,
    so a live instance always holds disjoint spans in ascending order, each
    ending before ``n_units``. The unit set is equivalently a binary mask of
    length ``n_units`` (see :func:`mask_to_spans` / :func:`spans_to_mask`).
    """

    spans: tuple[Span, ...]
    n_units: int

    def __post_init__(self) -> None:
        if self.n_units < 0:
            raise ValueError(f"n_units must be >= 0, got {self.n_units}")
        merged = tuple(_merge_overlapping(self.spans))
        if merged and merged[-1].end >= self.n_units:
            raise ValueError(
                f"span {merged[-1]} exceeds context of {self.n_units} units"
            )
        object.__setattr__(self, "spans", merged)

    def __bool__(self) -> bool:
        return bool(self.spans)

    def unit_indexes(self) -> frozenset[int]:
        """Set of all unit indexes covered by the answer."""
        return frozenset(u for span in self.spans for u in span.units())

    def unit_count(self) -> int:
        """Number of units covered by the answer."""
        return sum(len(span) for span in self.spans)

    def to_mask(self) -> list[int]:
        return spans_to_mask(self)

    @classmethod
    def from_mask(cls, mask: Sequence[int]) -> AnswerSet:
        return mask_to_spans(mask)

    @classmethod
    def from_unit_indexes(cls, indexes: Iterable[int], n_units: int) -> AnswerSet:
        """Build from a set of unit indexes; consecutive runs become spans."""
        spans: list[Span] = []
        run_start: int | None = None
        prev = None
        for u in sorted(set(indexes)):
            if run_start is None:
                run_start = u
            elif u != prev + 1:  # type: ignore[operator]
                spans.append(Span(run_start, prev))  # type: ignore[arg-type]
                run_start = u
            prev = u
        if run_start is not None:
            spans.append(Span(run_start, prev))  # type: ignore[arg-type]
        return cls(tuple(spans), n_units)


def mask_to_spans(mask: Sequence[int]) -> AnswerSet:
    """Convert a binary answer mask into spans, one per maximal run of 1s."""
    return AnswerSet.from_unit_indexes(
        (i for i, bit in enumerate(mask) if bit), len(mask)
    )


def spans_to_mask(answer: AnswerSet) -> list[int]:
    """Inverse of :func:`mask_to_spans`; length equals ``answer.n_units``."""
    mask = [0] * answer.n_units
    for span in answer.spans:
        for u in span.units():
            mask[u] = 1
    return mask


def merge_spans(raw: Iterable[Span], n_units: int) -> AnswerSet:
    """Canonicalize a raw span list: merge overlaps and nesting, keep adjacency."""
    return AnswerSet(tuple(raw), n_units)


@dataclass(frozen=True)
class QAInstance:
    """One question over a segmented context, with optional gold answer."""

    id: str
    question: tuple[str, ...]
    context_units: tuple[str, ...]
    granularity: Granularity
    gold: AnswerSet | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "question", tuple(self.question))
        object.__setattr__(self, "context_units", tuple(self.context_units))
        if not self.context_units:
            raise ValueError(f"instance {self.id!r}: context_units must be non-empty")
        if self.gold is not None and self.gold.n_units != len(self.context_units):
            raise ValueError(
                f"instance {self.id!r}: gold covers {self.gold.n_units} units "
                f"but context has {len(self.context_units)}"
            )

    @property
    def n_units(self) -> int:
        return len(self.context_units)
