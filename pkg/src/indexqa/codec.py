"""Indexed-context rendering plus index-sequence encoding, decoding, repair.

A generator trained on indexed contexts emits raw integer streams with no
validity guarantee: out of order, duplicated, unpaired, or out of range.
``decode_fi`` / ``decode_si`` turn any such stream into a canonical
:class:`~indexqa.core.AnswerSet` and account for every repair applied.

Wire format: whitespace-separated decimal integers, in display space.
Sentence-granularity data conventionally displays 1-based indexes and
token-granularity data 0-based; both are plain parameters here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .core import AnswerSet, Granularity, QAInstance, Span


class Representation(Enum):
    """Shape of an index sequence.

    FULL_INDEX lists the index of every answer unit. SPAN_INDEX lists
    (start, end) index pairs, one pair per contiguous answer span, and is
    only valid at even length.
    """

    FULL_INDEX = "fi"
    SPAN_INDEX = "si"


def default_display_offset(granularity: Granularity) -> int:
    """Display convention: sentence indexes start at 1, token indexes at 0."""
    return 1 if granularity is Granularity.SENTENCE else 0


@dataclass(frozen=True)
class IndexSequence:
    """A raw index stream in display space. Makes no validity promise:
    out-of-order, duplicate, unpaired, and out-of-range values are all
    representable and are resolved by the decoders."""

    values: tuple[int, ...]
    representation: Representation
    n_units: int
    display_offset: int = 0
    n_skipped: int = 0  # non-integer tokens dropped while lexing

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))

    def to_text(self) -> str:
        """Render as the whitespace-separated wire format."""
        return " ".join(str(v) for v in self.values)


@dataclass(frozen=True)
class RepairReport:
    """Counts of every repair a decoder applied.

    All counts are zero exactly when the input was already a valid canonical
    sequence for its representation. ``n_sorted`` counts positions (values
    for FI, pairs for SI) that were not in ascending order as emitted.
    """

    n_sorted: int = 0
    n_duplicates_removed: int = 0
    n_out_of_range_removed: int = 0
    n_unpaired_pruned: int = 0
    n_invalid_spans_removed: int = 0
    n_spans_merged: int = 0

    def is_clean(self) -> bool:
        return self == RepairReport()


def render_context(
    inst: QAInstance, with_index: bool = True, display_offset: int | None = None
) -> str:
    """Join context units with single spaces, each unit prefixed by its
    display index when ``with_index`` is set (ablation mode omits them)."""
    if display_offset is None:
        display_offset = default_display_offset(inst.granularity)
    if not with_index:
        return " ".join(inst.context_units)
    return " ".join(
        f"{i + display_offset} {unit}" for i, unit in enumerate(inst.context_units)
    )


def encode(
    gold: AnswerSet, representation: Representation, display_offset: int = 0
) -> IndexSequence:
    """Encode a canonical answer as a target index sequence.

    FULL_INDEX emits every answer unit index ascending; SPAN_INDEX emits
    flattened (start, end) pairs in ascending span order. An empty answer
    encodes to an empty sequence.
    """
    if representation is Representation.FULL_INDEX:
        values = [u + display_offset for span in gold.spans for u in span.units()]
    else:
        values = [
            v + display_offset for span in gold.spans for v in (span.start, span.end)
        ]
    return IndexSequence(
        tuple(values), representation, gold.n_units, display_offset
    )


def _count_out_of_order(items: Sequence) -> int:
    ordered = sorted(items)
    return sum(1 for got, want in zip(items, ordered) if got != want)


def decode_fi(seq: IndexSequence) -> tuple[AnswerSet, RepairReport]:
    """Repair a full-index stream: sort, drop duplicates, drop out-of-range
    values, then coalesce consecutive survivors into spans. Never fails;
    the worst case is an empty answer."""
    if seq.representation is not Representation.FULL_INDEX:
        raise ValueError(f"expected a FULL_INDEX sequence, got {seq.representation}")
    internal = [v - seq.display_offset for v in seq.values]
    n_sorted = _count_out_of_order(internal)
    ordered = sorted(internal)
    unique = [v for i, v in enumerate(ordered) if i == 0 or v != ordered[i - 1]]
    in_range = [v for v in unique if 0 <= v < seq.n_units]
    answer = AnswerSet.from_unit_indexes(in_range, seq.n_units)
    report = RepairReport(
        n_sorted=n_sorted,
        n_duplicates_removed=len(ordered) - len(unique),
        n_out_of_range_removed=len(unique) - len(in_range),
    )
    return answer, report


def decode_si(seq: IndexSequence) -> tuple[AnswerSet, RepairReport]:
    """Repair a span-index stream: prune an unpaired trailing value, pair
    the rest positionally, drop inverted or out-of-range pairs, then merge
    overlapping or nested survivors. Never fails."""
    if seq.representation is not Representation.SPAN_INDEX:
        raise ValueError(f"expected a SPAN_INDEX sequence, got {seq.representation}")
    internal = [v - seq.display_offset for v in seq.values]
    n_unpaired = len(internal) % 2
    if n_unpaired:
        internal = internal[:-1]
    pairs = [(internal[i], internal[i + 1]) for i in range(0, len(internal), 2)]
    valid = [
        (start, end)
        for start, end in pairs
        if start <= end and start >= 0 and end < seq.n_units
    ]
    answer = AnswerSet(tuple(Span(s, e) for s, e in valid), seq.n_units)
    report = RepairReport(
        n_sorted=_count_out_of_order(valid),
        n_unpaired_pruned=n_unpaired,
        n_invalid_spans_removed=len(pairs) - len(valid),
        n_spans_merged=len(valid) - len(answer.spans),
    )
    return answer, report


def decode(seq: IndexSequence) -> tuple[AnswerSet, RepairReport]:
    """Dispatch to the decoder matching ``seq.representation``."""
    if seq.representation is Representation.FULL_INDEX:
        return decode_fi(seq)
    return decode_si(seq)


_INT_RE = re.compile(r"-?\d+")


def parse_index_text(
    text: str,
    representation: Representation,
    n_units: int,
    display_offset: int = 0,
) -> IndexSequence:
    """Lex generator output into an index sequence.

    Lenient by design: integers are extracted from each whitespace token
    even when wrapped in punctuation ("(15" or "7,"), and tokens carrying
    no integer at all are skipped and counted in ``n_skipped``.
    """
    values: list[int] = []
    n_skipped = 0
    for token in text.split():
        found = _INT_RE.findall(token)
        if found:
            values.extend(int(v) for v in found)
        else:
            n_skipped += 1
    return IndexSequence(
        tuple(values), representation, n_units, display_offset, n_skipped
    )
