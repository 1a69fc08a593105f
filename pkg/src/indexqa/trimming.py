"""Fit contexts into a token budget without ever losing gold answer units.

The kept window is the minimal span covering the whole gold answer, grown
alternately one unit left then one unit right (left first) until the budget
or the context edge stops each side. Sentence-granularity contexts grow in
whole-sentence steps and never split a sentence. Instances whose answer
alone exceeds the budget are dropped, which is a data-quality signal worth
counting rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import AnswerSet, Granularity, QAInstance, Span
from .text import tokenize

ANSWER_EXCEEDS_BUDGET = "answer_exceeds_budget"


@dataclass(frozen=True)
class Trimmed:
    instance: QAInstance
    window: Span  # kept unit range, in original coordinates
    offset_map: dict[int, int]  # original unit index -> trimmed unit index


@dataclass(frozen=True)
class Dropped:
    reason: str = ANSWER_EXCEEDS_BUDGET


TrimResult = Trimmed | Dropped


def _unit_token_counts(inst: QAInstance) -> list[int]:
    # At token granularity every unit is one token by definition.
    if inst.granularity is Granularity.TOKEN:
        return [1] * inst.n_units
    return [len(tokenize(unit)) for unit in inst.context_units]


def _expand(
    counts: list[int], lo: int, hi: int, total: int, budget: int
) -> tuple[int, int]:
    # Alternate left, right; a side that would overflow stays overflowed
    # forever (the window only grows), so it is treated as exhausted.
    left_open = right_open = True
    n = len(counts)
    while left_open or right_open:
        if left_open:
            if lo > 0 and total + counts[lo - 1] <= budget:
                lo -= 1
                total += counts[lo]
            else:
                left_open = False
        if right_open:
            if hi < n - 1 and total + counts[hi + 1] <= budget:
                hi += 1
                total += counts[hi]
            else:
                right_open = False
    return lo, hi


def _build_result(inst: QAInstance, lo: int, hi: int) -> Trimmed:
    gold = inst.gold
    if gold is not None:
        shifted = tuple(Span(s.start - lo, s.end - lo) for s in gold.spans)
        gold = AnswerSet(shifted, hi - lo + 1)
    trimmed = QAInstance(
        id=inst.id,
        question=inst.question,
        context_units=inst.context_units[lo : hi + 1],
        granularity=inst.granularity,
        gold=gold,
    )
    return Trimmed(trimmed, Span(lo, hi), {i: i - lo for i in range(lo, hi + 1)})


def trim(inst: QAInstance, budget_tokens: int) -> TrimResult:
    """Trim ``inst`` to at most ``budget_tokens`` tokens.

    With a non-empty gold answer the window grows outward from the minimal
    span covering every answer unit; the remapped gold is therefore always
    fully contained. Without gold (or with an empty one) the leading window
    that fits the budget is kept instead.
    """
    if budget_tokens < 1:
        raise ValueError(f"budget_tokens must be >= 1, got {budget_tokens}")
    counts = _unit_token_counts(inst)

    if inst.gold is None or not inst.gold.spans:
        if counts[0] > budget_tokens:
            return Dropped()
        lo = hi = 0
        total = counts[0]
        while hi < inst.n_units - 1 and total + counts[hi + 1] <= budget_tokens:
            hi += 1
            total += counts[hi]
        return _build_result(inst, lo, hi)

    core_lo = inst.gold.spans[0].start
    core_hi = inst.gold.spans[-1].end
    total = sum(counts[core_lo : core_hi + 1])
    if total > budget_tokens:
        return Dropped()
    lo, hi = _expand(counts, core_lo, core_hi, total, budget_tokens)
    return _build_result(inst, lo, hi)


@dataclass(frozen=True)
class TrimStats:
    """Corpus-level trimming summary. Percentages are on a 0-100 scale;
    ``pct_units_removed`` is measured over the instances that actually
    required trimming."""

    pct_instances_trimmed: float
    pct_units_removed: float
    n_dropped: int


class TrimTally:
    def __init__(self) -> None:
        self.n_total = 0
        self.n_trimmed = 0
        self.n_dropped = 0
        self.units_removed = 0
        self.units_before_trim = 0

    def add(self, inst: QAInstance, result: TrimResult) -> None:
        self.n_total += 1
        if isinstance(result, Dropped):
            self.n_dropped += 1
            return
        removed = inst.n_units - len(result.window)
        if removed > 0:
            self.n_trimmed += 1
            self.units_removed += removed
            self.units_before_trim += inst.n_units

    def stats(self) -> TrimStats:
        pct_instances = 100.0 * self.n_trimmed / self.n_total if self.n_total else 0.0
        pct_units = (
            100.0 * self.units_removed / self.units_before_trim
            if self.units_before_trim
            else 0.0
        )
        return TrimStats(pct_instances, pct_units, self.n_dropped)


def corpus_trim_stats(instances, budget_tokens: int) -> TrimStats:
    """Aggregate :func:`trim` over a corpus."""
    tally = TrimTally()
    for inst in instances:
        tally.add(inst, trim(inst, budget_tokens))
    return tally.stats()
