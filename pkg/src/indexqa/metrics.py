"""Precision/recall/F1 under the four scoring regimes.

Unit-level scoring (the same computation at sentence or token granularity)
compares covered unit sets. Exact match credits only identical (start, end)
spans. Partial match credits each span with its best overlap ratio against
the other side. Empty-vs-empty scores perfect (unanswerable items answered
with nothing are correct); one-sided empty scores zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from statistics import fmean
from typing import Iterable, Sequence

from .core import AnswerSet


class Regime(Enum):
    SENTENCE_LEVEL = "sentence_level"
    TOKEN_LEVEL = "token_level"
    EXACT_MATCH = "exact_match"
    PARTIAL_MATCH = "partial_match"


class Aggregation(Enum):
    MACRO_OVER_INSTANCES = "macro_over_instances"
    MICRO_OVER_SPANS = "micro_over_spans"


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> PRF:
        if precision + recall > 0:
            f1 = 2 * precision * recall / (precision + recall)
        else:
            f1 = 0.0
        return cls(precision, recall, f1)


@dataclass(frozen=True)
class _Credits:
    """Precision/recall credit and mass for one instance, poolable for
    micro aggregation. Credit is matched-unit count (unit regime), matched
    span count (EM), or summed best-overlap ratios (PM)."""

    credit_p: float
    total_p: float
    credit_r: float
    total_r: float

    def to_prf(self) -> PRF:
        if self.total_p == 0 and self.total_r == 0:
            return PRF(1.0, 1.0, 1.0)
        p = self.credit_p / self.total_p if self.total_p else 0.0
        r = self.credit_r / self.total_r if self.total_r else 0.0
        return PRF.from_pr(p, r)


def _check_units(pred: AnswerSet, gold: AnswerSet) -> None:
    if pred.n_units != gold.n_units:
        raise ValueError(
            f"pred spans cover {pred.n_units} units but gold covers {gold.n_units}"
        )


def _unit_credits(pred: AnswerSet, gold: AnswerSet) -> _Credits:
    pred_units = pred.unit_indexes()
    gold_units = gold.unit_indexes()
    hit = len(pred_units & gold_units)
    return _Credits(hit, len(pred_units), hit, len(gold_units))


def _em_credits(pred: AnswerSet, gold: AnswerSet) -> _Credits:
    matched = len(set(pred.spans) & set(gold.spans))
    return _Credits(matched, len(pred.spans), matched, len(gold.spans))


def _pm_credits(pred: AnswerSet, gold: AnswerSet) -> _Credits:
    def best_ratios(side: AnswerSet, other: AnswerSet) -> float:
        total = 0.0
        for span in side.spans:
            units = set(span.units())
            best = max(
                (len(units & set(o.units())) for o in other.spans), default=0
            )
            total += best / len(span)
        return total

    return _Credits(
        best_ratios(pred, gold), len(pred.spans),
        best_ratios(gold, pred), len(gold.spans),
    )


_CREDIT_FNS = {
    Regime.SENTENCE_LEVEL: _unit_credits,
    Regime.TOKEN_LEVEL: _unit_credits,
    Regime.EXACT_MATCH: _em_credits,
    Regime.PARTIAL_MATCH: _pm_credits,
}

DEFAULT_AGGREGATION = {
    Regime.SENTENCE_LEVEL: Aggregation.MACRO_OVER_INSTANCES,
    Regime.TOKEN_LEVEL: Aggregation.MACRO_OVER_INSTANCES,
    Regime.EXACT_MATCH: Aggregation.MICRO_OVER_SPANS,
    Regime.PARTIAL_MATCH: Aggregation.MICRO_OVER_SPANS,
}


def unit_prf(pred: AnswerSet, gold: AnswerSet) -> PRF:
    """Precision/recall/F1 over covered unit sets."""
    _check_units(pred, gold)
    return _unit_credits(pred, gold).to_prf()


def em_prf(pred: AnswerSet, gold: AnswerSet) -> PRF:
    """Span-level scores where only identical (start, end) spans match."""
    _check_units(pred, gold)
    return _em_credits(pred, gold).to_prf()


def pm_prf(pred: AnswerSet, gold: AnswerSet) -> PRF:
    """Span-level scores crediting each span with its best unit-overlap
    ratio against the other side (leaderboard partial-match convention)."""
    _check_units(pred, gold)
    return _pm_credits(pred, gold).to_prf()


@dataclass(frozen=True)
class EvalReport:
    regime: Regime
    aggregation: Aggregation
    per_instance: tuple[tuple[str, PRF], ...]
    aggregate: PRF

    def to_json_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "aggregation": self.aggregation.value,
            "aggregate": _prf_dict(self.aggregate),
            "per_instance": [
                {"id": inst_id, **_prf_dict(prf)}
                for inst_id, prf in self.per_instance
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), ensure_ascii=False)


def _prf_dict(prf: PRF) -> dict:
    return {
        "p": round(prf.precision, 6),
        "r": round(prf.recall, 6),
        "f1": round(prf.f1, 6),
    }


def evaluate_corpus(
    pairs: Iterable[tuple[AnswerSet, AnswerSet, str]],
    regime: Regime,
    aggregation: Aggregation | None = None,
) -> EvalReport:
    """Score a corpus of (pred, gold, id) triples.

    Macro aggregation averages per-instance precision, recall, and F1.
    Micro aggregation pools credits and masses across the corpus before
    taking ratios (vacuous empty-vs-empty instances contribute no mass).
    """
    if aggregation is None:
        aggregation = DEFAULT_AGGREGATION[regime]
    pairs = list(pairs)
    if not pairs:
        raise ValueError("cannot evaluate an empty corpus")
    seen: set[str] = set()
    credit_fn = _CREDIT_FNS[regime]
    rows: list[tuple[str, PRF]] = []
    credits: list[_Credits] = []
    for pred, gold, inst_id in pairs:
        if inst_id in seen:
            raise ValueError(f"duplicate instance id {inst_id!r}")
        seen.add(inst_id)
        _check_units(pred, gold)
        c = credit_fn(pred, gold)
        credits.append(c)
        rows.append((inst_id, c.to_prf()))

    if aggregation is Aggregation.MACRO_OVER_INSTANCES:
        aggregate = PRF(
            fmean(prf.precision for _, prf in rows),
            fmean(prf.recall for _, prf in rows),
            fmean(prf.f1 for _, prf in rows),
        )
    else:
        pooled = _Credits(
            sum(c.credit_p for c in credits),
            sum(c.total_p for c in credits),
            sum(c.credit_r for c in credits),
            sum(c.total_r for c in credits),
        )
        aggregate = pooled.to_prf()
    return EvalReport(regime, aggregation, tuple(rows), aggregate)
