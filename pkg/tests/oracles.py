"""Brute-force reference implementations for checking the library.

Everything here works on plain (start, end) tuples and explicit unit
enumeration, deliberately independent of the code paths under test.
"""

from __future__ import annotations


def union_units(spans: list[tuple[int, int]]) -> set[int]:
    units: set[int] = set()
    for start, end in spans:
        for u in range(start, end + 1):
            units.add(u)
    return units


def fi_decode_oracle(values, n_units: int, offset: int) -> list[int]:
    """Filter to range, set-ify, sort."""
    kept = set()
    for v in values:
        v = v - offset
        if 0 <= v < n_units:
            kept.add(v)
    return sorted(kept)


def prf_from_counts(credit_p, total_p, credit_r, total_r):
    if total_p == 0 and total_r == 0:
        return (1.0, 1.0, 1.0)
    p = credit_p / total_p if total_p else 0.0
    r = credit_r / total_r if total_r else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return (p, r, f1)


def unit_prf_oracle(pred_spans, gold_spans, n_units):
    pred_units = [
        u for u in range(n_units) if any(s <= u <= e for s, e in pred_spans)
    ]
    gold_units = [
        u for u in range(n_units) if any(s <= u <= e for s, e in gold_spans)
    ]
    hit = sum(1 for u in pred_units if u in gold_units)
    return prf_from_counts(hit, len(pred_units), hit, len(gold_units))


def em_prf_oracle(pred_spans, gold_spans):
    matched_p = sum(1 for p in pred_spans if any(p == g for g in gold_spans))
    matched_g = sum(1 for g in gold_spans if any(g == p for p in pred_spans))
    return prf_from_counts(matched_p, len(pred_spans), matched_g, len(gold_spans))


def pm_prf_oracle(pred_spans, gold_spans):
    def overlap(a, b):
        return len(
            set(range(a[0], a[1] + 1)) & set(range(b[0], b[1] + 1))
        )

    credit_p = sum(
        max((overlap(p, g) for g in gold_spans), default=0) / (p[1] - p[0] + 1)
        for p in pred_spans
    )
    credit_r = sum(
        max((overlap(g, p) for p in pred_spans), default=0) / (g[1] - g[0] + 1)
        for g in gold_spans
    )
    return prf_from_counts(credit_p, len(pred_spans), credit_r, len(gold_spans))


def mask_of_spans(spans, n_units):
    mask = [0] * n_units
    for start, end in spans:
        for u in range(start, end + 1):
            mask[u] = 1
    return mask
