"""Corpus BLEU and chrF from per-segment n-gram statistics."""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Sequence

from subscore.scores import NGramStats

BLEU_ORDER = 4
CHRF_ORDER = 6
CHRF_BETA = 2.0
# Zero precisions are replaced by FLOOR / total n-grams of that order.
BLEU_FLOOR = 0.5


def _ngrams(items: Sequence, n: int) -> Counter:
    return Counter(tuple(items[k:k + n]) for k in range(len(items) - n + 1))


def ngram_stats(hyp: Sequence, ref: Sequence, max_order: int) -> NGramStats:
    """Clipped n-gram matches between two item sequences (words or characters)."""
    matches, hyp_totals, ref_totals = [], [], []
    for n in range(1, max_order + 1):
        h, r = _ngrams(hyp, n), _ngrams(ref, n)
        matches.append(sum(min(count, r[g]) for g, count in h.items()))
        hyp_totals.append(max(len(hyp) - n + 1, 0))
        ref_totals.append(max(len(ref) - n + 1, 0))
    return NGramStats(tuple(matches), tuple(hyp_totals), tuple(ref_totals), len(hyp), len(ref))


def bleu_stats(hyp: Sequence[str], ref: Sequence[str]) -> NGramStats:
    return ngram_stats(list(hyp), list(ref), BLEU_ORDER)


def chrf_stats(hyp: Sequence[str], ref: Sequence[str]) -> NGramStats:
    """Character n-gram statistics; whitespace does not take part."""
    return ngram_stats(list("".join(hyp)), list("".join(ref)), CHRF_ORDER)


def total_stats(stats: Iterable[NGramStats], max_order: int) -> NGramStats:
    zero = (0,) * max_order
    total = NGramStats(zero, zero, zero, 0, 0)
    for s in stats:
        total = total + s
    return total


def corpus_bleu(stats: NGramStats) -> tuple[float, list[str]]:
    """BLEU in [0, 100] with brevity penalty and floored zero precisions.

    Orders for which the hypothesis has no n-grams at all are left out of the
    geometric mean.
    """
    warnings = []
    if stats.hyp_length == 0:
        return 0.0, ["empty hypothesis: BLEU is 0"]
    log_sum, used = 0.0, 0
    for n, (matched, total) in enumerate(zip(stats.matches, stats.hyp_totals), start=1):
        if total == 0:
            warnings.append(f"no hypothesis {n}-grams; order {n} left out of BLEU")
            continue
        if matched == 0:
            warnings.append(f"zero {n}-gram matches; precision floored at {BLEU_FLOOR}/{total}")
            precision = BLEU_FLOOR / total
        else:
            precision = matched / total
        log_sum += math.log(precision)
        used += 1
    if stats.hyp_length < stats.ref_length:
        brevity = math.exp(1 - stats.ref_length / stats.hyp_length)
    else:
        brevity = 1.0
    return 100 * brevity * math.exp(log_sum / used), warnings


def corpus_chrf(stats: NGramStats, beta: float = CHRF_BETA) -> float:
    """chrF in [0, 100]: F-beta of n-gram precision and recall averaged over orders."""
    precisions, recalls = [], []
    for matched, h, r in zip(stats.matches, stats.hyp_totals, stats.ref_totals):
        if h > 0 and r > 0:
            precisions.append(matched / h)
            recalls.append(matched / r)
    if not precisions:
        return 0.0
    p = sum(precisions) / len(precisions)
    r = sum(recalls) / len(recalls)
    if p + r == 0:
        return 0.0
    b2 = beta * beta
    return 100 * (1 + b2) * p * r / (b2 * p + r)
