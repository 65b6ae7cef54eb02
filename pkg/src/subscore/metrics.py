"""All named metrics, built from tokenization, alignment and TER primitives."""

from __future__ import annotations

import dataclasses
from typing import Callable, Optional

from subscore.alignment import (
    SegmentPair,
    block_parallel_pairs,
    interpolate_word_timings,
    levenshtein_align,
    time_align,
)
from subscore.ngram import (
    BLEU_ORDER,
    CHRF_ORDER,
    bleu_stats,
    chrf_stats,
    corpus_bleu,
    corpus_chrf,
    total_stats,
)
from subscore.scores import MetricScore
from subscore.srt import SubtitleFile
from subscore.suber import suber
from subscore.ter import (
    MAX_SHIFT_DISTANCE,
    MAX_SHIFT_SIZE,
    PLAIN,
    levenshtein_counts,
    sum_counts,
    ter_with_shifts,
)
from subscore.tokens import (
    CASED_MODE,
    MT_MODE,
    SUBER_MODE,
    WER_MODE,
    NormalizationMode,
    Segment,
    block_segments,
    mask_segment,
    mask_words,
    split_sentences,
    tokenize_file,
)

SEGMENTED_METRICS = ("BLEU", "TER", "chrF")
LEVELS = ("block", "sentence")


class EmptyReferenceError(ValueError):
    pass


def _require_reference(length: int, metric: str):
    if length == 0:
        raise EmptyReferenceError(f"{metric}: reference contains no tokens")


def wer(
    hyp: SubtitleFile,
    ref: SubtitleFile,
    mode: NormalizationMode = WER_MODE,
    with_breaks: bool = False,
) -> MetricScore:
    """Whole-file word error rate; break tokens count as ordinary words."""
    h = tokenize_file(hyp, mode, with_breaks)
    r = tokenize_file(ref, mode, with_breaks)
    _require_reference(len(r), "WER")
    counts = levenshtein_counts(h, r, PLAIN)
    return MetricScore("WER", 100 * counts.rate(), mode, "file", counts)


def t_wer(hyp: SubtitleFile, ref: SubtitleFile, mode: NormalizationMode = WER_MODE) -> MetricScore:
    """WER restricted to time-aligned segments built from interpolated word times."""
    ref_segments = block_segments(ref, mode, with_breaks=False)
    _require_reference(sum(len(s) for s in ref_segments), "t-WER")
    pairs, dropped = time_align(interpolate_word_timings(hyp, mode), ref_segments)
    counts = sum_counts(levenshtein_counts(p.hyp.tokens, p.ref.tokens, PLAIN) for p in pairs)
    warnings = []
    if dropped:
        warnings.append(f"{dropped} hypothesis words overlap no reference subtitle and were dropped")
    return MetricScore(
        "t-WER",
        100 * counts.rate(),
        mode,
        "t-segment",
        counts,
        warnings,
    )


def is_template_pair(hyp: SubtitleFile, ref: SubtitleFile) -> bool:
    """Same number of blocks with identical timings on both sides."""
    return len(hyp.blocks) == len(ref.blocks) and all(
        h.span == r.span for h, r in zip(hyp.blocks, ref.blocks)
    )


def _reference_segments(ref, level, mode, with_breaks) -> list[Segment]:
    if level == "block":
        return block_segments(ref, mode, with_breaks)
    if level == "sentence":
        return split_sentences(ref, mode, with_breaks)
    raise ValueError(f"unknown segment level {level!r}; expected one of {LEVELS}")


def segment_pairs(
    hyp: SubtitleFile,
    ref: SubtitleFile,
    level: str,
    mode: NormalizationMode,
    with_breaks: bool,
    mask: bool = False,
) -> list[SegmentPair]:
    """Hypothesis/reference segment pairs for segment-level scoring.

    Template translations at block level are paired block by block; all
    other cases go through Levenshtein alignment of the whole hypothesis.
    """
    ref_segments = _reference_segments(ref, level, mode, with_breaks)
    if mask:
        ref_segments = [mask_segment(s) for s in ref_segments]
    if level == "block" and is_template_pair(hyp, ref):
        hyp_segments = block_segments(hyp, mode, with_breaks)
        if mask:
            hyp_segments = [mask_segment(s) for s in hyp_segments]
        return block_parallel_pairs(hyp_segments, ref_segments)
    if not ref_segments:
        return []
    hyp_tokens = tokenize_file(hyp, mode, with_breaks)
    if mask:
        hyp_tokens = mask_words(hyp_tokens)
    return levenshtein_align(hyp_tokens, ref_segments)


def score_pairs(metric: str, pairs: list[SegmentPair], **ter_options) -> MetricScore:
    """Corpus-level BLEU, TER or chrF over already paired segments."""
    ref_length = sum(len(p.ref) for p in pairs)
    _require_reference(ref_length, metric)
    if metric == "BLEU":
        stats = total_stats((bleu_stats(p.hyp.surfaces(), p.ref.surfaces()) for p in pairs), BLEU_ORDER)
        value, warnings = corpus_bleu(stats)
        return MetricScore("BLEU", value, details=stats, warnings=warnings)
    if metric == "chrF":
        stats = total_stats((chrf_stats(p.hyp.surfaces(), p.ref.surfaces()) for p in pairs), CHRF_ORDER)
        return MetricScore("chrF", corpus_chrf(stats), details=stats)
    if metric == "TER":
        counts = sum_counts(ter_with_shifts(p.hyp.tokens, p.ref.tokens, PLAIN, **ter_options) for p in pairs)
        return MetricScore("TER", 100 * counts.rate(), details=counts)
    raise ValueError(f"unknown segmented metric {metric!r}; expected one of {SEGMENTED_METRICS}")


def segmented_metric(
    metric: str,
    hyp: SubtitleFile,
    ref: SubtitleFile,
    level: str = "sentence",
    mode: NormalizationMode = MT_MODE,
    with_breaks: bool = False,
    pairs_out: Optional[list] = None,
    **ter_options,
) -> MetricScore:
    """BLEU, TER or chrF on block- or sentence-level segments."""
    if metric not in SEGMENTED_METRICS:
        raise ValueError(f"unknown segmented metric {metric!r}; expected one of {SEGMENTED_METRICS}")
    pairs = segment_pairs(hyp, ref, level, mode, with_breaks)
    if pairs_out is not None:
        pairs_out.extend(pairs)
    score = score_pairs(metric, pairs, **ter_options)
    return dataclasses.replace(score, mode=mode, segment_level=level)


def ter_br(
    hyp: SubtitleFile,
    ref: SubtitleFile,
    level: str = "sentence",
    mode: NormalizationMode = MT_MODE,
    pairs_out: Optional[list] = None,
    **ter_options,
) -> MetricScore:
    """Segmented TER with break tokens where every word is masked."""
    pairs = segment_pairs(hyp, ref, level, mode, with_breaks=True, mask=True)
    if pairs_out is not None:
        pairs_out.extend(pairs)
    score = score_pairs("TER", pairs, **ter_options)
    return dataclasses.replace(score, metric="TER-br", mode=mode, segment_level=level)


def t_bleu(hyp: SubtitleFile, ref: SubtitleFile, mode: NormalizationMode = MT_MODE) -> MetricScore:
    """BLEU on reference blocks paired with time-aligned hypothesis words."""
    pairs, dropped = time_align(interpolate_word_timings(hyp, mode), block_segments(ref, mode, False))
    score = score_pairs("BLEU", pairs)
    if dropped:
        score.warnings.append(f"{dropped} hypothesis words overlap no reference subtitle and were dropped")
    return dataclasses.replace(score, metric="t-BLEU", mode=mode, segment_level="t-segment")


def _named(name: str, fn: Callable[..., MetricScore]):
    def run(hyp, ref, **options):
        return dataclasses.replace(fn(hyp, ref, **options), metric=name)

    return run


def _suber_variant(mode):
    def run(hyp, ref, max_shift_size=MAX_SHIFT_SIZE, max_shift_distance=MAX_SHIFT_DISTANCE,
            max_region_tokens=None, pairs_out=None):
        return suber(
            hyp, ref, mode, True,
            max_shift_size=max_shift_size,
            max_shift_distance=max_shift_distance,
            max_region_tokens=max_region_tokens,
        )

    return run


def _wer_variant(mode, with_breaks):
    def run(hyp, ref, pairs_out=None, **_):
        return wer(hyp, ref, mode, with_breaks)

    return run


def _t_wer_variant(hyp, ref, pairs_out=None, **_):
    return t_wer(hyp, ref, WER_MODE)


def _segmented_variant(metric, level, with_breaks):
    def run(hyp, ref, pairs_out=None, max_shift_size=MAX_SHIFT_SIZE,
            max_shift_distance=MAX_SHIFT_DISTANCE, **_):
        options = {}
        if metric == "TER":
            options = dict(max_shift_size=max_shift_size, max_shift_distance=max_shift_distance)
        return segmented_metric(metric, hyp, ref, level, MT_MODE, with_breaks, pairs_out, **options)

    return run


def _ter_br_variant(level):
    def run(hyp, ref, pairs_out=None, max_shift_size=MAX_SHIFT_SIZE,
            max_shift_distance=MAX_SHIFT_DISTANCE, **_):
        return ter_br(hyp, ref, level, MT_MODE, pairs_out,
                      max_shift_size=max_shift_size, max_shift_distance=max_shift_distance)

    return run


METRICS: dict[str, Callable[..., MetricScore]] = {
    name: _named(name, fn)
    for name, fn in [
        ("SubER", _suber_variant(SUBER_MODE)),
        ("SubER-cased", _suber_variant(CASED_MODE)),
        ("WER", _wer_variant(WER_MODE, False)),
        ("WER-cased", _wer_variant(CASED_MODE, False)),
        ("WER-break", _wer_variant(WER_MODE, True)),
        ("t-WER", _t_wer_variant),
        ("BLEU-block", _segmented_variant("BLEU", "block", False)),
        ("BLEU-sent", _segmented_variant("BLEU", "sentence", False)),
        ("BLEU-sent-break", _segmented_variant("BLEU", "sentence", True)),
        ("TER-block", _segmented_variant("TER", "block", False)),
        ("TER-sent", _segmented_variant("TER", "sentence", False)),
        ("TER-sent-break", _segmented_variant("TER", "sentence", True)),
        ("chrF-sent", _segmented_variant("chrF", "sentence", False)),
        ("TER-br-block", _ter_br_variant("block")),
        ("TER-br-sent", _ter_br_variant("sentence")),
    ]
}

METRIC_NAMES = tuple(METRICS)


def compute_metric(name: str, hyp: SubtitleFile, ref: SubtitleFile, **options) -> MetricScore:
    """Compute one metric by its report name (see ``METRIC_NAMES``).

    Recognized options: ``max_shift_size``, ``max_shift_distance``,
    ``max_region_tokens`` (SubER only) and ``pairs_out``, a list that
    receives the segment pairs of alignment-based metrics.
    """
    try:
        fn = METRICS[name]
    except KeyError:
        raise ValueError(f"unknown metric {name!r}; valid names: {', '.join(METRIC_NAMES)}") from None
    return fn(hyp, ref, **options)
