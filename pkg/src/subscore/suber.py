"""Subtitle Edit Rate: TER with time-overlap constraints and break tokens.

Hypothesis and reference are cut into independent scoring regions wherever
neither file displays a subtitle. No match or substitution can cross such a
cut, so edit counts are simply summed over regions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from subscore.scores import MetricScore
from subscore.srt import SubtitleBlock, SubtitleFile
from subscore.ter import (
    MAX_SHIFT_DISTANCE,
    MAX_SHIFT_SIZE,
    TIME_OVERLAP,
    EditCounts,
    spans_overlap,
    sum_counts,
    ter_with_shifts,
)
from subscore.tokens import SUBER_MODE, NormalizationMode, Token, tokenize_blocks, tokenize_file


class RegionTooLarge(ValueError):
    pass


def overlaps(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """True iff the half-open spans share time; touching spans do not."""
    return spans_overlap(a, b)


@dataclass(frozen=True)
class RegionPair:
    hyp_blocks: tuple[SubtitleBlock, ...]
    ref_blocks: tuple[SubtitleBlock, ...]
    span: tuple[int, int]
    hyp_ids: tuple[int, ...] = ()
    ref_ids: tuple[int, ...] = ()

    def tokens(self, mode: NormalizationMode, with_breaks: bool) -> tuple[list[Token], list[Token]]:
        return (
            tokenize_blocks(self.hyp_blocks, mode, with_breaks, self.hyp_ids),
            tokenize_blocks(self.ref_blocks, mode, with_breaks, self.ref_ids),
        )


def split_scoring_regions(hyp: SubtitleFile, ref: SubtitleFile) -> list[RegionPair]:
    """Group blocks of both files into connected components of displayed time."""
    events = sorted(
        [(b.start, b.end, 0, k) for k, b in enumerate(hyp.blocks)]
        + [(b.start, b.end, 1, k) for k, b in enumerate(ref.blocks)]
    )
    groups: list[tuple[int, int, list, list]] = []
    for start, end, side, k in events:
        if groups and start < groups[-1][1]:
            g = groups[-1]
            groups[-1] = (g[0], max(g[1], end), g[2], g[3])
        else:
            groups.append((start, end, [], []))
        groups[-1][2 + side].append(k)

    regions = []
    for start, end, hyp_ids, ref_ids in groups:
        hyp_ids, ref_ids = sorted(hyp_ids), sorted(ref_ids)
        regions.append(
            RegionPair(
                tuple(hyp.blocks[k] for k in hyp_ids),
                tuple(ref.blocks[k] for k in ref_ids),
                (start, end),
                tuple(hyp_ids),
                tuple(ref_ids),
            )
        )
    return regions


def suber_counts(
    hyp: SubtitleFile,
    ref: SubtitleFile,
    mode: NormalizationMode = SUBER_MODE,
    with_breaks: bool = True,
    split_regions: bool = True,
    max_shift_size: int = MAX_SHIFT_SIZE,
    max_shift_distance: int = MAX_SHIFT_DISTANCE,
    max_region_tokens: Optional[int] = None,
) -> EditCounts:
    if split_regions:
        pairs = [r.tokens(mode, with_breaks) for r in split_scoring_regions(hyp, ref)]
    else:
        pairs = [(tokenize_file(hyp, mode, with_breaks), tokenize_file(ref, mode, with_breaks))]
    if max_region_tokens is not None:
        for h, r in pairs:
            if max(len(h), len(r)) > max_region_tokens:
                raise RegionTooLarge(
                    f"scoring region with {max(len(h), len(r))} tokens exceeds "
                    f"the limit of {max_region_tokens}"
                )
    return sum_counts(
        ter_with_shifts(h, r, TIME_OVERLAP, max_shift_size, max_shift_distance) for h, r in pairs
    )


def suber(
    hyp: SubtitleFile,
    ref: SubtitleFile,
    mode: NormalizationMode = SUBER_MODE,
    with_breaks: bool = True,
    **kwargs,
) -> MetricScore:
    """SubER in percent: (word edits + break edits + shifts) / reference tokens.

    Keyword arguments are passed to :func:`suber_counts`.
    """
    counts = suber_counts(hyp, ref, mode, with_breaks, **kwargs)
    warnings = []
    if counts.ref_length == 0 and counts.edits:
        warnings.append("empty reference: score uses denominator 1")
    return MetricScore(
        "SubER",
        100 * counts.rate(),
        mode=mode,
        segment_level="none",
        details=counts,
        warnings=warnings,
    )
