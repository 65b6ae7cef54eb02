"""Pairing hypothesis text with reference segments.

Two strategies are provided for files without a sentence alignment:
cutting the hypothesis token stream where it aligns best with the reference
segment boundaries, or assigning interpolated hypothesis word times to the
reference segment they overlap most.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Optional, Sequence

from subscore.srt import SubtitleFile
from subscore.ter import DEL, DIAG_OK, DEL_OK, INS, INS_OK, MATCH, PLAIN, levenshtein_ops
from subscore.tokens import WORD, NormalizationMode, Segment, Token, tokenize_blocks


@dataclass(frozen=True)
class SegmentPair:
    hyp: Segment
    ref: Segment
    method: str
    distance: Optional[int] = None

    def as_dict(self) -> dict:
        out = {
            "method": self.method,
            "hyp": " ".join(self.hyp.surfaces()),
            "ref": " ".join(self.ref.surfaces()),
            "ref_span": list(self.ref.span) if self.ref.span else None,
        }
        if self.distance is not None:
            out["distance"] = self.distance
        return out


@dataclass(frozen=True)
class TimedWord:
    token: Token
    start: int
    end: int


def _hyp_segment(tokens: Sequence[Token], origin: str) -> Segment:
    span = None
    if tokens:
        span = (min(t.span[0] for t in tokens), max(t.span[1] for t in tokens))
    return Segment(tuple(tokens), span, origin)


# Consuming hypothesis tokens first keeps the path as low as possible in every
# reference column, which yields the earliest cut at each segment boundary.
_EARLIEST_CUT = (INS_OK, DIAG_OK, DEL_OK)


def levenshtein_align(hyp_tokens: Sequence[Token], ref_segments: Sequence[Segment]) -> list[SegmentPair]:
    """Cut ``hyp_tokens`` into one contiguous chunk per reference segment.

    The cuts minimize the summed word-level Levenshtein distance between
    chunks and segments; among optimal cuts the earliest positions win.
    """
    if not ref_segments:
        raise ValueError("levenshtein_align needs at least one reference segment")
    ref_tokens = [t for seg in ref_segments for t in seg.tokens]
    ops = levenshtein_ops(hyp_tokens, ref_tokens, PLAIN, prefer=_EARLIEST_CUT)

    bounds = []
    total = 0
    for seg in ref_segments:
        total += len(seg)
        bounds.append(total)

    # cut[k] = hypothesis position where the path first reaches column bounds[k]
    cuts, costs = [], []
    i = j = 0
    cost = 0
    k = 0

    def reach_bounds():
        nonlocal k, cost
        while k < len(bounds) and j == bounds[k] and (k < len(bounds) - 1 or i == len(hyp_tokens)):
            cuts.append(i)
            costs.append(cost)
            cost = 0
            k += 1

    reach_bounds()
    for op in ops:
        if op != MATCH:
            cost += 1
        if op != DEL:
            i += 1
        if op != INS:
            j += 1
        reach_bounds()

    pairs = []
    prev = 0
    for seg, cut, dist in zip(ref_segments, cuts, costs):
        chunk = hyp_tokens[prev:cut]
        pairs.append(SegmentPair(_hyp_segment(chunk, seg.origin), seg, "levenshtein", dist))
        prev = cut
    return pairs


def block_parallel_pairs(hyp_segments: Sequence[Segment], ref_segments: Sequence[Segment]) -> list[SegmentPair]:
    if len(hyp_segments) != len(ref_segments):
        raise ValueError("block-parallel pairing needs equal segment counts")
    return [SegmentPair(h, r, "block-parallel") for h, r in zip(hyp_segments, ref_segments)]


def interpolate_word_timings(file: SubtitleFile, mode: NormalizationMode) -> list[TimedWord]:
    """Split each block's span evenly among its words.

    Boundary ``i`` of a block with ``k`` words lies at
    ``start + round(i * duration / k)``, so the last word ends exactly at the
    block end.
    """
    timed = []
    for block_id, block in enumerate(file.blocks):
        words = tokenize_blocks([block], mode, with_breaks=False, block_ids=[block_id])
        k = len(words)
        duration = block.end - block.start
        edges = [block.start + (2 * i * duration + k) // (2 * k) for i in range(k)] + [block.end]
        for n, token in enumerate(words):
            timed.append(TimedWord(token, edges[n], edges[n + 1]))
    return timed


def time_align(
    hyp_words: Sequence[TimedWord], ref_segments: Sequence[Segment]
) -> tuple[list[SegmentPair], int]:
    """Assign each timed hypothesis word to the reference segment it overlaps most.

    Ties go to the earlier segment. Words overlapping no segment are dropped;
    the number of dropped words is returned alongside the pairs.
    """
    for seg in ref_segments:
        if seg.span is None:
            raise ValueError("time alignment needs reference segments with time spans")
    order = sorted(range(len(ref_segments)), key=lambda s: ref_segments[s].span[0])
    starts = [ref_segments[s].span[0] for s in order]
    max_end = []
    for s in order:
        end = ref_segments[s].span[1]
        max_end.append(max(end, max_end[-1]) if max_end else end)

    assigned: list[list[Token]] = [[] for _ in ref_segments]
    dropped = 0
    for word in hyp_words:
        best, best_overlap = None, 0
        pos = bisect.bisect_left(starts, word.end) - 1
        while pos >= 0 and max_end[pos] > word.start:
            s = order[pos]
            seg_start, seg_end = ref_segments[s].span
            amount = min(word.end, seg_end) - max(word.start, seg_start)
            if amount > best_overlap or (amount == best_overlap and best is not None and s < best):
                best, best_overlap = s, amount
            pos -= 1
        if best is None or best_overlap <= 0:
            dropped += 1
        else:
            assigned[best].append(word.token)

    pairs = [
        SegmentPair(_hyp_segment(tokens, "t-segment"), seg, "time")
        for tokens, seg in zip(assigned, ref_segments)
    ]
    return pairs, dropped


def words_only(tokens: Sequence[Token]) -> list[Token]:
    return [t for t in tokens if t.kind == WORD]
