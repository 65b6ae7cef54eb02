"""Subtitle quality metrics: SubER plus WER, BLEU, TER and chrF baselines."""

from subscore.alignment import (
    SegmentPair,
    TimedWord,
    interpolate_word_timings,
    levenshtein_align,
    time_align,
)
from subscore.metrics import (
    METRIC_NAMES,
    compute_metric,
    segmented_metric,
    t_bleu,
    t_wer,
    ter_br,
    wer,
)
from subscore.scores import MetricScore, NGramStats
from subscore.srt import (
    SrtParseError,
    SubtitleBlock,
    SubtitleFile,
    format_timestamp,
    load_srt,
    parse_srt,
    parse_timestamp,
    render_srt,
    strip_file_markup,
    strip_markup,
)
from subscore.suber import RegionPair, overlaps, split_scoring_regions, suber
from subscore.ter import PLAIN, TIME_OVERLAP, EditCounts, MatchPredicate, ter_with_shifts
from subscore.tokens import (
    NormalizationMode,
    Segment,
    Token,
    block_segments,
    mask_words,
    split_sentences,
    tokenize_file,
)

__version__ = "0.1.0"
