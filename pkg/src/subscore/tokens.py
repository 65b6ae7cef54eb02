"""Token streams for scoring: normalization, break tokens, segments."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from subscore.srt import SubtitleBlock, SubtitleFile

WORD = "word"
EOL = "eol"
EOB = "eob"

EOL_SURFACE = "<eol>"
EOB_SURFACE = "<eob>"
MASK_SURFACE = "MASK"

_PUNCT_HANDLING = ("remove", "attach", "split")
_CLOSERS = "\"'”’)]"
_TERMINALS = ".!?"
_ELLIPSES = ("...", "…")


@dataclass(frozen=True)
class NormalizationMode:
    lowercase: bool = True
    punctuation: str = "attach"

    def __post_init__(self):
        if self.punctuation not in _PUNCT_HANDLING:
            raise ValueError(
                f"punctuation handling must be one of {_PUNCT_HANDLING}, got {self.punctuation!r}"
            )

    def as_dict(self) -> dict:
        return {"lowercase": self.lowercase, "punctuation": self.punctuation}


# Defaults used by the named metrics.
WER_MODE = NormalizationMode(lowercase=True, punctuation="remove")
CASED_MODE = NormalizationMode(lowercase=False, punctuation="attach")
SUBER_MODE = NormalizationMode(lowercase=True, punctuation="attach")
MT_MODE = CASED_MODE


@dataclass(frozen=True)
class Token:
    surface: str
    kind: str
    block_id: int
    span: tuple[int, int]

    @property
    def is_break(self) -> bool:
        return self.kind != WORD

    def key(self) -> tuple[str, str]:
        return (self.kind, self.surface)


@dataclass(frozen=True)
class Segment:
    tokens: tuple[Token, ...]
    span: Optional[tuple[int, int]]
    origin: str

    def __len__(self) -> int:
        return len(self.tokens)

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def words(self) -> list[Token]:
        return [t for t in self.tokens if t.kind == WORD]


def is_punctuation(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def normalize_word(raw: str, mode: NormalizationMode) -> list[str]:
    """Normalize one whitespace-delimited word into zero or more surfaces."""
    word = raw.lower() if mode.lowercase else raw
    if mode.punctuation == "attach":
        return [word]
    lo, hi = 0, len(word)
    while lo < hi and is_punctuation(word[lo]):
        lo += 1
    while hi > lo and is_punctuation(word[hi - 1]):
        hi -= 1
    core = word[lo:hi]
    if mode.punctuation == "remove":
        return [core] if core else []
    return list(word[:lo]) + ([core] if core else []) + list(word[hi:])


def _ends_sentence(raw: str, next_raw: Optional[str]) -> bool:
    stem = raw.rstrip(_CLOSERS)
    if stem.endswith(_ELLIPSES):
        if next_raw is None:
            return True
        first_alpha = next((ch for ch in next_raw if ch.isalpha()), "")
        return first_alpha.isupper()
    return stem.endswith(tuple(_TERMINALS))


def _items(blocks: Iterable[tuple[int, SubtitleBlock]], with_breaks: bool):
    """Flatten blocks into (block_id, block, raw word or break kind) entries."""
    for block_id, block in blocks:
        for n, line in enumerate(block.lines):
            for raw in line.split():
                yield block_id, block, raw, WORD
            last = n == len(block.lines) - 1
            if with_breaks:
                yield block_id, block, None, EOB if last else EOL


def _annotated_tokens(
    blocks: Iterable[tuple[int, SubtitleBlock]], mode: NormalizationMode, with_breaks: bool
):
    """Yield (token, sentence_final) pairs in stream order.

    ``sentence_final`` is set on a word token whose raw word (or a later raw
    word that normalized to nothing) ends a sentence.
    """
    items = list(_items(blocks, with_breaks))
    raw_positions = [k for k, item in enumerate(items) if item[3] == WORD]
    next_raw = {}
    for a, b in zip(raw_positions, raw_positions[1:] + [None]):
        next_raw[a] = items[b][2] if b is not None else None

    for k, (block_id, block, raw, kind) in enumerate(items):
        span = block.span
        if kind != WORD:
            surface = EOL_SURFACE if kind == EOL else EOB_SURFACE
            yield Token(surface, kind, block_id, span), False
            continue
        final = _ends_sentence(raw, next_raw[k])
        surfaces = normalize_word(raw, mode)
        if not surfaces:
            if final:
                yield None, True
            continue
        for n, surface in enumerate(surfaces):
            yield Token(surface, WORD, block_id, span), final and n == len(surfaces) - 1


def tokenize_blocks(
    blocks: Sequence[SubtitleBlock],
    mode: NormalizationMode = SUBER_MODE,
    with_breaks: bool = True,
    block_ids: Optional[Sequence[int]] = None,
) -> list[Token]:
    """Token stream of ``blocks``; ``block_ids`` default to their positions."""
    numbered = zip(block_ids if block_ids is not None else range(len(blocks)), blocks)
    return [tok for tok, _ in _annotated_tokens(numbered, mode, with_breaks) if tok is not None]


def tokenize_file(
    file: SubtitleFile, mode: NormalizationMode = SUBER_MODE, with_breaks: bool = True
) -> list[Token]:
    """Whole-file token stream; break tokens follow each line when requested."""
    return tokenize_blocks(file.blocks, mode, with_breaks)


def _enclosing_span(tokens: Sequence[Token]) -> Optional[tuple[int, int]]:
    if not tokens:
        return None
    return (min(t.span[0] for t in tokens), max(t.span[1] for t in tokens))


def block_segments(
    file: SubtitleFile, mode: NormalizationMode = SUBER_MODE, with_breaks: bool = True
) -> list[Segment]:
    segments = []
    for block_id, block in enumerate(file.blocks):
        tokens = tokenize_blocks([block], mode, with_breaks, block_ids=[block_id])
        segments.append(Segment(tuple(tokens), block.span, "block"))
    return segments


def split_sentences(
    file: SubtitleFile, mode: NormalizationMode = SUBER_MODE, with_breaks: bool = True
) -> list[Segment]:
    """Cut the token stream after sentence-final words.

    Break tokens directly after a sentence end stay with that sentence.
    Sentences may span several blocks; an unterminated tail is its own
    segment.
    """
    segments: list[Segment] = []
    current: list[Token] = []
    pending_cut = False

    def close():
        segments.append(Segment(tuple(current), _enclosing_span(current), "sentence"))
        current.clear()

    for token, final in _annotated_tokens(enumerate(file.blocks), mode, with_breaks):
        if token is None:
            pending_cut = pending_cut or (final and bool(current))
            continue
        if token.kind == WORD and pending_cut:
            close()
            pending_cut = False
        current.append(token)
        if final:
            pending_cut = True
    if current:
        close()
    return segments


def mask_words(tokens: Sequence[Token]) -> list[Token]:
    """Replace every word surface by ``MASK``; breaks pass through."""
    return [
        Token(MASK_SURFACE, WORD, t.block_id, t.span) if t.kind == WORD else t for t in tokens
    ]


def mask_segment(segment: Segment) -> Segment:
    return Segment(tuple(mask_words(segment.tokens)), segment.span, segment.origin)
