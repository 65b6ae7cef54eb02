"""Reading and writing SubRip (SRT) subtitle files.

Times are kept as integer milliseconds. Parsing is positional: the numeric
index line of a cue is read but block identity comes from file order.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

logger = logging.getLogger(__name__)

_TIMESTAMP = r"(\d+):(\d{2}):(\d{2})[,.](\d{3})"
_TIMECODE_RE = re.compile(rf"^\s*{_TIMESTAMP}\s*-->\s*{_TIMESTAMP}(?:\s.*)?$")
_INDEX_RE = re.compile(r"^\s*\d+\s*$")
_TAG_RE = re.compile(r"<[^<>]*>")
_ASS_OVERRIDE_RE = re.compile(r"\{\\[^{}]*\}")
_MULTISPACE_RE = re.compile(r"[ \t]{2,}")
_NEWLINE_RE = re.compile(r"\r\n|\r|\n")


class SrtParseError(ValueError):
    """Raised for unrecoverable problems in an SRT document."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True)
class ParseIssue:
    line_number: int
    message: str
    # True when the issue caused a timecode line to yield no block.
    dropped: bool = False


@dataclass(frozen=True)
class SubtitleBlock:
    """One SRT cue. ``start`` and ``end`` are milliseconds, ``end`` exclusive."""

    index: int = field(compare=False)
    start: int
    end: int
    lines: tuple[str, ...]

    def __post_init__(self):
        if self.start < 0:
            raise ValueError(f"negative start time {self.start}")
        if self.end <= self.start:
            raise ValueError(f"block end {self.end} not after start {self.start}")
        if not self.lines:
            raise ValueError("block has no text lines")
        for line in self.lines:
            if not line.rstrip():
                raise ValueError("block contains an empty line")

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class SubtitleFile:
    blocks: tuple[SubtitleBlock, ...] = ()
    source_name: str = ""
    issues: tuple[ParseIssue, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)


def parse_timestamp(text: str) -> int:
    """Convert ``HH:MM:SS,mmm`` (or with ``.``) to milliseconds."""
    m = re.fullmatch(_TIMESTAMP, text.strip())
    if m is None:
        raise ValueError(f"malformed timestamp {text!r}")
    return _to_ms(*m.groups())


def _to_ms(hours: str, minutes: str, seconds: str, millis: str) -> int:
    h, mi, s, ms = int(hours), int(minutes), int(seconds), int(millis)
    if mi >= 60 or s >= 60:
        raise ValueError(f"minute/second field out of range in {hours}:{minutes}:{seconds}")
    return ((h * 60 + mi) * 60 + s) * 1000 + ms


def format_timestamp(ms: int) -> str:
    """Render milliseconds as ``HH:MM:SS,mmm`` (hours use at least two digits)."""
    if ms < 0:
        raise ValueError(f"negative timestamp {ms}")
    seconds, millis = divmod(ms, 1000)
    minutes, seconds = divmod(seconds, 60)
    hours, minutes = divmod(minutes, 60)
    return f"{hours:02d}:{minutes:02d}:{seconds:02d},{millis:03d}"


def _parse_timecode_line(line: str, line_number: int) -> tuple[int, int]:
    m = _TIMECODE_RE.match(line)
    if m is None:
        raise SrtParseError(f"malformed timecode line {line.strip()!r}", line_number)
    groups = m.groups()
    try:
        start = _to_ms(*groups[:4])
        end = _to_ms(*groups[4:])
    except ValueError as exc:
        raise SrtParseError(str(exc), line_number) from None
    if end <= start:
        raise SrtParseError(
            f"end time {format_timestamp(end)} not after start {format_timestamp(start)}",
            line_number,
        )
    return start, end


def parse_srt(document: str, source_name: str = "", strict: bool = True) -> SubtitleFile:
    """Parse an SRT document.

    With ``strict`` (the default) a malformed timecode line or a cue whose end
    is not after its start raises :class:`SrtParseError`. Otherwise such cues
    are skipped and recorded in ``SubtitleFile.issues``. Recoverable oddities
    (missing or non-sequential indices, stray text, empty cues, start times
    going backwards) never raise; they are logged and recorded as issues.
    """
    if document.startswith("\ufeff"):
        document = document[1:]
    lines = _NEWLINE_RE.split(document)
    n = len(lines)
    blocks: list[SubtitleBlock] = []
    issues: list[ParseIssue] = []

    def note(line_number: int, message: str, dropped: bool = False):
        issues.append(ParseIssue(line_number, message, dropped))
        logger.warning("%s line %d: %s", source_name or "<srt>", line_number, message)

    def is_timecode(k: int) -> bool:
        return k < n and "-->" in lines[k]

    def starts_block(k: int) -> bool:
        return is_timecode(k) or (
            _INDEX_RE.match(lines[k]) is not None and is_timecode(k + 1)
        )

    i = 0
    expected_index = 1
    while i < n:
        if not lines[i].strip():
            i += 1
            continue

        index = None
        if _INDEX_RE.match(lines[i]) and is_timecode(i + 1):
            index = int(lines[i])
            i += 1
        elif not is_timecode(i):
            note(i + 1, f"skipping stray text {lines[i].strip()!r}")
            i += 1
            while i < n and lines[i].strip() and not starts_block(i):
                i += 1
            continue

        timecode_line = i + 1
        try:
            start, end = _parse_timecode_line(lines[i], timecode_line)
        except SrtParseError as exc:
            if strict:
                raise
            note(timecode_line, str(exc).split(": ", 1)[1], dropped=True)
            start = end = None
        i += 1

        text: list[str] = []
        while i < n and lines[i].strip():
            if starts_block(i):
                break
            text.append(lines[i].rstrip())
            i += 1

        if start is None:
            continue
        if not text:
            note(timecode_line, "cue has no text", dropped=True)
            continue
        if index is None:
            note(timecode_line, "missing cue index")
            index = expected_index
        elif blocks and index != expected_index:
            note(timecode_line, f"cue index {index}, expected {expected_index}")
        if blocks and start < blocks[-1].start:
            note(timecode_line, "start time earlier than previous cue")
        blocks.append(SubtitleBlock(index, start, end, tuple(text)))
        expected_index = index + 1

    return SubtitleFile(tuple(blocks), source_name, tuple(issues))


def render_srt(file: SubtitleFile) -> str:
    """Render canonical SRT: 1-based indices, ``,`` separators, LF endings."""
    parts = []
    for number, block in enumerate(file.blocks, start=1):
        header = f"{number}\n{format_timestamp(block.start)} --> {format_timestamp(block.end)}\n"
        parts.append(header + "\n".join(block.lines) + "\n")
    return "\n".join(parts)


def strip_markup(line: str) -> str:
    """Remove HTML-like tags and ``{\\...}`` override blocks from one line."""
    line = _TAG_RE.sub("", line)
    line = _ASS_OVERRIDE_RE.sub("", line)
    return _MULTISPACE_RE.sub(" ", line).strip()


def strip_file_markup(file: SubtitleFile) -> SubtitleFile:
    """Apply :func:`strip_markup` to every line.

    Lines that become empty are dropped, as are blocks left without text.
    """
    blocks = []
    for block in file.blocks:
        lines = tuple(s for s in (strip_markup(line) for line in block.lines) if s)
        if lines:
            blocks.append(SubtitleBlock(block.index, block.start, block.end, lines))
    return SubtitleFile(tuple(blocks), file.source_name, file.issues)


def load_srt(path, strip: bool = True, strict: bool = True) -> SubtitleFile:
    """Read an SRT file from disk (UTF-8, optional BOM)."""
    path = Path(path)
    document = path.read_text(encoding="utf-8")
    file = parse_srt(document, source_name=str(path), strict=strict)
    return strip_file_markup(file) if strip else file
