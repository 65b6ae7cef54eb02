"""Command-line scoring of a hypothesis SRT file against a reference.

Exit codes: 0 success, 1 metric error (e.g. empty reference), 2 missing
file or bad arguments, 3 malformed SRT, 4 unknown metric name.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence, TextIO

from subscore.metrics import METRIC_NAMES, compute_metric
from subscore.scores import MetricScore
from subscore.srt import SrtParseError, load_srt
from subscore.suber import RegionTooLarge
from subscore.ter import MAX_SHIFT_DISTANCE, MAX_SHIFT_SIZE

EXIT_OK = 0
EXIT_METRIC_ERROR = 1
EXIT_MISSING_FILE = 2
EXIT_BAD_SRT = 3
EXIT_UNKNOWN_METRIC = 4

# Quadratic DP per region: refuse larger regions unless explicitly allowed.
MAX_REGION_TOKENS = 20_000


@dataclass
class RunConfig:
    hypothesis_path: str
    reference_path: str
    metrics: list[str] = field(default_factory=lambda: ["SubER"])
    strip_markup: bool = True
    output_format: str = "text"
    dump_alignment: bool = False
    max_shift_size: int = MAX_SHIFT_SIZE
    max_shift_distance: int = MAX_SHIFT_DISTANCE
    max_region_tokens: Optional[int] = MAX_REGION_TOKENS


def format_report(
    scores: Sequence[MetricScore],
    output_format: str = "text",
    hypothesis: str = "",
    reference: str = "",
) -> str:
    if output_format == "text":
        return "".join(f"{s.metric}\t{s.value:.2f}\n" for s in scores)
    if output_format == "json":
        report = {
            "hypothesis": hypothesis,
            "reference": reference,
            "scores": [
                {
                    "metric": s.metric,
                    "value": s.value,
                    "details": s.details_dict(),
                    "warnings": list(s.warnings),
                }
                for s in scores
            ],
        }
        return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    raise ValueError(f"unknown output format {output_format!r}")


def run(config: RunConfig, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    unknown = [m for m in config.metrics if m not in METRIC_NAMES]
    if unknown:
        print(
            f"error: unknown metric(s) {', '.join(unknown)}; valid names: {', '.join(METRIC_NAMES)}",
            file=stderr,
        )
        return EXIT_UNKNOWN_METRIC

    files = []
    for path in (config.hypothesis_path, config.reference_path):
        try:
            files.append(load_srt(path, strip=config.strip_markup))
        except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
            print(f"error: cannot read {path}: {exc.strerror or exc}", file=stderr)
            return EXIT_MISSING_FILE
        except SrtParseError as exc:
            print(f"error: {path}: {exc}", file=stderr)
            return EXIT_BAD_SRT
        except UnicodeDecodeError as exc:
            print(f"error: {path}: not valid UTF-8 ({exc.reason} at byte {exc.start})", file=stderr)
            return EXIT_BAD_SRT
    hyp, ref = files

    scores = []
    for name in config.metrics:
        pairs: list = []
        try:
            score = compute_metric(
                name,
                hyp,
                ref,
                max_shift_size=config.max_shift_size,
                max_shift_distance=config.max_shift_distance,
                max_region_tokens=config.max_region_tokens,
                pairs_out=pairs,
            )
        except (RegionTooLarge, ValueError) as exc:
            print(f"error: {name}: {exc}", file=stderr)
            return EXIT_METRIC_ERROR
        if config.dump_alignment and pairs:
            dump = {"metric": name, "pairs": [p.as_dict() for p in pairs]}
            print(json.dumps(dump, ensure_ascii=False), file=stderr)
        scores.append(score)

    stdout.write(format_report(scores, config.output_format, config.hypothesis_path, config.reference_path))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subscore",
        description="Score a subtitle file against a reference (SubER and baseline metrics).",
    )
    parser.add_argument("-H", "--hypothesis", required=True, help="hypothesis SRT file")
    parser.add_argument("-R", "--reference", required=True, help="reference SRT file")
    parser.add_argument(
        "--metrics", nargs="+", default=["SubER"], metavar="NAME",
        help=f"metrics to compute (default: SubER); one or more of {', '.join(METRIC_NAMES)}",
    )
    parser.add_argument("--format", choices=("text", "json"), default="text", dest="output_format")
    parser.add_argument("--no-markup-stripping", action="store_true",
                        help="keep <i>-style tags and {\\...} overrides in the text")
    parser.add_argument("--dump-alignment", action="store_true",
                        help="write segment pairs of alignment-based metrics to stderr as JSON")
    parser.add_argument("--max-shift-size", type=int, default=MAX_SHIFT_SIZE)
    parser.add_argument("--max-shift-distance", type=int, default=MAX_SHIFT_DISTANCE)
    parser.add_argument("--allow-large-regions", action="store_true",
                        help=f"score SubER regions above {MAX_REGION_TOKENS} tokens")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        hypothesis_path=args.hypothesis,
        reference_path=args.reference,
        metrics=args.metrics,
        strip_markup=not args.no_markup_stripping,
        output_format=args.output_format,
        dump_alignment=args.dump_alignment,
        max_shift_size=args.max_shift_size,
        max_shift_distance=args.max_shift_distance,
        max_region_tokens=None if args.allow_large_regions else MAX_REGION_TOKENS,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
