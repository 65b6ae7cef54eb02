import io
import json
import subprocess
import sys

import pytest

from subscore.cli import (
    EXIT_BAD_SRT,
    EXIT_METRIC_ERROR,
    EXIT_MISSING_FILE,
    EXIT_OK,
    EXIT_UNKNOWN_METRIC,
    RunConfig,
    format_report,
    main,
    run,
)
from subscore.metrics import METRIC_NAMES
from subscore.scores import MetricScore


def call(config):
    out, err = io.StringIO(), io.StringIO()
    code = run(config, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture()
def fig1_paths(data_dir):
    return str(data_dir / "fig1_hyp.srt"), str(data_dir / "fig1_ref.srt")


def test_default_is_suber(fig1_paths):
    code, out, _ = call(RunConfig(*fig1_paths))
    assert code == EXIT_OK
    assert out == "SubER\t22.86\n"


def test_json_report(fig1_paths):
    code, out, _ = call(RunConfig(*fig1_paths, metrics=["SubER", "WER"], output_format="json"))
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["hypothesis"] == fig1_paths[0]
    assert [s["metric"] for s in report["scores"]] == ["SubER", "WER"]
    suber = report["scores"][0]
    assert suber["value"] == 800 / 35
    counts = {k: suber["details"][k] for k in ("insertions", "deletions", "substitutions", "shifts", "ref_length")}
    assert counts == {"insertions": 3, "deletions": 0, "substitutions": 2, "shifts": 3, "ref_length": 35}


def test_text_and_json_agree(fig1_paths):
    metrics = list(METRIC_NAMES)
    _, text, _ = call(RunConfig(*fig1_paths, metrics=metrics))
    _, js, _ = call(RunConfig(*fig1_paths, metrics=metrics, output_format="json"))
    rows = [line.split("\t") for line in text.splitlines()]
    for (name, value), score in zip(rows, json.loads(js)["scores"]):
        assert name == score["metric"]
        assert value == f"{score['value']:.2f}"


def test_identical_files_all_metrics(data_dir):
    ref = str(data_dir / "fig1_ref.srt")
    code, out, _ = call(RunConfig(ref, ref, metrics=list(METRIC_NAMES)))
    assert code == EXIT_OK
    for line in out.splitlines():
        name, value = line.split("\t")
        assert value == ("100.00" if name.startswith(("BLEU", "chrF")) else "0.00"), name


def test_unknown_metric_exit(fig1_paths):
    code, out, err = call(RunConfig(*fig1_paths, metrics=["XYZ"]))
    assert code == EXIT_UNKNOWN_METRIC
    assert out == ""
    assert "SubER" in err and "TER-br-sent" in err


def test_missing_file_exit(tmp_path, fig1_paths):
    code, _, err = call(RunConfig(str(tmp_path / "nope.srt"), fig1_paths[1]))
    assert code == EXIT_MISSING_FILE
    assert "nope.srt" in err


def test_malformed_srt_exit(tmp_path, fig1_paths):
    bad = tmp_path / "bad.srt"
    bad.write_text("1\n00:00:01,000 --> 00:00:02,000\nok\n\n2\n00:00:xx,000 --> 00:00:03,000\nbad\n")
    code, _, err = call(RunConfig(str(bad), fig1_paths[1]))
    assert code == EXIT_BAD_SRT
    assert "line 6" in err


def test_invalid_utf8_exit(tmp_path, fig1_paths):
    bad = tmp_path / "latin1.srt"
    bad.write_bytes("1\n00:00:01,000 --> 00:00:02,000\ncaf\xe9\n".encode("latin-1"))
    code, _, _ = call(RunConfig(str(bad), fig1_paths[1]))
    assert code == EXIT_BAD_SRT


def test_empty_reference_exit(tmp_path, fig1_paths):
    empty = tmp_path / "empty.srt"
    empty.write_text("")
    code, _, err = call(RunConfig(fig1_paths[0], str(empty), metrics=["WER"]))
    assert code == EXIT_METRIC_ERROR
    assert "reference" in err


def test_region_guard(tmp_path):
    words = " ".join(["w"] * 200)
    doc = "1\n00:00:00,000 --> 00:10:00,000\n" + "\n".join([words] * 120) + "\n"
    path = tmp_path / "long.srt"
    path.write_text(doc)
    code, _, err = call(RunConfig(str(path), str(path)))
    assert code == EXIT_METRIC_ERROR
    assert "20000" in err


def test_dump_alignment(fig1_paths):
    code, _, err = call(RunConfig(*fig1_paths, metrics=["SubER", "TER-sent"], dump_alignment=True))
    assert code == EXIT_OK
    dumps = [json.loads(line) for line in err.splitlines()]
    assert [d["metric"] for d in dumps] == ["TER-sent"]
    assert len(dumps[0]["pairs"]) == 3


def test_markup_flag(tmp_path):
    hyp = tmp_path / "hyp.srt"
    ref = tmp_path / "ref.srt"
    hyp.write_text("1\n00:00:00,000 --> 00:00:01,000\n<i>hello</i>\n")
    ref.write_text("1\n00:00:00,000 --> 00:00:01,000\nhello\n")
    assert call(RunConfig(str(hyp), str(ref)))[1] == "SubER\t0.00\n"
    assert call(RunConfig(str(hyp), str(ref), strip_markup=False))[1] == "SubER\t50.00\n"


def test_format_report_examples():
    assert format_report([MetricScore("SubER", 22.857142)]) == "SubER\t22.86\n"
    empty = json.loads(format_report([], "json"))
    assert empty["scores"] == []
    round_trip = json.loads(format_report([MetricScore("SubER", 800 / 35)], "json"))
    assert round_trip["scores"][0]["value"] == 800 / 35


def test_deterministic_output(fig1_paths):
    config = RunConfig(*fig1_paths, metrics=list(METRIC_NAMES), output_format="json")
    assert call(config)[1] == call(config)[1]


def test_main_parses_flags(fig1_paths, capsys):
    code = main(["-H", fig1_paths[0], "-R", fig1_paths[1], "--metrics", "SubER", "WER", "--max-shift-size", "0"])
    assert code == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("SubER\t") and out[0] != "SubER\t22.86"
    assert out[1].startswith("WER\t")


def test_module_entry_point(fig1_paths):
    proc = subprocess.run(
        [sys.executable, "-m", "subscore", "-H", fig1_paths[0], "-R", fig1_paths[1], "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["scores"][0]["value"] == pytest.approx(22.857, abs=1e-3)
    bad = subprocess.run([sys.executable, "-m", "subscore", "-H", "x"], capture_output=True, text=True, check=False)
    assert bad.returncode == 2
