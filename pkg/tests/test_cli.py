import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from symdiff.cli import BUNDLED_EXAMPLES, build_parser, main, run

GOLDEN = Path(__file__).parent / "golden"
BATCH_COMMANDS = ("classify", "p2", "det", "split", "decompose")


def cli(*argv):
    return run(build_parser().parse_args([str(a) for a in argv]))


def example(name):
    return BUNDLED_EXAMPLES / name


@pytest.mark.parametrize("command", BATCH_COMMANDS)
def test_batch_matches_golden(command):
    out, _ = cli(command, "--all", "--format", "structured", "--jobs", "1")
    path = GOLDEN / f"{command}.json"
    if os.environ.get("SYMDIFF_UPDATE_GOLDEN"):
        path.write_text(out + "\n", encoding="utf-8")
    assert out + "\n" == path.read_text(encoding="utf-8")


def test_batch_is_deterministic_across_workers():
    serial, c1 = cli("classify", "--all", "--format", "structured", "--jobs", "1")
    parallel, c2 = cli("classify", "--all", "--format", "structured", "--jobs", "2")
    assert serial == parallel and c1 == c2


def test_batch_is_deterministic_across_processes():
    argv = [sys.executable, "-m", "symdiff", "classify", "--all", "--format", "structured"]
    a = subprocess.run(argv, capture_output=True, check=False)
    b = subprocess.run(argv, capture_output=True, check=False)
    assert a.stdout == b.stdout and a.stdout
    assert a.returncode == b.returncode == 2


def test_structured_document_shape():
    out, code = cli("classify", example("monodromy.w"), "--point", "0,0", "--format", "structured")
    doc = json.loads(out)
    assert list(doc) == ["certified_order", "command", "evidence", "input_digest", "order", "timings", "verdict"]
    assert doc["verdict"] == "InfiniteMonodromy" and code == 2
    assert doc["evidence"]["separated_density"]["log_coeff_A"] == "-alpha"
    assert doc["timings"] is None
    assert doc["input_digest"].startswith("sha256:")


def test_timings_are_opt_in():
    out, _ = cli("det", example("product.w"), "--format", "structured", "--timings")
    assert json.loads(out)["timings"]["seconds"] >= 0


def test_p2_on_product_example():
    out, code = cli("p2", example("product.w"), "--order", "12")
    assert out.splitlines()[0] == "P2 == 0 to order 12"
    assert code == 0


def test_p2_on_nonclosed_example():
    out, code = cli("p2", example("notclosed.w"), "--order", "10", "--format", "structured")
    doc = json.loads(out)
    assert code == 2 and doc["verdict"] == "NotClosedHere"
    assert doc["certified_order"] == 10
    assert doc["evidence"]["valuation"] == 0
    assert doc["evidence"]["p2"].startswith("-1/8")


def test_jetdim_report():
    out, code = cli("jetdim", "--m", 2, "--n", 2, "--samples", 5, "--seed", 7, "--format", "structured")
    ev = json.loads(out)["evidence"]
    assert (ev["ambient_dim"], ev["closed_bound"], ev["observed_rank"], ev["proper"]) == (6, 5, 5, True)
    assert code == 0


def test_curvecount():
    out, code = cli("curvecount", "--g", 3, "--m", 2, "--enumerate", "--format", "structured")
    ev = json.loads(out)["evidence"]
    assert ev["count"] == ev["enumerated"] == "70" and code == 0


def test_split_and_decompose_at_a_regular_point():
    out, code = cli("decompose", example("nonsplit.w"), "--point", "1,0", "--format", "structured")
    assert code == 0 and json.loads(out)["verdict"] == "ExactDecomposition"
    out, code = cli("split", example("nonsplit.w"), "--format", "structured")
    assert code == 2 and json.loads(out)["verdict"] == "NonSplit"


def test_parse_error_reports_line_and_column(tmp_path, capsys):
    bad = tmp_path / "bad.w"
    bad.write_text("# comment\nw = d(z1) * * d(z2)\n")
    assert main(["classify", str(bad), "--format", "structured"]) == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "ParseError"
    assert doc["evidence"]["line"] == 2 and doc["evidence"]["column"] >= 1


@pytest.mark.parametrize(
    "argv",
    [
        ["classify"],
        ["classify", "no/such/file.w"],
        ["classify", "x.w", "--point", "1"],
        ["jetdim", "--m", "1", "--n", "2"],
        ["curvecount", "--g", "1", "--m", "2"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == 1


def test_exit_codes_for_verdicts(capsys):
    assert main(["classify", str(example("product.w"))]) == 0
    assert main(["classify", str(example("notclosed.w"))]) == 2
    assert main(["det", str(example("nonsplit.w"))]) == 0


def test_empty_batch_dir_is_a_usage_error(tmp_path, capsys):
    assert main(["classify", "--all", str(tmp_path)]) == 1
