import json
import subprocess
import sys

import pytest

from lerefute.cli import EXIT_ERROR, EXIT_INVALID, EXIT_VALID, main, run_decide, selftest
from lerefute import bundled_signature, parse_sequent

UNARY = bundled_signature("unary-fg")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_valid_exit_code(capsys):
    code, out, _ = run(capsys, "decide", "--signature", "unary-fg", "--sequent", "p |- p")
    assert code == EXIT_VALID
    assert "VALID" in out


def test_invalid_exit_code_and_refutation(capsys):
    code, out, _ = run(capsys, "decide", "--signature", "unary-fg", "--sequent", "g(p|q) |- g(p)|g(q)", "--format", "json")
    assert code == EXIT_INVALID
    doc = json.loads(out)
    assert doc["version"] == 1 and doc["status"] == "INVALID"
    assert doc["refutation"]["rule"] == "∨_R"
    assert "proof" not in doc


@pytest.mark.parametrize(
    "argv",
    [
        ["decide", "--sequent", "f(p,"],
        ["decide", "--signature", "nope", "--sequent", "p |- p"],
        ["decide", "--signature", "unary-fg", "--sequent", "p |- ~f#1(q)"],
        ["decide", "--file", "/nonexistent/sequents.txt"],
        ["count", "--signature", "nope"],
    ],
)
def test_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_ERROR
    assert err.startswith("error:")


def test_cross_check_adds_tableau_and_countermodel(capsys):
    code, out, _ = run(
        capsys, "decide", "--signature", "unary-fg", "--sequent", "g(p|q) |- g(p)|g(q)", "--format", "json", "--cross-check"
    )
    doc = json.loads(out)
    assert code == EXIT_INVALID
    assert "tableau" in doc
    assert doc["countermodel"]["valuation"] == {"p": 1, "q": 2}


def test_valid_verdict_shape():
    v = run_decide(parse_sequent("f(p) |- f(p)", UNARY), UNARY, "all", True, 4, 10_000)
    assert v.status == "VALID"
    assert v.proof is not None and v.refutation is None
    assert v.to_dict()["countermodel"] == "INCONCLUSIVE"


def test_dot_output_to_file(capsys, tmp_path):
    dest = tmp_path / "out.dot"
    code, out, _ = run(
        capsys, "decide", "--signature", "unary-fg", "--sequent", "p |- q", "--format", "dot", "--out", str(dest)
    )
    assert code == EXIT_INVALID and out == ""
    assert dest.read_text().startswith("digraph")


def test_file_input(capsys, tmp_path):
    f = tmp_path / "seqs.txt"
    f.write_text("# comment\np |- p\n\np & q |- q\n")
    code, out, _ = run(capsys, "decide", "--signature", "unary-fg", "--file", str(f), "--engine", "prover")
    assert code == EXIT_VALID
    assert out.count("VALID") == 2


@pytest.mark.parametrize("engine", ["refuter", "prover", "tableau"])
def test_single_engines(capsys, engine):
    code, out, _ = run(capsys, "decide", "--signature", "unary-fg", "--sequent", "g(p|q) |- g(p)|g(q)", "--engine", engine)
    assert code == EXIT_INVALID
    assert "INVALID" in out


def test_selftest_empty_corpus(capsys):
    code, out, _ = run(capsys, "selftest", "--max-depth", "0")
    assert code == 0
    assert out.startswith("0 sequents checked")


def test_selftest_small_bounds_pass(capsys):
    code, out, _ = run(capsys, "selftest", "--max-depth", "2", "--max-connectives", "2", "--samples", "20")
    assert code == 0
    assert "FAIL" not in out


def test_selftest_detects_crippled_prover(capsys):
    code, out, _ = run(capsys, "selftest", "--max-depth", "2", "--mutate", "∨_R1")
    assert code == 1
    assert "FAIL" in out


def test_selftest_function_reports():
    import io

    buf = io.StringIO()
    assert selftest(UNARY, max_depth=2, max_connectives=1, out=buf)
    assert buf.getvalue().splitlines()[0].endswith("sequents checked")


def test_count(capsys):
    code, out, _ = run(capsys, "count")
    assert code == 0 and out.strip() == "19152"
    assert run(capsys, "count", "--max-depth", "0")[1].strip() == "0"


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "lerefute", "decide", "--signature", "unary-fg", "--sequent", "p |- p"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0
