import csv
import io
import json
import subprocess
import sys

import pytest

from ltlnorm import cli
from ltlnorm import formula as fm
from ltlnorm.corpus import random_lassos
from ltlnorm.lasso import eval_lasso
from ltlnorm.parser import parse


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_normalize_rewrite(capsys):
    code, out, _ = run(capsys, "normalize", "a U b")
    assert code == 0 and out.strip() == "a U b"


def test_normalize_closed_matches_known_form(capsys):
    code, out, _ = run(capsys, "normalize", "FG(a U b)", "--method", "closed", "--trace")
    assert code == 0
    first, *trace = out.splitlines()
    g = parse(first)
    target = parse("GF b & FG (a W b)")
    assert all(eval_lasso(g, w) == eval_lasso(target, w) for w in random_lassos(0, ("a", "b"), 200))
    assert trace and all(line.startswith("# M={") for line in trace)


def test_normalize_fgx(capsys):
    code, out, _ = run(capsys, "normalize", "G(F a | b)", "--method", "fgx")
    assert out.strip() == "GF a | F (a & X G b) | G b"


def test_normalize_trace_lines(capsys):
    code, out, _ = run(capsys, "normalize", "(a U b) W c", "--trace")
    assert "# stage 1" in out and "rule=" in out


def test_normalize_output_is_a_fixpoint(capsys):
    _, out, _ = run(capsys, "normalize", "((a W b) U c) W d")
    _, again, _ = run(capsys, "normalize", out.strip(), "--trace")
    assert again.splitlines()[0] == out.strip()
    assert "rule=" not in again


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "((a W b) U c) W d")
    assert code == 0
    assert "classes: Π3" in out and "delta2: false" in out and "form: unnormalized" in out


def test_aww_json(capsys):
    code, out, _ = run(capsys, "aww", "a U X G(b | X F c)")
    data = json.loads(out)
    assert code == 0 and len(data["states"]) == 3


def test_drw_formats(capsys):
    code, out, _ = run(capsys, "drw", "GF a")
    assert code == 0 and out.startswith("HOA: v1") and "--END--" in out
    code, out, _ = run(capsys, "drw", "GF a", "--format", "json", "--ap", "a,b")
    assert json.loads(out)["ap"] == ["a", "b"]


@pytest.mark.parametrize("text", ["((a W b) U c) W d", "tt"])
def test_check_unanimous(capsys, text):
    code, out, _ = run(capsys, "check", text, "--lassos", "500")
    assert code == 0 and out.strip().endswith("unanimous")


def test_check_catches_a_broken_normalizer(capsys, monkeypatch):
    # turn the outermost U into a W: wrong only on words where b never comes
    def broken(f):
        g = cli.normalize_rewrite(f)[0]
        return fm.WeakUntil(g.left, g.right) if g.op == fm.UNTIL else g

    monkeypatch.setitem(cli.NORMALIZERS, "rewrite", broken)
    code, out, _ = run(capsys, "check", "a U b", "--lassos", "2000")
    assert code == 1
    assert "witness:" in out and "rewrite=" in out


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "normalize", "a U")
    assert code == 2 and "parse error" in err


def test_precondition_exit_codes(capsys):
    code, _, err = run(capsys, "normalize", "a U b", "--method", "fgx")
    assert code == 3 and "precondition" in err
    code, _, _ = run(capsys, "drw", "a U c", "--ap", "a,b")
    assert code == 3
    code, _, _ = run(capsys, "check", "a", "--lassos", "0")
    assert code == 3


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_stats_is_deterministic(capsys):
    args = ("stats", "--count", "15", "--max-nodes", "9", "--seed", "4")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    rows = _rows(first)
    assert len(rows) == 15
    assert list(rows[0]) == cli.STATS_FIELDS


def test_stats_phi_family(capsys):
    _, out, _ = run(capsys, "stats", "--phi", "3-6", "--no-automata")
    rows = _rows(out)
    assert [r["rewrite_steps"] for r in rows] == ["2"] * 4
    assert all(int(r["rewrite_nodes"]) <= 4 ** (7 * int(r["input_nodes"])) for r in rows)


def test_stats_on_literals(capsys):
    _, out, _ = run(capsys, "stats", "a", "!b", "c")
    for r in _rows(out):
        # initial state plus an accepting and a rejecting sink
        assert int(r["drw_states"]) == 3
        assert r["a1w_states"] == "1"


def test_stats_parallel_matches_serial(capsys):
    args = ("stats", "--count", "8", "--max-nodes", "7")
    _, serial, _ = run(capsys, *args)
    _, parallel, _ = run(capsys, *args, "--jobs", "2")
    assert serial == parallel


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "ltlnorm", "normalize", "GF (a W b)"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "GF (a U b) | FG a"
