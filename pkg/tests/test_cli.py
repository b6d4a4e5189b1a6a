import io
import json
import subprocess
import sys

import pytest

from ultradiam import cli
from ultradiam.chains import GraphChain
from ultradiam.core import parse_matrix
from ultradiam.dendro import from_newick, to_newick, dendrogram_from_ultrametric
from ultradiam.diamfn import tau_from_space
from ultradiam.oracle import random_ultrametric

TWO_LEVEL_CSV = "0,0.5,1\n0.5,0,1\n1,1,0\n"
EQUILATERAL_CSV = "0,1,1\n1,0,1\n1,1,0\n"
BAD_CSV = "0,1,3\n1,0,1\n3,1,0\n"


def run(argv, stdin=""):
    """Call the entry point in-process, returning (code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    old = sys.stdin, sys.stdout, sys.stderr
    sys.stdin, sys.stdout, sys.stderr = io.StringIO(stdin), out, err
    try:
        code = cli.main(argv)
    finally:
        sys.stdin, sys.stdout, sys.stderr = old
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def two_level_csv(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text(TWO_LEVEL_CSV)
    return str(p)


def test_validate_ok(tmp_path):
    p = tmp_path / "eq.csv"
    p.write_text(EQUILATERAL_CSV)
    code, out, _ = run(["validate", str(p)])
    assert code == 0
    assert json.loads(out)["ultrametric"] is True


def test_validate_violation():
    code, out, err = run(["validate", "-", "--format", "csv"], BAD_CSV)
    assert code == 1
    assert json.loads(out)["ultrametric"] is False
    e = json.loads(err)
    assert e["error"] == "NotUltrametricError"
    assert e["witness"]["triple"] == [0, 1, 2]


def test_dip(two_level_csv):
    code, out, _ = run(["dip", two_level_csv])
    assert code == 0
    rep = json.loads(out)
    assert rep["dip_count"] == 4 and rep["lower_bound"] == 4 and rep["equality"] is True
    assert rep["parts"] == [[0, 1], [2]]
    assert rep["edges"] == [[0, 2], [1, 2]]


def test_spectrum_dendrogram_newick_dot(two_level_csv):
    assert json.loads(run(["spectrum", two_level_csv])[1]) == {"spectrum": ["0", "0.5", "1"]}
    tree = json.loads(run(["dendrogram", two_level_csv])[1])
    assert tree["level"] == "1"
    assert run(["newick", two_level_csv])[1] == "((0,1)[0.5],2)[1];\n"
    assert run(["newick", two_level_csv, "--branch-lengths"])[1] == "((0:0.5,1:0.5):0.5,2:1);\n"
    dot = run(["dot", two_level_csv])[1]
    assert dot.startswith("graph dip {") and '"0" -- "2";' in dot


def test_synth_chain_not_multipartite():
    chain = {"n_vertices": 3, "levels": ["1", "2"],
             "graphs": [[[0, 1], [0, 2], [1, 2]], [[0, 1]]]}
    code, _, err = run(["synth-chain", "-"], json.dumps(chain))
    assert code == 1
    e = json.loads(err)
    assert e["error"] == "ChainError" and e["witness"]["clause"] == "NotMultipartite"


def test_synth_chain_ok():
    chain = {"n_vertices": 3, "levels": ["1/2", "1"],
             "graphs": [[[0, 1], [0, 2], [1, 2]], [[0, 2], [1, 2]]]}
    code, out, _ = run(["synth-chain", "-", "--format", "csv"], json.dumps(chain))
    assert code == 0 and out == TWO_LEVEL_CSV


def test_synth_partition_and_spectrum():
    code, out, _ = run(["synth-partition", "-", "--format", "csv"], '{"parts": [[0, 1], [2]]}')
    assert code == 0 and out == TWO_LEVEL_CSV
    code, out, _ = run(["synth-partition", "-", "--inner", "1", "--outer", "3", "--format", "csv"],
                       "[[0], [1]]")
    assert out == "0,3\n3,0\n"
    code, out, _ = run(["synth-spectrum", "-"], '{"values": ["0", "1/3", 2]}')
    assert code == 0
    assert parse_matrix(out, "json").labels == ("0", "1/3", "2")
    code, _, err = run(["synth-spectrum", "-"], "[1, 2]")
    assert code == 1 and json.loads(err)["error"] == "MissingZero"


def test_synth_tau_and_checks():
    s = random_ultrametric(4, 2, 9)
    doc = tau_from_space(s).to_json()
    code, out, _ = run(["synth-tau", "-"], doc)
    assert code == 0 and parse_matrix(out, "json").entries == s.entries
    code, out, _ = run(["check-axioms", "-"], doc)
    assert code == 0 and json.loads(out)["i2_ok"] is True
    code, out, _ = run(["check-balls", "-"], doc)
    assert code == 0 and json.loads(out)["ok"] is True


def test_check_axioms_failure():
    from ultradiam.diamfn import DiameterFunction

    t = DiameterFunction(3, {1: 0, 2: 0, 4: 0, 3: 1, 6: 1, 5: 3, 7: 3})
    code, out, err = run(["check-axioms", "-"], t.to_json())
    assert code == 1
    assert json.loads(err)["error"] == "CheckFailed"
    code, _, err = run(["synth-tau", "-"], t.to_json())
    assert code == 1 and json.loads(err)["error"] == "AxiomViolation"


def test_extend_apex(two_level_csv):
    code, out, _ = run(["extend-apex", two_level_csv, "--apex-level", "2", "--format", "csv"])
    assert code == 0
    assert out.splitlines()[-1] == "2,2,2,0"
    code, _, err = run(["extend-apex", two_level_csv, "--apex-level", "1"])
    assert code == 1 and json.loads(err)["error"] == "ApexTooClose"
    assert run(["extend-apex", two_level_csv])[0] == 2


def test_gen_deterministic():
    a = run(["gen", "--n", "6", "--seed", "3"])[1]
    b = run(["gen", "--n", "6", "--seed", "3"])[1]
    assert a == b
    assert parse_matrix(a, "json").entries == random_ultrametric(6, 3, 3).entries
    assert run(["gen"])[0] == 2


@pytest.mark.parametrize("text, fmt", [
    ("0,1\n2,0\n", "csv"),
    ("0,-1\n-1,0\n", "csv"),
    ("0,1\n1,0,1\n", "csv"),
    ("0,x\nx,0\n", "csv"),
    ("{not json", "json"),
])
def test_bad_input_exit_2(text, fmt):
    code, out, err = run(["validate", "-", "--format", fmt], text)
    assert code == 2 and out == ""
    assert set(json.loads(err)) == {"error", "message", "witness"}


def test_missing_file():
    assert run(["validate", "/nonexistent/x.csv"])[0] == 2


def test_float_input_snaps():
    text = "0,0.1,0.30000000000000004\n0.1,0,0.3\n0.30000000000000004,0.3,0\n"
    assert run(["validate", "-", "--format", "csv"], text)[0] == 1
    code, out, _ = run(["spectrum", "-", "--format", "csv", "--float-input"], text)
    assert code == 0 and json.loads(out)["spectrum"] == ["0", "0.1", "0.3"]


def test_output_file(tmp_path, two_level_csv):
    target = tmp_path / "out.csv"
    code, out, _ = run(["synth-partition", "-", "-o", str(target)], "[[0, 1], [2]]")
    assert code == 0 and out == ""
    assert target.read_text() == TWO_LEVEL_CSV


def test_format_round_trips(tmp_path):
    s = random_ultrametric(7, 3, 11)
    j = tmp_path / "s.json"
    j.write_text(s.matrix.to_json())
    csv_text = run(["gen", "--n", "7", "--seed", "11", "--format", "csv"])[1]
    assert parse_matrix(csv_text, "csv") == s.matrix
    assert parse_matrix(j.read_text(), "json") == s.matrix
    newick = run(["newick", str(j)])[1].strip()
    assert from_newick(newick) == dendrogram_from_ultrametric(s)
    assert to_newick(from_newick(newick)) == newick
    c = GraphChain.from_json(json.dumps({"n_vertices": 3, "levels": ["1/2", "1"],
                                         "graphs": [[[0, 1], [0, 2], [1, 2]], [[0, 2], [1, 2]]]}))
    assert GraphChain.from_json(c.to_json()) == c


def test_byte_identical(two_level_csv):
    for verb in ("validate", "spectrum", "dip", "dendrogram", "newick", "dot"):
        assert run([verb, two_level_csv]) == run([verb, two_level_csv])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ultradiam", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("ultradiam ")
