"""
Tests for the command-line interface: exit codes, artifacts and the
verify round trip.
"""

import json
import os
import sys

import pytest

from frobenius_toolkit.__main__ import main
from frobenius_toolkit.graphs.dot import graph_dot


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def _json(capsys, *argv):
    code, out = _run(capsys, *argv)
    return code, json.loads(out)


def test_support_cyclic_7_3(capsys):
    code, doc = _json(capsys, "support", "--family", "cyclic", "--n", "7", "--m", "3")
    assert code == 0
    assert doc["schema"] == 1 and doc["kind"] == "support"
    assert len(doc["pairs"]) == 6


def test_principal_text(capsys):
    code, out = _run(capsys, "principal", "--n", "7", "--m", "3", "--format", "text")
    assert code == 0
    assert out == "diag(2,4,3,1,3,2,0) - 15/7*I\n"


def test_meander(capsys):
    code, out = _run(capsys, "meander", "--parabolic", "7,3", "--format", "text")
    assert (code, out) == (0, "P(7,3): index 0\n")
    code, doc = _json(capsys, "meander", "--parabolic", "4,2")
    assert code == 1
    assert doc["index"] == 1
    code, doc = _json(capsys, "meander", "--top", "3", "--bottom", "3")
    assert doc["index"] == 2


def test_check_frobenius_exit_codes(capsys):
    code, doc = _json(capsys, "check-frobenius", "--n", "5", "--m", "2")
    assert code == 0 and doc["frobenius"] is True
    code, doc = _json(capsys, "check-frobenius", "--family", "prime", "--n", "4", "--m", "2")
    assert code == 1 and doc["kernel_dimension"] >= 1
    code, _ = _run(capsys, "check-frobenius", "--n", "4", "--m", "2")
    assert code == 2


def test_check_frobenius_upper_family(capsys):
    code, doc = _json(capsys, "check-frobenius", "--family", "upper", "--n", "7", "--m", "3")
    assert code == 0 and doc["frobenius"] is True


def test_random_functional_is_seeded(capsys):
    first = _run(capsys, "check-frobenius", "--family", "random", "--n", "4", "--m", "3", "--seed", "7")
    second = _run(capsys, "check-frobenius", "--family", "random", "--n", "4", "--m", "3", "--seed", "7")
    assert first == second


def test_rmatrix_p21(capsys):
    code, out = _run(capsys, "rmatrix", "--n", "2", "--m", "1", "--format", "text")
    assert (code, out) == (0, "-e12∧ε1\n")


def test_rmatrix_methods_agree(capsys):
    texts = set()
    for method in ("invert", "lagrangian", "peel"):
        code, doc = _json(capsys, "rmatrix", "--n", "5", "--m", "2", "--method", method, "--verify-cybe")
        assert code == 0, method
        assert doc["defining_property"] is True and doc["cybe"] is True
        texts.add(doc["text"])
    assert len(texts) == 1


def test_rmatrix_peel_text(capsys):
    code, out = _run(capsys, "rmatrix", "--n", "4", "--m", "3", "--method", "peel", "--format", "text")
    assert code == 0
    assert "e13∧e34" in out


def test_gamma_dot_header_and_determinism(capsys):
    argv = ["gamma", "--n", "7", "--m", "3", "--format", "dot"]
    code, out = _run(capsys, *argv)
    assert code == 0
    assert out.startswith("// generated by: frobenius-toolkit gamma --n 7 --m 3 --format dot\n")
    assert 'digraph gamma {' in out
    assert out.count(" -> ") == 6
    assert _run(capsys, *argv) == (code, out)


def test_biggraph_dot_and_json(capsys):
    code, out = _run(capsys, "biggraph", "--n", "7", "--m", "3", "--format", "dot")
    assert code == 0
    assert "subgraph cluster_0" in out
    assert "shape=box" in out
    code, doc = _json(capsys, "biggraph", "--n", "7", "--m", "3")
    assert doc["vertices"] == 36
    assert doc["index"] == 0 and doc["rooted"] is True


def test_graph_dot_for_undirected_graphs():
    import networkx as nx

    text = graph_dot(nx.path_graph(3), name="path")
    assert text.splitlines()[0] == "// generated by: frobenius-toolkit"
    assert 'graph "path" {' in text
    assert '"0" -- "1";' in text


def test_mcybe(capsys):
    code, out = _run(capsys, "mcybe", "progression", "--n", "5", "--m", "2", "--format", "text")
    assert (code, out) == (0, "1 -> 3 -> 2 -> 4\ndescents: 3->2\n")
    code, out = _run(capsys, "mcybe", "degenerate", "--n", "5", "--m", "2", "--format", "text")
    assert code == 0 and out.endswith("removed: 3->2\n")
    code, doc = _json(capsys, "mcybe", "separating-h", "--n", "5", "--m", "2", "--keep", "1,3")
    assert code == 0
    assert all(isinstance(v, int) for v in doc["h"])
    code, _ = _run(capsys, "mcybe", "degenerate", "--n", "5", "--m", "2", "--h", "2,0,0,0,0")
    assert code == 1


def test_localring(capsys):
    code, doc = _json(capsys, "localring", "dims", "--edges", "0-1,1-2,2-3,3-0")
    assert code == 0
    assert doc["dims"] == [4, 2] and doc["nilpotence_index"] == 3
    code, doc = _json(capsys, "localring", "reconstruct", "--edges", "0-1,1-2,2-0")
    assert code == 1 and doc["result"] == "AmbiguousR3"
    code, doc = _json(capsys, "localring", "reconstruct", "--edges", "0-1,1-2,2-3,3-0,0-2")
    assert code == 0 and doc["isomorphic"] is True
    code, doc = _json(capsys, "localring", "reduced", "--edges", "0-1,1-2,2-3,3-0")
    assert doc["dims"] == [4, 1]


@pytest.mark.parametrize("argv", [
    ["support", "--n", "7", "--m", "3"],
    ["principal", "--n", "7", "--m", "3"],
    ["check-frobenius", "--n", "7", "--m", "3"],
    ["rmatrix", "--n", "5", "--m", "3", "--verify-cybe"],
    ["meander", "--parabolic", "7,3"],
    ["mcybe", "progression", "--n", "8", "--m", "5"],
])
def test_certificates_verify(tmp_path, capsys, argv):
    path = str(tmp_path / "certificate.json")
    assert main(argv + ["--out", path]) == 0
    assert os.path.exists(path)
    code, out = _run(capsys, "verify", "--in", path, "--format", "text")
    assert code == 0
    assert out.endswith(": valid\n")


def test_tampered_certificate_fails(tmp_path, capsys):
    path = tmp_path / "frobenius.json"
    assert main(["check-frobenius", "--n", "5", "--m", "2", "--out", str(path)]) == 0
    doc = json.loads(path.read_text(encoding="utf-8"))
    doc["kernel_dimension"] = 1
    path.write_text(json.dumps(doc), encoding="utf-8")
    code, _ = _run(capsys, "verify", "--in", str(path))
    assert code == 1


def test_sweep_command(tmp_path, capsys):
    report = str(tmp_path / "root.csv")
    code, doc = _json(capsys, "sweep", "--name", "root", "--n-max", "6", "--report", report)
    assert code == 0
    assert doc["passed"] == doc["total"] == len(doc["rows"])
    assert os.path.exists(report)


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["support", "--m", "3"]) == 2
    assert main(["support", "--n", "7", "--m", "3", "--format", "dot"]) == 2
    assert main(["sweep", "--name", "nonsense", "--n-max", "5"]) == 2
    with pytest.raises(SystemExit):
        main(["rmatrix", "--method", "guess"])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
