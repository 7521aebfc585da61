import json

import pytest

from p4forge.cli import run
from p4forge.graphs import graph_from_json


@pytest.fixture()
def c5_file(tmp_path):
    path = tmp_path / "c5.json"
    path.write_text(json.dumps({"n": 5, "edges": [[1, 2], [2, 3], [3, 4], [4, 5], [5, 1]]}))
    return str(path)


class TestRecognize:
    def test_member(self, capsys, c5_file):
        assert run(["recognize", "--class", "tidy", "--in", c5_file]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["member"] is True and "witness_tree" in out

    def test_non_member(self, capsys, c5_file):
        assert run(["recognize", "--class", "cograph", "--in", c5_file]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["member"] is False and "violating_node" in out

    def test_unknown_class_usage_error(self, c5_file):
        assert run(["recognize", "--class", "nope", "--in", c5_file]) == 2

    def test_missing_file_domain_error(self):
        assert run(["recognize", "--class", "tidy", "--in", "/nonexistent.json"]) == 1


class TestDecompose:
    def test_sexp(self, capsys, c5_file):
        assert run(["decompose", "--in", c5_file]) == 0
        text = capsys.readouterr().out.strip()
        assert text.startswith("(P ")

    def test_dot(self, capsys, c5_file):
        assert run(["decompose", "--in", c5_file, "--format", "dot"]) == 0
        assert "graph" in capsys.readouterr().out


class TestCount:
    def test_single(self, capsys):
        assert run(["count", "--class", "cograph", "--n", "4"]) == 0
        assert capsys.readouterr().out.strip() == "52"

    def test_table_csv(self, capsys):
        assert run(["count", "--class", "reducible", "--table", "1-4", "--csv"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "n,count" and lines[-1] == "4,64"

    def test_missing_n(self, capsys):
        assert run(["count", "--class", "tidy"]) == 1


class TestConstants:
    def test_json_rows(self, capsys):
        assert run(["constants", "--class", "all", "--json"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert len(rows) == 6
        tidy = next(r for r in rows if r["class"] == "tidy")
        assert abs(float(tidy["R"]) - 0.34434572) < 1e-7
        assert abs(float(tidy["C"]) - 0.40883495) < 1e-7
        assert abs(float(tidy["K_P4tilde"]) - 0.29200322) < 1e-7

    def test_text_table(self, capsys):
        assert run(["constants", "--class", "cograph"]) == 0
        out = capsys.readouterr().out
        assert "cograph" in out and "R_inv" in out


class TestPattern:
    def test_pair_probability(self, capsys):
        assert run(["pattern", "--class", "lite", "--tau", "(J 1 2)", "--n", "20", "--probability"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["probability"] == "1/2"

    def test_bad_tau(self, capsys):
        assert run(["pattern", "--class", "lite", "--tau", "(J 1", "--n", "5"]) == 1


class TestSample:
    def test_json_graph(self, capsys):
        assert run(["sample", "--class", "extendible", "--n", "30", "--seed", "7"]) == 0
        data = json.loads(capsys.readouterr().out)
        g = graph_from_json(data)
        assert g.n == 30
        from p4forge.families import is_member

        assert is_member(g, "extendible")

    def test_sexp_and_determinism(self, capsys):
        assert run(["sample", "--class", "tidy", "--n", "12", "--seed", "3", "--format", "sexp"]) == 0
        first = capsys.readouterr().out
        assert run(["sample", "--class", "tidy", "--n", "12", "--seed", "3", "--format", "sexp"]) == 0
        assert capsys.readouterr().out == first

    def test_pgm_output(self, tmp_path):
        out = tmp_path / "adj.pgm"
        assert run(["sample", "--class", "sparse", "--n", "16", "--seed", "1", "--out", str(out)]) == 0
        text = out.read_text()
        assert text.startswith("P2\n16 16\n1")


class TestStats:
    def test_csv(self, capsys):
        assert run(["stats", "--class", "cograph", "--n", "40", "--trials", "10", "--csv", "--seed", "2"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("class,n,trials")
        assert lines[1].split(",")[0] == "cograph"

    def test_json_round_trip(self, capsys):
        assert run(["stats", "--class", "reducible", "--n", "30", "--trials", "10", "--seed", "4"]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["class"] == "reducible" and rep["trials"] == 10


class TestVerify:
    def test_quick_level(self, capsys):
        assert run(["verify", "--level", "quick"]) == 0
        out = capsys.readouterr().out
        assert "all passed" in out and "FAIL" not in out


class TestUsage:
    def test_no_command(self):
        assert run([]) == 2

    def test_unknown_command(self):
        assert run(["frobnicate"]) == 2
