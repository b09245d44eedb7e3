"""CLI surface: exit codes, JSON schemas, determinism."""

import json

import pytest

from hblpoly.cli import main
from hblpoly.decision import clear_cache

from conftest import loomis_whitney_datum, matmul_datum

MATMUL = matmul_datum().to_json()
SYS_X_MINUS_2 = {
    "q": 1,
    "polys": [{"terms": [{"exps": [1], "coeff": "1"}, {"exps": [0], "coeff": "-2"}]}],
}


@pytest.fixture
def matmul_file(tmp_path):
    path = tmp_path / "matmul.json"
    path.write_text(json.dumps(MATMUL))
    return str(path)


@pytest.fixture
def system_file(tmp_path):
    path = tmp_path / "system.json"
    path.write_text(json.dumps(SYS_X_MINUS_2))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


class TestPolytopeCommand:
    def test_output_and_oracle_check(self, capsys, matmul_file):
        code, out = run(
            capsys, "polytope", "--datum", matmul_file, "--oracle-height", "1"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["oracle_agrees"] is True
        assert ["1/2", "1/2", "1/2"] in doc["vertices"]
        assert doc["steps_used"] > 0
        assert all(q["witness"] is not None for q in doc["inequalities"])

    def test_budget_exhaustion_exit_code(self, capsys, matmul_file):
        clear_cache()
        code, out = run(capsys, "polytope", "--datum", matmul_file, "--budget", "2")
        assert code == 3
        doc = json.loads(out)
        assert "partial" in doc
        clear_cache()

    def test_missing_file(self, capsys, tmp_path):
        code, _ = run(capsys, "polytope", "--datum", str(tmp_path / "nope.json"))
        assert code == 2


class TestMemberCommand:
    def test_member_true(self, capsys, matmul_file):
        code, out = run(capsys, "member", "--datum", matmul_file, "--s", "1,1,0")
        assert code == 0 and json.loads(out)["member"] is True

    def test_member_false(self, capsys, matmul_file):
        code, out = run(
            capsys, "member", "--datum", matmul_file, "--s", "9/20,9/20,9/20"
        )
        assert code == 1 and json.loads(out)["member"] is False

    def test_malformed_rational_position(self, capsys, matmul_file):
        code = main(["member", "--datum", matmul_file, "--s", "1/2,x,1/2"])
        assert code == 2
        err = capsys.readouterr().err
        assert "exponent 2" in err

    def test_out_of_range_component(self, capsys, matmul_file):
        code, _ = run(capsys, "member", "--datum", matmul_file, "--s", "1/2,1/2,3/2")
        assert code == 2


class TestShblCommand:
    def test_matmul_objective(self, capsys, matmul_file):
        code, out = run(capsys, "shbl", "--datum", matmul_file)
        assert code == 0
        assert json.loads(out) == {"value": "3/2", "argmin": ["1/2", "1/2", "1/2"]}

    def test_weights(self, capsys, matmul_file):
        code, out = run(capsys, "shbl", "--datum", matmul_file, "--weights", "1,0,0")
        assert code == 0 and json.loads(out)["value"] == "0"

    def test_empty_polytope(self, capsys, tmp_path):
        datum = {"ambient_dim": 1, "maps": [{"rows": [[0]]}]}
        path = tmp_path / "empty.json"
        path.write_text(json.dumps(datum))
        code, out = run(capsys, "shbl", "--datum", str(path))
        assert code == 1 and json.loads(out) == {"empty": True}


class TestVerifyCommands:
    def test_verify_sets(self, capsys, matmul_file):
        code, out = run(
            capsys,
            "verify-sets",
            "--datum",
            matmul_file,
            "--s",
            "1/2,1/2,1/2",
            "--samples",
            "20",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["trials"] == 20 and doc["violations"] == []

    def test_verify_functions(self, capsys, matmul_file):
        code, out = run(
            capsys,
            "verify-functions",
            "--datum",
            matmul_file,
            "--s",
            "1/2,1/2,1/2",
            "--samples",
            "10",
        )
        assert code == 0 and json.loads(out)["violations"] == []

    def test_verify_sets_deterministic(self, capsys, matmul_file):
        _, first = run(
            capsys, "verify-sets", "--datum", matmul_file, "--s", "1/2,1/2,1/2",
            "--samples", "10", "--seed", "5",
        )
        _, second = run(
            capsys, "verify-sets", "--datum", matmul_file, "--s", "1/2,1/2,1/2",
            "--samples", "10", "--seed", "5",
        )
        assert first == second


class TestCounterexampleCommand:
    def test_refutes_outside_point(self, capsys, matmul_file, tmp_path):
        witness = {"ambient_dim": 3, "basis": [["0", "0", "1"]]}
        wpath = tmp_path / "w.json"
        wpath.write_text(json.dumps(witness))
        code, out = run(
            capsys,
            "counterexample",
            "--datum",
            matmul_file,
            "--s",
            "9/20,9/20,9/20",
            "--witness",
            str(wpath),
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["n"] <= 32 and int(doc["lhs_pow"]) > int(doc["rhs_pow"])

    def test_non_supercritical_witness_rejected(self, capsys, matmul_file, tmp_path):
        witness = {"ambient_dim": 3, "basis": [["1", "0", "0"]]}
        wpath = tmp_path / "w.json"
        wpath.write_text(json.dumps(witness))
        code, _ = run(
            capsys, "counterexample", "--datum", matmul_file, "--s", "1,1,1",
            "--witness", str(wpath),
        )
        assert code == 2


class TestEnumCommand:
    def test_line(self, capsys):
        code, out = run(capsys, "enum-subspaces", "--d", "1", "--n", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["subspaces"] == [
            {"ambient_dim": 1, "basis": []},
            {"ambient_dim": 1, "basis": [["1"]]},
        ]


class TestDiophCommands:
    def test_encode_verify_extract_search(self, capsys, system_file, tmp_path):
        code, out = run(capsys, "dioph-encode", "--system", system_file, "--a", "2")
        assert code == 0
        enc_path = tmp_path / "enc.json"
        enc_path.write_text(out)
        doc = json.loads(out)
        assert (doc["mu"], doc["nu"]) == (9, 6)

        code, out = run(capsys, "dioph-search", "--encoding", str(enc_path), "--height", "2")
        assert code == 0
        witness = json.loads(out)["witness"]
        assert witness is not None
        wpath = tmp_path / "w.json"
        wpath.write_text(json.dumps(witness))

        code, out = run(
            capsys, "dioph-verify", "--encoding", str(enc_path), "--subspace", str(wpath)
        )
        assert code == 0 and json.loads(out)["verified"] is True

        code, out = run(
            capsys, "dioph-extract", "--encoding", str(enc_path), "--subspace", str(wpath)
        )
        assert code == 0 and json.loads(out)["a"] == ["2"]

    def test_search_absent(self, capsys, system_file, tmp_path):
        code, out = run(capsys, "dioph-encode", "--system", system_file, "--a", "3")
        enc_path = tmp_path / "enc3.json"
        enc_path.write_text(out)
        code, out = run(capsys, "dioph-search", "--encoding", str(enc_path), "--height", "4")
        assert code == 1 and json.loads(out)["witness"] is None

    def test_bad_system_is_input_error(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"q": 1, "polys": []}')
        code, _ = run(capsys, "dioph-encode", "--system", str(path), "--a", "1")
        assert code == 2


class TestDeterminism:
    def test_polytope_output_bytes(self, capsys, matmul_file):
        clear_cache()
        _, first = run(capsys, "polytope", "--datum", matmul_file)
        clear_cache()
        _, second = run(capsys, "polytope", "--datum", matmul_file)
        assert first == second
