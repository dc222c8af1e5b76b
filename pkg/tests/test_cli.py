import csv
import io
import json
from pathlib import Path

import pytest

from assertrefine.cli import CONFIG_ENV, main
from assertrefine.qasm import parse

FIXTURES = Path(__file__).parent / "fixtures"


def fixture(name):
    return str(FIXTURES / name)


class TestCheck:
    def test_cccx_fails(self, capsys):
        assert main(["check", fixture("cccx.qasm")]) == 1
        out = capsys.readouterr().out
        assert out.count("FAIL") == 3

    def test_correct_program_passes(self, capsys):
        assert main(["check", fixture("cccx_correct.qasm")]) == 0

    def test_no_assertions(self, capsys):
        assert main(["check", fixture("bell.qasm")]) == 0
        assert capsys.readouterr().out == ""

    def test_json_listing(self, capsys):
        main(["check", fixture("ghz5_mutant.qasm"), "--json"])
        data = json.loads(capsys.readouterr().out)
        assert [v["outcome"] for v in data["verdicts"]] == ["fail"]

    def test_parse_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.qasm"
        bad.write_text("qreg q[1];\nh q[3];\n")
        assert main(["check", str(bad)]) == 2
        assert "line 2" in capsys.readouterr().err

    def test_analysis_error_exit_code(self, tmp_path, capsys):
        big = tmp_path / "big.qasm"
        big.write_text("qreg q[20];\nh q[0];\nassert-sup q[0];\n")
        assert main(["check", str(big)]) == 3

    def test_missing_file(self, capsys):
        assert main(["check", "/nonexistent.qasm"]) == 3


class TestRefine:
    def test_cccx(self, tmp_path):
        out, report = tmp_path / "out.qasm", tmp_path / "report.json"
        code = main(["refine", fixture("cccx.qasm"), "-o", str(out), "--annotations", "--report", str(report)])
        assert code == 0
        lines = out.read_text().splitlines()
        sup = next(i for i, l in enumerate(lines) if l.startswith("assert-sup"))
        assert lines[sup - 1] == "cx anc[1], target[0];"
        assert lines[sup].endswith("// moved from line 22")
        data = json.loads(report.read_text())
        assert data["schema"] == 1
        assert len(data["moves"]) == 5 and len(data["splits"]) == 1
        parse(out.read_text())

    def test_no_assertions_is_identity(self, tmp_path, capsys):
        report = tmp_path / "r.json"
        assert main(["refine", fixture("bell.qasm"), "--report", str(report)]) == 0
        assert capsys.readouterr().out == (FIXTURES / "bell.qasm").read_text()
        data = json.loads(report.read_text())
        assert data["moves"] == data["added"] == data["splits"] == []

    def test_drop_subsumed(self, capsys):
        main(["refine", fixture("uncompute.qasm"), "--drop-subsumed"])
        out = capsys.readouterr().out
        assert out.count("assert-eq") == 3
        assert "assert-eq anc {" not in out

    def test_config_from_environment(self, tmp_path, monkeypatch, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"drop_subsumed": True}))
        monkeypatch.setenv(CONFIG_ENV, str(cfg))
        main(["refine", fixture("uncompute.qasm")])
        assert capsys.readouterr().out.count("assert-eq") == 3

    def test_invalid_tolerance(self, capsys):
        assert main(["refine", fixture("cccx.qasm"), "--equality-eps", "0"]) == 3


class TestEvalAndFriends:
    def test_eval_writes_outputs(self, tmp_path, capsys):
        assert main(["eval", "--family", "ghz", "--sizes", "4", "--kind", "ent", "--seed", "7", "--out", str(tmp_path)]) == 0
        rows = list(csv.DictReader((tmp_path / "mutants.csv").open()))
        assert rows and all(r["qubits"] == "4" for r in rows)
        assert (tmp_path / "reduction.png").exists()
        assert "| ghz |" in capsys.readouterr().out

    def test_eval_is_reproducible(self, capsys):
        main(["eval", "--family", "ghz", "--sizes", "4..5", "--kind", "ent", "--seed", "7"])
        first = capsys.readouterr().out
        main(["eval", "--family", "ghz", "--sizes", "4..5", "--kind", "ent", "--seed", "7"])
        assert capsys.readouterr().out == first

    def test_generate_and_mutate(self, tmp_path, capsys):
        prog = tmp_path / "ghz.qasm"
        assert main(["generate", "--family", "ghz", "--qubits", "5", "-o", str(prog)]) == 0
        assert main(["check", str(prog)]) == 0
        capsys.readouterr()
        assert main(["mutate", str(prog), "--seed", "1"]) == 0
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert rows and rows[0]["family"] == "ghz"

    def test_generate_refusal(self, capsys):
        assert main(["generate", "--family", "dj-like", "--qubits", "4", "--kind", "ent"]) == 3

    def test_usage_error(self):
        with pytest.raises(SystemExit):
            main(["frobnicate"])
