"""
Integration tests for the atomspec command line.
Tests the interaction between stages and end-to-end runs on DSL files.
"""
import json
import logging
import sys

import pytest

from atomspec.cli import RunConfig, build_parser, run
from atomspec.const import EXIT_OK, EXIT_PARSE, EXIT_REJECTED, EXIT_RESOURCE

SIGMA2 = "vertices 1 2;\narrows a1: 1 -> 2;\nring F2;\n"
JORDAN_F2 = "vertices 1;\narrows X: 1 -> 1;\nring F2;\n"
JORDAN_CUBED_Z = "vertices 1;\narrows X: 1 -> 1;\nrelations X^3;\nring Z;\n"
JORDAN_NON_ADMISSIBLE = "vertices 1;\narrows X: 1 -> 1;\nrelations X^3, 2;\nring Z;\n"
KRONECKER = "vertices 1 2;\narrows a: 1 -> 2, b: 1 -> 2;\nrelations a - b;\nring F2;\n"


@pytest.fixture
def write_dsl(tmp_path):
    def write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def run_cli(argv: list[str]) -> int:
    return run(RunConfig.from_args(build_parser().parse_args(argv)))


class TestSpectrumCommand:
    """End-to-end tests for the spectrum command"""

    def test_subspace_quiver_json(self, write_dsl, capsys):
        """Test the two-point spectrum of Sigma_2"""
        code = run_cli(["spectrum", write_dsl("sigma2.q", SIGMA2)])
        payload = json.loads(capsys.readouterr().out)
        assert code == EXIT_OK
        assert len(payload["points"]) == 2
        assert payload["order"] == []
        assert payload["status"] == "complete"

    def test_jordan_over_z_dot(self, write_dsl, capsys):
        """Test the Hasse diagram of the sampled Spec Z copy"""
        code = run_cli(["spectrum", write_dsl("jordan.q", JORDAN_CUBED_Z), "--format", "dot", "--primes", "2,3,5"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert out.startswith("digraph atom_spectrum {")
        assert out.count("->") == 3
        assert '"v1_p0" -> "v1_p5";' in out

    def test_text_format(self, write_dsl, capsys):
        """Test the text table"""
        run_cli(["spectrum", write_dsl("sigma2.q", SIGMA2), "--format", "text"])
        assert "status: complete" in capsys.readouterr().out

    def test_presentation_without_input(self, capsys):
        """Test a named presentation needs no DSL file"""
        code = run_cli(["spectrum", "--presentation", "subspace(3)", "--vertex", "2"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "presentation: subspace(3)" in out
        assert "matrix ideal:" in out

    def test_out_file(self, write_dsl, tmp_path, capsys):
        """Test writing the artifact to a nested path"""
        target = tmp_path / "artifacts" / "sigma2.json"
        code = run_cli(["spectrum", write_dsl("sigma2.q", SIGMA2), "--out", str(target)])
        assert code == EXIT_OK
        assert capsys.readouterr().out == ""
        assert json.loads(target.read_text())["ring"] == "F2"


class TestCheckCommand:
    """End-to-end tests for the check command"""

    def test_rooted_kronecker(self, write_dsl, capsys):
        """Test the relation table and verdict"""
        code = run_cli(["check", write_dsl("kronecker.q", KRONECKER)])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "a - b" in out
        assert out.endswith("right rooted: Yes\n")

    def test_json_verdict(self, write_dsl, capsys):
        """Test the JSON rendering of check"""
        run_cli(["check", write_dsl("jordan.q", JORDAN_F2), "--format", "json"])
        payload = json.loads(capsys.readouterr().out)
        assert payload == {"relations": [], "right_rooted": "No"}

    def test_non_admissible_relation(self, write_dsl, capsys, caplog):
        """Test that the relation 2 is rejected with its position"""
        with caplog.at_level(logging.ERROR):
            code = run_cli(["check", write_dsl("bad.q", JORDAN_NON_ADMISSIBLE)])
        assert code == EXIT_REJECTED
        assert capsys.readouterr().out == ""
        assert "relation '2' (line 3, column 16) is not admissible" in caplog.text


class TestIdealCommand:
    """End-to-end tests for the ideal command"""

    def test_generator_listing(self, write_dsl, capsys):
        """Test the comonoform generators at the sink of Sigma_2"""
        code = run_cli(["ideal", write_dsl("sigma2.q", SIGMA2), "--vertex", "2", "--prime", "0"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert out.startswith("comonoform ideal F2Q/(0)~(2)\ngenerators:\n  e_1\n  a1\n")

    def test_json_listing(self, write_dsl, capsys):
        """Test the JSON listing over Z"""
        run_cli(["ideal", write_dsl("jordan.q", JORDAN_CUBED_Z), "--vertex", "1", "--prime", "5", "--format", "json"])
        payload = json.loads(capsys.readouterr().out)
        assert payload["prime"] == {"tag": "prime", "p": 5}
        assert payload["generators"] == ["X", "5*e_1"]

    def test_empty_relation_ideal_is_not_listed(self, write_dsl, capsys):
        """Test that a quiver without relations gets no relation ideal section"""
        run_cli(["ideal", write_dsl("sigma2.q", SIGMA2), "--vertex", "2", "--prime", "0"])
        assert "relation ideal:" not in capsys.readouterr().out

    def test_relation_ideal_listing(self, write_dsl, capsys):
        """Test the relation ideal section for X^3 = 0"""
        run_cli(["ideal", write_dsl("jordan.q", JORDAN_CUBED_Z), "--vertex", "1", "--prime", "5"])
        out = capsys.readouterr().out
        assert "relation ideal:\n  monomial X^3\n" in out

    def test_missing_vertex(self, write_dsl):
        """Test that ideal needs a vertex and a prime"""
        assert run_cli(["ideal", write_dsl("sigma2.q", SIGMA2)]) == EXIT_REJECTED


class TestVerifyCommand:
    """End-to-end tests for the verify command"""

    def test_jordan_witness(self, write_dsl, capsys):
        """Test the non-surjectivity witness at dimension one"""
        code = run_cli(["verify", write_dsl("jordan.q", JORDAN_F2), "--dim-bound", "1"])
        payload = json.loads(capsys.readouterr().out)
        assert code == EXIT_OK
        assert payload["right_rooted"] == "No"
        witness = next(c for c in payload["checks"] if c["name"] == "non_surjectivity_witnesses")
        assert witness["witnesses"][0]["kernel_dims"] == {"1": 0}

    def test_subspace_quiver_passes(self, write_dsl, capsys):
        """Test that Sigma_2 passes every check"""
        run_cli(["verify", write_dsl("sigma2.q", SIGMA2), "--dim-bound", "2"])
        payload = json.loads(capsys.readouterr().out)
        assert all(c["pass"] for c in payload["checks"])

    def test_text_report(self, write_dsl, capsys):
        """Test the text summary"""
        run_cli(["verify", write_dsl("sigma2.q", SIGMA2), "--dim-bound", "1", "--format", "text"])
        out = capsys.readouterr().out
        assert "stalks_pairwise_inequivalent" in out
        assert "right rooted: Yes" in out

    def test_guard_exit_code(self, write_dsl):
        """Test that an exceeded guard exits with 2"""
        path = write_dsl("jordan.q", JORDAN_F2)
        assert run_cli(["verify", path, "--dim-bound", "2", "--guard-tuples", "3"]) == EXIT_RESOURCE

    def test_integers_need_a_prime(self, write_dsl):
        """Test that verify over Z needs --prime"""
        path = write_dsl("jordan.q", JORDAN_CUBED_Z)
        assert run_cli(["verify", path, "--dim-bound", "1"]) == EXIT_REJECTED
        assert run_cli(["verify", path, "--dim-bound", "1", "--prime", "2"]) == EXIT_OK


class TestTriangularCommand:
    """End-to-end tests for the triangular command"""

    def test_field_case(self, tmp_path, capsys):
        """Test T(F2, F2, F2)"""
        path = tmp_path / "m.json"
        path.write_text(json.dumps({"group": "F2", "left_action": [[1, 1, 1]], "right_action": []}))
        code = run_cli(["triangular", str(path)])
        payload = json.loads(capsys.readouterr().out)
        assert code == EXIT_OK
        assert [p["vertex"] for p in payload["points"]] == ["A", "B"]
        assert payload["ring"] == "T(F2,F2,F2)"

    def test_integers_next_to_a_field(self, tmp_path, capsys):
        """Test T(Z, F3, F3) sampled at 2 and 3"""
        path = tmp_path / "m.json"
        path.write_text(json.dumps({"group": "F3"}))
        run_cli(["triangular", str(path), "--ring-a", "Z", "--ring-b", "F3", "--primes", "2,3"])
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["points"]) == 4
        assert payload["order"] == [[0, 1], [0, 2]]


class TestParseErrors:
    """End-to-end tests for DSL errors"""

    def test_parse_error_exit_code(self, write_dsl, caplog):
        """Test that syntax errors exit with 3 and a position"""
        path = write_dsl("broken.q", "vertices 1;\narrows X 1 -> 1;\nring F2;\n")
        with caplog.at_level(logging.ERROR):
            assert run_cli(["check", path]) == EXIT_PARSE
        assert "line 2, column 8" in caplog.text

    def test_non_utf8_file(self, tmp_path, caplog):
        """Test that a file with undecodable bytes exits with 3 and a position"""
        path = tmp_path / "latin1.q"
        path.write_bytes(b"# caf\xe9\nvertices 1;\nring F2;\n")
        with caplog.at_level(logging.ERROR):
            assert run_cli(["check", str(path)]) == EXIT_PARSE
        assert "line 1, column 6" in caplog.text


class TestDeterminism:
    """Tests that identical runs give identical artifacts"""

    @pytest.mark.parametrize(
        "argv",
        [
            ["spectrum", "sigma2.q"],
            ["spectrum", "jordan.q", "--format", "dot"],
            ["check", "kronecker.q"],
            ["verify", "sigma2.q", "--dim-bound", "2"],
        ],
    )
    def test_byte_identical(self, argv, write_dsl, tmp_path):
        """Test two runs write the same bytes"""
        write_dsl("sigma2.q", SIGMA2)
        write_dsl("jordan.q", JORDAN_CUBED_Z)
        write_dsl("kronecker.q", KRONECKER)
        argv = [argv[0], str(tmp_path / argv[1])] + argv[2:]
        outputs = []
        for k in range(2):
            target = tmp_path / f"run{k}.out"
            assert run_cli(argv + ["--out", str(target)]) == EXIT_OK
            outputs.append(target.read_bytes())
        assert outputs[0] == outputs[1]


class TestMain:
    """Tests for the main entry point"""

    def test_main_exit_code(self, write_dsl, monkeypatch, capsys):
        """Test that main exits with the run status"""
        from main import main

        monkeypatch.setattr(sys, "argv", ["main.py", "spectrum", write_dsl("sigma2.q", SIGMA2)])
        with pytest.raises(SystemExit) as info:
            main()
        assert info.value.code == EXIT_OK
        assert json.loads(capsys.readouterr().out)["ring"] == "F2"

    def test_main_rejects_bad_config(self, monkeypatch):
        """Test that configuration errors exit before running"""
        from main import main

        monkeypatch.setattr(sys, "argv", ["main.py", "spectrum"])
        with pytest.raises(SystemExit) as info:
            main()
        assert info.value.code == EXIT_REJECTED
