"""Tests for the command line interface."""

from click.testing import CliRunner

from infinireg.cli import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main
from infinireg.config import load_config

SCRIPT = """ring { xvars = [x]; tvars = [t1]; }
elem a = x + t1;
splitting D { x -> t1; }
infbloch q = [2 + 3*t1];
infbloch s = [x^2 + t1];
cech C { opens = 2; splitting 2 = D; consistent c1 = [x + t1]; }
cmd li2 tau0 q;
cmd eqhom id tau0 D s;
"""


def _invoke(tmp_path, *args, script=SCRIPT):
    path = tmp_path / "session.ir"
    path.write_text(script)
    argv = ["--config", str(tmp_path / "config.yaml")]
    argv += [str(path) if a == "SCRIPT" else a for a in args]
    return CliRunner().invoke(main, argv)


class TestRun:
    def test_all_commands_pass(self, tmp_path):
        result = _invoke(tmp_path, "run", "SCRIPT")
        assert result.exit_code == EXIT_PASS, result.output
        assert "li2 first: (-27/8)*t1*t1*t1" in result.output
        assert "eqhom: holds" in result.output
        assert "line 7" in result.output

    def test_failing_command(self, tmp_path):
        result = _invoke(tmp_path, "run", "SCRIPT", script=SCRIPT + "cmd fiveterm a a;\n")
        assert result.exit_code == EXIT_FAIL
        assert "FLATNESS_VIOLATION" in result.output

    def test_parse_error(self, tmp_path):
        result = _invoke(tmp_path, "run", "SCRIPT", script=SCRIPT + "cmd li2 tau0 nothing;\n")
        assert result.exit_code == EXIT_USAGE
        assert "UNKNOWN_IDENT" in result.output

    def test_undecodable_script(self, tmp_path):
        path = tmp_path / "binary.ir"
        path.write_bytes(b"\xff\xfe\x00ring")
        result = CliRunner().invoke(main, ["--config", str(tmp_path / "config.yaml"), "run", str(path)])
        assert result.exit_code == EXIT_USAGE
        assert "PARSE_ERROR" in result.output
        assert "cannot read" in result.output


class TestNamedCommands:
    def test_undecodable_script(self, tmp_path):
        path = tmp_path / "binary.ir"
        path.write_bytes(b"\xff\xfe\x00ring")
        result = CliRunner().invoke(main, ["--config", str(tmp_path / "config.yaml"), "delta", str(path), "q"])
        assert result.exit_code == EXIT_USAGE
        assert "PARSE_ERROR" in result.output

    def test_li2_both(self, tmp_path):
        result = _invoke(tmp_path, "li2", "SCRIPT", "D", "s", "--method", "both")
        assert result.exit_code == EXIT_PASS, result.output
        assert "agree: yes" in result.output

    def test_delta(self, tmp_path):
        result = _invoke(tmp_path, "delta", "SCRIPT", "q")
        assert result.exit_code == EXIT_PASS
        assert "delta:" in result.output

    def test_unknown_name(self, tmp_path):
        result = _invoke(tmp_path, "delta", "SCRIPT", "missing")
        assert result.exit_code == EXIT_USAGE

    def test_homotopy(self, tmp_path):
        result = _invoke(tmp_path, "homotopy", "SCRIPT", "id", "tau0", "D", "s")
        assert result.exit_code == EXIT_PASS, result.output
        assert "homotopy:" in result.output


class TestCech:
    def test_verify_first_block(self, tmp_path):
        result = _invoke(tmp_path, "cech", "verify", "SCRIPT")
        assert result.exit_code == EXIT_PASS, result.output
        assert "cocycle: holds" in result.output

    def test_rho1(self, tmp_path):
        result = _invoke(tmp_path, "cech", "rho1", "SCRIPT", "--name", "C", "--cap", "4")
        assert result.exit_code == EXIT_PASS, result.output
        assert "compatible (consistent, cap 4)" in result.output

    def test_no_block(self, tmp_path):
        script = "ring { xvars = [x]; tvars = [t1]; }\n"
        result = _invoke(tmp_path, "cech", "verify", "SCRIPT", script=script)
        assert result.exit_code == EXIT_USAGE


class TestCheck:
    def test_master_identity(self, tmp_path):
        result = _invoke(tmp_path, "check", "master-identity", "--brief")
        assert result.exit_code == EXIT_PASS, result.output
        assert "PASS 1/1" in result.output

    def test_full_report(self, tmp_path):
        result = _invoke(tmp_path, "check", "scaling", "--samples", "2", "--seed", "3")
        assert result.exit_code == EXIT_PASS, result.output
        assert "Property Suite" in result.output

    def test_bad_bounds(self, tmp_path):
        result = _invoke(tmp_path, "check", "scaling", "--samples", "0")
        assert result.exit_code == EXIT_USAGE

    def test_unknown_suite(self, tmp_path):
        result = _invoke(tmp_path, "check", "six-term")
        assert result.exit_code == EXIT_USAGE


class TestSetup:
    def test_writes_config(self, tmp_path):
        result = _invoke(tmp_path, "setup", "--seed", "5", "--samples", "3")
        assert result.exit_code == 0
        config = load_config(tmp_path / "config.yaml")
        assert config["seed"] == 5
        assert config["samples"] == 3
        assert config["cap"] == 6

    def test_config_used_by_check(self, tmp_path):
        _invoke(tmp_path, "setup", "--samples", "2")
        result = _invoke(tmp_path, "check", "scaling", "--brief")
        assert "PASS 2/2" in result.output
