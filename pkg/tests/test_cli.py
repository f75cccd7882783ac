"""Command-line surface: subcommands, exit codes, determinism."""

import json

import pytest

from convex_transversal import serialize_instance
from convex_transversal.cli import main
from conftest import make_instance_a, make_instance_b


@pytest.fixture
def instance_file(tmp_path):
    path = tmp_path / "a.txt"
    path.write_text(serialize_instance(make_instance_a()))
    return str(path)


@pytest.fixture
def sat_file(tmp_path):
    path = tmp_path / "one.cnf2"
    path.write_text("p wcnf2 1 1\n1 1\n")
    return str(path)


class TestSolve:
    def test_upper_mode(self, instance_file, capsys):
        assert main(["solve", "--mode", "upper", instance_file]) == 0
        assert capsys.readouterr().out.strip() == "k=3"

    @pytest.mark.parametrize("mode", ["quad", "full"])
    def test_other_modes(self, mode, instance_file, capsys):
        assert main(["solve", "--mode", mode, instance_file]) == 0
        assert capsys.readouterr().out.strip() == "k=3"

    def test_report_written(self, instance_file, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        assert main(["solve", instance_file, "--report", str(report_path)]) == 0
        capsys.readouterr()
        report = json.loads(report_path.read_text())
        assert report["k"] == 3
        assert len(report["witness"]["points"]) == 3

    def test_quadrilateral_instance(self, tmp_path, capsys):
        path = tmp_path / "b.txt"
        path.write_text(serialize_instance(make_instance_b()))
        assert main(["solve", "--mode", "full", str(path)]) == 0
        assert capsys.readouterr().out.strip() == "k=4"
        assert main(["solve", "--mode", "upper", str(path)]) == 0
        assert capsys.readouterr().out.strip() == "k=3"


class TestOracle:
    def test_small_instance(self, instance_file, capsys):
        assert main(["oracle", instance_file]) == 0
        assert capsys.readouterr().out.strip() == "k=3"

    def test_cap_exceeded_is_failure(self, instance_file, capsys):
        assert main(["oracle", "--cap", "2", instance_file]) == 1


class TestGen:
    def test_random_deterministic(self, capsys):
        assert main(["gen", "random", "--n", "4", "--seed", "9"]) == 0
        first = capsys.readouterr().out
        assert main(["gen", "random", "--n", "4", "--seed", "9"]) == 0
        assert capsys.readouterr().out == first
        assert first.count("segment ") == 4

    def test_seed_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("CONVEX_TRANSVERSAL_SEED", "9")
        assert main(["gen", "random", "--n", "4"]) == 0
        env_out = capsys.readouterr().out
        assert main(["gen", "random", "--n", "4", "--seed", "9"]) == 0
        assert capsys.readouterr().out == env_out

    def test_hardness_then_verify(self, sat_file, tmp_path, capsys):
        out = tmp_path / "scene.json"
        assert main(["gen", "hardness", "--sat", sat_file, "--out", str(out)]) == 0
        assert main(["verify", str(out)]) == 0
        assert "scene ok" in capsys.readouterr().out

    def test_hardness_rectangles(self, sat_file, capsys):
        assert main(["gen", "hardness", "--sat", sat_file, "--rectangles"]) == 0
        body = json.loads(capsys.readouterr().out)
        assert len(body["rectangles"]) == 42


class TestVerify:
    def test_instance_cross_check(self, instance_file, capsys):
        assert main(["verify", instance_file]) == 0
        assert "confirmed against oracle" in capsys.readouterr().out

    def test_injected_solver_bug_exits_two(self, instance_file, monkeypatch,
                                           capsys):
        import convex_transversal.cli as cli_module
        from convex_transversal import max_convex_transversal as real

        def off_by_one(instance):
            k, witness, category = real(instance)
            return k - 1, witness, category

        monkeypatch.setattr(cli_module, "max_convex_transversal", off_by_one)
        assert main(["verify", instance_file]) == 2
        assert "MISMATCH" in capsys.readouterr().err

    def test_tampered_scene_exits_one(self, sat_file, tmp_path, capsys):
        out = tmp_path / "scene.json"
        assert main(["gen", "hardness", "--sat", sat_file, "--out", str(out)]) == 0
        body = json.loads(out.read_text())
        del body["segments"][0]
        out.write_text(json.dumps(body))
        assert main(["verify", str(out)]) == 1


class TestRender:
    def test_instance_svg(self, instance_file, capsys):
        assert main(["render", instance_file]) == 0
        out = capsys.readouterr().out
        assert out.startswith("<svg") and out.count('class="segment"') == 3

    def test_witness_overlay(self, instance_file, capsys):
        assert main(["render", instance_file, "--witness"]) == 0
        assert capsys.readouterr().out.count("<circle") == 3

    def test_scene_witness_is_usage_error(self, sat_file, tmp_path, capsys):
        out = tmp_path / "scene.json"
        main(["gen", "hardness", "--sat", sat_file, "--out", str(out)])
        capsys.readouterr()
        assert main(["render", str(out), "--witness"]) == 3


class TestExitCodes:
    def test_unknown_mode_is_usage_error(self, instance_file):
        assert main(["solve", "--mode", "sideways", instance_file]) == 3

    def test_missing_file_is_usage_error(self, capsys):
        assert main(["solve", "nope.txt"]) == 3

    def test_invalid_instance_is_validation_failure(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text(
            "convex-transversal-instance v1\nsegment 1 0 1\nsegment 1 2 3\n"
        )
        assert main(["solve", str(path)]) == 1
