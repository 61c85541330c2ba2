import pytest
import json
import sys
import os
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

import main
from errors import BudgetExceeded
from main import EXIT_BUDGET, EXIT_CONFIG, EXIT_ERROR, EXIT_OK, EXIT_VERIFY, named_module


@pytest.fixture
def out_dir(tmp_path):
    return str(tmp_path / "out")


def read_json(out_dir, name):
    with open(os.path.join(out_dir, name)) as f:
        return json.load(f)


class TestAlgebraInfo:

    def test_writes_summary(self, clean_env, out_dir):
        assert main.main(["algebra-info", "--config", "2,2,5", "--out", out_dir]) == EXIT_OK
        info = read_json(out_dir, "algebra.json")
        assert info["dim"] == 4
        assert info["nakayama"] == {"scalars": [4, 4], "order": 2}
        assert info["frobenius_nondegenerate"]
        assert not info["wild"]

    def test_stdout_without_out(self, clean_env, capsys):
        assert main.main(["algebra-info", "--config", "3,2,7"]) == EXIT_OK
        captured = capsys.readouterr()
        assert json.loads(captured.out)["nakayama"]["order"] == 3
        assert "✅" in captured.err

    def test_bad_commutation_matrix(self, clean_env):
        bad = '{"p": 5, "c": 2, "exponents": [2, 2], "commutation": [[1, 2], [2, 1]]}'
        assert main.main(["algebra-info", "--config", bad]) == EXIT_CONFIG


class TestExplore:

    def test_seed_is_required(self, clean_env):
        assert main.main(["explore", "--config", "2,2,5", "--radius", "1"]) == EXIT_CONFIG

    def test_projective_start(self, clean_env, capsys):
        code = main.main(["explore", "--config", "2,2,5", "--start", "A", "--seed", "1", "--radius", "1"])
        assert code == EXIT_ERROR
        assert "ProjectiveInput" in capsys.readouterr().err

    def test_unknown_start(self, clean_env):
        code = main.main(["explore", "--config", "2,2,5", "--start", "nope", "--seed", "1"])
        assert code == EXIT_CONFIG

    def test_outputs_and_cache(self, clean_env, out_dir, temp_cache_dir):
        argv = ["explore", "--config", "2,2,5", "--seed", "1", "--radius", "1", "--out", out_dir,
                "--cache-dir", temp_cache_dir]
        assert main.main(argv) == EXIT_OK
        with open(os.path.join(out_dir, "fragment.dot")) as f:
            first_dot = f.read()
        first = read_json(out_dir, "fragment.json")
        assert first["vertices"][0]["dim"] == 1
        assert main.main(argv) == EXIT_OK
        assert read_json(out_dir, "fragment.json") == first
        with open(os.path.join(out_dir, "fragment.dot")) as f:
            assert f.read() == first_dot

    def test_json_only(self, clean_env, out_dir):
        argv = ["explore", "--config", "2,2,5", "--seed", "1", "--radius", "1", "--out", out_dir,
                "--format", "json", "--no-cache"]
        assert main.main(argv) == EXIT_OK
        assert os.listdir(out_dir) == ["fragment.json"]

    def test_budget_exhausted(self, clean_env, mocker):
        mocker.patch("main.explore_component", side_effect=BudgetExceeded("sequence budget exhausted"))
        code = main.main(["explore", "--config", "2,2,5", "--seed", "1", "--no-cache"])
        assert code == EXIT_BUDGET


class TestVerify:

    def test_selected_checks(self, clean_env, out_dir):
        argv = ["verify", "--config", "2,2,5", "--seed", "1", "--suite", "quick", "--only", "1", "2",
                "--out", out_dir]
        assert main.main(argv) == EXIT_OK
        report = read_json(out_dir, "report.json")
        assert [c["id"] for c in report["checks"]] == [1, 2]
        assert report["suite"] == "quick"

    def test_failure_exit_code(self, clean_env, mocker):
        fake = mocker.MagicMock()
        fake.checks = []
        fake.ok = False
        fake.failed = [object()]
        fake.to_dict.return_value = {"checks": []}
        mocker.patch("main.run_suite", return_value=fake)
        assert main.main(["verify", "--config", "2,2,5", "--seed", "1"]) == EXIT_VERIFY

    def test_paper_suite_by_name(self, clean_env, out_dir):
        argv = ["verify", "--config", "2,2,5", "--seed", "1", "--suite", "paper", "--only", "1", "--out", out_dir]
        assert main.main(argv) == EXIT_OK
        assert read_json(out_dir, "report.json")["suite"] == "paper"

    def test_paper_suite_is_default(self, clean_env, out_dir):
        argv = ["verify", "--config", "2,2,5", "--seed", "1", "--only", "1", "--out", out_dir]
        assert main.main(argv) == EXIT_OK
        assert read_json(out_dir, "report.json")["suite"] == "paper"

    @pytest.mark.slow
    def test_reports_are_byte_identical(self, clean_env, tmp_path):
        texts = []
        for run in ("first", "second"):
            out = str(tmp_path / run)
            argv = ["verify", "--config", "2,2,5", "--seed", "1", "--suite", "quick", "--out", out]
            assert main.main(argv) == EXIT_OK
            with open(os.path.join(out, "report.json"), "rb") as f:
                texts.append(f.read())
        assert texts[0] == texts[1]

    def test_seed_from_environment(self, clean_env, qci_env, out_dir):
        argv = ["verify", "--config", "2,2,5", "--only", "1", "--out", out_dir]
        assert main.main(argv) == EXIT_OK
        assert read_json(out_dir, "report.json")["seed"] == 7


class TestModuleInfo:

    def test_jordan_type_at_point(self, clean_env, out_dir):
        argv = ["module-info", "--config", "2,2,5", "--module", "k", "--lambda", "1,2", "--seed", "1",
                "--out", out_dir]
        assert main.main(argv) == EXIT_OK
        data = read_json(out_dir, "module.json")
        assert data["dim"] == 1
        assert data["at"]["jordan_type"] == {"1": 1, "2": 0}
        assert len(data["members"]) == 6

    def test_module_from_file(self, clean_env, alg22, tmp_path, out_dir):
        path = tmp_path / "m.json"
        path.write_text(named_module(alg22, "AmodSoc").to_json())
        argv = ["module-info", "--config", "2,2,5", "--module", str(path), "--seed", "1", "--out", out_dir]
        assert main.main(argv) == EXIT_OK
        assert read_json(out_dir, "module.json")["dim"] == 3

    def test_bad_lambda(self, clean_env):
        argv = ["module-info", "--config", "2,2,5", "--lambda", "1,x", "--seed", "1"]
        assert main.main(argv) == EXIT_CONFIG

    def test_random_strategy_for_three_generators(self, clean_env, out_dir):
        argv = ["module-info", "--config", "2,3,5", "--module", "radA", "--seed", "1", "--out", out_dir]
        assert main.main(argv) == EXIT_OK
        assert read_json(out_dir, "module.json")["strategy"] == "random"
