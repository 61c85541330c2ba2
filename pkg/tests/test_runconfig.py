import pytest
import json
import os
import sys
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from errors import BadCommutationMatrix, ConfigError, NotPrime
from runconfig import RunConfig, load_algebra_config


class TestFromEnv:

    def test_defaults(self, clean_env):
        cfg = RunConfig.from_env()
        assert cfg.seed is None
        assert cfg.radius == 4
        assert cfg.iso_trials == 32
        assert cfg.cache_dir is None

    def test_environment(self, clean_env, qci_env):
        cfg = RunConfig.from_env()
        assert cfg.seed == 7
        assert cfg.radius == 3
        assert cfg.iso_trials == 12

    def test_flags_override_environment(self, clean_env, qci_env):
        cfg = RunConfig.from_env(seed=11, radius=None)
        assert cfg.seed == 11
        assert cfg.radius == 3

    def test_bad_integer(self, clean_env, monkeypatch):
        monkeypatch.setenv("QCI_RADIUS", "four")
        with pytest.raises(ConfigError):
            RunConfig.from_env()


class TestValidate:

    def test_seed_required(self):
        with pytest.raises(ConfigError):
            RunConfig(algebra="2,2").validate()
        assert RunConfig(algebra="2,2").validate(need_seed=False)

    def test_positive_budgets(self):
        with pytest.raises(ConfigError):
            RunConfig(seed=1, radius=0).validate()

    def test_format(self):
        with pytest.raises(ConfigError):
            RunConfig(seed=1, fmt="svg").validate()

    def test_missing_algebra(self):
        with pytest.raises(ConfigError):
            RunConfig(seed=1).algebra_config()


class TestLoadAlgebraConfig:

    def test_shorthand_with_prime(self):
        config = load_algebra_config("2,2,5")
        assert config.p == 5
        assert config.q(0, 1) == 4

    def test_shorthand_default_prime(self):
        config = load_algebra_config("3,2")
        assert config.p == 103
        assert config.exponents == (3, 3)

    def test_inline_json(self):
        config = load_algebra_config('{"p": 7, "c": 2, "a": 3}')
        assert config.q(0, 1) == 2

    def test_json_without_prime(self):
        assert load_algebra_config('{"c": 2, "a": 2}').p == 101

    def test_file(self, tmp_path):
        path = tmp_path / "alg.json"
        path.write_text(json.dumps({"p": 5, "c": 2, "exponents": [2, 2], "commutation": [[1, 4], [4, 1]]}))
        assert load_algebra_config(str(path)).q(1, 0) == 4

    def test_rejections(self):
        with pytest.raises(ConfigError):
            load_algebra_config("two,two")
        with pytest.raises(ConfigError):
            load_algebra_config("2")
        with pytest.raises(ConfigError):
            load_algebra_config("{not json")
        with pytest.raises(NotPrime):
            load_algebra_config("2,2,6")
        with pytest.raises(BadCommutationMatrix):
            load_algebra_config('{"p": 5, "c": 2, "exponents": [2, 2], "commutation": [[1, 2], [2, 1]]}')
