import pytest

from nec2dqn.core.exceptions import ConfigError
from nec2dqn.db.repositories.configs import config_repository
from nec2dqn.schemas.config import RunConfig


def test_parse_text_skips_comments_and_blank_lines():
    text = "# experiment\nagent = nstep_dqn\n\nn_step = 5  # shorter\n"
    assert config_repository.parse_text(text) == {"agent": "nstep_dqn", "n_step": "5"}


def test_parse_text_reports_the_line():
    with pytest.raises(ConfigError) as info:
        config_repository.parse_text("agent = nec\nbroken line\n")
    assert info.value.field == "line 2"


def test_overrides_beat_the_file_which_beats_the_base(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("env = chain\nn_step = 5\n", encoding="utf-8")
    config = config_repository.load(path, ["n_step=7"], base={"env": "gridworld", "gamma": 0.5})
    assert (config.env, config.n_step, config.gamma) == ("chain", 7, 0.5)


def test_unknown_key_is_rejected():
    with pytest.raises(ConfigError) as info:
        config_repository.load(overrides=["nstep=3"])
    assert info.value.field == "nstep"


def test_invalid_value_names_the_field():
    with pytest.raises(ConfigError) as info:
        config_repository.load(overrides=["gamma=1.5"])
    assert info.value.field == "gamma"


def test_inconsistent_conv_lists_are_rejected():
    with pytest.raises(ConfigError):
        config_repository.load(overrides=["conv_channels=8,8", "conv_kernels=3"])


def test_missing_file_is_a_config_error(tmp_path):
    with pytest.raises(ConfigError) as info:
        config_repository.load(tmp_path / "absent.cfg")
    assert info.value.field == "config"


def test_rendered_config_parses_back_to_the_same_values():
    config = RunConfig(agent="nec", env="chain", conv_channels=[8, 16], eps_inside_sqrt=True, learning_rate=3e-4)
    text = config_repository.render(config)
    assert config_repository.build(config_repository.parse_text(text)) == config


def test_render_notes_reference_values():
    text = config_repository.render(RunConfig())
    assert "dqn_hidden = 128  # reference: 512" in text.splitlines()


def test_write_resolved(tmp_path):
    path = tmp_path / "config.resolved"
    config_repository.write_resolved(path, RunConfig(seed=3))
    assert "seed = 3" in path.read_text(encoding="utf-8").splitlines()
