from nec2dqn.core.presets import COMPARE_PRESETS, SWEEP_PRESETS
from nec2dqn.main import build_parser, main

TINY = [
    "--set", "env=chain", "--set", "chain_states=3", "--set", "frame_stack=1",
    "--set", "nec_embedding=4", "--set", "encoder_hidden=8", "--set", "dqn_hidden=8",
    "--set", "p_neighbors=3", "--set", "batch_size=4", "--set", "replay_start_size=4",
    "--set", "total_steps=20", "--set", "eval_period=10", "--set", "eval_episodes=1",
]


def test_invalid_override_exits_with_usage_error(tmp_path, capsys):
    assert main(["run", "--output-root", str(tmp_path), "--set", "gamma=2"]) == 2
    assert "usage error: gamma:" in capsys.readouterr().err


def test_unknown_key_exits_with_usage_error(tmp_path, capsys):
    assert main(["run", "--output-root", str(tmp_path), "--set", "frames=2"]) == 2
    assert "usage error: frames:" in capsys.readouterr().err


def test_run_command(tmp_path, capsys):
    assert main(["run", "--output-root", str(tmp_path), *TINY]) == 0
    assert "eval mean" in capsys.readouterr().out
    assert (tmp_path / "nec2dqn-chain" / "seed-0" / "metrics.csv").exists()


def test_run_command_reads_a_config_file(tmp_path):
    path = tmp_path / "tabular.cfg"
    path.write_text("agent = tabular\nenv = chain\ntotal_steps = 10\neval_period = 5\n", encoding="utf-8")
    assert main(["run", "--config", str(path), "--output-root", str(tmp_path)]) == 0
    assert (tmp_path / "tabular-chain" / "seed-0" / "config.resolved").exists()


def test_compare_with_a_single_agent_is_a_usage_error(tmp_path):
    assert main(["compare", "--agents", "nec2dqn", "--seeds", "1", "--output-root", str(tmp_path), *TINY]) == 2


def test_compare_command(tmp_path, capsys):
    code = main([
        "compare", "--agents", "nec,nstep_dqn", "--seeds", "1", "--threshold", "0.5",
        "--name", "tiny", "--output-root", str(tmp_path), *TINY
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert "nec-chain" in out and "nstep_dqn-chain" in out
    assert (tmp_path / "tiny" / "summary.csv").exists()


def test_sweep_command(tmp_path, capsys):
    code = main([
        "sweep", "--capacities", "8,16", "--seeds", "1", "--name", "tiny",
        "--output-root", str(tmp_path), *TINY
    ])
    assert code == 0
    assert "capacity 8 final" in capsys.readouterr().out
    assert (tmp_path / "tiny" / "snapshots.csv").exists()


def test_compare_accepts_the_fig3_preset(tmp_path):
    code = main([
        "compare", "--preset", "fig3", "--agents", "nec,nstep_dqn", "--seeds", "1",
        "--threshold", "0.5", "--output-root", str(tmp_path), *TINY
    ])
    assert code == 0
    assert (tmp_path / "fig3" / "summary.csv").exists()


def test_sweep_accepts_the_fig45_preset(tmp_path):
    code = main([
        "sweep", "--preset", "fig45", "--capacities", "8,16", "--seeds", "1",
        "--output-root", str(tmp_path), *TINY
    ])
    assert code == 0
    assert (tmp_path / "fig45" / "snapshots.csv").exists()


def test_preset_aliases_share_settings():
    assert COMPARE_PRESETS["speed"] is COMPARE_PRESETS["fig3"]
    assert SWEEP_PRESETS["buffer"] is SWEEP_PRESETS["fig45"]
    args = build_parser().parse_args(["compare"])
    assert args.preset == "fig3"
    args = build_parser().parse_args(["sweep"])
    assert args.preset == "fig45"
