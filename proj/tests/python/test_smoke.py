import csv
import json
import math
import os
from pathlib import Path

import pytest

import noisy_rm
from noisy_rm import gold

DATA = Path(os.environ.get("NOISY_RM_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def test_gold_machine_steps():
    rm = gold.reward_machine()
    assert rm.aps == ["gold", "home"]
    assert rm.state_names == ["u0", "u1", "u2"]
    assert rm.step("u0", ["gold"]) == (1, 0.0)
    assert rm.step("u1", ["home"]) == (2, 1.0)
    assert rm.step(0, 0) == (0, 0.0)
    assert rm.is_terminal("u2")
    with pytest.raises(ValueError):
        rm.step("u2", [])
    with pytest.raises(KeyError):
        rm.step("u0", ["silver"])


def test_shipped_files_and_round_trip():
    rm = noisy_rm.load_rm_file(str(DATA / "gold.rm"))
    again = noisy_rm.load_rm(rm.to_text())
    assert again.state_names == rm.state_names
    traffic = noisy_rm.load_rm_file(str(DATA / "traffic.rm"))
    assert len(traffic) == 5
    with pytest.raises(noisy_rm.RmValidationError, match=r"on \{home\}"):
        noisy_rm.load_rm_file(str(DATA / "broken.rm"))
    with pytest.raises(noisy_rm.RmParseError):
        noisy_rm.load_rm("states: u0\n")


def test_ibu_update_on_a_pyrite_cell():
    rm = gold.reward_machine()
    b = [1.0, 0.0, 0.0]
    p_gold = gold.gold_belief(1, 2)
    assert p_gold == pytest.approx(0.3)
    m = [1.0 - p_gold, p_gold, 0.0, 0.0]  # indexed by bitmask over (gold, home)
    b = noisy_rm.ibu_update(rm, b, m)
    assert b == pytest.approx([0.7, 0.3, 0.0])
    assert math.fsum(b) == pytest.approx(1.0)
    assert noisy_rm.naive_update(rm, "u0", ["gold"]) == 1


def test_environment_episode():
    env = gold.Env(horizon=3)
    assert env.reset() == (0, 3)
    pos, reward, truncated = env.step(gold.Action.DOWN)
    assert pos == (0, 2) and reward == pytest.approx(-0.02) and not truncated
    env.step(gold.Action.DIG)
    _, _, truncated = env.step(gold.Action.UP)
    assert truncated


def test_short_training_run_is_reproducible():
    cfg = noisy_rm.TrainConfig()
    cfg.total_steps = 20000
    cfg.eval_every = 2000
    cfg.seed = 3
    a = noisy_rm.train_run("oracle", cfg)
    b = noisy_rm.train_run("oracle", cfg)
    assert a == b
    assert [p[0] for p in a] == list(range(2000, 20001, 2000))
    assert noisy_rm.final_return(a, 2) <= 0.82 + 1e-12
    with pytest.raises(ValueError):
        noisy_rm.train_run("ppo", cfg)


def test_run_experiments_writes_csvs(tmp_path):
    cfg = {"env": "gold", "methods": ["tdm"], "seeds": [0, 1], "total_steps": 1000, "eval_every": 500,
           "out_dir": str(tmp_path)}
    files = noisy_rm.run_experiments(json.dumps(cfg))
    assert sorted(p.name for p in files) == ["gold_tdm_seed0.csv", "gold_tdm_seed1.csv"]
    with open(files[0]) as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["step", "return", "return_discounted"]
    assert len(rows) == 3
    assert (tmp_path / "manifest.json").exists()
    with pytest.raises(ValueError):
        noisy_rm.run_experiments(json.dumps({"env": "nosuch", "methods": ["tdm"], "seeds": [0]}))


def test_belief_inference_exact_filter_is_certain():
    out = noisy_rm.run_belief_inference(gold.reward_machine(), "gold", ["naive", "ibu", "tdm", "exact"],
                                        seed=0, episodes=20)
    assert out["state_names"] == ["u0", "u1", "u2"]
    assert out["mean_loglik"]["exact"] == 0.0
    assert all(v <= 0.0 for v in out["mean_loglik"].values())
    for t, method, belief, loglik in out["rows"]:
        assert t >= 1 and len(belief) == 3
        assert math.fsum(belief) == pytest.approx(1.0)
