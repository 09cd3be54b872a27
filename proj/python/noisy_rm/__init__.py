"""Reward machines with noisy symbol grounding."""

from ._core import (
    RewardMachine,
    RmError,
    RmParseError,
    RmValidationError,
    TrainConfig,
    final_return,
    gold,
    ibu_update,
    load_rm,
    load_rm_file,
    naive_update,
    run_belief_inference,
    run_experiments,
    train_run,
)

__all__ = [
    "RewardMachine",
    "RmError",
    "RmParseError",
    "RmValidationError",
    "TrainConfig",
    "final_return",
    "gold",
    "ibu_update",
    "load_rm",
    "load_rm_file",
    "naive_update",
    "run_belief_inference",
    "run_experiments",
    "train_run",
]
