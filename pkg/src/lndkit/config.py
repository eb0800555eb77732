"""Run-wide tunables: budgets, random seed, trial counts."""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_PAIR_BUDGET = 10**6
DEFAULT_DIM_BUDGET = 5000
DEFAULT_TRIALS = 32
SEED_ENV_VAR = "LND_SEED"


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        return 0


@dataclass
class RunConfig:
    """Configuration threaded through a session run; reports echo the seed."""

    seed: int = 0
    pair_budget: int = DEFAULT_PAIR_BUDGET
    dim_budget: int = DEFAULT_DIM_BUDGET
    trials: int = DEFAULT_TRIALS

    @classmethod
    def from_environment(cls) -> "RunConfig":
        return cls(seed=default_seed())
