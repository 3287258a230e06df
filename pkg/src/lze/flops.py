"""Per-token compute model and a running FLOPs ledger.

Costs are expressed per parameter per token: 4 for inference (2 generation +
2 reward scoring) and 6 for optimization (2 forward + 4 backward).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidParams, InvalidRatio, InvalidTokenCount


@dataclass(frozen=True)
class CostModel:
    c_infer: float = 4.0
    c_optim: float = 6.0
    params: float = 1.0
    tokens_per_sample: float = 1.0

    def __post_init__(self):
        for name in ("c_infer", "c_optim", "params", "tokens_per_sample"):
            if not getattr(self, name) > 0:
                raise InvalidParams(f"{name} must be positive, got {getattr(self, name)!r}")

    @property
    def c_total(self) -> float:
        return self.c_infer + self.c_optim


def _check_kappa(kappa):
    if not (0.0 < kappa <= 1.0):
        raise InvalidRatio(f"kappa must lie in (0, 1], got {kappa!r}")


def _volume(model, epochs, dataset_size, n_rollout):
    for name, v in (("epochs", epochs), ("dataset_size", dataset_size), ("n_rollout", n_rollout)):
        if not v > 0:
            raise InvalidParams(f"{name} must be positive, got {v!r}")
    return epochs * dataset_size * n_rollout * model.params * model.tokens_per_sample


def baseline_flops(model: CostModel, epochs: float, dataset_size: int, n_rollout: int) -> float:
    """Full-data cost: every rollout is generated, scored and trained on."""
    return model.c_total * _volume(model, epochs, dataset_size, n_rollout)


def lze_flops(model: CostModel, kappa: float, epochs: float, dataset_size: int, n_rollout: int) -> float:
    """Cost with full rollout coverage but only a kappa fraction optimized."""
    _check_kappa(kappa)
    return lze_coefficient(model, kappa) * _volume(model, epochs, dataset_size, n_rollout)


def lze_coefficient(model: CostModel, kappa: float) -> float:
    _check_kappa(kappa)
    return model.c_infer + kappa * model.c_optim


def savings_ratio(model: CostModel, kappa: float) -> float:
    return 1.0 - lze_coefficient(model, kappa) / model.c_total


@dataclass
class FlopsLedger:
    """Running totals.  ``replay_flops`` is the part of ``inference_flops``
    spent on replay rollouts; ``init_flops`` covers the initialization pass and
    is kept out of both main accumulators."""

    inference_flops: float = 0.0
    optimization_flops: float = 0.0
    rollouts_generated: int = 0
    samples_optimized: int = 0
    replay_flops: float = 0.0
    init_flops: float = 0.0

    @property
    def total(self) -> float:
        return self.inference_flops + self.optimization_flops


# event kinds for ledger_record
ROLLOUT = "rollout"
OPTIMIZE = "optimize"
REPLAY = "replay"
INIT = "init"


def ledger_record(ledger: FlopsLedger, model: CostModel, event: str, tokens: float, count: int = 1) -> FlopsLedger:
    """Charge ``count`` identical events of ``tokens`` tokens each."""
    if not tokens > 0:
        raise InvalidTokenCount(f"token count must be positive, got {tokens!r}")
    if count < 0:
        raise InvalidTokenCount(f"event count must be non-negative, got {count!r}")
    if event == ROLLOUT or event == REPLAY:
        cost = model.c_infer * model.params * tokens * count
        ledger.inference_flops += cost
        ledger.rollouts_generated += count
        if event == REPLAY:
            ledger.replay_flops += cost
    elif event == OPTIMIZE:
        ledger.optimization_flops += model.c_optim * model.params * tokens * count
        ledger.samples_optimized += count
    elif event == INIT:
        ledger.init_flops += model.c_infer * model.params * tokens * count
    else:
        raise ValueError(f"unknown ledger event {event!r}")
    return ledger


def budget_report(ledger: FlopsLedger, baseline: float) -> dict:
    """Final budget summary; ``baseline`` is the full-data cost of the same run."""
    savings = 1.0 - ledger.total / baseline if baseline > 0 else 0.0
    return {
        "inference_flops": ledger.inference_flops,
        "optimization_flops": ledger.optimization_flops,
        "total": ledger.total,
        "savings_vs_baseline": savings,
        "replay_flops": ledger.replay_flops,
        "init_flops": ledger.init_flops,
    }
