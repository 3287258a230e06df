"""Backward selection: Gumbel-perturbed Top-K over energy scores."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple

import numpy as np

from .errors import InvalidRatio, InvalidInputs
from .pool import PromptId

# Keeps -log(-log(u)) finite: u is clamped into [TINY, 1 - EPS/2].
_U_LO = np.finfo(np.float64).tiny
_U_HI = 1.0 - np.finfo(np.float64).epsneg


@dataclass(frozen=True)
class SelectionDecision:
    step: int
    selected: Tuple[PromptId, ...]  # ascending ids
    scores: Dict[PromptId, Tuple[float, float]] = field(default_factory=dict)  # id -> (energy, perturbed)
    k_requested: int = 0
    kappa: float = 1.0

    def energies(self) -> Tuple[float, ...]:
        return tuple(self.scores[i][0] for i in self.selected)


def floor_fraction(ratio: float, size: int) -> int:
    """``floor(ratio * size)`` without float artefacts such as 0.29*100 = 28.99..."""
    return int(math.floor(ratio * size + 1e-9))


def top_k_size(kappa: float, size: int) -> int:
    if not (0.0 < kappa <= 1.0):
        raise InvalidRatio(f"kappa must lie in (0, 1], got {kappa!r}")
    if size == 0:
        return 0
    return min(size, max(1, floor_fraction(kappa, size)))


def gumbel_from_uniform(u):
    u = np.clip(u, _U_LO, _U_HI)
    return -np.log(-np.log(u))


def gumbel_sample(rng: np.random.Generator) -> float:
    """One standard Gumbel(0, 1) draw via inverse CDF."""
    return float(gumbel_from_uniform(rng.random()))


def gumbel_noise(rng: np.random.Generator, size: int) -> np.ndarray:
    return gumbel_from_uniform(rng.random(size))


def rank_top_k(ids: np.ndarray, scores: np.ndarray, k: int) -> np.ndarray:
    """Indices of the k largest scores; ties go to the smaller id."""
    order = np.lexsort((ids, -scores))
    return order[:k]


def select_top_k(
    snapshot: Sequence[Tuple[PromptId, float]],
    kappa: float,
    gumbel_scale: float,
    rng: np.random.Generator,
    step: int = 0,
) -> SelectionDecision:
    """Pick ``max(1, floor(kappa * |snapshot|))`` prompts by perturbed energy.

    Noise is drawn in ascending id order, so the decision does not depend on
    the order of ``snapshot``.  ``gumbel_scale == 0`` draws nothing and ranks
    raw energies.
    """
    if gumbel_scale < 0 or not math.isfinite(gumbel_scale):
        raise InvalidInputs(f"gumbel_scale must be finite and >= 0, got {gumbel_scale!r}")
    k = top_k_size(kappa, len(snapshot))
    if not snapshot:
        return SelectionDecision(step=step, selected=(), scores={}, k_requested=0, kappa=kappa)
    items = sorted(snapshot, key=lambda it: it[0])
    ids = np.fromiter((i for i, _ in items), dtype=np.int64, count=len(items))
    energy = np.fromiter((e for _, e in items), dtype=np.float64, count=len(items))
    if gumbel_scale > 0:
        perturbed = energy + gumbel_scale * gumbel_noise(rng, len(items))
    else:
        perturbed = energy.copy()
    chosen = rank_top_k(ids, perturbed, k)
    selected = tuple(sorted(int(i) for i in ids[chosen]))
    scores = {int(i): (float(e), float(q)) for i, e, q in zip(ids, energy, perturbed)}
    return SelectionDecision(step=step, selected=selected, scores=scores, k_requested=k, kappa=kappa)
