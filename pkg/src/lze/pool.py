"""Per-prompt state and the active/prune partition.

Records are frozen; every mutation replaces the record held by the
``PoolState``.  That makes snapshots free (they share the frozen objects) and
keeps ``d0`` fixed after initialization without any extra guarding.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .errors import EmptyPool, InvalidDecay, InvalidProbability, NotActive, ParseError, UnknownPrompt

PromptId = int


class Pool(enum.Enum):
    ACTIVE = "active"
    PRUNED = "pruned"


@dataclass(frozen=True)
class PromptRecord:
    id: PromptId
    d0: float
    ema: float
    momentum: float = 0.0
    last_pass_rate: Optional[float] = None
    solved_streak: int = 0
    pool: Pool = Pool.ACTIVE


@dataclass
class PoolState:
    records: Dict[PromptId, PromptRecord]
    step: int = 0
    epoch: int = 0
    # Debug aid: full pass-rate history per prompt, starting at p^(0).
    history: Optional[Dict[PromptId, List[float]]] = None

    @property
    def active(self) -> Tuple[PromptId, ...]:
        return tuple(i for i in sorted(self.records) if self.records[i].pool is Pool.ACTIVE)

    @property
    def pruned(self) -> Tuple[PromptId, ...]:
        return tuple(i for i in sorted(self.records) if self.records[i].pool is Pool.PRUNED)

    def __len__(self):
        return len(self.records)

    def __getitem__(self, pid: PromptId) -> PromptRecord:
        try:
            return self.records[pid]
        except KeyError:
            raise UnknownPrompt(f"unknown prompt id {pid}") from None

    def replace(self, pid: PromptId, **changes) -> PromptRecord:
        rec = dataclasses.replace(self[pid], **changes)
        self.records[pid] = rec
        return rec


def check_probability(p: float, name: str = "pass rate") -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0):  # also rejects NaN
        raise InvalidProbability(f"{name} must lie in [0, 1], got {p!r}")
    return p


def initialize_pool(initial_pass_rates: Mapping[PromptId, float], keep_history: bool = False) -> PoolState:
    """Build the pool from the initialization pass.

    Every prompt starts Active with ``d0 = 1 - p0``, ``ema = p0`` and zero
    momentum.
    """
    if not initial_pass_rates:
        raise EmptyPool("initial pass-rate map is empty")
    records = {}
    for pid in sorted(initial_pass_rates):
        p0 = check_probability(initial_pass_rates[pid], f"initial pass rate of prompt {pid}")
        if int(pid) != pid or pid < 0:
            raise UnknownPrompt(f"prompt ids must be non-negative integers, got {pid!r}")
        records[int(pid)] = PromptRecord(id=int(pid), d0=1.0 - p0, ema=p0)
    history = {pid: [initial_pass_rates[pid]] for pid in records} if keep_history else None
    return PoolState(records=records, history=history)


def snapshot_active(state: PoolState) -> List[Tuple[PromptId, PromptRecord]]:
    return [(pid, state.records[pid]) for pid in state.active]


def apply_rollout_result(state: PoolState, pid: PromptId, pass_rate: float, lam: float) -> PromptRecord:
    """Advance one prompt's EMA with a fresh pass rate.

    Momentum is measured against the EMA *before* it advances.
    """
    rec = state[pid]
    if rec.pool is not Pool.ACTIVE:
        raise NotActive(f"prompt {pid} is pruned")
    p = check_probability(pass_rate)
    if not (0.0 < lam < 1.0):
        raise InvalidDecay(f"lambda must lie in (0, 1), got {lam!r}")
    momentum = p - rec.ema
    ema = lam * rec.ema + (1.0 - lam) * p
    # Guard the convex combination against one-ulp excursions.
    ema = min(1.0, max(0.0, ema))
    if state.history is not None:
        state.history[pid].append(p)
    return state.replace(pid, momentum=momentum, ema=ema, last_pass_rate=p)


# -- checkpoint format -------------------------------------------------------

_FIELDS = ("id", "d0", "ema", "momentum", "last_pass_rate", "solved_streak", "pool")


def _fmt(x: float) -> str:
    return "%.17g" % x


def dump_pool(state: PoolState) -> str:
    """Serialize to line-delimited text: a header then one record per line."""
    lines = [f"#pool\tstep={state.step}\tepoch={state.epoch}"]
    for pid in sorted(state.records):
        r = state.records[pid]
        last = "-" if r.last_pass_rate is None else _fmt(r.last_pass_rate)
        lines.append(
            "\t".join(
                [str(r.id), _fmt(r.d0), _fmt(r.ema), _fmt(r.momentum), last, str(r.solved_streak), r.pool.value]
            )
        )
    return "\n".join(lines) + "\n"


def load_pool(text: str | Iterable[str]) -> PoolState:
    lines = text.splitlines() if isinstance(text, str) else list(text)
    if not lines or not lines[0].startswith("#pool"):
        raise ParseError("missing '#pool' header line")
    header = dict(kv.split("=", 1) for kv in lines[0].rstrip("\n").split("\t")[1:])
    records = {}
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != len(_FIELDS):
            raise ParseError(f"line {lineno}: expected {len(_FIELDS)} fields, got {len(parts)}")
        try:
            rec = PromptRecord(
                id=int(parts[0]),
                d0=float(parts[1]),
                ema=float(parts[2]),
                momentum=float(parts[3]),
                last_pass_rate=None if parts[4] == "-" else float(parts[4]),
                solved_streak=int(parts[5]),
                pool=Pool(parts[6]),
            )
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        if not all(math.isfinite(v) for v in (rec.d0, rec.ema, rec.momentum)):
            raise ParseError(f"line {lineno}: non-finite value")
        records[rec.id] = rec
    if not records:
        raise EmptyPool("checkpoint holds no records")
    return PoolState(records=records, step=int(header.get("step", 0)), epoch=int(header.get("epoch", 0)))
