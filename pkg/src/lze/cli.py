"""Command line front-end, run configuration and the line formats.

Subcommands::

    lze sim     run the training loop on the simulator, write metrics lines
    lze select  sidecar mode: read a rollout log, write one selection per step
    lze verify  run the numerical self-checks
    lze flops   evaluate the compute model
"""

from __future__ import annotations

import argparse
import contextlib
import dataclasses
import math
import os
import sys
from dataclasses import dataclass, field
from typing import IO, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import rng as rngmod
from .energy import energy_scores, ema_kernel_convolve, geometric_kernel_convolve
from .errors import (
    InvalidParams,
    LZEError,
    MalformedLine,
    OutOfOrderStep,
    ParseError,
    UnknownPromptBeforeInit,
    ValidationError,
)
from .flops import CostModel, baseline_flops, lze_coefficient, lze_flops, savings_ratio
from .pool import apply_rollout_result, initialize_pool
from .prune import PruneConfig, prune_candidates, update_streaks
from .select import select_top_k
from .sim import (
    BudgetEvent,
    InitEvent,
    PruneEvent,
    ReplayEvent,
    SampledGroup,
    SelectorParams,
    SimEnvConfig,
    StepEvent,
    Strategy,
    ToyPolicy,
    finite_difference_grad,
    grpo_step,
    taylor_check,
    train,
    variance_oracle,
)

SEED_ENV = "LZE_SEED"

EXIT_CODES = """\
exit codes:
  0  success
  1  a verify check failed
  2  bad command line usage
  3  a config value or numeric argument is out of range
  4  malformed config text or rollout-log line
  5  rollout-log steps out of order
  6  rollout log names a prompt before (or without) the init step
  7  pool state violation (prompt not active / not pruned)
  8  I/O error
  10 any other error
"""


# ---------------------------------------------------------------------------
# configuration


class Mode:
    SIM = "sim"
    LOG_DRIVEN = "select"
    VERIFY = "verify"
    FLOPS = "flops"


@dataclass(frozen=True)
class RunConfig:
    kappa: float = 0.4
    alpha: float = 0.3
    lam: float = 0.9
    n_rollouts: int = 8
    t_prune: int = 2
    rho: float = 0.25
    gumbel_scale: float = 1.0
    epochs: int = 50
    seed: int = 0
    mode: str = Mode.SIM
    strategy: str = "lze"
    steps_per_epoch: int = 1
    batch_size: int = 0
    prune: bool = True
    sim: SimEnvConfig = field(default_factory=SimEnvConfig)
    params: float = 1.0
    tokens_per_sample: float = 1.0
    input: str = "-"
    output: str = "-"

    def selector_params(self, **overrides) -> SelectorParams:
        kw = dict(
            kappa=self.kappa,
            alpha=self.alpha,
            lam=self.lam,
            gumbel_scale=self.gumbel_scale,
            t_prune=self.t_prune,
            rho=self.rho,
            epochs=self.epochs,
            steps_per_epoch=self.steps_per_epoch,
            batch_size=self.batch_size,
            prune=self.prune,
        )
        kw.update(overrides)
        return SelectorParams(**kw)

    def env(self) -> SimEnvConfig:
        return dataclasses.replace(self.sim, n_rollouts=self.n_rollouts, seed=self.seed)

    def cost_model(self) -> CostModel:
        return CostModel(params=self.params, tokens_per_sample=self.tokens_per_sample)


def _bool(s):
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _in(lo, hi, lo_open=False, hi_open=False):
    def check(v):
        ok = (v > lo if lo_open else v >= lo) and (v < hi if hi_open else v <= hi)
        lb = "(" if lo_open else "["
        rb = ")" if hi_open else "]"
        return ok, f"must lie in {lb}{lo}, {hi}{rb}"

    return check


def _at_least(lo):
    return lambda v: (v >= lo, f"must be >= {lo}")


def _positive(v):
    return v > 0, "must be > 0"


def _one_of(*choices):
    return lambda v: (v in choices, f"must be one of {', '.join(choices)}")


# key -> (target attribute, parser, check); sim.* keys land in SimEnvConfig
_KEYS = {
    "kappa": ("kappa", float, _in(0, 1, lo_open=True)),
    "alpha": ("alpha", float, _in(0, 1, hi_open=True)),
    "lambda": ("lam", float, _in(0, 1, lo_open=True, hi_open=True)),
    "n_rollouts": ("n_rollouts", int, _at_least(1)),
    "t_prune": ("t_prune", int, _at_least(1)),
    "rho": ("rho", float, _in(0, 1)),
    "gumbel_scale": ("gumbel_scale", float, _at_least(0)),
    "epochs": ("epochs", int, _at_least(0)),
    "seed": ("seed", int, _at_least(0)),
    "mode": ("mode", str, _one_of("sim", "select", "verify", "flops")),
    "strategy": ("strategy", str, _one_of("lze", "uniform", "full")),
    "steps_per_epoch": ("steps_per_epoch", int, _at_least(1)),
    "batch_size": ("batch_size", int, _at_least(0)),
    "prune": ("prune", _bool, lambda v: (True, "")),
    "params": ("params", float, _positive),
    "tokens_per_sample": ("tokens_per_sample", float, _positive),
    "input": ("input", str, lambda v: (bool(v), "must be non-empty")),
    "output": ("output", str, lambda v: (bool(v), "must be non-empty")),
    "num_prompts": ("sim.num_prompts", int, _at_least(1)),
    "answers_per_prompt": ("sim.answers_per_prompt", int, _at_least(2)),
    "difficulty_a": ("sim.difficulty_a", float, _positive),
    "difficulty_b": ("sim.difficulty_b", float, _positive),
    "p_min": ("sim.p_min", float, _in(0, 1)),
    "p_max": ("sim.p_max", float, _in(0, 1)),
    "logit_noise": ("sim.logit_noise", float, _at_least(0)),
    "learn_rate": ("sim.learn_rate", float, _at_least(0)),
    "clip_epsilon": ("sim.clip_epsilon", float, _positive),
    "inner_epochs": ("sim.inner_epochs", int, _at_least(1)),
}


def parse_config_text(text: str) -> Dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ParseError(f"config line {lineno}: unknown key {key!r}")
        out[key] = value
    return out


def load_config(source: str = "", overrides: Optional[Dict[str, str]] = None, env=None) -> RunConfig:
    """Build a validated RunConfig from config text plus overrides.

    Precedence, lowest first: built-in defaults, ``$LZE_SEED``, config text,
    ``overrides``.
    """
    env = os.environ if env is None else env
    raw = {}
    if env.get(SEED_ENV):
        raw["seed"] = env[SEED_ENV]
    raw.update(parse_config_text(source))
    for key, value in (overrides or {}).items():
        if key not in _KEYS:
            raise ParseError(f"unknown key {key!r}")
        raw[key] = value

    top, sim = {}, {}
    for key, text in raw.items():
        attr, conv, check = _KEYS[key]
        try:
            value = conv(text)
        except ValueError:
            raise ValidationError(key, f"cannot parse {text!r}") from None
        if isinstance(value, float) and not math.isfinite(value):
            raise ValidationError(key, "must be finite")
        ok, why = check(value)
        if not ok:
            raise ValidationError(key, f"{why}, got {text}")
        if attr.startswith("sim."):
            sim[attr[4:]] = value
        else:
            top[attr] = value
    if sim.get("p_min", SimEnvConfig.p_min) > sim.get("p_max", SimEnvConfig.p_max):
        raise ValidationError("p_max", "must be >= p_min")
    try:
        simcfg = SimEnvConfig(**sim)
    except InvalidParams as exc:
        raise ValidationError("sim", str(exc)) from None
    return RunConfig(sim=simcfg, **top)


# ---------------------------------------------------------------------------
# metrics lines


def fmt_float(x: float) -> str:
    return "%.17g" % x


_FLOATS = "floats"
_INTS = "ints"

METRICS_SCHEMA: Dict[str, List[Tuple[str, object]]] = {
    "Init": [("num_prompts", int), ("mean_pass_rate", float), ("mean_initial_estimate", float)],
    "Step": [
        ("step", int),
        ("epoch", int),
        ("active", int),
        ("pruned", int),
        ("selected", int),
        ("samples_optimized", int),
        ("mean_pass_rate", float),
    ],
    "Selection": [("step", int), ("ids", _INTS), ("energies", _FLOATS), ("perturbed", _FLOATS)],
    "Prune": [("epoch", int), ("ids", _INTS)],
    "Replay": [("epoch", int), ("sampled", _INTS), ("restored", _INTS)],
    "Budget": [
        ("inference_flops", float),
        ("optimization_flops", float),
        ("total", float),
        ("savings_vs_baseline", float),
        ("replay_flops", float),
        ("init_flops", float),
    ],
}


@dataclass(frozen=True)
class MetricsLine:
    kind: str
    fields: Dict[str, object]

    def __post_init__(self):
        if self.kind not in METRICS_SCHEMA:
            raise ParseError(f"unknown metrics kind {self.kind!r}")
        names = [n for n, _ in METRICS_SCHEMA[self.kind]]
        if list(self.fields) != names:
            raise ParseError(f"{self.kind} fields must be {names}, got {list(self.fields)}")


def _fmt_value(v, typ):
    if typ is int:
        return str(int(v))
    if typ is float:
        return fmt_float(v)
    if typ is _INTS:
        return ",".join(str(int(x)) for x in v)
    return ",".join(fmt_float(x) for x in v)


def _parse_value(s, typ):
    if typ is int:
        return int(s)
    if typ is float:
        return float(s)
    if typ is _INTS:
        return tuple(int(x) for x in s.split(",")) if s else ()
    return tuple(float(x) for x in s.split(",")) if s else ()


def format_metrics(line: MetricsLine) -> str:
    parts = [line.kind]
    for name, typ in METRICS_SCHEMA[line.kind]:
        parts.append(f"{name}={_fmt_value(line.fields[name], typ)}")
    return "\t".join(parts)


def parse_metrics(text: str) -> MetricsLine:
    parts = text.rstrip("\n").split("\t")
    kind = parts[0]
    if kind not in METRICS_SCHEMA:
        raise ParseError(f"unknown metrics kind {kind!r}")
    schema = METRICS_SCHEMA[kind]
    if len(parts) - 1 != len(schema):
        raise ParseError(f"{kind}: expected {len(schema)} fields, got {len(parts) - 1}")
    fields = {}
    for (name, typ), part in zip(schema, parts[1:]):
        key, sep, value = part.partition("=")
        if not sep or key != name:
            raise ParseError(f"{kind}: expected field {name!r}, got {part!r}")
        try:
            fields[name] = _parse_value(value, typ)
        except ValueError:
            raise ParseError(f"{kind}: bad value for {name}: {value!r}") from None
    return MetricsLine(kind, fields)


def _normalized(fields, kind):
    out = {}
    for name, typ in METRICS_SCHEMA[kind]:
        v = fields[name]
        if typ is int:
            v = int(v)
        elif typ is float:
            v = float(v)
        elif typ is _INTS:
            v = tuple(int(x) for x in v)
        else:
            v = tuple(float(x) for x in v)
        out[name] = v
    return out


def metrics_line(kind: str, **fields) -> MetricsLine:
    return MetricsLine(kind, _normalized(fields, kind))


def event_to_metrics(ev) -> List[MetricsLine]:
    if isinstance(ev, InitEvent):
        return [metrics_line("Init", **dataclasses.asdict(ev))]
    if isinstance(ev, ReplayEvent):
        return [metrics_line("Replay", epoch=ev.epoch, sampled=ev.sampled, restored=ev.restored)]
    if isinstance(ev, StepEvent):
        d = ev.decision
        ids = sorted(d.scores)
        return [
            metrics_line(
                "Step",
                step=ev.step,
                epoch=ev.epoch,
                active=ev.active,
                pruned=ev.pruned,
                selected=len(d.selected),
                samples_optimized=ev.samples_optimized,
                mean_pass_rate=ev.mean_pass_rate,
            ),
            metrics_line(
                "Selection",
                step=ev.step,
                ids=d.selected,
                energies=[d.scores[i][0] for i in d.selected],
                perturbed=[d.scores[i][1] for i in d.selected],
            ),
        ]
    if isinstance(ev, PruneEvent):
        return [metrics_line("Prune", epoch=ev.epoch, ids=ev.pruned)]
    if isinstance(ev, BudgetEvent):
        return [metrics_line("Budget", **ev.report)]
    raise TypeError(f"unexpected event {ev!r}")


# ---------------------------------------------------------------------------
# run modes


def run_sim(cfg: RunConfig, out: IO[str]) -> int:
    """Run the training loop and write metrics lines to ``out``."""
    for ev in train(cfg.env(), Strategy(cfg.strategy), cfg.selector_params(), cfg.cost_model()):
        for line in event_to_metrics(ev):
            out.write(format_metrics(line) + "\n")
    return 0


def parse_rollout_line(raw: str, lineno: int) -> Tuple[int, int, Tuple[int, ...]]:
    parts = raw.rstrip("\r\n").split("\t")
    if len(parts) != 3:
        raise MalformedLine(lineno, f"expected 3 tab-separated fields, got {len(parts)}")
    try:
        step, pid = int(parts[0]), int(parts[1])
    except ValueError:
        raise MalformedLine(lineno, "step and prompt_id must be integers") from None
    if step < 0 or pid < 0:
        raise MalformedLine(lineno, "step and prompt_id must be non-negative")
    tokens = parts[2].split(",")
    if not parts[2] or any(t not in ("0", "1") for t in tokens):
        raise MalformedLine(lineno, f"rewards must be comma-separated 0/1, got {parts[2]!r}")
    return step, pid, tuple(int(t) for t in tokens)


def format_selection(step: int, ids: Sequence[int], energies: Sequence[float]) -> str:
    return f"{step}\t{','.join(str(i) for i in ids)}\t{','.join(fmt_float(e) for e in energies)}"


def run_log_driven(cfg: RunConfig, lines: Iterable[str], out: IO[str], events: Optional[IO[str]] = None) -> int:
    """Sidecar selection over an external trainer's rollout log.

    Step 0 establishes the initial pass rates.  Each later step's selection is
    written once the step's lines are complete (on the first line of a later
    step, or at end of input), so output for step t only depends on lines
    with step <= t.  Pruning is advisory: candidates go to ``events`` and the
    prompts stay eligible.
    """
    prune_cfg = PruneConfig(cfg.t_prune, cfg.rho)
    state = None
    current = None
    pending: List[Tuple[int, int, Tuple[int, ...]]] = []
    processed = 0

    def flush():
        nonlocal state, processed
        if current == 0:
            init = {}
            for lineno, pid, rewards in pending:
                if pid in init:
                    raise MalformedLine(lineno, f"duplicate prompt {pid} in step 0")
                init[pid] = sum(rewards) / len(rewards)
            state = initialize_pool(init)
            return
        seen = {}
        for lineno, pid, rewards in pending:
            if pid not in state.records:
                raise UnknownPromptBeforeInit(f"line {lineno}: prompt {pid} was not in the init step")
            if pid in seen:
                raise MalformedLine(lineno, f"duplicate prompt {pid} in step {current}")
            seen[pid] = sum(rewards) / len(rewards)
        ids = sorted(seen)
        for pid in ids:
            apply_rollout_result(state, pid, seen[pid], cfg.lam)
        recs = [state.records[i] for i in ids]
        energy = energy_scores([r.d0 for r in recs], [seen[i] for i in ids], [r.momentum for r in recs], cfg.alpha)
        decision = select_top_k(
            list(zip(ids, energy.tolist())),
            cfg.kappa,
            cfg.gumbel_scale,
            rngmod.substream(cfg.seed, rngmod.SELECT, current),
            current,
        )
        out.write(format_selection(current, decision.selected, decision.energies()) + "\n")
        processed += 1
        if processed % cfg.steps_per_epoch == 0:
            update_streaks(state)
            if events is not None:
                cands = prune_candidates(state, prune_cfg)
                epoch = processed // cfg.steps_per_epoch
                events.write(format_metrics(metrics_line("Prune", epoch=epoch, ids=cands)) + "\n")

    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip() or raw.startswith("#"):
            continue
        step, pid, rewards = parse_rollout_line(raw, lineno)
        if current is None and step != 0:
            raise UnknownPromptBeforeInit(f"line {lineno}: the log must open with init step 0")
        if current is not None and step < current:
            raise OutOfOrderStep(f"line {lineno}: step {step} after step {current}")
        if current is not None and step > current:
            flush()
            pending = []
        current = step
        pending.append((lineno, pid, rewards))
    if current is not None:
        flush()
    return 0


# -- verify ------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: str
    tolerance: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}\t{self.name}\tmeasured={self.measured}\ttol={self.tolerance}"


def check_flops_identity() -> CheckResult:
    model = CostModel()
    coef = lze_coefficient(model, 0.4)
    saved = savings_ratio(model, 0.4)
    return CheckResult("flops_identity", coef == 6.4 and saved == 0.36, f"coef={coef!r},savings={saved:.2%}", "exact")


def check_duality(seed: int, num_sequences=100, length=200, lams=(0.5, 0.9, 0.99)) -> Tuple[CheckResult, str]:
    """Recurrent EMA (through the pool) vs explicit convolution, at every index."""
    g = rngmod.substream(seed, 101)
    worst = 0.0
    worst_geometric = 0.0
    for lam in lams:
        for _ in range(num_sequences):
            seq = g.random(length)
            state = initialize_pool({0: float(seq[0])})
            for t in range(length):
                if t > 0:
                    apply_rollout_result(state, 0, float(seq[t]), lam)
                conv = ema_kernel_convolve(seq[: t + 1], lam)
                worst = max(worst, abs(state.records[0].ema - conv))
                worst_geometric = max(worst_geometric, abs(state.records[0].ema - geometric_kernel_convolve(seq[: t + 1], lam)))
    res = CheckResult("ema_convolution_duality", worst <= 1e-12, f"{worst:.3e}", "1e-12")
    return res, f"INFO\tuntruncated_geometric_kernel_deviation\tmeasured={worst_geometric:.3e}"


def check_variance(seed: int, trials: int, ps=(0.1, 0.3, 0.5, 0.7, 0.9), ns=(4, 8), rel_tol=0.05) -> List[CheckResult]:
    results = []
    for n in ns:
        emp = {}
        for p in ps:
            e, pred = variance_oracle(p, n, trials, rngmod.substream(seed, 102, n, int(round(p * 1000))))
            emp[p] = e
            rel = abs(e - pred) / pred
            results.append(CheckResult(f"variance_law[p={p},n={n}]", rel <= rel_tol, f"rel_err={rel:.4f}", str(rel_tol)))
        peak = max(emp, key=emp.get)
        results.append(CheckResult(f"variance_peak[n={n}]", peak == 0.5, f"argmax_p={peak}", "p=0.5"))
    return results


def check_gradient_vanishing() -> CheckResult:
    policy = ToyPolicy(np.array([[0.3, -1.2, 0.7, 2.0], [1.0, 0.0, -0.5, 0.25]]), np.array([2, 0]))
    solved = SampledGroup(prompt=0, rewards=(1, 1, 1, 1), answers=(2, 2, 2, 2))
    failed = SampledGroup(prompt=1, rewards=(0, 0, 0, 0), answers=(1, 3, 2, 1))
    new = grpo_step(policy, [solved, failed], learn_rate=5.0, clip_epsilon=0.2)
    same = np.array_equal(new.logits, policy.logits) and new.logits.tobytes() == policy.logits.tobytes()
    return CheckResult("gradient_vanishing", same, "bit-identical" if same else "changed", "exact")


def check_taylor(seed: int, pairs: int = 100, answers: int = 16) -> List[CheckResult]:
    g = rngmod.substream(seed, 103)
    worst_fd = 0.0
    bound_ok = True
    for _ in range(pairs):
        policy = ToyPolicy(g.normal(0.0, 2.0, size=(1, answers)), g.integers(answers, size=1))
        analytic = policy.pass_rate_grad(0)
        fd = finite_difference_grad(policy, 0, h=1e-5)
        worst_fd = max(worst_fd, np.linalg.norm(analytic - fd) / max(np.linalg.norm(analytic), 1e-300))
        direction = g.normal(size=answers)
        delta = direction / np.linalg.norm(direction) * 10 ** g.uniform(-6, -3)
        bound_ok &= taylor_check(policy, 0, delta).holds
    return [
        CheckResult("softmax_grad_vs_central_diff", worst_fd <= 1e-6, f"{worst_fd:.3e}", "1e-6 relative"),
        CheckResult("taylor_momentum_bound", bool(bound_ok), f"{pairs} pairs", "|dp| <= |grad||delta| + C|delta|^2"),
    ]


def run_verify(cfg: RunConfig, out: IO[str], trials: int = 10**6) -> int:
    lines: List[CheckResult] = [check_flops_identity()]
    dual, info = check_duality(cfg.seed)
    lines.append(dual)
    lines.extend(check_variance(cfg.seed, trials))
    lines.append(check_gradient_vanishing())
    lines.extend(check_taylor(cfg.seed))
    for r in lines:
        out.write(r.line() + "\n")
    out.write(info + "\n")
    failed = sum(not r.passed for r in lines)
    out.write(f"SUMMARY\tchecks={len(lines)}\tfailed={failed}\n")
    return 1 if failed else 0


def run_flops(cfg: RunConfig, out: IO[str], epochs: float, dataset_size: int) -> int:
    model = cfg.cost_model()
    base = baseline_flops(model, epochs, dataset_size, cfg.n_rollouts)
    ours = lze_flops(model, cfg.kappa, epochs, dataset_size, cfg.n_rollouts)
    volume = base / model.c_total
    out.write(f"baseline  {base:.6e} FLOPs  (coefficient {model.c_total:g})\n")
    out.write(f"selected  {ours:.6e} FLOPs  (coefficient {lze_coefficient(model, cfg.kappa):g})\n")
    out.write(f"saved     {savings_ratio(model, cfg.kappa):.2%}\n")
    line = metrics_line(
        "Budget",
        inference_flops=model.c_infer * volume,
        optimization_flops=cfg.kappa * model.c_optim * volume,
        total=ours,
        savings_vs_baseline=savings_ratio(model, cfg.kappa),
        replay_flops=0.0,
        init_flops=0.0,
    )
    out.write(format_metrics(line) + "\n")
    return 0


# ---------------------------------------------------------------------------
# argument handling


def _kv(text: str) -> Tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    return key.strip(), value.strip()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lze",
        description="Learning-zone energy data selection: simulator, sidecar selector and checks.",
        epilog=EXIT_CODES + f"\nThe default seed can be overridden with ${SEED_ENV}.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--set", action="append", type=_kv, default=[], metavar="KEY=VALUE", help="override a config key")
        p.add_argument("--seed", type=str, help="shorthand for --set seed=...")

    p = sub.add_parser("sim", help="run the simulator and write metrics lines")
    common(p)
    p.add_argument("--out", help="metrics output path (default stdout)")

    p = sub.add_parser("select", help="sidecar selection over a rollout log")
    common(p)
    p.add_argument("--input", help="rollout log path, '-' for stdin")
    p.add_argument("--out", help="selection trace path (default stdout)")
    p.add_argument("--events", help="write advisory prune events here")

    p = sub.add_parser("verify", help="run the numerical self-checks")
    common(p)
    p.add_argument("--trials", type=int, default=10**6, help="Monte-Carlo trials per variance cell")

    p = sub.add_parser("flops", help="evaluate the compute model")
    common(p)
    p.add_argument("--epochs", type=float, required=True)
    p.add_argument("--dataset-size", type=int, required=True)
    return parser


@contextlib.contextmanager
def _open(path: Optional[str], mode: str, default):
    if path is None or path == "-":
        yield default
    else:
        with open(path, mode, encoding="utf-8", newline="\n") as fh:
            yield fh


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = ""
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        overrides = dict(args.set)
        if args.seed is not None:
            overrides["seed"] = args.seed
        overrides.setdefault("mode", args.command)
        cfg = load_config(text, overrides)

        if args.command == "sim":
            with _open(args.out or (cfg.output if cfg.output != "-" else None), "w", sys.stdout) as out:
                return run_sim(cfg, out)
        if args.command == "select":
            src = args.input or cfg.input
            with _open(src, "r", sys.stdin) as fin, _open(args.out, "w", sys.stdout) as out:
                if args.events:
                    with open(args.events, "w", encoding="utf-8", newline="\n") as ev:
                        return run_log_driven(cfg, fin, out, ev)
                return run_log_driven(cfg, fin, out)
        if args.command == "verify":
            return run_verify(cfg, sys.stdout, trials=args.trials)
        return run_flops(cfg, sys.stdout, args.epochs, args.dataset_size)
    except LZEError as exc:
        print(f"lze: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"lze: {exc}", file=sys.stderr)
        return 8


if __name__ == "__main__":
    sys.exit(main())
