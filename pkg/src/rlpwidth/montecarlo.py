"""Seeded Monte Carlo estimates of the normalized random-LP objective."""
from __future__ import annotations

import csv
import enum
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import rng
from .errors import ParameterError
from .lp import LpInstance, LpStatus, solve_lp
from .theory import AtomsRhs, ConstantRhs, GaussianRhs, RhsModel, VectorRhs

MAX_ENTRIES = 10**8
NON_OPTIMAL_WARN_FRACTION = 0.10
CSV_COLUMNS = ("trial", "seed", "m", "n", "alpha", "status", "objective_magnitude")


class CMode(str, enum.Enum):
    FIXED_AXIS = "fixed"
    RANDOM_SPHERE = "sphere"


@dataclass(frozen=True)
class TrialConfig:
    alpha: float
    n: int = 50
    rhs: RhsModel = field(default_factory=ConstantRhs)
    trials: int = 200
    master_seed: int = 0
    c_mode: CMode = CMode.FIXED_AXIS

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ParameterError(f"alpha must be positive, got {self.alpha!r}")
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n!r}")
        if int(self.trials) != self.trials or self.trials < 2:
            raise ParameterError(f"trials must be an integer >= 2, got {self.trials!r}")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ParameterError("master_seed must fit in an unsigned 64-bit integer")
        object.__setattr__(self, "c_mode", CMode(self.c_mode))
        if self.m < 1:
            raise ParameterError(f"round(alpha * n) must be >= 1, got {self.m}")
        if isinstance(self.rhs, VectorRhs) and self.rhs.m != self.m:
            raise ParameterError(f"vector rhs has {self.rhs.m} entries but round(alpha*n) = {self.m}")

    @property
    def m(self) -> int:
        return int(round(self.alpha * self.n))

    def as_dict(self) -> dict:
        rhs = self.rhs
        if isinstance(rhs, VectorRhs):
            rhs_desc = {"kind": "vector", "m": rhs.m, "n": rhs.n}
        elif isinstance(rhs, GaussianRhs):
            rhs_desc = {"kind": "gaussian", "mean": rhs.mean, "std": rhs.std}
        elif isinstance(rhs, AtomsRhs):
            rhs_desc = {"kind": "atoms", "values": list(rhs.values), "probs": list(rhs.probs)}
        else:
            rhs_desc = {"kind": "constant", "value": rhs.value}
        return {"alpha": self.alpha, "n": self.n, "m": self.m, "trials": self.trials,
                "master_seed": int(self.master_seed), "c_mode": self.c_mode.value, "rhs": rhs_desc}


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    seed: int
    status: LpStatus
    magnitude: float
    iterations: int = 0


@dataclass
class McEstimate:
    config: TrialConfig
    outcomes: list
    values: np.ndarray
    mean: float
    stderr: float
    std: float
    unbounded_count: int
    infeasible_count: int
    failure_count: int
    warnings: list

    @property
    def mean_width(self) -> float:
        return 2.0 * self.mean

    def as_dict(self) -> dict:
        def num(x):
            return None if math.isnan(x) else x

        return {
            "config": self.config.as_dict(),
            "mean": num(self.mean),
            "stderr": num(self.stderr),
            "std": num(self.std),
            "mean_width": num(self.mean_width),
            "values": [float(v) for v in self.values],
            "unbounded_count": self.unbounded_count,
            "infeasible_count": self.infeasible_count,
            "failure_count": self.failure_count,
            "warnings": list(self.warnings),
            "seeds": [o.seed for o in self.outcomes],
        }


def materialize_rhs(rhs: RhsModel, m: int, master_seed: int, trial: int) -> np.ndarray:
    if isinstance(rhs, ConstantRhs):
        return np.full(m, rhs.value)
    if isinstance(rhs, VectorRhs):
        return np.array(rhs.values)
    if isinstance(rhs, GaussianRhs):
        return rhs.mean + rhs.std * rng.gaussian_stream(master_seed, trial, m, rng.STREAM_RHS)
    if isinstance(rhs, AtomsRhs):
        u = rng.uniform_stream(master_seed, trial, m, rng.STREAM_RHS)
        cdf = np.cumsum(rhs.probs)
        idx = np.minimum(np.searchsorted(cdf, u, side="left"), len(cdf) - 1)
        return np.asarray(rhs.values)[idx]
    raise ParameterError(f"unsupported rhs model {rhs!r}")


def objective_vector(c_mode: CMode, n: int, master_seed: int, trial: int) -> np.ndarray:
    if CMode(c_mode) is CMode.FIXED_AXIS:
        c = np.zeros(n)
        c[0] = math.sqrt(n)
        return c
    g = rng.gaussian_stream(master_seed, trial, n, rng.STREAM_OBJECTIVE)
    return math.sqrt(n) * g / np.linalg.norm(g)


def build_instance(cfg: TrialConfig, trial: int) -> LpInstance:
    m, n = cfg.m, cfg.n
    A = rng.gaussian_stream(cfg.master_seed, trial, m * n, rng.STREAM_MATRIX).reshape(m, n)
    a = materialize_rhs(cfg.rhs, m, cfg.master_seed, trial)
    c = objective_vector(cfg.c_mode, n, cfg.master_seed, trial)
    return LpInstance(A, a, c)


def run_trial(cfg: TrialConfig, trial: int) -> TrialOutcome:
    inst = build_instance(cfg, trial)
    sol = solve_lp(inst)
    seed = rng.child_seed(cfg.master_seed, trial, rng.STREAM_MATRIX)
    if not sol.optimal:
        return TrialOutcome(trial, seed, sol.status, math.nan, sol.iterations)
    if inst.a.min() >= 0 and sol.objective > 1e-9:
        # the origin is feasible, so a positive optimum means the solver lied
        return TrialOutcome(trial, seed, LpStatus.NUMERICAL_FAILURE, math.nan, sol.iterations)
    return TrialOutcome(trial, seed, sol.status, abs(sol.objective) / math.sqrt(cfg.n), sol.iterations)


def aggregate(cfg: TrialConfig, outcomes: list) -> McEstimate:
    outcomes = sorted(outcomes, key=lambda o: o.trial)
    values = np.array([o.magnitude for o in outcomes if o.status is LpStatus.OPTIMAL])
    counts = {s: sum(o.status is s for o in outcomes) for s in LpStatus}
    warnings = []
    non_opt = cfg.trials - len(values)
    if non_opt > NON_OPTIMAL_WARN_FRACTION * cfg.trials:
        warnings.append(f"{non_opt} of {cfg.trials} trials were not optimal "
                        f"(unbounded={counts[LpStatus.UNBOUNDED]}, infeasible={counts[LpStatus.INFEASIBLE]}, "
                        f"numerical={counts[LpStatus.NUMERICAL_FAILURE]})")
    if len(values):
        mean = math.fsum(values) / len(values)
    else:
        mean = math.nan
    if len(values) >= 2:
        std = math.sqrt(math.fsum((values - mean) ** 2) / (len(values) - 1))
        stderr = std / math.sqrt(len(values))
    else:
        std = stderr = math.nan
        warnings.append("fewer than two optimal trials; no standard error")
    return McEstimate(cfg, outcomes, values, mean, stderr, std,
                      counts[LpStatus.UNBOUNDED], counts[LpStatus.INFEASIBLE],
                      counts[LpStatus.NUMERICAL_FAILURE], warnings)


def run_trials(cfg: TrialConfig, workers: int = 1, order=None) -> McEstimate:
    """Run every trial of ``cfg``; the estimate is independent of ``workers`` and ``order``."""
    if cfg.m * cfg.n > MAX_ENTRIES:
        raise ParameterError(f"m*n = {cfg.m * cfg.n} exceeds the memory guard of {MAX_ENTRIES} entries")
    indices = list(range(cfg.trials)) if order is None else list(order)
    if sorted(indices) != list(range(cfg.trials)):
        raise ParameterError("order must be a permutation of the trial indices")
    if workers <= 1:
        outcomes = [run_trial(cfg, t) for t in indices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda t: run_trial(cfg, t), indices))
    return aggregate(cfg, outcomes)


@dataclass(frozen=True)
class ConcentrationReport:
    n_small: int
    n_large: int
    std_small: float
    std_large: float
    mean_small: float
    mean_large: float

    @property
    def concentrates(self) -> bool:
        return self.std_large < self.std_small

    def as_dict(self) -> dict:
        return dict(asdict(self), concentrates=self.concentrates)


def concentration_report(cfg_small: TrialConfig, cfg_large: TrialConfig, workers: int = 1) -> ConcentrationReport:
    if cfg_small.n > cfg_large.n:
        raise ParameterError("cfg_small.n must not exceed cfg_large.n")
    if (cfg_small.alpha, cfg_small.rhs, cfg_small.trials) != (cfg_large.alpha, cfg_large.rhs, cfg_large.trials):
        raise ParameterError("configs must share alpha, rhs and trial count")
    small = run_trials(cfg_small, workers)
    large = run_trials(cfg_large, workers)
    return ConcentrationReport(cfg_small.n, cfg_large.n, small.std, large.std, small.mean, large.mean)


def trials_csv(est: McEstimate) -> str:
    cfg = est.config
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for o in est.outcomes:
        mag = "" if math.isnan(o.magnitude) else format(o.magnitude, ".17g")
        writer.writerow([o.trial, o.seed, cfg.m, cfg.n, format(float(cfg.alpha), ".17g"), o.status.value, mag])
    return buf.getvalue()
