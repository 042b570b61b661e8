"""Monte Carlo sweeps over user drops, aggregated into CSV records.

Randomness: trial ``t`` draws its users from
``PCG64(SeedSequence(seed, spawn_key=(t,)))``. The stream depends on the
trial index only, so every scheme and every sweep value sees the same drops
(paired comparisons) and results do not depend on execution order.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .benchmarks import solve_schemes
from .config import ExperimentConfig
from .geometry import InvalidParameterError, Position3
from .optimizer import Solution

CSV_HEADER = (
    "scheme",
    "sweep_var",
    "sweep_value",
    "trials",
    "feasible_trials",
    "mean_sem_se",
    "sem_se_stderr",
    "outage",
    "mean_bit_rate",
)


@dataclass(frozen=True)
class SweepRecord:
    scheme: str
    sweep_var: str
    sweep_value: object
    trials: int
    feasible_trials: int
    mean_sem_se: float
    sem_se_stderr: float
    outage: float
    mean_bit_rate: float


@dataclass
class TrialSet:
    """Raw per-trial outcomes of one scheme at one sweep value."""

    scheme: str
    sweep_value: object
    rate_s: np.ndarray
    rate_b: np.ndarray
    feasible: np.ndarray
    trial_index: np.ndarray

    def se_samples(self, count_infeasible_as_zero=False) -> np.ndarray:
        if count_infeasible_as_zero:
            return np.where(self.feasible, self.rate_s, 0.0)
        return self.rate_s[self.feasible]


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def sample_users(rng: np.random.Generator, side: float) -> tuple[Position3, Position3]:
    """Two users i.i.d. uniform on [0, D] x [-D/2, D/2] at ground level."""
    if not side > 0:
        raise InvalidParameterError("region side must be positive")
    xs, ys, xb, yb = rng.uniform(0.0, 1.0, size=4)
    return (
        Position3(xs * side, (ys - 0.5) * side, 0.0),
        Position3(xb * side, (yb - 0.5) * side, 0.0),
    )


def outage_stats(solutions) -> float:
    """Fraction of solutions with no feasible power split."""
    flags = [s.feasible if isinstance(s, Solution) else bool(s) for s in solutions]
    if not flags:
        raise InvalidParameterError("outage of an empty solution list")
    return 1.0 - sum(flags) / len(flags)


def distance_ratio(user_s: Position3, user_b: Position3) -> float:
    """|phi_S| / |phi_B|, distances measured from the coordinate origin."""
    den = math.hypot(user_b.x, user_b.y, user_b.z)
    return math.inf if den == 0 else math.hypot(user_s.x, user_s.y, user_s.z) / den


def _solve_all(cfg: ExperimentConfig, drops, params, options, semantic, coupling, label) -> list[TrialSet]:
    n = len(drops)
    schemes = cfg.schemes
    rs = {s: np.zeros(n) for s in schemes}
    rb = {s: np.zeros(n) for s in schemes}
    ok = {s: np.zeros(n, dtype=bool) for s in schemes}
    for i, (u_s, u_b) in enumerate(drops):
        sols = solve_schemes(schemes, u_s, u_b, params, options, semantic, coupling, cfg.profile)
        for s, sol in sols.items():
            rs[s][i], rb[s][i], ok[s][i] = sol.rate_s, sol.rate_b, sol.feasible
    return [TrialSet(s, label, rs[s], rb[s], ok[s], np.arange(n)) for s in schemes]


def simulate(cfg: ExperimentConfig, progress=None) -> list[TrialSet]:
    """Solve every (sweep value, scheme, trial) and return raw outcomes."""
    cfg.validate()
    drops = [sample_users(trial_rng(cfg.seed, t), cfg.region_side) for t in range(int(cfg.trials))]
    semantic = cfg.semantic_params()
    coupling = cfg.coupling_params()
    out = []

    if cfg.sweep_var == "distance_ratio_bucket":
        ratios = np.array([distance_ratio(s, b) for s, b in drops])
        edges = np.asarray(cfg.grid)
        if edges[0] > edges[-1]:
            edges = edges[::-1]
        bucket = np.searchsorted(edges, ratios, side="right") - 1
        bucket[ratios == edges[-1]] = len(edges) - 2
        params, options = cfg.system_params(), cfg.solver_options()
        for full in _solve_all(cfg, drops, params, options, semantic, coupling, None):
            scheme = full.scheme
            for k in range(len(edges) - 1):
                sel = bucket == k
                centre = 0.5 * (edges[k] + edges[k + 1])
                out.append(TrialSet(scheme, centre, full.rate_s[sel], full.rate_b[sel],
                                    full.feasible[sel], full.trial_index[sel]))
            if progress:
                progress(scheme, None)
        return out

    for value in cfg.grid:
        params, options = cfg.system_params(), cfg.solver_options()
        if cfg.sweep_var == "P_max_dBm":
            params = cfg.system_params(p_max_dbm=value)
        elif cfg.sweep_var == "R_B_min":
            options = cfg.solver_options(min_bit_rate=value)
        elif cfg.sweep_var == "phase_precision_pair":
            options = cfg.solver_options(delta_s=value[0], delta_b=value[1])
        out.extend(_solve_all(cfg, drops, params, options, semantic, coupling, value))
        if progress:
            progress(cfg.sweep_var, value)
    return out


def aggregate(cfg: ExperimentConfig, trial_sets) -> list[SweepRecord]:
    recs = []
    for ts in trial_sets:
        n = len(ts.feasible)
        n_ok = int(ts.feasible.sum())
        se = ts.se_samples(cfg.count_infeasible_as_zero)
        if cfg.count_infeasible_as_zero:
            bits = np.where(ts.feasible, ts.rate_b, 0.0)
        else:
            bits = ts.rate_b[ts.feasible]
        mean = float(np.mean(se)) if len(se) else math.nan
        err = float(np.std(se, ddof=1) / math.sqrt(len(se))) if len(se) > 1 else 0.0
        recs.append(
            SweepRecord(
                scheme=ts.scheme,
                sweep_var=cfg.sweep_var,
                sweep_value=ts.sweep_value,
                trials=n,
                feasible_trials=n_ok,
                mean_sem_se=mean,
                sem_se_stderr=err,
                outage=(n - n_ok) / n if n else math.nan,
                mean_bit_rate=float(np.mean(bits)) if len(bits) else math.nan,
            )
        )
    return recs


def format_value(v) -> str:
    if isinstance(v, tuple):
        return "/".join(format_value(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([format_value(getattr(r, name)) for name in CSV_HEADER])
    return buf.getvalue()


def write_csv(records, path) -> Path:
    path = Path(path)
    try:
        if path.parent != Path(""):
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(records_to_csv(records))
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {path}: {exc}") from exc
    return path


def run_sweep(cfg: ExperimentConfig, progress=None) -> list[SweepRecord]:
    """Simulate, aggregate and (when ``cfg.output`` is set) write the CSV."""
    records = aggregate(cfg, simulate(cfg, progress))
    if cfg.output:
        write_csv(records, cfg.output)
    return records
