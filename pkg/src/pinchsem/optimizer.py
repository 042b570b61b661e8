"""Alternating optimization of power split and pinching-antenna positions.

One AO iteration runs three blocks against a fixed radiation profile:

1. closed-form power split for the current layout,
2. large-scale placement: bisection of the array centre between the users'
   midpoint and the semantic user, stopping at the bit-user QoS boundary,
3. fine-scale phase alignment: per-antenna moves on a grid of step
   ``fine_step`` that project the layout onto the phase-precision sets.

Iterates are accepted only if they improve the objective, so the recorded
objective history is non-decreasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coupling import CouplingParams, radiation_profile
from .geometry import InvalidParameterError, Link, Position3, SystemParams, wrap_distance
from .rates import SemanticParams, bit_rate, semantic_rate, sic_rate

SPACING_SLACK = 1e-12  # m, float slack on the minimum-spacing test


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class SolverOptions:
    min_bit_rate: float = 0.5
    delta_s: float = 0.02
    delta_b: float = 0.02
    fine_step: float | None = None  # lambda/10 when None
    ao_tolerance: float = 1e-6
    max_ao_iterations: int = 50
    bisection_tolerance: float = 1e-6
    p_cap: float = 0.5
    p_floor: float = 1e-9
    phase_convention: str = "signal"
    max_align_passes: int = 10

    def __post_init__(self):
        if self.min_bit_rate < 0:
            raise InvalidParameterError("R_B_min must be >= 0")
        if not (self.delta_s > 0 and self.delta_b > 0):
            raise InvalidParameterError("phase precisions must be positive")
        if not (0 < self.p_cap <= 0.5):
            raise InvalidParameterError("p_cap must lie in (0, 0.5]")
        if self.max_ao_iterations < 1:
            raise InvalidParameterError("need at least one AO iteration")
        if self.phase_convention not in ("signal", "printed"):
            raise InvalidParameterError(f"unknown phase convention {self.phase_convention!r}")

    def step_for(self, params: SystemParams) -> float:
        step = params.wavelength / 10 if self.fine_step is None else self.fine_step
        if not (0 < step < params.min_spacing):
            raise InvalidParameterError(f"fine step {step} must lie in (0, min_spacing)")
        return step


@dataclass
class Solution:
    antenna_xs: np.ndarray
    p_s: float
    rate_s: float
    rate_b: float
    rate_sic: float
    feasible: bool
    iterations: int = 0
    betas: np.ndarray = field(default_factory=lambda: np.zeros(0))
    spacings: tuple = ()
    history: list = field(default_factory=list)
    scheme: str = ""

    def summary(self) -> str:
        xs = ", ".join(f"{x:.6f}" for x in self.antenna_xs)
        bs = ", ".join(f"{b:.6f}" for b in self.betas)
        lines = [
            f"scheme: {self.scheme}",
            f"feasible: {self.feasible}",
            f"antenna_xs_m: [{xs}]",
            f"betas: [{bs}]",
            f"p_s: {self.p_s:.9f}",
            f"semantic_se_suts: {self.rate_s:.9f}",
            f"bit_rate_bps: {self.rate_b:.9f}",
            f"sic_rate_bps: {self.rate_sic:.9f}",
            f"iterations: {self.iterations}",
        ]
        return "\n".join(lines)


def power_bounds(g_s, g_b, p_max, noise, min_bit_rate):
    """Upper bounds on p_S from the bit-user QoS and from SIC decodability."""
    tau = 2.0**min_bit_rate - 1.0
    out = []
    for g in (g_b, g_s):
        h = p_max * abs(g) ** 2
        out.append(-math.inf if h == 0 else (h - tau * noise) / (h * (1.0 + tau)))
    return out[0], out[1]


def optimal_power_split(g_s, g_b, p_max, noise, min_bit_rate, p_cap=0.5, p_floor=1e-9):
    """Closed-form semantic power fraction, or None when no split is feasible.

    The semantic rate grows with p_S, so the optimum sits on the tightest of
    the QoS bound, the SIC bound and the decoding-order cap.
    """
    bound_b, bound_sic = power_bounds(g_s, g_b, p_max, noise, min_bit_rate)
    p = max(0.0, min(bound_b, bound_sic, p_cap))
    if p < p_floor:
        return None
    return p


@dataclass
class _Eval:
    xs: np.ndarray
    betas: np.ndarray
    g_s: complex
    g_b: complex
    p: float | None
    rate_s: float
    key: tuple


class _Problem:
    """Everything a single solve needs, with constants cached."""

    def __init__(self, user_s, user_b, params, options, semantic, waveguide=True):
        self.params = params
        self.options = options
        self.semantic = semantic
        self.link = Link(user_s, user_b, params, waveguide, options.phase_convention)
        self.user_s, self.user_b = user_s, user_b
        self.n = params.antenna_count
        self.spacing = params.min_spacing
        self.side = params.region_side
        self.half = (self.n - 1) * self.spacing / 2
        if 2 * self.half > self.side:
            raise ConfigurationError(
                f"{self.n} antennas at spacing {self.spacing:.4g} m do not fit in {self.side} m"
            )
        self.tau = 2.0**options.min_bit_rate - 1.0

    # -- layouts ---------------------------------------------------------
    def clip_center(self, c):
        return min(max(c, self.half), self.side - self.half)

    def layout(self, c):
        xs = (c - self.half) + self.spacing * np.arange(self.n)
        return np.clip(xs, 0.0, self.side)

    # -- rates -----------------------------------------------------------
    def split(self, g_s, g_b):
        o = self.options
        p = self.params
        return optimal_power_split(g_s, g_b, p.max_power, p.noise_power, o.min_bit_rate, o.p_cap, o.p_floor)

    def qos_ok(self, g_s, g_b, p):
        """Both rate constraints at a fixed power split (vectorised)."""
        pm, nz, rmin = self.params.max_power, self.params.noise_power, self.options.min_bit_rate
        return (bit_rate(p, pm, g_b, nz) >= rmin - 1e-12) & (sic_rate(p, pm, g_s, nz) >= rmin - 1e-12)

    def rate_s(self, p, g_s):
        return semantic_rate(p, self.params.max_power, g_s, self.params.noise_power, self.semantic)

    def evaluate(self, xs, betas) -> _Eval:
        g_s, g_b = self.link.gains(xs, betas)
        p = self.split(g_s, g_b)
        if p is None:
            bound = min(power_bounds(g_s, g_b, self.params.max_power, self.params.noise_power,
                                     self.options.min_bit_rate))
            return _Eval(np.array(xs), np.array(betas), g_s, g_b, None, 0.0, (0, bound))
        r = float(self.rate_s(p, g_s))
        return _Eval(np.array(xs), np.array(betas), g_s, g_b, p, r, (1, r))

    def feasible_at(self, xs, betas, p):
        g_s, g_b = self.link.gains(xs, betas)
        if p is None:
            return self.split(g_s, g_b) is not None
        return bool(self.qos_ok(g_s, g_b, p))

    def solution(self, ev: _Eval, iterations=0, history=None, scheme="", spacings=()) -> Solution:
        pm, nz = self.params.max_power, self.params.noise_power
        p = 0.0 if ev.p is None else ev.p
        return Solution(
            antenna_xs=ev.xs.copy(),
            p_s=p,
            rate_s=float(self.rate_s(p, ev.g_s)),
            rate_b=bit_rate(p, pm, ev.g_b, nz),
            rate_sic=sic_rate(p, pm, ev.g_s, nz),
            feasible=ev.p is not None,
            iterations=iterations,
            betas=ev.betas.copy(),
            spacings=tuple(spacings),
            history=list(history or []),
            scheme=scheme,
        )


def _make_problem(user_s, user_b, params, options, semantic, waveguide=True):
    return _Problem(user_s, user_b, params, options, semantic, waveguide)


def _place(prob: _Problem, betas, p):
    """Large-scale placement on a prepared problem; returns (xs, feasible)."""
    tol = prob.options.bisection_tolerance
    c0 = prob.clip_center(0.5 * (prob.user_s.x + prob.user_b.x))
    c_s = prob.clip_center(prob.user_s.x)
    c_b = prob.clip_center(prob.user_b.x)

    def ok(c):
        return prob.feasible_at(prob.layout(c), betas, p)

    def bisect(good, bad):
        while abs(bad - good) > tol:
            mid = 0.5 * (good + bad)
            if ok(mid):
                good = mid
            else:
                bad = mid
        return good

    if ok(c0):
        if ok(c_s):
            return prob.layout(c_s), True
        return prob.layout(bisect(c0, c_s)), True

    # c0 fails: retreat toward the user whose constraint is violated
    g_s, g_b = prob.link.gains(prob.layout(c0), betas)
    pm, nz, rmin = prob.params.max_power, prob.params.noise_power, prob.options.min_bit_rate
    if p is None:
        bound_b, bound_sic = power_bounds(g_s, g_b, pm, nz, rmin)
        toward_s = bound_sic < bound_b
    else:
        toward_s = bit_rate(p, pm, g_b, nz) >= rmin and sic_rate(p, pm, g_s, nz) < rmin
    target = c_s if toward_s else c_b
    if not ok(target):
        return prob.layout(target), False
    return prob.layout(bisect(target, c0)), True


def large_scale_placement(
    user_s: Position3,
    user_b: Position3,
    params: SystemParams,
    options: SolverOptions = SolverOptions(),
    betas=None,
    p_s: float | None = None,
    semantic: SemanticParams = SemanticParams(),
):
    """Bisect the array centre toward the semantic user up to the QoS boundary.

    Returns ``(antenna_xs, feasible)``. ``p_s`` is the power split held fixed
    during the search; with None, feasibility means some split exists.
    """
    if betas is None:
        betas = np.full(params.antenna_count, 1 / math.sqrt(params.antenna_count))
    prob = _make_problem(user_s, user_b, params, options, semantic)
    return _place(prob, np.asarray(betas, float), p_s)


def _violation(phases, delta, active):
    """Summed excess of wrapped phase offsets (relative to the first active antenna)."""
    idx = np.flatnonzero(active)
    if len(idx) < 2:
        return np.zeros(phases.shape[:-1])
    ref = phases[..., idx[:1]]
    d = wrap_distance(phases[..., idx[1:]], ref)
    return np.maximum(d - delta, 0.0).sum(axis=-1)


def _align(prob: _Problem, xs, betas, p):
    o = prob.options
    n = prob.n
    xs = np.array(xs, dtype=float)
    if n == 1:
        return xs
    step = o.step_for(prob.params)
    m = math.ceil(prob.link.lam_g / (2 * step))
    ks = np.arange(-m, m + 1)
    offsets = ks * step
    active = betas > 1e-9
    link = prob.link
    terms = link.terms(xs)  # (2, N)
    phases = link.phases(xs)
    g = terms @ betas
    start_rate = prob.rate_s(p, g[0]) if p is not None else abs(g[0])

    anchor = int(np.argmax(active)) if active.any() else 0
    for _ in range(o.max_align_passes):
        moved = False
        for i in range(n):
            if not active[i] or i == anchor:
                continue
            cand = xs[i] + offsets
            lo = xs[i - 1] + prob.spacing - SPACING_SLACK if i > 0 else 0.0
            hi = xs[i + 1] - prob.spacing + SPACING_SLACK if i < n - 1 else prob.side
            valid = (cand >= max(lo, 0.0)) & (cand <= min(hi, prob.side))
            new_terms = link.terms(cand[:, None])[..., 0]  # (K, 2)
            gk = g[None, :] + (new_terms - terms[:, i]) * betas[i]
            if p is not None:
                valid &= prob.qos_ok(gk[:, 0], gk[:, 1], p)
            valid[m] = True  # staying put is always allowed
            ph = np.repeat(phases[None], len(ks), axis=0)
            ph[:, :, i] = link.phases(cand[:, None])[..., 0]
            v_s = _violation(ph[:, 0, :], o.delta_s, active)
            v_b = _violation(ph[:, 1, :], o.delta_b, active)
            # lexicographic: S precision, B precision, smallest move, leftmost
            order = np.lexsort((ks, np.abs(ks), v_b, v_s))
            best = next(j for j in order if valid[j])
            if best != m:
                xs[i] = cand[best]
                terms[:, i] = new_terms[best]
                phases[:, i] = ph[best, :, i]
                g = gk[best]
                moved = True
        if not moved:
            break

    end_rate = prob.rate_s(p, g[0]) if p is not None else abs(g[0])
    return xs if end_rate >= start_rate else None


def phase_align(
    antenna_xs,
    user_s: Position3,
    user_b: Position3,
    params: SystemParams,
    options: SolverOptions = SolverOptions(),
    betas=None,
    p_s: float | None = None,
    semantic: SemanticParams = SemanticParams(),
):
    """Fine-scale projection of ``antenna_xs`` onto the phase-precision sets.

    Moves that break the minimum spacing, leave [0, D] or violate the bit-user
    QoS at ``p_s`` are rejected; a refined layout that lowers the semantic rate
    is discarded in favour of the input.
    """
    if betas is None:
        betas = np.full(params.antenna_count, 1 / math.sqrt(params.antenna_count))
    prob = _make_problem(user_s, user_b, params, options, semantic)
    out = _align(prob, antenna_xs, np.asarray(betas, float), p_s)
    return np.array(antenna_xs, dtype=float) if out is None else out


def _ao_from(prob: _Problem, betas, start: _Eval, p_first):
    o = prob.options
    cur = start
    history = [cur.rate_s]
    iterations = 0
    p = p_first
    for iterations in range(1, o.max_ao_iterations + 1):
        xs, _ = _place(prob, betas, p)
        p_here = p if prob.feasible_at(xs, betas, p) else None
        aligned = _align(prob, xs, betas, p_here)
        if aligned is not None:
            xs = aligned
        cand = prob.evaluate(xs, betas)
        if cand.key <= cur.key:
            break
        gain = cand.rate_s - cur.rate_s if cand.key[0] == cur.key[0] == 1 else math.inf
        cur = cand
        history.append(cur.rate_s)
        p = cur.p
        if gain < o.ao_tolerance:
            break
    return cur, iterations, history


def _ao(prob: _Problem, betas, initial_xs=None):
    """AO from the midpoint layout (or ``initial_xs``).

    Two starts are run: the first placement uses either the split optimal at
    the start layout or the decoding-order cap; the better end point wins.
    The cap start escapes layouts where the bit user sits in an array null.
    """
    xs0 = prob.layout(prob.clip_center(0.5 * (prob.user_s.x + prob.user_b.x)))
    start = prob.evaluate(xs0 if initial_xs is None else initial_xs, betas)
    best = None
    total = 0
    for p_first in (start.p, prob.options.p_cap):
        run = _ao_from(prob, betas, start, p_first)
        total += run[1]
        if best is None or run[0].key > best[0].key:
            best = run
        if start.p == prob.options.p_cap:
            break
    return best[0], total, best[2]


def alternating_optimize(
    user_s: Position3,
    user_b: Position3,
    params: SystemParams,
    coupling: CouplingParams | None = None,
    options: SolverOptions = SolverOptions(),
    semantic: SemanticParams = SemanticParams(),
    *,
    betas=None,
    initial_xs=None,
) -> Solution:
    """Solve for antenna positions and power split with a fixed profile.

    The profile comes from ``coupling`` (cascaded model) unless ``betas`` is
    given explicitly.
    """
    spacings = ()
    if betas is None:
        if coupling is None or len(coupling.spacings) != params.antenna_count:
            raise InvalidParameterError("need coupling spacings for every antenna, or explicit betas")
        betas = radiation_profile(coupling).betas
        spacings = coupling.spacings
    betas = np.asarray(betas, dtype=float)
    if betas.shape != (params.antenna_count,):
        raise InvalidParameterError("betas must have one entry per antenna")
    prob = _make_problem(user_s, user_b, params, options, semantic)
    cur, iterations, history = _ao(prob, betas, initial_xs)
    return prob.solution(cur, iterations, history, spacings=spacings)


def check_solution(sol: Solution, user_s, user_b, params, options, semantic=SemanticParams(),
                   waveguide=True) -> list[str]:
    """Independently recheck every constraint of a solution; returns violations."""
    from .geometry import effective_gain

    bad = []
    xs = np.asarray(sol.antenna_xs)
    if np.any(np.diff(xs) < params.min_spacing - SPACING_SLACK):
        bad.append("spacing")
    if np.any(xs < 0) or np.any(xs > params.region_side):
        bad.append("box")
    if not (0 < sol.p_s <= 0.5):
        bad.append("decoding order")
    if waveguide:
        ants = [params.antenna(x) for x in xs]
        g_s = effective_gain(user_s, ants, sol.betas, params)
        g_b = effective_gain(user_b, ants, sol.betas, params)
    else:
        link = Link(user_s, user_b, params, waveguide=False)
        g_s, g_b = link.gains(xs, sol.betas)
    pm, nz = params.max_power, params.noise_power
    if bit_rate(sol.p_s, pm, g_b, nz) < options.min_bit_rate - 1e-9:
        bad.append("bit QoS")
    if sic_rate(sol.p_s, pm, g_s, nz) < options.min_bit_rate - 1e-9:
        bad.append("SIC")
    if abs(semantic_rate(sol.p_s, pm, g_s, nz, semantic) - sol.rate_s) > 1e-12:
        bad.append("objective mismatch")
    return bad
