"""Solvers for the three compared schemes.

* ``proportional`` - PASS whose radiation profile is adapted per drop,
* ``equal``        - PASS with couplers tuned to radiate 1/N of the power each,
* ``cas``          - fixed half-wavelength array at the region centre.

All three share the rate model and the closed-form power split.
"""

from __future__ import annotations

import math

import numpy as np

from .coupling import (
    CouplingParams,
    equal_power_spacings,
    radiation_profile,
    spacings_for_profile,
    uniform_profiles,
)
from .geometry import InvalidParameterError, Position3, SystemParams
from .optimizer import Solution, SolverOptions, _ao, _make_problem
from .rates import SemanticParams

SCHEMES = ("proportional", "equal", "cas")


def cas_positions(params: SystemParams) -> np.ndarray:
    n = params.antenna_count
    lam = params.wavelength
    return params.region_side / 2 + (np.arange(1, n + 1) - (n + 1) / 2) * lam / 2


def cas_solve(
    user_s: Position3,
    user_b: Position3,
    params: SystemParams,
    options: SolverOptions = SolverOptions(),
    semantic: SemanticParams = SemanticParams(),
) -> Solution:
    """Fixed array at (D/2, 0, d), uniform 1/sqrt(N) excitation, no guided phase."""
    n = params.antenna_count
    # CAS elements sit lambda/2 apart regardless of the PASS minimum spacing
    prob = _make_problem(user_s, user_b, params.replace(min_spacing=None), options, semantic, waveguide=False)
    betas = np.full(n, 1 / math.sqrt(n))
    ev = prob.evaluate(cas_positions(params), betas)
    return prob.solution(ev, iterations=0, history=[ev.rate_s], scheme="cas")


def equal_pass_solve(
    user_s: Position3,
    user_b: Position3,
    params: SystemParams,
    options: SolverOptions = SolverOptions(),
    semantic: SemanticParams = SemanticParams(),
    coupling: CouplingParams = CouplingParams(),
) -> Solution:
    spacings = equal_power_spacings(params.antenna_count, coupling)
    betas = radiation_profile(coupling.with_spacings(spacings)).betas
    prob = _make_problem(user_s, user_b, params, options, semantic)
    cur, it, hist = _ao(prob, betas)
    return prob.solution(cur, it, hist, scheme="equal", spacings=spacings)


def matched_profile(terms) -> np.ndarray:
    """Non-negative unit-norm amplitudes maximising |sum_n beta_n a_n|.

    For a common output phase u the best profile is beta proportional to
    max(0, Re(a_n conj(u))); the phase and the profile are refined
    alternately from every antenna's own phase and the best result is kept.
    """
    a = np.asarray(terms, dtype=complex)
    best, best_val = None, -1.0
    for start in range(len(a)):
        u = a[start] / abs(a[start])
        for _ in range(100):
            b = np.maximum(np.real(a * np.conj(u)), 0.0)
            b /= np.linalg.norm(b)
            g = a @ b
            u_new = g / abs(g)
            if abs(u_new - u) < 1e-15:
                break
            u = u_new
        val = abs(a @ b)
        if val > best_val + 1e-18:
            best, best_val = b, val
    return best


def _realise(betas, coupling: CouplingParams):
    spacings = spacings_for_profile(betas, coupling)
    return spacings, radiation_profile(coupling.with_spacings(spacings)).betas


def proportional_pass_solve(
    user_s: Position3,
    user_b: Position3,
    params: SystemParams,
    options: SolverOptions = SolverOptions(),
    semantic: SemanticParams = SemanticParams(),
    coupling: CouplingParams = CouplingParams(),
    profile: str = "matched",
    max_rounds: int = 5,
    equal_start: Solution | None = None,
) -> Solution:
    """PASS with a per-drop radiation profile.

    ``matched``: start from the equal-power solution (``equal_start`` when the
    caller already has it), then alternate between
    the amplitude profile matched to the semantic user's per-antenna channel
    (realised through coupler spacings) and a warm-started AO run.

    ``uniform``: every coupler shares one spacing S; S is picked on a 0.01 mm
    grid against the AO layout of a pilot spacing, then the AO is re-run.
    """
    if profile == "matched":
        return _matched_solve(user_s, user_b, params, options, semantic, coupling, max_rounds, equal_start)
    if profile == "uniform":
        return _uniform_solve(user_s, user_b, params, options, semantic, coupling)
    raise InvalidParameterError(f"unknown profile {profile!r}")


def _matched_solve(user_s, user_b, params, options, semantic, coupling, max_rounds, equal_start=None):
    prob = _make_problem(user_s, user_b, params, options, semantic)
    if equal_start is None:
        spacings = equal_power_spacings(params.antenna_count, coupling)
        betas = radiation_profile(coupling.with_spacings(spacings)).betas
        best, it_total, history = _ao(prob, betas)
    else:
        spacings = equal_start.spacings
        best = prob.evaluate(equal_start.antenna_xs, equal_start.betas)
        it_total, history = equal_start.iterations, list(equal_start.history)
    for _ in range(max_rounds):
        target = matched_profile(prob.link.terms(best.xs)[0])
        new_spacings, new_betas = _realise(target, coupling)
        cand, it, hist = _ao(prob, new_betas, initial_xs=best.xs)
        it_total += it
        if cand.key <= best.key:
            break
        best, spacings = cand, new_spacings
        history.extend(hist[1:] if hist and hist[0] <= history[-1] else hist)
    return prob.solution(best, it_total, history, scheme="proportional", spacings=spacings)


def _uniform_solve(user_s, user_b, params, options, semantic, coupling, grid_step=1e-5):
    n = params.antenna_count
    prob = _make_problem(user_s, user_b, params, options, semantic)
    grid = np.arange(0.0, coupling.decoupled_spacing + grid_step / 2, grid_step)
    profiles = uniform_profiles(grid, n, coupling)

    def best_spacing(xs):
        g = prob.link.terms(xs) @ profiles.T  # (2, G)
        return _best_row(g, prob)

    # pilot: the shared spacing with the largest coherent amplitude sum
    pilot = int(np.argmax(profiles.sum(axis=1)))
    first, it_total, history = _ao(prob, profiles[pilot])
    j = best_spacing(first.xs)
    best, best_j = first, pilot
    at_layout = prob.evaluate(first.xs, profiles[j])
    if at_layout.key > best.key:
        best, best_j = at_layout, j
    if j != pilot:
        cand, it, _ = _ao(prob, profiles[j], initial_xs=best.xs)
        it_total += it
        if cand.key > best.key:
            best, best_j = cand, j
    history.append(best.rate_s)
    s = float(grid[best_j])
    return prob.solution(best, it_total, history, scheme="proportional", spacings=(s,) * n)


def _best_row(g, prob):
    """Grid row with the largest semantic SNR among QoS-feasible rows.

    The semantic rate is increasing in p_S * |g_S|^2, so this is the argmax of
    the objective; ties go to the smallest spacing.
    """
    pm, nz = prob.params.max_power, prob.params.noise_power
    hs = np.abs(g[0]) ** 2
    hb = np.abs(g[1]) ** 2
    tau = prob.tau
    with np.errstate(divide="ignore", invalid="ignore"):
        bound = np.minimum((pm * hb - tau * nz) / (pm * hb * (1 + tau)), (pm * hs - tau * nz) / (pm * hs * (1 + tau)))
    p = np.minimum(np.nan_to_num(bound, nan=-1.0), prob.options.p_cap)
    score = np.where(p >= prob.options.p_floor, p * hs, -np.inf)
    if not np.isfinite(score).any():
        return int(np.argmax(np.nan_to_num(bound, nan=-np.inf)))
    return int(np.argmax(score))


def solve_schemes(schemes, user_s, user_b, params, options=SolverOptions(), semantic=SemanticParams(),
                  coupling: CouplingParams = CouplingParams(), profile: str = "matched") -> dict:
    """Solve several schemes on one drop, reusing the equal-power run as the
    proportional scheme's starting point."""
    out = {}
    if "equal" in schemes:
        out["equal"] = equal_pass_solve(user_s, user_b, params, options, semantic, coupling)
    for s in schemes:
        if s == "proportional":
            out[s] = proportional_pass_solve(user_s, user_b, params, options, semantic, coupling, profile,
                                             equal_start=out.get("equal") if profile == "matched" else None)
        elif s == "cas":
            out[s] = cas_solve(user_s, user_b, params, options, semantic)
        elif s != "equal":
            raise InvalidParameterError(f"unknown scheme {s!r}")
    return {s: out[s] for s in schemes}


def solve(scheme: str, user_s, user_b, params, options=SolverOptions(), semantic=SemanticParams(),
          coupling: CouplingParams = CouplingParams(), profile: str = "matched") -> Solution:
    if scheme == "proportional":
        return proportional_pass_solve(user_s, user_b, params, options, semantic, coupling, profile)
    if scheme == "equal":
        return equal_pass_solve(user_s, user_b, params, options, semantic, coupling)
    if scheme == "cas":
        return cas_solve(user_s, user_b, params, options, semantic)
    raise InvalidParameterError(f"unknown scheme {scheme!r}")
