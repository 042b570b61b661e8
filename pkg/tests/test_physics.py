"""Physical invariants, all as property tests; meant to run in a few seconds."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from conftest import ground_point
from pinchsem.coupling import CouplingParams, equal_power_spacings, radiation_profile
from pinchsem.geometry import (
    Position3,
    SystemParams,
    effective_gain,
    free_space_channel,
    term_phase,
    wavelengths,
)
from pinchsem.rates import SemanticParams, dbm_to_watt, semantic_rate, semantic_similarity

P = SystemParams()
LAM, LAM_G, ETA = wavelengths(P)
CP = CouplingParams()


@given(st.lists(st.floats(0.0, 0.03, allow_nan=False), min_size=1, max_size=10),
       st.floats(0.1, 1.0), st.floats(50.0, 600.0))
def test_coupling_conservation(spacings, omega_mm, decay):
    cp = CouplingParams(omega0=omega_mm * 1e3, decay=decay).with_spacings(spacings)
    prof = radiation_profile(cp)
    assert abs(prof.radiated_power + prof.residual - 1.0) <= 1e-12


@given(st.integers(1, 10), st.floats(0.32, 1.0))
def test_equal_power_round_trip(n, omega_mm):
    cp = CouplingParams(omega0=omega_mm * 1e3)
    betas = radiation_profile(cp.with_spacings(equal_power_spacings(n, cp))).betas
    assert np.max(np.abs(betas - 1 / math.sqrt(n))) <= 1e-8


@given(ground_point(), st.floats(0.0, 20.0), st.floats(0.5, 10.0), st.floats(1e9, 1e11))
def test_channel_magnitude_law(user, x, height, freq):
    lam = 299_792_458.0 / freq
    eta = lam**2 / (16 * math.pi**2)
    r = math.sqrt((user.x - x) ** 2 + user.y**2 + height**2)
    h = free_space_channel(user, Position3(x, 0.0, height), lam)
    assert abs(abs(h) - math.sqrt(eta) / r) <= 1e-12 * math.sqrt(eta) / r


def _aligned_next(user, x_prev, ref_phase):
    """Smallest x >= x_prev + lambda/2 whose summand phase equals ref_phase."""

    def gap(x):
        return math.remainder(term_phase(user, P.antenna(x), P.feed_point, LAM, LAM_G) - ref_phase, 2 * math.pi)

    # net phase slope is at least 2*pi*(n_eff - 1)/lambda, so 6 lambda spans a full turn
    grid = np.linspace(x_prev + LAM / 2, x_prev + LAM / 2 + 6 * LAM, 1200)
    vals = [gap(x) for x in grid]
    for a, b, va, vb in zip(grid, grid[1:], vals, vals[1:]):
        if va == 0.0:
            return a
        if va * vb < 0 and abs(va - vb) < math.pi:
            return brentq(gap, a, b, xtol=1e-16, rtol=1e-15)
    raise AssertionError("no aligned position found")


@settings(max_examples=40)
@given(ground_point(), st.floats(0.0, 18.0), st.lists(st.floats(0.05, 1.0), min_size=2, max_size=5))
def test_triangle_equality_when_aligned(user, x1, betas):
    xs = [x1]
    ref = term_phase(user, P.antenna(x1), P.feed_point, LAM, LAM_G)
    for _ in betas[1:]:
        xs.append(_aligned_next(user, xs[-1], ref))
    ants = [P.antenna(x) for x in xs]
    g = effective_gain(user, ants, betas, P)
    total = sum(abs(free_space_channel(user, a, LAM)) * b for a, b in zip(ants, betas))
    assert abs(abs(g) - total) <= 1e-9 * total


def test_similarity_at_zero_snr():
    eps0 = semantic_similarity(0.0, SemanticParams(snr_scale="linear"))
    assert abs(eps0 - 0.5605) <= 1e-4


@given(st.floats(0.0, 0.5), st.floats(1e-12, 1.0), st.floats(-40.0, 80.0), st.sampled_from(["db", "linear"]))
def test_semantic_rate_cap(p, g, pdbm, scale):
    r = semantic_rate(p, dbm_to_watt(pdbm), g, 1e-12, SemanticParams(snr_scale=scale))
    assert r <= 0.196 + 1e-15
