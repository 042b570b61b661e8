import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pinchsem.coupling import (
    CouplingParams,
    InfeasibleProfileError,
    coupling_coefficient,
    equal_power_spacings,
    invert_beta,
    radiation_profile,
    spacings_for_profile,
    uniform_profiles,
)
from pinchsem.geometry import InvalidParameterError

CP = CouplingParams()
OMEGA0, XI, L = 330.0, 246.15, 5e-3


def closed_form_spacing(target, upstream, omega0=OMEGA0, xi=XI, length=L):
    return -math.log(math.asin(target / upstream) / (omega0 * length)) / xi


def test_coefficient_examples():
    assert coupling_coefficient(0.0, CP) == pytest.approx(OMEGA0)
    assert coupling_coefficient(1 / XI, CP) == pytest.approx(OMEGA0 / math.e, rel=1e-12)
    assert coupling_coefficient(0.2, CP) < 1e-15
    with pytest.raises(InvalidParameterError):
        coupling_coefficient(-1e-3, CP)


def test_single_antenna_modes_agree():
    p = CP.with_spacings([1e-3])
    expect = math.sin(OMEGA0 * math.exp(-XI * 1e-3) * L)
    for mode in ("cascaded", "literal"):
        assert radiation_profile(p, mode).betas[0] == pytest.approx(expect, rel=1e-12)


@pytest.mark.parametrize("s", [0.0, 0.5e-3, 2e-3, 10e-3])
def test_equal_spacings_modes_agree(s):
    p = CP.with_spacings([s] * 4)
    a = radiation_profile(p, "cascaded").betas
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        b = radiation_profile(p, "literal").betas
    np.testing.assert_allclose(a, b, rtol=1e-13)


def test_cascaded_three_stage_equal_power():
    # stage fractions sin^2 = 1/3, 1/2, 1 radiate a third each
    s = [closed_form_spacing(math.sqrt(f), 1.0) for f in (1 / 3, 1 / 2, 1.0)]
    prof = radiation_profile(CP.with_spacings(s))
    np.testing.assert_allclose(prof.betas, 1 / math.sqrt(3), atol=1e-12)
    assert prof.residual == pytest.approx(0.0, abs=1e-12)


def test_literal_overshoot_flagged():
    # unequal spacings whose literal powers sum above one
    # full radiation at the first pinch, then sin*cos = 1/2 at the second
    p = CP.with_spacings([CP.peak_spacing, closed_form_spacing(math.sin(math.pi / 4), 1.0)])
    with pytest.warns(RuntimeWarning):
        prof = radiation_profile(p, "literal")
    assert not prof.conserves and prof.radiated_power > 1


def test_uniform_profiles_rows():
    grid = np.array([0.0, 1e-3, 4e-3])
    rows = uniform_profiles(grid, 3, CP)
    for s, row in zip(grid, rows):
        np.testing.assert_allclose(row, radiation_profile(CP.with_spacings([s] * 3)).betas, rtol=1e-13)


def test_invert_examples():
    assert invert_beta(0.0, 1.0, CP) == CP.decoupled_spacing
    weak = CouplingParams(omega0=200.0)  # Omega_0 l = 1 rad < pi/2
    assert invert_beta(math.sin(1.0), 1.0, weak) == pytest.approx(0.0, abs=1e-12)
    s = invert_beta(1 / math.sqrt(3), 1.0, CP)
    assert s == pytest.approx(closed_form_spacing(1 / math.sqrt(3), 1.0), abs=1e-10)
    assert math.sin(OMEGA0 * math.exp(-XI * s) * L) == pytest.approx(1 / math.sqrt(3), abs=1e-10)


def test_invert_infeasible():
    weak = CouplingParams(omega0=200.0)
    with pytest.raises(InfeasibleProfileError):
        invert_beta(0.9, 1.0, weak)
    with pytest.raises(InfeasibleProfileError):
        invert_beta(0.6, 0.5, CP)


@pytest.mark.parametrize("n", range(1, 8))
def test_equal_power_spacings(n):
    s = equal_power_spacings(n, CP)
    prof = radiation_profile(CP.with_spacings(s))
    np.testing.assert_allclose(prof.betas, 1 / math.sqrt(n), atol=1e-8)
    assert prof.residual <= 1e-8
    for k, sk in enumerate(s[:-1], start=1):
        frac = 1 / (n - k + 1)
        assert sk == pytest.approx(closed_form_spacing(math.sqrt(frac), 1.0), abs=1e-9)
    # the last pinch dumps everything; amplitude rounding is sqrt-amplified in kappa*l
    assert OMEGA0 * math.exp(-XI * s[-1]) * L == pytest.approx(math.pi / 2, abs=1e-4)


def test_equal_power_needs_full_dump():
    with pytest.raises(InfeasibleProfileError, match="stage 3"):
        equal_power_spacings(3, CouplingParams(omega0=200.0))


def test_profile_too_strong():
    with pytest.raises(InfeasibleProfileError):
        spacings_for_profile([0.9, 0.9], CP)





@given(st.floats(CP.peak_spacing, 0.05), st.floats(CP.peak_spacing, 0.05))
def test_amplitude_monotone_beyond_peak(a, b):
    lo, hi = sorted((a, b))
    ba = radiation_profile(CP.with_spacings([lo])).betas[0]
    bb = radiation_profile(CP.with_spacings([hi])).betas[0]
    assert ba >= bb - 1e-15


def test_invert_below_floor_decouples():
    floor = math.sin(1e-6)
    assert invert_beta(0.5 * floor, 1.0, CP) == CP.decoupled_spacing


@given(st.floats(math.sin(1e-6), 1.0), st.floats(0.05, 1.0))
def test_invert_round_trip(frac, upstream):
    target = frac * upstream
    s = invert_beta(target, upstream, CP)
    got = upstream * math.sin(OMEGA0 * math.exp(-XI * s) * L)
    assert got == pytest.approx(target, abs=1e-9)


@given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=7))
def test_profile_round_trip(raw):
    v = np.array(raw)
    v = np.maximum(v, 1e-4)  # zero targets leak sin(1e-6) by construction
    v = 0.95 * v / np.linalg.norm(v)  # keep every stage off the flat top of sin
    s = spacings_for_profile(v, CP)
    np.testing.assert_allclose(radiation_profile(CP.with_spacings(s)).betas, v, atol=1e-8)
