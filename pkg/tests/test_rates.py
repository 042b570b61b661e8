import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pinchsem.geometry import InvalidParameterError
from pinchsem.rates import (
    SemanticParams,
    bit_rate,
    dbm_to_watt,
    semantic_rate,
    semantic_similarity,
    sic_rate,
    watt_to_dbm,
)

LINEAR = SemanticParams(snr_scale="linear")
EPS0 = 0.37 + 0.61 / (1 + math.exp(0.7895))  # similarity at zero linear SNR


def test_eps0_value():
    assert EPS0 == pytest.approx(0.5605, abs=1e-4)
    assert semantic_similarity(0.0, LINEAR) == pytest.approx(EPS0, abs=1e-12)
    # the dB-driven fit passes through the same value at 0 dB
    assert semantic_similarity(1.0) == pytest.approx(EPS0, abs=1e-12)


def test_similarity_limits():
    for sp in (LINEAR, SemanticParams()):
        assert semantic_similarity(1e12, sp) == pytest.approx(0.98, abs=1e-9)
    assert semantic_similarity(0.0) == pytest.approx(0.37, abs=1e-15)
    mid = 0.7895 / 0.25
    assert semantic_similarity(mid, LINEAR) == pytest.approx((0.37 + 0.98) / 2, abs=1e-12)
    with pytest.raises(InvalidParameterError):
        semantic_similarity(-1.0)


def test_bit_rate_examples():
    assert bit_rate(0.3, 1.0, 0.0, 1.0) == 0.0
    assert bit_rate(0.0, 10.0, 1.0, 1.0) == pytest.approx(math.log2(11.0))
    assert bit_rate(0.2, 10.0, 1.0, 1.0) == pytest.approx(math.log2(1 + 8 / 3), rel=1e-12)
    assert bit_rate(0.2, 10.0, 1.0, 1.0) == pytest.approx(1.874, abs=1e-3)


def test_sic_rate_examples():
    assert sic_rate(0.2, 10.0, 0.7j, 1.0) == bit_rate(0.2, 10.0, 0.7j, 1.0)
    assert sic_rate(0.5 - 1e-12, 1e30, 1.0, 1.0) == pytest.approx(1.0, abs=1e-9)
    assert sic_rate(0.2, 10.0, 0.0, 1.0) == 0.0


def test_semantic_rate_examples():
    assert semantic_rate(0.0, 1.0, 1.0, 1.0, LINEAR) == pytest.approx(0.2 * EPS0, abs=1e-12)
    assert semantic_rate(0.0, 1.0, 1.0, 1.0, LINEAR) == pytest.approx(0.1121, abs=1e-4)
    assert semantic_rate(0.5, 1e40, 1.0, 1e-12) == pytest.approx(0.196, abs=1e-9)
    r5 = semantic_rate(0.3, 1.0, 1.0, 1e-3)
    r10 = semantic_rate(0.3, 1.0, 1.0, 1e-3, SemanticParams(K=10))
    assert r10 == pytest.approx(r5 / 2, rel=1e-14)


def test_power_units():
    assert dbm_to_watt(30.0) == pytest.approx(1.0)
    assert dbm_to_watt(-90.0) == pytest.approx(1e-12)
    assert watt_to_dbm(1e-2) == pytest.approx(10.0)


@pytest.mark.parametrize("bad", [dict(K=0), dict(sut_ratio=0.0), dict(A1=0.99), dict(C1=0.0), dict(snr_scale="x")])
def test_bad_semantic_params(bad):
    with pytest.raises(InvalidParameterError):
        SemanticParams(**bad)


def test_vectorised_matches_scalar():
    p = np.linspace(0.0, 0.5, 7)
    g = 1e-4 * np.exp(1j * np.linspace(0, 3, 7))
    v = bit_rate(p, 1e-2, g, 1e-12)
    assert np.allclose(v, [bit_rate(a, 1e-2, b, 1e-12) for a, b in zip(p, g)], rtol=1e-14)


frac = st.floats(0.01, 0.49)
gain = st.floats(1e-7, 1e-3)
snr = st.floats(0.0, 1e8)
