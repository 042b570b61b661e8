"""NOMA rates under bit-to-semantic decoding and the semantic rate model."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import InvalidParameterError


@dataclass(frozen=True)
class SemanticParams:
    """Generalized-logistic fit of the semantic similarity for one K.

    ``snr_scale`` selects whether the logistic is driven by the linear SNR
    or by the SNR in dB.
    """

    K: int = 5
    sut_ratio: float = 1.0  # I / L
    A1: float = 0.37
    A2: float = 0.98
    C1: float = 0.25
    C2: float = -0.7895
    snr_scale: str = "db"

    def __post_init__(self):
        if self.K < 1:
            raise InvalidParameterError("K must be a positive integer")
        if not self.sut_ratio > 0:
            raise InvalidParameterError("I/L must be positive")
        if not (0.0 <= self.A1 < self.A2 <= 1.0):
            raise InvalidParameterError("need 0 <= A1 < A2 <= 1")
        if not self.C1 > 0:
            raise InvalidParameterError("growth rate C1 must be positive")
        if self.snr_scale not in ("linear", "db"):
            raise InvalidParameterError(f"unknown snr scale {self.snr_scale!r}")

    @property
    def rate_scale(self) -> float:
        return self.sut_ratio / self.K

    @property
    def max_rate(self) -> float:
        return self.rate_scale * self.A2


def _noma_rate(p_s, p_max, gain, noise):
    h = p_max * np.abs(gain) ** 2
    return np.log2(1.0 + (1.0 - p_s) * h / (p_s * h + noise))


def bit_rate(p_s, p_max, g_b, noise):
    """Rate of the bit user, which treats the semantic signal as noise."""
    r = _noma_rate(p_s, p_max, g_b, noise)
    return float(r) if np.ndim(r) == 0 else r


def sic_rate(p_s, p_max, g_s, noise):
    """Rate at which the semantic user decodes (and cancels) the bit signal."""
    r = _noma_rate(p_s, p_max, g_s, noise)
    return float(r) if np.ndim(r) == 0 else r


def semantic_snr(p_s, p_max, g_s, noise):
    return p_s * p_max * np.abs(g_s) ** 2 / noise


def semantic_similarity(gamma, sp: SemanticParams = SemanticParams()):
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma < 0):
        raise InvalidParameterError("SNR must be non-negative")
    if sp.snr_scale == "db":
        with np.errstate(divide="ignore"):
            x = 10.0 * np.log10(gamma)
    else:
        x = gamma
    with np.errstate(over="ignore"):
        eps = sp.A1 + (sp.A2 - sp.A1) / (1.0 + np.exp(-(sp.C1 * x + sp.C2)))
    return float(eps) if eps.ndim == 0 else eps


def semantic_rate(p_s, p_max, g_s, noise, sp: SemanticParams = SemanticParams()):
    """Semantic spectral efficiency in suts/s/Hz (unit bandwidth)."""
    return sp.rate_scale * semantic_similarity(semantic_snr(p_s, p_max, g_s, noise), sp)


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watt_to_dbm(watt: float) -> float:
    return 10.0 * math.log10(watt) + 30.0
