"""Coupled-mode radiation model of spacing-controlled pinching antennas.

Each pinch is an open-ended directional coupler. Its coupling coefficient
decays exponentially with the antenna-waveguide gap, and it radiates a
fraction sin^2(kappa * l) of the power still travelling in the guide.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geometry import InvalidParameterError


class InfeasibleProfileError(ValueError):
    """Requested radiation amplitude cannot be produced by any spacing."""


@dataclass(frozen=True)
class CouplingParams:
    """Coupler constants in SI units (1/m and m).

    Defaults: Omega_0 = 0.33 /mm, xi = 0.24615 /mm, l = 5 mm, w = 10 mm.
    ``core_width`` is carried along but enters no formula.
    """

    omega0: float = 330.0
    decay: float = 246.15
    antenna_length: float = 5e-3
    spacings: tuple[float, ...] = ()
    core_width: float = 10e-3

    def __post_init__(self):
        if not (self.omega0 > 0 and self.decay > 0 and self.antenna_length > 0):
            raise InvalidParameterError("omega0, decay and antenna_length must be positive")
        object.__setattr__(self, "spacings", tuple(float(s) for s in self.spacings))
        if any(s < 0 or not math.isfinite(s) for s in self.spacings):
            raise InvalidParameterError(f"spacings must be finite and >= 0: {self.spacings}")

    def with_spacings(self, spacings: Sequence[float]) -> "CouplingParams":
        return CouplingParams(self.omega0, self.decay, self.antenna_length, tuple(spacings), self.core_width)

    @property
    def max_phase(self) -> float:
        """Largest coupling phase Omega_0 * l (reached at zero spacing)."""
        return self.omega0 * self.antenna_length

    @property
    def peak_spacing(self) -> float:
        """Spacing at which kappa * l = pi/2, or 0 if that is out of reach."""
        if self.max_phase <= math.pi / 2:
            return 0.0
        return math.log(self.max_phase / (math.pi / 2)) / self.decay

    @property
    def decoupled_spacing(self) -> float:
        """Spacing beyond which kappa * l < 1e-6 (antenna effectively off)."""
        return max(0.0, math.log(self.max_phase / 1e-6) / self.decay)


@dataclass(frozen=True)
class RadiationProfile:
    betas: np.ndarray
    residual: float
    mode: str = "cascaded"
    conserves: bool = field(default=True)

    @property
    def radiated_power(self) -> float:
        return float(np.sum(self.betas**2))


def coupling_coefficient(spacing, params: CouplingParams):
    """kappa = Omega_0 exp(-xi S); accepts scalars or arrays."""
    s = np.asarray(spacing, dtype=float)
    if np.any(s < 0):
        raise InvalidParameterError("coupling spacing must be non-negative")
    k = params.omega0 * np.exp(-params.decay * s)
    return float(k) if k.ndim == 0 else k


def radiation_profile(params: CouplingParams, mode: str = "cascaded") -> RadiationProfile:
    """Amplitude ratio of every antenna for the configured spacings.

    ``cascaded`` carries the power left by all upstream couplers,
    beta_n = sin(k_n l) prod_{i<n} |cos(k_i l)|. ``literal`` raises the
    antenna's own |cos(k_n l)| to the power n-1. Both agree for equal spacings.
    """
    kl = np.asarray(coupling_coefficient(np.asarray(params.spacings), params)) * params.antenna_length
    s = np.sin(kl)
    c = np.abs(np.cos(kl))
    n = len(kl)
    if mode == "cascaded":
        carried = np.concatenate(([1.0], np.cumprod(c)[:-1])) if n else np.zeros(0)
        betas = s * carried
        residual = float(np.prod(c**2))
        return RadiationProfile(betas, residual, mode, True)
    if mode == "literal":
        betas = s * c ** np.arange(n)
        radiated = float(np.sum(betas**2))
        ok = radiated <= 1.0 + 1e-9
        if not ok:
            warnings.warn(f"literal profile radiates {radiated:.6f} > 1 of the input power", RuntimeWarning)
        return RadiationProfile(betas, 1.0 - radiated, mode, ok)
    raise InvalidParameterError(f"unknown profile mode {mode!r}")


def profile_betas(params: CouplingParams, mode: str = "cascaded") -> np.ndarray:
    return radiation_profile(params, mode).betas


def uniform_profiles(spacings: np.ndarray, n: int, params: CouplingParams) -> np.ndarray:
    """Cascaded betas for a shared spacing, one row per candidate spacing."""
    kl = coupling_coefficient(np.asarray(spacings, dtype=float), params) * params.antenna_length
    kl = np.atleast_1d(kl)
    return np.sin(kl)[:, None] * np.abs(np.cos(kl))[:, None] ** np.arange(n)


def invert_beta(
    target: float,
    upstream: float,
    params: CouplingParams,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Spacing S such that upstream * sin(kappa(S) l) equals ``target``.

    The search runs over [peak_spacing, decoupled_spacing], where sin(kappa l)
    is monotone decreasing in S.
    """
    if target < 0 or upstream < 0:
        raise InvalidParameterError("amplitudes must be non-negative")
    peak = math.sin(min(params.max_phase, math.pi / 2))
    if target > upstream * peak * (1 + 1e-12):
        raise InfeasibleProfileError(
            f"target amplitude {target:.6g} exceeds the reachable {upstream * peak:.6g}"
        )
    lo, hi = params.peak_spacing, params.decoupled_spacing
    if target == 0.0:
        return hi
    ratio = min(target / upstream, peak)
    L = params.antenna_length

    def excess(s):
        return math.sin(params.omega0 * math.exp(-params.decay * s) * L) - ratio

    if excess(lo) <= 0.0:
        return lo
    if excess(hi) >= 0.0:
        return hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def spacings_for_profile(betas: Sequence[float], params: CouplingParams) -> list[float]:
    """Sequentially invert a target amplitude profile into coupler spacings.

    Each stage sees the amplitude actually left by the realised upstream
    couplers, so rounding does not accumulate.
    """
    betas = [float(b) for b in betas]
    if sum(b * b for b in betas) > 1 + 1e-9:
        raise InfeasibleProfileError("profile radiates more than the input power")
    out = []
    carried = 1.0
    L = params.antenna_length
    for stage, b in enumerate(betas, start=1):
        b = min(b, carried)
        try:
            s = invert_beta(b, carried, params)
        except InfeasibleProfileError as exc:
            raise InfeasibleProfileError(f"stage {stage}: {exc}") from None
        out.append(s)
        carried *= abs(math.cos(params.omega0 * math.exp(-params.decay * s) * L))
    return out


def equal_power_spacings(n: int, params: CouplingParams) -> list[float]:
    """Spacings giving beta_n = 1/sqrt(N) for every antenna (full dump at the end)."""
    if n < 1:
        raise InvalidParameterError("need at least one antenna")
    if params.max_phase < math.pi / 2 * (1 - 1e-12):
        # the last coupler must radiate all residual power
        raise InfeasibleProfileError(
            f"stage {n}: Omega_0*l = {params.max_phase:.4f} < pi/2, cannot radiate the full residual"
        )
    return spacings_for_profile([1 / math.sqrt(n)] * n, params)
