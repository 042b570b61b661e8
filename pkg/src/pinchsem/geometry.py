"""Geometry, spherical-wavefront LoS channels and waveguide phase.

Coordinates: the waveguide runs along the x-axis at y = 0 and height d,
users live on the ground plane z = 0 inside x in [0, D], y in [-D/2, D/2],
and the feed point sits at (0, 0, d) unless overridden. Everything is SI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0
TWO_PI = 2.0 * math.pi


class InvalidParameterError(ValueError):
    """Raised when a physical parameter is outside its admissible range."""


@dataclass(frozen=True)
class Position3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise InvalidParameterError(f"non-finite position {self}")

    def distance(self, other: "Position3") -> float:
        return math.sqrt((self.x - other.x) ** 2 + (self.y - other.y) ** 2 + (self.z - other.z) ** 2)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class SystemParams:
    """Carrier, geometry and noise constants of one PASS deployment.

    ``min_spacing`` defaults to half a wavelength and ``feed_point`` to
    (0, 0, d) when left as None.
    """

    carrier_frequency: float = 28e9
    waveguide_height: float = 3.0
    region_side: float = 20.0
    antenna_count: int = 3
    min_spacing: float | None = None
    noise_power: float = 1e-12
    effective_index: float = 1.4
    feed_point: Position3 | None = None
    max_power: float = 1e-2

    def __post_init__(self):
        if not self.carrier_frequency > 0:
            raise InvalidParameterError("carrier frequency must be positive")
        if self.effective_index < 1:
            raise InvalidParameterError("effective index must be >= 1")
        if not self.noise_power > 0:
            raise InvalidParameterError("noise power must be positive")
        if int(self.antenna_count) != self.antenna_count or self.antenna_count < 1:
            raise InvalidParameterError("antenna count must be a positive integer")
        if not self.region_side > 0 or not self.waveguide_height > 0:
            raise InvalidParameterError("region side and waveguide height must be positive")
        if not self.max_power > 0:
            raise InvalidParameterError("max power must be positive")
        lam = SPEED_OF_LIGHT / self.carrier_frequency
        if self.min_spacing is None:
            object.__setattr__(self, "min_spacing", lam / 2)
        elif self.min_spacing < lam / 2 * (1 - 1e-12):
            raise InvalidParameterError(
                f"min spacing {self.min_spacing} m is below half a wavelength ({lam / 2} m)"
            )
        if self.feed_point is None:
            object.__setattr__(self, "feed_point", Position3(0.0, 0.0, self.waveguide_height))

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency

    def antenna(self, x: float) -> Position3:
        return Position3(float(x), 0.0, self.waveguide_height)

    def replace(self, **changes) -> "SystemParams":
        from dataclasses import replace

        if "carrier_frequency" in changes and "min_spacing" not in changes:
            changes["min_spacing"] = None
        if "waveguide_height" in changes and "feed_point" not in changes:
            changes["feed_point"] = None
        return replace(self, **changes)


def wavelengths(params: SystemParams) -> tuple[float, float, float]:
    """Return free-space wavelength, guided wavelength and 1 m path loss."""
    if not params.carrier_frequency > 0:
        raise InvalidParameterError("carrier frequency must be positive")
    lam = SPEED_OF_LIGHT / params.carrier_frequency
    return lam, lam / params.effective_index, lam**2 / (16 * math.pi**2)


def free_space_channel(user: Position3, antenna: Position3, wavelength: float) -> complex:
    r = user.distance(antenna)
    if r == 0.0:
        raise InvalidParameterError("user and antenna coincide; channel is singular")
    eta = wavelength**2 / (16 * math.pi**2)
    return math.sqrt(eta) / r * complex(math.cos(TWO_PI * r / wavelength), -math.sin(TWO_PI * r / wavelength))


def waveguide_phase(feed: Position3, antenna: Position3, guided_wavelength: float) -> float:
    """Phase accumulated from the feed to ``antenna``, reduced mod 2*pi."""
    return (TWO_PI * feed.distance(antenna) / guided_wavelength) % TWO_PI


def user_phase(
    user: Position3, antenna: Position3, feed: Position3, wavelength: float, guided_wavelength: float
) -> float:
    """Free-space minus guided phase, the alignment metric as usually printed.

    Note that the summands of :func:`effective_gain` carry the *sum* of the two
    terms (see :func:`term_phase`); this difference form is kept for the
    ``phase_convention="printed"`` solver option.
    """
    phi = TWO_PI * (user.distance(antenna) / wavelength - feed.distance(antenna) / guided_wavelength)
    return phi % TWO_PI


def term_phase(
    user: Position3, antenna: Position3, feed: Position3, wavelength: float, guided_wavelength: float
) -> float:
    """Phase lag of antenna ``antenna``'s summand in the effective gain, mod 2*pi."""
    phi = TWO_PI * (user.distance(antenna) / wavelength + feed.distance(antenna) / guided_wavelength)
    return phi % TWO_PI


def effective_gain(
    user: Position3, antennas: Sequence[Position3], betas: Sequence[float], params: SystemParams
) -> complex:
    """Composite gain sum_n h_n * beta_n * exp(-j theta_n) seen by ``user``."""
    if len(antennas) != len(betas):
        raise InvalidParameterError(f"{len(antennas)} antennas but {len(betas)} betas")
    lam, lam_g, _ = wavelengths(params)
    g = 0j
    for a, b in zip(antennas, betas):
        if not (0.0 <= b <= 1.0):
            raise InvalidParameterError(f"beta {b} outside [0, 1]")
        theta = TWO_PI * params.feed_point.distance(a) / lam_g
        g += free_space_channel(user, a, lam) * b * complex(math.cos(theta), -math.sin(theta))
    return g


def wrap_distance(a, b):
    """Circular distance between angles, in [0, pi]."""
    d = np.abs(np.mod(np.asarray(a) - np.asarray(b), TWO_PI))
    return np.minimum(d, TWO_PI - d)


@dataclass
class Link:
    """Cached per-drop constants for evaluating both users at many layouts.

    Row 0 of every array refers to the semantic user, row 1 to the bit user.
    With ``waveguide=False`` the guided phase is dropped (fixed-antenna arrays).
    """

    user_s: Position3
    user_b: Position3
    params: SystemParams
    waveguide: bool = True
    phase_convention: str = "signal"
    _ux: np.ndarray = field(init=False, repr=False)
    _perp2: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        p = self.params
        self.lam, self.lam_g, self.eta = wavelengths(p)
        self.sqrt_eta = math.sqrt(self.eta)
        self._ux = np.array([[self.user_s.x], [self.user_b.x]])
        h = p.waveguide_height
        self._perp2 = np.array(
            [[self.user_s.y**2 + (h - self.user_s.z) ** 2], [self.user_b.y**2 + (h - self.user_b.z) ** 2]]
        )
        fp = p.feed_point
        self._feed_x = fp.x
        self._feed_perp2 = fp.y**2 + (fp.z - h) ** 2
        if self.phase_convention not in ("signal", "printed"):
            raise InvalidParameterError(f"unknown phase convention {self.phase_convention!r}")

    def distances(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        return np.sqrt((xs[..., None, :] - self._ux) ** 2 + self._perp2)

    def guided(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if not self.waveguide:
            return np.zeros_like(xs)
        return TWO_PI * np.sqrt((xs - self._feed_x) ** 2 + self._feed_perp2) / self.lam_g

    def terms(self, xs) -> np.ndarray:
        """Per-antenna contributions h_n exp(-j theta_n), shape (..., 2, N)."""
        r = self.distances(xs)
        phase = TWO_PI * r / self.lam + self.guided(xs)[..., None, :]
        return self.sqrt_eta / r * np.exp(-1j * phase)

    def gains(self, xs, betas) -> np.ndarray:
        """Effective gains (g_S, g_B) for one layout or a stack of layouts."""
        return self.terms(xs) @ np.asarray(betas, dtype=float)

    def phases(self, xs) -> np.ndarray:
        """Alignment phases mod 2*pi, shape (..., 2, N)."""
        r = self.distances(xs)
        g = self.guided(xs)[..., None, :]
        sign = 1.0 if self.phase_convention == "signal" else -1.0
        return np.mod(TWO_PI * r / self.lam + sign * g, TWO_PI)
