"""RIS element response profiles and phase optimization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RisPhaseProfile:
    """Per-element magnitude/phase response of the surface."""

    magnitude: np.ndarray  # alpha_n in [0, 1]
    phase: np.ndarray  # phi_n in radians

    def __post_init__(self):
        mag = np.asarray(self.magnitude, dtype=float)
        ph = np.asarray(self.phase, dtype=float)
        if mag.shape != ph.shape or mag.ndim != 1:
            raise ValueError("magnitude and phase must be 1-D arrays of equal length")
        if np.any(mag < 0) or np.any(mag > 1):
            raise ValueError("element magnitudes must lie in [0, 1]")
        object.__setattr__(self, "magnitude", mag)
        object.__setattr__(self, "phase", ph)

    def __len__(self) -> int:
        return self.magnitude.size

    def response(self) -> np.ndarray:
        """Diagonal of the response matrix: alpha_n * exp(j*phi_n)."""
        return self.magnitude * np.exp(1j * self.phase)


def optimal_phases(realization) -> RisPhaseProfile:
    """Phase profile maximizing |g^T Theta h + h_siso| with unit magnitudes.

    Each element's phase rotates its cascaded coefficient g_n*h_n onto the
    direct channel's phase (onto the real axis when the direct channel is
    zero), so every term adds coherently; the maximized magnitude is
    sum_n |g_n h_n| + |h_siso|.
    """
    cascade = np.asarray(realization.g) * np.asarray(realization.h)
    reference = np.angle(realization.h_siso) if realization.h_siso != 0 else 0.0
    phase = np.where(cascade == 0, 0.0, reference - np.angle(cascade))
    return RisPhaseProfile(magnitude=np.ones(cascade.size), phase=phase)


def random_phases(rng: np.random.Generator, n: int) -> RisPhaseProfile:
    """Uniform random phases on [0, 2*pi), unit magnitudes."""
    return RisPhaseProfile(
        magnitude=np.ones(n), phase=rng.uniform(0.0, 2.0 * np.pi, size=n)
    )


def off_profile(n: int) -> RisPhaseProfile:
    """All elements absorbing (alpha = 0): the surface contributes nothing."""
    return RisPhaseProfile(magnitude=np.zeros(n), phase=np.zeros(n))


def quantize(profile: RisPhaseProfile, bits: int) -> RisPhaseProfile:
    """Snap each phase to the nearest of 2**bits uniformly spaced levels."""
    if bits < 1:
        raise ValueError("bits must be >= 1")
    step = 2.0 * np.pi / (2**bits)
    snapped = np.round(np.asarray(profile.phase) / step) * step
    return RisPhaseProfile(magnitude=profile.magnitude.copy(), phase=snapped)
