"""Coupled-mode building blocks: grating mode-beamsplitters and asymmetric
directional couplers, reduced to splitting ratios and 2x2 transfer matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import wgmodes
from .errors import InvalidInput
from .wgmodes import ModeId, WaveguideGeometry

# Anchor point for the per-period coupling strength: a 24 nm deep tooth
# gives kappa = 0.041 rad/period; kappa scales linearly with depth
# (first-order perturbation).
REFERENCE_GRATING_DEPTH_NM = 24.0
REFERENCE_KAPPA_PER_PERIOD = 0.041


def splitting_ratio(kappa_per_period: float, num_periods: float) -> float:
    """Cross-coupling (mode-exchange) probability sin^2(kappa * N)."""
    if kappa_per_period < 0 or num_periods < 0:
        raise InvalidInput("kappa and N must be non-negative")
    return math.sin(kappa_per_period * num_periods) ** 2


def detuned_splitting(
    kappa_per_um: float, detuning_per_um: float, length_um: float
) -> float:
    """Two-mode coupled-mode cross power with phase mismatch.

    eta = kappa^2/(kappa^2 + delta^2) * sin^2(sqrt(kappa^2 + delta^2) * L);
    reduces to sin^2(kappa L) at delta = 0.
    """
    if kappa_per_um < 0 or length_um < 0:
        raise InvalidInput("kappa and length must be non-negative")
    g = math.hypot(kappa_per_um, detuning_per_um)
    if g == 0.0:
        return 0.0
    return (kappa_per_um / g) ** 2 * math.sin(g * length_um) ** 2


@dataclass(frozen=True)
class CouplerUnitary:
    """2x2 lossless coupler matrix with its cross-coupling probability."""

    matrix: np.ndarray
    eta: float


def coupler_unitary(eta: float, phase_convention: str = "symmetric") -> CouplerUnitary:
    """Beamsplitter matrix [[t, i r], [i r, t]] with r = sqrt(eta).

    Any fixed lossless convention gives the same probabilities; the
    symmetric i-on-cross-terms form is used so amplitudes are testable.
    """
    if not 0.0 <= eta <= 1.0:
        raise InvalidInput(f"eta = {eta} outside [0, 1]")
    if phase_convention != "symmetric":
        raise InvalidInput(f"unknown phase convention {phase_convention!r}")
    t = math.sqrt(1.0 - eta)
    r = math.sqrt(eta)
    matrix = np.array([[t, 1j * r], [1j * r, t]], dtype=np.complex128)
    return CouplerUnitary(matrix, eta)


def _pair_symmetry(mode_pair: tuple[ModeId, ModeId]) -> str:
    a, b = mode_pair
    return "symmetric" if (a.order - b.order) % 2 == 0 else "asymmetric"


@dataclass(frozen=True)
class GratingSpec:
    """A width-modulation grating coupling two co-propagating modes."""

    period_um: float
    depth_nm: float
    num_periods: int
    kappa_per_period: float
    mode_pair: tuple[ModeId, ModeId]
    symmetry: str

    def __post_init__(self):
        if self.period_um <= 0:
            raise InvalidInput("grating period must be positive")
        if self.num_periods < 0 or self.kappa_per_period < 0:
            raise InvalidInput("N and kappa must be non-negative")
        if self.symmetry not in ("symmetric", "asymmetric"):
            raise InvalidInput(f"unknown symmetry {self.symmetry!r}")
        if self.symmetry != _pair_symmetry(self.mode_pair):
            raise InvalidInput(
                f"{self.symmetry} grating cannot couple "
                f"{self.mode_pair[0]}-{self.mode_pair[1]} (parity rule)"
            )

    @property
    def eta(self) -> float:
        return splitting_ratio(self.kappa_per_period, self.num_periods)

    @property
    def length_um(self) -> float:
        return self.period_um * self.num_periods

    def unitary(self) -> CouplerUnitary:
        return coupler_unitary(self.eta)

    def to_dict(self) -> dict:
        return {
            "period_um": self.period_um,
            "depth_nm": self.depth_nm,
            "num_periods": self.num_periods,
            "kappa_per_period": self.kappa_per_period,
            "mode_pair": [str(m) for m in self.mode_pair],
            "symmetry": self.symmetry,
            "eta": self.eta,
            "length_um": self.length_um,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GratingSpec":
        return cls(
            period_um=data["period_um"],
            depth_nm=data["depth_nm"],
            num_periods=data["num_periods"],
            kappa_per_period=data["kappa_per_period"],
            mode_pair=tuple(ModeId.parse(m) for m in data["mode_pair"]),
            symmetry=data["symmetry"],
        )


def grating_from_geometry(
    geometry: WaveguideGeometry,
    mode_pair: tuple[ModeId, ModeId],
    depth_nm: float = REFERENCE_GRATING_DEPTH_NM,
    num_periods: int = 20,
    kappa_override: float | None = None,
) -> GratingSpec:
    """Design a grating for a mode pair from waveguide geometry.

    Period from the effective-index difference; kappa from the override or
    the 24 nm anchor scaled linearly in depth.
    """
    if depth_nm < 0:
        raise InvalidInput("depth must be non-negative")
    n_a = wgmodes.effective_index(geometry, mode_pair[0])
    n_b = wgmodes.effective_index(geometry, mode_pair[1])
    period_um = wgmodes.grating_period(
        geometry.stack.wavelength_nm, abs(n_a - n_b)
    )
    if kappa_override is not None:
        kappa = kappa_override
    else:
        kappa = REFERENCE_KAPPA_PER_PERIOD * depth_nm / REFERENCE_GRATING_DEPTH_NM
    return GratingSpec(
        period_um=period_um,
        depth_nm=depth_nm,
        num_periods=num_periods,
        kappa_per_period=kappa,
        mode_pair=mode_pair,
        symmetry=_pair_symmetry(mode_pair),
    )


@dataclass(frozen=True)
class DirectionalCouplerSpec:
    """Asymmetric directional coupler routing TE0 into a chosen mode channel."""

    target_channel: int
    coupling_length_um: float = 18.0
    crosstalk: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.crosstalk < 1.0:
            raise InvalidInput("crosstalk must lie in [0, 1)")
        if self.target_channel < 0:
            raise InvalidInput("target channel must be >= 0")
        if self.coupling_length_um <= 0:
            raise InvalidInput("coupling length must be positive")


def multiplexer_transfer(spec: DirectionalCouplerSpec, num_channels: int) -> np.ndarray:
    """Power routing map of one multiplexer port over the circuit channels.

    Power (1 - crosstalk) lands in the target channel; the remainder leaks
    equally into the other channels.
    """
    if spec.target_channel >= num_channels:
        raise InvalidInput(
            f"target channel {spec.target_channel} >= m = {num_channels}"
        )
    powers = np.zeros(num_channels)
    if num_channels == 1:
        powers[0] = 1.0
        return powers
    powers[:] = spec.crosstalk / (num_channels - 1)
    powers[spec.target_channel] = 1.0 - spec.crosstalk
    return powers
