"""Gate system configuration shared by the dynamics and budget layers."""

from __future__ import annotations

from dataclasses import dataclass, field

from darkgates.basis import DEFAULT_DIMENSION_CAP
from darkgates.interactions import LatticeConfig, RydbergScheme, place_atoms

GATE_KINDS = ("toffoli", "fanout")


@dataclass(frozen=True)
class SystemConfig:
    """A fully specified gate instance.

    kind : "toffoli" (k controls, one target) or "fanout" (one control,
        k targets).  omega_t drives the 2pi pulse on the coupled species,
        omega_c the pi rotations on the other; both are peak angular Rabi
        frequencies in rad/s.  gamma is the Rydberg decay rate in 1/s,
        handled analytically (never inside wavefunction dynamics).
    """

    kind: str
    k: int
    scheme: RydbergScheme
    lattice: LatticeConfig
    omega_t: float
    omega_c: float
    gamma: float = 0.0
    dimension_cap: int = DEFAULT_DIMENSION_CAP

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"kind must be one of {GATE_KINDS}, got {self.kind!r}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.lattice.n_atoms != self.k + 1:
            raise ValueError(
                f"lattice holds {self.lattice.n_atoms} atoms, expected {self.k + 1}"
            )

    @property
    def b1_nn(self) -> float:
        """Exchange coupling at the closest single-multi distance, rad/s."""
        return self.scheme.b1_at(self.lattice.nn_single_multi())

    @property
    def delta_c(self) -> float:
        """Nearest-level spacing seen by the pi-rotated (control) species."""
        return (
            self.scheme.delta_multi if self.kind == "toffoli" else self.scheme.delta_single
        )

    @property
    def delta_t(self) -> float:
        """Nearest-level spacing seen by the 2pi-driven (target) species."""
        return (
            self.scheme.delta_single if self.kind == "toffoli" else self.scheme.delta_multi
        )


def make_system(
    kind: str,
    k: int,
    scheme: RydbergScheme,
    spacing: float,
    omega_t: float,
    omega_c: float,
    geometry: str = "square",
    gamma: float = 0.0,
    dimension_cap: int = DEFAULT_DIMENSION_CAP,
) -> SystemConfig:
    """Convenience constructor that also places the atoms."""
    lattice = place_atoms(k, geometry, spacing)
    return SystemConfig(
        kind=kind,
        k=k,
        scheme=scheme,
        lattice=lattice,
        omega_t=omega_t,
        omega_c=omega_c,
        gamma=gamma,
        dimension_cap=dimension_cap,
    )
