"""Adiabatic dark-state multi-qubit gates: dynamics, error budgets, and circuit variants.

Subpackages by concern:

- ``basis``        product-space states and operators
- ``interactions`` coupling coefficients, level data tables, lattice geometry
- ``darkstates``   closed-form dark states and perturbation estimates
- ``budgets``      analytic gate error budgets and parameter optimization
- ``dynamics``     pulses, Hamiltonians, Schrodinger integration, gate extraction
- ``supercircuit`` superconducting-circuit quantization and gate error model
- ``cli``          batch experiment front-end
"""

from darkgates.basis import LevelSet, ProductBasis, StateVector, OperatorMatrix, build_basis
from darkgates.interactions import (
    RydbergScheme,
    LeakageChannel,
    LatticeConfig,
    dipolar_coupling,
    vdw_coupling,
    critical_distance,
    level_spacing,
    place_atoms,
    get_scheme,
)
from darkgates.system import SystemConfig

__all__ = [
    "LevelSet",
    "ProductBasis",
    "StateVector",
    "OperatorMatrix",
    "build_basis",
    "RydbergScheme",
    "LeakageChannel",
    "LatticeConfig",
    "SystemConfig",
    "dipolar_coupling",
    "vdw_coupling",
    "critical_distance",
    "level_spacing",
    "place_atoms",
    "get_scheme",
]

__version__ = "0.1.0"
