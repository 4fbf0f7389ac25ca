"""Analytic gate error budgets and deterministic parameter optimization.

Every budget term is a dimensionless error probability.  The closed-form
budgets average over the 2^(k+1) classical qubit configurations through
binomial sums; :func:`lattice_error_budget` redoes the rotation errors
configuration by configuration with the actual pairwise couplings of a
lattice, which matters at large k where the all-pairs closed form
overestimates the van der Waals shifts.

Sign ambiguities (detuning +/- shift) resolve to the worst case, the sign
minimizing the effective detuning magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from darkgates.interactions import RydbergScheme, place_atoms, vdw_coupling
from darkgates.system import SystemConfig

TWO_PI = 2.0 * math.pi

# Drive cap keeping the dark-state energy gap intact during the pulse.
RATIO_CAP = 0.42


@dataclass(frozen=True)
class GateParams:
    """Scalar inputs of the closed-form budgets (all angular except gamma).

    d_same is the same-species van der Waals shift at the reference
    distance: control-control for the Toffoli gate, target-target for
    fan-out.  gamma is the Rydberg decay rate in 1/s.
    """

    omega_t: float
    omega_c: float
    b1: float
    b2: float
    d_same: float
    delta_c: float
    delta_t: float
    gamma: float
    k: int

    def __post_init__(self):
        for name in ("omega_t", "omega_c", "b1", "b2", "d_same", "delta_c", "delta_t", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


@dataclass
class ErrorBudget:
    """Named error terms plus their sum.

    Different producers populate different term sets (dark-state, blockade,
    superconducting); ``echo`` records the inputs that generated the budget.
    """

    terms: dict[str, float]
    echo: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, value in self.terms.items():
            if value < 0 or not math.isfinite(value):
                raise ValueError(f"budget term {name} = {value} is not a probability")

    @property
    def total(self) -> float:
        return float(sum(self.terms.values()))

    def as_record(self) -> dict:
        rec = dict(self.terms)
        rec["total"] = self.total
        return rec


def worst_case_detuning(delta: float, shift: float) -> float:
    """|delta +/- shift| with the sign that minimizes the magnitude."""
    return min(abs(delta - shift), abs(delta + shift))


def _binom(k: int) -> list[int]:
    return [math.comb(k, j) for j in range(k + 1)]


def make_gate_params(config: SystemConfig) -> GateParams:
    """Reference-distance parameters for the closed-form budgets.

    B1 and B2 are taken at the nearest single-multi and multi-multi
    distances respectively, as is the same-species vdW shift.
    """
    r_sm = config.lattice.nn_single_multi()
    r_mm = config.lattice.nn_multi_multi()
    b2 = config.scheme.b2_at(r_mm) if math.isfinite(r_mm) else 0.0
    d_same = config.scheme.vdw_mm_at(r_mm) if math.isfinite(r_mm) else 0.0
    return GateParams(
        omega_t=config.omega_t,
        omega_c=config.omega_c,
        b1=config.scheme.b1_at(r_sm),
        b2=b2,
        d_same=d_same,
        delta_c=config.delta_c,
        delta_t=config.delta_t,
        gamma=config.gamma,
        k=config.k,
    )


def toffoli_error_budget(p: GateParams) -> ErrorBudget:
    """Closed-form Toffoli budget: spontaneous emission, rotation errors
    of both types, and the non-adiabatic loss, binomially averaged."""
    k = p.k
    comb = _binom(k)
    norm = 2.0 ** (k + 1)

    ryd_pop = sum(
        comb[j] * p.omega_t**2 / (4.0 * j * p.b1**2) for j in range(1, k + 1)
    )
    se_t = (TWO_PI * p.gamma / p.omega_t) * (1.0 + ryd_pop) / norm
    se_c = (TWO_PI / p.omega_c + 2.0 * TWO_PI / p.omega_t) * p.gamma * k / 2.0

    r1 = (k**3 - k) / 8.0 * (p.d_same / p.omega_c) ** 2

    r2_c = (
        sum(
            comb[j]
            * p.omega_c**2
            / (4.0 * worst_case_detuning(p.delta_c, (j - 1) * p.d_same) ** 2)
            for j in range(1, k + 1)
        )
        / norm
    )
    r2_t = p.omega_t**2 / (8.0 * p.delta_t**2)

    adi = (
        sum(comb[j] * p.omega_t**4 / (640.0 * p.b1**4 * j**2) for j in range(1, k + 1))
        / norm
    )

    return ErrorBudget(
        terms={"se_t": se_t, "se_c": se_c, "r1": r1, "r2_c": r2_c, "r2_t": r2_t, "adi": adi},
        echo={"kind": "toffoli", "k": k, "omega_t": p.omega_t, "omega_c": p.omega_c, "gamma": p.gamma},
    )


def fanout_error_budget(p: GateParams) -> ErrorBudget:
    """Closed-form fan-out budget."""
    k = p.k
    comb = _binom(k)
    norm = 2.0 ** (k + 1)

    se_c = 0.5 * (TWO_PI / p.omega_c + 2.0 * TWO_PI / p.omega_t) * p.gamma
    se_t = (
        (TWO_PI * p.gamma / p.omega_t)
        * sum(comb[j] * j * (1.0 + p.omega_t**2 / (4.0 * p.b1**2)) for j in range(1, k + 1))
        / norm
    )

    r1 = (k**3 - k) / 16.0 * (p.d_same / p.omega_t) ** 2
    adi = k * p.omega_t**4 / (2560.0 * p.b1**4)

    r2 = p.omega_c**2 / (4.0 * p.delta_c**2) + (
        sum(
            comb[j]
            * j
            * (
                p.omega_t**2
                / (4.0 * worst_case_detuning(p.delta_t, (j - 1) * p.d_same) ** 2)
                + p.omega_t**2 / (4.0 * p.delta_t**2)
            )
            for j in range(1, k + 1)
        )
        / norm
    )

    return ErrorBudget(
        terms={"se_t": se_t, "se_c": se_c, "r1": r1, "r2": r2, "adi": adi},
        echo={"kind": "fanout", "k": k, "omega_t": p.omega_t, "omega_c": p.omega_c, "gamma": p.gamma},
    )


def dark_state_budget(kind: str, p: GateParams) -> ErrorBudget:
    if kind == "toffoli":
        return toffoli_error_budget(p)
    if kind == "fanout":
        return fanout_error_budget(p)
    raise ValueError(f"unknown gate kind {kind!r}")


def blockade_error_budget(kind: str, p: GateParams, b_ct: float) -> ErrorBudget:
    """Budget of the conventional blockade gate with the same inputs.

    Replaces the adiabatic loss by the blockade leakage r3 and the plain
    rotation error by its blockade-enhanced variant (level shifts from the
    control-target blockade b_ct feed the off-resonant excitation).
    Emission and first-type rotation terms carry over unchanged.
    """
    k = p.k
    comb = _binom(k)
    norm = 2.0 ** (k + 1)

    if kind == "toffoli":
        base = toffoli_error_budget(p)
        r3 = (
            sum(comb[j] * p.omega_t**2 / (4.0 * j**2 * p.b1**2) for j in range(1, k + 1))
            / norm
        )
        r2_blo = (
            sum(
                comb[j]
                * p.omega_t**2
                / (4.0 * worst_case_detuning(p.delta_t, j * b_ct) ** 2)
                for j in range(1, k + 1)
            )
            + p.omega_t**2 / (4.0 * p.delta_t**2)
        ) / norm
    elif kind == "fanout":
        base = fanout_error_budget(p)
        r3 = (
            sum(comb[j] * j * p.omega_t**2 / (4.0 * p.b1**2) for j in range(1, k + 1))
            / norm
        )
        r2_blo = (
            sum(
                comb[j]
                * j
                * (
                    p.omega_t**2
                    / (4.0 * worst_case_detuning(p.delta_t, (j - 1) * p.d_same) ** 2)
                    + p.omega_t**2 / (4.0 * worst_case_detuning(p.delta_t, b_ct) ** 2)
                )
                for j in range(1, k + 1)
            )
            / norm
        )
    else:
        raise ValueError(f"unknown gate kind {kind!r}")

    terms = {
        "se_t": base.terms["se_t"],
        "se_c": base.terms["se_c"],
        "r1": base.terms["r1"],
        "r2_blo": r2_blo,
        "r3": r3,
    }
    return ErrorBudget(
        terms=terms,
        echo={"kind": f"blockade-{kind}", "k": k, "omega_t": p.omega_t, "omega_c": p.omega_c, "b_ct": b_ct},
    )


# ---------------------------------------------------------------------------
# Lattice-configuration-resolved budget
# ---------------------------------------------------------------------------

_CHUNK = 1 << 16


def _config_bits(n_qubits: int, start: int, stop: int) -> np.ndarray:
    """Bit matrix of computational configurations start..stop-1.

    Column 0 is the single qubit (most significant bit), matching the
    column ordering of extracted gate unitaries.
    """
    idx = np.arange(start, stop, dtype=np.int64)[:, None]
    shifts = np.arange(n_qubits - 1, -1, -1, dtype=np.int64)[None, :]
    return ((idx >> shifts) & 1).astype(float)


def lattice_error_budget(
    config: SystemConfig,
    r1_denominator: str = "main",
) -> ErrorBudget:
    """Configuration-resolved rotation errors on the actual lattice.

    Enumerates all 2^(k+1) classical qubit configurations; within each, the
    level shift of atom l is the sum of pairwise vdW shifts from the other
    same-species excited atoms at their true distances.  Spontaneous
    emission uses the lattice-independent closed forms.

    ``r1_denominator``: "main" divides the first-type rotation error by the
    rotation drive of the shifted species (omega_c for the Toffoli controls),
    "target" divides by omega_t throughout.
    """
    if r1_denominator not in ("main", "target"):
        raise ValueError("r1_denominator must be 'main' or 'target'")
    k = config.k
    kind = config.kind
    p = make_gate_params(config)
    n = k + 1
    n_cfg = 2**n

    positions = config.lattice.positions[1:]
    dmat = np.zeros((k, k))
    for a in range(k):
        for b in range(a + 1, k):
            r = float(np.linalg.norm(positions[a] - positions[b]))
            dmat[a, b] = dmat[b, a] = vdw_coupling(config.scheme.c6_mm, r)

    omega_r1 = {
        "toffoli": {"main": config.omega_c, "target": config.omega_t}[r1_denominator],
        "fanout": config.omega_t,
    }[kind]

    r1_sum = 0.0
    r2_rot_sum = 0.0   # shifted-rotation errors (controls for toffoli, targets for fanout)
    r2_t_sum = 0.0     # driven-species nearby-level excitation
    adi_sum = 0.0

    for start in range(0, n_cfg, _CHUNK):
        stop = min(start + _CHUNK, n_cfg)
        bits = _config_bits(n, start, stop)
        single = bits[:, 0]
        multi = bits[:, 1:]

        if kind == "toffoli":
            excited = 1.0 - multi           # controls in |0> are pi-rotated to r
            shifts = (excited @ dmat) * excited
            r1_sum += float(np.sum((shifts / omega_r1) ** 2))
            eff = np.minimum(
                np.abs(config.delta_c - shifts), np.abs(config.delta_c + shifts)
            )
            r2_rot_sum += float(
                np.sum(excited * config.omega_c**2 / (4.0 * eff**2))
            )
            r2_t_sum += float(
                np.sum(single) * config.omega_t**2 / (4.0 * config.delta_t**2)
            )
            j_q = excited.sum(axis=1)
            active = (j_q >= 1) & (single == 1.0)
            adi_sum += float(
                np.sum(
                    config.omega_t**4
                    / (640.0 * p.b1**4 * np.where(active, j_q, 1.0) ** 2)
                    * active
                )
            )
        else:
            coupled = multi                  # targets in |1> are driven
            dark_branch = single == 0.0      # excited control: adiabatic branch
            rot_branch = ~dark_branch
            shifts = (coupled @ dmat) * coupled
            r1_sum += float(
                np.sum(rot_branch[:, None] * (shifts / omega_r1) ** 2)
            )
            eff = np.minimum(
                np.abs(config.delta_t - shifts), np.abs(config.delta_t + shifts)
            )
            r2_rot_sum += float(
                np.sum(rot_branch[:, None] * coupled * config.omega_t**2 / (4.0 * eff**2))
            )
            j_q = coupled.sum(axis=1)
            r2_t_sum += float(
                np.sum(dark_branch * j_q) * config.omega_t**2 / (4.0 * config.delta_t**2)
            )
            adi_sum += float(
                np.sum(dark_branch * j_q) * config.omega_t**4 / (640.0 * p.b1**4)
            )

    closed = dark_state_budget(kind, p)
    terms = {
        "se_t": closed.terms["se_t"],
        "se_c": closed.terms["se_c"],
        "r1": r1_sum / n_cfg,
        "adi": adi_sum / n_cfg,
    }
    if kind == "toffoli":
        terms["r2_c"] = r2_rot_sum / n_cfg
        terms["r2_t"] = r2_t_sum / n_cfg
    else:
        terms["r2"] = (
            config.omega_c**2 / (4.0 * config.delta_c**2)
            + (r2_rot_sum + r2_t_sum) / n_cfg
        )
    return ErrorBudget(
        terms=terms,
        echo={
            "kind": f"lattice-{kind}",
            "k": k,
            "omega_t": config.omega_t,
            "omega_c": config.omega_c,
            "gamma": config.gamma,
            "spacing": config.lattice.spacing,
            "r1_denominator": r1_denominator,
        },
    )


# ---------------------------------------------------------------------------
# Parameter optimization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OptimizerBounds:
    """Search windows: angular frequencies in rad/s, spacing in um."""

    omega_t: tuple[float, float]
    spacing: tuple[float, float]
    omega_c: tuple[float, float]
    ratio_cap: float = RATIO_CAP
    geometry: str = "square"


# Paper-reported optimization windows per scheme and gate (frequencies /2pi).
_WINDOWS_MHZ = {
    ("101S-109S", "toffoli"): {"omega_t": (0.016, 8.0), "omega_c": (16.0, 16.0), "spacing": (8.0, 16.0)},
    ("101S-109S", "fanout"): {"omega_t": (1.0, 8.0), "omega_c": (16.0, 16.0), "spacing": (8.0, 16.0)},
    ("87S-95S", "toffoli"): {"omega_t": (5.5, 19.0), "omega_c": (24.0, 24.0), "spacing": (5.0, 7.5)},
    ("87S-95S", "fanout"): {"omega_t": (2.7, 19.0), "omega_c": (24.0, 24.0), "spacing": (5.0, 9.5)},
    ("150S-160S", "toffoli"): {"omega_t": (1.0, 3.0), "omega_c": (8.0, 9.5), "spacing": (19.0, 26.0)},
    ("150S-160S", "fanout"): {"omega_t": (0.8, 2.4), "omega_c": (10.0, 10.0), "spacing": (20.0, 30.0)},
}


def default_bounds(kind: str, scheme_name: str) -> OptimizerBounds:
    try:
        win = _WINDOWS_MHZ[(scheme_name, kind)]
    except KeyError:
        raise KeyError(f"no default window for scheme {scheme_name!r}, gate {kind!r}") from None
    mhz = TWO_PI * 1e6
    return OptimizerBounds(
        omega_t=(win["omega_t"][0] * mhz, win["omega_t"][1] * mhz),
        omega_c=(win["omega_c"][0] * mhz, win["omega_c"][1] * mhz),
        spacing=win["spacing"],
    )


@dataclass
class OptimizeResult:
    params: GateParams
    budget: ErrorBudget
    spacing: float
    omega_t: float
    omega_c: float


def _grid(lo: float, hi: float, n: int, log: bool) -> np.ndarray:
    if hi <= lo:
        return np.array([lo])
    if log:
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def optimize_parameters(
    kind: str,
    k: int,
    scheme: RydbergScheme,
    bounds: "OptimizerBounds | None" = None,
    gamma: float = 1e3,
    objective: str = "closed",
    b_ct: "float | None" = None,
    n_omega: int = 25,
    n_spacing: int = 9,
    n_refine: int = 2,
) -> OptimizeResult:
    """Deterministic grid search with refinement over (omega_t, spacing, omega_c).

    Minimizes the total of the requested budget ("closed", "lattice" or
    "blockade"); the drive cap omega_t <= ratio_cap * |B1(spacing)| prunes
    infeasible grid points.  Refinement re-grids a shrinking window around
    the incumbent, so results are reproducible at fixed grid sizes.
    """
    if bounds is None:
        bounds = default_bounds(kind, scheme.name)

    def evaluate(omega_t, omega_c, spacing):
        lattice = place_atoms(k, bounds.geometry, spacing)
        config = SystemConfig(
            kind=kind, k=k, scheme=scheme, lattice=lattice,
            omega_t=omega_t, omega_c=omega_c, gamma=gamma,
        )
        params = make_gate_params(config)
        if objective == "closed":
            budget = dark_state_budget(kind, params)
        elif objective == "lattice":
            budget = lattice_error_budget(config)
        elif objective == "blockade":
            budget = blockade_error_budget(kind, params, params.b1 if b_ct is None else b_ct)
        else:
            raise ValueError(f"unknown objective {objective!r}")
        return params, budget

    om_lo, om_hi = bounds.omega_t
    sp_lo, sp_hi = bounds.spacing
    oc_lo, oc_hi = bounds.omega_c
    best = None

    for level in range(n_refine + 1):
        omegas = _grid(om_lo, om_hi, n_omega, log=om_hi / max(om_lo, 1e-12) > 20)
        spacings = _grid(sp_lo, sp_hi, n_spacing, log=False)
        omega_cs = _grid(oc_lo, oc_hi, 5 if oc_hi > oc_lo else 1, log=False)
        for spacing in spacings:
            lattice_probe = place_atoms(k, bounds.geometry, float(spacing))
            b1 = abs(scheme.b1_at(lattice_probe.nn_single_multi()))
            cap = bounds.ratio_cap * b1
            for omega_c in omega_cs:
                for omega_t in omegas:
                    if omega_t > cap:
                        continue
                    params, budget = evaluate(float(omega_t), float(omega_c), float(spacing))
                    key = (budget.total, float(spacing), float(omega_t), float(omega_c))
                    if best is None or key < best[0]:
                        best = (key, params, budget, float(spacing), float(omega_t), float(omega_c))
        if best is None:
            raise ValueError(
                "empty feasible set: no grid point satisfies the drive ratio cap"
            )
        # shrink the window around the incumbent for the next pass
        _, _, _, sp_b, om_b, oc_b = best
        om_w = (om_hi - om_lo) / n_omega
        sp_w = (sp_hi - sp_lo) / n_spacing if sp_hi > sp_lo else 0.0
        om_lo, om_hi = max(bounds.omega_t[0], om_b - 2 * om_w), min(bounds.omega_t[1], om_b + 2 * om_w)
        sp_lo, sp_hi = max(bounds.spacing[0], sp_b - 2 * sp_w), min(bounds.spacing[1], sp_b + 2 * sp_w)
        oc_lo = oc_hi = oc_b

    _, params, budget, spacing, omega_t, omega_c = best
    budget.echo["spacing"] = spacing
    return OptimizeResult(
        params=params, budget=budget, spacing=spacing, omega_t=omega_t, omega_c=omega_c
    )


def budget_vs_k(
    kind: str,
    k_values,
    scheme: RydbergScheme,
    bounds: "OptimizerBounds | None" = None,
    gamma: float = 1e3,
    objective: str = "closed",
    b_ct: "float | None" = None,
) -> list[OptimizeResult]:
    """Optimized budget at each qubit count (deterministic)."""
    return [
        optimize_parameters(
            kind, int(k), scheme, bounds=bounds, gamma=gamma, objective=objective, b_ct=b_ct
        )
        for k in k_values
    ]
