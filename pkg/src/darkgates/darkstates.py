"""Closed-form dark states of the resonant exchange ladder.

Both gates rely on a zero-energy eigenstate of the drive + exchange
Hamiltonian.  For the Toffoli gate (j excited controls, one driven target)
the dark state has exactly two components.  For the fan-out gate (one
excited control, j coupled targets) the populated components form a ladder
climbed by alternating drive and exchange steps; the closed-form amplitudes
are products of step-angle tangents.  The closed form is exact for j = 1;
for j >= 2 it is the weak-drive limit of an exact symmetric-subspace null
vector, which :func:`fanout_dark_state_exact` computes directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from darkgates.basis import ProductBasis, StateVector, symmetric_state


@dataclass(frozen=True)
class DarkStateToffoli:
    """Two-component dark state cos(theta)|r^j 1> - sin(theta)|sym(b r^(j-1)) a>."""

    j: int
    theta: float
    amplitudes: np.ndarray  # (cos, -sin)


@dataclass(frozen=True)
class DarkStateFanout:
    """Ladder dark state for one excited control and j coupled targets.

    tangents[m-1] is the m-th step angle tangent; cum_tangents[m] the
    cumulative product tan(theta_{m!}) with cum_tangents[0] = 1.
    populations[m] = tan(theta_{m!})^2 is the relative occupation of the
    m-th rung (P_0 = 1); amplitudes are the unit-normalized ladder
    coefficients with alternating sign.
    """

    j: int
    tangents: np.ndarray
    cum_tangents: np.ndarray
    populations: np.ndarray
    amplitudes: np.ndarray


def toffoli_dark_state(omega_t: float, b1: float, j: int) -> DarkStateToffoli:
    """Dark state mixing angle tan(theta) = omega_t / (2 sqrt(j) b1)."""
    if j < 1:
        raise ValueError(
            "no dark state for j = 0 (uncoupled target performs a bare 2pi rotation)"
        )
    if b1 == 0:
        raise ValueError("b1 must be nonzero")
    theta = math.atan2(omega_t, 2.0 * math.sqrt(j) * b1)
    return DarkStateToffoli(
        j=j,
        theta=theta,
        amplitudes=np.array([math.cos(theta), -math.sin(theta)]),
    )


def fanout_step_couplings(omega_t: float, b1: float, j: int, m: int) -> tuple[float, float]:
    """(drive, exchange) coupling pair of the m-th two-photon ladder step."""
    if not 1 <= m <= j:
        raise ValueError(f"step m must be in 1..{j}, got {m}")
    if m % 2 == 1:
        drive = 0.5 * omega_t * math.sqrt(m * (j - m + 1))
    else:
        drive = 0.5 * omega_t * math.sqrt((m - 1) * (j - m + 1))
    exchange = b1 * math.sqrt(m)
    return drive, exchange


def fanout_dark_state(omega_t: float, b1: float, j: int) -> DarkStateFanout:
    """Closed-form ladder dark state (tangent products, renormalized)."""
    if j < 1:
        raise ValueError("no dark state for j = 0")
    if b1 == 0:
        raise ValueError("b1 must be nonzero")
    tangents = np.empty(j)
    for m in range(1, j + 1):
        drive, exchange = fanout_step_couplings(omega_t, b1, j, m)
        tangents[m - 1] = drive / exchange
    cum = np.concatenate([[1.0], np.cumprod(tangents)])
    populations = cum**2
    signs = (-1.0) ** np.arange(j + 1)
    amplitudes = signs * cum
    amplitudes = amplitudes / np.linalg.norm(amplitudes)
    return DarkStateFanout(
        j=j,
        tangents=tangents,
        cum_tangents=cum,
        populations=populations,
        amplitudes=amplitudes,
    )


def fanout_symmetric_hamiltonian(omega_t: float, b1: float, j: int) -> tuple[np.ndarray, list[str]]:
    """Drive + exchange Hamiltonian on the symmetric subspace.

    Basis: A_p = |r_c, p targets excited> for p = 0..j followed by
    B_p = |a_c, one transferred target, p excited> for p = 0..j-1;
    dimension 2j + 1.  Uniform couplings assumed.
    """
    dim = 2 * j + 1
    h = np.zeros((dim, dim))
    a_idx = lambda p: p
    b_idx = lambda p: j + 1 + p
    for p in range(j):
        h[a_idx(p + 1), a_idx(p)] = 0.5 * omega_t * math.sqrt((p + 1) * (j - p))
    for p in range(j - 1):
        h[b_idx(p + 1), b_idx(p)] = 0.5 * omega_t * math.sqrt((p + 1) * (j - 1 - p))
    for p in range(1, j + 1):
        h[b_idx(p - 1), a_idx(p)] = b1 * math.sqrt(p)
    h = h + h.T
    labels = [f"A{p}" for p in range(j + 1)] + [f"B{p}" for p in range(j)]
    return h, labels


def fanout_dark_state_exact(omega_t: float, b1: float, j: int) -> np.ndarray:
    """Exact null vector of the symmetric ladder, as rung amplitudes d_0..d_j.

    The populated rungs (A_even and B_even) and the empty rungs (A_odd,
    B_odd) split the symmetric Hamiltonian into a bipartite form with one
    more populated state than constraints, so an exact zero-energy state
    exists for every j; the tangent-product closed form recovers it to
    leading order in omega_t / 2 b1.
    """
    if j < 1:
        raise ValueError("no dark state for j = 0")
    h, _ = fanout_symmetric_hamiltonian(omega_t, b1, j)
    # rung m lives at A_m (m even) or B_(m-1) (m odd)
    rung_to_flat = [m if m % 2 == 0 else j + 1 + (m - 1) for m in range(j + 1)]
    empty_flat = [i for i in range(2 * j + 1) if i not in rung_to_flat]
    constraint = h[np.ix_(empty_flat, rung_to_flat)]
    _, _, vt = np.linalg.svd(constraint)
    null = vt[-1].real
    if null[0] < 0:
        null = -null
    return null / np.linalg.norm(null)


def nonadiabatic_estimate(
    kind: str, omega_t: float, b1: float, j: int, envelope: bool = False
) -> float:
    """Population scattered out of the dark state by a smooth 2pi pulse.

    Closed forms for the Gaussian pulse with rms width T/5:
    toffoli  omega_t^4 / (640 pi j^2 b1^4)
    fanout   j omega_t^4 / (640 pi b1^4)

    With ``envelope`` the value is tripled, bounding the population maximum
    rather than the end-of-pulse remainder.
    """
    if b1 == 0:
        raise ValueError("b1 must be nonzero")
    x4 = (omega_t / b1) ** 4
    if kind == "toffoli":
        if j < 1:
            raise ValueError("toffoli estimate needs j >= 1")
        value = x4 / (640.0 * math.pi * j**2)
    elif kind == "fanout":
        value = j * x4 / (640.0 * math.pi)
    else:
        raise ValueError(f"unknown gate kind {kind!r}")
    return 3.0 * value if envelope else value


def exchange_perturbation(kind: str, omega_t: float, b1: float, b2: float, j: int) -> float:
    """Dark-state error from the intra-component exchange coupling b2.

    Toffoli: average transfer-state population times b2 times the pulse
    time, pi omega_t b2 / (4 j b1^2 + omega_t^2); zero for j <= 1 where no
    second excited control exists.  Fan-out: the third-rung population
    (j(j-1)(j-2)/2)(omega_t/2b1)^6 times b2, converted to a probability
    with the same pi/omega_t effective duration as the Toffoli form; zero
    for j <= 2.
    """
    if kind == "toffoli":
        if j <= 1:
            return 0.0
        return math.pi * omega_t * b2 / (4.0 * j * b1**2 + omega_t**2)
    if kind == "fanout":
        if j <= 2:
            return 0.0
        rung3 = 0.5 * j * (j - 1) * (j - 2) * (omega_t / (2.0 * b1)) ** 6
        return rung3 * b2 * math.pi / omega_t
    raise ValueError(f"unknown gate kind {kind!r}")


# ---------------------------------------------------------------------------
# Product-space embeddings (for nullity checks and dark-state tracking)
# ---------------------------------------------------------------------------

def embed_toffoli_dark(
    basis: ProductBasis,
    state: DarkStateToffoli,
    excited: "list[int] | None" = None,
    spectator_level: str = "g1",
) -> StateVector:
    """Embed the two-component Toffoli dark state in a product basis.

    ``excited`` lists the multi atoms in the Rydberg state (default: all).
    The single atom is the driven target (g1 coupled, transfer level a).
    """
    k = basis.n_atoms - 1
    atoms = list(range(1, k + 1)) if excited is None else list(excited)
    if len(atoms) != state.j:
        raise ValueError(f"dark state built for j={state.j}, got {len(atoms)} excited atoms")

    def fill(single_label, assign):
        return symmetric_state(
            basis, single_label, assign, rest_label="r", participating=atoms
        )

    base = np.zeros(basis.dimension, dtype=complex)
    full = [spectator_level] * (k + 1)
    full[0] = "g1"
    for atom in atoms:
        full[atom] = "r"
    base[basis.index(tuple(full))] = 1.0
    comp0 = StateVector(basis, base)
    comp1 = fill("a", {"b": 1})
    amp = state.amplitudes[0] * comp0.amplitudes + state.amplitudes[1] * comp1.amplitudes
    if excited is not None and len(atoms) != k:
        # spectator multis sit in spectator_level in both components
        pass
    return StateVector(basis, amp).normalized()


def _fanout_rung(basis, j_atoms, m):
    """Product-space rung m: even -> control r with m targets excited,
    odd -> control a, one transferred target, m-1 excited."""
    if m % 2 == 0:
        return symmetric_state(
            basis, "r", {"r": m}, rest_label="g1", participating=j_atoms
        )
    return symmetric_state(
        basis, "a", {"b": 1, "r": m - 1}, rest_label="g1", participating=j_atoms
    )


def embed_fanout_dark(
    basis: ProductBasis,
    amplitudes: np.ndarray,
    participating: "list[int] | None" = None,
) -> StateVector:
    """Embed ladder amplitudes d_0..d_j (closed-form or exact) in a product basis.

    The single atom is the excited control (levels r, a); ``participating``
    lists the target atoms initially in g1 (default: all).
    """
    k = basis.n_atoms - 1
    atoms = list(range(1, k + 1)) if participating is None else list(participating)
    j = len(amplitudes) - 1
    if len(atoms) != j:
        raise ValueError(f"{len(amplitudes)} rung amplitudes need j={j} participating atoms")
    amp = np.zeros(basis.dimension, dtype=complex)
    for m, d in enumerate(amplitudes):
        if d == 0.0:
            continue
        amp += d * _fanout_rung(basis, atoms, m).amplitudes
    return StateVector(basis, amp).normalized()
