"""Interaction coefficients, level data tables, lattice geometry.

Coefficient tables ship with the package as structured JSON (one record per
level scheme, one sub-record per coupled Rydberg pair channel); user-supplied
schemes in the same format are accepted by :func:`load_schemes`.

Unit conventions
----------------
- dipolar coefficients C3 in 2pi GHz um^3, van der Waals C6 in 2pi GHz um^6
  (the units of the shipped tables);
- channel detunings in 2pi MHz;
- all distances in um;
- everything returned by coupling functions is angular frequency in rad/s.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

TWO_PI = 2.0 * math.pi

# Rydberg constant in frequency units (Hz); level spacing near n ~ 100 is
# computed without quantum-defect corrections.
RYDBERG_HZ = 3.2898e15

GHZ_UM3_TO_RAD = TWO_PI * 1e9   # C3/r^3 with C3 in 2pi GHz um^3, r in um -> rad/s
MHZ_TO_RAD = TWO_PI * 1e6


class ResonantChannelError(ValueError):
    """Raised when a critical distance is requested for a resonant channel."""


def dipolar_coupling(c3: float, r: float) -> float:
    """Dipole-dipole pair coupling C3/r^3.

    Parameters
    ----------
    c3 : float
        Dipolar coefficient in 2pi GHz um^3 (sign preserved).
    r : float
        Pair distance in um, > 0.

    Returns
    -------
    float
        Coupling strength in rad/s.
    """
    if r <= 0:
        raise ValueError(f"distance must be positive, got {r}")
    return GHZ_UM3_TO_RAD * c3 / r**3


def vdw_coupling(c6: float, r: float) -> float:
    """Van der Waals pair shift C6/r^6, with C6 in 2pi GHz um^6 -> rad/s."""
    if r <= 0:
        raise ValueError(f"distance must be positive, got {r}")
    return GHZ_UM3_TO_RAD * c6 / r**6


def critical_distance(c3: float, delta_mhz: float) -> float:
    """Distance below which a channel coupling exceeds its detuning.

    d_c = (C3/delta)^(1/3) with C3 in 2pi GHz um^3 and delta in 2pi MHz;
    magnitudes are used, so the sign of either input is irrelevant.
    """
    if delta_mhz == 0:
        raise ResonantChannelError("resonant channel, no critical distance")
    return (abs(c3) * 1e3 / abs(delta_mhz)) ** (1.0 / 3.0)


def level_spacing(n: int) -> float:
    """Nearest-level spacing Ry/n^3 of a Rydberg manifold, in rad/s."""
    if n < 2:
        raise ValueError(f"principal quantum number must be >= 2, got {n}")
    return TWO_PI * RYDBERG_HZ / n**3


@dataclass(frozen=True)
class LeakageChannel:
    """One near-resonant coupled Rydberg pair.

    ``pair`` is "sm" for single-multi pairs (source/dest order: single atom
    level first) and "mm" for multi-multi pairs.  ``delta_mhz`` is the
    energy defect of the destination pair; the two resonant channels (the
    main exchange couplings) have delta = 0.
    """

    number: int
    pair: str
    source: tuple[str, str]
    dest: tuple[str, str]
    c3: float
    delta_mhz: float
    dominant: bool = False

    def __post_init__(self):
        if self.pair not in ("sm", "mm"):
            raise ValueError(f"pair must be 'sm' or 'mm', got {self.pair!r}")

    @property
    def resonant(self) -> bool:
        return self.delta_mhz == 0.0

    def coupling_at(self, r: float) -> float:
        return dipolar_coupling(self.c3, r)

    @property
    def delta(self) -> float:
        """Detuning in rad/s."""
        return MHZ_TO_RAD * self.delta_mhz

    def critical_distance(self) -> float:
        return critical_distance(self.c3, self.delta_mhz)


@dataclass(frozen=True)
class RydbergScheme:
    """A pair-resonance level scheme: one Table row plus its leakage channels.

    The multi-atom Rydberg level r_m and transfer level b_m belong to the k
    identical qubits; r_s and a_s to the lone qubit.  c3_b1 couples
    |r_s r_m> <-> |a_s b_m|, c3_b2 the intra-component |r_m b_m> exchange,
    and c6_mm is the |r_m r_m> van der Waals coefficient.
    """

    name: str
    levels: dict
    n_single: int
    n_multi: int
    c3_b1: float
    c3_b2: float
    c6_mm: float
    e_field: float
    channels: tuple[LeakageChannel, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for value in (self.c3_b1, self.c3_b2, self.c6_mm, self.e_field):
            if not math.isfinite(value):
                raise ValueError(f"non-finite coefficient in scheme {self.name}")

    def b1_at(self, r: float) -> float:
        return dipolar_coupling(self.c3_b1, r)

    def b2_at(self, r: float) -> float:
        return dipolar_coupling(self.c3_b2, r)

    def vdw_mm_at(self, r: float) -> float:
        return vdw_coupling(self.c6_mm, r)

    @property
    def delta_single(self) -> float:
        return level_spacing(self.n_single)

    @property
    def delta_multi(self) -> float:
        return level_spacing(self.n_multi)

    def dominant_channel(self) -> LeakageChannel:
        """The channel flagged in the data as the main fidelity reducer.

        Raw critical distance alone does not settle dominance: a channel
        coupled to a weakly populated component matters less than one
        coupled to the dark mechanism's intermediate state, so the flag is
        part of the shipped data.
        """
        flagged = [ch for ch in self.channels if ch.dominant]
        if not flagged:
            raise ValueError(f"scheme {self.name} ships no dominant channel")
        return flagged[0]


def _parse_scheme(record: dict) -> RydbergScheme:
    channels = tuple(
        LeakageChannel(
            number=ch["number"],
            pair=ch["pair"],
            source=tuple(ch["source"]),
            dest=tuple(ch["dest"]),
            c3=float(ch["c3"]),
            delta_mhz=float(ch["delta"]),
            dominant=bool(ch.get("dominant", False)),
        )
        for ch in record.get("channels", [])
    )
    return RydbergScheme(
        name=record["name"],
        levels=dict(record["levels"]),
        n_single=int(record["n_single"]),
        n_multi=int(record["n_multi"]),
        c3_b1=float(record["c3_b1"]),
        c3_b2=float(record["c3_b2"]),
        c6_mm=float(record["c6_mm"]),
        e_field=float(record["e_field"]),
        channels=channels,
    )


def load_schemes(path=None) -> dict[str, RydbergScheme]:
    """Load scheme records from a JSON file (default: the shipped table)."""
    if path is None:
        text = resources.files("darkgates.data").joinpath("rydberg_schemes.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    payload = json.loads(text)
    if payload.get("schema_version") != 1:
        raise ValueError(f"unsupported scheme schema_version {payload.get('schema_version')}")
    return {rec["name"]: _parse_scheme(rec) for rec in payload["schemes"]}


_SCHEME_CACHE: "dict[str, RydbergScheme] | None" = None


def get_scheme(name: str) -> RydbergScheme:
    global _SCHEME_CACHE
    if _SCHEME_CACHE is None:
        _SCHEME_CACHE = load_schemes()
    try:
        return _SCHEME_CACHE[name]
    except KeyError:
        raise KeyError(
            f"unknown scheme {name!r}; shipped schemes: {sorted(_SCHEME_CACHE)}"
        ) from None


@dataclass(frozen=True)
class LatticeConfig:
    """Atom positions (um) with atom 0 = the single qubit.

    Invariant: all pairwise distances >= the lattice constant (up to fp
    round-off).
    """

    geometry: str
    spacing: float
    positions: np.ndarray
    placement_rule: str = ""

    def __post_init__(self):
        object.__setattr__(self, "positions", np.asarray(self.positions, dtype=float))
        if self.positions.ndim != 2 or self.positions.shape[1] != 2:
            raise ValueError("positions must be an (n, 2) array")
        n = len(self.positions)
        for i in range(n):
            for j in range(i + 1, n):
                d = float(np.linalg.norm(self.positions[i] - self.positions[j]))
                if d < self.spacing * (1 - 1e-9):
                    raise ValueError(
                        f"atoms {i}, {j} closer ({d:.6g} um) than lattice constant"
                    )

    @property
    def n_atoms(self) -> int:
        return len(self.positions)

    def distance(self, i: int, j: int) -> float:
        return float(np.linalg.norm(self.positions[i] - self.positions[j]))

    def nn_single_multi(self) -> float:
        """Closest single-to-multi distance (sets the reference B1)."""
        return min(self.distance(0, i) for i in range(1, self.n_atoms))

    def nn_multi_multi(self) -> float:
        """Closest multi-to-multi distance (sets the reference B2 and vdW)."""
        if self.n_atoms < 3:
            return math.inf
        return min(
            self.distance(i, j)
            for i in range(1, self.n_atoms)
            for j in range(i + 1, self.n_atoms)
        )


def place_atoms(k: int, geometry: str, spacing: float) -> LatticeConfig:
    """Deterministic placement of k multi atoms plus the single qubit.

    square : fills the smallest near-square block row-major; the single
        qubit takes the occupied site closest to the centroid (lowest site
        index on ties).
    linear : a chain with the single qubit on the central site (lower of
        the two central sites when the chain length is even).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if spacing <= 0:
        raise ValueError(f"lattice constant must be positive, got {spacing}")
    count = k + 1
    if geometry == "linear":
        sites = np.array([[i * spacing, 0.0] for i in range(count)])
        single_idx = (count - 1) // 2
        rule = "linear-central-single-v1"
    elif geometry == "square":
        cols = math.ceil(math.sqrt(count))
        rows = math.ceil(count / cols)
        sites = np.array(
            [
                [c * spacing, r * spacing]
                for r in range(rows)
                for c in range(cols)
            ][:count]
        )
        centroid = sites.mean(axis=0)
        dists = np.linalg.norm(sites - centroid, axis=1)
        single_idx = int(np.argmin(np.round(dists, 9)))  # lowest index on ties
        rule = "square-rowmajor-central-single-v1"
    else:
        raise ValueError(f"unknown geometry {geometry!r}")

    origin = sites[single_idx].copy()
    order = [single_idx] + [i for i in range(count) if i != single_idx]
    positions = sites[order] - origin
    return LatticeConfig(geometry=geometry, spacing=spacing, positions=positions, placement_rule=rule)
