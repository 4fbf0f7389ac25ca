"""Product-space state and operator algebra for multi-atom gate simulations.

The simulated register is one "single" atom (the lone target of a Toffoli
gate or the lone control of a fan-out gate) plus ``k`` "multi" atoms.  Each
atom carries a small set of named internal levels; the joint Hilbert space
is the tensor product, indexed row-major with the single atom first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

# Canonical level names.  ``sp`` is the nearby detuned Rydberg level used to
# model off-resonant rotation errors; extra leakage levels get channel-specific
# names (see dynamics.build_leakage_level_sets).
QUBIT_LEVELS = ("g0", "g1")
SINGLE_LEVELS = ("g0", "g1", "r", "a", "sp")
MULTI_LEVELS = ("g0", "g1", "r", "b", "sp")

DEFAULT_DIMENSION_CAP = 10_000_000
SPARSE_THRESHOLD = 10_000


class BasisMismatchError(ValueError):
    """Raised when two objects defined over different bases are combined."""


@dataclass(frozen=True)
class LevelSet:
    """Ordered internal levels of one atom.

    Parameters
    ----------
    labels : tuple of str
        Level names; must be unique and include the qubit levels g0, g1
        unless ``allow_partial`` relaxes that (used for reduced leakage
        bases where an inert qubit level is dropped).
    role : {'single', 'multi'}
        Whether the atom is the lone qubit or one of the k identical ones.
    """

    labels: tuple[str, ...]
    role: str
    allow_partial: bool = False

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate level labels: {self.labels}")
        if len(self.labels) > 9:
            raise ValueError(f"at most 9 levels per atom, got {len(self.labels)}")
        if self.role not in ("single", "multi"):
            raise ValueError(f"role must be 'single' or 'multi', got {self.role!r}")
        if not self.allow_partial:
            for required in QUBIT_LEVELS:
                if required not in self.labels:
                    raise ValueError(f"level set missing qubit level {required!r}")

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def __contains__(self, label: str) -> bool:
        return label in self.labels


@dataclass(frozen=True)
class ProductBasis:
    """Tensor-product basis over k+1 atoms, single atom first.

    Flat indices are row-major over per-atom level indices, so atom 0
    (the single qubit) varies slowest.
    """

    level_sets: tuple[LevelSet, ...]

    @property
    def n_atoms(self) -> int:
        return len(self.level_sets)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(ls.size for ls in self.level_sets)

    @property
    def dimension(self) -> int:
        return math.prod(self.shape)

    def index(self, labels: tuple[str, ...]) -> int:
        """Flat index of a product state given per-atom level labels."""
        if len(labels) != self.n_atoms:
            raise ValueError(f"expected {self.n_atoms} labels, got {len(labels)}")
        idx = 0
        for ls, label in zip(self.level_sets, labels):
            idx = idx * ls.size + ls.index(label)
        return idx

    def labels(self, index: int) -> tuple[str, ...]:
        """Per-atom level labels of a flat index (inverse of :meth:`index`)."""
        if not 0 <= index < self.dimension:
            raise IndexError(index)
        out = []
        for ls in reversed(self.level_sets):
            index, level = divmod(index, ls.size)
            out.append(ls.labels[level])
        return tuple(reversed(out))

    def level_indices(self, index: int) -> tuple[int, ...]:
        return tuple(np.unravel_index(index, self.shape))

    def basis_state(self, labels: tuple[str, ...]) -> "StateVector":
        amp = np.zeros(self.dimension, dtype=complex)
        amp[self.index(labels)] = 1.0
        return StateVector(self, amp)

    def atom_level_mask(self, atom: int, label: str) -> np.ndarray:
        """Boolean mask over flat indices where ``atom`` occupies ``label``."""
        level = self.level_sets[atom].index(label)
        idx = np.arange(self.dimension)
        stride = math.prod(self.shape[atom + 1:])
        return (idx // stride) % self.shape[atom] == level


def build_basis(config) -> ProductBasis:
    """Build the product basis for a gate configuration.

    ``config`` supplies ``kind`` ("toffoli" | "fanout"), ``k`` and optionally
    ``dimension_cap``.  Toffoli: the single atom is the target (levels g0,
    g1, r, a, sp) and the k multi atoms are controls (g0, g1, r, b, sp);
    roles swap for the fan-out gate, but the level content per role is the
    same, so the basis depends only on k.
    """
    k = config.k
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    cap = getattr(config, "dimension_cap", DEFAULT_DIMENSION_CAP)
    single = LevelSet(SINGLE_LEVELS, "single")
    multi = LevelSet(MULTI_LEVELS, "multi")
    basis = ProductBasis((single,) + (multi,) * k)
    if basis.dimension > cap:
        raise ValueError(
            f"basis dimension {basis.dimension} exceeds cap {cap}; "
            f"reduce k or raise dimension_cap"
        )
    return basis


def build_basis_from_level_sets(level_sets, dimension_cap=DEFAULT_DIMENSION_CAP) -> ProductBasis:
    basis = ProductBasis(tuple(level_sets))
    if basis.dimension > dimension_cap:
        raise ValueError(
            f"basis dimension {basis.dimension} exceeds cap {dimension_cap}"
        )
    return basis


@dataclass
class StateVector:
    """Complex amplitudes over a :class:`ProductBasis`."""

    basis: ProductBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.basis.dimension,):
            raise ValueError(
                f"amplitude shape {self.amplitudes.shape} does not match "
                f"basis dimension {self.basis.dimension}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.basis, self.amplitudes / n)

    def population(self, labels: tuple[str, ...]) -> float:
        return float(abs(self.amplitudes[self.basis.index(labels)]) ** 2)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """Hermitian inner product <a|b> of two states over the same basis."""
    if a.basis is not b.basis and a.basis != b.basis:
        raise BasisMismatchError("states live on different bases")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


HERMITICITY_TOL = 1e-12


@dataclass
class OperatorMatrix:
    """Sparse or dense complex matrix over a product basis.

    When ``hermitian`` is claimed, the constructor verifies the elementwise
    defect max|H - H^dag| against a 1e-12 tolerance.
    """

    basis: ProductBasis
    matrix: "sp.spmatrix | np.ndarray"
    hermitian: bool = True
    _defect: float = field(default=0.0, repr=False)

    def __post_init__(self):
        n = self.basis.dimension
        if self.matrix.shape != (n, n):
            raise ValueError(f"matrix shape {self.matrix.shape} != basis ({n}, {n})")
        if self.hermitian:
            self._defect = self.hermiticity_defect()
            if self._defect >= HERMITICITY_TOL:
                raise ValueError(
                    f"matrix declared Hermitian but defect = {self._defect:.3e}"
                )

    def hermiticity_defect(self) -> float:
        if sp.issparse(self.matrix):
            diff = (self.matrix - self.matrix.conjugate().T).tocoo()
            return float(np.max(np.abs(diff.data))) if diff.nnz else 0.0
        diff = self.matrix - self.matrix.conjugate().T
        return float(np.max(np.abs(diff))) if diff.size else 0.0

    def apply(self, psi: StateVector) -> StateVector:
        if psi.basis != self.basis:
            raise BasisMismatchError("state basis does not match operator basis")
        return StateVector(self.basis, self.matrix @ psi.amplitudes)

    def expectation(self, psi: StateVector) -> complex:
        return complex(np.vdot(psi.amplitudes, self.matrix @ psi.amplitudes))

    def to_dense(self) -> np.ndarray:
        if sp.issparse(self.matrix):
            return self.matrix.toarray()
        return np.asarray(self.matrix)


def operator_from_terms(basis: ProductBasis, rows, cols, vals, hermitian=True) -> OperatorMatrix:
    """Assemble an operator from (row, col, value) triples, adding h.c. for
    off-diagonal entries when ``hermitian``.

    Duplicate (row, col) entries are summed.  Storage follows the dimension:
    sparse above 1e4, dense below.
    """
    rows = list(rows)
    cols = list(cols)
    vals = list(vals)
    if hermitian:
        extra_r, extra_c, extra_v = [], [], []
        for r, c, v in zip(rows, cols, vals):
            if r != c:
                extra_r.append(c)
                extra_c.append(r)
                extra_v.append(np.conj(v))
        rows += extra_r
        cols += extra_c
        vals += extra_v
    n = basis.dimension
    mat = sp.coo_matrix(
        (np.asarray(vals, dtype=complex), (rows, cols)), shape=(n, n)
    ).tocsr()
    if n <= SPARSE_THRESHOLD:
        return OperatorMatrix(basis, mat.toarray(), hermitian=hermitian)
    return OperatorMatrix(basis, mat, hermitian=hermitian)


def symmetric_state(
    basis: ProductBasis,
    single_label: str,
    multi_assignment: dict[str, int],
    rest_label: str,
    participating: "list[int] | None" = None,
) -> StateVector:
    """Normalized symmetric superposition over multi-atom level assignments.

    ``multi_assignment`` maps level label -> count of participating multi
    atoms placed in that level; the remaining participating atoms occupy
    ``rest_label``.  Non-participating multi atoms (when ``participating``
    selects a subset) stay in ``rest_label`` as spectators outside the
    symmetrization.
    """
    k = basis.n_atoms - 1
    atoms = list(range(1, k + 1)) if participating is None else list(participating)
    total = sum(multi_assignment.values())
    if total > len(atoms):
        raise ValueError("more assigned atoms than participating atoms")

    labels_pool: list[str] = []
    for label, count in sorted(multi_assignment.items()):
        labels_pool += [label] * count
    labels_pool += [rest_label] * (len(atoms) - total)

    from itertools import permutations

    seen = set()
    amp = np.zeros(basis.dimension, dtype=complex)
    for perm in permutations(labels_pool):
        if perm in seen:
            continue
        seen.add(perm)
        full = [rest_label] * (k + 1)
        full[0] = single_label
        for atom, label in zip(atoms, perm):
            full[atom] = label
        amp[basis.index(tuple(full))] += 1.0
    vec = StateVector(basis, amp)
    return vec.normalized()
