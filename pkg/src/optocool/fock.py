"""Truncated bosonic Fock spaces, ladder operators and thermal states.

All operators live in the dressed (polaron) frame, where the transformed
cavity and mechanical operators are ordinary ladder operators. Composite
spaces are ordered as ``[optical, mechanical_1, ..., mechanical_N]`` and
``tensor`` uses ``scipy.sparse.kron`` so the first factor is the slowest
index.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import InvalidDimensionError, NonPhysicalStateError

DENSE_LIMIT = 1000
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
WEAK_COUPLING_LIMIT = 0.1


@dataclass(frozen=True)
class ModeSpec:
    """One bosonic mode. Frequencies are in units of the optical frequency."""

    label: str
    frequency: float
    truncation: int

    def __post_init__(self):
        if not self.frequency > 0:
            raise ValueError(f"mode {self.label!r}: frequency must be > 0, got {self.frequency}")
        if int(self.truncation) != self.truncation or self.truncation < 2:
            raise InvalidDimensionError(
                f"mode {self.label!r}: truncation must be an integer >= 2, got {self.truncation}"
            )
        object.__setattr__(self, "truncation", int(self.truncation))
        object.__setattr__(self, "frequency", float(self.frequency))


@dataclass(frozen=True)
class SystemConfig:
    """Cavity plus N mechanical resonators with couplings ``g_i``.

    Resonators are addressed by 1-based index ``i``, which coincides with
    their position in :attr:`dims` (position 0 is the cavity).
    """

    optical: ModeSpec
    mechanical: tuple
    couplings: tuple

    def __post_init__(self):
        object.__setattr__(self, "mechanical", tuple(self.mechanical))
        object.__setattr__(self, "couplings", tuple(float(g) for g in self.couplings))
        if len(self.mechanical) < 1:
            raise ValueError("at least one mechanical mode is required")
        if len(self.couplings) != len(self.mechanical):
            raise ValueError(
                f"{len(self.couplings)} couplings given for {len(self.mechanical)} mechanical modes"
            )
        if any(g < 0 for g in self.couplings):
            raise ValueError("couplings must be >= 0")

    @property
    def n_resonators(self) -> int:
        return len(self.mechanical)

    @property
    def dims(self) -> tuple:
        return (self.optical.truncation,) + tuple(m.truncation for m in self.mechanical)

    def resonator(self, i: int) -> ModeSpec:
        self._check_index(i)
        return self.mechanical[i - 1]

    def coupling(self, i: int) -> float:
        self._check_index(i)
        return self.couplings[i - 1]

    def zeta(self, i: int) -> float:
        return self.coupling(i) / self.resonator(i).frequency

    def omega_minus(self, i: int) -> float:
        return self.optical.frequency - self.resonator(i).frequency

    def omega_plus(self, i: int) -> float:
        return self.optical.frequency + self.resonator(i).frequency

    def with_truncations(self, truncations: Sequence[int]) -> "SystemConfig":
        if len(truncations) != 1 + self.n_resonators:
            raise InvalidDimensionError(
                f"expected {1 + self.n_resonators} truncations, got {len(truncations)}"
            )
        optical = ModeSpec(self.optical.label, self.optical.frequency, truncations[0])
        mech = [ModeSpec(m.label, m.frequency, d) for m, d in zip(self.mechanical, truncations[1:])]
        return SystemConfig(optical, mech, self.couplings)

    def _check_index(self, i):
        if not 1 <= i <= self.n_resonators:
            raise IndexError(f"resonator index {i} out of range 1..{self.n_resonators}")


def weak_coupling_warnings(config: SystemConfig, occupations: Sequence[float]) -> list:
    """Messages for resonators where ``zeta_i**2 * nbar_i(0)`` exceeds 0.1."""
    out = []
    for i, nbar in enumerate(occupations, start=1):
        value = config.zeta(i) ** 2 * nbar
        if value > WEAK_COUPLING_LIMIT:
            out.append(
                f"resonator {i}: zeta^2 * nbar(0) = {value:.3g} > {WEAK_COUPLING_LIMIT}; "
                "weak optomechanical coupling assumption is marginal"
            )
    return out


def _freeze(matrix):
    matrix = sp.csr_matrix(matrix, dtype=complex, copy=True)
    matrix.eliminate_zeros()
    matrix.sort_indices()
    for arr in (matrix.data, matrix.indices, matrix.indptr):
        arr.flags.writeable = False
    return matrix


@dataclass(frozen=True)
class Operator:
    """Sparse operator on a composite space with mode dimensions ``dims``."""

    dims: tuple
    matrix: sp.csr_matrix = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise InvalidDimensionError(f"invalid dims {self.dims}")
        n = int(np.prod(dims))
        if self.matrix.shape != (n, n):
            raise InvalidDimensionError(f"matrix shape {self.matrix.shape} does not match dims {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", _freeze(self.matrix))

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def dag(self) -> "Operator":
        return Operator(self.dims, self.matrix.conj().T)

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def __matmul__(self, other):
        if isinstance(other, Operator):
            if other.dims != self.dims:
                raise InvalidDimensionError(f"dims {self.dims} and {other.dims} differ")
            return Operator(self.dims, self.matrix @ other.matrix)
        return self.matrix @ other

    def __mul__(self, scalar):
        return Operator(self.dims, self.matrix * scalar)

    __rmul__ = __mul__

    def __add__(self, other):
        if other.dims != self.dims:
            raise InvalidDimensionError(f"dims {self.dims} and {other.dims} differ")
        return Operator(self.dims, self.matrix + other.matrix)

    def __sub__(self, other):
        return self + (-1.0) * other


class DensityMatrix:
    """A validated density matrix. Construction rejects non-physical input."""

    __slots__ = ("_dims", "_matrix")

    def __init__(self, dims, matrix):
        dims = tuple(int(d) for d in dims)
        n = int(np.prod(dims))
        if sp.issparse(matrix):
            matrix = matrix.toarray() if n <= DENSE_LIMIT else sp.csr_matrix(matrix, dtype=complex)
        else:
            matrix = np.array(matrix, dtype=complex)
        if matrix.shape != (n, n):
            raise InvalidDimensionError(f"matrix shape {matrix.shape} does not match dims {dims}")
        _check_physical(matrix)
        if isinstance(matrix, np.ndarray):
            matrix.flags.writeable = False
        self._dims = dims
        self._matrix = matrix

    @property
    def dims(self) -> tuple:
        return self._dims

    @property
    def matrix(self):
        return self._matrix

    @property
    def size(self) -> int:
        return self._matrix.shape[0]

    def toarray(self) -> np.ndarray:
        m = self._matrix
        return m.toarray() if sp.issparse(m) else np.array(m)

    def populations(self) -> np.ndarray:
        """Diagonal of the density matrix reshaped to ``dims``."""
        diag = self._matrix.diagonal() if sp.issparse(self._matrix) else np.diag(self._matrix)
        return np.real(diag).reshape(self._dims)

    def marginal(self, mode: int) -> np.ndarray:
        """Fock-level populations of a single mode."""
        p = self.populations()
        axes = tuple(k for k in range(len(self._dims)) if k != mode)
        return p.sum(axis=axes) if axes else p

    def top_level_populations(self) -> list:
        return [float(self.marginal(k)[-1]) for k in range(len(self._dims))]

    @classmethod
    def from_numerical(cls, dims, matrix, clip=1e-10):
        """Repair a numerically computed state before validation.

        The matrix is Hermitized, eigenvalues in ``[-clip * lead, 0)`` are set
        to zero and the trace is renormalized. More negative eigenvalues are
        left alone so that validation rejects them.
        """
        m = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix, dtype=complex)
        m = 0.5 * (m + m.conj().T)
        tr = np.trace(m).real
        if not np.isfinite(tr) or tr <= 0:
            raise NonPhysicalStateError(f"state has non-positive or non-finite trace {tr}")
        m = m / tr
        w, v = np.linalg.eigh(m)
        lead = w.max()
        small = (w < 0) & (w >= -clip * lead)
        if small.any():
            w = np.where(small, 0.0, w)
            m = (v * w) @ v.conj().T
            m = 0.5 * (m + m.conj().T)
            m = m / np.trace(m).real
        return cls(dims, m)

    def __repr__(self):
        return f"DensityMatrix(dims={self._dims})"


def _check_physical(matrix):
    dense = matrix.toarray() if sp.issparse(matrix) else matrix
    if not np.all(np.isfinite(dense)):
        raise NonPhysicalStateError("state contains non-finite entries")
    herm = np.max(np.abs(dense - dense.conj().T)) if dense.size else 0.0
    if herm > HERMITIAN_TOL:
        raise NonPhysicalStateError(f"state is not Hermitian (deviation {herm:.3g})")
    tr = np.trace(dense)
    if abs(tr - 1) > TRACE_TOL:
        raise NonPhysicalStateError(f"state trace is {tr.real:.15g}, expected 1")
    if dense.shape[0] <= DENSE_LIMIT:
        w = np.linalg.eigvalsh(dense)
        if w.min() < -POSITIVITY_TOL:
            raise NonPhysicalStateError(f"state has negative eigenvalue {w.min():.3g}")
    elif np.real(np.diag(dense)).min() < -POSITIVITY_TOL:
        raise NonPhysicalStateError("state has negative populations")


def make_destroy(dim: int) -> Operator:
    """Truncated annihilation operator with ``<n-1|a|n> = sqrt(n)``."""
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"Fock dimension must be an integer >= 2, got {dim}")
    dim = int(dim)
    return Operator((dim,), sp.diags(np.sqrt(np.arange(1, dim)), 1, shape=(dim, dim), format="csr"))


def make_create(dim: int) -> Operator:
    return make_destroy(dim).dag()


def make_number(dim: int) -> Operator:
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"Fock dimension must be an integer >= 2, got {dim}")
    return Operator((int(dim),), sp.diags(np.arange(dim, dtype=float), 0, format="csr"))


def identity(dims) -> Operator:
    dims = (int(dims),) if np.isscalar(dims) else tuple(dims)
    n = int(np.prod(dims))
    return Operator(dims, sp.identity(n, format="csr"))


def projector(dim: int, level: int) -> Operator:
    """``|level><level|`` on a single mode."""
    m = sp.csr_matrix(([1.0], ([level], [level])), shape=(dim, dim))
    return Operator((dim,), m)


def fock_state(dims, levels) -> np.ndarray:
    """Column vector for the product Fock state ``|levels[0], levels[1], ...>``."""
    dims = (int(dims),) if np.isscalar(dims) else tuple(dims)
    levels = (int(levels),) if np.isscalar(levels) else tuple(levels)
    vec = np.zeros(int(np.prod(dims)), dtype=complex)
    vec[np.ravel_multi_index(levels, dims)] = 1.0
    return vec


def tensor(factors: Sequence[Operator]) -> Operator:
    """Kronecker product of operators, dims concatenated in order."""
    factors = list(factors)
    if not factors:
        raise ValueError("tensor() needs at least one factor")
    dims = sum((f.dims for f in factors), ())
    matrix = reduce(lambda x, y: sp.kron(x, y, format="csr"), (f.matrix for f in factors))
    return Operator(dims, matrix)


def embed(op: Operator, mode_index: int, config) -> Operator:
    """Place a single-mode operator at ``mode_index`` with identities elsewhere.

    ``config`` may be a :class:`SystemConfig` or a sequence of mode dimensions.
    """
    dims = config.dims if isinstance(config, SystemConfig) else tuple(int(d) for d in config)
    if not 0 <= mode_index < len(dims):
        raise IndexError(f"mode index {mode_index} out of range for dims {dims}")
    if len(op.dims) != 1:
        raise InvalidDimensionError(f"embed() expects a single-mode operator, got dims {op.dims}")
    if op.dims[0] != dims[mode_index]:
        raise InvalidDimensionError(
            f"operator dimension {op.dims[0]} does not match mode {mode_index} truncation {dims[mode_index]}"
        )
    factors = [op if k == mode_index else identity(d) for k, d in enumerate(dims)]
    return tensor(factors)


def thermal_state(dim: int, occupation: float) -> DensityMatrix:
    """Bose-Einstein state with ``rho_nn ~ (nbar / (1 + nbar))**n``, renormalized on the truncated space."""
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"Fock dimension must be an integer >= 2, got {dim}")
    if not np.isfinite(occupation):
        raise ValueError(f"occupation must be finite, got {occupation}")
    if occupation < 0:
        raise ValueError(f"occupation must be >= 0, got {occupation}")
    n = np.arange(int(dim))
    if occupation == 0:
        p = (n == 0).astype(float)
    else:
        # log form avoids 0**0 and overflow for large occupations
        logp = n * (np.log(occupation) - np.log1p(occupation))
        p = np.exp(logp - logp.max())
    p /= p.sum()
    return DensityMatrix((int(dim),), np.diag(p))


def product_state(states: Sequence[DensityMatrix]) -> DensityMatrix:
    dims = sum((s.dims for s in states), ())
    m = reduce(np.kron, (s.toarray() for s in states))
    return DensityMatrix(dims, m)


def diagonal_energies(config: SystemConfig, n_a: int, m: Sequence[int]) -> float:
    """Dressed-frame eigenenergy ``n_a w_a + sum_i m_i w_i - n_a**2 sum_i g_i**2 / w_i``."""
    m = list(m)
    if len(m) != config.n_resonators:
        raise ValueError(f"expected {config.n_resonators} phonon numbers, got {len(m)}")
    if not 0 <= n_a < config.optical.truncation:
        raise IndexError(f"photon number {n_a} outside 0..{config.optical.truncation - 1}")
    for i, mi in enumerate(m, start=1):
        if not 0 <= mi < config.resonator(i).truncation:
            raise IndexError(f"phonon number {mi} of resonator {i} out of range")
    energy = n_a * config.optical.frequency
    for i, mi in enumerate(m, start=1):
        w = config.resonator(i).frequency
        energy += mi * w - n_a**2 * config.coupling(i) ** 2 / w
    return energy


def dressed_gibbs_state(config: SystemConfig, temperature: float) -> DensityMatrix:
    """Gibbs state of the diagonal dressed Hamiltonian, Kerr shift included."""
    if temperature <= 0:
        raise ValueError("temperature must be > 0")
    dims = config.dims
    energies = np.array(
        [diagonal_energies(config, idx[0], idx[1:]) for idx in np.ndindex(*dims)]
    )
    logw = -(energies - energies.min()) / temperature
    p = np.exp(logw)
    p /= p.sum()
    if p.size > DENSE_LIMIT:
        warnings.warn("dressed_gibbs_state on a large space; storing sparse", stacklevel=2)
        return DensityMatrix(dims, sp.diags(p, format="csr"))
    return DensityMatrix(dims, np.diag(p))
