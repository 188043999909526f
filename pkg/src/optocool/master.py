"""Lindblad dissipators and Liouvillian superoperators.

The generator is purely dissipative: in the dressed frame the system
Hamiltonian is diagonal and drops out of populations and number
expectations, so no commutator term is assembled.

Vectorization is column stacking, ``vec(rho)[i + j*d] = rho[i, j]``, giving
``vec(A rho B) = (B^T kron A) vec(rho)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import InvalidDimensionError
from .fock import DensityMatrix, Operator, SystemConfig, embed, make_create, make_destroy
from .spectra import SCENARIOS, BathSpec, bath_rate, channel_table, spectrum


@dataclass(frozen=True)
class LindbladChannel:
    jump: Operator
    rate: float
    label: str = ""
    frequency: float = float("nan")

    def __post_init__(self):
        if not self.rate >= 0:
            raise ValueError(f"channel {self.label!r}: rate must be >= 0, got {self.rate}")


@dataclass(frozen=True)
class Liouvillian:
    dims: tuple
    channels: tuple
    superoperator: sp.csr_matrix = field(repr=False)
    mode_labels: tuple = ()

    def __post_init__(self):
        if not self.mode_labels:
            object.__setattr__(self, "mode_labels", tuple(str(k) for k in range(len(self.dims))))

    @property
    def hilbert_dim(self) -> int:
        return int(np.prod(self.dims))

    def apply(self, rho) -> np.ndarray:
        """``L rho`` for a density matrix or plain array, returned as a matrix."""
        m = rho.toarray() if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
        return unvec(self.superoperator @ vec(m), self.hilbert_dim)


def vec(matrix) -> np.ndarray:
    return np.asarray(matrix).reshape(-1, order="F")


def unvec(vector, dim: int) -> np.ndarray:
    return np.asarray(vector).reshape((dim, dim), order="F")


def dissipator_apply(jump: Operator, rho) -> np.ndarray:
    """``(2 o rho o^dag - o^dag o rho - rho o^dag o) / 2``."""
    m = rho.toarray() if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape != (jump.size, jump.size):
        raise InvalidDimensionError(f"state shape {m.shape} does not match operator size {jump.size}")
    if isinstance(rho, DensityMatrix) and rho.dims != jump.dims:
        raise InvalidDimensionError(f"state dims {rho.dims} differ from operator dims {jump.dims}")
    o = jump.matrix
    od = o.conj().T
    odo = od @ o
    return np.asarray(o @ m @ od - 0.5 * (odo @ m) - 0.5 * (m @ odo))


def dissipator_superoperator(jump: Operator) -> sp.csr_matrix:
    o = jump.matrix
    eye = sp.identity(jump.size, format="csr")
    odo = (o.conj().T @ o).tocsr()
    return (sp.kron(o.conj(), o) - 0.5 * sp.kron(eye, odo) - 0.5 * sp.kron(odo.T, eye)).tocsr()


def build_superoperator(channels: Sequence[LindbladChannel], mode_labels=()) -> Liouvillian:
    """Sum of ``rate * D[jump]`` over channels, as a sparse superoperator."""
    channels = tuple(channels)
    if not channels:
        raise ValueError("at least one channel is required")
    dims = channels[0].jump.dims
    for ch in channels:
        if ch.jump.dims != dims:
            raise InvalidDimensionError(f"channel {ch.label!r} has dims {ch.jump.dims}, expected {dims}")
    n = int(np.prod(dims))
    total = sp.csr_matrix((n * n, n * n), dtype=complex)
    for ch in channels:
        if ch.rate:
            total = total + ch.rate * dissipator_superoperator(ch.jump)
    total = sp.csr_matrix(total, copy=True)
    total.eliminate_zeros()
    total.sort_indices()
    return Liouvillian(dims, channels, total, tuple(mode_labels))


def mode_labels(config: SystemConfig) -> tuple:
    return ("a",) + tuple(str(i) for i in range(1, config.n_resonators + 1))


def build_scenario(scenario: str, config: SystemConfig, baths: Sequence[BathSpec]) -> Liouvillian:
    """Joint cavity-resonator Liouvillian for one of ``full``, ``cooling``, ``heating``."""
    table = channel_table(scenario, config, baths)
    ladders = {}
    for k, d in enumerate(config.dims):
        ladders[(k, "-")] = embed(make_destroy(d), k, config)
        ladders[(k, "+")] = embed(make_create(d), k, config)
    channels = []
    for entry in table:
        op = ladders[entry.factors[0]]
        for f in entry.factors[1:]:
            op = op @ ladders[f]
        channels.append(LindbladChannel(op, entry.rate, entry.label, entry.frequency))
    return build_superoperator(channels, mode_labels(config))


def _roles(baths):
    return {b.label: b for b in baths}


def reduced_resonator_generator(
    i: int,
    scenario: str,
    config: SystemConfig,
    baths: Sequence[BathSpec],
    cavity_occupation: float,
) -> tuple:
    """Optical-bath phonon rates ``(A_minus, A_plus)`` of resonator ``i`` after tracing out the cavity.

    Together with the mechanical rates ``G_i(+w_i)`` and ``G_i(-w_i)`` these
    define the reduced generator
    ``(A- + A_th-) D[b_i] + (A+ + A_th+) D[b_i^dag]``.
    """
    if scenario not in SCENARIOS:
        raise ValueError(f"scenario must be one of {SCENARIOS}, got {scenario!r}")
    if not cavity_occupation >= 0:
        raise ValueError(f"cavity occupation must be >= 0, got {cavity_occupation}")
    roles = _roles(baths)
    hot, cold = roles["H"], roles["C"]
    z2 = config.zeta(i) ** 2
    n = cavity_occupation
    wm, wp = config.omega_minus(i), config.omega_plus(i)
    if scenario == "cooling":
        return z2 * bath_rate(-wm, hot) * (n + 1), z2 * bath_rate(wm, hot) * n
    if scenario == "heating":
        return z2 * bath_rate(wp, hot) * n, z2 * bath_rate(-wp, hot) * (n + 1)
    a_minus = a_plus = 0.0
    for bath in (hot, cold):
        a_minus += spectrum(wp, bath) * n + spectrum(-wm, bath) * (n + 1)
        a_plus += spectrum(wm, bath) * n + spectrum(-wp, bath) * (n + 1)
    return z2 * a_minus, z2 * a_plus


def mechanical_rates(i: int, config: SystemConfig, baths: Sequence[BathSpec]) -> tuple:
    """``(A_th_minus, A_th_plus) = (G_i(w_i), G_i(-w_i))``."""
    bath = _roles(baths)[str(i)]
    w = config.resonator(i).frequency
    return spectrum(w, bath), spectrum(-w, bath)


def reduced_liouvillian(
    i: int,
    scenario: str,
    config: SystemConfig,
    baths: Sequence[BathSpec],
    cavity_occupation: float,
    truncation: Optional[int] = None,
) -> Liouvillian:
    """Single-resonator Liouvillian with the two effective rates."""
    a_minus, a_plus = reduced_resonator_generator(i, scenario, config, baths, cavity_occupation)
    th_minus, th_plus = mechanical_rates(i, config, baths)
    d = truncation or config.resonator(i).truncation
    b = make_destroy(d)
    return build_superoperator(
        [
            LindbladChannel(b, a_minus + th_minus, f"b{i}", config.resonator(i).frequency),
            LindbladChannel(b.dag(), a_plus + th_plus, f"b{i}†", -config.resonator(i).frequency),
        ],
        (str(i),),
    )
