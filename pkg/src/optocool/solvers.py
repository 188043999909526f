"""Steady states, time evolution and observables of Liouvillians."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.integrate import solve_ivp

from .errors import (
    ConvergenceError,
    InvalidDimensionError,
    NonPhysicalStateError,
    NonUniqueSteadyStateError,
    NumericalCorruptionError,
    StiffnessError,
)
from .fock import DensityMatrix, Operator, embed, make_number, projector
from .master import Liouvillian, unvec, vec

log = logging.getLogger(__name__)

DIRECT_LIMIT = 300_000
ORACLE_LIMIT = 64
TOP_LEVEL_FLAG = 1e-6


@dataclass(frozen=True)
class SteadyStateResult:
    state: DensityMatrix
    residual: float
    top_level_populations: list
    mode_labels: tuple = ()

    @property
    def truncation_flags(self) -> list:
        """Mode labels whose highest Fock level holds more than 1e-6 of the population."""
        labels = self.mode_labels or tuple(str(k) for k in range(len(self.top_level_populations)))
        return [lab for lab, p in zip(labels, self.top_level_populations) if p > TOP_LEVEL_FLAG]


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    observables: dict
    final_state: DensityMatrix


def _trace_row(dim: int) -> sp.csr_matrix:
    idx = np.arange(dim) * (dim + 1)
    return sp.csr_matrix((np.ones(dim), (np.zeros(dim, dtype=int), idx)), shape=(1, dim * dim))


def _null_dimension(matrix, rel_tol=1e-9):
    dense = matrix.toarray()
    s = scipy.linalg.svdvals(dense)
    if s[0] == 0:
        return dense.shape[0]
    return int(np.sum(s < rel_tol * s[0]))


def steady_state(
    L: Liouvillian,
    tol: float = 1e-9,
    method: str = "auto",
    replace_row: int = 0,
) -> SteadyStateResult:
    """Solve ``L vec(rho) = 0`` with ``tr(rho) = 1``.

    Row ``replace_row`` of the (rescaled) superoperator is swapped for the
    trace constraint; it must be a population equation ``k * (d + 1)``. ``method`` is ``"direct"`` (sparse LU), ``"iterative"``
    (LSMR least squares) or ``"auto"``, which factorizes up to
    ``DIRECT_LIMIT`` unknowns. The reported residual is
    ``||L vec(rho)||_2 / max|L_ij|``.
    """
    M = L.superoperator.tocsr()
    d = L.hilbert_dim
    n = d * d
    scale = abs(M).max() if M.nnz else 0.0
    if scale == 0:
        raise NonUniqueSteadyStateError("Liouvillian is zero; every state is stationary", n)
    M = (M / scale).tocsr()
    trace = _trace_row(d)
    leak = abs(trace @ M).max() if M.nnz else 0.0
    if leak > 1e-10:
        raise ValueError(f"Liouvillian is not trace preserving (max |vec(I)^dag L| = {leak:.3g})")
    if not 0 <= replace_row < n:
        raise IndexError(f"replace_row {replace_row} out of range")
    if replace_row % (d + 1):
        # coherence equations are independent of the rest; only a population row is redundant
        raise ValueError(f"replace_row must address a population equation (a multiple of {d + 1})")

    keep = np.ones(n)
    keep[replace_row] = 0.0
    A = sp.diags(keep) @ M
    rows = sp.csr_matrix(
        (trace.data, (np.full(trace.nnz, replace_row), trace.indices)), shape=(n, n)
    )
    A = (A + rows).tocsc()
    b = np.zeros(n, dtype=complex)
    b[replace_row] = 1.0

    if method == "auto":
        method = "direct" if n <= DIRECT_LIMIT else "iterative"
    if method == "direct":
        try:
            v = spla.splu(A).solve(b)
        except RuntimeError as exc:
            null = _null_dimension(M) if n <= ORACLE_LIMIT**2 else None
            raise NonUniqueSteadyStateError(
                f"steady-state system is singular ({exc}); null-space dimension {null}", null
            ) from exc
    elif method == "iterative":
        out = spla.lsmr(A, b, atol=1e-14, btol=1e-14, maxiter=20 * n)
        v = out[0]
    else:
        raise ValueError(f"unknown method {method!r}")

    if not np.all(np.isfinite(v)):
        null = _null_dimension(M) if n <= ORACLE_LIMIT**2 else None
        raise NonUniqueSteadyStateError("steady-state solve produced non-finite values", null)

    rho = unvec(v, d)
    try:
        state = DensityMatrix.from_numerical(L.dims, rho)
    except NonPhysicalStateError as exc:
        null = _null_dimension(M) if n <= ORACLE_LIMIT**2 else None
        if null is not None and null > 1:
            raise NonUniqueSteadyStateError(
                f"steady state is not unique; null-space dimension {null}", null
            ) from exc
        raise ConvergenceError(f"steady-state solution is not a physical state: {exc}") from exc
    residual = float(np.linalg.norm(M @ vec(state.toarray())))
    if residual > tol:
        null = _null_dimension(M) if n <= ORACLE_LIMIT**2 else None
        if null is not None and null > 1:
            raise NonUniqueSteadyStateError(
                f"steady state is not unique; null-space dimension {null}", null
            )
        raise ConvergenceError(f"steady-state residual {residual:.3g} exceeds tolerance {tol:.3g}")
    return SteadyStateResult(state, residual, state.top_level_populations(), L.mode_labels)


def _linear_functional(op: Operator, d: int) -> sp.csr_matrix:
    """Row vector ``w`` with ``w @ vec(rho) = tr(op rho)``."""
    coo = op.matrix.tocoo()
    cols = coo.col + coo.row * d
    return sp.csr_matrix((coo.data, (np.zeros_like(cols), cols)), shape=(1, d * d))


def default_observables(L: Liouvillian) -> dict:
    """Number operator and top-level projector for every mode."""
    out = {}
    for k, (dim, label) in enumerate(zip(L.dims, L.mode_labels)):
        out[f"n_{label}"] = embed(make_number(dim), k, L.dims)
        out[f"top_{label}"] = embed(projector(dim, dim - 1), k, L.dims)
    return out


def evolve(
    L: Liouvillian,
    rho0: DensityMatrix,
    t_grid: Sequence[float],
    observables: Optional[Mapping[str, Operator]] = None,
    rtol: float = 1e-8,
    atol: float = 1e-10,
    method: str = "DOP853",
) -> Trajectory:
    """Integrate ``d rho / dt = L rho`` with an adaptive explicit Runge-Kutta scheme.

    Observables default to :func:`default_observables` and are recorded at
    every point of ``t_grid``, which must start at 0 and increase strictly.
    """
    times = np.asarray(t_grid, dtype=float)
    if times.ndim != 1 or times.size == 0 or times[0] != 0:
        raise ValueError("t_grid must be a non-empty sequence starting at 0")
    if np.any(np.diff(times) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    if rho0.dims != L.dims:
        raise InvalidDimensionError(f"state dims {rho0.dims} differ from Liouvillian dims {L.dims}")
    d = L.hilbert_dim
    observables = default_observables(L) if observables is None else dict(observables)
    functionals = {k: _linear_functional(op, d) for k, op in observables.items()}

    v0 = vec(rho0.toarray()).astype(complex)
    M = L.superoperator.tocsr()
    if times.size == 1 or M.nnz == 0:
        ys = np.repeat(v0[:, None], times.size, axis=1)
    else:
        sol = solve_ivp(
            lambda t, y: M @ y,
            (0.0, times[-1]),
            v0,
            method=method,
            t_eval=times,
            rtol=rtol,
            atol=atol,
        )
        if not sol.success:
            raise StiffnessError(
                f"integrator stopped at t={sol.t[-1] if sol.t.size else 0:.3g}: {sol.message}. "
                "Reduce the spread of rates or use expm_oracle for small systems."
            )
        ys = sol.y
    # Hermitian observables: Re tr(O rho) equals tr(O rho_h) for the Hermitian part
    values = {k: np.real(np.asarray(w @ ys)).ravel() for k, w in functionals.items()}
    final = DensityMatrix.from_numerical(L.dims, unvec(ys[:, -1], d), clip=1e-6)
    return Trajectory(times, values, final)


def expm_oracle(L: Liouvillian, rho0: DensityMatrix, t):
    """Dense ``exp(L t) vec(rho0)`` reshaped to a matrix. Test reference only.

    ``t`` may also be a uniform grid starting at 0, in which case one
    propagator ``exp(L dt)`` is applied repeatedly and a list is returned.
    """
    d = L.hilbert_dim
    if d > ORACLE_LIMIT:
        raise InvalidDimensionError(f"expm_oracle is limited to dimension {ORACLE_LIMIT}, got {d}")
    if np.ndim(t) == 0:
        if t == 0:
            return rho0.toarray()
        v = scipy.linalg.expm(L.superoperator.toarray() * t) @ vec(rho0.toarray())
        return unvec(v, d)
    grid = np.asarray(t, dtype=float)
    steps = np.diff(grid)
    if grid[0] != 0 or steps.size == 0 or not np.allclose(steps, steps[0], rtol=1e-12, atol=0):
        raise ValueError("expm_oracle needs a uniform grid starting at 0")
    step = scipy.linalg.expm(L.superoperator.toarray() * steps[0])
    v = vec(rho0.toarray()).astype(complex)
    out = [unvec(v, d)]
    for _ in steps:
        v = step @ v
        out.append(unvec(v, d))
    return out


def expectation(state: DensityMatrix, observable: Operator) -> float:
    """``Re tr(observable rho)``; a sizeable imaginary part signals corrupted input."""
    if state.dims != observable.dims:
        raise InvalidDimensionError(f"state dims {state.dims} differ from observable dims {observable.dims}")
    value = (observable.matrix @ state.matrix).diagonal().sum()
    if abs(value.imag) > 1e-10:
        raise NumericalCorruptionError(f"expectation has imaginary part {value.imag:.3g}")
    return float(value.real)
