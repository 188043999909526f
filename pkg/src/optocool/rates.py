"""Closed-form rate model: phonon transition rates and occupations.

Rates are plain floats computed from :mod:`optocool.spectra`; Bose factors
are evaluated as ``e^-x / (1 - e^-x)`` so that ``w/T`` of order ``1e5``
underflows cleanly to zero instead of overflowing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InstabilityError
from .fock import SystemConfig
from .master import mechanical_rates, reduced_resonator_generator
from .spectra import SCENARIOS, BathSpec, bath_roles, bath_rate, bose_occupation, spectrum


@dataclass(frozen=True)
class RateSet:
    """Phonon rates of one resonator.

    ``A_minus``/``A_plus`` come from the optical baths, ``A_th_minus``/
    ``A_th_plus`` from the resonator's own bath.
    """

    A_minus: float
    A_plus: float
    A_th_minus: float
    A_th_plus: float
    scenario: str = "cooling"

    @property
    def Gamma(self) -> float:
        """Net optical damping ``A_minus - A_plus``."""
        return self.A_minus - self.A_plus

    @property
    def kappa(self) -> float:
        """Mechanical damping ``A_th_minus - A_th_plus``, i.e. ``kappa_i(w_i)``."""
        return self.A_th_minus - self.A_th_plus

    @property
    def nbar(self) -> float:
        """Thermal occupation of the mechanical bath at the resonator frequency."""
        return self.A_th_plus / self.kappa


@dataclass(frozen=True)
class AppendixRates:
    gamma_c: float
    gamma_h: float
    gamma_1: float
    beta_c: float
    beta_h: float
    beta_1: float

    def __post_init__(self):
        for name in ("gamma_c", "gamma_h", "gamma_1"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        for name in ("beta_c", "beta_h", "beta_1"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")


def cavity_occupation_ss(
    config: SystemConfig,
    baths: Sequence[BathSpec],
    scenario: str = "cooling",
    form: str = "balance",
) -> float:
    """Steady cavity occupation with the order-zeta^2 corrections dropped.

    ``form="balance"`` divides the absorption rates by the net decay
    ``G(w) - G(-w)``, so with a negligible mechanical contribution the
    result is the cold-bath occupation ``n_c(w_a)``. ``form="sum"`` divides
    by ``G(w) + G(-w)`` instead, which gives ``n_c / (1 + 2 n_c)`` in that
    limit.

    Optical baths at ``w_a`` are the filtered cold bath for ``cooling`` and
    ``heating`` and both unfiltered optical baths for ``full``; every
    resonator's bath contributes through ``G_i(+-w_i)``.
    """
    if scenario not in SCENARIOS:
        raise ValueError(f"scenario must be one of {SCENARIOS}, got {scenario!r}")
    roles = bath_roles(config, baths)
    wa = config.optical.frequency
    if scenario == "full":
        down = [spectrum(wa, roles["C"]), spectrum(wa, roles["H"])]
        up = [spectrum(-wa, roles["C"]), spectrum(-wa, roles["H"])]
    else:
        down = [bath_rate(wa, roles["C"])]
        up = [bath_rate(-wa, roles["C"])]
    for i in range(1, config.n_resonators + 1):
        th_minus, th_plus = mechanical_rates(i, config, baths)
        down.append(th_minus)
        up.append(th_plus)
    if form == "balance":
        denom = sum(down) - sum(up)
    elif form == "sum":
        denom = sum(down) + sum(up)
    else:
        raise ValueError(f"form must be 'balance' or 'sum', got {form!r}")
    if not denom > 0:
        raise InstabilityError("cavity has no net decay; occupation undefined")
    return sum(up) / denom


def resonator_rates(
    i: int,
    scenario: str,
    config: SystemConfig,
    baths: Sequence[BathSpec],
    cavity_occupation: Optional[float] = None,
) -> RateSet:
    """Full :class:`RateSet` of resonator ``i``; the cavity occupation defaults to :func:`cavity_occupation_ss`."""
    if cavity_occupation is None:
        cavity_occupation = cavity_occupation_ss(config, baths, scenario)
    a_minus, a_plus = reduced_resonator_generator(i, scenario, config, baths, cavity_occupation)
    th_minus, th_plus = mechanical_rates(i, config, baths)
    return RateSet(a_minus, a_plus, th_minus, th_plus, scenario)


def unfiltered_rates(config, baths, cavity_occupation: Optional[float] = None, i: int = 1) -> RateSet:
    """Rates of the unfiltered model, summing hot and cold bath contributions."""
    return resonator_rates(i, "full", config, baths, cavity_occupation)


def phonon_ss_cooling(rates: RateSet, kappa_1: Optional[float] = None, nbar_1: Optional[float] = None) -> float:
    """``(A+ + kappa n) / (Gamma + kappa)``.

    ``kappa_1`` and ``nbar_1`` default to the mechanical damping and
    occupation implied by ``rates``.
    """
    kappa = rates.kappa if kappa_1 is None else kappa_1
    nbar = rates.nbar if nbar_1 is None else nbar_1
    denom = rates.Gamma + kappa
    if not denom > 0:
        raise InstabilityError(
            f"net damping Gamma + kappa = {denom:.3g} is not positive; no steady state"
        )
    return (rates.A_plus + kappa * nbar) / denom


def laser_cooling_occupation(A_minus: float, A_plus: float, kappa_1: float, nbar_1: float) -> float:
    """Sideband-cooling comparison ``(A+ + kappa n) / (Gamma_opt + kappa)`` for caller-supplied rates."""
    return phonon_ss_cooling(RateSet(A_minus, A_plus, 0.0, 0.0, "laser"), kappa_1, nbar_1)


def phonon_ss_multi(i: int, config: SystemConfig, baths: Sequence[BathSpec]) -> float:
    """Steady phonon number of resonator ``i`` under the cooling filters."""
    return phonon_ss_cooling(resonator_rates(i, "cooling", config, baths))


def phonon_transient_heating(rates: RateSet, t: float, kappa_1=None, nbar_1=None) -> float:
    """``(A+ + kappa n)/(Gamma + kappa) + n exp(-t (Gamma + kappa))`` as published.

    At ``t = 0`` this is not ``n``; :func:`phonon_transient_exact` gives the
    solution of the two-rate equation with a prescribed initial value.
    """
    kappa = rates.kappa if kappa_1 is None else kappa_1
    nbar = rates.nbar if nbar_1 is None else nbar_1
    total = rates.Gamma + kappa
    offset = (rates.A_plus + kappa * nbar) / total
    return offset + nbar * math.exp(-t * total)


def phonon_transient_exact(rates: RateSet, t: float, n0: Optional[float] = None, kappa_1=None, nbar_1=None) -> float:
    """Solution of ``dn/dt = A+ + kappa nbar - (Gamma + kappa) n`` from ``n(0) = n0`` (default ``nbar``)."""
    kappa = rates.kappa if kappa_1 is None else kappa_1
    nbar = rates.nbar if nbar_1 is None else nbar_1
    n0 = nbar if n0 is None else n0
    total = rates.Gamma + kappa
    drive = rates.A_plus + kappa * nbar
    # n0 e^{-lt} + drive (1 - e^{-lt}) / l, stable as l -> 0
    growth = t if total == 0 else -math.expm1(-t * total) / total
    return n0 * math.exp(-t * total) + drive * growth


def phonon_rhs(rates: RateSet, n: float) -> float:
    """``(A+ + A_th+)(n + 1) - (A- + A_th-) n``."""
    up = rates.A_plus + rates.A_th_plus
    down = rates.A_minus + rates.A_th_minus
    return up * (n + 1) - down * n


def appendix_ode_rhs(state, rates: AppendixRates, omegas) -> tuple:
    """Photon and phonon rate equations in the infinite hot-temperature limit.

    ``state = (n_a, n_1)`` and ``omegas = (w_a, w_1)``.
    """
    n_a, n_1 = state
    w_a, w_1 = omegas
    e_c = math.exp(-rates.beta_c * w_a)
    e_1 = math.exp(-rates.beta_1 * w_1)
    dn_a = -rates.gamma_c * (1 - e_c) * n_a + rates.gamma_c * e_c + rates.gamma_h * (n_1 - n_a)
    dn_1 = -rates.gamma_1 * (1 - e_1) * n_1 + rates.gamma_1 * e_1 + rates.gamma_h * (n_a - n_1)
    return dn_a, dn_1


def appendix_ss(rates: AppendixRates, omegas) -> float:
    """Closed-form phonon number; the fixed point of :func:`appendix_ode_rhs` once ``gamma_h`` dominates."""
    w_a, w_1 = omegas
    up = rates.gamma_c * math.exp(-rates.beta_c * w_a) + rates.gamma_1 * math.exp(-rates.beta_1 * w_1)
    denom = -up + rates.gamma_c + rates.gamma_1
    if not denom > 0:
        raise InstabilityError(f"non-positive denominator {denom:.3g}")
    return up / denom


def appendix_fixed_point(rates: AppendixRates, omegas) -> tuple:
    """Exact ``(n_a, n_1)`` fixed point of :func:`appendix_ode_rhs` for finite ``gamma_h``."""
    w_a, w_1 = omegas
    e_c = math.exp(-rates.beta_c * w_a)
    e_1 = math.exp(-rates.beta_1 * w_1)
    c, C = rates.gamma_c * (1 - e_c), rates.gamma_c * e_c
    d, D = rates.gamma_1 * (1 - e_1), rates.gamma_1 * e_1
    h = rates.gamma_h
    det = c * d + h * (c + d)
    if not det > 0:
        raise InstabilityError("rate equations have no unique fixed point")
    n_a = ((d + h) * C + h * D) / det
    n_1 = ((c + h) * D + h * C) / det
    return n_a, n_1


def appendix_ss_ohmic(kappa_c, nbar_c, kappa_1, nbar_1, omega_a=1.0, omega_1=1.0) -> float:
    """``(w_a k_c n_c + w_1 k_1 n_1) / (w_a k_c + w_1 k_1)``."""
    denom = omega_a * kappa_c + omega_1 * kappa_1
    if not denom > 0:
        raise InstabilityError("non-positive denominator")
    return (omega_a * kappa_c * nbar_c + omega_1 * kappa_1 * nbar_1) / denom


def ohmic_appendix_rates(config: SystemConfig, baths: Sequence[BathSpec], gamma_h: float) -> AppendixRates:
    """Map bath spectra onto appendix relaxation rates: ``gamma_x = G_x(w_x)`` so ``gamma_x e^(-beta w) = G_x(-w_x)``."""
    roles = bath_roles(config, baths)
    wa, w1 = config.optical.frequency, config.resonator(1).frequency
    cold, mech, hot = roles["C"], roles["1"], roles["H"]
    return AppendixRates(
        gamma_c=spectrum(wa, cold),
        gamma_h=gamma_h,
        gamma_1=spectrum(w1, mech),
        beta_c=1 / cold.temperature,
        beta_h=1 / hot.temperature,
        beta_1=1 / mech.temperature,
    )


def mechanical_occupations(config: SystemConfig, baths: Sequence[BathSpec]) -> list:
    roles = bath_roles(config, baths)
    return [
        bose_occupation(config.resonator(i).frequency, roles[str(i)].temperature)
        for i in range(1, config.n_resonators + 1)
    ]
