"""Thermal bath coupling spectra and the Lindblad channel tables built from them.

Conventions: ``hbar = k_B = 1``, frequencies and temperatures in units of the
optical frequency. A positive argument to :func:`spectrum` is an emission
(downward) rate, a negative one the matching absorption rate, and the pair
obeys ``G(w) = exp(w / T) G(-w)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional, Sequence

from .errors import InvalidStateError
from .fock import SystemConfig

OPTICAL_ROLES = ("H", "C")
FAMILIES = ("ohmic", "flat")
FILTER_MODES = ("hard-window", "lorentzian")
SCENARIOS = ("full", "cooling", "heating")


@dataclass(frozen=True)
class FilterSpec:
    """Pass band of a spectrally filtered optical bath.

    ``hard-window`` passes ``|w|`` within ``width / 2`` of ``center``.
    ``lorentzian`` multiplies by a unit-peak Lorentzian whose half-width is
    ``max(pi * G(|w|), width)`` when ``adaptive`` is true, otherwise ``width``.
    """

    center: float
    mode: str = "hard-window"
    width: float = 1e-7
    adaptive: bool = True

    def __post_init__(self):
        if not self.center > 0:
            raise ValueError(f"filter center must be > 0, got {self.center}")
        if not self.width > 0:
            raise ValueError(f"filter width must be > 0, got {self.width}")
        if self.mode not in FILTER_MODES:
            raise ValueError(f"filter mode must be one of {FILTER_MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class BathSpec:
    """A thermal bath. ``label`` is ``"H"``, ``"C"`` or a resonator index like ``"1"``."""

    label: str
    temperature: float
    coupling: float
    family: str = "ohmic"
    filter: Optional[FilterSpec] = None

    def __post_init__(self):
        object.__setattr__(self, "label", str(self.label))
        if not self.temperature > 0:
            raise ValueError(f"bath {self.label}: temperature must be > 0, got {self.temperature}")
        if not self.coupling >= 0:
            raise ValueError(f"bath {self.label}: coupling must be >= 0, got {self.coupling}")
        if self.family not in FAMILIES:
            raise ValueError(f"bath {self.label}: family must be one of {FAMILIES}, got {self.family!r}")
        if self.filter is not None and self.label not in OPTICAL_ROLES:
            raise ValueError(f"bath {self.label}: only optical baths (H, C) can be filtered")

    def with_temperature(self, temperature: float) -> "BathSpec":
        return replace(self, temperature=temperature)

    @classmethod
    def from_occupation(cls, label, occupation, frequency, coupling, **kw) -> "BathSpec":
        """Bath whose Bose occupation at ``frequency`` equals ``occupation``."""
        return cls(label, temperature_for_occupation(frequency, occupation), coupling, **kw)


def bose_occupation(frequency: float, temperature: float) -> float:
    """``1 / (exp(w/T) - 1)``, evaluated as ``e^-x / (1 - e^-x)`` so huge ``w/T`` underflows to 0."""
    if not frequency > 0:
        raise ValueError(f"occupation needs frequency > 0, got {frequency}")
    if not temperature > 0:
        raise ValueError(f"occupation needs temperature > 0, got {temperature}")
    x = frequency / temperature
    return math.exp(-x) / -math.expm1(-x)


def temperature_for_occupation(frequency: float, occupation: float) -> float:
    if not occupation > 0:
        raise ValueError(f"occupation must be > 0 to define a temperature, got {occupation}")
    return frequency / math.log1p(1.0 / occupation)


def _strength(abs_freq: float, bath: BathSpec) -> float:
    if bath.family == "ohmic":
        return bath.coupling * abs_freq
    return bath.coupling


def spectrum(frequency: float, bath: BathSpec) -> float:
    """Unfiltered rate ``kappa(w)[1 + n(w)]`` for ``w > 0`` and ``kappa(|w|) n(|w|)`` for ``w < 0``."""
    if frequency == 0:
        raise ValueError("spectrum is undefined at zero frequency")
    w = abs(frequency)
    x = w / bath.temperature
    k = _strength(w, bath)
    if frequency > 0:
        return k / -math.expm1(-x)
    return k * math.exp(-x) / -math.expm1(-x)


def filter_factor(frequency: float, bath: BathSpec) -> float:
    """Multiplicative window applied by ``bath.filter``; identical for ``+w`` and ``-w``."""
    f = bath.filter
    if f is None:
        raise InvalidStateError(f"bath {bath.label} has no filter")
    w = abs(frequency)
    if f.mode == "hard-window":
        return 1.0 if abs(w - f.center) <= 0.5 * f.width else 0.0
    half = max(math.pi * spectrum(w, bath), f.width) if f.adaptive else f.width
    return half**2 / ((w - f.center) ** 2 + half**2)


def filtered_spectrum(frequency: float, bath: BathSpec) -> float:
    if bath.filter is None:
        raise InvalidStateError(f"bath {bath.label} has no filter")
    factor = filter_factor(frequency, bath)
    return spectrum(frequency, bath) * factor if factor else 0.0


def bath_rate(frequency: float, bath: BathSpec) -> float:
    """Filtered spectrum when the bath carries a filter, plain spectrum otherwise."""
    if bath.filter is None:
        return spectrum(frequency, bath)
    return filtered_spectrum(frequency, bath)


def default_filters(scenario: str, config: SystemConfig) -> dict:
    """Hard-window pass bands for the cooling and heating scenarios.

    The hot window covers every ``w_a - w_i`` (cooling) or ``w_a + w_i``
    (heating); both windows extend half the smallest mechanical frequency
    beyond their transitions so neighbouring sidebands stay in the stop band.
    """
    if scenario not in ("cooling", "heating"):
        return {}
    margin = 0.5 * min(m.frequency for m in config.mechanical)
    n = config.n_resonators
    if scenario == "cooling":
        sidebands = [config.omega_minus(i) for i in range(1, n + 1)]
    else:
        sidebands = [config.omega_plus(i) for i in range(1, n + 1)]
    lo, hi = min(sidebands), max(sidebands)
    hot = FilterSpec(center=0.5 * (lo + hi), mode="hard-window", width=(hi - lo) + 2 * margin)
    cold = FilterSpec(center=config.optical.frequency, mode="hard-window", width=2 * margin)
    return {"H": hot, "C": cold}


def with_default_filters(scenario: str, config: SystemConfig, baths: Sequence[BathSpec]) -> list:
    """Attach :func:`default_filters` to optical baths that have no filter of their own."""
    defaults = default_filters(scenario, config)
    out = []
    for b in baths:
        if b.filter is None and b.label in defaults:
            b = replace(b, filter=defaults[b.label])
        out.append(b)
    return out


class Channel(NamedTuple):
    """One Lindblad channel. ``factors`` lists ``(mode_index, "-" or "+")`` ladder factors."""

    label: str
    frequency: float
    rate: float
    factors: tuple


def bath_roles(config: SystemConfig, baths: Sequence[BathSpec]) -> dict:
    """Map role label to bath, checking exactly one H, one C and one per resonator."""
    roles = {}
    for b in baths:
        if b.label in roles:
            raise ValueError(f"duplicate bath role {b.label!r}")
        roles[b.label] = b
    expected = {"H", "C"} | {str(i) for i in range(1, config.n_resonators + 1)}
    missing = expected - roles.keys()
    if missing:
        raise ValueError(f"missing bath roles: {sorted(missing)}")
    extra = roles.keys() - expected
    if extra:
        raise ValueError(f"unexpected bath roles: {sorted(extra)}")
    return roles


def _name(mode, sign):
    base = "a" if mode == 0 else f"b{mode}"
    return base + ("†" if sign == "+" else "")


def _channel(role, frequency, rate, *factors):
    label = f"{role}:" + "·".join(_name(m, s) for m, s in factors)
    return Channel(label, frequency, rate, tuple(factors))


def channel_table(scenario: str, config: SystemConfig, baths: Sequence[BathSpec]) -> list:
    """Every Lindblad channel of a scenario with its evaluated rate.

    ``full`` uses unfiltered spectra: cavity channels for each optical bath
    and all four sideband channels per resonator with the hot and cold rates
    summed. ``cooling`` and ``heating`` keep only the cold-bath cavity
    channels and the hot-bath lower (cooling) or upper (heating) sideband.
    Mechanical channels are the same in every scenario.
    """
    if scenario not in SCENARIOS:
        raise ValueError(f"scenario must be one of {SCENARIOS}, got {scenario!r}")
    roles = bath_roles(config, baths)
    hot, cold = roles["H"], roles["C"]
    wa = config.optical.frequency
    out = []
    if scenario == "full":
        for bath in (cold, hot):
            out.append(_channel(bath.label, wa, spectrum(wa, bath), (0, "-")))
            out.append(_channel(bath.label, -wa, spectrum(-wa, bath), (0, "+")))
        for i in range(1, config.n_resonators + 1):
            z2 = config.zeta(i) ** 2
            wm, wp = config.omega_minus(i), config.omega_plus(i)

            def both(w):
                return z2 * (spectrum(w, hot) + spectrum(w, cold))

            out.append(_channel("HC", wm, both(wm), (0, "-"), (i, "+")))
            out.append(_channel("HC", -wm, both(-wm), (0, "+"), (i, "-")))
            out.append(_channel("HC", wp, both(wp), (0, "-"), (i, "-")))
            out.append(_channel("HC", -wp, both(-wp), (0, "+"), (i, "+")))
    else:
        out.append(_channel("C", wa, bath_rate(wa, cold), (0, "-")))
        out.append(_channel("C", -wa, bath_rate(-wa, cold), (0, "+")))
        for i in range(1, config.n_resonators + 1):
            z2 = config.zeta(i) ** 2
            if scenario == "cooling":
                w = config.omega_minus(i)
                out.append(_channel("H", w, z2 * bath_rate(w, hot), (0, "-"), (i, "+")))
                out.append(_channel("H", -w, z2 * bath_rate(-w, hot), (0, "+"), (i, "-")))
            else:
                w = config.omega_plus(i)
                out.append(_channel("H", w, z2 * bath_rate(w, hot), (0, "-"), (i, "-")))
                out.append(_channel("H", -w, z2 * bath_rate(-w, hot), (0, "+"), (i, "+")))
    for i in range(1, config.n_resonators + 1):
        mech = roles[str(i)]
        wi = config.resonator(i).frequency
        out.append(_channel(mech.label, wi, spectrum(wi, mech), (i, "-")))
        out.append(_channel(mech.label, -wi, spectrum(-wi, mech), (i, "+")))
    return out
