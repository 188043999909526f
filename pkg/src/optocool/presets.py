"""Figure-reproduction presets built from a frozen table of caption parameters.

All values are dimensionless (frequency unit ``w_a``, ``hbar = k_B = 1``).
The hot-bath sweep range is the captioned 4e4 K to 4e7 K divided by the
temperature unit ``hbar w_a / k_B`` with ``w_a = 2 pi x 1e14 Hz``.
"""
from __future__ import annotations

import copy
import math
from types import MappingProxyType

from .sweep import HBAR, K_B, OMEGA_A_SI

TEMPERATURE_UNIT_K = HBAR * OMEGA_A_SI / K_B

CAPTIONS = MappingProxyType(
    {
        "fig2": MappingProxyType(
            {
                "omega_a": 1.0,
                "omega_1": 1e-7,
                "kappa_h": 1e-8,
                "kappa_c": 1e-8,
                "kappa_1": 1e-12,
                "T_c": 1e-5,
                "g_1": 1e-9,
                "T_1": (1e-4, 2e-4, 3e-4),
                "T_h_kelvin": (4e4, 4e7),
            }
        ),
        "fig3": MappingProxyType(
            {
                "T_1": 2e-4,
                "T_2": 2e-4,
                "a": MappingProxyType({"omega_2/omega_1": 1.0, "g_2/g_1": 1.0, "kappa_2/kappa_1": 1.0}),
                "b": MappingProxyType({"omega_2/omega_1": 0.75, "g_2/g_1": 1.0, "kappa_2/kappa_1": 1.0}),
                "c": MappingProxyType({"omega_2/omega_1": 1.0, "g_2/g_1": 0.5, "kappa_2/kappa_1": 1.0}),
                "d": MappingProxyType({"omega_2/omega_1": 1.0, "g_2/g_1": 1.0, "kappa_2/kappa_1": 10.0}),
            }
        ),
        "fig5": MappingProxyType({"nbar_1": 10.0, "nbar_c": 0.5, "truncation": (7, 70)}),
    }
)

PRESETS = ("fig2", "fig3a", "fig3b", "fig3c", "fig3d", "fig5", "heating")
DEFAULT_POINTS = 40
# fig3b: resolves the two lower sidebands, which sit 0.25 w_1 apart
FIG3B_HALF_WIDTH = 0.1 * CAPTIONS["fig2"]["omega_1"]


def default_th_range() -> tuple:
    lo, hi = CAPTIONS["fig2"]["T_h_kelvin"]
    return lo / TEMPERATURE_UNIT_K, hi / TEMPERATURE_UNIT_K


def _base(T1: float) -> dict:
    c = CAPTIONS["fig2"]
    return {
        "scenario": "cooling",
        "system": {
            "optical": {"frequency": c["omega_a"], "truncation": 5},
            "mechanical": {"1": {"frequency": c["omega_1"], "coupling": c["g_1"], "truncation": 30}},
        },
        "baths": {
            "H": {"temperature": 1e-3, "coupling": c["kappa_h"]},
            "C": {"temperature": c["T_c"], "coupling": c["kappa_c"]},
            "1": {"temperature": T1, "coupling": c["kappa_1"]},
        },
        "solver": {"method": "analytic"},
    }


def _with_sweep(raw: dict, points: int, th_range) -> dict:
    lo, hi = th_range or default_th_range()
    raw["sweep"] = {"parameter": "baths.H.temperature", "start": lo, "stop": hi, "points": points, "spacing": "log"}
    return raw


def _fig3(panel: str) -> dict:
    c2, c3 = CAPTIONS["fig2"], CAPTIONS["fig3"]
    ratios = c3[panel]
    raw = _base(c3["T_1"])
    raw["system"]["mechanical"]["2"] = {
        "frequency": c2["omega_1"] * ratios["omega_2/omega_1"],
        "coupling": c2["g_1"] * ratios["g_2/g_1"],
        "truncation": 30,
    }
    raw["baths"]["2"] = {"temperature": c3["T_2"], "coupling": c2["kappa_1"] * ratios["kappa_2/kappa_1"]}
    if panel == "b":
        w_minus_1 = c2["omega_a"] - c2["omega_1"]
        raw["baths"]["H"]["filter"] = {
            "center": w_minus_1,
            "mode": "lorentzian",
            "width": FIG3B_HALF_WIDTH,
            "adaptive": False,
        }
    return raw


def preset_configs(name: str, points: int = DEFAULT_POINTS, th_range=None) -> list:
    """Raw run configurations of a preset, one per plotted curve."""
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {PRESETS}")
    c = CAPTIONS["fig2"]
    if name == "fig2":
        raws = [_base(T1) for T1 in c["T_1"]]
    elif name.startswith("fig3"):
        raws = [_fig3(name[-1])]
    elif name == "fig5":
        f5 = CAPTIONS["fig5"]
        na_trunc, m_trunc = f5["truncation"]
        raws = []
        for method in ("analytic", "joint-steady-state"):
            raw = _base(1e-4)
            raw["system"]["optical"]["truncation"] = na_trunc
            raw["system"]["mechanical"]["1"]["truncation"] = m_trunc
            raw["baths"]["C"] = {"occupation": f5["nbar_c"], "coupling": c["kappa_c"]}
            raw["baths"]["1"] = {"occupation": f5["nbar_1"], "coupling": c["kappa_1"]}
            raw["solver"] = {"method": method}
            raws.append(raw)
    else:
        raw = _base(CAPTIONS["fig3"]["T_1"])
        raw["scenario"] = "heating"
        raws = [raw]
    out = []
    for raw in raws:
        raw["preset"] = name
        out.append(_with_sweep(copy.deepcopy(raw), points, th_range))
    return out


def caption_parameters(raw: dict) -> dict:
    """Caption-table view of a fig2-style raw config, for fidelity checks."""
    m1 = raw["system"]["mechanical"]["1"]
    b = raw["baths"]
    return {
        "omega_a": raw["system"]["optical"]["frequency"],
        "omega_1": m1["frequency"],
        "g_1": m1["coupling"],
        "kappa_h": b["H"]["coupling"],
        "kappa_c": b["C"]["coupling"],
        "kappa_1": b["1"]["coupling"],
        "T_c": b["C"].get("temperature", math.nan),
    }
