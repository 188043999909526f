import numpy as np
import pytest

from optocool.fock import ModeSpec, SystemConfig
from optocool.presets import CAPTIONS
from optocool.spectra import BathSpec, with_default_filters

C2 = CAPTIONS["fig2"]


def fig2_system(truncations=(5, 30), n_res=1, omega_2=None, g_2=None, g_1=None):
    g_1 = C2["g_1"] if g_1 is None else g_1
    mech = [ModeSpec("1", C2["omega_1"], truncations[1])]
    couplings = [g_1]
    if n_res == 2:
        mech.append(ModeSpec("2", omega_2 or C2["omega_1"], truncations[-1]))
        couplings.append(C2["g_1"] if g_2 is None else g_2)
    return SystemConfig(ModeSpec("a", C2["omega_a"], truncations[0]), tuple(mech), tuple(couplings))


def fig2_baths(T_h, T_1, scenario="cooling", system=None, T_c=None, extra=()):
    baths = [
        BathSpec("H", T_h, C2["kappa_h"]),
        BathSpec("C", C2["T_c"] if T_c is None else T_c, C2["kappa_c"]),
        BathSpec("1", T_1, C2["kappa_1"]),
        *extra,
    ]
    if system is not None:
        baths = with_default_filters(scenario, system, baths)
    return baths


def fig5_baths(T_h, system, g_scenario="cooling"):
    f5 = CAPTIONS["fig5"]
    baths = [
        BathSpec("H", T_h, C2["kappa_h"]),
        BathSpec.from_occupation("C", f5["nbar_c"], C2["omega_a"], C2["kappa_c"]),
        BathSpec.from_occupation("1", f5["nbar_1"], C2["omega_1"], C2["kappa_1"]),
    ]
    return with_default_filters(g_scenario, system, baths)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
