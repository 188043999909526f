import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from optocool.errors import InvalidStateError
from optocool.spectra import (
    BathSpec,
    FilterSpec,
    bath_rate,
    bose_occupation,
    channel_table,
    default_filters,
    filter_factor,
    filtered_spectrum,
    spectrum,
    temperature_for_occupation,
    with_default_filters,
)

from conftest import C2, fig2_baths, fig2_system

# mpmath reference, scripts/oracle_values.py
SPEC_HALF_HALF = 0.79098835343466321
INV_E_MINUS_1 = 0.58197670686932642


def test_bose_limits():
    assert bose_occupation(1.0, 1e-5) == 0.0
    assert bose_occupation(0.3, 0.3) == pytest.approx(INV_E_MINUS_1, rel=1e-15)
    x = 1e-8
    assert bose_occupation(x, 1.0) * x == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("w,T", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0)])
def test_bose_bad_args(w, T):
    with pytest.raises(ValueError):
        bose_occupation(w, T)


def test_occupation_roundtrip():
    for n in (1e-3, 0.5, 10.0, 2000.0):
        assert bose_occupation(1e-7, temperature_for_occupation(1e-7, n)) == pytest.approx(n, rel=1e-12)


def test_spectrum_examples():
    cold = BathSpec("C", 1e-9, 1.0)
    assert spectrum(2.0, cold) == 2.0
    assert spectrum(-2.0, cold) == 0.0
    assert spectrum(0.5, BathSpec("C", 0.5, 1.0)) == pytest.approx(SPEC_HALF_HALF, rel=1e-14)
    assert spectrum(0.5, BathSpec("C", 0.5, 1.0, family="flat")) == pytest.approx(SPEC_HALF_HALF / 0.5, rel=1e-14)
    with pytest.raises(ValueError):
        spectrum(0.0, cold)


@given(
    st.floats(1e-9, 10.0),
    st.floats(1e-9, 1e4),
    st.floats(0.0, 10.0),
    st.sampled_from(["ohmic", "flat"]),
)
@settings(max_examples=300, deadline=None)
def test_kms_unfiltered(w, T, k, family):
    bath = BathSpec("C", T, k, family=family)
    down, up = spectrum(w, bath), spectrum(-w, bath)
    assume(up > 1e-300)
    assert down == pytest.approx(math.exp(w / T) * up, rel=1e-12)


@given(st.floats(0.5, 1.5), st.floats(1e-3, 10.0), st.floats(1e-4, 0.5), st.booleans())
@settings(max_examples=200, deadline=None)
def test_kms_lorentzian(w, T, width, adaptive):
    bath = BathSpec("H", T, 0.1, filter=FilterSpec(1.0, "lorentzian", width, adaptive))
    down, up = filtered_spectrum(w, bath), filtered_spectrum(-w, bath)
    assume(up > 1e-300)
    assert down == pytest.approx(math.exp(w / T) * up, rel=1e-12)
    assert down <= spectrum(w, bath) * (1 + 1e-15)


def test_hard_window():
    sys_ = fig2_system()
    wm, wp = sys_.omega_minus(1), sys_.omega_plus(1)
    hot = BathSpec("H", 10.0, 1e-8, filter=FilterSpec(wm, "hard-window", width=1e-7))
    assert filtered_spectrum(wp, hot) == 0.0
    assert filtered_spectrum(-wp, hot) == 0.0
    assert filtered_spectrum(wm, hot) == spectrum(wm, hot)
    assert filtered_spectrum(-wm, hot) == spectrum(-wm, hot)


def test_lorentzian_half_maximum():
    f = FilterSpec(center=1.0, mode="lorentzian", width=0.01, adaptive=False)
    bath = BathSpec("H", 2.0, 1e-3, family="flat", filter=f)
    # flat family: the unfiltered spectrum only varies through n(w), so compare the window itself
    assert filter_factor(1.01, bath) == pytest.approx(0.5, abs=1e-12)
    assert filter_factor(-0.99, bath) == pytest.approx(0.5, abs=1e-12)
    assert filtered_spectrum(1.0, bath) == spectrum(1.0, bath)


def test_adaptive_width_uses_rate():
    f = FilterSpec(center=1.0, mode="lorentzian", width=1e-12, adaptive=True)
    bath = BathSpec("H", 1.0, 0.01, filter=f)
    half = math.pi * spectrum(1.0 + 0.05, bath)
    assert filter_factor(1.05, bath) == pytest.approx(half**2 / (0.05**2 + half**2), rel=1e-12)


def test_missing_filter():
    with pytest.raises(InvalidStateError):
        filtered_spectrum(1.0, BathSpec("H", 1.0, 1.0))
    assert bath_rate(1.0, BathSpec("H", 1.0, 1.0)) == spectrum(1.0, BathSpec("H", 1.0, 1.0))


def test_bath_spec_invariants():
    with pytest.raises(ValueError):
        BathSpec("C", 0.0, 1.0)
    with pytest.raises(ValueError):
        BathSpec("C", 1.0, -1.0)
    with pytest.raises(ValueError):
        BathSpec("1", 1.0, 1.0, filter=FilterSpec(1.0))
    with pytest.raises(ValueError):
        FilterSpec(center=0.0)
    with pytest.raises(ValueError):
        FilterSpec(center=1.0, width=0.0)


def _factors(table):
    return {c.factors for c in table}


def test_cooling_channels():
    sys_ = fig2_system()
    table = channel_table("cooling", sys_, fig2_baths(100.0, 2e-4, "cooling", sys_))
    assert len(table) == 6
    assert _factors(table) == {
        ((0, "-"),), ((0, "+"),),
        ((0, "-"), (1, "+")), ((0, "+"), (1, "-")),
        ((1, "-"),), ((1, "+"),),
    }
    assert all(c.rate >= 0 for c in table)


def test_heating_channels():
    sys_ = fig2_system()
    baths = fig2_baths(100.0, 2e-4, "heating", sys_)
    table = {c.label: c for c in channel_table("heating", sys_, baths)}
    assert "H:a·b1" in table and "H:a†·b1†" in table
    assert "H:a·b1†" not in table
    hot = baths[0]
    assert table["H:a†·b1†"].rate == pytest.approx(sys_.zeta(1) ** 2 * filtered_spectrum(-sys_.omega_plus(1), hot), rel=1e-15)


def test_full_channel_count():
    sys_ = fig2_system(n_res=2)
    baths = fig2_baths(1.0, 2e-4, extra=[BathSpec("2", 2e-4, 1e-12)])
    assert len(channel_table("full", sys_, baths)) == 16


def test_cooling_separation_conditions():
    sys_ = fig2_system()
    hot, cold = fig2_baths(100.0, 2e-4, "cooling", sys_)[:2]
    assert bath_rate(sys_.optical.frequency, hot) == 0.0
    assert bath_rate(-sys_.optical.frequency, hot) == 0.0
    assert bath_rate(sys_.omega_minus(1), cold) == 0.0
    assert bath_rate(sys_.omega_plus(1), hot) == 0.0


def test_default_filters_cover_all_sidebands():
    sys_ = fig2_system(n_res=2, omega_2=0.75 * C2["omega_1"])
    f = default_filters("cooling", sys_)
    hot = BathSpec("H", 1.0, 1.0, filter=f["H"])
    for i in (1, 2):
        assert filter_factor(sys_.omega_minus(i), hot) == 1.0
        assert filter_factor(sys_.omega_plus(i), hot) == 0.0
    assert default_filters("full", sys_) == {}


def test_channel_table_role_errors():
    sys_ = fig2_system()
    baths = fig2_baths(1.0, 2e-4)
    with pytest.raises(ValueError, match="missing"):
        channel_table("cooling", sys_, baths[:2])
    with pytest.raises(ValueError, match="duplicate"):
        channel_table("cooling", sys_, baths + [baths[0]])
    with pytest.raises(ValueError):
        channel_table("sideways", sys_, baths)


def test_with_default_filters_keeps_explicit():
    sys_ = fig2_system()
    mine = FilterSpec(0.5, "lorentzian", 0.1)
    baths = with_default_filters("cooling", sys_, [BathSpec("H", 1.0, 1.0, filter=mine), BathSpec("C", 1.0, 1.0), BathSpec("1", 1.0, 1.0)])
    assert baths[0].filter is mine
    assert baths[1].filter.center == sys_.optical.frequency
    assert baths[2].filter is None
