import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bpsk_wiretap.capacity import (ChannelParamSet, capacity_report, capacity_sweep, cc_capacity,
                                   clip_nonnegative, cq_capacity, qq_capacity,
                                   received_photon_number)
from bpsk_wiretap.entropy import binary_entropy, h_bpsk, homodyne_error
from bpsk_wiretap.errors import ConfigError, DomainError

# 40-digit mpmath values at nbar_B = 1, nbar_E = 0.2
QQ_REF = 0.34098383175551667229
CQ_REF = 0.19762131559075651073
CC_REF = 0.53544686547861225570


def test_received_photon_number():
    assert received_photon_number(1.0, 7.0) == 7.0
    assert received_photon_number(0.0, 7.0) == 0.0
    assert received_photon_number(1e-2, 1e6) == pytest.approx(100.0, rel=1e-15)
    with pytest.raises(DomainError):
        received_photon_number(1.5, 1.0)


def test_param_set_validation():
    with pytest.raises(ConfigError):
        ChannelParamSet((), (0.1,), 1.0)
    with pytest.raises(ConfigError):
        ChannelParamSet((0.1,), (), 1.0)
    with pytest.raises(DomainError):
        ChannelParamSet((1.2,), (0.1,), 1.0)
    with pytest.raises(ConfigError):
        ChannelParamSet((0.5,), (0.1,), -1.0)
    p = ChannelParamSet((0.5, 0.1, 0.5), (0.3,), 2)
    assert p.tau_set == (0.1, 0.5)


def test_qq_examples():
    assert qq_capacity(ChannelParamSet.singleton(1.0, 0.0, 1.0)).raw == pytest.approx(h_bpsk(1.0))
    assert qq_capacity(ChannelParamSet.singleton(0.3, 0.3, 5.0)).raw == 0.0
    entry = qq_capacity(ChannelParamSet.singleton(1.0, math.sqrt(0.2), 1.0))
    assert entry.raw == pytest.approx(QQ_REF, rel=1e-13)


def test_cq_examples():
    assert cq_capacity(ChannelParamSet.singleton(1.0, 0.0, 1e4)).raw == pytest.approx(1.0)
    entry = cq_capacity(ChannelParamSet.singleton(0.0, 0.5, 1.0))
    assert entry.raw == pytest.approx(-h_bpsk(0.25))
    assert entry.clipped and entry.value == 0.0
    assert cq_capacity(ChannelParamSet.singleton(1.0, math.sqrt(0.2), 1.0)).raw == \
        pytest.approx(CQ_REF, rel=1e-12)


def test_cc_examples():
    assert cc_capacity(ChannelParamSet.singleton(0.4, 0.4, 3.0)).raw == 0.0
    bob = 1 - binary_entropy(homodyne_error(2.0))
    assert cc_capacity(ChannelParamSet.singleton(1.0, 0.0, 2.0)).raw == pytest.approx(bob)
    assert cc_capacity(ChannelParamSet.singleton(1.0, math.sqrt(0.2), 1.0)).raw == \
        pytest.approx(CC_REF, rel=1e-12)


@pytest.mark.parametrize("raw, expected", [(-0.3, (0.0, True)), (0.0, (0.0, False)), (0.34, (0.34, False))])
def test_clip(raw, expected):
    assert clip_nonnegative(raw) == expected


def test_worst_case_selection_and_ties():
    p = ChannelParamSet((0.2, 0.5, 0.9), (0.05, 0.1, 0.15), 10.0)
    for fn in (qq_capacity, cq_capacity, cc_capacity):
        e = fn(p)
        assert e.worst_tau == 0.2
        assert e.worst_eta == 0.15
    # every eta gives the vacuum: all terms tie, smallest parameter wins
    tie = qq_capacity(ChannelParamSet((1.0,), (0.1, 0.2, 0.3), 0.0))
    assert tie.worst_eta == 0.1


def test_interval_endpoints():
    p = ChannelParamSet.from_intervals((0.2, 0.6), (0.1, 0.3), 4.0)
    assert p.tau_set == (0.2, 0.6) and p.eta_set == (0.1, 0.3)
    dense = ChannelParamSet(tuple(np.linspace(0.2, 0.6, 41)), tuple(np.linspace(0.1, 0.3, 41)), 4.0)
    for fn in (qq_capacity, cq_capacity, cc_capacity):
        assert fn(p).raw == pytest.approx(fn(dense).raw, abs=1e-15)
    with pytest.raises(ConfigError):
        ChannelParamSet.from_intervals((0.6, 0.2), (0.1, 0.3), 4.0)


taus = st.floats(0.0, 1.0)
energies = st.floats(0.0, 50.0)


@settings(max_examples=200)
@given(taus, taus, energies)
def test_ordering_qq_cc_above_cq(tau, eta, E):
    r = capacity_report(ChannelParamSet.singleton(tau, eta, E))
    assert r.qq.raw >= r.cq.raw - 1e-12
    assert r.cc.raw >= r.cq.raw - 1e-12


@settings(max_examples=100)
@given(st.lists(taus, min_size=1, max_size=4), st.lists(taus, min_size=1, max_size=4), taus, energies)
def test_enlarging_sets_never_helps(tau_set, eta_set, extra, E):
    base = ChannelParamSet(tuple(tau_set), tuple(eta_set), E)
    more_eve = ChannelParamSet(tuple(tau_set), tuple(eta_set) + (extra,), E)
    more_bob = ChannelParamSet(tuple(tau_set) + (extra,), tuple(eta_set), E)
    for fn in (qq_capacity, cq_capacity, cc_capacity):
        assert fn(more_eve).raw <= fn(base).raw
    assert qq_capacity(more_bob).raw <= qq_capacity(base).raw


@given(taus, taus, energies)
def test_singleton_qq_is_exact_difference(tau, eta, E):
    raw = qq_capacity(ChannelParamSet.singleton(tau, eta, E)).raw
    assert raw == h_bpsk(tau * tau * E) - h_bpsk(eta * eta * E)


def test_sweep_single_point_matches_direct_call():
    [r] = capacity_sweep(1.0, [(1.0, 0.2)])
    direct = capacity_report(ChannelParamSet.singleton(1.0, math.sqrt(0.2), 1.0))
    assert r == direct


def test_sweep_equal_links_give_zero_qq():
    reports = capacity_sweep(1e6, [(1e-3, 1.0), (1e-2, 1.0)])
    assert [r.qq.raw for r in reports] == [0.0, 0.0]


def test_sweep_qq_rises_then_falls():
    taus_ = np.logspace(-4, -2, 200)
    reports = capacity_sweep(1e6, [(t, 0.2) for t in taus_])
    qq = np.array([r.qq.raw for r in reports])
    # QQ rises from low received power, peaks, and falls back as the eavesdropper saturates too
    peak = int(np.argmax(qq))
    assert 0 < peak < len(qq) - 1
    assert np.all(np.diff(qq[:peak + 1]) > 0)
    assert np.all(np.diff(qq[peak:]) <= 1e-15)
    assert any(r.cq.value == 0.0 and r.qq.value > 0.0 for r in reports)


def test_sweep_errors_carry_index():
    with pytest.raises(DomainError, match="grid point 1"):
        capacity_sweep(1.0, [(0.5, 0.2), (1.5, 0.2)])
    with pytest.raises(ConfigError):
        capacity_sweep(1.0, [])


def test_sweep_eta_set_fractions():
    [r] = capacity_sweep(1e6, [(1e-3, (0.02, 0.2))])
    assert r.qq.worst_eta == pytest.approx(math.sqrt(0.2) * 1e-3)
