import math
from fractions import Fraction

import numpy as np
import pytest

from bpsk_wiretap.entropy import h_bpsk
from bpsk_wiretap.errors import ConfigError, DegenerateInputError, DomainError, ResourceError
from bpsk_wiretap.proof import (FiniteDistribution, ProofParams, TypicalityParams, achievable_rate,
                                covering_bound, cutoff_for_block, default_typicality_constant,
                                entropy_slack, is_strongly_typical, packing_bound,
                                pruned_distribution, sample_pruned, typical_set, typical_set_size,
                                typical_subspace_dims, typicality_failure_bound)
from bpsk_wiretap.capacity import ChannelParamSet, qq_capacity

BIN = FiniteDistribution.uniform((-1, 1))
TINY = 1e-9


def test_membership_examples():
    p = TypicalityParams(10, 0.1)
    assert is_strongly_typical([1, -1] * 5, BIN, p)
    assert not is_strongly_typical([1] * 10, BIN, p)
    skew = FiniteDistribution((0, 1, 2), [0.5, 0.5, 0.0])
    assert not is_strongly_typical([0, 1, 2, 0, 1, 0], skew, TypicalityParams(6, 0.5))
    with pytest.raises(DomainError):
        is_strongly_typical([0, 5], BIN, p)


def test_typical_set_examples():
    assert len(typical_set(BIN, TypicalityParams(1, 0.5))) == 2
    ts = typical_set(BIN, TypicalityParams(10, 0.1))
    assert len(ts) == 672 == sum(math.comb(10, k) for k in (4, 5, 6))
    for seq in ts:
        assert 4 <= seq.count(1) <= 6
    assert len(typical_set(BIN, TypicalityParams(10, TINY))) == 252


def test_typical_set_cap():
    with pytest.raises(ResourceError):
        typical_set(BIN, TypicalityParams(21, 0.1))


def test_default_constant_for_binary_uniform():
    assert default_typicality_constant(BIN) == 2.0


@pytest.mark.parametrize("n", [1, 5, 10, 16, 20])
@pytest.mark.parametrize("delta", [0.05, 0.1, 0.2, 0.3])
def test_cardinality_bounds_and_closed_form(n, delta):
    params = TypicalityParams(n, delta)
    if n > 12:
        size = typical_set_size(BIN, params)
    else:
        ts = typical_set(BIN, params)
        size = len(ts)
        assert size == typical_set_size(BIN, params)
        if size:
            assert ts.satisfies_cardinality_bounds()
    d = Fraction(str(delta))
    exact = sum(math.comb(n, k) for k in range(n + 1) if abs(Fraction(k, n) - Fraction(1, 2)) <= d)
    assert size == exact


def test_typical_probability_beats_hoeffding():
    for n in (8, 12, 16):
        for delta in (0.1, 0.2, 0.3):
            ts = typical_set(BIN, TypicalityParams(n, delta))
            assert ts.probability() >= 1 - typicality_failure_bound(BIN, n, delta) - 1e-12


def test_pruned_examples():
    full = pruned_distribution(BIN, TypicalityParams(4, 0.6))
    assert full.xi == pytest.approx(1.0)
    assert np.allclose(full.probs, 1 / 16)
    pr = pruned_distribution(BIN, TypicalityParams(10, 0.1))
    assert pr.xi == pytest.approx(672 / 1024, abs=1e-15)
    assert abs(pr.probs.sum() - 1.0) <= 1e-12
    bal = pruned_distribution(BIN, TypicalityParams(10, TINY))
    assert len(bal.probs) == 252 and np.allclose(bal.probs, 1 / 252)
    with pytest.raises(DegenerateInputError):
        pruned_distribution(BIN, TypicalityParams(9, TINY))


def test_pruned_entropy_rate_trend():
    rates = [pruned_distribution(BIN, TypicalityParams(n, 0.1)).entropy_rate() for n in (4, 8, 16, 20)]
    assert all(b >= a - 1e-12 for a, b in zip(rates, rates[1:]))
    assert rates[-1] <= 1.0


def test_pruned_skewed_source():
    p = FiniteDistribution(("a", "b"), [0.25, 0.75])
    pr = pruned_distribution(p, TypicalityParams(12, 0.1))
    assert abs(pr.probs.sum() - 1.0) <= 1e-12
    counts = pr.typical.digits().sum(axis=1)
    assert counts.min() >= 8 and counts.max() <= 10


def test_sample_pruned_is_typical_and_deterministic():
    params = TypicalityParams(40, 0.05)
    a = sample_pruned(BIN, params, np.random.default_rng(3), 20)
    b = sample_pruned(BIN, params, np.random.default_rng(3), 20)
    assert np.array_equal(a, b)
    ones = a.sum(axis=1)
    assert np.all(np.abs(ones / 40 - 0.5) <= 0.05 + 1e-12)


def test_typical_subspace_dims():
    assert typical_subspace_dims([1.0, 0.0], TypicalityParams(10, 0.1)) == (1, True)
    assert typical_subspace_dims([0.5, 0.5], TypicalityParams(10, 0.1)) == (672, True)
    dim, ok = typical_subspace_dims([0.7, 0.2, 0.1], TypicalityParams(30, 0.1))
    assert dim > 0 and ok


def test_packing_examples():
    one = packing_bound(ProofParams(0.9, 0.1, 0.0, 0.0, 1, 1), 200, 1.0, 0.01)
    assert one.value == pytest.approx(1.0, abs=1e-50) and not one.vacuous
    p = ProofParams(S_sigma=0.9867, S_sigma_tilde=0.5, eps=0.01, eps_prime=0.01, M_size=2 ** 40, L_size=2 ** 40)
    b = packing_bound(p, 100, c_prime=0.5, delta=0.1)
    expected = 1 - 6 * 0.1 - 4 * 2.0 ** 80 / (0.99 * 2.0 ** (100 * (0.9867 - 0.05)))
    assert b.value == pytest.approx(expected, rel=1e-12)
    assert b.value == pytest.approx(0.39969, abs=1e-5) and not b.vacuous
    at_capacity = ProofParams(0.9867, 0.5, 0.01, 0.01, 2 ** 50, 2 ** 49)
    assert packing_bound(at_capacity, 100, 0.5, 0.1).vacuous
    assert packing_bound(p, 100, 0.5, 0.1, truncation_slack=True).value == pytest.approx(b.value - 0.01)


def test_packing_decreasing_in_code_size():
    vals = [packing_bound(ProofParams(0.9867, 0.5, 0.01, 0.01, 2 ** k, 2 ** 30), 100, 0.5, 0.1).value
            for k in range(20, 64, 4)]
    assert all(b <= a for a, b in zip(vals, vals[1:]))


def test_covering_examples():
    b = covering_bound(1e-4, 10, 16.0)
    assert b.distance == pytest.approx(3.0) and b.vacuous
    assert covering_bound(0.01, 10, 16.0, n=10).distance == pytest.approx(30 * 0.01 ** 0.25 + 0.1)
    many = covering_bound(0.01, 10 ** 12, 2.0 ** 10)
    assert many.log2_failure == pytest.approx(11 - 1e6 / 4096 / math.log(2), rel=1e-12)


def test_covering_needs_enormous_L_at_tiny_eps():
    # exponent eps^3 |L| / (4 D~) = 1e-24 * 2^60 / 2^22 ~ 2.7e-13: no concentration yet
    b = covering_bound(1e-8, 2 ** 60, 2.0 ** 20)
    assert b.log2_failure == pytest.approx(21.0, abs=1e-9) and b.vacuous
    big = covering_bound(1e-8, 2 ** 120, 2.0 ** 20)
    assert big.log2_failure < -1e5 and big.failure_probability < 1e-100


def test_covering_log_space_for_huge_D():
    b = covering_bound(0.01, 2 ** 2000, log2_D_tilde=1500.0)
    assert b.failure_probability == 0.0 and b.log2_failure < -1e100


def test_covering_increasing_in_L():
    logs = [covering_bound(0.05, 2 ** k, 2.0 ** 20).log2_failure for k in range(20, 60, 2)]
    assert all(b <= a for a, b in zip(logs, logs[1:]))


def test_covering_validation():
    with pytest.raises(DomainError):
        covering_bound(0.0, 10, 1.0)
    with pytest.raises(DomainError):
        covering_bound(0.5, 0, 1.0)


def test_achievable_rate():
    assert achievable_rate(1.0, 0.0) == 1.0
    assert achievable_rate(0.4, 0.4) == 0.0
    r = achievable_rate(h_bpsk(1.0), h_bpsk(0.2))
    assert r == qq_capacity(ChannelParamSet((1.0,), (math.sqrt(0.2),), 1.0)).raw
    assert r == pytest.approx(0.3410, abs=1e-4)


def test_proof_params_validation():
    with pytest.raises(ConfigError):
        ProofParams(-0.1, 0.1, 0.1, 0.1, 1, 1)
    with pytest.raises(ConfigError):
        ProofParams(0.1, 0.1, 1.0, 0.1, 1, 1)


def test_cutoff_and_slack():
    assert cutoff_for_block(1) == 1
    assert cutoff_for_block(4) == 4
    assert cutoff_for_block(1000) == 20
    assert entropy_slack(100, 1.0) > entropy_slack(1000, 1.0) > 0
