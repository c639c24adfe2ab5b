"""Closed-form metrics: entropy, efficiencies, survival."""

import math

import numpy as np
import pytest

from dsqcsim.errors import DomainError
from dsqcsim.metrics import (
    attenuation_survival,
    intrinsic_efficiency,
    total_efficiency,
    von_neumann_entropy,
)
from dsqcsim.sources import AmplitudeProfile


def _entropy_oracle(probs) -> float:
    # Independent arithmetic path: stdlib math only.
    return -math.fsum(p * math.log2(p) for p in probs if p > 0)


@pytest.mark.parametrize("dim", range(2, 17))
def test_uniform_profile_entropy_is_log2_d(dim):
    assert abs(von_neumann_entropy(AmplitudeProfile.uniform(dim)) - math.log2(dim)) < 1e-12


def test_concentrated_profile_entropy_is_zero():
    assert von_neumann_entropy(AmplitudeProfile.from_probabilities([0.0, 1.0, 0.0])) == 0.0


def test_two_level_entropy_example():
    s = von_neumann_entropy(AmplitudeProfile.from_probabilities([0.8, 0.2]))
    assert abs(s - _entropy_oracle([0.8, 0.2])) < 1e-12
    assert abs(s - 0.721928) < 1e-6


def test_entropy_matches_oracle_on_random_profiles():
    rng = np.random.default_rng(31)
    for _ in range(20):
        dim = int(rng.integers(2, 17))
        raw = rng.random(dim) + 1e-3
        probs = raw / raw.sum()
        profile = AmplitudeProfile.from_probabilities(probs)
        assert abs(von_neumann_entropy(profile) - _entropy_oracle(probs)) < 1e-12
        assert 0.0 <= von_neumann_entropy(profile) <= math.log2(dim) + 1e-12


def test_entropy_invariant_under_permutation_and_phase():
    rng = np.random.default_rng(32)
    probs = np.array([0.4, 0.3, 0.2, 0.1])
    base = von_neumann_entropy(AmplitudeProfile.from_probabilities(probs))
    for _ in range(10):
        perm = rng.permutation(4)
        phases = np.exp(2j * np.pi * rng.random(4))
        amps = np.sqrt(probs[perm]) * phases
        assert abs(von_neumann_entropy(AmplitudeProfile(4, amps)) - base) < 1e-12


def test_intrinsic_efficiency_values_and_errors():
    assert intrinsic_efficiency(90, 100) == 0.9
    with pytest.raises(DomainError):
        intrinsic_efficiency(1, 0)
    with pytest.raises(DomainError):
        intrinsic_efficiency(101, 100)
    with pytest.raises(DomainError):
        intrinsic_efficiency(-1, 100)


@pytest.mark.parametrize("dim", range(2, 17))
def test_total_efficiency_is_one_third_at_maximal_entanglement(dim):
    log2d = math.log2(dim)
    assert abs(total_efficiency(log2d, 2 * log2d, log2d) - 1.0 / 3.0) < 1e-12


def test_total_efficiency_exceeds_one_third_for_non_maximal_profiles():
    rng = np.random.default_rng(33)
    cases = [[0.8, 0.2], [0.5, 0.3, 0.2], [0.9, 0.05, 0.03, 0.02]]
    for _ in range(10):
        dim = int(rng.integers(2, 9))
        raw = rng.random(dim) + 1e-3
        raw[0] += 1.0  # keep it away from uniform
        cases.append(list(raw / raw.sum()))
    for probs in cases:
        dim = len(probs)
        s = von_neumann_entropy(AmplitudeProfile.from_probabilities(probs))
        eta = total_efficiency(math.log2(dim), 2 * s, math.log2(dim))
        assert eta > 1.0 / 3.0


def test_total_efficiency_two_level_example():
    s = von_neumann_entropy(AmplitudeProfile.from_probabilities([0.8, 0.2]))
    eta = total_efficiency(1.0, 2 * s, 1.0)
    assert abs(eta - 1.0 / (1.0 + 2 * _entropy_oracle([0.8, 0.2]))) < 1e-12
    assert abs(eta - 0.409196) < 1e-4


def test_total_efficiency_errors():
    with pytest.raises(DomainError):
        total_efficiency(1.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        total_efficiency(-1.0, 1.0, 1.0)


def test_attenuation_survival_values():
    assert attenuation_survival(0.0, 100.0) == 1.0
    assert abs(attenuation_survival(math.log(2), 1.0) - 0.5) < 1e-12
    assert abs(attenuation_survival(0.5, 4.0) - math.exp(-2.0)) < 1e-12


def test_attenuation_survival_monotone_and_guarded():
    values = [attenuation_survival(0.3, length) for length in np.linspace(0, 10, 21)]
    assert all(a >= b for a, b in zip(values, values[1:]))
    with pytest.raises(DomainError):
        attenuation_survival(-0.1, 1.0)
    with pytest.raises(DomainError):
        attenuation_survival(0.1, -1.0)
