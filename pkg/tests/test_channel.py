"""Channel model: loss, intercept-resend, depolarization."""

import math

import numpy as np
import pytest

from dsqcsim.channel import (
    Adversary,
    AdversaryKind,
    BasisPolicy,
    ChannelModel,
    expected_detection_rate,
    transmit,
)
from dsqcsim.errors import DomainError, UsageError
from dsqcsim.qudit import Basis, Subsystem, apply_local, basis_ket, measure, overlap, shift_unitary, zd_ket
from dsqcsim.sources import AmplitudeProfile, PhotonSlot, make_decoy, make_pure_pair, measure_slot


def _eve_basis_mix(policy):
    if policy is BasisPolicy.FIXED_Z:
        return [(Basis.Z, 1.0)]
    if policy is BasisPolicy.FIXED_X:
        return [(Basis.X, 1.0)]
    return [(Basis.Z, 0.5), (Basis.X, 0.5)]


def _enumerated_decoy_error(dim, policy):
    """Exact per-decoy error probability by summing every branch:
    preparation (basis, index) uniform over 2*dim states, Eve's basis
    from her policy, her outcome by the Born rule, and the receiver's
    check of the resent eigenstate in the preparation basis."""
    total = 0.0
    for prep_basis in (Basis.Z, Basis.X):
        for index in range(dim):
            prep = basis_ket(dim, prep_basis, index)
            for eve_basis, p_basis in _eve_basis_mix(policy):
                for outcome in range(dim):
                    eve_ket = basis_ket(dim, eve_basis, outcome)
                    p_outcome = abs(overlap(eve_ket, prep)) ** 2
                    if p_outcome == 0.0:
                        continue
                    p_pass = abs(overlap(basis_ket(dim, prep_basis, index), eve_ket)) ** 2
                    total += (1.0 / (2 * dim)) * p_basis * p_outcome * (1.0 - p_pass)
    return total


def test_expected_rate_agrees_with_hand_enumeration_at_d2():
    # Matching basis (probability 1/2): no error. Wrong basis: the
    # resent photon passes with probability 1/2. Hence 1/2 * 1/2.
    by_hand = 0.5 * (1.0 - 0.5)
    assert expected_detection_rate(2, BasisPolicy.RANDOM_ZX) == by_hand
    assert expected_detection_rate(2, BasisPolicy.FIXED_Z) == 0.25
    assert abs(expected_detection_rate(3, BasisPolicy.RANDOM_ZX) - 1.0 / 3.0) < 1e-12


@pytest.mark.parametrize("dim", [2, 3, 5, 8])
@pytest.mark.parametrize("policy", list(BasisPolicy))
def test_expected_rate_matches_branch_enumeration(dim, policy):
    assert abs(expected_detection_rate(dim, policy) - _enumerated_decoy_error(dim, policy)) < 1e-12


def test_ideal_transmit_preserves_states():
    rng = np.random.default_rng(41)
    model = ChannelModel.ideal()
    photon, _rec = make_decoy(3, rng)
    before = photon.amps.copy()
    result = transmit(PhotonSlot(photon, Subsystem.WHOLE, position=0), model, Adversary.none(), rng)
    assert result.delivered
    assert abs(abs(np.vdot(before, result.slot.state.amps)) ** 2 - 1.0) < 1e-10

    pair = make_pure_pair(AmplitudeProfile.uniform(2))
    before = pair.amps.copy()
    transmit(PhotonSlot(pair, Subsystem.B, position=1), model, Adversary.none(), rng)
    assert abs(abs(np.vdot(before, pair.amps)) ** 2 - 1.0) < 1e-10


def test_loss_rate_within_3_sigma():
    rng = np.random.default_rng(42)
    model = ChannelModel(attenuation=math.log(2), length=1.0)
    n = 20_000
    delivered = 0
    for i in range(n):
        slot = PhotonSlot(zd_ket(2, 0), Subsystem.WHOLE, position=i)
        delivered += transmit(slot, model, Adversary.none(), rng).delivered
    sigma = math.sqrt(0.25 / n)
    assert abs(delivered / n - 0.5) < 3 * sigma


def test_transport_usage_errors():
    rng = np.random.default_rng(43)
    model = ChannelModel.ideal()
    slot = PhotonSlot(zd_ket(2, 0), Subsystem.WHOLE, position=0)
    transmit(slot, model, Adversary.none(), rng)
    with pytest.raises(UsageError):
        transmit(slot, model, Adversary.none(), rng)
    lossy = ChannelModel(attenuation=100.0, length=1.0)
    gone = PhotonSlot(zd_ket(2, 0), Subsystem.WHOLE, position=1)
    assert not transmit(gone, lossy, Adversary.none(), rng).delivered
    with pytest.raises(UsageError):
        transmit(gone, ChannelModel.ideal(), Adversary.none(), rng)


@pytest.mark.parametrize("dim", [2, 3])
def test_random_zx_interception_error_rate(dim):
    rng = np.random.default_rng(44)
    model = ChannelModel.ideal()
    expected = expected_detection_rate(dim, BasisPolicy.RANDOM_ZX)
    n = 6_000
    errors = 0
    for i in range(n):
        photon, rec = make_decoy(dim, rng, i)
        adversary = Adversary.intercept_resend(BasisPolicy.RANDOM_ZX)
        slot = PhotonSlot(photon, Subsystem.WHOLE, position=i)
        transmit(slot, model, adversary, rng)
        errors += measure_slot(slot, rec.basis, rng).outcome != rec.index
    sigma = math.sqrt(expected * (1 - expected) / n)
    assert abs(errors / n - expected) < 4 * sigma


def test_fixed_z_never_errs_on_z_decoys():
    rng = np.random.default_rng(45)
    model = ChannelModel.ideal()
    for i in range(300):
        index = int(rng.integers(3))
        slot = PhotonSlot(zd_ket(3, index), Subsystem.WHOLE, position=i)
        adversary = Adversary.intercept_resend(BasisPolicy.FIXED_Z)
        transmit(slot, model, adversary, rng)
        assert measure_slot(slot, Basis.Z, rng).outcome == index


@pytest.mark.parametrize("dim", [2, 3])
def test_fixed_z_errs_on_x_decoys_at_rate(dim):
    """Against X-basis checks a Z-only interceptor is caught at
    (dim-1)/dim: the quantitative cost of leaving X unchecked."""
    rng = np.random.default_rng(46)
    model = ChannelModel.ideal()
    expected = (dim - 1) / dim
    n = 10_000
    errors = 0
    for i in range(n):
        index = int(rng.integers(dim))
        slot = PhotonSlot(basis_ket(dim, Basis.X, index), Subsystem.WHOLE, position=i)
        adversary = Adversary.intercept_resend(BasisPolicy.FIXED_Z)
        transmit(slot, model, adversary, rng)
        errors += measure_slot(slot, Basis.X, rng).outcome != index
    assert abs(errors / n - expected) < 0.02


def test_interception_decouples_pair_outcomes():
    """After Eve measures the traveling half, sender and receiver
    outcomes are independent conditioned on her result; untouched
    pairs stay perfectly anti-correlated."""
    rng = np.random.default_rng(47)
    model = ChannelModel.ideal()
    profile = AmplitudeProfile.uniform(2)
    n = 10_000
    tables = {0: np.zeros((2, 2)), 1: np.zeros((2, 2))}
    for i in range(n):
        pair = apply_local(make_pure_pair(profile), Subsystem.B, shift_unitary(2, 1))
        slot = PhotonSlot(pair, Subsystem.B, position=i)
        adversary = Adversary.intercept_resend(BasisPolicy.FIXED_X)
        transmit(slot, model, adversary, rng)
        eve = adversary.intercepts[0].outcome
        a = measure(pair, Basis.Z, rng, subsystem=Subsystem.A).outcome
        b = measure_slot(slot, Basis.Z, rng).outcome
        tables[eve][a, b] += 1
    for eve, table in tables.items():
        total = table.sum()
        assert total > 1000
        joint = table / total
        rows = joint.sum(axis=1)
        cols = joint.sum(axis=0)
        for a in range(2):
            for b in range(2):
                assert abs(joint[a, b] - rows[a] * cols[b]) < 0.03

    agree = 0
    for i in range(500):
        pair = apply_local(make_pure_pair(profile), Subsystem.B, shift_unitary(2, 1))
        a = measure(pair, Basis.Z, rng, subsystem=Subsystem.A).outcome
        b = measure(pair, Basis.Z, rng, subsystem=Subsystem.B).outcome
        agree += a == b
    assert agree == 0


def test_depolarization_error_rate_on_decoys():
    # Replacement by a random Z eigenstate fails the check with
    # probability (dim-1)/dim in either preparation basis.
    rng = np.random.default_rng(48)
    model = ChannelModel(depolarize_p=0.1)
    n = 10_000
    errors = 0
    for i in range(n):
        photon, rec = make_decoy(2, rng, i)
        slot = PhotonSlot(photon, Subsystem.WHOLE, position=i)
        transmit(slot, model, Adversary.none(), rng)
        errors += measure_slot(slot, rec.basis, rng).outcome != rec.index
    assert abs(errors / n - 0.05) < 0.01


def test_depolarization_preserves_partner_marginal():
    """Forcing depolarization on every traveling half must leave the
    stay-at-home marginal exactly as the profile dictates, and make
    the receiver's outcome uniform and uncorrelated."""
    rng = np.random.default_rng(49)
    model = ChannelModel(depolarize_p=1.0)
    profile = AmplitudeProfile.from_probabilities([0.7, 0.3])
    n = 10_000
    a_counts = np.zeros(2)
    joint_counts = np.zeros((2, 2))
    for i in range(n):
        pair = make_pure_pair(profile)
        slot = PhotonSlot(pair, Subsystem.B, position=i)
        transmit(slot, model, Adversary.none(), rng)
        a = measure(pair, Basis.Z, rng, subsystem=Subsystem.A).outcome
        b = measure_slot(slot, Basis.Z, rng).outcome
        a_counts[a] += 1
        joint_counts[a, b] += 1
    sigma = math.sqrt(0.7 * 0.3 / n)
    assert abs(a_counts[0] / n - 0.7) < 4 * sigma
    b_marginal = joint_counts.sum(axis=0) / n
    sigma_b = math.sqrt(0.25 / n)
    assert abs(b_marginal[0] - 0.5) < 4 * sigma_b


def test_adversary_and_channel_validation():
    with pytest.raises(DomainError):
        Adversary(AdversaryKind.INTERCEPT_RESEND)
    with pytest.raises(DomainError):
        Adversary(AdversaryKind.NONE, BasisPolicy.FIXED_Z)
    with pytest.raises(DomainError):
        ChannelModel(attenuation=-1.0)
    with pytest.raises(DomainError):
        ChannelModel(depolarize_p=1.5)
    assert ChannelModel.ideal().survival == 1.0
