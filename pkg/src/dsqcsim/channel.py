"""Transport of photon slots through loss, an adversary, and noise.

A transmission applies three stages in a fixed order: attenuation
loss, then the adversary (if any), then depolarization. The order is
part of the model's contract; tests pin it indirectly through the
detection-rate predictions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np

from .errors import DomainError, UsageError
from .metrics import attenuation_survival
from .qudit import Basis, JointState, Subsystem, _check_dim, basis_ket, measure, zd_ket
from .sources import PhotonSlot


@dataclass(frozen=True)
class ChannelModel:
    """Fiber parameters: exponential loss plus a depolarization chance."""

    attenuation: float = 0.0
    length: float = 0.0
    depolarize_p: float = 0.0

    def __post_init__(self):
        if self.attenuation < 0 or self.length < 0:
            raise DomainError("attenuation and length must be nonnegative")
        if not 0.0 <= self.depolarize_p <= 1.0:
            raise DomainError("depolarize_p must lie in [0, 1]")

    @property
    def survival(self) -> float:
        return attenuation_survival(self.attenuation, self.length)

    @classmethod
    def ideal(cls) -> "ChannelModel":
        return cls()


class AdversaryKind(Enum):
    NONE = "none"
    INTERCEPT_RESEND = "intercept_resend"
    PASSIVE = "passive"


class BasisPolicy(Enum):
    RANDOM_ZX = "random_zx"
    FIXED_Z = "fixed_z"
    FIXED_X = "fixed_x"


@dataclass(frozen=True)
class InterceptRecord:
    position: int
    basis: Basis
    outcome: int


@dataclass
class Adversary:
    """Eavesdropper model. INTERCEPT_RESEND measures each traveling
    photon per its basis policy and forwards a fresh eigenstate of what
    it saw; PASSIVE only reads the classical transcript; NONE is inert.

    The intercept log is per-session state: sessions are handed a fresh
    Adversary so the log starts empty.
    """

    kind: AdversaryKind = AdversaryKind.NONE
    policy: Optional[BasisPolicy] = None
    intercepts: List[InterceptRecord] = field(default_factory=list)

    def __post_init__(self):
        if self.kind is AdversaryKind.INTERCEPT_RESEND:
            if self.policy is None:
                raise DomainError("intercept-resend requires a basis policy")
        elif self.policy is not None:
            raise DomainError(f"adversary kind {self.kind.value} takes no basis policy")

    @classmethod
    def none(cls) -> "Adversary":
        return cls(AdversaryKind.NONE)

    @classmethod
    def passive(cls) -> "Adversary":
        return cls(AdversaryKind.PASSIVE)

    @classmethod
    def intercept_resend(cls, policy: BasisPolicy) -> "Adversary":
        return cls(AdversaryKind.INTERCEPT_RESEND, policy)


@dataclass
class TransmitResult:
    delivered: bool
    slot: PhotonSlot


def _pick_basis(policy: BasisPolicy, rng: np.random.Generator) -> Basis:
    if policy is BasisPolicy.FIXED_Z:
        return Basis.Z
    if policy is BasisPolicy.FIXED_X:
        return Basis.X
    return Basis.Z if int(rng.integers(2)) == 0 else Basis.X


def transmit(
    slot: PhotonSlot,
    model: ChannelModel,
    adversary: Adversary,
    rng: np.random.Generator,
) -> TransmitResult:
    """Send one slot through the channel, mutating it in place.

    Stages run in the order loss, adversary, depolarization. Each
    stage draws from ``rng`` only when its parameters make it active,
    so an ideal channel consumes no randomness. A slot travels at most
    once; re-sending or sending a lost slot is a usage error.
    """
    if slot.lost:
        raise UsageError(f"slot at position {slot.position} was already lost")
    if slot.sent:
        raise UsageError(f"slot at position {slot.position} was already transmitted")
    slot.sent = True
    dim = slot.state.dim

    survival = model.survival
    if survival < 1.0 and rng.random() >= survival:
        slot.lost = True
        return TransmitResult(False, slot)

    if adversary.kind is AdversaryKind.INTERCEPT_RESEND:
        eve_basis = _pick_basis(adversary.policy, rng)
        if isinstance(slot.state, JointState):
            rec = measure(slot.state, eve_basis, rng, subsystem=slot.subsystem)
        else:
            rec = measure(slot.state, eve_basis, rng)
        adversary.intercepts.append(InterceptRecord(slot.position, eve_basis, rec.outcome))
        # Eve keeps what she measured and forwards a fresh photon; the
        # sender-side half (if any) stays collapsed consistently.
        slot.state = basis_ket(dim, eve_basis, rec.outcome)
        slot.subsystem = Subsystem.WHOLE

    if model.depolarize_p > 0.0 and rng.random() < model.depolarize_p:
        if isinstance(slot.state, JointState):
            # Collapse the traveling half first so the partner's
            # marginal is untouched by the replacement.
            measure(slot.state, Basis.Z, rng, subsystem=slot.subsystem)
        slot.state = zd_ket(dim, int(rng.integers(dim)))
        slot.subsystem = Subsystem.WHOLE

    return TransmitResult(True, slot)


def expected_detection_rate(dim: int, policy: BasisPolicy) -> float:
    """Analytic per-decoy error probability for an intercept-resend
    attack against decoys drawn uniformly from the Z and X alphabets.

    The attack basis matches the preparation basis half the time, in
    which case the resent photon passes the check. Otherwise the resent
    photon is an eigenstate of the wrong basis and matches the checked
    index with probability 1/dim. Every basis policy therefore errs at
    (1/2) * (dim - 1) / dim.
    """
    _check_dim(dim)
    if not isinstance(policy, BasisPolicy):
        raise DomainError(f"unknown basis policy {policy!r}")
    return 0.5 * (dim - 1) / dim
