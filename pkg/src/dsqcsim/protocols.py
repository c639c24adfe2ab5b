"""Two-party session engines for both communication protocols.

A session plays Alice and Bob end to end over one quantum
transmission: preparation, optional encoding, transport through the
channel and adversary models, the eavesdropping check with its abort
verdict, measurement, the public announcements, and decoding. All
randomness flows through the one generator passed in, and every stage
draws in a documented order (preparation by position, transport by
position, checks by position, then message measurements by position),
so a session is a deterministic function of its inputs.

Two protocols are implemented, each in an eager and a delayed-encoding
variant. The entangled protocol sends Bob one half of each correlated
pair and encodes message dits as extra cyclic shifts on the traveling
half; Bob recovers a dit from the difference between his outcome and
Alice's announced outcome. The single-photon protocol sends carrier
photons drawn from the Z and X eigenstate alphabet and encodes with
the shift family matching the preparation basis; Bob recovers a dit
from the difference between his outcome and the revealed preparation.
In the delayed variants nothing is encoded before transport; the
announcements are offset by the message instead, and the decoding
arithmetic is unchanged.

Decoding is deliberately narrow: it sees announcements and outcomes
only, never the source profile and never Alice's preparation records
beyond what the transcript reveals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .channel import Adversary, AdversaryKind, ChannelModel, TransmitResult, transmit
from .errors import DomainError, UsageError
from .metrics import total_efficiency, von_neumann_entropy
from .qudit import (
    Basis,
    JointState,
    MeasurementRecord,
    PureState,
    Subsystem,
    _check_dim,
    apply_local,
    apply_unitary,
    measure,
    phase_shift_unitary,
    shift_unitary,
)
from .sources import (
    AmplitudeProfile,
    PhotonSlot,
    PreparationKind,
    PreparationRecord,
    make_decoy,
    make_single_photon,
    measure_slot,
    randomized_pair,
)
from .transcript import PayloadKind, Sender, Transcript

_BASIS_CODE = {Basis.Z: 0, Basis.X: 1}
_CODE_BASIS = {0: Basis.Z, 1: Basis.X}


class CheckMode(Enum):
    """How a session tests the channel for an eavesdropper.

    DECOY splices single check photons, drawn from both bases, among
    the carriers. ENTANGLED_Z sacrifices whole pairs and verifies only
    the computational-basis correlation; it exists to demonstrate why
    the mixed-basis decoys matter, since a Z-only interceptor passes it
    untouched.
    """

    DECOY = "decoy"
    ENTANGLED_Z = "entangled_z"


@dataclass(frozen=True)
class SecretMessage:
    """A sequence of base-d message symbols (dits)."""

    dim: int
    dits: Tuple[int, ...]

    def __post_init__(self):
        _check_dim(self.dim)
        object.__setattr__(self, "dits", tuple(int(v) for v in self.dits))
        for v in self.dits:
            if v < 0 or v >= self.dim:
                raise DomainError(f"message dit {v} outside [0, {self.dim})")

    def __len__(self) -> int:
        return len(self.dits)

    @classmethod
    def random(cls, dim: int, length: int, rng: np.random.Generator) -> "SecretMessage":
        _check_dim(dim)
        if length < 1:
            raise DomainError("message length must be positive")
        return cls(dim, tuple(int(v) for v in rng.integers(dim, size=length)))


@dataclass(frozen=True)
class SequenceLayout:
    """Which positions of the transmitted sequence are checks.

    Check positions are secret until revealed over the transcript; the
    ordered complement carries the message.
    """

    total_len: int
    decoy_positions: frozenset
    message_positions: Tuple[int, ...]

    def __post_init__(self):
        if set(self.message_positions) & self.decoy_positions:
            raise DomainError("check and message positions overlap")
        if len(self.message_positions) + len(self.decoy_positions) != self.total_len:
            raise DomainError("layout does not cover the sequence")

    @classmethod
    def build(cls, message_len: int, check_fraction: float, rng: np.random.Generator) -> "SequenceLayout":
        if message_len < 1:
            raise DomainError("message length must be positive")
        if not 0.0 <= check_fraction < 1.0:
            raise DomainError("check fraction must lie in [0, 1)")
        if check_fraction == 0.0:
            n_checks = 0
        else:
            n_checks = math.ceil(check_fraction * message_len / (1.0 - check_fraction))
        total = message_len + n_checks
        if n_checks:
            picks = rng.choice(total, size=n_checks, replace=False)
            decoys = frozenset(int(p) for p in picks)
        else:
            decoys = frozenset()
        message_positions = tuple(p for p in range(total) if p not in decoys)
        return cls(total, decoys, message_positions)


@dataclass(frozen=True)
class ProtocolConfig:
    """Session parameters shared by both protocols.

    ``anti_correlated`` selects the pair flavor for the entangled
    protocol: the traveling half is offset by one index, so partners
    never agree in Z. ``None`` resolves to True exactly at dimension 2,
    matching the usual two-level convention; the decoding offset
    follows automatically.
    """

    decoy_fraction: float = 0.1
    threshold: float = 0.05
    check_mode: CheckMode = CheckMode.DECOY
    anti_correlated: Optional[bool] = None

    def __post_init__(self):
        if not 0.0 <= self.decoy_fraction < 1.0:
            raise DomainError("decoy_fraction must lie in [0, 1)")
        if not 0.0 <= self.threshold <= 1.0:
            raise DomainError("threshold must lie in [0, 1]")
        if not isinstance(self.check_mode, CheckMode):
            raise DomainError(f"unknown check mode {self.check_mode!r}")

    def resolve_offset(self, dim: int) -> int:
        anti = self.anti_correlated if self.anti_correlated is not None else (dim == 2)
        return 1 if anti else 0


@dataclass(frozen=True)
class LossCounts:
    message: int
    decoy: int

    @property
    def total(self) -> int:
        return self.message + self.decoy


@dataclass(frozen=True)
class Efficiency:
    """Three views of the session's economics.

    eta_q: fraction of sequence positions that carry message payload.
    eta_t: message bits per resource bit under per-dit source-entropy
    accounting (each pair costs twice the profile entropy in quantum
    bits plus one announced dit; each carrier photon costs its own
    dit-width plus the basis-and-value reveal). eta_t_raw: the same
    ratio computed from this session's actual photon counts and actual
    transcript bits, overheads included.
    """

    eta_q: float
    eta_t: float
    eta_t_raw: float


@dataclass(frozen=True)
class CheckResult:
    rate: float
    per_basis: Dict[str, float]
    checked: int
    mismatches: int
    z_checked: int
    z_mismatches: int
    x_checked: int
    x_mismatches: int


@dataclass
class SessionReport:
    """Everything one session produced, for the harness and for audit."""

    aborted: bool
    decoded: Optional[SecretMessage]
    decoded_indices: Tuple[int, ...]
    decoy_error_rate: float
    per_basis_error: Dict[str, float]
    checked: int
    mismatches: int
    z_checked: int
    z_mismatches: int
    x_checked: int
    x_mismatches: int
    losses: LossCounts
    efficiency: Efficiency
    transcript: Transcript
    eve_attempts: int = 0
    eve_correct: int = 0


def error_rate_analysis(
    reveals: Sequence[PreparationRecord], outcomes: Sequence[MeasurementRecord]
) -> CheckResult:
    """Compare revealed check preparations against measured outcomes.

    The two sequences must align one to one, same length and same
    basis per position; anything else is a usage error, not a zero
    rate. An empty check yields rate 0.0.
    """
    if len(reveals) != len(outcomes):
        raise UsageError(f"misaligned check data: {len(reveals)} reveals vs {len(outcomes)} outcomes")
    tallies = {Basis.Z: [0, 0], Basis.X: [0, 0]}
    for rec, out in zip(reveals, outcomes):
        if rec.basis is None or rec.index is None:
            raise UsageError("reveal record lacks a basis or index")
        if out.basis is not rec.basis:
            raise UsageError(f"misaligned check at position {rec.position}: measured {out.basis.value}, revealed {rec.basis.value}")
        tallies[rec.basis][0] += 1
        if out.outcome != rec.index:
            tallies[rec.basis][1] += 1
    checked = tallies[Basis.Z][0] + tallies[Basis.X][0]
    mismatches = tallies[Basis.Z][1] + tallies[Basis.X][1]
    per_basis = {
        b.value: (tallies[b][1] / tallies[b][0] if tallies[b][0] else 0.0) for b in (Basis.Z, Basis.X)
    }
    rate = mismatches / checked if checked else 0.0
    return CheckResult(
        rate,
        per_basis,
        checked,
        mismatches,
        tallies[Basis.Z][0],
        tallies[Basis.Z][1],
        tallies[Basis.X][0],
        tallies[Basis.X][1],
    )


# ---- Receiver-side decoding ----
#
# These work from public announcements and local outcomes alone.


def decode_shift_announcements(
    announced: Sequence[int], outcomes: Sequence[int], dim: int, offset: int
) -> List[int]:
    """Entangled-protocol decode: dit = outcome - announced - offset,
    modulo dim. Covers both variants, since the delayed announcement
    absorbs the message into the same slot of the arithmetic."""
    if len(announced) != len(outcomes):
        raise UsageError("announcements and outcomes are misaligned")
    return [(b - a - offset) % dim for a, b in zip(announced, outcomes)]


def decode_state_reveals(
    values: Sequence[int], outcomes: Sequence[int], dim: int, delayed: bool
) -> List[int]:
    """Single-photon decode: eager reveals the prepared index, so
    dit = outcome - value; delayed reveals index + dit, so
    dit = value - outcome. Modulo dim either way."""
    if len(values) != len(outcomes):
        raise UsageError("reveals and outcomes are misaligned")
    if delayed:
        return [(v - o) % dim for v, o in zip(values, outcomes)]
    return [(o - v) % dim for v, o in zip(values, outcomes)]


# ---- Shared session plumbing ----


def _transmit_all(
    slots: Sequence[PhotonSlot],
    model: ChannelModel,
    adversary: Adversary,
    rng: np.random.Generator,
    transcript: Transcript,
) -> Dict[int, bool]:
    delivered = {}
    for slot in slots:
        result = transmit(slot, model, adversary, rng)
        delivered[slot.position] = result.delivered
    transcript.append(Sender.BOB, PayloadKind.RECEIPT_CONFIRM)
    lost_positions = tuple(p for p in sorted(delivered) if not delivered[p])
    transcript.append(Sender.BOB, PayloadKind.LOSS_REPORT, lost_positions)
    return delivered


def _run_check_phase(
    check_recs: Dict[int, PreparationRecord],
    slots: Dict[int, PhotonSlot],
    delivered: Dict[int, bool],
    threshold: float,
    rng: np.random.Generator,
    transcript: Transcript,
) -> Tuple[CheckResult, bool]:
    """Reveal every check preparation, measure the surviving ones in
    the revealed basis, and announce the verdict. Lost checks are
    revealed but excluded from the rate's denominator."""
    reveals: List[PreparationRecord] = []
    outcomes: List[MeasurementRecord] = []
    for pos in sorted(check_recs):
        rec = check_recs[pos]
        transcript.append(
            Sender.ALICE, PayloadKind.DECOY_REVEAL, (pos, _BASIS_CODE[rec.basis], rec.index)
        )
        if delivered[pos]:
            outcomes.append(measure_slot(slots[pos], rec.basis, rng))
            reveals.append(rec)
    check = error_rate_analysis(reveals, outcomes)
    ok = check.rate <= threshold
    transcript.append(Sender.BOB, PayloadKind.CHECK_VERDICT, (1 if ok else 0,))
    return check, not ok


def _loss_counts(layout: SequenceLayout, delivered: Dict[int, bool]) -> LossCounts:
    lost_msg = sum(1 for p in layout.message_positions if not delivered[p])
    lost_chk = sum(1 for p in layout.decoy_positions if not delivered[p])
    return LossCounts(lost_msg, lost_chk)


def _report(
    aborted: bool,
    decoded: Optional[SecretMessage],
    decoded_indices: Tuple[int, ...],
    check: CheckResult,
    losses: LossCounts,
    efficiency: Efficiency,
    transcript: Transcript,
    eve_attempts: int = 0,
    eve_correct: int = 0,
) -> SessionReport:
    return SessionReport(
        aborted=aborted,
        decoded=decoded,
        decoded_indices=decoded_indices,
        decoy_error_rate=check.rate,
        per_basis_error=check.per_basis,
        checked=check.checked,
        mismatches=check.mismatches,
        z_checked=check.z_checked,
        z_mismatches=check.z_mismatches,
        x_checked=check.x_checked,
        x_mismatches=check.x_mismatches,
        losses=losses,
        efficiency=efficiency,
        transcript=transcript,
        eve_attempts=eve_attempts,
        eve_correct=eve_correct,
    )


# ---- Entangled-pair protocol ----


def _entangled_session(
    msg: SecretMessage,
    profile: AmplitudeProfile,
    cfg: ProtocolConfig,
    channel: Optional[ChannelModel],
    adversary: Optional[Adversary],
    rng: np.random.Generator,
    delayed: bool,
) -> SessionReport:
    dim = msg.dim
    if profile.dim != dim:
        raise DomainError(f"profile dimension {profile.dim} does not match message dimension {dim}")
    if len(msg) < 1:
        raise DomainError("cannot run a session on an empty message")
    channel = channel if channel is not None else ChannelModel.ideal()
    adversary = adversary if adversary is not None else Adversary.none()
    offset = cfg.resolve_offset(dim)
    shift_one = shift_unitary(dim, 1 % dim)

    layout = SequenceLayout.build(len(msg), cfg.decoy_fraction, rng)
    transcript = Transcript(dim, layout.total_len)

    # (1) Preparation. Message positions (and, in ENTANGLED_Z mode,
    # check positions too) get randomly shifted correlated pairs, with
    # the traveling half offset by one when anti-correlation is on.
    # DECOY-mode check positions get single photons from the mixed
    # alphabet.
    pairs: Dict[int, JointState] = {}
    decoy_states: Dict[int, PureState] = {}
    decoy_recs: Dict[int, PreparationRecord] = {}
    for pos in range(layout.total_len):
        if pos in layout.decoy_positions and cfg.check_mode is CheckMode.DECOY:
            decoy_states[pos], decoy_recs[pos] = make_decoy(dim, rng, pos)
        else:
            joint, _rec = randomized_pair(profile, rng, pos)
            if offset:
                joint = apply_local(joint, Subsystem.B, shift_one)
            pairs[pos] = joint

    # (2) Encoding, eager variant only: shift the traveling half by the
    # message dit. The delayed variant sends unencoded pairs.
    if not delayed:
        for t, pos in enumerate(layout.message_positions):
            pairs[pos] = apply_local(pairs[pos], Subsystem.B, shift_unitary(dim, msg.dits[t]))

    slots: List[PhotonSlot] = []
    for pos in range(layout.total_len):
        if pos in decoy_states:
            slots.append(PhotonSlot(decoy_states[pos], Subsystem.WHOLE, position=pos))
        else:
            slots.append(PhotonSlot(pairs[pos], Subsystem.B, position=pos))
    slot_by_pos = {s.position: s for s in slots}

    # (3) Transport, then Bob confirms receipt and reports losses.
    delivered = _transmit_all(slots, channel, adversary, rng, transcript)
    losses = _loss_counts(layout, delivered)

    # (4) Eavesdropping check. In ENTANGLED_Z mode Alice measures her
    # retained half of each sacrificed pair now; the survivor's half
    # must sit one offset above her outcome, so the reveal takes the
    # same (position, basis, index) form as a decoy reveal.
    if cfg.check_mode is CheckMode.DECOY:
        check_recs = decoy_recs
    else:
        check_recs = {}
        for pos in sorted(layout.decoy_positions):
            a_rec = measure(pairs[pos], Basis.Z, rng, subsystem=Subsystem.A)
            check_recs[pos] = PreparationRecord(
                PreparationKind.DECOY, pos, basis=Basis.Z, index=(a_rec.outcome + offset) % dim
            )
    check, aborted = _run_check_phase(
        check_recs, slot_by_pos, delivered, cfg.threshold, rng, transcript
    )

    n_msg = len(layout.message_positions)
    n_chk = len(layout.decoy_positions)
    n_pairs = n_msg + (n_chk if cfg.check_mode is CheckMode.ENTANGLED_Z else 0)
    n_single = n_chk if cfg.check_mode is CheckMode.DECOY else 0
    log2d = math.log2(dim)
    entropy = von_neumann_entropy(profile)
    eta_q = n_msg / layout.total_len
    eta_t = total_efficiency(log2d, 2.0 * entropy, log2d)

    if aborted:
        eff = Efficiency(eta_q, eta_t, 0.0)
        return _report(True, None, (), check, losses, eff, transcript)

    # (5) Both parties measure the surviving message pairs in Z, in
    # position order: Alice her half, then Bob his.
    retained = [(t, pos) for t, pos in enumerate(layout.message_positions) if delivered[pos]]
    alice_outcomes: List[int] = []
    bob_outcomes: List[int] = []
    for _t, pos in retained:
        alice_outcomes.append(measure(pairs[pos], Basis.Z, rng, subsystem=Subsystem.A).outcome)
        bob_outcomes.append(measure_slot(slot_by_pos[pos], Basis.Z, rng).outcome)

    # (6) Announcement: her outcomes as-is, or offset by the message in
    # the delayed variant.
    if delayed:
        announced = [
            (alice_outcomes[i] - msg.dits[t]) % dim for i, (t, _pos) in enumerate(retained)
        ]
        transcript.append(Sender.ALICE, PayloadKind.DIFFERENCE_ANNOUNCE, tuple(announced))
    else:
        announced = alice_outcomes
        transcript.append(Sender.ALICE, PayloadKind.OUTCOME_ANNOUNCE, tuple(announced))

    # (7) Decode.
    decoded_dits = decode_shift_announcements(announced, bob_outcomes, dim, offset)
    decoded = SecretMessage(dim, tuple(decoded_dits))
    decoded_indices = tuple(t for t, _pos in retained)

    eve_attempts = eve_correct = 0
    if adversary.kind is AdversaryKind.INTERCEPT_RESEND:
        intercepted = {r.position: r for r in adversary.intercepts}
        for i, (t, pos) in enumerate(retained):
            rec = intercepted.get(pos)
            if rec is None:
                continue
            eve_attempts += 1
            guess = (rec.outcome - announced[i] - offset) % dim
            if guess == msg.dits[t]:
                eve_correct += 1

    photon_bits = (2 * n_pairs + n_single) * log2d
    raw = (
        len(decoded_dits) * log2d / (photon_bits + transcript.bit_count)
        if decoded_dits
        else 0.0
    )
    eff = Efficiency(eta_q, eta_t, raw)
    return _report(False, decoded, decoded_indices, check, losses, eff, transcript, eve_attempts, eve_correct)


def run_entangled_dsqc(
    msg: SecretMessage,
    profile: AmplitudeProfile,
    cfg: ProtocolConfig,
    channel: Optional[ChannelModel] = None,
    adversary: Optional[Adversary] = None,
    rng: Optional[np.random.Generator] = None,
) -> SessionReport:
    """One eager-variant session of the entangled-pair protocol."""
    if rng is None:
        raise DomainError("a seeded numpy Generator is required")
    return _entangled_session(msg, profile, cfg, channel, adversary, rng, delayed=False)


def delayed_encode_entangled(
    msg: SecretMessage,
    profile: AmplitudeProfile,
    cfg: ProtocolConfig,
    channel: Optional[ChannelModel] = None,
    adversary: Optional[Adversary] = None,
    rng: Optional[np.random.Generator] = None,
) -> SessionReport:
    """Delayed variant: pairs travel unencoded; after the channel is
    vouched for, Alice announces her outcomes minus the message, and
    Bob's decode arithmetic is identical to the eager variant."""
    if rng is None:
        raise DomainError("a seeded numpy Generator is required")
    return _entangled_session(msg, profile, cfg, channel, adversary, rng, delayed=True)


# ---- Single-photon protocol ----


def _single_photon_session(
    msg: SecretMessage,
    cfg: ProtocolConfig,
    channel: Optional[ChannelModel],
    adversary: Optional[Adversary],
    rng: np.random.Generator,
    delayed: bool,
) -> SessionReport:
    dim = msg.dim
    if len(msg) < 1:
        raise DomainError("cannot run a session on an empty message")
    if cfg.check_mode is not CheckMode.DECOY:
        raise DomainError("the single-photon protocol has no pairs to sacrifice; use decoy checks")
    channel = channel if channel is not None else ChannelModel.ideal()
    adversary = adversary if adversary is not None else Adversary.none()

    layout = SequenceLayout.build(len(msg), cfg.decoy_fraction, rng)
    transcript = Transcript(dim, layout.total_len)

    # (S1) Preparation: carriers and decoys from the same alphabet.
    states: Dict[int, PureState] = {}
    prep_recs: Dict[int, PreparationRecord] = {}
    for pos in range(layout.total_len):
        if pos in layout.decoy_positions:
            states[pos], prep_recs[pos] = make_decoy(dim, rng, pos)
        else:
            states[pos], prep_recs[pos] = make_single_photon(dim, rng, pos)

    # (S2) Encoding, eager only: the shift family matching the
    # preparation basis advances the eigenstate index by the dit.
    if not delayed:
        for t, pos in enumerate(layout.message_positions):
            rec = prep_recs[pos]
            family = shift_unitary if rec.basis is Basis.Z else phase_shift_unitary
            states[pos] = apply_unitary(states[pos], family(dim, msg.dits[t]))

    slots = [
        PhotonSlot(states[pos], Subsystem.WHOLE, position=pos) for pos in range(layout.total_len)
    ]
    slot_by_pos = {s.position: s for s in slots}

    # (S3) Transport, receipt, loss report, then the decoy check.
    delivered = _transmit_all(slots, channel, adversary, rng, transcript)
    losses = _loss_counts(layout, delivered)
    decoy_recs = {p: prep_recs[p] for p in layout.decoy_positions}
    check, aborted = _run_check_phase(
        decoy_recs, slot_by_pos, delivered, cfg.threshold, rng, transcript
    )

    n_msg = len(layout.message_positions)
    log2d = math.log2(dim)
    eta_q = n_msg / layout.total_len
    eta_t = total_efficiency(log2d, log2d, 1.0 + log2d)

    if aborted:
        eff = Efficiency(eta_q, eta_t, 0.0)
        return _report(True, None, (), check, losses, eff, transcript)

    # (S4) Alice reveals (basis, value) per surviving carrier: the
    # prepared index as-is, or with the dit folded in when delayed.
    retained = [(t, pos) for t, pos in enumerate(layout.message_positions) if delivered[pos]]
    payload: List[int] = []
    values: List[int] = []
    for t, pos in retained:
        rec = prep_recs[pos]
        value = rec.index if not delayed else (rec.index + msg.dits[t]) % dim
        values.append(value)
        payload.extend((_BASIS_CODE[rec.basis], value))
    transcript.append(Sender.ALICE, PayloadKind.ORIGINAL_STATE_REVEAL, tuple(payload))

    # Bob measures each surviving carrier in the revealed basis.
    bob_outcomes = [
        measure_slot(slot_by_pos[pos], prep_recs[pos].basis, rng).outcome for _t, pos in retained
    ]

    # (S5) Decode.
    decoded_dits = decode_state_reveals(values, bob_outcomes, dim, delayed)
    decoded = SecretMessage(dim, tuple(decoded_dits))
    decoded_indices = tuple(t for t, _pos in retained)

    eve_attempts = eve_correct = 0
    if adversary.kind is AdversaryKind.INTERCEPT_RESEND:
        intercepted = {r.position: r for r in adversary.intercepts}
        for i, (t, pos) in enumerate(retained):
            rec = intercepted.get(pos)
            if rec is None:
                continue
            eve_attempts += 1
            if delayed:
                guess = (values[i] - rec.outcome) % dim
            else:
                guess = (rec.outcome - values[i]) % dim
            if guess == msg.dits[t]:
                eve_correct += 1

    photon_bits = layout.total_len * log2d
    raw = (
        len(decoded_dits) * log2d / (photon_bits + transcript.bit_count)
        if decoded_dits
        else 0.0
    )
    eff = Efficiency(eta_q, eta_t, raw)
    return _report(False, decoded, decoded_indices, check, losses, eff, transcript, eve_attempts, eve_correct)


def run_single_photon_dsqc(
    msg: SecretMessage,
    cfg: ProtocolConfig,
    channel: Optional[ChannelModel] = None,
    adversary: Optional[Adversary] = None,
    rng: Optional[np.random.Generator] = None,
) -> SessionReport:
    """One eager-variant session of the single-photon protocol."""
    if rng is None:
        raise DomainError("a seeded numpy Generator is required")
    return _single_photon_session(msg, cfg, channel, adversary, rng, delayed=False)


def delayed_encode_single_photon(
    msg: SecretMessage,
    cfg: ProtocolConfig,
    channel: Optional[ChannelModel] = None,
    adversary: Optional[Adversary] = None,
    rng: Optional[np.random.Generator] = None,
) -> SessionReport:
    """Delayed variant: carriers travel as prepared; the reveal carries
    index plus dit instead of the bare index, at identical transcript
    cost, and decoding subtracts the other way around."""
    if rng is None:
        raise DomainError("a seeded numpy Generator is required")
    return _single_photon_session(msg, cfg, channel, adversary, rng, delayed=True)
