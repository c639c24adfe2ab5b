"""Exact desk-scale simulator for deterministic secure communication
over qudit channels: entangled-pair and single-photon protocols, with
pluggable channel and adversary models and closed-form metrics."""

from .channel import (
    Adversary,
    AdversaryKind,
    BasisPolicy,
    ChannelModel,
    InterceptRecord,
    TransmitResult,
    expected_detection_rate,
    transmit,
)
from .errors import ConfigError, DomainError, InvariantError, SimulationError, UsageError
from .harness import (
    PRESETS,
    RunSummary,
    ScenarioConfig,
    TrialResult,
    compute_aggregates,
    emit_report,
    replay,
    run_scenario,
)
from .metrics import (
    attenuation_survival,
    intrinsic_efficiency,
    total_efficiency,
    von_neumann_entropy,
)
from .protocols import (
    CheckMode,
    CheckResult,
    Efficiency,
    LossCounts,
    ProtocolConfig,
    SecretMessage,
    SequenceLayout,
    SessionReport,
    decode_shift_announcements,
    decode_state_reveals,
    delayed_encode_entangled,
    delayed_encode_single_photon,
    error_rate_analysis,
    run_entangled_dsqc,
    run_single_photon_dsqc,
)
from .qudit import (
    MAX_DIM,
    Basis,
    JointState,
    MeasurementRecord,
    PureState,
    Subsystem,
    Unitary,
    apply_local,
    apply_unitary,
    basis_ket,
    born_probabilities,
    equal_up_to_phase,
    hadamard,
    identity_unitary,
    measure,
    overlap,
    phase_shift_unitary,
    shift_unitary,
    xd_ket,
    zd_ket,
)
from .sources import (
    AmplitudeProfile,
    PhotonSlot,
    PreparationKind,
    PreparationRecord,
    decoy_from_pair_measurement,
    make_decoy,
    make_pure_pair,
    make_single_photon,
    measure_slot,
    randomized_pair,
)
from .transcript import PayloadKind, Sender, Transcript, TranscriptEntry

__version__ = "0.1.0"
