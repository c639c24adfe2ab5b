"""Scenario configuration, Monte Carlo execution, reporting, replay.

A scenario fixes everything about a batch of sessions: protocol,
dimension, message policy, check configuration, channel, adversary,
trial count, and the master seed. Each trial gets its own child seed
(spawned from the master, indexed by trial), so trials are independent
yet the whole batch is reproducible bit for bit. Aggregates are folded
from integer tallies and exact float sums, which makes them invariant
under any reordering of the trials.

Reports are JSON with sorted keys; the per-trial transcripts go to a
line-delimited sidecar next to the report. ``replay`` re-runs a
report's embedded config and compares the stored rows and aggregates
exactly.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .channel import Adversary, AdversaryKind, BasisPolicy, ChannelModel
from .errors import ConfigError, SimulationError
from .protocols import (
    CheckMode,
    ProtocolConfig,
    SecretMessage,
    SessionReport,
    delayed_encode_entangled,
    delayed_encode_single_photon,
    run_entangled_dsqc,
    run_single_photon_dsqc,
)
from .qudit import MAX_DIM
from .sources import AmplitudeProfile

REPORT_SCHEMA = "dsqcsim-report-v1"

_PROTOCOLS = ("entangled", "single_photon")
_VARIANTS = ("eager", "delayed")
_CHECK_MODES = tuple(m.value for m in CheckMode)
_ADVERSARIES = tuple(k.value for k in AdversaryKind)
_POLICIES = tuple(p.value for p in BasisPolicy)


@dataclass(frozen=True)
class ScenarioConfig:
    """Flat, JSON-serializable description of one scenario."""

    protocol: str
    dim: int
    seed: int
    trials: int = 100
    message_length: Optional[int] = None
    message_dits: Optional[Tuple[int, ...]] = None
    profile: Optional[Tuple[float, ...]] = None
    decoy_fraction: float = 0.1
    threshold: float = 0.05
    check_mode: str = "decoy"
    variant: str = "eager"
    anti_correlated: Optional[bool] = None
    attenuation: float = 0.0
    length: float = 0.0
    depolarize_p: float = 0.0
    adversary: str = "none"
    adversary_policy: Optional[str] = None

    def validate(self) -> None:
        """Collect every problem before rejecting, so one round trip
        fixes a bad config."""
        problems: List[str] = []
        if self.protocol not in _PROTOCOLS:
            problems.append(f"protocol must be one of {_PROTOCOLS}, got {self.protocol!r}")
        if not isinstance(self.dim, int) or not 2 <= self.dim <= MAX_DIM:
            problems.append(f"dim must be an integer in [2, {MAX_DIM}], got {self.dim!r}")
        if not isinstance(self.seed, int):
            problems.append(f"seed must be an integer, got {self.seed!r}")
        if not isinstance(self.trials, int) or self.trials < 1:
            problems.append(f"trials must be a positive integer, got {self.trials!r}")
        if (self.message_length is None) == (self.message_dits is None):
            problems.append("exactly one of message_length or message_dits is required")
        if self.message_length is not None and (
            not isinstance(self.message_length, int) or self.message_length < 1
        ):
            problems.append(f"message_length must be a positive integer, got {self.message_length!r}")
        if self.message_dits is not None and isinstance(self.dim, int) and 2 <= self.dim <= MAX_DIM:
            bad = [v for v in self.message_dits if not isinstance(v, int) or not 0 <= v < self.dim]
            if bad:
                problems.append(f"message_dits contains values outside [0, {self.dim}): {bad[:5]}")
            if len(self.message_dits) < 1:
                problems.append("message_dits must not be empty")
        if self.profile is not None:
            if self.protocol == "single_photon":
                problems.append("profile applies only to the entangled protocol")
            probs = list(self.profile)
            if isinstance(self.dim, int) and len(probs) != self.dim:
                problems.append(f"profile must list {self.dim} probabilities, got {len(probs)}")
            if not all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in probs):
                problems.append("profile probabilities must be numbers")
            elif any(p < 0 for p in probs):
                problems.append("profile probabilities must be nonnegative")
            elif probs and abs(sum(probs) - 1.0) > 1e-9:
                problems.append(f"profile probabilities must sum to 1, got {sum(probs)!r}")
        def _num(value) -> bool:
            return isinstance(value, (int, float)) and not isinstance(value, bool)

        if not _num(self.decoy_fraction) or not 0.0 <= self.decoy_fraction < 1.0:
            problems.append(f"decoy_fraction must lie in [0, 1), got {self.decoy_fraction!r}")
        if not _num(self.threshold) or not 0.0 <= self.threshold <= 1.0:
            problems.append(f"threshold must lie in [0, 1], got {self.threshold!r}")
        if self.check_mode not in _CHECK_MODES:
            problems.append(f"check_mode must be one of {_CHECK_MODES}, got {self.check_mode!r}")
        if self.check_mode == "entangled_z" and self.protocol == "single_photon":
            problems.append("check_mode entangled_z requires the entangled protocol")
        if self.variant not in _VARIANTS:
            problems.append(f"variant must be one of {_VARIANTS}, got {self.variant!r}")
        if not _num(self.attenuation) or self.attenuation < 0:
            problems.append(f"attenuation must be nonnegative, got {self.attenuation!r}")
        if not _num(self.length) or self.length < 0:
            problems.append(f"length must be nonnegative, got {self.length!r}")
        if not _num(self.depolarize_p) or not 0.0 <= self.depolarize_p <= 1.0:
            problems.append(f"depolarize_p must lie in [0, 1], got {self.depolarize_p!r}")
        if self.adversary not in _ADVERSARIES:
            problems.append(f"adversary must be one of {_ADVERSARIES}, got {self.adversary!r}")
        if self.adversary == "intercept_resend":
            if self.adversary_policy not in _POLICIES:
                problems.append(f"adversary_policy must be one of {_POLICIES}, got {self.adversary_policy!r}")
        elif self.adversary_policy is not None:
            problems.append(f"adversary {self.adversary!r} takes no adversary_policy")
        if problems:
            raise ConfigError(problems)

    # -- serialization --

    def to_dict(self) -> dict:
        """Nested form used in config files and reports."""
        return {
            "protocol": self.protocol,
            "dim": self.dim,
            "seed": self.seed,
            "trials": self.trials,
            "message": (
                {"dits": list(self.message_dits)}
                if self.message_dits is not None
                else {"random_length": self.message_length}
            ),
            "profile": list(self.profile) if self.profile is not None else None,
            "decoy_fraction": self.decoy_fraction,
            "threshold": self.threshold,
            "check_mode": self.check_mode,
            "variant": self.variant,
            "anti_correlated": self.anti_correlated,
            "channel": {
                "attenuation": self.attenuation,
                "length": self.length,
                "depolarize_p": self.depolarize_p,
            },
            "adversary": {"kind": self.adversary, "policy": self.adversary_policy},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        if not isinstance(data, dict):
            raise ConfigError(["config must be a JSON object"])
        known = {
            "protocol",
            "dim",
            "seed",
            "trials",
            "message",
            "profile",
            "decoy_fraction",
            "threshold",
            "check_mode",
            "variant",
            "anti_correlated",
            "channel",
            "adversary",
        }
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError([f"unknown config field {name!r}" for name in unknown])
        message = data.get("message") or {}
        channel = data.get("channel") or {}
        adversary = data.get("adversary") or {}
        if not isinstance(message, dict) or not isinstance(channel, dict) or not isinstance(adversary, dict):
            raise ConfigError(["message, channel, and adversary must be JSON objects"])
        profile = data.get("profile")
        dits = message.get("dits")
        cfg = cls(
            protocol=data.get("protocol", ""),
            dim=data.get("dim", 0),
            seed=data.get("seed"),
            trials=data.get("trials", 100),
            message_length=message.get("random_length"),
            message_dits=tuple(dits) if dits is not None else None,
            profile=tuple(profile) if profile is not None else None,
            decoy_fraction=data.get("decoy_fraction", 0.1),
            threshold=data.get("threshold", 0.05),
            check_mode=data.get("check_mode", "decoy"),
            variant=data.get("variant", "eager"),
            anti_correlated=data.get("anti_correlated"),
            attenuation=channel.get("attenuation", 0.0),
            length=channel.get("length", 0.0),
            depolarize_p=channel.get("depolarize_p", 0.0),
            adversary=adversary.get("kind", "none"),
            adversary_policy=adversary.get("policy"),
        )
        cfg.validate()
        return cfg


@dataclass(frozen=True)
class TrialResult:
    """Per-trial tallies; everything the aggregates need, re-derivable
    counts included."""

    index: int
    aborted: bool
    checked: int
    mismatches: int
    z_checked: int
    z_mismatches: int
    x_checked: int
    x_mismatches: int
    message_positions: int
    total_positions: int
    delivered_dits: int
    correct_dits: int
    lost_message: int
    lost_decoy: int
    transcript_bits: int
    eve_attempts: int
    eve_correct: int
    decoy_error_rate: float
    eta_q: float
    eta_t: float
    eta_t_raw: float


@dataclass
class RunSummary:
    config: ScenarioConfig
    trials: List[TrialResult]
    aggregates: Dict[str, object]
    transcripts: List[Tuple[str, ...]]

    def to_json(self) -> str:
        payload = {
            "schema": REPORT_SCHEMA,
            "config": self.config.to_dict(),
            "aggregates": self.aggregates,
            "trials": [dataclasses.asdict(t) for t in self.trials],
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def compute_aggregates(rows: List[TrialResult]) -> Dict[str, object]:
    """Fold trial rows into batch statistics.

    Ratios come from pooled integer counts and means from exact float
    sums, so any permutation of the rows produces identical values.
    """
    n = len(rows)
    aborts = sum(r.aborted for r in rows)
    checked = sum(r.checked for r in rows)
    mism = sum(r.mismatches for r in rows)
    delivered = sum(r.delivered_dits for r in rows)
    correct = sum(r.correct_dits for r in rows)
    sent = sum(r.total_positions for r in rows)
    lost = sum(r.lost_message + r.lost_decoy for r in rows)
    msg_positions = sum(r.message_positions for r in rows)
    eve_attempts = sum(r.eve_attempts for r in rows)
    eve_correct = sum(r.eve_correct for r in rows)
    return {
        "trials": n,
        "abort_fraction": aborts / n,
        "mean_decoy_error_rate": math.fsum(r.decoy_error_rate for r in rows) / n,
        "empirical_detection_rate": (mism / checked) if checked else 0.0,
        "decode_accuracy": (correct / delivered) if delivered else 0.0,
        "loss_rate": (lost / sent) if sent else 0.0,
        "eta_q": (msg_positions / sent) if sent else 0.0,
        "eta_t_mean": math.fsum(r.eta_t for r in rows) / n,
        "eta_t_raw_mean": math.fsum(r.eta_t_raw for r in rows) / n,
        "eve_accuracy": (eve_correct / eve_attempts) if eve_attempts else None,
        "total_checked": checked,
        "total_delivered_dits": delivered,
    }


def _profile_for(cfg: ScenarioConfig) -> AmplitudeProfile:
    if cfg.profile is None:
        return AmplitudeProfile.uniform(cfg.dim)
    return AmplitudeProfile.from_probabilities(list(cfg.profile))


def _trial_row(index: int, msg: SecretMessage, report: SessionReport) -> TrialResult:
    correct = 0
    delivered = 0
    if report.decoded is not None:
        delivered = len(report.decoded.dits)
        for value, t in zip(report.decoded.dits, report.decoded_indices):
            if value == msg.dits[t]:
                correct += 1
    transcript = report.transcript
    return TrialResult(
        index=index,
        aborted=report.aborted,
        checked=report.checked,
        mismatches=report.mismatches,
        z_checked=report.z_checked,
        z_mismatches=report.z_mismatches,
        x_checked=report.x_checked,
        x_mismatches=report.x_mismatches,
        message_positions=len(msg),
        total_positions=transcript.total_len,
        delivered_dits=delivered,
        correct_dits=correct,
        lost_message=report.losses.message,
        lost_decoy=report.losses.decoy,
        transcript_bits=transcript.bit_count,
        eve_attempts=report.eve_attempts,
        eve_correct=report.eve_correct,
        decoy_error_rate=report.decoy_error_rate,
        eta_q=report.efficiency.eta_q,
        eta_t=report.efficiency.eta_t,
        eta_t_raw=report.efficiency.eta_t_raw,
    )


def run_scenario(cfg: ScenarioConfig) -> RunSummary:
    """Run every trial of a scenario and fold the results.

    Trial i draws from a generator seeded by child i of the master
    seed. Within a trial the draw order is: random message (when the
    config asks for one), then the session itself.
    """
    cfg.validate()
    protocol_cfg = ProtocolConfig(
        decoy_fraction=cfg.decoy_fraction,
        threshold=cfg.threshold,
        check_mode=CheckMode(cfg.check_mode),
        anti_correlated=cfg.anti_correlated,
    )
    channel = ChannelModel(cfg.attenuation, cfg.length, cfg.depolarize_p)
    profile = _profile_for(cfg) if cfg.protocol == "entangled" else None
    delayed = cfg.variant == "delayed"

    rows: List[TrialResult] = []
    transcripts: List[Tuple[str, ...]] = []
    for index, child in enumerate(np.random.SeedSequence(cfg.seed).spawn(cfg.trials)):
        rng = np.random.default_rng(child)
        if cfg.message_dits is not None:
            msg = SecretMessage(cfg.dim, cfg.message_dits)
        else:
            msg = SecretMessage.random(cfg.dim, cfg.message_length, rng)
        if cfg.adversary == "intercept_resend":
            adversary = Adversary.intercept_resend(BasisPolicy(cfg.adversary_policy))
        elif cfg.adversary == "passive":
            adversary = Adversary.passive()
        else:
            adversary = Adversary.none()
        if cfg.protocol == "entangled":
            runner = delayed_encode_entangled if delayed else run_entangled_dsqc
            report = runner(msg, profile, protocol_cfg, channel, adversary, rng)
        else:
            runner = delayed_encode_single_photon if delayed else run_single_photon_dsqc
            report = runner(msg, protocol_cfg, channel, adversary, rng)
        rows.append(_trial_row(index, msg, report))
        transcripts.append(tuple(report.transcript.to_lines()))
    return RunSummary(cfg, rows, compute_aggregates(rows), transcripts)


# ---- Report files ----


def transcripts_path(report_path: str) -> str:
    return report_path + ".transcripts.log"


def emit_report(summary: RunSummary, path: str) -> None:
    """Write the JSON report and the transcript sidecar.

    The report bytes are a pure function of the scenario config, so a
    re-run of the same config produces an identical file.
    """
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(summary.to_json())
        with open(transcripts_path(path), "w", encoding="utf-8") as fh:
            for index, lines in enumerate(summary.transcripts):
                for line in lines:
                    fh.write(f"{index} {line}\n")
    except OSError as exc:
        raise SimulationError(f"could not write report to {path!r}: {exc}") from exc


def load_report(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SimulationError(f"could not read report from {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SimulationError(f"report at {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or data.get("schema") != REPORT_SCHEMA:
        raise SimulationError(f"report at {path!r} does not carry schema {REPORT_SCHEMA!r}")
    return data


def replay(path: str) -> Tuple[bool, List[str]]:
    """Re-run a report's config and compare against its stored numbers.

    Returns (ok, differences); differences name each field that moved.
    """
    data = load_report(path)
    cfg = ScenarioConfig.from_dict(data["config"])
    fresh = run_scenario(cfg)
    diffs: List[str] = []
    stored_agg = data.get("aggregates", {})
    fresh_agg = fresh.aggregates
    for key in sorted(set(stored_agg) | set(fresh_agg)):
        if stored_agg.get(key) != fresh_agg.get(key):
            diffs.append(f"aggregates.{key}: stored {stored_agg.get(key)!r}, recomputed {fresh_agg.get(key)!r}")
    stored_trials = data.get("trials", [])
    fresh_trials = [dataclasses.asdict(t) for t in fresh.trials]
    if len(stored_trials) != len(fresh_trials):
        diffs.append(f"trial count: stored {len(stored_trials)}, recomputed {len(fresh_trials)}")
    else:
        for i, (old, new) in enumerate(zip(stored_trials, fresh_trials)):
            if old != new:
                moved = sorted(k for k in set(old) | set(new) if old.get(k) != new.get(k))
                diffs.append(f"trial {i}: fields {moved} differ")
    return (not diffs), diffs


# ---- Presets ----

PRESETS: Dict[str, ScenarioConfig] = {
    "baseline-ideal": ScenarioConfig(
        protocol="entangled", dim=2, seed=20260801, trials=100, message_length=256
    ),
    "eve-intercept": ScenarioConfig(
        protocol="entangled",
        dim=2,
        seed=20260802,
        trials=20,
        message_length=2100,
        decoy_fraction=0.2,
        adversary="intercept_resend",
        adversary_policy="random_zx",
    ),
    "eve-z-only-no-decoy": ScenarioConfig(
        protocol="entangled",
        dim=2,
        seed=20260803,
        trials=20,
        message_length=500,
        decoy_fraction=0.2,
        check_mode="entangled_z",
        adversary="intercept_resend",
        adversary_policy="fixed_z",
    ),
    "lossy-channel": ScenarioConfig(
        protocol="entangled",
        dim=2,
        seed=20260804,
        trials=50,
        message_length=500,
        attenuation=math.log(2),
        length=1.0,
    ),
    "depolarizing": ScenarioConfig(
        protocol="entangled",
        dim=2,
        seed=20260805,
        trials=40,
        message_length=500,
        depolarize_p=0.1,
        threshold=0.12,
    ),
    "delayed-encoding": ScenarioConfig(
        protocol="entangled",
        dim=3,
        seed=20260806,
        trials=50,
        message_length=256,
        variant="delayed",
    ),
}

PRESET_NOTES: Dict[str, str] = {
    "baseline-ideal": "entangled protocol, ideal channel, no adversary",
    "eve-intercept": "random-basis intercept-resend against mixed decoys; always detected",
    "eve-z-only-no-decoy": "Z-only interceptor vs Z-correlation-only checks; never detected",
    "lossy-channel": "attenuation tuned to 50 percent survival",
    "depolarizing": "10 percent depolarization, loosened abort threshold",
    "delayed-encoding": "dimension-3 delayed variant on an ideal channel",
}
