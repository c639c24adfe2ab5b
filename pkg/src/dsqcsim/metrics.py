"""Closed-form figures of merit: source entropy, efficiency, survival."""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .sources import AmplitudeProfile


def von_neumann_entropy(profile: AmplitudeProfile) -> float:
    """Entropy (in bits) of either half of a correlated pair built from
    ``profile``: -sum |a_j|^2 log2 |a_j|^2, with 0 log 0 taken as 0."""
    probs = profile.probabilities
    mask = probs > 0.0
    return float(-(probs[mask] * np.log2(probs[mask])).sum())


def intrinsic_efficiency(useful_quanta: float, total_quanta: float) -> float:
    """Fraction of transmitted quanta that carry message payload."""
    if total_quanta <= 0:
        raise DomainError("total quanta must be positive")
    if useful_quanta < 0 or useful_quanta > total_quanta:
        raise DomainError("useful quanta must lie in [0, total]")
    return useful_quanta / total_quanta


def total_efficiency(message_bits: float, quantum_bits: float, classical_bits: float) -> float:
    """Message bits delivered per bit of quantum plus classical resource."""
    if message_bits < 0 or quantum_bits < 0 or classical_bits < 0:
        raise DomainError("resource counts must be nonnegative")
    denom = quantum_bits + classical_bits
    if denom <= 0:
        raise DomainError("combined resource count must be positive")
    return message_bits / denom


def attenuation_survival(attenuation: float, length: float) -> float:
    """Probability a photon survives a fiber of the given length with
    the given attenuation coefficient per unit length."""
    if attenuation < 0 or length < 0:
        raise DomainError("attenuation and length must be nonnegative")
    return math.exp(-attenuation * length)
