"""Exact state-vector algebra for single qudits and two-qudit pairs.

Everything downstream rests on this module: computational (Z) and
Fourier (X) basis kets, the generalized Hadamard that connects them,
cyclic shift and phase-shift unitaries, local application of a
single-qudit unitary to either half of a pair, and Born-rule
measurement. Dimensions are capped at MAX_DIM so joint vectors stay
tiny and every amplitude is tracked exactly.

Measurement is the only operation that mutates a state: it collapses
the measured object in place and renormalizes, so repeated measurement
in the same basis reproduces the same outcome with certainty. All
randomness comes from the generator passed in by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from .errors import DomainError, InvariantError

MAX_DIM = 16

# Numeric tolerance for unit-norm and unitarity checks.
NORM_TOL = 1e-10


class Basis(Enum):
    Z = "Z"
    X = "X"


class Subsystem(Enum):
    WHOLE = "whole"
    A = "A"
    B = "B"


def _check_dim(dim: int) -> None:
    if not isinstance(dim, (int, np.integer)):
        raise DomainError(f"dimension must be an integer, got {dim!r}")
    if dim < 2 or dim > MAX_DIM:
        raise DomainError(f"dimension must lie in [2, {MAX_DIM}], got {dim}")


def _check_index(dim: int, index: int, what: str) -> int:
    if not isinstance(index, (int, np.integer)):
        raise DomainError(f"{what} must be an integer, got {index!r}")
    if index < 0 or index >= dim:
        raise DomainError(f"{what} must lie in [0, {dim}), got {index}")
    return int(index)


def _as_unit_vector(amps, length: int) -> np.ndarray:
    vec = np.array(amps, dtype=complex)
    if vec.shape != (length,):
        raise InvariantError(f"amplitude vector must have shape ({length},), got {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise InvariantError("amplitude vector contains non-finite entries")
    norm_sq = float(np.vdot(vec, vec).real)
    if abs(norm_sq - 1.0) > NORM_TOL:
        raise InvariantError(f"amplitude vector is not normalized: |norm^2 - 1| = {abs(norm_sq - 1.0):.3e}")
    return vec


@dataclass
class PureState:
    """A single qudit, stored as its full complex amplitude vector.

    The state owns its vector (the constructor copies), and nothing
    outside ``measure`` may mutate it.
    """

    dim: int
    amps: np.ndarray

    def __post_init__(self):
        _check_dim(self.dim)
        self.amps = _as_unit_vector(self.amps, self.dim)


@dataclass
class JointState:
    """Two qudits of equal dimension, stored as one length d*d vector.

    Index convention: amps[j * dim + k] is the coefficient of
    |j>_A (x) |k>_B, i.e. reshaping to (dim, dim) puts subsystem A on
    rows and subsystem B on columns.
    """

    dim: int
    amps: np.ndarray

    def __post_init__(self):
        _check_dim(self.dim)
        self.amps = _as_unit_vector(self.amps, self.dim * self.dim)


State = Union[PureState, JointState]


@dataclass
class Unitary:
    """A dense single-qudit unitary, validated at construction."""

    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        _check_dim(self.dim)
        mat = np.array(self.matrix, dtype=complex)
        if mat.shape != (self.dim, self.dim):
            raise InvariantError(f"matrix must have shape ({self.dim}, {self.dim}), got {mat.shape}")
        deviation = float(np.abs(mat @ mat.conj().T - np.eye(self.dim)).max())
        if deviation > NORM_TOL:
            raise InvariantError(f"matrix is not unitary: max |U U+ - I| = {deviation:.3e}")
        self.matrix = mat


@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome of one Born-rule measurement.

    ``post_state`` is the very object that was measured, now collapsed.
    """

    basis: Basis
    outcome: int
    post_state: State


# ---- Basis kets ----


def zd_ket(dim: int, j: int) -> PureState:
    """Computational-basis ket |j>."""
    _check_dim(dim)
    j = _check_index(dim, j, "basis index")
    amps = np.zeros(dim, dtype=complex)
    amps[j] = 1.0
    return PureState(dim, amps)


def xd_ket(dim: int, l: int) -> PureState:
    """Fourier-basis ket: equal-magnitude superposition of all |j> with
    phases exp(2*pi*i * j*l / dim)."""
    _check_dim(dim)
    l = _check_index(dim, l, "basis index")
    phases = (np.arange(dim) * l) % dim
    amps = np.exp((2j * np.pi / dim) * phases) / np.sqrt(dim)
    return PureState(dim, amps)


def basis_ket(dim: int, basis: Basis, index: int) -> PureState:
    if basis is Basis.Z:
        return zd_ket(dim, index)
    if basis is Basis.X:
        return xd_ket(dim, index)
    raise DomainError(f"unknown basis {basis!r}")


# ---- Standard unitaries ----
#
# The constructors are cached per (dim, shift); cached matrices are
# marked read-only so sharing them is safe.


def _freeze(u: Unitary) -> Unitary:
    u.matrix.setflags(write=False)
    return u


@lru_cache(maxsize=None)
def identity_unitary(dim: int) -> Unitary:
    _check_dim(dim)
    return _freeze(Unitary(dim, np.eye(dim, dtype=complex)))


@lru_cache(maxsize=None)
def hadamard(dim: int) -> Unitary:
    """Generalized Hadamard: column j is the Fourier ket with index j,
    so H |j> lands on the X-basis ket of the same index."""
    _check_dim(dim)
    grid = np.outer(np.arange(dim), np.arange(dim)) % dim
    mat = np.exp((2j * np.pi / dim) * grid) / np.sqrt(dim)
    return _freeze(Unitary(dim, mat))


@lru_cache(maxsize=None)
def shift_unitary(dim: int, m: int) -> Unitary:
    """Cyclic shift on the computational basis: |j> -> |j + m mod dim>."""
    _check_dim(dim)
    m = _check_index(dim, m, "shift amount")
    mat = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        mat[(j + m) % dim, j] = 1.0
    return _freeze(Unitary(dim, mat))


@lru_cache(maxsize=None)
def phase_shift_unitary(dim: int, m: int) -> Unitary:
    """Cyclic shift combined with a phase ladder: |j> picks up
    exp(2*pi*i * j*m / dim) before moving to |j + m mod dim>.

    On the X basis this acts as an index shift by m (up to a global
    phase), which the plain shift cannot do: the plain shift leaves
    X-basis indices fixed. Both families are needed to encode in both
    bases.
    """
    _check_dim(dim)
    m = _check_index(dim, m, "shift amount")
    mat = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        mat[(j + m) % dim, j] = np.exp((2j * np.pi / dim) * ((j * m) % dim))
    return _freeze(Unitary(dim, mat))


# ---- Applying unitaries ----


def apply_unitary(state: PureState, u: Unitary) -> PureState:
    """Return u applied to a single qudit. The input is not mutated."""
    if not isinstance(state, PureState):
        raise DomainError("apply_unitary acts on a PureState; use apply_local for pairs")
    if state.dim != u.dim:
        raise DomainError(f"dimension mismatch: state {state.dim}, unitary {u.dim}")
    return PureState(state.dim, u.matrix @ state.amps)


def apply_local(state: JointState, subsystem: Subsystem, u: Unitary) -> JointState:
    """Return (u (x) I) or (I (x) u) applied to a pair. The input is not
    mutated; the result is a fresh JointState."""
    if not isinstance(state, JointState):
        raise DomainError("apply_local acts on a JointState")
    if state.dim != u.dim:
        raise DomainError(f"dimension mismatch: state {state.dim}, unitary {u.dim}")
    mat = state.amps.reshape(state.dim, state.dim)
    if subsystem is Subsystem.A:
        out = u.matrix @ mat
    elif subsystem is Subsystem.B:
        out = mat @ u.matrix.T
    else:
        raise DomainError("subsystem must be A or B for a local unitary")
    return JointState(state.dim, out.ravel())


# ---- Measurement ----


def _basis_coefficients(state: State, basis: Basis, subsystem: Optional[Subsystem]) -> np.ndarray:
    """Amplitudes of ``state`` in the measurement basis.

    PureState: a length-dim vector indexed by outcome. JointState: a
    dim x dim matrix whose measured-side index is the outcome and whose
    other index spans the partner's computational basis.
    """
    if basis not in (Basis.Z, Basis.X):
        raise DomainError(f"unknown basis {basis!r}")
    if isinstance(state, PureState):
        if subsystem not in (None, Subsystem.WHOLE):
            raise DomainError("a single photon has no subsystem to select")
        if basis is Basis.Z:
            return state.amps
        return hadamard(state.dim).matrix.conj().T @ state.amps
    if isinstance(state, JointState):
        if subsystem not in (Subsystem.A, Subsystem.B):
            raise DomainError("measuring a pair requires subsystem A or B")
        mat = state.amps.reshape(state.dim, state.dim)
        h = hadamard(state.dim).matrix
        if subsystem is Subsystem.A:
            return mat if basis is Basis.Z else h.conj().T @ mat
        return mat if basis is Basis.Z else mat @ h.conj()
    raise DomainError(f"cannot measure object of type {type(state).__name__}")


def born_probabilities(state: State, basis: Basis, subsystem: Optional[Subsystem] = None) -> np.ndarray:
    """Outcome distribution without performing the measurement."""
    coeffs = _basis_coefficients(state, basis, subsystem)
    weights = np.abs(coeffs) ** 2
    if isinstance(state, JointState):
        axis = 1 if subsystem is Subsystem.A else 0
        weights = weights.sum(axis=axis)
    return weights


def _draw_outcome(weights: np.ndarray, rng: np.random.Generator) -> int:
    total = float(weights.sum())
    if abs(total - 1.0) > 1e-8:
        raise InvariantError(f"state is not normalized at measurement time: total weight {total!r}")
    cumulative = np.cumsum(weights)
    idx = int(np.searchsorted(cumulative, rng.random() * total, side="right"))
    return min(idx, len(weights) - 1)


def measure(
    state: State,
    basis: Basis,
    rng: np.random.Generator,
    subsystem: Optional[Subsystem] = None,
) -> MeasurementRecord:
    """Measure ``state`` in ``basis``, collapsing it in place.

    For a JointState, ``subsystem`` picks which half is measured; the
    partner is left in its exact conditional state, renormalized, so a
    follow-up measurement of the other half sees the right
    correlations. For a PureState, ``subsystem`` must be omitted or
    WHOLE.
    """
    coeffs = _basis_coefficients(state, basis, subsystem)
    if isinstance(state, PureState):
        weights = np.abs(coeffs) ** 2
        outcome = _draw_outcome(weights, rng)
        state.amps[:] = basis_ket(state.dim, basis, outcome).amps
        return MeasurementRecord(basis, outcome, state)

    magnitudes = np.abs(coeffs) ** 2
    if subsystem is Subsystem.A:
        weights = magnitudes.sum(axis=1)
        outcome = _draw_outcome(weights, rng)
        partner = coeffs[outcome, :].copy()
    else:
        weights = magnitudes.sum(axis=0)
        outcome = _draw_outcome(weights, rng)
        partner = coeffs[:, outcome].copy()
    partner /= np.linalg.norm(partner)
    own = basis_ket(state.dim, basis, outcome).amps
    if subsystem is Subsystem.A:
        state.amps[:] = np.outer(own, partner).ravel()
    else:
        state.amps[:] = np.outer(partner, own).ravel()
    return MeasurementRecord(basis, outcome, state)


# ---- Inner products ----


def overlap(first: State, second: State) -> complex:
    """Inner product <first|second>."""
    if type(first) is not type(second) or first.dim != second.dim:
        raise DomainError("overlap requires two states of the same kind and dimension")
    return complex(np.vdot(first.amps, second.amps))


def equal_up_to_phase(first: State, second: State, tol: float = NORM_TOL) -> bool:
    """Whether two states differ only by a global phase, decided by
    checking |<first|second>|^2 against 1."""
    return abs(abs(overlap(first, second)) ** 2 - 1.0) <= tol
