"""Classical-channel log with explicit bit accounting.

Every public announcement a session makes lands here as one entry.
Each entry kind has a fixed cost in bits, derived from the session's
dimension and sequence length, so the classical overhead of a protocol
run can be read off the transcript exactly. Entries serialize to a
line-delimited text form
(``SENDER KIND v1,v2,...``, payload ``-`` when empty) for audit and
replay.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

from .errors import DomainError, InvariantError


class Sender(Enum):
    ALICE = "alice"
    BOB = "bob"


class PayloadKind(Enum):
    RECEIPT_CONFIRM = "receipt_confirm"
    DECOY_REVEAL = "decoy_reveal"
    CHECK_VERDICT = "check_verdict"
    OUTCOME_ANNOUNCE = "outcome_announce"
    ORIGINAL_STATE_REVEAL = "original_state_reveal"
    DIFFERENCE_ANNOUNCE = "difference_announce"
    LOSS_REPORT = "loss_report"


@dataclass(frozen=True)
class TranscriptEntry:
    sender: Sender
    kind: PayloadKind
    payload: Tuple[int, ...]
    bits: int


class Transcript:
    """Ordered announcement log for one session.

    Field widths: a basis costs 1 bit, an eigenstate index or message
    dit costs ceil(log2 dim) bits, a sequence position costs
    ceil(log2 total_len) bits, and a bare confirmation or verdict costs
    1 bit.
    """

    def __init__(self, dim: int, total_len: int):
        if dim < 2:
            raise DomainError("transcript needs the session dimension")
        if total_len < 1:
            raise DomainError("transcript needs a positive sequence length")
        self.dim = dim
        self.total_len = total_len
        self.dit_bits = max(1, (dim - 1).bit_length())
        self.position_bits = max(1, (total_len - 1).bit_length())
        self.entries: List[TranscriptEntry] = []
        self.bit_count = 0

    def _width(self, kind: PayloadKind, payload: Tuple[int, ...]) -> int:
        if kind in (PayloadKind.RECEIPT_CONFIRM, PayloadKind.CHECK_VERDICT):
            return 1
        if kind is PayloadKind.DECOY_REVEAL:
            # payload: (position, basis code, index)
            if len(payload) != 3:
                raise InvariantError("decoy reveal carries (position, basis, index)")
            return self.position_bits + 1 + self.dit_bits
        if kind in (PayloadKind.OUTCOME_ANNOUNCE, PayloadKind.DIFFERENCE_ANNOUNCE):
            return self.dit_bits * len(payload)
        if kind is PayloadKind.ORIGINAL_STATE_REVEAL:
            # payload: flattened (basis code, value) pairs
            if len(payload) % 2 != 0:
                raise InvariantError("state reveal carries (basis, value) pairs")
            return (1 + self.dit_bits) * (len(payload) // 2)
        if kind is PayloadKind.LOSS_REPORT:
            return self.position_bits * len(payload)
        raise DomainError(f"unknown payload kind {kind!r}")

    def append(self, sender: Sender, kind: PayloadKind, payload: Tuple[int, ...] = ()) -> TranscriptEntry:
        payload = tuple(int(v) for v in payload)
        entry = TranscriptEntry(sender, kind, payload, self._width(kind, payload))
        self.entries.append(entry)
        self.bit_count += entry.bits
        return entry

    def bits_of(self, kind: PayloadKind) -> int:
        return sum(e.bits for e in self.entries if e.kind is kind)

    def entries_of(self, kind: PayloadKind) -> List[TranscriptEntry]:
        return [e for e in self.entries if e.kind is kind]

    def to_lines(self) -> List[str]:
        lines = []
        for e in self.entries:
            body = ",".join(str(v) for v in e.payload) if e.payload else "-"
            lines.append(f"{e.sender.value} {e.kind.value} {body}")
        return lines

    @classmethod
    def from_lines(cls, dim: int, total_len: int, lines) -> "Transcript":
        t = cls(dim, total_len)
        for line in lines:
            parts = line.strip().split(" ")
            if len(parts) != 3:
                raise DomainError(f"malformed transcript line: {line!r}")
            sender = Sender(parts[0])
            kind = PayloadKind(parts[1])
            payload = () if parts[2] == "-" else tuple(int(v) for v in parts[2].split(","))
            t.append(sender, kind, payload)
        return t
