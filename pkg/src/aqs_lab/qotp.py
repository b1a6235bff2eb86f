"""Quantum one-time pad and the keyed per-qubit transform.

Two keyed operations cover everything the protocols encrypt with:

* the pad ``E``: qubit i receives sigma_x^{k[2i]} sigma_z^{k[2i+1]}
  (sigma_z acts first), consuming two key bits per qubit;
* the transform ``M``: qubit i receives sigma_x^{k[i]} sigma_z^{k[c(i)]}
  where c(i) is a companion index, one key bit of primary plus one shared
  neighbour bit per qubit.

Indices here are 0-based.  The companion convention is swappable: the
default pairs qubit i with key bit (i+1) mod n; the alternative XORs the
0-based position with 1 and wraps modulo n.  Round-trips are exact under
either convention.

A :class:`QubitSequence` is an ordered list of transmission slots.  Each
slot is one optical pulse: the first qubit is the legitimate photon and any
later entries are rider photons that the receiving apparatus cannot see but
still operates on.  Honest code never creates riders; the keyed operations
apply their per-slot Paulis to every photon in the slot, which is exactly
what makes hidden-companion attacks possible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .qstate import Prng, QubitId, Registry, SimulationError


class KeyTooShort(SimulationError):
    """Key has fewer bits than the operation consumes."""


class Convention(Enum):
    CYCLIC = "cyclic"
    XOR = "xor"


@dataclass(frozen=True)
class Key:
    """Classical bit string with a role label for reporting."""

    bits: tuple[int, ...]
    role: str = "key"

    def __post_init__(self) -> None:
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("key bits must be 0 or 1")

    def __len__(self) -> int:
        return len(self.bits)

    def bit(self, index: int) -> int:
        return self.bits[index]

    def bitstring(self) -> str:
        return "".join(str(b) for b in self.bits)

    def flipped(self, index: int) -> "Key":
        """Copy with one bit flipped; used to model forged key material."""
        bits = list(self.bits)
        bits[index] ^= 1
        return Key(tuple(bits), self.role)

    def xored_slots(self, masks: dict[int, int]) -> "Key":
        """Copy with 2-bit slot masks applied: slot i covers bits 2i, 2i+1."""
        bits = list(self.bits)
        for slot, mask in masks.items():
            bits[2 * slot] ^= (mask >> 1) & 1
            bits[2 * slot + 1] ^= mask & 1
        return Key(tuple(bits), self.role)


def gen_key(length: int, role: str, rng: Prng) -> Key:
    if length < 1:
        raise ValueError("key length must be positive")
    return Key(rng.bits(length), role)


class QubitSequence:
    """Ordered transmission sequence of single-photon slots.

    ``qubits`` exposes the legitimate photons only.  Riders attached by an
    eavesdropper share their slot's pulse and receive every keyed Pauli the
    slot receives.
    """

    def __init__(self, slots: Iterable[Sequence[QubitId]]):
        self.slots: list[list[QubitId]] = [list(s) for s in slots]
        if any(len(s) == 0 for s in self.slots):
            raise ValueError("empty slot")

    @classmethod
    def from_qubits(cls, qubits: Iterable[QubitId]) -> "QubitSequence":
        return cls([[q] for q in qubits])

    @property
    def qubits(self) -> list[QubitId]:
        return [slot[0] for slot in self.slots]

    def all_photons(self) -> list[QubitId]:
        return [q for slot in self.slots for q in slot]

    def __len__(self) -> int:
        return len(self.slots)

    def copy(self) -> "QubitSequence":
        return QubitSequence(self.slots)

    def attach_rider(self, slot_index: int, qubit: QubitId) -> None:
        self.slots[slot_index].append(qubit)

    def detach_riders(self) -> list[tuple[int, QubitId]]:
        """Remove and return every rider as (slot index, qubit)."""
        captured: list[tuple[int, QubitId]] = []
        for index, slot in enumerate(self.slots):
            for rider in slot[1:]:
                captured.append((index, rider))
            del slot[1:]
        return captured

    @staticmethod
    def concat(parts: Sequence["QubitSequence"]) -> "QubitSequence":
        slots: list[list[QubitId]] = []
        for part in parts:
            slots.extend(list(s) for s in part.slots)
        return QubitSequence(slots)

    def split(self, sizes: Sequence[int]) -> list["QubitSequence"]:
        if sum(sizes) != len(self.slots):
            raise ValueError("split sizes do not cover the sequence")
        parts = []
        start = 0
        for size in sizes:
            parts.append(QubitSequence(self.slots[start : start + size]))
            start += size
        return parts


def _require_pad_key(seq: QubitSequence, key: Key) -> None:
    if len(key) < 2 * len(seq):
        raise KeyTooShort(
            f"pad over {len(seq)} qubits needs {2 * len(seq)} bits, "
            f"key has {len(key)}"
        )


def encrypt_e(reg: Registry, seq: QubitSequence, key: Key) -> None:
    """Pad in place: slot i gets sigma_x^{k[2i]} sigma_z^{k[2i+1]}."""
    _require_pad_key(seq, key)
    for i, slot in enumerate(seq.slots):
        x_bit, z_bit = key.bit(2 * i), key.bit(2 * i + 1)
        for q in slot:
            reg.apply_pauli(q, x_bit, z_bit)


def decrypt_e(reg: Registry, seq: QubitSequence, key: Key) -> None:
    """Inverse pad in place: sigma_z^{k[2i+1]} sigma_x^{k[2i]}, x first."""
    _require_pad_key(seq, key)
    for i, slot in enumerate(seq.slots):
        x_bit, z_bit = key.bit(2 * i), key.bit(2 * i + 1)
        for q in slot:
            reg.apply_pauli(q, x_bit, 0)
            reg.apply_pauli(q, 0, z_bit)


def _companion(index: int, length: int, convention: Convention) -> int:
    if convention is Convention.CYCLIC:
        return (index + 1) % length
    return (index ^ 1) % length


def transform_m(
    reg: Registry,
    seq: QubitSequence,
    key: Key,
    convention: Convention = Convention.CYCLIC,
) -> None:
    """Keyed transform in place: slot i gets sigma_x^{k[i]} sigma_z^{k[c(i)]}."""
    n = len(seq)
    if len(key) < n:
        raise KeyTooShort(f"transform over {n} qubits needs {n} bits")
    for i, slot in enumerate(seq.slots):
        x_bit = key.bit(i)
        z_bit = key.bit(_companion(i, n, convention))
        for q in slot:
            reg.apply_pauli(q, x_bit, z_bit)


def transform_m_inv(
    reg: Registry,
    seq: QubitSequence,
    key: Key,
    convention: Convention = Convention.CYCLIC,
) -> None:
    """Inverse of transform_m under the same convention."""
    n = len(seq)
    if len(key) < n:
        raise KeyTooShort(f"transform over {n} qubits needs {n} bits")
    for i, slot in enumerate(seq.slots):
        x_bit = key.bit(i)
        z_bit = key.bit(_companion(i, n, convention))
        for q in slot:
            reg.apply_pauli(q, x_bit, 0)
            reg.apply_pauli(q, 0, z_bit)


def encrypt_concat(reg: Registry, parts: Sequence[QubitSequence], key: Key) -> None:
    """Pad a concatenation, reusing the key cyclically across parts.

    With a 2n-bit key and n-qubit parts this is exactly per-part
    encryption with the same key, which is how it is realized.
    """
    for part in parts:
        encrypt_e(reg, part, key)


def decrypt_concat(reg: Registry, parts: Sequence[QubitSequence], key: Key) -> None:
    for part in parts:
        decrypt_e(reg, part, key)
