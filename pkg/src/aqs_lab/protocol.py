"""Three-party runners for the two arbitrated-signature schemes.

Parties (alice signs, bob receives, trent arbitrates) are stepped by the
runner in protocol order on a single deterministic event loop.  Every
channel send and receive, measurement outcome, comparison verdict, and
board append is logged exactly once to a transcript whose events carry
visibility tags; ``trent_view`` restricts a transcript to what the
arbitrator can actually see, which is what the indistinguishability
analyses compare.

Channels expose interception points (``Hooks.send_taps``), so attacks are
plug-ins on top of the honest runners rather than forks of them.  The
initialization channel that delivers entangled halves in scheme 1 is
tamper-proof and consults no taps.

Verification uses a pluggable comparator: the default judges per-index
fidelity with simulator omniscience; the alternative runs a swap test with
a configured number of shots per index and passes only if every shot
accepts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .qotp import (
    Convention,
    Key,
    QubitSequence,
    decrypt_concat,
    decrypt_e,
    encrypt_concat,
    encrypt_e,
    gen_key,
    transform_m,
    transform_m_inv,
)
from .qstate import (
    BellOutcome,
    Prng,
    QubitId,
    Registry,
    SimulationError,
    bell_outcome_bits,
)


class ConfigError(SimulationError):
    """Run configuration is not usable."""


class MalformedLength(SimulationError):
    """A received component has the wrong number of slots."""


PUBLIC = ("alice", "bob", "trent")

_STREAM_NAMES = ("keys", "message", "pad", "born", "comparator", "attack")


# --------------------------------------------------------------------------
# message descriptions


@dataclass(frozen=True)
class MessageSpec:
    """Classical description of an n-qubit product message.

    The signer keeps this description, so she can prepare as many fresh
    copies as the protocol consumes.
    """

    amplitudes: tuple[tuple[complex, complex], ...]

    @classmethod
    def haar(cls, n: int, rng: Prng) -> "MessageSpec":
        return cls(tuple(rng.haar_qubit() for _ in range(n)))

    @classmethod
    def basis(cls, bits: Sequence[int]) -> "MessageSpec":
        pairs = []
        for b in bits:
            pairs.append((0j, 1 + 0j) if b else (1 + 0j, 0j))
        return cls(tuple(pairs))

    def __len__(self) -> int:
        return len(self.amplitudes)

    def prepare(self, reg: Registry) -> QubitSequence:
        return QubitSequence.from_qubits(
            [reg.alloc_qubit(a, b) for a, b in self.amplitudes]
        )

    def vector(self, index: int) -> np.ndarray:
        pair = self.amplitudes[index]
        vec = np.array([pair[0], pair[1]], dtype=complex)
        return vec / np.linalg.norm(vec)

    def debug_pairs(self) -> list[list[float]]:
        out = []
        for a, b in self.amplitudes:
            out.append([a.real, a.imag, b.real, b.imag])
        return out


# --------------------------------------------------------------------------
# transcript, board, verdict


@dataclass
class BoardEntry:
    seq: int
    author: str
    tag: str
    payload: dict

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "author": self.author,
            "tag": self.tag,
            "payload": self.payload,
        }


class PublicBoard:
    """Append-only, sequence-numbered bulletin board.

    Entries are attributable to their author but carry no binding between
    the announced content and anything previously attested; nothing here
    verifies a payload.
    """

    def __init__(self) -> None:
        self._entries: list[BoardEntry] = []

    def publish(self, author: str, tag: str, payload: dict) -> BoardEntry:
        entry = BoardEntry(len(self._entries), author, tag, dict(payload))
        self._entries.append(entry)
        return entry

    @property
    def entries(self) -> tuple[BoardEntry, ...]:
        return tuple(self._entries)

    def to_list(self) -> list[dict]:
        return [e.to_dict() for e in self._entries]


@dataclass
class Event:
    idx: int
    actor: str
    tag: str
    classical: dict
    visibility: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "idx": self.idx,
            "actor": self.actor,
            "tag": self.tag,
            "visibility": list(self.visibility),
            "classical": self.classical,
        }


@dataclass
class Verdict:
    v_trent: int | None
    v_bob: int | None
    accepted: bool
    fidelities: list[float]

    def to_dict(self) -> dict:
        return {
            "v_trent": self.v_trent,
            "v_bob": self.v_bob,
            "accepted": self.accepted,
            "fidelities": list(self.fidelities),
        }


class Transcript:
    """Ordered event log plus the public board for one protocol run."""

    def __init__(self, scheme: int, n: int, seed: int):
        self.scheme = scheme
        self.n = n
        self.seed = seed
        self.events: list[Event] = []
        self.board = PublicBoard()
        self.verdict: Verdict | None = None
        self.label: str | None = None

    def log(
        self,
        actor: str,
        tag: str,
        classical: dict,
        visibility: Iterable[str],
    ) -> Event:
        event = Event(
            len(self.events), actor, tag, classical, tuple(sorted(set(visibility)))
        )
        self.events.append(event)
        return event

    def publish(self, author: str, tag: str, payload: dict) -> BoardEntry:
        entry = self.board.publish(author, tag, payload)
        self.log(
            author,
            "board",
            {"board_tag": tag, "seq": entry.seq, "payload": dict(payload)},
            PUBLIC,
        )
        return entry

    def events_tagged(self, tag: str) -> list[Event]:
        return [e for e in self.events if e.tag == tag]

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "n": self.n,
            "seed": self.seed,
            "events": [e.to_dict() for e in self.events],
            "board": self.board.to_list(),
            "verdict": self.verdict.to_dict() if self.verdict else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def trent_view(transcript: Transcript) -> str:
    """Canonical serialization of everything the arbitrator can see.

    Events are restricted to those visible to trent, renumbered by their
    order of appearance, and stripped of simulator-audit data; the full
    public board is included.  Quantum payloads appear only through trent's
    own classical results (verdict bits, receipt metadata).
    """
    events = []
    for event in transcript.events:
        if "trent" not in event.visibility:
            continue
        classical = {k: v for k, v in event.classical.items() if k != "audit"}
        events.append({"actor": event.actor, "tag": event.tag, "classical": classical})
    doc = {
        "scheme": transcript.scheme,
        "n": transcript.n,
        "seed": transcript.seed,
        "events": events,
        "board": transcript.board.to_list(),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


# --------------------------------------------------------------------------
# comparators


class ExactComparator:
    """Per-index fidelity with simulator omniscience."""

    def __init__(self, tol: float = 1e-9):
        self.tol = tol

    def compare(
        self, reg: Registry, left: QubitSequence, right: QubitSequence
    ) -> tuple[bool, list[float]]:
        if len(left) != len(right):
            raise MalformedLength("compared sequences differ in length")
        fids = [
            reg.fidelity([a], [b]) for a, b in zip(left.qubits, right.qubits)
        ]
        return all(f >= 1.0 - self.tol for f in fids), fids


class SwapComparator:
    """Swap test per index; passes only if every shot accepts."""

    def __init__(self, shots: int, rng: Prng):
        if shots < 1:
            raise ConfigError("swap comparator needs at least one shot")
        self.shots = shots
        self.rng = rng

    def compare(
        self, reg: Registry, left: QubitSequence, right: QubitSequence
    ) -> tuple[bool, list[float]]:
        if len(left) != len(right):
            raise MalformedLength("compared sequences differ in length")
        fractions = [
            reg.swap_test([a], [b], self.shots, self.rng)
            for a, b in zip(left.qubits, right.qubits)
        ]
        return all(f == 1.0 for f in fractions), fractions


def make_comparator(spec: str, rng: Prng):
    if spec == "exact":
        return ExactComparator()
    if spec.startswith("swap:"):
        try:
            shots = int(spec.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"bad swap shot count in {spec!r}") from exc
        return SwapComparator(shots, rng)
    raise ConfigError(f"unknown comparator {spec!r}")


# --------------------------------------------------------------------------
# configuration and hooks


@dataclass
class RunConfig:
    n: int
    seed: int
    comparator: str = "exact"
    carrier: str = "p_prime"
    convention: str = "cyclic"
    message: MessageSpec | None = None
    debug_amplitudes: bool = False

    def validate(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ConfigError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a nonnegative integer, got {self.seed!r}")
        if self.carrier not in ("p_prime", "s_a"):
            raise ConfigError(f"unknown carrier {self.carrier!r}")
        if self.convention not in (c.value for c in Convention):
            raise ConfigError(f"unknown transform convention {self.convention!r}")
        if self.message is not None and len(self.message) != self.n:
            raise ConfigError("message length does not match n")
        if self.comparator != "exact" and not self.comparator.startswith("swap:"):
            raise ConfigError(f"unknown comparator {self.comparator!r}")


Tap = Callable[["World", dict], None]


@dataclass
class Hooks:
    """Attack plug-ins: behavior overrides plus channel interception taps.

    ``send_taps`` maps a step tag to callables invoked, in order, on the
    in-flight payload of that step's channel send.  Taps mutate the payload
    in place and may touch the world (allocate probe qubits, reassign
    holdings, log attacker-visible events).
    """

    teleport_spec: MessageSpec | None = None
    m_a_masks: dict[int, int] | None = None
    r_ab_paulis: dict[int, tuple[int, int]] | None = None
    forge_sign_key_bit: int | None = None
    bob_claims_mismatch: bool = False
    false_r_masks: dict[int, int] | None = None
    send_taps: dict[str, list[Tap]] = field(default_factory=dict)

    def add_send_tap(self, step: str, tap: Tap) -> None:
        self.send_taps.setdefault(step, []).append(tap)

    def taps_for(self, step: str) -> tuple[Tap, ...]:
        return tuple(self.send_taps.get(step, ()))


# --------------------------------------------------------------------------
# world


@dataclass
class Party:
    name: str
    keys: dict[str, Key] = field(default_factory=dict)
    holdings: set[QubitId] = field(default_factory=set)
    store: dict = field(default_factory=dict)


class World:
    """Shared state of one protocol run: registry, parties, transcript."""

    def __init__(self, scheme: int, config: RunConfig, hooks: Hooks | None):
        config.validate()
        self.scheme = scheme
        self.config = config
        self.hooks = hooks or Hooks()
        self.registry = Registry()
        root = Prng(config.seed)
        self.streams = {name: root.child(name) for name in _STREAM_NAMES}
        self.transcript = Transcript(scheme, config.n, config.seed)
        self.alice = Party("alice")
        self.bob = Party("bob")
        self.trent = Party("trent")
        self.parties = {"alice": self.alice, "bob": self.bob, "trent": self.trent}
        self.message = config.message or MessageSpec.haar(
            config.n, self.streams["message"]
        )
        self.comparator = make_comparator(config.comparator, self.streams["comparator"])
        self.convention = Convention(config.convention)

    def grant(self, party: Party, qubits: Iterable[QubitId]) -> None:
        party.holdings.update(qubits)

    def release(self, party: Party, qubits: Iterable[QubitId]) -> None:
        for q in qubits:
            party.holdings.discard(q)

    def held_map(self) -> dict[str, frozenset[QubitId]]:
        return {name: frozenset(p.holdings) for name, p in self.parties.items()}

    def send(
        self,
        sender: Party,
        receiver: Party,
        step: str,
        payload: dict,
        describe: Callable[[dict], dict],
        tappable: bool = True,
    ) -> dict:
        """Move a payload over a channel, logging send and receive.

        Taps registered for ``step`` run between the two logs, so the send
        event describes what left the sender and the receive event what
        reached the receiver.
        """
        vis = (sender.name, receiver.name)
        self.transcript.log(
            sender.name, "send", {"step": step, "to": receiver.name, **describe(payload)}, vis
        )
        if tappable:
            for tap in self.hooks.taps_for(step):
                tap(self, payload)
        moved: set[QubitId] = set()
        for value in payload.values():
            if isinstance(value, QubitSequence):
                moved.update(value.all_photons())
        for party in self.parties.values():
            party.holdings -= moved
        receiver.holdings |= moved
        self.transcript.log(
            receiver.name,
            "recv",
            {"step": step, "from": sender.name, **describe(payload)},
            vis,
        )
        return payload


# --------------------------------------------------------------------------
# signature packages


@dataclass
class SignaturePackage1:
    """Scheme 1 signing payload: padded message, keyed signature, outcomes."""

    p_prime: QubitSequence
    s_a: QubitSequence
    m_a: list[BellOutcome]


@dataclass
class SignaturePackage2:
    """Scheme 2 signing payload: one padded 3n-slot sequence."""

    payload: QubitSequence


# --------------------------------------------------------------------------
# shared runner pieces


def teleport_recover(
    reg: Registry, held: QubitSequence, outcomes: Sequence[BellOutcome]
) -> list[tuple[int, int]]:
    """Apply per-index corrections to teleported qubits, in place.

    The correction for an outcome is the Pauli named by its (x, z) bits:
    identity, sigma_z, sigma_x, or sigma_x sigma_z.  Returns the applied
    exponent pairs.
    """
    if len(held) != len(outcomes):
        raise MalformedLength(
            f"{len(outcomes)} outcomes for {len(held)} teleported qubits"
        )
    applied = []
    for qubit, outcome in zip(held.qubits, outcomes):
        x_bit, z_bit = bell_outcome_bits(outcome)
        reg.apply_pauli(qubit, x_bit, z_bit)
        applied.append((x_bit, z_bit))
    return applied


def _deal_key(world: World, role: str, length: int, actor: str, holders: tuple[str, ...]) -> Key:
    key = gen_key(length, role, world.streams["keys"])
    for name in holders:
        world.parties[name].keys[role] = key
    world.transcript.log(
        actor,
        "deal_key",
        {"role": role, "holders": list(holders), "bits": key.bitstring()},
        holders,
    )
    return key


def _prepare_message_event(world: World) -> None:
    classical: dict = {"n": world.config.n}
    if world.config.debug_amplitudes:
        classical["amplitudes"] = world.message.debug_pairs()
    world.transcript.log("alice", "prepare_message", classical, ("alice",))


def _padded_copy(world: World, pad: Key) -> QubitSequence:
    seq = world.message.prepare(world.registry)
    world.grant(world.alice, seq.all_photons())
    encrypt_e(world.registry, seq, pad)
    return seq


def _audit_recovered(world: World, seq: QubitSequence) -> list[float]:
    reg = world.registry
    return [
        reg.fidelity_to_vector([q], world.message.vector(i))
        for i, q in enumerate(seq.qubits)
    ]


def _sign_key(world: World, role: str) -> Key:
    key = world.alice.keys[role]
    if world.hooks.forge_sign_key_bit is not None:
        key = key.flipped(world.hooks.forge_sign_key_bit)
        world.transcript.log(
            "alice", "forge_s_a", {"role": role, "bit": world.hooks.forge_sign_key_bit}, ("alice",)
        )
    return key


_MASKED = {
    (0, 0): BellOutcome.PHI_PLUS,
    (0, 1): BellOutcome.PHI_MINUS,
    (1, 0): BellOutcome.PSI_PLUS,
    (1, 1): BellOutcome.PSI_MINUS,
}


def shift_outcome(outcome: BellOutcome, mask: int) -> BellOutcome:
    """Outcome whose (x, z) bits are the original's XORed with the mask.

    This is what a Pauli applied to the outcome's in-flight carrier does to
    its later interpretation.
    """
    x_bit, z_bit = bell_outcome_bits(outcome)
    return _MASKED[((x_bit ^ (mask >> 1)) & 1, (z_bit ^ mask) & 1)]


# --------------------------------------------------------------------------
# scheme 1


class Scheme1Run:
    """Teleportation-based scheme: entangled halves are dealt up front and
    the message travels to the receiver twice, once directly and once by
    teleportation, so the receiver can cross-check the arbitrated copy."""

    def __init__(self, config: RunConfig, hooks: Hooks | None = None):
        self.world = World(1, config, hooks)

    # I1, I2
    def initialize(self) -> None:
        w = self.world
        n = w.config.n
        _deal_key(w, "K_A", 2 * n, "trent", ("alice", "trent"))
        _deal_key(w, "K_B", 2 * n, "trent", ("bob", "trent"))
        _prepare_message_event(w)
        keep_ids: list[QubitId] = []
        send_ids: list[QubitId] = []
        for _ in range(n):
            kept, sent = w.registry.make_bell_pair()
            keep_ids.append(kept)
            send_ids.append(sent)
        w.grant(w.alice, keep_ids + send_ids)
        w.transcript.log("alice", "make_bell_pairs", {"count": n}, ("alice",))
        payload = w.send(
            w.alice,
            w.bob,
            "I2",
            {"b_half": QubitSequence.from_qubits(send_ids)},
            lambda p: {"qubits": len(p["b_half"])},
            tappable=False,
        )
        w.bob.store["b_half"] = payload["b_half"]
        w.alice.store["a_half"] = QubitSequence.from_qubits(keep_ids)

    # S1-S5
    def alice_sign(self) -> SignaturePackage1:
        w = self.world
        reg = w.registry
        n = w.config.n
        pad = gen_key(2 * n, "r", w.streams["pad"])
        w.alice.store["r"] = pad
        w.transcript.log(
            "alice", "sign_pad", {"role": "r", "bits": pad.bitstring()}, ("alice",)
        )
        transmit = _padded_copy(w, pad)
        signature = _padded_copy(w, pad)
        encrypt_e(reg, signature, _sign_key(w, "K_A"))
        w.transcript.log("alice", "sign_encrypt", {"step": "S1-S2"}, ("alice",))

        if w.hooks.teleport_spec is not None:
            teleport_input = w.hooks.teleport_spec.prepare(reg)
            w.grant(w.alice, teleport_input.all_photons())
            w.transcript.log(
                "alice", "tamper_teleport_input", {"step": "S3"}, ("alice",)
            )
        else:
            teleport_input = _padded_copy(w, pad)

        kept = w.alice.store["a_half"]
        outcomes: list[BellOutcome] = []
        for i in range(n):
            outcome = reg.bell_measure(
                teleport_input.qubits[i], kept.qubits[i], w.streams["born"]
            )
            outcomes.append(outcome)
            w.release(w.alice, (teleport_input.qubits[i], kept.qubits[i]))
        w.transcript.log(
            "alice",
            "bell_measure",
            {"step": "S4", "outcomes": [o.value for o in outcomes]},
            ("alice",),
        )

        reported = list(outcomes)
        if w.hooks.m_a_masks:
            for slot, mask in w.hooks.m_a_masks.items():
                reported[slot] = shift_outcome(reported[slot], mask)
            w.transcript.log(
                "alice",
                "tamper_m_a",
                {"step": "S5", "slots": sorted(w.hooks.m_a_masks)},
                ("alice",),
            )

        payload = w.send(
            w.alice,
            w.bob,
            "S5",
            {"p_prime": transmit, "s_a": signature, "m_a": reported},
            lambda p: {
                "p_prime": len(p["p_prime"]),
                "s_a": len(p["s_a"]),
                "m_a": len(p["m_a"]),
            },
        )
        return SignaturePackage1(payload["p_prime"], payload["s_a"], payload["m_a"])

    # V2-V3, trent side
    def trent_verify(self, y_b: QubitSequence) -> tuple[QubitSequence, int]:
        w = self.world
        reg = w.registry
        n = w.config.n
        if len(y_b) != 2 * n:
            raise MalformedLength(f"expected {2 * n} slots, got {len(y_b)}")
        p_half, sig_half = y_b.split([n, n])
        k_b = w.trent.keys["K_B"]
        k_a = w.trent.keys["K_A"]
        decrypt_concat(reg, [p_half, sig_half], k_b)
        w.transcript.log("trent", "build_s_t", {"step": "V2"}, ("trent",))
        encrypt_e(reg, p_half, k_a)
        passed, fids = w.comparator.compare(reg, p_half, sig_half)
        v_trent = 1 if passed else 0
        w.transcript.log(
            "trent",
            "compare",
            {"step": "V2", "v": v_trent, "audit": {"fidelities": fids}},
            ("trent",),
        )
        w.transcript.log("trent", "recover_p_prime", {"step": "V3"}, ("trent",))
        decrypt_e(reg, p_half, k_a)
        encrypt_concat(reg, [p_half, sig_half], k_b)
        return QubitSequence.concat([p_half, sig_half]), v_trent

    # V1, V4-V7, bob side plus the trent exchange
    def bob_verify(self, package: SignaturePackage1) -> Verdict:
        w = self.world
        reg = w.registry
        n = w.config.n
        k_b = w.bob.keys["K_B"]

        encrypt_concat(reg, [package.p_prime, package.s_a], k_b)
        y_b = QubitSequence.concat([package.p_prime, package.s_a])
        payload = w.send(
            w.bob, w.trent, "V1", {"y_b": y_b}, lambda p: {"qubits": len(p["y_b"])}
        )
        y_t, v_trent = self.trent_verify(payload["y_b"])
        payload = w.send(
            w.trent,
            w.bob,
            "V3",
            {"y_t": y_t, "v": v_trent},
            lambda p: {"qubits": len(p["y_t"]), "v": p["v"]},
        )
        v_received = payload["v"]
        p_prime, s_a = payload["y_t"].split([n, n])
        decrypt_concat(reg, [p_prime, s_a], k_b)
        w.transcript.log("bob", "check_v", {"step": "V4", "v": v_received}, ("bob",))
        if v_received != 1:
            w.transcript.log("bob", "claim", {"step": "V4", "match": 0}, PUBLIC)
            verdict = Verdict(v_trent, 0, False, [])
            self.world.transcript.verdict = verdict
            return verdict

        held = w.bob.store["b_half"]
        applied = teleport_recover(reg, held, package.m_a)
        w.transcript.log(
            "bob",
            "teleport_correct",
            {"step": "V5", "corrections": [list(pair) for pair in applied]},
            ("bob",),
        )
        passed, fids = w.comparator.compare(reg, held, p_prime)
        w.transcript.log(
            "bob",
            "compare",
            {"step": "V5", "match": 1 if passed else 0, "audit": {"fidelities": fids}},
            ("bob",),
        )
        claim = 0 if w.hooks.bob_claims_mismatch else (1 if passed else 0)
        w.transcript.log("bob", "claim", {"step": "V5", "match": claim}, PUBLIC)
        if claim != 1:
            verdict = Verdict(v_trent, 0, False, [])
            self.world.transcript.verdict = verdict
            return verdict

        pad = w.alice.store["r"]
        if w.hooks.false_r_masks:
            pad = pad.xored_slots(w.hooks.false_r_masks)
            w.transcript.log("alice", "tamper_false_r", {"step": "V6"}, ("alice",))
        w.transcript.publish("alice", "pad_reveal", {"role": "r", "bits": pad.bitstring()})

        decrypt_e(reg, p_prime, pad)
        recovered_fids = _audit_recovered(w, p_prime)
        w.transcript.log(
            "bob",
            "recover_message",
            {"step": "V7", "audit": {"fidelities": recovered_fids}},
            ("bob",),
        )
        w.bob.store["signature"] = (s_a, pad)
        w.bob.store["message"] = p_prime
        w.transcript.log(
            "bob", "hold_signature", {"step": "V7", "parts": ["s_a", "r"]}, ("bob",)
        )
        verdict = Verdict(v_trent, claim, True, recovered_fids)
        self.world.transcript.verdict = verdict
        return verdict

    def run(self) -> tuple[Transcript, Verdict]:
        self.initialize()
        package = self.alice_sign()
        verdict = self.bob_verify(package)
        return self.world.transcript, verdict


# --------------------------------------------------------------------------
# scheme 2


class Scheme2Run:
    """Entanglement-free scheme: the receiver's cross-check value travels
    inside the signed package as a keyed transform of the padded message."""

    def __init__(self, config: RunConfig, hooks: Hooks | None = None):
        self.world = World(2, config, hooks)

    # I1'
    def initialize(self) -> None:
        w = self.world
        n = w.config.n
        _deal_key(w, "K_AT", 2 * n, "trent", ("alice", "trent"))
        _deal_key(w, "K_BT", 2 * n, "trent", ("bob", "trent"))
        _deal_key(w, "K_AB", 2 * n, "alice", ("alice", "bob"))
        _prepare_message_event(w)

    # S1'-S3'
    def alice_sign(self) -> SignaturePackage2:
        w = self.world
        reg = w.registry
        n = w.config.n
        pad = gen_key(2 * n, "r", w.streams["pad"])
        w.alice.store["r"] = pad
        w.transcript.log(
            "alice", "sign_pad", {"role": "r", "bits": pad.bitstring()}, ("alice",)
        )
        transmit = _padded_copy(w, pad)
        cross_check = _padded_copy(w, pad)
        transform_m(reg, cross_check, w.alice.keys["K_AB"], w.convention)
        w.transcript.log("alice", "transform_r_ab", {"step": "S1'"}, ("alice",))
        if w.hooks.r_ab_paulis:
            for slot, (x_bit, z_bit) in w.hooks.r_ab_paulis.items():
                reg.apply_pauli(cross_check.qubits[slot], x_bit, z_bit)
            w.transcript.log(
                "alice",
                "tamper_r_ab",
                {"step": "S1'", "slots": sorted(w.hooks.r_ab_paulis)},
                ("alice",),
            )
        signature = _padded_copy(w, pad)
        encrypt_e(reg, signature, _sign_key(w, "K_AT"))
        w.transcript.log("alice", "sign_encrypt", {"step": "S2'"}, ("alice",))

        parts = [transmit, cross_check, signature]
        encrypt_concat(reg, parts, w.alice.keys["K_AB"])
        w.transcript.log("alice", "assemble_package", {"step": "S3'"}, ("alice",))
        payload = w.send(
            w.alice,
            w.bob,
            "S3'",
            {"s": QubitSequence.concat(parts)},
            lambda p: {"qubits": len(p["s"])},
        )
        return SignaturePackage2(payload["s"])

    # V2'-V3', trent side
    def trent_verify(self, y_b: QubitSequence) -> tuple[QubitSequence | None, int]:
        w = self.world
        reg = w.registry
        n = w.config.n
        if len(y_b) != 2 * n:
            raise MalformedLength(f"expected {2 * n} slots, got {len(y_b)}")
        p_half, sig_half = y_b.split([n, n])
        k_bt = w.trent.keys["K_BT"]
        k_at = w.trent.keys["K_AT"]
        decrypt_concat(reg, [p_half, sig_half], k_bt)
        w.transcript.log("trent", "build_p_t", {"step": "V2'"}, ("trent",))
        decrypt_e(reg, sig_half, k_at)
        passed, fids = w.comparator.compare(reg, sig_half, p_half)
        v_trent = 1 if passed else 0
        w.transcript.log(
            "trent",
            "compare",
            {"step": "V3'", "v": v_trent, "audit": {"fidelities": fids}},
            ("trent",),
        )
        w.transcript.publish("trent", "verdict_v_t", {"value": v_trent})
        if v_trent != 1:
            return None, v_trent
        w.transcript.log("trent", "rebuild_s_a", {"step": "V3'"}, ("trent",))
        encrypt_e(reg, sig_half, k_at)
        encrypt_concat(reg, [p_half, sig_half], k_bt)
        return QubitSequence.concat([p_half, sig_half]), v_trent

    # V1', V4'-V6', bob side plus the trent exchange
    def bob_verify(self, package: SignaturePackage2) -> Verdict:
        w = self.world
        reg = w.registry
        n = w.config.n
        if len(package.payload) != 3 * n:
            raise MalformedLength(
                f"expected {3 * n} slots, got {len(package.payload)}"
            )
        k_ab = w.bob.keys["K_AB"]
        k_bt = w.bob.keys["K_BT"]
        p_prime, cross_check, s_a = package.payload.split([n, n, n])
        decrypt_concat(reg, [p_prime, cross_check, s_a], k_ab)
        w.transcript.log("bob", "decrypt_package", {"step": "V1'"}, ("bob",))

        encrypt_concat(reg, [p_prime, s_a], k_bt)
        y_b = QubitSequence.concat([p_prime, s_a])
        payload = w.send(
            w.bob, w.trent, "V1'", {"y_b": y_b}, lambda p: {"qubits": len(p["y_b"])}
        )
        y_t, v_trent = self.trent_verify(payload["y_b"])
        if v_trent != 1:
            w.transcript.log("bob", "claim", {"step": "V4'", "match": 0}, PUBLIC)
            verdict = Verdict(v_trent, 0, False, [])
            self.world.transcript.verdict = verdict
            return verdict
        payload = w.send(
            w.trent,
            w.bob,
            "V3'",
            {"y_t": y_t, "v_t": v_trent},
            lambda p: {"qubits": len(p["y_t"]), "v_t": p["v_t"]},
        )
        p_prime, s_a = payload["y_t"].split([n, n])
        decrypt_concat(reg, [p_prime, s_a], k_bt)

        transform_m_inv(reg, cross_check, k_ab, w.convention)
        w.transcript.log("bob", "invert_r_ab", {"step": "V4'"}, ("bob",))
        passed, fids = w.comparator.compare(reg, cross_check, p_prime)
        w.transcript.log(
            "bob",
            "compare",
            {"step": "V4'", "match": 1 if passed else 0, "audit": {"fidelities": fids}},
            ("bob",),
        )
        v_bob = 0 if w.hooks.bob_claims_mismatch else (1 if passed else 0)
        w.transcript.publish("bob", "verdict_v_b", {"value": v_bob})
        if v_bob != 1:
            w.transcript.log("trent", "abort", {"step": "V5'"}, PUBLIC)
            verdict = Verdict(v_trent, 0, False, [])
            self.world.transcript.verdict = verdict
            return verdict

        pad = w.alice.store["r"]
        if w.hooks.false_r_masks:
            pad = pad.xored_slots(w.hooks.false_r_masks)
            w.transcript.log("alice", "tamper_false_r", {"step": "V5'"}, ("alice",))
        w.transcript.publish("alice", "pad_reveal", {"role": "r", "bits": pad.bitstring()})

        decrypt_e(reg, p_prime, pad)
        recovered_fids = _audit_recovered(w, p_prime)
        w.transcript.log(
            "bob",
            "recover_message",
            {"step": "V6'", "audit": {"fidelities": recovered_fids}},
            ("bob",),
        )
        w.bob.store["signature"] = (s_a, pad)
        w.bob.store["message"] = p_prime
        w.transcript.log(
            "bob", "hold_signature", {"step": "V6'", "parts": ["s_a", "r"]}, ("bob",)
        )
        verdict = Verdict(v_trent, v_bob, True, recovered_fids)
        self.world.transcript.verdict = verdict
        return verdict

    def run(self) -> tuple[Transcript, Verdict]:
        self.initialize()
        package = self.alice_sign()
        verdict = self.bob_verify(package)
        return self.world.transcript, verdict


# --------------------------------------------------------------------------
# entry points


def run_scheme1(config: RunConfig, hooks: Hooks | None = None) -> tuple[Transcript, Verdict]:
    return Scheme1Run(config, hooks).run()


def run_scheme2(config: RunConfig, hooks: Hooks | None = None) -> tuple[Transcript, Verdict]:
    return Scheme2Run(config, hooks).run()


def run_scheme(
    scheme: int, config: RunConfig, hooks: Hooks | None = None
) -> tuple[Transcript, Verdict]:
    if scheme == 1:
        return run_scheme1(config, hooks)
    if scheme == 2:
        return run_scheme2(config, hooks)
    raise ConfigError(f"unknown scheme {scheme!r}")
