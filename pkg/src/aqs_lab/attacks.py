"""Attacks on the two schemes, built as plug-ins over the honest runners.

Three families are implemented:

* Dispute cases: deliberately broken runs in which the arbitrator's check
  passes but the receiver reports a mismatch.  Every such case hands the
  arbitrator the same view, so he cannot tell who cheated; the forged-
  signature control shows his check is not vacuous.

* False pad publication: the signer announces a pad differing from the one
  she used.  No protocol check constrains the announcement, so the run
  still completes and the receiver's recovered message is silently wrong
  in exactly the flipped slots.

* Invisible-probe key extraction: the signer rides one half of a fresh
  entangled pair alongside each legitimate pulse she sends, captures the
  riders when the receiver forwards the package to the arbitrator, and
  reads the receiver's pad key out of the accumulated keyed operations.
  The honest parties' devices act on every photon in a pulse slot and
  measure none of them, so nothing detects the probes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum

from .protocol import (
    ConfigError,
    Hooks,
    MessageSpec,
    RunConfig,
    Scheme1Run,
    Scheme2Run,
    Transcript,
    run_scheme,
    shift_outcome,
    trent_view,
)
from .qstate import Prng, SimulationError, bell_outcome_bits


class InvalidCase(SimulationError):
    """Dispute case is unknown or not defined for the requested scheme."""


class DisputeCase(Enum):
    BOB_LIES = "BobLies"
    ALICE_WRONG_PHI = "AliceWrongPhi"
    ALICE_WRONG_MA = "AliceWrongMA"
    ALICE_WRONG_RAB = "AliceWrongRAB"
    EVE_DISTURBS = "EveDisturbs"


FORGED_SA = "ForgedSA"

CASES_BY_SCHEME: dict[int, tuple[DisputeCase, ...]] = {
    1: (
        DisputeCase.BOB_LIES,
        DisputeCase.ALICE_WRONG_PHI,
        DisputeCase.ALICE_WRONG_MA,
        DisputeCase.EVE_DISTURBS,
    ),
    2: (
        DisputeCase.BOB_LIES,
        DisputeCase.ALICE_WRONG_RAB,
        DisputeCase.EVE_DISTURBS,
    ),
}

ATTACK_EVENT_TAGS = frozenset(
    {
        "tamper_teleport_input",
        "tamper_m_a",
        "tamper_r_ab",
        "tamper_false_r",
        "forge_s_a",
        "eve_disturb",
        "ipe_attach",
        "ipe_capture",
        "ipe_decode",
    }
)


def _case_rng(config: RunConfig, name: str) -> Prng:
    return Prng(config.seed).child("attack").child(name)


def _nonzero_mask(rng: Prng) -> int:
    return 1 + rng.integer(3)


def _hooks_for(case: DisputeCase, scheme: int, config: RunConfig) -> Hooks:
    rng = _case_rng(config, case.value)
    n = config.n
    if case is DisputeCase.BOB_LIES:
        return Hooks(bob_claims_mismatch=True)
    if case is DisputeCase.ALICE_WRONG_PHI:
        return Hooks(teleport_spec=MessageSpec.haar(n, rng))
    if case is DisputeCase.ALICE_WRONG_MA:
        return Hooks(m_a_masks={rng.integer(n): _nonzero_mask(rng)})
    if case is DisputeCase.ALICE_WRONG_RAB:
        mask = _nonzero_mask(rng)
        return Hooks(r_ab_paulis={rng.integer(n): ((mask >> 1) & 1, mask & 1)})
    if case is DisputeCase.EVE_DISTURBS:
        slot = rng.integer(n)
        mask = _nonzero_mask(rng)
        hooks = Hooks()
        if scheme == 1:

            def tap(world, payload):
                payload["m_a"][slot] = shift_outcome(payload["m_a"][slot], mask)
                world.transcript.log(
                    "eve", "eve_disturb", {"step": "S5", "slot": slot}, ("eve",)
                )

            hooks.add_send_tap("S5", tap)
        else:

            def tap(world, payload):
                target = payload["s"].qubits[n + slot]
                world.registry.apply_pauli(target, (mask >> 1) & 1, mask & 1)
                world.transcript.log(
                    "eve", "eve_disturb", {"step": "S3'", "slot": slot}, ("eve",)
                )

            hooks.add_send_tap("S3'", tap)
        return hooks
    raise InvalidCase(f"unhandled case {case!r}")


def run_dispute(case: DisputeCase, scheme: int, config: RunConfig) -> Transcript:
    """Run one dispute case; the transcript's verdict carries the outcome."""
    if not isinstance(case, DisputeCase):
        raise InvalidCase(f"not a dispute case: {case!r}")
    if scheme not in CASES_BY_SCHEME:
        raise ConfigError(f"unknown scheme {scheme!r}")
    if case not in CASES_BY_SCHEME[scheme]:
        raise InvalidCase(f"{case.value} is not defined for scheme {scheme}")
    hooks = _hooks_for(case, scheme, config)
    transcript, _ = run_scheme(scheme, config, hooks)
    transcript.label = case.value
    return transcript


def run_control_forged_sa(scheme: int, config: RunConfig) -> Transcript:
    """Negative control: one signing-key bit is forged, so the arbitrator's
    check fails and his view visibly differs from every dispute case."""
    if scheme not in CASES_BY_SCHEME:
        raise ConfigError(f"unknown scheme {scheme!r}")
    rng = _case_rng(config, FORGED_SA)
    hooks = Hooks(forge_sign_key_bit=rng.integer(2 * config.n))
    transcript, _ = run_scheme(scheme, config, hooks)
    transcript.label = FORGED_SA
    return transcript


# --------------------------------------------------------------------------
# view comparison


@dataclass
class IndistinguishabilityReport:
    scheme: int
    seed: int
    cases: list[str]
    pairwise_equal: list[list[bool]]
    distinguishable: list[str]
    views: dict[str, str]

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "seed": self.seed,
            "cases": list(self.cases),
            "pairwise_equal": [list(row) for row in self.pairwise_equal],
            "distinguishable": list(self.distinguishable),
            "view_sha256": {
                label: hashlib.sha256(view.encode()).hexdigest()
                for label, view in self.views.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def compare_trent_views(transcripts: list[Transcript]) -> IndistinguishabilityReport:
    """Byte-compare the arbitrator's view across runs of one scheme and seed.

    The reference equivalence class is the largest one (earliest label on a
    tie); everything outside it is reported as distinguishable.
    """
    if len(transcripts) < 2:
        raise ValueError("need at least two transcripts to compare")
    schemes = {t.scheme for t in transcripts}
    seeds = {t.seed for t in transcripts}
    sizes = {t.n for t in transcripts}
    if len(schemes) != 1 or len(seeds) != 1 or len(sizes) != 1:
        raise ValueError("transcripts mix schemes, seeds, or sizes")
    labels = [t.label or f"run{i}" for i, t in enumerate(transcripts)]
    if len(set(labels)) != len(labels):
        raise ValueError("transcript labels are not distinct")
    views = [trent_view(t) for t in transcripts]
    pairwise = [[a == b for b in views] for a in views]
    classes: dict[str, list[int]] = {}
    for i, view in enumerate(views):
        classes.setdefault(view, []).append(i)
    reference = max(classes.values(), key=lambda idxs: (len(idxs), -idxs[0]))
    ref_set = set(reference)
    distinguishable = [labels[i] for i in range(len(labels)) if i not in ref_set]
    return IndistinguishabilityReport(
        scheme=transcripts[0].scheme,
        seed=transcripts[0].seed,
        cases=labels,
        pairwise_equal=pairwise,
        distinguishable=distinguishable,
        views=dict(zip(labels, views)),
    )


# --------------------------------------------------------------------------
# false pad publication


@dataclass
class FalseRReport:
    scheme: int
    n: int
    seed: int
    flipped_slots: list[int]
    r_bits: str
    r_prime_bits: str
    wrong_indices: list[int]
    fidelities: list[float]
    checks_failed: int
    accepted: bool
    pad_binding_checked: bool

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "n": self.n,
            "seed": self.seed,
            "flipped_slots": list(self.flipped_slots),
            "r_bits": self.r_bits,
            "r_prime_bits": self.r_prime_bits,
            "wrong_indices": list(self.wrong_indices),
            "fidelities": list(self.fidelities),
            "checks_failed": self.checks_failed,
            "accepted": self.accepted,
            "pad_binding_checked": self.pad_binding_checked,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def run_false_r(scheme: int, config: RunConfig, flips: int = 1) -> FalseRReport:
    """Publish a pad differing in ``flips`` randomly chosen 2-bit slots.

    No check in either scheme constrains the announcement, so the report
    shows zero failed checks together with exactly the flipped indices
    recovering at reduced fidelity.
    """
    if not 0 <= flips <= config.n:
        raise ConfigError(f"flips must be in [0, n], got {flips}")
    rng = _case_rng(config, "FalseR")
    slots = rng.distinct(config.n, flips)
    masks = {slot: _nonzero_mask(rng) for slot in slots}
    hooks = Hooks(false_r_masks=masks) if masks else Hooks()
    transcript, verdict = run_scheme(scheme, config, hooks)
    transcript.label = "FalseR"

    r_bits = transcript.events_tagged("sign_pad")[0].classical["bits"]
    reveals = [e for e in transcript.board.entries if e.tag == "pad_reveal"]
    r_prime_bits = reveals[0].payload["bits"]

    wrong = [i for i, f in enumerate(verdict.fidelities) if f < 1.0 - 1e-6]
    checks_failed = int(verdict.v_trent != 1) + int(verdict.v_bob != 1)

    reveal_idx = next(
        e.idx
        for e in transcript.events
        if e.tag == "board" and e.classical.get("board_tag") == "pad_reveal"
    )
    binding_checked = any(
        e.tag == "compare" for e in transcript.events if e.idx > reveal_idx
    )
    return FalseRReport(
        scheme=scheme,
        n=config.n,
        seed=config.seed,
        flipped_slots=sorted(masks),
        r_bits=r_bits,
        r_prime_bits=r_prime_bits,
        wrong_indices=wrong,
        fidelities=list(verdict.fidelities),
        checks_failed=checks_failed,
        accepted=verdict.accepted,
        pad_binding_checked=binding_checked,
    )


# --------------------------------------------------------------------------
# invisible-probe key extraction


@dataclass
class IpeReport:
    scheme: int
    n: int
    seed: int
    carrier: str
    recovered_bits: list[int]
    true_bits: list[int]
    outcomes: list[str]
    success: bool
    detected: int
    verdict_matches_honest: bool

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "n": self.n,
            "seed": self.seed,
            "carrier": self.carrier,
            "recovered_bits": list(self.recovered_bits),
            "true_bits": list(self.true_bits),
            "outcomes": list(self.outcomes),
            "success": self.success,
            "detected": self.detected,
            "verdict_matches_honest": self.verdict_matches_honest,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def run_ipe(scheme: int, config: RunConfig) -> IpeReport:
    """Extract the receiver's shared key with the arbitrator via probe riders.

    One probe rider per pulse slot of the chosen carrier accumulates the
    receiver's keyed operations; capturing the riders on the forward leg to
    the arbitrator and measuring each against its kept twin reads the key
    out.  In scheme 2 the signer strips her own shared-key contribution by
    XOR before reporting.
    """
    config.validate()
    n = config.n
    carrier = config.carrier
    attach_step = "S5" if scheme == 1 else "S3'"
    capture_step = "V1" if scheme == 1 else "V1'"
    state: dict = {"pairs": [], "captured": {}}

    def attach_tap(world, payload):
        reg = world.registry
        for i in range(n):
            rider, twin = reg.make_bell_pair()
            world.grant(world.alice, (rider, twin))
            if scheme == 1:
                payload[carrier].attach_rider(i, rider)
            else:
                offset = 0 if carrier == "p_prime" else 2 * n
                payload["s"].attach_rider(offset + i, rider)
            state["pairs"].append((i, rider, twin))
        world.transcript.log(
            "alice",
            "ipe_attach",
            {"step": attach_step, "carrier": carrier, "count": n},
            ("alice",),
        )

    def capture_tap(world, payload):
        riders = payload["y_b"].detach_riders()
        state["captured"] = {rider: slot for slot, rider in riders}
        world.grant(world.alice, (rider for _, rider in riders))
        world.transcript.log(
            "alice",
            "ipe_capture",
            {"step": capture_step, "count": len(riders)},
            ("alice",),
        )

    hooks = Hooks()
    hooks.add_send_tap(attach_step, attach_tap)
    hooks.add_send_tap(capture_step, capture_tap)

    runner = Scheme1Run(config, hooks) if scheme == 1 else Scheme2Run(config, hooks)
    transcript, verdict = runner.run()
    world = runner.world

    if len(state["captured"]) != n:
        raise SimulationError("not every probe rider came back")

    decode_rng = _case_rng(config, "Ipe")
    recovered = [0] * (2 * n)
    outcome_names: list[str] = []
    k_ab = world.alice.keys.get("K_AB")
    for i, rider, twin in state["pairs"]:
        outcome = world.registry.bell_measure(rider, twin, decode_rng)
        world.release(world.alice, (rider, twin))
        x_bit, z_bit = bell_outcome_bits(outcome)
        if scheme == 2:
            x_bit ^= k_ab.bit(2 * i)
            z_bit ^= k_ab.bit(2 * i + 1)
        recovered[2 * i] = x_bit
        recovered[2 * i + 1] = z_bit
        outcome_names.append(outcome.value)
    world.transcript.log("alice", "ipe_decode", {"count": n}, ("alice",))

    target_role = "K_B" if scheme == 1 else "K_BT"
    true_key = world.bob.keys[target_role]
    success = tuple(recovered) == true_key.bits
    detected = int(verdict.v_trent != 1) + int(verdict.v_bob != 1)

    _, honest_verdict = run_scheme(scheme, config)
    return IpeReport(
        scheme=scheme,
        n=n,
        seed=config.seed,
        carrier=carrier,
        recovered_bits=recovered,
        true_bits=list(true_key.bits),
        outcomes=outcome_names,
        success=success,
        detected=detected,
        verdict_matches_honest=verdict.to_dict() == honest_verdict.to_dict(),
    )
