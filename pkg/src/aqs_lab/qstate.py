"""Exact pure-state simulation of few-qubit registers.

State lives in a registry of disjoint tensor-product groups that merge
lazily when a joint operation entangles them.  Amplitude vectors are
indexed lexicographically with the group's first member as the most
significant bit.  Equality of states is always judged by fidelity, which
ignores global phase.

All randomness flows through :class:`Prng`, so a run is replayable from a
single seed.  Born sampling uses an inverse-CDF walk over a fixed outcome
order, which keeps sampled outcomes stable across platforms.
"""

from __future__ import annotations

import hashlib
from enum import Enum
from typing import Sequence

import numpy as np

QubitId = int

GROUP_CAP_DEFAULT = 8

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


class SimulationError(Exception):
    """Base class for simulator failures."""


class NonNormalized(SimulationError):
    """Amplitudes do not describe a unit-norm state."""


class DeadQubit(SimulationError):
    """Operation on a qubit already consumed by a destructive measurement."""


class GroupCapExceeded(SimulationError):
    """A merge would entangle more qubits than the registry allows."""


class DimensionMismatch(SimulationError):
    """States of unequal qubit count were compared."""


class NotFactored(SimulationError):
    """Requested qubits are entangled with qubits outside the request."""


class BellOutcome(Enum):
    PHI_PLUS = "PhiPlus"
    PHI_MINUS = "PhiMinus"
    PSI_PLUS = "PsiPlus"
    PSI_MINUS = "PsiMinus"


# Fixed sampling order; the inverse-CDF walk in bell_measure follows it.
BELL_ORDER: tuple[BellOutcome, ...] = (
    BellOutcome.PHI_PLUS,
    BellOutcome.PHI_MINUS,
    BellOutcome.PSI_PLUS,
    BellOutcome.PSI_MINUS,
)

_BELL_VECTORS: dict[BellOutcome, np.ndarray] = {
    BellOutcome.PHI_PLUS: np.array([1, 0, 0, 1], dtype=complex) * _INV_SQRT2,
    BellOutcome.PHI_MINUS: np.array([1, 0, 0, -1], dtype=complex) * _INV_SQRT2,
    BellOutcome.PSI_PLUS: np.array([0, 1, 1, 0], dtype=complex) * _INV_SQRT2,
    BellOutcome.PSI_MINUS: np.array([0, 1, -1, 0], dtype=complex) * _INV_SQRT2,
}

# (x, z) such that applying sigma_x^x sigma_z^z to the FIRST member of a
# PhiPlus pair yields the keyed Bell state, up to global phase.
_OUTCOME_BITS: dict[BellOutcome, tuple[int, int]] = {
    BellOutcome.PHI_PLUS: (0, 0),
    BellOutcome.PHI_MINUS: (0, 1),
    BellOutcome.PSI_PLUS: (1, 0),
    BellOutcome.PSI_MINUS: (1, 1),
}


def bell_outcome_bits(outcome: BellOutcome) -> tuple[int, int]:
    """Classical (x, z) bit pair equivalent to a Bell outcome."""
    return _OUTCOME_BITS[outcome]


class Prng:
    """Replayable randomness with named child streams.

    Same seed plus same call sequence gives the same draws.  Child streams
    are derived by hashing the parent path, so adversarial draws can live on
    their own stream and never perturb honest-protocol draws made under the
    same world seed.
    """

    def __init__(self, seed: int, _path: tuple[str, ...] = ()):
        self.seed = int(seed)
        self._path = _path
        material = f"{self.seed}|{'/'.join(_path)}".encode()
        digest = hashlib.sha256(material).digest()
        self._gen = np.random.Generator(
            np.random.PCG64(int.from_bytes(digest[:16], "little"))
        )

    def child(self, name: str) -> "Prng":
        return Prng(self.seed, self._path + (name,))

    def uniform(self) -> float:
        return float(self._gen.random())

    def uniforms(self, count: int) -> np.ndarray:
        return self._gen.random(count)

    def bits(self, count: int) -> tuple[int, ...]:
        return tuple(int(b) for b in self._gen.integers(0, 2, size=count))

    def integer(self, upper: int) -> int:
        """Uniform draw from range(upper)."""
        return int(self._gen.integers(0, upper))

    def distinct(self, upper: int, count: int) -> list[int]:
        """count distinct draws from range(upper), in draw order."""
        if count > upper:
            raise ValueError("cannot draw that many distinct values")
        return [int(v) for v in self._gen.permutation(upper)[:count]]

    def haar_qubit(self) -> tuple[complex, complex]:
        """Haar-random single-qubit amplitudes: two complex standard
        normals, normalized."""
        parts = self._gen.standard_normal(4)
        vec = np.array([parts[0] + 1j * parts[1], parts[2] + 1j * parts[3]])
        vec /= np.linalg.norm(vec)
        return complex(vec[0]), complex(vec[1])


class _Group:
    __slots__ = ("members", "amps")

    def __init__(self, members: list[QubitId], amps: np.ndarray):
        self.members = members
        self.amps = amps


class Registry:
    """Every live qubit of one simulation world, in factored form.

    Qubit handles are plain ints, unique for the registry's lifetime; a
    handle is never reused after its qubit is consumed by a destructive
    measurement.
    """

    def __init__(self, group_cap: int = GROUP_CAP_DEFAULT):
        if group_cap < 2:
            raise ValueError("group cap below 2 cannot hold a Bell pair")
        self.group_cap = group_cap
        self._groups: dict[int, _Group] = {}
        self._where: dict[QubitId, int] = {}
        self._dead: set[QubitId] = set()
        self._next_qubit = 0
        self._next_group = 0

    # ---------------------------------------------------------------- setup

    def _fresh_ids(self, count: int) -> list[QubitId]:
        ids = list(range(self._next_qubit, self._next_qubit + count))
        self._next_qubit += count
        return ids

    def _install(self, members: list[QubitId], amps: np.ndarray) -> None:
        gid = self._next_group
        self._next_group += 1
        self._groups[gid] = _Group(members, amps)
        for q in members:
            self._where[q] = gid

    def alloc_qubit(self, alpha: complex, beta: complex) -> QubitId:
        """New qubit in state alpha|0> + beta|1>.

        Amplitudes must be normalized within 1e-9; they are renormalized
        exactly on storage so the registry invariant holds to 1e-12.
        """
        amps = np.array([alpha, beta], dtype=complex)
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > 1e-9:
            raise NonNormalized(f"|alpha|^2 + |beta|^2 = {norm2}")
        (qid,) = self._fresh_ids(1)
        self._install([qid], amps / np.sqrt(norm2))
        return qid

    def make_bell_pair(self) -> tuple[QubitId, QubitId]:
        """New two-qubit group in (|00> + |11>)/sqrt(2)."""
        amps = np.zeros(4, dtype=complex)
        amps[0] = _INV_SQRT2
        amps[3] = _INV_SQRT2
        first, second = self._fresh_ids(2)
        self._install([first, second], amps)
        return first, second

    # ------------------------------------------------------------ accessors

    def is_alive(self, qubit: QubitId) -> bool:
        return qubit in self._where

    def alive_qubits(self) -> frozenset[QubitId]:
        return frozenset(self._where)

    def group_members(self, qubit: QubitId) -> tuple[QubitId, ...]:
        """Members of the group holding ``qubit`` (itself included)."""
        self._require_alive(qubit)
        return tuple(self._groups[self._where[qubit]].members)

    def norm_error(self) -> float:
        """Largest deviation of any group's total probability from 1."""
        worst = 0.0
        for group in self._groups.values():
            worst = max(worst, abs(float(np.sum(np.abs(group.amps) ** 2)) - 1.0))
        return worst

    def _require_alive(self, qubit: QubitId) -> None:
        if qubit in self._where:
            return
        if qubit in self._dead:
            raise DeadQubit(f"qubit {qubit} was consumed by measurement")
        raise DeadQubit(f"qubit {qubit} was never allocated")

    # ------------------------------------------------------------ operations

    def apply_pauli(self, qubit: QubitId, x_exp: int, z_exp: int) -> None:
        """Apply sigma_x^x_exp sigma_z^z_exp to one qubit, sigma_z first."""
        if x_exp not in (0, 1) or z_exp not in (0, 1):
            raise ValueError("Pauli exponents must be 0 or 1")
        self._require_alive(qubit)
        group = self._groups[self._where[qubit]]
        pos = group.members.index(qubit)
        size = len(group.members)
        left = 1 << pos
        right = 1 << (size - pos - 1)
        arr = group.amps.reshape(left, 2, right)
        if z_exp:
            arr = arr.copy()
            arr[:, 1, :] *= -1
        if x_exp:
            arr = arr[:, ::-1, :]
        group.amps = np.ascontiguousarray(arr).reshape(-1)

    def _merge(self, gid_a: int, gid_b: int) -> int:
        if gid_a == gid_b:
            return gid_a
        a, b = self._groups[gid_a], self._groups[gid_b]
        total = len(a.members) + len(b.members)
        if total > self.group_cap:
            raise GroupCapExceeded(
                f"merge of {total} qubits exceeds cap {self.group_cap}"
            )
        merged = _Group(a.members + b.members, np.kron(a.amps, b.amps))
        gid = self._next_group
        self._next_group += 1
        self._groups[gid] = merged
        for q in merged.members:
            self._where[q] = gid
        del self._groups[gid_a]
        del self._groups[gid_b]
        return gid

    def bell_measure(self, first: QubitId, second: QubitId, rng: Prng) -> BellOutcome:
        """Destructive Bell-basis measurement of two qubits.

        Both qubits are consumed.  Any remaining group members collapse and
        are renormalized.  The outcome is Born-sampled by an inverse-CDF
        walk over BELL_ORDER using a single uniform draw from ``rng``.
        """
        self._require_alive(first)
        self._require_alive(second)
        if first == second:
            raise ValueError("Bell measurement needs two distinct qubits")
        gid = self._merge(self._where[first], self._where[second])
        group = self._groups[gid]
        size = len(group.members)
        p_first = group.members.index(first)
        p_second = group.members.index(second)

        tensor = group.amps.reshape([2] * size)
        front = np.moveaxis(tensor, (p_first, p_second), (0, 1)).reshape(4, -1)

        residuals = {}
        probs = np.empty(4)
        for k, outcome in enumerate(BELL_ORDER):
            residual = _BELL_VECTORS[outcome].conj() @ front
            residuals[outcome] = residual
            probs[k] = float(np.sum(np.abs(residual) ** 2))
        total = float(probs.sum())
        if abs(total - 1.0) > 1e-9:
            raise NonNormalized(f"Bell projection probabilities sum to {total}")
        probs /= total

        draw = rng.uniform()
        chosen = BELL_ORDER[-1]
        acc = 0.0
        for k, outcome in enumerate(BELL_ORDER):
            acc += probs[k]
            if draw < acc:
                chosen = outcome
                break

        residual = residuals[chosen]
        remaining = [q for q in group.members if q not in (first, second)]
        del self._groups[gid]
        for q in (first, second):
            del self._where[q]
            self._dead.add(q)
        if remaining:
            collapsed = residual / np.linalg.norm(residual)
            self._install(remaining, np.ascontiguousarray(collapsed).reshape(-1))
        return chosen

    # ------------------------------------------------------------ comparison

    def state_vector(self, qubits: Sequence[QubitId]) -> np.ndarray:
        """Joint amplitude vector of ``qubits``, in the order given.

        The qubits must be factored from everything else in the registry
        (entanglement among themselves is fine); otherwise NotFactored.
        """
        if len(qubits) == 0:
            raise ValueError("empty qubit list")
        if len(set(qubits)) != len(qubits):
            raise ValueError("duplicate qubit in state request")
        for q in qubits:
            self._require_alive(q)
        requested = set(qubits)
        gids: list[int] = []
        for q in qubits:
            gid = self._where[q]
            if gid not in gids:
                gids.append(gid)
        joint_members: list[QubitId] = []
        for gid in gids:
            for member in self._groups[gid].members:
                if member not in requested:
                    raise NotFactored(
                        f"qubit {member} is entangled with the request "
                        "but not part of it"
                    )
            joint_members.extend(self._groups[gid].members)
        joint = self._groups[gids[0]].amps
        for gid in gids[1:]:
            joint = np.kron(joint, self._groups[gid].amps)
        perm = [joint_members.index(q) for q in qubits]
        tensor = joint.reshape([2] * len(joint_members)).transpose(perm)
        return np.ascontiguousarray(tensor).reshape(-1).copy()

    def fidelity(self, a: Sequence[QubitId], b: Sequence[QubitId]) -> float:
        """|<a|b>|^2 for two factored pure states of equal qubit count."""
        if len(a) != len(b):
            raise DimensionMismatch(f"{len(a)} qubits vs {len(b)} qubits")
        va = self.state_vector(a)
        vb = self.state_vector(b)
        return _overlap(va, vb)

    def fidelity_to_vector(self, qubits: Sequence[QubitId], vec: np.ndarray) -> float:
        """Fidelity of held qubits against an explicit amplitude vector."""
        held = self.state_vector(qubits)
        if held.shape != np.asarray(vec).shape:
            raise DimensionMismatch("vector length does not match qubit count")
        return _overlap(held, np.asarray(vec, dtype=complex))

    def swap_test(
        self, a: Sequence[QubitId], b: Sequence[QubitId], shots: int, rng: Prng
    ) -> float:
        """Acceptance fraction of a swap test: each shot accepts with
        probability (1 + F)/2 where F is the true fidelity."""
        if shots < 1:
            raise ValueError("swap test needs at least one shot")
        accept_p = (1.0 + self.fidelity(a, b)) / 2.0
        accepted = int(np.count_nonzero(rng.uniforms(shots) < accept_p))
        return accepted / shots


def _overlap(va: np.ndarray, vb: np.ndarray) -> float:
    value = float(np.abs(np.vdot(va, vb)) ** 2)
    return min(max(value, 0.0), 1.0)
