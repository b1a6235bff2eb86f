import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aqs_lab import (
    BELL_ORDER,
    BellOutcome,
    DeadQubit,
    DimensionMismatch,
    GroupCapExceeded,
    NonNormalized,
    NotFactored,
    Prng,
    Registry,
    bell_outcome_bits,
)
from oracles import BELL_BITS, BELL_VECS, fidelity_vec, pauli_mat

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def amp_pairs():
    def norm_ok(t):
        return math.hypot(math.hypot(t[0], t[1]), math.hypot(t[2], t[3])) > 0.3

    coords = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)
    return st.tuples(coords, coords, coords, coords).filter(norm_ok)


def normalized(raw):
    alpha = complex(raw[0], raw[1])
    beta = complex(raw[2], raw[3])
    norm = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
    return alpha / norm, beta / norm


class TestAlloc:
    def test_basis_state(self):
        reg = Registry()
        q = reg.alloc_qubit(1, 0)
        assert reg.fidelity_to_vector([q], np.array([1, 0])) == pytest.approx(1.0)

    def test_plus_state(self):
        reg = Registry()
        q = reg.alloc_qubit(INV_SQRT2, INV_SQRT2)
        assert reg.fidelity_to_vector(
            [q], np.array([INV_SQRT2, INV_SQRT2])
        ) == pytest.approx(1.0)

    def test_weighted_state_measure_one_probability(self):
        reg = Registry()
        q = reg.alloc_qubit(0.6, 0.8j)
        assert reg.fidelity_to_vector([q], np.array([0, 1])) == pytest.approx(0.64)

    def test_non_normalized_rejected(self):
        reg = Registry()
        with pytest.raises(NonNormalized):
            reg.alloc_qubit(1, 1)


class TestBellPair:
    def test_pair_state(self):
        reg = Registry()
        a, b = reg.make_bell_pair()
        assert reg.fidelity_to_vector([a, b], BELL_VECS["PhiPlus"]) == pytest.approx(
            1.0
        )

    def test_cross_terms_vanish(self):
        reg = Registry()
        a, b = reg.make_bell_pair()
        vec = reg.state_vector([a, b])
        assert vec[1] == 0 and vec[2] == 0

    def test_pauli_on_first_member(self):
        reg = Registry()
        a, b = reg.make_bell_pair()
        reg.apply_pauli(a, 1, 0)
        assert reg.fidelity_to_vector([a, b], BELL_VECS["PsiPlus"]) == pytest.approx(
            1.0
        )


class TestApplyPauli:
    def test_identity(self):
        reg = Registry()
        q = reg.alloc_qubit(1, 0)
        reg.apply_pauli(q, 0, 0)
        assert reg.fidelity_to_vector([q], np.array([1, 0])) == pytest.approx(1.0)

    def test_bit_flip(self):
        reg = Registry()
        q = reg.alloc_qubit(1, 0)
        reg.apply_pauli(q, 1, 0)
        assert reg.fidelity_to_vector([q], np.array([0, 1])) == pytest.approx(1.0)

    def test_xz_on_plus_gives_minus(self):
        reg = Registry()
        q = reg.alloc_qubit(INV_SQRT2, INV_SQRT2)
        reg.apply_pauli(q, 1, 1)
        minus = np.array([INV_SQRT2, -INV_SQRT2])
        assert reg.fidelity_to_vector([q], minus) == pytest.approx(1.0)

    def test_bad_exponent_rejected(self):
        reg = Registry()
        q = reg.alloc_qubit(1, 0)
        with pytest.raises(ValueError):
            reg.apply_pauli(q, 2, 0)

    def test_dead_qubit_rejected(self):
        reg = Registry()
        a, b = reg.make_bell_pair()
        reg.bell_measure(a, b, Prng(1))
        with pytest.raises(DeadQubit):
            reg.apply_pauli(a, 1, 0)

    @given(amp_pairs(), st.sampled_from([(0, 0), (0, 1), (1, 0), (1, 1)]))
    def test_involution(self, raw, exps):
        reg = Registry()
        alpha, beta = normalized(raw)
        q = reg.alloc_qubit(alpha, beta)
        ref = reg.state_vector([q]).copy()
        reg.apply_pauli(q, *exps)
        assert reg.norm_error() < 1e-12
        reg.apply_pauli(q, *exps)
        assert reg.fidelity_to_vector([q], ref) >= 1.0 - 1e-12

    @given(amp_pairs(), st.sampled_from([(0, 0), (0, 1), (1, 0), (1, 1)]))
    def test_matches_matrix_oracle(self, raw, exps):
        reg = Registry()
        alpha, beta = normalized(raw)
        q = reg.alloc_qubit(alpha, beta)
        reg.apply_pauli(q, *exps)
        expected = pauli_mat(*exps) @ np.array([alpha, beta])
        assert reg.fidelity_to_vector([q], expected) >= 1.0 - 1e-12


class TestBellMeasure:
    def test_eigenstate_deterministic(self):
        reg = Registry()
        a, b = reg.make_bell_pair()
        assert reg.bell_measure(a, b, Prng(3)) is BellOutcome.PHI_PLUS

    def test_shifted_eigenstates_deterministic(self):
        for (x_exp, z_exp), name in (
            ((0, 0), "PhiPlus"),
            ((0, 1), "PhiMinus"),
            ((1, 0), "PsiPlus"),
            ((1, 1), "PsiMinus"),
        ):
            reg = Registry()
            a, b = reg.make_bell_pair()
            reg.apply_pauli(a, x_exp, z_exp)
            outcome = reg.bell_measure(a, b, Prng(5))
            assert outcome.value == name

    def test_product_zero_state_split(self):
        counts = {o: 0 for o in BellOutcome}
        trials = 10_000
        rng = Prng(11)
        for _ in range(trials):
            reg = Registry()
            a = reg.alloc_qubit(1, 0)
            b = reg.alloc_qubit(1, 0)
            counts[reg.bell_measure(a, b, rng)] += 1
        assert counts[BellOutcome.PSI_PLUS] == 0
        assert counts[BellOutcome.PSI_MINUS] == 0
        for outcome in (BellOutcome.PHI_PLUS, BellOutcome.PHI_MINUS):
            assert abs(counts[outcome] / trials - 0.5) < 0.02

    def test_consumes_both_qubits(self):
        reg = Registry()
        a, b = reg.make_bell_pair()
        reg.bell_measure(a, b, Prng(7))
        assert not reg.is_alive(a) and not reg.is_alive(b)
        with pytest.raises(DeadQubit):
            reg.bell_measure(a, b, Prng(7))

    def test_same_qubit_rejected(self):
        reg = Registry()
        q = reg.alloc_qubit(1, 0)
        with pytest.raises(ValueError):
            reg.bell_measure(q, q, Prng(1))

    def test_survivor_collapses_and_normalizes(self):
        reg = Registry()
        a, b = reg.make_bell_pair()
        c = reg.alloc_qubit(INV_SQRT2, INV_SQRT2)
        reg.bell_measure(a, c, Prng(13))
        assert reg.is_alive(b)
        assert reg.norm_error() < 1e-12
        assert len(reg.group_members(b)) == 1

    def test_group_cap_enforced(self):
        reg = Registry(group_cap=2)
        a, _ = reg.make_bell_pair()
        c, _ = reg.make_bell_pair()
        with pytest.raises(GroupCapExceeded):
            reg.bell_measure(a, c, Prng(1))

    def test_teleport_correction_restores_input(self):
        rng = Prng(17)
        for _ in range(50):
            reg = Registry()
            alpha, beta = rng.haar_qubit()
            src = reg.alloc_qubit(alpha, beta)
            kept, far = reg.make_bell_pair()
            outcome = reg.bell_measure(src, kept, rng)
            x_exp, z_exp = bell_outcome_bits(outcome)
            reg.apply_pauli(far, x_exp, z_exp)
            ref = np.array([alpha, beta])
            assert reg.fidelity_to_vector([far], ref) >= 1.0 - 1e-9


class TestDecodeTable:
    def test_full_table(self):
        assert bell_outcome_bits(BellOutcome.PHI_PLUS) == (0, 0)
        assert bell_outcome_bits(BellOutcome.PHI_MINUS) == (0, 1)
        assert bell_outcome_bits(BellOutcome.PSI_PLUS) == (1, 0)
        assert bell_outcome_bits(BellOutcome.PSI_MINUS) == (1, 1)

    def test_order_constant(self):
        assert tuple(o.value for o in BELL_ORDER) == (
            "PhiPlus",
            "PhiMinus",
            "PsiPlus",
            "PsiMinus",
        )

    def test_table_matches_vector_oracle(self):
        for outcome in BellOutcome:
            x_exp, z_exp = bell_outcome_bits(outcome)
            shifted = np.kron(pauli_mat(x_exp, z_exp), np.eye(2)) @ BELL_VECS[
                "PhiPlus"
            ]
            assert fidelity_vec(shifted, BELL_VECS[outcome.value]) == pytest.approx(
                1.0
            )


class TestFidelity:
    def test_identical(self):
        reg = Registry()
        a = reg.alloc_qubit(1, 0)
        b = reg.alloc_qubit(1, 0)
        assert reg.fidelity([a], [b]) == pytest.approx(1.0)

    def test_orthogonal(self):
        reg = Registry()
        a = reg.alloc_qubit(1, 0)
        b = reg.alloc_qubit(0, 1)
        assert reg.fidelity([a], [b]) == pytest.approx(0.0)

    def test_overlap_value(self):
        reg = Registry()
        a = reg.alloc_qubit(1, 0)
        b = reg.alloc_qubit(0.6, 0.8)
        assert reg.fidelity([a], [b]) == pytest.approx(0.36)

    def test_dimension_mismatch(self):
        reg = Registry()
        a = reg.alloc_qubit(1, 0)
        b = reg.alloc_qubit(1, 0)
        c = reg.alloc_qubit(1, 0)
        with pytest.raises(DimensionMismatch):
            reg.fidelity([a], [b, c])

    def test_not_factored(self):
        reg = Registry()
        a, _ = reg.make_bell_pair()
        b = reg.alloc_qubit(1, 0)
        with pytest.raises(NotFactored):
            reg.fidelity([a], [b])

    def test_duplicate_request_rejected(self):
        reg = Registry()
        a = reg.alloc_qubit(1, 0)
        with pytest.raises(ValueError):
            reg.state_vector([a, a])

    def test_empty_request_rejected(self):
        reg = Registry()
        with pytest.raises(ValueError):
            reg.state_vector([])


class TestSwapTest:
    def test_identical_always_accepts(self):
        reg = Registry()
        a = reg.alloc_qubit(1, 0)
        b = reg.alloc_qubit(1, 0)
        assert reg.swap_test([a], [b], 64, Prng(19)) == 1.0

    def test_orthogonal_near_half(self):
        reg = Registry()
        a = reg.alloc_qubit(1, 0)
        b = reg.alloc_qubit(0, 1)
        assert abs(reg.swap_test([a], [b], 10_000, Prng(23)) - 0.5) < 0.02

    def test_partial_overlap(self):
        reg = Registry()
        a = reg.alloc_qubit(1, 0)
        b = reg.alloc_qubit(0.6, 0.8)
        frac = reg.swap_test([a], [b], 10_000, Prng(29))
        assert abs(frac - 0.68) < 0.02

    def test_zero_shots_rejected(self):
        reg = Registry()
        a = reg.alloc_qubit(1, 0)
        b = reg.alloc_qubit(1, 0)
        with pytest.raises(ValueError):
            reg.swap_test([a], [b], 0, Prng(1))


class TestPrng:
    def test_replayable(self):
        first = [Prng(99).uniform() for _ in range(5)]
        second = [Prng(99).uniform() for _ in range(5)]
        assert first == second

    def test_sequences_replayable(self):
        a = Prng(42)
        b = Prng(42)
        assert a.bits(64) == b.bits(64)
        assert [a.integer(10) for _ in range(20)] == [
            b.integer(10) for _ in range(20)
        ]

    def test_child_streams_disjoint(self):
        root = Prng(7)
        xs = root.child("one").bits(64)
        ys = root.child("two").bits(64)
        assert xs != ys

    def test_child_independent_of_parent_draws(self):
        a = Prng(7)
        a.uniform()
        b = Prng(7)
        assert a.child("x").bits(32) == b.child("x").bits(32)

    def test_haar_qubit_normalized(self):
        rng = Prng(31)
        for _ in range(20):
            alpha, beta = rng.haar_qubit()
            assert abs(alpha) ** 2 + abs(beta) ** 2 == pytest.approx(1.0)

    def test_distinct_values(self):
        rng = Prng(37)
        picks = rng.distinct(8, 8)
        assert sorted(picks) == list(range(8))
        assert len(rng.distinct(8, 3)) == 3


@given(amp_pairs(), st.integers(0, 2**32 - 1))
def test_norm_preserved_through_measurement(raw, seed):
    reg = Registry()
    alpha, beta = normalized(raw)
    src = reg.alloc_qubit(alpha, beta)
    kept, far = reg.make_bell_pair()
    reg.bell_measure(src, kept, Prng(seed))
    assert reg.norm_error() < 1e-12
    assert reg.is_alive(far)
