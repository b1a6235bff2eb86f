"""Acceptance suite: one test per shipped claim, at the stated tolerance.

Each test prints a single summary line so a verbose run doubles as the
acceptance report.
"""

import json
import math
import subprocess
import sys
import time

import numpy as np

from aqs_lab import (
    CASES_BY_SCHEME,
    FORGED_SA,
    BellOutcome,
    Key,
    Prng,
    QubitSequence,
    Registry,
    RunConfig,
    bell_outcome_bits,
    compare_trent_views,
    encrypt_e,
    run_control_forged_sa,
    run_dispute,
    run_false_r,
    run_ipe,
    run_scheme,
    trent_view,
)
from oracles import BELL_BITS, fidelity_vec, pauli_mat, teleport_cases


def test_criterion_1_honest_completeness():
    started = time.perf_counter()
    runs = 0
    for scheme in (1, 2):
        for n in (1, 2, 4, 8, 16):
            for seed in range(50):
                _, verdict = run_scheme(scheme, RunConfig(n=n, seed=seed))
                assert verdict.accepted, (scheme, n, seed)
                assert len(verdict.fidelities) == n
                assert min(verdict.fidelities) >= 1.0 - 1e-9, (scheme, n, seed)
                runs += 1
    elapsed = time.perf_counter() - started
    assert runs == 500
    assert elapsed < 5.0, f"honest sweep took {elapsed:.2f}s"
    print(f"criterion 1 honest completeness: PASS ({runs} runs, {elapsed:.2f}s)")


def test_criterion_2_teleport_oracle_equivalence():
    rng = Prng(2024)
    for _ in range(100):
        alpha, beta = rng.haar_qubit()
        ref = np.array([alpha, beta])
        for name, prob, residual in teleport_cases(alpha, beta):
            assert abs(prob - 0.25) < 1e-12
            x_exp, z_exp = bell_outcome_bits(BellOutcome(name))
            corrected = pauli_mat(x_exp, z_exp) @ residual
            assert fidelity_vec(corrected, ref) >= 1.0 - 1e-12, name
    print("criterion 2 teleportation decode table: PASS (100 states x 4 outcomes)")


def test_criterion_3_pad_privacy():
    rng = Prng(777)
    for _ in range(20):
        alpha, beta = rng.haar_qubit()
        rho = np.zeros((2, 2), dtype=complex)
        for x_bit in (0, 1):
            for z_bit in (0, 1):
                reg = Registry()
                q = reg.alloc_qubit(alpha, beta)
                encrypt_e(
                    reg, QubitSequence.from_qubits([q]), Key((x_bit, z_bit), "k")
                )
                out = reg.state_vector([q])
                rho += np.outer(out, out.conj())
        rho /= 4.0
        assert np.max(np.abs(rho - np.eye(2) / 2)) < 1e-9
    print("criterion 3 pad key-average privacy: PASS (20 inputs)")


def test_criterion_4_ipe_recovery():
    for scheme in (1, 2):
        for seed in range(100):
            report = run_ipe(scheme, RunConfig(n=8, seed=seed))
            assert report.success, (scheme, seed)
            assert report.recovered_bits == report.true_bits
            assert len(report.recovered_bits) == 16
            assert report.detected == 0, (scheme, seed)
            assert report.verdict_matches_honest, (scheme, seed)
    print("criterion 4 probe key extraction: PASS (2 schemes x 100 seeds, n=8)")


def test_criterion_5_deniable_dilemma():
    for scheme in (1, 2):
        for seed in range(10):
            config = RunConfig(n=4, seed=seed)
            transcripts = [
                run_dispute(case, scheme, config)
                for case in CASES_BY_SCHEME[scheme]
            ]
            control = run_control_forged_sa(scheme, config)
            report = compare_trent_views(transcripts + [control])
            k = len(CASES_BY_SCHEME[scheme])
            for i in range(k):
                for j in range(k):
                    assert report.pairwise_equal[i][j], (scheme, seed)
            assert report.distinguishable == [FORGED_SA], (scheme, seed)
            assert control.verdict.v_trent == 0
            assert '"v":0' in trent_view(control) or '"value":0' in trent_view(
                control
            )
    print("criterion 5 arbitrator dilemma: PASS (2 schemes x 10 seeds + control)")


def test_criterion_6_false_pad_publication():
    n = 4
    for scheme in (1, 2):
        for flips in (1, n // 2, n):
            for seed in range(20):
                report = run_false_r(
                    scheme, RunConfig(n=n, seed=seed), flips=flips
                )
                assert report.checks_failed == 0, (scheme, flips, seed)
                assert report.accepted
                assert len(report.flipped_slots) == flips
                assert report.wrong_indices == report.flipped_slots
                for i in range(n):
                    fid = report.fidelities[i]
                    if i in report.flipped_slots:
                        assert fid < 1.0 - 1e-6, (scheme, flips, seed, i)
                    else:
                        assert fid >= 1.0 - 1e-9
    print("criterion 6 false pad publication: PASS (k in {1,2,4}, 20 seeds each)")


def test_criterion_7_swap_calibration():
    shots = 100_000
    rng = Prng(4242)
    for fid in (0.0, 0.25, 0.5, 1.0):
        reg = Registry()
        a = reg.alloc_qubit(1, 0)
        b = reg.alloc_qubit(math.sqrt(fid), math.sqrt(1.0 - fid))
        fraction = reg.swap_test([a], [b], shots, rng)
        p = (1.0 + fid) / 2.0
        se = math.sqrt(p * (1.0 - p) / shots)
        assert abs(fraction - p) <= 3.0 * se, (fid, fraction)
    print("criterion 7 swap-test calibration: PASS (4 fidelities x 1e5 shots)")


def test_criterion_8_cli_determinism():
    commands = (
        ["run", "--scheme", "1", "--n", "4", "--seed", "12"],
        ["run", "--scheme", "2", "--n", "4", "--seed", "12"],
        ["attack", "ipe", "--scheme", "2", "--n", "8", "--seed", "3"],
        ["attack", "dispute", "--scheme", "1", "--all-cases", "--seed", "5"],
        ["attack", "false-r", "--scheme", "1", "--n", "4", "--seed", "8"],
    )
    for argv in commands:
        outputs = []
        for _ in range(2):
            proc = subprocess.run(
                [sys.executable, "-m", "aqs_lab", *argv],
                capture_output=True,
                timeout=120,
            )
            assert proc.returncode == 0, (argv, proc.stderr)
            outputs.append(proc.stdout)
        assert outputs[0] == outputs[1], argv
        json.loads(outputs[0])
    print("criterion 8 report determinism: PASS (5 commands, byte-identical)")
