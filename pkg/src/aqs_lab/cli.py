"""Command-line harness: honest runs, attacks, and invariant sweeps.

Reports are JSON; the human summary goes to standard output when a report
file is written with --out, otherwise to standard error so the report on
standard output stays machine-readable.  All randomness flows from --seed;
omitting it draws one from entropy and prints it for replay.

Exit codes: 0 the run or attack behaved as its report claims it should,
1 a check or verdict failed, 2 the invocation or configuration is invalid.
"""

from __future__ import annotations

import argparse
import json
import math
import secrets
import sys
from pathlib import Path

import numpy as np

from .attacks import (
    CASES_BY_SCHEME,
    FORGED_SA,
    DisputeCase,
    InvalidCase,
    compare_trent_views,
    run_control_forged_sa,
    run_dispute,
    run_false_r,
    run_ipe,
)
from .protocol import ConfigError, RunConfig, run_scheme
from .qotp import (
    Convention,
    QubitSequence,
    decrypt_e,
    encrypt_e,
    gen_key,
    transform_m,
    transform_m_inv,
)
from .qstate import Prng, Registry, bell_outcome_bits


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scheme", type=int, choices=(1, 2), default=1)
    parser.add_argument("--n", type=int, default=4)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--comparator", default="exact", metavar="exact|swap:SHOTS")
    parser.add_argument(
        "--carrier", choices=("p-prime", "s-a"), default="p-prime"
    )
    parser.add_argument("--out", default=None, metavar="PATH")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aqs-lab",
        description="Deterministic runs and attacks for two arbitrated "
        "quantum signature schemes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="honest end-to-end run")
    _add_common(run_p)

    attack_p = sub.add_parser("attack", help="run an attack and report")
    attack_p.add_argument("kind", choices=("dispute", "ipe", "false-r"))
    _add_common(attack_p)
    attack_p.add_argument("--case", default=None, metavar="NAME")
    attack_p.add_argument("--all-cases", action="store_true")

    check_p = sub.add_parser("check", help="invariant sweeps")
    _add_common(check_p)
    check_p.add_argument(
        "--convention", choices=[c.value for c in Convention], default="cyclic"
    )
    check_p.add_argument("--trials", type=int, default=200)
    return parser


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    seed = secrets.randbits(64)
    print(f"seed {seed} (generated; pass --seed {seed} to replay)", file=sys.stderr)
    return seed


def _config(args: argparse.Namespace, seed: int) -> RunConfig:
    config = RunConfig(
        n=args.n,
        seed=seed,
        comparator=args.comparator,
        carrier=args.carrier.replace("-", "_"),
    )
    config.validate()
    return config


def _emit(args: argparse.Namespace, report: str, summary: str) -> None:
    if args.out:
        Path(args.out).write_text(report + "\n")
        print(summary)
    else:
        print(report)
        print(summary, file=sys.stderr)


def cmd_run(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    config = _config(args, seed)
    transcript, verdict = run_scheme(args.scheme, config)
    fids = verdict.fidelities
    min_fid = f"{min(fids):.12f}" if fids else "n/a"
    summary = (
        f"run scheme={args.scheme} n={args.n} seed={seed} "
        f"v_trent={verdict.v_trent} v_bob={verdict.v_bob} "
        f"accepted={verdict.accepted} min_fidelity={min_fid}"
    )
    _emit(args, transcript.to_json(), summary)
    return 0 if verdict.accepted else 1


def _attack_dispute(args: argparse.Namespace, config: RunConfig) -> int:
    if args.all_cases:
        transcripts = [
            run_dispute(case, args.scheme, config)
            for case in CASES_BY_SCHEME[args.scheme]
        ]
        transcripts.append(run_control_forged_sa(args.scheme, config))
        report = compare_trent_views(transcripts)
        dispute_idx = [i for i, c in enumerate(report.cases) if c != FORGED_SA]
        disputes_equal = all(
            report.pairwise_equal[i][j] for i in dispute_idx for j in dispute_idx
        )
        control_differs = FORGED_SA in report.distinguishable
        summary = (
            f"dispute scheme={args.scheme} seed={config.seed} "
            f"cases={','.join(report.cases)} "
            f"disputes_equal={disputes_equal} control_differs={control_differs}"
        )
        _emit(args, report.to_json(), summary)
        return 0 if disputes_equal and control_differs else 1

    if args.case is None:
        print("attack dispute requires --case NAME or --all-cases", file=sys.stderr)
        return 2
    try:
        case = DisputeCase(args.case)
    except ValueError:
        print(f"unknown dispute case {args.case!r}", file=sys.stderr)
        return 2
    transcript = run_dispute(case, args.scheme, config)
    verdict = transcript.verdict
    dilemma = verdict.v_trent == 1 and verdict.v_bob == 0
    summary = (
        f"dispute scheme={args.scheme} case={case.value} seed={config.seed} "
        f"v_trent={verdict.v_trent} v_bob={verdict.v_bob} dilemma={dilemma}"
    )
    _emit(args, transcript.to_json(), summary)
    return 0 if dilemma else 1


def cmd_attack(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    config = _config(args, seed)
    if args.kind == "dispute":
        return _attack_dispute(args, config)
    if args.kind == "ipe":
        report = run_ipe(args.scheme, config)
        summary = (
            f"ipe scheme={args.scheme} n={args.n} seed={seed} "
            f"carrier={report.carrier} success={report.success} "
            f"detected={report.detected}"
        )
        _emit(args, report.to_json(), summary)
        return 0 if report.success and report.detected == 0 else 1
    report = run_false_r(args.scheme, config, flips=1)
    expected = len(report.flipped_slots)
    ok = (
        report.checks_failed == 0
        and report.accepted
        and len(report.wrong_indices) == expected
    )
    summary = (
        f"false-r scheme={args.scheme} n={args.n} seed={seed} "
        f"flipped={report.flipped_slots} wrong={report.wrong_indices} "
        f"checks_failed={report.checks_failed}"
    )
    _emit(args, report.to_json(), summary)
    return 0 if ok else 1


# --------------------------------------------------------------------------
# invariant sweeps


def _check_pad_round_trip(rng: Prng, trials: int, convention: str) -> bool:
    for _ in range(trials):
        reg = Registry()
        alpha, beta = rng.haar_qubit()
        q = reg.alloc_qubit(alpha, beta)
        ref = reg.state_vector([q]).copy()
        key = gen_key(2, "check", rng)
        seq = QubitSequence.from_qubits([q])
        encrypt_e(reg, seq, key)
        decrypt_e(reg, seq, key)
        if reg.fidelity_to_vector([q], ref) < 1.0 - 1e-12:
            return False
    return True


def _check_transform_round_trip(rng: Prng, trials: int, convention: str) -> bool:
    conv = Convention(convention)
    for _ in range(trials):
        reg = Registry()
        qubits = [reg.alloc_qubit(*rng.haar_qubit()) for _ in range(4)]
        refs = [reg.state_vector([q]).copy() for q in qubits]
        key = gen_key(4, "check", rng)
        seq = QubitSequence.from_qubits(qubits)
        transform_m(reg, seq, key, conv)
        transform_m_inv(reg, seq, key, conv)
        for q, ref in zip(qubits, refs):
            if reg.fidelity_to_vector([q], ref) < 1.0 - 1e-12:
                return False
    return True


def _check_bell_decode(rng: Prng, trials: int, convention: str) -> bool:
    for x_bit in (0, 1):
        for z_bit in (0, 1):
            reg = Registry()
            first, second = reg.make_bell_pair()
            reg.apply_pauli(first, x_bit, z_bit)
            outcome = reg.bell_measure(first, second, rng)
            if bell_outcome_bits(outcome) != (x_bit, z_bit):
                return False
    return True


def _check_teleport(rng: Prng, trials: int, convention: str) -> bool:
    for _ in range(trials):
        reg = Registry()
        alpha, beta = rng.haar_qubit()
        src = reg.alloc_qubit(alpha, beta)
        ref = np.array([alpha, beta], dtype=complex)
        kept, far = reg.make_bell_pair()
        outcome = reg.bell_measure(src, kept, rng)
        x_bit, z_bit = bell_outcome_bits(outcome)
        reg.apply_pauli(far, x_bit, z_bit)
        if reg.fidelity_to_vector([far], ref) < 1.0 - 1e-9:
            return False
    return True


def _check_swap_calibration(rng: Prng, trials: int, convention: str) -> bool:
    shots = 100_000
    for fid in (0.0, 0.25, 0.5, 1.0):
        reg = Registry()
        a = reg.alloc_qubit(1, 0)
        b = reg.alloc_qubit(math.sqrt(fid), math.sqrt(1.0 - fid))
        fraction = reg.swap_test([a], [b], shots, rng)
        p = (1.0 + fid) / 2.0
        se = math.sqrt(p * (1.0 - p) / shots)
        if abs(fraction - p) > 3.0 * se:
            return False
    return True


_CHECKS = (
    ("pad_round_trip", _check_pad_round_trip),
    ("transform_round_trip", _check_transform_round_trip),
    ("bell_decode_table", _check_bell_decode),
    ("teleport_completeness", _check_teleport),
    ("swap_calibration", _check_swap_calibration),
)


def cmd_check(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    if args.trials < 1:
        print(f"trials must be positive, got {args.trials}", file=sys.stderr)
        return 2
    root = Prng(seed).child("check")
    all_passed = True
    results = []
    for name, fn in _CHECKS:
        passed = fn(root.child(name), args.trials, args.convention)
        all_passed &= passed
        results.append({"name": name, "passed": passed})
        print(f"{'PASS' if passed else 'FAIL'} {name}")
    if args.out:
        doc = {"seed": seed, "trials": args.trials, "checks": results,
               "all_passed": all_passed}
        Path(args.out).write_text(
            json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
        )
    return 0 if all_passed else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "attack":
            return cmd_attack(args)
        return cmd_check(args)
    except (ConfigError, InvalidCase, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
