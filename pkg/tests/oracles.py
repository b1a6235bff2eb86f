"""Independent numpy oracles the tests trust instead of the package.

Everything here is brute-force linear algebra on explicit state vectors,
with no import of the package under test, so agreement between the two is
evidence rather than tautology.
"""

from __future__ import annotations

import numpy as np

ID2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

_SQ2 = 1.0 / np.sqrt(2.0)

BELL_VECS = {
    "PhiPlus": np.array([_SQ2, 0, 0, _SQ2], dtype=complex),
    "PhiMinus": np.array([_SQ2, 0, 0, -_SQ2], dtype=complex),
    "PsiPlus": np.array([0, _SQ2, _SQ2, 0], dtype=complex),
    "PsiMinus": np.array([0, _SQ2, -_SQ2, 0], dtype=complex),
}

BELL_BITS = {
    "PhiPlus": (0, 0),
    "PhiMinus": (0, 1),
    "PsiPlus": (1, 0),
    "PsiMinus": (1, 1),
}


def pauli_mat(x_exp: int, z_exp: int) -> np.ndarray:
    mat = ID2
    if z_exp:
        mat = SZ @ mat
    if x_exp:
        mat = SX @ mat
    return mat


def fidelity_vec(a: np.ndarray, b: np.ndarray) -> float:
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))


def teleport_cases(alpha: complex, beta: complex):
    """Brute-force the four Bell projections of input (x) Bell pair.

    Qubit order: input, kept half, far half.  Yields per outcome name the
    outcome probability and the far qubit's residual state (pre-correction).
    """
    psi = np.array([alpha, beta], dtype=complex)
    psi = psi / np.linalg.norm(psi)
    joint = np.kron(psi, BELL_VECS["PhiPlus"])
    front = joint.reshape(4, 2)
    for name, bell in BELL_VECS.items():
        residual = bell.conj() @ front
        prob = float(np.linalg.norm(residual) ** 2)
        yield name, prob, residual


def corrected_teleport(alpha: complex, beta: complex):
    """Residuals after applying the decode-table correction per outcome."""
    for name, prob, residual in teleport_cases(alpha, beta):
        x_exp, z_exp = BELL_BITS[name]
        yield name, prob, pauli_mat(x_exp, z_exp) @ residual


def pad_density_average(vec: np.ndarray) -> np.ndarray:
    """Key-averaged single-qubit pad output over all four 2-bit pads."""
    rho = np.zeros((2, 2), dtype=complex)
    for x_exp in (0, 1):
        for z_exp in (0, 1):
            out = pauli_mat(x_exp, z_exp) @ vec
            rho += np.outer(out, out.conj())
    return rho / 4.0
