"""Brute-force state-vector reference for small N.

Shares nothing with the closed forms except the angle conventions: states
are explicit 2^N amplitude vectors, local unitaries are 2x2 matrices
applied qubit by qubit, and outcome probabilities are squared overlaps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .closedform import Family, OutcomeDistribution

MAX_QUBITS = 20


@dataclass(frozen=True, eq=False)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))


def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rotor_to_unitary(rotor) -> np.ndarray:
    """Rz(alpha3) Ry(alpha1) Rz(alpha2) for a rotor (alpha1, alpha2, alpha3)."""
    a1, a2, a3 = rotor.as_tuple() if hasattr(rotor, "as_tuple") else rotor
    return rz(a3) @ ry(a1) @ rz(a2)


def _check_n(n: int):
    if n < 2:
        raise ValueError(f"need at least 2 qubits, got {n}")
    if n > MAX_QUBITS:
        raise ValueError(f"oracle limited to {MAX_QUBITS} qubits, got {n}")


def build_state(family, n: int, gamma: float = 0.0) -> StateVector:
    _check_n(n)
    psi = np.zeros(1 << n, dtype=complex)
    if Family(family) is Family.GHZ:
        psi[0] = math.cos(gamma / 2)
        psi[-1] = math.sin(gamma / 2)
    else:
        for q in range(n):
            psi[1 << (n - 1 - q)] = 1 / math.sqrt(n)
    return StateVector(n, psi)


def apply_local(psi: np.ndarray, unitary: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Apply a 2x2 unitary to one qubit (qubit 0 = most significant bit)."""
    t = psi.reshape((1 << qubit, 2, -1))
    return np.einsum("ab,ibj->iaj", unitary, t).reshape(-1)


def measured_distribution(state: StateVector, rotors, kappas) -> OutcomeDistribution:
    """Exact outcome probabilities after local rotors and detector choice.

    Outcome 0 on qubit i projects onto Ry(kappa_i)|0>, outcome 1 onto
    Ry(kappa_i)|1>.
    """
    n = state.n_qubits
    if len(rotors) != n or len(kappas) != n:
        raise ValueError(f"expected {n} rotors and kappas, got {len(rotors)} and {len(kappas)}")
    _check_n(n)
    psi = state.amplitudes
    for q in range(n):
        psi = apply_local(psi, rotor_to_unitary(rotors[q]), q, n)
    for q in range(n):
        psi = apply_local(psi, ry(kappas[q]).conj().T, q, n)
    return OutcomeDistribution(n, np.abs(psi) ** 2)


def oracle_distribution(frame) -> OutcomeDistribution:
    """Reference distribution for a :class:`MeasurementFrame`."""
    state = build_state(frame.family, frame.n_players, frame.gamma)
    return measured_distribution(state, frame.rotors, frame.kappas)
