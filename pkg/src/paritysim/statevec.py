"""Dense state-vector simulation of small physical-qubit registers.

This is the brute-force ground truth that the symbolic parity-qubit rules are
checked against.  Qubit 0 is the least-significant bit of the basis index;
states are immutable and every operation returns a new ``StateVector``.

The parity code places a logical qubit across n physical qubits:

    logical 0  ->  uniform superposition of all even-weight basis states
    logical 1  ->  uniform superposition of all odd-weight basis states

(equivalently (|+>^n + |->^n)/sqrt(2) and (|+>^n - |->^n)/sqrt(2)), so a
computational measurement of any single qubit only lowers the encoding level,
and a bit flip of any single qubit flips the logical qubit.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    LevelTooLarge,
    NonUnitary,
    UnnormalizedState,
    ZeroProbabilityBranch,
)

__all__ = [
    "StateVector",
    "build_parity_state",
    "apply_1q",
    "measure_qubit",
    "equivalent_up_to_phase",
    "product",
    "I2",
    "X",
    "Y",
    "Z",
    "H",
    "rot_x",
    "rot_z",
    "Z90",
]

DEFAULT_QUBIT_BUDGET = 22

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def rot_x(theta_deg: float) -> np.ndarray:
    """X rotation cos(t/2) I + i sin(t/2) X, angle in degrees."""
    t = np.deg2rad(theta_deg) / 2
    return np.cos(t) * I2 + 1j * np.sin(t) * X


def rot_z(theta_deg: float) -> np.ndarray:
    """Z rotation cos(t/2) I + i sin(t/2) Z, angle in degrees."""
    t = np.deg2rad(theta_deg) / 2
    return np.cos(t) * I2 + 1j * np.sin(t) * Z


Z90 = rot_z(90.0)


@dataclass(frozen=True)
class StateVector:
    """Normalized amplitudes over 2**num_qubits basis states (qubit 0 = LSB)."""

    amps: np.ndarray
    _checked: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        object.__setattr__(self, "amps", amps)
        n = amps.size.bit_length() - 1
        if amps.size != 1 << n:
            raise DimensionMismatch(f"amplitude count {amps.size} is not a power of two")
        if not self._checked:
            nrm = np.linalg.norm(amps)
            if abs(nrm - 1.0) > 1e-10:
                raise UnnormalizedState(f"norm {nrm} deviates from 1 beyond 1e-10")

    @property
    def num_qubits(self) -> int:
        return self.amps.size.bit_length() - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def probability(self, basis_index: int) -> float:
        return float(abs(self.amps[basis_index]) ** 2)


def _check_qubit(state: StateVector, qubit: int) -> None:
    if not 0 <= qubit < state.num_qubits:
        raise IndexOutOfRange(f"qubit {qubit} outside 0..{state.num_qubits - 1}")


def build_parity_state(
    n: int, alpha: complex, beta: complex, max_qubits: int = DEFAULT_QUBIT_BUDGET
) -> StateVector:
    """alpha * (logical 0) + beta * (logical 1) expanded over n physical qubits."""
    if n < 1:
        raise ValueError(f"encoding level must be >= 1, got {n}")
    if n > max_qubits:
        raise LevelTooLarge(f"level {n} exceeds the {max_qubits}-qubit budget")
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-10:
        raise UnnormalizedState("|alpha|^2 + |beta|^2 must be 1")
    idx = np.arange(1 << n)
    parity = np.zeros(1 << n, dtype=bool)
    for b in range(n):
        parity ^= (idx >> b & 1).astype(bool)
    scale = 2.0 ** ((1 - n) / 2)
    amps = np.where(parity, beta * scale, alpha * scale).astype(complex)
    return StateVector(amps, _checked=True)


def apply_1q(state: StateVector, qubit: int, u: np.ndarray) -> StateVector:
    """Apply a single-qubit unitary to one physical qubit."""
    _check_qubit(state, qubit)
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or np.max(np.abs(u.conj().T @ u - I2)) > 1e-12:
        raise NonUnitary("matrix is not unitary within 1e-12")
    n = state.num_qubits
    t = state.amps.reshape([2] * n)
    axis = n - 1 - qubit
    t = np.moveaxis(np.tensordot(u, t, axes=([1], [axis])), 0, axis)
    return StateVector(t.reshape(-1), _checked=True)


def measure_qubit(state: StateVector, qubit: int, outcome: int) -> tuple[float, StateVector]:
    """Project one qubit onto |outcome>, remove it, renormalize.

    Returns (outcome probability, post-state on the remaining qubits).
    """
    _check_qubit(state, qubit)
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome}")
    n = state.num_qubits
    t = state.amps.reshape([2] * n)
    branch = np.take(t, outcome, axis=n - 1 - qubit).reshape(-1)
    prob = float(np.sum(np.abs(branch) ** 2))
    if prob < 1e-14:
        raise ZeroProbabilityBranch(f"outcome {outcome} on qubit {qubit} has probability {prob}")
    return prob, StateVector(branch / np.sqrt(prob), _checked=True)


def equivalent_up_to_phase(s1: StateVector, s2: StateVector, tol: float = 1e-10) -> bool:
    """True iff s2 = exp(i phi) s1 for some real phi, within tol."""
    if s1.num_qubits != s2.num_qubits:
        raise DimensionMismatch(f"{s1.num_qubits} vs {s2.num_qubits} qubits")
    ov = np.vdot(s1.amps, s2.amps)
    if abs(ov) < tol:
        return False
    phase = ov / abs(ov)
    return float(np.linalg.norm(s2.amps - phase * s1.amps)) < tol


def product(first: StateVector, second: StateVector) -> StateVector:
    """Tensor product with `first` occupying the low qubit indices."""
    return StateVector(np.kron(second.amps, first.amps), _checked=True)
