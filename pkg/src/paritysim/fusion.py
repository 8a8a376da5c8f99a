"""Type-I and type-II fusion gates as complete measurement-operator sets.

Each gate is a POVM over detector click patterns.  An element maps the two
fused qubits to zero surviving qubits (type II, and type-I failures) or to one
surviving qubit (type-I success).  Scalings are chosen so that the elements
sum to the identity on the two-qubit input space:

    type II:  success (<00| +- <11|)/2 on four patterns,
              failure <01|/sqrt2, <10|/sqrt2 on four patterns;
    type I:   success (|0><00| +- |1><11|)/sqrt2 on two patterns,
              failure <01|/sqrt2 twice and <10| once.

The ``correction`` label on an element is the Pauli frame update owed to the
surviving *encoded* side at the logical level: Z for the minus-sign success
outcomes, X where the encoded-side qubit was measured as 1.  Corrections are
never applied here; the caller owns the Pauli frame.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, UnnormalizedState
from .statevec import StateVector

__all__ = [
    "GateType",
    "OutcomeClass",
    "DetectorPattern",
    "KrausElement",
    "FusionOutcome",
    "fii_elements",
    "fi_elements",
    "elements_for",
    "apply_element",
    "enumerate_outcomes",
    "apply_fusion",
]

_SQRT2 = float(np.sqrt(2.0))


class GateType(enum.Enum):
    TYPE_I = "fI"
    TYPE_II = "fII"


class OutcomeClass(enum.Enum):
    SUCCESS = "success"
    FAILURE = "failure"


@dataclass(frozen=True)
class DetectorPattern:
    """Photon counts per detector, e.g. (1, 0, 1, 0) printed as d_1010."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise ValueError("photon counts must be non-negative")
        if sum(self.counts) > 2:
            raise ValueError("a fusion gate sees at most two photons")

    @property
    def name(self) -> str:
        return "d_" + "".join(str(c) for c in self.counts)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class KrausElement:
    """One measurement operator of a fusion gate.

    ``matrix`` has four columns indexed by the fused pair's basis (b_first,
    b_second) -> 2*b_first + b_second, and one row per surviving basis state
    (a single row for operators that consume both qubits).
    """

    pattern: DetectorPattern
    matrix: np.ndarray
    outcome_class: OutcomeClass
    correction: str  # "I", "X" or "Z"

    @property
    def output_qubits(self) -> int:
        return self.matrix.shape[0].bit_length() - 1


@dataclass(frozen=True)
class FusionOutcome:
    pattern: DetectorPattern
    outcome_class: OutcomeClass
    probability: float
    correction: str


def _pattern(bits: str) -> DetectorPattern:
    return DetectorPattern(tuple(int(c) for c in bits))


def fii_elements() -> list[KrausElement]:
    """The eight type-II elements: four successes, four failures."""
    plus = np.array([[1, 0, 0, 1]], dtype=complex) / 2
    minus = np.array([[1, 0, 0, -1]], dtype=complex) / 2
    bra01 = np.array([[0, 1, 0, 0]], dtype=complex) / _SQRT2
    bra10 = np.array([[0, 0, 1, 0]], dtype=complex) / _SQRT2
    s, f = OutcomeClass.SUCCESS, OutcomeClass.FAILURE
    return [
        KrausElement(_pattern("1010"), plus, s, "I"),
        KrausElement(_pattern("0101"), plus, s, "I"),
        KrausElement(_pattern("1001"), minus, s, "Z"),
        KrausElement(_pattern("0110"), minus, s, "Z"),
        KrausElement(_pattern("2000"), bra01, f, "I"),
        KrausElement(_pattern("0200"), bra01, f, "I"),
        KrausElement(_pattern("0020"), bra10, f, "X"),
        KrausElement(_pattern("0002"), bra10, f, "X"),
    ]


def fi_elements() -> list[KrausElement]:
    """The five type-I elements: two successes, three failures.

    Both success operators are isometries on span{|00>, |11>}; the second
    carries a Z on the surviving qubit.
    """
    keep_plus = np.array([[1, 0, 0, 0], [0, 0, 0, 1]], dtype=complex) / _SQRT2
    keep_minus = np.array([[1, 0, 0, 0], [0, 0, 0, -1]], dtype=complex) / _SQRT2
    bra01 = np.array([[0, 1, 0, 0]], dtype=complex) / _SQRT2
    bra10 = np.array([[0, 0, 1, 0]], dtype=complex)
    s, f = OutcomeClass.SUCCESS, OutcomeClass.FAILURE
    return [
        KrausElement(_pattern("10"), keep_plus, s, "I"),
        KrausElement(_pattern("01"), keep_minus, s, "Z"),
        KrausElement(_pattern("20"), bra01, f, "I"),
        KrausElement(_pattern("02"), bra01, f, "I"),
        KrausElement(_pattern("00"), bra10, f, "X"),
    ]


_ELEMENTS = {GateType.TYPE_I: fi_elements(), GateType.TYPE_II: fii_elements()}


def elements_for(gate: GateType) -> list[KrausElement]:
    return _ELEMENTS[gate]


def _check_pair(state: StateVector, pair: tuple[int, int]) -> None:
    q1, q2 = pair
    n = state.num_qubits
    if q1 == q2:
        raise IndexOutOfRange(f"fused qubits must be distinct, got ({q1}, {q2})")
    for q in pair:
        if not 0 <= q < n:
            raise IndexOutOfRange(f"qubit {q} outside 0..{n - 1}")


def apply_element(
    state: StateVector, element: KrausElement, pair: tuple[int, int]
) -> tuple[float, StateVector | None]:
    """Apply one element to the fused pair: (probability, renormalized post-state).

    The fused qubits are removed and remaining indices compacted; a type-I
    success inserts its surviving qubit at index min(pair).  Returns
    (0.0, None) when the branch has zero amplitude.
    """
    _check_pair(state, pair)
    q1, q2 = pair
    n = state.num_qubits
    t = state.amps.reshape([2] * n)
    a1, a2 = n - 1 - q1, n - 1 - q2
    t = np.moveaxis(t, (a1, a2), (0, 1)).reshape(4, -1)
    out = element.matrix @ t  # (2**k_out, rest)
    k_out = element.output_qubits
    prob = float(np.sum(np.abs(out) ** 2))
    if prob < 1e-28:
        return 0.0, None
    rest_qubits = [q for q in range(n) if q not in pair]
    if k_out == 0:
        post = out.reshape(-1)
    else:
        # surviving qubit takes index min(pair) in the compacted register
        new_index = min(pair)
        m = n - 1  # qubits after fusion
        target_axis = m - 1 - sum(1 for q in rest_qubits if q < new_index)
        post = np.moveaxis(out.reshape([2] * m), 0, target_axis).reshape(-1)
    return prob, StateVector(post / np.sqrt(prob), _checked=True)


def enumerate_outcomes(
    state: StateVector, gate: GateType, pair: tuple[int, int]
) -> list[tuple[DetectorPattern, float, StateVector | None]]:
    """Every detector pattern with its exact probability and post-state."""
    _check_pair(state, pair)
    if abs(state.norm() - 1.0) > 1e-10:
        raise UnnormalizedState("input state must be normalized within 1e-10")
    return [
        (el.pattern, *apply_element(state, el, pair)) for el in elements_for(gate)
    ]


def apply_fusion(
    state: StateVector,
    gate: GateType,
    pair: tuple[int, int],
    rng: np.random.Generator,
) -> tuple[FusionOutcome, StateVector]:
    """Sample a detector pattern with Born probability and return the post-state.

    The outcome carries the element's Pauli correction label; it is not
    applied.
    """
    elements = elements_for(gate)
    results = enumerate_outcomes(state, gate, pair)
    probs = np.array([p for _, p, _ in results])
    k = int(rng.choice(len(elements), p=probs / probs.sum()))
    el = elements[k]
    _, post = results[k]
    return FusionOutcome(el.pattern, el.outcome_class, float(probs[k]), el.correction), post
