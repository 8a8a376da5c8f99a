"""Symbolic state machine for parity-encoded logical qubits.

A logical qubit is two complex amplitudes plus an encoding level n (number of
physical qubits).  All transitions below follow from applying the fusion-gate
measurement operators to the expanded parity states and absorbing the
detector-dependent Pauli corrections, so the tracked amplitudes stay exact
through every branch; the dense-oracle suite re-derives each rule from the
state vector.

Branch probabilities of every fusion on parity-encoded inputs are independent
of the logical amplitudes: the eight type-II patterns are uniform (1/8 each),
the five type-I patterns carry (1/4, 1/4, 1/8, 1/8, 1/4).

Corrections are applied internally and recorded by label:

    X_logical       bit flip of the encoded qubit (X on any one physical qubit)
    Z_logical       sign flip (Z on every physical qubit)
    X_remnant       bit flip restoring a leftover resource to even parity
    Z_appended      Z on every qubit of the freshly appended block
    Z_link          Z on the surviving fusion-output qubit
    X_both          bit flip of both members of a logical pair
"""

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import LevelTooLow, SizeTooSmall
from .fusion import DetectorPattern, elements_for, GateType

__all__ = [
    "LogicalParityQubit",
    "LogicalPair",
    "ResourceState",
    "ProtocolStatus",
    "AttemptOutcome",
    "TraceEvent",
    "ProtocolTrace",
    "RngSampler",
    "ScriptedSampler",
    "measure_physical",
    "destroy_by_measurement",
    "logical_z",
    "logical_xtheta",
    "encode_step",
    "pair_encode_step",
    "pair_measure_physical",
    "join_fi",
    "join_fii",
    "z90_protocol",
    "cnot_protocol",
    "one_shot_resource_size",
    "Z90_PHASE",
    "FI_PATTERN_PROBS",
]

# exp(+-i pi/4) amplitude factors of the 90-degree Z rotation (I + iZ)/sqrt2
Z90_PHASE = complex(np.exp(1j * np.pi / 4))

FI_PATTERN_PROBS = (0.25, 0.25, 0.125, 0.125, 0.25)
_FI_CUM = (0.25, 0.5, 0.625, 0.75, 1.0)

_FII_PATTERNS = tuple(el.pattern for el in elements_for(GateType.TYPE_II))
_FI_PATTERNS = tuple(el.pattern for el in elements_for(GateType.TYPE_I))


class RngSampler:
    """Draws fusion patterns and measurement bits from a random generator."""

    __slots__ = ("rng",)

    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def choose(self, n: int, cum: tuple[float, ...] | None = None) -> int:
        if cum is None:
            return int(self.rng.integers(n))
        u = self.rng.random()
        for i, c in enumerate(cum):
            if u < c:
                return i
        return n - 1

    def bit(self, p_one: float = 0.5) -> int:
        return 1 if self.rng.random() < p_one else 0


class ScriptedSampler:
    """Replays a fixed list of choices; used to walk every outcome branch."""

    __slots__ = ("script", "pos")

    def __init__(self, script):
        self.script = list(script)
        self.pos = 0

    def choose(self, n: int, cum: tuple[float, ...] | None = None) -> int:
        v = self.script[self.pos]
        self.pos += 1
        if not 0 <= v < n:
            raise ValueError(f"scripted choice {v} out of range 0..{n - 1}")
        return v

    def bit(self, p_one: float = 0.5) -> int:
        return self.choose(2)

    @property
    def exhausted(self) -> bool:
        return self.pos >= len(self.script)


@dataclass(frozen=True)
class LogicalParityQubit:
    """alpha * (logical 0) + beta * (logical 1) across `level` physical qubits."""

    alpha: complex
    beta: complex
    level: int

    def __post_init__(self):
        if self.level < 1:
            raise LevelTooLow(f"encoding level must be >= 1, got {self.level}")
        if abs(abs(self.alpha) ** 2 + abs(self.beta) ** 2 - 1.0) > 1e-10:
            raise ValueError("|alpha|^2 + |beta|^2 must be 1 within 1e-10")


@dataclass(frozen=True)
class ResourceState:
    """An even-parity resource state across `size` physical qubits (size 2 = Bell)."""

    size: int

    def __post_init__(self):
        if self.size < 2:
            raise SizeTooSmall(f"resource size must be >= 2, got {self.size}")


@dataclass(frozen=True)
class LogicalPair:
    """Two logical qubits with joint amplitudes over the basis 00, 01, 10, 11."""

    amps: tuple[complex, complex, complex, complex]
    level_a: int
    level_b: int

    def __post_init__(self):
        if self.level_a < 1 or self.level_b < 1:
            raise LevelTooLow("pair levels must be >= 1")
        if abs(sum(abs(a) ** 2 for a in self.amps) - 1.0) > 1e-10:
            raise ValueError("pair amplitudes must be normalized within 1e-10")


class ProtocolStatus(enum.Enum):
    SUCCESS = "success"
    LOGICAL_LOSS = "logical_loss"


class AttemptOutcome(enum.Enum):
    SUCCESS = "success"
    FI_FAILURE = "fi_failure"
    FII_FAILURE = "fii_failure"
    LOGICAL_LOSS = "logical_loss"


@dataclass(slots=True)
class TraceEvent:
    kind: str
    pattern: str = ""
    corrections: tuple[str, ...] = ()
    consumed: int = 0
    returned: int = 0
    bits: tuple[int, ...] = ()
    phase: float = 0.0


@dataclass
class ProtocolTrace:
    events: list[TraceEvent] = field(default_factory=list)
    status: ProtocolStatus | None = None

    def add(self, event: TraceEvent) -> None:
        self.events.append(event)

    def total_consumed(self) -> int:
        return sum(e.consumed for e in self.events)

    def total_returned(self) -> int:
        return sum(e.returned for e in self.events)

    def consumed_sizes(self) -> tuple[int, ...]:
        return tuple(e.consumed for e in self.events if e.consumed)

    def remnant_sizes(self) -> tuple[int, ...]:
        return tuple(e.returned for e in self.events if e.returned)


# ---------------------------------------------------------------------------
# deterministic single-qubit transitions
# ---------------------------------------------------------------------------


def measure_physical(q: LogicalParityQubit, outcome: int) -> LogicalParityQubit:
    """Computational measurement of one physical qubit (outcome given).

    Lowers the level by one; an outcome of 1 flips the logical qubit and is
    undone by the mandated X correction, so the amplitudes never change.
    Either outcome has probability exactly 1/2 for level >= 2.
    """
    if q.level < 2:
        raise LevelTooLow("measuring the last physical qubit destroys the logical qubit")
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome}")
    return LogicalParityQubit(q.alpha, q.beta, q.level - 1)


def destroy_by_measurement(q: LogicalParityQubit) -> tuple[float, float]:
    """Measure the last physical qubit of a level-1 logical qubit.

    Returns the classical outcome distribution (P(0), P(1)).
    """
    if q.level != 1:
        raise ValueError("destroy_by_measurement applies only at level 1")
    return abs(q.alpha) ** 2, abs(q.beta) ** 2


def logical_z(q: LogicalParityQubit) -> LogicalParityQubit:
    """Deterministic logical Z: physical Z on every qubit."""
    return LogicalParityQubit(q.alpha, -q.beta, q.level)


def logical_xtheta(q: LogicalParityQubit, theta_deg: float) -> LogicalParityQubit:
    """Deterministic logical X rotation: cos(t/2) I + i sin(t/2) X on any one qubit."""
    t = np.deg2rad(theta_deg) / 2
    c, s = np.cos(t), 1j * np.sin(t)
    return LogicalParityQubit(c * q.alpha + s * q.beta, s * q.alpha + c * q.beta, q.level)


# ---------------------------------------------------------------------------
# fusion-driven transitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EncodeStepResult:
    success: bool
    lost: bool
    qubit: LogicalParityQubit | None
    leftover: ResourceState | None
    pattern: DetectorPattern
    corrections: tuple[str, ...]


def encode_step(
    q: LogicalParityQubit, r: ResourceState, sampler: RngSampler
) -> EncodeStepResult:
    """Fuse one physical qubit of `q` with one qubit of `r` (type-II fusion).

    Success (probability 1/2) raises the level by r.size - 2.  Failure lowers
    it by one and leaves an even-parity remnant of size r.size - 1 that can be
    recycled; failing at level 1 destroys the logical qubit.
    """
    k = sampler.choose(8)
    pattern = _FII_PATTERNS[k]
    if k < 4:
        corr = ("Z_appended",) if k >= 2 else ()
        new = LogicalParityQubit(q.alpha, q.beta, q.level + r.size - 2)
        return EncodeStepResult(True, False, new, None, pattern, corr)
    leftover = ResourceState(r.size - 1) if r.size - 1 >= 2 else None
    corr = ("X_remnant",) if k < 6 else ("X_logical",)
    if q.level == 1:
        return EncodeStepResult(False, True, None, leftover, pattern, corr)
    new = LogicalParityQubit(q.alpha, q.beta, q.level - 1)
    return EncodeStepResult(False, False, new, leftover, pattern, corr)


@dataclass(frozen=True)
class JoinResult:
    success: bool
    merged: ResourceState | None
    remnant_a: ResourceState | None
    remnant_b: ResourceState | None
    pattern: DetectorPattern
    corrections: tuple[str, ...]


def join_fi(a: ResourceState, b: ResourceState, sampler: RngSampler) -> JoinResult:
    """Hadamard-conjugated type-I fusion of two resource states.

    Success (probability 1/2) yields size a + b - 1.  Failure projects every
    remaining qubit onto a product state: both inputs are destroyed.
    """
    k = sampler.choose(5, _FI_CUM)
    pattern = _FI_PATTERNS[k]
    if k < 2:
        corr = ("X_logical",) if k == 1 else ()
        return JoinResult(True, ResourceState(a.size + b.size - 1), None, None, pattern, corr)
    return JoinResult(False, None, None, None, pattern, ())


def join_fii(a: ResourceState, b: ResourceState, sampler: RngSampler) -> JoinResult:
    """Type-II fusion of two resource states.

    Success (probability 1/2) yields size a + b - 2.  Failure keeps both
    inputs, each reduced by one qubit; size-1 remnants are discarded as bare
    qubits.
    """
    k = sampler.choose(8)
    pattern = _FII_PATTERNS[k]
    if k < 4:
        corr = ("Z_appended",) if k >= 2 else ()
        return JoinResult(True, ResourceState(a.size + b.size - 2), None, None, pattern, corr)
    ra = ResourceState(a.size - 1) if a.size - 1 >= 2 else None
    rb = ResourceState(b.size - 1) if b.size - 1 >= 2 else None
    corr = ("X_remnant_b",) if k < 6 else ("X_remnant_a",)
    return JoinResult(False, None, ra, rb, pattern, corr)


# ---------------------------------------------------------------------------
# pair transitions (needed by the two-qubit gate strategies)
# ---------------------------------------------------------------------------


def pair_measure_physical(pair: LogicalPair, side: str, outcome: int) -> LogicalPair:
    """Computational measurement of one physical qubit of one pair member."""
    lvl = pair.level_a if side == "a" else pair.level_b
    if lvl < 2:
        raise LevelTooLow("measuring the last physical qubit destroys the logical qubit")
    if side == "a":
        return LogicalPair(pair.amps, pair.level_a - 1, pair.level_b)
    return LogicalPair(pair.amps, pair.level_a, pair.level_b - 1)


@dataclass(frozen=True)
class PairEncodeResult:
    success: bool
    lost: bool
    pair: LogicalPair | None
    leftover: ResourceState | None
    pattern: DetectorPattern
    corrections: tuple[str, ...]


def pair_encode_step(
    pair: LogicalPair, side: str, r: ResourceState, sampler: RngSampler
) -> PairEncodeResult:
    """encode_step acting on one member of a logical pair."""
    k = sampler.choose(8)
    pattern = _FII_PATTERNS[k]
    la, lb = pair.level_a, pair.level_b
    if k < 4:
        corr = ("Z_appended",) if k >= 2 else ()
        if side == "a":
            new = LogicalPair(pair.amps, la + r.size - 2, lb)
        else:
            new = LogicalPair(pair.amps, la, lb + r.size - 2)
        return PairEncodeResult(True, False, new, None, pattern, corr)
    leftover = ResourceState(r.size - 1) if r.size - 1 >= 2 else None
    corr = ("X_remnant",) if k < 6 else (f"X_logical_{side}",)
    lvl = la if side == "a" else lb
    if lvl == 1:
        return PairEncodeResult(False, True, None, leftover, pattern, corr)
    if side == "a":
        new = LogicalPair(pair.amps, la - 1, lb)
    else:
        new = LogicalPair(pair.amps, la, lb - 1)
    return PairEncodeResult(False, False, new, leftover, pattern, corr)


# ---------------------------------------------------------------------------
# Z90 protocol
# ---------------------------------------------------------------------------


def one_shot_resource_size(target_level: int, current_level: int) -> int:
    """Resource size restoring the full target level in a single fusion.

    The pre-existing qubits are measured out on success, so the final level
    equals resource size - 1 regardless of the current level.
    """
    return target_level + 1


@dataclass(frozen=True)
class Z90Result:
    status: ProtocolStatus
    qubit: LogicalParityQubit | None
    attempts: int
    consumed_sizes: tuple[int, ...]
    remnant_sizes: tuple[int, ...]
    phase: float
    trace: ProtocolTrace | None


def z90_protocol(
    q: LogicalParityQubit,
    target_level: int | None = None,
    *,
    sampler: RngSampler,
    resource_size_rule: Callable[[int, int], int] | None = None,
    on_consume: Callable[[int], None] | None = None,
    on_remnant: Callable[[int], None] | None = None,
    record_trace: bool = True,
) -> Z90Result:
    """Non-deterministic 90-degree logical Z rotation.

    Each attempt rotates one physical qubit, fuses it with a fresh resource
    (type II) and, on success, measures the surviving pre-existing qubits,
    applying a bit flip plus a sign flip when their parity is odd.  A failed
    fusion leaves the rotation as a global phase and costs one encoding level;
    the qubit is lost after `level` consecutive failures.  Success probability
    is 1 - (1/2)**level.
    """
    target = q.level if target_level is None else target_level
    rule = resource_size_rule or one_shot_resource_size
    trace = ProtocolTrace() if record_trace else None
    level = q.level
    attempts = 0
    consumed: list[int] = []
    remnants: list[int] = []
    phase = 0.0
    while level >= 1:
        size = rule(target, level)
        attempts += 1
        consumed.append(size)
        if on_consume is not None:
            on_consume(size)
        k = sampler.choose(8)
        pattern = _FII_PATTERNS[k]
        if k < 4:
            corr = ["Z_appended"] if k >= 2 else []
            bits = tuple(sampler.bit() for _ in range(level - 1))
            if sum(bits) % 2 == 1:
                corr += ["X_logical", "Z_logical"]
            qubit = LogicalParityQubit(
                q.alpha * Z90_PHASE, q.beta * np.conj(Z90_PHASE), size - 1
            )
            if trace is not None:
                trace.add(
                    TraceEvent(
                        "z90_attempt",
                        pattern=pattern.name,
                        corrections=tuple(corr),
                        consumed=size,
                        bits=bits,
                        phase=phase,
                    )
                )
                trace.status = ProtocolStatus.SUCCESS
            return Z90Result(
                ProtocolStatus.SUCCESS,
                qubit,
                attempts,
                tuple(consumed),
                tuple(remnants),
                phase,
                trace,
            )
        # failure: rotation becomes a global phase, one level is lost,
        # and the resource survives reduced by one qubit
        d_phase = np.pi / 4 if k < 6 else -np.pi / 4
        corr = ("X_remnant",) if k < 6 else ("X_logical",)
        phase += d_phase
        remnant = size - 1
        if remnant >= 2:
            remnants.append(remnant)
            if on_remnant is not None:
                on_remnant(remnant)
        if trace is not None:
            trace.add(
                TraceEvent(
                    "z90_attempt",
                    pattern=pattern.name,
                    corrections=corr,
                    consumed=size,
                    returned=remnant if remnant >= 2 else 0,
                    phase=d_phase,
                )
            )
        level -= 1
    if trace is not None:
        trace.status = ProtocolStatus.LOGICAL_LOSS
    return Z90Result(
        ProtocolStatus.LOGICAL_LOSS,
        None,
        attempts,
        tuple(consumed),
        tuple(remnants),
        phase,
        trace,
    )


# ---------------------------------------------------------------------------
# CNOT protocol (single attempt)
# ---------------------------------------------------------------------------


def _cnot_amps(amps) -> tuple[complex, complex, complex, complex]:
    a00, a01, a10, a11 = amps
    return (a00, a01, a11, a10)


def _swap_roles(pair: LogicalPair) -> LogicalPair:
    a00, a01, a10, a11 = pair.amps
    return LogicalPair((a00, a10, a01, a11), pair.level_b, pair.level_a)


@dataclass(frozen=True)
class CnotAttempt:
    outcome: AttemptOutcome
    pair: LogicalPair | None
    leftover: ResourceState | None
    parity_bits: tuple[int, ...]
    corrections: tuple[str, ...]
    trace: ProtocolTrace | None


def cnot_protocol(
    pair: LogicalPair,
    gate_resource: ResourceState,
    *,
    sampler: RngSampler,
    measure_lower: bool = False,
    record_trace: bool = True,
) -> CnotAttempt:
    """One CNOT attempt through a resource of size m + 1.

    A type-I fusion links one control qubit to the resource; a type-II fusion
    then consumes the link qubit together with one target qubit.  When both
    succeed, the remaining original control qubits are measured and a bit flip
    of both members is applied on odd parity, leaving CNOT applied with the
    control re-encoded across m qubits and the target one level lower.

    A type-I failure costs the control one level; a type-II failure costs both
    sides one level.  Either failure leaves a size-m remnant of the resource.
    The gate is symmetric: `measure_lower` swaps the two roles.
    """
    if gate_resource.size < 3:
        raise SizeTooSmall("the gate resource must have size >= 3")
    p = _swap_roles(pair) if measure_lower else pair
    trace = ProtocolTrace() if record_trace else None
    m = gate_resource.size - 1

    def done(outcome, out_pair, leftover, bits=(), corr=()):
        if out_pair is not None and measure_lower:
            out_pair = _swap_roles(out_pair)
        if trace is not None:
            trace.status = (
                ProtocolStatus.SUCCESS
                if outcome is AttemptOutcome.SUCCESS
                else ProtocolStatus.LOGICAL_LOSS
                if outcome is AttemptOutcome.LOGICAL_LOSS
                else None
            )
        return CnotAttempt(outcome, out_pair, leftover, bits, corr, trace)

    k1 = sampler.choose(5, _FI_CUM)
    pat1 = _FI_PATTERNS[k1]
    if trace is not None:
        trace.add(TraceEvent("cnot_fi", pattern=pat1.name, consumed=gate_resource.size))
    if k1 >= 2:
        # type-I failure: both fused qubits measured computationally
        corr = ("X_remnant",) if k1 < 4 else ("X_logical_a",)
        leftover = ResourceState(m) if m >= 2 else None
        if p.level_a == 1:
            return done(AttemptOutcome.LOGICAL_LOSS, None, leftover, corr=corr)
        out = LogicalPair(p.amps, p.level_a - 1, p.level_b)
        return done(AttemptOutcome.FI_FAILURE, out, leftover, corr=corr)
    corrections = ["Z_link"] if k1 == 1 else []
    k2 = sampler.choose(8)
    pat2 = _FII_PATTERNS[k2]
    if trace is not None:
        trace.add(TraceEvent("cnot_fii", pattern=pat2.name))
    if k2 >= 4:
        # type-II failure: link and target qubit measured; resource detaches
        corr = tuple(corrections) + (
            ("X_logical_b",) if k2 < 6 else ("X_logical_a", "X_remnant")
        )
        leftover = ResourceState(m) if m >= 2 else None
        if p.level_a == 1 or p.level_b == 1:
            return done(AttemptOutcome.LOGICAL_LOSS, None, leftover, corr=corr)
        out = LogicalPair(p.amps, p.level_a - 1, p.level_b - 1)
        return done(AttemptOutcome.FII_FAILURE, out, leftover, corr=corr)
    if k2 >= 2:
        corrections.append("Z_appended")
    if p.level_b == 1:
        # the fusion consumed the target's last qubit: pair structure destroyed
        return done(AttemptOutcome.LOGICAL_LOSS, None, None)
    bits = tuple(sampler.bit() for _ in range(p.level_a - 1))
    if trace is not None:
        trace.add(TraceEvent("cnot_parity", bits=bits))
    if sum(bits) % 2 == 1:
        corrections.append("X_both")
    out = LogicalPair(_cnot_amps(p.amps), m, p.level_b - 1)
    return done(AttemptOutcome.SUCCESS, out, None, bits, tuple(corrections))
