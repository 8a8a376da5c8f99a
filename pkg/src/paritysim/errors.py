"""Exception types raised across the package."""


class IndexOutOfRange(IndexError):
    """A physical-qubit index is outside the register, or a pair repeats an index."""


class UnnormalizedState(ValueError):
    """A state vector deviates from unit norm beyond tolerance."""


class NonUnitary(ValueError):
    """A supplied 2x2 matrix is not unitary within tolerance."""


class DimensionMismatch(ValueError):
    """Two state vectors live on different numbers of qubits."""


class ZeroProbabilityBranch(ValueError):
    """A projective measurement was forced onto an outcome of (near-)zero probability."""


class LevelTooLow(ValueError):
    """The operation would consume the last physical qubit of a logical qubit."""


class LevelTooLarge(ValueError):
    """An encoding level exceeds the dense-simulation qubit budget."""


class SizeTooSmall(ValueError):
    """A resource-state size below the two-qubit (Bell state) minimum."""


class InvalidStrategy(ValueError):
    """A strategy description that cannot produce the requested resource."""


class ZeroTrials(ValueError):
    """A Monte Carlo run was requested with no trials."""


class EmptySpace(ValueError):
    """A strategy search over an empty candidate space."""
