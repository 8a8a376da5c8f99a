"""Counter-based random streams for reproducible, order-independent Monte Carlo.

Every trial owns the stream ``Philox(key=(seed, trial_index))``.  Streams for
different trials are statistically independent and can be drawn in any order
or on any worker, so aggregated integer counters do not depend on how trials
are partitioned.

Constructing a fresh ``Philox`` per trial costs ~25 us, which dominates cheap
trials.  ``TrialStream`` therefore re-keys one bit generator in place, which
produces bit-identical output to fresh construction (asserted in tests).
"""

import numpy as np

__all__ = ["trial_generator", "TrialStream"]


def trial_generator(seed: int, trial_index: int) -> np.random.Generator:
    """Fresh generator for one trial, keyed by (seed, trial_index)."""
    return np.random.Generator(np.random.Philox(key=[seed, trial_index]))


class TrialStream:
    """Reusable per-worker generator that re-keys cheaply between trials.

    After ``stream.rekey(i)`` the generator yields exactly the same values as
    ``trial_generator(seed, i)``.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._bitgen = np.random.Philox(key=[self.seed, 0])
        self.generator = np.random.Generator(self._bitgen)
        self._state = self._bitgen.state

    def rekey(self, trial_index: int) -> np.random.Generator:
        st = self._state
        st["state"]["key"][0] = self.seed
        st["state"]["key"][1] = trial_index
        st["state"]["counter"][:] = 0
        st["buffer_pos"] = 4
        self._bitgen.state = st
        return self.generator
