"""Exact and Monte-Carlo resource accounting for parity-code protocols.

Costs are counted in Bell states (the size-2 resource is the unit).  The
exact layer is a dynamic program over type-I fusion trees; the Monte-Carlo
layer simulates resource construction, the Z90 protocol and the CNOT strategy
trial by trial with a counter-based stream per trial, aggregating integer
counters so results are independent of how trials are partitioned over
workers.

Recycling keeps a size-indexed pool of failure remnants, consumed before new
construction and persisting within a single trial only.  Every consumed
resource is charged at the cost of its own construction: the exact tree cost
when recycling is off, the simulated fresh-Bell draw count (pool included)
when it is on.
"""

import functools
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptySpace, InvalidStrategy, SizeTooSmall, ZeroTrials
from .parity import (
    AttemptOutcome,
    LogicalPair,
    LogicalParityQubit,
    ProtocolStatus,
    ResourceState,
    RngSampler,
    cnot_protocol,
    pair_encode_step,
    z90_protocol,
)
from .rng import TrialStream

__all__ = [
    "dp_min_cost",
    "fusion_tree",
    "tree_cost",
    "tree_size",
    "tree_depth",
    "enumerate_fi_trees",
    "recycling_min_cost",
    "recycling_split",
    "z90_success_prob",
    "cnot_success_prob_asymptotic",
    "z90_expected_cost_one_shot",
    "Z90Strategy",
    "CnotStrategy",
    "StrategySpec",
    "CostLedger",
    "SummaryStats",
    "CnotSummary",
    "mc_build_resource",
    "mc_z90",
    "mc_cnot",
    "strategy_search",
]


# ---------------------------------------------------------------------------
# exact layer: fusion-tree dynamic program and closed forms
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def dp_min_cost(m: int) -> int:
    """Minimum expected Bell-state cost of building a size-m resource.

    Type-I joins of sizes (a, b) give size a + b - 1 and succeed with
    probability 1/2, destroying both inputs on failure, so an attempt costs
    2 (C(a) + C(b)) in expectation and C(2) = 1.
    """
    if m < 2:
        raise SizeTooSmall(f"resource size must be >= 2, got {m}")
    if m == 2:
        return 1
    return min(2 * (dp_min_cost(a) + dp_min_cost(m + 1 - a)) for a in range(2, (m + 1) // 2 + 1))


def tree_cost(tree) -> int:
    """Expected Bell-state cost of one explicit type-I fusion tree."""
    if tree == 2:
        return 1
    left, right = tree
    return 2 * (tree_cost(left) + tree_cost(right))


def tree_size(tree) -> int:
    if tree == 2:
        return 2
    left, right = tree
    return tree_size(left) + tree_size(right) - 1


def tree_depth(tree) -> int:
    if tree == 2:
        return 1
    left, right = tree
    return 1 + max(tree_depth(left), tree_depth(right))


@functools.lru_cache(maxsize=None)
def fusion_tree(m: int):
    """A cost-optimal type-I fusion tree for size m (ties broken by depth).

    Leaves are the literal 2 (a Bell state); internal nodes are (left, right).
    """
    if m < 2:
        raise SizeTooSmall(f"resource size must be >= 2, got {m}")
    if m == 2:
        return 2
    best = None
    for a in range(2, (m + 1) // 2 + 1):
        cand = (fusion_tree(a), fusion_tree(m + 1 - a))
        key = (tree_cost(cand), tree_depth(cand))
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


@functools.lru_cache(maxsize=None)
def enumerate_fi_trees(m: int) -> tuple:
    """Every distinct type-I fusion tree building size m (unordered children)."""
    if m == 2:
        return (2,)
    out = []
    for a in range(2, (m + 1) // 2 + 1):
        b = m + 1 - a
        for left, right in itertools.product(enumerate_fi_trees(a), enumerate_fi_trees(b)):
            out.append((left, right))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def recycling_min_cost(m: int) -> int:
    """Minimum expected Bell cost of a size-m resource with remnant recycling.

    Extends the fusion-tree program with type-II joins (a + b - 2 = m) whose
    failures keep both inputs reduced by one qubit; remnants are credited at
    their own construction cost, so an attempt expects
    2 (R(a) + R(b)) - R(a-1) - R(b-1).  Recycling is used where advantageous:
    below size 7 the plain type-I tree wins.
    """
    if m < 2:
        raise SizeTooSmall(f"resource size must be >= 2, got {m}")
    return _recycling_best(m)[0]


@functools.lru_cache(maxsize=None)
def recycling_split(m: int) -> tuple[int, int, str]:
    """Optimal (a, b, join_type) split of the recycling program for size m."""
    if m < 3:
        raise SizeTooSmall(f"no split below size 3, got {m}")
    return _recycling_best(m)[1]


@functools.lru_cache(maxsize=None)
def _recycling_best(m: int):
    if m == 2:
        return 1, None
    rc = lambda k: _recycling_best(k)[0] if k >= 2 else 0
    cands = []
    for a in range(2, (m + 1) // 2 + 1):
        b = m + 1 - a
        if b <= m - 1:
            cands.append((2 * (rc(a) + rc(b)), (a, b, "fi")))
    for a in range(2, (m + 2) // 2 + 1):
        b = m + 2 - a
        if b <= m - 1:
            cands.append((2 * (rc(a) + rc(b)) - rc(a - 1) - rc(b - 1), (a, b, "fii")))
    return min(cands)


def z90_success_prob(n: int) -> float:
    """Success probability 1 - (1/2)**n of the Z90 protocol at level n."""
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    return 1.0 - 0.5**n


def cnot_success_prob_asymptotic(n: int) -> float:
    """Boundary-free CNOT success probability 1 - (3/4)**n at level n."""
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    return 1.0 - 0.75**n


def z90_expected_cost_one_shot(n: int) -> float:
    """Expected Bell cost of a successful one-shot Z90 at level n.

    Each attempt consumes one size-(n+1) resource; conditioning the geometric
    attempt count on success within n tries gives
    C(n+1) * sum_k k 2^-k / (1 - 2^-n).
    """
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    expected_attempts = sum(k * 2.0**-k for k in range(1, n + 1)) / (1.0 - 2.0**-n)
    return dp_min_cost(n + 1) * expected_attempts


# ---------------------------------------------------------------------------
# strategies, ledgers, summaries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Z90Strategy:
    """Retry policy of the Z90 protocol: one-shot re-encoding to the full level."""

    one_shot: bool = True
    recycle: bool = False
    refund_leftovers: bool = True


@dataclass(frozen=True)
class CnotStrategy:
    """The boosted CNOT policy: pre-encode low qubits, gate, re-encode back.

    ``pre_encode_resource`` of None resolves to size 7 for level-6 inputs and
    size 8 otherwise.  ``protected_restore`` grows the gate's resource register
    before the final parity measurement, so re-encoding failures can only undo
    the gate (both qubits fall back to their surviving original qubits), never
    destroy it.
    """

    pre_encode_threshold: int = 6
    pre_encode_resource: int | None = None
    gate_resource: int = 5
    post_encode_target: int | None = None
    boost_target: bool = True
    boost_at_or_below: bool = False
    protected_restore: bool = True
    fi_remnant_recyclable: bool = True
    refund_leftovers: bool = True

    def resource_for(self, n: int) -> int:
        if self.pre_encode_resource is not None:
            return self.pre_encode_resource
        return 7 if n == 6 else 8


@dataclass(frozen=True)
class StrategySpec:
    """Bundle of build / recycling / gate policies driving the Monte Carlo."""

    build_plan: str = "credit"  # "fi_tree" (pure type-I) or "credit" (type-II joins >= 7)
    recycle: bool = False
    z90: Z90Strategy = Z90Strategy()
    cnot: CnotStrategy = CnotStrategy()


@dataclass
class CostLedger:
    """Per-trial Bell-state consumption with a per-event breakdown."""

    bell_states_consumed: int = 0
    by_event: dict = field(default_factory=dict)

    def add(self, event: str, bells: int) -> None:
        if bells < 0:
            raise ValueError("ledger entries are non-negative")
        self.bell_states_consumed += bells
        self.by_event[event] = self.by_event.get(event, 0) + bells


@dataclass(frozen=True)
class SummaryStats:
    """Aggregate of one Monte-Carlo run.

    ``mean_cost`` / ``std_error`` are the primary statistic; when
    ``conditional_on_success`` they average over successful trials only.  The
    unconditional mean (over all trials) and the amortized mean (total cost
    divided by number of successes) are always reported alongside.
    """

    trials: int
    successes: int
    success_rate: float
    mean_cost: float
    std_error: float
    conditional_on_success: bool
    mean_cost_unconditional: float
    std_error_unconditional: float
    mean_cost_amortized: float
    std_error_amortized: float


def _summary(trials, succ, s_c, s2_c, s_all, s2_all, conditional=True) -> SummaryStats:
    rate = succ / trials
    mean_all = s_all / trials
    var_all = max(s2_all / trials - mean_all**2, 0.0)
    se_all = float(np.sqrt(var_all / trials))
    if succ > 0:
        mean_c = s_c / succ
        var_c = max(s2_c / succ - mean_c**2, 0.0)
        se_c = float(np.sqrt(var_c / succ))
        amort = s_all / succ
        se_amort = float(np.sqrt(max(s2_all - 2 * amort * s_c + amort**2 * succ, 0.0))) / succ
    else:
        mean_c = se_c = amort = se_amort = 0.0
    mean, se = (mean_c, se_c) if conditional else (mean_all, se_all)
    return SummaryStats(
        trials, succ, rate, mean, se, conditional, mean_all, se_all, amort, se_amort
    )


# ---------------------------------------------------------------------------
# recycling pool and simulated construction
# ---------------------------------------------------------------------------


class _Builder:
    """Per-trial resource factory: fresh Bell draws plus a remnant pool.

    With recycling, pooled remnants satisfy later demands of exactly their
    size, and whatever is left in the pool when the trial ends returns to the
    supply at its construction value (the refund).  The net cost of a trial is
    ``fresh - refund``, which is what the remnant-credit program
    ``recycling_min_cost`` computes in expectation.
    """

    __slots__ = ("rng", "plan", "pool", "fresh")

    def __init__(self, rng, plan: str, recycle: bool):
        if plan not in ("fi_tree", "credit"):
            raise InvalidStrategy(f"unknown build plan {plan!r}")
        self.rng = rng
        self.plan = plan
        self.pool: dict[int, int] | None = {} if recycle else None
        self.fresh = 0

    def pool_add(self, size: int) -> None:
        if self.pool is not None and size >= 2:
            self.pool[size] = self.pool.get(size, 0) + 1

    def _split(self, k: int) -> tuple[int, int, str]:
        if self.plan == "credit":
            return recycling_split(k)
        t = fusion_tree(k)
        return tree_size(t[0]), tree_size(t[1]), "fi"

    def obtain(self, k: int) -> None:
        """Make one size-k resource available (consumed by the caller)."""
        pool = self.pool
        if pool is not None and pool.get(k, 0) > 0:
            pool[k] -= 1
            return
        if k == 2:
            self.fresh += 1
            return
        a, b, join = self._split(k)
        while True:
            self.obtain(a)
            self.obtain(b)
            if self.rng.random() < 0.5:
                return
            if join == "fii":
                self.pool_add(a - 1)
                self.pool_add(b - 1)

    def leftover_value(self) -> int:
        if not self.pool:
            return 0
        return sum(cnt * recycling_min_cost(s) for s, cnt in self.pool.items())


# ---------------------------------------------------------------------------
# Monte Carlo: resource construction
# ---------------------------------------------------------------------------


def _build_chunk(args) -> tuple[int, ...]:
    m, plan, recycle, seed, lo, hi = args
    stream = TrialStream(seed)
    s = s2 = 0
    for i in range(lo, hi):
        b = _Builder(stream.rekey(i), plan, recycle)
        b.obtain(m)
        cost = b.fresh - b.leftover_value()
        s += cost
        s2 += cost * cost
    return hi - lo, hi - lo, s, s2, s, s2


def mc_build_resource(
    m: int, strategy: StrategySpec, trials: int, seed: int, threads: int = 1
) -> SummaryStats:
    """Mean Bell-state cost per completed size-m resource under `strategy`.

    With recycling, failure remnants serve later demands within the trial and
    end-of-trial leftovers are refunded at their construction value, so the
    per-trial cost (fresh draws minus refund) is an unbiased, occasionally
    negative, estimate.
    """
    if trials < 1:
        raise ZeroTrials("at least one trial is required")
    if m < 2:
        raise SizeTooSmall(f"resource size must be >= 2, got {m}")
    _Builder(np.random.default_rng(0), strategy.build_plan, strategy.recycle)  # validate plan
    args = (m, strategy.build_plan, strategy.recycle, seed)
    counters = _run_chunks(_build_chunk, args, trials, threads)
    return _summary(*counters, conditional=False)


# ---------------------------------------------------------------------------
# Monte Carlo: Z90
# ---------------------------------------------------------------------------


def _z90_chunk(args) -> tuple[int, ...]:
    n, recycle, plan, refund, seed, lo, hi = args
    unit = dp_min_cost(n + 1)
    stream = TrialStream(seed)
    succ = s_c = s2_c = s_all = s2_all = 0
    qubit = LogicalParityQubit(1.0, 0.0, n)
    for i in range(lo, hi):
        rng = stream.rekey(i)
        sampler = RngSampler(rng)
        if recycle:
            builder = _Builder(rng, plan, recycle=True)
            result = z90_protocol(
                qubit,
                sampler=sampler,
                on_consume=builder.obtain,
                on_remnant=builder.pool_add,
                record_trace=False,
            )
            cost = builder.fresh - (builder.leftover_value() if refund else 0)
        else:
            result = z90_protocol(qubit, sampler=sampler, record_trace=False)
            cost = result.attempts * unit
        ok = result.status is ProtocolStatus.SUCCESS
        succ += ok
        s_all += cost
        s2_all += cost * cost
        if ok:
            s_c += cost
            s2_c += cost * cost
    return hi - lo, succ, s_c, s2_c, s_all, s2_all


def mc_z90(
    n: int, strategy: StrategySpec, trials: int, seed: int, threads: int = 1
) -> SummaryStats:
    """Success rate and Bell cost of the Z90 protocol at level n.

    The primary cost statistic is conditioned on protocol success; the
    unconditional and amortized (total cost over successes) statistics are
    reported alongside.  Without recycling every attempt is charged the exact
    construction cost of its size-(n+1) resource; with recycling the trial
    draws fresh Bell states through the pooled builder.
    """
    if trials < 1:
        raise ZeroTrials("at least one trial is required")
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    if not strategy.z90.one_shot:
        raise InvalidStrategy("only the one-shot re-encoding rule is implemented")
    recycle = strategy.recycle or strategy.z90.recycle
    args = (n, recycle, strategy.build_plan, strategy.z90.refund_leftovers, seed)
    counters = _run_chunks(_z90_chunk, args, trials, threads)
    return _summary(*counters, conditional=True)


# ---------------------------------------------------------------------------
# Monte Carlo: CNOT
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CnotSummary:
    no_recycle: SummaryStats
    recycle: SummaryStats

    @property
    def success_rate(self) -> float:
        return self.no_recycle.success_rate


def _cnot_trial(n, st: CnotStrategy, plan, rng, sampler):
    """One CNOT trial; returns (success, plain ledger, recycled cost)."""
    plain = CostLedger()
    builder = _Builder(rng, plan, recycle=True)

    def obtain(size: int, event: str) -> None:
        plain.add(event, dp_min_cost(size))
        builder.obtain(size)

    boost = st.resource_for(n)
    thr = st.pre_encode_threshold
    post_target = st.post_encode_target if st.post_encode_target is not None else n
    gate_size = st.gate_resource
    pair = LogicalPair((1.0, 0.0, 0.0, 0.0), n, n)

    def needs_boost(level: int) -> bool:
        return level <= thr if st.boost_at_or_below else level < thr

    while True:
        while needs_boost(pair.level_a):
            obtain(boost, "pre_encode")
            res = pair_encode_step(pair, "a", ResourceState(boost), sampler)
            if res.leftover is not None:
                builder.pool_add(res.leftover.size)
            if res.lost:
                return 0, plain, builder
            pair = res.pair
        while st.boost_target and needs_boost(pair.level_b):
            obtain(boost, "pre_encode")
            res = pair_encode_step(pair, "b", ResourceState(boost), sampler)
            if res.leftover is not None:
                builder.pool_add(res.leftover.size)
            if res.lost:
                return 0, plain, builder
            pair = res.pair

        entry_level_a = pair.level_a
        obtain(gate_size, "gate")
        att = cnot_protocol(pair, ResourceState(gate_size), sampler=sampler, record_trace=False)
        if att.leftover is not None and (
            att.outcome is AttemptOutcome.FII_FAILURE or st.fi_remnant_recyclable
        ):
            builder.pool_add(att.leftover.size)
        if att.outcome is AttemptOutcome.LOGICAL_LOSS:
            return 0, plain, builder
        if att.outcome is not AttemptOutcome.SUCCESS:
            pair = att.pair
            continue
        pair = att.pair  # levels (gate_size - 1, target - 1)

        if st.protected_restore:
            # grow the resource register before the delayed parity measurement;
            # exhausting it undoes the gate instead of losing the qubit
            reg = pair.level_a
            reverted = False
            while reg < n:
                size = n - reg + 2
                obtain(size, "post_encode")
                if sampler.choose(8) < 4:
                    reg = n
                else:
                    reg -= 1
                    builder.pool_add(size - 1)
                    if reg == 0:
                        reverted = True
                        break
            if reverted:
                if entry_level_a == 1:
                    return 0, plain, builder
                pair = LogicalPair(pair.amps, entry_level_a - 1, pair.level_b)
                continue
            pair = LogicalPair(pair.amps, max(reg, n), pair.level_b)
        else:
            while pair.level_a < n:
                size = n - pair.level_a + 2
                obtain(size, "post_encode")
                res = pair_encode_step(pair, "a", ResourceState(size), sampler)
                if res.leftover is not None:
                    builder.pool_add(res.leftover.size)
                if res.lost:
                    return 0, plain, builder
                pair = res.pair

        while pair.level_b < post_target:
            size = post_target - pair.level_b + 2
            obtain(size, "post_encode")
            res = pair_encode_step(pair, "b", ResourceState(size), sampler)
            if res.leftover is not None:
                builder.pool_add(res.leftover.size)
            if res.lost:
                return 0, plain, builder
            pair = res.pair
        # overshoot above the target level is measured down for free
        return 1, plain, builder


def _cnot_chunk(args) -> tuple[int, ...]:
    n, st, plan, seed, lo, hi = args
    stream = TrialStream(seed)
    acc = [0] * 9
    for i in range(lo, hi):
        rng = stream.rekey(i)
        ok, plain, builder = _cnot_trial(n, st, plan, rng, RngSampler(rng))
        p = plain.bell_states_consumed
        r = builder.fresh - (builder.leftover_value() if st.refund_leftovers else 0)
        acc[0] += ok
        acc[1] += p * ok
        acc[2] += p * p * ok
        acc[3] += p
        acc[4] += p * p
        acc[5] += r * ok
        acc[6] += r * r * ok
        acc[7] += r
        acc[8] += r * r
    return (hi - lo, *acc)


def mc_cnot(
    n: int, strategy: StrategySpec, trials: int, seed: int, threads: int = 1
) -> CnotSummary:
    """Success rate and Bell cost of the boosted CNOT strategy at level n.

    One simulated trajectory is accounted twice: charging every consumed
    resource at its exact construction cost (no recycling), and charging only
    fresh Bell draws with failure remnants pooled (recycling).
    """
    if trials < 1:
        raise ZeroTrials("at least one trial is required")
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    args = (n, strategy.cnot, strategy.build_plan, seed)
    t, succ, pc, pc2, pa, pa2, rc, rc2, ra, ra2 = _run_chunks(_cnot_chunk, args, trials, threads)
    return CnotSummary(
        no_recycle=_summary(t, succ, pc, pc2, pa, pa2, conditional=True),
        recycle=_summary(t, succ, rc, rc2, ra, ra2, conditional=True),
    )


# ---------------------------------------------------------------------------
# chunked, order-independent trial runner
# ---------------------------------------------------------------------------

_CHUNK = 20000


def _run_chunks(chunk_fn, args, trials: int, threads: int) -> tuple[int, ...]:
    ranges = [(lo, min(lo + _CHUNK, trials)) for lo in range(0, trials, _CHUNK)]
    jobs = [(*args, lo, hi) for lo, hi in ranges]
    if threads <= 1 or len(jobs) == 1:
        results = [chunk_fn(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(chunk_fn, jobs))
    return tuple(int(sum(col)) for col in zip(*results))


# ---------------------------------------------------------------------------
# strategy search
# ---------------------------------------------------------------------------


def strategy_search(
    m: int, candidates=None, budget: int = 20000, seed: int = 0
) -> tuple[object, float]:
    """Pick the cheapest way to build a size-m resource from a candidate space.

    Explicit fusion trees are scored exactly; StrategySpec candidates are
    scored by Monte Carlo with common random numbers (same seed and trial
    count for every candidate).  Ties go to the smaller tree depth.
    """
    if candidates is None:
        candidates = enumerate_fi_trees(m)
    candidates = list(candidates)
    if not candidates:
        raise EmptySpace("no candidate strategies supplied")
    scored = []
    for rank, cand in enumerate(candidates):
        if isinstance(cand, StrategySpec):
            cost = mc_build_resource(m, cand, budget, seed).mean_cost
            depth = 0
        else:
            if tree_size(cand) != m:
                raise InvalidStrategy(f"tree {cand!r} builds size {tree_size(cand)}, not {m}")
            cost = float(tree_cost(cand))
            depth = tree_depth(cand)
        scored.append((cost, depth, rank, cand))
    cost, _, _, best = min(scored, key=lambda t: t[:3])
    return best, cost
