"""Verification suites: symbolic rules re-derived from dense state vectors.

Every transition of the symbolic parity engine is replayed on an explicit
state vector (the "twin"): expand the parity states, apply the fusion
measurement operator for a forced detector pattern, apply the same recorded
corrections as physical X/Z gates, and compare against the engine's claimed
post-state up to a global phase at 1e-10.

Suites: povm, transitions, gates, dp, formulas.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from . import statevec as sv
from .fusion import GateType, apply_element, elements_for
from .parity import (
    AttemptOutcome,
    LogicalPair,
    LogicalParityQubit,
    ProtocolStatus,
    ResourceState,
    RngSampler,
    ScriptedSampler,
    Z90_PHASE,
    cnot_protocol,
    encode_step,
    join_fi,
    join_fii,
    logical_xtheta,
    logical_z,
    measure_physical,
    pair_encode_step,
    z90_protocol,
)
from .rng import trial_generator
from .strategy import (
    StrategySpec,
    dp_min_cost,
    mc_build_resource,
    mc_z90,
    z90_expected_cost_one_shot,
    z90_success_prob,
)

__all__ = ["CheckResult", "SUITES", "run_suite", "verify_povm", "verify_transitions",
           "verify_gates", "verify_dp", "verify_formulas"]

_FII = elements_for(GateType.TYPE_II)
_FI = elements_for(GateType.TYPE_I)

TOL = 1e-10


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _rand_amps(rng) -> tuple[complex, complex]:
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    v /= np.linalg.norm(v)
    return complex(v[0]), complex(v[1])


def _qubit_state(q: LogicalParityQubit) -> sv.StateVector:
    return sv.build_parity_state(q.level, q.alpha, q.beta)


def _pair_state(amps, la: int, lb: int) -> sv.StateVector:
    """Expanded pair state with the first (control) register on low indices."""
    ctrl = [sv.build_parity_state(la, 1, 0), sv.build_parity_state(la, 0, 1)]
    targ = [sv.build_parity_state(lb, 1, 0), sv.build_parity_state(lb, 0, 1)]
    amp = np.zeros(1 << (la + lb), dtype=complex)
    for (i, j), c in np.ndenumerate(np.asarray(amps, dtype=complex).reshape(2, 2)):
        amp += c * np.kron(targ[j].amps, ctrl[i].amps)
    return sv.StateVector(amp, _checked=True)


# ---------------------------------------------------------------------------
# suite: povm
# ---------------------------------------------------------------------------


def verify_povm() -> list[CheckResult]:
    out = []
    for gate in GateType:
        els = elements_for(gate)
        total = sum(el.matrix.conj().T @ el.matrix for el in els)
        dev = float(np.max(np.abs(total - np.eye(4))))
        out.append(CheckResult(f"povm_completeness_{gate.value}", dev < 1e-12, f"max dev {dev:.3e}"))
        names = [el.pattern.name for el in els]
        out.append(
            CheckResult(
                f"povm_patterns_unique_{gate.value}",
                len(set(names)) == len(names),
                f"{len(names)} patterns",
            )
        )
    return out


# ---------------------------------------------------------------------------
# suite: transitions
# ---------------------------------------------------------------------------


def _twin_encode(alpha, beta, m, s, k):
    """State-vector replay of encode_step branch k; returns (prob, post, expected)."""
    joint = sv.product(
        sv.build_parity_state(m, alpha, beta), sv.build_parity_state(s, 1, 0)
    )
    prob, post = apply_element(joint, _FII[k], (m - 1, m))
    if post is None:
        return prob, None, None
    appended = list(range(m - 1, m + s - 2))
    if k in (2, 3):
        for q in appended:
            post = sv.apply_1q(post, q, sv.Z)
    elif k in (4, 5):
        post = sv.apply_1q(post, appended[0], sv.X)
    elif k in (6, 7) and m >= 2:
        post = sv.apply_1q(post, 0, sv.X)
    if k < 4:
        expected = sv.build_parity_state(m + s - 2, alpha, beta)
    elif m == 1:
        expected = sv.build_parity_state(s - 1, 1, 0)  # logical qubit destroyed
    else:
        expected = sv.product(
            sv.build_parity_state(m - 1, alpha, beta), sv.build_parity_state(s - 1, 1, 0)
        )
    return prob, post, expected


def verify_transitions(max_level: int = 4, seed: int = 2024) -> list[CheckResult]:
    rng = trial_generator(seed, 0)
    out = []

    # measure_physical: both outcomes at every level
    ok, worst = True, ""
    for n in range(2, max_level + 1):
        a, b = _rand_amps(rng)
        state = sv.build_parity_state(n, a, b)
        for outcome in (0, 1):
            prob, post = sv.measure_qubit(state, n - 1, outcome)
            if outcome == 1:
                post = sv.apply_1q(post, 0, sv.X)
            sym = measure_physical(LogicalParityQubit(a, b, n), outcome)
            ok &= abs(prob - 0.5) < TOL and sv.equivalent_up_to_phase(post, _qubit_state(sym), TOL)
            if not ok and not worst:
                worst = f"n={n} outcome={outcome}"
    out.append(CheckResult("measure_physical_vs_oracle", ok, worst or f"levels 2..{max_level}"))

    # encode_step: every pattern at every (level, resource size)
    ok, worst, checked = True, "", 0
    for m in range(1, max_level + 1):
        for s in (2, 3, 4):
            a, b = _rand_amps(rng)
            class_tot = [0.0, 0.0]
            for k in range(8):
                prob, post, expected = _twin_encode(a, b, m, s, k)
                class_tot[k < 4] += prob
                if k < 4 or m >= 2:
                    ok &= abs(prob - 0.125) < TOL
                if post is not None:
                    ok &= sv.equivalent_up_to_phase(post, expected, TOL)
                # symbolic engine on the forced pattern
                res = encode_step(
                    LogicalParityQubit(a, b, m), ResourceState(s), ScriptedSampler([k])
                )
                if res.qubit is not None:
                    claim = _qubit_state(res.qubit)
                    if not res.success:
                        # failure leaves the remnant block (a bare qubit when s = 2)
                        claim = sv.product(claim, sv.build_parity_state(s - 1, 1, 0))
                        ok &= (
                            (res.leftover is not None and res.leftover.size == s - 1)
                            if s - 1 >= 2
                            else res.leftover is None
                        )
                    if post is not None:
                        ok &= sv.equivalent_up_to_phase(post, claim, TOL)
                else:
                    ok &= res.lost and m == 1
                checked += 1
                if not ok and not worst:
                    worst = f"m={m} s={s} k={k}"
            ok &= abs(class_tot[True] - 0.5) < TOL and abs(class_tot[False] - 0.5) < TOL
    out.append(CheckResult("encode_step_vs_oracle", ok, worst or f"{checked} branches"))

    # join_fii on resource pairs
    ok, worst, checked = True, "", 0
    for asz in range(2, max_level + 1):
        for bsz in range(2, max_level + 1):
            joint = sv.product(
                sv.build_parity_state(asz, 1, 0), sv.build_parity_state(bsz, 1, 0)
            )
            for k in range(8):
                prob, post = apply_element(joint, _FII[k], (asz - 1, asz))
                ok &= abs(prob - 0.125) < TOL
                a_rem = list(range(asz - 1))
                b_rem = list(range(asz - 1, asz + bsz - 2))
                if k in (2, 3):
                    for q in b_rem:
                        post = sv.apply_1q(post, q, sv.Z)
                elif k in (4, 5) and b_rem:
                    post = sv.apply_1q(post, b_rem[0], sv.X)
                elif k in (6, 7) and a_rem:
                    post = sv.apply_1q(post, a_rem[0], sv.X)
                res = join_fii(ResourceState(asz), ResourceState(bsz), ScriptedSampler([k]))
                if res.success:
                    expected = sv.build_parity_state(asz + bsz - 2, 1, 0)
                    ok &= res.merged.size == asz + bsz - 2
                else:
                    parts = []
                    for size, rem in ((asz - 1, res.remnant_a), (bsz - 1, res.remnant_b)):
                        ok &= (rem is not None and rem.size == size) if size >= 2 else (rem is None)
                        parts.append(sv.build_parity_state(size, 1, 0))  # bare qubit is |0> after X fix
                    expected = sv.product(parts[0], parts[1])
                ok &= sv.equivalent_up_to_phase(post, expected, TOL)
                checked += 1
                if not ok and not worst:
                    worst = f"a={asz} b={bsz} k={k}"
    out.append(CheckResult("join_fii_vs_oracle", ok, worst or f"{checked} branches"))

    # join_fi (Hadamard-conjugated) on resource pairs
    ok, worst, checked = True, "", 0
    for asz in range(2, max_level + 1):
        for bsz in range(2, max_level + 1):
            joint = sv.product(
                sv.build_parity_state(asz, 1, 0), sv.build_parity_state(bsz, 1, 0)
            )
            joint = sv.apply_1q(joint, asz - 1, sv.H)
            joint = sv.apply_1q(joint, asz, sv.H)
            probs = []
            for k in range(5):
                prob, post = apply_element(joint, _FI[k], (asz - 1, asz))
                probs.append(prob)
                res = join_fi(ResourceState(asz), ResourceState(bsz), ScriptedSampler([k]))
                if k < 2:
                    post = sv.apply_1q(post, asz - 1, sv.H)
                    if k == 1:
                        post = sv.apply_1q(post, asz - 1, sv.X)
                    ok &= res.success and res.merged.size == asz + bsz - 1
                    ok &= sv.equivalent_up_to_phase(
                        post, sv.build_parity_state(asz + bsz - 1, 1, 0), TOL
                    )
                else:
                    # failure projects every qubit onto |+>/|->: both inputs destroyed
                    ok &= not res.success and res.merged is None
                    rank = np.linalg.matrix_rank(post.amps.reshape(2, -1), tol=1e-10)
                    ok &= rank == 1
                checked += 1
                if not ok and not worst:
                    worst = f"a={asz} b={bsz} k={k}"
            ok &= np.allclose(probs, [0.25, 0.25, 0.125, 0.125, 0.25], atol=TOL)
    out.append(CheckResult("join_fi_vs_oracle", ok, worst or f"{checked} branches"))

    # deterministic logical gates
    ok = True
    a, b = _rand_amps(rng)
    for n in range(1, max_level + 1):
        state = sv.build_parity_state(n, a, b)
        zed = state
        for q in range(n):
            zed = sv.apply_1q(zed, q, sv.Z)
        ok &= sv.equivalent_up_to_phase(zed, _qubit_state(logical_z(LogicalParityQubit(a, b, n))), TOL)
        for theta in (0.0, 90.0, 180.0, 37.5):
            rot = sv.apply_1q(state, n - 1, sv.rot_x(theta))
            sym = logical_xtheta(LogicalParityQubit(a, b, n), theta)
            ok &= sv.equivalent_up_to_phase(rot, _qubit_state(sym), TOL)
    out.append(CheckResult("logical_gates_vs_oracle", ok, "Z on all qubits; X_theta on one"))
    return out


# ---------------------------------------------------------------------------
# suite: gates (full protocols)
# ---------------------------------------------------------------------------


def _twin_z90_branch(alpha, beta, n, script):
    """Replay one scripted Z90 branch; returns the final state or None on loss."""
    state = sv.build_parity_state(n, alpha, beta)
    level = n
    for k, bits in script:
        state = sv.apply_1q(state, level - 1, sv.Z90)
        joint = sv.product(state, sv.build_parity_state(n + 1, 1, 0))
        prob, post = apply_element(joint, _FII[k], (level - 1, level))
        if post is None:
            return None
        if k < 4:
            if k >= 2:
                for q in range(level - 1, level - 1 + n):
                    post = sv.apply_1q(post, q, sv.Z)
            for bit in bits:
                _, post = sv.measure_qubit(post, 0, bit)
            if sum(bits) % 2 == 1:
                post = sv.apply_1q(post, 0, sv.X)
                for q in range(post.num_qubits):
                    post = sv.apply_1q(post, q, sv.Z)
            return post
        if level == 1:
            return None  # last qubit consumed: logical loss
        if k in (4, 5):
            post = sv.apply_1q(post, level - 1, sv.X)
        else:
            post = sv.apply_1q(post, 0, sv.X)
        level -= 1
        originals = sv.build_parity_state(level, alpha, beta)
        expected = sv.product(originals, sv.build_parity_state(n, 1, 0))
        if not sv.equivalent_up_to_phase(post, expected, TOL):
            raise AssertionError(f"z90 failure branch mismatch at level {level + 1}")
        state = originals
    return None


def _z90_branch_scripts(n: int):
    """Every detector/measurement branch of the one-shot protocol at level n."""
    for fails in range(0, n):
        for fail_ks in itertools.product((4, 5, 6, 7), repeat=fails):
            for k in range(4):
                for bits in itertools.product((0, 1), repeat=n - fails - 1):
                    yield [(fk, ()) for fk in fail_ks] + [(k, bits)]
    # total loss: n failures
    for fail_ks in itertools.product((4, 5, 6, 7), repeat=n):
        yield [(fk, ()) for fk in fail_ks]


def _check_z90_branches(n: int, rng, exhaustive: bool) -> tuple[bool, int, str]:
    alpha, beta = _rand_amps(rng)
    expected = sv.build_parity_state(n, alpha * Z90_PHASE, beta * np.conj(Z90_PHASE))
    ok, checked, worst = True, 0, ""
    scripts = list(_z90_branch_scripts(n))
    if not exhaustive:  # one representative per failure class
        scripts = [s for s in scripts if all(k in (4, 6) for k, _ in s if k >= 4)]
    for script in scripts:
        flat = []
        for k, bits in script:
            flat += [k, *bits]
        result = z90_protocol(
            LogicalParityQubit(alpha, beta, n), sampler=ScriptedSampler(flat)
        )
        got = _twin_z90_branch(alpha, beta, n, script)
        if got is None:
            ok &= result.status is ProtocolStatus.LOGICAL_LOSS
        else:
            ok &= result.status is ProtocolStatus.SUCCESS
            ok &= sv.equivalent_up_to_phase(got, expected, TOL)
            ok &= sv.equivalent_up_to_phase(got, _qubit_state(result.qubit), TOL)
        checked += 1
        if not ok and not worst:
            worst = f"n={n} script={script}"
    return ok, checked, worst


def _twin_cnot_branch(amps, la, lb, rsize, k1, k2=None, bits=()):
    """Replay one CNOT attempt branch on the state vector.

    Returns (kind, post) with kind in {fi_fail, fii_fail, success, loss}.
    """
    joint = sv.product(_pair_state(amps, la, lb), sv.build_parity_state(rsize, 1, 0))
    prob, post = apply_element(joint, _FI[k1], (la - 1, la + lb))
    if k1 >= 2:
        if la == 1:
            return "loss", None
        res0 = la - 1 + lb
        if k1 in (2, 3):
            post = sv.apply_1q(post, res0, sv.X)
        else:
            post = sv.apply_1q(post, 0, sv.X)
        return "fi_fail", post
    if k1 == 1:
        post = sv.apply_1q(post, la - 1, sv.Z)
    prob, post = apply_element(post, _FII[k2], (la - 1, la + lb - 1))
    tgt0, res0 = la - 1, la + lb - 2
    if k2 >= 4:
        if la == 1 or lb == 1:
            return "loss", None
        if k2 in (4, 5):
            post = sv.apply_1q(post, tgt0, sv.X)
        else:
            post = sv.apply_1q(post, res0, sv.X)
            post = sv.apply_1q(post, 0, sv.X)
        return "fii_fail", post
    if lb == 1:
        return "loss", None
    if k2 >= 2:
        for q in range(res0, res0 + rsize - 1):
            post = sv.apply_1q(post, q, sv.Z)
    for bit in bits:
        _, post = sv.measure_qubit(post, 0, bit)
    if sum(bits) % 2 == 1:
        post = sv.apply_1q(post, 0, sv.X)
        post = sv.apply_1q(post, lb - 1, sv.X)
    return "success", post


def _cnot_amps(amps):
    a00, a01, a10, a11 = amps
    return (a00, a01, a11, a10)


def _post_cnot_state(amps, m, lb_post):
    """Post-gate layout: target register on low indices, control register above."""
    ctrl = [sv.build_parity_state(m, 1, 0), sv.build_parity_state(m, 0, 1)]
    targ = [sv.build_parity_state(lb_post, 1, 0), sv.build_parity_state(lb_post, 0, 1)]
    amp = np.zeros(1 << (m + lb_post), dtype=complex)
    for (i, j), c in np.ndenumerate(np.asarray(amps, dtype=complex).reshape(2, 2)):
        amp += c * np.kron(ctrl[i].amps, targ[j].amps)
    return sv.StateVector(amp, _checked=True)


def _check_cnot_branches(la, lb, rsize, rng) -> tuple[bool, int, str]:
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v /= np.linalg.norm(v)
    amps = tuple(map(complex, v))
    m = rsize - 1
    pair = LogicalPair(amps, la, lb)
    resource = ResourceState(rsize)
    ok, checked, worst = True, 0, ""

    def run(script):
        return cnot_protocol(pair, resource, sampler=ScriptedSampler(script))

    for k1 in (2, 3, 4):
        kind, post = _twin_cnot_branch(amps, la, lb, rsize, k1)
        att = run([k1])
        if kind == "loss":
            ok &= att.outcome is AttemptOutcome.LOGICAL_LOSS
        else:
            ok &= att.outcome is AttemptOutcome.FI_FAILURE
            ok &= att.pair.level_a == la - 1 and att.pair.level_b == lb
            ok &= att.leftover is not None and att.leftover.size == m
            expected = sv.product(
                _pair_state(att.pair.amps, la - 1, lb), sv.build_parity_state(m, 1, 0)
            )
            ok &= sv.equivalent_up_to_phase(post, expected, TOL)
        checked += 1
        if not ok and not worst:
            worst = f"({la},{lb},r{rsize}) k1={k1}"
    for k1 in (0, 1):
        for k2 in range(4, 8):
            kind, post = _twin_cnot_branch(amps, la, lb, rsize, k1, k2)
            att = run([k1, k2])
            if kind == "loss":
                ok &= att.outcome is AttemptOutcome.LOGICAL_LOSS
            else:
                ok &= att.outcome is AttemptOutcome.FII_FAILURE
                ok &= att.pair.level_a == la - 1 and att.pair.level_b == lb - 1
                expected = sv.product(
                    _pair_state(att.pair.amps, la - 1, lb - 1),
                    sv.build_parity_state(m, 1, 0),
                )
                ok &= sv.equivalent_up_to_phase(post, expected, TOL)
            checked += 1
        for k2 in range(4):
            for bits in itertools.product((0, 1), repeat=la - 1):
                kind, post = _twin_cnot_branch(amps, la, lb, rsize, k1, k2, bits)
                att = run([k1, k2, *bits])
                if kind == "loss":
                    ok &= att.outcome is AttemptOutcome.LOGICAL_LOSS
                else:
                    ok &= att.outcome is AttemptOutcome.SUCCESS
                    ok &= att.pair.level_a == m and att.pair.level_b == lb - 1
                    expected = _post_cnot_state(_cnot_amps(amps), m, lb - 1)
                    ok &= sv.equivalent_up_to_phase(post, expected, TOL)
                    ok &= sv.equivalent_up_to_phase(
                        post, _post_cnot_state(att.pair.amps, m, lb - 1), TOL
                    )
                checked += 1
                if not ok and not worst:
                    worst = f"({la},{lb},r{rsize}) k1={k1} k2={k2} bits={bits}"
    return ok, checked, worst


def verify_gates(max_level: int = 4, seed: int = 2024, random_pairs: int = 20) -> list[CheckResult]:
    rng = trial_generator(seed, 1)
    out = []

    # Z90: every branch equals the logical 90-degree Z rotation
    ok, total, worst = True, 0, ""
    for n in range(1, max_level + 1):
        good, checked, bad = _check_z90_branches(n, rng, exhaustive=n <= 3)
        ok &= good
        total += checked
        worst = worst or bad
    out.append(CheckResult("z90_branches_vs_oracle", ok, worst or f"{total} branches"))

    # Z90 sampled runs: output phase-equivalent to Z90(alpha, beta)
    ok = True
    for t in range(random_pairs):
        alpha, beta = _rand_amps(rng)
        n = 2 + t % 3
        result = z90_protocol(
            LogicalParityQubit(alpha, beta, n), sampler=RngSampler(trial_generator(seed, 100 + t))
        )
        if result.status is ProtocolStatus.SUCCESS:
            got = np.array([result.qubit.alpha, result.qubit.beta])
            want = np.array([alpha * Z90_PHASE, beta * np.conj(Z90_PHASE)])
            ov = abs(np.vdot(want, got))
            ok &= abs(ov - 1.0) < TOL and result.qubit.level == n
    out.append(CheckResult("z90_random_amplitudes", ok, f"{random_pairs} sampled pairs"))

    # CNOT: every branch at dense-oracle scale
    ok, total, worst = True, 0, ""
    for la in range(1, max_level + 1):
        for lb in range(1, max_level + 1):
            for rsize in (3, 4):
                if la + lb + rsize > 12:
                    continue
                good, checked, bad = _check_cnot_branches(la, lb, rsize, rng)
                ok &= good
                total += checked
                worst = worst or bad
    out.append(CheckResult("cnot_branches_vs_oracle", ok, worst or f"{total} branches"))

    # CNOT truth table at levels (2, 2) with a size-3 resource
    ok = True
    for idx in range(4):
        amps = tuple(1.0 if i == idx else 0.0 for i in range(4))
        for bits in ((0,), (1,)):
            kind, post = _twin_cnot_branch(amps, 2, 2, 3, 0, 0, bits)
            expected = _post_cnot_state(_cnot_amps(amps), 2, 1)
            ok &= kind == "success" and sv.equivalent_up_to_phase(post, expected, TOL)
        att = cnot_protocol(
            LogicalPair(amps, 2, 2), ResourceState(3), sampler=ScriptedSampler([0, 0, 0])
        )
        ok &= att.pair.amps == _cnot_amps(amps)
    out.append(CheckResult("cnot_truth_table", ok, "4 basis states, levels (2,2), size-3 resource"))

    # symmetric orientation: measuring the lower qubit swaps the roles
    amps = (0.5, 0.5, 0.5, 0.5j)
    att = cnot_protocol(
        LogicalPair(amps, 3, 3), ResourceState(3), sampler=ScriptedSampler([0, 0, 0, 0]),
        measure_lower=True,
    )
    swapped = (amps[0], amps[1], amps[2], amps[3])
    want = (swapped[0], swapped[3], swapped[2], swapped[1])  # target controls: 01 <-> 11
    out.append(
        CheckResult(
            "cnot_measure_lower_swaps_roles",
            att.pair.amps == want and (att.pair.level_a, att.pair.level_b) == (2, 2),
            f"amps {att.pair.amps}",
        )
    )
    return out


# ---------------------------------------------------------------------------
# suite: dp
# ---------------------------------------------------------------------------

_DP_REFERENCE = {3: 4, 4: 10, 5: 16, 6: 28, 7: 40, 8: 52, 9: 64, 10: 88}


def verify_dp() -> list[CheckResult]:
    out = []
    got = {m: dp_min_cost(m) for m in range(3, 11)}
    out.append(
        CheckResult(
            "dp_reference_costs",
            got == _DP_REFERENCE,
            " ".join(f"{m}:{c}" for m, c in got.items()),
        )
    )
    ok = all(
        dp_min_cost(m)
        == min(2 * (dp_min_cost(a) + dp_min_cost(m + 1 - a)) for a in range(2, (m + 1) // 2 + 1))
        for m in range(3, 13)
    )
    out.append(CheckResult("dp_recursion_selfconsistent", ok, "m <= 12"))
    return out


# ---------------------------------------------------------------------------
# suite: formulas
# ---------------------------------------------------------------------------


def verify_formulas(trials: int = 20000, seed: int = 2024) -> list[CheckResult]:
    out = []
    spec = StrategySpec(build_plan="fi_tree", recycle=False)
    ok, detail = True, []
    for n in (2, 4, 6):
        stats = mc_z90(n, spec, trials, seed)
        p = z90_success_prob(n)
        sigma = max(np.sqrt(p * (1 - p) / trials), 1e-9)
        dev = abs(stats.success_rate - p) / sigma
        ok &= dev < 4
        detail.append(f"n={n}:{dev:.2f}sigma")
    out.append(CheckResult("z90_success_matches_formula", ok, " ".join(detail)))

    ok, detail = True, []
    for n in (3, 5):
        stats = mc_z90(n, spec, trials, seed)
        want = z90_expected_cost_one_shot(n)
        dev = abs(stats.mean_cost - want) / max(stats.std_error, 1e-9)
        ok &= dev < 4
        detail.append(f"n={n}:{dev:.2f}sigma")
    out.append(CheckResult("z90_cost_matches_closed_form", ok, " ".join(detail)))

    ok, detail = True, []
    for m in (3, 5, 6):
        stats = mc_build_resource(m, spec, trials, seed)
        want = dp_min_cost(m)
        dev = abs(stats.mean_cost - want) / max(stats.std_error, 1e-9)
        ok &= dev < 4
        detail.append(f"m={m}:{dev:.2f}sigma")
    out.append(CheckResult("build_cost_matches_dp", ok, " ".join(detail)))
    return out


SUITES = {
    "povm": lambda max_level, seed: verify_povm(),
    "transitions": lambda max_level, seed: verify_transitions(max_level, seed),
    "gates": lambda max_level, seed: verify_gates(max_level, seed),
    "dp": lambda max_level, seed: verify_dp(),
    "formulas": lambda max_level, seed: verify_formulas(seed=seed),
}


def run_suite(name: str, max_level: int = 4, seed: int = 2024) -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](max_level, seed)
