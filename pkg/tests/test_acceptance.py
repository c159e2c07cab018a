"""Acceptance gate: one test per advertised guarantee, at its stated tolerance.

Each test prints a single pass/fail line (run with -s or -rA to see them all).
Budgets are wall-clock seconds measured around the operation under test.
"""

import math
import time

import numpy as np

import incompat as ic

RT2 = math.sqrt(2.0)


def _report(num: int, label: str, ok: bool, detail: str = "") -> None:
    line = f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'}  {label}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def _random_state(rng):
    r = rng.normal(size=3)
    r *= rng.uniform(0, 1) ** (1 / 3) / np.linalg.norm(r)
    return ic.QubitState.from_bloch(r)


def _random_unbiased(rng, eta=None):
    d = rng.normal(size=3)
    d /= np.linalg.norm(d)
    return ic.DichotomicMeasurement.noisy_projective(
        d, rng.uniform(0, 1) if eta is None else eta
    )


def test_01_pair_criterion_threshold():
    eta_c = 1 / RT2
    below = ic.pauli_set("xz", eta_c - 1e-6)
    above = ic.pauli_set("xz", eta_c + 1e-6)
    at = ic.pauli_set("xz", eta_c)
    flip_ok = (
        ic.busch_pair_criterion(below[0], below[1])[0]
        and not ic.busch_pair_criterion(above[0], above[1])[0]
    )
    margin = ic.busch_pair_criterion(at[0], at[1])[1]
    # timing: median of repeated calls, after warm-up
    times = []
    for _ in range(200):
        t0 = time.perf_counter()
        ic.busch_pair_criterion(at[0], at[1])
        times.append(time.perf_counter() - t0)
    runtime = sorted(times)[len(times) // 2]
    _report(
        1,
        "pair criterion flips at 1/sqrt(2) with vanishing margin",
        flip_ok and abs(margin) < 1e-9 and runtime < 1e-3,
        f"margin={margin:.2e}, median runtime={runtime * 1e6:.1f}us",
    )


def test_02_mother_povm_at_threshold():
    eta = 1 / RT2
    mother = ic.mother_povm_xz(eta)
    target = ic.pauli_set("xz", eta)
    ok = (
        mother.min_eigenvalue() >= -1e-12
        and mother.completeness_error() <= 1e-12
        and mother.reconstruction_error(target) <= 1e-12
    )
    _report(
        2,
        "four-outcome parent reproduces the noisy X/Z pair at threshold",
        ok,
        f"reconstruction error={mother.reconstruction_error(target):.2e}",
    )


def test_03_pauli_triple_two_message_transition():
    diag = 1 / RT2
    ensemble = ic.Ensemble.from_bloch_vectors([(diag, 0, diag), (diag, 0, -diag)])

    t0 = time.perf_counter()
    inside = ic.certify_incompatibility(ic.pauli_set("xyz", 0.70), ensemble, 2)
    t_inside = time.perf_counter() - t0

    t0 = time.perf_counter()
    outside = ic.certify_incompatibility(ic.pauli_set("xyz", 0.72), ensemble, 2)
    t_outside = time.perf_counter() - t0

    q = outside.bell.quantum_value if outside.bell else float("nan")
    ok = (
        inside.verdict.is_inside
        and outside.verdict.is_outside
        and outside.bell is not None
        and abs(q - 2 * RT2 * 0.72) <= 1e-6
        and q > outside.bell.local_bound
        and abs(outside.bell.local_bound - 2.0) <= 1e-9
        and t_inside < 10.0
        and t_outside < 10.0
    )
    _report(
        3,
        "two-message transition at 0.70/0.72 with CHSH-normalised certificate",
        ok,
        f"Q={q:.9f} vs {2 * RT2 * 0.72:.9f}, times {t_inside:.2f}s/{t_outside:.2f}s",
    )


def test_04_pauli_triple_jm_threshold():
    t0 = time.perf_counter()
    verdict = ic.jm_feasibility(ic.pauli_set("xyz", 0.55), max_iter=50000)
    found = verdict.is_jm and verdict.mother.reconstruction_error(
        ic.pauli_set("xyz", 0.55)
    ) < 1e-8
    rejected = not ic.noisy_pauli_triple_jm(0.60)
    elapsed = time.perf_counter() - t0
    _report(
        4,
        "triple feasibility at 0.55, analytic rejection at 0.60",
        found and rejected and elapsed < 30.0,
        f"{elapsed:.2f}s",
    )


def test_05_chsh_attainability():
    rng = np.random.default_rng(505)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(500):
        v0, v1 = rng.normal(size=3), rng.normal(size=3)
        v0 *= rng.uniform(0, 1) / np.linalg.norm(v0)
        v1 *= rng.uniform(0, 1) / np.linalg.norm(v1)
        b0, b1 = ic.QubitOperator(0.0, v0), ic.QubitOperator(0.0, v1)
        _, _, value = ic.optimal_alice_settings(b0, b1)
        worst = max(worst, abs(value - ic.chsh_norm_bound(b0, b1)))
    elapsed = time.perf_counter() - t0
    _report(
        5,
        "maximally entangled expectation attains the norm bound (500 pairs)",
        worst <= 1e-9 and elapsed < 5.0,
        f"worst deviation={worst:.2e}, {elapsed:.2f}s",
    )


def test_06_correlator_identity():
    rng = np.random.default_rng(606)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(500):
        e = ic.Ensemble(tuple(_random_state(rng) for _ in range(int(rng.integers(1, 5)))))
        a = ic.Assemblage(
            tuple(_random_unbiased(rng) for _ in range(int(rng.integers(1, 4))))
        )
        worst = max(worst, ic.check_correlator_equality(e, a))
    elapsed = time.perf_counter() - t0
    _report(
        6,
        "doubled PM correlators equal Bell correlators (500 instances)",
        worst < 1e-12 and elapsed < 5.0,
        f"worst deviation={worst:.2e}, {elapsed:.2f}s",
    )


def test_07_every_qubit_behaviour_has_a_four_message_model():
    rng = np.random.default_rng(707)
    t0 = time.perf_counter()
    worst = 0.0
    all_inside = True
    for _ in range(50):
        n_x, n_y = int(rng.integers(2, 9)), int(rng.integers(2, 7))
        states = tuple(_random_state(rng) for _ in range(n_x))
        meas = []
        for _ in range(n_y):
            s = rng.uniform(0.2, 0.8)
            v = rng.normal(size=3)
            v *= rng.uniform(0, 1) * min(s, 1 - s) / np.linalg.norm(v)
            meas.append(ic.DichotomicMeasurement(ic.QubitOperator(s, v)))
        behavior = ic.pm_behavior(ic.Ensemble(states), ic.Assemblage(tuple(meas)))
        verdict = ic.fw_membership(behavior.data, ic.PMPolytope(4, n_x, n_y))
        if not (verdict.is_inside and verdict.reconstruction_error < 1e-6):
            all_inside = False
            break
        worst = max(worst, verdict.reconstruction_error)
    elapsed = time.perf_counter() - t0
    _report(
        7,
        "50 random qubit scenarios admit four-message models",
        all_inside and elapsed < 60.0,
        f"worst distance={worst:.2e}, {elapsed:.1f}s",
    )


def test_08_snub_cube_three_message_violation():
    # Stated criterion: the 6-eigenstate x 24-snub-cube behaviour lies outside
    # the three-message polytope (mirrored set as fallback).  The membership
    # runs below decide it; see the failure line for what was actually found.
    e = ic.pauli_eigenstate_ensemble()
    t0 = time.perf_counter()
    outcomes = {}
    witness_ok = False
    for label, mirror in (("generated", False), ("mirrored", True)):
        a = ic.snub_cube_set(1.0, mirror=mirror)
        behavior = ic.pm_behavior(e, a)
        oracle = ic.PMPolytope(3, len(e), len(a))
        verdict = ic.fw_membership(behavior.data, oracle, max_iter=4000)
        outcomes[label] = verdict
        if verdict.is_outside:
            w = verdict.witness
            _, fresh_l = oracle.lmo(w.M)
            witness_ok = (
                w.Q - w.L > 0 and abs(fresh_l - w.L) < 1e-10
            )
            break
    elapsed = time.perf_counter() - t0
    detail = ", ".join(
        f"{label}: {v.status}"
        + (
            f" (decomposition error {v.reconstruction_error:.1e})"
            if v.is_inside
            else ""
        )
        for label, v in outcomes.items()
    )
    ok = any(v.is_outside for v in outcomes.values()) and witness_ok and elapsed < 600.0
    _report(
        8,
        "eigenstates x snub cube escape the three-message polytope",
        ok,
        detail + f", {elapsed:.1f}s; see notes/decisions.md: both chiralities "
        "admit verified three-message decompositions, so this criterion is "
        "recorded as unattainable",
    )


def test_09_no_violation_at_grothendieck_lower_bound():
    rng = np.random.default_rng(909)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        n_b = int(rng.integers(2, 6))
        dirs = rng.normal(size=(n_b, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        a = ic.Assemblage(
            tuple(ic.DichotomicMeasurement.noisy_projective(d, 0.6875) for d in dirs)
        )
        _, gap = ic.seesaw_ensemble_search(a, 2, rounds=20, n_states=8, rng=rng)
        worst = max(worst, gap)
    elapsed = time.perf_counter() - t0
    _report(
        9,
        "see-saw never certifies a violation at visibility 0.6875 (50 assemblages)",
        worst == 0.0 and elapsed < 600.0,
        f"worst gap={worst}, {elapsed:.1f}s",
    )


def test_10_membership_oracle_equivalence():
    rng = np.random.default_rng(1010)
    t0 = time.perf_counter()
    agreements = 0
    disagreements = 0
    for _ in range(100):
        n_x, n_y = int(rng.integers(2, 4)), int(rng.integers(1, 3))
        verts = np.array(
            [s.vector().ravel() for s in ic.enumerate_pm_strategies(2, n_x, n_y)]
        )
        if rng.uniform() < 0.5:
            idx = rng.choice(len(verts), size=4)
            point = rng.dirichlet(np.ones(4)) @ verts[idx]
        else:
            raw = rng.uniform(size=(n_x, n_y, 2))
            raw /= raw.sum(axis=2, keepdims=True)
            point = raw.ravel()
        fw = ic.fw_membership(point, ic.PMPolytope(2, n_x, n_y))
        if fw.status == "undecided":
            continue  # declared tolerance band
        bf = ic.brute_force_membership(point, verts)
        if fw.status == bf.status:
            agreements += 1
        else:
            disagreements += 1
    elapsed = time.perf_counter() - t0
    _report(
        10,
        "Frank-Wolfe agrees with the phase-1 simplex on 100 tiny instances",
        disagreements == 0 and agreements >= 90 and elapsed < 30.0,
        f"{agreements} agree, {disagreements} disagree, {elapsed:.1f}s",
    )


def test_11_witness_transfer_bound_equality():
    rng = np.random.default_rng(1111)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        n_a, n_b = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        top = rng.normal(size=(n_a, n_b))
        doubled = np.vstack([top, -top])
        out = ic.map_pm_witness_to_bell(ic.Witness(doubled, 0.0, 0.0))
        _, l_bell = ic.bell_lmo(out.M)
        _, l_pm = ic.pm_lmo(np.stack([out.M, -out.M], axis=-1), 2)
        worst = max(worst, abs(l_bell - l_pm))
    elapsed = time.perf_counter() - t0
    _report(
        11,
        "PM and Bell classical bounds coincide on 100 doubled witnesses",
        worst <= 1e-10 and elapsed < 10.0,
        f"worst gap={worst:.2e}, {elapsed:.1f}s",
    )
