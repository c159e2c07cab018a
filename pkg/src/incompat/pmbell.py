"""Transfer machinery between prepare-and-measure and Bell certificates.

For unbiased dichotomic measurements the two pictures carry the same
correlations: append the complement I - rho_x of every trusted state (which
flips the sign of its correlator row), turn each state into a dichotomic
measurement with first effect rho_x^T, and the single correlators of the
doubled PM scenario coincide exactly with the full correlators on the
maximally entangled state.  A separating witness therefore crosses over with
its classical bound intact: the PM bound over two-message strategies on the
doubled scenario equals the local-hidden-variable bound of the same
(antisymmetrised) coefficients.  This module implements the crossing in both
the value-level check and the end-to-end certification pipeline, plus a
see-saw search over ensembles for the existential quantifier.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .correlations import (
    bell_behavior_phi_plus,
    pm_behavior,
    pm_correlators,
    phi_plus_correlator,
    to_correlators,
)
from .polytope import (
    MembershipVerdict,
    PMPolytope,
    Witness,
    bell_lmo,
    fw_membership,
    pm_lmo,
)
from .qcore import (
    Assemblage,
    DichotomicMeasurement,
    Ensemble,
    QubitState,
    transpose,
    validate,
)

WITNESS_TRANSFER_TOL = 1e-8


def double_ensemble(e: Ensemble) -> Ensemble:
    """Original states followed by their complements I - rho_x.

    The appended half mirrors the correlator rows: P_(x+N),y = -P_x,y for
    every unbiased measurement.
    """
    doubled = tuple(e.states) + tuple(rho.complement() for rho in e.states)
    return Ensemble(doubled)


def states_to_measurements(e: Ensemble) -> Assemblage:
    """Dichotomic measurements with first effect rho_x^T.

    The associated observables 2 rho_x^T - I are traceless, which is exactly
    what the maximally-entangled correlator identity requires.
    """
    return Assemblage(
        tuple(DichotomicMeasurement(transpose(rho.op)) for rho in e.states)
    )


def _require_unbiased(a: Assemblage) -> None:
    for y, m in enumerate(a):
        if not m.is_unbiased:
            raise ValueError(
                f"measurement {y} is biased; the PM-Bell transfer needs tr(B_y) = 0"
            )


def check_correlator_equality(e: Ensemble, a: Assemblage) -> float:
    """Max |C'_xy - P'_xy| between the doubled PM correlators and the Bell side.

    P' comes from Born-rule traces on the doubled ensemble; C' from the
    closed-form maximally-entangled correlator of the transposed-state
    measurements against the same Bob assemblage.  The identity is exact for
    unbiased measurements, so the return value is numerical noise.
    """
    _require_unbiased(a)
    doubled = double_ensemble(e)
    p_vals = pm_correlators(doubled, a).values
    alice = states_to_measurements(doubled)
    c_vals = np.empty_like(p_vals)
    for x, ma in enumerate(alice):
        for y, mb in enumerate(a):
            c_vals[x, y] = phi_plus_correlator(ma.observable, mb.observable)
    return float(np.max(np.abs(c_vals - p_vals)))


def _antisymmetrize(M: np.ndarray) -> np.ndarray:
    """Project doubled-scenario coefficients onto the sign-flip-symmetric form.

    The doubled classical set is invariant under swapping the two halves while
    negating, and doubled quantum points are themselves antisymmetric, so this
    projection never weakens a witness: Q is preserved and L cannot grow.
    """
    if M.shape[0] % 2 != 0:
        raise ValueError("a doubled-scenario witness needs an even number of rows")
    n = M.shape[0] // 2
    top = (M[:n] - M[n:]) / 2.0
    return np.vstack([top, -top])


def _embed_correlator_witness(W: np.ndarray) -> np.ndarray:
    """Behaviour-space coefficients whose strategy values equal sum W_xy P_xy."""
    return np.stack([W, -W], axis=-1)


def map_pm_witness_to_bell(
    witness: Witness, tol: float = WITNESS_TRANSFER_TOL
) -> Witness:
    """Cross a doubled-scenario PM correlator witness into the Bell scenario.

    The coefficient matrix transfers unchanged (after antisymmetrisation,
    which is exact on doubled points).  The local bound is recomputed exactly
    by sign enumeration and must match the two-message PM bound recomputed by
    strategy enumeration: a mismatch would mean one of the oracles is broken,
    so it raises rather than returning.
    """
    M = _antisymmetrize(np.asarray(witness.M, dtype=float))
    _, l_bell = bell_lmo(M)
    _, l_pm = pm_lmo(_embed_correlator_witness(M), d=2)
    if abs(l_bell - l_pm) > tol:
        raise AssertionError(
            f"oracle bounds disagree: bell {l_bell!r} vs pm {l_pm!r}"
        )
    return Witness(M, l_bell, witness.Q)


@dataclass(frozen=True)
class BellCertificate:
    """Violated correlator inequality on the physical (undoubled) Bell scenario.

    Coefficients are rescaled so the local bound is exactly 2, the CHSH
    normalisation, making quantum values comparable across scenario sizes.
    The quantum value is computed twice: from the closed-form correlators and
    from the dense Born rule on the maximally entangled state.
    """

    coefficients: np.ndarray
    local_bound: float
    quantum_value: float
    quantum_value_born: float
    alice: Assemblage

    def to_json_dict(self) -> dict:
        return {
            "coefficients": self.coefficients.tolist(),
            "local_bound": self.local_bound,
            "quantum_value": self.quantum_value,
            "quantum_value_born": self.quantum_value_born,
            "alice_effects": self.alice.to_json_list(),
        }


@dataclass(frozen=True)
class CertificationReport:
    """Everything produced by one certification run, JSON-serialisable."""

    d: int
    verdict: MembershipVerdict
    ensemble: Ensemble
    assemblage: Assemblage
    pm_witness: Witness | None = None
    bell: BellCertificate | None = None
    notes: tuple[str, ...] = ()
    wall_clock: float | None = None

    @property
    def certified_incompatible(self) -> bool:
        return self.bell is not None

    def to_json_dict(self, include_timings: bool = False) -> dict:
        out: dict = {
            "d": self.d,
            "ensemble": self.ensemble.to_json_list(),
            "assemblage": self.assemblage.to_json_list(),
            "result": self.verdict.to_json_dict(),
            "notes": list(self.notes),
        }
        if self.pm_witness is not None:
            out["pm_witness"] = self.pm_witness.to_json_dict()
        if self.bell is not None:
            out["bell_certificate"] = self.bell.to_json_dict()
        if include_timings and self.wall_clock is not None:
            out["wall_clock_seconds"] = self.wall_clock
        return out


def _undoubled_bell_certificate(
    M_doubled: np.ndarray,
    doubled_ensemble: Ensemble,
    a: Assemblage,
    tol: float,
) -> BellCertificate:
    """Reduce the doubled witness to the physical scenario and normalise L to 2."""
    n = M_doubled.shape[0] // 2
    top = M_doubled[:n]
    _, l_top = bell_lmo(top)
    if l_top <= 0.0:
        raise AssertionError("degenerate Bell witness: nonpositive local bound")
    coeff = (2.0 / l_top) * top
    _, l_check = bell_lmo(coeff)
    if abs(l_check - 2.0) > tol:
        raise AssertionError("local bound did not rescale to 2")

    alice_all = states_to_measurements(doubled_ensemble)
    alice = Assemblage(alice_all.measurements[:n])
    q_corr = 0.0
    for x, ma in enumerate(alice):
        for y, mb in enumerate(a):
            q_corr += coeff[x, y] * phi_plus_correlator(ma.observable, mb.observable)
    dense = to_correlators(bell_behavior_phi_plus(alice, a)).values
    q_born = float(np.sum(coeff * dense))
    if abs(q_corr - q_born) > 1e-9:
        raise AssertionError(
            f"correlator and Born-rule values disagree: {q_corr!r} vs {q_born!r}"
        )
    return BellCertificate(coeff, float(l_check), float(q_corr), q_born, alice)


def certify_incompatibility(
    a: Assemblage,
    e: Ensemble,
    d: int,
    eps_in: float = 1e-7,
    eps_out: float = 1e-7,
    max_iter: int = 2000,
) -> CertificationReport:
    """Decide whether the ensemble exposes the assemblage as non-classical.

    Doubles the ensemble with complements, tests the resulting behaviour
    against the d-message polytope, and, when the point falls outside with
    d = 2 and unbiased measurements, carries the witness across to a violated
    Bell inequality on the maximally entangled state.  Outside at d = 2 also
    establishes that the assemblage is not jointly measurable, since a jointly
    measurable set admits a two-message model for every ensemble.
    """
    start = time.perf_counter()
    for obj in (e, a):
        issue = validate(obj)
        if issue is not None:
            raise ValueError(f"invalid input: {issue.message}")
    doubled = double_ensemble(e)
    behavior = pm_behavior(doubled, a)
    oracle = PMPolytope(d, len(doubled), len(a))
    verdict = fw_membership(behavior.data, oracle, eps_in, eps_out, max_iter)

    notes: list[str] = []
    pm_witness: Witness | None = None
    bell_cert: BellCertificate | None = None
    if verdict.is_outside:
        assert verdict.witness is not None
        M_beh = verdict.witness.M
        # Reduce the behaviour-space witness to correlator coefficients; the
        # offset sum drops out of Q - L, so both sides shift consistently.
        W = (M_beh[:, :, 0] - M_beh[:, :, 1]) / 2.0
        offset = float(np.sum(M_beh[:, :, 0] + M_beh[:, :, 1]) / 2.0)
        p_corr = to_correlators(behavior).values
        pm_witness = Witness(W, verdict.witness.L - offset, verdict.witness.Q - offset)
        if d == 2 and a.all_unbiased:
            bell_witness = map_pm_witness_to_bell(pm_witness)
            q_check = float(np.sum(bell_witness.M * p_corr))
            if abs(q_check - pm_witness.Q) > 1e-8:
                notes.append(
                    "witness antisymmetrisation shifted the achieved value; "
                    "using the recomputed one"
                )
            bell_cert = _undoubled_bell_certificate(
                bell_witness.M, doubled, a, WITNESS_TRANSFER_TOL
            )
            notes.append(
                "outside the two-message polytope: the assemblage is not jointly "
                "measurable, and the attached Bell inequality is violated on the "
                "maximally entangled state"
            )
        elif d == 2:
            notes.append(
                "outside the two-message polytope, but the Bell transfer needs "
                "unbiased measurements; no Bell certificate attached"
            )
    elif verdict.is_inside:
        notes.append(
            f"the doubled behaviour admits a {d}-message classical model for "
            "this ensemble; no conclusion about other ensembles"
        )

    return CertificationReport(
        d=d,
        verdict=verdict,
        ensemble=e,
        assemblage=a,
        pm_witness=pm_witness,
        bell=bell_cert,
        notes=tuple(notes),
        wall_clock=time.perf_counter() - start,
    )


def _pauli_eigenstate_seeds(n_states: int) -> list[np.ndarray]:
    axes = [
        np.array([1.0, 0.0, 0.0]),
        np.array([-1.0, 0.0, 0.0]),
        np.array([0.0, 1.0, 0.0]),
        np.array([0.0, -1.0, 0.0]),
        np.array([0.0, 0.0, 1.0]),
        np.array([0.0, 0.0, -1.0]),
    ]
    return axes[:n_states]


def _diagonal_seeds(a: Assemblage, n_states: int) -> list[np.ndarray]:
    """Bloch directions bisecting pairs of measurement axes, with complements.

    These are the natural candidates for correlator-type violations: for two
    orthogonal measurement directions they are exactly the optimal settings.
    """
    dirs = []
    axes = [m.effect0.v for m in a]
    for i in range(len(axes)):
        for j in range(i + 1, len(axes)):
            ni = np.linalg.norm(axes[i])
            nj = np.linalg.norm(axes[j])
            if ni == 0.0 or nj == 0.0:
                continue
            u, v = axes[i] / ni, axes[j] / nj
            for cand in (u + v, u - v):
                norm = np.linalg.norm(cand)
                if norm > 1e-12:
                    dirs.append(cand / norm)
                    dirs.append(-cand / norm)
    while len(dirs) < n_states:
        dirs.extend(_pauli_eigenstate_seeds(6))
    return dirs[:n_states]


def _random_pure_ensemble(n_states: int, rng: np.random.Generator) -> Ensemble:
    vecs = rng.normal(size=(n_states, 3))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    return Ensemble(tuple(QubitState.pure(v) for v in vecs))


def _normalized_violation(witness: Witness, d: int) -> float:
    """Q - L of the correlator witness rescaled to classical bound 2."""
    W = (witness.M[:, :, 0] - witness.M[:, :, 1]) / 2.0
    offset = float(np.sum(witness.M[:, :, 0] + witness.M[:, :, 1]) / 2.0)
    _, l_corr = pm_lmo(_embed_correlator_witness(W), d)
    q_corr = witness.Q - offset
    if l_corr <= 0.0:
        return 0.0
    scale = 2.0 / l_corr
    return scale * q_corr - 2.0


def seesaw_ensemble_search(
    a: Assemblage,
    d: int,
    rounds: int,
    n_states: int = 8,
    rng: np.random.Generator | None = None,
    initial: Ensemble | None = None,
) -> tuple[Ensemble, float]:
    """Alternating search for an ensemble whose behaviour escapes the polytope.

    Each round runs the membership test on the current ensemble.  Outside: the
    witness fixes the states, each rho_x becoming the projector onto the top
    eigenvector of sum_yb M[x,y,b] B_b|y, the closed-form best response.
    Inside: restart, alternating random pure ensembles with ones seeded along
    pairwise bisectors of the measurement axes.  Returns the best ensemble
    found and its certified violation (Q - L of the correlator witness in the
    bound-2 normalisation), or the initial ensemble and 0.0 when every round
    stayed classical.
    """
    rng = rng if rng is not None else np.random.default_rng()
    if initial is not None:
        current = initial
        n_states = len(initial)
    else:
        current = _random_pure_ensemble(n_states, rng)
    first = current
    oracle = PMPolytope(d, n_states, len(a))
    best_gap = 0.0
    best_ensemble: Ensemble | None = None
    restart_count = 0
    for _ in range(rounds + 1):
        behavior = pm_behavior(current, a)
        verdict = fw_membership(behavior.data, oracle)
        if verdict.is_outside:
            assert verdict.witness is not None
            gap = _normalized_violation(verdict.witness, d)
            if gap > best_gap:
                best_gap = gap
                best_ensemble = current
            current = _climb(current, verdict.witness, a)
        else:
            if restart_count % 2 == 0:
                seeds = _diagonal_seeds(a, n_states)
                current = Ensemble(tuple(QubitState.pure(s) for s in seeds))
            else:
                current = _random_pure_ensemble(n_states, rng)
            restart_count += 1
    if best_ensemble is None:
        return first, 0.0
    return best_ensemble, best_gap


def _climb(e: Ensemble, witness: Witness, a: Assemblage) -> Ensemble:
    """Per-state best response to a behaviour witness, in closed form."""
    states = []
    for x, rho in enumerate(e):
        direction = np.zeros(3)
        for y, m in enumerate(a):
            direction += witness.M[x, y, 0] * m.effect0.v
            direction += witness.M[x, y, 1] * m.effect1.v
        norm = np.linalg.norm(direction)
        states.append(QubitState.pure(direction) if norm > 1e-12 else rho)
    return Ensemble(tuple(states))
