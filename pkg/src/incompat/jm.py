"""Joint-measurability decisions for finite sets of dichotomic qubit measurements.

Three routes are provided, matching how much structure the input has:

* a closed-form norm criterion for pairs of unbiased measurements,
* the exact visibility threshold for the noisy Pauli triple,
* a one-sided feasibility search for arbitrary finite assemblages that looks
  for a mother POVM whose deterministic post-processings reproduce every
  measurement.

The feasibility search parametrises the mother by one effect per deterministic
response function lambda: y -> b (2^N outcomes for N measurements).  In Bloch
coordinates the constraint set is the intersection of a product of ice-cream
cones (positivity of each effect) with an affine subspace (completeness plus
the marginalisation identities), so Dykstra's alternating projections apply
with closed-form projections on both sides.  The search never claims
incompatibility: it returns a verified mother POVM or Undecided.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .qcore import (
    ATOL_VALID,
    Assemblage,
    DichotomicMeasurement,
    QubitOperator,
    operator_norm,
)

MAX_SETTINGS = 10  # 2^10 mother outcomes; beyond this the parent blows up


@dataclass(frozen=True)
class MotherPOVM:
    """Parent measurement plus the deterministic response table.

    responses[k][y] is the outcome assigned to measurement y when the parent
    yields outcome k, so marginalising the effects over response classes must
    reproduce the original assemblage.
    """

    effects: tuple[QubitOperator, ...]
    responses: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.effects) != len(self.responses):
            raise ValueError("one response row is required per effect")

    @property
    def n_outcomes(self) -> int:
        return len(self.effects)

    @property
    def n_settings(self) -> int:
        return len(self.responses[0]) if self.responses else 0

    def marginal(self, y: int, b: int) -> QubitOperator:
        """Sum of parent effects mapped to outcome b of measurement y."""
        total = QubitOperator.zero()
        for effect, resp in zip(self.effects, self.responses):
            if resp[y] == b:
                total = total + effect
        return total

    def completeness_error(self) -> float:
        total = QubitOperator.zero()
        for effect in self.effects:
            total = total + effect
        return max(abs(total.s - 1.0), float(np.max(np.abs(total.v))))

    def min_eigenvalue(self) -> float:
        return min(e.s - e.vnorm for e in self.effects)

    def reconstruction_error(self, a: Assemblage) -> float:
        """Largest Bloch-coordinate deviation between marginals and targets."""
        worst = 0.0
        for y, m in enumerate(a):
            marg = self.marginal(y, 0)
            worst = max(
                worst,
                abs(marg.s - m.effect0.s),
                float(np.max(np.abs(marg.v - m.effect0.v))),
            )
        return worst

    def is_valid_for(self, a: Assemblage, tol: float) -> bool:
        return (
            self.min_eigenvalue() >= -tol
            and self.completeness_error() <= tol
            and self.reconstruction_error(a) <= tol
        )

    def to_json_dict(self) -> dict:
        return {
            "effects": [e.to_json_dict() for e in self.effects],
            "responses": [list(r) for r in self.responses],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "MotherPOVM":
        return cls(
            tuple(QubitOperator.from_json_dict(e) for e in data["effects"]),
            tuple(tuple(int(b) for b in row) for row in data["responses"]),
        )


@dataclass(frozen=True)
class JMVerdict:
    """Outcome of a joint-measurability decision.

    status is one of "jm" (with a verified mother POVM), "not_jm" (with the
    analytic criterion that rejected), or "undecided" (feasibility residual
    after the iteration budget).
    """

    status: str
    mother: MotherPOVM | None = None
    reason: str | None = None
    residual: float | None = None
    iterations: int | None = None

    @property
    def is_jm(self) -> bool:
        return self.status == "jm"

    def to_json_dict(self) -> dict:
        out: dict = {"verdict": self.status}
        if self.mother is not None:
            out["mother"] = self.mother.to_json_dict()
        if self.reason is not None:
            out["reason"] = self.reason
        if self.residual is not None:
            out["residual"] = self.residual
        if self.iterations is not None:
            out["iterations"] = self.iterations
        return out


def busch_pair_criterion(
    m0: DichotomicMeasurement, m1: DichotomicMeasurement
) -> tuple[bool, float]:
    """Norm criterion for a pair of unbiased dichotomic qubit measurements.

    The pair is jointly measurable iff ||B0 + B1|| + ||B0 - B1|| <= 2 for the
    observables B_y; the returned margin is 2 minus that sum, so nonnegative
    margins certify compatibility.  Raises for biased inputs, where this
    criterion does not apply.
    """
    for idx, m in enumerate((m0, m1)):
        if not m.is_unbiased:
            raise ValueError(
                f"measurement {idx} is biased (tr(effect0) != 1); "
                "the pair norm criterion applies to unbiased measurements only"
            )
    b0, b1 = m0.observable, m1.observable
    margin = 2.0 - operator_norm(b0 + b1) - operator_norm(b0 - b1)
    return (margin >= -ATOL_VALID, margin)


def mother_povm_xz(eta: float) -> MotherPOVM:
    """Four-outcome parent E_ij = (I + eta (i sx + j sz))/4 for the noisy X/Z pair.

    Positivity requires eta <= 1/sqrt(2).  Marginalising over j reproduces the
    noisy x measurement, marginalising over i the noisy z measurement.
    """
    if not 0.0 <= eta <= 1.0 / math.sqrt(2.0) + ATOL_VALID:
        raise ValueError(
            f"eta = {eta} leaves the parent non-positive; need 0 <= eta <= 1/sqrt(2)"
        )
    effects = []
    responses = []
    for i in (1.0, -1.0):
        for j in (1.0, -1.0):
            effects.append(QubitOperator(0.25, (0.25 * eta * i, 0.0, 0.25 * eta * j)))
            responses.append((0 if i > 0 else 1, 0 if j > 0 else 1))
    return MotherPOVM(tuple(effects), tuple(responses))


def noisy_pauli_triple_jm(eta: float) -> bool:
    """Exact threshold for the noisy Pauli triple: compatible iff eta <= 1/sqrt(3)."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"visibility must lie in [0, 1], got {eta}")
    return eta <= 1.0 / math.sqrt(3.0) + 1e-12


def _cone_project(rows: np.ndarray) -> np.ndarray:
    """Project rows (s, vx, vy, vz) onto the PSD (ice-cream) cone |v| <= s."""
    out = rows.copy()
    s = rows[:, 0]
    r = np.linalg.norm(rows[:, 1:], axis=1)
    inside = s >= r
    below = s <= -r
    boundary = ~inside & ~below
    out[below] = 0.0
    if np.any(boundary):
        # strictly -r < s < r here, so r > 0
        t = 0.5 * (s[boundary] + r[boundary])
        out[boundary, 0] = t
        out[boundary, 1:] = rows[boundary, 1:] * (t / r[boundary])[:, None]
    return out


def _cone_violation(rows: np.ndarray) -> float:
    s = rows[:, 0]
    r = np.linalg.norm(rows[:, 1:], axis=1)
    return float(np.max(np.maximum(r - s, 0.0)))


def _response_table(n_settings: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.product((0, 1), repeat=n_settings))


def jm_feasibility(
    a: Assemblage, max_iter: int = 5000, tol: float = 1e-9
) -> JMVerdict:
    """Search for a mother POVM reproducing the assemblage; one-sided by design.

    Runs Dykstra's alternating projections between the product of positivity
    cones and the affine subspace {sum_k E_k = I, sum_{k: k(y)=b} E_k = B_b|y}.
    Returns a verified mother on success and Undecided otherwise; it never
    claims incompatibility, which is the job of analytic criteria or of a
    downstream classical-polytope violation.
    """
    n = len(a)
    if n == 0:
        raise ValueError("assemblage is empty")
    if n > MAX_SETTINGS:
        raise ValueError(
            f"{n} measurements give 2^{n} mother outcomes; limit is {MAX_SETTINGS}"
        )
    responses = _response_table(n)
    n_out = len(responses)

    # Affine constraints act identically on each Bloch coordinate: row 0 is
    # completeness, row y+1 collects the outcome-0 class of measurement y.
    incidence = np.zeros((n + 1, n_out))
    incidence[0, :] = 1.0
    for k, resp in enumerate(responses):
        for y in range(n):
            if resp[y] == 0:
                incidence[y + 1, k] = 1.0
    pinv = np.linalg.pinv(incidence)

    targets = np.zeros((n + 1, 4))
    targets[0, 0] = 1.0
    for y, m in enumerate(a):
        targets[y + 1, 0] = m.effect0.s
        targets[y + 1, 1:] = m.effect0.v

    def affine_project(rows: np.ndarray) -> np.ndarray:
        return rows - pinv @ (incidence @ rows - targets)

    x = affine_project(np.zeros((n_out, 4)))
    correction = np.zeros_like(x)
    residual = math.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        y_cone = _cone_project(x + correction)
        correction = x + correction - y_cone
        x = affine_project(y_cone)
        residual = _cone_violation(x)
        if residual < tol:
            break

    if residual >= tol:
        return JMVerdict("undecided", residual=residual, iterations=iterations)

    # Final cleanup: make positivity exact; affine constraints then hold to
    # within the residual, which the validity check re-verifies.
    rows = _cone_project(x)
    effects = tuple(QubitOperator(row[0], row[1:]) for row in rows)
    mother = MotherPOVM(effects, responses)
    check_tol = max(10.0 * tol, 1e-8)
    if not mother.is_valid_for(a, check_tol):
        return JMVerdict("undecided", residual=residual, iterations=iterations)
    return JMVerdict("jm", mother=mother, iterations=iterations)
