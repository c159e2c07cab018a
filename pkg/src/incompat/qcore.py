"""Bloch-vector algebra for qubit states, dichotomic effects, and two-qubit operators.

Everything downstream (joint-measurability checks, behaviour tables, witness
pipelines) is built on 2x2 Hermitian operators written as ``s*I + v.sigma``
with real ``s`` and real 3-vector ``v``.  In this form eigenvalues, operator
norms, traces of products and white-noise mixing are all closed form, so no
iterative eigensolver is ever needed.  Dense 4x4 matrices appear only where a
tensor product is unavoidable (the maximally entangled state and Bell-type
operators).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

# Validity checks (positivity, normalisation) use ATOL_VALID; closed-form
# algebraic identities are held to the tighter ATOL_ALGEBRA.
ATOL_VALID = 1e-10
ATOL_ALGEBRA = 1e-12

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENT_2 = np.eye(2, dtype=complex)


def _as_vec3(v: Iterable[float]) -> np.ndarray:
    arr = np.asarray(tuple(v), dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected a real 3-vector, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class QubitOperator:
    """Hermitian 2x2 operator ``s*I + v[0]*sx + v[1]*sy + v[2]*sz``.

    Hermiticity is structural: ``s`` and ``v`` are real by construction.
    Eigenvalues are ``s + |v|`` and ``s - |v|``.
    """

    s: float
    v: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self) -> None:
        object.__setattr__(self, "s", float(self.s))
        vec = _as_vec3(self.v).copy()
        vec.setflags(write=False)
        object.__setattr__(self, "v", vec)

    @property
    def vnorm(self) -> float:
        return float(np.linalg.norm(self.v))

    def trace(self) -> float:
        return 2.0 * self.s

    def eigenvalues(self) -> tuple[float, float]:
        """Eigenvalues in increasing order."""
        r = self.vnorm
        return (self.s - r, self.s + r)

    def matrix(self) -> np.ndarray:
        """Dense 2x2 complex matrix in the computational basis."""
        vx, vy, vz = self.v
        return np.array(
            [[self.s + vz, vx - 1j * vy], [vx + 1j * vy, self.s - vz]],
            dtype=complex,
        )

    def __add__(self, other: "QubitOperator") -> "QubitOperator":
        return QubitOperator(self.s + other.s, self.v + other.v)

    def __sub__(self, other: "QubitOperator") -> "QubitOperator":
        return QubitOperator(self.s - other.s, self.v - other.v)

    def __neg__(self) -> "QubitOperator":
        return QubitOperator(-self.s, -self.v)

    def __mul__(self, scalar: float) -> "QubitOperator":
        return QubitOperator(self.s * scalar, self.v * scalar)

    __rmul__ = __mul__

    def isclose(self, other: "QubitOperator", atol: float = ATOL_ALGEBRA) -> bool:
        return abs(self.s - other.s) <= atol and bool(
            np.all(np.abs(self.v - other.v) <= atol)
        )

    def to_json_dict(self) -> dict:
        return {"s": self.s, "v": [float(c) for c in self.v]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "QubitOperator":
        return cls(float(data["s"]), [float(c) for c in data["v"]])

    @classmethod
    def identity(cls) -> "QubitOperator":
        return cls(1.0, (0.0, 0.0, 0.0))

    @classmethod
    def zero(cls) -> "QubitOperator":
        return cls(0.0, (0.0, 0.0, 0.0))

    @classmethod
    def pauli(cls, axis: str) -> "QubitOperator":
        v = {"x": (1.0, 0, 0), "y": (0, 1.0, 0), "z": (0, 0, 1.0)}[axis]
        return cls(0.0, v)


def trace_product(a: QubitOperator, b: QubitOperator) -> float:
    """tr(A B) = 2(s_A s_B + v_A . v_B) for Hermitian Bloch-form operators."""
    return 2.0 * (a.s * b.s + float(np.dot(a.v, b.v)))


def operator_norm(op: QubitOperator) -> float:
    """Spectral norm, max(|s + |v||, |s - |v||)."""
    r = op.vnorm
    return max(abs(op.s + r), abs(op.s - r))


def transpose(op: QubitOperator) -> QubitOperator:
    """Matrix transpose in the computational basis: flips the sigma_y component."""
    vx, vy, vz = op.v
    return QubitOperator(op.s, (vx, -vy, vz))


@dataclass(frozen=True)
class QubitState:
    """Density operator; ``op`` must have s = 1/2 and |v| <= 1/2 to be valid."""

    op: QubitOperator

    @property
    def bloch(self) -> np.ndarray:
        """Conventional Bloch vector ``r`` with rho = (I + r.sigma)/2, so r = 2v."""
        return 2.0 * self.op.v

    @property
    def is_pure(self) -> bool:
        return abs(np.linalg.norm(self.bloch) - 1.0) <= ATOL_VALID

    @classmethod
    def from_bloch(cls, r: Iterable[float]) -> "QubitState":
        return cls(QubitOperator(0.5, 0.5 * _as_vec3(r)))

    @classmethod
    def pure(cls, direction: Iterable[float]) -> "QubitState":
        """Pure state along a (not necessarily normalised) Bloch direction."""
        d = _as_vec3(direction)
        n = np.linalg.norm(d)
        if n == 0.0:
            raise ValueError("pure state needs a nonzero direction")
        return cls.from_bloch(d / n)

    @classmethod
    def maximally_mixed(cls) -> "QubitState":
        return cls(QubitOperator(0.5, (0.0, 0.0, 0.0)))

    def complement(self) -> "QubitState":
        """The state I - rho (trace one again for qubits)."""
        return QubitState(QubitOperator(1.0 - self.op.s, -self.op.v))

    def to_json_dict(self) -> dict:
        return self.op.to_json_dict()

    @classmethod
    def from_json_dict(cls, data: dict) -> "QubitState":
        return cls(QubitOperator.from_json_dict(data))


@dataclass(frozen=True)
class DichotomicMeasurement:
    """Two-outcome POVM stored through its first effect; effect1 = I - effect0."""

    effect0: QubitOperator

    @property
    def effect1(self) -> QubitOperator:
        return QubitOperator(1.0 - self.effect0.s, -self.effect0.v)

    @property
    def observable(self) -> QubitOperator:
        """effect0 - effect1 = (2s - 1) I + 2 v . sigma."""
        return QubitOperator(2.0 * self.effect0.s - 1.0, 2.0 * self.effect0.v)

    @property
    def is_unbiased(self) -> bool:
        """True when tr(effect0) = 1, i.e. the observable is traceless."""
        return abs(self.effect0.s - 0.5) <= ATOL_VALID

    @property
    def visibility(self) -> float:
        """|2v|; for an unbiased noisy projective measurement this is eta."""
        return 2.0 * self.effect0.vnorm

    @classmethod
    def projective(cls, direction: Iterable[float]) -> "DichotomicMeasurement":
        return cls.noisy_projective(direction, 1.0)

    @classmethod
    def noisy_projective(
        cls, direction: Iterable[float], eta: float
    ) -> "DichotomicMeasurement":
        """effect0 = eta |phi><phi| + (1 - eta) I/2 along the given Bloch direction."""
        d = _as_vec3(direction)
        n = np.linalg.norm(d)
        if n == 0.0:
            raise ValueError("projective measurement needs a nonzero direction")
        return cls(QubitOperator(0.5, (0.5 * eta / n) * d))

    @classmethod
    def trivial(cls) -> "DichotomicMeasurement":
        return cls(QubitOperator(0.5, (0.0, 0.0, 0.0)))

    def to_json_dict(self) -> dict:
        return self.effect0.to_json_dict()

    @classmethod
    def from_json_dict(cls, data: dict) -> "DichotomicMeasurement":
        return cls(QubitOperator.from_json_dict(data))


def apply_white_noise(
    m: DichotomicMeasurement, eta: float
) -> DichotomicMeasurement:
    """Mix each effect with tr(effect) I/2: keeps s, scales v by eta."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"visibility must lie in [0, 1], got {eta}")
    e = m.effect0
    return DichotomicMeasurement(QubitOperator(e.s, eta * e.v))


def born_pm(rho: QubitState, m: DichotomicMeasurement) -> tuple[float, float]:
    """Outcome probabilities (tr(rho B_0), tr(rho B_1))."""
    p0 = trace_product(rho.op, m.effect0)
    return (p0, 1.0 - p0)


@dataclass(frozen=True)
class TwoQubitOperator:
    """Dense 4x4 Hermitian operator on C^2 (x) C^2."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {mat.shape}")
        if np.max(np.abs(mat - mat.conj().T)) > ATOL_ALGEBRA:
            raise ValueError("matrix is not Hermitian within 1e-12")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    def norm(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvalsh(self.matrix))))

    def expectation(self, vec: np.ndarray) -> float:
        """<vec| M |vec> for a normalised 4-vector."""
        return float(np.real(np.conj(vec) @ (self.matrix @ vec)))

    def to_json_dict(self) -> dict:
        return {
            "matrix": [
                [[float(z.real), float(z.imag)] for z in row]
                for row in self.matrix
            ]
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "TwoQubitOperator":
        rows = data["matrix"]
        mat = np.array(
            [[complex(re, im) for re, im in row] for row in rows], dtype=complex
        )
        return cls(mat)


PHI_PLUS_VEC = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)


def max_entangled_2() -> TwoQubitOperator:
    """Projector onto (|00> + |11>)/sqrt(2)."""
    return TwoQubitOperator(np.outer(PHI_PLUS_VEC, PHI_PLUS_VEC.conj()))


def born_bell_phi_plus(
    a: DichotomicMeasurement, b: DichotomicMeasurement
) -> np.ndarray:
    """Joint table p(i, j) = <phi+| A_i (x) B_j |phi+>, computed densely."""
    a_eff = (a.effect0.matrix(), a.effect1.matrix())
    b_eff = (b.effect0.matrix(), b.effect1.matrix())
    table = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            op = np.kron(a_eff[i], b_eff[j])
            table[i, j] = np.real(np.conj(PHI_PLUS_VEC) @ (op @ PHI_PLUS_VEC))
    return table


@dataclass(frozen=True)
class Ensemble:
    """Ordered list of trusted preparations, indexed by Alice's input x."""

    states: tuple[QubitState, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, idx: int) -> QubitState:
        return self.states[idx]

    def to_json_list(self) -> list:
        return [s.to_json_dict() for s in self.states]

    @classmethod
    def from_json_list(cls, data: Sequence[dict]) -> "Ensemble":
        return cls(tuple(QubitState.from_json_dict(d) for d in data))

    @classmethod
    def from_bloch_vectors(cls, vectors: Iterable[Iterable[float]]) -> "Ensemble":
        return cls(tuple(QubitState.from_bloch(r) for r in vectors))


@dataclass(frozen=True)
class Assemblage:
    """Ordered list of dichotomic measurements, indexed by Bob's input y."""

    measurements: tuple[DichotomicMeasurement, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "measurements", tuple(self.measurements))

    def __len__(self) -> int:
        return len(self.measurements)

    def __iter__(self):
        return iter(self.measurements)

    def __getitem__(self, idx: int) -> DichotomicMeasurement:
        return self.measurements[idx]

    @property
    def all_unbiased(self) -> bool:
        return all(m.is_unbiased for m in self.measurements)

    def to_json_list(self) -> list:
        return [m.to_json_dict() for m in self.measurements]

    @classmethod
    def from_json_list(cls, data: Sequence[dict]) -> "Assemblage":
        return cls(tuple(DichotomicMeasurement.from_json_dict(d) for d in data))


@dataclass(frozen=True)
class Violation:
    """First invariant breach found by validate(): which member and what failed."""

    index: int
    kind: str
    message: str


def _validate_state(rho: QubitState, idx: int) -> Violation | None:
    if abs(rho.op.s - 0.5) > ATOL_VALID:
        return Violation(idx, "trace", f"state {idx} has trace {rho.op.trace():.6g} != 1")
    if rho.op.vnorm > rho.op.s + ATOL_VALID:
        return Violation(
            idx, "psd", f"state {idx} has |v| = {rho.op.vnorm:.6g} > s = {rho.op.s:.6g}"
        )
    return None


def _validate_measurement(m: DichotomicMeasurement, idx: int) -> Violation | None:
    e = m.effect0
    if not -ATOL_VALID <= e.s <= 1.0 + ATOL_VALID:
        return Violation(idx, "psd", f"effect {idx} has s = {e.s:.6g} outside [0, 1]")
    if e.vnorm > e.s + ATOL_VALID:
        return Violation(
            idx, "psd", f"effect {idx} has |v| = {e.vnorm:.6g} > s = {e.s:.6g}"
        )
    if e.s + e.vnorm > 1.0 + ATOL_VALID:
        return Violation(
            idx,
            "leq_identity",
            f"effect {idx} has s + |v| = {e.s + e.vnorm:.6g} > 1",
        )
    return None


def validate(obj: Union[Ensemble, Assemblage]) -> Violation | None:
    """Check all type invariants within 1e-10; return the first violation or None."""
    if isinstance(obj, Ensemble):
        if len(obj) == 0:
            return Violation(-1, "empty", "ensemble has no states")
        for idx, rho in enumerate(obj):
            issue = _validate_state(rho, idx)
            if issue is not None:
                return issue
        return None
    if isinstance(obj, Assemblage):
        if len(obj) == 0:
            return Violation(-1, "empty", "assemblage has no measurements")
        for idx, m in enumerate(obj):
            issue = _validate_measurement(m, idx)
            if issue is not None:
                return issue
        return None
    raise TypeError(f"validate expects Ensemble or Assemblage, got {type(obj)!r}")
