"""Membership tests for the classical polytopes of PM and Bell scenarios.

Two polytopes appear: the set of prepare-and-measure behaviours p(b|x,y)
reachable with d-valued classical messages plus shared randomness, whose
vertices are deterministic strategies (an encoding f: x -> a and a response
g: (a,y) -> b), and the Bell full-correlator polytope, whose vertices are the
rank-one sign matrices alpha_x beta_y.

Membership is decided by a fully corrective Frank-Wolfe loop driven by exact
enumeration oracles.  The loop maintains an explicit active vertex set and
reoptimises the convex weights exactly (a minimum-norm-point inner solver), so
an Inside verdict always ships with a sparse convex decomposition and an
Outside verdict with a separating witness whose classical bound comes from one
final exact oracle call.  A dense phase-1 simplex over an explicit vertex list
serves as an independent test oracle for the same question.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

DEFAULT_ORACLE_BUDGET = 10_000_000
DEFAULT_VERTEX_BUDGET = 10_000


class EnumerationBudgetError(ValueError):
    """Raised when an exact oracle would have to enumerate too many objects."""


@dataclass(frozen=True)
class PMStrategy:
    """Deterministic PM strategy: message f[x] in 0..d-1, response g[a][y] in {0,1}."""

    f: tuple[int, ...]
    g: tuple[tuple[int, ...], ...]

    def vector(self) -> np.ndarray:
        """Behaviour array v[x, y, b] = 1 when g[f[x]][y] == b."""
        n_x = len(self.f)
        n_y = len(self.g[0])
        arr = np.zeros((n_x, n_y, 2))
        for x, a in enumerate(self.f):
            for y in range(n_y):
                arr[x, y, self.g[a][y]] = 1.0
        return arr

    def to_json_dict(self) -> dict:
        return {"f": list(self.f), "g": [list(row) for row in self.g]}


@dataclass(frozen=True)
class SignAssignment:
    """Deterministic full-correlator vertex C_xy = alpha_x * beta_y."""

    alpha: tuple[int, ...]
    beta: tuple[int, ...]

    def vector(self) -> np.ndarray:
        return np.outer(self.alpha, self.beta).astype(float)

    def to_json_dict(self) -> dict:
        return {"alpha": list(self.alpha), "beta": list(self.beta)}


@dataclass(frozen=True)
class Witness:
    """Separating hyperplane: coefficients M, classical bound L, achieved Q > L."""

    M: np.ndarray
    L: float
    Q: float

    def __post_init__(self) -> None:
        arr = np.asarray(self.M, dtype=float).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "M", arr)
        object.__setattr__(self, "L", float(self.L))
        object.__setattr__(self, "Q", float(self.Q))

    @property
    def violation(self) -> float:
        return self.Q - self.L

    def to_json_dict(self) -> dict:
        return {
            "M": self.M.tolist(),
            "L": self.L,
            "Q": self.Q,
        }


@dataclass(frozen=True)
class MembershipVerdict:
    """Inside with a convex decomposition, Outside with a witness, or Undecided.

    Inside verdicts carry the active vertices (strategy objects where the
    oracle produced them, otherwise raw vertex rows) and their weights;
    Undecided verdicts carry two-sided bounds on the Euclidean distance from
    the point to the polytope.
    """

    status: str
    strategies: tuple | None = None
    vertices: np.ndarray | None = None
    weights: np.ndarray | None = None
    reconstruction_error: float | None = None
    witness: Witness | None = None
    distance_lower: float | None = None
    distance_upper: float | None = None
    iterations: int = 0

    @property
    def is_inside(self) -> bool:
        return self.status == "inside"

    @property
    def is_outside(self) -> bool:
        return self.status == "outside"

    def to_json_dict(self) -> dict:
        out: dict = {"verdict": self.status, "iterations": self.iterations}
        if self.strategies is not None:
            out["vertices"] = [s.to_json_dict() for s in self.strategies]
        elif self.vertices is not None:
            out["vertices"] = self.vertices.tolist()
        if self.weights is not None:
            out["weights"] = [float(w) for w in self.weights]
        if self.reconstruction_error is not None:
            out["reconstruction_error"] = self.reconstruction_error
        if self.witness is not None:
            out["witness"] = self.witness.to_json_dict()
        if self.distance_lower is not None:
            out["distance_bounds"] = [self.distance_lower, self.distance_upper]
        return out


# ---------------------------------------------------------------------------
# Exact linear maximisation oracles
# ---------------------------------------------------------------------------


def _lex_assignments(d: int, n: int, start: int, count: int) -> np.ndarray:
    """Rows start..start+count-1 of the lexicographic enumeration of {0..d-1}^n."""
    idx = np.arange(start, start + count)
    return np.stack(np.unravel_index(idx, (d,) * n), axis=1)


def pm_lmo(
    M: np.ndarray, d: int, budget: int = DEFAULT_ORACLE_BUDGET
) -> tuple[PMStrategy, float]:
    """Exact maximum of sum_xy M[x, y, g(f(x), y)] over deterministic strategies.

    Enumerates every encoding f in lexicographic order; for fixed f the best
    response picks, per message value and setting, the outcome with the larger
    group sum.  Ties resolve to the lowest message, lowest outcome, and first
    (lexicographically smallest) encoding, so runs are reproducible.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 3 or M.shape[2] != 2:
        raise ValueError(f"coefficient array must have shape (n_x, n_y, 2), got {M.shape}")
    n_x, n_y, _ = M.shape
    if d < 1:
        raise ValueError("message dimension must be positive")
    total = d**n_x
    if total > budget:
        raise EnumerationBudgetError(
            f"d^n_x = {total} encodings exceed the oracle budget {budget}"
        )
    # max_b(S_0, S_1) = S_0 + relu(S_1 - S_0), and the S_0 parts summed over
    # all messages telescope to sum(M[:, :, 0]) independently of f, so only
    # the groupwise sums of the outcome difference are needed per encoding.
    diff = M[:, :, 1] - M[:, :, 0]
    const = float(M[:, :, 0].sum())
    chunk = max(1, min(total, 1 << 16))
    best_value = -np.inf
    best_f: np.ndarray | None = None
    for start in range(0, total, chunk):
        count = min(chunk, total - start)
        F = _lex_assignments(d, n_x, start, count)
        vals = np.full(count, const)
        for a in range(d):
            D = (F == a).astype(float) @ diff
            np.maximum(D, 0.0, out=D)
            vals += D.sum(axis=1)
        k = int(np.argmax(vals))
        if vals[k] > best_value:
            best_value = float(vals[k])
            best_f = F[k].copy()
    assert best_f is not None
    return _pm_strategy_for_encoding(M, d, best_f)


def _pm_strategy_for_encoding(
    M: np.ndarray, d: int, f: np.ndarray
) -> tuple[PMStrategy, float]:
    """Best response table for a fixed encoding, with its exact value."""
    n_x, n_y, _ = M.shape
    flat = M.reshape(n_x, n_y * 2)
    group = np.stack([(f == a).astype(float) @ flat for a in range(d)])
    table = group.reshape(d, n_y, 2)
    g = tuple(tuple(int(b) for b in np.argmax(table[a], axis=1)) for a in range(d))
    strategy = PMStrategy(tuple(int(a) for a in f), g)
    value = float(table.max(axis=2).sum())
    return strategy, value


def _sign_rows(n: int) -> np.ndarray:
    """All sign vectors of length n, lexicographic with +1 before -1."""
    k = np.arange(1 << n)
    bits = (k[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1
    return 1.0 - 2.0 * bits


def bell_lmo(
    M: np.ndarray, budget: int = DEFAULT_ORACLE_BUDGET
) -> tuple[SignAssignment, float]:
    """Exact maximum of sum_xy M_xy alpha_x beta_y over sign assignments.

    Enumerates the smaller side; the other side follows as the sign of the
    accumulated column (ties to +1).
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise ValueError(f"coefficient matrix must be 2-d, got shape {M.shape}")
    n_a, n_b = M.shape
    swap = n_b < n_a
    work = M.T if swap else M
    n_enum = work.shape[0]
    if (1 << n_enum) > budget:
        raise EnumerationBudgetError(
            f"2^{n_enum} sign vectors exceed the oracle budget {budget}"
        )
    signs = _sign_rows(n_enum)
    G = signs @ work
    vals = np.abs(G).sum(axis=1)
    k = int(np.argmax(vals))
    lead = tuple(int(s) for s in signs[k])
    follow = tuple(1 if gv >= 0.0 else -1 for gv in G[k])
    alpha, beta = (follow, lead) if swap else (lead, follow)
    return SignAssignment(alpha, beta), float(vals[k])


def enumerate_pm_strategies(d: int, n_x: int, n_y: int) -> Iterator[PMStrategy]:
    """All deterministic PM strategies; exponential, for small test instances only."""
    responses = list(itertools.product((0, 1), repeat=n_y))
    for f in itertools.product(range(d), repeat=n_x):
        for g in itertools.product(responses, repeat=d):
            yield PMStrategy(f, g)


def enumerate_sign_assignments(n_a: int, n_b: int) -> Iterator[SignAssignment]:
    for alpha in itertools.product((1, -1), repeat=n_a):
        for beta in itertools.product((1, -1), repeat=n_b):
            yield SignAssignment(alpha, beta)


# ---------------------------------------------------------------------------
# Oracle adapters used by the Frank-Wolfe loop
# ---------------------------------------------------------------------------


class PMPolytope:
    """LMO adapter for the PM_d behaviour polytope of a fixed scenario shape.

    Internally picks whichever exact enumeration is cheaper for the shape:
    over encodings f (d^n_x candidates, the reference route) or over response
    tables g (2^(d n_y) candidates, each x then picking its best message).
    Both return exact maxima; only tie-breaking among equally good vertices
    differs, and each route is itself deterministic.
    """

    def __init__(
        self, d: int, n_x: int, n_y: int, budget: int = DEFAULT_ORACLE_BUDGET
    ) -> None:
        self.d = int(d)
        self.n_x = int(n_x)
        self.n_y = int(n_y)
        self.budget = int(budget)
        cost_f = self.d**self.n_x
        cost_g = 2 ** (self.d * self.n_y) if self.d * self.n_y < 60 else float("inf")
        if min(cost_f, cost_g) > self.budget:
            raise EnumerationBudgetError(
                f"PM oracle for d={d}, n_x={n_x}, n_y={n_y} exceeds budget {budget}"
            )
        self._use_g_route = cost_g < cost_f
        self._g_bits: np.ndarray | None = None
        self._f_masks: list[np.ndarray] | None = None
        # Membership loops call the oracle many times on one shape; the
        # one-hot encoding masks are worth caching when they fit comfortably.
        self._cache_masks = (not self._use_g_route) and (
            cost_f * self.n_x * self.d * 8 <= 256_000_000
        )

    @property
    def point_shape(self) -> tuple[int, ...]:
        return (self.n_x, self.n_y, 2)

    def lmo(self, M: np.ndarray) -> tuple[PMStrategy, float]:
        M = np.asarray(M, dtype=float).reshape(self.point_shape)
        if self._use_g_route:
            return self._lmo_over_responses(M)
        if self._cache_masks:
            return self._lmo_over_encodings(M)
        return pm_lmo(M, self.d, self.budget)

    def _lmo_over_encodings(self, M: np.ndarray) -> tuple[PMStrategy, float]:
        if self._f_masks is None:
            F = _lex_assignments(self.d, self.n_x, 0, self.d**self.n_x)
            self._f_masks = [(F == a).astype(float) for a in range(self.d)]
            self._f_table = F
        diff = M[:, :, 1] - M[:, :, 0]
        vals = np.full(self._f_table.shape[0], float(M[:, :, 0].sum()))
        for mask in self._f_masks:
            D = mask @ diff
            np.maximum(D, 0.0, out=D)
            vals += D.sum(axis=1)
        k = int(np.argmax(vals))
        return _pm_strategy_for_encoding(M, self.d, self._f_table[k])

    def _lmo_over_responses(self, M: np.ndarray) -> tuple[PMStrategy, float]:
        d, n_y = self.d, self.n_y
        if self._g_bits is None:
            k = np.arange(1 << (d * n_y))
            bits = (k[:, None] >> np.arange(d * n_y - 1, -1, -1)[None, :]) & 1
            self._g_bits = bits.astype(float)
        bits = self._g_bits
        base = M[:, :, 0].sum(axis=1)
        delta = (M[:, :, 1] - M[:, :, 0]).T  # (n_y, n_x)
        per_message = (bits.reshape(-1, n_y) @ delta).reshape(-1, d, self.n_x)
        totals = (base[None, None, :] + per_message).max(axis=1).sum(axis=1)
        k_best = int(np.argmax(totals))
        table = base[None, :] + per_message[k_best]  # (d, n_x)
        f = tuple(int(a) for a in np.argmax(table, axis=0))
        g_flat = bits[k_best].astype(int).reshape(d, n_y)
        g = tuple(tuple(int(b) for b in row) for row in g_flat)
        strategy = PMStrategy(f, g)
        value = float(table.max(axis=0).sum())
        return strategy, value

    def vertex(self, strategy: PMStrategy) -> np.ndarray:
        return strategy.vector().ravel()


class BellPolytope:
    """LMO adapter for the Bell full-correlator polytope."""

    def __init__(
        self, n_a: int, n_b: int, budget: int = DEFAULT_ORACLE_BUDGET
    ) -> None:
        self.n_a = int(n_a)
        self.n_b = int(n_b)
        self.budget = int(budget)

    @property
    def point_shape(self) -> tuple[int, ...]:
        return (self.n_a, self.n_b)

    def lmo(self, M: np.ndarray) -> tuple[SignAssignment, float]:
        M = np.asarray(M, dtype=float).reshape(self.point_shape)
        return bell_lmo(M, self.budget)

    def vertex(self, strategy: SignAssignment) -> np.ndarray:
        return strategy.vector().ravel()


# ---------------------------------------------------------------------------
# Fully corrective Frank-Wolfe membership
# ---------------------------------------------------------------------------


def _affine_weights(rows: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Minimiser of |w @ rows - p| over sum(w) = 1 (signs unconstrained)."""
    m = rows.shape[0]
    system = np.zeros((m + 1, m + 1))
    system[:m, :m] = rows @ rows.T
    system[:m, m] = 1.0
    system[m, :m] = 1.0
    rhs = np.zeros(m + 1)
    rhs[:m] = rows @ p
    rhs[m] = 1.0
    sol = np.linalg.lstsq(system, rhs, rcond=None)[0]
    u = sol[:m]
    total = float(u.sum())
    if abs(total - 1.0) > 1e-9 and abs(total) > 1e-12:
        u = u / total
    return u


def _min_norm_point(
    rows: np.ndarray, p: np.ndarray, w: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Exact projection of p onto the convex hull of the given rows.

    Minimum-norm-point iteration: repeatedly add the row most aligned with the
    residual, solve the affine relaxation on the support, and step back to the
    simplex, dropping rows that hit zero.  Terminates when no row improves.
    """
    k = rows.shape[0]
    w = w.copy()
    stall = 0
    obj_prev = np.inf
    for _ in range(64 * (k + 2)):
        x = w @ rows
        g = x - p
        obj = float(g @ g)
        scores = rows @ g
        base = float(x @ g)
        i_star = int(np.argmin(scores))
        if float(scores[i_star]) >= base - 1e-13 * (1.0 + abs(base)):
            break
        if obj >= obj_prev - 1e-15 * (1.0 + obj_prev):
            stall += 1
            if stall >= 3:
                break
        else:
            stall = 0
        obj_prev = obj
        support = np.flatnonzero(w > 0.0).tolist()
        if i_star not in support:
            support.append(i_star)
        w_s = w[support]
        total = w_s.sum()
        w_s = w_s / total if total > 0 else np.full(len(support), 1.0 / len(support))
        for _ in range(len(support) + 8):
            u = _affine_weights(rows[support], p)
            if float(np.min(u)) >= -1e-12:
                w_s = np.clip(u, 0.0, None)
                break
            step = u - w_s
            shrinking = step < -1e-15
            if not np.any(shrinking):
                w_s = np.clip(u, 0.0, None)
                break
            theta = float(np.min(w_s[shrinking] / -step[shrinking]))
            theta = min(max(theta, 0.0), 1.0)
            w_s = w_s + theta * step
            w_s[w_s < 1e-14] = 0.0
            keep = w_s > 0.0
            if not np.any(keep):
                w_s = np.zeros(len(support))
                w_s[support.index(i_star)] = 1.0
                break
            support = [s for s, flag in zip(support, keep) if flag]
            w_s = w_s[keep]
        w = np.zeros(k)
        w[support] = w_s
        total = w.sum()
        w = w / total if total > 0 else w
    return w, w @ rows


def fw_membership(
    point: np.ndarray,
    polytope,
    eps_in: float = 1e-7,
    eps_out: float = 1e-7,
    max_iter: int = 2000,
) -> MembershipVerdict:
    """Classify a point against the polytope served by the given oracle.

    Minimises the squared Euclidean distance to the vertex hull with a fully
    corrective Frank-Wolfe loop.  Inside when the final distance is below
    eps_in (the active set is the decomposition); Outside when the residual
    direction M = point - projection certifies Q - L > eps_out, with L from a
    final exact oracle call and the emitted witness rescaled to unit maximum
    coefficient; Undecided otherwise, with bracketing distance bounds.
    """
    p = np.asarray(point, dtype=float).ravel()
    expected = int(np.prod(polytope.point_shape))
    if p.size != expected:
        raise ValueError(
            f"point has {p.size} entries but the oracle expects {expected}"
        )
    gap_tol = 1e-12 * max(1.0, float(p @ p))

    strat, _ = polytope.lmo(p)
    strategies = [strat]
    rows = [polytope.vertex(strat)]
    seen = {strat}
    w = np.array([1.0])
    iterations = 0
    for iterations in range(1, max_iter + 1):
        V = np.asarray(rows)
        w, x = _min_norm_point(V, p, w)
        g = p - x
        strat, best = polytope.lmo(g)
        gap = best - float(g @ x)
        if gap <= gap_tol or strat in seen:
            break
        strategies.append(strat)
        rows.append(polytope.vertex(strat))
        seen.add(strat)
        w = np.append(w, 0.0)

    V = np.asarray(rows)
    x = w @ V
    dist = float(np.linalg.norm(p - x))
    keep = w > 1e-12
    kept_strategies = tuple(s for s, flag in zip(strategies, keep) if flag)
    kept_weights = w[keep]
    kept_weights = kept_weights / kept_weights.sum()

    if dist < eps_in:
        return MembershipVerdict(
            "inside",
            strategies=kept_strategies,
            weights=kept_weights,
            reconstruction_error=dist,
            iterations=iterations,
        )

    direction = p - x
    _, bound = polytope.lmo(direction)
    achieved = float(direction @ p)
    if achieved - bound > eps_out:
        scale = float(np.max(np.abs(direction)))
        M = (direction / scale).reshape(polytope.point_shape)
        _, L = polytope.lmo(M)
        Q = float(M.ravel() @ p)
        if Q > L:
            return MembershipVerdict(
                "outside",
                witness=Witness(M, L, Q),
                distance_lower=(achieved - bound) / float(np.linalg.norm(direction)),
                distance_upper=dist,
                iterations=iterations,
            )

    lower = max(0.0, achieved - bound) / float(np.linalg.norm(direction))
    return MembershipVerdict(
        "undecided",
        distance_lower=lower,
        distance_upper=dist,
        iterations=iterations,
    )


# ---------------------------------------------------------------------------
# Independent oracle: dense phase-1 simplex over an explicit vertex list
# ---------------------------------------------------------------------------


def _phase1_simplex(
    A: np.ndarray, b: np.ndarray, tol: float = 1e-9
) -> tuple[bool, np.ndarray, np.ndarray]:
    """Solve min sum(artificials) s.t. A x + artificials = b, x >= 0.

    Returns (feasible, x, y) where y is the dual vector of the phase-1
    optimum; on infeasibility y separates: y @ A <= 0 componentwise while
    y @ b > 0.  Uses Bland's rule, so it cannot cycle.
    """
    m, n = A.shape
    A = A.copy()
    b = b.copy()
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    tableau = np.zeros((m, n + m + 1))
    tableau[:, :n] = A
    tableau[:, n : n + m] = np.eye(m)
    tableau[:, -1] = b
    basis = list(range(n, n + m))
    cost = np.zeros(n + m)
    cost[n:] = 1.0

    pivot_tol = 1e-11
    for _ in range(50 * (n + m) + 200):
        y_basis = cost[basis] @ tableau[:, : n + m]
        reduced = cost - y_basis
        entering = -1
        for j in range(n + m):
            if reduced[j] < -pivot_tol and j not in basis:
                entering = j
                break
        if entering < 0:
            break
        col = tableau[:, entering]
        ratios = np.full(m, np.inf)
        positive = col > pivot_tol
        ratios[positive] = tableau[positive, -1] / col[positive]
        best = np.inf
        leaving = -1
        for i in range(m):
            if not np.isfinite(ratios[i]):
                continue
            if ratios[i] < best - 1e-15:
                best = ratios[i]
                leaving = i
            elif ratios[i] <= best + 1e-15 and leaving >= 0 and basis[i] < basis[leaving]:
                leaving = i
        if leaving < 0:
            raise RuntimeError("phase-1 simplex found an unbounded column")
        piv = tableau[leaving, entering]
        tableau[leaving] /= piv
        for i in range(m):
            if i != leaving and abs(tableau[i, entering]) > 0.0:
                tableau[i] -= tableau[i, entering] * tableau[leaving]
        basis[leaving] = entering
    else:
        raise RuntimeError("phase-1 simplex exceeded its pivot budget")

    objective = float(cost[basis] @ tableau[:, -1])
    x = np.zeros(n)
    for i, j in enumerate(basis):
        if j < n:
            x[j] = tableau[i, -1]

    # Dual from the reduced costs of the artificial columns; undo sign flips.
    y_basis = cost[basis] @ tableau[:, : n + m]
    reduced = cost - y_basis
    y = 1.0 - reduced[n:]
    y[flip] *= -1.0
    return objective <= tol, x, y


def brute_force_membership(
    point: np.ndarray,
    vertices: Sequence[np.ndarray] | np.ndarray,
    tol: float = 1e-9,
    budget: int = DEFAULT_VERTEX_BUDGET,
) -> MembershipVerdict:
    """Exact hull membership against an explicit vertex list.

    Phase-1 simplex feasibility of {V w = point, w >= 0, sum w = 1}.  Inside
    returns the basic weights; Outside returns the dual separating certificate
    as a Witness (rescaled to unit maximum coefficient, with the classical
    bound recomputed directly over the vertex list).
    """
    V = np.asarray(
        [np.asarray(v, dtype=float).ravel() for v in vertices], dtype=float
    )
    p = np.asarray(point, dtype=float).ravel()
    n, dim = V.shape
    if n > budget:
        raise EnumerationBudgetError(f"{n} vertices exceed the budget {budget}")
    if p.size != dim:
        raise ValueError("point dimension does not match vertex dimension")

    A = np.vstack([V.T, np.ones((1, n))])
    b = np.append(p, 1.0)
    feasible, w, y = _phase1_simplex(A, b, tol)
    if feasible:
        w = np.clip(w, 0.0, None)
        w = w / w.sum()
        support = w > 1e-12
        w = w[support] / w[support].sum()
        used = V[support]
        err = float(np.linalg.norm(w @ used - p))
        return MembershipVerdict(
            "inside",
            vertices=used,
            weights=w,
            reconstruction_error=err,
            iterations=1,
        )

    direction = y[:dim]
    scale = float(np.max(np.abs(direction)))
    if scale == 0.0:
        raise RuntimeError("phase-1 simplex returned a null separating direction")
    M = direction / scale
    L = float(np.max(V @ M))
    Q = float(M @ p)
    if Q <= L:
        raise RuntimeError("phase-1 dual certificate failed re-verification")
    return MembershipVerdict(
        "outside",
        witness=Witness(M.reshape(np.asarray(point).shape), L, Q),
        iterations=1,
    )
