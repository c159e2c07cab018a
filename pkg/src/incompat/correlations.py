"""Behaviour tables and correlator tables for prepare-and-measure and Bell runs.

A PM behaviour is the array p(b|x,y); a Bell behaviour is p(a,b|x,y).  For
dichotomic outcomes both compress losslessly to correlators: the single
correlator P_xy = p(0|x,y) - p(1|x,y) on the PM side and the full correlator
C_xy = p(a=b|x,y) - p(a!=b|x,y) on the Bell side.  On the maximally entangled
state the full correlator has the closed form tr(A^T B)/2 in terms of the two
observables, which is what makes the PM <-> Bell transfer machinery work.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qcore import (
    ATOL_ALGEBRA,
    Assemblage,
    Ensemble,
    QubitOperator,
    born_bell_phi_plus,
    born_pm,
    trace_product,
    transpose,
)


@dataclass(frozen=True)
class BehaviorTable:
    """Conditional probability table.

    kind "pm":   data[x, y, b]    = p(b|x, y)
    kind "bell": data[x, y, a, b] = p(a, b|x, y)
    """

    kind: str
    data: np.ndarray

    def __post_init__(self) -> None:
        if self.kind not in ("pm", "bell"):
            raise ValueError(f"kind must be 'pm' or 'bell', got {self.kind!r}")
        arr = np.asarray(self.data, dtype=float).copy()
        expected_ndim = 3 if self.kind == "pm" else 4
        if arr.ndim != expected_ndim:
            raise ValueError(
                f"{self.kind} table needs {expected_ndim} axes, got {arr.ndim}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    def normalization_error(self) -> float:
        axis = -1 if self.kind == "pm" else (-2, -1)
        return float(np.max(np.abs(self.data.sum(axis=axis) - 1.0)))

    def check(self, atol: float = ATOL_ALGEBRA) -> None:
        if np.min(self.data) < -atol:
            raise ValueError("behaviour table has negative entries")
        if self.normalization_error() > atol:
            raise ValueError("behaviour table is not normalised per (x, y) cell")

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "shape": list(self.data.shape),
            "data": [float(t) for t in self.data.ravel()],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "BehaviorTable":
        arr = np.asarray(data["data"], dtype=float).reshape(data["shape"])
        return cls(data["kind"], arr)


@dataclass(frozen=True)
class CorrelatorTable:
    """Matrix of expectation values in [-1, 1], kind 'single' (PM) or 'full' (Bell)."""

    kind: str
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.kind not in ("single", "full"):
            raise ValueError(f"kind must be 'single' or 'full', got {self.kind!r}")
        arr = np.asarray(self.values, dtype=float).copy()
        if arr.ndim != 2:
            raise ValueError(f"correlator table must be 2-d, got {arr.ndim} axes")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    def check(self, atol: float = ATOL_ALGEBRA) -> None:
        if np.max(np.abs(self.values)) > 1.0 + atol:
            raise ValueError("correlator entries must lie in [-1, 1]")

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "shape": list(self.values.shape),
            "data": [float(t) for t in self.values.ravel()],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "CorrelatorTable":
        arr = np.asarray(data["data"], dtype=float).reshape(data["shape"])
        return cls(data["kind"], arr)


def pm_behavior(e: Ensemble, a: Assemblage) -> BehaviorTable:
    """p(b|x, y) = tr(rho_x B_{b|y}) for every state/measurement pair."""
    table = np.empty((len(e), len(a), 2))
    for x, rho in enumerate(e):
        for y, m in enumerate(a):
            table[x, y, :] = born_pm(rho, m)
    return BehaviorTable("pm", table)


def bell_behavior_phi_plus(alice: Assemblage, bob: Assemblage) -> BehaviorTable:
    """p(a, b|x, y) on the maximally entangled state, via the dense Born rule."""
    table = np.empty((len(alice), len(bob), 2, 2))
    for x, ma in enumerate(alice):
        for y, mb in enumerate(bob):
            table[x, y] = born_bell_phi_plus(ma, mb)
    return BehaviorTable("bell", table)


def to_correlators(t: BehaviorTable) -> CorrelatorTable:
    """Reduce a dichotomic behaviour to its correlator matrix."""
    if t.kind == "pm":
        if t.data.shape[-1] != 2:
            raise ValueError("single correlators need dichotomic outcomes")
        return CorrelatorTable("single", t.data[..., 0] - t.data[..., 1])
    if t.data.shape[-2:] != (2, 2):
        raise ValueError("full correlators need dichotomic outcomes on both sides")
    values = (
        t.data[..., 0, 0] - t.data[..., 0, 1] - t.data[..., 1, 0] + t.data[..., 1, 1]
    )
    return CorrelatorTable("full", values)


def from_correlators(c: CorrelatorTable) -> BehaviorTable:
    """Inverse of to_correlators on its image.

    PM tables are recovered exactly from p(0|x,y) = (1 + P)/2.  Bell tables
    assume uniform marginals, p(a,b|x,y) = (1 + (-1)^(a xor b) C)/4, which is
    exact whenever both observables are traceless.
    """
    c.check()
    if c.kind == "single":
        p0 = (1.0 + c.values) / 2.0
        return BehaviorTable("pm", np.stack([p0, 1.0 - p0], axis=-1))
    same = (1.0 + c.values) / 4.0
    diff = (1.0 - c.values) / 4.0
    table = np.stack(
        [np.stack([same, diff], axis=-1), np.stack([diff, same], axis=-1)], axis=-2
    )
    return BehaviorTable("bell", table)


def phi_plus_correlator(a_obs: QubitOperator, b_obs: QubitOperator) -> float:
    """Full correlator tr(A^T B)/2 of two observables on the phi+ state."""
    return 0.5 * trace_product(transpose(a_obs), b_obs)


def pm_correlators(e: Ensemble, a: Assemblage) -> CorrelatorTable:
    """Single correlators P_xy = tr(rho_x B_y) without building the behaviour."""
    values = np.empty((len(e), len(a)))
    for x, rho in enumerate(e):
        for y, m in enumerate(a):
            values[x, y] = trace_product(rho.op, m.observable)
    return CorrelatorTable("single", values)
