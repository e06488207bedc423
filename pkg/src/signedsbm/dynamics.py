"""Structural balance dynamics dY/dt = Y^2.

The solution is Y(t) = Y0 (I - Y0 t)^-1 up to the blow-up time
t* = 1/lambda_1(Y0); the sign pattern approaches s s^T with s the signs of
the leading eigenvector of Y0.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .netgen import SignedAdjacency

__all__ = [
    "ConnectivityState",
    "BlowupInfo",
    "BlowupError",
    "DegenerateLeadError",
    "closed_form",
    "integrate_numeric",
    "blowup_time",
    "final_state",
    "leading_signs",
    "initial_condition",
    "trajectory_rows",
    "write_trajectory",
]

MAX_CONDITION = 1e12
OVERFLOW = 1e12
GAP_TOL = 1e-10


class DegenerateLeadError(ArithmeticError):
    """The two largest eigenvalues of Y0 cannot be told apart."""


class BlowupError(ArithmeticError):
    """Raised when the requested time is at or past the divergence of Y."""

    def __init__(self, message, t_star=math.inf, t_last=None):
        super().__init__(message)
        self.t_star = t_star
        self.t_last = t_last


@dataclass(frozen=True, eq=False)
class ConnectivityState:
    y: np.ndarray
    t: float


@dataclass(frozen=True)
class BlowupInfo:
    t_star: float
    lambda_max: float


def initial_condition(adj: SignedAdjacency) -> np.ndarray:
    """Y0 = A / n, keeping trajectories O(1) until close to t*."""
    return adj.astype(float) / adj.n


def _symmetric(y0) -> np.ndarray:
    y = np.asarray(y0, dtype=float)
    if y.ndim == 0:
        y = y.reshape(1, 1)
    if y.ndim != 2 or y.shape[0] != y.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {y.shape}")
    return y


def _top_eigs(y: np.ndarray):
    w, v = np.linalg.eigh((y + y.T) / 2)
    return w[::-1], v[:, ::-1]


def blowup_time(y0) -> BlowupInfo:
    y = _symmetric(y0)
    lam = float(_top_eigs(y)[0][0])
    if lam <= 0:
        raise BlowupError(f"leading eigenvalue {lam:g} <= 0: no finite-time blow-up")
    return BlowupInfo(t_star=1.0 / lam, lambda_max=lam)


def _t_star(y: np.ndarray) -> float:
    lam = float(_top_eigs(y)[0][0])
    return 1.0 / lam if lam > 0 else math.inf


def closed_form(y0, t: float) -> np.ndarray:
    y = _symmetric(y0)
    if t == 0:
        return y.copy()
    t_star = _t_star(y)
    if t >= t_star:
        raise BlowupError(f"t={t:g} is not before the blow-up time {t_star:g}", t_star)
    resolvent = np.eye(y.shape[0]) - y * t
    if np.linalg.cond(resolvent) > MAX_CONDITION:
        raise BlowupError(f"I - Y0 t is ill-conditioned at t={t:g}", t_star)
    # Y0 commutes with (I - Y0 t)^-1, so solve from the right-hand side
    return np.linalg.solve(resolvent, y)


def _rk4_step(y: np.ndarray, h: float) -> np.ndarray:
    k1 = y @ y
    y2 = y + 0.5 * h * k1
    k2 = y2 @ y2
    y3 = y + 0.5 * h * k2
    k3 = y3 @ y3
    y4 = y + h * k3
    k4 = y4 @ y4
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate_numeric(y0, t_end: float, dt: float | None = None) -> np.ndarray:
    """Fixed-step classical RK4 for dY/dt = Y^2.

    The last step is shortened so that the integration ends exactly at
    ``t_end``. The default step is t*/10^4 (or t_end/10^4 without blow-up).
    """
    y = _symmetric(y0).copy()
    t_star = _t_star(y)
    if t_end >= t_star:
        raise BlowupError(f"t_end={t_end:g} is not before the blow-up time {t_star:g}", t_star)
    if dt is None:
        dt = (t_star if math.isfinite(t_star) else max(t_end, 1e-300)) / 1e4
    if dt <= 0:
        raise ValueError("dt must be positive")
    steps = max(int(math.ceil(t_end / dt - 1e-9)), 0)
    t = 0.0
    for k in range(steps):
        h = min(dt, t_end - t)
        y_next = _rk4_step(y, h)
        if not np.all(np.isfinite(y_next)) or np.abs(y_next).max() > OVERFLOW:
            raise BlowupError(f"overflow after t={t:g}", t_star, t_last=t)
        y = y_next
        t = t_end if k == steps - 1 else t + h
    return y


def leading_signs(y0) -> np.ndarray:
    """Signs of the leading eigenvector; zeros count as positive.

    The global sign is fixed so that the first component is positive;
    the outer product does not depend on it.
    """
    y = _symmetric(y0)
    w, v = _top_eigs(y)
    if w[0] <= 0:
        raise BlowupError(f"leading eigenvalue {w[0]:g} <= 0: no finite-time blow-up")
    if w.size > 1 and (w[0] - w[1]) <= GAP_TOL * max(abs(w[0]), 1e-300):
        raise DegenerateLeadError("leading eigenvalue is numerically degenerate")
    s = np.where(v[:, 0] >= 0, 1, -1).astype(np.int8)
    return s if s[0] > 0 else -s


def final_state(y0) -> SignedAdjacency:
    s = leading_signs(y0)
    return SignedAdjacency(np.outer(s, s).astype(np.int8))


def trajectory_rows(y0, entries, times):
    """Yield (t, i, j, y_ij) along the closed-form solution."""
    y = _symmetric(y0)
    for t in times:
        yt = closed_form(y, float(t))
        for i, j in entries:
            yield float(t), int(i), int(j), float(yt[i, j])


def write_trajectory(path, y0, entries, n_times: int = 200, stop_fraction: float = 0.99) -> None:
    info = blowup_time(y0)
    times = np.linspace(0.0, stop_fraction * info.t_star, n_times)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "i", "j", "y_ij"])
        for row in trajectory_rows(y0, entries, times):
            writer.writerow([repr(row[0]), row[1], row[2], repr(row[3])])
