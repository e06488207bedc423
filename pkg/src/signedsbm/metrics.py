"""Outcome measures for final networks: signed assortativity, homogeneity, z."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .netgen import SignedAdjacency

__all__ = [
    "OutcomeRecord",
    "Assortativity",
    "assortativity",
    "assortativity_expected",
    "homogeneity",
    "z_metric",
    "is_balanced",
    "OUTCOME_HEADER",
]

OUTCOME_HEADER = "r_pos,r_neg,r,h,z,balanced"


class Assortativity(NamedTuple):
    r_pos: float
    r_neg: float
    r: float
    pos_degenerate: bool = False
    neg_degenerate: bool = False


@dataclass(frozen=True)
class OutcomeRecord:
    r_pos: float
    r_neg: float
    r: float
    h: float
    z: float
    balanced: Optional[bool] = None

    def csv_row(self) -> str:
        flag = "" if self.balanced is None else str(self.balanced).lower()
        return ",".join([repr(self.r_pos), repr(self.r_neg), repr(self.r), repr(self.h), repr(self.z), flag])


def _coefficient(mixing: np.ndarray) -> tuple[float, bool]:
    """Newman's discrete-type coefficient from an unnormalised 2x2 mixing matrix."""
    total = mixing.sum()
    if total == 0:
        return 0.0, True
    e = mixing / total
    a = e.sum(axis=1)
    denom = 1.0 - float(np.dot(a, a))
    if denom <= 1e-15:
        return 0.0, True
    return (float(np.trace(e)) - float(np.dot(a, a))) / denom, False


def _block_counts(mask: np.ndarray) -> np.ndarray:
    h = mask.shape[0] // 2
    # every matrix entry counts once, so an undirected tie adds half to e_AB and e_BA
    return np.array(
        [
            [mask[:h, :h].sum(), mask[:h, h:].sum()],
            [mask[h:, :h].sum(), mask[h:, h:].sum()],
        ],
        dtype=float,
    )


def assortativity(adj: SignedAdjacency) -> Assortativity:
    a = adj.entries
    if not a.any():
        raise ValueError("assortativity is undefined for a network without ties")
    r_pos, pos_flag = _coefficient(_block_counts(a > 0))
    r_neg, neg_flag = _coefficient(_block_counts(a < 0))
    return Assortativity(r_pos, r_neg, (r_pos - r_neg) / 2, pos_flag, neg_flag)


def assortativity_expected(d_in, d_out, p_in_pos, p_out_pos) -> Assortativity:
    """Coefficients from expected tie counts of the block model, large-n."""
    pos = np.array([[d_in * p_in_pos, d_out * p_out_pos], [d_out * p_out_pos, d_in * p_in_pos]])
    neg = np.array(
        [[d_in * (1 - p_in_pos), d_out * (1 - p_out_pos)], [d_out * (1 - p_out_pos), d_in * (1 - p_in_pos)]]
    )
    r_pos, pos_flag = _coefficient(pos)
    r_neg, neg_flag = _coefficient(neg)
    return Assortativity(r_pos, r_neg, (r_pos - r_neg) / 2, pos_flag, neg_flag)


def homogeneity(vec) -> float:
    v = np.asarray(vec, dtype=float)
    if v.size == 0 or not np.any(v):
        raise ValueError("homogeneity needs a nonzero vector")
    positive = np.count_nonzero(v >= 0)
    return max(positive, v.size - positive) / v.size


def z_metric(r: float, h: float) -> float:
    return r - 2 * h + 1


def is_balanced(adj: SignedAdjacency) -> tuple[bool, Optional[tuple[int, int, int]]]:
    """Check every triad of a complete signed network.

    A complete network is balanced iff it equals s s^T off the diagonal,
    with s read off the first row. A mismatch at (i, j) means triad (0, i, j)
    has a negative sign product.
    """
    a = adj.entries.astype(np.int64)
    n = adj.n
    off = ~np.eye(n, dtype=bool)
    if np.any(a[off] == 0):
        raise ValueError("is_balanced requires a complete network (no zero off-diagonal ties)")
    if n < 3:
        return True, None
    s = a[0].copy()
    s[0] = 1
    bad = (a != np.outer(s, s)) & off
    bad[0, :] = bad[:, 0] = False
    if not bad.any():
        return True, None
    i, j = np.argwhere(np.triu(bad))[0]
    return False, (0, int(i), int(j))
