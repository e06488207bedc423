"""Two-community signed stochastic block model.

Nodes ``0 .. n/2-1`` form group A and ``n/2 .. n-1`` group B. Each unordered
pair draws one uniform number; the pair is tied with probability ``d`` and,
given a tie, positive with probability ``p_pos``.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

__all__ = [
    "BlockParams",
    "DerivedParams",
    "SignedAdjacency",
    "derive",
    "generate",
    "expected_matrix",
    "noise_matrix",
    "contrast_vector",
    "homogeneous_vector",
    "write_edgelist",
    "read_edgelist",
    "save_params",
    "load_params",
]

_SEED_MAX = 2**64 - 1


@dataclass(frozen=True)
class BlockParams:
    n: int
    d_in: float
    d_out: float
    p_in_pos: float
    p_out_pos: float
    zero_diagonal: bool = True
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 4 or self.n % 2:
            raise ValueError(f"n must be an even integer >= 4, got {self.n!r}")
        for name in ("d_in", "d_out", "p_in_pos", "p_out_pos"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
        if not 0 <= self.seed <= _SEED_MAX:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")

    @property
    def p_in_neg(self) -> float:
        return 1.0 - self.p_in_pos

    @property
    def p_out_neg(self) -> float:
        return 1.0 - self.p_out_pos

    @property
    def half(self) -> int:
        return self.n // 2

    def replace(self, **changes) -> "BlockParams":
        data = asdict(self)
        data.update(changes)
        return BlockParams(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "BlockParams":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown parameter fields: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class DerivedParams:
    avg_in: float
    avg_out: float
    mu: float
    nu: float
    var_in: float
    var_out: float
    var_avg: float
    density: float

    @property
    def sigma(self) -> float:
        return math.sqrt(max(self.var_avg, 0.0))


@dataclass(frozen=True, eq=False)
class SignedAdjacency:
    """Symmetric matrix over {-1, 0, +1}; index order fixes the A/B labels."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.int8, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {a.shape}")
        if not np.array_equal(a, self.entries):
            raise ValueError("adjacency entries must be -1, 0 or +1")
        if not np.isin(a, (-1, 0, 1)).all():
            raise ValueError("adjacency entries must be -1, 0 or +1")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def labels(self) -> np.ndarray:
        """0 for group A, 1 for group B."""
        return (np.arange(self.n) >= self.n // 2).astype(np.int8)

    def astype(self, dtype=float) -> np.ndarray:
        return self.entries.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, SignedAdjacency):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    __hash__ = None


def derive(params: BlockParams) -> DerivedParams:
    avg_in = params.d_in * (2 * params.p_in_pos - 1)
    avg_out = params.d_out * (2 * params.p_out_pos - 1)
    mu = (avg_in + avg_out) / 2
    nu = (avg_in - avg_out) / 2
    var_in = params.d_in - avg_in**2
    var_out = params.d_out - avg_out**2
    density = (params.d_in + params.d_out) / 2
    return DerivedParams(
        avg_in=avg_in,
        avg_out=avg_out,
        mu=mu,
        nu=nu,
        var_in=var_in,
        var_out=var_out,
        var_avg=density - mu**2 - nu**2,
        density=density,
    )


def contrast_vector(n: int) -> np.ndarray:
    u = np.ones(n)
    u[n // 2:] = -1.0
    return u / math.sqrt(n)


def homogeneous_vector(n: int) -> np.ndarray:
    return np.full(n, 1.0 / math.sqrt(n))


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _pair_thresholds(params: BlockParams, rows, cols):
    same = (rows < params.half) == (cols < params.half)
    density = np.where(same, params.d_in, params.d_out)
    pos = density * np.where(same, params.p_in_pos, params.p_out_pos)
    return density, pos


def generate(params: BlockParams) -> SignedAdjacency:
    n = params.n
    # row-major upper triangle; the diagonal is skipped entirely when zeroed
    rows, cols = np.triu_indices(n, k=1 if params.zero_diagonal else 0)
    u = _rng(params.seed).random(rows.size)
    density, pos = _pair_thresholds(params, rows, cols)
    w = np.where(u < pos, 1, np.where(u < density, -1, 0)).astype(np.int8)
    a = np.zeros((n, n), dtype=np.int8)
    a[rows, cols] = w
    a[cols, rows] = w
    return SignedAdjacency(a)


def expected_matrix(params: BlockParams) -> np.ndarray:
    dp = derive(params)
    n = params.n
    u_h = homogeneous_vector(n)
    u_c = contrast_vector(n)
    return dp.mu * n * np.outer(u_h, u_h) + dp.nu * n * np.outer(u_c, u_c)


def noise_matrix(params: BlockParams) -> np.ndarray:
    x = generate(params).astype(float) - expected_matrix(params)
    if params.zero_diagonal:
        # A_ii is deterministically 0 here, so its fluctuation is 0 as well
        np.fill_diagonal(x, 0.0)
    return x


def write_edgelist(adj: SignedAdjacency, dest) -> None:
    """Write nonzero upper-triangle ties to a path or an open text stream."""
    if hasattr(dest, "write"):
        _write_edges(adj, dest)
        return
    with open(dest, "w", newline="") as fh:
        _write_edges(adj, fh)


def _write_edges(adj, fh):
    rows, cols = np.nonzero(np.triu(adj.entries))
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["i", "j", "w"])
    for i, j in zip(rows.tolist(), cols.tolist()):
        writer.writerow([i, j, int(adj.entries[i, j])])


def read_edgelist(path, n: int | None = None) -> SignedAdjacency:
    """Read an ``i,j,w`` edge list. ``n`` defaults to the largest index + 1."""
    triples = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["i", "j", "w"]:
            raise ValueError(f"{path}: expected header i,j,w, got {reader.fieldnames}")
        for row in reader:
            i, j, w = int(row["i"]), int(row["j"]), int(row["w"])
            if w not in (-1, 1):
                raise ValueError(f"{path}: tie weight must be -1 or 1, got {w}")
            triples.append((i, j, w))
    size = max((max(i, j) for i, j, _ in triples), default=-1) + 1
    if n is None:
        n = size
    elif size > n:
        raise ValueError(f"{path}: node index {size - 1} out of range for n={n}")
    a = np.zeros((n, n), dtype=np.int8)
    for i, j, w in triples:
        a[i, j] = a[j, i] = w
    return SignedAdjacency(a)


def save_params(params: BlockParams, path) -> None:
    Path(path).write_text(json.dumps(params.to_dict(), indent=2) + "\n")


def load_params(path) -> BlockParams:
    return BlockParams.from_dict(json.loads(Path(path).read_text()))
