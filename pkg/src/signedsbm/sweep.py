"""Parameter sweeps over the block model and the balance-dynamics outcomes.

A cell (i, j) of a sweep is one point on the two axes; its k-th replicate is
seeded by SeedSequence(master_seed, spawn_key=(i, j, k)), so the numbers do
not depend on how the work is split across processes.
"""
from __future__ import annotations

import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import dynamics, metrics, spectral
from .netgen import BlockParams, derive, generate

__all__ = [
    "Axis",
    "SweepConfig",
    "CellResult",
    "CellSummary",
    "SweepResult",
    "ConfigError",
    "run_cell",
    "run_sweep",
    "cell_seed",
    "emit_boundaries",
    "PRESETS",
    "preset",
    "SWEEP_HEADER",
    "BOUNDARY_HEADER",
]

AXIS_NAMES = ("d", "d_in", "d_out", "p_in_pos", "p_out_neg", "p_out_pos")
OUTPUT_NAMES = ("r", "h", "z", "lambda1", "regime")
SWEEP_HEADER = "axis1,axis2,replicates,mean_r,std_r,mean_h,std_h,mean_z,mean_lambda1,valid_fraction"
BOUNDARY_HEADER = "axis1,assortative,disassortative,prosocial,antisocial,symmetric"

WORKERS_ENV = "SIGNEDSBM_WORKERS"
OUTDIR_ENV = "SIGNEDSBM_OUTDIR"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    step: float

    def values(self) -> np.ndarray:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        # rounding keeps grid values like 0.35 exact in the CSV
        return np.round(self.start + self.step * np.arange(count), 12)

    def validate(self) -> None:
        if self.name not in AXIS_NAMES:
            raise ConfigError(f"unknown axis {self.name!r}; expected one of {AXIS_NAMES}")
        if self.step <= 0:
            raise ConfigError(f"axis {self.name}: step must be positive")
        if not (0 <= self.start <= 1 and 0 <= self.stop <= 1) or self.stop < self.start:
            raise ConfigError(f"axis {self.name}: range must satisfy 0 <= start <= stop <= 1")


@dataclass(frozen=True)
class SweepConfig:
    axis1: Axis
    axis2: Axis
    fixed: dict = field(default_factory=dict)
    replicates: int = 1
    master_seed: int = 0
    outputs: tuple = ("r", "h", "z", "lambda1")
    # parameter -> axis name it copies, e.g. {"p_in_pos": "p_out_neg"}
    links: dict = field(default_factory=dict)

    def validate(self) -> None:
        self.axis1.validate()
        self.axis2.validate()
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must be a 64-bit unsigned integer")
        bad = set(self.outputs) - set(OUTPUT_NAMES)
        if bad:
            raise ConfigError(f"unknown outputs {sorted(bad)}")
        for target, source in self.links.items():
            if target not in AXIS_NAMES or source not in (self.axis1.name, self.axis2.name):
                raise ConfigError(f"bad link {target!r} -> {source!r}")
        try:
            self.params_at(0, 0)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid fixed parameters: {exc}") from exc

    def params_at(self, i: int, j: int) -> BlockParams:
        values = {self.axis1.name: float(self.axis1.values()[i]), self.axis2.name: float(self.axis2.values()[j])}
        for target, source in self.links.items():
            values[target] = values[source]
        data = {"n": 100, "d_in": 0.5, "d_out": 0.5, "p_in_pos": 0.5, "p_out_pos": 0.5}
        data.update(self.fixed)
        for name, value in values.items():
            _apply_axis(data, name, value)
        data["seed"] = 0
        return BlockParams.from_dict(data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["outputs"] = list(self.outputs)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        try:
            data = dict(data)
            data["axis1"] = Axis(**data["axis1"])
            data["axis2"] = Axis(**data["axis2"])
            if "outputs" in data:
                data["outputs"] = tuple(data["outputs"])
            cfg = cls(**data)
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed sweep config: {exc}") from exc
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "SweepConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read sweep config {path}: {exc}") from exc
        return cls.from_dict(data)


def _apply_axis(data: dict, name: str, value: float) -> None:
    if name == "d":
        data["d_in"] = data["d_out"] = value
    elif name == "p_out_neg":
        data["p_out_pos"] = 1.0 - value
    else:
        data[name] = value


@dataclass(frozen=True)
class CellResult:
    valid: bool
    outcome: metrics.OutcomeRecord | None
    lambda1: float
    regime_params: spectral.RegimeLabel
    regime_spectrum: spectral.RegimeLabel | None


@dataclass(frozen=True)
class CellSummary:
    axis1: float
    axis2: float
    replicates: int
    mean_r: float
    std_r: float
    mean_h: float
    std_h: float
    mean_z: float
    mean_lambda1: float
    valid_fraction: float

    def csv_row(self) -> str:
        return ",".join(
            [repr(self.axis1), repr(self.axis2), str(self.replicates)]
            + [repr(v) for v in (self.mean_r, self.std_r, self.mean_h, self.std_h, self.mean_z, self.mean_lambda1)]
            + [repr(self.valid_fraction)]
        )


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    cells: list  # row-major over (axis1, axis2)

    def grid(self, metric: str) -> np.ndarray:
        n1, n2 = self.config.axis1.values().size, self.config.axis2.values().size
        return np.array([getattr(c, metric) for c in self.cells]).reshape(n1, n2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(SWEEP_HEADER + "\n")
        for cell in self.cells:
            buf.write(cell.csv_row() + "\n")
        return buf.getvalue()


def run_cell(params: BlockParams, seed: int | None = None) -> CellResult:
    """Generate, evolve to the balanced limit, and measure one network."""
    if seed is not None:
        params = params.replace(seed=int(seed))
    dp = derive(params)
    regime_params = spectral.classify_params(dp, params.n)
    adj = generate(params)
    y0 = dynamics.initial_condition(adj)
    spec = spectral.eigen_sym(adj.astype(float))
    lambda1 = spec.lambda1
    try:
        final = dynamics.final_state(y0)
    except ArithmeticError:
        return CellResult(False, None, lambda1, regime_params, None)
    r = metrics.assortativity(final)
    h = metrics.homogeneity(spec.leading_vector)
    balanced, _ = metrics.is_balanced(final)
    outcome = metrics.OutcomeRecord(r.r_pos, r.r_neg, r.r, h, metrics.z_metric(r.r, h), balanced)
    diagnosis = spectral.classify_spectrum(spec, spectral.predict_signal(dp, params.n))
    return CellResult(True, outcome, lambda1, regime_params, diagnosis.regime)


def cell_seed(master_seed: int, i: int, j: int, k: int) -> int:
    ss = np.random.SeedSequence(master_seed, spawn_key=(i, j, k))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _run_task(task):
    params, seed = task
    with threadpool_limits(limits=1):
        res = run_cell(params, seed)
    if not res.valid:
        return False, math.nan, math.nan, math.nan, res.lambda1
    o = res.outcome
    return True, o.r, o.h, o.z, res.lambda1


def _summarise(a1, a2, rows) -> CellSummary:
    valid = [r for r in rows if r[0]]
    lam = float(np.mean([r[4] for r in rows]))
    if not valid:
        nan = math.nan
        return CellSummary(a1, a2, len(rows), nan, nan, nan, nan, nan, lam, 0.0)
    r = np.array([v[1] for v in valid])
    h = np.array([v[2] for v in valid])
    z = np.array([v[3] for v in valid])
    return CellSummary(
        a1, a2, len(rows),
        float(r.mean()), float(r.std()), float(h.mean()), float(h.std()), float(z.mean()),
        lam, len(valid) / len(rows),
    )


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(int(env), 1)
    return os.cpu_count() or 1


def run_sweep(cfg: SweepConfig, workers: int | None = None, progress=None) -> SweepResult:
    cfg.validate()
    workers = default_workers() if workers is None else max(int(workers), 1)
    v1, v2 = cfg.axis1.values(), cfg.axis2.values()
    tasks = []
    for i in range(v1.size):
        for j in range(v2.size):
            params = cfg.params_at(i, j)
            tasks.extend((params, cell_seed(cfg.master_seed, i, j, k)) for k in range(cfg.replicates))
    if workers == 1:
        results = map(_run_task, tasks)
        rows = _collect(results, len(tasks), progress)
    else:
        chunk = max(1, len(tasks) // (workers * 16))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = _collect(pool.map(_run_task, tasks, chunksize=chunk), len(tasks), progress)
    cells = []
    reps = cfg.replicates
    for c, (i, j) in enumerate((i, j) for i in range(v1.size) for j in range(v2.size)):
        cells.append(_summarise(float(v1[i]), float(v2[j]), rows[c * reps:(c + 1) * reps]))
    return SweepResult(cfg, cells)


def _collect(results, total, progress):
    rows = []
    for k, row in enumerate(results, 1):
        rows.append(row)
        if progress is not None:
            progress(k, total)
    return rows


def _fmt(value) -> str:
    return "" if value is None else repr(float(value))


def emit_boundaries(cfg: SweepConfig, samples: int | None = None) -> str:
    """Theoretical transition curves (as p_out^-) along the sweep's first axis.

    Infeasible or inapplicable curves are left blank.
    """
    cfg.validate()
    xs = cfg.axis1.values() if samples is None else np.round(np.linspace(cfg.axis1.start, cfg.axis1.stop, samples), 12)
    buf = io.StringIO()
    buf.write(BOUNDARY_HEADER + "\n")
    linked = cfg.links.get("p_in_pos") == "p_out_neg" and cfg.axis1.name == "d"
    for x in xs:
        data = {"n": 100, "d_in": 0.5, "d_out": 0.5, "p_in_pos": 0.5, "p_out_pos": 0.5}
        data.update(cfg.fixed)
        _apply_axis(data, cfg.axis1.name, float(x))
        n, d_in, d_out, p_in = data["n"], data["d_in"], data["d_out"], data["p_in_pos"]
        curves = []
        for kind in ("assortative", "disassortative", "prosocial", "antisocial"):
            value = None
            if not linked and d_out > 0:
                try:
                    b = spectral.boundary_outgroup_animosity(d_in, d_out, p_in, n, kind)
                    value = None if b.clipped else b.value
                except ValueError:
                    value = None
            curves.append(value)
        sym = None
        if linked and d_in > 0:
            sym = spectral.boundary_symmetric_case(d_in, n)
            sym = sym if sym <= 1 else None
        buf.write(",".join([repr(float(x))] + [_fmt(v) for v in curves] + [_fmt(sym)]) + "\n")
    return buf.getvalue()


def _axis(name, start, stop, step):
    return Axis(name, start, stop, step)


PRESETS = {
    # d x p_out^- heat map on the p_in^+ = p_out^- slice
    "fig5": SweepConfig(
        axis1=_axis("d", 0.05, 1.0, 0.05),
        axis2=_axis("p_out_neg", 0.5, 1.0, 0.025),
        fixed={"n": 100},
        replicates=400,
        links={"p_in_pos": "p_out_neg"},
    ),
    # p_in^+ x p_out^- regime map at d_in = d_out = 0.45
    "fig6": SweepConfig(
        axis1=_axis("p_in_pos", 0.0, 1.0, 0.05),
        axis2=_axis("p_out_neg", 0.0, 1.0, 0.05),
        fixed={"n": 100, "d_in": 0.45, "d_out": 0.45},
        replicates=20,
    ),
    # same map with d_in / d_out = 2 at mean density 0.45
    "fig7": SweepConfig(
        axis1=_axis("p_in_pos", 0.0, 1.0, 0.05),
        axis2=_axis("p_out_neg", 0.0, 1.0, 0.05),
        fixed={"n": 100, "d_in": 0.6, "d_out": 0.3},
        replicates=20,
    ),
}


def preset(name: str) -> SweepConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
