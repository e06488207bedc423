"""Run a preset or JSON sweep and write the grid plus its theoretical curves.

    python scripts/heatmap.py fig6 --out-dir results/
    python scripts/heatmap.py configs/fig6_small.json --workers 4

The full fig5 preset (20 x 21 cells, 400 replicates each) takes roughly
15-30 minutes on a single core.
"""
from __future__ import annotations

import argparse
import logging
import time
from pathlib import Path

from signedsbm import sweep


def load(source: str) -> sweep.SweepConfig:
    if source in sweep.PRESETS:
        return sweep.preset(source)
    return sweep.SweepConfig.load(source)


def main(argv=None):
    ap = argparse.ArgumentParser(description="grid sweep to CSV")
    ap.add_argument("config", help=f"preset ({', '.join(sorted(sweep.PRESETS))}) or JSON file")
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    ap.add_argument("--workers", type=int)
    ap.add_argument("--replicates", type=int, help="override the replicate count")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    cfg = load(args.config)
    if args.replicates:
        data = cfg.to_dict()
        data["replicates"] = args.replicates
        cfg = sweep.SweepConfig.from_dict(data)
    stem = Path(args.config).stem
    args.out_dir.mkdir(parents=True, exist_ok=True)

    started = time.perf_counter()
    result = sweep.run_sweep(
        cfg,
        workers=args.workers,
        progress=lambda k, total: k % max(total // 10, 1) == 0 and logging.info("%d/%d", k, total),
    )
    (args.out_dir / f"{stem}_grid.csv").write_text(result.to_csv())
    (args.out_dir / f"{stem}_boundaries.csv").write_text(sweep.emit_boundaries(cfg, samples=101))
    logging.info("done in %.1fs -> %s", time.perf_counter() - started, args.out_dir)


if __name__ == "__main__":
    main()
