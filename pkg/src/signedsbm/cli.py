"""Command-line front end: ``signedsbm <command> ...``.

Exit status is 0 on success, 1 for bad input or configuration and 2 when a
numerical step fails (no blow-up, degenerate eigenvalues, overflow).
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import dynamics, metrics, netgen, rmt, spectral, sweep

log = logging.getLogger("signedsbm")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("block model")
    g.add_argument("--params", type=Path, help="JSON file with BlockParams fields")
    g.add_argument("--n", type=int)
    g.add_argument("--d-in", type=float)
    g.add_argument("--d-out", type=float)
    g.add_argument("--p-in-pos", type=float)
    g.add_argument("--p-out-pos", type=float)
    g.add_argument("--p-out-neg", type=float, help="alternative to --p-out-pos")
    g.add_argument("--seed", type=int)
    g.add_argument("--nonzero-diagonal", action="store_true", help="draw self-ties as ingroup ties")


def _params(args) -> netgen.BlockParams:
    data = {"n": 100, "d_in": 0.5, "d_out": 0.5, "p_in_pos": 0.5, "p_out_pos": 0.5}
    if args.params is not None:
        data.update(json.loads(args.params.read_text()))
    for name in ("n", "d_in", "d_out", "p_in_pos", "p_out_pos", "seed"):
        value = getattr(args, name)
        if value is not None:
            data[name] = value
    if args.p_out_neg is not None:
        data["p_out_pos"] = 1.0 - args.p_out_neg
    if args.nonzero_diagonal:
        data["zero_diagonal"] = False
    return netgen.BlockParams.from_dict(data)


def _out_path(args, default_name: str):
    if args.out is not None:
        return args.out
    outdir = os.environ.get(sweep.OUTDIR_ENV)
    if outdir:
        Path(outdir).mkdir(parents=True, exist_ok=True)
        return Path(outdir) / default_name
    return None


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text if text.endswith("\n") else text + "\n")
        log.info("wrote %s", path)


def _adjacency(args) -> tuple[netgen.SignedAdjacency, netgen.BlockParams | None]:
    if getattr(args, "edgelist", None) is not None:
        return netgen.read_edgelist(args.edgelist, args.n), None
    params = _params(args)
    return netgen.generate(params), params


def cmd_generate(args) -> int:
    params = _params(args)
    adj = netgen.generate(params)
    path = _out_path(args, "network.csv")
    netgen.write_edgelist(adj, sys.stdout if path is None else path)
    if args.params_out is not None:
        netgen.save_params(params, args.params_out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    adj, params = _adjacency(args)
    spec = spectral.eigen_sym(adj.astype(float))
    if params is None:
        params = _params(args).replace(n=adj.n)
    pred = spectral.predict_params(params)
    diag = spectral.classify_spectrum(spec, pred)
    _emit(spectral.spectrum_json(spec, pred, diag.regime), _out_path(args, "spectrum.json"))
    return EXIT_OK


def cmd_predict(args) -> int:
    params = _params(args)
    dp = netgen.derive(params)
    pred = spectral.predict_signal(dp, params.n)
    out = {
        "derived": asdict(dp),
        "prediction": asdict(pred),
        "regime": spectral.classify_params(dp, params.n).value,
        "boundaries": {},
    }
    for kind in ("assortative", "disassortative", "prosocial", "antisocial"):
        try:
            b = spectral.boundary_outgroup_animosity(params.d_in, params.d_out, params.p_in_pos, params.n, kind)
            out["boundaries"][kind] = {"p_out_neg": b.value, "clipped": b.clipped}
        except ValueError:
            out["boundaries"][kind] = None
    _emit(json.dumps(out, indent=2), _out_path(args, "prediction.json"))
    return EXIT_OK


def _entries(text: str):
    pairs = []
    for item in text.split(";"):
        i, j = item.split(",")
        pairs.append((int(i), int(j)))
    return pairs


def cmd_evolve(args) -> int:
    adj, _ = _adjacency(args)
    y0 = dynamics.initial_condition(adj)
    info = dynamics.blowup_time(y0)
    final = dynamics.final_state(y0)
    r = metrics.assortativity(final)
    lead = spectral.eigen_sym(y0).leading_vector
    h = metrics.homogeneity(lead)
    balanced, _ = metrics.is_balanced(final)
    rec = metrics.OutcomeRecord(r.r_pos, r.r_neg, r.r, h, metrics.z_metric(r.r, h), balanced)
    _emit(metrics.OUTCOME_HEADER + "\n" + rec.csv_row(), _out_path(args, "outcome.csv"))
    log.info("t* = %.6g (lambda_1(Y0) = %.6g)", info.t_star, info.lambda_max)
    if args.final_out is not None:
        netgen.write_edgelist(final, args.final_out)
    if args.trajectory is not None:
        entries = _entries(args.entries) if args.entries else [(0, 1), (0, adj.n - 1)]
        dynamics.write_trajectory(args.trajectory, y0, entries, n_times=args.times)
    return EXIT_OK


def cmd_classify(args) -> int:
    params = _params(args)
    dp = netgen.derive(params)
    out = {"regime_params": spectral.classify_params(dp, params.n).value}
    if args.simulate:
        spec = spectral.eigen_sym(netgen.generate(params).astype(float))
        diag = spectral.classify_spectrum(spec, spectral.predict_signal(dp, params.n))
        out.update(
            regime_spectrum=diag.regime.value,
            leading_shape=diag.shape.value,
            contrast_agreement=diag.contrast_agreement,
            sign_fraction=diag.sign_fraction,
            outside_band=diag.outside_band,
        )
    _emit(json.dumps(out, indent=2), _out_path(args, "classify.json"))
    return EXIT_OK


def cmd_oracle(args) -> int:
    params = _params(args)
    dp = netgen.derive(params)
    n = params.n
    if args.kind == "variance":
        res = rmt.lambda1_variance_test(params, args.trials)
        out = {"variance": res.variance, "mean": res.mean, "expected_variance": 2 * dp.var_avg, "trials": args.trials}
        _emit(json.dumps(out, indent=2), _out_path(args, "variance.json"))
        return EXIT_OK
    x = netgen.noise_matrix(params)
    if args.kind == "interlace":
        nu = args.nu if args.nu is not None else dp.nu
        out = {"nu": nu, "interlaced": rmt.interlacing_check(x, nu, n)}
        _emit(json.dumps(out, indent=2), _out_path(args, "interlace.json"))
        return EXIT_OK
    w = np.linalg.eigvalsh(x)
    if args.kind == "density":
        dens = rmt.empirical_density(w, dp.sigma, n, bins=args.bins)
        rmt.write_density_csv(_out_path(args, "density.csv") or sys.stdout, dens)
        log.info("L1 distance to semicircle: %.4g", rmt.l1_distance(dens))
        return EXIT_OK
    gamma = rmt.band_edge(dp.sigma, n)
    grid = np.linspace(args.lo * gamma, args.hi * gamma, args.points)
    trace = rmt.trace_function(w, dp.sigma, n, grid)
    rmt.write_trace_csv(_out_path(args, "trace.csv") or sys.stdout, trace)
    log.info("max relative error: %.4g", trace.max_relative_error())
    return EXIT_OK


def _sweep_config(args) -> sweep.SweepConfig:
    if args.config is not None:
        cfg = sweep.SweepConfig.load(args.config)
    elif args.preset is not None:
        cfg = sweep.preset(args.preset)
    else:
        raise sweep.ConfigError("give --config FILE or --preset NAME")
    overrides = {}
    if args.replicates is not None:
        overrides["replicates"] = args.replicates
    if args.master_seed is not None:
        overrides["master_seed"] = args.master_seed
    if overrides:
        data = cfg.to_dict()
        data.update(overrides)
        cfg = sweep.SweepConfig.from_dict(data)
    cfg.validate()
    return cfg


def cmd_sweep(args) -> int:
    cfg = _sweep_config(args)
    total = cfg.axis1.values().size * cfg.axis2.values().size * cfg.replicates
    log.info("sweep: %d runs on %s workers", total, args.workers or sweep.default_workers())

    def progress(k, total):
        if k % max(total // 20, 1) == 0:
            log.info("%d / %d", k, total)

    result = sweep.run_sweep(cfg, workers=args.workers, progress=progress)
    _emit(result.to_csv(), _out_path(args, "sweep.csv"))
    if args.boundaries_out is not None:
        Path(args.boundaries_out).write_text(sweep.emit_boundaries(cfg))
    return EXIT_OK


def cmd_boundaries(args) -> int:
    cfg = _sweep_config(args)
    _emit(sweep.emit_boundaries(cfg, samples=args.samples), _out_path(args, "boundaries.csv"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="signedsbm", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="draw a signed block-model network as an i,j,w edge list")
    _add_param_flags(p)
    p.add_argument("--out", type=Path)
    p.add_argument("--params-out", type=Path, help="also write the parameters as JSON")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("spectrum", help="eigenvalues, predictions and regime of a network")
    _add_param_flags(p)
    p.add_argument("--edgelist", type=Path, help="read the network instead of generating it")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("predict", help="analytic signal eigenvalues, band edge and boundaries")
    _add_param_flags(p)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evolve", help="run balance dynamics to the final state and measure it")
    _add_param_flags(p)
    p.add_argument("--edgelist", type=Path)
    p.add_argument("--out", type=Path)
    p.add_argument("--final-out", type=Path, help="write the final network as an edge list")
    p.add_argument("--trajectory", type=Path, help="write t,i,j,y_ij for selected entries")
    p.add_argument("--entries", help='entry subset, e.g. "0,1;0,99"')
    p.add_argument("--times", type=int, default=200)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("classify", help="regime of a parameter point")
    _add_param_flags(p)
    p.add_argument("--simulate", action="store_true", help="also classify a generated instance")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("oracle", help="random-matrix checks on the noise matrix")
    _add_param_flags(p)
    p.add_argument("--kind", choices=("trace", "density", "interlace", "variance"), default="trace")
    p.add_argument("--lo", type=float, default=1.1, help="trace grid start, in units of gamma")
    p.add_argument("--hi", type=float, default=2.0, help="trace grid end, in units of gamma")
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--nu", type=float)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_oracle)

    for name, func, helptext in (
        ("sweep", cmd_sweep, "grid sweep of outcome metrics"),
        ("boundaries", cmd_boundaries, "theoretical transition curves for a sweep"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", type=Path)
        p.add_argument("--preset", choices=sorted(sweep.PRESETS))
        p.add_argument("--replicates", type=int)
        p.add_argument("--master-seed", type=int)
        p.add_argument("--out", type=Path)
        if name == "sweep":
            p.add_argument("--workers", type=int, help=f"default: ${sweep.WORKERS_ENV} or CPU count")
            p.add_argument("--boundaries-out", type=Path)
        else:
            p.add_argument("--samples", type=int, help="resample the first axis uniformly")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses status 2 for usage errors; here 2 means a numerical failure
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"signedsbm: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"signedsbm: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
