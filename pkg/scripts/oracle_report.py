"""Random-matrix sanity report: semicircle fit and trace-function error against n."""
from __future__ import annotations

import argparse

import numpy as np

from signedsbm import BlockParams, derive, noise_matrix
from signedsbm import rmt


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 250, 500, 1000, 2000])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    print("n,l1_semicircle,max_trace_rel_error")
    for n in args.sizes:
        params = BlockParams(n, 0.5, 0.5, 0.5, 0.5, seed=args.seed)
        sigma = derive(params).sigma
        w = np.linalg.eigvalsh(noise_matrix(params))
        gamma = rmt.band_edge(sigma, n)
        dist = rmt.l1_distance(rmt.empirical_density(w, sigma))
        err = rmt.trace_function(w, sigma, n, np.linspace(1.1 * gamma, 2 * gamma, 40)).max_relative_error()
        print(f"{n},{dist:.5f},{err:.5f}")


if __name__ == "__main__":
    main()
