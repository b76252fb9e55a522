"""Scan visibility and splitter transmittance around the measured setup and print the key correlation levels."""

import argparse
from dataclasses import replace

import numpy as np

from tripletcv import experiment_sim as es


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--visibility", type=float, nargs="+", default=list(np.round(np.arange(1.0, 0.84, -0.02), 2)))
    ap.add_argument("--transmittance", type=float, nargs="+", default=[0.5, 0.49, 0.48])
    args = ap.parse_args()

    base = es.measured_config()
    print(f"{'T':>5} {'V':>5} {'sum dB':>8} {'diff dB':>8} {'fig3a dB':>9} {'argmin':>7}")
    for t in args.transmittance:
        for v in args.visibility:
            cfg = replace(base, bs_transmittance=t, visibility=v)
            s = es.fig2_summary(cfg)
            best = es.sweep(cfg, "fixed_phi2", 45.0).argmin()
            print(f"{t:5.2f} {v:5.2f} {s.sum_db:8.3f} {s.difference_db:8.3f} {best.variance_db:9.3f} {best.phi1_deg:7.0f}")


if __name__ == "__main__":
    main()
