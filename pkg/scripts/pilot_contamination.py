#!/usr/bin/env python3
"""Pilot study backing the contamination-detection tolerance.

Replicates the precise/TF2/heavy-tail scenario many times and reports the
distribution of |I_end - 1/2| plus both vote diagnostics, to sanity-check
the 0.05 band and the 0.9 detection floor before they are asserted in the
acceptance suite.
"""

import argparse
import dataclasses

import numpy as np

from sysanom import DEFAULT_SEED, classify, index_curves, preset, scenario_generate
from sysanom.detect import Classification


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--preset", default="precise-tf2-a1.2")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--replications", type=int, default=200)
    args = parser.parse_args()

    spec = dataclasses.replace(
        preset(args.preset, seed=args.seed), replications=args.replications
    )
    devs, exponents, hits = [], [], 0
    for r in range(spec.replications):
        curve = index_curves(scenario_generate(spec, replication=r).sample, n_min=spec.n_min)
        verdict = classify(curve)
        devs.append(abs(float(curve.i_values[-1]) - 0.5))
        exponents.append(verdict.b_growth_exponent)
        hits += verdict.classification is Classification.ANOMALY_AFFECTED

    devs = np.asarray(devs)
    exponents = np.asarray(exponents)
    print(f"preset {spec.name}, seed {spec.seed}, {spec.replications} replications")
    print(f"|I_end - 1/2|: median {np.median(devs):.5f}, p75 {np.percentile(devs, 75):.5f}, max {devs.max():.5f}")
    print(f"growth exponent: median {np.median(exponents):.3f}, frac > 0.25: {np.mean(exponents > 0.25):.3f}")
    print(f"detection rate: {hits / spec.replications:.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
