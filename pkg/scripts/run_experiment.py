#!/usr/bin/env python3
"""Run the full preset grid and print a per-scenario summary table.

Writes one result directory per preset when --out-dir is given; otherwise
only the table is printed.  Bump --replications for tighter aggregates.
"""

import argparse
import dataclasses
import json
from pathlib import Path

import numpy as np

from sysanom import (
    DEFAULT_SEED,
    all_presets,
    first_sustained_n,
    preset,
    result_to_json,
    run_scenario,
    write_result_csv,
)


def summarize(name, result):
    finals = [c.i_values[-1] for c in result.curves]
    finals = [v for v in finals if not np.isnan(v)]
    firsts = [first_sustained_n(c) for c in result.curves]
    firsts = [v for v in firsts if v is not None]
    return {
        "preset": name,
        "detection_rate": result.detection_rate,
        "median_final_I": float(np.median(finals)) if finals else None,
        "median_final_B": float(np.median([c.b_values[-1] for c in result.curves])),
        "median_first_sustained_n": float(np.median(firsts)) if firsts else None,
        "classifications": [v.classification.value for v in result.verdicts],
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--replications", type=int, default=30)
    parser.add_argument("--n-max", type=int, default=300)
    parser.add_argument("--out-dir", default=None, help="optional directory for per-preset results")
    args = parser.parse_args()

    rows = []
    for name in all_presets():
        spec = dataclasses.replace(
            preset(name, seed=args.seed, replications=args.replications), n_max=args.n_max
        )
        result = run_scenario(spec)
        rows.append(summarize(name, result))
        if args.out_dir:
            target = Path(args.out_dir) / name
            target.mkdir(parents=True, exist_ok=True)
            (target / "result.json").write_text(
                json.dumps(result_to_json(result), indent=2, sort_keys=True) + "\n"
            )
            write_result_csv(result, target / "result.csv")

    width = max(len(r["preset"]) for r in rows)
    print(f"{'preset':<{width}}  {'detect':>6}  {'med I_end':>9}  {'med B_end':>9}  {'med n_hit':>9}")
    for r in rows:
        i_end = "undef" if r["median_final_I"] is None else f"{r['median_final_I']:.4f}"
        n_hit = "never" if r["median_first_sustained_n"] is None else f"{r['median_first_sustained_n']:.0f}"
        print(
            f"{r['preset']:<{width}}  {r['detection_rate']:>6.3f}  {i_end:>9}  "
            f"{r['median_final_B']:>9.4f}  {n_hit:>9}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
