"""Command-line interface.

Subcommands: ``indices`` (alias ``analyze``) runs the CSV pipeline end to end,
``simulate`` runs a stock preset or a JSON scenario spec, ``limit`` prints the
theoretical index limit of a baseline, ``preset-list`` lists stock scenarios.

Standard output carries a single JSON document per run, always including the
materialized effective configuration; human diagnostics go to standard error.
Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path

from . import __version__
from .dataio import Series, lag_difference, percentage_returns, read_pairs_csv, write_curve_csv
from .detect import DetectorConfig, classify
from .errors import (
    AllUndefined,
    EmptySample,
    InvalidLength,
    InvalidP,
    InvalidRange,
    LengthMismatch,
    NonCausalSpec,
    NonFiniteValue,
    ParseError,
    SysanomError,
    TooFewPoints,
    UnknownPreset,
    ZeroBase,
)
from .experiment import (
    DEFAULT_SEED,
    all_presets,
    preset,
    result_to_json,
    run_scenario,
    scenario_spec_from_json,
    scenario_spec_to_json,
    write_result_csv,
)
from .indices import DEFAULT_N_MIN, PairedSample, index_curves
from .simulate import scenario_generate
from .svg import write_curve_svg
from .transfer import baseline_from_json, lambda_h0, limit_index

__all__ = ["main"]

_USAGE_ERRORS = (InvalidRange, InvalidP, InvalidLength, NonCausalSpec, UnknownPreset)
_DATA_ERRORS = (
    EmptySample,
    NonFiniteValue,
    LengthMismatch,
    TooFewPoints,
    ZeroBase,
    ParseError,
    AllUndefined,
    OSError,
    json.JSONDecodeError,
    ValueError,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the contract reserves 2 for
    # data errors, so route usage problems through our own exception instead.
    def error(self, message):
        raise _UsageError(message)


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _parse_transform(text: str):
    if text == "none" or text == "returns":
        return (text, None)
    if text.startswith("diff:"):
        try:
            lag = int(text.split(":", 1)[1])
        except ValueError:
            raise _UsageError(f"bad transform {text!r}: diff lag must be an integer") from None
        if lag < 1:
            raise _UsageError(f"bad transform {text!r}: diff lag must be >= 1")
        return ("diff", lag)
    raise _UsageError(f"unknown transform {text!r}; expected none, returns, or diff:<lag>")


def _apply_transform(series: Series, kind: str, lag: int | None) -> Series:
    if kind == "none":
        return series
    if kind == "returns":
        return percentage_returns(series)
    return lag_difference(series, lag=lag)


def _column(text: str):
    return int(text) if text.lstrip("+-").isdigit() else text


def _detector_config(args) -> DetectorConfig:
    try:
        return DetectorConfig(
            tail_fraction=args.tail_fraction,
            i_band=args.i_band,
            b_growth_threshold=args.b_growth_threshold,
            min_points=args.min_points,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _add_detector_flags(parser) -> None:
    parser.add_argument("--tail-fraction", type=float, default=0.5, help="trailing share of the curve used for the verdict")
    parser.add_argument("--i-band", type=float, default=0.05, help="acceptance band half-width around 1/2")
    parser.add_argument("--b-growth-threshold", type=float, default=0.25, help="log-log slope above which growth counts as unbounded")
    parser.add_argument("--min-points", type=int, default=30, help="smallest usable tail window")


def _cmd_indices(args) -> int:
    kind, lag = _parse_transform(args.transform)
    config = _detector_config(args)
    sample_raw = read_pairs_csv(args.input, _column(args.x_col), _column(args.y_col), args.has_header)
    x_series = _apply_transform(Series(sample_raw.x, name="x"), kind, lag)
    y_series = _apply_transform(Series(sample_raw.y, name="y"), kind, lag)
    sample = PairedSample(x_series.values, y_series.values, label=str(args.input))
    curve = index_curves(sample, n_min=args.n_min, p=args.p)
    verdict = classify(curve, config)
    write_curve_csv(curve, args.out)
    if args.svg:
        write_curve_svg(curve, args.svg)
    payload = verdict.to_dict()
    payload["effective_config"] = {
        "command": "indices",
        "input": str(args.input),
        "x_col": args.x_col,
        "y_col": args.y_col,
        "has_header": bool(args.has_header),
        "transform": args.transform,
        "n_min": args.n_min,
        "p": args.p,
        "out": str(args.out),
        "svg": str(args.svg) if args.svg else None,
        "detector": dataclasses.asdict(config),
    }
    _emit(payload)
    return 0


def _write_sample_csv(generated, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("t", "x", "y", "y_clean", "delta", "eps"))
        sample = generated.sample
        for t in range(len(sample)):
            writer.writerow(
                (
                    t,
                    repr(float(sample.x[t])),
                    repr(float(sample.y[t])),
                    repr(float(generated.y_clean[t])),
                    repr(float(generated.delta[t])),
                    repr(float(generated.eps[t])),
                )
            )


def _cmd_simulate(args) -> int:
    if args.preset is not None:
        spec = preset(args.preset)
    else:
        with open(args.spec, encoding="utf-8") as fh:
            spec = scenario_spec_from_json(json.load(fh))
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.replications is not None:
        overrides["replications"] = args.replications
    if args.n_min is not None:
        overrides["n_min"] = args.n_min
    if args.n_max is not None:
        overrides["n_max"] = args.n_max
    if args.p is not None:
        overrides["p"] = args.p
    if overrides:
        spec = dataclasses.replace(spec, **overrides)
    config = DetectorConfig()
    result = run_scenario(spec, config)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files: list[str] = []
    for r in range(spec.replications):
        generated = scenario_generate(spec, replication=r)
        sample_path = out_dir / f"sample_{r:03d}.csv"
        _write_sample_csv(generated, sample_path)
        files.append(sample_path.name)
        curve_path = out_dir / f"curve_{r:03d}.csv"
        write_curve_csv(result.curves[r], curve_path)
        files.append(curve_path.name)
        if args.svg:
            svg_path = out_dir / f"curve_{r:03d}.svg"
            write_curve_svg(result.curves[r], svg_path)
            files.append(svg_path.name)
    verdicts_path = out_dir / "verdicts.json"
    verdicts_path.write_text(
        json.dumps([v.to_dict() for v in result.verdicts], indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    files.append(verdicts_path.name)
    result_path = out_dir / "result.json"
    result_path.write_text(json.dumps(result_to_json(result), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    files.append(result_path.name)
    long_path = out_dir / "result.csv"
    write_result_csv(result, long_path)
    files.append(long_path.name)

    _emit(
        {
            "detection_rate": result.detection_rate,
            "classifications": [v.classification.value for v in result.verdicts],
            "out_dir": str(out_dir),
            "files": files,
            "effective_config": {
                "command": "simulate",
                "spec": scenario_spec_to_json(spec),
                "detector": dataclasses.asdict(config),
                "svg": bool(args.svg),
            },
        }
    )
    return 0


def _cmd_limit(args) -> int:
    with open(args.baseline, encoding="utf-8") as fh:
        obj = json.load(fh)
    baseline = baseline_from_json(obj)
    _emit(
        {
            "limit_index": limit_index(baseline),
            "lambda": lambda_h0(baseline),
            "effective_config": {"command": "limit", "baseline": str(args.baseline)},
        }
    )
    return 0


def _cmd_preset_list(args) -> int:
    _emit({"presets": list(all_presets()), "effective_config": {"command": "preset-list"}})
    return 0


def _add_indices_parser(subparsers, name: str) -> None:
    sub = subparsers.add_parser(name, help="read a pairs CSV, write index curves, print a verdict")
    sub.add_argument("--input", required=True, help="CSV file of paired observations")
    sub.add_argument("--x-col", default="0", help="input column: zero-based index or header name")
    sub.add_argument("--y-col", default="1", help="output column: zero-based index or header name")
    sub.add_argument("--has-header", action="store_true", help="first row is a header")
    sub.add_argument("--transform", default="none", help="per-column stationarity transform: none, returns, or diff:<lag>")
    sub.add_argument("--n-min", type=int, default=DEFAULT_N_MIN, help="smallest prefix size on the curve")
    sub.add_argument("--p", type=float, default=2.0, help="moment order of the scaled variation")
    sub.add_argument("--out", required=True, help="output curve CSV path")
    sub.add_argument("--svg", default=None, help="optional SVG chart path")
    _add_detector_flags(sub)
    sub.set_defaults(func=_cmd_indices)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sysanom", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    _add_indices_parser(subparsers, "indices")
    _add_indices_parser(subparsers, "analyze")

    sim = subparsers.add_parser("simulate", help="run a stock preset or JSON scenario spec")
    source = sim.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", default=None, help="stock scenario name (see preset-list)")
    source.add_argument("--spec", default=None, help="scenario spec JSON file")
    sim.add_argument("--out-dir", required=True, help="directory for samples, curves, verdicts and aggregates")
    sim.add_argument("--seed", type=int, default=None, help=f"master seed (default {DEFAULT_SEED} for presets)")
    sim.add_argument("--replications", type=int, default=None, help="number of replications")
    sim.add_argument("--n-min", type=int, default=None, help="smallest prefix size on the curves")
    sim.add_argument("--n-max", type=int, default=None, help="sample size per replication")
    sim.add_argument("--p", type=float, default=None, help="moment order of the scaled variation")
    sim.add_argument("--svg", action="store_true", help="also render one SVG chart per replication")
    sim.set_defaults(func=_cmd_simulate)

    lim = subparsers.add_parser("limit", help="theoretical index limit of a piecewise-linear baseline")
    lim.add_argument("--baseline", required=True, help="baseline JSON file with breakpoints and values")
    lim.set_defaults(func=_cmd_limit)

    plist = subparsers.add_parser("preset-list", help="list stock scenario names")
    plist.set_defaults(func=_cmd_preset_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except _USAGE_ERRORS as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except _DATA_ERRORS as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except SysanomError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - last-resort exit-code mapping
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
