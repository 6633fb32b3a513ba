"""Scenario presets and the replication runner for the controlled study.

The stock experiment drives a mean-120 ARMA(1,1) input (marginal variance 9)
through a clamp-window transfer under one of three service ranges, optionally
contaminating the input and/or output stage with iid heavy-tailed noise, and
tracks both indices over every prefix of 2..300 observations.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .detect import Classification, DetectorConfig, Verdict, classify
from .errors import InvalidP, InvalidRange, TooFewPoints, UnknownPreset
from .indices import IndexCurve, index_curves
from .simulate import ArmaSpec, LomaxSpec, scenario_generate
from .transfer import TransferMode

__all__ = [
    "DEFAULT_SEED",
    "SERVICE_RANGES",
    "ANOMALY_SHAPES",
    "ScenarioSpec",
    "AggregateCurves",
    "ScenarioResult",
    "stock_arma",
    "preset",
    "all_presets",
    "run_scenario",
    "first_sustained_n",
    "scenario_spec_to_json",
    "scenario_spec_from_json",
    "result_to_json",
    "write_result_csv",
]

DEFAULT_SEED = 54321

NOMINAL_MEAN = 120.0
AR_COEFF = 0.6
MA_COEFF = 0.4
# Innovation variance chosen so the stock ARMA(1,1) has marginal variance 9:
# var = noise_var * (1 + 2*ar*ma + ma^2) / (1 - ar^2) = noise_var * 1.64 / 0.64.
NOISE_VARIANCE = 5.76 / 1.64

SERVICE_RANGES = {
    "precise": (120.0, 120.0),
    "strict": (117.0, 123.0),
    "satisfactory": (114.0, 126.0),
}
ANOMALY_SHAPES = {"a1.2": 1.2, "a11": 11.0}
_MODES = {"tf1": TransferMode.TF1, "tf2": TransferMode.TF2, "tf3": TransferMode.TF3}


def stock_arma() -> ArmaSpec:
    """The experiment's input process: ARMA(1,1) around 120 with marginal variance 9."""
    return ArmaSpec(
        mean=NOMINAL_MEAN,
        ar_coeffs=(AR_COEFF,),
        ma_coeffs=(MA_COEFF,),
        noise_sd=math.sqrt(NOISE_VARIANCE),
    )


@dataclass(frozen=True)
class ScenarioSpec:
    """Complete description of one simulated scenario."""

    arma: ArmaSpec
    service_range: tuple[float, float]
    mode: TransferMode
    input_anomaly: LomaxSpec | None = None
    output_anomaly: LomaxSpec | None = None
    n_max: int = 300
    n_min: int = 2
    seed: int = DEFAULT_SEED
    replications: int = 1
    p: float = 2.0
    name: str | None = None

    def __post_init__(self):
        a, b = (float(v) for v in self.service_range)
        if a > b:
            raise InvalidRange(f"service range needs a <= b, got a={a}, b={b}")
        object.__setattr__(self, "service_range", (a, b))
        if not isinstance(self.mode, TransferMode):
            raise TypeError(f"mode must be a TransferMode, got {self.mode!r}")
        if self.n_min < 2:
            raise TooFewPoints(f"n_min must be at least 2, got {self.n_min}")
        if self.n_max < self.n_min:
            raise TooFewPoints(f"n_max={self.n_max} is smaller than n_min={self.n_min}")
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        if not (math.isfinite(self.p) and self.p > 0.0):
            raise InvalidP(f"moment order p must be a positive finite real, got {self.p!r}")


def preset(name: str, *, seed: int = DEFAULT_SEED, replications: int = 1) -> ScenarioSpec:
    """Build the named stock scenario.

    Names follow ``<range>-<mode>[-<anomaly>]`` with range in {precise,
    strict, satisfactory}, mode in {none, tf1, tf2, tf3} and anomaly in
    {a1.2, a11} (required unless mode is none), e.g. ``strict-none`` or
    ``precise-tf2-a1.2``.  Contamination attaches to the channels the mode
    uses: the input for tf1, the output for tf2, both for tf3.
    """
    parts = name.strip().lower().split("-")
    hint = f"unknown preset {name!r}; expected <range>-<mode>[-<anomaly>], e.g. {all_presets()[0]!r}"
    if len(parts) < 2 or parts[0] not in SERVICE_RANGES:
        raise UnknownPreset(hint)
    service_range = SERVICE_RANGES[parts[0]]
    if parts[1] == "none":
        if len(parts) != 2:
            raise UnknownPreset(hint)
        # Anomaly-free: with both channels at zero every mode coincides.
        return ScenarioSpec(
            arma=stock_arma(),
            service_range=service_range,
            mode=TransferMode.TF3,
            seed=seed,
            replications=replications,
            name=name.strip().lower(),
        )
    if len(parts) != 3 or parts[1] not in _MODES or parts[2] not in ANOMALY_SHAPES:
        raise UnknownPreset(hint)
    mode = _MODES[parts[1]]
    law = LomaxSpec(shape=ANOMALY_SHAPES[parts[2]], scale=1.0)
    return ScenarioSpec(
        arma=stock_arma(),
        service_range=service_range,
        mode=mode,
        input_anomaly=law if mode in (TransferMode.TF1, TransferMode.TF3) else None,
        output_anomaly=law if mode in (TransferMode.TF2, TransferMode.TF3) else None,
        seed=seed,
        replications=replications,
        name=name.strip().lower(),
    )


def all_presets() -> tuple[str, ...]:
    """Every stock scenario name, in a fixed order."""
    names: list[str] = []
    for range_name in SERVICE_RANGES:
        names.append(f"{range_name}-none")
        for mode_name in _MODES:
            for anomaly_name in ANOMALY_SHAPES:
                names.append(f"{range_name}-{mode_name}-{anomaly_name}")
    return tuple(names)


@dataclass(frozen=True, eq=False)
class AggregateCurves:
    """Median and quartiles across replications at each prefix size.

    Upward-index aggregates are taken over the defined values only and are
    NaN where no replication has a defined value.
    """

    n_values: np.ndarray
    i_median: np.ndarray
    i_lower: np.ndarray
    i_upper: np.ndarray
    b_median: np.ndarray
    b_lower: np.ndarray
    b_upper: np.ndarray

    def __post_init__(self):
        for field_name in ("n_values", "i_median", "i_lower", "i_upper", "b_median", "b_lower", "b_upper"):
            arr = np.array(getattr(self, field_name), dtype=np.int64 if field_name == "n_values" else np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, field_name, arr)


@dataclass(frozen=True, eq=False)
class ScenarioResult:
    """Curves, verdicts, and cross-replication aggregates of one scenario run."""

    spec: ScenarioSpec
    curves: tuple[IndexCurve, ...]
    verdicts: tuple[Verdict, ...]
    aggregate: AggregateCurves
    detection_rate: float


def _aggregate(curves: tuple[IndexCurve, ...]) -> AggregateCurves:
    n_values = curves[0].n_values
    i_stack = np.vstack([c.i_values for c in curves])
    b_stack = np.vstack([c.b_values for c in curves])
    with warnings.catch_warnings():
        # an all-NaN column is a legal aggregate: the index is undefined there
        warnings.simplefilter("ignore", RuntimeWarning)
        i_median = np.nanmedian(i_stack, axis=0)
        i_lower = np.nanpercentile(i_stack, 25, axis=0)
        i_upper = np.nanpercentile(i_stack, 75, axis=0)
    return AggregateCurves(
        n_values,
        i_median,
        i_lower,
        i_upper,
        np.median(b_stack, axis=0),
        np.percentile(b_stack, 25, axis=0),
        np.percentile(b_stack, 75, axis=0),
    )


def run_scenario(spec: ScenarioSpec, config: DetectorConfig | None = None) -> ScenarioResult:
    """Run every replication of ``spec`` and classify each curve.

    Replications use disjoint streams derived from ``(spec.seed, r)``, so the
    result does not depend on execution order and any replication can be
    regenerated in isolation.
    """
    config = config or DetectorConfig()
    curves: list[IndexCurve] = []
    verdicts: list[Verdict] = []
    for r in range(spec.replications):
        generated = scenario_generate(spec, replication=r)
        curve = index_curves(generated.sample, n_min=spec.n_min, p=spec.p)
        curves.append(curve)
        verdicts.append(classify(curve, config))
    hits = sum(1 for v in verdicts if v.classification is Classification.ANOMALY_AFFECTED)
    return ScenarioResult(
        spec=spec,
        curves=tuple(curves),
        verdicts=tuple(verdicts),
        aggregate=_aggregate(tuple(curves)),
        detection_rate=hits / len(verdicts),
    )


def first_sustained_n(curve: IndexCurve, band: float = 0.05) -> int | None:
    """Smallest prefix size from which the upward index stays within ``band`` of 1/2.

    "Stays" means every later defined value also lies inside the band
    (undefined values neither qualify nor disqualify).  None when even the
    last defined value escapes the band, or no value is defined at all.
    """
    best: int | None = None
    for n, value in zip(reversed(curve.n_values), reversed(curve.i_values)):
        if math.isnan(value):
            continue
        if abs(value - 0.5) <= band:
            best = int(n)
        else:
            break
    return best


def scenario_spec_to_json(spec: ScenarioSpec) -> dict:
    """JSON-ready form of a scenario spec (inverse of ``scenario_spec_from_json``)."""
    return {
        "name": spec.name,
        "arma": {
            "mean": spec.arma.mean,
            "ar_coeffs": list(spec.arma.ar_coeffs),
            "ma_coeffs": list(spec.arma.ma_coeffs),
            "noise_sd": spec.arma.noise_sd,
            "burn_in": spec.arma.burn_in,
        },
        "service_range": list(spec.service_range),
        "mode": spec.mode.value,
        "input_anomaly": None if spec.input_anomaly is None else {"shape": spec.input_anomaly.shape, "scale": spec.input_anomaly.scale},
        "output_anomaly": None if spec.output_anomaly is None else {"shape": spec.output_anomaly.shape, "scale": spec.output_anomaly.scale},
        "n_max": spec.n_max,
        "n_min": spec.n_min,
        "seed": spec.seed,
        "replications": spec.replications,
        "p": spec.p,
    }


def _lomax_from_json(obj) -> LomaxSpec | None:
    if obj is None:
        return None
    return LomaxSpec(shape=obj["shape"], scale=obj.get("scale", 1.0))


def scenario_spec_from_json(obj: dict) -> ScenarioSpec:
    """Build a scenario spec from its JSON form; missing optional keys take defaults."""
    try:
        arma_obj = obj["arma"]
        service_range = obj["service_range"]
        mode_name = obj["mode"]
    except (TypeError, KeyError) as exc:
        raise ValueError("scenario JSON needs 'arma', 'service_range' and 'mode'") from exc
    try:
        mode = TransferMode(str(mode_name).lower())
    except ValueError:
        raise ValueError(f"unknown transfer mode {mode_name!r}; expected tf1, tf2 or tf3") from None
    arma = ArmaSpec(
        mean=arma_obj["mean"],
        ar_coeffs=tuple(arma_obj.get("ar_coeffs", ())),
        ma_coeffs=tuple(arma_obj.get("ma_coeffs", ())),
        noise_sd=arma_obj.get("noise_sd", 1.0),
        burn_in=arma_obj.get("burn_in", 1000),
    )
    return ScenarioSpec(
        arma=arma,
        service_range=tuple(service_range),
        mode=mode,
        input_anomaly=_lomax_from_json(obj.get("input_anomaly")),
        output_anomaly=_lomax_from_json(obj.get("output_anomaly")),
        n_max=int(obj.get("n_max", 300)),
        n_min=int(obj.get("n_min", 2)),
        seed=int(obj.get("seed", DEFAULT_SEED)),
        replications=int(obj.get("replications", 1)),
        p=float(obj.get("p", 2.0)),
        name=obj.get("name"),
    )


def _nan_to_none(values) -> list:
    return [None if (isinstance(v, float) and math.isnan(v)) else v for v in (float(x) for x in values)]


def result_to_json(result: ScenarioResult) -> dict:
    """JSON-ready form of a scenario result: spec, aggregates, verdicts, detection rate."""
    agg = result.aggregate
    return {
        "spec": scenario_spec_to_json(result.spec),
        "detection_rate": result.detection_rate,
        "verdicts": [v.to_dict() for v in result.verdicts],
        "aggregate": {
            "n": [int(v) for v in agg.n_values],
            "i_median": _nan_to_none(agg.i_median),
            "i_lower": _nan_to_none(agg.i_lower),
            "i_upper": _nan_to_none(agg.i_upper),
            "b_median": _nan_to_none(agg.b_median),
            "b_lower": _nan_to_none(agg.b_lower),
            "b_upper": _nan_to_none(agg.b_upper),
        },
    }


def write_result_csv(result: ScenarioResult, path) -> None:
    """Write all replications in long format: ``replication,n,I,B`` (undefined I empty)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("replication", "n", "I", "B"))
        for r, curve in enumerate(result.curves):
            defined = curve.i_defined
            for k in range(len(curve)):
                i_cell = repr(float(curve.i_values[k])) if defined[k] else ""
                writer.writerow((r, int(curve.n_values[k]), i_cell, repr(float(curve.b_values[k]))))
