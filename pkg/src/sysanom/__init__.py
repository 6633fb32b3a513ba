"""Detect persistent systematic contamination of input-output systems.

The package tracks two statistics of the output concomitants (outputs
reordered by their inputs) over growing sample prefixes: the upward share of
the concomitant variation (``index_I``) and the scaled total variation
(``index_B``).  An orderly system keeps the first away from 1/2 and the
second bounded; persistent exogenous contamination drives the first to 1/2
and the second to infinity, which is the signature the detector votes on.

Modules: ``indices`` (core statistics and prefix curves), ``transfer``
(piecewise-linear transfer maps and their theoretical index limit),
``simulate`` (seeded stochastic generators), ``dataio`` (CSV ingestion and
stationarity transforms), ``detect`` (decision rules), ``experiment``
(stock presets and the replication runner), ``svg`` (deterministic charts),
``cli`` (command line).
"""

from __future__ import annotations

from . import errors
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
    TieWarning,
    TooFewPoints,
    UnknownPreset,
    ZeroBase,
)
from .dataio import (
    Series,
    lag_difference,
    percentage_returns,
    read_curve_csv,
    read_pairs_csv,
    series_from_json,
    series_to_json,
    write_curve_csv,
)
from .detect import Classification, DetectorConfig, Verdict, classify
from .experiment import (
    DEFAULT_SEED,
    AggregateCurves,
    ScenarioResult,
    ScenarioSpec,
    all_presets,
    first_sustained_n,
    preset,
    result_to_json,
    run_scenario,
    scenario_spec_from_json,
    scenario_spec_to_json,
    stock_arma,
    write_result_csv,
)
from .indices import (
    DEFAULT_N_MIN,
    IndexCurve,
    OrderedSample,
    PairedSample,
    concomitant_sort,
    index_B,
    index_curves,
    index_I,
    lambda_n,
)
from .simulate import (
    ArmaSpec,
    GeneratedScenario,
    LomaxSpec,
    RngStream,
    arma_generate,
    lomax_quantile,
    lomax_sample,
    normal_sample,
    scenario_generate,
)
from .svg import curve_svg, write_curve_svg
from .transfer import (
    DerivativeDensity,
    PiecewiseLinearBaseline,
    TransferMode,
    apply_transfer,
    baseline_from_json,
    baseline_to_json,
    clamped,
    derivative_density,
    eval_baseline,
    lambda_h0,
    limit_index,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "__version__",
    # errors
    "SysanomError",
    "EmptySample",
    "NonFiniteValue",
    "LengthMismatch",
    "TooFewPoints",
    "InvalidP",
    "InvalidRange",
    "NonCausalSpec",
    "InvalidLength",
    "UnknownPreset",
    "ZeroBase",
    "ParseError",
    "AllUndefined",
    "TieWarning",
    # indices
    "DEFAULT_N_MIN",
    "PairedSample",
    "OrderedSample",
    "IndexCurve",
    "concomitant_sort",
    "index_I",
    "index_B",
    "lambda_n",
    "index_curves",
    # transfer
    "TransferMode",
    "PiecewiseLinearBaseline",
    "DerivativeDensity",
    "clamped",
    "eval_baseline",
    "derivative_density",
    "limit_index",
    "lambda_h0",
    "apply_transfer",
    "baseline_to_json",
    "baseline_from_json",
    # simulate
    "RngStream",
    "ArmaSpec",
    "LomaxSpec",
    "GeneratedScenario",
    "normal_sample",
    "lomax_quantile",
    "lomax_sample",
    "arma_generate",
    "scenario_generate",
    # dataio
    "Series",
    "percentage_returns",
    "lag_difference",
    "read_pairs_csv",
    "write_curve_csv",
    "read_curve_csv",
    "series_to_json",
    "series_from_json",
    # detect
    "Classification",
    "DetectorConfig",
    "Verdict",
    "classify",
    # experiment
    "DEFAULT_SEED",
    "ScenarioSpec",
    "ScenarioResult",
    "AggregateCurves",
    "stock_arma",
    "preset",
    "all_presets",
    "run_scenario",
    "first_sustained_n",
    "scenario_spec_to_json",
    "scenario_spec_from_json",
    "result_to_json",
    "write_result_csv",
    # svg
    "curve_svg",
    "write_curve_svg",
]
