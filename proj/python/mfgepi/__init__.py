"""Multi-population mean field games of epidemic behavior.

Thin wrapper over the C++ core: scenario catalog, equilibrium solver,
experiment metrics and the finite population validator. JSON-shaped results
come back as plain dicts matching the CLI artifact files byte for byte.
"""

import json as _json

from ._core import (
    ConfigError,
    Scenario,
    ScenarioPair,
    SimReport,
    Solution,
    builtin_pair,
    builtin_scenario,
    catalog_pair_names,
    catalog_scenario_names,
    load_scenario,
    scenario_from_json,
    simulate_finite_n,
    solve,
    write_run_artifacts,
)
from ._core import comparison_report_json as _comparison_report_json
from ._core import run_metrics_json as _run_metrics_json

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "Scenario",
    "ScenarioPair",
    "SimReport",
    "Solution",
    "builtin_pair",
    "builtin_scenario",
    "catalog_pair_names",
    "catalog_scenario_names",
    "comparison_report",
    "load_scenario",
    "run_metrics",
    "scenario_from_json",
    "simulate_finite_n",
    "solve",
    "write_run_artifacts",
]


def run_metrics(scenario, solution):
    """Peak/dip metrics and disparities of one solved scenario, as a dict."""
    return _json.loads(_run_metrics_json(scenario, solution))


def comparison_report(pair, baseline, treatment):
    """Baseline/treatment metrics plus mapped peak differences, as a dict."""
    return _json.loads(_comparison_report_json(pair, baseline, treatment))
