"""Reconstruction of a bandlimited field from a mobile sensor whose sample
locations are unknown. Thin wrapper over the native module."""

import json

from ._mobisense import (  # noqa: F401
    ConfigInvalid,
    DegenerateFit,
    DegenerateOrder,
    DegenerateRoots,
    Error,
    InfeasiblePde,
    InsufficientSamples,
    RankDeficient,
    UnknownScenario,
    __version__,
    catalog_pde,
    characteristic_roots,
    check_stability,
    evaluate_scenario,
    fit_loglog_slope,
    scenario_coefficients,
    verify_bandlimit,
    verify_ode,
    verify_scaling,
)
from ._mobisense import _run_sweep


def run_sweep(config, workers=1):
    """Run a density sweep. `config` is a dict in the CLI's JSON config format.

    Returns (csv_text, summary_dict).
    """
    out = _run_sweep(json.dumps(config), workers)
    return out["csv"], json.loads(out["summary"])
