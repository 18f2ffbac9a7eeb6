"""Breathing modes of two interacting particles in a harmonic trap."""

import json

from ._core import (
    FitFormulaParams,
    QbmError,
    SystemSpec,
    TwoModeFit,
    config_hash,
    eval_fit_formula,
    fit_formula_calibrate,
    fit_two_modes,
    hartree_frequency,
    sector_gap,
    semiclassical_frequency,
    simulate,
)
from ._core import run_config as _run_config


def run(config):
    """Run a configuration (dict or JSON text); returns the summary as a dict."""
    text = config if isinstance(config, str) else json.dumps(config)
    return json.loads(_run_config(text))


__all__ = [
    "FitFormulaParams",
    "QbmError",
    "SystemSpec",
    "TwoModeFit",
    "config_hash",
    "eval_fit_formula",
    "fit_formula_calibrate",
    "fit_two_modes",
    "hartree_frequency",
    "run",
    "sector_gap",
    "semiclassical_frequency",
    "simulate",
]
