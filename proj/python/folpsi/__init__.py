"""Longitudinal pseudodifferential calculus on singular foliations."""

import json

from ._core import (
    Coeff,
    ConfigError,
    Foliation,
    FolpsiError,
    InputError,
    ParseError,
    Symbol,
    bracket,
    estimate_order,
    parse_coeff,
    symbol,
)
from ._core import run_scenario as _run_scenario

__all__ = [
    "Coeff",
    "ConfigError",
    "Foliation",
    "FolpsiError",
    "InputError",
    "ParseError",
    "Symbol",
    "bracket",
    "estimate_order",
    "parse_coeff",
    "run_scenario",
    "symbol",
]


def run_scenario(config, subcommand="report", seed=None, grid=None):
    """Run a scenario (dict, JSON text, or path) and return the report as a dict."""
    if isinstance(config, dict):
        text = json.dumps(config)
    elif isinstance(config, str) and config.lstrip().startswith("{"):
        text = config
    else:
        with open(config, encoding="utf-8") as fh:
            text = fh.read()
    kwargs = {"subcommand": subcommand, "grid": grid}
    if seed is not None:
        kwargs["seed"] = seed
    return json.loads(_run_scenario(text, **kwargs))
