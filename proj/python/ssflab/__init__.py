"""Spectral shift function experiments on Dirichlet boxes.

Scenarios are plain dicts with the same keys as the JSON config files; any key
left out takes its default.
"""

import json

from . import _ssflab
from ._ssflab import ConfigError, Error, InvalidArgument, OracleCapExceeded, kolmogorov_tail

__version__ = _ssflab.__version__

__all__ = [
    "ConfigError",
    "Error",
    "InvalidArgument",
    "OracleCapExceeded",
    "config_hash",
    "normalize_config",
    "count",
    "default_config",
    "kolmogorov_tail",
    "laplace_mc",
    "run",
    "spectra",
    "ssf_curve",
    "subcommands",
    "trace_laplace",
    "validate",
]


def _text(config):
    if config is None:
        return "{}"
    if isinstance(config, str):
        return config
    return json.dumps(config)


def default_config():
    return json.loads(_ssflab.default_config())


def normalize_config(config=None):
    return json.loads(_ssflab.normalize_config(_text(config)))


def config_hash(config=None):
    return _ssflab.config_hash(_text(config))


def spectra(L, config=None):
    """Sorted eigenvalues of both operators at box size L."""
    return _ssflab.spectra(_text(config), L)


def count(L, E, config=None):
    return _ssflab.count(_text(config), L, E)


def ssf_curve(L, config=None, shift=None):
    """Breakpoints and the step values of the exact curve."""
    return _ssflab.ssf_curve(_text(config), L, shift)


def laplace_mc(t, config=None, L=None, shift=None, threads=1):
    """Monte Carlo Laplace transform; L=None is the infinite-volume estimate."""
    return _ssflab.laplace_mc(_text(config), t, L, shift, threads)


def trace_laplace(L, t, config=None):
    return _ssflab.trace_laplace(_text(config), L, t)


def run(command, out_dir, config=None, threads=1):
    """Runs one CLI subcommand; returns its exit status."""
    return _ssflab.run(command, _text(config), str(out_dir), threads)


def validate(out_dir, config=None, only=(), threads=1):
    return _ssflab.validate(_text(config), str(out_dir), list(only), threads)


def subcommands():
    return list(_ssflab.subcommands())
