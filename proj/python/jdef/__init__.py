"""Deficiency-index classification for scalar, block and band Jacobi matrices."""

import json
import os

from ._jdef import ConfigError, check_invariants, classify_text, k2_limsup, power_band, probe_text

__all__ = ["ConfigError", "classify", "probe", "check_invariants", "power_band", "k2_limsup"]


def _read(config):
    if os.path.exists(config):
        with open(config, encoding="utf-8") as fh:
            return fh.read(), os.path.dirname(os.path.abspath(config))
    return config, "."


def classify(config, with_timing=True):
    """Report for an INI file path or INI text, as a dict."""
    text, base = _read(config)
    return json.loads(classify_text(text, base, with_timing))


def probe(config):
    text, base = _read(config)
    return json.loads(probe_text(text, base))
