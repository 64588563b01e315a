# SPDX-License-Identifier: Apache-2.0
"""Vehicular radar imaging on the IEEE 802.11ad single-carrier waveform.

The heavy lifting lives in the C++ core; this package re-exports the bound
operations: waveform generation, frame synthesis, the estimation chain, and
image formation.
"""

from adisar._core import (
    ConfigError,
    NoTargetDetected,
    SimConfig,
    default_vehicle,
    emit_config,
    golay_pair,
    ieee80211ad_pair_128,
    parse_config_file,
    parse_config_text,
    preamble,
    run_e2e,
    simulate,
    sweep,
)

__all__ = [
    "ConfigError",
    "NoTargetDetected",
    "SimConfig",
    "default_vehicle",
    "emit_config",
    "golay_pair",
    "ieee80211ad_pair_128",
    "parse_config_file",
    "parse_config_text",
    "preamble",
    "run_e2e",
    "simulate",
    "sweep",
]
