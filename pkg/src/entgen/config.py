"""Run configuration: INI-style files with a fixed schema and fail-fast parsing.

Every key has a documented default; unknown sections or keys are rejected.
The rendered echo of a resolved configuration is itself a loadable config,
which is what makes any run reproducible from its emitted artifact alone.
"""

from __future__ import annotations

import configparser
import io
import math

from .errors import ConfigError

_TWO_PI = 2.0 * math.pi

# section -> key -> (type tag, default). Type tags: int, float, bool, str.
SCHEMA: dict[str, dict[str, tuple[str, object]]] = {
    "run": {
        "seed": ("int", 42),
        "out": ("str", "entgen-out"),
        "shots": ("int", 2048),
        "noise": ("bool", False),
        "quiet": ("bool", False),
    },
    "ansatz": {
        "family": ("str", "A4"),
        "num_qubits": ("int", 4),
        "layers": ("int", 1),
    },
    "target": {
        "kind": ("str", "gaussian"),
        "mu": ("float", 0.2),
        "sigma": ("float", 0.05),
        "weibull_shape": ("float", 1.2),
        "weibull_scale": ("float", 0.05),
        "reflect_point": ("float", 0.2),
        "ce_max": ("float", 0.4),
        "bins": ("int", 20),
        "values_file": ("str", ""),
    },
    "anneal": {
        "max_iterations": ("int", 1000),
        "initial_temperature": ("float", 5230.0),
        "visiting_shape": ("float", 2.62),
        "acceptance_shape": ("float", -5.0),
        "local_search": ("bool", True),
        "samples_per_eval": ("int", 200),
        "ce_method": ("str", "full"),
        "diversity_weight": ("float", 1.0),
        "diversity_pairs": ("int", 100),
        "diversity_threshold": ("float", 0.95),
        "holdout_samples": ("int", 1000),
        "bound_low": ("float", -_TWO_PI),
        "bound_high": ("float", _TWO_PI),
    },
    "dataset": {
        "count": ("int", 1000),
        "ce_shots": ("int", 0),
    },
    "noise": {
        "p1": ("float", 3e-4),
        "p2": ("float", 8e-3),
        "p_readout": ("float", 1.5e-2),
    },
    "sensors": {
        "protocols": ("str", "soil,dm"),
    },
    "soil": {
        "num_sensor_qubits": ("int", 4),
        "phi_free": ("float", 0.2),
        "phi_soil_high": ("float", 1.0),
        "phi_soil_low": ("float", 0.4),
        "jitter_sigma": ("float", 0.1),
        "ensemble_size": ("int", 1800),
        "shots_per_state": ("int", 0),
    },
    "darkmatter": {
        "num_sensor_qubits": ("int", 4),
        "phi_weak": ("float", 0.01),
        "phi_strong": ("float", 0.1),
        "jitter_sigma": ("float", 0.005),
        "ensemble_size": ("int", 500),
    },
    "classifier": {
        "reps": ("int", 2),
        "decision_threshold": ("float", 0.0),
        "max_iterations": ("int", 300),
        "folds": ("int", 5),
        "noisy": ("bool", True),
        "trajectories": ("int", 256),
        "block_size": ("int", 9),
        "low_dataset": ("str", ""),
        "high_dataset": ("str", ""),
    },
    "compare": {
        "families": ("str", "A1,A2,A3,A4"),
        "targets": ("str", "uniform,gaussian,weibull_left,weibull_right"),
    },
    "ce": {
        "dataset": ("str", ""),
        "method": ("str", "full"),
    },
    "swap": {
        "dataset": ("str", ""),
        "pairs_per_bin": ("int", 50),
        "bins": ("int", 20),
        "shots": ("int", 0),
    },
}

# run files append the cost trace as a section; it is ignored when reloading
TRACE_SECTION = "cost_trace"


def default_config() -> dict[str, dict[str, object]]:
    return {sec: {k: d for k, (_, d) in keys.items()} for sec, keys in SCHEMA.items()}


def _parse_value(section: str, key: str, raw: str) -> object:
    tag, _ = SCHEMA[section][key]
    raw = raw.strip()
    try:
        if tag == "int":
            return int(raw)
        if tag == "float":
            return float(raw)
        if tag == "bool":
            low = raw.lower()
            if low in ("1", "true", "on", "yes"):
                return True
            if low in ("0", "false", "off", "no"):
                return False
            raise ValueError(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: cannot parse {raw!r} as {tag}") from exc


def load_config(path: str | None = None, text: str | None = None) -> dict:
    """Defaults overlaid with the file's entries; unknown entries are fatal."""
    cfg = default_config()
    if path is None and text is None:
        return cfg
    parser = configparser.ConfigParser(interpolation=None)
    try:
        if text is None:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        parser.read_string(text)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    for section in parser.sections():
        if section == TRACE_SECTION:
            continue
        if section not in SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            if key not in SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            cfg[section][key] = _parse_value(section, key, raw)
    return cfg


def render_config(cfg: dict, cost_trace=None) -> str:
    """Deterministic text form of a resolved config (plus an optional trace)."""
    out = io.StringIO()
    for section in SCHEMA:
        out.write(f"[{section}]\n")
        for key in SCHEMA[section]:
            value = cfg[section][key]
            if isinstance(value, bool):
                value = "on" if value else "off"
            elif isinstance(value, float):
                value = repr(value)
            out.write(f"{key} = {value}\n")
        out.write("\n")
    if cost_trace is not None:
        out.write(f"[{TRACE_SECTION}]\n")
        for i, cost in enumerate(cost_trace):
            out.write(f"eval_{i} = {cost!r}\n")
    return out.getvalue()


def parse_list(raw: str) -> list[str]:
    return [item.strip() for item in raw.split(",") if item.strip()]
