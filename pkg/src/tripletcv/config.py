"""
YAML config files for `ExperimentConfig`.

Schema (angles in degrees)::

    input_a:
      squeezing_db: -4.6
      antisqueezing_db: 22.3
      theta_sq_deg: 4.0
    input_b: {...same keys...}
    beamsplitter:
      transmittance: 0.49
      relative_phase_deg: 90.0
    visibility: 0.98
    combiner:
      gain: 1.0
      sign: difference        # or "sum"
    metadata:                 # optional, echoed into outputs only
      detection_frequency_mhz: 17.5
"""

from __future__ import annotations

import math
from pathlib import Path

import yaml

from .errors import InvalidArgument
from .experiment_sim import CombinerSpec, ExperimentConfig, KerrInputSpec


class ConfigError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"config field '{field}': {message}")
        self.field = field


def _get(d: dict, key: str, path: str, kind=float, default=None):
    if not isinstance(d, dict):
        raise ConfigError(path, "expected a mapping")
    full = f"{path}.{key}" if path else key
    if key not in d:
        if default is not None:
            return default
        raise ConfigError(full, "missing")
    value = d[key]
    try:
        if kind is float and isinstance(value, bool):
            raise TypeError
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(full, f"expected {kind.__name__}, got {value!r}") from None


def _kerr(d: dict, path: str) -> KerrInputSpec:
    if not isinstance(d, dict):
        raise ConfigError(path, "expected a mapping")
    sq = _get(d, "squeezing_db", path)
    asq = _get(d, "antisqueezing_db", path)
    theta = _get(d, "theta_sq_deg", path)
    try:
        return KerrInputSpec(sq, asq, math.radians(theta))
    except InvalidArgument as exc:
        raise ConfigError(path, str(exc)) from None


def config_from_dict(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "expected a mapping")
    bs = raw.get("beamsplitter")
    if bs is None:
        raise ConfigError("beamsplitter", "missing")
    comb = raw.get("combiner", {"gain": 1.0, "sign": "difference"})
    sign = _get(comb, "sign", "combiner", str, "difference")
    if sign not in ("sum", "difference"):
        raise ConfigError("combiner.sign", f"must be 'sum' or 'difference', got {sign!r}")
    metadata = raw.get("metadata", {}) or {}
    if not isinstance(metadata, dict):
        raise ConfigError("metadata", "expected a mapping")
    fields = {
        "bs_transmittance": ("beamsplitter.transmittance", _get(bs, "transmittance", "beamsplitter")),
        "visibility": ("visibility", _get(raw, "visibility", "")),
    }
    for key, (name, value) in fields.items():
        if not 0.0 <= value <= 1.0:
            raise ConfigError(name, f"must lie in [0, 1], got {value}")
    return ExperimentConfig(
        input_a=_kerr(raw.get("input_a"), "input_a"),
        input_b=_kerr(raw.get("input_b"), "input_b"),
        bs_transmittance=fields["bs_transmittance"][1],
        relative_phase=math.radians(_get(bs, "relative_phase_deg", "beamsplitter")),
        visibility=fields["visibility"][1],
        combiner=CombinerSpec(_get(comb, "gain", "combiner", float, 1.0), sign),
        metadata=dict(metadata),
    )


def _kerr_dict(k: KerrInputSpec) -> dict:
    return {
        "squeezing_db": k.squeezing_db,
        "antisqueezing_db": k.antisqueezing_db,
        "theta_sq_deg": math.degrees(k.theta_sq),
    }


def config_to_dict(cfg: ExperimentConfig) -> dict:
    out = {
        "input_a": _kerr_dict(cfg.input_a),
        "input_b": _kerr_dict(cfg.input_b),
        "beamsplitter": {
            "transmittance": cfg.bs_transmittance,
            "relative_phase_deg": math.degrees(cfg.relative_phase),
        },
        "visibility": cfg.visibility,
        "combiner": {"gain": cfg.combiner.gain, "sign": cfg.combiner.sign},
    }
    if cfg.metadata:
        out["metadata"] = dict(cfg.metadata)
    return out


def dumps(cfg: ExperimentConfig) -> str:
    return yaml.safe_dump(config_to_dict(cfg), sort_keys=False)


def loads(text: str) -> ExperimentConfig:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("<root>", f"not valid YAML ({exc})") from None
    return config_from_dict(raw)


def load(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc.strerror}") from None
    return loads(text)
