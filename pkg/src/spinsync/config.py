"""Run configuration: JSON documents in MHz/rad, converted to rad/us on load."""

from __future__ import annotations

import copy
import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dynamics import CLOSED_FORM_VARIANTS
from .effective import IdealSpinModel
from .rb87 import DriveConfig, PhysicalConstants, mhz

MODELS = ("full", "effective", "ideal", "expanded-ideal")
SOLVERS = ("exact", "perturbative", "closed-form")
SWEEP_VARIABLES = ("alpha", "delta_b", "beta")

# DriveConfig fields given in MHz in the JSON document
_FREQUENCY_FIELDS = {
    "omega_plus1",
    "omega_0",
    "omega_minus1",
    "omega_prime",
    "delta_b",
    "delta_b_prime",
    "delta_pi_dprime",
    "delta_sigma_dprime",
    "delta_pi_prime",
}
_PHASE_FIELDS = {"phi_plus1", "phi_0", "phi_minus1", "phi_prime"}
_IDEAL_FREQUENCY_FIELDS = {"delta", "omega", "gamma_g", "gamma_d"}

REFERENCE_DRIVE_MHZ = {
    "omega_plus1": 9.5,
    "omega_0": 1.0,
    "omega_minus1": 9.5,
    "omega_prime": 3.0,
    "delta_b": 0.4,
    "ideal_mapping": True,
}


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(f"sweep.variable: expected one of {SWEEP_VARIABLES}, got {self.variable!r}")
        if int(self.points) != self.points or self.points < 2:
            raise ConfigError(f"sweep.points: need an integer >= 2, got {self.points!r}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.points))


@dataclass(frozen=True)
class SolverSpec:
    kind: str = "exact"
    order: int = 1
    variant: str = "first-order"

    def __post_init__(self):
        if self.kind not in SOLVERS:
            raise ConfigError(f"solver.kind: expected one of {SOLVERS}, got {self.kind!r}")
        if int(self.order) != self.order or self.order < 1:
            raise ConfigError(f"solver.order: need a positive integer, got {self.order!r}")
        if self.variant not in CLOSED_FORM_VARIANTS:
            raise ConfigError(f"solver.variant: expected one of {CLOSED_FORM_VARIANTS}, got {self.variant!r}")


@dataclass(frozen=True)
class HusimiSpec:
    n_theta: int = 181
    n_phi: int = 360
    renormalize: bool = True

    def __post_init__(self):
        if self.n_theta < 3 or self.n_phi < 3:
            raise ConfigError("husimi: n_theta and n_phi must be at least 3")


@dataclass(frozen=True)
class EvolveSpec:
    t_stop: float = 2.0  # us
    points: int = 21
    initial: int = 1  # 1-based level the system starts in

    def __post_init__(self):
        if self.t_stop <= 0:
            raise ConfigError("evolve.t_stop must be positive")
        if self.points < 2:
            raise ConfigError("evolve.points must be at least 2")

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_stop, int(self.points))


@dataclass(frozen=True)
class RunConfig:
    model: str = "effective"
    drive: DriveConfig = field(default_factory=DriveConfig)
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    ideal: IdealSpinModel | None = None
    sweep: SweepSpec | None = None
    beta: float | None = None
    approach: int | str = "both"
    solver: SolverSpec = field(default_factory=SolverSpec)
    husimi: HusimiSpec = field(default_factory=HusimiSpec)
    evolve: EvolveSpec = field(default_factory=EvolveSpec)
    output: str | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"model: expected one of {MODELS}, got {self.model!r}")
        if self.model in ("ideal", "expanded-ideal") and self.ideal is None:
            raise ConfigError("ideal: required for the ideal spin-1 models")
        if self.approach not in (1, 2, "both"):
            raise ConfigError(f"approach: expected 1, 2 or 'both', got {self.approach!r}")
        if self.beta is not None and not 0 <= self.beta <= 1:
            raise ConfigError(f"beta: must lie in [0, 1], got {self.beta}")

    @property
    def approaches(self) -> tuple[int, ...]:
        return (1, 2) if self.approach == "both" else (int(self.approach),)


def _build(cls, section: str, values: dict, convert=None):
    if not isinstance(values, dict):
        raise ConfigError(f"{section}: expected an object, got {type(values).__name__}")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(values) - names
    if unknown:
        raise ConfigError(f"{section}.{sorted(unknown)[0]}: unknown field")
    for f in dataclasses.fields(cls):
        required = f.default is dataclasses.MISSING and f.default_factory is dataclasses.MISSING
        if required and f.name not in values:
            raise ConfigError(f"{section}.{f.name}: required field is missing")
    kw = {k: (convert(k, v) if convert else v) for k, v in values.items()}
    try:
        return cls(**kw)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{section}: {exc}") from exc


def _number(section: str, name: str, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}.{name}: expected a number, got {value!r}")
    return float(value)


def _drive_value(name, value):
    if name in _FREQUENCY_FIELDS:
        return None if value is None else mhz(_number("drive", name, value))
    if name in _PHASE_FIELDS:
        return _number("drive", name, value)
    return value


def _constants_value(name, value):
    return mhz(_number("constants", name, value))


def _ideal_value(name, value):
    if name in _IDEAL_FREQUENCY_FIELDS:
        return mhz(_number("ideal", name, value))
    return value


def config_from_dict(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be a JSON object")
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"{sorted(unknown)[0]}: unknown field")
    kw = {}
    if "model" in doc:
        kw["model"] = doc["model"]
    drive = dict(REFERENCE_DRIVE_MHZ)
    drive.update(doc.get("drive") or {})
    constants = _build(PhysicalConstants, "constants", doc.get("constants") or {}, _constants_value)
    kw["constants"] = constants
    kw["drive"] = _build(DriveConfig, "drive", drive, _drive_value)
    if drive.get("delta_b_prime") is None:
        # excited-manifold shift follows the (possibly overridden) Zeeman ratio
        kw["drive"] = kw["drive"].replace(
            delta_b_prime=kw["drive"].delta_b * constants.excited_ratio
        )
    if doc.get("ideal") is not None:
        kw["ideal"] = _build(IdealSpinModel, "ideal", doc["ideal"], _ideal_value)
    if doc.get("sweep") is not None:
        kw["sweep"] = _build(SweepSpec, "sweep", doc["sweep"])
    for name in ("beta", "approach", "output"):
        if doc.get(name) is not None:
            kw[name] = doc[name]
    if kw.get("beta") is not None:
        kw["beta"] = _number("config", "beta", kw["beta"])
    for name, cls in (("solver", SolverSpec), ("husimi", HusimiSpec), ("evolve", EvolveSpec)):
        if doc.get(name) is not None:
            kw[name] = _build(cls, name, doc[name])
    if kw.get("model") in ("ideal", "expanded-ideal") and "ideal" in kw:
        kw["ideal"] = dataclasses.replace(kw["ideal"], expanded=kw["model"] == "expanded-ideal")
    return RunConfig(**kw)


def _parse_scalar(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(doc: dict, overrides) -> dict:
    """Apply ``a.b.c=value`` assignments; values are parsed as JSON when possible."""
    doc = copy.deepcopy(doc)
    for item in overrides or ():
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--set {item!r}: expected key=value")
        parts = key.split(".")
        node = doc
        for p in parts[:-1]:
            child = node.get(p)
            if child is None:
                child = node[p] = {}
            if not isinstance(child, dict):
                raise ConfigError(f"--set {key}: {p} is not an object")
            node = child
        node[parts[-1]] = _parse_scalar(raw)
    return doc


def load_document(path: str | Path | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: {path} is not valid JSON ({exc.msg}, line {exc.lineno})") from exc


def load_config(path: str | Path | None, overrides=()) -> RunConfig:
    return config_from_dict(apply_overrides(load_document(path), overrides))
