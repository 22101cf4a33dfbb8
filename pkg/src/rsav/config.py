"""
Flat ``key = value`` run configuration.

Lines are ``key = value``; ``#`` starts a comment. Unknown keys, keys the
selected model does not use, duplicates and malformed values are errors
that name the key and line. Omitted model parameters take catalog
defaults. Lengths accept ``pi`` multiples (``2*pi``, ``2pi``, ``pi``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import CatalogError, ConfigError
from .models import (
    CATALOG,
    DIBLOCK,
    PARAMETERS,
    SPLIT_DOUBLE_WELL,
    VARIANTS,
    ModelSpec,
    make_model,
)

SCHEMES = ("sav-cn", "sav-bdf2", "rsav-cn", "rsav-bdf2")
ICS = ("cosine", "star", "random", "zero")
SNAPSHOT_FORMATS = ("text", "binary")

# config key -> ModelSpec attribute
MODEL_KEYS = {
    "epsilon": "epsilon",
    "lambda": "lam",
    "D": "D",
    "a0": "a0",
    "b0": "b0",
    "sigma": "sigma",
}

INT_KEYS = {"Nx", "Ny", "seed", "snapshot_every", "series_every"}
FLOAT_KEYS = {"Lx", "Ly", "dt", "T", "eta", "amp", "phi0_hat", "gamma0", "C0"} | set(
    MODEL_KEYS
)
STR_KEYS = {"model", "scheme", "ic", "out_dir", "snapshot_format"}
BOOL_KEYS = {"dealias", "check_law"}
INDEXED = re.compile(r"^(gamma|C|w)_([1-9][0-9]*)$")
REQUIRED = ("model", "dt", "T")

_PI = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi$")


@dataclass
class RunConfig:
    model: str
    dt: float
    T: float
    scheme: str = "rsav-cn"
    Nx: int = 128
    Ny: int = 128
    Lx: float = 1.0
    Ly: float = 1.0
    eta: float = 0.95
    ic: str = "cosine"
    amp: Optional[float] = None
    phi0_hat: float = 0.0
    seed: Optional[int] = None
    snapshot_every: int = 0
    series_every: int = 1
    out_dir: str = "out"
    snapshot_format: str = "text"
    dealias: bool = False
    check_law: bool = True
    model_params: dict = field(default_factory=dict)

    @property
    def family(self) -> str:
        return self.scheme.split("-")[1]

    @property
    def relaxed(self) -> bool:
        return self.scheme.startswith("rsav")

    @property
    def nsteps(self) -> int:
        return int(round(self.T / self.dt))

    def model_spec(self) -> ModelSpec:
        params = dict(self.model_params)
        if self.model == DIBLOCK:
            params.setdefault("phi0_hat", self.phi0_hat)
        return make_model(self.model, **params)

    def validate(self) -> "RunConfig":
        if self.model not in CATALOG:
            raise ConfigError(
                f"unknown model {self.model!r}; choose from {', '.join(VARIANTS)}",
                key="model",
            )
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {', '.join(SCHEMES)}", key="scheme")
        if self.ic not in ICS:
            raise ConfigError(f"ic must be one of {', '.join(ICS)}", key="ic")
        if self.snapshot_format not in SNAPSHOT_FORMATS:
            raise ConfigError("snapshot_format must be text or binary", key="snapshot_format")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigError(f"dt must be positive, got {self.dt}", key="dt")
        if not (math.isfinite(self.T) and self.T >= self.dt):
            raise ConfigError(f"T must be >= dt, got {self.T}", key="T")
        if abs(self.nsteps * self.dt - self.T) > 1e-9 * self.T:
            raise ConfigError("T must be an integer multiple of dt", key="T")
        if not 0.0 <= self.eta <= 1.0:
            raise ConfigError(f"eta must lie in [0, 1], got {self.eta}", key="eta")
        for key in ("Nx", "Ny"):
            n = getattr(self, key)
            if n < 4 or n % 2:
                raise ConfigError(f"{key} must be an even integer >= 4", key=key)
        for key in ("Lx", "Ly"):
            if not getattr(self, key) > 0:
                raise ConfigError(f"{key} must be positive", key=key)
        if self.seed is not None and not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer", key="seed")
        if self.ic == "random" and self.seed is None:
            raise ConfigError("ic = random requires a seed", key="seed")
        for key in ("snapshot_every", "series_every"):
            if getattr(self, key) < 0:
                raise ConfigError("must be non-negative", key=key)
        if self.series_every == 0:
            raise ConfigError("must be at least 1", key="series_every")
        if self.amp is not None and self.amp < 0:
            raise ConfigError("must be non-negative", key="amp")
        try:
            self.model_spec()
        except (ValueError, CatalogError) as exc:
            raise ConfigError(str(exc), key="model") from exc
        return self


def _parse_float(key: str, raw: str, line: int) -> float:
    m = _PI.match(raw.replace(" ", ""))
    if m:
        coef = float(m.group(1)) if m.group(1) else 1.0
        return coef * math.pi
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"expected a real number, got {raw!r}", key=key, line=line)


def _parse_int(key: str, raw: str, line: int) -> int:
    try:
        return int(raw, 0)
    except ValueError:
        raise ConfigError(f"expected an integer, got {raw!r}", key=key, line=line)


def _parse_bool(key: str, raw: str, line: int) -> bool:
    low = raw.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {raw!r}", key=key, line=line)


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text."""
    values: dict = {}
    lines: dict = {}
    indexed: dict[str, dict[int, float]] = {"gamma": {}, "C": {}, "w": {}}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", line=lineno)
        key, raw = (part.strip() for part in line.split("=", 1))
        if not key or not raw:
            raise ConfigError("empty key or value", key=key or None, line=lineno)
        if key in lines:
            raise ConfigError(f"duplicate key (first on line {lines[key]})", key=key, line=lineno)
        lines[key] = lineno
        m = INDEXED.match(key)
        if m:
            indexed[m.group(1)][int(m.group(2))] = _parse_float(key, raw, lineno)
        elif key in INT_KEYS:
            values[key] = _parse_int(key, raw, lineno)
        elif key in FLOAT_KEYS:
            values[key] = _parse_float(key, raw, lineno)
        elif key in BOOL_KEYS:
            values[key] = _parse_bool(key, raw, lineno)
        elif key in STR_KEYS:
            values[key] = raw
        else:
            raise ConfigError("unknown key", key=key, line=lineno)

    for key in REQUIRED:
        if key not in values:
            raise ConfigError("missing required key", key=key)

    model = values["model"]
    if model not in CATALOG:
        raise ConfigError(
            f"unknown model {model!r}; choose from {', '.join(VARIANTS)}",
            key="model",
            line=lines["model"],
        )

    allowed = set(PARAMETERS[model])
    params: dict = {}
    for key, attr in MODEL_KEYS.items():
        if key in values:
            if attr not in allowed:
                raise ConfigError(f"not a parameter of model {model}", key=key, line=lines[key])
            params[attr] = values.pop(key)

    if model == SPLIT_DOUBLE_WELL:
        for key in ("gamma0", "C0"):
            if key in values:
                raise ConfigError(
                    "split-double-well takes gamma_i / C_i / w_i", key=key, line=lines[key]
                )
        k = len(CATALOG[model]["weights"])
        given = set(indexed["gamma"]) | set(indexed["C"]) | set(indexed["w"])
        if given:
            k = max(given)
        for name, attr in (("gamma", "gammas"), ("C", "Cs"), ("w", "weights")):
            entries = indexed[name]
            if not entries:
                if k != len(CATALOG[model][attr]):
                    raise ConfigError(f"{name}_1..{name}_{k} are required", key=f"{name}_1")
                continue
            missing = [i for i in range(1, k + 1) if i not in entries]
            if missing:
                raise ConfigError("missing entry", key=f"{name}_{missing[0]}")
            params[attr] = tuple(entries[i] for i in range(1, k + 1))
    else:
        for name, entries in indexed.items():
            if entries:
                key = f"{name}_{min(entries)}"
                raise ConfigError(
                    f"indexed parameters are only for {SPLIT_DOUBLE_WELL}",
                    key=key,
                    line=lines[key],
                )
        if "gamma0" in values:
            params["gammas"] = (values.pop("gamma0"),)
        if "C0" in values:
            params["Cs"] = (values.pop("C0"),)

    values.pop("gamma0", None)
    values.pop("C0", None)
    cfg = RunConfig(model_params=params, **values)
    try:
        return cfg.validate()
    except ConfigError as exc:
        if exc.line is None and exc.key in lines:
            raise ConfigError(str(exc).split(": ", 1)[-1], key=exc.key, line=lines[exc.key])
        raise


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
