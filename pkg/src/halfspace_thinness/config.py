"""JSON run configuration: flat dotted keys, validation and object builders.

A document is a nested JSON object; it is flattened to dotted keys
(``{"process": {"alpha": 1}}`` becomes ``process.alpha``).  Every key must
appear in :data:`SCHEMA`; anything else is rejected with a message naming
the key.
"""

from __future__ import annotations

import json
import os

from . import bernstein, kernels, thinness
from .errors import ConfigError, DomainError

# key -> (accepted python types, default); default None means "unset"
SCHEMA = {
    "dimension": ((int,), 3),
    "threads": ((int, type(None)), None),
    "process.kind": ((str,), None),
    "process.alpha": ((int, float), None),
    "process.beta": ((int, float), None),
    "process.m": ((int, float), None),
    "process.a": ((int, float), None),
    "process.b": ((int, float), None),
    "set.kind": ((str,), None),
    "set.profile.kind": ((str,), None),
    "set.profile.c": ((int, float), 1.0),
    "set.profile.beta": ((int, float), 1.0),
    "set.profile.p": ((int, float), 0.0),
    "set.profile.r_grid": ((list,), None),
    "set.profile.values": ((list,), None),
    "set.profile.lipschitz": ((int, float), None),
    "set.lipschitz_a": ((int, float), None),
    "set.boxes": ((list,), None),
    "grid.r_min": ((int, float), 1e-3),
    "grid.r_max": ((int, float), 1.0),
    "grid.per_decade": ((int,), 10),
    "grid.spread_bound": ((int, float), kernels.DEFAULT_SPREAD_BOUND),
    "quad.rel_tol": ((int, float), kernels.DEFAULT_QUAD.rel_tol),
    "thinness.max_shells": ((int,), thinness.MAX_SHELLS),
    "mc.seed": ((int,), 42),
    "mc.n_paths": ((int,), 10000),
    "mc.dt": ((int, float), 0.04),
    "mc.max_time": ((int, float), 50.0),
    "mc.heights": ((list,), [0.4, 0.2, 0.1]),
    "mc.refine_near_boundary": ((bool,), True),
    "mc.max_steps": ((int, type(None)), None),
}

_PROCESS_PARAMS = {
    "Stable": ("alpha",),
    "RelativisticStable": ("alpha", "m"),
    "StableMix": ("alpha", "beta"),
    "BrownianPlusStable": ("a", "b", "beta"),
}


def _flatten(doc, prefix=""):
    out = {}
    for k, v in doc.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


class Config:
    """Validated flat view of a configuration document."""

    def __init__(self, values):
        self._values = {}
        for key, val in values.items():
            if key not in SCHEMA:
                raise ConfigError(f"unknown configuration key {key!r}")
            types, _ = SCHEMA[key]
            # JSON has no int/float split for whole numbers written as 1.0
            if float in types and isinstance(val, int) and not isinstance(val, bool):
                val = float(val)
            if isinstance(val, bool) and bool not in types:
                raise ConfigError(f"{key}: expected {types[0].__name__}, got bool")
            if not isinstance(val, types):
                raise ConfigError(f"{key}: expected {types[0].__name__}, got {type(val).__name__}")
            self._values[key] = val

    @classmethod
    def load(cls, path, overrides=(), env=None):
        """Read ``path``, apply ``key=value`` overrides, then ``HST_SEED``."""
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        flat = _flatten(doc)
        for item in overrides:
            if "=" not in item:
                raise ConfigError(f"override {item!r} is not of the form key=value")
            key, text = item.split("=", 1)
            flat[key.strip()] = _parse_value(text)
        env = os.environ if env is None else env
        if env.get("HST_SEED"):
            try:
                flat["mc.seed"] = int(env["HST_SEED"])
            except ValueError:
                raise ConfigError("HST_SEED must be an integer") from None
        return cls(flat)

    def get(self, key):
        if key in self._values:
            return self._values[key]
        return SCHEMA[key][1]

    def require(self, key):
        val = self.get(key)
        if val is None:
            raise ConfigError(f"missing required key {key!r}")
        return val

    def __contains__(self, key):
        return key in self._values

    # -- builders ------------------------------------------------------------
    def process(self):
        kind = self.require("process.kind")
        if kind not in _PROCESS_PARAMS:
            raise ConfigError(f"process.kind: unknown kind {kind!r}")
        names = _PROCESS_PARAMS[kind]
        for key in self._values:
            if key.startswith("process.") and key != "process.kind" and key[8:] not in names:
                raise ConfigError(f"{key} is not a parameter of {kind}")
        params = tuple((n, self.require(f"process.{n}")) for n in names)
        try:
            return bernstein.ExponentSpec(kind, params, self.get("dimension"))
        except DomainError as exc:
            msg = str(exc)
            if msg.split(" ", 1)[0] in names:
                raise ConfigError(f"process.{msg}") from None
            raise ConfigError(f"process: {msg}") from None

    def profile(self):
        kind = self.require("set.profile.kind")
        try:
            if kind == "PowerLaw":
                return thinness.ProfileSpec.power_law(self.get("set.profile.c"), self.get("set.profile.beta"))
            if kind == "PowerLog":
                return thinness.ProfileSpec.power_log(self.get("set.profile.c"), self.get("set.profile.beta"),
                                                      self.get("set.profile.p"))
            if kind == "TabulatedRadial":
                return thinness.ProfileSpec.tabulated(self.require("set.profile.r_grid"),
                                                      self.require("set.profile.values"),
                                                      self.require("set.profile.lipschitz"))
        except DomainError as exc:
            raise ConfigError(f"set.profile: {exc}") from None
        raise ConfigError(f"set.profile.kind: unknown kind {kind!r}")

    def set_spec(self):
        kind = self.require("set.kind")
        d = self.get("dimension")
        try:
            if kind == "LipschitzGraph":
                return thinness.SetSpec.lipschitz_graph(self.profile(), self.require("set.lipschitz_a"), d)
            if kind == "Thorn":
                if d < 3:
                    raise ConfigError("thorn criteria require d>=3")
                return thinness.SetSpec.thorn(self.profile(), d)
            if kind == "BoxUnion":
                boxes = self.get("set.boxes") or []
                return thinness.SetSpec.box_union([tuple(b) for b in boxes], d)
        except DomainError as exc:
            raise ConfigError(f"set: {exc}") from None
        raise ConfigError(f"set.kind: unknown kind {kind!r}")

    def r_grid(self):
        lo, hi = self.get("grid.r_min"), self.get("grid.r_max")
        if not 0 < lo < hi:
            raise ConfigError("grid.r_min and grid.r_max must satisfy 0 < r_min < r_max")
        if self.get("grid.per_decade") < 1:
            raise ConfigError("grid.per_decade must be >= 1")
        return kernels.log_grid(lo, hi, self.get("grid.per_decade"))

    def quad(self):
        try:
            return kernels.QuadratureConfig(rel_tol=self.get("quad.rel_tol"))
        except DomainError as exc:
            raise ConfigError(f"quad.rel_tol: {exc}") from None
