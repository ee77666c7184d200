"""Run and sweep configurations: JSON schema validation, defaults, hashing."""
from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import jsonschema
from referencing import Registry, Resource

from .errors import ConfigError, GhzChainError
from .model import ChainSpec, DriveKind, DriveProfile, build_chain, parse_bitstring

__all__ = [
    "RunConfig",
    "SweepConfig",
    "load_schema",
    "canonical_json",
    "config_hash",
    "SWEEP_AXES",
]

SWEEP_AXES = ("lambda", "n", "tau_window")

_RUN_DEFAULTS = {"method": "pair", "tol": 1e-10, "n_samples": 2001, "seed": 0}
_CHAIN_DEFAULTS = {"gamma_y": 0.0, "gamma_z": 0.0}
_DRIVE_DEFAULTS = {"alpha": 1.0, "omega0": 0.0, "tangent_scale": 1.0}
# keys that never change results and are left out of the content hash
_UNHASHED = ("outputs",)


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("nwise_ghz.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def _registry() -> Registry:
    pairs = []
    for name in ("run_config", "sweep_config"):
        schema = load_schema(name)
        pairs.append((f"{name}.schema.json", Resource.from_contents(schema)))
        pairs.append((schema["$id"], Resource.from_contents(schema)))
    return Registry().with_resources(pairs)


def _validate(doc: dict, name: str) -> None:
    validator = jsonschema.Draft202012Validator(load_schema(name), registry=_registry())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = ".".join(str(p) for p in err.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {err.message}", field=where)


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite float {x!r} cannot be written as JSON")
    text = f"{x:.17g}"
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def canonical_json(obj, indent: int | None = 2, _level: int = 0) -> str:
    """Deterministic JSON: sorted keys, floats with 17 significant digits."""
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {canonical_json(v, indent, _level + 1)}"
            for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))
        ]
        return "{" + ",".join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{canonical_json(v, indent, _level + 1)}" for v in obj]
        return "[" + ",".join(items) + end + "]"
    if hasattr(obj, "item"):  # numpy scalar
        return canonical_json(obj.item(), indent, _level)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def config_hash(doc: dict) -> str:
    hashed = {k: v for k, v in doc.items() if k not in _UNHASHED}
    return hashlib.sha256(canonical_json(hashed, indent=None).encode()).hexdigest()


def _normalise_numbers(doc: dict, keys) -> None:
    for key in keys:
        if key in doc and not isinstance(doc[key], bool):
            doc[key] = float(doc[key])


@dataclass(frozen=True)
class RunConfig:
    """A fully resolved single-run configuration (see run_config.schema.json)."""

    doc: dict

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigError("run configuration must be a JSON object")
        _validate(raw, "run_config")
        doc = copy.deepcopy(raw)
        for key, value in _RUN_DEFAULTS.items():
            doc.setdefault(key, value)
        doc["chain"] = {**_CHAIN_DEFAULTS, **doc["chain"]}
        doc["drive"] = {**_DRIVE_DEFAULTS, **doc["drive"]}
        _normalise_numbers(doc["chain"], ("gamma_x", "gamma_y", "gamma_z"))
        _normalise_numbers(doc["drive"], ("alpha", "tau_i", "tau_f", "omega0", "tangent_scale"))
        doc["tol"] = float(doc["tol"])
        doc["initial"] = doc["initial"].replace("−", "-")
        cfg = cls(doc)
        cfg._check()
        return cfg

    def _check(self) -> None:
        n = self.doc["chain"]["n_qubits"]
        initial = self.doc["initial"]
        if len(initial) != n:
            raise ConfigError(
                f"initial: bitstring {initial!r} has length {len(initial)}, expected n_qubits={n}",
                field="initial",
            )
        try:
            self.model()
        except ConfigError:
            raise
        except GhzChainError as exc:
            raise ConfigError(f"drive/chain: {exc}", field="drive") from exc

    def with_updates(self, **changes) -> "RunConfig":
        """Copy with dotted-path overrides, e.g. ``{"chain.gamma_x": 1.0}``."""
        doc = copy.deepcopy(self.doc)
        for path, value in changes.items():
            target = doc
            *parents, leaf = path.split(".")
            for p in parents:
                target = target.setdefault(p, {})
            target[leaf] = value
        return RunConfig.from_dict(doc)

    @property
    def hash(self) -> str:
        return config_hash(self.doc)

    @property
    def n_qubits(self) -> int:
        return self.doc["chain"]["n_qubits"]

    @property
    def initial_index(self) -> int:
        return parse_bitstring(self.doc["initial"])

    def chain_spec(self) -> ChainSpec:
        c = self.doc["chain"]
        return ChainSpec(c["n_qubits"], c["gamma_x"], c["gamma_y"], c["gamma_z"])

    def drive_profile(self) -> DriveProfile:
        d = self.doc["drive"]
        return DriveProfile(
            DriveKind(d["kind"]),
            d["tau_i"],
            d["tau_f"],
            alpha=d["alpha"],
            omega0=d["omega0"],
            tangent_scale=d["tangent_scale"],
        )

    def model(self):
        return build_chain(self.chain_spec(), self.drive_profile())


@dataclass(frozen=True)
class SweepConfig:
    axis: str
    values: tuple
    base: RunConfig
    cross_check: bool = False

    @classmethod
    def from_dict(cls, raw: dict) -> "SweepConfig":
        if not isinstance(raw, dict):
            raise ConfigError("sweep configuration must be a JSON object")
        _validate(raw, "sweep_config")
        values = tuple(raw["values"])
        diffs = [b - a for a, b in zip(values, values[1:])]
        if not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
            raise ConfigError("values: must be strictly monotone", field="values")
        if raw["axis"] == "n" and any(int(v) != v for v in values):
            raise ConfigError("values: qubit counts must be integers", field="values")
        base = RunConfig.from_dict(raw["base"])
        return cls(raw["axis"], values, base, bool(raw.get("cross_check", False)))

    @property
    def doc(self) -> dict:
        return {
            "axis": self.axis,
            "values": list(self.values),
            "cross_check": self.cross_check,
            "base": self.base.doc,
        }

    @property
    def hash(self) -> str:
        doc = self.doc
        doc["base"] = {k: v for k, v in doc["base"].items() if k not in _UNHASHED}
        return config_hash(doc)

    def point(self, value) -> RunConfig:
        """The run configuration of one sweep point."""
        base = self.base
        if self.axis == "lambda":
            alpha = base.doc["drive"]["alpha"]
            return base.with_updates(**{"chain.gamma_x": math.sqrt(value * alpha)})
        if self.axis == "n":
            n = int(value)
            initial = base.doc["initial"]
            if len(set(initial)) != 1:
                raise ConfigError(
                    "initial: an N sweep needs a uniform initial bitstring such as '----'",
                    field="initial",
                )
            return base.with_updates(**{"chain.n_qubits": n, "initial": initial[0] * n})
        kind = DriveKind(base.doc["drive"]["kind"])
        updates = {"drive.tau_f": float(value)}
        if kind is DriveKind.LINEAR_SYMMETRIC:
            updates["drive.tau_i"] = -float(value)
        return base.with_updates(**updates)
