"""Run configuration: YAML in, :class:`RunConfig` out, and back again.

Example::

    name: fig3
    model:
      order: 8
      A: -1
      B: 12
    initial_conditions: [1, 2, 1, -1/2, 1, 1/2, -1/4, 1/2]
    backend: rational
    horizon: 64
    outputs: [csv, plot-data, svg]

A coefficient is a rational literal (``3``, ``-1/2``, ``0.25``), a list of
exactly ``order`` literals (a k-periodic sequence), a formula string in ``n``
(``3 + sin(n*pi/8)``) or a mapping ``{formula: ..., period: 16}``.  Use
``mu``/``K`` instead of ``A``/``B`` for the ecological parameterisation.
``initial_conditions: fixed-point`` seeds every strand at ``(1 - A_j)/B_j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

import yaml

from .core import Backend, ConfigError, Model, Periodic, Sampled, as_sequence
from .formula import FormulaError, parse_formula

__all__ = ["RunConfig", "SymmetrySpec", "load_config", "parse_config"]

OUTPUTS = ("csv", "plot-data", "svg")
FIXED_POINT = "fixed-point"

CoefSpec = Union[str, tuple, dict]


def _literal(value, where: str) -> str:
    """Normalise a numeric literal to an exact ``p/q`` string."""
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ConfigError(f"{where}: non-finite number {value!r}")
        return str(Fraction(repr(value)))
    if isinstance(value, str):
        try:
            return str(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"{where}: {value!r} is not a rational literal") from None
    raise ConfigError(f"{where}: expected a number, got {type(value).__name__}")


def _coefficient(value, where: str, k: int) -> CoefSpec:
    if isinstance(value, (list, tuple)):
        if len(value) != k:
            raise ConfigError(f"{where}: a periodic list needs exactly order={k} entries, got {len(value)}")
        return tuple(_literal(v, f"{where}[{i}]") for i, v in enumerate(value))
    if isinstance(value, dict):
        unknown = set(value) - {"formula", "period"}
        if unknown:
            raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
        if "formula" not in value:
            raise ConfigError(f"{where}: mapping needs a 'formula'")
        formula = _formula(value["formula"], where)
        period = value.get("period")
        if period is not None and (isinstance(period, bool) or not isinstance(period, int) or period < 1):
            raise ConfigError(f"{where}.period: expected a positive integer, got {period!r}")
        return {"formula": formula, "period": period}
    if isinstance(value, str):
        try:
            return _literal(value, where)
        except ConfigError:
            return _formula(value, where)
    return _literal(value, where)


def _formula(source, where: str) -> str:
    if not isinstance(source, str):
        raise ConfigError(f"{where}: formula must be a string")
    try:
        return parse_formula(source).source
    except FormulaError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _sequence(spec: CoefSpec):
    if isinstance(spec, tuple):
        return Periodic([Fraction(v) for v in spec])
    if isinstance(spec, dict):
        return Sampled.from_formula(spec["formula"], spec["period"])
    return as_sequence(spec)


def _dump_coefficient(spec: CoefSpec):
    if isinstance(spec, tuple):
        return list(spec)
    if isinstance(spec, dict):
        out = {"formula": spec["formula"]}
        if spec["period"] is not None:
            out["period"] = spec["period"]
        return out
    return spec


@dataclass(frozen=True)
class SymmetrySpec:
    family: str = "zeta2"
    seeds: Optional[tuple] = None
    p: int = 0
    n_points: int = 60
    z: tuple = ("-3", "-1/2", "1/3", "1", "5/2", "7")


@dataclass(frozen=True)
class RunConfig:
    order: int
    A: Optional[CoefSpec] = None
    B: Optional[CoefSpec] = None
    mu: Optional[CoefSpec] = None
    K: Optional[CoefSpec] = None
    initial_conditions: Union[str, tuple] = FIXED_POINT
    backend: Backend = Backend.RATIONAL
    horizon: int = 100
    outputs: tuple = ("csv",)
    tolerance: float = 1e-9
    name: str = "run"
    symmetry: SymmetrySpec = field(default_factory=SymmetrySpec)

    def __post_init__(self):
        object.__setattr__(self, "backend", Backend(self.backend))

    @property
    def mode(self) -> str:
        return "ecological" if self.mu is not None else "math"

    def model(self) -> Model:
        try:
            if self.mode == "ecological":
                return Model.ecological(self.order, _sequence(self.mu), _sequence(self.K), self.backend)
            return Model(self.order, _sequence(self.A), _sequence(self.B), self.backend)
        except ConfigError as exc:
            raise ConfigError(f"model: {exc}") from None
        except ValueError as exc:
            raise ConfigError(f"model: {exc}") from None

    def initial_values(self, model: Optional[Model] = None) -> list:
        model = model or self.model()
        if self.initial_conditions == FIXED_POINT:
            from .analysis import periodic_initial_conditions

            try:
                return periodic_initial_conditions(model)
            except ValueError as exc:
                raise ConfigError(f"initial_conditions: {exc}") from None
        return [model.backend.convert(Fraction(v)) for v in self.initial_conditions]

    def with_overrides(self, **changes) -> "RunConfig":
        changes = {key: value for key, value in changes.items() if value is not None}
        if "backend" in changes:
            changes["backend"] = Backend(changes["backend"])
        return replace(self, **changes)

    def to_dict(self) -> dict:
        model = {"order": self.order}
        for key in ("A", "B", "mu", "K"):
            spec = getattr(self, key)
            if spec is not None:
                model[key] = _dump_coefficient(spec)
        ic = self.initial_conditions
        sym = self.symmetry
        symmetry = {"family": sym.family, "p": sym.p, "n_points": sym.n_points, "z": list(sym.z)}
        if sym.seeds is not None:
            symmetry["seeds"] = list(sym.seeds)
        return {
            "name": self.name,
            "model": model,
            "initial_conditions": ic if isinstance(ic, str) else list(ic),
            "backend": self.backend.value,
            "horizon": self.horizon,
            "outputs": list(self.outputs),
            "tolerance": repr(self.tolerance),
            "symmetry": symmetry,
        }

    def dump(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False, allow_unicode=True)


def _positive_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"{where}: expected a positive integer, got {value!r}")
    return value


def _float(value, where: str) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: expected a number, got {value!r}") from None
    if not out > 0:
        raise ConfigError(f"{where}: must be positive")
    return out


def _symmetry(raw, k: int) -> SymmetrySpec:
    if raw is None:
        return SymmetrySpec()
    if not isinstance(raw, dict):
        raise ConfigError("symmetry: expected a mapping")
    unknown = set(raw) - {"family", "seeds", "p", "n_points", "z"}
    if unknown:
        raise ConfigError(f"symmetry: unknown keys {sorted(unknown)}")
    family = raw.get("family", "zeta2")
    if family not in ("zeta1", "zeta2", "zeta3"):
        raise ConfigError(f"symmetry.family: expected zeta1, zeta2 or zeta3, got {family!r}")
    seeds = raw.get("seeds")
    if seeds is not None:
        if not isinstance(seeds, list) or len(seeds) != k:
            raise ConfigError(f"symmetry.seeds: expected a list of {k} numbers")
        seeds = tuple(_literal(v, f"symmetry.seeds[{i}]") for i, v in enumerate(seeds))
    p = raw.get("p", 0)
    if isinstance(p, bool) or not isinstance(p, int) or not 0 <= p < k:
        raise ConfigError(f"symmetry.p: expected an integer in 0..{k - 1}, got {p!r}")
    n_points = _positive_int(raw.get("n_points", 60), "symmetry.n_points")
    z = raw.get("z", list(SymmetrySpec.z))
    if not isinstance(z, list) or not z:
        raise ConfigError("symmetry.z: expected a non-empty list of numbers")
    z = tuple(_literal(v, f"symmetry.z[{i}]") for i, v in enumerate(z))
    return SymmetrySpec(family, seeds, p, n_points, z)


def parse_config(data: dict) -> RunConfig:
    """Validate a decoded YAML mapping; errors name the offending field."""
    if not isinstance(data, dict):
        raise ConfigError("config: expected a mapping at top level")
    unknown = set(data) - {
        "name", "model", "initial_conditions", "backend", "horizon", "outputs", "tolerance", "symmetry",
    }
    if unknown:
        raise ConfigError(f"config: unknown keys {sorted(unknown)}")
    raw_model = data.get("model")
    if not isinstance(raw_model, dict):
        raise ConfigError("model: missing or not a mapping")
    unknown = set(raw_model) - {"order", "A", "B", "mu", "K"}
    if unknown:
        raise ConfigError(f"model: unknown keys {sorted(unknown)}")
    k = _positive_int(raw_model.get("order"), "model.order")
    direct = "A" in raw_model or "B" in raw_model
    ecological = "mu" in raw_model or "K" in raw_model
    if direct == ecological:
        raise ConfigError("model: give either A and B, or mu and K")
    keys = ("A", "B") if direct else ("mu", "K")
    coefs = {}
    for key in keys:
        if key not in raw_model:
            raise ConfigError(f"model.{key}: missing")
        coefs[key] = _coefficient(raw_model[key], f"model.{key}", k)

    try:
        backend = Backend(data.get("backend", "rational"))
    except ValueError:
        raise ConfigError(f"backend: expected rational, float or complex, got {data.get('backend')!r}") from None

    ic = data.get("initial_conditions", FIXED_POINT)
    if isinstance(ic, str):
        if ic != FIXED_POINT:
            raise ConfigError(f"initial_conditions: expected a list or {FIXED_POINT!r}, got {ic!r}")
    elif isinstance(ic, list):
        if len(ic) != k:
            raise ConfigError(f"initial_conditions: expected {k} values, got {len(ic)}")
        ic = tuple(_literal(v, f"initial_conditions[{i}]") for i, v in enumerate(ic))
    else:
        raise ConfigError("initial_conditions: expected a list of numbers")

    horizon = _positive_int(data.get("horizon", 100), "horizon")
    if horizon < k:
        raise ConfigError(f"horizon: must be at least order={k}")
    outputs = data.get("outputs", ["csv"])
    if isinstance(outputs, str):
        outputs = [outputs]
    if not isinstance(outputs, list) or any(o not in OUTPUTS for o in outputs):
        raise ConfigError(f"outputs: expected a list drawn from {list(OUTPUTS)}")
    name = data.get("name", "run")
    if not isinstance(name, str) or not name or "/" in name:
        raise ConfigError("name: expected a plain file stem")

    config = RunConfig(
        order=k,
        initial_conditions=ic,
        backend=backend,
        horizon=horizon,
        outputs=tuple(outputs),
        tolerance=_float(data.get("tolerance", 1e-9), "tolerance"),
        name=name,
        symmetry=_symmetry(data.get("symmetry"), k),
        **coefs,
    )
    config.model()
    return config


def load_config(path: Union[str, Path]) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}" if mark is not None else "parse error"
        raise ConfigError(f"{path}: {where}: {getattr(exc, 'problem', exc)}") from None
    return parse_config(data)
