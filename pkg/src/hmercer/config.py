"""Scenario files (TOML, one scenario per file).

Example::

    weights = [1, 1, 1]
    points = [1, 2, 3]
    interval = [1, 3]        # optional in scalar mode
    sense = "convex"         # or "concave"
    grid_n = 64              # optional

    [f]
    kind = "expression"      # builtin | expression | norm
    spec = "x^2"             # norm: spec = { p = 2, d = 2 }

    [h]
    family = "identity"      # identity | power | reciprocal | constant | expression
    # param = 0.5            # exponent, constant, or expression text in x

    [tolerance]              # optional
    abs = 1e-9
    rel = 1e-9

    [search]                 # optional, read by the search command
    target = "mercer_h"
    n = 2
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError, DomainError, HMercerError
from .hclass import DEFAULT_GRID_N, HFamily, Tolerance
from .objective import ObjectiveSpec
from .sequences import SampleSequence, WeightVector


@dataclass(frozen=True)
class Scenario:
    f: ObjectiveSpec
    h: HFamily
    weights: WeightVector | None
    points: SampleSequence | None
    interval: tuple[float, float] | None
    sense: str = "convex"
    tol: Tolerance = Tolerance()
    grid_n: int = DEFAULT_GRID_N
    search: dict = field(default_factory=dict, compare=False)

    def echo(self) -> dict:
        out = {"f": self.f.describe(), "h": self.h.describe(), "sense": self.sense}
        if self.weights is not None:
            out["weights"] = list(self.weights.w)
        if self.points is not None:
            out["points"] = [list(p) if isinstance(p, tuple) else p for p in self.points.x]
        if self.interval is not None:
            out["interval"] = list(self.interval)
        out["tolerance"] = {"abs": self.tol.abs, "rel": self.tol.rel}
        out["grid_n"] = self.grid_n
        return out


def _number(v, name: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"expected a number, got {v!r}", name)
    return float(v)


def _no_extra(raw: dict, allowed: set, prefix: str) -> None:
    extra = sorted(set(raw) - allowed)
    if extra:
        raise ConfigError(f"unknown field(s) {', '.join(extra)}", f"{prefix}.{extra[0]}")


def parse_objective(raw) -> ObjectiveSpec:
    if isinstance(raw, str):
        return ObjectiveSpec.expression(raw)
    if not isinstance(raw, dict):
        raise ConfigError("expected a table with 'kind' and 'spec'", "f")
    _no_extra(raw, {"kind", "spec", "p", "d"}, "f")
    kind = raw.get("kind", "expression")
    try:
        if kind == "builtin":
            return ObjectiveSpec.builtin(str(raw.get("spec", "")))
        if kind == "expression":
            if "spec" not in raw:
                raise ConfigError("missing expression text", "f.spec")
            return ObjectiveSpec.expression(str(raw["spec"]))
        if kind == "norm":
            spec = raw.get("spec", {})
            if isinstance(spec, list):
                spec = dict(zip(("p", "d"), spec))
            p = spec.get("p", raw.get("p", 2.0))
            p = math.inf if p in ("inf", "Infinity") else _number(p, "f.p")
            d = spec.get("d", raw.get("d", 1))
            if isinstance(d, bool) or not isinstance(d, int):
                raise ConfigError(f"expected an integer, got {d!r}", "f.d")
            return ObjectiveSpec.norm(p, d)
    except ConfigError:
        raise
    except HMercerError as exc:
        raise ConfigError(str(exc), "f.spec") from exc
    raise ConfigError(f"unknown kind {kind!r}; expected builtin, expression or norm", "f.kind")


def parse_h(raw) -> HFamily:
    if isinstance(raw, str):
        raw = {"family": raw}
    if not isinstance(raw, dict):
        raise ConfigError("expected a table with 'family'", "h")
    _no_extra(raw, {"family", "param"}, "h")
    fam = raw.get("family", "identity")
    param = raw.get("param")
    if fam == "identity":
        return HFamily.identity()
    if fam == "reciprocal":
        return HFamily.reciprocal()
    if fam == "power":
        return HFamily.power(_number(param, "h.param"))
    if fam == "constant":
        return HFamily.constant(_number(1.0 if param is None else param, "h.param"))
    if fam == "expression":
        if not isinstance(param, str):
            raise ConfigError("expression family needs param = \"<expression in x>\"", "h.param")
        try:
            return HFamily.custom(param)
        except ConfigError:
            raise
        except HMercerError as exc:
            raise ConfigError(str(exc), "h.param") from exc
    raise ConfigError(f"unknown family {fam!r}", "h.family")


def parse_interval(raw) -> tuple[float, float] | None:
    if raw is None:
        return None
    if not isinstance(raw, list) or len(raw) != 2:
        raise ConfigError("expected [a, b]", "interval")
    a, b = _number(raw[0], "interval"), _number(raw[1], "interval")
    if not a < b:
        raise ConfigError(f"need a < b, got [{a}, {b}]", "interval")
    return a, b


def scenario_from_dict(raw: dict) -> Scenario:
    known = {"f", "h", "weights", "points", "interval", "sense", "tolerance", "grid_n", "search"}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"unknown field(s) {', '.join(unknown)}", unknown[0])
    if "f" not in raw:
        raise ConfigError("missing", "f")
    f = parse_objective(raw["f"])
    h = parse_h(raw.get("h", "identity"))
    sense = raw.get("sense", "convex")
    if sense not in ("convex", "concave"):
        raise ConfigError(f"expected convex or concave, got {sense!r}", "sense")
    interval = parse_interval(raw.get("interval"))

    weights = None
    if "weights" in raw:
        ws = raw["weights"]
        if not isinstance(ws, list):
            raise ConfigError("expected a list of numbers", "weights")
        try:
            weights = WeightVector(tuple(_number(v, "weights") for v in ws))
        except DomainError as exc:
            raise ConfigError(str(exc), "weights") from exc

    points = None
    if "points" in raw:
        ps = raw["points"]
        if not isinstance(ps, list):
            raise ConfigError("expected a list", "points")
        try:
            if ps and isinstance(ps[0], list):
                pts = tuple(tuple(_number(c, "points") for c in p) for p in ps)
                points = SampleSequence(pts)
            else:
                points = SampleSequence(tuple(_number(v, "points") for v in ps), interval)
        except DomainError as exc:
            raise ConfigError(str(exc), "points") from exc
        if points.is_vector and not (f.is_norm and f.d == points.dim):
            raise ConfigError(f"vector points of dimension {points.dim} need f = norm with d = {points.dim}", "f")
    if weights is not None and points is not None and len(weights) != len(points):
        raise ConfigError(f"{len(weights)} weights but {len(points)} points", "weights")

    tol_raw = raw.get("tolerance", {})
    if not isinstance(tol_raw, dict):
        raise ConfigError("expected a table", "tolerance")
    tol = Tolerance(
        _number(tol_raw.get("abs", 1e-9), "tolerance.abs"),
        _number(tol_raw.get("rel", 1e-9), "tolerance.rel"),
    )
    grid_n = raw.get("grid_n", DEFAULT_GRID_N)
    if isinstance(grid_n, bool) or not isinstance(grid_n, int) or grid_n < 2:
        raise ConfigError(f"expected an integer >= 2, got {grid_n!r}", "grid_n")
    search = raw.get("search", {})
    if not isinstance(search, dict):
        raise ConfigError("expected a table", "search")
    return Scenario(f, h, weights, points, interval, sense, tol, grid_n, search)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read file: {exc.strerror}", "config") from exc
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"not valid TOML: {exc}", "config") from exc
    return scenario_from_dict(raw)
