"""Scenario files: JSON descriptions of a measure, a list of functions,
radii, and the checks to run on them.

Loading is strict: unknown fields, malformed radii, or references to checks
that do not exist are rejected with messages naming the offending field.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field, fields as dataclass_fields
from pathlib import Path

from .dsh import DshFunction, RationalFunction, dsh_from_json, from_rational, rational_from_json
from .measures import Measure, measure_from_json
from .quadrature import QuadSpec

CHECK_KINDS = ("statement_I", "statement_II", "statement_III", "statement_IV",
               "statement_V", "lemma3", "poisson_jensen", "corollary")

_CHECK_OPTIONS = {
    "statement_I": set(),
    "statement_II": {"tight", "R_star"},
    "statement_III": {"t_cap"},
    "statement_IV": set(),
    "statement_V": set(),
    "lemma3": {"R_star"},
    "poisson_jensen": {"points"},
    "corollary": set(),
}

_NAME_RE = re.compile(r"^[A-Za-z0-9_.-]+$")


class ScenarioError(ValueError):
    """Scenario file failed validation; the message names the field."""


@dataclass(frozen=True)
class FunctionEntry:
    """One scenario function: always usable as a charge-model function,
    optionally carrying the rational map it came from."""

    label: str
    dsh: DshFunction
    rational: RationalFunction | None = None


@dataclass(frozen=True)
class CheckRequest:
    kind: str
    options: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Scenario:
    name: str
    dimension: int
    measure: Measure
    functions: tuple[FunctionEntry, ...]
    r: float
    R: float
    r0: float
    checks: tuple[CheckRequest, ...]
    quad: QuadSpec
    grid: int
    expect_fail: frozenset[str] = frozenset()


def _expect_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{path}: expected a number")
    v = float(value)
    if not math.isfinite(v):
        raise ScenarioError(f"{path}: must be finite")
    return v


def _parse_radii(data, path: str) -> tuple[float, float, float]:
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: expected an object with 'r' and 'R'")
    unknown = set(data) - {"r", "R", "r0"}
    if unknown:
        raise ScenarioError(f"{path}: unknown fields {sorted(unknown)}")
    for key in ("r", "R"):
        if key not in data:
            raise ScenarioError(f"{path}.{key}: missing")
    r = _expect_number(data["r"], f"{path}.r")
    R = _expect_number(data["R"], f"{path}.R")
    r0 = _expect_number(data["r0"], f"{path}.r0") if "r0" in data else r
    if not 0.0 < r < R:
        raise ScenarioError(f"{path}: need 0 < r < R, got r={r}, R={R}")
    if r0 <= 0.0:
        raise ScenarioError(f"{path}.r0: must be positive")
    return r, R, r0


def _parse_quad(data, path: str) -> QuadSpec:
    if data is None:
        return QuadSpec()
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: expected an object of QuadSpec overrides")
    allowed = {f.name for f in dataclass_fields(QuadSpec)} - {"singular_points"}
    unknown = set(data) - allowed
    if unknown:
        raise ScenarioError(f"{path}: unknown fields {sorted(unknown)}")
    kwargs = {}
    for key, value in data.items():
        if key in ("max_subdivisions", "circle_nodes", "polar_nodes", "azimuth_nodes"):
            if isinstance(value, bool) or not isinstance(value, int):
                raise ScenarioError(f"{path}.{key}: expected an integer")
            kwargs[key] = value
        else:
            kwargs[key] = _expect_number(value, f"{path}.{key}")
    try:
        return QuadSpec(**kwargs)
    except ValueError as exc:
        raise ScenarioError(f"{path}: {exc}") from None


def _parse_functions(data, dimension: int, path: str) -> tuple[FunctionEntry, ...]:
    if data is None:
        return ()
    if not isinstance(data, list):
        raise ScenarioError(f"{path}: expected a list")
    entries = []
    for i, raw in enumerate(data):
        p = f"{path}[{i}]"
        if not isinstance(raw, dict):
            raise ScenarioError(f"{p}: expected an object")
        body = dict(raw)
        label = body.pop("label", f"f{i}")
        if not isinstance(label, str) or not _NAME_RE.match(label):
            raise ScenarioError(f"{p}.label: expected a short identifier")
        try:
            if "rational" in body:
                if set(body) - {"rational"}:
                    raise ScenarioError(
                        f"{p}: 'rational' cannot be combined with charge fields")
                if dimension != 2:
                    raise ScenarioError(f"{p}: rational functions require dimension 2")
                rat = rational_from_json(body["rational"], path=f"{p}.rational")
                entries.append(FunctionEntry(label, from_rational(rat), rat))
            else:
                u = dsh_from_json(body, path=p)
                if u.dimension != dimension:
                    raise ScenarioError(
                        f"{p}.dimension: function dimension {u.dimension} "
                        f"differs from scenario dimension {dimension}")
                entries.append(FunctionEntry(label, u))
        except ScenarioError:
            raise
        except ValueError as exc:
            raise ScenarioError(str(exc)) from None
    labels = [e.label for e in entries]
    if len(set(labels)) != len(labels):
        raise ScenarioError(f"{path}: duplicate function labels")
    return tuple(entries)


def _parse_checks(data, functions: tuple[FunctionEntry, ...], dimension: int,
                  r: float, R: float, path: str) -> tuple[CheckRequest, ...]:
    if not isinstance(data, list) or not data:
        raise ScenarioError(f"{path}: expected a nonempty list of checks")
    out = []
    for i, raw in enumerate(data):
        p = f"{path}[{i}]"
        if isinstance(raw, str):
            kind, options = raw, {}
        elif isinstance(raw, dict):
            body = dict(raw)
            kind = body.pop("check", None)
            if not isinstance(kind, str):
                raise ScenarioError(f"{p}.check: missing or not a string")
            options = body
        else:
            raise ScenarioError(f"{p}: expected a check name or an object")
        if kind not in CHECK_KINDS:
            raise ScenarioError(f"{p}: unknown check {kind!r}; "
                                f"known: {', '.join(CHECK_KINDS)}")
        extra = set(options) - _CHECK_OPTIONS[kind]
        if extra:
            raise ScenarioError(f"{p}: unknown options {sorted(extra)} for {kind}")
        if kind in ("statement_II", "poisson_jensen") and not functions:
            raise ScenarioError(f"{p}: {kind} requires at least one function")
        if kind == "corollary":
            if dimension != 2:
                raise ScenarioError(f"{p}: corollary requires dimension 2")
            if not any(e.rational is not None for e in functions):
                raise ScenarioError(f"{p}: corollary requires a rational function")
        if "R_star" in options:
            r_star = _expect_number(options["R_star"], f"{p}.R_star")
            if not r < r_star < R:
                raise ScenarioError(f"{p}.R_star: must lie strictly between r and R")
            options["R_star"] = r_star
        if "t_cap" in options:
            t_cap = _expect_number(options["t_cap"], f"{p}.t_cap")
            if t_cap <= 0.0:
                raise ScenarioError(f"{p}.t_cap: must be positive")
            options["t_cap"] = t_cap
        if "tight" in options and not isinstance(options["tight"], bool):
            raise ScenarioError(f"{p}.tight: expected true or false")
        if "points" in options:
            pts = options["points"]
            if not isinstance(pts, list) or not pts:
                raise ScenarioError(f"{p}.points: expected a nonempty list of points")
            for j, pt in enumerate(pts):
                if not isinstance(pt, list) or len(pt) != dimension:
                    raise ScenarioError(
                        f"{p}.points[{j}]: expected a coordinate list of length {dimension}")
                for v in pt:
                    _expect_number(v, f"{p}.points[{j}]")
                if sum(float(v) ** 2 for v in pt) >= R * R:
                    raise ScenarioError(f"{p}.points[{j}]: must lie strictly inside radius R")
        out.append(CheckRequest(kind, options))
    return tuple(out)


def scenario_from_json(data, *, path: str = "scenario") -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: expected a top-level object")
    allowed = {"name", "dimension", "measure", "functions", "radii", "checks",
               "quad", "grid", "expect_fail"}
    unknown = set(data) - allowed
    if unknown:
        raise ScenarioError(f"{path}: unknown fields {sorted(unknown)}")
    for key in ("name", "dimension", "measure", "radii", "checks"):
        if key not in data:
            raise ScenarioError(f"{path}.{key}: missing")
    name = data["name"]
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise ScenarioError(f"{path}.name: expected letters, digits, '_', '-', '.'")
    dimension = data["dimension"]
    if isinstance(dimension, bool) or not isinstance(dimension, int) or dimension < 2:
        raise ScenarioError(f"{path}.dimension: expected an integer >= 2")
    try:
        measure = measure_from_json(data["measure"], path=f"{path}.measure")
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None
    if measure.dimension != dimension:
        raise ScenarioError(f"{path}.measure.dimension: differs from scenario dimension")
    functions = _parse_functions(data.get("functions"), dimension, f"{path}.functions")
    r, R, r0 = _parse_radii(data["radii"], f"{path}.radii")
    checks = _parse_checks(data["checks"], functions, dimension, r, R,
                           f"{path}.checks")
    quad = _parse_quad(data.get("quad"), f"{path}.quad")
    grid = data.get("grid", 17)
    if isinstance(grid, bool) or not isinstance(grid, int) or grid < 3:
        raise ScenarioError(f"{path}.grid: expected an integer >= 3")
    expect_raw = data.get("expect_fail", [])
    if not isinstance(expect_raw, list):
        raise ScenarioError(f"{path}.expect_fail: expected a list of check names")
    for i, entry in enumerate(expect_raw):
        if entry not in CHECK_KINDS:
            raise ScenarioError(f"{path}.expect_fail[{i}]: unknown check {entry!r}")
    return Scenario(name, dimension, measure, functions, r, R, r0, checks,
                    quad, grid, frozenset(expect_raw))


def load_scenario(path: str | Path) -> Scenario:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ScenarioError(f"{p}: cannot read scenario file ({exc})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{p}: invalid JSON ({exc})") from None
    return scenario_from_json(data, path=p.stem)
