"""Differences of subharmonic functions with explicitly known charge data.

A function here is a finite sum of kernel terms c_i * kappa(|x - a_i|) plus
a harmonic polynomial part, so its distributional Laplacian is the signed
atomic measure sum c_i * delta_{a_i} (times the surface-area normalisation,
which every routine in this package absorbs into the kernel).  Rational maps
of one complex variable are provided as the canonical d = 2 source: zeros
carry positive charge, poles negative, and log|scale| is the harmonic part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .kernels import as_point, kappa, validate_dimension
from .measures import Atom, Measure
from .quadrature import (
    DEFAULT_SPEC,
    ErrorBudget,
    QuadSpec,
    integrate_1d,
    sphere_mean,
)

HARMONIC_LABELS = ("const", "x0", "x1", "x2", "x0*x1", "x0^2-x1^2",
                   "re_z^2", "im_z^2", "re_z^3", "im_z^3")


def _harmonic_term(label: str, pts: np.ndarray, d: int) -> np.ndarray:
    """Evaluate one labeled harmonic basis term on an (n, d) point array."""
    if label == "const":
        return np.ones(pts.shape[0])
    if label in ("x0", "x1", "x2"):
        axis = int(label[1])
        if axis >= d:
            raise ValueError(f"harmonic term {label!r} needs dimension > {axis}")
        return pts[:, axis]
    if label == "x0*x1":
        return pts[:, 0] * pts[:, 1]
    if label == "x0^2-x1^2":
        return pts[:, 0] ** 2 - pts[:, 1] ** 2
    if d != 2:
        raise ValueError(f"harmonic term {label!r} is two-dimensional only")
    if label.startswith(("re_z^", "im_z^")):
        k = int(label.split("^")[1])
        z = pts[:, 0] + 1j * pts[:, 1]
        w = z ** k
        return w.real if label.startswith("re") else w.imag
    raise ValueError(f"unknown harmonic term label {label!r}")


@dataclass(frozen=True, eq=False)
class Charge:
    """Signed point charge feeding one kernel term."""

    location: np.ndarray
    weight: float

    def __post_init__(self):
        object.__setattr__(self, "location", np.asarray(self.location, dtype=float))
        if self.location.ndim != 1:
            raise ValueError("Charge.location must be a flat coordinate vector")
        if not math.isfinite(self.weight):
            raise ValueError("Charge.weight must be finite")


@dataclass(frozen=True)
class HarmonicPart:
    """Linear combination of labeled harmonic basis terms."""

    terms: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        clean = []
        for label, coeff in self.terms:
            if label not in HARMONIC_LABELS:
                raise ValueError(f"unknown harmonic term label {label!r}")
            c = float(coeff)
            if not math.isfinite(c):
                raise ValueError(f"harmonic coefficient for {label!r} must be finite")
            if c != 0.0:
                clean.append((label, c))
        object.__setattr__(self, "terms", tuple(clean))

    def evaluate(self, pts: np.ndarray, d: int) -> np.ndarray:
        out = np.zeros(pts.shape[0])
        for label, coeff in self.terms:
            out += coeff * _harmonic_term(label, pts, d)
        return out

    def scaled(self, factor: float) -> "HarmonicPart":
        return HarmonicPart(tuple((lb, factor * c) for lb, c in self.terms))


@dataclass(frozen=True, eq=False)
class DshFunction:
    """Sum of kernel terms plus a harmonic part, with its charges explicit.

    Coincident charge locations are merged at construction, so a single
    location never contributes two kernel terms of opposite sign and the
    pointwise value at a charge is an unambiguous +inf or -inf.
    """

    dimension: int
    charges: tuple[Charge, ...] = ()
    harmonic: HarmonicPart = field(default_factory=HarmonicPart)

    def __post_init__(self):
        d = validate_dimension(self.dimension)
        object.__setattr__(self, "dimension", d)
        merged: list[Charge] = []
        for ch in self.charges:
            if ch.location.shape != (d,):
                raise ValueError("charge location dimension mismatch")
            for i, prev in enumerate(merged):
                if np.array_equal(prev.location, ch.location):
                    merged[i] = Charge(prev.location, prev.weight + ch.weight)
                    break
            else:
                merged.append(ch)
        object.__setattr__(
            self, "charges", tuple(c for c in merged if c.weight != 0.0))

    def evaluate(self, x) -> float | np.ndarray:
        """Pointwise value; accepts one point or an (n, d) array of points."""
        pts = np.asarray(x, dtype=float)
        single = pts.ndim == 1
        if single:
            pts = pts[None, :]
        if pts.ndim != 2 or pts.shape[1] != self.dimension:
            raise ValueError("points must have shape (d,) or (n, d)")
        out = self.harmonic.evaluate(pts, self.dimension)
        for ch in self.charges:
            dist = np.linalg.norm(pts - ch.location, axis=1)
            out = out + ch.weight * kappa(dist, self.dimension)
        return float(out[0]) if single else out

    def __call__(self, x):
        return self.evaluate(x)

    def scale(self, factor: float) -> "DshFunction":
        """The function multiplied by a positive scalar."""
        if not (factor > 0.0 and math.isfinite(factor)):
            raise ValueError("scale factor must be positive and finite")
        return DshFunction(
            self.dimension,
            tuple(Charge(c.location, factor * c.weight) for c in self.charges),
            self.harmonic.scaled(factor))

    def riesz_lower_variation(self) -> Measure:
        """Atomic measure collecting |weight| at each negative charge."""
        atoms = tuple(Atom(c.location, -c.weight)
                      for c in self.charges if c.weight < 0.0)
        return Measure(self.dimension, atoms)

    def riesz_upper_variation(self) -> Measure:
        atoms = tuple(Atom(c.location, c.weight)
                      for c in self.charges if c.weight > 0.0)
        return Measure(self.dimension, atoms)

    def singular_angles_on(self, center, radius: float,
                           rtol: float = 0.05) -> tuple[float, ...] | None:
        """Angles (d = 2) of charges lying numerically on the given circle.

        Used as quadrature hints: a kernel term whose charge sits on the
        integration circle makes the integrand singular at that angle.
        """
        if self.dimension != 2:
            return None
        center = as_point(center, 2)
        angles = []
        for ch in self.charges:
            v = ch.location - center
            dist = float(np.linalg.norm(v))
            if abs(dist - radius) <= rtol * radius and dist > 0.0:
                angles.append(math.atan2(v[1], v[0]))
        return tuple(sorted(angles)) if angles else None


def positive_part_integral(u: DshFunction, mu: Measure,
                           spec: QuadSpec = DEFAULT_SPEC, *,
                           budget: ErrorBudget | None = None) -> float:
    """Integral of max(u, 0) against the measure.

    Atoms are evaluated exactly (an atom on a positive charge gives +inf; on
    a negative charge it contributes 0).  Shell components use sphere means
    with singular-angle hints, and radial components nest a radius integral
    over those means.
    """
    d = mu.dimension
    if u.dimension != d:
        raise ValueError("function and measure dimensions differ")
    total = 0.0

    def u_plus(pts: np.ndarray) -> np.ndarray:
        return np.maximum(u.evaluate(pts), 0.0)

    for atom in mu.atoms:
        total += atom.mass * max(u.evaluate(atom.location), 0.0)
    for shell in mu.spheres:
        hints = u.singular_angles_on(shell.center, shell.radius)
        mean = sphere_mean(u_plus, shell.radius, d, spec, center=shell.center,
                           budget=budget, singular_angles=hints,
                           label="positive-part")
        total += shell.mass * mean
    for comp in mu.radial:
        pts = list(comp.breakpoints)
        for ch in u.charges:
            dist = float(np.linalg.norm(ch.location - comp.center))
            if dist < comp.outer:
                pts.append(dist)

        def ring(s: float, comp=comp) -> float:
            hints = u.singular_angles_on(comp.center, s)
            return sphere_mean(u_plus, s, d, spec, center=comp.center,
                               budget=budget, singular_angles=hints,
                               label="positive-part")

        res = integrate_1d(lambda s: comp.density(s) * ring(s), 0.0, comp.outer,
                           spec, points=pts, budget=budget, label="positive-part")
        total += res.value
    return float(total)


def kernel_witness(y, r: float, R: float, d: int) -> DshFunction:
    """The test function x -> kappa(R + r) - kappa(|x - y|).

    Nonnegative on the closed ball of radius R around the origin whenever
    |y| <= r, with a single unit negative charge at y; its two-radius
    characteristic is kappa(R + r) - kappa(r) exactly.
    """
    if not (0.0 < r < R):
        raise ValueError("kernel_witness: need 0 < r < R")
    y = as_point(y, d)
    harmonic = HarmonicPart((("const", float(kappa(R + r, d))),))
    return DshFunction(d, (Charge(y, -1.0),), harmonic)


# ---------------------------------------------------------------------------
# Rational maps of one complex variable


def _as_complex_tuple(values) -> tuple[complex, ...]:
    return tuple(complex(v) for v in values)


@dataclass(frozen=True)
class RationalFunction:
    """Rational map given by zero and pole multisets and a scale factor.

    ``zeros`` and ``poles`` list each root with multiplicity.  Common entries
    are cancelled pairwise at construction, mirroring reduction of the
    fraction; the scale is the leading coefficient ratio and must be nonzero.
    """

    zeros: tuple[complex, ...] = ()
    poles: tuple[complex, ...] = ()
    scale: complex = 1.0

    def __post_init__(self):
        zeros = list(_as_complex_tuple(self.zeros))
        poles = list(_as_complex_tuple(self.poles))
        reduced_poles: list[complex] = []
        for p in poles:
            if p in zeros:
                zeros.remove(p)
            else:
                reduced_poles.append(p)
        s = complex(self.scale)
        if s == 0 or not (math.isfinite(s.real) and math.isfinite(s.imag)):
            raise ValueError("RationalFunction.scale must be finite and nonzero")
        object.__setattr__(self, "zeros", tuple(sorted(zeros, key=lambda z: (z.real, z.imag))))
        object.__setattr__(self, "poles", tuple(sorted(reduced_poles, key=lambda z: (z.real, z.imag))))
        object.__setattr__(self, "scale", s)

    @property
    def degree(self) -> int:
        return max(len(self.zeros), len(self.poles))

    @property
    def n_poles(self) -> int:
        return len(self.poles)

    def value(self, z: complex) -> complex:
        num = self.scale
        for a in self.zeros:
            num *= z - a
        den = 1.0 + 0.0j
        for b in self.poles:
            den *= z - b
        if den == 0:
            return complex(math.inf, math.inf)
        return num / den

    def log_abs(self, z: complex) -> float:
        """ln|f(z)| as a sum of log distances; -inf at zeros, +inf at poles."""
        total = math.log(abs(self.scale))
        for a in self.zeros:
            total += -math.inf if z == a else math.log(abs(z - a))
        for b in self.poles:
            total -= -math.inf if z == b else math.log(abs(z - b))
        return total

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return RationalFunction(self.zeros + other.zeros,
                                self.poles + other.poles,
                                self.scale * other.scale)

    def reciprocal(self) -> "RationalFunction":
        return RationalFunction(self.poles, self.zeros, 1.0 / self.scale)


def from_rational(f: RationalFunction) -> DshFunction:
    """ln|f| as a kernel sum: +1 per zero, -1 per pole, constant ln|scale|."""
    charges = []
    for a in f.zeros:
        charges.append(Charge(np.array([a.real, a.imag]), 1.0))
    for b in f.poles:
        charges.append(Charge(np.array([b.real, b.imag]), -1.0))
    harmonic = HarmonicPart((("const", math.log(abs(f.scale))),))
    return DshFunction(2, tuple(charges), harmonic)


# ---------------------------------------------------------------------------
# JSON round trip


def dsh_to_json(u: DshFunction) -> dict:
    out: dict = {"dimension": u.dimension}
    if u.charges:
        out["charges"] = [{"point": [float(v) for v in c.location],
                           "weight": c.weight} for c in u.charges]
    if u.harmonic.terms:
        out["harmonic"] = [[label, coeff] for label, coeff in u.harmonic.terms]
    return out


def dsh_from_json(data, *, path: str = "function") -> DshFunction:
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected an object")
    unknown = set(data) - {"dimension", "charges", "harmonic", "rational"}
    if unknown:
        raise ValueError(f"{path}: unknown fields {sorted(unknown)}")
    if "rational" in data:
        if set(data) - {"rational"}:
            raise ValueError(f"{path}: 'rational' cannot be combined with other fields")
        return from_rational(rational_from_json(data["rational"],
                                                path=f"{path}.rational"))
    if "dimension" not in data:
        raise ValueError(f"{path}.dimension: missing")
    try:
        d = validate_dimension(data["dimension"])
    except ValueError as exc:
        raise ValueError(f"{path}.dimension: {exc}") from None
    charges = []
    for i, entry in enumerate(data.get("charges", []) or []):
        p = f"{path}.charges[{i}]"
        if not isinstance(entry, dict) or "point" not in entry or "weight" not in entry:
            raise ValueError(f"{p}: expected an object with 'point' and 'weight'")
        pt = entry["point"]
        if not isinstance(pt, (list, tuple)) or len(pt) != d:
            raise ValueError(f"{p}.point: expected a coordinate list of length {d}")
        w = entry["weight"]
        if isinstance(w, bool) or not isinstance(w, (int, float)) or not math.isfinite(w):
            raise ValueError(f"{p}.weight: expected a finite number")
        charges.append(Charge(np.asarray(pt, dtype=float), float(w)))
    terms = []
    for i, entry in enumerate(data.get("harmonic", []) or []):
        p = f"{path}.harmonic[{i}]"
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise ValueError(f"{p}: expected a [label, coefficient] pair")
        label, coeff = entry
        if label not in HARMONIC_LABELS:
            raise ValueError(f"{p}: unknown harmonic term label {label!r}")
        if isinstance(coeff, bool) or not isinstance(coeff, (int, float)):
            raise ValueError(f"{p}: coefficient must be a number")
        terms.append((label, float(coeff)))
    try:
        return DshFunction(d, tuple(charges), HarmonicPart(tuple(terms)))
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def _expect_complex(value, path: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return complex(value[0], value[1])
    raise ValueError(f"{path}: expected a number or [re, im] pair")


def rational_to_json(f: RationalFunction) -> dict:
    def enc(z: complex):
        return z.real if z.imag == 0.0 else [z.real, z.imag]

    return {"zeros": [enc(z) for z in f.zeros],
            "poles": [enc(p) for p in f.poles],
            "scale": enc(f.scale)}


def rational_from_json(data, *, path: str = "rational") -> RationalFunction:
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected an object")
    unknown = set(data) - {"zeros", "poles", "scale"}
    if unknown:
        raise ValueError(f"{path}: unknown fields {sorted(unknown)}")
    zeros = data.get("zeros", [])
    poles = data.get("poles", [])
    if not isinstance(zeros, (list, tuple)):
        raise ValueError(f"{path}.zeros: expected a list")
    if not isinstance(poles, (list, tuple)):
        raise ValueError(f"{path}.poles: expected a list")
    zs = [_expect_complex(z, f"{path}.zeros[{i}]") for i, z in enumerate(zeros)]
    ps = [_expect_complex(p, f"{path}.poles[{i}]") for i, p in enumerate(poles)]
    scale = _expect_complex(data.get("scale", 1.0), f"{path}.scale")
    try:
        return RationalFunction(tuple(zs), tuple(ps), scale)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
