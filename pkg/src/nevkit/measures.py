"""Finite nonnegative Borel measures built from atoms, uniform sphere shells,
and radially symmetric densities, together with the counting and potential
functionals defined on them.

Components are immutable after construction and every functional here is a
pure function of its inputs.  Closed-ball conventions hold throughout: mass
sitting exactly on the rim of a ball of radius t is counted at t.  Density
and shell components are supported for dimensions 2 and 3; atoms work in any
dimension.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.special import bernoulli as _bernoulli_numbers

from .kernels import (
    BOUNDARY_RTOL,
    as_point,
    hat_d,
    kappa,
    validate_dimension,
)
from .quadrature import (
    DEFAULT_SPEC,
    ErrorBudget,
    QuadSpec,
    integrate_1d,
    sphere_mean,
)

SUPPORT = "support"


@dataclass(frozen=True)
class PolynomialDensity:
    """Polynomial radial density t -> sum_k coeffs[k] * t**k."""

    coeffs: tuple[float, ...]

    def __call__(self, t: float) -> float:
        total = 0.0
        for c in reversed(self.coeffs):
            total = total * t + c
        return total

    def cumulative(self, t: float) -> float:
        """Exact integral of the density over [0, t]."""
        total = 0.0
        for k in reversed(range(len(self.coeffs))):
            total = total * t + self.coeffs[k] / (k + 1)
        return total * t


@dataclass(frozen=True, eq=False)
class Atom:
    """Point mass."""

    location: np.ndarray
    mass: float

    def __post_init__(self):
        object.__setattr__(self, "location", np.asarray(self.location, dtype=float))
        if self.location.ndim != 1:
            raise ValueError("Atom.location must be a flat coordinate vector")
        if not (self.mass > 0.0 and math.isfinite(self.mass)):
            raise ValueError("Atom.mass must be positive and finite")


@dataclass(frozen=True, eq=False)
class SphereShell:
    """Uniform distribution of ``mass`` on the sphere |x - center| = radius."""

    center: np.ndarray
    radius: float
    mass: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if self.center.ndim != 1:
            raise ValueError("SphereShell.center must be a flat coordinate vector")
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError("SphereShell.radius must be positive and finite")
        if not (self.mass > 0.0 and math.isfinite(self.mass)):
            raise ValueError("SphereShell.mass must be positive and finite")


@dataclass(frozen=True, eq=False)
class RadialDensity:
    """Rotationally symmetric component about ``center``.

    The mass within distance t of the center is integral_0^t density(s) ds,
    so ``density`` is the derivative of the component's own radial counting
    function.  ``cumulative`` may supply that integral exactly (polynomials
    do); otherwise it is obtained by quadrature.
    """

    center: np.ndarray
    density: Callable[[float], float]
    outer: float
    breakpoints: tuple[float, ...] = ()
    cumulative: Callable[[float], float] | None = None
    coeffs: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if self.center.ndim != 1:
            raise ValueError("RadialDensity.center must be a flat coordinate vector")
        if not (self.outer > 0.0 and math.isfinite(self.outer)):
            raise ValueError("RadialDensity.outer must be positive and finite")
        object.__setattr__(self, "breakpoints",
                           tuple(float(b) for b in self.breakpoints))
        for t in np.linspace(0.0, self.outer, 17):
            if self.density(float(t)) < -1e-12:
                raise ValueError("RadialDensity.density must be nonnegative")

    @staticmethod
    def from_polynomial(center, coeffs, outer: float) -> "RadialDensity":
        poly = PolynomialDensity(tuple(float(c) for c in coeffs))
        return RadialDensity(center=np.asarray(center, dtype=float),
                             density=poly, outer=float(outer),
                             cumulative=poly.cumulative, coeffs=poly.coeffs)

    def mass_within(self, t: float, spec: QuadSpec = DEFAULT_SPEC) -> float:
        """Mass of the component within distance t of its own center."""
        hi = min(max(t, 0.0), self.outer)
        if hi == 0.0:
            return 0.0
        if self.cumulative is not None:
            return float(self.cumulative(hi))
        return integrate_1d(self.density, 0.0, hi, spec,
                            points=self.breakpoints).value

    @property
    def total(self) -> float:
        return self.mass_within(self.outer)


@dataclass(frozen=True, eq=False)
class Ball:
    """Closed ball region used by supremum scans."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError("Ball.radius must be positive and finite")

    def contains(self, p: np.ndarray) -> bool:
        return float(np.linalg.norm(p - self.center)) <= self.radius * (1.0 + BOUNDARY_RTOL)


@dataclass(frozen=True, eq=False)
class Measure:
    """Finite nonnegative measure: atoms + uniform shells + radial densities."""

    dimension: int
    atoms: tuple[Atom, ...] = ()
    spheres: tuple[SphereShell, ...] = ()
    radial: tuple[RadialDensity, ...] = ()

    def __post_init__(self):
        d = validate_dimension(self.dimension)
        object.__setattr__(self, "dimension", d)
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "spheres", tuple(self.spheres))
        object.__setattr__(self, "radial", tuple(self.radial))
        if (self.spheres or self.radial) and d not in (2, 3):
            raise ValueError(
                "shell and density components are supported for d in {2, 3}; "
                "use atoms for higher dimensions")
        for a in self.atoms:
            if a.location.shape != (d,):
                raise ValueError("atom location dimension mismatch")
        for s in self.spheres:
            if s.center.shape != (d,):
                raise ValueError("shell center dimension mismatch")
        for c in self.radial:
            if c.center.shape != (d,):
                raise ValueError("radial component center dimension mismatch")
        object.__setattr__(self, "_cache", {})

    @cached_property
    def total_mass(self) -> float:
        total = sum(a.mass for a in self.atoms)
        total += sum(s.mass for s in self.spheres)
        total += sum(c.total for c in self.radial)
        return float(total)

    @cached_property
    def support_radius(self) -> float:
        """Radius of the smallest closed ball about the origin containing supp."""
        radii = [0.0]
        radii += [float(np.linalg.norm(a.location)) for a in self.atoms]
        radii += [float(np.linalg.norm(s.center)) + s.radius for s in self.spheres]
        radii += [float(np.linalg.norm(c.center)) + c.outer for c in self.radial]
        return max(radii)

    @property
    def is_zero(self) -> bool:
        return not (self.atoms or self.spheres or self.radial)

    def translate(self, v) -> "Measure":
        v = as_point(v, self.dimension)
        return Measure(
            self.dimension,
            tuple(Atom(a.location + v, a.mass) for a in self.atoms),
            tuple(SphereShell(s.center + v, s.radius, s.mass) for s in self.spheres),
            tuple(replace(c, center=c.center + v) for c in self.radial),
        )

    def __add__(self, other: "Measure") -> "Measure":
        if not isinstance(other, Measure):
            return NotImplemented
        if other.dimension != self.dimension:
            raise ValueError("cannot add measures of different dimensions")
        return Measure(self.dimension, self.atoms + other.atoms,
                       self.spheres + other.spheres, self.radial + other.radial)

    def without_atoms(self) -> "Measure":
        return Measure(self.dimension, (), self.spheres, self.radial)


@dataclass(frozen=True, eq=False)
class CountingFunction:
    """Nondecreasing radial mass profile t -> mu(closed ball of radius t).

    Represented as exact jumps plus an absolutely continuous part given by a
    density with known breakpoints; ``cumulative`` integrates the density
    from 0 when a closed form is available.
    """

    jumps: tuple[tuple[float, float], ...] = ()
    density: Callable[[float], float] | None = None
    breakpoints: tuple[float, ...] = ()
    cumulative: Callable[[float], float] | None = None
    center: np.ndarray | None = None

    def value(self, t: float, spec: QuadSpec = DEFAULT_SPEC) -> float:
        total = sum(dh for s, dh in self.jumps if s <= t * (1.0 + BOUNDARY_RTOL))
        if self.cumulative is not None:
            total += self.cumulative(t)
        elif self.density is not None and t > 0.0:
            total += integrate_1d(self.density, 0.0, t, spec,
                                  points=self.breakpoints).value
        return float(total)


@dataclass(frozen=True)
class SupResult:
    """Grid-approximate supremum: value, maximizer, and scan bookkeeping."""

    value: float
    argmax: tuple[float, ...] | None
    resolution: int
    evaluations: int


def _cap_fraction(a: float, s: float, t: float, d: int) -> float:
    """Fraction of the sphere of radius s (center c) within distance t of a
    point at distance a = |y - c| from the center."""
    if t < 0.0:
        return 0.0
    if a == 0.0:
        return 1.0 if t >= s * (1.0 - BOUNDARY_RTOL) else 0.0
    c0 = (a * a + s * s - t * t) / (2.0 * a * s)
    if c0 <= -1.0:
        return 1.0
    if c0 >= 1.0:
        return 0.0
    if d == 2:
        return math.acos(c0) / math.pi
    return 0.5 * (1.0 - c0)


# Coefficients B_k / (k+1)! for the dilogarithm series in u = -ln(1-z).
_LI2_COEF = tuple(float(b) / math.factorial(k + 1)
                  for k, b in enumerate(_bernoulli_numbers(40)))


def _im_li2(x: float, theta: float) -> float:
    """Imaginary part of the dilogarithm at x*exp(i*theta), 0 <= x <= 1.

    Three classical regimes: the defining series for small modulus, the
    reflection identity when the argument is near 1, and otherwise the
    series in u = -ln(1-z) whose coefficients are Bernoulli numbers over
    factorials.  All are accurate to roughly machine precision here.
    """
    if x <= 0.0 or theta == 0.0:
        return 0.0
    if x <= 0.5:
        k = np.arange(1, 55)
        return float(np.sum(x ** k * np.sin(k * theta) / (k * k)))
    z = complex(x * math.cos(theta), x * math.sin(theta))
    w = 1.0 - z
    if abs(w) <= 0.5:
        acc = 0.0j
        wk = 1.0 + 0.0j
        for k in range(1, 55):
            wk *= w
            acc += wk / (k * k)
        return (math.pi ** 2 / 6.0 - cmath.log(z) * cmath.log(w) - acc).imag
    u = -cmath.log(w)
    acc = 0.0j
    up = 1.0 + 0.0j
    for coef in _LI2_COEF:
        up *= u
        acc += coef * up
    return acc.imag


def _shell_counting_kernel(a: float, s: float, r: float, d: int) -> float:
    """Mean over a unit-mass shell of radius s, center distance a, of
    (kappa(r) - kappa(|x - y|)) restricted to |x - y| <= r.

    Exact in every regime: the mean-value property covers a shell entirely
    inside the ball, the d = 3 window integrates in closed form, and the
    d = 2 window reduces to a dilogarithm.
    """
    kr = kappa(r, d)
    if a == 0.0:
        return kr - kappa(s, d) if s <= r * (1.0 + BOUNDARY_RTOL) else 0.0
    lo = abs(a - s)
    if lo >= r:
        return 0.0
    if a + s <= r:
        return kr - kappa(max(a, s), d)
    if d == 3:
        return (r - lo) ** 2 / (4.0 * a * s * r)
    c0 = (a * a + s * s - r * r) / (2.0 * a * s)
    theta = math.acos(min(max(c0, -1.0), 1.0))
    mx = max(a, s)
    return (theta * (kr - math.log(mx)) + _im_li2(min(a, s) / mx, theta)) / math.pi


def radial_counting(mu: Measure, y, t: float, spec: QuadSpec = DEFAULT_SPEC, *,
                    budget: ErrorBudget | None = None) -> float:
    """Mass of the closed ball of radius t about y.

    Exact for atoms (closed-ball convention) and for centred components;
    adaptive quadrature covers off-center density components.
    """
    if t < 0.0:
        raise ValueError("radial_counting: t must be nonnegative")
    d = mu.dimension
    y = as_point(y, d)
    thr = t * (1.0 + BOUNDARY_RTOL)
    total = 0.0
    for atom in mu.atoms:
        if float(np.linalg.norm(atom.location - y)) <= thr:
            total += atom.mass
    for shell in mu.spheres:
        a = float(np.linalg.norm(shell.center - y))
        total += shell.mass * _cap_fraction(a, shell.radius, t, d)
    for comp in mu.radial:
        a = float(np.linalg.norm(comp.center - y))
        if a == 0.0:
            total += comp.mass_within(thr, spec)
        elif t > 0.0:
            pts = [abs(a - t), a + t, *comp.breakpoints]
            res = integrate_1d(
                lambda s: comp.density(s) * _cap_fraction(a, s, t, d),
                0.0, comp.outer, spec, points=pts, budget=budget,
                label="radial-counting")
            total += res.value
    return float(total)


def integrated_counting(mu: Measure, y, r: float, spec: QuadSpec = DEFAULT_SPEC, *,
                        budget: ErrorBudget | None = None) -> float:
    """hat_d * integral_0^r of the radial counting about y divided by t**(d-1).

    Evaluated per component through the equivalent form
    integral over the closed ball B(y, r) of (kappa(r) - kappa(|x - y|)) dmu:
    closed form for atoms (and +inf when an atom sits exactly at y), angular
    quadrature for shells, and a nested radial integral for densities.
    """
    if r <= 0.0:
        raise ValueError("integrated_counting: r must be positive")
    d = mu.dimension
    y = as_point(y, d)
    kr = kappa(r, d)
    thr = r * (1.0 + BOUNDARY_RTOL)
    total = 0.0
    for atom in mu.atoms:
        dist = float(np.linalg.norm(atom.location - y))
        if dist <= thr:
            total += atom.mass * (kr - kappa(dist, d))  # dist == 0 -> +inf
    for shell in mu.spheres:
        a = float(np.linalg.norm(shell.center - y))
        total += shell.mass * _shell_counting_kernel(a, shell.radius, r, d)
    for comp in mu.radial:
        a = float(np.linalg.norm(comp.center - y))
        if a == 0.0:
            hi = min(r, comp.outer)
            res = integrate_1d(lambda s: comp.density(s) * (kr - kappa(s, d)),
                               0.0, hi, spec, points=comp.breakpoints,
                               budget=budget, label="integrated-counting")
            total += res.value
        else:
            pts = [abs(a - r), a + r, a, *comp.breakpoints]
            res = integrate_1d(
                lambda s: comp.density(s) * _shell_counting_kernel(a, s, r, d),
                0.0, comp.outer, spec, points=pts, budget=budget,
                label="integrated-counting")
            total += res.value
    return float(total)


def difference_counting(mu: Measure, r: float, R: float,
                        spec: QuadSpec = DEFAULT_SPEC, *,
                        budget: ErrorBudget | None = None) -> float:
    """hat_d * integral_r^R of the radial counting about 0 divided by t**(d-1).

    Atoms contribute in closed form, which keeps the r = 0 endpoint honest
    (an atom at the origin then gives +inf).  Continuous components are
    integrated adaptively with breakpoints at their transition radii.
    """
    if not (0.0 <= r < R):
        raise ValueError("difference_counting: invalid radii, need 0 <= r < R")
    d = mu.dimension
    kR = kappa(R, d)
    total = 0.0
    for atom in mu.atoms:
        na = float(np.linalg.norm(atom.location))
        if na <= R * (1.0 + BOUNDARY_RTOL):
            total += atom.mass * (kR - kappa(max(r, na), d))
    if mu.spheres or mu.radial:
        cont = mu.without_atoms()
        pts = []
        for shell in cont.spheres:
            nc = float(np.linalg.norm(shell.center))
            pts += [abs(nc - shell.radius), nc + shell.radius]
        for comp in cont.radial:
            nc = float(np.linalg.norm(comp.center))
            pts += [abs(nc - comp.outer), nc + comp.outer]
            pts += [nc + b for b in comp.breakpoints]
        res = integrate_1d(
            lambda t: radial_counting(cont, np.zeros(d), t, spec) / t ** (d - 1),
            r, R, spec, points=pts, budget=budget, label="difference-counting")
        total += hat_d(d) * res.value
    return float(total)


def potential(mu: Measure, x, spec: QuadSpec = DEFAULT_SPEC, *,
              budget: ErrorBudget | None = None) -> float:
    """Kernel potential integral of kappa(|y - x|) dmu(y); -inf is legitimate.

    Shells contribute the closed form mass * kappa(max(radius, |x - center|));
    densities reduce to one radial integral through the same mean-value fact.
    """
    d = mu.dimension
    x = as_point(x, d)
    total = 0.0
    for atom in mu.atoms:
        total += atom.mass * kappa(float(np.linalg.norm(atom.location - x)), d)
    for shell in mu.spheres:
        a = float(np.linalg.norm(shell.center - x))
        total += shell.mass * kappa(max(a, shell.radius), d)
    for comp in mu.radial:
        a = float(np.linalg.norm(comp.center - x))
        inner = comp.mass_within(a, spec) if a > 0.0 else 0.0
        if inner > 0.0:
            total += kappa(a, d) * inner
        lo = min(a, comp.outer)
        if lo < comp.outer:
            res = integrate_1d(lambda s: comp.density(s) * kappa(s, d),
                               lo, comp.outer, spec, points=comp.breakpoints,
                               budget=budget, label="potential")
            total += res.value
    return float(total)


def energy(mu: Measure, spec: QuadSpec = DEFAULT_SPEC, *,
           budget: ErrorBudget | None = None) -> float:
    """Energy integral of the potential against the measure itself.

    Any atom makes the energy -inf (the self-interaction is included by
    convention).  Co-centred measures use the radial symmetry of their
    potential; general layouts integrate the potential over each component.
    """
    if mu.atoms:
        return float("-inf")
    if mu.is_zero:
        return 0.0
    d = mu.dimension
    centers = [s.center for s in mu.spheres] + [c.center for c in mu.radial]
    co_centered = all(np.array_equal(centers[0], c) for c in centers[1:])
    total = 0.0
    if co_centered:
        c0 = centers[0]
        e1 = np.zeros(d)
        e1[0] = 1.0
        for shell in mu.spheres:
            total += shell.mass * potential(mu, c0 + shell.radius * e1, spec, budget=budget)
        for comp in mu.radial:
            pts = [*comp.breakpoints]
            pts += [s.radius for s in mu.spheres]
            res = integrate_1d(
                lambda s: comp.density(s) * potential(mu, c0 + s * e1, spec),
                0.0, comp.outer, spec, points=pts, budget=budget, label="energy")
            total += res.value
        return float(total)

    def pt_vec(pts: np.ndarray) -> np.ndarray:
        return np.array([potential(mu, p, spec) for p in pts])

    for shell in mu.spheres:
        mean = sphere_mean(pt_vec, shell.radius, d, spec, center=shell.center,
                           budget=budget, label="energy")
        total += shell.mass * mean
    for comp in mu.radial:
        def ring_mean(s: float, center=comp.center) -> float:
            return sphere_mean(pt_vec, s, d, spec, center=center, budget=budget,
                               label="energy")

        res = integrate_1d(lambda s: comp.density(s) * ring_mean(s),
                           0.0, comp.outer, spec, points=comp.breakpoints,
                           budget=budget, label="energy")
        total += res.value
    return float(total)


def counting_function(mu: Measure, y, spec: QuadSpec = DEFAULT_SPEC) -> CountingFunction:
    """The radial counting profile about y as exact jumps plus a density.

    Atoms and centred shells become jumps.  Off-center shells carry the
    analytic arc/cap density.  Radial components must be centred at y (the
    off-center profile has no closed-form density here).
    """
    d = mu.dimension
    y = as_point(y, d)
    jump_map: dict[float, float] = {}

    def add_jump(t: float, m: float) -> None:
        jump_map[t] = jump_map.get(t, 0.0) + m

    densities: list[Callable[[float], float]] = []
    cumulatives: list[Callable[[float], float]] = []
    breakpoints: list[float] = []
    for atom in mu.atoms:
        add_jump(float(np.linalg.norm(atom.location - y)), atom.mass)
    for shell in mu.spheres:
        a = float(np.linalg.norm(shell.center - y))
        if a == 0.0:
            add_jump(shell.radius, shell.mass)
            continue
        lo, hi = abs(a - shell.radius), a + shell.radius
        rho, m = shell.radius, shell.mass

        if d == 2:
            def dens(t: float, a=a, rho=rho, m=m, lo=lo, hi=hi) -> float:
                if not lo < t < hi:
                    return 0.0
                c0 = (a * a + rho * rho - t * t) / (2.0 * a * rho)
                return m * t / (math.pi * a * rho * math.sqrt(max(1.0 - c0 * c0, 0.0)))
        else:
            def dens(t: float, a=a, rho=rho, m=m, lo=lo, hi=hi) -> float:
                return m * t / (2.0 * a * rho) if lo < t < hi else 0.0

        densities.append(dens)
        cumulatives.append(lambda t, a=a, rho=rho, m=m: m * _cap_fraction(a, rho, t, d))
        breakpoints += [lo, hi]
    for comp in mu.radial:
        a = float(np.linalg.norm(comp.center - y))
        if a > 0.0:
            raise ValueError(
                "counting_function supports radial density components centred at y only")
        densities.append(lambda t, comp=comp: comp.density(t) if t <= comp.outer else 0.0)
        cumulatives.append(lambda t, comp=comp: comp.mass_within(t, spec))
        breakpoints += [comp.outer, *comp.breakpoints]

    density = None
    cumulative = None
    if densities:
        def density(t: float) -> float:  # noqa: F811
            return sum(f(t) for f in densities)

        def cumulative(t: float) -> float:  # noqa: F811
            return sum(f(t) for f in cumulatives)

    jumps = tuple(sorted((t, m) for t, m in jump_map.items()))
    return CountingFunction(jumps=jumps, density=density,
                            breakpoints=tuple(sorted(set(breakpoints))),
                            cumulative=cumulative, center=y)


def _ball_lattice(ball: Ball, d: int, resolution: int) -> list[np.ndarray]:
    axes = [np.linspace(c - ball.radius, c + ball.radius, resolution)
            for c in ball.center]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.column_stack([m.ravel() for m in mesh])
    keep = np.linalg.norm(pts - ball.center, axis=1) <= ball.radius * (1.0 + BOUNDARY_RTOL)
    return list(pts[keep])


def _support_samples(mu: Measure, resolution: int) -> list[tuple[np.ndarray, object]]:
    """Deterministic sample points on supp(mu), tagged with their component."""
    d = mu.dimension
    out: list[tuple[np.ndarray, object]] = []
    for atom in mu.atoms:
        out.append((atom.location, atom))
    n_ang = max(16, 2 * resolution)
    for shell in mu.spheres:
        if d == 2:
            theta = np.arange(n_ang) * (2.0 * math.pi / n_ang)
            ring = np.column_stack((np.cos(theta), np.sin(theta)))
            for w in ring:
                out.append((shell.center + shell.radius * w, shell))
        else:
            n_pol = max(8, resolution)
            for u in np.linspace(-1.0, 1.0, n_pol):
                su = math.sqrt(max(1.0 - u * u, 0.0))
                for phi in np.arange(n_ang // 2) * (4.0 * math.pi / n_ang):
                    w = np.array([su * math.cos(phi), su * math.sin(phi), u])
                    out.append((shell.center + shell.radius * w, shell))
    for comp in mu.radial:
        n_rad = max(4, resolution // 2)
        radii = np.linspace(comp.outer / n_rad, comp.outer, n_rad)
        if d == 2:
            theta = np.arange(n_ang) * (2.0 * math.pi / n_ang)
            dirs = np.column_stack((np.cos(theta), np.sin(theta)))
        else:
            dirs = []
            for u in np.linspace(-1.0, 1.0, max(6, resolution // 2)):
                su = math.sqrt(max(1.0 - u * u, 0.0))
                for phi in np.arange(8) * (math.pi / 4.0):
                    dirs.append([su * math.cos(phi), su * math.sin(phi), u])
            dirs = np.asarray(dirs)
        for s in radii:
            for w in dirs:
                out.append((comp.center + s * np.asarray(w), comp))
    return out


def _project_to_component(p: np.ndarray, comp) -> np.ndarray | None:
    if isinstance(comp, SphereShell):
        v = p - comp.center
        nv = float(np.linalg.norm(v))
        if nv == 0.0:
            return None
        return comp.center + comp.radius * v / nv
    if isinstance(comp, RadialDensity):
        v = p - comp.center
        nv = float(np.linalg.norm(v))
        if nv == 0.0:
            return None
        s = min(max(nv, comp.outer * 1e-9), comp.outer)
        return comp.center + s * v / nv
    return None


def sup_integrated_counting(mu: Measure, region, r: float, resolution: int,
                            spec: QuadSpec = DEFAULT_SPEC, *,
                            budget: ErrorBudget | None = None) -> SupResult:
    """Grid-approximate supremum over the region of y -> integrated_counting.

    Evaluates at every atom location in the region, at component witness
    points, and on a uniform lattice of the given per-axis resolution, then
    refines locally around the best point (3 levels, factor 4 each).  The
    result is a certified lower bound for the supremum; +inf is returned as
    soon as any evaluation is +inf.  Regions: a Ball or SUPPORT.
    """
    d = mu.dimension
    if d not in (2, 3):
        raise ValueError("sup_integrated_counting scans are provided for d in {2, 3}")
    if resolution < 3:
        raise ValueError("sup_integrated_counting: resolution must be at least 3")
    if region == SUPPORT:
        key = ("sup", SUPPORT, r, resolution, spec.abs_tol, spec.rel_tol)
    elif isinstance(region, Ball):
        key = ("sup", "ball", tuple(region.center), region.radius, r, resolution,
               spec.abs_tol, spec.rel_tol)
    else:
        raise ValueError("region must be a Ball or the SUPPORT marker")
    cached = mu._cache.get(key)
    if cached is not None:
        return cached
    if mu.is_zero:
        result = SupResult(0.0, None, resolution, 0)
        mu._cache[key] = result
        return result

    candidates: list[tuple[np.ndarray, object]] = []
    if region == SUPPORT:
        candidates = _support_samples(mu, resolution)
        step = max((c.outer for c in mu.radial), default=0.0)
        step = max(step, max((s.radius for s in mu.spheres), default=0.0))
        step = max(step / max(resolution - 1, 1), 1e-6)
    else:
        in_region = region.contains
        candidates = [(p, None) for p in _ball_lattice(region, d, resolution)]
        for atom in mu.atoms:
            if in_region(atom.location):
                candidates.append((atom.location, atom))
        for shell in mu.spheres:
            if in_region(shell.center):
                candidates.append((shell.center, None))
        for comp in mu.radial:
            if in_region(comp.center):
                candidates.append((comp.center, None))
        step = 2.0 * region.radius / (resolution - 1)

    evaluations = 0
    best_val = float("-inf")
    best_pt: np.ndarray | None = None
    best_src: object = None
    for p, src in candidates:
        val = integrated_counting(mu, p, r, spec, budget=budget)
        evaluations += 1
        if val > best_val:
            best_val, best_pt, best_src = val, p, src
            if math.isinf(val):
                break

    if best_pt is not None and not math.isinf(best_val):
        for _ in range(3):
            step /= 4.0
            offsets = np.linspace(-4.0 * step, 4.0 * step, 9)
            mesh = np.meshgrid(*([offsets] * d), indexing="ij")
            shifts = np.column_stack([m.ravel() for m in mesh])
            for dv in shifts:
                q = best_pt + dv
                if region == SUPPORT:
                    q = _project_to_component(q, best_src)
                    if q is None:
                        continue
                elif not region.contains(q):
                    continue
                val = integrated_counting(mu, q, r, spec, budget=budget)
                evaluations += 1
                if val > best_val:
                    best_val, best_pt = val, q

    result = SupResult(float(best_val),
                       None if best_pt is None else tuple(float(v) for v in best_pt),
                       resolution, evaluations)
    mu._cache[key] = result
    return result


# ---------------------------------------------------------------------------
# JSON round trip


def measure_to_json(mu: Measure) -> dict:
    """Serialize a measure; radial components must be polynomial."""
    out: dict = {"dimension": mu.dimension}
    if mu.atoms:
        out["atoms"] = [{"point": [float(v) for v in a.location], "mass": a.mass}
                        for a in mu.atoms]
    if mu.spheres:
        out["spheres"] = [{"center": [float(v) for v in s.center],
                           "radius": s.radius, "mass": s.mass}
                          for s in mu.spheres]
    if mu.radial:
        comps = []
        for c in mu.radial:
            if c.coeffs is None:
                raise ValueError("only polynomial radial densities can be serialized")
            comps.append({"center": [float(v) for v in c.center],
                          "coeffs": list(c.coeffs), "outer": c.outer})
        out["radial"] = comps
    return out


def _expect_number(value, path: str, *, positive: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{path}: expected a number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise ValueError(f"{path}: must be finite")
    if positive and v <= 0.0:
        raise ValueError(f"{path}: must be positive")
    return v


def _expect_point(value, d: int, path: str) -> list[float]:
    if not isinstance(value, (list, tuple)) or len(value) != d:
        raise ValueError(f"{path}: expected a coordinate list of length {d}")
    return [_expect_number(v, f"{path}[{i}]") for i, v in enumerate(value)]


def measure_from_json(data, *, path: str = "measure") -> Measure:
    """Parse the measure schema, reporting the offending field on error."""
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected an object")
    unknown = set(data) - {"dimension", "atoms", "spheres", "radial"}
    if unknown:
        raise ValueError(f"{path}: unknown fields {sorted(unknown)}")
    if "dimension" not in data:
        raise ValueError(f"{path}.dimension: missing")
    try:
        d = validate_dimension(data["dimension"])
    except ValueError as exc:
        raise ValueError(f"{path}.dimension: {exc}") from None
    atoms = []
    for i, entry in enumerate(data.get("atoms", []) or []):
        p = f"{path}.atoms[{i}]"
        if not isinstance(entry, dict):
            raise ValueError(f"{p}: expected an object")
        if "point" not in entry or "mass" not in entry:
            raise ValueError(f"{p}: needs 'point' and 'mass'")
        atoms.append(Atom(_expect_point(entry["point"], d, f"{p}.point"),
                          _expect_number(entry["mass"], f"{p}.mass", positive=True)))
    spheres = []
    for i, entry in enumerate(data.get("spheres", []) or []):
        p = f"{path}.spheres[{i}]"
        if not isinstance(entry, dict):
            raise ValueError(f"{p}: expected an object")
        for fieldname in ("center", "radius", "mass"):
            if fieldname not in entry:
                raise ValueError(f"{p}: needs '{fieldname}'")
        spheres.append(SphereShell(
            _expect_point(entry["center"], d, f"{p}.center"),
            _expect_number(entry["radius"], f"{p}.radius", positive=True),
            _expect_number(entry["mass"], f"{p}.mass", positive=True)))
    radial = []
    for i, entry in enumerate(data.get("radial", []) or []):
        p = f"{path}.radial[{i}]"
        if not isinstance(entry, dict):
            raise ValueError(f"{p}: expected an object")
        for fieldname in ("center", "coeffs", "outer"):
            if fieldname not in entry:
                raise ValueError(f"{p}: needs '{fieldname}'")
        coeffs = entry["coeffs"]
        if not isinstance(coeffs, (list, tuple)) or not coeffs:
            raise ValueError(f"{p}.coeffs: expected a nonempty list of numbers")
        coeffs = [_expect_number(c, f"{p}.coeffs[{j}]") for j, c in enumerate(coeffs)]
        try:
            comp = RadialDensity.from_polynomial(
                _expect_point(entry["center"], d, f"{p}.center"),
                coeffs, _expect_number(entry["outer"], f"{p}.outer", positive=True))
        except ValueError as exc:
            raise ValueError(f"{p}: {exc}") from None
        radial.append(comp)
    try:
        return Measure(d, tuple(atoms), tuple(spheres), tuple(radial))
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
