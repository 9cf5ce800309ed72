"""Dimension-dependent constants and kernel functions used across the package.

Legitimately infinite values (for example ``kappa(0) == -inf``) are returned
as IEEE infinities rather than raised as errors.  Downstream code is written
so that a finite result is never fabricated from an infinite operand.
"""

from __future__ import annotations

import math

import numpy as np

# Relative tolerance for floating comparisons against geometric boundary
# conditions such as |y| = R or "atom on the rim of a closed ball".
BOUNDARY_RTOL = 1e-12


def validate_dimension(d) -> int:
    """Check that d is an integer dimension >= 2 and return it as an int."""
    if isinstance(d, bool) or int(d) != d:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")
    d = int(d)
    if d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d}")
    return d


def as_point(x, d: int) -> np.ndarray:
    """Coerce x to a float vector of length d."""
    p = np.asarray(x, dtype=float)
    if p.shape != (d,):
        raise ValueError(f"expected a point in R^{d}, got shape {p.shape}")
    return p


def kappa(t, d: int):
    """Fundamental-solution profile: ln t for d = 2, -1 / t**(d-2) for d > 2.

    Strictly increasing and continuous on (0, inf), with kappa(0) = -inf.
    Accepts scalars or numpy arrays; negative arguments are rejected.
    """
    d = validate_dimension(d)
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("kappa is defined for nonnegative arguments only")
    with np.errstate(divide="ignore"):
        out = np.log(arr) if d == 2 else -np.power(arr, float(2 - d))
    if arr.ndim == 0:
        return float(out)
    return out


def hat_d(d: int) -> int:
    """The constant max{1, d - 2} attached to dimension d."""
    d = validate_dimension(d)
    return max(1, d - 2)


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere in R^d: 2 * pi**(d/2) / Gamma(d/2).

    d=2 -> 2*pi, d=3 -> 4*pi, d=4 -> 2*pi**2.  The d=4 value is sometimes
    misquoted in print as pi**2; the Gamma formula is authoritative here.
    """
    d = validate_dimension(d)
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def poisson_kernel(x, y, R: float, d: int, *, boundary_rtol: float = BOUNDARY_RTOL) -> float:
    """Poisson kernel of the ball B(0, R): (R^2 - |x|^2) / (s_{d-1} R |y - x|^d).

    Requires |x| < R and |y| = R (within ``boundary_rtol`` relative
    tolerance).  Integrating the kernel over the sphere |y| = R against
    surface measure gives 1 for every interior x.
    """
    d = validate_dimension(d)
    if R <= 0:
        raise ValueError("poisson_kernel: R must be positive")
    x = as_point(x, d)
    y = as_point(y, d)
    nx = float(np.linalg.norm(x))
    if nx >= R:
        raise ValueError("poisson_kernel: x must lie strictly inside the ball")
    if abs(float(np.linalg.norm(y)) - R) > boundary_rtol * R:
        raise ValueError("poisson_kernel: y must lie on the sphere |y| = R")
    dist = float(np.linalg.norm(y - x))
    if dist == 0.0:
        raise ValueError("poisson_kernel: degenerate configuration y == x")
    return (R * R - nx * nx) / (sphere_area(d) * R * dist ** d)


def green_ball(x, y, R: float, d: int, *, boundary_rtol: float = BOUNDARY_RTOL) -> float:
    """Green function of the ball B(0, R).

    Returns kappa of the reflected distance minus kappa(|y - x|), where the
    squared reflected distance is the symmetric expression
    R^2 - 2<x, y> + (|x| |y| / R)^2.  That expression also covers the y = 0
    limit (reflected distance R).  The value is nonnegative inside the ball,
    zero for |y| = R, and +inf at x == y.
    """
    d = validate_dimension(d)
    if R <= 0:
        raise ValueError("green_ball: R must be positive")
    x = as_point(x, d)
    y = as_point(y, d)
    nx = float(np.linalg.norm(x))
    ny = float(np.linalg.norm(y))
    if nx >= R:
        raise ValueError("green_ball: x must lie strictly inside the ball")
    if ny > R * (1.0 + boundary_rtol):
        raise ValueError("green_ball: y must lie in the closed ball |y| <= R")
    refl2 = R * R - 2.0 * float(np.dot(x, y)) + (nx * ny / R) ** 2
    refl = math.sqrt(max(refl2, 0.0))
    dist = float(np.linalg.norm(y - x))
    g = kappa(refl, d) - kappa(dist, d)
    # Analytically g >= 0; tiny negatives near |y| = R are roundoff.
    return g if g > 0.0 else 0.0


def constant_A(r: float, R: float, d: int) -> float:
    """The bound constant 5 * max{1,d-2} * ((R+r)/(R-r))**(d-1) * max{1,(R-r)**(d-2)}.

    For d = 2 this reduces to 5 (R + r) / (R - r).
    """
    d = validate_dimension(d)
    if not (0.0 < r < R):
        raise ValueError("constant_A: invalid geometry, need 0 < r < R")
    return (
        5.0
        * hat_d(d)
        * ((R + r) / (R - r)) ** (d - 1)
        * max(1.0, (R - r) ** (d - 2))
    )
