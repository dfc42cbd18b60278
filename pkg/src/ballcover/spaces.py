"""Geometry of finite-dimensional lp spaces.

Norms, norming functionals, power-type smoothness majorants, the step-size
equation a*mu = 4*omega(2a), and seeded sampling of lp spheres and balls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LpSpace",
    "SmoothnessMajorant",
    "DualVector",
    "norm",
    "norms",
    "norming_functional",
    "norming_coords",
    "smoothness_majorant_for",
    "smoothness_upper_bound",
    "solve_step_size",
    "solve_step_size_bisect",
    "sample_sphere",
    "sample_ball",
    "sphere_from_rng",
    "ball_from_rng",
]


@dataclass(frozen=True)
class LpSpace:
    """R^d with the lp norm; p in (1, inf].

    p = inf is supported for norms, sampling and the cube-vertex arguments
    only; the smoothness machinery (norming functionals, majorants) rejects
    it since l_inf is not smooth.
    """

    d: int
    p: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.d}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "p", float(self.p))
        if not self.p > 1.0:
            raise ValueError(f"norm exponent must exceed 1, got {self.p}")

    @property
    def q(self) -> float:
        """Dual exponent: 1/p + 1/q = 1, with q = 1 for p = inf."""
        if math.isinf(self.p):
            return 1.0
        return self.p / (self.p - 1.0)

    @property
    def smooth(self) -> bool:
        """True when the space has unique norming functionals (p < inf)."""
        return math.isfinite(self.p)


def _check_vector(space: LpSpace, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (space.d,):
        raise ValueError(f"expected a vector of length {space.d}, got shape {x.shape}")
    return x


def norm(space: LpSpace, x) -> float:
    """lp norm of a single vector."""
    x = _check_vector(space, x)
    if math.isinf(space.p):
        return float(np.max(np.abs(x)))
    return float(np.linalg.norm(x, ord=space.p))


def norms(space: LpSpace, xs) -> np.ndarray:
    """Row-wise lp norms of an (n, d) array."""
    xs = np.asarray(xs, dtype=float)
    if math.isinf(space.p):
        return np.max(np.abs(xs), axis=1)
    return np.linalg.norm(xs, ord=space.p, axis=1)


@dataclass(frozen=True)
class DualVector:
    """Coordinates of a functional on an LpSpace; acts by the dot product."""

    coords: np.ndarray
    source_space: LpSpace

    def __call__(self, y) -> float:
        y = _check_vector(self.source_space, y)
        return float(self.coords @ y)

    @property
    def dual_norm(self) -> float:
        """lq norm of the coordinates, q dual to the source space's p."""
        q = self.source_space.q
        if q == 1.0:
            return float(np.sum(np.abs(self.coords)))
        return float(np.linalg.norm(self.coords, ord=q))


def norming_coords(space: LpSpace, xs) -> np.ndarray:
    """Row-wise norming-functional coordinates for nonzero rows of xs.

    For x in lp with 1 < p < inf the unique norming functional has
    coordinates sign(x_i) |x_i|^(p-1) / ||x||_p^(p-1); it has unit lq norm
    and attains F(x) = ||x||_p. Zero coordinates map to zero.
    """
    if not space.smooth:
        raise ValueError("norming functionals require p < inf")
    xs = np.asarray(xs, dtype=float)
    nrm = norms(space, xs)
    if np.any(nrm == 0.0):
        raise ValueError("norming functional of the zero vector is undefined")
    p = space.p
    return np.sign(xs) * np.abs(xs) ** (p - 1.0) / nrm[:, None] ** (p - 1.0)


def norming_functional(space: LpSpace, x) -> DualVector:
    """Unique norming functional of a nonzero vector, 1 < p < inf."""
    x = _check_vector(space, x)
    return DualVector(coords=norming_coords(space, x[None, :])[0], source_space=space)


@dataclass(frozen=True)
class SmoothnessMajorant:
    """Power majorant omega(u) = gamma * u**q_exp of a modulus of smoothness.

    omega(u)/u decreases to 0 as u -> 0, which holds automatically for
    q_exp > 1.
    """

    gamma: float
    q_exp: float

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise ValueError("gamma must be positive")
        if not 1.0 < self.q_exp <= 2.0:
            raise ValueError("power must lie in (1, 2]")

    def value(self, u: float) -> float:
        return self.gamma * float(u) ** self.q_exp


def smoothness_majorant_for(space: LpSpace) -> SmoothnessMajorant:
    """Power majorant of the lp modulus of smoothness.

    u**p / p for 1 < p < 2 and (p/2) u**2 for p >= 2 (the latter dominates
    the sharp (p-1)/2 coefficient).
    """
    p = space.p
    if not (1.0 < p < math.inf):
        raise ValueError(f"smoothness majorants require 1 < p < inf, got {p}")
    if p < 2.0:
        return SmoothnessMajorant(gamma=1.0 / p, q_exp=p)
    return SmoothnessMajorant(gamma=p / 2.0, q_exp=2.0)


def smoothness_upper_bound(x, y, u: float, space: LpSpace, majorant: SmoothnessMajorant) -> float:
    """Upper end of the smoothness sandwich for ||x + u y||.

    Returns ||x|| + u F_x(y) + 2 ||x|| omega(|u| ||y|| / ||x||). The norm
    ||x + u y|| lies between ||x|| + u F_x(y) and this value.
    """
    x = _check_vector(space, x)
    y = _check_vector(space, y)
    nx = norm(space, x)
    if nx == 0.0:
        raise ValueError("x must be nonzero")
    f = norming_functional(space, x)
    ny = norm(space, y)
    return nx + u * f(y) + 2.0 * nx * majorant.value(abs(u) * ny / nx)


def solve_step_size(majorant: SmoothnessMajorant, mu: float) -> float:
    """Positive root of a*mu = 4*omega(2a), capped at 1.

    For omega(u) = gamma u**q the root is (mu / (gamma 2**(q+2)))**(1/(q-1));
    roots above 1 (and parameters with no root) fall back to 1.
    """
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"mu must lie in (0, 1], got {mu}")
    g, q = majorant.gamma, majorant.q_exp
    a = (mu / (g * 2.0 ** (q + 2.0))) ** (1.0 / (q - 1.0))
    return min(a, 1.0)


def solve_step_size_bisect(omega, mu: float, iters: int = 200) -> float:
    """Bisection solver of 4*omega(2a) = a*mu on [1e-15, 1] for callable majorants.

    Agrees with the closed form for power majorants; returns 1.0 when the
    residual is still negative at a = 1 (no root at or below 1).
    """
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"mu must lie in (0, 1], got {mu}")

    def resid(a: float) -> float:
        return 4.0 * omega(2.0 * a) - a * mu

    lo, hi = 1e-15, 1.0
    if resid(hi) <= 0.0:
        return 1.0
    if resid(lo) >= 0.0:
        # root sits below the bracket; omega(u)/u has not vanished at this scale
        return lo
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if resid(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sphere_from_rng(space: LpSpace, n: int, rng: np.random.Generator) -> np.ndarray:
    """n rows distributed by cone measure on the unit lp sphere, drawn from rng.

    Coordinates are drawn with density proportional to exp(-|t|^p) (signed
    Gamma(1/p) variates raised to 1/p) and the rows normalized; for p = inf
    the rows are uniform on the cube scaled by their max modulus.
    """
    d, p = space.d, space.p
    if math.isinf(p):
        x = rng.uniform(-1.0, 1.0, size=(n, d))
        return x / np.max(np.abs(x), axis=1, keepdims=True)
    mag = rng.gamma(1.0 / p, 1.0, size=(n, d)) ** (1.0 / p)
    sgn = rng.integers(0, 2, size=(n, d)) * 2.0 - 1.0
    x = sgn * mag
    return x / np.linalg.norm(x, ord=p, axis=1, keepdims=True)


def ball_from_rng(space: LpSpace, n: int, rng: np.random.Generator) -> np.ndarray:
    """n rows uniform in the closed unit lp ball, drawn from rng."""
    x = sphere_from_rng(space, n, rng)
    radii = rng.uniform(0.0, 1.0, size=(n, 1)) ** (1.0 / space.d)
    return x * radii


def sample_sphere(space: LpSpace, n: int, seed: int) -> np.ndarray:
    """Deterministic (n, d) sample of unit-norm vectors; see sphere_from_rng."""
    if n < 1:
        raise ValueError("need at least one sample")
    return sphere_from_rng(space, n, np.random.default_rng(seed))


def sample_ball(space: LpSpace, n: int, seed: int) -> np.ndarray:
    """Deterministic (n, d) sample uniform in the closed unit ball."""
    if n < 1:
        raise ValueError("need at least one sample")
    return ball_from_rng(space, n, np.random.default_rng(seed))
