"""Rotationally symmetric static asymptotically flat manifolds.

The ambient metrics handled by the whole package have the warped form

    g = V(r)^-1 dr^2 + r^2 * (round metric on the unit (n-1)-sphere)

on a radial domain (r_min, r_max], with V > 0 there and V -> 1 at the
asymptotically flat end.  The Schwarzschild family V = 1 - 2m r^(2-n)
is the closed-form backbone (it is the only static member of this
symmetry class); arbitrary V profiles are accepted as diagnostics and
negative controls.

This module owns the metric-side quantities that feed every other
module: scalar curvature, the static-equation and harmonicity residuals
of a candidate weight function f, and the two independent routes to the
ADM mass (flux integral and asymptotic tail fit).

Dimension convention: n is the manifold dimension, hypersurfaces are
(n-1)-dimensional, and 3 <= n <= 7 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import mpmath
import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import bisect

from .errors import DomainError, FitQualityError

__all__ = [
    "RadialProfile",
    "ManifoldSpec",
    "StaticPotential",
    "unit_sphere_area",
    "scalar_curvature",
    "static_residual",
    "harmonicity_residual",
    "adm_mass_flux",
    "adm_mass_fit",
    "horizon_radius",
    "sqrt_potential",
    "constant_potential",
    "profile_weight",
    "sampled_potential",
    "rescale_to_unit",
]


def _sqrt(x):
    """Square root that also accepts mpmath scalars (numpy chokes on them)."""
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return mpmath.sqrt(x)
    return np.sqrt(x)


def _maybe_item(x):
    """Collapse 0-d numpy results back to python floats."""
    arr = np.asarray(x)
    return arr.item() if arr.ndim == 0 else arr


def unit_sphere_area(k: int) -> float:
    """Area of the unit k-sphere, 2 pi^((k+1)/2) / Gamma((k+1)/2)."""
    if k < 1:
        raise DomainError(f"unit sphere area needs k >= 1, got {k}")
    return 2.0 * math.pi ** ((k + 1) / 2) / math.gamma((k + 1) / 2)


@dataclass(frozen=True)
class RadialProfile:
    """A metric profile V(r) with first and second derivatives.

    ``mp_safe`` marks closed forms built from plain arithmetic that also
    evaluate correctly on mpmath scalars; the extended-precision sphere
    diagnostics in :mod:`imcflab.quantities` require it.
    """

    value: Callable
    deriv: Callable
    deriv2: Callable
    kind: str = "callable"
    params: dict = field(default_factory=dict)
    mp_safe: bool = False
    support: tuple[float, float] | None = None  # sampled profiles only

    @classmethod
    def schwarzschild(cls, n: int, m: float) -> "RadialProfile":
        """V = 1 - 2m r^(2-n), exact for every real m."""
        a, b = 2.0 - n, 1.0 - n

        def v(r):
            return 1.0 - 2.0 * m * r**a

        def dv(r):
            return 2.0 * m * (n - 2.0) * r**b

        def d2v(r):
            return -2.0 * m * (n - 2.0) * (n - 1.0) * r ** (-float(n))

        return cls(v, dv, d2v, kind="schwarzschild", params={"n": n, "m": m},
                   mp_safe=True)

    @classmethod
    def flat(cls) -> "RadialProfile":
        return cls(lambda r: r * 0.0 + 1.0, lambda r: r * 0.0,
                   lambda r: r * 0.0, kind="flat", params={"m": 0.0},
                   mp_safe=True)

    @classmethod
    def from_callable(cls, v: Callable, dv: Callable | None = None,
                      d2v: Callable | None = None, mp_safe: bool = False) -> "RadialProfile":
        """Wrap a plain V(r); missing derivatives fall back to central
        finite differences (steps balanced for O(h^2) truncation)."""
        if dv is None:
            def dv(r, _v=v):
                h = 6.0e-6 * (1.0 + np.abs(r))
                return (_v(r + h) - _v(r - h)) / (2.0 * h)
            mp_safe = False
        if d2v is None:
            def d2v(r, _v=v):
                h = 1.2e-4 * (1.0 + np.abs(r))
                return (_v(r + h) - 2.0 * _v(r) + _v(r - h)) / h**2
            mp_safe = False
        return cls(v, dv, d2v, kind="callable", mp_safe=mp_safe)

    @classmethod
    def from_samples(cls, r: np.ndarray, v: np.ndarray) -> "RadialProfile":
        """Cubic-spline interpolant of tabulated (r, V) pairs."""
        r = np.asarray(r, dtype=float)
        v = np.asarray(v, dtype=float)
        if r.ndim != 1 or r.shape != v.shape or r.size < 4:
            raise ValueError("need matching 1-d arrays with at least 4 samples")
        if np.any(np.diff(r) <= 0):
            raise ValueError("sample radii must be strictly increasing")
        spl = CubicSpline(r, v)
        return cls(spl, spl.derivative(1), spl.derivative(2), kind="sampled",
                   support=(float(r[0]), float(r[-1])))


@dataclass(frozen=True)
class ManifoldSpec:
    """An n-dimensional warped-product manifold V^-1 dr^2 + r^2 dOmega^2.

    ``r_min`` is the horizon radius for positive-mass Schwarzschild and a
    configured cutoff otherwise; the working domain is (r_min, r_max].
    """

    n: int
    profile: RadialProfile
    mass_param: float | None
    r_min: float
    r_max: float

    def __post_init__(self):
        if not (3 <= self.n <= 7):
            raise ValueError(f"dimension must satisfy 3 <= n <= 7, got {self.n}")
        if not (0.0 <= self.r_min < self.r_max):
            raise ValueError(f"need 0 <= r_min < r_max, got [{self.r_min}, {self.r_max}]")
        probes = np.geomspace(self.r_min * 1.0001 + 1e-12, self.r_max, 8)
        vals = np.asarray(self.profile.value(probes), dtype=float)
        if not np.all(vals > 0.0):
            bad = probes[vals <= 0.0][0]
            raise ValueError(f"profile not positive on domain (V({bad:g}) <= 0)")

    @classmethod
    def schwarzschild(cls, n: int, m: float, r_max: float = 1000.0,
                      r_min_floor: float = 0.1) -> "ManifoldSpec":
        profile = RadialProfile.schwarzschild(n, m)
        r_min = (2.0 * m) ** (1.0 / (n - 2)) if m > 0 else r_min_floor
        return cls(n=n, profile=profile, mass_param=float(m),
                   r_min=r_min, r_max=float(r_max))

    @classmethod
    def flat(cls, n: int = 3, r_max: float = 1000.0, r_min: float = 0.1) -> "ManifoldSpec":
        return cls(n=n, profile=RadialProfile.flat(), mass_param=0.0,
                   r_min=float(r_min), r_max=float(r_max))

    @classmethod
    def custom(cls, profile: RadialProfile, n: int, r_min: float = 0.1,
               r_max: float = 1000.0) -> "ManifoldSpec":
        if profile.support is not None:
            lo, hi = profile.support
            r_min, r_max = max(r_min, lo), min(r_max, hi)
        return cls(n=n, profile=profile, mass_param=None,
                   r_min=float(r_min), r_max=float(r_max))

    def require_in_domain(self, r) -> None:
        r = np.asarray(r)
        if np.any(r <= self.r_min) or np.any(r > self.r_max):
            raise DomainError(
                f"radius {np.min(r):g}..{np.max(r):g} outside domain "
                f"({self.r_min:g}, {self.r_max:g}]")


@dataclass(frozen=True)
class StaticPotential:
    """A candidate weight f(r) >= 0 with derivatives.

    Only the square root of a Schwarzschild profile actually solves the
    static equation; other weights are carried with the same interface so
    the diagnostics and negative controls run through identical code.
    """

    kind: str  # "closed-form" or "sampled"
    value: Callable
    deriv: Callable
    deriv2: Callable
    asymptotic_to_one: bool = True
    mp_safe: bool = False


def sqrt_potential(spec: ManifoldSpec) -> StaticPotential:
    """f = sqrt(V), the static potential of the Schwarzschild family.

    For a generic profile this is merely a candidate weight; feed it to
    :func:`static_residual` to find out whether it qualifies.
    """
    p = spec.profile

    def f(r):
        return _sqrt(p.value(r))

    def df(r):
        return p.deriv(r) / (2.0 * _sqrt(p.value(r)))

    def d2f(r):
        v = p.value(r)
        s = _sqrt(v)
        return p.deriv2(r) / (2.0 * s) - p.deriv(r) ** 2 / (4.0 * v * s)

    return StaticPotential(kind="closed-form", value=f, deriv=df, deriv2=d2f,
                           asymptotic_to_one=True, mp_safe=p.mp_safe)


def constant_potential(c: float = 1.0) -> StaticPotential:
    """f identically c; the flat-space potential when c = 1."""
    return StaticPotential(kind="closed-form",
                           value=lambda r: r * 0.0 + c,
                           deriv=lambda r: r * 0.0,
                           deriv2=lambda r: r * 0.0,
                           asymptotic_to_one=(c == 1.0), mp_safe=True)


def profile_weight(spec: ManifoldSpec) -> StaticPotential:
    """The non-static control weight f = V itself (instead of sqrt(V)).

    Asymptotes to 1 like a rescaled potential but violates the static
    equation everywhere V is not constant, which is exactly what the
    monotonicity negative controls need.
    """
    p = spec.profile
    return StaticPotential(kind="closed-form", value=p.value, deriv=p.deriv,
                           deriv2=p.deriv2, asymptotic_to_one=True,
                           mp_safe=p.mp_safe)


def sampled_potential(r: np.ndarray, f: np.ndarray,
                      asymptotic_to_one: bool = True) -> StaticPotential:
    """Cubic-spline potential from tabulated (r, f) pairs."""
    r = np.asarray(r, dtype=float)
    f = np.asarray(f, dtype=float)
    if r.ndim != 1 or r.shape != f.shape or r.size < 4:
        raise ValueError("need matching 1-d arrays with at least 4 samples")
    if np.any(np.diff(r) <= 0):
        raise ValueError("sample radii must be strictly increasing")
    spl = CubicSpline(r, f)
    return StaticPotential(kind="sampled", value=spl, deriv=spl.derivative(1),
                           deriv2=spl.derivative(2),
                           asymptotic_to_one=asymptotic_to_one)


def scalar_curvature(spec: ManifoldSpec, r):
    """Scalar curvature R(r) = (n-1) [ (n-2)(1-V)/r^2 - V'/r ].

    Vanishes identically for the Schwarzschild family, which is the
    scalar-flatness every static asymptotically flat metric must satisfy.
    """
    spec.require_in_domain(r)
    n = spec.n
    r = np.asarray(r, dtype=float)
    v = spec.profile.value(r)
    dv = spec.profile.deriv(r)
    return _maybe_item((n - 1) * ((n - 2) * (1.0 - v) / r**2 - dv / r))


def static_residual(spec: ManifoldSpec, f: StaticPotential, r):
    """Orthonormal-frame components of  Lap(f) g - Hess(f) + f Ric.

    Returns the pair (radial-radial, tangential-tangential); by rotational
    symmetry these are the only independent components, and both vanish at
    r exactly when f is static there.  Closed forms (verified against a
    symbolic Christoffel/Ricci computation):

        S_rr = (n-1)/r * ( V f' - f V'/2 )
        S_tt = V f'' + V'f'/2 + (n-2) V f'/r - f V'/(2r) + (n-2) f (1-V)/r^2
    """
    spec.require_in_domain(r)
    n = spec.n
    r = np.asarray(r, dtype=float)
    v = spec.profile.value(r)
    dv = spec.profile.deriv(r)
    fv = f.value(r)
    dfv = f.deriv(r)
    d2fv = f.deriv2(r)
    s_rr = (n - 1) / r * (v * dfv - fv * dv / 2.0)
    s_tt = (v * d2fv + dv * dfv / 2.0 + (n - 2) * v * dfv / r
            - fv * dv / (2.0 * r) + (n - 2) * fv * (1.0 - v) / r**2)
    return _maybe_item(s_rr), _maybe_item(s_tt)


def harmonicity_residual(spec: ManifoldSpec, f: StaticPotential, r):
    """Laplacian of the radial weight, V f'' + (V'/2 + (n-1)V/r) f'.

    A static potential on a scalar-flat manifold is harmonic, so this is
    the cheapest single-number staticity diagnostic.
    """
    spec.require_in_domain(r)
    n = spec.n
    r = np.asarray(r, dtype=float)
    v = spec.profile.value(r)
    dv = spec.profile.deriv(r)
    return _maybe_item(v * f.deriv2(r) + (dv / 2.0 + (n - 1) * v / r) * f.deriv(r))


def adm_mass_flux(spec: ManifoldSpec, f: StaticPotential, r):
    """Mass from the normal-derivative flux of f through the sphere at r.

    The integrand is constant on coordinate spheres, so the surface integral
    collapses to sqrt(V) f'(r) r^(n-1) and the normalization 1/((n-2) omega)
    makes the result equal the ADM mass, independent of r, whenever f is
    static.
    """
    spec.require_in_domain(r)
    n = spec.n
    r = np.asarray(r, dtype=float)
    v = spec.profile.value(r)
    return _maybe_item(_sqrt(v) * f.deriv(r) * r ** (n - 1) / (n - 2))


def adm_mass_fit(spec: ManifoldSpec, f: StaticPotential,
                 tail: tuple[float, float] = (100.0, 1000.0),
                 num: int = 64) -> float:
    """Mass from a least-squares fit of f ~ 1 - m r^(2-n) on a far tail.

    The tail must hold at least 10 sample radii inside the domain and f must
    already be close to 1 there (rescale first if it is not); otherwise a
    :class:`FitQualityError` with a residual report is raised.
    """
    lo, hi = float(tail[0]), float(tail[1])
    if not (spec.r_min < lo < hi <= spec.r_max):
        raise FitQualityError(
            f"tail [{lo:g}, {hi:g}] not inside domain ({spec.r_min:g}, {spec.r_max:g}]")
    if num < 10:
        raise FitQualityError(f"tail needs at least 10 sample radii, got {num}")
    rs = np.geomspace(lo, hi, num)
    fv = np.asarray(f.value(rs), dtype=float)
    dev = np.abs(fv - 1.0)
    if dev.max() > 0.5:
        raise FitQualityError(
            "potential is not near 1 on the tail; rescale before fitting",
            report={"max_abs_dev": float(dev.max()), "tail": (lo, hi)})
    basis = rs ** (2.0 - spec.n)
    m_hat = float(np.dot(1.0 - fv, basis) / np.dot(basis, basis))
    resid = (1.0 - fv) - m_hat * basis
    signal = np.linalg.norm(1.0 - fv)
    if signal > 1e-13 and np.linalg.norm(resid) > 0.1 * signal:
        raise FitQualityError(
            "tail fit residual too large for the 1 - m r^(2-n) model",
            report={"m_hat": m_hat,
                    "relative_residual": float(np.linalg.norm(resid) / signal),
                    "tail": (lo, hi)})
    return m_hat


def rescale_to_unit(spec: ManifoldSpec, f: StaticPotential,
                    tail: tuple[float, float] = (100.0, 1000.0),
                    num: int = 64) -> StaticPotential:
    """Divide f by its fitted asymptotic constant so it tends to 1.

    Fits f ~ c - b r^(2-n) on the tail and returns f/c.  Mass extraction
    assumes this normalization, so custom weights go through here first.
    """
    lo, hi = float(tail[0]), float(tail[1])
    if not (spec.r_min < lo < hi <= spec.r_max):
        raise FitQualityError(
            f"tail [{lo:g}, {hi:g}] not inside domain ({spec.r_min:g}, {spec.r_max:g}]")
    rs = np.geomspace(lo, hi, max(num, 10))
    fv = np.asarray(f.value(rs), dtype=float)
    A = np.column_stack([np.ones_like(rs), rs ** (2.0 - spec.n)])
    (c, _b), *_ = np.linalg.lstsq(A, fv, rcond=None)
    if not np.isfinite(c) or abs(c) < 1e-12:
        raise FitQualityError("cannot rescale: fitted asymptotic constant is ~0",
                              report={"constant": float(c)})
    c = float(c)
    return StaticPotential(kind=f.kind,
                           value=lambda r: f.value(r) / c,
                           deriv=lambda r: f.deriv(r) / c,
                           deriv2=lambda r: f.deriv2(r) / c,
                           asymptotic_to_one=True, mp_safe=f.mp_safe)


def horizon_radius(spec: ManifoldSpec, xtol: float = 1e-12) -> float | None:
    """Smallest root of V(r) = 0 below r_max, or None when V stays positive.

    Brackets by scanning a log grid from the inner end of the profile's
    support and refines by bisection to ``xtol``; absence of a horizon
    (e.g. nonpositive-mass Schwarzschild) is a normal result, not an error.
    """
    lo = 1e-8
    if spec.profile.support is not None:
        lo = max(lo, spec.profile.support[0])
    grid = np.geomspace(lo, spec.r_max, 512)
    vals = np.asarray(spec.profile.value(grid), dtype=float)
    if vals[0] == 0.0:
        return float(grid[0])
    sign_change = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0.0)[0]
    if sign_change.size == 0:
        return None
    i = int(sign_change[0])
    if vals[i] == 0.0:
        return float(grid[i])
    return float(bisect(spec.profile.value, grid[i], grid[i + 1], xtol=xtol))
