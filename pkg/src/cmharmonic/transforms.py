"""Cauchy-Stieltjes transforms of probability measures on [0, 1].

``F(z) = integral of 1/(1 - t z) d mu(t)`` extends analytically to the slit
plane (the complex plane minus the ray [1, oo)); the shifted variant
``z F(z)`` fixes the origin with unit derivative.  Evaluations reject points
within 1e-12 of the slit, where the kernel blows up and quadrature is
meaningless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measures import Measure
from .quadrature import QuadratureError

__all__ = [
    "SLIT_MARGIN",
    "SlitDomainError",
    "slit_distance",
    "ExtendedReal",
    "GridSpec",
    "CauchyTransform",
    "ShiftedCauchyTransform",
    "MembershipReport",
    "check_membership",
]

SLIT_MARGIN = 1e-12

# limit_at_one cutoff schedule: integrate on [0, 1-delta] with delta halving
DELTA_START = 1e-2
DELTA_STOP = 1e-8
DIVERGENCE_THRESHOLD = 1e12


class SlitDomainError(ValueError):
    """Evaluation point on or too near the ray [1, oo)."""


def slit_distance(z):
    z = complex(z)
    if z.real >= 1.0:
        return abs(z.imag)
    return abs(z - 1.0)


def _check_slit(z):
    if slit_distance(z) < SLIT_MARGIN:
        raise SlitDomainError(f"point {z!r} within {SLIT_MARGIN:g} of the slit [1, oo)")


def _check_slit_array(flat):
    dist = np.where(flat.real >= 1.0, np.abs(flat.imag), np.abs(flat - 1.0))
    bad = dist < SLIT_MARGIN
    if np.any(bad):
        z = flat[int(np.argmax(bad))]
        raise SlitDomainError(f"point {z!r} within {SLIT_MARGIN:g} of the slit [1, oo)")


@dataclass(frozen=True)
class ExtendedReal:
    """Finite real value or a +infinity marker.

    ``inconclusive`` flags the case where cutoff refinement could not
    separate slow convergence from divergence and the value was resolved
    to +infinity by policy.
    """

    value: float
    inconclusive: bool = False

    @property
    def is_finite(self):
        return math.isfinite(self.value)

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        if self.is_finite:
            return f"ExtendedReal({self.value!r})"
        tag = ", inconclusive" if self.inconclusive else ""
        return f"ExtendedReal(+inf{tag})"


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grids at desk scale.

    Disk sweeps use a polar grid; half-plane sweeps use a rectangle in the
    open upper quadrant of {Re z < 1} plus a sample of the real ray.  The
    default outer radius 0.98 keeps sup estimates for dilatations within a
    couple of percent of their boundary limits.
    """

    rmin: float = 0.1
    rmax: float = 0.98
    nr: int = 12
    ntheta: int = 64
    xmin: float = -3.0
    xmax: float = 0.99
    ymin: float = 0.01
    ymax: float = 3.0
    nx: int = 100
    ny: int = 100

    def __post_init__(self):
        if not (0.0 < self.rmin <= self.rmax < 1.0):
            raise ValueError("disk radii must satisfy 0 < rmin <= rmax < 1")
        if min(self.nr, self.ntheta, self.nx, self.ny) < 2:
            raise ValueError("grid counts must be at least 2")
        if not self.xmax < 1.0:
            raise ValueError("half-plane rectangle must stay left of Re z = 1")

    def disk_points(self):
        r = np.linspace(self.rmin, self.rmax, self.nr)
        theta = 2.0 * np.pi * np.arange(self.ntheta) / self.ntheta
        z = r[:, None] * np.exp(1j * theta[None, :])
        return z.ravel()

    def rect_points(self):
        x = np.linspace(self.xmin, self.xmax, self.nx)
        y = np.linspace(self.ymin, self.ymax, self.ny)
        return (x[:, None] + 1j * y[None, :]).ravel()

    def real_ray(self):
        return np.linspace(self.xmin, self.xmax, self.nx)

    def t_samples(self, nt=11):
        return np.linspace(0.0, 1.0, nt)


def _chunked(zs, block=2048):
    for i in range(0, len(zs), block):
        yield slice(i, i + block)


@dataclass(frozen=True)
class CauchyTransform:
    """Transform ``F(z)`` of a normalized measure; ``F(0) = 1``."""

    mu: Measure

    def __post_init__(self):
        if abs(self.mu.mass - 1.0) > 1e-10:
            raise ValueError(
                f"transform needs a probability measure; mass is {self.mu.mass!r}"
            )

    # -- pointwise ----------------------------------------------------------

    def eval(self, z, tol=1e-10):
        """Value at a single point of the slit plane (adaptive quadrature)."""
        z = complex(z)
        _check_slit(z)
        val = self.mu.integrate(lambda t: 1.0 / (1.0 - t * z), tol=tol)
        return complex(val)

    __call__ = eval

    def values(self, zs):
        """Vectorized values on an array of slit-plane points (fixed rule)."""
        zs = np.asarray(zs, dtype=complex)
        flat = zs.ravel()
        _check_slit_array(flat)
        t, w = self.mu._rule
        out = np.empty(flat.shape, dtype=complex)
        for sl in _chunked(flat):
            out[sl] = (1.0 / (1.0 - t[None, :] * flat[sl, None])) @ w
        return out.reshape(zs.shape)

    def series_eval(self, z, terms=300):
        """Truncated moment series; cross-check path for |z| well inside 1."""
        z = complex(z)
        coef = self.mu.moments(terms)
        return complex(np.polynomial.polynomial.polyval(z, coef))

    def moments(self, count):
        return self.mu.moments(count)

    # -- boundary behavior ----------------------------------------------------

    def limit_at_one(self):
        """Limit of F(x) as x -> 1-, possibly +infinity.

        Atoms contribute ``w/(1-t)`` exactly and an atom at t = 1 forces
        +infinity.  The density part is integrated on [0, 1-delta] with
        delta halving from 1e-2 to 1e-8; the value resolves to +infinity
        when it crosses 1e12 or when the increments refuse to contract.
        """
        atom_sum = 0.0
        for a in self.mu.atoms:
            if a.t > 1.0 - 1e-12:
                return ExtendedReal(math.inf)
            atom_sum += a.w / (1.0 - a.t)
        if not self.mu.densities:
            return ExtendedReal(atom_sum)

        prev = None
        prev_inc = None
        delta = DELTA_START
        while True:
            try:
                cur = self.mu.integrate_below(
                    lambda t: 1.0 / (1.0 - t), 1.0 - delta, tol=1e-11
                ).real
            except QuadratureError as exc:
                cur = float(np.real(exc.estimate))
            if atom_sum + cur > DIVERGENCE_THRESHOLD:
                return ExtendedReal(math.inf)
            if prev is not None:
                inc = cur - prev
                if abs(inc) <= 1e-10 * max(1.0, abs(cur)):
                    return ExtendedReal(atom_sum + cur)
                prev_inc = prev_inc if prev_inc is not None else inc
                ratio = abs(inc) / max(abs(prev_inc), 1e-300)
                prev_inc = inc
                if delta <= DELTA_STOP:
                    if ratio >= 0.9:
                        return ExtendedReal(math.inf, inconclusive=True)
                    # geometric tail estimate from the contraction ratio
                    return ExtendedReal(atom_sum + cur + inc * ratio / (1.0 - ratio))
            prev = cur
            if delta <= DELTA_STOP:
                # increments vanished before the schedule ran out
                return ExtendedReal(atom_sum + cur)
            delta *= 0.5

    def real_part_floor(self, tol=1e-11):
        """The lower bound ``integral of 1/(1+t) d mu`` for Re F on the disk."""
        return float(self.mu.integrate(lambda t: 1.0 / (1.0 + t), tol=tol).real)


@dataclass(frozen=True)
class ShiftedCauchyTransform:
    """Shifted transform ``h(z) = z F(z)``; fixes 0, h'(0) = 1."""

    base: CauchyTransform

    @classmethod
    def from_measure(cls, mu):
        return cls(CauchyTransform(mu))

    @property
    def mu(self):
        return self.base.mu

    def value(self, z, tol=1e-10):
        z = complex(z)
        if z == 0:
            return 0.0 + 0.0j
        return z * self.base.eval(z, tol=tol)

    __call__ = value

    def values(self, zs):
        zs = np.asarray(zs, dtype=complex)
        return zs * self.base.values(zs)

    def deriv(self, z, tol=1e-10):
        """h'(z) by quadrature of the squared kernel (never finite differences)."""
        z = complex(z)
        _check_slit(z)
        return complex(self.mu.integrate(lambda t: (1.0 - t * z) ** -2.0, tol=tol))

    def deriv2(self, z, tol=1e-10):
        z = complex(z)
        _check_slit(z)
        return complex(self.mu.integrate(lambda t: 2.0 * t * (1.0 - t * z) ** -3.0, tol=tol))

    def derivs(self, zs):
        zs = np.asarray(zs, dtype=complex)
        flat = zs.ravel()
        _check_slit_array(flat)
        t, w = self.mu._rule
        out = np.empty(flat.shape, dtype=complex)
        for sl in _chunked(flat):
            out[sl] = ((1.0 - t[None, :] * flat[sl, None]) ** -2.0) @ w
        return out.reshape(zs.shape)

    def deriv2s(self, zs):
        zs = np.asarray(zs, dtype=complex)
        flat = zs.ravel()
        _check_slit_array(flat)
        t, w = self.mu._rule
        tw = t * w
        out = np.empty(flat.shape, dtype=complex)
        for sl in _chunked(flat):
            out[sl] = (2.0 * (1.0 - t[None, :] * flat[sl, None]) ** -3.0) @ tw
        return out.reshape(zs.shape)

    def coeffs(self, count):
        """Power-series coefficients: entry n multiplies z**(n+1)."""
        return self.mu.moments(count)


# -- membership diagnostics ---------------------------------------------------


@dataclass(frozen=True)
class MembershipReport:
    """Numerical evidence for membership in the transform class.

    The three probes: the value at 0 should be 1; values on the real ray
    below 1 should be real and nonnegative; the imaginary part should be
    nonnegative on the upper half-plane.  Holomorphy of a black-box
    function cannot be probed and is assumed.
    """

    consistent: bool
    f0_gap: float
    min_re_ray: float
    max_abs_im_ray: float
    min_im_upper: float
    skipped: int
    slack: float
    note: str = "holomorphy on the slit plane assumed, not checked"

    def to_dict(self):
        return {
            "consistent": self.consistent,
            "f0_gap": self.f0_gap,
            "min_re_ray": self.min_re_ray,
            "max_abs_im_ray": self.max_abs_im_ray,
            "min_im_upper": self.min_im_upper,
            "skipped": self.skipped,
            "slack": self.slack,
            "note": self.note,
        }


def _eval_grid(fn, pts):
    """Evaluate fn on points, vector call first, per-node fallback; count failures."""
    try:
        out = np.asarray(fn(pts), dtype=complex)
        if out.shape == pts.shape:
            return out, 0
    except Exception:
        pass
    vals = np.full(pts.shape, np.nan + 0j, dtype=complex)
    skipped = 0
    for i, z in enumerate(pts):
        try:
            vals[i] = complex(fn(z))
        except Exception:
            skipped += 1
    return vals, skipped


def check_membership(fn, grid=None, slack=1e-9):
    """Probe a function for transform-class consistency on the default grids.

    ``fn`` may be a :class:`CauchyTransform` or any callable on complex
    points (vectorized callables are used as such).  Failing nodes are
    skipped and counted.
    """
    grid = grid or GridSpec()
    if isinstance(fn, CauchyTransform):
        fn = fn.values

    upper, sk1 = _eval_grid(fn, grid.rect_points())
    ray, sk2 = _eval_grid(fn, grid.real_ray().astype(complex))
    f0, sk0 = _eval_grid(fn, np.zeros(1, dtype=complex))

    skipped = sk0 + sk1 + sk2
    f0_gap = float(abs(f0[0] - 1.0)) if np.isfinite(f0[0]) else math.inf
    ray_ok = ray[np.isfinite(ray)]
    upper_ok = upper[np.isfinite(upper)]
    min_re_ray = float(np.min(ray_ok.real)) if ray_ok.size else math.inf
    max_abs_im_ray = float(np.max(np.abs(ray_ok.imag))) if ray_ok.size else 0.0
    min_im_upper = float(np.min(upper_ok.imag)) if upper_ok.size else math.inf

    consistent = (
        f0_gap <= slack
        and min_re_ray >= -slack
        and max_abs_im_ray <= slack
        and min_im_upper >= -slack
    )
    return MembershipReport(
        consistent=bool(consistent),
        f0_gap=f0_gap,
        min_re_ray=min_re_ray,
        max_abs_im_ray=max_abs_im_ray,
        min_im_upper=min_im_upper,
        skipped=skipped,
        slack=slack,
    )
