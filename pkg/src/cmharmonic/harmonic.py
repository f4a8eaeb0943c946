"""Harmonic mappings ``f = h + c * conj(g)`` with transform-class parts.

The analytic and co-analytic parts are shifted Cauchy-Stieltjes transforms
(or series/convolution stand-ins carrying the same evaluation surface), the
co-analytic one scaled by a constant of modulus below one.  This module
evaluates such maps, their dilatation ``c g'/h'`` and Jacobian, and issues
numerical quasiconformality certificates.

A grid certificate records a sup estimate over finitely many nodes; it is
evidence, never a proof, since the supremum need not be attained inside the
disk.  Boundary-limit certificates instead check a closed-form sufficient
condition.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .measures import Measure, measure_from_dict, measure_to_dict, mix
from .quadrature import QuadratureError
from .transforms import (
    CauchyTransform,
    ExtendedReal,
    GridSpec,
    ShiftedCauchyTransform,
    check_membership,
)

__all__ = [
    "SingularDerivativeError",
    "SeriesPart",
    "ConvolutionPart",
    "HarmonicMap",
    "QCCertificate",
    "shifted",
    "map_from_dict",
    "map_to_dict",
    "load_map",
    "certify_qc_grid",
    "radial_limit",
    "check_modulus_bound",
    "ModulusBoundReport",
    "check_partial_signs",
    "PartialSignReport",
    "convolve",
    "convex_combination",
    "make_convolution_map",
    "derivative_ratio_sup",
    "harnack_ratio_bound",
    "HarnackReport",
    "density_ratio_condition",
    "DensityRatioVerdict",
    "derivative_quotient",
    "certify_qc_boundary_limit",
]

SINGULAR_TOL = 1e-13


class SingularDerivativeError(ArithmeticError):
    """|h'(z)| fell below the singularity guard; the dilatation is meaningless."""


def shifted(mu):
    """Shifted transform ``z F(z)`` of a probability measure."""
    return ShiftedCauchyTransform.from_measure(mu)


# -- alternative part representations ----------------------------------------


@dataclass(frozen=True, init=False)
class SeriesPart:
    """Truncated power series ``sum coefs[n] z**(n+1)``, usable for |z| <= radius.

    Convolution results carry coefficients instead of measures; nothing
    beyond the stored order is known, so requesting more coefficients than
    stored is an error rather than a silent zero-fill.
    """

    coefs: tuple
    radius: float

    def __init__(self, coefs, radius=0.95):
        coefs = tuple(float(c) for c in coefs)
        if not coefs:
            raise ValueError("series part needs at least one coefficient")
        object.__setattr__(self, "coefs", coefs)
        object.__setattr__(self, "radius", float(radius))

    def _guard(self, zs):
        if np.any(np.abs(zs) > self.radius + 1e-15):
            raise ValueError(f"series part only evaluable on |z| <= {self.radius}")

    def value(self, z, tol=None):
        z = complex(z)
        self._guard(np.asarray(z))
        return z * complex(np.polynomial.polynomial.polyval(z, self.coefs))

    __call__ = value

    def values(self, zs):
        zs = np.asarray(zs, dtype=complex)
        self._guard(zs)
        return zs * np.polynomial.polynomial.polyval(zs, np.asarray(self.coefs))

    def deriv(self, z, tol=None):
        z = complex(z)
        self._guard(np.asarray(z))
        dcoef = [(n + 1) * c for n, c in enumerate(self.coefs)]
        return complex(np.polynomial.polynomial.polyval(z, dcoef))

    def derivs(self, zs):
        zs = np.asarray(zs, dtype=complex)
        self._guard(zs)
        dcoef = np.asarray([(n + 1) * c for n, c in enumerate(self.coefs)])
        return np.polynomial.polynomial.polyval(zs, dcoef)

    def deriv2(self, z, tol=None):
        z = complex(z)
        self._guard(np.asarray(z))
        d2 = [(n + 1) * n * c for n, c in enumerate(self.coefs)][1:]
        if not d2:
            return 0.0 + 0.0j
        return complex(np.polynomial.polynomial.polyval(z, d2))

    def deriv2s(self, zs):
        zs = np.asarray(zs, dtype=complex)
        self._guard(zs)
        d2 = np.asarray([(n + 1) * n * c for n, c in enumerate(self.coefs)][1:] or [0.0])
        return np.polynomial.polynomial.polyval(zs, d2)

    def coeffs(self, count):
        if count > len(self.coefs):
            raise ValueError(
                f"only {len(self.coefs)} coefficients stored, {count} requested"
            )
        return np.asarray(self.coefs[:count])


@dataclass(frozen=True)
class ConvolutionPart:
    """Hadamard product of a shifted transform with a measure's generator.

    Evaluated through the identity that sends the product to an average of
    scaled copies: value(z) = integral of h(t z)/t d nu(t) with the t = 0
    integrand read as z, derivative = integral of h'(t z) d nu(t).
    """

    h: ShiftedCauchyTransform
    nu: Measure

    def __post_init__(self):
        if not isinstance(self.h, ShiftedCauchyTransform):
            raise TypeError("convolution part needs a measure-backed analytic part")
        if abs(self.nu.mass - 1.0) > 1e-10:
            raise ValueError("convolution factor must be a probability measure")

    def value(self, z, tol=None):
        z = complex(z)
        t, w = self.nu._rule
        return z * complex(self.h.base.values(t * z) @ w)

    __call__ = value

    def values(self, zs):
        zs = np.asarray(zs, dtype=complex)
        t, w = self.nu._rule
        flat = zs.ravel()
        out = np.empty(flat.shape, dtype=complex)
        for i in range(0, len(flat), 256):
            block = flat[i : i + 256]
            out[i : i + 256] = block * (self.h.base.values(np.outer(block, t)) @ w)
        return out.reshape(zs.shape)

    def deriv(self, z, tol=None):
        z = complex(z)
        t, w = self.nu._rule
        return complex(self.h.derivs(t * z) @ w)

    def derivs(self, zs):
        zs = np.asarray(zs, dtype=complex)
        t, w = self.nu._rule
        flat = zs.ravel()
        out = np.empty(flat.shape, dtype=complex)
        for i in range(0, len(flat), 256):
            block = flat[i : i + 256]
            out[i : i + 256] = self.h.derivs(np.outer(block, t)) @ w
        return out.reshape(zs.shape)

    def deriv2(self, z, tol=None):
        z = complex(z)
        t, w = self.nu._rule
        return complex(self.h.deriv2s(t * z) @ (t * w))

    def deriv2s(self, zs):
        zs = np.asarray(zs, dtype=complex)
        t, w = self.nu._rule
        tw = t * w
        flat = zs.ravel()
        out = np.empty(flat.shape, dtype=complex)
        for i in range(0, len(flat), 256):
            block = flat[i : i + 256]
            out[i : i + 256] = self.h.deriv2s(np.outer(block, t)) @ tw
        return out.reshape(zs.shape)

    def coeffs(self, count):
        return self.h.coeffs(count) * self.nu.moments(count)


# -- the mapping --------------------------------------------------------------


@dataclass(frozen=True)
class HarmonicMap:
    """Map ``f(z) = h(z) + c * conj(g(z))`` with |c| < 1.

    Complex ``c`` is accepted for the convolution algebra; the geometric
    checks and certificates require real ``c`` in [0, 1).
    """

    h: object
    g: object
    c: complex

    def __post_init__(self):
        if not abs(self.c) < 1.0:
            raise ValueError(f"|c| must be below 1, got {self.c!r}")

    @property
    def real_c(self):
        c = complex(self.c)
        if c.imag != 0.0 or not 0.0 <= c.real < 1.0:
            raise ValueError(f"this operation needs real c in [0, 1), got {self.c!r}")
        return c.real

    def eval(self, z, tol=1e-10):
        z = complex(z)
        return self.h.value(z, tol=tol) + self.c * complex(self.g.value(z, tol=tol)).conjugate()

    __call__ = eval

    def values(self, zs):
        zs = np.asarray(zs, dtype=complex)
        return self.h.values(zs) + self.c * np.conj(self.g.values(zs))

    def dilatation(self, z, tol=1e-10):
        """Second complex dilatation ``c g'(z)/h'(z)``."""
        z = complex(z)
        hp = self.h.deriv(z, tol=tol)
        if abs(hp) < SINGULAR_TOL:
            raise SingularDerivativeError(f"|h'({z!r})| = {abs(hp):g} below guard")
        return self.c * self.g.deriv(z, tol=tol) / hp

    def dilatation_values(self, zs):
        """Vectorized dilatation; returns (omega, singular_mask)."""
        zs = np.asarray(zs, dtype=complex)
        hp = self.h.derivs(zs)
        gp = self.g.derivs(zs)
        singular = np.abs(hp) < SINGULAR_TOL
        omega = np.full(zs.shape, np.nan + 0j, dtype=complex)
        ok = ~singular
        omega[ok] = self.c * gp[ok] / hp[ok]
        return omega, singular

    def jacobian(self, z, tol=1e-10):
        """|h'|^2 - |c|^2 |g'|^2; positive exactly where |dilatation| < 1."""
        z = complex(z)
        hp = self.h.deriv(z, tol=tol)
        gp = self.g.deriv(z, tol=tol)
        return abs(hp) ** 2 - abs(self.c) ** 2 * abs(gp) ** 2


def map_from_dict(spec):
    """Wire format {"h": <measure spec>, "g": <measure spec>, "c": real}."""
    if not isinstance(spec, dict) or not {"h", "g", "c"} <= set(spec):
        raise ValueError('map spec must carry "h", "g" and "c"')
    return HarmonicMap(
        shifted(measure_from_dict(spec["h"])),
        shifted(measure_from_dict(spec["g"])),
        float(spec["c"]),
    )


def map_to_dict(f):
    return {
        "h": measure_to_dict(f.h.mu),
        "g": measure_to_dict(f.g.mu),
        "c": complex(f.c).real if complex(f.c).imag == 0.0 else complex(f.c),
    }


def load_map(path):
    with open(path, "r", encoding="utf-8") as fh:
        return map_from_dict(json.load(fh))


# -- certificates --------------------------------------------------------------


@dataclass(frozen=True)
class QCCertificate:
    """Outcome of a quasiconformality check.

    ``method`` is one of grid, thm1.6, thm1.7i, thm1.7ii, thm1.9, hypergeom;
    ``status`` is certified, violated, or inconclusive.  Grid methods carry
    the sup estimate and the grid used.
    """

    method: str
    bound_k: float
    status: str
    sup_estimate: float | None = None
    grid: GridSpec | None = None
    details: dict = field(default_factory=dict)

    @property
    def holds(self):
        return self.status == "certified"

    def to_dict(self):
        out = {"method": self.method, "status": self.status, "bound_k": self.bound_k}
        if self.sup_estimate is not None:
            out["sup_estimate"] = self.sup_estimate
        if self.grid is not None:
            out["grid"] = {
                "rmin": self.grid.rmin,
                "rmax": self.grid.rmax,
                "nr": self.grid.nr,
                "ntheta": self.grid.ntheta,
            }
        for key in sorted(self.details):
            out[key] = self.details[key]
        return out


def certify_qc_grid(f, k, grid=None):
    """Sup of |dilatation| over the polar grid, compared against k < 1.

    Singular-derivative nodes are skipped and counted.  The certificate
    records the arg-sup location; a pass is grid evidence only.
    """
    if not 0.0 <= k < 1.0:
        raise ValueError(f"k must lie in [0, 1), got {k!r}")
    grid = grid or GridSpec()
    zs = grid.disk_points()
    omega, singular = f.dilatation_values(zs)
    valid = ~singular
    if not np.any(valid):
        return QCCertificate(
            "grid", k, "inconclusive", grid=grid,
            details={"singular_nodes": int(singular.sum())},
        )
    mags = np.abs(omega[valid])
    idx = int(np.argmax(mags))
    sup = float(mags[idx])
    at = zs[valid][idx]
    status = "certified" if sup <= k else "violated"
    return QCCertificate(
        "grid",
        k,
        status,
        sup_estimate=sup,
        grid=grid,
        details={
            "argsup_re": float(at.real),
            "argsup_im": float(at.imag),
            "singular_nodes": int(singular.sum()),
        },
    )


# -- pointwise modulus bound ---------------------------------------------------


@dataclass(frozen=True)
class ModulusBoundReport:
    """Sample check of |a + f(z)| >= a + f(-|z|) >= a + lim f(-r)."""

    passed: bool
    a: float
    limit: float
    n_samples: int
    min_margin_pointwise: float
    min_margin_limit: float
    slack: float

    def to_dict(self):
        return {
            "passed": self.passed,
            "a": self.a,
            "limit": self.limit,
            "n_samples": self.n_samples,
            "min_margin_pointwise": self.min_margin_pointwise,
            "min_margin_limit": self.min_margin_limit,
            "slack": self.slack,
        }


def radial_limit(f):
    """lim of f(-r) as r -> 1-, finite for every map of this class."""
    c = f.real_c
    return -(f.h.base.real_part_floor() + c * f.g.base.real_part_floor())


def check_modulus_bound(f, a=None, samples=None, slack=1e-9):
    """Verify the radial lower bound for |a + f| on the given sample points.

    ``a`` defaults to the smallest nonnegative constant that keeps the
    boundary limit nonnegative.  Needs real c in [0, 1) and measure-backed
    parts (the limit is a closed-form integral against each measure).
    """
    c = f.real_c
    if not isinstance(f.h, ShiftedCauchyTransform) or not isinstance(f.g, ShiftedCauchyTransform):
        raise TypeError("modulus bound needs measure-backed parts")
    limit = radial_limit(f)
    if a is None:
        a = max(0.0, -limit)
    if a < 0:
        raise ValueError("the shift a must be nonnegative")
    zs = np.asarray(samples if samples is not None else GridSpec().disk_points(), dtype=complex)
    vals = f.values(zs)
    radial = f.values(-np.abs(zs)).real
    margin1 = np.abs(a + vals) - (a + radial)
    margin2 = radial - limit
    passed = bool(np.min(margin1) >= -slack and np.min(margin2) >= -slack)
    return ModulusBoundReport(
        passed=passed,
        a=float(a),
        limit=float(limit),
        n_samples=int(zs.size),
        min_margin_pointwise=float(np.min(margin1)),
        min_margin_limit=float(np.min(margin2)),
        slack=slack,
    )


# -- half-plane partial-derivative signs ----------------------------------------


@dataclass(frozen=True)
class PartialSignReport:
    """Sign pattern of y * d/dy Re f (negative) and y * d/dx Im f (positive).

    Both quantities are integrals of the closed-form kernel
    ``2 y t (1 - x t) / (1 - 2 x t + t^2 |z|^2)^2`` against mu + c nu and
    mu - c nu respectively; the second needs the structural nonnegativity
    probe of mu - c nu to pass.  Nodes where the kernel annihilates the
    measure are labeled degenerate rather than judged.  ``worst_re`` and
    ``worst_im`` are oriented so that anything above the slack counts as a
    violation.
    """

    checked_nodes: int
    violations_re: int
    violations_im: int
    degenerate_nodes: int
    im_checked: bool
    im_skip_reason: str | None
    worst_re: float
    worst_im: float | None
    slack: float

    @property
    def passed(self):
        return self.violations_re == 0 and self.violations_im == 0

    def to_dict(self):
        return {
            "passed": self.passed,
            "checked_nodes": self.checked_nodes,
            "violations_re": self.violations_re,
            "violations_im": self.violations_im,
            "degenerate_nodes": self.degenerate_nodes,
            "im_checked": self.im_checked,
            "im_skip_reason": self.im_skip_reason,
            "worst_re": self.worst_re,
            "worst_im": self.worst_im,
            "slack": self.slack,
        }


def _signed_nonneg_probe(mu, nu, c, n_samples=1000):
    """Sufficient structural check that mu - c*nu is a nonnegative measure.

    Every nu atom must be matched at the same location by a mu atom of
    weight at least c times as large, and the densities must dominate
    pointwise on an interior sample.  Failure does not prove the signed
    measure is negative somewhere; the check errs on the safe side.
    """
    if c == 0.0:
        return True, None
    for a in nu.atoms:
        match = sum(b.w for b in mu.atoms if b.t == a.t)
        if match < c * a.w - 1e-15:
            return False, f"nu atom at t={a.t:g} (weight {a.w:g}) not dominated in mu"
    if nu.densities:
        ts = (np.arange(n_samples) + 0.5) / n_samples
        gap = mu.pdf(ts) - c * nu.pdf(ts)
        if np.min(gap) < -1e-12:
            t_bad = float(ts[int(np.argmin(gap))])
            return False, f"density domination fails near t={t_bad:g}"
    return True, None


def check_partial_signs(f, grid=None, slack=1e-9, degenerate_tol=1e-12):
    """Evaluate both partial-sign integrals on the half-plane grid and its mirror."""
    c = f.real_c
    if not isinstance(f.h, ShiftedCauchyTransform) or not isinstance(f.g, ShiftedCauchyTransform):
        raise TypeError("partial-sign check needs measure-backed parts")
    mu = f.h.mu
    nu = f.g.mu
    grid = grid or GridSpec()
    upper = grid.rect_points()
    nodes = np.concatenate([upper, np.conj(upper)])
    x = nodes.real
    y = nodes.imag

    t_mu, w_mu = mu._rule
    t_nu, w_nu = nu._rule
    t_plus = np.concatenate([t_mu, t_nu])
    w_plus = np.concatenate([w_mu, c * w_nu])
    w_minus = np.concatenate([w_mu, -c * w_nu])

    probe_ok, reason = _signed_nonneg_probe(mu, nu, c)

    viol_re = 0
    viol_im = 0
    degenerate = 0
    worst_re = -math.inf
    worst_im = -math.inf if probe_ok else None
    block = 2048
    for i in range(0, len(nodes), block):
        xs = x[i : i + block, None]
        ys = y[i : i + block, None]
        t = t_plus[None, :]
        denom = 1.0 - 2.0 * xs * t + t * t * (xs * xs + ys * ys)
        kern = 2.0 * ys * t * (1.0 - xs * t) / (denom * denom)
        scale = np.abs(kern) @ np.abs(w_plus)
        deg = scale <= degenerate_tol
        degenerate += int(deg.sum())
        q_re = -(ys[:, 0] * (kern @ w_plus))
        live = ~deg
        if np.any(live):
            worst_re = max(worst_re, float(np.max(q_re[live])))
            viol_re += int(np.sum(q_re[live] > slack))
            if probe_ok:
                q_im = ys[:, 0] * (kern @ w_minus)
                worst_im = max(worst_im, float(np.min(q_im[live]) * -1.0))
                viol_im += int(np.sum(q_im[live] < -slack))
    return PartialSignReport(
        checked_nodes=int(len(nodes)),
        violations_re=viol_re,
        violations_im=viol_im if probe_ok else 0,
        degenerate_nodes=degenerate,
        im_checked=probe_ok,
        im_skip_reason=None if probe_ok else reason,
        worst_re=worst_re,
        worst_im=worst_im,
        slack=slack,
    )


# -- algebra --------------------------------------------------------------------


def convolve(f1, f2, order=64):
    """Partwise Hadamard product; the result carries truncated coefficients.

    Coefficient prefixes are exact for atomic measures.  The returned map
    evaluates as a series on |z| <= 0.95 only; the co-analytic constant
    multiplies.
    """
    a = np.asarray(f1.h.coeffs(order)) * np.asarray(f2.h.coeffs(order))
    b = np.asarray(f1.g.coeffs(order)) * np.asarray(f2.g.coeffs(order))
    return HarmonicMap(SeriesPart(tuple(a)), SeriesPart(tuple(b)), complex(f1.c) * complex(f2.c))


def convex_combination(f1, f2, s):
    """Mix two maps with the same c by mixing their representing measures."""
    if complex(f1.c) != complex(f2.c):
        raise ValueError(f"c mismatch: {f1.c!r} vs {f2.c!r}")
    if not isinstance(f1.h, ShiftedCauchyTransform) or not isinstance(f2.h, ShiftedCauchyTransform):
        raise TypeError("convex combination needs measure-backed parts")
    return HarmonicMap(
        shifted(mix(f1.h.mu, f2.h.mu, s)),
        shifted(mix(f1.g.mu, f2.g.mu, s)),
        f1.c,
    )


def make_convolution_map(h, nu, c):
    """Map whose co-analytic part is the Hadamard product of h with nu's generator."""
    if not 0.0 <= float(c) < 1.0:
        raise ValueError(f"c must be real in [0, 1), got {c!r}")
    return HarmonicMap(h, ConvolutionPart(h, nu), float(c))


# -- derivative-ratio machinery ---------------------------------------------------


def derivative_ratio_sup(h, grid=None, nt=11):
    """Numerical sup of |h'(t z)/h'(z)| over the disk grid times t in [0, 1]."""
    grid = grid or GridSpec()
    zs = grid.disk_points()
    ts = grid.t_samples(nt)
    hp = h.derivs(zs)
    if np.any(np.abs(hp) < SINGULAR_TOL):
        raise SingularDerivativeError("h' vanishes on the evaluation grid")
    sup = 0.0
    block = 512
    for i in range(0, len(zs), block):
        zblock = zs[i : i + block]
        num = np.abs(h.derivs(np.outer(zblock, ts)))
        ratios = num / np.abs(hp[i : i + block])[:, None]
        sup = max(sup, float(np.max(ratios)))
    return sup


@dataclass(frozen=True)
class HarnackReport:
    """Log-derivative floor check: Re[z h''/h'] > -m forces |h'(tz)/h'(z)| <= e^{2m}."""

    hypothesis_holds: bool
    m: float
    bound: float | None
    min_re_observed: float
    ratio_sup: float | None
    ratio_within_bound: bool | None
    slack: float

    def to_dict(self):
        return {
            "hypothesis_holds": self.hypothesis_holds,
            "m": self.m,
            "bound": self.bound,
            "min_re_observed": self.min_re_observed,
            "ratio_sup": self.ratio_sup,
            "ratio_within_bound": self.ratio_within_bound,
            "slack": self.slack,
        }


def harnack_ratio_bound(h, m, grid=None, slack=1e-9):
    """Check the grid floor Re[z h''/h'] > -m and verify the implied ratio bound."""
    if not m > 0.0:
        raise ValueError("m must be positive")
    grid = grid or GridSpec()
    zs = grid.disk_points()
    hp = h.derivs(zs)
    if np.any(np.abs(hp) < SINGULAR_TOL):
        raise SingularDerivativeError("h' vanishes on the evaluation grid")
    quant = (zs * h.deriv2s(zs) / hp).real
    min_re = float(np.min(quant))
    holds = min_re > -m - slack
    bound = ratio_sup = within = None
    if holds:
        bound = math.exp(2.0 * m)
        ratio_sup = derivative_ratio_sup(h, grid)
        within = bool(ratio_sup <= bound + slack)
    return HarnackReport(
        hypothesis_holds=bool(holds),
        m=float(m),
        bound=bound,
        min_re_observed=min_re,
        ratio_sup=ratio_sup,
        ratio_within_bound=within,
        slack=slack,
    )


# -- density comparison and the boundary-limit certificate -------------------------


@dataclass(frozen=True)
class DensityRatioVerdict:
    """Cross inequality phi(s) psi(t) >= phi(t) psi(s) on all sampled s <= t.

    When it holds, the quotients g/h and g'/h' of the generated parts are
    probed for transform-class membership as corroborating evidence.
    """

    holds: bool
    max_violation: float
    worst_s: float | None
    worst_t: float | None
    n_samples: int
    quotient_report: object = None
    derivative_quotient_report: object = None

    def to_dict(self):
        out = {
            "holds": self.holds,
            "max_violation": self.max_violation,
            "worst_s": self.worst_s,
            "worst_t": self.worst_t,
            "n_samples": self.n_samples,
        }
        if self.quotient_report is not None:
            out["quotient_consistent"] = self.quotient_report.consistent
        if self.derivative_quotient_report is not None:
            out["derivative_quotient_consistent"] = self.derivative_quotient_report.consistent
        return out


def _as_density_measure(obj):
    if isinstance(obj, Measure):
        if obj.atoms:
            raise ValueError("density comparison needs purely absolutely continuous measures")
        return obj
    return Measure(densities=(obj,))


def derivative_quotient(h, g):
    """Vectorized callable g'/h' for membership probing (value 1 at 0)."""

    def fn(zs):
        zs = np.asarray(zs, dtype=complex)
        return g.derivs(zs) / h.derivs(zs)

    return fn


def quotient(h, g):
    """Vectorized callable g/h, evaluated as a ratio of unshifted transforms."""

    def fn(zs):
        zs = np.asarray(zs, dtype=complex)
        return g.base.values(zs) / h.base.values(zs)

    return fn


def density_ratio_condition(phi, psi, n=200, slack=1e-12, spot_check=True, grid=None):
    """Check the cross inequality on an n x n interior sample.

    ``phi`` and ``psi`` may be density objects or purely density measures;
    phi plays the h role and psi the g role.  With ``spot_check`` the two
    quotients are additionally probed via :func:`check_membership`.
    """
    mu = _as_density_measure(phi)
    nu = _as_density_measure(psi)
    ts = (np.arange(n) + 0.5) / n
    p = mu.pdf(ts)
    q = nu.pdf(ts)
    a = p[:, None] * q[None, :]
    diff = a - a.T
    iu = np.triu_indices(n, k=1)
    gaps = diff[iu]
    worst = int(np.argmin(gaps))
    max_violation = float(max(0.0, -np.min(gaps)))
    holds = bool(np.min(gaps) >= -slack)
    worst_s = float(ts[iu[0][worst]])
    worst_t = float(ts[iu[1][worst]])

    rep_q = rep_dq = None
    if holds and spot_check:
        h = shifted(mu)
        g = shifted(nu)
        rep_q = check_membership(quotient(h, g), grid=grid)
        rep_dq = check_membership(derivative_quotient(h, g), grid=grid)
    return DensityRatioVerdict(
        holds=holds,
        max_violation=max_violation,
        worst_s=None if holds else worst_s,
        worst_t=None if holds else worst_t,
        n_samples=n,
        quotient_report=rep_q,
        derivative_quotient_report=rep_dq,
    )


def _deriv_real(part, x, order=1):
    try:
        val = part.deriv(x, tol=1e-10) if order == 1 else part.deriv2(x, tol=1e-10)
    except QuadratureError as exc:
        val = exc.estimate
    return float(np.real(val))


def _boundary_limit(eval_at, start=1e-2, stop=1e-8, rel_tol=1e-9):
    """Classify lim of eval_at(1 - delta) as delta -> 0 by cutoff refinement.

    Returns (value, status) with status one of finite / infinite / unresolved.
    """
    delta = start
    prev = None
    prev_inc = None
    while True:
        cur = eval_at(1.0 - delta)
        if abs(cur) > 1e12:
            return math.inf, "infinite"
        if prev is not None:
            inc = cur - prev
            if abs(inc) <= rel_tol * max(1.0, abs(cur)):
                return cur, "finite"
            if prev_inc is not None and delta <= stop:
                ratio = abs(inc) / max(abs(prev_inc), 1e-300)
                if ratio >= 1.1:
                    return math.inf, "infinite"
                if ratio < 0.9:
                    return cur + inc * ratio / (1.0 - ratio), "finite"
                return cur, "unresolved"
            prev_inc = inc
        prev = cur
        if delta <= stop:
            return cur, "unresolved"
        delta *= 0.5


def certify_qc_boundary_limit(h, g, c, k, n=200, grid=None):
    """Certificate from the boundary limit of F = g'/h'.

    Requires the cross inequality for the representing densities; then the
    sup of the dilatation modulus is c * F(1-), computed directly from the
    one-sided derivative limits, or from the second-derivative quotient when
    both first derivatives blow up.  c * F(1-) <= k certifies; a numerically
    infinite limit is inconclusive.
    """
    if not 0.0 <= float(c) < 1.0:
        raise ValueError(f"c must be real in [0, 1), got {c!r}")
    if not 0.0 <= k < 1.0:
        raise ValueError(f"k must lie in [0, 1), got {k!r}")
    c = float(c)
    if not isinstance(h, ShiftedCauchyTransform) or not isinstance(g, ShiftedCauchyTransform):
        raise TypeError("boundary-limit certificate needs measure-backed parts")
    ratio = density_ratio_condition(h.mu, g.mu, n=n, spot_check=False)
    if not ratio.holds:
        return QCCertificate(
            "thm1.9",
            k,
            "inconclusive",
            details={
                "reason": "density cross inequality failed",
                "max_violation": ratio.max_violation,
            },
        )

    g_lim, g_status = _boundary_limit(lambda x: _deriv_real(g, x))
    h_lim, h_status = _boundary_limit(lambda x: _deriv_real(h, x))
    path = None
    f_limit = None
    if g_status == "finite" and h_status == "finite":
        f_limit = g_lim / h_lim
        path = "direct"
    elif g_status == "finite" and h_status == "infinite":
        f_limit = 0.0
        path = "vanishing"
    elif g_status == "infinite" and h_status == "infinite":
        val, status = _boundary_limit(
            lambda x: _deriv_real(g, x, order=2) / _deriv_real(h, x, order=2)
        )
        if status == "finite":
            f_limit = val
            path = "second-derivative quotient"
    if f_limit is None:
        return QCCertificate(
            "thm1.9",
            k,
            "inconclusive",
            details={"reason": "boundary limit of g'/h' numerically infinite or unresolved"},
        )
    sup_bound = c * f_limit
    status = "certified" if sup_bound <= k else "violated"
    return QCCertificate(
        "thm1.9",
        k,
        status,
        sup_estimate=float(sup_bound),
        details={"f_limit": float(f_limit), "path": path},
    )
