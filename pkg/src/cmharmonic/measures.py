"""Borel probability measures on [0, 1]: atoms plus weighted named densities.

Every integral in the package funnels through :meth:`Measure.integrate`,
which adds atom contributions exactly and handles densities by adaptive
quadrature.  Families with integrable endpoint singularities (beta with
small exponents, log-power with small order) are integrated after a
regularizing change of variable chosen from the exponents, since plain
panels stall near the endpoints.

Measures compare equal structurally (same atoms and densities); weak
equality of measures is not decidable numerically and is not attempted.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .quadrature import QuadratureError, adaptive_quad, composite_rule, graded_edges

__all__ = [
    "Atom",
    "Lebesgue",
    "Beta",
    "LogGamma",
    "Table",
    "Measure",
    "make_named",
    "dirac",
    "lebesgue",
    "beta_measure",
    "loggamma_measure",
    "table_measure",
    "mix",
    "measure_from_dict",
    "measure_to_dict",
    "load_measure",
]

MASS_TOL = 1e-12
DENSITY_CHECK_TOL = 1e-10


@dataclass(frozen=True)
class Chart:
    """Parametrization s -> t of part of (0, 1] with a smooth pulled-back weight.

    ``weight(s)`` is ``pdf(t(s)) * |dt/ds|``, so integrating a function g
    against the density over the covered t-range equals integrating
    ``g(to_t(s)) * weight(s)`` over ``[lo, hi]``.
    """

    lo: float
    hi: float
    to_t: object
    weight: object
    max_panel: float | None = None


@dataclass(frozen=True)
class Atom:
    t: float
    w: float

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"atom location {self.t!r} outside [0, 1]")
        if not self.w > 0.0:
            raise ValueError(f"atom weight must be positive, got {self.w!r}")


@dataclass(frozen=True)
class Lebesgue:
    """Uniform density on [0, 1]."""

    weight: float = 1.0
    family = "lebesgue"

    def pdf(self, t):
        return np.ones_like(np.asarray(t, dtype=float))

    def charts(self, cut=1.0):
        return (Chart(0.0, float(cut), lambda s: s, lambda s: np.ones_like(s)),)

    def params_dict(self):
        return {}


@dataclass(frozen=True)
class Beta:
    """Density proportional to ``t**(a-1) * (1-t)**(c-a-1)`` with c > a > 0."""

    a: float
    c: float
    weight: float = 1.0
    family = "beta"

    def __post_init__(self):
        if not (self.c > self.a > 0.0):
            raise ValueError(f"beta density needs c > a > 0, got a={self.a!r}, c={self.c!r}")

    @property
    def _norm(self):
        return math.exp(
            math.lgamma(self.c) - math.lgamma(self.a) - math.lgamma(self.c - self.a)
        )

    def pdf(self, t):
        t = np.asarray(t, dtype=float)
        return self._norm * t ** (self.a - 1.0) * (1.0 - t) ** (self.c - self.a - 1.0)

    def charts(self, cut=1.0):
        a = self.a
        ca = self.c - self.a
        norm = self._norm
        cut = float(cut)
        mid = min(0.5, cut)
        p = max(1.0, math.ceil(3.0 / a))
        out = []
        if mid > 0.0:
            s1 = mid ** (1.0 / p)
            out.append(
                Chart(
                    0.0,
                    s1,
                    lambda s, p=p: s**p,
                    lambda s, p=p, a=a, ca=ca, norm=norm: norm
                    * p
                    * s ** (p * a - 1.0)
                    * (1.0 - s**p) ** (ca - 1.0),
                )
            )
        if cut > mid:
            q = max(1.0, math.ceil(3.0 / ca))
            slo = (1.0 - cut) ** (1.0 / q) if cut < 1.0 else 0.0
            shi = (1.0 - mid) ** (1.0 / q)
            out.append(
                Chart(
                    slo,
                    shi,
                    lambda s, q=q: 1.0 - s**q,
                    lambda s, q=q, a=a, ca=ca, norm=norm: norm
                    * q
                    * s ** (q * ca - 1.0)
                    * (1.0 - s**q) ** (a - 1.0),
                )
            )
        return tuple(out)

    def params_dict(self):
        return {"a": self.a, "c": self.c}


@dataclass(frozen=True)
class LogGamma:
    """Density ``(-log t)**(alpha-1) / Gamma(alpha)`` on (0, 1), alpha > 0.

    The left endpoint is mapped out with t = exp(-v); the tail beyond
    v = 60 + 12*alpha carries less than 1e-16 of the mass and is dropped.
    """

    alpha: float
    weight: float = 1.0
    family = "loggamma"

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise ValueError(f"log-power density needs alpha > 0, got {self.alpha!r}")

    def pdf(self, t):
        t = np.asarray(t, dtype=float)
        inv_gamma = math.exp(-math.lgamma(self.alpha))
        with np.errstate(divide="ignore"):
            return inv_gamma * (-np.log(t)) ** (self.alpha - 1.0)

    def charts(self, cut=1.0):
        alpha = self.alpha
        inv_gamma = math.exp(-math.lgamma(alpha))
        cut = float(cut)
        mid = min(0.5, cut)
        out = []
        if mid > 0.0:
            v_lo = -math.log(mid)
            v_hi = 60.0 + 12.0 * alpha
            out.append(
                Chart(
                    v_lo,
                    v_hi,
                    lambda v: np.exp(-v),
                    lambda v, alpha=alpha, g=inv_gamma: g * np.exp(-v) * v ** (alpha - 1.0),
                    max_panel=2.0,
                )
            )
        if cut > mid:
            q = max(1.0, math.ceil(3.0 / alpha))
            slo = (1.0 - cut) ** (1.0 / q) if cut < 1.0 else 0.0
            shi = (1.0 - mid) ** (1.0 / q)

            def w_right(s, q=q, alpha=alpha, g=inv_gamma):
                u = s**q
                return g * (-np.log1p(-u)) ** (alpha - 1.0) * q * s ** (q - 1.0)

            out.append(Chart(slo, shi, lambda s, q=q: 1.0 - s**q, w_right))
        return tuple(out)

    def params_dict(self):
        return {"alpha": self.alpha}


@dataclass(frozen=True, init=False)
class Table:
    """User-sampled density: piecewise linear on a supplied grid, renormalized.

    Zero outside the grid's span.  The trapezoid mass is exact for a
    piecewise-linear function, so renormalization is not a quadrature.
    """

    grid: tuple
    values: tuple
    weight: float
    family = "table"

    def __init__(self, grid, values, weight=1.0):
        g = tuple(float(x) for x in grid)
        v = tuple(float(x) for x in values)
        if len(g) != len(v) or len(g) < 2:
            raise ValueError("table density needs matching grids of length >= 2")
        if any(b <= a for a, b in zip(g, g[1:])):
            raise ValueError("table grid must be strictly increasing")
        if g[0] < 0.0 or g[-1] > 1.0:
            raise ValueError("table grid must lie inside [0, 1]")
        if any(x < 0.0 for x in v):
            raise ValueError("table values must be nonnegative")
        mass = sum(0.5 * (v[i] + v[i + 1]) * (g[i + 1] - g[i]) for i in range(len(g) - 1))
        if mass <= 0.0:
            raise ValueError("table density has zero mass")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", tuple(x / mass for x in v))
        object.__setattr__(self, "weight", float(weight))

    def pdf(self, t):
        t = np.asarray(t, dtype=float)
        out = np.interp(t, self.grid, self.values)
        return np.where((t < self.grid[0]) | (t > self.grid[-1]), 0.0, out)

    def charts(self, cut=1.0):
        cut = float(cut)
        out = []
        for lo, hi in zip(self.grid, self.grid[1:]):
            hi = min(hi, cut)
            if hi <= lo:
                break
            out.append(
                Chart(lo, hi, lambda s: s, lambda s, self=self: np.interp(s, self.grid, self.values))
            )
        return tuple(out)

    def params_dict(self):
        return {"grid": list(self.grid), "values": list(self.values)}


_FAMILIES = {"lebesgue": Lebesgue, "beta": Beta, "loggamma": LogGamma, "table": Table}


@dataclass(frozen=True, init=False)
class Measure:
    """Positive Borel measure on [0, 1], stored as atoms plus named densities.

    Construction validates atom locations and weights and checks by
    quadrature that every density family integrates to one before
    weighting (tolerance 1e-10).
    """

    atoms: tuple
    densities: tuple

    def __init__(self, atoms=(), densities=()):
        atoms = tuple(a if isinstance(a, Atom) else Atom(*a) for a in atoms)
        densities = tuple(densities)
        for d in densities:
            if not d.weight > 0.0:
                raise ValueError(f"density weight must be positive, got {d.weight!r}")
            unit = _density_unit_mass(d)
            if abs(unit - 1.0) > DENSITY_CHECK_TOL:
                raise ValueError(
                    f"{d.family} density integrates to {unit!r}, expected 1 within {DENSITY_CHECK_TOL:g}"
                )
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "densities", densities)
        if not atoms and not densities:
            raise ValueError("measure needs at least one atom or density")

    @property
    def mass(self):
        return sum(a.w for a in self.atoms) + sum(d.weight for d in self.densities)

    @property
    def is_normalized(self):
        return abs(self.mass - 1.0) <= MASS_TOL

    # -- quadrature ---------------------------------------------------------

    def integrate(self, integrand, tol=1e-10):
        """Integrate a (possibly complex-valued) vectorized function against the measure.

        Atoms are added exactly; each density chart gets an adaptive pass
        with its share of the tolerance.  Raises
        :class:`~cmharmonic.quadrature.QuadratureError` when refinement
        cannot reach the requested tolerance.
        """
        pieces = [(d, ch) for d in self.densities for ch in d.charts()]
        tol_piece = tol / max(1, len(pieces))
        total = 0.0
        for d, ch in pieces:
            val, _ = adaptive_quad(
                lambda s, ch=ch: np.asarray(integrand(ch.to_t(s))) * ch.weight(s),
                ch.lo,
                ch.hi,
                tol=tol_piece,
            )
            total = total + d.weight * val
        for a in self.atoms:
            total = total + a.w * complex(integrand(np.asarray(a.t)))
        if isinstance(total, complex) and total.imag == 0.0:
            return total.real
        return total

    def integrate_below(self, integrand, cut, tol=1e-10):
        """Like :meth:`integrate` but restricted to t <= cut (atoms above cut dropped)."""
        pieces = [(d, ch) for d in self.densities for ch in d.charts(cut=cut)]
        tol_piece = tol / max(1, len(pieces))
        total = 0.0
        for d, ch in pieces:
            if ch.hi <= ch.lo:
                continue
            val, _ = adaptive_quad(
                lambda s, ch=ch: np.asarray(integrand(ch.to_t(s))) * ch.weight(s),
                ch.lo,
                ch.hi,
                tol=tol_piece,
            )
            total = total + d.weight * val
        for a in self.atoms:
            if a.t <= cut:
                total = total + a.w * complex(integrand(np.asarray(a.t)))
        if isinstance(total, complex) and total.imag == 0.0:
            return total.real
        return total

    def moment(self, n, tol=1e-12):
        """n-th power moment, by quadrature plus exact atom sums."""
        if n < 0 or n != int(n):
            raise ValueError(f"moment order must be a nonnegative integer, got {n!r}")
        n = int(n)
        return float(self.integrate(lambda t: t**n, tol=tol).real)

    @cached_property
    def _rule(self):
        """Graded composite rule (t-nodes, weights) for fast grid sweeps.

        Atoms are appended as exact nodes.  Good to roughly 1e-12 for
        integrands smooth away from the endpoints; single-point evaluations
        with guaranteed tolerances go through :meth:`integrate` instead.
        """
        ts = []
        ws = []
        for d in self.densities:
            for ch in d.charts():
                edges = graded_edges(ch.lo, ch.hi, levels=14, max_panel=ch.max_panel)
                s, w = composite_rule(edges)
                ts.append(ch.to_t(s))
                ws.append(d.weight * w * ch.weight(s))
        for a in self.atoms:
            ts.append(np.array([a.t]))
            ws.append(np.array([a.w]))
        return np.concatenate(ts), np.concatenate(ws)

    def moments(self, count):
        """First ``count`` moments as an array; exact power sums for atomic measures.

        Density contributions use the fixed composite rule, which is the fast
        path behind series coefficients; the certified route is :meth:`moment`.
        """
        ns = np.arange(count)
        if not self.densities:
            out = np.zeros(count)
            for a in self.atoms:
                out += a.w * a.t ** ns.astype(float)
            return out
        t, w = self._rule
        return (t[None, :] ** ns[:, None]) @ w

    # -- structure ----------------------------------------------------------

    def scaled(self, factor):
        if not factor > 0.0:
            raise ValueError("scale factor must be positive")
        return Measure(
            tuple(Atom(a.t, a.w * factor) for a in self.atoms),
            tuple(_reweight(d, d.weight * factor) for d in self.densities),
        )

    def pdf(self, t):
        """Pointwise density of the absolutely continuous part."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for d in self.densities:
            out = out + d.weight * d.pdf(t)
        return out

    def to_dict(self):
        return measure_to_dict(self)


def _reweight(density, weight):
    if isinstance(density, Lebesgue):
        return Lebesgue(weight)
    if isinstance(density, Beta):
        return Beta(density.a, density.c, weight)
    if isinstance(density, LogGamma):
        return LogGamma(density.alpha, weight)
    if isinstance(density, Table):
        return Table(density.grid, density.values, weight)
    raise TypeError(f"unknown density type {type(density)!r}")


def _density_unit_mass(density):
    total = 0.0
    charts = density.charts()
    for ch in charts:
        val, _ = adaptive_quad(ch.weight, ch.lo, ch.hi, tol=DENSITY_CHECK_TOL / (2 * len(charts)))
        total += val
    return total


# -- constructors -----------------------------------------------------------


def dirac(t):
    """Unit point mass at t."""
    return Measure(atoms=(Atom(float(t), 1.0),))


def lebesgue():
    return Measure(densities=(Lebesgue(),))


def beta_measure(a, c):
    return Measure(densities=(Beta(float(a), float(c)),))


def loggamma_measure(alpha):
    return Measure(densities=(LogGamma(float(alpha)),))


def table_measure(grid, values):
    return Measure(densities=(Table(grid, values),))


def make_named(family, **params):
    """Normalized measure of a named family: dirac, lebesgue, beta, loggamma, table."""
    if family == "dirac":
        return dirac(params["t"])
    if family == "lebesgue":
        return lebesgue()
    if family == "beta":
        return beta_measure(params["a"], params["c"])
    if family == "loggamma":
        return loggamma_measure(params["alpha"])
    if family == "table":
        return table_measure(params["grid"], params["values"])
    raise ValueError(f"unknown measure family {family!r}")


def mix(m1, m2, s):
    """Convex combination s*m1 + (1-s)*m2 of two measures."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {s!r}")
    if s == 1.0:
        return m1
    if s == 0.0:
        return m2
    atoms = tuple(Atom(a.t, a.w * s) for a in m1.atoms) + tuple(
        Atom(a.t, a.w * (1.0 - s)) for a in m2.atoms
    )
    densities = tuple(_reweight(d, d.weight * s) for d in m1.densities) + tuple(
        _reweight(d, d.weight * (1.0 - s)) for d in m2.densities
    )
    return Measure(atoms, densities)


# -- JSON wire format -------------------------------------------------------


def measure_to_dict(mu):
    """Wire format: {"atoms": [{"t", "w"}], "densities": [{"family", ..., "w"}]}."""
    out = {}
    if mu.atoms:
        out["atoms"] = [{"t": a.t, "w": a.w} for a in mu.atoms]
    if mu.densities:
        ds = []
        for d in mu.densities:
            entry = {"family": d.family}
            entry.update(d.params_dict())
            entry["w"] = d.weight
            ds.append(entry)
        out["densities"] = ds
    return out


def measure_from_dict(spec):
    if not isinstance(spec, dict):
        raise ValueError("measure spec must be a JSON object")
    atoms = tuple(Atom(float(a["t"]), float(a["w"])) for a in spec.get("atoms", ()))
    densities = []
    for d in spec.get("densities", ()):
        fam = d.get("family")
        if fam not in _FAMILIES:
            raise ValueError(f"unknown density family {fam!r}")
        w = float(d.get("w", 1.0))
        if fam == "lebesgue":
            densities.append(Lebesgue(w))
        elif fam == "beta":
            densities.append(Beta(float(d["a"]), float(d["c"]), w))
        elif fam == "loggamma":
            densities.append(LogGamma(float(d["alpha"]), w))
        else:
            densities.append(Table(d["grid"], d["values"], w))
    return Measure(atoms, tuple(densities))


def load_measure(path):
    with open(path, "r", encoding="utf-8") as fh:
        return measure_from_dict(json.load(fh))
