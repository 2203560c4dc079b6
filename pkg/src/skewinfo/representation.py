"""Integral representations of MC functions.

Two representations are tabulated for the built-in families:

* the canonical one, ``c(x, y) = int_0^1 c_lam(x, y) dmu_c(lam)`` over the
  extreme functions ``c_lam``, with ``mu_c`` stored as a density plus atoms;
* the exponential one, ``c(x, y) = C0/(x + y) exp int_0^1 w(lam; x, y) h(lam) dlam``
  with a weight function ``0 <= h <= 1``.

Both can be reconstructed by quadrature and compared against the closed
forms. :func:`boundary_density_oracle` recovers densities independently from
the imaginary part of the analytic continuation just above the cut.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ContinuationError, DomainError, UnsupportedMetricError
from .mcfunc import MCFunction, eval_c
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate, integrate_unit

__all__ = [
    "RepresentingMeasure",
    "HRepresentation",
    "QuadratureConfig",
    "measure_of",
    "h_repr_of",
    "extreme_kernel",
    "reconstruct_from_measure",
    "reconstruct_from_h",
    "boundary_density_oracle",
    "measure_integral",
    "kubo_h_proof_form",
]


@dataclass(frozen=True)
class RepresentingMeasure:
    """Finite Borel measure on ``[0, 1]``: density plus point masses.

    ``density(lam, lamc)`` receives ``lamc = 1 - lam`` computed separately so
    that factors ``(1 - lam)**b`` stay accurate near 1. ``exponents`` give the
    density's power-law behaviour at 0 and at 1.
    """

    density: Callable = None
    atoms: tuple = ()
    exponents: tuple = (0.0, 0.0)

    def __post_init__(self):
        a, b = self.exponents
        if a <= -1 or b <= -1:
            raise ValueError("endpoint exponents must exceed -1")
        for loc, mass in self.atoms:
            if not (0.0 <= loc <= 1.0 and mass > 0):
                raise ValueError(f"invalid atom ({loc}, {mass})")

    def pdf(self, lam):
        lam = np.asarray(lam, dtype=float)
        if self.density is None:
            return np.zeros_like(lam)
        return self.density(lam, 1.0 - lam)

    def total_mass(self, config=DEFAULT_CONFIG):
        return measure_integral(self, lambda lam, lamc: np.ones_like(lam), config)[0]


@dataclass(frozen=True)
class HRepresentation:
    """Constant ``C0 > 0`` and weight ``h: (0, 1) -> [0, 1]``."""

    C0: float
    h: Callable
    breakpoints: tuple = field(default=())

    def __post_init__(self):
        if not self.C0 > 0:
            raise ValueError("C0 must be positive")


def extreme_kernel(lam, x, y):
    """``c_lam(x, y)``, broadcasting over ``lam``."""
    return 0.5 * (1.0 + lam) * (1.0 / (x + lam * y) + 1.0 / (lam * x + y))


def _wyd_density(p):
    q = 1.0 - p
    const = 2.0 * np.sin(p * np.pi) / (np.pi * p * q)

    def density(lam, lamc):
        return const * (lam**p + lam**q) / (1.0 + lam) ** 3

    return density


def _wy_density(lam, lamc):
    return 16.0 * np.sqrt(lam) / (np.pi * (1.0 + lam) ** 3)


def _kubo_density(lam, lamc):
    return 2.0 / (1.0 + lam) ** 2


def _bridge_density(gamma):
    const = 2.0 * np.sin(gamma * np.pi) / np.pi

    def density(lam, lamc):
        return const / (1.0 + lam) * lam ** (-gamma) * (0.5 * lamc) ** (2.0 * gamma - 1.0)

    return density


def measure_of(mc: MCFunction) -> RepresentingMeasure:
    """Tabulated representing measure ``mu_c`` of a built-in MC function."""
    name, params = mc.name, mc.params
    if name == "wyd":
        p = params["p"]
        return RepresentingMeasure(_wyd_density(p), exponents=(min(p, 1.0 - p), 0.0))
    if name == "wy":
        return RepresentingMeasure(_wy_density, exponents=(0.5, 0.0))
    if name == "kubo":
        return RepresentingMeasure(_kubo_density)
    if name == "bures":
        return RepresentingMeasure(atoms=((1.0, 1.0),))
    if name == "bridge":
        gamma = params["gamma"]
        if gamma == 0.0:
            return RepresentingMeasure(atoms=((1.0, 1.0),))
        if gamma == 1.0:
            return RepresentingMeasure(atoms=((0.0, 1.0),))
        return RepresentingMeasure(_bridge_density(gamma), exponents=(-gamma, 2.0 * gamma - 1.0))
    if name == "extreme":
        return RepresentingMeasure(atoms=((params["lam"], 1.0),))
    raise UnsupportedMetricError(f"no tabulated representing measure for {mc.label}")


def measure_integral(measure, func, config=DEFAULT_CONFIG, breakpoints=()):
    """Integrate ``func(lam, lamc)`` against ``measure``; returns ``(value, error)``.

    ``func`` must be vectorized in ``lam``.
    """
    total, err = 0.0, 0.0
    if measure.density is not None:

        def integrand(lam, lamc):
            return func(lam, lamc) * measure.density(lam, lamc)

        total, err = integrate_unit(integrand, measure.exponents, config, breakpoints)
    for loc, mass in measure.atoms:
        lam = np.array([loc])
        total += mass * float(np.asarray(func(lam, 1.0 - lam))[0])
    return total, err


def _ratio(x, y):
    x, y = float(x), float(y)
    if not (x > 0 and y > 0):
        raise DomainError("reconstruction needs x > 0 and y > 0")
    lo, hi = min(x, y), max(x, y)
    return lo / hi, hi


def reconstruct_from_measure(measure, x, y, config=DEFAULT_CONFIG):
    """Evaluate ``int_0^1 c_lam(x, y) dmu(lam)`` by quadrature.

    By symmetry and homogeneity this is ``R(t)/max(x, y)`` with
    ``t = min/max``; the integrand peaks near ``lam = t``, which seeds the
    panel boundaries.
    """
    t, hi = _ratio(x, y)

    def func(lam, lamc):
        return extreme_kernel(lam, t, 1.0)

    breakpoints = [t] if t < 1.0 else []
    value, _ = measure_integral(measure, func, config, breakpoints)
    return value / hi


def _wyd_h(p):
    q = 1.0 - p
    s, c = np.sin(p * np.pi), np.cos(p * np.pi)

    def h(lam):
        lam = np.asarray(lam, dtype=float)
        a, b = lam**p, lam**q
        return np.arctan2((a + b) * s, (1.0 - lam) - (a - b) * c) / np.pi

    return h


def _wy_h(lam):
    lam = np.asarray(lam, dtype=float)
    return np.arctan2(2.0 * np.sqrt(lam), 1.0 - lam) / np.pi


def _kubo_h(lam):
    lam = np.asarray(lam, dtype=float)
    with np.errstate(divide="ignore"):
        log_lam = np.log(lam)
    return 0.5 - np.arctan(-log_lam / np.pi) / np.pi


def kubo_h_proof_form(lam):
    """Kubo weight as ``1 - theta/pi`` with ``tan theta = pi/log(lam)``.

    ``theta`` is taken on the branch ``(pi/2, pi)``; there it coincides with
    the tabulated weight.
    """
    lam = np.asarray(lam, dtype=float)
    theta = np.pi + np.arctan(np.pi / np.log(lam))
    return 1.0 - theta / np.pi


def h_repr_of(mc: MCFunction) -> HRepresentation:
    """Tabulated ``(C0, h)`` pair of a built-in MC function."""
    name, params = mc.name, mc.params
    if name == "wyd":
        p = params["p"]
        q = 1.0 - p
        c0 = (
            np.sqrt(2.0)
            / (p * q)
            * np.sqrt(1.0 - np.cos(p * np.pi / 2.0))
            * np.sqrt(1.0 - np.cos(q * np.pi / 2.0))
        )
        return HRepresentation(float(c0), _wyd_h(p))
    if name == "wy":
        return HRepresentation(4.0 * (np.sqrt(2.0) - 1.0), _wy_h)
    if name == "kubo":
        return HRepresentation(np.pi / 2.0, _kubo_h)
    if name == "bures":
        return HRepresentation(2.0, lambda lam: np.zeros_like(np.asarray(lam, dtype=float)))
    if name == "bridge":
        gamma = params["gamma"]
        return HRepresentation(
            2.0 ** (1.0 - gamma),
            lambda lam: np.full_like(np.asarray(lam, dtype=float), gamma),
        )
    if name == "variant_bridge":
        p = params["p"]
        # C0 fixed by c(1, 1) = 1; the exponent integrates in closed form
        c0 = 2.0 * (2.0 * (1.0 + (1.0 - p) ** 2) / (2.0 - p) ** 2) ** (-p)
        edge = 1.0 - p
        return HRepresentation(
            float(c0),
            lambda lam: np.where(np.asarray(lam, dtype=float) >= edge, p, 0.0),
            breakpoints=(edge,) if 0.0 < edge < 1.0 else (),
        )
    raise UnsupportedMetricError(f"no tabulated h-representation for {mc.label}")


def reconstruct_from_h(hr, x, y, config=DEFAULT_CONFIG):
    """Evaluate ``C0/(x+y) exp int_0^1 w(lam; x, y) h(lam) dlam`` by quadrature."""
    t, hi = _ratio(x, y)

    def integrand(lam):
        weight = (1.0 - lam * lam) / (lam * lam + 1.0)
        return weight * (t * t + 1.0) / ((t + lam) * (lam * t + 1.0)) * hr.h(lam)

    breakpoints = sorted({*hr.breakpoints, *([t] if t < 1.0 else [])})
    exponent, _ = integrate(integrand, 0.0, 1.0, config, breakpoints)
    return hr.C0 / (t + 1.0) * np.exp(exponent) / hi


def _continuation_density(mc, lam, eps):
    if mc.continuation is None:
        raise ContinuationError(f"{mc.label} has no complex continuation")
    z = complex(-lam, eps)
    with np.errstate(all="ignore"):
        val = complex(np.asarray(mc.continuation(z)))
    if not np.isfinite(val):
        raise ContinuationError(f"continuation of {mc.label} not finite at {z}")
    # 1/pi Im(-c(z, 1)) is the canonical measure; 2/(1+lam) maps it to mu_c
    return 2.0 / (1.0 + lam) * (-val.imag) / np.pi


def boundary_density_oracle(mc, lam, eps=1e-6, richardson=True):
    """Estimate the density of ``mu_c`` at ``lam`` from boundary values.

    Evaluates ``(2/(1+lam)) (1/pi) Im(-c(-lam + i eps, 1))``. With
    ``richardson`` the first-order ``eps`` error is removed using a second
    evaluation at ``2 eps``.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError("lam must lie in (0, 1)")
    d1 = _continuation_density(mc, lam, eps)
    if not richardson:
        return max(d1, 0.0) if d1 > -1e-12 else d1
    d2 = _continuation_density(mc, lam, 2.0 * eps)
    return 2.0 * d1 - d2


def closed_form_check(mc, x, y, config=DEFAULT_CONFIG):
    """Relative errors ``(measure route, h route)`` against ``eval_c``."""
    exact = eval_c(mc, x, y)
    out = []
    for route in (measure_of, h_repr_of):
        try:
            rep = route(mc)
        except UnsupportedMetricError:
            out.append(None)
            continue
        if route is measure_of:
            val = reconstruct_from_measure(rep, x, y, config)
        else:
            val = reconstruct_from_h(rep, x, y, config)
        out.append(abs(val - exact) / exact)
    return tuple(out)


def metric_constant_integral(mc, config=DEFAULT_CONFIG, cutoff=0.0):
    """``int (1+lam)**2/(2 lam) dmu_c`` over ``(cutoff, 1]``; returns ``(value, error)``.

    Equals ``1/m(c)`` for regular metrics. For non-regular ones the integral
    diverges, which shows up as unbounded growth while ``cutoff`` shrinks.
    """
    measure = measure_of(mc)
    total, err = 0.0, 0.0
    for loc, mass in measure.atoms:
        if loc > cutoff:
            total += mass * (1.0 + loc) ** 2 / (2.0 * loc)
        elif cutoff == 0.0:
            return np.inf, 0.0
    if measure.density is None:
        return total, err
    dens = measure.density
    if cutoff > 0.0:
        # lam = exp(s) flattens the 1/lam growth near the cutoff
        def integrand(s):
            lam = np.exp(s)
            return (1.0 + lam) ** 2 / 2.0 * dens(lam, -np.expm1(s))

        value, e = integrate(integrand, np.log(cutoff), 0.0, config)
        return total + value, err + e
    a, b = measure.exponents
    if a - 1.0 <= -1.0:
        return np.inf, 0.0

    def func(lam, lamc):
        return (1.0 + lam) ** 2 / (2.0 * lam) * dens(lam, lamc)

    value, e = integrate_unit(func, (a - 1.0, b), config)
    return total + value, err + e
