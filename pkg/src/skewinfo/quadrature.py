"""Adaptive Gauss-Legendre quadrature with power-law endpoint substitutions.

Every panel is integrated with a 10-point and a 21-point Gauss-Legendre rule;
the difference is the panel error estimate. Panels are bisected in order of
largest error until the global estimate meets ``max(abs_tol, rel_tol*|I|)``.

Integrands on the unit interval are written as ``f(lam, lamc)`` where
``lamc == 1 - lam`` is supplied separately so that densities behaving like
``(1 - lam)**b`` stay accurate right up to the endpoint.
"""

import heapq
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import QuadratureError

__all__ = ["QuadratureConfig", "integrate", "integrate_unit", "substitution_power"]


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000
    endpoint_substitution: bool = True

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")


DEFAULT_CONFIG = QuadratureConfig()


@lru_cache(maxsize=None)
def _rules():
    x10, w10 = np.polynomial.legendre.leggauss(10)
    x21, w21 = np.polynomial.legendre.leggauss(21)
    return np.concatenate([x10, x21]), w10, w21


def _panel(f, a, b):
    nodes, w10, w21 = _rules()
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    vals = np.asarray(f(mid + half * nodes), dtype=float)
    lo = half * np.dot(w10, vals[:10])
    hi = half * np.dot(w21, vals[10:])
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise QuadratureError(
            f"non-finite integrand on panel [{a!r}, {b!r}]", float("nan"), float("inf")
        )
    return hi, abs(hi - lo)


def integrate(f, a, b, config=DEFAULT_CONFIG, breakpoints=()):
    """Integrate a vectorized ``f`` over ``[a, b]``.

    Parameters
    ----------
    f : callable
        Maps a 1-d array of abscissae to an array of values.
    a, b : float
        Finite limits with ``a < b``.
    config : QuadratureConfig
    breakpoints : iterable of float
        Interior points where ``f`` is known to vary rapidly; they become
        initial panel boundaries.

    Returns
    -------
    value, error : float
        Integral estimate and its error estimate.

    Raises
    ------
    QuadratureError
        If ``config.max_subdivisions`` panels do not suffice.
    """
    if not a < b:
        if a == b:
            return 0.0, 0.0
        raise ValueError("integrate requires a < b")
    edges = sorted({a, b, *(p for p in breakpoints if a < p < b)})
    heap = []
    for left, right in zip(edges[:-1], edges[1:]):
        val, err = _panel(f, left, right)
        heap.append((-err, left, right, val))
    heapq.heapify(heap)
    total = sum(item[3] for item in heap)
    error = sum(-item[0] for item in heap)
    while error > max(config.abs_tol, config.rel_tol * abs(total)):
        if len(heap) >= config.max_subdivisions:
            raise QuadratureError(
                f"no convergence after {len(heap)} panels "
                f"(achieved error {error:.3g}, value {total:.17g})",
                total,
                error,
            )
        neg_err, left, right, val = heapq.heappop(heap)
        mid = 0.5 * (left + right)
        if not left < mid < right:
            raise QuadratureError(
                f"panel width underflow near {left!r} (achieved error {error:.3g})",
                total,
                error,
            )
        v1, e1 = _panel(f, left, mid)
        v2, e2 = _panel(f, mid, right)
        heapq.heappush(heap, (-e1, left, mid, v1))
        heapq.heappush(heap, (-e2, mid, right, v2))
        total += v1 + v2 - val
        error += e1 + e2 + neg_err
        # re-sum periodically so drift in the running totals stays bounded
        if len(heap) % 64 == 0:
            total = sum(item[3] for item in heap)
            error = sum(-item[0] for item in heap)
    total = sum(item[3] for item in heap)
    error = sum(-item[0] for item in heap)
    return float(total), float(error)


def substitution_power(exponent):
    """Power ``k`` of the map ``lam = u**k`` used at an endpoint.

    For an integrable singularity ``lam**a`` with ``-1 < a < 0`` the choice
    ``k = 2/(1+a)`` turns ``lam**a dlam`` into ``k*u du``. Non-integer
    positive exponents get ``k = 2`` to smooth the cusp; integer exponents
    need nothing.
    """
    if exponent <= -1:
        raise ValueError(f"endpoint exponent {exponent} is not integrable")
    if exponent < 0:
        return 2.0 / (1.0 + exponent)
    if exponent != int(exponent):
        return 2.0
    return 1.0


def integrate_unit(f, exponents=(0.0, 0.0), config=DEFAULT_CONFIG, breakpoints=()):
    """Integrate ``f(lam, 1 - lam)`` over ``(0, 1)``.

    ``exponents = (a, b)`` describe the integrand's behaviour ``lam**a`` near 0
    and ``(1-lam)**b`` near 1; they select the substitutions applied on the
    halves ``(0, 1/2)`` and ``(1/2, 1)``.
    """
    a, b = exponents
    if config.endpoint_substitution:
        ka, kb = substitution_power(a), substitution_power(b)
    else:
        ka = kb = 1.0
    breakpoints = [p for p in breakpoints if 0.0 < p < 1.0]

    def left(u):
        lam = u**ka
        return f(lam, 1.0 - lam) * (ka * u ** (ka - 1.0))

    def right(v):
        lamc = v**kb
        return f(1.0 - lamc, lamc) * (kb * v ** (kb - 1.0))

    ua = 0.5 ** (1.0 / ka)
    vb = 0.5 ** (1.0 / kb)
    bl = [p ** (1.0 / ka) for p in breakpoints if p < 0.5]
    br = [(1.0 - p) ** (1.0 / kb) for p in breakpoints if p > 0.5]
    half = QuadratureConfig(
        rel_tol=config.rel_tol,
        abs_tol=0.5 * config.abs_tol,
        max_subdivisions=config.max_subdivisions,
        endpoint_substitution=config.endpoint_substitution,
    )
    v1, e1 = integrate(left, 0.0, ua, half, bl)
    v2, e2 = integrate(right, 0.0, vb, half, br)
    return v1 + v2, e1 + e2
