"""Morozova-Chentsov functions and the kernels derived from them.

A Morozova-Chentsov (MC) function ``c(x, y) = 1/(y f(x/y))`` is built from a
positive operator monotone ``f`` with ``f(t) = t f(1/t)``. Every evaluator in
this module is vectorized over numpy arrays and returns a float for scalar
input.

Built-in families
-----------------
``wyd(p)``            Wigner-Yanase-Dyson, ``0 < p < 1``
``wy``                Wigner-Yanase (``wyd`` at ``p = 1/2``)
``bures``             ``2/(x + y)``, the smallest symmetric monotone metric
``kubo``              ``(log x - log y)/(x - y)``
``bridge(gamma)``     ``(xy)**-gamma ((x + y)/2)**(2 gamma - 1)``, ``0 <= gamma <= 1``
``extreme(lam)``      the extreme points ``c_lam`` of the normalized simplex
``variant_bridge(p)`` the regular bridge from Bures to the maximal metric
"""

from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Callable, Mapping, Optional

import numpy as np

from .errors import DomainError, ParameterError, RegularityError
from .report import ReportBuilder

__all__ = [
    "NON_REGULAR",
    "MCFunction",
    "KernelGrid",
    "builtin",
    "builtin_names",
    "eval_c",
    "eval_c_hat",
    "eval_d",
    "eval_f_lambda",
    "metric_constant",
    "numeric_metric_constant",
    "perturbed",
    "check_axioms",
    "variant_bridge_f",
    "variant_bridge_dfdp",
    "variant_bridge_dfdp_published",
]

# |x - y| <= NEAR_DIAGONAL * (x + y) selects the series branch
NEAR_DIAGONAL = 1e-6
# metric constants below this are treated as zero
NON_REGULAR_THRESHOLD = 1e-10


class _NonRegular:
    """Sentinel returned by :func:`metric_constant` for non-regular metrics."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NON_REGULAR"

    def __bool__(self):
        return False


NON_REGULAR = _NonRegular()


@dataclass(frozen=True)
class MCFunction:
    """An MC function together with the metadata the library needs.

    ``kernel(x, y)`` evaluates ``c`` on broadcastable arrays of strictly
    positive reals. ``continuation(z)`` evaluates ``c(z, 1)`` for complex
    ``z`` off the negative axis (principal branches). ``d_kernel`` is an
    optional closed form for the representing function ``d_c``.
    """

    name: str
    params: Mapping[str, float]
    kernel: Callable
    normalized: bool = True
    regular: bool = True
    closed_form_metric_constant: Optional[float] = None
    continuation: Optional[Callable] = None
    d_kernel: Optional[Callable] = field(default=None, repr=False)
    fault: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    @property
    def label(self):
        tag = "+fault" if self.fault else ""
        if not self.params:
            return self.name + tag
        inner = ",".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.name}({inner}){tag}"

    def __call__(self, x, y):
        return eval_c(self, x, y)

    evaluate = __call__

    def f(self, t):
        """The operator monotone function ``f(t) = 1/c(t, 1)``."""
        t = np.asarray(t, dtype=float)
        return _scalar(1.0 / self.kernel(t, np.ones_like(t)))


@dataclass(frozen=True)
class KernelGrid:
    """Sample points ``(x, y)`` in the open first quadrant, with optional values."""

    points: np.ndarray
    values: Optional[np.ndarray] = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 2)
        if not np.all(pts > 0):
            raise DomainError("grid points must be strictly positive")
        object.__setattr__(self, "points", pts)
        if self.values is not None:
            vals = np.asarray(self.values, dtype=float)
            if vals.shape != (len(pts),):
                raise ValueError("values must match points in length")
            object.__setattr__(self, "values", vals)

    @classmethod
    def log_spaced(cls, lo=1e-3, hi=1e3, n=7):
        axis = np.logspace(np.log10(lo), np.log10(hi), n)
        xx, yy = np.meshgrid(axis, axis, indexing="ij")
        return cls(np.column_stack([xx.ravel(), yy.ravel()]))

    @property
    def x(self):
        return self.points[:, 0]

    @property
    def y(self):
        return self.points[:, 1]

    def evaluate(self, mc):
        return KernelGrid(self.points, eval_c(mc, self.x, self.y))

    def __len__(self):
        return len(self.points)


def _scalar(a):
    a = np.asarray(a)
    return float(a) if a.ndim == 0 else a


def _positive(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(~(x > 0)) or np.any(~(y > 0)):
        raise DomainError("MC functions are defined for x > 0 and y > 0 only")
    return np.broadcast_arrays(x, y)


def _nonnegative(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(~(x >= 0)) or np.any(~(y >= 0)):
        raise DomainError("arguments must lie in the closed first quadrant")
    return np.broadcast_arrays(x, y)


def _symmetric(g):
    """Turn ``g(t) = c(t, 1)`` on ``0 < t <= 1`` into a full kernel.

    Uses symmetry and homogeneity: ``c(x, y) = g(min/max) / max``.
    """

    def kernel(x, y):
        lo = np.minimum(x, y)
        hi = np.maximum(x, y)
        return g(lo / hi) / hi

    return kernel


def _phi(z):
    # expm1(z)/z to third order; |z| <= 2e-6 here
    return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0))


def _near(t):
    return (1.0 - t) <= NEAR_DIAGONAL * (1.0 + t)


def _wyd_g(p):
    q = 1.0 - p

    def g(t):
        t = np.asarray(t, dtype=float)
        s = np.log(t)
        with np.errstate(invalid="ignore", divide="ignore"):
            far_val = np.expm1(p * s) * np.expm1(q * s) / (p * q * np.expm1(s) ** 2)
        near_val = _phi(p * s) * _phi(q * s) / _phi(s) ** 2
        return np.where(_near(t), near_val, far_val)

    return g


def _kubo_g(t):
    t = np.asarray(t, dtype=float)
    s = np.log(t)
    with np.errstate(invalid="ignore", divide="ignore"):
        far_val = s / np.expm1(s)
    return np.where(_near(t), 1.0 / _phi(s), far_val)


def _wy_g(t):
    return 4.0 / (np.sqrt(t) + 1.0) ** 2


def _bures_g(t):
    return 2.0 / (1.0 + t)


def _extreme_g(lam):
    def g(t):
        return 0.5 * (1.0 + lam) * (1.0 / (t + lam) + 1.0 / (lam * t + 1.0))

    return g


def _bridge_g(gamma):
    def g(t):
        return t ** (-gamma) * (0.5 * (t + 1.0)) ** (2.0 * gamma - 1.0)

    return g


def _variant_g(p):
    q = 1.0 - p

    def g(t):
        return (
            (2.0 - p) ** (2.0 * p)
            / ((t + q) ** p * (1.0 + q * t) ** p)
            * (0.5 * (t + 1.0)) ** (2.0 * p - 1.0)
        )

    return g


def _wyd_continuation(p):
    q = 1.0 - p

    def cont(z):
        z = np.asarray(z, dtype=complex)
        return (z**p - 1.0) * (z**q - 1.0) / (p * q * (z - 1.0) ** 2)

    return cont


def _with_zero_extension(d_raw):
    def d(x, y):
        zero = (x == 0) | (y == 0)
        xs = np.where(zero, 1.0, x)
        ys = np.where(zero, 1.0, y)
        return np.where(zero, 0.0, d_raw(xs, ys))

    return d


def _check(cond, message):
    if not cond:
        raise ParameterError(message)


def builtin(name, **params):
    """Construct a built-in MC function.

    >>> builtin("wyd", p=0.5)(4.0, 1.0)
    0.4444444444444444
    """
    key = name.lower().replace("-", "_")
    if key == "wyd":
        _check(set(params) == {"p"}, "wyd takes exactly one parameter p")
        p = float(params["p"])
        _check(0.0 < p < 1.0, f"wyd needs 0 < p < 1, got {p}")
        q = 1.0 - p
        return MCFunction(
            "wyd",
            {"p": p},
            _symmetric(_wyd_g(p)),
            closed_form_metric_constant=p * q,
            continuation=_wyd_continuation(p),
            d_kernel=_with_zero_extension(
                lambda x, y: (x**p * y**q + x**q * y**p) / (p * q)
            ),
        )
    if key == "wy":
        _check(not params, "wy takes no parameters")
        return MCFunction(
            "wy",
            {},
            _symmetric(_wy_g),
            closed_form_metric_constant=0.25,
            continuation=lambda z: 4.0 / (np.sqrt(np.asarray(z, dtype=complex)) + 1.0) ** 2,
            d_kernel=_with_zero_extension(lambda x, y: 8.0 * np.sqrt(x * y)),
        )
    if key == "bures":
        _check(not params, "bures takes no parameters")
        return MCFunction(
            "bures",
            {},
            _symmetric(_bures_g),
            closed_form_metric_constant=0.5,
            continuation=lambda z: 2.0 / (1.0 + np.asarray(z, dtype=complex)),
            d_kernel=_with_zero_extension(lambda x, y: 8.0 * x * y / (x + y)),
        )
    if key == "kubo":
        _check(not params, "kubo takes no parameters")
        return MCFunction(
            "kubo",
            {},
            _symmetric(_kubo_g),
            regular=False,
            closed_form_metric_constant=0.0,
            continuation=lambda z: np.log(np.asarray(z, dtype=complex))
            / (np.asarray(z, dtype=complex) - 1.0),
        )
    if key == "bridge":
        _check(set(params) == {"gamma"}, "bridge takes exactly one parameter gamma")
        gamma = float(params["gamma"])
        _check(0.0 <= gamma <= 1.0, f"bridge needs 0 <= gamma <= 1, got {gamma}")
        regular = gamma == 0.0
        g = _bridge_g(gamma)
        return MCFunction(
            "bridge",
            {"gamma": gamma},
            _symmetric(g),
            regular=regular,
            closed_form_metric_constant=0.5 if regular else 0.0,
            continuation=lambda z: g(np.asarray(z, dtype=complex)),
            d_kernel=(
                _with_zero_extension(lambda x, y: 8.0 * x * y / (x + y)) if regular else None
            ),
        )
    if key == "extreme":
        _check(set(params) == {"lam"}, "extreme takes exactly one parameter lam")
        lam = float(params["lam"])
        _check(0.0 <= lam <= 1.0, f"extreme needs 0 <= lam <= 1, got {lam}")
        g = _extreme_g(lam)
        m = 2.0 * lam / (1.0 + lam) ** 2
        d_kernel = None
        if lam > 0:
            d_kernel = _with_zero_extension(
                lambda x, y: (1.0 + lam) ** 2 / lam * eval_f_lambda(lam, x, y)
            )
        return MCFunction(
            "extreme",
            {"lam": lam},
            _symmetric(g),
            regular=lam > 0,
            closed_form_metric_constant=m,
            continuation=lambda z: g(np.asarray(z, dtype=complex)),
            d_kernel=d_kernel,
        )
    if key == "variant_bridge":
        _check(set(params) == {"p"}, "variant_bridge takes exactly one parameter p")
        p = float(params["p"])
        _check(0.0 <= p <= 1.0, f"variant_bridge needs 0 <= p <= 1, got {p}")
        g = _variant_g(p)
        m = 0.5 * (4.0 * (1.0 - p) / (2.0 - p) ** 2) ** p
        return MCFunction(
            "variant_bridge",
            {"p": p},
            _symmetric(g),
            regular=p < 1.0,
            closed_form_metric_constant=m,
            continuation=lambda z: g(np.asarray(z, dtype=complex)),
        )
    raise ParameterError(f"unknown metric {name!r}; known: {', '.join(builtin_names())}")


def builtin_names():
    return ("wyd", "wy", "bures", "kubo", "bridge", "extreme", "variant_bridge")


def eval_c(mc, x, y):
    """Evaluate ``c(x, y)`` for ``x, y > 0``."""
    x, y = _positive(x, y)
    return _scalar(mc.kernel(x, y))


def eval_c_hat(mc, x, y):
    """Evaluate ``(x - y)**2 c(x, y)`` on the closed first quadrant.

    On the axes the continuous extension is ``x/m(c)`` for regular ``c`` and
    ``inf`` otherwise; the diagonal (including the origin) is exactly zero.
    """
    x, y = _nonnegative(x, y)
    diag = x == y
    axis = ((x == 0) | (y == 0)) & ~diag
    inner = ~(diag | axis)
    out = np.zeros(x.shape)
    if np.any(inner):
        xi, yi = x[inner], y[inner]
        out[inner] = (xi - yi) ** 2 * mc.kernel(xi, yi)
    if np.any(axis):
        m = metric_constant(mc)
        out[axis] = (x[axis] + y[axis]) / m if m else np.inf
    return _scalar(out)


def eval_d(mc, x, y):
    """Representing function ``d_c(x, y) = (x + y)/m(c) - c_hat(x, y)``.

    Extended continuously to the closed quadrant with ``d(t, 0) = d(0, t) = 0``.
    """
    m = metric_constant(mc)
    if not m:
        raise RegularityError(f"{mc.label} is not regular; d_c is undefined")
    x, y = _nonnegative(x, y)
    if mc.d_kernel is not None:
        return _scalar(mc.d_kernel(x, y))
    zero = (x == 0) | (y == 0)
    xs = np.where(zero, 1.0, x)
    ys = np.where(zero, 1.0, y)
    with np.errstate(invalid="ignore"):
        c_hat = np.where(xs == ys, 0.0, (xs - ys) ** 2 * mc.kernel(xs, ys))
    return _scalar(np.where(zero, 0.0, (xs + ys) / m - c_hat))


def eval_f_lambda(lam, x, y):
    """``f_lam(x, y) = xy c_lam(x, y)`` for ``0 <= lam <= 1``."""
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    x, y = _positive(x, y)
    xy = x * y
    return _scalar(0.5 * (1.0 + lam) * (xy / (x + lam * y) + xy / (lam * x + y)))


def metric_constant(mc):
    """``m(c) = lim_{t->0} 1/c(t, 1)``, or ``NON_REGULAR`` when it vanishes.

    Closed forms are used when the MC function carries one; otherwise the
    limit is extrapolated numerically by :func:`numeric_metric_constant`.
    """
    m = mc.closed_form_metric_constant
    if m is None:
        return numeric_metric_constant(mc)
    return m if m >= NON_REGULAR_THRESHOLD else NON_REGULAR


def numeric_metric_constant(mc, exponents=range(6, 301, 2)):
    """Extrapolate ``lim_{t->0} 1/c(t, 1)`` from ``t = 10**-k``.

    Aitken's delta-squared process is applied to consecutive triples of the
    geometric ladder, which removes a leading ``t**alpha`` correction for any
    ``alpha``. The limit is accepted when the last three extrapolants agree to
    1e-8 relative; a limit below 1e-10, or a ladder that keeps drifting
    (logarithmic decay such as the Kubo metric's ``1/|log t|``), is
    classified ``NON_REGULAR``.
    """
    t = 10.0 ** -np.asarray(list(exponents), dtype=float)
    f = 1.0 / np.asarray(mc.kernel(t, np.ones_like(t)), dtype=float)
    if not np.all(np.isfinite(f)):
        raise DomainError(f"{mc.label}: 1/c(t,1) is not finite near t = 0")
    d1 = f[1:-1] - f[:-2]
    d2 = f[2:] - f[1:-1]
    denom = d2 - d1
    flat = np.abs(denom) <= 1e-15 * np.maximum(np.abs(f[2:]), 1e-300)
    with np.errstate(divide="ignore", invalid="ignore"):
        acc = np.where(flat, f[2:], f[2:] - d2 * d2 / np.where(flat, 1.0, denom))
    tail = acc[-3:]
    est = float(tail[-1])
    if est < NON_REGULAR_THRESHOLD:
        return NON_REGULAR
    spread = float(np.max(tail) - np.min(tail))
    if spread > 1e-8 * abs(est):
        return NON_REGULAR
    return est


def perturbed(mc, delta, kernel="c"):
    """Return a deliberately corrupted copy of ``mc`` for fault injection.

    ``kernel="c"`` adds ``delta`` to ``c(x, y)``; ``kernel="d"`` adds it to the
    representing function ``d_c``. Name, parameters, metric constant and flags
    are kept, so tabulated representations and closed forms still resolve to
    the uncorrupted family while every evaluation sees the fault.

    For a corrupted ``c`` the representing function becomes
    ``d - delta (x - y)**2`` on the whole closed quadrant: the identity
    ``d(t, 0) = 0`` rests on ``c(t, 0) = 1/(m t)``, which the fault breaks.
    """
    if kernel == "c":
        base = mc.kernel
        m = metric_constant(mc)
        d_kernel = None
        if m:

            def d_kernel(x, y):
                return np.asarray(eval_d(mc, x, y)) - delta * (x - y) ** 2

        cont = mc.continuation
        return replace(
            mc,
            kernel=lambda x, y: base(x, y) + delta,
            continuation=None if cont is None else (lambda z: cont(z) + delta),
            d_kernel=d_kernel,
            fault=mc.fault + delta,
        )
    if kernel == "d":
        m = metric_constant(mc)
        if not m:
            raise RegularityError("cannot perturb d_c of a non-regular metric")
        return replace(
            mc,
            d_kernel=lambda x, y: np.asarray(eval_d(mc, x, y)) + delta,
            fault=mc.fault + delta,
        )
    raise ValueError(f"kernel must be 'c' or 'd', not {kernel!r}")


def variant_bridge_f(p, t):
    """Normalized operator monotone function of the variant bridge."""
    t = np.asarray(t, dtype=float)
    q = 4.0 * (1.0 - p + t) * (1.0 + (1.0 - p) * t) / ((2.0 - p) ** 2 * (1.0 + t) ** 2)
    return _scalar(0.5 * (1.0 + t) * q**p)


def variant_bridge_dfdp(p, t):
    """Exact ``d/dp`` of :func:`variant_bridge_f` (log term included)."""
    t = np.asarray(t, dtype=float)
    q = 4.0 * (1.0 - p + t) * (1.0 + (1.0 - p) * t) / ((2.0 - p) ** 2 * (1.0 + t) ** 2)
    dlogq = 2.0 / (2.0 - p) - 1.0 / (1.0 - p + t) - t / (1.0 + (1.0 - p) * t)
    return _scalar(variant_bridge_f(p, t) * (np.log(q) + p * dlogq))


def variant_bridge_dfdp_published(p, t):
    """Published closed form for ``d/dp`` of :func:`variant_bridge_f`.

    It keeps only the ``p * Q**(p-1) * dQ/dp`` part of the derivative and
    drops ``f * log Q``; kept so the gap can be measured.
    """
    t = np.asarray(t, dtype=float)
    q = 4.0 * (1.0 - p + t) * (1.0 + (1.0 - p) * t) / ((2.0 - p) ** 2 * (1.0 + t) ** 2)
    return _scalar(-2.0 * p**2 * (1.0 - t) ** 2 / ((2.0 - p) ** 3 * (1.0 + t)) * q ** (p - 1.0))


def _random_ordered_pair(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a = g @ g.conj().T / n + 1e-2 * np.eye(n)
    h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    b = a + h @ h.conj().T * rng.uniform(0.01, 2.0) / n
    return a, b


def _apply_scalar_function(func, a):
    w, v = np.linalg.eigh(a)
    return (v * func(w)) @ v.conj().T


def check_axioms(mc, grid, tol=1e-10, seed=0, matrix_trials=30):
    """Certify the MC-function axioms numerically.

    Checks symmetry, degree -1 homogeneity, the functional equation
    ``f(t) = t f(1/t)``, normalization (if claimed) on the grid, and matrix
    monotonicity ``A <= B => f(A) <= f(B)`` on random ordered pairs of sizes
    2 and 3. All errors are relative.
    """
    rb = ReportBuilder(f"axioms:{mc.label}", seed)
    x, y = grid.x, grid.y
    cxy = np.asarray(mc.kernel(x, y), dtype=float)
    cyx = np.asarray(mc.kernel(y, x), dtype=float)
    for i in range(len(grid)):
        rb.record(abs(cxy[i] - cyx[i]) / cxy[i], tol, check="symmetry", x=x[i], y=y[i])
    for s in (1e-3, 0.37, 2.5, 1e3):
        cs = np.asarray(mc.kernel(s * x, s * y), dtype=float)
        for i in range(len(grid)):
            rb.record(
                abs(s * cs[i] - cxy[i]) / cxy[i], tol, check="homogeneity", s=s, x=x[i], y=y[i]
            )
    t = np.unique(x / y)
    ones = np.ones_like(t)
    f_t = 1.0 / np.asarray(mc.kernel(t, ones), dtype=float)
    f_inv = 1.0 / np.asarray(mc.kernel(1.0 / t, ones), dtype=float)
    for i in range(len(t)):
        rb.record(abs(f_t[i] - t[i] * f_inv[i]) / f_t[i], tol, check="functional-equation", t=t[i])
    if mc.normalized:
        c11 = float(np.asarray(mc.kernel(np.array([1.0]), np.array([1.0])))[0])
        rb.record(abs(c11 - 1.0), tol, check="normalization", value=c11)
    rng = np.random.default_rng([seed, 0x5EED])

    def f(w):
        return 1.0 / np.asarray(mc.kernel(w, np.ones_like(w)), dtype=float)

    for k in range(matrix_trials):
        n = 2 + k % 2
        a, b = _random_ordered_pair(rng, n)
        diff = _apply_scalar_function(f, b) - _apply_scalar_function(f, a)
        diff = 0.5 * (diff + diff.conj().T)
        scale = max(1.0, np.linalg.norm(diff, 2))
        lowest = float(np.linalg.eigvalsh(diff)[0])
        rb.record(max(0.0, -lowest) / scale, tol, check="matrix-monotonicity", n=n)
    return rb.build()
