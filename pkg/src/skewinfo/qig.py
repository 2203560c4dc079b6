"""State-level quantities: monotone metrics, skew informations, correlations.

Functions of the commuting pair ``(L_rho, R_rho)`` act, in the eigenbasis of
``rho``, as entrywise weights ``k(lam_i, lam_j)`` on matrix elements. All
quantities below are computed that way from one Hermitian eigendecomposition.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, PositivityError, RegularityError
from .mcfunc import eval_c_hat, eval_d, metric_constant
from .quadrature import DEFAULT_CONFIG
from .representation import measure_integral, measure_of

__all__ = [
    "SpectralDecomposition",
    "QuantumChannel",
    "as_density",
    "as_observable",
    "spectral",
    "metric",
    "skew_info",
    "skew_info_commutator",
    "lambda_skew_info",
    "mixture_skew_info",
    "wyd_trace_formula",
    "variance",
    "correlation",
    "aggregate",
    "evolve",
    "apply_channel",
    "partial_trace_channel",
    "unitary_channel",
    "matrix_function",
]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
NEGATIVE_TOL = 1e-12
# min eigenvalue demanded by the metric and commutator forms
POSITIVE_DEFINITE_TOL = 1e-12
# eigenvalues below this are roundoff from a rank-deficient state; d(t, 0) is
# only Holder continuous at 0, so such noise must be snapped to exact zeros
ZERO_EIGENVALUE = 1e-13


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    basis: np.ndarray

    def reconstruct(self):
        return (self.basis * self.eigenvalues) @ self.basis.conj().T


@dataclass(frozen=True)
class QuantumChannel:
    """Completely positive trace preserving map in Kraus form."""

    kraus_operators: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus_operators)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        n = ops[0].shape[1]
        if any(k.ndim != 2 or k.shape != ops[0].shape for k in ops):
            raise ValueError("Kraus operators must share one m x n shape")
        gram = sum(k.conj().T @ k for k in ops)
        err = np.linalg.norm(gram - np.eye(n))
        if err > 1e-10:
            raise ValueError(f"Kraus set is not trace preserving (error {err:.3g})")
        object.__setattr__(self, "kraus_operators", ops)

    @property
    def input_dim(self):
        return self.kraus_operators[0].shape[1]

    @property
    def output_dim(self):
        return self.kraus_operators[0].shape[0]

    def __call__(self, m):
        return apply_channel(self, m)


def _square(m, what):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"{what} must be a square matrix, got shape {m.shape}")
    return m


def _check_hermitian(m, what):
    scale = max(1.0, np.abs(m).max())
    if np.abs(m - m.conj().T).max() > HERMITIAN_TOL * scale:
        raise DomainError(f"{what} is not Hermitian")


def as_observable(a):
    """Validate a Hermitian matrix and return it as a complex array."""
    a = _square(a, "observable")
    _check_hermitian(a, "observable")
    return a


def as_density(rho):
    """Validate a density matrix: Hermitian, unit trace, positive semidefinite."""
    rho = _square(rho, "density matrix")
    if rho.shape[0] < 2:
        raise DomainError("density matrices need dimension at least 2")
    _check_hermitian(rho, "density matrix")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise PositivityError(f"density matrix has trace {tr:.17g}, expected 1")
    lowest = np.linalg.eigvalsh(rho)[0]
    if lowest < -NEGATIVE_TOL:
        raise PositivityError(f"density matrix has negative eigenvalue {lowest:.3g}")
    return rho


def spectral(m):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Each eigenvector's phase is fixed so its largest-modulus entry is real
    and positive, making the output a function of the input alone.
    """
    m = _square(m, "matrix")
    _check_hermitian(m, "matrix")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    w, v = w[::-1], v[:, ::-1]
    idx = np.argmax(np.abs(v), axis=0)
    pivots = v[idx, np.arange(v.shape[1])]
    v = v * (np.abs(pivots) / pivots)
    return SpectralDecomposition(w, v)


def matrix_function(func, m):
    """Apply a scalar function to a Hermitian matrix through its spectrum."""
    sd = spectral(m)
    return (sd.basis * func(sd.eigenvalues)) @ sd.basis.conj().T


def _in_basis(sd, a):
    a = np.asarray(a, dtype=complex)
    if a.shape != (len(sd.eigenvalues),) * 2:
        raise DomainError(
            f"dimension mismatch: state is {len(sd.eigenvalues)}-dimensional, operator {a.shape}"
        )
    return sd.basis.conj().T @ a @ sd.basis


def _state_spectrum(rho, strict):
    rho = as_density(rho)
    sd = spectral(rho)
    lam = sd.eigenvalues
    if strict:
        if lam[-1] <= POSITIVE_DEFINITE_TOL:
            raise PositivityError(
                f"state must be positive definite (min eigenvalue {lam[-1]:.3g})"
            )
    else:
        lam = np.where(lam < ZERO_EIGENVALUE, 0.0, lam)
    return SpectralDecomposition(lam, sd.basis)


def _pair_grid(lam):
    return np.meshgrid(lam, lam, indexing="ij")


def _regular_constant(mc):
    m = metric_constant(mc)
    if not m:
        raise RegularityError(f"{mc.label} is not a regular metric")
    return m


def _settle(value, what):
    if value < -NEGATIVE_TOL:
        raise ArithmeticError(f"{what} evaluated to {value:.6g} < 0; numerical breakdown")
    return max(value, 0.0)


def metric(mc, rho, a, b):
    """Monotone metric ``K_rho(A, B) = tr A* c(L_rho, R_rho) B``."""
    sd = _state_spectrum(rho, strict=True)
    at, bt = _in_basis(sd, a), _in_basis(sd, b)
    x, y = _pair_grid(sd.eigenvalues)
    weights = np.asarray(mc.kernel(x, y), dtype=float)
    return complex(np.sum(at.conj() * weights * bt))


def skew_info(mc, rho, a):
    """Metric adjusted skew information through the representing function.

    ``I = tr rho A^2 - m/2 sum_ij d(lam_i, lam_j) |A_ij|^2`` in the eigenbasis
    of ``rho``. Valid on the whole state space, pure states included.
    """
    m = _regular_constant(mc)
    a = as_observable(a)
    sd = _state_spectrum(rho, strict=False)
    at = _in_basis(sd, a)
    lam = sd.eigenvalues
    x, y = _pair_grid(lam)
    weights = np.abs(at) ** 2
    second_moment = float(np.sum(lam[:, None] * weights))
    d = np.asarray(eval_d(mc, x, y), dtype=float)
    return _settle(second_moment - 0.5 * m * float(np.sum(d * weights)), "skew information")


def skew_info_commutator(mc, rho, a):
    """``m/2 sum_ij (lam_i - lam_j)^2 c(lam_i, lam_j) |A_ij|^2``; needs ``rho > 0``."""
    m = _regular_constant(mc)
    a = as_observable(a)
    sd = _state_spectrum(rho, strict=True)
    at = _in_basis(sd, a)
    x, y = _pair_grid(sd.eigenvalues)
    c_hat = np.asarray(eval_c_hat(mc, x, y), dtype=float)
    return _settle(0.5 * m * float(np.sum(c_hat * np.abs(at) ** 2)), "skew information")


def lambda_skew_info(lam, rho, a):
    """``I_lam(rho, A) = tr rho A^2 - tr A f_lam(L_rho, R_rho) A`` for ``0 < lam <= 1``."""
    lam = float(lam)
    if not 0.0 < lam <= 1.0:
        raise DomainError(f"lambda must lie in (0, 1], got {lam}")
    return float(_lambda_skew_batch(np.array([lam]), rho, a)[0])


def _lambda_skew_batch(lams, rho, a):
    a = as_observable(a)
    sd = _state_spectrum(rho, strict=False)
    at = _in_basis(sd, a)
    ev = sd.eigenvalues
    weights = np.abs(at) ** 2
    second_moment = float(np.sum(ev[:, None] * weights))
    pos = ev > 0
    wpos = weights[np.ix_(pos, pos)]
    x, y = _pair_grid(ev[pos])
    lams = np.asarray(lams, dtype=float)
    # vectorized f_lam over a stack of lambdas; pairs touching a zero eigenvalue give 0
    xy = x * y
    lk = lams[:, None, None]
    f = 0.5 * (1.0 + lk) * (xy / (x + lk * y) + xy / (lk * x + y))
    return second_moment - np.einsum("kij,ij->k", f, wpos)


def mixture_skew_info(mc, rho, a, config=DEFAULT_CONFIG):
    """Skew information as the mixture ``m/2 int I_lam (1+lam)^2/lam dmu_c``.

    Requires a tabulated representing measure.
    """
    m = _regular_constant(mc)
    measure = measure_of(mc)

    def func(lam, lamc):
        return _lambda_skew_batch(lam, rho, a) * (1.0 + lam) ** 2 / lam

    value, _ = measure_integral(measure, func, config)
    return 0.5 * m * value


def wyd_trace_formula(p, rho, a):
    """``-1/2 tr [rho^p, A][rho^(1-p), A]`` computed with matrix powers."""
    rho = as_density(rho)
    a = as_observable(a)
    clip = lambda w: np.clip(w, 0.0, None)  # noqa: E731
    rp = matrix_function(lambda w: clip(w) ** p, rho)
    rq = matrix_function(lambda w: clip(w) ** (1.0 - p), rho)
    c1 = rp @ a - a @ rp
    c2 = rq @ a - a @ rq
    return float(-0.5 * np.trace(c1 @ c2).real)


def variance(rho, a):
    """``Var_rho(A) = tr rho A^2 - (tr rho A)^2``."""
    rho = as_density(rho)
    a = as_observable(a)
    if a.shape != rho.shape:
        raise DomainError("dimension mismatch between state and observable")
    mean = np.trace(rho @ a).real
    return _settle(float(np.trace(rho @ a @ a).real - mean * mean), "variance")


def correlation(mc, rho, a, b):
    """Metric adjusted correlation ``tr rho A*B - m/2 tr A* d(L_rho, R_rho) B``."""
    m = _regular_constant(mc)
    sd = _state_spectrum(rho, strict=False)
    at, bt = _in_basis(sd, a), _in_basis(sd, b)
    lam = sd.eigenvalues
    x, y = _pair_grid(lam)
    d = np.asarray(eval_d(mc, x, y), dtype=float)
    # tr rho A*B in the eigenbasis: sum_ij lam_j conj(A_ij) B_ij
    first = np.sum(lam[None, :] * at.conj() * bt)
    return complex(first - 0.5 * m * np.sum(at.conj() * d * bt))


def aggregate(rho1, rho2, a1, a2):
    """Joint state ``rho1 (x) rho2`` and additive observable ``A1 (x) 1 + 1 (x) A2``."""
    rho1, rho2 = as_density(rho1), as_density(rho2)
    a1, a2 = as_observable(a1), as_observable(a2)
    n1, n2 = rho1.shape[0], rho2.shape[0]
    if a1.shape[0] != n1 or a2.shape[0] != n2:
        raise DomainError("observable dimensions must match their subsystems")
    rho = np.kron(rho1, rho2)
    a = np.kron(a1, np.eye(n2)) + np.kron(np.eye(n1), a2)
    return rho, a


def evolve(rho, h, t):
    """``rho_t = exp(itH) rho exp(-itH)`` by spectral exponentiation of ``H``."""
    rho = _square(rho, "state")
    u = matrix_function(lambda w: np.exp(1j * t * w), as_observable(h))
    out = u @ rho @ u.conj().T
    return 0.5 * (out + out.conj().T)


def apply_channel(channel, m):
    """``sum_i K_i M K_i*``."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (channel.input_dim, channel.input_dim):
        raise DomainError(f"channel expects {channel.input_dim}-dimensional input")
    return sum(k @ m @ k.conj().T for k in channel.kraus_operators)


def partial_trace_channel(d1, d2, keep="first"):
    """Partial trace on ``C^d1 (x) C^d2`` as an explicit Kraus family."""
    if keep == "first":
        ops = [np.kron(np.eye(d1), np.eye(d2)[k : k + 1, :]) for k in range(d2)]
    elif keep == "second":
        ops = [np.kron(np.eye(d1)[k : k + 1, :], np.eye(d2)) for k in range(d1)]
    else:
        raise ValueError("keep must be 'first' or 'second'")
    return QuantumChannel(tuple(ops))


def unitary_channel(u):
    return QuantumChannel((np.asarray(u, dtype=complex),))
