"""Seeded samplers and property suites certifying the theory numerically.

Every suite is a pure function of ``(name, SamplerConfig, metrics, fault)``:
random draws come from generators keyed by the seed, a per-suite stream id,
the metric index and the trial index, so reports are bit-identical across
runs and independent of evaluation order.
"""

import math
import zlib
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedMetricError
from .mcfunc import (
    NON_REGULAR,
    KernelGrid,
    builtin,
    check_axioms,
    eval_c,
    metric_constant,
    numeric_metric_constant,
    perturbed,
    variant_bridge_dfdp,
    variant_bridge_dfdp_published,
    variant_bridge_f,
)
from .qig import (
    aggregate,
    correlation,
    evolve,
    metric,
    mixture_skew_info,
    partial_trace_channel,
    QuantumChannel,
    skew_info,
    skew_info_commutator,
    variance,
    wyd_trace_formula,
)
from .report import PropertyReport, ReportBuilder
from .representation import (
    h_repr_of,
    measure_of,
    metric_constant_integral,
    reconstruct_from_h,
    reconstruct_from_measure,
)

__all__ = [
    "SamplerConfig",
    "PropertyReport",
    "SUITES",
    "sample_density",
    "sample_pure",
    "sample_observable",
    "random_density",
    "random_pure",
    "random_observable",
    "random_unitary",
    "random_channel",
    "default_metrics",
    "run_suite",
    "run_all",
]


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    dims: tuple = (2, 3, 4, 6)
    trials: int = 100
    eigenvalue_floor: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(n) for n in self.dims))
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.dims or any(n < 2 for n in self.dims):
            raise ValueError("every dimension must be at least 2")
        if not 0 <= self.eigenvalue_floor < 1.0 / max(self.dims):
            raise ValueError("eigenvalue_floor must lie in [0, 1/max(dims))")

    def dim(self, index):
        return self.dims[index % len(self.dims)]


def _rng(seed, *stream):
    return np.random.default_rng([seed % 2**64, *stream])


def _ginibre(rng, rows, cols):
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / math.sqrt(2)


def random_density(rng, n, floor=1e-6):
    """``GG*/tr(GG*)`` mixed with ``I/n`` just enough to lift the spectrum to ``floor``."""
    g = _ginibre(rng, n, n)
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T) / np.trace(rho).real
    lowest = np.linalg.eigvalsh(rho)[0]
    if lowest < floor:
        s = (floor - lowest) / (1.0 / n - lowest)
        rho = (1.0 - s) * rho + s * np.eye(n) / n
    return rho / np.trace(rho).real


def random_pure(rng, n):
    v = _ginibre(rng, n, 1)[:, 0]
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_observable(rng, n):
    """GUE-style Hermitian matrix scaled to unit operator norm."""
    g = _ginibre(rng, n, n)
    a = 0.5 * (g + g.conj().T)
    return a / np.linalg.norm(a, 2)


def random_unitary(rng, n):
    q, r = np.linalg.qr(_ginibre(rng, n, n))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_channel(rng, n, m, rank=2):
    """Kraus family from the first ``n`` columns of a random unitary on ``C^(m*rank)``."""
    rank = max(rank, -(-n // m))
    v = random_unitary(rng, m * rank)[:, :n]
    return QuantumChannel(tuple(v[k * m : (k + 1) * m, :] for k in range(rank)))


def sample_density(cfg, n, index=0):
    """Deterministic density matrix for ``(cfg.seed, index)``."""
    return random_density(_rng(cfg.seed, 1, index, n), n, cfg.eigenvalue_floor)


def sample_pure(cfg, n, index=0):
    return random_pure(_rng(cfg.seed, 2, index, n), n)


def sample_observable(cfg, n, index=0):
    return random_observable(_rng(cfg.seed, 3, index, n), n)


def default_metrics(kind="regular"):
    regular = [
        builtin("wyd", p=0.1),
        builtin("wyd", p=0.3),
        builtin("wy"),
        builtin("wyd", p=0.7),
        builtin("bures"),
        builtin("extreme", lam=0.25),
        builtin("extreme", lam=0.6),
        builtin("variant_bridge", p=0.5),
        builtin("variant_bridge", p=0.9),
    ]
    if kind == "regular":
        return regular
    return regular + [
        builtin("kubo"),
        builtin("bridge", gamma=0.25),
        builtin("bridge", gamma=0.5),
        builtin("bridge", gamma=0.75),
        builtin("bridge", gamma=1.0),
        builtin("extreme", lam=0.0),
        builtin("variant_bridge", p=1.0),
    ]


def _regular(metrics):
    return [mc for mc in metrics if metric_constant(mc)]


def _state(rng, cfg, n, pure):
    return random_pure(rng, n) if pure else random_density(rng, n, cfg.eigenvalue_floor)


def _safe(fn, *args):
    try:
        return fn(*args)
    except ArithmeticError:
        return float("nan")


def _suite_axioms(rb, cfg, metrics):
    grid = KernelGrid.log_spaced(1e-6, 1e6, 9)
    for mc in metrics:
        rep = check_axioms(mc, grid, tol=1e-10, seed=cfg.seed)
        rb.absorb(rep, metric=mc.label)


def _suite_reconstruction(rb, cfg, metrics, route):
    grid = KernelGrid.log_spaced(1e-3, 1e3, 7)
    tol = 1e-6 if route == "measure" else 1e-5
    for mc in metrics:
        try:
            rep = measure_of(mc) if route == "measure" else h_repr_of(mc)
        except UnsupportedMetricError:
            continue
        for x, y in grid.points:
            exact = eval_c(mc, x, y)
            if route == "measure":
                approx = reconstruct_from_measure(rep, x, y)
            else:
                approx = reconstruct_from_h(rep, x, y)
            rb.record(abs(approx - exact) / exact, tol, metric=mc.label, x=x, y=y)


def _suite_metric_constant(rb, cfg, metrics):
    for mc in metrics:
        closed = metric_constant(mc)
        numeric = numeric_metric_constant(mc)
        if closed:
            err = abs(numeric - closed) / closed if numeric else float("inf")
            rb.record(err, 1e-6, metric=mc.label, check="numeric-limit", numeric=repr(numeric))
        else:
            rb.record(
                0.0 if numeric is NON_REGULAR else 1.0,
                0.5,
                metric=mc.label,
                check="non-regular-classification",
                numeric=repr(numeric),
            )
        try:
            measure = measure_of(mc)
        except UnsupportedMetricError:
            continue
        if not closed and any(loc == 0.0 for loc, _ in measure.atoms):
            # a point mass at 0 makes the integral infinite outright
            full = metric_constant_integral(mc)[0]
            rb.record(0.0 if math.isinf(full) else 1.0, 0.5, metric=mc.label,
                      check="integral-divergence", last=full)
        elif closed:
            value, _ = metric_constant_integral(mc)
            rb.record(abs(value * closed - 1.0), 1e-6, metric=mc.label, check="integral-identity")
        else:
            cutoffs = [10.0**-k for k in range(3, 10)]
            values = [metric_constant_integral(mc, cutoff=c)[0] for c in cutoffs]
            increasing = all(b > a for a, b in zip(values, values[1:]))
            growing = values[-1] >= 2.0 * values[0]
            rb.record(
                0.0 if (increasing and growing) else 1.0,
                0.5,
                metric=mc.label,
                check="integral-divergence",
                last=values[-1],
            )


def _suite_sandwich(rb, cfg, metrics, stream):
    for k, mc in enumerate(_regular(metrics)):
        for i in range(cfg.trials):
            rng = _rng(cfg.seed, stream, k, i)
            n = cfg.dim(i)
            rho = _state(rng, cfg, n, pure=i % 3 == 2)
            a = random_observable(rng, n)
            val = _safe(skew_info, mc, rho, a)
            var = variance(rho, a)
            excess = max(-val, val - var, 0.0) if val == val else float("inf")
            rb.record(excess, 1e-12, metric=mc.label, trial_index=i, n=n, skew=val, var=var)


def _suite_pure_equality(rb, cfg, metrics, stream):
    for k, mc in enumerate(_regular(metrics)):
        for i in range(cfg.trials):
            rng = _rng(cfg.seed, stream, k, i)
            n = cfg.dim(i)
            rho = random_pure(rng, n)
            a = random_observable(rng, n)
            val = _safe(skew_info, mc, rho, a)
            rb.record(abs(val - variance(rho, a)), 1e-10, metric=mc.label, trial_index=i, n=n)


def _suite_convexity(rb, cfg, metrics, stream):
    for k, mc in enumerate(_regular(metrics)):
        for i in range(cfg.trials):
            rng = _rng(cfg.seed, stream, k, i)
            n = cfg.dim(i)
            r1 = _state(rng, cfg, n, pure=rng.random() < 0.25)
            r2 = _state(rng, cfg, n, pure=rng.random() < 0.25)
            a = random_observable(rng, n)
            i1, i2 = _safe(skew_info, mc, r1, a), _safe(skew_info, mc, r2, a)
            v1, v2 = variance(r1, a), variance(r2, a)
            for t in (0.25, 0.5, 0.75):
                rt = (1.0 - t) * r1 + t * r2
                it = _safe(skew_info, mc, rt, a)
                gap = it - ((1.0 - t) * i1 + t * i2)
                rb.record(max(gap, 0.0) if gap == gap else float("inf"), 1e-12,
                          metric=mc.label, check="skew-convex", trial_index=i, t=t)
                vgap = (1.0 - t) * v1 + t * v2 - variance(rt, a)
                rb.record(max(vgap, 0.0), 1e-12, metric=mc.label, check="variance-concave",
                          trial_index=i, t=t)


def _suite_additivity(rb, cfg, metrics, stream):
    for k, mc in enumerate(_regular(metrics)):
        for i in range(cfg.trials):
            rng = _rng(cfg.seed, stream, k, i)
            n1, n2 = 2 + i % 2, 2 + (i // 2) % 2
            r1 = _state(rng, cfg, n1, pure=i % 5 == 4)
            r2 = _state(rng, cfg, n2, pure=False)
            a1, a2 = random_observable(rng, n1), random_observable(rng, n2)
            rho, a = aggregate(r1, r2, a1, a2)
            lhs = _safe(skew_info, mc, rho, a)
            rhs = _safe(skew_info, mc, r1, a1) + _safe(skew_info, mc, r2, a2)
            rb.record(abs(lhs - rhs), 1e-10, metric=mc.label, trial_index=i)


def _suite_time_invariance(rb, cfg, metrics, stream):
    for k, mc in enumerate(_regular(metrics)):
        for i in range(cfg.trials):
            rng = _rng(cfg.seed, stream, k, i)
            n = cfg.dim(i)
            rho = _state(rng, cfg, n, pure=i % 4 == 3)
            a = random_observable(rng, n)
            h = a @ a - a
            base = _safe(skew_info, mc, rho, a)
            t = (0.1, 1.0, 10.0)[i % 3]
            moved = _safe(skew_info, mc, evolve(rho, h, t), a)
            rb.record(abs(moved - base), 1e-10, metric=mc.label, trial_index=i, t=t)


def _suite_metric_monotonicity(rb, cfg, metrics, stream):
    shapes = [(2, 2), (2, 3), (3, 2)]
    for k, mc in enumerate(metrics):
        for i in range(cfg.trials):
            rng = _rng(cfg.seed, stream, k, i)
            if i % 2 == 0:
                d1, d2 = shapes[(i // 2) % 3]
                n = d1 * d2
                channel = partial_trace_channel(d1, d2, keep="first" if i % 4 == 0 else "second")
                kind = "partial-trace"
            else:
                n = cfg.dim(i)
                m = 2 + rng.integers(0, n - 1)
                channel = random_channel(rng, n, int(m))
                kind = "random-kraus"
            rho = random_density(rng, n, cfg.eigenvalue_floor)
            a = random_observable(rng, n)
            if i % 4 == 3:
                a = a + 1j * random_observable(rng, n)
            before = metric(mc, rho, a, a).real
            after = metric(mc, channel(rho), channel(a), channel(a)).real
            rb.record(max(after - before, 0.0), 1e-12, metric=mc.label, channel=kind,
                      trial_index=i, before=before, after=after)


def _suite_correlation(rb, cfg, metrics, stream):
    for k, mc in enumerate(_regular(metrics)):
        for i in range(cfg.trials):
            rng = _rng(cfg.seed, stream, k, i)
            n = cfg.dim(i)
            rho = _state(rng, cfg, n, pure=i % 4 == 3)
            a, b = random_observable(rng, n), random_observable(rng, n)
            ia, ib = _safe(skew_info, mc, rho, a), _safe(skew_info, mc, rho, b)
            caa = correlation(mc, rho, a, a)
            rb.record(abs(caa - ia), 1e-10, metric=mc.label, check="diagonal", trial_index=i)
            cab = correlation(mc, rho, a, b)
            comm = np.trace(rho @ (a @ b - b @ a))
            rb.record(abs(0.5 * abs(comm) - abs(cab.imag)), 1e-10, metric=mc.label,
                      check="imaginary-part", trial_index=i)
            rb.record(max(abs(cab.real) - math.sqrt(max(ia * ib, 0.0)), 0.0), 1e-12,
                      metric=mc.label, check="cauchy-schwarz", trial_index=i)


def _suite_mixture(rb, cfg, metrics, stream):
    for k, mc in enumerate(_regular(metrics)):
        try:
            measure_of(mc)
        except UnsupportedMetricError:
            continue
        for i in range(cfg.trials):
            rng = _rng(cfg.seed, stream, k, i)
            n = cfg.dim(i)
            rho = _state(rng, cfg, n, pure=i % 5 == 4)
            a = random_observable(rng, n)
            direct = _safe(skew_info, mc, rho, a)
            mixed = mixture_skew_info(mc, rho, a)
            rb.record(abs(mixed - direct) / max(abs(direct), 1e-300), 1e-6,
                      metric=mc.label, trial_index=i)


def _suite_variant_bridge(rb, cfg, metrics):
    bures = builtin("bures")
    p0 = builtin("variant_bridge", p=0.0)
    grid = KernelGrid.log_spaced(1e-6, 1e6, 9)
    for x, y in grid.points:
        rb.record(abs(eval_c(p0, x, y) - eval_c(bures, x, y)) / eval_c(bures, x, y), 1e-12,
                  check="p=0-is-bures", x=x, y=y)
    step = 1e-5
    ts = [t for t in np.logspace(-3, 3, 13) if t != 1.0]
    for p in np.round(np.linspace(0.1, 0.9, 9), 12):
        for t in ts:
            fd = (variant_bridge_f(p + step, t) - variant_bridge_f(p - step, t)) / (2 * step)
            published = variant_bridge_dfdp_published(p, t)
            rb.record(abs(fd - published), 1e-6, check="published-derivative", p=p, t=t,
                      finite_difference=fd, published=published, exact=variant_bridge_dfdp(p, t))
            rb.record(0.0 if fd < 0 else 1.0, 0.5, check="decreasing-in-p", p=p, t=t,
                      finite_difference=fd)


def _suite_oracle_equivalence(rb, cfg, metrics, stream):
    for k, mc in enumerate(_regular(metrics)):
        p = {"wyd": mc.params.get("p"), "wy": 0.5}.get(mc.name)
        for i in range(cfg.trials):
            rng = _rng(cfg.seed, stream, k, i)
            n = cfg.dim(i)
            rho = random_density(rng, n, cfg.eigenvalue_floor)
            a = random_observable(rng, n)
            val = _safe(skew_info, mc, rho, a)
            route = _safe(skew_info_commutator, mc, rho, a)
            rb.record(abs(val - route) / (1.0 + abs(val)), 1e-10, metric=mc.label,
                      check="route-equivalence", trial_index=i)
            if p is not None:
                oracle = wyd_trace_formula(p, rho, a)
                rb.record(abs(val - oracle) / (1.0 + abs(val)), 1e-10, metric=mc.label,
                          check="trace-formula", trial_index=i)


def _wyd_grid():
    return [builtin("wyd", p=p) for p in (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)]


# name -> (runner, default metric set, whether the runner takes a random stream)
SUITES = {
    "axioms": (_suite_axioms, "all", False),
    "reconstruction-measure": (lambda rb, c, m: _suite_reconstruction(rb, c, m, "measure"), "all", False),
    "reconstruction-h": (lambda rb, c, m: _suite_reconstruction(rb, c, m, "h"), "all", False),
    "metric-constant": (_suite_metric_constant, "all", False),
    "sandwich": (_suite_sandwich, "regular", True),
    "pure-equality": (_suite_pure_equality, "regular", True),
    "convexity": (_suite_convexity, "regular", True),
    "additivity": (_suite_additivity, "regular", True),
    "time-invariance": (_suite_time_invariance, "regular", True),
    "metric-monotonicity": (_suite_metric_monotonicity, "all", True),
    "correlation": (_suite_correlation, "regular", True),
    "mixture": (_suite_mixture, "regular", True),
    "variant-bridge": (_suite_variant_bridge, "none", False),
    "oracle-equivalence": (_suite_oracle_equivalence, "oracle", True),
}


def run_suite(name, cfg=None, metrics=None, fault=None):
    """Run one property suite and return its :class:`PropertyReport`.

    Parameters
    ----------
    name : str
        One of ``SUITES``.
    cfg : SamplerConfig, optional
    metrics : list of MCFunction, optional
        Defaults to a suite-specific set of built-ins.
    fault : float, optional
        If given, every metric's kernel ``c`` is perturbed by this amount
        before the suite runs (fault injection).
    """
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    cfg = cfg or SamplerConfig()
    runner, default, stochastic = SUITES[name]
    if metrics is None:
        if default == "oracle":
            metrics = _wyd_grid() + default_metrics("regular")[4:]
        elif default == "none":
            metrics = []
        else:
            metrics = default_metrics(default)
    metrics = list(metrics)
    if fault is not None:
        metrics = [perturbed(mc, fault) for mc in metrics]
    rb = ReportBuilder(name, cfg.seed)
    if stochastic:
        runner(rb, cfg, metrics, zlib.crc32(name.encode()))
    else:
        runner(rb, cfg, metrics)
    return rb.build()


def run_all(cfg=None, metrics=None, suites=None):
    return [run_suite(name, cfg, metrics) for name in (suites or SUITES)]
