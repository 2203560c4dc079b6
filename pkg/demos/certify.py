"""Run every property suite once and print a compact summary."""

from skewinfo import SUITES, SamplerConfig, run_suite

cfg = SamplerConfig(seed=7, trials=50)
for name in SUITES:
    rep = run_suite(name, cfg)
    status = "ok" if rep.passed else "FAILED"
    print(f"{name:24s} {rep.trials:6d} trials  max violation {rep.max_violation:.2e}  {status}")

# a corrupted kernel must not slip through
print()
for name in ("reconstruction-measure", "sandwich"):
    rep = run_suite(name, cfg, fault=1e-3)
    print(f"{name} with c + 1e-3: {rep.failures} of {rep.trials} trials fail")
