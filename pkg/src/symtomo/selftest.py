"""Golden-fixture self test: pipeline output against the hand-typed closed forms."""

from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np

from . import reference as ref
from .states import fock_product, entangled_pair, mixed_pair
from .tomography import TomographyParams, marginal, tomogram

PARAM_SETS = (
    (0.0, 1.0, 0.0, 1.0),
    (1.0, 1.0, 0.0, 2.0),
    (0.5, -1.5, 2.0, 0.7),
    (-2.2, 0.4, 1.3, -2.6),
)

STATES = {
    "entangled_2_13": entangled_pair,
    "mixed_last1": mixed_pair,
    "product_last2": lambda: fock_product([0, 1]),
    "product_last3": lambda: fock_product([1, 0]),
}


@dataclass(frozen=True)
class Check:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.deviation <= self.tolerance)


def run_checks(perturbation: float = 0.0) -> list[Check]:
    """Evaluate every fixture check; ``perturbation`` is added to fixture values."""
    axis = np.linspace(-5.0, 5.0, 41)
    X, Y = np.meshgrid(axis, axis, indexing="ij")
    checks = []

    def dev(a, b):
        return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))

    p0 = TomographyParams.from_flat(PARAM_SETS[0])
    w = tomogram(entangled_pair(), p0)
    checks.append(Check("particular_2_14 pipeline", dev(w(X, Y), ref.particular(X, Y) + perturbation), 1e-12))
    checks.append(Check("particular_2_14 symbolic fixture",
                        dev(ref.reference_distribution("particular_2_14")(X, Y),
                            ref.particular(X, Y) + perturbation), 1e-12))

    for flat in PARAM_SETS:
        params = TomographyParams.from_flat(flat)
        tag = "(" + ",".join(f"{v:g}" for v in flat) + ")"
        for name, make in STATES.items():
            t = tomogram(make(), params)
            fixture = ref.evaluate(name, X, Y, params) + perturbation
            checks.append(Check(f"{name} pipeline {tag}", dev(t(X, Y), fixture), 1e-10))
            checks.append(Check(f"{name} symbolic fixture {tag}",
                                dev(ref.reference_distribution(name, params)(X, Y), fixture), 1e-10))
            checks.append(Check(f"{name} normalization {tag}",
                                abs(t.normalization() - 1.0 - perturbation), 1e-9))
            for (jname, keep), profile in ref.MARGINALS.items():
                if jname != name:
                    continue
                m = marginal(t, keep)
                expected = profile(axis, params.mu[keep], params.nu[keep]) + perturbation
                checks.append(Check(f"{name} marginal mode {keep + 1} {tag}",
                                    dev(m(axis), expected), 1e-10))
                checks.append(Check(f"{name} marginal mode {keep + 1} normalization {tag}",
                                    abs(m.normalization() - 1.0 - perturbation), 1e-9))
        half = 0.5 * (ref.evaluate("product_last2", X, Y, params)
                      + ref.evaluate("product_last3", X, Y, params))
        checks.append(Check(f"half-sum identity {tag}",
                            dev(half, ref.evaluate("mixed_last1", X, Y, params) + perturbation), 1e-12))
    return checks


def format_table(checks: list[Check]) -> str:
    width = max(len(c.name) for c in checks)
    lines = [f"{'status':6}  {'check':{width}}  {'max deviation':>13}  {'tolerance':>9}"]
    for c in checks:
        lines.append(f"{'PASS' if c.passed else 'FAIL':6}  {c.name:{width}}  "
                     f"{c.deviation:13.3e}  {c.tolerance:9.0e}")
    n_fail = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - n_fail}/{len(checks)} checks passed")
    return "\n".join(lines)


def run_selftest(perturbation: float = 0.0, stream=None) -> int:
    """Print the pass/fail table; return 0 iff every check passes, else 1."""
    stream = sys.stdout if stream is None else stream
    checks = run_checks(perturbation)
    print(format_table(checks), file=stream)
    return 0 if all(c.passed for c in checks) else 1
