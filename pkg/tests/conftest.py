import math

import numpy as np
import pytest
from scipy.special import eval_hermite

from symtomo.tomography import TomographyParams

ACCEPTANCE_LINES = []


def record(criterion, passed, detail=""):
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def fock_value(n, x):
    """Fock wave function from scipy's Hermite polynomials (independent of symtomo)."""
    norm = 1.0 / (math.pi ** 0.25 * math.sqrt(2.0 ** n * math.factorial(n)))
    return norm * eval_hermite(n, x) * np.exp(-np.asarray(x) ** 2 / 2)


def fock_product_callable(ns):
    def psi(*x):
        out = 1.0
        for n, xi in zip(ns, x):
            out = out * fock_value(n, xi)
        return out
    return psi


def pair_psi(x, y):
    return (x + y) / math.sqrt(math.pi) * np.exp(-(x ** 2 + y ** 2) / 2)


def random_params(rng, n_modes=2, mu_max=3.0, nu_lo=0.2, nu_hi=3.0):
    mu = rng.uniform(-mu_max, mu_max, n_modes)
    nu = rng.uniform(nu_lo, nu_hi, n_modes) * rng.choice([-1.0, 1.0], n_modes)
    return TomographyParams(tuple(mu), tuple(nu))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
