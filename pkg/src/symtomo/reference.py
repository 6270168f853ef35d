"""Hard-coded closed-form tomograms of the two-mode example states.

These are typed in directly, independent of the amplitude pipeline, and
serve as golden fixtures. ``s_k = mu_k**2 + nu_k**2`` throughout.

States covered:

* ``entangled``  (|0>|1> + |1>|0>)/sqrt2
* ``mixed``      (rho_0 x rho_1 + rho_1 x rho_0)/2
* ``product01``  rho_0 x rho_1
* ``product10``  rho_1 x rho_0
"""

from __future__ import annotations

import numpy as np

from .errors import ArgumentError
from .polygauss import ComplexPolynomial, PolyGauss
from .tomography import Tomogram, TomographyParams

NAMES = ("entangled_2_13", "particular_2_14", "mixed_last1", "product_last2", "product_last3")


def _s(mu, nu):
    return mu * mu + nu * nu


def _gauss(X, Y, s1, s2):
    return np.exp(-X ** 2 / s1 - Y ** 2 / s2)


# -- joint densities ----------------------------------------------------------

def entangled(X, Y, mu1, nu1, mu2, nu2):
    s1, s2 = _s(mu1, nu1), _s(mu2, nu2)
    poly = s2 * X ** 2 + 2 * (nu1 * nu2 + mu1 * mu2) * X * Y + s1 * Y ** 2
    return poly / (np.pi * s1 ** 1.5 * s2 ** 1.5) * _gauss(X, Y, s1, s2)


def particular(X, Y):
    return (X + Y) ** 2 * np.exp(-X ** 2 - Y ** 2) / np.pi


def mixed(X, Y, mu1, nu1, mu2, nu2):
    s1, s2 = _s(mu1, nu1), _s(mu2, nu2)
    return _gauss(X, Y, s1, s2) / (np.pi * np.sqrt(s1 * s2)) * (Y ** 2 / s2 + X ** 2 / s1)


def product01(X, Y, mu1, nu1, mu2, nu2):
    s1, s2 = _s(mu1, nu1), _s(mu2, nu2)
    return 2 * Y ** 2 / (np.pi * s1 ** 0.5 * s2 ** 1.5) * _gauss(X, Y, s1, s2)


def product10(X, Y, mu1, nu1, mu2, nu2):
    s1, s2 = _s(mu1, nu1), _s(mu2, nu2)
    return 2 * X ** 2 / (np.pi * s2 ** 0.5 * s1 ** 1.5) * _gauss(X, Y, s1, s2)


def entangled_cross_term(X, Y, mu1, nu1, mu2, nu2):
    """``entangled - mixed``: the part odd in each of X and Y."""
    s1, s2 = _s(mu1, nu1), _s(mu2, nu2)
    return 2 * (nu1 * nu2 + mu1 * mu2) * X * Y / (np.pi * s1 ** 1.5 * s2 ** 1.5) * _gauss(X, Y, s1, s2)


# -- single-mode marginals ----------------------------------------------------
# The same profiles serve either mode; pass that mode's (X, mu, nu).

def entangled_marginal(X, mu, nu):
    """Marginal of the entangled state on either mode."""
    s = _s(mu, nu)
    return np.exp(-X ** 2 / s) / np.sqrt(np.pi * s) * (0.5 + X ** 2 / s)


def mixed_marginal(X, mu, nu):
    """Marginal of the mixed state on either mode."""
    s = _s(mu, nu)
    return np.exp(-X ** 2 / s) / (2 * np.sqrt(np.pi * s)) * (1 + 2 * X ** 2 / s)


def ground_marginal(X, mu, nu):
    """Tomogram of |0>."""
    s = _s(mu, nu)
    return np.exp(-X ** 2 / s) / np.sqrt(np.pi * s)


def excited_marginal(X, mu, nu):
    """Tomogram of |1>."""
    s = _s(mu, nu)
    return 2 * X ** 2 / (np.sqrt(np.pi) * s ** 1.5) * np.exp(-X ** 2 / s)


#: (joint name, kept mode) -> closed-form marginal profile
MARGINALS = {
    ("entangled_2_13", 0): entangled_marginal,
    ("entangled_2_13", 1): entangled_marginal,
    ("mixed_last1", 0): mixed_marginal,
    ("mixed_last1", 1): mixed_marginal,
    ("product_last2", 0): ground_marginal,
    ("product_last2", 1): excited_marginal,
    ("product_last3", 1): ground_marginal,
    ("product_last3", 0): excited_marginal,
}


def evaluate(name: str, X, Y, params: TomographyParams):
    """Numeric closed form of a named reference density."""
    if name == "particular_2_14":
        return particular(X, Y)
    fn = {"entangled_2_13": entangled, "mixed_last1": mixed,
          "product_last2": product01, "product_last3": product10}.get(name)
    if fn is None:
        raise ArgumentError(f"unknown reference distribution {name!r}; choose from {NAMES}")
    mu1, mu2 = params.mu
    nu1, nu2 = params.nu
    return fn(X, Y, mu1, nu1, mu2, nu2)


def reference_distribution(name: str, params: TomographyParams | None = None) -> Tomogram:
    """Named reference density as a symbolic :class:`Tomogram`.

    The polynomial coefficients are written out by hand; ``params`` is
    ignored for ``particular_2_14``, which is pinned to ``mu = 0, nu = 1``.
    """
    if name not in NAMES:
        raise ArgumentError(f"unknown reference distribution {name!r}; choose from {NAMES}")
    if name == "particular_2_14":
        params = TomographyParams((0.0, 0.0), (1.0, 1.0))
    elif params is None:
        raise ArgumentError(f"{name} needs tomography parameters")
    if params.n_modes != 2:
        raise ArgumentError("reference distributions are two-mode")
    (mu1, mu2), (nu1, nu2) = params.mu, params.nu
    s1, s2 = params.s
    kind = "entangled_2_13" if name == "particular_2_14" else name
    if kind == "entangled_2_13":
        norm = 1.0 / (np.pi * s1 ** 1.5 * s2 ** 1.5)
        terms = {(2, 0): s2 * norm, (1, 1): 2 * (nu1 * nu2 + mu1 * mu2) * norm, (0, 2): s1 * norm}
    elif kind == "mixed_last1":
        norm = 1.0 / (np.pi * np.sqrt(s1 * s2))
        terms = {(2, 0): norm / s1, (0, 2): norm / s2}
    elif kind == "product_last2":
        terms = {(0, 2): 2 / (np.pi * s1 ** 0.5 * s2 ** 1.5)}
    else:
        terms = {(2, 0): 2 / (np.pi * s2 ** 0.5 * s1 ** 1.5)}
    density = PolyGauss.gaussian(np.diag([2 / s1, 2 / s2]), poly=ComplexPolynomial(2, terms))
    return Tomogram(2, params, density, provenance=f"reference:{name}")
