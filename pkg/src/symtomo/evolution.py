"""Evolution under the inverted-oscillator propagator.

    G(x, y, t) = C(t) exp[(i/2)(coth t (x**2 + y**2) - 2 x y / sinh t)]

The exponent is purely imaginary, so the kernel alone is not integrable;
multiplied by a normalizable wave function the ``y`` integral has a
positive-definite real part and is done exactly.

Two prefactor conventions are supported:

* ``"unitary"`` (default): ``C = 1/sqrt(2 pi i sinh t)``, principal branch.
* ``"paper"``: ``C = 1/sqrt(2 pi sinh t)``, the form without the ``i``.

They differ only by the constant phase ``exp(i pi/4)``, so both conserve
the norm; the ``"paper"`` output is a globally rephased copy of the unitary one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DomainError
from .polygauss import ComplexPolynomial, PolyGauss, PolyGaussSum
from .states import PureState, norm
from .tomography import Tomogram, TomographyParams, tomogram_pure

T_MIN = 1e-9
CONVENTIONS = ("unitary", "paper")


def prefactor(t: float, convention: str = "unitary") -> complex:
    if convention == "unitary":
        return 1.0 / np.sqrt(complex(0.0, 2 * np.pi * math.sinh(t)))
    if convention == "paper":
        return complex(1.0 / math.sqrt(2 * np.pi * math.sinh(t)))
    raise ArgumentError(f"prefactor convention must be one of {CONVENTIONS}, got {convention!r}")


@dataclass(frozen=True, eq=False)
class PropagatorKernel:
    """``G(x, y, t)`` as a two-variable PolyGauss in ``(x, y)``."""

    t: float
    kernel: PolyGauss
    convention: str = "unitary"

    def __call__(self, x, y):
        return self.kernel(x, y)

    @property
    def prefactor(self) -> complex:
        return self.kernel.poly.coefficient((0, 0))


def propagator(t: float, convention: str = "unitary") -> PropagatorKernel:
    if not t > T_MIN:
        raise DomainError(f"propagator needs t > {T_MIN}, got {t}; use t = 0 for the identity")
    coth = 1.0 / math.tanh(t)
    csch = 1.0 / math.sinh(t)
    # (i/2)(coth (x^2+y^2) - 2xy csch) = -1/2 [x y] A [x y]^T
    A = np.array([[-1j * coth, 1j * csch], [1j * csch, -1j * coth]])
    poly = ComplexPolynomial.constant(2, prefactor(t, convention))
    return PropagatorKernel(float(t), PolyGauss.gaussian(A, poly=poly), convention)


def evolve(state: PureState, t: float, mode: int = 0, convention: str = "unitary") -> PureState:
    """``psi_t(x) = int G(x, y, t) psi(y) dy`` applied to one mode.

    ``t = 0`` returns ``state`` unchanged. The returned state is not
    re-checked for normalization; use :func:`symtomo.states.norm`.
    """
    if t < 0:
        raise DomainError(f"evolution time must be >= 0, got {t}")
    n = state.n_modes
    if not 0 <= mode < n:
        raise ArgumentError(f"mode {mode} out of range for {n} modes")
    if convention not in CONVENTIONS:
        raise ArgumentError(f"prefactor convention must be one of {CONVENTIONS}, got {convention!r}")
    if t == 0:
        return state
    G = propagator(t, convention).kernel.embed(n + 1, [n, mode])
    # after integrating out `mode`, the new variable sits last; move it back
    perm = np.zeros((n, n))
    rest = [k for k in range(n) if k != mode] + [mode]
    for i, k in enumerate(rest):
        perm[i, k] = 1.0
    terms = []
    for term in state.wavefunction.terms:
        joint = term.embed(n + 1, range(n)).multiply(G)
        terms.append(joint.integrate_out([mode]).affine(perm))
    wf = PolyGaussSum(terms, n_vars=n)
    label = f"G(t={t:g}, mode {mode + 1}, {convention})[{state.label}]"
    return PureState(n, wf, label=label, raw_norm=norm(wf), check=False)


def evolved_tomogram(state: PureState, t: float, mode: int, params: TomographyParams,
                     convention: str = "unitary") -> Tomogram:
    return tomogram_pure(evolve(state, t, mode, convention), params)
