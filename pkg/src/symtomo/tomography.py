"""Symplectic tomograms of oscillator states in closed form.

For a pure state the tomographic amplitude is

    A(X) = int psi(x) exp(i sum_k (mu_k x_k**2 / (2 nu_k) - X_k x_k / nu_k)) dx

and the tomogram is ``|A(X)|**2 / ((2 pi)**N prod_k |nu_k|)``. Both are kept as
polynomial-Gaussian sums in the ``X`` variables, so marginals and
normalizations are exact integrals; numeric grids are produced on demand.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ArgumentError, DomainError
from .polygauss import PolyGauss, PolyGaussSum
from .states import Ensemble, PureState

NU_MIN = 1e-9
NORMALIZATION_TOL = 1e-9
CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class TomographyParams:
    """Reference-frame parameters, one ``(mu_k, nu_k)`` pair per mode."""

    mu: tuple
    nu: tuple

    def __post_init__(self):
        mu = tuple(float(m) for m in np.atleast_1d(self.mu))
        nu = tuple(float(v) for v in np.atleast_1d(self.nu))
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)
        if len(mu) != len(nu) or not mu:
            raise ArgumentError(f"mu and nu need equal nonzero length, got {len(mu)} and {len(nu)}")
        for k, (m, v) in enumerate(zip(mu, nu)):
            if not (math.isfinite(m) and math.isfinite(v)):
                raise ArgumentError(f"non-finite tomography parameter in mode {k + 1}")
            if m * m + v * v <= 0:
                raise DomainError(f"mode {k + 1}: mu**2 + nu**2 must be positive")
            if abs(v) < NU_MIN:
                raise DomainError(f"mode {k + 1}: |nu| = {abs(v):.3g} < {NU_MIN}; the amplitude "
                                  "kernel is singular there (rescale mu, nu instead)")

    @classmethod
    def from_flat(cls, values: Sequence[float]) -> "TomographyParams":
        """From ``(mu1, nu1, mu2, nu2, ...)``."""
        values = list(values)
        if len(values) % 2:
            raise ArgumentError("flat parameter list needs (mu, nu) pairs")
        return cls(tuple(values[0::2]), tuple(values[1::2]))

    @classmethod
    def from_angles(cls, thetas: Sequence[float]) -> "TomographyParams":
        """Optical frames ``mu = cos(theta)``, ``nu = sin(theta)``."""
        return cls(tuple(np.cos(thetas)), tuple(np.sin(thetas)))

    @property
    def n_modes(self) -> int:
        return len(self.mu)

    @property
    def s(self) -> tuple:
        """Per-mode ``mu**2 + nu**2``."""
        return tuple(m * m + v * v for m, v in zip(self.mu, self.nu))

    def select(self, modes: Sequence[int]) -> "TomographyParams":
        return TomographyParams(tuple(self.mu[k] for k in modes), tuple(self.nu[k] for k in modes))

    def flat(self) -> list:
        return [x for pair in zip(self.mu, self.nu) for x in pair]


@dataclass(frozen=True, eq=False)
class Tomogram:
    """Closed-form tomographic probability density.

    ``modes`` records which original modes the ``X`` variables belong to
    (it differs from ``range(n_modes)`` after marginalization).
    """

    n_modes: int
    params: TomographyParams
    density: PolyGaussSum
    provenance: str = ""
    modes: tuple = None
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "density", PolyGaussSum.of(self.density))
        if self.modes is None:
            object.__setattr__(self, "modes", tuple(range(self.n_modes)))
        if self.density.n_vars != self.n_modes or self.params.n_modes != self.n_modes:
            raise ArgumentError("density, params and n_modes disagree")
        if self.check:
            total = self.normalization()
            if abs(total - 1.0) > NORMALIZATION_TOL:
                raise DomainError(f"tomogram {self.provenance!r} integrates to {total:.15g}")

    def __call__(self, *X) -> np.ndarray:
        return np.real(self.density(*X))

    def normalization(self) -> float:
        return float(self.density.integrate().real)


@dataclass(frozen=True)
class GridSpec:
    """Per-axis ``(min, max, count)``; a one-point axis needs ``min == max``."""

    axes: tuple

    def __post_init__(self):
        axes = tuple((float(lo), float(hi), int(n)) for lo, hi, n in self.axes)
        object.__setattr__(self, "axes", axes)
        if not axes:
            raise ArgumentError("grid needs at least one axis")
        for lo, hi, n in axes:
            if n < 1:
                raise ArgumentError(f"axis count must be positive, got {n}")
            if n == 1 and lo != hi:
                raise ArgumentError("a one-point axis needs min == max")
            if n >= 2 and not lo < hi:
                raise ArgumentError(f"axis needs min < max, got ({lo}, {hi})")

    @classmethod
    def square(cls, lo: float, hi: float, count: int, ndim: int) -> "GridSpec":
        return cls(((lo, hi, count),) * ndim)

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse ``min:max:count[,min:max:count...]``."""
        axes = []
        for part in text.split(","):
            bits = part.strip().split(":")
            if len(bits) != 3:
                raise ArgumentError(f"grid axis {part!r} is not min:max:count")
            try:
                axes.append((float(bits[0]), float(bits[1]), int(bits[2])))
            except ValueError:
                raise ArgumentError(f"grid axis {part!r} is not min:max:count") from None
        return cls(tuple(axes))

    @property
    def shape(self) -> tuple:
        return tuple(n for _, _, n in self.axes)

    def coordinates(self) -> list:
        return [np.linspace(lo, hi, n) for lo, hi, n in self.axes]

    def mesh(self) -> list:
        return np.meshgrid(*self.coordinates(), indexing="ij")


@dataclass(frozen=True, eq=False)
class GridData:
    spec: GridSpec
    values: np.ndarray
    names: tuple = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).reshape(self.spec.shape)
        object.__setattr__(self, "values", values)
        if self.names is None:
            object.__setattr__(self, "names", tuple(f"X{k + 1}" for k in range(len(self.spec.axes))))

    def rows(self):
        mesh = self.spec.mesh()
        cols = [m.reshape(-1) for m in mesh] + [self.values.reshape(-1)]
        return np.stack(cols, axis=1)

    def to_csv(self) -> str:
        lines = [",".join(self.names) + ",w"]
        for row in self.rows():
            lines.append(",".join(f"{v:.17g}" for v in row))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "axes": [{"name": nm, "min": lo, "max": hi, "count": n}
                     for nm, (lo, hi, n) in zip(self.names, self.spec.axes)],
            "order": "row-major",
            "values": [float(f"{v:.17g}") for v in self.values.reshape(-1)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _phase_kernel(params: TomographyParams) -> PolyGauss:
    # exp(i sum_k (mu_k x_k^2/(2 nu_k) - X_k x_k / nu_k)) over (x_1..x_n, X_1..X_n)
    n = params.n_modes
    A = np.zeros((2 * n, 2 * n), complex)
    for k, (m, v) in enumerate(zip(params.mu, params.nu)):
        A[k, k] = -1j * m / v
        A[k, n + k] = A[n + k, k] = 1j / v
    return PolyGauss.gaussian(A)


def amplitude(state: PureState, params: TomographyParams) -> PolyGaussSum:
    """Tomographic amplitude ``A(X)`` as a polynomial-Gaussian sum in ``X``."""
    n = state.n_modes
    if params.n_modes != n:
        raise ArgumentError(f"{params.n_modes} parameter pairs for a {n}-mode state")
    phase = _phase_kernel(params)
    terms = []
    for t in state.wavefunction.terms:
        joint = t.embed(2 * n, range(n)).multiply(phase)
        terms.append(joint.integrate_out(range(n)))
    return PolyGaussSum(terms, n_vars=n)


def _normalizer(params: TomographyParams) -> float:
    return 1.0 / ((2 * np.pi) ** params.n_modes * np.prod(np.abs(params.nu)))


def _pure_density(state: PureState, params: TomographyParams) -> PolyGaussSum:
    amp = amplitude(state, params)
    return amp.multiply(amp.conjugate()).scale(_normalizer(params))


def tomogram_pure(state: PureState, params: TomographyParams, check: bool = True) -> Tomogram:
    """``|A|**2 / ((2 pi)**N prod |nu_k|)``; ``check`` gates on unit normalization."""
    return Tomogram(state.n_modes, params, _pure_density(state, params),
                    provenance=state.label or "pure state", check=check)


def tomogram_ensemble(ens: Ensemble, params: TomographyParams, check: bool = True) -> Tomogram:
    density = PolyGaussSum([], n_vars=ens.n_modes)
    for w, s in ens.members:
        if w:
            density = density + _pure_density(s, params).scale(w)
    label = " + ".join(f"{w:.4g}*[{s.label}]" for w, s in ens.members)
    return Tomogram(ens.n_modes, params, density, provenance=label, check=check)


def tomogram(state: PureState | Ensemble, params: TomographyParams, check: bool = True) -> Tomogram:
    if isinstance(state, Ensemble):
        return tomogram_ensemble(state, params, check)
    return tomogram_pure(state, params, check)


def marginal(t: Tomogram, keep: int | Sequence[int]) -> Tomogram:
    """Integrate the density over every variable except ``keep``."""
    keep = [keep] if np.isscalar(keep) else list(keep)
    if any(k < 0 or k >= t.n_modes for k in keep):
        raise ArgumentError(f"mode index {keep} out of range for {t.n_modes} modes")
    drop = [k for k in range(t.n_modes) if k not in keep]
    density = t.density.integrate_out(drop)
    kept = sorted(keep)
    return Tomogram(len(kept), t.params.select(kept), density,
                    provenance=f"marginal{tuple(t.modes[k] + 1 for k in kept)} of {t.provenance}",
                    modes=tuple(t.modes[k] for k in kept))


def eval_grid(t: Tomogram, grid: GridSpec) -> GridData:
    """Evaluate the density on ``grid``; tiny negative rounding noise is clamped to zero."""
    if len(grid.axes) != t.n_modes:
        raise ArgumentError(f"grid has {len(grid.axes)} axes for a {t.n_modes}-mode tomogram")
    values = t(*grid.mesh())
    values = np.where((values < 0) & (values >= -CLAMP_TOL), 0.0, values)
    return GridData(grid, values, names=tuple(f"X{m + 1}" for m in t.modes))
