"""Brute-force numerical quadrature used to cross-check the analytic results.

Nothing here calls the Gaussian integration code in :mod:`symtomo.polygauss`;
wave functions are only *evaluated* pointwise, never integrated analytically.
The integrator is a tensor-product Gauss-Legendre rule on dyadically refined
panels: a panel is accepted once its one-panel estimate and the sum over its
``2**n`` children agree to the panel's share of the tolerance, and the
whole integral stops as soon as the summed error estimate meets it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ArgumentError, ConvergenceError

ORDER = 16


@dataclass(frozen=True)
class QuadratureSpec:
    box: tuple
    rel_tol: float = 1e-10
    max_refinements: int = 14
    abs_tol: float = 0.0
    initial_split: int = 2

    def __post_init__(self):
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        object.__setattr__(self, "box", box)
        if not box:
            raise ArgumentError("quadrature box needs at least one axis")
        if any(not lo < hi for lo, hi in box):
            raise ArgumentError(f"every box axis needs min < max, got {box}")
        if not 0 < self.rel_tol <= 1e-2:
            raise ArgumentError(f"rel_tol must lie in (0, 1e-2], got {self.rel_tol}")
        if self.max_refinements < 1:
            raise ArgumentError("max_refinements must be >= 1")
        if self.abs_tol < 0:
            raise ArgumentError("abs_tol must be nonnegative")


@dataclass(frozen=True)
class QuadResult:
    value: complex | float
    error: float
    n_panels: int
    depth: int
    history: tuple = field(default=(), repr=False)

    def __iter__(self):
        yield self.value
        yield self.error


def _rule(ndim):
    x, w = np.polynomial.legendre.leggauss(ORDER)
    grids = np.meshgrid(*([x] * ndim), indexing="ij")
    nodes = np.stack([g.reshape(-1) for g in grids])          # (ndim, ORDER**ndim)
    weights = np.prod(np.meshgrid(*([w] * ndim), indexing="ij"), axis=0).reshape(-1)
    return nodes, weights


def _panel_integrals(f, lo, hi, nodes, weights):
    # lo, hi: (P, ndim); one Gauss-Legendre estimate per panel
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    coords = [mid[:, d, None] + half[:, d, None] * nodes[d][None, :] for d in range(lo.shape[1])]
    vals = np.asarray(f(*coords))
    jac = np.prod(half, axis=1)
    return (vals * weights[None, :]).sum(axis=1) * jac


def _split(lo, hi):
    # children of every panel, ordered panel-major then by corner index
    ndim = lo.shape[1]
    mid = 0.5 * (lo + hi)
    corners = np.array(np.meshgrid(*([[0, 1]] * ndim), indexing="ij")).reshape(ndim, -1).T
    clo = np.where(corners[None, :, :] == 0, lo[:, None, :], mid[:, None, :])
    chi = np.where(corners[None, :, :] == 0, mid[:, None, :], hi[:, None, :])
    return clo.reshape(-1, ndim), chi.reshape(-1, ndim)


def quad(f: Callable, spec: QuadratureSpec) -> QuadResult:
    """Integrate ``f(*coords)`` over ``spec.box``.

    ``f`` must accept one broadcastable array per axis and may return real
    or complex values. Raises :class:`ConvergenceError` (carrying the best
    estimate) when the tolerance is not met within ``spec.max_refinements``
    levels.
    """
    ndim = len(spec.box)
    nodes, weights = _rule(ndim)
    box_lo = np.array([b[0] for b in spec.box])
    box_hi = np.array([b[1] for b in spec.box])
    box_vol = np.prod(box_hi - box_lo)

    edges = [np.linspace(l, h, spec.initial_split + 1) for l, h in zip(box_lo, box_hi)]
    idx = np.array(np.meshgrid(*([np.arange(spec.initial_split)] * ndim), indexing="ij")).reshape(ndim, -1).T
    lo = np.array([[edges[d][i[d]] for d in range(ndim)] for i in idx])
    hi = np.array([[edges[d][i[d] + 1] for d in range(ndim)] for i in idx])
    coarse = _panel_integrals(f, lo, hi, nodes, weights)

    accepted_vals = []
    accepted_errs = []
    history = []
    n_panels = len(lo)
    for depth in range(1, spec.max_refinements + 1):
        clo, chi = _split(lo, hi)
        fine_children = _panel_integrals(f, clo, chi, nodes, weights)
        fine = fine_children.reshape(len(lo), -1).sum(axis=1)
        err = np.abs(fine - coarse)
        total = sum(accepted_vals) + fine.sum()
        tol = max(spec.rel_tol * abs(total), spec.abs_tol)
        share = np.prod(hi - lo, axis=1) / box_vol
        ok = err <= tol * share
        total_err = float(sum(accepted_errs) + err.sum())
        history.append((depth, total_err))
        if total_err <= tol:
            # globally converged; per-panel shares can sit below rounding noise
            ok[:] = True
        accepted_vals.extend(fine[ok])
        accepted_errs.extend(err[ok])
        if ok.all():
            break
        keep = ~ok
        n_children = 2 ** ndim
        child_keep = np.repeat(keep, n_children)
        lo, hi = clo[child_keep], chi[child_keep]
        coarse = fine_children[child_keep]
        n_panels += len(lo)
    else:
        estimate = _pairwise(accepted_vals) + coarse.sum()
        error = float(_pairwise(accepted_errs) + err[~ok].sum())
        raise ConvergenceError(
            f"quadrature did not reach rel_tol={spec.rel_tol} within "
            f"{spec.max_refinements} refinements (error estimate {error:.3e})",
            estimate=estimate, error=error)

    value = _pairwise(accepted_vals)
    error = float(_pairwise(accepted_errs))
    if np.isrealobj(np.asarray(accepted_vals)):
        value = float(np.real(value))
    return QuadResult(value=value, error=error, n_panels=n_panels, depth=depth,
                      history=tuple(history))


def _pairwise(values):
    arr = np.asarray(values)
    if arr.size == 0:
        return 0.0
    return np.sum(arr)  # numpy sums pairwise


def _state_callable(state):
    wf = state.wavefunction
    return wf.__call__, state.n_modes


def state_box(psi: Callable, n_modes: int, width: float = 10.0, search: float = 25.0):
    """Per-axis ``(mean - width*std, mean + width*std)`` of ``|psi|**2``.

    Moments come from quadrature of ``psi`` over ``[-search, search]**n``.
    """
    spec = QuadratureSpec(box=[(-search, search)] * n_modes, rel_tol=1e-8, initial_split=4)
    density = lambda *x: np.abs(psi(*x)) ** 2
    norm = quad(density, spec).value
    box = []
    for k in range(n_modes):
        m1 = quad(lambda *x: x[k] * density(*x), QuadratureSpec(spec.box, 1e-6, abs_tol=1e-10,
                                                                   initial_split=4)).value / norm
        m2 = quad(lambda *x: x[k] ** 2 * density(*x), spec).value / norm
        std = np.sqrt(max(m2 - m1 ** 2, 0.0))
        box.append((m1 - width * std, m1 + width * std))
    return tuple(box)


def quad_tomogram_direct(state, params, point: Sequence[float], psi: Callable | None = None,
                         rel_tol: float = 1e-11, abs_tol: float = 1e-14,
                         box=None) -> float:
    """Tomogram value at ``point`` by brute-force integration of the amplitude.

    The amplitude is ``int psi(x) exp(i sum_k (mu_k x_k**2 / (2 nu_k) - X_k x_k / nu_k)) dx``
    and the density is ``|amplitude|**2 / ((2 pi)**n prod |nu_k|)``.

    ``psi`` overrides the state's own wave function evaluator; ``state`` is
    then only used for its mode count (and may be an int).
    """
    if psi is None:
        psi, n = _state_callable(state)
    else:
        n = state if isinstance(state, int) else state.n_modes
    mu = np.asarray(params.mu, dtype=float)
    nu = np.asarray(params.nu, dtype=float)
    X = np.asarray(point, dtype=float).reshape(-1)
    if not (len(mu) == len(nu) == len(X) == n):
        raise ArgumentError("params, point and state must agree on the mode count")
    if box is None:
        box = state_box(psi, n)

    def integrand(*x):
        phase = 0.0
        for k in range(n):
            phase = phase + mu[k] * x[k] ** 2 / (2 * nu[k]) - X[k] * x[k] / nu[k]
        return psi(*x) * np.exp(1j * phase)

    amp = quad(integrand, QuadratureSpec(box=box, rel_tol=rel_tol, abs_tol=abs_tol)).value
    return float(abs(amp) ** 2 / ((2 * np.pi) ** n * np.prod(np.abs(nu))))
