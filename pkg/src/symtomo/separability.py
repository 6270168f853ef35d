"""Separable vs. entangled joint tomograms.

A joint tomogram is *separable* when it is a convex sum of products of
single-mode tomograms, with one weight per product term that does not depend
on the reference-frame parameters. That family cannot be searched
exhaustively, so the test here is relative to a finite dictionary:
products of Fock-state tomograms up to a cutoff, sampled at a fixed set of
frames on a fixed grid. The target is fitted by a convex combination of the
dictionary columns, and the RMS residual decides the verdict. A large
residual proves entanglement only with respect to that dictionary, hence the
label ``entangled_within_dictionary``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ArgumentError, UnsupportedError
from .states import Ensemble, PureState, fock_product
from .tomography import GridSpec, Tomogram, TomographyParams, eval_grid, marginal, tomogram

DEFAULT_THRESHOLD = 1e-4
DEFAULT_ANGLES = (0.0, np.pi / 4, np.pi / 2, 3 * np.pi / 4)
MAX_ITER = 10000
OBJECTIVE_TOL = 1e-14

SEPARABLE = "separable"
ENTANGLED = "entangled_within_dictionary"


def angle_samples(thetas=DEFAULT_ANGLES, n_modes: int = 2) -> tuple:
    """All per-mode combinations of optical frames ``mu = cos, nu = sin``.

    Angles whose frame has ``|nu| < 1e-9`` are moved to ``pi/2 - 0.1``.
    """
    fixed = []
    for th in thetas:
        if abs(math.sin(th)) < 1e-9:
            th = math.pi / 2 - 0.1
        fixed.append(th)
    return tuple(TomographyParams.from_angles(combo)
                 for combo in itertools.product(fixed, repeat=n_modes))


@dataclass(frozen=True)
class DictionaryConfig:
    fock_cutoff: int = 3
    param_samples: tuple = field(default_factory=angle_samples)
    grid: GridSpec = field(default_factory=lambda: GridSpec.square(-5.0, 5.0, 41, 2))

    def __post_init__(self):
        object.__setattr__(self, "param_samples", tuple(self.param_samples))
        if self.fock_cutoff < 1:
            raise ArgumentError("fock_cutoff must be >= 1")
        if len(self.param_samples) < 2:
            raise ArgumentError("at least two parameter samples are required")
        if any(p.n_modes != len(self.grid.axes) for p in self.param_samples):
            raise ArgumentError("every parameter sample must match the grid dimension")

    @property
    def labels(self) -> list:
        n = len(self.grid.axes)
        return list(itertools.product(range(self.fock_cutoff + 1), repeat=n))

    def to_dict(self) -> dict:
        return {
            "fock_cutoff": self.fock_cutoff,
            "param_samples": [{"mu": list(p.mu), "nu": list(p.nu)} for p in self.param_samples],
            "grid": [list(ax) for ax in self.grid.axes],
        }


@dataclass(frozen=True, eq=False)
class SeparabilityVerdict:
    classification: str
    residual: float
    weights: np.ndarray
    threshold: float
    dictionary: DictionaryConfig
    labels: tuple = ()

    @property
    def separable(self) -> bool:
        return self.classification == SEPARABLE

    def weight_of(self, label) -> float:
        return float(self.weights[self.labels.index(tuple(label))])

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "residual": self.residual,
            "threshold": self.threshold,
            "weights": [float(w) for w in self.weights],
            "labels": ["x".join(str(n) for n in lab) for lab in self.labels],
            "dictionary": self.dictionary.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def marginalize(w: Tomogram, keep_mode: int) -> Tomogram:
    """Single-mode marginal ``w_k(x_k | a_k)`` of a joint tomogram."""
    return marginal(w, keep_mode)


def sampled_values(state, cfg: DictionaryConfig) -> np.ndarray:
    """Tomogram of ``state`` on ``cfg.grid`` at every sample, concatenated."""
    return np.concatenate([eval_grid(tomogram(state, p), cfg.grid).values.reshape(-1)
                           for p in cfg.param_samples])


@lru_cache(maxsize=64)
def _fock_column(ns: tuple, cfg: DictionaryConfig) -> np.ndarray:
    col = sampled_values(fock_product(ns), cfg)
    col.setflags(write=False)
    return col


def build_dictionary(cfg: DictionaryConfig) -> tuple[list, np.ndarray]:
    """Labels ``(m, n, ...)`` and the matrix whose columns are product tomograms.

    Each column spans every parameter sample, so one mixture weight covers
    all frames at once.
    """
    labels = cfg.labels
    D = np.stack([_fock_column(lab, cfg) for lab in labels], axis=1)
    return labels, D


def project_simplex(y: np.ndarray) -> np.ndarray:
    """Euclidean projection onto ``{p >= 0, sum p = 1}`` (sort + cumulative sum)."""
    y = np.asarray(y, dtype=float)
    order = np.argsort(-y, kind="stable")
    u = y[order]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, len(y) + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    tau = css[rho] / (rho + 1)
    return np.maximum(y - tau, 0.0)


def _objective(G, h, tt, p):
    return 0.5 * (p @ G @ p) - h @ p + 0.5 * tt


def _active_set(G, h, p, max_iter=200):
    """Primal active-set refinement of ``min 1/2 p'Gp - h'p`` on the simplex, started at ``p``."""
    K = len(p)
    support = [i for i in range(K) if p[i] > 1e-12]
    if not support:
        support = [int(np.argmax(p))]
    for _ in range(max_iter):
        S = np.array(support)
        m = len(S)
        kkt = np.zeros((m + 1, m + 1))
        kkt[:m, :m] = G[np.ix_(S, S)]
        kkt[:m, m] = kkt[m, :m] = 1.0
        rhs = np.concatenate([h[S], [1.0]])
        sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
        q = np.zeros(K)
        q[S] = sol[:m]
        if np.any(q[S] < 0):
            # step from p toward q until the first support weight hits zero
            d = q - p
            neg = S[d[S] < 0]
            steps = p[neg] / -d[neg]
            j = int(np.argmin(steps))
            p = np.maximum(p + steps[j] * d, 0.0)
            p[neg[j]] = 0.0
            p /= p.sum()
            support = [i for i in support if i != neg[j]]
            continue
        p = q
        grad = G @ p - h
        level = grad[S].mean()
        outside = [i for i in range(K) if i not in support]
        if not outside:
            break
        viol = min(outside, key=lambda i: (grad[i], i))
        if grad[viol] < level - 1e-14 * max(1.0, abs(level)):
            support = sorted(support + [viol])
            continue
        break
    return p


def fit_convex_mixture(target, dictionary) -> tuple[np.ndarray, float]:
    """Best convex combination of dictionary columns in the least-squares sense.

    Runs projected gradient descent on the simplex from the uniform mixture
    (step ``1/L``, at most 10000 iterations, stopping once the objective
    drops by less than 1e-14), then polishes the result with an active-set
    solve on the identified support. Returns ``(weights, rms_residual)``.
    """
    D = dictionary[1] if isinstance(dictionary, tuple) else dictionary
    D = np.asarray(D, dtype=float)
    t = np.asarray(target, dtype=float).reshape(-1)
    if D.ndim != 2 or D.shape[1] == 0:
        raise ArgumentError("dictionary must be a nonempty 2-D matrix")
    if D.shape[0] != t.size:
        raise ArgumentError(f"target has {t.size} entries, dictionary rows {D.shape[0]}")
    if not (np.all(np.isfinite(D)) and np.all(np.isfinite(t))):
        raise ArgumentError("non-finite entries in fit input")
    R, K = D.shape
    G = D.T @ D / R
    h = D.T @ t / R
    tt = t @ t / R
    L = np.linalg.eigvalsh(G)[-1]
    p = np.full(K, 1.0 / K)
    f = _objective(G, h, tt, p)
    if L > 0:
        for _ in range(MAX_ITER):
            p_new = project_simplex(p - (G @ p - h) / L)
            f_new = _objective(G, h, tt, p_new)
            p = p_new
            if f - f_new < OBJECTIVE_TOL:
                break
            f = f_new
        polished = _active_set(G, h, p.copy())
        if _objective(G, h, tt, polished) <= _objective(G, h, tt, p):
            p = polished
    residual = float(np.sqrt(np.mean((D @ p - t) ** 2)))
    return p, residual


def classify(state: PureState | Ensemble, cfg: DictionaryConfig | None = None,
             threshold: float = DEFAULT_THRESHOLD) -> SeparabilityVerdict:
    """Fit the state's tomogram against the Fock-product dictionary."""
    cfg = DictionaryConfig() if cfg is None else cfg
    if state.n_modes != 2:
        raise UnsupportedError(f"classification supports two modes, got {state.n_modes}")
    if threshold <= 0:
        raise ArgumentError("threshold must be positive")
    labels, D = build_dictionary(cfg)
    target = sampled_values(state, cfg)
    weights, residual = fit_convex_mixture(target, D)
    verdict = SEPARABLE if residual <= threshold else ENTANGLED
    return SeparabilityVerdict(verdict, residual, weights, threshold, cfg, tuple(labels))
