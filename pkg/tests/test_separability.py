import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symtomo import reference as ref
from symtomo.errors import ArgumentError, UnsupportedError
from symtomo.separability import (DEFAULT_THRESHOLD, ENTANGLED, SEPARABLE, DictionaryConfig,
                                  angle_samples, build_dictionary, classify, fit_convex_mixture,
                                  marginalize, project_simplex, sampled_values)
from symtomo.states import fock, fock_product, entangled_pair, mixed_pair
from symtomo.tomography import GridSpec, TomographyParams, tomogram

SMALL = DictionaryConfig(fock_cutoff=1, grid=GridSpec.square(-5, 5, 21, 2))


def test_angle_samples_replace_degenerate_frames():
    samples = angle_samples()
    assert len(samples) == 16
    first = samples[0]
    assert first.mu[0] == pytest.approx(math.cos(math.pi / 2 - 0.1))
    assert all(abs(v) >= 1e-9 for p in samples for v in p.nu)


def test_dictionary_cutoff_one():
    labels, D = build_dictionary(SMALL)
    assert labels == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert D.shape == (16 * 21 * 21, 4)
    assert np.array_equal(D[:, 1], sampled_values(fock_product([0, 1]), SMALL))


def test_config_validation():
    with pytest.raises(ArgumentError):
        DictionaryConfig(fock_cutoff=0)
    with pytest.raises(ArgumentError):
        DictionaryConfig(param_samples=angle_samples()[:1])
    with pytest.raises(ArgumentError):
        DictionaryConfig(param_samples=angle_samples(n_modes=3))


def test_marginalize():
    p = TomographyParams((0.0, 1.0), (1.0, 1.0))
    m = marginalize(tomogram(fock_product([0, 1]), p), 1)
    x = np.linspace(-4, 4, 9)
    assert np.allclose(m(x), ref.excited_marginal(x, 1.0, 1.0), atol=1e-12)


# -- fitter ------------------------------------------------------------------

def test_fit_exact_member_mixture():
    _, D = build_dictionary(SMALL)
    w, r = fit_convex_mixture(0.5 * D[:, 0] + 0.5 * D[:, 3], D)
    assert np.allclose(w, [0.5, 0, 0, 0.5], atol=1e-6)
    assert r <= 1e-8


def test_fit_single_element():
    _, D = build_dictionary(SMALL)
    w, r = fit_convex_mixture(D[:, 2], D)
    assert w[2] == pytest.approx(1.0, abs=1e-9)
    assert r <= 1e-10


def test_fit_mixed_state():
    labels, D = build_dictionary(SMALL)
    w, r = fit_convex_mixture(sampled_values(mixed_pair(), SMALL), (labels, D))
    assert np.allclose(w, [0, 0.5, 0.5, 0], atol=1e-6)
    assert r <= 1e-6


def test_fit_errors():
    D = np.eye(3)
    with pytest.raises(ArgumentError):
        fit_convex_mixture(np.ones(2), D)
    with pytest.raises(ArgumentError):
        fit_convex_mixture(np.array([1.0, np.nan, 0]), D)
    with pytest.raises(ArgumentError):
        fit_convex_mixture(np.ones(3), np.zeros((3, 0)))


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2 ** 31), k=st.integers(1, 8), m=st.integers(5, 40))
def test_fit_weights_are_feasible(seed, k, m):
    r = np.random.default_rng(seed)
    D = np.abs(r.normal(size=(m, k)))
    t = r.normal(size=m)
    w, res = fit_convex_mixture(t, D)
    assert np.all(w >= -1e-12)
    assert abs(w.sum() - 1) <= 1e-9
    assert res >= 0
    # no vertex of the simplex does better than the fit
    vertex = min(np.sqrt(np.mean((D[:, j] - t) ** 2)) for j in range(k))
    assert res <= vertex + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=1, max_size=12))
def test_project_simplex(y):
    y = np.array(y)
    p = project_simplex(y)
    assert np.all(p >= 0) and abs(p.sum() - 1) <= 1e-12
    # optimality: p - y is constant on the support and larger elsewhere
    g = p - y
    supp = p > 0
    assert np.ptp(g[supp]) <= 1e-9
    if np.any(~supp):
        assert np.min(g[~supp]) >= g[supp].max() - 1e-9


def test_project_simplex_ties_deterministic():
    p = project_simplex(np.array([1.0, 1.0, 1.0]))
    assert p[0] == p[1] == p[2]
    assert np.allclose(p, 1 / 3, rtol=1e-15)
    assert np.array_equal(project_simplex(np.array([0.2, 0.5, 0.5, 0.1])),
                          project_simplex(np.array([0.2, 0.5, 0.5, 0.1])))


# -- classification ----------------------------------------------------------

def test_classify_entangled_state():
    v = classify(entangled_pair())
    assert v.classification == ENTANGLED
    assert v.residual > 1e-3
    # the residual is exactly the part odd in X: the cross term
    cfg = v.dictionary
    X, Y = cfg.grid.mesh()
    cross = np.concatenate([ref.entangled_cross_term(X, Y, *p.flat()).reshape(-1)
                            for p in cfg.param_samples])
    assert v.residual == pytest.approx(np.sqrt(np.mean(cross ** 2)), rel=1e-6)
    assert v.residual >= 10 * DEFAULT_THRESHOLD


def test_classify_separable_states():
    v = classify(mixed_pair())
    assert v.separable and v.residual <= 1e-6
    assert v.weight_of((0, 1)) == pytest.approx(0.5, abs=1e-4)
    assert v.weight_of((1, 0)) == pytest.approx(0.5, abs=1e-4)
    v = classify(fock_product([0, 1]))
    assert v.classification == SEPARABLE
    assert v.weight_of((0, 1)) == pytest.approx(1.0, abs=1e-6)


def test_classify_rejects_other_mode_counts():
    with pytest.raises(UnsupportedError):
        classify(fock(0))
    with pytest.raises(ArgumentError):
        classify(entangled_pair(), threshold=0)


def test_soundness_on_dictionary_elements():
    cfg = DictionaryConfig(fock_cutoff=2, grid=GridSpec.square(-5, 5, 21, 2))
    for lab in cfg.labels:
        v = classify(fock_product(lab), cfg)
        assert v.separable and v.residual <= 1e-10, lab


def test_monotone_in_cutoff():
    targets = {
        "entangled": entangled_pair(),
        "mixed": mixed_pair(),
        "p01": fock_product([0, 1]),
        "p10": fock_product([1, 0]),
    }
    grid = GridSpec.square(-5, 5, 21, 2)
    for name, state in targets.items():
        residuals = [classify(state, DictionaryConfig(fock_cutoff=c, grid=grid)).residual
                     for c in (1, 2, 3)]
        assert residuals[0] >= residuals[1] - 1e-12 >= residuals[2] - 2e-12, name
    # the pinned (0,1,0,1) fixture as a target against a single-frame-pair dictionary
    p0 = TomographyParams((0.0, 0.0), (1.0, 1.0))
    p1 = TomographyParams((0.3, 0.0), (1.0, 1.0))
    X, Y = grid.mesh()
    target = np.concatenate([ref.particular(X, Y).reshape(-1),
                             tomogram(entangled_pair(), p1)(X, Y).reshape(-1)])
    prev = np.inf
    for c in (1, 2, 3):
        cfg = DictionaryConfig(fock_cutoff=c, param_samples=(p0, p1), grid=grid)
        r = fit_convex_mixture(target, build_dictionary(cfg))[1]
        assert r <= prev + 1e-12
        prev = r


def test_determinism():
    a = classify(entangled_pair(), SMALL)
    b = classify(entangled_pair(), SMALL)
    assert a.to_json() == b.to_json()
    assert a.residual == b.residual and np.array_equal(a.weights, b.weights)


def test_verdict_json():
    d = classify(mixed_pair(), SMALL).to_dict()
    assert d["classification"] == SEPARABLE
    assert d["labels"] == ["0x0", "0x1", "1x0", "1x1"]
    assert set(d) >= {"classification", "residual", "threshold", "weights", "dictionary"}
    assert len(d["dictionary"]["param_samples"]) == 16
