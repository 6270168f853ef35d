import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symtomo.errors import ArgumentError, DomainError
from symtomo.oracle import QuadratureSpec, quad
from symtomo.polygauss import (ComplexPolynomial, GaussianKernel, PolyGauss, PolyGaussSum,
                               gauss_moment)

SQRT_PI = math.sqrt(math.pi)


def poly(n, terms):
    return ComplexPolynomial(n, terms)


def pg(A, terms=None, b=None, c=0.0):
    n = np.atleast_2d(A).shape[0]
    return PolyGauss.gaussian(A, b, c, poly=poly(n, terms or {(0,) * n: 1.0}))


# -- gauss_moment -------------------------------------------------------------

def test_moment_zeroth_is_sqrt_pi():
    assert gauss_moment(0, 1, 0) == pytest.approx(SQRT_PI, rel=1e-15)


def test_moment_odd_vanishes_at_zero_b():
    assert gauss_moment(1, 1, 0) == 0


def test_moment_second():
    assert gauss_moment(2, 1, 0) == pytest.approx(SQRT_PI / 2, rel=1e-15)


def test_moment_second_with_shift_matches_quadrature():
    expected = quad(lambda x: x ** 2 * np.exp(-x ** 2 + 2 * x),
                    QuadratureSpec([(-12, 14)], rel_tol=1e-12)).value
    assert expected == pytest.approx(math.e * 1.5 * SQRT_PI, rel=1e-10)
    assert gauss_moment(2, 1, 2) == pytest.approx(expected, rel=1e-12)
    assert abs(gauss_moment(2, 1, 2) - 7.22704) < 1e-5


@pytest.mark.parametrize("a,b", [(1.0, 0.3), (0.7 + 0.4j, -1.1 + 0.5j), (2.5 - 1j, 2j)])
def test_low_moments_match_closed_forms(a, b):
    m0 = np.sqrt(np.pi / a) * np.exp(b * b / (4 * a))
    assert gauss_moment(0, a, b) == pytest.approx(m0, rel=1e-14)
    assert gauss_moment(1, a, b) == pytest.approx(m0 * b / (2 * a), rel=1e-14)
    assert gauss_moment(2, a, b) == pytest.approx(m0 / (2 * a) * (1 + b * b / (2 * a)), rel=1e-14)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_moment_recurrence(n):
    a, b = 0.9 + 0.3j, 0.4 - 1.2j
    lhs = gauss_moment(n, a, b)
    rhs = ((n - 1) * gauss_moment(n - 2, a, b) + b * gauss_moment(n - 1, a, b)) / (2 * a)
    assert lhs == pytest.approx(rhs, rel=1e-13)


def test_moment_errors():
    with pytest.raises(DomainError):
        gauss_moment(0, 0.0, 1.0)
    with pytest.raises(DomainError):
        gauss_moment(2, -1 + 1j)
    with pytest.raises(ArgumentError):
        gauss_moment(-1, 1.0)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(0, 7), ar=st.floats(0.2, 4), ai=st.floats(-2, 2),
       br=st.floats(-3, 3), bi=st.floats(-3, 3))
def test_moment_is_b_derivative_of_previous(n, ar, ai, br, bi):
    a, b = complex(ar, ai), complex(br, bi)
    h = 1e-5
    fd = (gauss_moment(n, a, b + h) - gauss_moment(n, a, b - h)) / (2 * h)
    exact = gauss_moment(n + 1, a, b)
    assert abs(fd - exact) <= 1e-6 * max(abs(exact), abs(gauss_moment(n, a, b)), 1e-300)


# -- polynomials ----------------------------------------------------------------

def test_polynomial_cleanup_drops_relative_noise():
    p = poly(1, {(0,): 1.0, (1,): 1e-16, (2,): 0.0})
    assert p.terms == {(0,): 1.0}
    assert poly(2, {}).is_zero()


def test_polynomial_exponent_length_enforced():
    with pytest.raises(ArgumentError):
        poly(2, {(1,): 1.0})


def test_polynomial_arithmetic_and_evaluation():
    x, y = ComplexPolynomial.variable(2, 0), ComplexPolynomial.variable(2, 1)
    p = (x + y) ** 2 - 2 * x * y
    assert p.allclose(x * x + y * y)
    assert p(2.0, 3.0) == pytest.approx(13.0)
    assert (x - x).is_zero()
    with pytest.raises(ArgumentError):
        x + ComplexPolynomial.variable(3, 0)


def test_affine_substitution_of_polynomial():
    x = ComplexPolynomial.variable(1, 0)
    p = x * x
    q = p.affine_substitute([[2.0, 1.0]], [1.0])    # (2u + v + 1)^2
    assert q(0.5, -1.0) == pytest.approx(p(2 * 0.5 - 1.0 + 1.0))


# -- kernels, products, conjugation -------------------------------------------

def test_kernel_is_stored_symmetric():
    k = GaussianKernel([[1.0, 2.0], [5.0, 1.0]])
    assert np.array_equal(k.A, k.A.T)
    assert k.A[1, 0] == 2.0


def test_multiply_gaussians():
    g = pg([[1.0]])        # exp(-x^2/2)
    prod = g.multiply(g)
    assert np.allclose(prod.kernel.A, [[2.0]])
    xg = pg([[1.0]], {(1,): 1.0})
    assert xg.multiply(xg).poly.allclose(poly(1, {(2,): 1.0}))
    with pytest.raises(ArgumentError):
        g.multiply(pg(np.eye(2)))


def test_multiply_entangled_pair_by_conjugate():
    psi = pg(np.eye(2), {(1, 0): 1 / SQRT_PI, (0, 1): 1 / SQRT_PI})
    dens = psi.multiply(psi.conjugate())
    target = poly(2, {(2, 0): 1 / math.pi, (1, 1): 2 / math.pi, (0, 2): 1 / math.pi})
    assert dens.poly.allclose(target, 1e-15)
    assert np.allclose(dens.kernel.A, 2 * np.eye(2))


def test_conjugate():
    f = pg([[-2j]])                     # exp(i x^2)
    assert np.allclose(f.conjugate().kernel.A, [[2j]])
    g = pg([[2.0]], {(1,): 2j})
    assert g.conjugate().poly.allclose(poly(1, {(1,): -2j}))
    h = pg([[1.0]], {(2,): 3.0})
    hc = h.conjugate()
    assert hc.poly.allclose(h.poly) and np.array_equal(hc.kernel.A, h.kernel.A)


# -- substitution ------------------------------------------------------------

def test_substitute_linear_examples():
    f = pg([[2.0]])                                  # exp(-x^2)
    g = f.substitute_linear([[-1.0]])
    assert np.allclose(g.kernel.A, f.kernel.A)
    xf = pg([[2.0]], {(1,): 1.0})                    # x exp(-x^2)
    h = xf.substitute_linear([[2.0]])
    assert h.poly.allclose(poly(1, {(1,): 2.0}))
    assert np.allclose(h.kernel.A, [[8.0]])          # exp(-4x^2)
    s = f.substitute_linear([[1.0]], [1.0])
    x = np.linspace(-3, 3, 13)
    assert np.allclose(s(x), np.exp(-(x + 1) ** 2), rtol=1e-14, atol=0)


def test_substitute_identity_is_exact():
    f = pg([[1.0, 0.3], [0.3, 2.0]], {(1, 2): 1 + 2j, (0, 0): -0.5}, b=[0.1j, 0.2], c=0.3)
    g = f.substitute_linear(np.eye(2), [0.0, 0.0])
    assert g.poly.terms == f.poly.terms
    assert np.array_equal(g.kernel.A, f.kernel.A)
    assert np.array_equal(g.kernel.b, f.kernel.b)
    assert g.kernel.c == f.kernel.c


def test_substitute_singular_matrix_rejected():
    with pytest.raises(ArgumentError):
        pg(np.eye(2)).substitute_linear([[1.0, 1.0], [2.0, 2.0]])


# -- integration --------------------------------------------------------------

def test_integrate_out_separable_gaussian():
    f = pg(2 * np.eye(2))                            # exp(-x^2 - y^2)
    g = f.integrate_out([1])
    x = np.linspace(-2, 2, 9)
    assert np.allclose(g(x), SQRT_PI * np.exp(-x ** 2), rtol=1e-14, atol=0)


def test_integrate_normalization_of_pair_density():
    f = pg(2 * np.eye(2), {(2, 0): 1 / math.pi, (1, 1): 2 / math.pi, (0, 2): 1 / math.pi})
    assert f.integrate() == pytest.approx(1.0, abs=1e-14)


def test_integrate_odd_vanishes():
    f = pg(2 * np.eye(2), {(1, 1): 1.0})
    assert abs(f.integrate()) < 1e-16


def test_integrate_out_returns_scalar_polygauss():
    f = pg(2 * np.eye(2))
    r = f.integrate_out([0, 1])
    assert r.n_vars == 0
    assert r.scalar() == pytest.approx(math.pi)


def test_integrate_divergent_kernel_rejected():
    f = pg([[1.0, 0.0], [0.0, -1j]])
    with pytest.raises(DomainError):
        f.integrate_out([1])
    g = pg([[1.0, 1.0], [1.0, 1.0]])                 # semidefinite
    with pytest.raises(DomainError):
        g.integrate()


def _random_pg(rng, n=3, deg=3):
    B = rng.normal(size=(n, n))
    A = B @ B.T + n * np.eye(n) + 1j * rng.normal(size=(n, n))
    A = (A + A.T) / 2
    terms = {tuple(rng.integers(0, deg, n)): complex(*rng.normal(size=2)) for _ in range(5)}
    return pg(A, terms, b=rng.normal(size=n) + 1j * rng.normal(size=n), c=0.1 + 0.2j)


def test_integrate_out_is_order_independent(rng):
    for _ in range(5):
        f = _random_pg(rng)
        a = f.integrate_out([0]).integrate_out([0])          # x0 then x1
        b = f.integrate_out([1]).integrate_out([0])          # x1 then x0
        c = f.integrate_out([0, 1])
        for g in (a, b):
            gc, cc = g.canonical(), c.canonical()
            assert np.allclose(gc.kernel.A, cc.kernel.A, atol=1e-12, rtol=0)
            assert np.allclose(gc.kernel.b, cc.kernel.b, atol=1e-12, rtol=0)
            scale = max(cc.poly.max_abs_coefficient(), 1.0)
            assert gc.poly.allclose(cc.poly, 1e-12 * scale)


def test_integrate_matches_quadrature(rng):
    f = _random_pg(rng, n=2)
    exact = f.integrate()
    num = quad(lambda x, y: f(x, y), QuadratureSpec([(-12, 12)] * 2, rel_tol=1e-11)).value
    assert abs(exact - num) <= 1e-9 * abs(exact)


def test_density_integral_real_nonnegative(rng):
    for _ in range(5):
        f = PolyGaussSum([_random_pg(rng, n=2), _random_pg(rng, n=2)])
        val = f.multiply(f.conjugate()).integrate()
        assert val.real >= 0
        assert abs(val.imag) <= 1e-10 * abs(val)


def test_sum_merges_identical_kernels():
    a = pg([[1.0]], {(1,): 1.0})
    b = pg([[1.0]], {(0,): 1.0}, c=0.5)
    s = PolyGaussSum([a, b])
    assert len(s) == 1
    x = np.linspace(-2, 2, 5)
    assert np.allclose(s(x), a(x) + b(x), rtol=1e-14)
    empty = PolyGaussSum([], n_vars=1)
    assert np.all(empty(x) == 0)
