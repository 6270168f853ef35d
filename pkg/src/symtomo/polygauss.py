"""Exact algebra of complex polynomial-times-Gaussian functions.

Every object here represents a function of ``n`` real variables of the form

    P(x) * exp(-1/2 x^T A x + b^T x + c)

with complex polynomial ``P``, complex symmetric ``A``, complex ``b`` and ``c``.
The family is closed under products, conjugation, affine changes of variables
and Gaussian integration, which is all that wave functions, tomographic
amplitudes, tomograms and propagator kernels of oscillator states need.

Integration completes the square one variable at a time and reduces the
remaining polynomial factor to one-dimensional Gaussian moments.
"""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ArgumentError, DomainError

#: relative coefficient cleanup applied after every arithmetic operation
CLEANUP_RTOL = 1e-14
#: smallest admissible eigenvalue of Re(A) on an integrated block
PD_TOL = 1e-12


def gauss_moment(n: int, a: complex, b: complex = 0.0) -> complex:
    """Return ``int x**n exp(-a x**2 + b x) dx`` over the real line.

    Uses the closed form for ``n = 0`` and the recurrence obtained by
    differentiating with respect to ``b``::

        M(0) = sqrt(pi / a) exp(b**2 / (4 a))
        M(1) = b / (2 a) M(0)
        M(n) = ((n - 1) M(n - 2) + b M(n - 1)) / (2 a)

    Parameters
    ----------
    n : int
        Moment order, ``n >= 0``.
    a : complex
        Quadratic coefficient, ``Re(a) > 0``.
    b : complex
        Linear coefficient.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise ArgumentError(f"moment order must be an integer, got {n!r}")
    if n < 0:
        raise ArgumentError(f"moment order must be nonnegative, got {n}")
    a = complex(a)
    b = complex(b)
    if not a.real > 0:
        raise DomainError(f"divergent Gaussian integral: Re(a) = {a.real} <= 0")
    m_prev = np.sqrt(np.pi / a) * np.exp(b * b / (4 * a))
    if n == 0:
        return complex(m_prev)
    m_cur = b / (2 * a) * m_prev
    for k in range(2, n + 1):
        m_prev, m_cur = m_cur, ((k - 1) * m_prev + b * m_cur) / (2 * a)
    return complex(m_cur)


def _central_moment(n: int, a: complex) -> complex:
    # int u**n exp(-a u**2) du; odd moments vanish identically
    if n % 2:
        return 0j
    return gauss_moment(n, a, 0.0)


class ComplexPolynomial:
    """Sparse multivariate polynomial with complex coefficients.

    ``terms`` maps exponent tuples of length ``n_vars`` to coefficients.
    Instances are treated as immutable; every operation returns a new one.

    Example
    -------
    ``ComplexPolynomial(2, {(1, 0): 1, (0, 1): 1})`` is ``x0 + x1``.
    """

    __slots__ = ("n_vars", "terms")

    def __init__(self, n_vars: int, terms: Mapping[tuple, complex] | None = None):
        if n_vars < 0:
            raise ArgumentError("n_vars must be nonnegative")
        self.n_vars = int(n_vars)
        clean = {}
        if terms:
            for exps, coef in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != self.n_vars:
                    raise ArgumentError(
                        f"exponent tuple {exps} does not have length {self.n_vars}")
                if any(e < 0 for e in exps):
                    raise ArgumentError(f"negative exponent in {exps}")
                coef = complex(coef)
                if not (math.isfinite(coef.real) and math.isfinite(coef.imag)):
                    raise ArgumentError(f"non-finite coefficient {coef}")
                if coef != 0:
                    clean[exps] = clean.get(exps, 0j) + coef
            if clean:
                cutoff = CLEANUP_RTOL * max(abs(c) for c in clean.values())
                clean = {k: v for k, v in clean.items() if abs(v) > cutoff and v != 0}
        self.terms = clean

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, n_vars: int, value: complex = 1.0) -> "ComplexPolynomial":
        return cls(n_vars, {(0,) * n_vars: value})

    @classmethod
    def variable(cls, n_vars: int, index: int) -> "ComplexPolynomial":
        exps = [0] * n_vars
        exps[index] = 1
        return cls(n_vars, {tuple(exps): 1.0})

    @classmethod
    def linear(cls, coeffs: Sequence[complex], const: complex = 0.0) -> "ComplexPolynomial":
        """Affine form ``sum_j coeffs[j] x_j + const``."""
        n = len(coeffs)
        terms = {(0,) * n: const}
        for j, c in enumerate(coeffs):
            exps = [0] * n
            exps[j] = 1
            terms[tuple(exps)] = c
        return cls(n, terms)

    # -- inspection -------------------------------------------------------
    def __repr__(self):
        if not self.terms:
            return f"ComplexPolynomial({self.n_vars}, 0)"
        parts = []
        for exps, c in sorted(self.terms.items()):
            mono = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}"
                            for i, e in enumerate(exps) if e)
            parts.append(f"({c:.6g})" + (f"*{mono}" if mono else ""))
        return f"ComplexPolynomial({self.n_vars}, " + " + ".join(parts) + ")"

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def coefficient(self, exps: Sequence[int]) -> complex:
        return self.terms.get(tuple(exps), 0j)

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def allclose(self, other: "ComplexPolynomial", atol: float = 1e-12) -> bool:
        if self.n_vars != other.n_vars:
            return False
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.coefficient(k) - other.coefficient(k)) <= atol for k in keys)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "ComplexPolynomial":
        if isinstance(other, ComplexPolynomial):
            if other.n_vars != self.n_vars:
                raise ArgumentError(
                    f"variable-count mismatch: {self.n_vars} vs {other.n_vars}")
            return other
        return ComplexPolynomial.constant(self.n_vars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0j) + v
        return ComplexPolynomial(self.n_vars, out)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPolynomial(self.n_vars, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, ComplexPolynomial):
            other = complex(other)
            return ComplexPolynomial(self.n_vars, {k: v * other for k, v in self.terms.items()})
        other = self._coerce(other)
        out = defaultdict(complex)
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[tuple(i + j for i, j in zip(e1, e2))] += c1 * c2
        return ComplexPolynomial(self.n_vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ArgumentError("negative polynomial power")
        result = ComplexPolynomial.constant(self.n_vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "ComplexPolynomial":
        return ComplexPolynomial(self.n_vars, {k: v.conjugate() for k, v in self.terms.items()})

    # -- evaluation and substitution -------------------------------------
    def __call__(self, *coords):
        if len(coords) != self.n_vars:
            raise ArgumentError(f"expected {self.n_vars} coordinates, got {len(coords)}")
        coords = np.broadcast_arrays(*[np.asarray(x) for x in coords]) if coords else []
        shape = coords[0].shape if coords else ()
        result = np.zeros(shape, dtype=complex)
        if not self.terms:
            return result
        max_e = [max(e[i] for e in self.terms) for i in range(self.n_vars)]
        pows = []
        for x, m in zip(coords, max_e):
            p = [np.ones(shape)]
            for _ in range(m):
                p.append(p[-1] * x)
            pows.append(p)
        for exps, c in self.terms.items():
            term = np.full(shape, c, dtype=complex)
            for i, e in enumerate(exps):
                if e:
                    term = term * pows[i][e]
            result = result + term
        return result

    def affine_substitute(self, M, shift=None) -> "ComplexPolynomial":
        """Return ``q(y) = p(M y + shift)`` with ``M`` of shape (n_vars, m).

        ``M`` and ``shift`` may be complex and ``M`` need not be square.
        """
        M = np.asarray(M, dtype=complex)
        if M.ndim != 2 or M.shape[0] != self.n_vars:
            raise ArgumentError(f"substitution matrix must have {self.n_vars} rows")
        m = M.shape[1]
        shift = np.zeros(self.n_vars, complex) if shift is None else np.asarray(shift, complex)
        forms = [ComplexPolynomial.linear(M[i], shift[i]) for i in range(self.n_vars)]
        cache = [{0: ComplexPolynomial.constant(m)} for _ in range(self.n_vars)]

        def power(i, e):
            if e not in cache[i]:
                cache[i][e] = power(i, e - 1) * forms[i]
            return cache[i][e]

        out = defaultdict(complex)
        for exps, c in self.terms.items():
            q = ComplexPolynomial.constant(m, c)
            for i, e in enumerate(exps):
                if e:
                    q = q * power(i, e)
            for k, v in q.terms.items():
                out[k] += v
        return ComplexPolynomial(m, out)


class GaussianKernel:
    """Exponent ``-1/2 x^T A x + b^T x + c`` with complex symmetric ``A``.

    The lower triangle of ``A`` is overwritten from the upper one so the
    stored matrix is exactly symmetric.
    """

    __slots__ = ("A", "b", "c")

    def __init__(self, A, b=None, c: complex = 0.0):
        A = np.array(A, dtype=complex, ndmin=2) if np.size(A) else np.zeros((0, 0), complex)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ArgumentError(f"quadratic form must be square, got shape {A.shape}")
        n = A.shape[0]
        upper = np.triu(A)
        A = upper + np.triu(A, 1).T
        b = np.zeros(n, complex) if b is None else np.array(b, dtype=complex).reshape(-1)
        if b.shape != (n,):
            raise ArgumentError(f"linear coefficient must have length {n}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.isfinite(c)):
            raise ArgumentError("non-finite Gaussian kernel entry")
        A.setflags(write=False)
        b.setflags(write=False)
        self.A = A
        self.b = b
        self.c = complex(c)

    @property
    def n_vars(self) -> int:
        return self.A.shape[0]

    def exponent(self, *coords):
        coords = np.broadcast_arrays(*[np.asarray(x, dtype=float) for x in coords])
        shape = coords[0].shape if coords else ()
        out = np.full(shape, self.c, dtype=complex)
        for i, xi in enumerate(coords):
            out = out + self.b[i] * xi - 0.5 * self.A[i, i] * xi * xi
            for j in range(i + 1, len(coords)):
                out = out - self.A[i, j] * xi * coords[j]
        return out

    def conj(self) -> "GaussianKernel":
        return GaussianKernel(self.A.conj(), self.b.conj(), self.c.conjugate())

    def __add__(self, other: "GaussianKernel") -> "GaussianKernel":
        if other.n_vars != self.n_vars:
            raise ArgumentError(f"variable-count mismatch: {self.n_vars} vs {other.n_vars}")
        return GaussianKernel(self.A + other.A, self.b + other.b, self.c + other.c)

    def same_shape(self, other: "GaussianKernel") -> bool:
        """True when ``A`` and ``b`` agree bit for bit (``c`` may differ)."""
        return np.array_equal(self.A, other.A) and np.array_equal(self.b, other.b)

    def check_integrable(self, idx: Sequence[int]) -> None:
        """Raise DomainError unless Re(A) restricted to ``idx`` is positive definite."""
        idx = list(idx)
        if not idx:
            return
        block = self.A.real[np.ix_(idx, idx)]
        lam = np.linalg.eigvalsh(block)[0]
        if not lam > PD_TOL:
            raise DomainError(
                f"Re(A) on variables {idx} is not positive definite "
                f"(smallest eigenvalue {lam:.3e}); integral diverges")


class PolyGauss:
    """Product of a :class:`ComplexPolynomial` and a :class:`GaussianKernel`."""

    __slots__ = ("poly", "kernel")

    def __init__(self, poly: ComplexPolynomial, kernel: GaussianKernel):
        if poly.n_vars != kernel.n_vars:
            raise ArgumentError(
                f"polynomial has {poly.n_vars} variables, kernel has {kernel.n_vars}")
        self.poly = poly
        self.kernel = kernel

    @classmethod
    def gaussian(cls, A, b=None, c=0.0, poly: ComplexPolynomial | None = None) -> "PolyGauss":
        kernel = GaussianKernel(A, b, c)
        if poly is None:
            poly = ComplexPolynomial.constant(kernel.n_vars)
        return cls(poly, kernel)

    @property
    def n_vars(self) -> int:
        return self.poly.n_vars

    def __repr__(self):
        return f"PolyGauss({self.poly!r}, A={self.kernel.A.tolist()}, b={self.kernel.b.tolist()}, c={self.kernel.c})"

    def __call__(self, *coords):
        if self.n_vars == 0:
            return self.scalar()
        return self.poly(*coords) * np.exp(self.kernel.exponent(*coords))

    def scalar(self) -> complex:
        """Value of a 0-variable function."""
        if self.n_vars:
            raise ArgumentError("scalar() requires a 0-variable PolyGauss")
        return self.poly.coefficient(()) * np.exp(self.kernel.c)

    def canonical(self) -> "PolyGauss":
        """Fold ``exp(c)`` into the polynomial so that ``c == 0``."""
        k = self.kernel
        return PolyGauss(self.poly * np.exp(k.c), GaussianKernel(k.A, k.b, 0.0))

    def scale(self, factor: complex) -> "PolyGauss":
        return PolyGauss(self.poly * factor, self.kernel)

    def multiply(self, other: "PolyGauss") -> "PolyGauss":
        if other.n_vars != self.n_vars:
            raise ArgumentError(f"variable-count mismatch: {self.n_vars} vs {other.n_vars}")
        return PolyGauss(self.poly * other.poly, self.kernel + other.kernel)

    def conjugate(self) -> "PolyGauss":
        return PolyGauss(self.poly.conj(), self.kernel.conj())

    def multiply_poly(self, p: ComplexPolynomial) -> "PolyGauss":
        return PolyGauss(self.poly * p, self.kernel)

    def affine(self, M, shift=None) -> "PolyGauss":
        """Return ``g(y) = f(M y + shift)`` for any (n_vars, m) matrix ``M``."""
        M = np.asarray(M, dtype=complex).reshape(self.n_vars, -1)
        s = np.zeros(self.n_vars, complex) if shift is None else np.asarray(shift, complex).reshape(-1)
        A, b, c = self.kernel.A, self.kernel.b, self.kernel.c
        A2 = M.T @ A @ M
        b2 = M.T @ (b - A @ s)
        c2 = c - 0.5 * s @ A @ s + b @ s
        return PolyGauss(self.poly.affine_substitute(M, s), GaussianKernel(A2, b2, c2))

    def substitute_linear(self, M, shift=None) -> "PolyGauss":
        """Return ``g(x) = f(M x + shift)`` for real invertible ``M``."""
        M = np.atleast_2d(np.asarray(M, dtype=float))
        if M.shape != (self.n_vars, self.n_vars):
            raise ArgumentError(f"substitution matrix must be {self.n_vars}x{self.n_vars}")
        shift = np.zeros(self.n_vars) if shift is None else np.asarray(shift, dtype=float).reshape(-1)
        if shift.shape != (self.n_vars,):
            raise ArgumentError(f"shift must have length {self.n_vars}")
        if self.n_vars and abs(np.linalg.det(M)) < 1e-14 * max(1.0, np.abs(M).max()) ** self.n_vars:
            raise ArgumentError("substitution matrix is singular")
        return self.affine(M, shift)

    def embed(self, n_total: int, positions: Sequence[int]) -> "PolyGauss":
        """View as a function of ``n_total`` variables; variable ``i`` goes to ``positions[i]``."""
        M = np.zeros((self.n_vars, n_total))
        for i, p in enumerate(positions):
            M[i, p] = 1.0
        return self.affine(M)

    def _eliminate(self, k: int) -> "PolyGauss":
        # complete the square in x_k: x_k = u + (b_k - A_kr z) / a
        A, b, c = self.kernel.A, self.kernel.b, self.kernel.c
        n = self.n_vars
        a = A[k, k]
        if not a.real > PD_TOL:
            raise DomainError(f"Re(A[{k},{k}]) = {a.real:.3e}; integral diverges")
        rest = [i for i in range(n) if i != k]
        m = len(rest)
        A_kr = A[k, rest]
        M = np.zeros((n, m + 1), complex)
        for j, i in enumerate(rest):
            M[i, j] = 1.0
        M[k, :m] = -A_kr / a
        M[k, m] = 1.0
        shift = np.zeros(n, complex)
        shift[k] = b[k] / a
        shifted = self.poly.affine_substitute(M, shift)
        moments = {}
        out = defaultdict(complex)
        for exps, coef in shifted.terms.items():
            e = exps[-1]
            if e not in moments:
                moments[e] = _central_moment(e, a / 2)
            if moments[e] != 0:
                out[exps[:-1]] += coef * moments[e]
        A2 = A[np.ix_(rest, rest)] - np.outer(A_kr, A_kr) / a
        b2 = b[rest] - A_kr * b[k] / a
        c2 = c + b[k] ** 2 / (2 * a)
        return PolyGauss(ComplexPolynomial(m, out), GaussianKernel(A2, b2, c2))

    def integrate_out(self, variables: Iterable[int]) -> "PolyGauss":
        """Integrate over every real value of the listed variables.

        The result is a PolyGauss in the remaining variables, in their
        original order; integrating out everything yields a 0-variable value.
        """
        idx = sorted(set(int(v) for v in variables))
        if any(v < 0 or v >= self.n_vars for v in idx):
            raise ArgumentError(f"variable index out of range in {idx}")
        self.kernel.check_integrable(idx)
        f = self
        for k in reversed(idx):
            f = f._eliminate(k)
        return f

    def integrate(self) -> complex:
        return self.integrate_out(range(self.n_vars)).scalar()


class PolyGaussSum:
    """Finite sum of :class:`PolyGauss` terms sharing a variable count.

    Terms whose quadratic and linear coefficients coincide exactly are merged,
    which keeps sums of Fock-state products to a single term.
    """

    __slots__ = ("n_vars", "terms")

    def __init__(self, terms: Iterable[PolyGauss] = (), n_vars: int | None = None):
        terms = list(terms)
        if n_vars is None:
            if not terms:
                raise ArgumentError("n_vars is required for an empty PolyGaussSum")
            n_vars = terms[0].n_vars
        for t in terms:
            if t.n_vars != n_vars:
                raise ArgumentError(f"term with {t.n_vars} variables in a {n_vars}-variable sum")
        self.n_vars = int(n_vars)
        self.terms = tuple(_merge(terms))

    @classmethod
    def of(cls, f: "PolyGauss | PolyGaussSum") -> "PolyGaussSum":
        return f if isinstance(f, PolyGaussSum) else cls([f])

    def __repr__(self):
        return f"PolyGaussSum(n_vars={self.n_vars}, terms={list(self.terms)!r})"

    def __len__(self):
        return len(self.terms)

    def __call__(self, *coords):
        if self.n_vars == 0:
            return self.scalar()
        if len(coords) != self.n_vars:
            raise ArgumentError(f"expected {self.n_vars} coordinates, got {len(coords)}")
        shape = np.broadcast_shapes(*[np.shape(x) for x in coords])
        out = np.zeros(shape, dtype=complex)
        for t in self.terms:
            out = out + t(*coords)
        return out

    def scalar(self) -> complex:
        return complex(sum((t.scalar() for t in self.terms), 0j))

    def __add__(self, other: "PolyGaussSum") -> "PolyGaussSum":
        other = PolyGaussSum.of(other)
        if other.n_vars != self.n_vars:
            raise ArgumentError(f"variable-count mismatch: {self.n_vars} vs {other.n_vars}")
        return PolyGaussSum(self.terms + other.terms, self.n_vars)

    def scale(self, factor: complex) -> "PolyGaussSum":
        return PolyGaussSum([t.scale(factor) for t in self.terms], self.n_vars)

    def multiply(self, other: "PolyGaussSum | PolyGauss") -> "PolyGaussSum":
        other = PolyGaussSum.of(other)
        if other.n_vars != self.n_vars:
            raise ArgumentError(f"variable-count mismatch: {self.n_vars} vs {other.n_vars}")
        return PolyGaussSum([s.multiply(t) for s in self.terms for t in other.terms], self.n_vars)

    def conjugate(self) -> "PolyGaussSum":
        return PolyGaussSum([t.conjugate() for t in self.terms], self.n_vars)

    def _map(self, fn, n_vars) -> "PolyGaussSum":
        return PolyGaussSum([fn(t) for t in self.terms], n_vars)

    def affine(self, M, shift=None) -> "PolyGaussSum":
        M = np.asarray(M).reshape(self.n_vars, -1)
        return self._map(lambda t: t.affine(M, shift), M.shape[1])

    def substitute_linear(self, M, shift=None) -> "PolyGaussSum":
        return self._map(lambda t: t.substitute_linear(M, shift), self.n_vars)

    def embed(self, n_total: int, positions: Sequence[int]) -> "PolyGaussSum":
        return self._map(lambda t: t.embed(n_total, positions), n_total)

    def multiply_poly(self, p: ComplexPolynomial) -> "PolyGaussSum":
        return self._map(lambda t: t.multiply_poly(p), self.n_vars)

    def integrate_out(self, variables: Iterable[int]) -> "PolyGaussSum":
        variables = sorted(set(variables))
        return self._map(lambda t: t.integrate_out(variables), self.n_vars - len(variables))

    def integrate(self) -> complex:
        return self.integrate_out(range(self.n_vars)).scalar()


def _merge(terms: list[PolyGauss]) -> list[PolyGauss]:
    merged: list[PolyGauss] = []
    for t in terms:
        for i, m in enumerate(merged):
            if m.kernel.same_shape(t.kernel):
                factor = np.exp(t.kernel.c - m.kernel.c)
                merged[i] = PolyGauss(m.poly + t.poly * factor, m.kernel)
                break
        else:
            merged.append(t)
    return [m for m in merged if not m.poly.is_zero()]


def integrate_out(f: PolyGauss | PolyGaussSum, variables: Iterable[int]):
    return f.integrate_out(variables)


def multiply(f, g):
    return f.multiply(g)


def conjugate(f):
    return f.conjugate()


def substitute_linear(f, M, shift=None):
    return f.substitute_linear(M, shift)
