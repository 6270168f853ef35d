"""Oscillator states as polynomial-Gaussian wave functions.

Units are dimensionless (hbar = m = omega = 1). Pure states carry a
:class:`~symtomo.polygauss.PolyGaussSum` over one variable per mode; mixed
states are explicit convex ensembles of pure states.

This module also owns the JSON state-spec format read by the CLI::

    {"modes": 2, "kind": "pure",
     "terms": [{"amplitude": [re, im], "fock": [n1, n2]}, ...]}
    {"modes": 2, "kind": "ensemble",
     "members": [{"weight": w, "terms": [...]}, ...]}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ArgumentError, DegenerateStateError, DomainError
from .polygauss import ComplexPolynomial, PolyGauss, PolyGaussSum

NORM_TOL = 1e-10


@dataclass(frozen=True)
class FockLabel:
    mode: int
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ArgumentError(f"excitation number must be >= 0, got {self.n}")


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized pure state of ``n_modes`` oscillators.

    ``raw_norm`` keeps the norm before the last renormalization (1 for
    states built directly). Pass ``check=False`` to skip the analytic norm
    check, e.g. for deliberately non-unitary evolution output.
    """

    n_modes: int
    wavefunction: PolyGaussSum
    label: str = ""
    raw_norm: float = 1.0
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        wf = PolyGaussSum.of(self.wavefunction)
        object.__setattr__(self, "wavefunction", wf)
        if wf.n_vars != self.n_modes:
            raise ArgumentError(
                f"wave function has {wf.n_vars} variables for {self.n_modes} modes")
        if self.check:
            nrm = norm(self)
            if abs(nrm - 1.0) > NORM_TOL:
                raise DomainError(f"state {self.label!r} is not normalized (norm {nrm:.15g})")

    def __call__(self, *x):
        return self.wavefunction(*x)


@dataclass(frozen=True)
class Ensemble:
    """Convex mixture ``sum_s w_s |psi_s><psi_s|`` of pure states."""

    members: tuple

    def __post_init__(self):
        members = tuple((float(w), s) for w, s in self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise ArgumentError("an ensemble needs at least one member")
        if any(w < 0 for w, _ in members):
            raise ArgumentError("ensemble weights must be nonnegative")
        if abs(sum(w for w, _ in members) - 1.0) > 1e-12:
            raise ArgumentError("ensemble weights must sum to 1")
        if len({s.n_modes for _, s in members}) != 1:
            raise ArgumentError("ensemble members must share a mode count")

    @property
    def n_modes(self) -> int:
        return self.members[0][1].n_modes

    @property
    def weights(self) -> tuple:
        return tuple(w for w, _ in self.members)


# -- analytic norms and overlaps ------------------------------------------

def inner(phi: PureState | PolyGaussSum, psi: PureState | PolyGaussSum) -> complex:
    """Analytic overlap ``<phi|psi> = int conj(phi) psi``."""
    f = phi.wavefunction if isinstance(phi, PureState) else PolyGaussSum.of(phi)
    g = psi.wavefunction if isinstance(psi, PureState) else PolyGaussSum.of(psi)
    return f.conjugate().multiply(g).integrate()


def norm(psi: PureState | PolyGaussSum) -> float:
    return math.sqrt(max(inner(psi, psi).real, 0.0))


def l2_distance(phi, psi) -> float:
    d2 = inner(phi, phi).real + inner(psi, psi).real - 2 * inner(phi, psi).real
    return math.sqrt(max(d2, 0.0))


def position_moments(state: PureState, mode: int = 0) -> tuple[float, float]:
    """Mean and variance of the position of ``mode`` in ``|psi|**2``."""
    density = state.wavefunction.conjugate().multiply(state.wavefunction)
    n = state.n_modes
    x = ComplexPolynomial.variable(n, mode)
    m0 = density.integrate().real
    m1 = density.multiply_poly(x).integrate().real / m0
    m2 = density.multiply_poly(x * x).integrate().real / m0
    return m1, m2 - m1 * m1


# -- constructors ----------------------------------------------------------

def hermite(n: int) -> ComplexPolynomial:
    """Physicists' Hermite polynomial H_n in one variable."""
    if n < 0:
        raise ArgumentError(f"Hermite order must be >= 0, got {n}")
    x2 = ComplexPolynomial(1, {(1,): 2.0})
    h_prev, h = ComplexPolynomial.constant(1), x2
    if n == 0:
        return h_prev
    for k in range(1, n):
        h_prev, h = h, x2 * h - h_prev * (2 * k)
    return h


def fock(n: int) -> PureState:
    """Fock state ``H_n(x) exp(-x**2/2) / (pi**(1/4) sqrt(2**n n!))``."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
        raise ArgumentError(f"excitation number must be a nonnegative integer, got {n!r}")
    coef = 1.0 / (np.pi ** 0.25 * math.sqrt(2.0 ** n * math.factorial(n)))
    wf = PolyGauss.gaussian([[1.0]], poly=hermite(n) * coef)
    return PureState(1, PolyGaussSum([wf]), label=f"|{n}>")


def product(states: Sequence[PureState]) -> PureState:
    """Tensor product of single-mode states, mode ``k`` taken from ``states[k]``."""
    states = list(states)
    if not states:
        raise ArgumentError("product of an empty list of states")
    for s in states:
        if s.n_modes != 1:
            raise ArgumentError("product() takes single-mode states")
    n = len(states)
    wf = None
    for k, s in enumerate(states):
        factor = s.wavefunction.embed(n, [k])
        wf = factor if wf is None else wf.multiply(factor)
    label = "".join(s.label for s in states) if all(s.label for s in states) else ""
    return PureState(n, wf, label=label)


def fock_product(ns: Sequence[int]) -> PureState:
    return product([fock(n) for n in ns])


def superpose(terms: Iterable[tuple[complex, PureState]], label: str = "") -> PureState:
    """Normalized linear combination ``sum_i c_i psi_i``.

    The norm before renormalization is kept on ``raw_norm``.
    """
    terms = list(terms)
    if not terms:
        raise ArgumentError("superposition of no terms")
    n = terms[0][1].n_modes
    if any(s.n_modes != n for _, s in terms):
        raise ArgumentError("superposed states must share a mode count")
    wf = PolyGaussSum([], n_vars=n)
    for c, s in terms:
        wf = wf + s.wavefunction.scale(complex(c))
    raw = norm(wf)
    if raw < 1e-12:
        raise DegenerateStateError(f"superposition cancels to norm {raw:.3e}")
    if not label:
        label = " + ".join(f"({complex(c):.4g}){s.label}" for c, s in terms)
    return PureState(n, wf.scale(1.0 / raw), label=label, raw_norm=raw)


def ensemble(members: Iterable[tuple[float, PureState]]) -> Ensemble:
    """Ensemble with weights rescaled to sum to one; member order is kept."""
    members = [(float(w), s) for w, s in members]
    if not members:
        raise ArgumentError("an ensemble needs at least one member")
    if any(w < 0 or not math.isfinite(w) for w, _ in members):
        raise ArgumentError("ensemble weights must be finite and nonnegative")
    total = sum(w for w, _ in members)
    if total <= 0:
        raise ArgumentError("ensemble weights are all zero")
    return Ensemble(tuple((w / total, s) for w, s in members))


def entangled_pair() -> PureState:
    """``(|0>|1> + |1>|0>) / sqrt(2)``, i.e. ``(x + y) exp(-(x**2 + y**2)/2) / sqrt(pi)``."""
    r = 1 / math.sqrt(2)
    return superpose([(r, fock_product([0, 1])), (r, fock_product([1, 0]))],
                     label="(|01>+|10>)/sqrt2")


def mixed_pair() -> Ensemble:
    """``(rho_0 x rho_1 + rho_1 x rho_0) / 2``."""
    return ensemble([(0.5, fock_product([0, 1])), (0.5, fock_product([1, 0]))])


# -- JSON state specs --------------------------------------------------------

class SpecError(ArgumentError):
    """Malformed state spec; ``line``/``column`` set for JSON syntax errors."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class SpecTerm:
    amplitude: complex
    fock: tuple


@dataclass(frozen=True)
class SpecMember:
    weight: float
    terms: tuple


@dataclass(frozen=True)
class StateSpec:
    modes: int
    kind: str
    terms: tuple = ()
    members: tuple = ()

    def to_dict(self) -> dict:
        def term(t):
            return {"amplitude": [t.amplitude.real, t.amplitude.imag], "fock": list(t.fock)}
        out = {"modes": self.modes, "kind": self.kind}
        if self.kind == "pure":
            out["terms"] = [term(t) for t in self.terms]
        else:
            out["members"] = [{"weight": m.weight, "terms": [term(t) for t in m.terms]}
                              for m in self.members]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def build(self) -> PureState | Ensemble:
        if self.kind == "pure":
            return _build_pure(self.terms)
        return ensemble([(m.weight, _build_pure(m.terms)) for m in self.members])


def _build_pure(terms) -> PureState:
    return superpose([(t.amplitude, fock_product(t.fock)) for t in terms])


def _parse_terms(raw, modes, where):
    if not isinstance(raw, list) or not raw:
        raise SpecError(f"{where}: 'terms' must be a non-empty list")
    terms = []
    for i, t in enumerate(raw):
        loc = f"{where}.terms[{i}]"
        if not isinstance(t, dict):
            raise SpecError(f"{loc}: expected an object")
        amp = t.get("amplitude", [1.0, 0.0])
        if isinstance(amp, (int, float)) and not isinstance(amp, bool):
            amp = [amp, 0.0]
        if (not isinstance(amp, list) or len(amp) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in amp)):
            raise SpecError(f"{loc}.amplitude: expected [re, im]")
        ns = t.get("fock")
        if (not isinstance(ns, list) or len(ns) != modes
                or not all(isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in ns)):
            raise SpecError(f"{loc}.fock: expected {modes} nonnegative integers")
        terms.append(SpecTerm(complex(amp[0], amp[1]), tuple(ns)))
    return tuple(terms)


def parse_spec(source: str | dict) -> StateSpec:
    """Parse a state spec from JSON text or an already-decoded dict."""
    if isinstance(source, str):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise SpecError(exc.msg, exc.lineno, exc.colno) from None
    else:
        data = source
    if not isinstance(data, dict):
        raise SpecError("top level must be a JSON object")
    modes = data.get("modes")
    if not isinstance(modes, int) or isinstance(modes, bool) or modes < 1:
        raise SpecError("'modes' must be a positive integer")
    kind = data.get("kind", "pure")
    if kind == "pure":
        return StateSpec(modes, kind, terms=_parse_terms(data.get("terms"), modes, "$"))
    if kind == "ensemble":
        raw = data.get("members")
        if not isinstance(raw, list) or not raw:
            raise SpecError("$: 'members' must be a non-empty list")
        members = []
        for i, m in enumerate(raw):
            if not isinstance(m, dict):
                raise SpecError(f"$.members[{i}]: expected an object")
            w = m.get("weight")
            if not isinstance(w, (int, float)) or isinstance(w, bool) or w < 0:
                raise SpecError(f"$.members[{i}].weight: expected a nonnegative number")
            members.append(SpecMember(float(w), _parse_terms(m.get("terms"), modes,
                                                              f"$.members[{i}]")))
        return StateSpec(modes, kind, members=tuple(members))
    raise SpecError(f"'kind' must be 'pure' or 'ensemble', got {kind!r}")


def load_spec(path) -> StateSpec:
    with open(path) as fh:
        return parse_spec(fh.read())
