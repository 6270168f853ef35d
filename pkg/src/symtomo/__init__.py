"""Symplectic tomograms of oscillator states, inverted-oscillator evolution,
and a dictionary-based separability test for joint tomograms."""

from .errors import (ArgumentError, ConvergenceError, DegenerateStateError, DomainError,
                     SymtomoError, UnsupportedError)
from .polygauss import ComplexPolynomial, GaussianKernel, PolyGauss, PolyGaussSum, gauss_moment
from .states import (Ensemble, FockLabel, PureState, ensemble, fock, fock_product, norm,
                     entangled_pair, mixed_pair, parse_spec, product, superpose)
from .tomography import (GridData, GridSpec, Tomogram, TomographyParams, amplitude, eval_grid,
                         marginal, tomogram, tomogram_ensemble, tomogram_pure)
from .reference import reference_distribution
from .separability import DictionaryConfig, SeparabilityVerdict, classify
from .evolution import evolve, evolved_tomogram, propagator

__version__ = "0.1.0"
