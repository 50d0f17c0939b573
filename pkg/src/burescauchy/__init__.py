"""Eigenvalue statistics of the Bures random-matrix ensemble computed through
the Cauchy two-matrix model: bi-orthogonal and skew-orthogonal polynomials,
determinantal and Pfaffian correlation kernels, exact normalization
identities, hard-edge limits, and independent Monte Carlo / quadrature
oracles for all of them."""

from .logspace import LogSigned
from .special import MeijerGSpec, meijer_g, meijer_g_series

__version__ = "0.1.0"
