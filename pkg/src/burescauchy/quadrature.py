"""Quadrature rules shared across the package.

Three rules cover every integral that appears:

* generalized Gauss-Laguerre on (0, inf) for weights x^alpha e^-x,
* Gauss-Jacobi mapped to [0, 1] for weights t^beta (endpoint singularity of
  the kernel t-integrals),
* a coupled rule for double integrals against x^p y^q e^{-x-y} / (x+y),
  obtained from the substitution x = r u, y = r (1-u): the 1/(x+y) factor
  cancels exactly and the rule is a tensor product of Gauss-Laguerre in r
  and Gauss-Jacobi in u, hence exact for polynomial numerators.

Node counts are fixed (128 per axis unless stated) so oracle values are
reproducible bit for bit.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import roots_genlaguerre, roots_jacobi, roots_legendre

DEFAULT_NODES = 128


@lru_cache(maxsize=64)
def gauss_laguerre(n=DEFAULT_NODES, alpha=0.0):
    """Nodes/weights for integral_0^inf x^alpha e^-x f(x) dx."""
    x, w = roots_genlaguerre(n, alpha)
    return x, w


@lru_cache(maxsize=64)
def gauss_jacobi01(n=DEFAULT_NODES, beta=0.0, alpha=0.0):
    """Nodes/weights for integral_0^1 t^beta (1-t)^alpha f(t) dt."""
    if beta == 0.0 and alpha == 0.0:
        x, w = roots_legendre(n)
        return 0.5 * (x + 1.0), 0.5 * w
    x, w = roots_jacobi(n, alpha, beta)
    t = 0.5 * (x + 1.0)
    return t, w / 2.0 ** (alpha + beta + 1.0)


@lru_cache(maxsize=64)
def coupled_rule(p, q, n=DEFAULT_NODES):
    """Nodes (x, y) and weights for integral x^p y^q e^{-x-y}/(x+y) f(x,y).

    Exact (up to the Gauss degrees) for polynomial f: radially the rule is
    Gauss-Laguerre with alpha = p + q, angularly Gauss-Jacobi with weight
    u^p (1-u)^q.
    """
    r, wr = roots_genlaguerre(n, p + q)
    xj, wj = roots_jacobi(n, q, p)
    u = 0.5 * (xj + 1.0)
    wu = wj / 2.0 ** (p + q + 1.0)
    X = np.outer(r, u)
    Y = np.outer(r, 1.0 - u)
    W = np.outer(wr, wu)
    return X.ravel(), Y.ravel(), W.ravel()


def integrate_coupled(f, p, q, n=DEFAULT_NODES):
    """integral_0^inf integral_0^inf x^p y^q e^{-x-y}/(x+y) f(x,y) dx dy."""
    x, y, w = coupled_rule(float(p), float(q), n)
    return np.sum(w * f(x, y))


def integrate_laguerre(f, alpha=0.0, n=DEFAULT_NODES):
    """integral_0^inf x^alpha e^-x f(x) dx."""
    x, w = gauss_laguerre(n, float(alpha))
    return np.sum(w * f(x))
