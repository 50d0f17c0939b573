"""Hard-edge scaling limit: eigenvalues at scale 1/N^2 near the origin.

The three limiting kernel combinations are one-fold integrals of products
of entire G-function series (index families with p = 0, q = 3); the k-point
correlation is their Pfaffian with prefactor (-1)^(k(k-1)/2)/2^k.  Finite-N
convergence is measured by rescaling the finite-N kernels with the stated
powers of N.

Integer a makes the series parameters collide (logarithmic case); such a is
shifted by +-1e-5 and the two evaluations averaged, leaving an O(1e-10)
error.  The t-integrals are evaluated after the substitution t = u^2, which
turns the half-integer endpoint powers of the acceptance parameters into
smooth integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bures import EnsembleParams, delta_sigma_kernels
from .linalg import pfaffian
from .quadrature import gauss_jacobi01
from .special import MeijerGSpec, best_evaluator

__all__ = [
    "HardEdgeParams",
    "LimitKernels",
    "limit_kernels",
    "limit_correlation",
    "convergence_study",
]

_EPS_A = 1e-5


def _near_int(x):
    return abs(x - round(x)) < 1e-9


@dataclass(frozen=True)
class HardEdgeParams:
    """Weight exponent a > -1 of the hard-edge family."""

    a: float

    def __post_init__(self):
        if not self.a > -1:
            raise ValueError("need a > -1")


class _LimitKernelsAt:
    """Limiting kernels at one (possibly shifted) value of a."""

    def __init__(self, a, t_nodes=64):
        self.a = a
        g = lambda m, bs: best_evaluator(MeijerGSpec(m, 0, 0, 3, (), tuple(bs)))
        self.g20_up = g(2, (0.0, a + 1.0, -a))           # used in dK11, z_i side
        self.g20_dn = g(2, (0.0, a, -a - 1.0))           # used in dK11, z_j side
        self.g10_a = g(1, (0.0, -a, -2.0 * a - 1.0))     # dK00 / sK01
        self.g10_b = g(1, (0.0, -a - 1.0, -2.0 * a - 1.0))
        self.g20_c = g(2, (a, 2.0 * a + 1.0, 0.0))       # sK01
        self.g20_d = g(2, (a + 1.0, 2.0 * a + 1.0, 0.0))
        u, w = gauss_jacobi01(t_nodes)
        self.t = u * u
        self.wt = 2.0 * u * w
        tj, wj = gauss_jacobi01(t_nodes, beta=2.0 * a + 1.0)
        self.t00 = tj
        self.w00 = wj

    def _pair(self, ga, gb, t, w, zi, zj):
        s1, l1 = ga.eval_log(t * zi)
        s2, l2 = gb.eval_log(t * zj)
        lt = l1 + l2 + np.log(np.abs(w))
        m = lt.max()
        if not np.isfinite(m):
            return 0.0
        return float(np.sum(s1 * s2 * np.sign(w) * np.exp(lt - m)) * math.exp(m))

    def delta_k11(self, zi, zj):
        zi, zj = float(zi), float(zj)
        if zi == zj:
            return 0.0
        free = (zi - zj) / (zi + zj)
        term = zj * self._pair(self.g20_up, self.g20_dn, self.t, self.wt, zi, zj) \
            - zi * self._pair(self.g20_dn, self.g20_up, self.t, self.wt, zi, zj)
        return zi ** self.a * zj ** self.a * (free + term)

    def sigma_k01(self, zi, zj):
        zi, zj = float(zi), float(zj)
        return self._pair(self.g20_c, self.g10_a, self.t, self.wt, zi, zj) \
            + self._pair(self.g10_b, self.g20_d, self.t, self.wt, zi, zj)

    def delta_k00(self, zj, zi):
        zj, zi = float(zj), float(zi)
        if zi == zj:
            return 0.0
        return self._pair(self.g10_a, self.g10_b, self.t00, self.w00, zj, zi) \
            - self._pair(self.g10_b, self.g10_a, self.t00, self.w00, zj, zi)


class LimitKernels:
    """Hard-edge limits of the antisymmetrized kernel combinations.

    Exact antisymmetry of the dK blocks is enforced by construction; at
    integer a the evaluation averages a +- 1e-5.
    """

    def __init__(self, p: HardEdgeParams, t_nodes=64):
        self.p = p
        if _near_int(p.a):
            self._parts = [(0.5, _LimitKernelsAt(p.a + _EPS_A, t_nodes)),
                           (0.5, _LimitKernelsAt(p.a - _EPS_A, t_nodes))]
        else:
            self._parts = [(1.0, _LimitKernelsAt(p.a, t_nodes))]

    def delta_k11(self, zi, zj):
        return sum(w * part.delta_k11(zi, zj) for w, part in self._parts)

    def sigma_k01(self, zi, zj):
        return sum(w * part.sigma_k01(zi, zj) for w, part in self._parts)

    def delta_k00(self, zj, zi):
        return sum(w * part.delta_k00(zj, zi) for w, part in self._parts)

    def density(self, zs):
        zs = np.atleast_1d(np.asarray(zs, dtype=float))
        return np.array([0.5 * self.sigma_k01(z, z) for z in zs])


def limit_kernels(p: HardEdgeParams, t_nodes=64) -> LimitKernels:
    return LimitKernels(p, t_nodes)


def limit_correlation(p: HardEdgeParams, zs, kernels=None):
    """Limiting k-point function: (-1)^(k(k-1)/2) 2^-k Pf of the kernel blocks."""
    zs = [float(z) for z in np.atleast_1d(zs)]
    k = len(zs)
    for i in range(k):
        for j in range(i + 1, k):
            if abs(zs[i] - zs[j]) < 1e-12:
                raise ValueError("duplicate points")
    ks = kernels if kernels is not None else limit_kernels(p)
    B = np.zeros((k, k))
    C = np.zeros((k, k))
    D = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            if i < j:
                B[i, j] = ks.delta_k11(zs[i], zs[j])
                D[i, j] = ks.delta_k00(zs[j], zs[i])
            C[i, j] = ks.sigma_k01(zs[i], zs[j])
    B = B - B.T
    D = D - D.T
    M = np.block([[B, C], [-C.T, D]])
    sgn = -1.0 if (k * (k - 1) // 2) % 2 else 1.0
    return sgn * pfaffian(M) / 2.0 ** k


def convergence_study(a, z_grid, n_list, backend="meijer"):
    """Sup-norm deviation of rescaled finite-N hard-edge quantities from the limit.

    For each N: the rescaled density N^-1 R_1(z/N^2) against the limiting
    density on z_grid (the N^-2 of the raw scaling combines with the factor
    N between the probability-normalized density used here and the
    unnormalized one), plus the three kernel ratios finite/limit with the
    scalings N^(4a+1), N^-1, N^(-4a-3) at a fixed grid pair.  Density
    deviations must decrease along an ascending n_list.
    """
    z_grid = np.asarray(z_grid, dtype=float)
    lk = limit_kernels(HardEdgeParams(a))
    dens_lim = lk.density(z_grid)
    z1, z2 = float(z_grid[0]), float(z_grid[len(z_grid) // 2])
    lim11 = lk.delta_k11(z1, z2)
    lim01 = lk.sigma_k01(z1, z2)
    lim00 = lk.delta_k00(z2, z1)
    rows = []
    for N in n_list:
        p = EnsembleParams(int(N), a)
        ks = delta_sigma_kernels(p, backend=backend)
        dens_N = (1.0 / N) * ks.density(z_grid / N ** 2)
        dev = float(np.max(np.abs(dens_N - dens_lim) / np.maximum(np.abs(dens_lim), 1e-300)))
        r11 = N ** (4.0 * a + 1.0) * ks.delta_k11(z1 / N ** 2, z2 / N ** 2) / lim11
        r01 = (1.0 / N) * ks.sigma_k01(z1 / N ** 2, z2 / N ** 2) / lim01
        r00 = N ** (-4.0 * a - 3.0) * ks.delta_k00(z2 / N ** 2, z1 / N ** 2) / lim00
        rows.append({"N": int(N), "density_sup_dev": dev,
                     "ratio_dk11": float(r11), "ratio_sk01": float(r01),
                     "ratio_dk00": float(r00)})
    return rows
