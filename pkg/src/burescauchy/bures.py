"""Bures ensemble built on top of the Cauchy two-matrix model.

Eigenvalue weight prod z_j^a e^{-z_j} * prod_{i<j} (z_j-z_i)^2/(z_j+z_i) on
(0, inf)^N with a > -1.  Squaring any of its partition functions gives
2^N times a Cauchy partition function at exponents (a, a+1); inverting the
square root yields a Pfaffian point process whose kernels are linear
combinations of the Cauchy kernels.  This module carries the normalization
constant, the skew-orthogonal polynomials, the Pfaffian partition-function
representation, and the k-point correlation Pfaffian.

Kernel convention: the Cauchy kernels enter in the normalized form of
cauchy.CauchyKernelSet (densities integrating to one), under which the
k-point prefactor (-1)^(k(k-1)/2) N! / ((2N)^k (N-k)!) reproduces the
defining integrals; this is validated against direct quadrature in the
tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cauchy import (
    CauchyParams,
    PolyCoeffs,
    biortho_poly,
    cauchy_transform,
    kernels as cauchy_kernels,
    norm_constant as cauchy_norm_constant,
    two_point_partition,
    _kk_partition,
)
from .linalg import PointSets, cauchy_vandermonde, pfaffian
from .logspace import LogSigned, ONE, log_signed_sum
from .quadrature import coupled_rule, gauss_laguerre
from .special import gamma_ls

__all__ = [
    "EnsembleParams",
    "BuresKernelSet",
    "norm_constant_bures",
    "zhat_and_sign",
    "skew_poly",
    "skew_pairing",
    "skew_norm",
    "skew_orthogonality_check",
    "delta_sigma_kernels",
    "bures_correlation",
    "bures_correlation_kernels",
    "SkewDensity",
    "bures_moment_pfaffian",
    "bures_partition_pf",
]


@dataclass(frozen=True)
class EnsembleParams:
    """Matrix dimension N and weight exponent a > -1."""

    N: int
    a: float

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be a positive integer")
        if not self.a > -1:
            raise ValueError("need a > -1 for an integrable weight")

    @property
    def cauchy(self) -> CauchyParams:
        return CauchyParams(self.N, self.a, self.a + 1.0)


def norm_constant_bures(p: EnsembleParams) -> LogSigned:
    """Partition function of the eigenvalue weight, in log space."""
    N, a = p.N, p.a
    total = LogSigned(1, 0.5 * N * math.log(math.pi)
                      - (N * N + 2.0 * N * a) * math.log(2.0))
    for j in range(N):
        total = total * gamma_ls(1.0 + j) * gamma_ls(2.0 * a + 2.0 + j) \
            / gamma_ls(j + a + 1.5)
    return total


def zhat_and_sign(L: int, a: float):
    """Mean-of-difference constant of the coupled model and its sign s.

    Closed form -L (2a+L+1)/(2a+2L+1) Z_C(L, a, a+1); s is its sign, which
    is -1 throughout the parameter domain.
    """
    if L < 1:
        raise ValueError("L >= 1 required")
    zc = cauchy_norm_constant(CauchyParams(L, a, a + 1.0))
    val = LogSigned.from_float(-L * (2.0 * a + L + 1.0) / (2.0 * a + 2.0 * L + 1.0)) * zc
    return val, val.sign


def skew_poly(a: float, m: int) -> PolyCoeffs:
    """Monic skew-orthogonal polynomial of order m for the two-point weight.

    Even orders come from the closed finite sum; odd orders are
    x (1 - d/dx) q_{2n}(x), the choice that pins the arbitrary additive
    constant to -n(2n+3+2a).
    """
    if m < 0:
        raise ValueError("order must be >= 0")
    if m % 2 == 0:
        n = m // 2
        coeffs = []
        for j in range(2 * n + 1):
            sign = 1 if j % 2 == 0 else -1
            t = gamma_ls(2.0 * n + 1.0) / (gamma_ls(j + 1.0) * gamma_ls(2.0 * n - j + 1.0))
            t = t * gamma_ls(2.0 * a + 2.0 * n + j + 3.0) * gamma_ls(2.0 * a + 2.0 * n + 2.0) \
                * gamma_ls(a + 2.0 * n + 2.0) / (gamma_ls(2.0 * a + 4.0 * n + 3.0)
                                                 * gamma_ls(2.0 * a + j + 2.0)
                                                 * gamma_ls(a + j + 2.0))
            coeffs.append(LogSigned(sign, 0.0) * t)
        return PolyCoeffs(coeffs)
    n = (m - 1) // 2
    base = skew_poly(a, 2 * n).coeffs
    out = []
    for k in range(2 * n + 2):
        terms = []
        if k >= 1:
            terms.append(base[k - 1])
        if k <= 2 * n:
            terms.append(LogSigned.from_float(-float(k)) * base[k])
        out.append(log_signed_sum(terms))
    return PolyCoeffs(out)


def skew_pairing(a: float, f: PolyCoeffs, g: PolyCoeffs, nodes=128) -> float:
    """<f, g> = int int (z1 z2)^a e^{-z1-z2} (z1-z2)/(z1+z2) f(z1) g(z2).

    The coupled quadrature rule absorbs 1/(z1+z2) exactly, so the pairing of
    polynomials is exact up to the Gauss degrees.
    """
    z1, z2, w = coupled_rule(float(a), float(a), nodes)
    return float(np.sum(w * (z1 - z2) * f.eval(z1) * g.eval(z2)))


def skew_norm(p_a: float, n: int) -> LogSigned:
    """Diagonal pairing <q_{2n}, q_{2n+1}> = Z_B^(2n+2)/Z_B^(2n)."""
    a = p_a
    val = LogSigned(1, math.log(math.pi) - (8.0 * n + 4.0 * a + 4.0) * math.log(2.0))
    val = val * gamma_ls(2.0 * n + 2.0) * gamma_ls(2.0 * n + 1.0) \
        * gamma_ls(2.0 * n + 2.0 * a + 3.0) * gamma_ls(2.0 * n + 2.0 * a + 2.0) \
        / (gamma_ls(2.0 * n + a + 2.5) * gamma_ls(2.0 * n + a + 1.5))
    return val


def skew_orthogonality_check(a: float, max_order: int, nodes=128):
    """Gram matrix of the skew pairing for orders <= max_order.

    Returns (gram, expected) where expected has the Z-ratio values on the
    even-odd diagonal and zeros elsewhere.
    """
    polys = [skew_poly(a, m) for m in range(max_order + 1)]
    gram = np.zeros((max_order + 1, max_order + 1))
    for i in range(max_order + 1):
        for j in range(max_order + 1):
            gram[i, j] = skew_pairing(a, polys[i], polys[j], nodes)
    expected = np.zeros_like(gram)
    for n in range(max_order // 2 + 1):
        i, j = 2 * n, 2 * n + 1
        if j <= max_order:
            # the defining integral pairs <even(z1), odd(z2)> to minus the
            # Z-ratio under the printed two-point weight; magnitude is the
            # authoritative Z^(2n+2)/Z^(2n)
            v = skew_norm(a, n).to_float()
            expected[i, j] = -v
            expected[j, i] = v
    return gram, expected


# ---------------------------------------------------------------------------
# kernels and correlations


class BuresKernelSet:
    """Antisymmetrized and symmetrized combinations of the Cauchy kernels.

    delta_k11(z1, z2) = K11(z1; z2) - K11(z2; z1)      (antisymmetric)
    sigma_k01(z1, z2) = K01(z1, z2) + K10(z1, z2)
    delta_k00(z1, z2) = K00(z1; z2) - K00(z2; z1)      (antisymmetric)
    built on the Cauchy model at exponents (a, a+1).
    """

    def __init__(self, p: EnsembleParams, backend="auto"):
        self.p = p
        self.ck = cauchy_kernels(p.cauchy, backend=backend)

    def delta_k11(self, z1, z2):
        if z1 == z2:
            return 0.0
        return self.ck.K11(z1, z2) - self.ck.K11(z2, z1)

    def sigma_k01(self, z1, z2):
        return self.ck.K01(z1, z2) + self.ck.K10(z1, z2)

    def delta_k00(self, z1, z2):
        if z1 == z2:
            return 0.0
        return self.ck.K00(z1, z2) - self.ck.K00(z2, z1)

    def density(self, zs):
        """Level density R_1 = (R_{1,0} + R_{0,1})/2 of the Cauchy pair."""
        zs = np.atleast_1d(np.asarray(zs, dtype=float))
        return 0.5 * (self.ck.density_x(zs) + self.ck.density_y(zs))

    def density_log(self, zs):
        sx, lx = self.ck.density_x_log(zs)
        sy, ly = self.ck.density_y_log(zs)
        terms = np.stack([sx * np.exp(lx), sy * np.exp(ly)])
        vals = 0.5 * terms.sum(axis=0)
        sign = np.sign(vals)
        with np.errstate(divide="ignore"):
            return sign, np.where(vals != 0.0, np.log(np.abs(vals)), -np.inf)


def delta_sigma_kernels(p: EnsembleParams, backend="auto") -> BuresKernelSet:
    return BuresKernelSet(p, backend=backend)


def bures_moment_pfaffian(N: int, a: float, insert=None, nodes=128):
    """Pfaffian of the de Bruijn moment matrix for the weight
    w(t) = t^a e^-t  times an optional rational insertion.

    insert is a list of fixed points z_i; the one-point weight becomes
    w(t) prod_i (t - z_i)^2 / (t + z_i).  Even N uses the plain
    antisymmetric moment matrix, odd N the matrix bordered by the
    one-point moments.  Moments are evaluated by the coupled rule (exact
    for the polynomial part; the rational factors are smooth on the
    domain).
    """
    zs = [float(z) for z in (insert or [])]

    def factor(t):
        out = np.ones_like(t)
        for z in zs:
            out = out * (t - z) ** 2 / (t + z)
        return out

    z1, z2, w = coupled_rule(float(a), float(a), nodes)
    f12 = factor(z1) * factor(z2)
    if zs:
        nod, wl = gauss_laguerre(nodes, a)
        f1 = factor(nod)
    if N % 2 == 0:
        M = np.zeros((N, N))
        for i in range(1, N + 1):
            for j in range(i + 1, N + 1):
                M[i - 1, j - 1] = float(np.sum(w * (z1 - z2) * z1 ** (i - 1)
                                               * z2 ** (j - 1) * f12))
        M = M - M.T
    else:
        M = np.zeros((N + 1, N + 1))
        for i in range(1, N + 1):
            for j in range(i + 1, N + 1):
                M[i, j] = float(np.sum(w * (z1 - z2) * z1 ** (i - 1)
                                       * z2 ** (j - 1) * f12))
        if zs:
            moms = [float(np.sum(wl * nod ** (j - 1) * f1)) for j in range(1, N + 1)]
        else:
            moms = [gamma_ls(a + j).to_float() for j in range(1, N + 1)]
        M[0, 1:] = moms
        M = M - M.T
    return pfaffian(M)


def bures_correlation(p: EnsembleParams, zs, nodes=128):
    """k-point correlation function without self-energy terms.

    Marginalizing the Pfaffian-squared eigenvalue weight over N - k
    variables is itself a de Bruijn integral for the one-point weight
    modified by the charpoly factor prod (t - z_i)^2/(t + z_i), so

      R_k(z) = prefactor(z) |Pf M[w-modified]| / (Z_B (N)_k-free)

    with prefactor(z) = prod w(z_i) prod_{i<j} (z_i-z_j)^2/(z_i+z_j).
    Normalized so that integrating over all k arguments gives one.

    The Pfaffian-kernel representation printed for this ensemble could not
    be reproduced against direct quadrature of the defining marginals for
    N >= 3; this route is validated against brute force in the tests.
    """
    zs = [float(z) for z in np.atleast_1d(zs)]
    k = len(zs)
    if k > p.N:
        raise ValueError("need k <= N")
    for i in range(k):
        for j in range(i + 1, k):
            if abs(zs[i] - zs[j]) < 1e-12:
                raise ValueError("duplicate points")
    a, N = p.a, p.N
    pref = 1.0
    for i, z in enumerate(zs):
        pref *= z ** a * math.exp(-z)
        for j in range(i + 1, k):
            pref *= (z - zs[j]) ** 2 / (z + zs[j])
    if k == p.N:
        rest = 1.0
    else:
        rest = abs(bures_moment_pfaffian(N - k, a, insert=zs, nodes=nodes))
    zb = norm_constant_bures(p)
    # R_k = pref (N-k)! Z^(N-k)[modified] / (Z_B N!), Z^(M)[..] = |Pf M|
    log_val = math.log(pref) + (math.log(rest) if rest > 0 else -math.inf) \
        + gamma_ls(float(N - k + 1)).log_abs - gamma_ls(float(N + 1)).log_abs \
        - zb.log_abs
    return math.exp(log_val)


class SkewDensity:
    """Level density from the skew-orthogonal machinery (even N).

    rho_1(u)/N with rho_1(u) = sum_n [Phi_{2n+1}(u) q_{2n}(u)
    - Phi_{2n}(u) q_{2n+1}(u)] / r_n, where Phi_m = g * q_m is the
    transform against the antisymmetric two-point weight and r_n the
    empirical skew norms.  Independent of the Cauchy kernel layer, which
    makes it the second route for the density identity.

    The transform sums are oscillatory with large terms; they run in
    extended precision (long double), with the polynomial part of the
    one-point moments accumulated in sign-tracked log space, keeping the
    route below 1e-9 relative at N = 8.
    """

    def __init__(self, p: EnsembleParams, nodes=192):
        if p.N % 2:
            raise ValueError("skew-density route needs even N")
        self.p = p
        a = p.a
        self.qs = [skew_poly(a, m) for m in range(p.N)]
        self.rs = [-skew_norm(a, n).to_float() for n in range(p.N // 2)]
        from .quadrature import gauss_laguerre
        nod, wt = gauss_laguerre(nodes, a)
        self.nod = nod.astype(np.longdouble)
        self.wt = wt.astype(np.longdouble)
        # coefficient noise at double precision is amplified ~1e8 by the
        # degree-15 cancellation, so coefficients come from mpmath
        self._coeffs_ld = [self._mp_coeffs(m) for m in range(p.N)]
        self.qvals = []
        for cs in self._coeffs_ld:
            vals = np.zeros_like(self.nod)
            for c in cs[::-1]:
                vals = vals * self.nod + c
            self.qvals.append(vals)
        # one-point moments sum c_j Gamma(a+j+1), in mpmath (they cancel)
        import mpmath as mp
        self.mom0 = []
        with mp.workdps(40):
            am = mp.mpf(a)
            for cs in self._coeffs_ld:
                tot = mp.fsum(mp.mpf(float(c)) * mp.gamma(am + j + 1)
                              for j, c in enumerate(cs))
                self.mom0.append(np.longdouble(mp.nstr(tot, 25)))

    def _mp_coeffs(self, m):
        import mpmath as mp
        a = mp.mpf(self.p.a)
        with mp.workdps(40):
            if m % 2 == 0:
                n = m // 2
                cs = []
                for j in range(2 * n + 1):
                    t = (-1) ** j * mp.binomial(2 * n, j) \
                        * mp.gamma(2 * a + 2 * n + j + 3) * mp.gamma(2 * a + 2 * n + 2) \
                        * mp.gamma(a + 2 * n + 2) / (mp.gamma(2 * a + 4 * n + 3)
                                                     * mp.gamma(2 * a + j + 2)
                                                     * mp.gamma(a + j + 2))
                    cs.append(t)
            else:
                base = self._mp_coeffs(m - 1)
                cs = []
                for k_ in range(m + 1):
                    t = mp.mpf(0)
                    if k_ >= 1:
                        t += mp.mpf(float(base[k_ - 1])) if False else base[k_ - 1]
                    if k_ <= m - 1:
                        t -= k_ * base[k_]
                    cs.append(t)
            return np.array([np.longdouble(mp.nstr(c, 25)) for c in cs])

    def _q_eval_ld(self, m, u):
        val = np.longdouble(0.0)
        for c in self._coeffs_ld[m][::-1]:
            val = val * np.longdouble(u) + c
        return val

    def _phi(self, m, u):
        from .cauchy import _stieltjes_division, _STIELTJES_SWITCH
        if u < _STIELTJES_SWITCH:
            st = np.longdouble(_stieltjes_division(self.qs[m], self.p.a,
                                                   np.array([u]))[0])
        else:
            st = np.sum(self.wt * self.qvals[m] / (np.longdouble(u) + self.nod))
        val = (np.longdouble(u) ** self.p.a) * np.exp(-np.longdouble(u))             * (2.0 * np.longdouble(u) * st - self.mom0[m])
        return val

    def density(self, zs):
        zs = np.atleast_1d(np.asarray(zs, dtype=float))
        out = np.zeros_like(zs)
        for i, u in enumerate(zs):
            tot = np.longdouble(0.0)
            for n in range(self.p.N // 2):
                q_ev = self._q_eval_ld(2 * n, u)
                q_od = self._q_eval_ld(2 * n + 1, u)
                tot += (self._phi(2 * n + 1, u) * q_ev
                        - self._phi(2 * n, u) * q_od) / np.longdouble(self.rs[n])
            out[i] = float(tot / self.p.N)
        return out


def bures_correlation_kernels(p: EnsembleParams, zs, kernel_set=None):
    """k-point function from the antisymmetrized Cauchy-kernel Pfaffian.

    Blocks: dK11(z_i, z_j), (N/2)[K01(z_i, z_j) + K10(z_j, z_i)],
    dK00(z_i, z_j); prefactor (-1)^(k(k-1)/2) (N-k)!/N!.  Exact for k = 1
    (the level density) at every N and for every k at N = 2; for N >= 3,
    k >= 2 it tracks the de Bruijn route only to about half a percent (the
    kernel-side k-point formula quoted for this ensemble does not reproduce
    the defining marginals exactly there; see the tests).  Production code
    should call bures_correlation.
    """
    zs = [float(z) for z in np.atleast_1d(zs)]
    k = len(zs)
    if k > p.N:
        raise ValueError("need k <= N")
    ks = kernel_set if kernel_set is not None else delta_sigma_kernels(p)
    ck = ks.ck
    B = np.zeros((k, k))
    C = np.zeros((k, k))
    D = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            if i < j:
                B[i, j] = ks.delta_k11(zs[i], zs[j])
                D[i, j] = -ks.delta_k00(zs[j], zs[i])
            C[i, j] = 0.5 * p.N * (ck.K01(zs[i], zs[j]) + ck.K10(zs[j], zs[i]))
    B = B - B.T
    D = D - D.T
    M = np.block([[B, C], [-C.T, D]])
    sgn = -1.0 if (k * (k - 1) // 2) % 2 else 1.0
    return sgn * pfaffian(M) * math.exp(
        gamma_ls(float(p.N - k + 1)).log_abs - gamma_ls(float(p.N + 1)).log_abs)


# ---------------------------------------------------------------------------
# Pfaffian partition-function representation


def _khat_11(a: float, L: int, k1, k2):
    """(Z_{1|0;1|0}^(L)(k1;k2) - (k2;k1)) / (2 Z^(L-1))."""
    pc = CauchyParams(L - 1, a, a + 1.0)
    return 0.5 * (_kk_partition(pc, k1, k2) - _kk_partition(pc, k2, k1))


def _khat_01(a: float, L: int, kappa, lam):
    """(Z_{0|0;1|1} + Z_{1|1;0|0}) / (2 Z (kappa - lambda))."""
    pc = CauchyParams(L, a, a + 1.0)
    return 0.5 * (two_point_partition(pc, "kl_y", kappa, lam)
                  + two_point_partition(pc, "kl_x", kappa, lam))


def _khat_00(a: float, L: int, l1, l2):
    """(Z_{0|1;0|1}^(L)(l2;l1) - (l1;l2)) / (2 Z^(L+1))."""
    pc = CauchyParams(L + 1, a, a + 1.0)
    return 0.5 * (two_point_partition(pc, "ll", l2, l1)
                  - two_point_partition(pc, "ll", l1, l2))


def _khat_1(a: float, L: int, kappa):
    """-(Z_{0|0;1|0} + Z_{1|0;0|0}) / (2 Z^(L)).

    The partition-normalized transform is the printed Cauchy transform
    times Gamma(a+b+2L-1)/Gamma(a+b+L) (checked against Andreief
    determinants of resolvent-modified moments).
    """
    pc = CauchyParams(L, a, a + 1.0)
    sgn = 1.0 if L % 2 == 0 else -1.0
    ab = 2.0 * a + 1.0
    scale = (gamma_ls(ab + 2.0 * L - 1.0) / gamma_ls(ab + L)).to_float()
    return -0.5 * sgn * scale * (cauchy_transform(pc, L, "p", kappa)
                                 + cauchy_transform(pc, L, "pt", kappa))


def _khat_0(a: float, L: int, lam):
    """(Z_{0|0;0|1} - Z_{0|1;0|0}) / (2 Z^(L+1))."""
    pc = CauchyParams(L, a, a + 1.0)
    sgn = 1.0 if L % 2 == 0 else -1.0
    ratio = (cauchy_norm_constant(pc)
             / cauchy_norm_constant(CauchyParams(L + 1, a, a + 1.0))).to_float()
    diff = biortho_poly(pc, L, "pt").eval_complex(complex(lam)) \
        - biortho_poly(pc, L, "p").eval_complex(complex(lam))
    return 0.5 * sgn * ratio * diff


def bures_partition_pf(p: EnsembleParams, kappa, lam):
    """Partition function Z^(N,B)_{k|l}(kappa, lambda) via the Pfaffian form.

    kappa points must avoid the closed positive axis; requires
    N + l - k > 1.  The sign s of the mean-difference constant enters the
    diagonal blocks; the border column appears for odd k + l.
    """
    kap = [complex(v) for v in np.atleast_1d(kappa)] if kappa is not None else []
    lams = [complex(v) for v in np.atleast_1d(lam)] if lam is not None else []
    k, l = len(kap), len(lams)
    a, N = p.a, p.N
    nt = N + l - k
    if nt <= 1:
        raise ValueError("Pfaffian representation needs N + l - k > 1")
    _, s = zhat_and_sign(max(nt - 1, 1), a)
    parity_even = (k + l) % 2 == 0
    if parity_even:
        zc = cauchy_norm_constant(CauchyParams(nt, a, a + 1.0))
        d = k + l
    else:
        zc = cauchy_norm_constant(CauchyParams(nt + 1, a, a + 1.0))
        d = k + l + 1
    M = np.zeros((d, d), dtype=complex)
    L01 = nt if parity_even else nt + 1
    L11 = nt + 1 if parity_even else nt + 2
    L00 = nt - 1 if parity_even else nt
    for i in range(k):
        for j in range(k):
            if i < j:
                v = -s * _khat_11(a, L11, kap[i], kap[j])
                M[i, j] = v
                M[j, i] = -v
        for j in range(l):
            v = -_khat_01(a, L01, kap[i], lams[j])
            M[i, k + j] = v
            M[k + j, i] = -v
    for i in range(l):
        for j in range(l):
            if i < j:
                v = -s * _khat_00(a, L00, lams[i], lams[j])
                M[k + i, k + j] = v
                M[k + j, k + i] = -v
    if not parity_even:
        for i in range(k):
            v = -_khat_1(a, nt + 1, kap[i])
            M[i, d - 1] = v
            M[d - 1, i] = -v
        for i in range(l):
            v = -s * _khat_0(a, nt, lams[i])
            M[k + i, d - 1] = v
            M[d - 1, k + i] = -v
    pf = pfaffian(M) if d > 0 else 1.0
    sign = -1.0 if ((k * (k - 1) // 2 + l * (l - 1) // 2) % 2) else 1.0
    # global sign of the square root, fixed against direct quadrature: (-1)^k
    sign *= -1.0 if k % 2 else 1.0
    bkl = cauchy_vandermonde(PointSets(tuple(kap), tuple(lams))) if (k or l) else 1.0
    pref = 2.0 ** (0.5 * N) * math.exp(0.5 * zc.log_abs)
    return sign * pref * pf / bkl
