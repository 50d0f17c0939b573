"""Structured linear algebra: Pfaffians and Cauchy-Vandermonde determinants.

The Pfaffian is computed by Parlett-Reid elimination with full pivoting in
the working column, tracking the sign exactly through the permutations; a
symmetric power-of-two equilibration keeps the log-space magnitude safe for
ill-scaled kernel blocks.  Matrix dimensions here are small (2k with
k <= 10), so the O(n^3) elimination is more than adequate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .logspace import LogSigned, ZERO

__all__ = [
    "AsymmetryError",
    "PointSets",
    "pfaffian",
    "pfaffian_ls",
    "cauchy_vandermonde",
    "schur_pfaffian_check",
]


class AsymmetryError(ValueError):
    """Input matrix is not antisymmetric within tolerance."""


def _check_antisymmetric(A, tol=1e-12):
    norm = np.max(np.abs(A)) or 1.0
    dev = np.max(np.abs(A + A.T))
    if dev > tol * norm:
        raise AsymmetryError(f"matrix deviates from antisymmetry by {dev / norm:.2e}")


def pfaffian_ls(A, tol=1e-12):
    """Pfaffian of a real or complex antisymmetric matrix.

    Returns (LogSigned, phase) where the value is sign*exp(log_abs)*exp(i*phase);
    for real input the phase is 0 or pi folded into the sign.  Odd dimension
    gives zero by convention.
    """
    A = np.array(A, dtype=complex if np.iscomplexobj(A) else float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("square matrix required")
    if n == 0:
        return LogSigned(1, 0.0)
    _check_antisymmetric(A, tol)
    A = 0.5 * (A - A.T)
    if n % 2 == 1:
        return ZERO

    # symmetric equilibration by powers of two: Pf(DAD) = det(D) Pf(A)
    scale_log = 0.0
    rows = np.max(np.abs(A), axis=1)
    for i in range(n):
        if rows[i] > 0:
            e = math.floor(math.log2(rows[i]))
            f = 2.0 ** (-e)
            A[i, :] *= f
            A[:, i] *= f
            scale_log += e * math.log(2.0)

    sign = 1
    log_abs = 0.0
    phase = 0.0
    for k in range(0, n - 1, 2):
        col = np.abs(A[k + 1:, k])
        kp = k + 1 + int(np.argmax(col))
        if col[kp - k - 1] == 0.0:
            return ZERO
        if kp != k + 1:
            A[[k + 1, kp], :] = A[[kp, k + 1], :]
            A[:, [k + 1, kp]] = A[:, [kp, k + 1]]
            sign = -sign
        pivot = A[k, k + 1]
        log_abs += math.log(abs(pivot))
        if np.iscomplexobj(A):
            phase += cmath.phase(pivot)
        elif pivot < 0:
            sign = -sign
        if k + 2 < n:
            tau = A[k, k + 2:] / pivot
            A[k + 2:, k + 2:] += np.outer(tau, A[k + 2:, k + 1]) \
                - np.outer(A[k + 2:, k + 1], tau)
    return LogSigned(sign, log_abs + scale_log), phase


def pfaffian(A, tol=1e-12):
    """Pfaffian as a float (or complex for complex input)."""
    out = pfaffian_ls(A, tol)
    if isinstance(out, LogSigned):
        return out.to_float()
    ls, phase = out
    if phase == 0.0:
        return ls.to_float()
    return ls.sign * cmath.exp(ls.log_abs + 1j * phase)


@dataclass(frozen=True)
class PointSets:
    """Resolvent points kappa (off the closed positive axis) and charpoly points lambda."""

    kappa: tuple
    lambda_: tuple

    def __post_init__(self):
        object.__setattr__(self, "kappa", tuple(complex(k) for k in self.kappa))
        object.__setattr__(self, "lambda_", tuple(complex(l) for l in self.lambda_))
        for k in self.kappa:
            if k.imag == 0.0 and k.real >= 0.0:
                raise ValueError("kappa points must avoid the closed positive real axis")
        for name, pts in (("kappa", self.kappa), ("lambda", self.lambda_)):
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    if abs(pts[i] - pts[j]) < 1e-12:
                        raise ValueError(f"coincident {name} points")


def _logdet_complex(M):
    sign, logdet = np.linalg.slogdet(M)
    return sign, logdet


def cauchy_vandermonde(ps: PointSets, check_tol=1e-9):
    """Mixed Cauchy-Vandermonde determinant B_{k|l}(kappa; lambda).

    Returned from the closed product Delta(kappa) Delta(lambda) / prod
    (kappa_i - lambda_j); the bordered determinant form is evaluated
    alongside and the two must agree to check_tol.
    """
    kap, lam = ps.kappa, ps.lambda_
    k, l = len(kap), len(lam)

    log_val = 0.0 + 0.0j
    for i in range(k):
        for j in range(i + 1, k):
            log_val += np.log(complex(kap[j] - kap[i]))
    for i in range(l):
        for j in range(i + 1, l):
            log_val += np.log(complex(lam[j] - lam[i]))
    for ki in kap:
        for lj in lam:
            log_val -= np.log(complex(ki - lj))
    value = cmath.exp(log_val)

    # determinant form, both orientations of the block
    if k >= l:
        M = np.zeros((k, k), dtype=complex)
        for i in range(k):
            for j in range(l):
                M[i, j] = 1.0 / (kap[i] - lam[j])
            for j in range(k - l):
                M[i, l + j] = kap[i] ** j
        det = np.linalg.det(M) * (-1.0) ** (l * (l - 1) // 2)
    else:
        M = np.zeros((l, l), dtype=complex)
        for i in range(l):
            for j in range(l - k):
                M[i, j] = lam[i] ** j
            for j in range(k):
                M[i, l - k + j] = 1.0 / (kap[j] - lam[i])
        det = np.linalg.det(M) * (-1.0) ** (k * (k - 1) // 2)

    if abs(det - value) > check_tol * max(abs(value), abs(det), 1e-300):
        raise ArithmeticError(
            f"product and determinant forms disagree: {value!r} vs {det!r}")
    return value


def schur_pfaffian_check(z):
    """Ratio of prod (z_j - z_i)/(z_j + z_i) to the Pfaffian of its kernel matrix.

    For odd length the matrix is bordered by a row/column of +-1.  The ratio
    has modulus one; its sign depends only on N and is reported rather than
    asserted (the printed identity holds up to a dimension-dependent sign).
    """
    z = [float(v) for v in z]
    n = len(z)
    if n > 8:
        raise ValueError("check supports up to 8 points")
    lhs = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            lhs *= (z[j] - z[i]) / (z[j] + z[i])
    W = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                W[i, j] = (z[i] - z[j]) / (z[i] + z[j])
    if n % 2 == 0:
        M = W
    else:
        M = np.zeros((n + 1, n + 1))
        M[0, 1:] = -1.0
        M[1:, 0] = 1.0
        M[1:, 1:] = W
    pf = pfaffian(M)
    ratio = lhs / pf if pf != 0.0 else math.nan
    return {"lhs": lhs, "pfaffian": pf, "ratio": ratio,
            "modulus_dev": abs(abs(ratio) - 1.0) if pf != 0.0 else math.inf}
