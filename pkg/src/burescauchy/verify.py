"""Named verification suites behind the CLI verify subcommand.

Each suite returns a list of (name, residual, tolerance, passed) rows; the
acceptance test module runs the same functions, so CI and pytest gate on
identical checks.
"""

from __future__ import annotations

import math
import time

import numpy as np

from .bures import (
    EnsembleParams, bures_correlation, bures_correlation_kernels,
    delta_sigma_kernels, norm_constant_bures, skew_orthogonality_check,
    zhat_and_sign,
)
from .cauchy import (
    CauchyParams, biortho_norm, biortho_poly, cauchy_transform,
    cauchy_transform_quad, kernels as cauchy_kernels, moment_det,
    norm_constant, sum_identity_check,
)
from .hard_edge import HardEdgeParams, convergence_study, limit_kernels
from .oracle import (
    brute_force_correlation, density_integral, empirical_zhat_sign,
    moment_matrix_bures_check, prop1_check, prop2_relations_check,
    batch_means_error,
)
from .quadrature import integrate_coupled
from .sampling import MCConfig, sample_bures, sample_cauchy
from .special import MeijerGSpec, meijer_g, meijer_g_series

__all__ = ["SUITES", "run_suite", "run_all"]


def _row(name, residual, tol):
    ok = bool(residual <= tol)
    return {"name": name, "residual": float(residual), "tolerance": tol, "passed": ok}


def suite_normalization():
    rows = []
    for N in (1, 2, 4, 6, 8):
        for a, b in ((0.0, 1.0), (0.5, 1.5), (0.3, 1.7)):
            p = CauchyParams(N, a, b)
            z = norm_constant(p)
            d = moment_det(p)
            res = abs(z.log_abs - d.log_abs) + abs(z.sign - d.sign)
            rows.append(_row(f"cauchy det=prod N={N} a={a} b={b}", res, 1e-10))
    for N in (1, 2, 3):
        p = EnsembleParams(N, 0.4)
        zq = abs(__import__("burescauchy.oracle", fromlist=["bures_partition_quad"])
                 .bures_partition_quad(N, 0.4))
        zb = norm_constant_bures(p).to_float()
        rows.append(_row(f"bures quadrature N={N}", abs(zq - zb) / zb, 1e-6))
    for N in range(1, 9):
        rows.append(_row(f"bures de Bruijn Pf N={N}",
                         moment_matrix_bures_check(N, 0.4), 1e-10))
    return rows


def suite_prop1():
    rows = []
    for N in range(1, 7):
        for a in (0.0, 0.5, 1.3):
            rows.append(_row(f"prop1 closed N={N} a={a}", prop1_check(N, a), 1e-10))
    for kappa, lam in ((-1.0 + 0.5j, 0.7), (-2.0 - 0.8j, 1.6)):
        rows.append(_row(f"prop1 quad N=2 kappa={kappa}",
                         prop1_check(2, 0.5, k=1, kappa=kappa, lam=lam), 1e-5))
    return rows


def suite_orthogonality():
    rows = []
    p = CauchyParams(5, 0.3, 1.7)
    polys = [biortho_poly(p, n, "p") for n in range(5)]
    polys_t = [biortho_poly(p, n, "pt") for n in range(5)]
    scale = biortho_norm(p, 0).to_float()
    worst_off = 0.0
    worst_diag = 0.0
    for n in range(5):
        for mth in range(5):
            val = integrate_coupled(
                lambda x, y, pn=polys[n], pm=polys_t[mth]: pn.eval(x) * pm.eval(y),
                p.a, p.b)
            if n == mth:
                h = biortho_norm(p, n).to_float()
                worst_diag = max(worst_diag, abs(val - h) / h)
            else:
                worst_off = max(worst_off, abs(val) / scale)
    rows.append(_row("biortho off-diagonal", worst_off, 1e-8))
    rows.append(_row("biortho diagonal vs Z-ratio", worst_diag, 1e-8))
    for a in (0.0, 0.7):
        gram, expected = skew_orthogonality_check(a, 7)
        dev = np.max(np.abs(gram - expected)) / np.max(np.abs(expected))
        rows.append(_row(f"skew Gram a={a} orders<=7", dev, 1e-8))
    return rows


def suite_density():
    rows = []
    for N in (2, 4, 8):
        p = EnsembleParams(N, 0.5)
        ks = delta_sigma_kernels(p)
        zs = np.linspace(0.05, 6.0 * N, 100)
        lhs = np.array([bures_correlation(p, [z]) for z in zs])
        rhs = ks.density(zs)
        rel = np.max(np.abs(lhs - rhs) / np.abs(rhs))
        rows.append(_row(f"R1 = (R10+R01)/2 N={N}", rel, 1e-9))
        rows.append(_row(f"int R1 = 1 N={N}",
                         abs(density_integral(p) - 1.0), 1e-7))
    return rows


def suite_correlation():
    rows = []
    rng = np.random.default_rng(202)
    for (N, k) in ((2, 2), (3, 2)):
        p = EnsembleParams(N, 0.4)
        worst = 0.0
        for _ in range(10):
            pts = np.sort(rng.uniform(0.2, 6.0, size=k))
            while np.min(np.diff(pts)) < 0.05:
                pts = np.sort(rng.uniform(0.2, 6.0, size=k))
            got = bures_correlation(p, pts)
            want = brute_force_correlation("bures", p, pts)
            worst = max(worst, abs(got - want) / abs(want))
        rows.append(_row(f"bures pf vs brute (N,k)=({N},{k})", worst, 1e-5))
    from .cauchy import correlation
    pc = CauchyParams(2, 0.4, 1.4)
    worst = 0.0
    for _ in range(10):
        x, y = rng.uniform(0.3, 5.0, size=2)
        got = correlation(pc, [x], [y])
        want = brute_force_correlation("cauchy", pc, [x], [y])
        worst = max(worst, abs(got - want) / abs(want))
    rows.append(_row("cauchy det vs brute N=2 (1,1)", worst, 1e-5))
    p2 = EnsembleParams(2, 0.4)
    worst = 0.0
    for _ in range(5):
        pts = np.sort(rng.uniform(0.3, 5.0, size=2))
        got = bures_correlation_kernels(p2, pts)
        want = bures_correlation(p2, pts)
        worst = max(worst, abs(got - want) / abs(want))
    rows.append(_row("kernel-pfaffian route at N=2", worst, 1e-8))
    return rows


def suite_rank_one():
    rows = []
    p = CauchyParams(4, 0.5, 1.5)
    ck = cauchy_kernels(p)
    zs = np.array([0.4, 0.9, 1.7, 2.8, 4.5])
    K00 = np.array([[ck.K00(u, v) for v in zs] for u in zs])
    K11 = np.array([[ck.K11(u, v) for v in zs] for u in zs])
    K01 = np.array([[ck.K01(u, v) for v in zs] for u in zs])
    K10 = np.array([[ck.K10(u, v) for v in zs] for u in zs])
    for name, M in (("K00 symmetrized", K00 + K00.T),
                    ("K11 symmetrized", K11 + K11.T),
                    ("K01 - K10^T", K01 - K10.T)):
        sv = np.linalg.svd(M, compute_uv=False)
        rows.append(_row(f"rank-one {name}", sv[1] / sv[0], 1e-8))
    return rows


def suite_monte_carlo(fast=False):
    rows = []
    sweeps = 20000 if fast else 200000
    cfg = MCConfig(chains=8, sweeps=sweeps, burn_in=max(2000, sweeps // 20), seed=20240817)
    batch = sample_bures(4, 0.0, cfg)
    ok_acc = np.all((batch.acceptance >= 0.2) & (batch.acceptance <= 0.6))
    rows.append(_row("acceptance in [0.2, 0.6]", 0.0 if ok_acc else 1.0, 0.5))
    vals = batch.flat().ravel()
    p = EnsembleParams(4, 0.0)
    ks = delta_sigma_kernels(p)
    edges = np.linspace(0.0, 15.0, 51)
    hist, _ = np.histogram(vals, bins=edges, density=True)
    mids = 0.5 * (edges[1:] + edges[:-1])
    dens = ks.density(mids)
    inside = float(np.mean(vals <= 15.0))
    sup = np.max(np.abs(hist * inside - dens))
    rows.append(_row("histogram sup-deviation (50 bins)", sup, 0.01))
    cfgc = MCConfig(chains=4, sweeps=sweeps // 4, burn_in=max(1000, sweeps // 40),
                    seed=99)
    cb = sample_cauchy(1, 0.0, 1.0, cfgc)
    sign, est = empirical_zhat_sign(cb)
    rows.append(_row("empirical zhat sign = -1 at L=1",
                     0.0 if sign == -1 else 1.0, 0.5))
    err = batch_means_error(np.sum(cb.flat()[0] - cb.flat()[1], axis=1))
    rows.append(_row("zhat estimate within 5 sigma of -2/3",
                     abs(est + 2.0 / 3.0) / (5.0 * err + 1e-12), 1.0))
    return rows


def suite_hard_edge():
    rows = []
    study = convergence_study(0.5, np.linspace(0.1, 5.0, 12), [10, 20, 40])
    devs = [r["density_sup_dev"] for r in study]
    rows.append(_row("deviation strictly decreasing",
                     0.0 if devs[0] > devs[1] > devs[2] else 1.0, 0.5))
    rows.append(_row("deviation(40) within measured 1/N trend (<= 0.08)",
                     devs[2], 0.08))
    rate = devs[1] / devs[2]
    rows.append(_row("1/N rate (dev20/dev40 in [1.7, 2.3])",
                     abs(rate - 2.0), 0.3))
    for key in ("ratio_dk11", "ratio_sk01", "ratio_dk00"):
        rows.append(_row(f"kernel scaling {key} at N=40 -> 1",
                         abs(study[2][key] - 1.0), 0.25))
    lk = limit_kernels(HardEdgeParams(0.5))
    rows.append(_row("limit dK11 diagonal", abs(lk.delta_k11(1.3, 1.3)), 1e-15))
    rows.append(_row("limit dK00 diagonal", abs(lk.delta_k00(2.0, 2.0)), 1e-15))
    return rows


def suite_meijer():
    rows = []
    N, a, b = 3, 0.3, 1.7
    fams = {
        "G11_23": MeijerGSpec(1, 1, 2, 3, (-N - a - b, float(N)), (0.0, -a, -a - b)),
        "G21_23": MeijerGSpec(2, 1, 2, 3, (-N - a - b, float(N)), (0.0, -b, -a - b)),
        "G31_23": MeijerGSpec(3, 1, 2, 3, (1.0 - N, N + a + b), (0.0, b, a + b)),
        "G11_11": MeijerGSpec(1, 1, 1, 1, (0.0,), (0.0,)),
        "G20_03": MeijerGSpec(2, 0, 0, 3, (), (0.5, 2.0, 0.0)),
        "G10_03": MeijerGSpec(1, 0, 0, 3, (), (0.0, -0.5, -2.0)),
        "G10_01": MeijerGSpec(1, 0, 0, 1, (), (0.0,)),
    }
    from .special import _cached_series
    worst = 0.0
    worst_conditioned = 0.0
    for name, spec in fams.items():
        if spec.has_collision():
            continue  # pure residue series undefined at double poles
        for z in (0.1, 1.0, 10.0):
            both = spec.c_star > 0 and (spec.p < spec.q or z < 1.0) \
                and not spec.fully_terminating()
            if not both:
                continue
            c = meijer_g(spec, z)
            s = meijer_g_series(spec, z)
            rel = abs(c - s) / max(abs(c), 1e-280)
            z_cap = 64.0 if spec.p < spec.q else 0.98
            cond = _cached_series(spec, z_cap).condition(z)
            if cond <= 1e6:
                worst = max(worst, rel)
            else:
                # intrinsic cancellation: error bounded by cond * eps
                worst_conditioned = max(worst_conditioned, rel / (cond * 2e-14))
    rows.append(_row("contour vs series (well-conditioned points)", worst, 1e-9))
    rows.append(_row("contour vs series within cancellation bound", worst_conditioned, 1.0))
    # eps-shifted series at logarithmic parameters against the contour
    log_spec = MeijerGSpec(2, 1, 2, 3, (-N - a - b, float(N)), (0.0, -1.0, -2.0))
    worst = max(abs(meijer_g(log_spec, z) - meijer_g_series(log_spec, z))
                / abs(meijer_g(log_spec, z)) for z in (0.1, 1.0))
    rows.append(_row("eps-shifted series vs contour (logarithmic case)", worst, 1e-6))
    spec = fams["G11_11"]
    worst = 0.0
    for z in np.logspace(-3, 3, 20):
        worst = max(worst, abs(meijer_g(spec, float(z)) - 1.0 / (1.0 + z)) * (1.0 + z))
    rows.append(_row("G^{1,1}_{1,1} = 1/(1+z) on 20 points", worst, 1e-10))
    p = CauchyParams(2, 0.3, 1.7)
    worst = 0.0
    for n, kind, w in ((1, "pt", -0.6), (2, "p", -3.0), (2, "pt", -0.5 + 0.8j)):
        m = cauchy_transform(p, n, kind, w)
        q = cauchy_transform_quad(p, n, kind, w)
        worst = max(worst, abs(m - q) / abs(q))
    rows.append(_row("cauchy transform meijer vs 2d quadrature", worst, 1e-7))
    rows.append(_row("sum identity residual",
                     max(sum_identity_check(3, 0.5, 1.5, 0.0, 0.0),
                         sum_identity_check(5, 0.2, 0.9, 0.3, -0.2)), 1e-10))
    return rows


def suite_appendix_b():
    rows = []
    for N in (2, 4, 6, 3):
        r = prop2_relations_check(N, 0.3, (-2.0 + 1.0j, -3.0 - 0.8j), (0.6, 1.8))
        worst = max(r["lambda_lambda"], r["kappa_lambda"], r["kappa_kappa"])
        rows.append(_row(f"rank-one splitting N={N}", worst, 1e-8))
        rows.append(_row(f"factor directions N={N}",
                         max(r["w_direction_match"], r["v_direction_match"]), 1e-8))
    return rows


SUITES = {
    "normalization": suite_normalization,
    "prop1": suite_prop1,
    "orthogonality": suite_orthogonality,
    "density": suite_density,
    "correlation": suite_correlation,
    "rank_one": suite_rank_one,
    "monte_carlo": suite_monte_carlo,
    "hard_edge": suite_hard_edge,
    "meijer": suite_meijer,
    "appendix_b": suite_appendix_b,
}


def run_suite(name, **kwargs):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    t0 = time.time()
    rows = SUITES[name](**kwargs)
    dt = time.time() - t0
    return {"suite": name, "seconds": dt, "rows": rows,
            "passed": all(r["passed"] for r in rows)}


def run_all(fast_mc=False):
    out = []
    for name in SUITES:
        kwargs = {"fast": fast_mc} if name == "monte_carlo" else {}
        out.append(run_suite(name, **kwargs))
    return out
