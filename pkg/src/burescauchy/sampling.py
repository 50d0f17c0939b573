"""Metropolis log-gas samplers for both eigenvalue ensembles.

Single-coordinate lognormal proposals (multiplicative steps keep the
positive half-line invariant without reflection); the Hastings factor of
the lognormal proposal is z'/z.  Chains are vectorized: one numpy state per
chain, updated coordinate by coordinate.  Each chain owns a Philox stream
spawned from (seed, chain index), so runs are bit-reproducible; the step
scale adapts toward the target acceptance window only during burn-in and is
frozen afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["MCConfig", "SampleBatch", "sample_bures", "sample_cauchy"]

_ACCEPT_LOW = 0.2
_ACCEPT_HIGH = 0.6
_ADAPT_INTERVAL = 50


@dataclass(frozen=True)
class MCConfig:
    """Chain layout and RNG contract for the Metropolis runs."""

    chains: int = 4
    sweeps: int = 10000
    burn_in: int = 1000
    seed: int = 1234
    step_scale: float = 0.8

    def __post_init__(self):
        if self.chains < 1 or self.sweeps < 1 or self.burn_in < 0:
            raise ValueError("chains, sweeps positive; burn_in non-negative")
        if self.burn_in >= self.sweeps:
            raise ValueError("burn_in must be smaller than sweeps")
        if not self.step_scale > 0:
            raise ValueError("step_scale must be positive")


@dataclass
class SampleBatch:
    """Recorded eigenvalue configurations with chain metadata.

    configurations has shape (chains, kept_sweeps, N) for the single-species
    ensemble; the coupled ensemble stores a pair (x, y) of such arrays.
    """

    configurations: object
    seed: int
    chains: int
    acceptance: np.ndarray
    step_scale: np.ndarray
    ensemble: str

    def flat(self):
        if isinstance(self.configurations, tuple):
            return tuple(c.reshape(-1, c.shape[-1]) for c in self.configurations)
        return self.configurations.reshape(-1, self.configurations.shape[-1])


def _rngs(cfg: MCConfig):
    return [np.random.Generator(np.random.Philox(
        np.random.SeedSequence(entropy=cfg.seed, spawn_key=(c,))))
        for c in range(cfg.chains)]


def _bures_logpdf_delta(z, j, znew, a):
    """Log-density change when coordinate j moves to znew; z has shape (C, N)."""
    zj = z[:, j]
    delta = a * (np.log(znew) - np.log(zj)) - (znew - zj)
    for i in range(z.shape[1]):
        if i == j:
            continue
        zi = z[:, i]
        delta += 2.0 * (np.log(np.abs(znew - zi)) - np.log(np.abs(zj - zi)))
        delta -= np.log(znew + zi) - np.log(zj + zi)
    return delta


def sample_bures(N, a, cfg: MCConfig) -> SampleBatch:
    """Metropolis chains for the single-species log-gas with exponent a."""
    rngs = _rngs(cfg)
    C = cfg.chains
    state = np.empty((C, N))
    for c, rng in enumerate(rngs):
        state[c] = rng.gamma(a + 1.0, 1.0, size=N) + 1e-8
    sigma = np.full(C, cfg.step_scale)
    kept = []
    acc_window = np.zeros(C)
    prop_window = np.zeros(C)
    acc_total = np.zeros(C)
    prop_total = np.zeros(C)
    for sweep in range(cfg.sweeps):
        burning = sweep < cfg.burn_in
        for j in range(N):
            xi = np.array([rng.standard_normal() for rng in rngs])
            u = np.array([rng.random() for rng in rngs])
            znew = state[:, j] * np.exp(sigma * xi)
            logr = _bures_logpdf_delta(state, j, znew, a) \
                + (np.log(znew) - np.log(state[:, j]))
            accept = np.log(u) < logr
            state[accept, j] = znew[accept]
            acc_window += accept
            prop_window += 1
            if not burning:
                acc_total += accept
                prop_total += 1
        if burning and (sweep + 1) % _ADAPT_INTERVAL == 0:
            rate = acc_window / np.maximum(prop_window, 1)
            sigma[rate < _ACCEPT_LOW] *= 0.8
            sigma[rate > _ACCEPT_HIGH] *= 1.25
            acc_window[:] = 0
            prop_window[:] = 0
        if not burning:
            kept.append(state.copy())
    configs = np.stack(kept, axis=1)
    return SampleBatch(configurations=configs, seed=cfg.seed, chains=C,
                       acceptance=acc_total / np.maximum(prop_total, 1),
                       step_scale=sigma.copy(), ensemble="bures")


def _cauchy_logpdf_delta_x(x, y, j, xnew, a):
    xj = x[:, j]
    delta = a * (np.log(xnew) - np.log(xj)) - (xnew - xj)
    for i in range(x.shape[1]):
        if i != j:
            delta += 2.0 * (np.log(np.abs(xnew - x[:, i])) - np.log(np.abs(xj - x[:, i])))
        delta -= np.log(xnew + y[:, i]) - np.log(xj + y[:, i])
    return delta


def sample_cauchy(N, a, b, cfg: MCConfig) -> SampleBatch:
    """Metropolis chains for the coupled two-species ensemble."""
    rngs = _rngs(cfg)
    C = cfg.chains
    x = np.empty((C, N))
    y = np.empty((C, N))
    for c, rng in enumerate(rngs):
        x[c] = rng.gamma(a + 1.0, 1.0, size=N) + 1e-8
        y[c] = rng.gamma(b + 1.0, 1.0, size=N) + 1e-8
    sigma = np.full(C, cfg.step_scale)
    kept_x, kept_y = [], []
    acc_window = np.zeros(C)
    prop_window = np.zeros(C)
    acc_total = np.zeros(C)
    prop_total = np.zeros(C)
    for sweep in range(cfg.sweeps):
        burning = sweep < cfg.burn_in
        for j in range(N):
            xi = np.array([rng.standard_normal() for rng in rngs])
            u = np.array([rng.random() for rng in rngs])
            xnew = x[:, j] * np.exp(sigma * xi)
            logr = _cauchy_logpdf_delta_x(x, y, j, xnew, a) \
                + (np.log(xnew) - np.log(x[:, j]))
            accept = np.log(u) < logr
            x[accept, j] = xnew[accept]
            acc_window += accept
            prop_window += 1
            if not burning:
                acc_total += accept
                prop_total += 1
            xi = np.array([rng.standard_normal() for rng in rngs])
            u = np.array([rng.random() for rng in rngs])
            ynew = y[:, j] * np.exp(sigma * xi)
            logr = _cauchy_logpdf_delta_x(y, x, j, ynew, b) \
                + (np.log(ynew) - np.log(y[:, j]))
            accept = np.log(u) < logr
            y[accept, j] = ynew[accept]
            acc_window += accept
            prop_window += 1
            if not burning:
                acc_total += accept
                prop_total += 1
        if burning and (sweep + 1) % _ADAPT_INTERVAL == 0:
            rate = acc_window / np.maximum(prop_window, 1)
            sigma[rate < _ACCEPT_LOW] *= 0.8
            sigma[rate > _ACCEPT_HIGH] *= 1.25
            acc_window[:] = 0
            prop_window[:] = 0
        if not burning:
            kept_x.append(x.copy())
            kept_y.append(y.copy())
    return SampleBatch(configurations=(np.stack(kept_x, axis=1), np.stack(kept_y, axis=1)),
                       seed=cfg.seed, chains=C,
                       acceptance=acc_total / np.maximum(prop_total, 1),
                       step_scale=sigma.copy(), ensemble="cauchy")
