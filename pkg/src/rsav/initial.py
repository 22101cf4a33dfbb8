"""
Initial conditions and the reproducible random-number stream behind them.

Random fields use SplitMix64: output ``n`` (n = 1, 2, ...) of a generator
seeded with ``s`` is ``mix(s + n * 0x9E3779B97F4A7C15 mod 2^64)`` where

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

Each output maps to a double in [0, 1) as ``(z >> 11) * 2^-53`` and then to
[-1, 1) as ``2u - 1``. Node ``(i, j)`` takes output ``n = i*Ny + j + 1``.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .spectral import Grid

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)


def splitmix64(seed: int, n: int) -> np.ndarray:
    """First ``n`` SplitMix64 outputs for ``seed`` as uint64."""
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    z = np.arange(1, n + 1, dtype=np.uint64) * GOLDEN + np.uint64(seed)
    z = (z ^ (z >> np.uint64(30))) * MIX1
    z = (z ^ (z >> np.uint64(27))) * MIX2
    return z ^ (z >> np.uint64(31))


def uniform_pm1(seed: int, shape: tuple[int, int]) -> np.ndarray:
    """Deterministic i.i.d. uniform samples on [-1, 1), row-major over ``shape``."""
    n = shape[0] * shape[1]
    u = (splitmix64(seed, n) >> np.uint64(11)).astype(np.float64) * 2.0**-53
    return (2.0 * u - 1.0).reshape(shape)


def cosine(g: Grid, amp: float = 0.01) -> np.ndarray:
    X, Y = g.mesh()
    return amp * np.cos(2 * np.pi * X / g.Lx) * np.cos(2 * np.pi * Y / g.Ly)


def star(g: Grid, epsilon: float) -> np.ndarray:
    """Six-armed star, +1 inside and -1 outside, interface width ~ epsilon."""
    X, Y = g.mesh()
    dx, dy = X - 0.5 * g.Lx, Y - 0.5 * g.Ly
    theta = np.arctan2(dy, dx)
    r = np.hypot(dx, dy)
    return np.tanh((1.5 + 1.2 * np.cos(6 * theta) - 2 * np.pi * r) / (np.sqrt(2) * epsilon))


def random_field(g: Grid, mean: float, amp: float, seed: int) -> np.ndarray:
    """``mean + amp * u`` with ``u`` de-meaned noise bounded by 1 in magnitude.

    The noise is shifted to zero mean and, if the shift pushed any sample
    outside [-1, 1], rescaled back inside, so the field mean is ``mean``
    and ``|phi - mean| <= amp``.
    """
    u = uniform_pm1(seed, g.shape)
    u = u - u.mean()
    peak = np.max(np.abs(u))
    if peak > 1.0:
        u = u / peak
    return mean + amp * u


def make_initial(cfg, g: Grid, epsilon: float | None = None) -> np.ndarray:
    """Initial field for a :class:`~rsav.config.RunConfig`."""
    if cfg.ic == "cosine":
        return cosine(g, 0.01 if cfg.amp is None else cfg.amp)
    if cfg.ic == "star":
        eps = epsilon if epsilon else 0.01
        return star(g, eps)
    if cfg.ic == "random":
        if cfg.seed is None:
            raise ConfigError("ic = random requires a seed", key="seed")
        amp = 0.05 if cfg.amp is None else cfg.amp
        return random_field(g, cfg.phi0_hat, amp, cfg.seed)
    if cfg.ic == "zero":
        return np.zeros(g.shape)
    raise ConfigError(f"unknown initial condition {cfg.ic!r}", key="ic")
