"""
Relaxation of the auxiliary variables toward their definitions.

After a SAV step gives ``(phi^{n+1}, q~)``, the accepted value is

    q_i^{n+1} = xi q~_i + (1 - xi) Q_i(phi^{n+1})

with ``xi`` the smallest value in [0, 1] for which the auxiliary part of
the scheme's discrete energy grows by at most the budget
``B = dt * eta * (G mu, mu)``. Substituting the blend turns that
constraint into ``a xi^2 + b xi + c <= 0``; ``xi = 1`` always satisfies it
(``a + b + c = -B``), so the answer is the smaller root clipped at 0.

Coefficient and root helpers are vectorized over leading axes so large
batches of candidate tuples can be checked at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvariantError
from .integrators import BDF2, CN, SavState, StepResult, advance
from .models import ModelSpec, Q_all
from .spectral import Grid

A_TINY = 1e-30
DISC_CLAMP = 1e-14


@dataclass(frozen=True)
class RelaxationConfig:
    eta: float = 0.95

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")


@dataclass(frozen=True)
class RelaxOutcome:
    xi0: float
    q_new: tuple[float, ...]
    constraint_residual: float
    Q: tuple[float, ...] = ()
    budget: float = 0.0


def budget(diss: float, dt: float, cfg: RelaxationConfig) -> float:
    """Energy the relaxation may spend: ``dt * eta * max(diss, 0)``."""
    return dt * cfg.eta * max(float(diss), 0.0)


def cn_coefficients(q_tilde, Q, B):
    """Quadratic ``(a, b, c)`` of the CN constraint; last axis indexes variables."""
    qt = np.asarray(q_tilde, dtype=float)
    Q = np.asarray(Q, dtype=float)
    d = qt - Q
    a = np.sum(d * d, axis=-1)
    b = np.sum(2.0 * d * Q, axis=-1)
    c = np.sum(Q * Q, axis=-1) - np.sum(qt * qt, axis=-1) - B
    return a, b, c


def bdf2_coefficients(q_tilde, Q, q_n, B):
    """Quadratic ``(a, b, c)`` of the BDF2 constraint."""
    qt = np.asarray(q_tilde, dtype=float)
    Q = np.asarray(Q, dtype=float)
    qn = np.asarray(q_n, dtype=float)
    d = qt - Q
    a = 5.0 * np.sum(d * d, axis=-1)
    b = np.sum(2.0 * d * (5.0 * Q - 2.0 * qn), axis=-1)
    c = (
        np.sum(Q * Q + (2.0 * Q - qn) ** 2 - qt * qt - (2.0 * qt - qn) ** 2, axis=-1)
        - B
    )
    return a, b, c


def smallest_feasible_xi(a, b, c):
    """Smallest ``xi`` in [0, 1] with ``a xi^2 + b xi + c <= 0``.

    Assumes ``a >= 0`` and ``a + b + c <= 0``. Uses the cancellation-free
    form of the smaller root. ``a <= 1e-30`` returns 0.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    live = a > A_TINY
    disc = b * b - 4.0 * a * c
    scale = np.maximum(b * b, np.abs(4.0 * a * c))
    bad = live & (disc < -DISC_CLAMP * scale)
    if np.any(bad):
        raise InvariantError(
            f"negative discriminant {np.min(disc[bad]):.3e} although a + b + c <= 0"
        )
    sq = np.sqrt(np.maximum(disc, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        root = np.where(
            b >= 0.0,
            (-b - sq) / np.where(live, 2.0 * a, 1.0),
            2.0 * c / np.where(-b + sq > 0, -b + sq, 1.0),
        )
    xi = np.where(live, np.clip(root, 0.0, 1.0), 0.0)
    return xi


def blend(xi: float, q_tilde: Sequence[float], Q: Sequence[float]) -> tuple[float, ...]:
    """``xi q~ + (1 - xi) Q`` with exact endpoints."""
    if xi == 1.0:
        return tuple(float(v) for v in q_tilde)
    if xi == 0.0:
        return tuple(float(v) for v in Q)
    return tuple(float(Qi + xi * (qi - Qi)) for qi, Qi in zip(q_tilde, Q))


def _outcome(a, b, c, xi, q_tilde, Q, B) -> RelaxOutcome:
    xi = float(xi)
    res = float(a * xi * xi + b * xi + c)
    return RelaxOutcome(xi, blend(xi, q_tilde, Q), res, tuple(map(float, Q)), float(B))


def _check_lengths(*seqs):
    n = len(seqs[0])
    if n == 0 or any(len(s) != n for s in seqs):
        raise ValueError("auxiliary-variable lists must be non-empty and equally long")


def optimal_xi_cn(q_tilde: Sequence[float], Qvals: Sequence[float], B: float) -> RelaxOutcome:
    _check_lengths(q_tilde, Qvals)
    if B < 0:
        raise ValueError("budget must be non-negative")
    a, b, c = cn_coefficients(q_tilde, Qvals, B)
    return _outcome(a, b, c, smallest_feasible_xi(a, b, c), q_tilde, Qvals, B)


def optimal_xi_bdf2(
    q_tilde: Sequence[float], Qvals: Sequence[float], q_n: Sequence[float], B: float
) -> RelaxOutcome:
    _check_lengths(q_tilde, Qvals, q_n)
    if B < 0:
        raise ValueError("budget must be non-negative")
    a, b, c = bdf2_coefficients(q_tilde, Qvals, q_n, B)
    return _outcome(a, b, c, smallest_feasible_xi(a, b, c), q_tilde, Qvals, B)


def relax_state(
    s: SavState,
    result: StepResult,
    m: ModelSpec,
    g: Grid,
    dt: float,
    cfg: RelaxationConfig,
    relax: bool = True,
) -> tuple[SavState, RelaxOutcome]:
    """Choose ``q^{n+1}`` for ``result`` and rotate the state.

    With ``relax=False`` the baseline SAV value ``q~`` is kept (``xi = 1``).
    """
    Q = Q_all(m, result.phi_np1, g)
    B = budget(result.diss, dt, cfg)
    if result.family == CN:
        a, b, c = cn_coefficients(result.q_tilde, Q, B)
    elif result.family == BDF2:
        a, b, c = bdf2_coefficients(result.q_tilde, Q, s.q_n, B)
    else:
        raise ValueError(f"unknown scheme family {result.family!r}")
    xi = smallest_feasible_xi(a, b, c) if relax else 1.0
    out = _outcome(a, b, c, xi, result.q_tilde, Q, B)
    return advance(s, result, out.q_new, dt), out
