"""
Second-order SAV time steppers (Crank-Nicolson and BDF2) for any number of
auxiliary variables.

Each step is linear with constant coefficients. Writing ``b_i = T_i/Q_i``
evaluated at the extrapolated state, the unknown field is decomposed as

    phi^{n+1} = A^{-1} rhs0 + sum_i x_i A^{-1}(-G b_i)

where ``A`` is a positive Fourier multiplier, and the ``k`` scalars ``x``
come from a dense ``k x k`` system (see :func:`superposition_solve`).
For CN the unknown scalars are the midpoint values ``(q~ + q^n)/2`` and the
nonlinear term is taken at ``1.5 phi^n - 0.5 phi^{n-1}``; for BDF2 they are
``q~`` directly, with the nonlinear term at ``2 phi^n - phi^{n-1}``.

Steps never mutate their input state; the relaxation module decides the
final ``q^{n+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import spectral as sp
from .errors import DivergenceError, ShapeError, SolverError
from .models import ModelSpec, ModelSymbols, Q_all, Q_of, nonlinear_term
from .spectral import Grid

CN = "cn"
BDF2 = "bdf2"


@dataclass(frozen=True, eq=False)
class SavState:
    phi_n: np.ndarray
    phi_nm1: np.ndarray
    q_n: tuple[float, ...]
    q_nm1: tuple[float, ...]
    t: float = 0.0
    step: int = 0

    @property
    def k(self) -> int:
        return len(self.q_n)


@dataclass(frozen=True, eq=False)
class StepResult:
    """Intermediate solution of one SAV step.

    ``mu`` is the chemical potential the scheme dissipates through
    (midpoint value for CN) and ``diss`` is ``(G mu, mu)``.
    """

    phi_np1: np.ndarray
    q_tilde: tuple[float, ...]
    mu: np.ndarray
    diss: float
    family: str


def initial_state(m: ModelSpec, g: Grid, phi0: np.ndarray, t0: float = 0.0) -> SavState:
    """State at the first time level, with ``q = Q(phi0)`` and no history."""
    if np.shape(phi0) != g.shape:
        raise ShapeError(f"initial field has shape {np.shape(phi0)}, expected {g.shape}")
    phi0 = np.array(phi0, dtype=float)
    if not np.all(np.isfinite(phi0)):
        raise DivergenceError(0, "initial field")
    q0 = tuple(Q_all(m, phi0, g))
    return SavState(phi0, phi0, q0, q0, float(t0), 0)


def extrapolate(phi_n: np.ndarray, phi_nm1: np.ndarray) -> np.ndarray:
    """Midpoint extrapolation ``1.5 phi^n - 0.5 phi^{n-1}`` (value at t^{n+1/2})."""
    if np.shape(phi_n) != np.shape(phi_nm1):
        raise ShapeError("phi_n and phi_nm1 differ in shape")
    return 1.5 * phi_n - 0.5 * phi_nm1


def extrapolate_bdf2(phi_n: np.ndarray, phi_nm1: np.ndarray) -> np.ndarray:
    """Linear extrapolation ``2 phi^n - phi^{n-1}`` to t^{n+1}.

    BDF2 needs the nonlinear term at t^{n+1}; the midpoint value would
    leave an O(dt) timing error and a first-order scheme.
    """
    if np.shape(phi_n) != np.shape(phi_nm1):
        raise ShapeError("phi_n and phi_nm1 differ in shape")
    return 2.0 * phi_n - phi_nm1


def superposition_solve(
    A: np.ndarray,
    rhs0: np.ndarray,
    rhs1: Sequence[np.ndarray],
    pairings: Sequence[np.ndarray],
    coef: float,
    weight: float,
    r: Sequence[float],
    grid: Grid,
) -> tuple[np.ndarray, np.ndarray]:
    """Solve the coupled field/scalar system

        A phi = rhs0 + sum_i x_i rhs1_i           (Fourier side)
        coef * x_j - weight * (p_j, phi) = r_j    (j = 1..k)

    by superposition. ``rhs0`` and ``rhs1_i`` are Fourier coefficients,
    ``p_j`` real nodal fields. Returns the nodal ``phi`` and ``x``.
    """
    if np.shape(A) != grid.shape:
        raise ShapeError("resolvent symbol does not match the grid")
    if not (np.all(np.isfinite(A)) and np.all(A > 0)):
        raise SolverError("resolvent multipliers must be finite and positive")
    k = len(rhs1)
    if len(pairings) != k or len(r) != k:
        raise ShapeError("rhs1, pairings and r must have the same length")
    phi_a = sp.inverse(rhs0 / A, grid)
    phi_b = [sp.inverse(c / A, grid) for c in rhs1]
    M = np.empty((k, k))
    rhs = np.empty(k)
    for j in range(k):
        rhs[j] = r[j] + weight * sp.inner_product(pairings[j], phi_a, grid)
        for i in range(k):
            M[j, i] = -weight * sp.inner_product(pairings[j], phi_b[i], grid)
        M[j, j] += coef
    if k == 1:
        if abs(M[0, 0]) < 1e-14 * max(abs(coef), 1.0):
            raise SolverError(f"scalar system is singular (pivot {M[0, 0]:.3e})")
        x = rhs / M[0, 0]
    else:
        row_norms = np.linalg.norm(M, axis=1)
        if abs(np.linalg.det(M)) < 1e-14 * np.prod(row_norms):
            raise SolverError("auxiliary-variable system is singular")
        x = np.linalg.solve(M, rhs)
    phi = phi_a
    for i in range(k):
        phi = phi + x[i] * phi_b[i]
    return phi, x


def _coupling_fields(m: ModelSpec, phibar: np.ndarray, g: Grid):
    """``b_i = T_i(phibar)/Q_i(phibar)`` and their Fourier coefficients."""
    mask = g.dealias_mask() if g.dealias else None
    b, bh = [], []
    for i in range(m.k):
        bi = nonlinear_term(m, i, phibar, g) / Q_of(m, i, phibar, g)
        bih = sp.transform(bi, g)
        if mask is not None:
            bih = bih * mask
            bi = sp.inverse(bih, g)
        b.append(bi)
        bh.append(bih)
    return b, bh


def _finish(phi, q_tilde, mu_h, sym, family, step):
    g = sym.grid
    if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(q_tilde))):
        raise DivergenceError(step + 1)
    diss = float(g.area * np.sum(sym.mob * (mu_h.real**2 + mu_h.imag**2)))
    return StepResult(phi, tuple(float(v) for v in q_tilde), sp.inverse(mu_h, g), diss, family)


def sav_cn_step(s: SavState, m: ModelSpec, sym: ModelSymbols, dt: float) -> StepResult:
    """One SAV Crank-Nicolson step; midpoints are ``(phi^{n+1}+phi^n)/2`` and
    ``(q~ + q^n)/2``."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    g = sym.grid
    b, bh = _coupling_fields(m, extrapolate(s.phi_n, s.phi_nm1), g)
    GL = sym.mob * sym.lin_gamma
    A = 1.0 / dt + 0.5 * GL
    phin_h = sp.transform(s.phi_n, g)
    rhs0 = (1.0 / dt - 0.5 * GL) * phin_h
    rhs1 = [-sym.mob * c for c in bh]
    r = [2.0 * s.q_n[j] - 0.5 * sp.inner_product(b[j], s.phi_n, g) for j in range(m.k)]
    phi, mid = superposition_solve(A, rhs0, rhs1, b, 2.0, 0.5, r, g)
    q_tilde = 2.0 * mid - np.asarray(s.q_n)
    mu_h = 0.5 * sym.lin_gamma * (sp.transform(phi, g) + phin_h)
    for i in range(m.k):
        mu_h = mu_h + mid[i] * bh[i]
    return _finish(phi, q_tilde, mu_h, sym, CN, s.step)


def sav_bdf2_step(s: SavState, m: ModelSpec, sym: ModelSymbols, dt: float) -> StepResult:
    """One SAV-BDF2 step. Needs two back levels; see :func:`bootstrap_first_step`."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    g = sym.grid
    b, bh = _coupling_fields(m, extrapolate_bdf2(s.phi_n, s.phi_nm1), g)
    A = 1.5 / dt + sym.mob * sym.lin_gamma
    rhs0 = (4.0 * sp.transform(s.phi_n, g) - sp.transform(s.phi_nm1, g)) / (2.0 * dt)
    rhs1 = [-sym.mob * c for c in bh]
    r = [
        4.0 * s.q_n[j]
        - s.q_nm1[j]
        + 0.5 * sp.inner_product(b[j], s.phi_nm1 - 4.0 * s.phi_n, g)
        for j in range(m.k)
    ]
    phi, q_tilde = superposition_solve(A, rhs0, rhs1, b, 3.0, 1.5, r, g)
    mu_h = sym.lin_gamma * sp.transform(phi, g)
    for i in range(m.k):
        mu_h = mu_h + q_tilde[i] * bh[i]
    return _finish(phi, q_tilde, mu_h, sym, BDF2, s.step)


def bootstrap_first_step(
    s: SavState, m: ModelSpec, sym: ModelSymbols, dt: float
) -> StepResult:
    """First step of a BDF2 run, taken with SAV-CN to create a second back level."""
    if s.step != 0:
        raise ValueError("bootstrap_first_step is only valid at step 0")
    return sav_cn_step(s, m, sym, dt)


def sav_step(
    s: SavState, m: ModelSpec, sym: ModelSymbols, dt: float, family: str
) -> StepResult:
    """Dispatch to the scheme ``family`` ('cn' or 'bdf2'), bootstrapping BDF2."""
    if family == CN:
        return sav_cn_step(s, m, sym, dt)
    if family == BDF2:
        if s.step == 0:
            return bootstrap_first_step(s, m, sym, dt)
        return sav_bdf2_step(s, m, sym, dt)
    raise ValueError(f"unknown scheme family {family!r}")


def advance(s: SavState, result: StepResult, q_new: Sequence[float], dt: float) -> SavState:
    """Rotate time levels after a step with the accepted ``q^{n+1}``."""
    return replace(
        s,
        phi_n=result.phi_np1,
        phi_nm1=s.phi_n,
        q_n=tuple(float(v) for v in q_new),
        q_nm1=s.q_n,
        t=s.t + dt,
        step=s.step + 1,
    )
