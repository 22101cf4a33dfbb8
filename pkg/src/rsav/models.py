"""
Gradient-flow model catalog.

Every model is written as

    E(phi) = 1/2 (phi, L phi) + sum_i int F_i(phi)
    d phi/dt = -G (L phi + sum_i F_i'(phi))

with ``L`` and ``G`` diagonal in Fourier space. The SAV reformulation uses,
per bulk term ``i``,

    Q_i(phi)^2 = int (F_i(phi) - gamma_i/2 phi S phi) + const_i + C_i
    mu  = (L + sum_i gamma_i S) phi + sum_i (q_i / Q_i) T_i(phi)

where ``S`` is the stabilizer symbol (identity for potentials of ``phi``,
``-Laplacian`` for the slope-selection potential of ``grad phi``) and
``T_i = F_i' - gamma_i S phi`` is the nonlinear term. ``const_i`` is the
model-specific offset of the closed-form radicands; see
:func:`energy_offset`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import spectral as sp
from .errors import CatalogError, IllPosedQError, ShapeError
from .spectral import Grid

HEAT = "heat"
ALLEN_CAHN = "allen-cahn"
CAHN_HILLIARD = "cahn-hilliard"
MBE = "mbe"
PFC = "pfc"
DIBLOCK = "diblock"
SPLIT_DOUBLE_WELL = "split-double-well"

VARIANTS = (HEAT, ALLEN_CAHN, CAHN_HILLIARD, MBE, PFC, DIBLOCK, SPLIT_DOUBLE_WELL)

# Defaults mirror the published experiments; lam is the mobility rate.
CATALOG: dict[str, dict] = {
    HEAT: dict(D=0.1, gammas=(0.0,), Cs=(1.0,)),
    ALLEN_CAHN: dict(epsilon=0.01, lam=1.0, gammas=(1.0,), Cs=(1.0,)),
    CAHN_HILLIARD: dict(epsilon=0.01, lam=0.1, gammas=(4.0,), Cs=(1.0,)),
    MBE: dict(epsilon=0.1, gammas=(4.0,), Cs=(0.0,)),
    PFC: dict(a0=1.0, b0=0.325, lam=1.0, gammas=(1.0,), Cs=(1.0,)),
    DIBLOCK: dict(
        epsilon=0.01, lam=0.1, sigma=1.0, phi0_hat=0.4, gammas=(4.0,), Cs=(1.0,)
    ),
    SPLIT_DOUBLE_WELL: dict(
        epsilon=0.01, lam=1.0, weights=(0.5, 0.5), gammas=(0.5, 0.5), Cs=(0.5, 0.5)
    ),
}

# Scalar parameters each model reads (besides gammas/Cs).
PARAMETERS: dict[str, tuple[str, ...]] = {
    HEAT: ("D",),
    ALLEN_CAHN: ("epsilon", "lam"),
    CAHN_HILLIARD: ("epsilon", "lam"),
    MBE: ("epsilon",),
    PFC: ("a0", "b0", "lam"),
    DIBLOCK: ("epsilon", "lam", "sigma", "phi0_hat"),
    SPLIT_DOUBLE_WELL: ("epsilon", "lam"),
}

CONSERVED = frozenset({CAHN_HILLIARD, PFC, DIBLOCK})


@dataclass(frozen=True)
class ModelSpec:
    variant: str
    epsilon: float = 0.0
    lam: float = 1.0
    D: float = 0.0
    a0: float = 0.0
    b0: float = 0.0
    sigma: float = 0.0
    phi0_hat: float = 0.0
    gammas: tuple[float, ...] = (0.0,)
    Cs: tuple[float, ...] = (1.0,)
    weights: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise CatalogError(f"unknown model variant {self.variant!r}")
        k = len(self.gammas)
        if k < 1 or len(self.Cs) != k:
            raise ValueError("gammas and Cs must be non-empty and of equal length")
        if self.variant == SPLIT_DOUBLE_WELL and len(self.weights) != k:
            raise ValueError("split-double-well needs one weight per auxiliary variable")
        if self.variant != SPLIT_DOUBLE_WELL and k != 1:
            raise ValueError(f"{self.variant} uses exactly one auxiliary variable")
        if any(c < 0 for c in self.Cs):
            raise ValueError("C_i must be non-negative")
        if self.variant == SPLIT_DOUBLE_WELL and any(w <= 0 for w in self.weights):
            raise ValueError("split weights must be positive")
        if "epsilon" in PARAMETERS[self.variant] and self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if "lam" in PARAMETERS[self.variant] and self.lam <= 0:
            raise ValueError("lambda must be positive")

    @property
    def k(self) -> int:
        return len(self.gammas)

    @property
    def conserved(self) -> bool:
        return self.variant in CONSERVED

    def with_params(self, **changes) -> "ModelSpec":
        return replace(self, **changes)


def make_model(name: str, **overrides) -> ModelSpec:
    """Catalog model ``name`` with default parameters, updated by ``overrides``."""
    if name not in CATALOG:
        raise CatalogError(f"unknown model {name!r}; choose from {', '.join(VARIANTS)}")
    params = dict(CATALOG[name])
    for key in ("gammas", "Cs", "weights"):
        if key in overrides:
            overrides[key] = tuple(float(v) for v in overrides[key])
    params.update(overrides)
    return ModelSpec(variant=name, **params)


@dataclass(frozen=True, eq=False)
class ModelSymbols:
    """Fourier multipliers of a model on one grid.

    ``lin`` is L, ``mob`` is G, ``stab`` the stabilizer S; ``lin_gamma`` is
    ``L + sum(gammas) * S``, the operator in the modified energy.
    """

    grid: Grid
    lin: np.ndarray
    mob: np.ndarray
    stab: np.ndarray
    lin_gamma: np.ndarray = field(init=False)
    gamma_total: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "lin_gamma", self.lin + self.gamma_total * self.stab)


def model_symbols(m: ModelSpec, g: Grid) -> ModelSymbols:
    k2 = g.k2
    ones = np.ones(g.shape)
    v = m.variant
    if v == HEAT:
        lin, mob, stab = 2.0 * m.D * k2, ones, ones
    elif v in (ALLEN_CAHN, SPLIT_DOUBLE_WELL):
        lin, mob, stab = m.epsilon**2 * k2, m.lam * ones, ones
    elif v == CAHN_HILLIARD:
        lin, mob, stab = m.epsilon**2 * k2, m.lam * k2, ones
    elif v == MBE:
        lin, mob, stab = m.epsilon**2 * k2**2, ones, sp.gradient_symbol_sq(g)
    elif v == PFC:
        lin, mob, stab = (m.a0 - k2) ** 2, m.lam * k2, ones
    elif v == DIBLOCK:
        inv_k2 = np.zeros(g.shape)
        nz = k2 > 0
        inv_k2[nz] = 1.0 / k2[nz]
        lin, mob, stab = m.epsilon**2 * k2 + m.sigma * inv_k2, m.lam * k2, ones
    else:  # pragma: no cover - guarded by ModelSpec
        raise CatalogError(f"unsupported variant {v!r}")
    for a in (lin, mob, stab):
        a.flags.writeable = False
    return ModelSymbols(g, lin, mob, stab, gamma_total=float(sum(m.gammas)))


def _check_index(m: ModelSpec, i: int) -> None:
    if not 0 <= i < m.k:
        raise IndexError(f"auxiliary index {i} out of range for k={m.k}")


def _slope_sq(phi: np.ndarray, g: Grid):
    px, py = sp.gradient(phi, g)
    return px, py, px * px + py * py


def bulk_F(m: ModelSpec, i: int, phi: np.ndarray, g: Grid) -> np.ndarray:
    """Pointwise bulk energy density F_i(phi).

    For the MBE model this is the density of the slope term and therefore
    depends on the gradient of ``phi``.
    """
    _check_index(m, i)
    v = m.variant
    if v == HEAT:
        return np.zeros_like(phi)
    if v in (ALLEN_CAHN, CAHN_HILLIARD, DIBLOCK):
        return 0.25 * (phi * phi - 1.0) ** 2
    if v == SPLIT_DOUBLE_WELL:
        return m.weights[i] * 0.25 * (phi * phi - 1.0) ** 2
    if v == PFC:
        p2 = phi * phi
        return 0.25 * p2 * p2 - 0.5 * m.b0 * p2
    if v == MBE:
        return 0.25 * (_slope_sq(phi, g)[2] - 1.0) ** 2
    raise CatalogError(v)  # pragma: no cover


def _radicand(m: ModelSpec, i: int, phi: np.ndarray, g: Grid) -> float:
    gam, C = m.gammas[i], m.Cs[i]
    v = m.variant
    if v == HEAT:
        return sp.integrate(-0.5 * gam * phi * phi, g) + C
    if v in (ALLEN_CAHN, CAHN_HILLIARD, DIBLOCK):
        return sp.integrate(0.25 * (phi * phi - 1.0 - gam) ** 2, g) + C
    if v == SPLIT_DOUBLE_WELL:
        w = m.weights[i]
        return w * sp.integrate(0.25 * (phi * phi - 1.0 - gam / w) ** 2, g) + C
    if v == PFC:
        return 0.25 * sp.integrate((phi * phi - m.b0 - gam) ** 2, g) + C
    if v == MBE:
        s2 = _slope_sq(phi, g)[2]
        return 0.25 * sp.integrate((s2 - 1.0 - gam) ** 2, g) + C
    raise CatalogError(v)  # pragma: no cover


def Q_of(m: ModelSpec, i: int, phi: np.ndarray, g: Grid) -> float:
    """Auxiliary-variable definition Q_i(phi) in its closed per-model form."""
    _check_index(m, i)
    r = _radicand(m, i, phi, g)
    if not r > 0:
        raise IllPosedQError(i, r)
    return float(np.sqrt(r))


def Q_all(m: ModelSpec, phi: np.ndarray, g: Grid) -> list[float]:
    return [Q_of(m, i, phi, g) for i in range(m.k)]


def nonlinear_term(m: ModelSpec, i: int, phibar: np.ndarray, g: Grid) -> np.ndarray:
    """T_i(phibar), the field multiplying q_i/Q_i in the chemical potential."""
    _check_index(m, i)
    gam = m.gammas[i]
    v = m.variant
    if v == HEAT:
        return -gam * phibar
    if v in (ALLEN_CAHN, CAHN_HILLIARD, DIBLOCK):
        return phibar * (phibar * phibar - 1.0 - gam)
    if v == SPLIT_DOUBLE_WELL:
        w = m.weights[i]
        return w * phibar * (phibar * phibar - 1.0 - gam / w)
    if v == PFC:
        return phibar * (phibar * phibar - m.b0 - gam)
    if v == MBE:
        px, py, s2 = _slope_sq(phibar, g)
        fac = s2 - 1.0 - gam
        return -sp.divergence(fac * px, fac * py, g)
    raise CatalogError(v)  # pragma: no cover


def v_pairing(
    m: ModelSpec, i: int, phibar: np.ndarray, psi: np.ndarray, g: Grid
) -> float:
    """``int V_i(phibar) psi``; the MBE model uses the flux form
    ``int (|grad phibar|^2 - 1 - gamma) grad phibar . grad psi``."""
    _check_index(m, i)
    if np.shape(psi) != np.shape(phibar):
        raise ShapeError("phibar and psi differ in shape")
    if m.variant == MBE:
        px, py, s2 = _slope_sq(phibar, g)
        fac = s2 - 1.0 - m.gammas[i]
        qx, qy = sp.gradient(psi, g)
        return sp.integrate(fac * (px * qx + py * qy), g)
    return sp.inner_product(nonlinear_term(m, i, phibar, g), psi, g)


def energy_offset(m: ModelSpec, g: Grid) -> float:
    """Constant ``sum_i (Q_i^2 - C_i) - int (F_i - gamma_i/2 phi S phi)``.

    This is the gap ``E_mod - E_orig`` whenever ``q_i = Q_i(phi)``.
    """
    area = g.area
    v = m.variant
    total = 0.0
    for i, gam in enumerate(m.gammas):
        if v == HEAT:
            c = 0.0
        elif v in (ALLEN_CAHN, CAHN_HILLIARD, DIBLOCK, MBE):
            c = 0.5 * gam + 0.25 * gam**2
        elif v == SPLIT_DOUBLE_WELL:
            c = 0.5 * gam + 0.25 * gam**2 / m.weights[i]
        elif v == PFC:
            c = 0.25 * (m.b0 + gam) ** 2
        else:  # pragma: no cover
            raise CatalogError(v)
        total += c * area
    return total
