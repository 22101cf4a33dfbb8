"""Simulation loop, time-step refinement studies and baseline/relaxed comparisons."""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from . import io
from . import spectral as sp
from .config import RunConfig
from .diagnostics import EnergyRecord, law_holds, law_residual, make_record
from .errors import EnergyLawViolation
from .initial import make_initial
from .integrators import SavState, initial_state, sav_step
from .models import ModelSpec, ModelSymbols, model_symbols
from .relaxation import RelaxationConfig, relax_state
from .spectral import Grid, make_grid

log = logging.getLogger(__name__)


@dataclass
class RunResult:
    records: list[EnergyRecord]
    snapshots: list[tuple[float, np.ndarray]]
    state: SavState
    xi0: list[float] = field(default_factory=list)
    q_gap_tilde: list[tuple[float, ...]] = field(default_factory=list)


def simulate(
    m: ModelSpec,
    g: Grid,
    phi0: np.ndarray,
    dt: float,
    nsteps: int,
    family: str = "cn",
    relaxed: bool = True,
    eta: float = 0.95,
    series_every: int = 1,
    snapshot_every: int = 0,
    check_law: bool = True,
    sym: Optional[ModelSymbols] = None,
    on_snapshot: Optional[Callable[[SavState], None]] = None,
) -> RunResult:
    """Integrate ``nsteps`` steps of the chosen scheme from ``phi0``.

    Records are taken at step 0 and every ``series_every`` steps; the final
    step is always recorded. With ``check_law`` each step's discrete energy
    law is verified and :class:`EnergyLawViolation` raised on failure.
    ``xi0`` and ``q_gap_tilde`` (``q~ - Q(phi^{n+1})``) are kept for every step.
    """
    sym = sym if sym is not None else model_symbols(m, g)
    rcfg = RelaxationConfig(eta)
    eta_law = eta if relaxed else 0.0
    state = initial_state(m, g, phi0)
    records = [make_record(state, m, sym, state.q_n)]
    snaps = []
    if snapshot_every:
        snaps.append((state.t, state.phi_n))
        if on_snapshot:
            on_snapshot(state)
    xis, gaps = [], []
    for _ in range(nsteps):
        result = sav_step(state, m, sym, dt, family)
        new, out = relax_state(state, result, m, g, dt, rcfg, relax=relaxed)
        xis.append(out.xi0)
        gaps.append(tuple(a - b for a, b in zip(result.q_tilde, out.Q)))
        want_record = new.step % series_every == 0 or new.step == nsteps
        residual = 0.0
        if check_law or want_record:
            residual = law_residual(state, new, result, sym, dt, eta_law)
        if check_law or want_record:
            rec = make_record(new, m, sym, out.Q, out.xi0, result.diss, residual)
            if check_law and not law_holds(residual, rec.E_mod, result.family, relaxed):
                raise EnergyLawViolation(new.step, residual, 1e-10 * max(1, abs(rec.E_mod)))
            if want_record:
                records.append(rec)
        if snapshot_every and new.step % snapshot_every == 0:
            snaps.append((new.t, new.phi_n))
            if on_snapshot:
                on_snapshot(new)
        state = new
    return RunResult(records, snaps, state, xis, gaps)


def setup(cfg: RunConfig):
    m = cfg.model_spec()
    g = make_grid(cfg.Nx, cfg.Ny, cfg.Lx, cfg.Ly, dealias=cfg.dealias)
    phi0 = make_initial(cfg, g, epsilon=m.epsilon)
    return m, g, phi0


def run(cfg: RunConfig, out_dir: Optional[str] = None, write: bool = True) -> RunResult:
    """Run one configuration, writing ``series.csv`` and snapshots to ``out_dir``."""
    m, g, phi0 = setup(cfg)
    out_dir = out_dir or cfg.out_dir
    on_snapshot = None
    if write:
        os.makedirs(out_dir, exist_ok=True)
        binary = cfg.snapshot_format == "binary"
        snap_dir = os.path.join(out_dir, "snapshots")

        def on_snapshot(s: SavState) -> None:
            io.write_snapshot(snap_dir, s.step, s.phi_n, s.t, g.Lx, g.Ly, binary)

    log.info("run %s %s dt=%g steps=%d", cfg.model, cfg.scheme, cfg.dt, cfg.nsteps)
    result = simulate(
        m,
        g,
        phi0,
        cfg.dt,
        cfg.nsteps,
        family=cfg.family,
        relaxed=cfg.relaxed,
        eta=cfg.eta,
        series_every=cfg.series_every,
        snapshot_every=cfg.snapshot_every,
        check_law=cfg.check_law,
        on_snapshot=on_snapshot,
    )
    if write:
        io.write_series(os.path.join(out_dir, "series.csv"), result.records)
    return result


@dataclass
class RefineTable:
    dts: list[float]
    err_phi: list[float]
    err_q: list[float]
    order_phi: list[float]
    order_q: list[float]

    def rows(self):
        for i, dt in enumerate(self.dts[:-1]):
            yield [
                str(i),
                io.fmt(dt),
                io.fmt(self.err_phi[i]),
                io.fmt(self.err_q[i]),
                io.fmt(self.order_phi[i]) if i < len(self.order_phi) else "n/a",
                io.fmt(self.order_q[i]) if i < len(self.order_q) else "n/a",
            ]


REFINE_HEADER = ["level", "dt", "err_phi", "err_q", "order_phi", "order_q"]


def observed_orders(errors) -> list[float]:
    """``log2(e_l / e_{l+1})``; NaN where either error is zero or non-finite."""
    out = []
    for e0, e1 in zip(errors[:-1], errors[1:]):
        if e0 > 0 and e1 > 0 and math.isfinite(e0) and math.isfinite(e1):
            out.append(math.log2(e0 / e1))
        else:
            out.append(float("nan"))
    return out


def refine(
    cfg: RunConfig, levels: int, out_dir: Optional[str] = None, write: bool = True
) -> RefineTable:
    """Cauchy refinement ladder ``dt, dt/2, ..., dt/2^(levels-1)`` to time ``T``.

    The error at level ``l`` compares level ``l`` with level ``l+1`` at ``T``.
    """
    if levels < 3:
        raise ValueError("refine needs at least 3 levels")
    m, g, phi0 = setup(cfg)
    sym = model_symbols(m, g)
    finals = []
    dts = []
    for lev in range(levels):
        dt = cfg.dt / 2**lev
        res = simulate(
            m,
            g,
            phi0,
            dt,
            cfg.nsteps * 2**lev,
            family=cfg.family,
            relaxed=cfg.relaxed,
            eta=cfg.eta,
            series_every=cfg.nsteps * 2**lev,
            check_law=cfg.check_law,
            sym=sym,
        )
        dts.append(dt)
        finals.append(res.state)
    err_phi = [sp.l2_norm(a.phi_n - b.phi_n, g) for a, b in zip(finals, finals[1:])]
    err_q = [
        float(np.linalg.norm(np.subtract(a.q_n, b.q_n))) for a, b in zip(finals, finals[1:])
    ]
    table = RefineTable(dts, err_phi, err_q, observed_orders(err_phi), observed_orders(err_q))
    if write:
        out_dir = out_dir or cfg.out_dir
        os.makedirs(out_dir, exist_ok=True)
        io.write_csv(os.path.join(out_dir, "refine.csv"), REFINE_HEADER, table.rows())
    return table


@dataclass
class Comparison:
    baseline: RunResult
    relaxed: RunResult

    def max_gap(self, which: str) -> float:
        res = self.baseline if which == "baseline" else self.relaxed
        return max(max(abs(v) for v in r.q_minus_Q) for r in res.records)


def compare(cfg: RunConfig, out_dir: Optional[str] = None, write: bool = True) -> Comparison:
    """Run the baseline and relaxed variants of ``cfg.scheme`` from the same IC."""
    if not cfg.relaxed:
        raise ValueError("compare expects a relaxed scheme (rsav-cn or rsav-bdf2)")
    base_cfg = replace(cfg, scheme="sav-" + cfg.family)
    base = run(base_cfg, write=False)
    relx = run(cfg, write=False)
    comp = Comparison(base, relx)
    if write:
        out_dir = out_dir or cfg.out_dir
        os.makedirs(out_dir, exist_ok=True)
        k = len(base.records[0].q)
        header = ["step", "t", "E_orig_base", "E_mod_base", "E_orig_relax", "E_mod_relax"]
        header += [f"qmQ_base_{i}" for i in range(1, k + 1)]
        header += [f"qmQ_relax_{i}" for i in range(1, k + 1)]
        header += ["xi0_relax"]
        rows = []
        for rb, rr in zip(base.records, relx.records):
            rows.append(
                [str(rb.step), io.fmt(rb.t), io.fmt(rb.E_orig), io.fmt(rb.E_mod)]
                + [io.fmt(rr.E_orig), io.fmt(rr.E_mod)]
                + [io.fmt(v) for v in rb.q_minus_Q]
                + [io.fmt(v) for v in rr.q_minus_Q]
                + [io.fmt(rr.xi0)]
            )
        io.write_csv(os.path.join(out_dir, "compare.csv"), header, rows)
    return comp
