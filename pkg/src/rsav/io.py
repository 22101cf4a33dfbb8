"""
Output formats.

Series CSV columns, fixed order::

    step,t,E_orig,E_mod,q_1..q_k,Q_1..Q_k,xi0,mass,diss,law_residual

Reals are written with 17 significant digits so they parse back exactly.

Snapshot text format: a ``# t=<t>`` line, a ``# Nx=.. Ny=.. Lx=.. Ly=..``
line, then ``Ny`` rows of ``Nx`` values (one row per fixed ``y``).

Snapshot binary format: ASCII ``FLD1``, five little-endian float64 header
values ``t, Nx, Ny, Lx, Ly``, then ``Nx*Ny`` little-endian float64 values
in row-major ``[x index, y index]`` order.
"""

from __future__ import annotations

import math
import os
import struct
from typing import Iterable, Sequence

import numpy as np

from .diagnostics import EnergyRecord

MAGIC = b"FLD1"


def fmt(x: float) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if math.isnan(x):
        return "n/a"
    return format(float(x), ".17g")


def series_header(k: int) -> list[str]:
    return (
        ["step", "t", "E_orig", "E_mod"]
        + [f"q_{i}" for i in range(1, k + 1)]
        + [f"Q_{i}" for i in range(1, k + 1)]
        + ["xi0", "mass", "diss", "law_residual"]
    )


def series_row(r: EnergyRecord) -> list[str]:
    return (
        [str(r.step), fmt(r.t), fmt(r.E_orig), fmt(r.E_mod)]
        + [fmt(v) for v in r.q]
        + [fmt(v) for v in r.Qphi]
        + [fmt(r.xi0), fmt(r.mass), fmt(r.diss), fmt(r.law_residual)]
    )


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def write_series(path, records: Sequence[EnergyRecord]) -> None:
    k = len(records[0].q) if records else 1
    write_csv(path, series_header(k), (series_row(r) for r in records))


def read_series(path) -> list[dict]:
    """Parse a series CSV into dicts of floats (``n/a`` becomes NaN)."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        out = []
        for line in fh:
            vals = [float("nan") if v == "n/a" else float(v) for v in line.strip().split(",")]
            out.append(dict(zip(header, vals)))
    return out


def write_snapshot_text(path, phi: np.ndarray, t: float, Lx: float, Ly: float) -> None:
    Nx, Ny = phi.shape
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# t={fmt(t)}\n")
        fh.write(f"# Nx={Nx} Ny={Ny} Lx={fmt(Lx)} Ly={fmt(Ly)}\n")
        for j in range(Ny):
            fh.write(" ".join(fmt(v) for v in phi[:, j]) + "\n")


def read_snapshot_text(path):
    """Return ``(phi, t, Lx, Ly)`` from a text snapshot."""
    with open(path, encoding="utf-8") as fh:
        t = float(fh.readline().strip().removeprefix("# t="))
        meta = dict(tok.split("=") for tok in fh.readline().lstrip("# ").split())
        Nx, Ny = int(meta["Nx"]), int(meta["Ny"])
        rows = [[float(v) for v in line.split()] for line in fh if line.strip()]
    phi = np.array(rows, dtype=float).T
    if phi.shape != (Nx, Ny):
        raise ValueError(f"snapshot body has shape {phi.shape}, header says {(Nx, Ny)}")
    return phi, t, float(meta["Lx"]), float(meta["Ly"])


def write_snapshot_binary(path, phi: np.ndarray, t: float, Lx: float, Ly: float) -> None:
    Nx, Ny = phi.shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<5d", t, Nx, Ny, Lx, Ly))
        fh.write(np.ascontiguousarray(phi, dtype="<f8").tobytes())


def read_snapshot_binary(path):
    with open(path, "rb") as fh:
        if fh.read(4) != MAGIC:
            raise ValueError(f"{path}: not an FLD1 snapshot")
        t, Nx, Ny, Lx, Ly = struct.unpack("<5d", fh.read(40))
        Nx, Ny = int(Nx), int(Ny)
        phi = np.frombuffer(fh.read(), dtype="<f8")
    if phi.size != Nx * Ny:
        raise ValueError(f"{path}: expected {Nx * Ny} values, found {phi.size}")
    return phi.reshape(Nx, Ny).astype(float), t, Lx, Ly


def write_snapshot(out_dir, step: int, phi, t, Lx, Ly, binary: bool = False) -> str:
    os.makedirs(out_dir, exist_ok=True)
    ext = "fld" if binary else "txt"
    path = os.path.join(out_dir, f"snap_{step:07d}.{ext}")
    (write_snapshot_binary if binary else write_snapshot_text)(path, phi, t, Lx, Ly)
    return path
