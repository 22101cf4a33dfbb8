"""
Fourier pseudo-spectral machinery on a periodic uniform 2D grid.

Fields are plain ``(Nx, Ny)`` float arrays indexed ``[x index, y index]``;
their Fourier coefficients are ``(Nx, Ny)`` complex arrays in standard FFT
ordering. Diagonal operators ("symbols") are real ``(Nx, Ny)`` arrays of
multipliers.

Normalization: the forward transform divides by ``Nx*Ny``, so the ``k = 0``
coefficient is the field mean and

    integrate(f) = |Omega| * fhat[0, 0]
    inner_product(f, g) = |Omega| * sum(fhat * conj(ghat))

Odd-order derivative multipliers vanish on the Nyquist row/column to keep
outputs real; even-order symbols (|k|^2, |k|^4) keep their Nyquist values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridError, ShapeError


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Grid:
    """Periodic uniform mesh on ``[0, Lx) x [0, Ly)`` with wavenumber tables.

    Build it with :func:`make_grid`; the arrays it carries are read-only.
    """

    Nx: int
    Ny: int
    Lx: float
    Ly: float
    dealias: bool = False
    hx: float = field(init=False)
    hy: float = field(init=False)
    kx: np.ndarray = field(init=False, repr=False)
    ky: np.ndarray = field(init=False, repr=False)
    kx_d: np.ndarray = field(init=False, repr=False)
    ky_d: np.ndarray = field(init=False, repr=False)
    k2: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        Nx, Ny, Lx, Ly = self.Nx, self.Ny, self.Lx, self.Ly
        set_ = object.__setattr__
        set_(self, "hx", Lx / Nx)
        set_(self, "hy", Ly / Ny)
        # integer wavenumbers 0, 1, ..., N/2, -N/2+1, ..., -1
        jx = np.fft.fftfreq(Nx, d=1.0 / Nx)
        jy = np.fft.fftfreq(Ny, d=1.0 / Ny)
        jx[Nx // 2] = Nx // 2
        jy[Ny // 2] = Ny // 2
        kx = 2.0 * np.pi / Lx * jx
        ky = 2.0 * np.pi / Ly * jy
        kx_d = kx.copy()
        ky_d = ky.copy()
        kx_d[Nx // 2] = 0.0
        ky_d[Ny // 2] = 0.0
        set_(self, "kx", _readonly(kx))
        set_(self, "ky", _readonly(ky))
        set_(self, "kx_d", _readonly(kx_d))
        set_(self, "ky_d", _readonly(ky_d))
        set_(self, "k2", _readonly(kx[:, None] ** 2 + ky[None, :] ** 2))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.Nx, self.Ny)

    @property
    def area(self) -> float:
        return self.Lx * self.Ly

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.Nx) * self.hx

    @property
    def y(self) -> np.ndarray:
        return np.arange(self.Ny) * self.hy

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Nodal coordinates ``(X, Y)`` with ``ij`` indexing."""
        return np.meshgrid(self.x, self.y, indexing="ij")

    def same_as(self, other: "Grid") -> bool:
        return (self.Nx, self.Ny, self.Lx, self.Ly) == (
            other.Nx,
            other.Ny,
            other.Lx,
            other.Ly,
        )

    def dealias_mask(self) -> np.ndarray:
        """2/3-rule mask: True where a mode is kept."""
        jx = np.abs(np.fft.fftfreq(self.Nx, d=1.0 / self.Nx))
        jy = np.abs(np.fft.fftfreq(self.Ny, d=1.0 / self.Ny))
        keep_x = jx < self.Nx / 3.0
        keep_y = jy < self.Ny / 3.0
        return keep_x[:, None] & keep_y[None, :]


def make_grid(Nx: int, Ny: int, Lx: float, Ly: float, dealias: bool = False) -> Grid:
    """Validate the mesh parameters and build a :class:`Grid`.

    Raises
    ------
    GridError
        If ``Nx`` or ``Ny`` is odd or below 4, or a length is not positive.
    """
    for name, n in (("Nx", Nx), ("Ny", Ny)):
        if isinstance(n, bool) or int(n) != n:
            raise GridError(f"{name} must be an integer, got {n!r}")
        if n < 4 or n % 2:
            raise GridError(f"{name} must be an even integer >= 4, got {n}")
    for name, L in (("Lx", Lx), ("Ly", Ly)):
        if not (np.isfinite(L) and L > 0):
            raise GridError(f"{name} must be positive and finite, got {L!r}")
    return Grid(int(Nx), int(Ny), float(Lx), float(Ly), bool(dealias))


def _check(a: np.ndarray, shape, what="field") -> None:
    if np.shape(a) != tuple(shape):
        raise ShapeError(f"{what} has shape {np.shape(a)}, expected {tuple(shape)}")


def transform(f: np.ndarray, grid: Grid) -> np.ndarray:
    """Forward FFT normalized so a constant field maps to its value at k=0."""
    _check(f, grid.shape)
    return np.fft.fft2(f, norm="forward")


def inverse(c: np.ndarray, grid: Grid) -> np.ndarray:
    """Inverse of :func:`transform`, returning the real part."""
    _check(c, grid.shape, "spectral field")
    return np.fft.ifft2(c, norm="forward").real


def apply_symbol(c: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Multiply Fourier coefficients by a real diagonal symbol."""
    _check(s, np.shape(c), "symbol")
    return c * s


def laplacian_symbol(grid: Grid) -> np.ndarray:
    return -grid.k2


def biharmonic_symbol(grid: Grid) -> np.ndarray:
    return grid.k2**2


def gradient_symbol_sq(grid: Grid) -> np.ndarray:
    """|k|^2 built from the first-derivative wavenumbers (Nyquist zeroed).

    This is the symbol of ``-div(grad(.))`` as composed by :func:`gradient`
    and :func:`divergence`, which differs from ``grid.k2`` on Nyquist modes.
    """
    return grid.kx_d[:, None] ** 2 + grid.ky_d[None, :] ** 2


def gradient(f: np.ndarray, grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    fh = transform(f, grid)
    fx = inverse(1j * grid.kx_d[:, None] * fh, grid)
    fy = inverse(1j * grid.ky_d[None, :] * fh, grid)
    return fx, fy


def divergence(fx: np.ndarray, fy: np.ndarray, grid: Grid) -> np.ndarray:
    _check(fy, np.shape(fx))
    ch = 1j * grid.kx_d[:, None] * transform(fx, grid)
    ch += 1j * grid.ky_d[None, :] * transform(fy, grid)
    return inverse(ch, grid)


def integrate(f: np.ndarray, grid: Grid) -> float:
    """Rectangle-rule integral over the periodic cell."""
    _check(f, grid.shape)
    return float(grid.hx * grid.hy * np.sum(f))


def inner_product(f: np.ndarray, g: np.ndarray, grid: Grid) -> float:
    _check(f, grid.shape)
    _check(g, grid.shape)
    return float(grid.hx * grid.hy * np.sum(f * g))


def l2_norm(f: np.ndarray, grid: Grid) -> float:
    return float(np.sqrt(inner_product(f, f, grid)))


def spectral_inner(ch: np.ndarray, dh: np.ndarray, grid: Grid) -> float:
    """``(f, g)`` evaluated on the Fourier side (Parseval)."""
    _check(ch, grid.shape, "spectral field")
    _check(dh, grid.shape, "spectral field")
    return float(grid.area * np.sum((ch * np.conj(dh)).real))


def quadratic_form(f: np.ndarray, s: np.ndarray, grid: Grid) -> float:
    """``(f, S f)`` for a real even symbol ``S``, computed spectrally."""
    fh = transform(f, grid)
    _check(s, grid.shape, "symbol")
    return float(grid.area * np.sum(s * (fh.real**2 + fh.imag**2)))
