"""Independent reference computations shared by the unit and acceptance tests.

Nothing here calls the package's spectral or solver code: symbols, DFT
matrices and quadrature are rebuilt from scratch with plain numpy.
"""

import numpy as np


def wavenumbers(N, L):
    return 2 * np.pi / L * np.fft.fftfreq(N, 1.0 / N)


def dft_matrix(N):
    j = np.arange(N)
    return np.exp(-2j * np.pi * np.outer(j, j) / N)


def operator_matrix(symbol, Nx, Ny):
    """Real nodal matrix of a Fourier multiplier, nodes ordered ``i*Ny + j``."""
    F = np.kron(dft_matrix(Nx), dft_matrix(Ny))
    Finv = F.conj() / (Nx * Ny)
    return (Finv @ np.diag(symbol.ravel()) @ F).real


def ch_dense_step(phi_n, phi_nm1, q_n, q_nm1, L, eps, lam, gamma, C, dt, family):
    """One Cahn-Hilliard SAV step from a fully assembled (N^2+1) square system.

    Returns ``(phi_np1, q_tilde)``.
    """
    Nx, Ny = phi_n.shape
    kx, ky = wavenumbers(Nx, L), wavenumbers(Ny, L)
    k2 = kx[:, None] ** 2 + ky[None, :] ** 2
    Lg = operator_matrix(eps**2 * k2 + gamma, Nx, Ny)
    G = operator_matrix(lam * k2, Nx, Ny)
    w = (L / Nx) * (L / Ny)

    if family == "cn":
        pbar = (1.5 * phi_n - 0.5 * phi_nm1).ravel()
    else:
        pbar = (2.0 * phi_n - phi_nm1).ravel()
    Q = np.sqrt(w * np.sum(0.25 * (pbar**2 - 1 - gamma) ** 2) + C)
    b = pbar * (pbar**2 - 1 - gamma) / Q
    Gb = G @ b
    pn, pm = phi_n.ravel(), phi_nm1.ravel()
    n = Nx * Ny
    M = np.zeros((n + 1, n + 1))
    rhs = np.zeros(n + 1)
    I = np.eye(n)
    if family == "cn":
        M[:n, :n] = I / dt + 0.5 * G @ Lg
        M[:n, n] = 0.5 * Gb
        rhs[:n] = pn / dt - 0.5 * G @ Lg @ pn - 0.5 * Gb * q_n
        M[n, :n] = -0.5 * w * b
        M[n, n] = 1.0
        rhs[n] = q_n - 0.5 * w * b @ pn
    else:
        M[:n, :n] = 1.5 * I / dt + G @ Lg
        M[:n, n] = Gb
        rhs[:n] = (4 * pn - pm) / (2 * dt)
        M[n, :n] = -1.5 * w * b
        M[n, n] = 3.0
        rhs[n] = 4 * q_n - q_nm1 - 0.5 * w * b @ (4 * pn - pm)
    sol = np.linalg.solve(M, rhs)
    return sol[:n].reshape(Nx, Ny), sol[n]


def heat_rate(D, L, mode=1):
    """Decay rate of the single cosine mode ``cos(2 pi mode x / L)`` for u_t = 2D lap u."""
    return 2.0 * D * (2 * np.pi * mode / L) ** 2


def cn_factor(a, dt):
    return (1 - 0.5 * a * dt) / (1 + 0.5 * a * dt)


def bdf2_amplitudes(a, dt, nsteps):
    """Amplitudes of a decaying mode under BDF2 started with one CN step."""
    amps = [1.0, cn_factor(a, dt)]
    for _ in range(nsteps - 1):
        amps.append((4 * amps[-1] - amps[-2]) / (3 + 2 * a * dt))
    return amps[: nsteps + 1]
