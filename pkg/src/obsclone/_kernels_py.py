"""Pure-Python no-go kernels (fallback for the compiled ``_kernels``)."""
import cmath
import math

import numpy as np

_SIGMA = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)
_SS = np.array([np.kron(s, s) for s in _SIGMA])


def _su2(a, b, g):
    ea, eg = cmath.exp(-0.5j * a), cmath.exp(-0.5j * g)
    c, s = math.cos(0.5 * b), math.sin(0.5 * b)
    return np.array([[ea * eg * c, -ea / eg * s], [eg / ea * s, c / (ea * eg)]])


def isometry(x):
    """Columns of the 15-coordinate SU(4) element acting on |00> and |10>, shape (4, 2)."""
    d0 = _su2(x[6], x[7], x[8])[:, 0]
    cols = np.kron(_su2(x[3], x[4], x[5]), d0[:, None])
    for j in range(3):
        h = 0.5 * x[j]
        cols = math.cos(h) * cols + 1j * math.sin(h) * (_SS[j] @ cols)
    return np.kron(_su2(x[9], x[10], x[11]), _su2(x[12], x[13], x[14])) @ cols


def nogo_objective(x, gens):
    """Sum over fiducial states and generators of the squared clone-mean errors.

    Fiducial states are the maximally mixed state and the +1 eigenstates of
    sigma_1, sigma_2, sigma_3. The probe is |0><0|, so only the images of
    |00> and |10> enter.
    """
    K = isometry(x).reshape(2, 2, 2)
    Kc = K.conj()
    total = 0.0
    for X in gens:
        M1 = np.einsum("spi,st,tpj->ij", Kc, X, K)
        M2 = np.einsum("psi,st,ptj->ij", Kc, X, K)
        for M in (M1, M2):
            # mean error on rho = (I + s.sigma)/2 is t0 + s.t
            d = M - X
            t0 = 0.5 * (d[0, 0] + d[1, 1]).real
            t1 = 0.5 * (d[0, 1].real + d[1, 0].real)
            t2 = 0.5 * (d[1, 0].imag - d[0, 1].imag)
            t3 = 0.5 * (d[0, 0] - d[1, 1]).real
            total += t0 * t0 + (t0 + t1) ** 2 + (t0 + t2) ** 2 + (t0 + t3) ** 2
    return float(total)


def nelder_mead(x0, gens, step=0.5, maxiter=2000, xtol=1e-9):
    """Adaptive-coefficient simplex descent on :func:`nogo_objective`.

    Returns ``(x_best, f_best, iterations, evaluations)``.
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    rho, chi, psi, sigma = 1.0, 1.0 + 2.0 / n, 0.75 - 0.5 / n, 1.0 - 1.0 / n

    sim = np.empty((n + 1, n))
    sim[0] = x0
    for k in range(n):
        sim[k + 1] = x0
        sim[k + 1, k] += step
    fsim = np.array([nogo_objective(v, gens) for v in sim])
    nfev = n + 1

    it = 0
    while True:
        order = np.argsort(fsim, kind="stable")
        sim, fsim = sim[order], fsim[order]
        if it >= maxiter or np.max(np.abs(sim[1:] - sim[0])) <= xtol:
            break
        it += 1

        xbar = sim[:-1].sum(axis=0) / n
        xr = (1 + rho) * xbar - rho * sim[-1]
        fr = nogo_objective(xr, gens)
        nfev += 1
        shrink = False
        if fr < fsim[0]:
            xe = (1 + rho * chi) * xbar - rho * chi * sim[-1]
            fe = nogo_objective(xe, gens)
            nfev += 1
            if fe < fr:
                sim[-1], fsim[-1] = xe, fe
            else:
                sim[-1], fsim[-1] = xr, fr
        elif fr < fsim[-2]:
            sim[-1], fsim[-1] = xr, fr
        elif fr < fsim[-1]:
            xc = (1 + psi * rho) * xbar - psi * rho * sim[-1]
            fc = nogo_objective(xc, gens)
            nfev += 1
            if fc <= fr:
                sim[-1], fsim[-1] = xc, fc
            else:
                shrink = True
        else:
            xcc = (1 - psi) * xbar + psi * sim[-1]
            fcc = nogo_objective(xcc, gens)
            nfev += 1
            if fcc < fsim[-1]:
                sim[-1], fsim[-1] = xcc, fcc
            else:
                shrink = True
        if shrink:
            for j in range(1, n + 1):
                sim[j] = sim[0] + sigma * (sim[j] - sim[0])
                fsim[j] = nogo_objective(sim[j], gens)
            nfev += n
    return sim[0].copy(), float(fsim[0]), it, nfev
