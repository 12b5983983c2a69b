# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled no-go kernels: objective and simplex descent in C.

Same arithmetic and the same simplex steps as ``_kernels_py``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, fabs

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex conj(double complex)
    double creal(double complex)
    double cimag(double complex)


cdef inline void _su2(double a, double b, double g, double complex* out) noexcept nogil:
    cdef double complex ea = cexp(-0.5j * a)
    cdef double complex eg = cexp(-0.5j * g)
    cdef double c = cos(0.5 * b), s = sin(0.5 * b)
    out[0] = ea * eg * c
    out[1] = -ea / eg * s
    out[2] = eg / ea * s
    out[3] = c / (ea * eg)


cdef inline void _apply_ss(int j, double complex* v, double complex* w) noexcept nogil:
    # w = (sigma_j x sigma_j) v for one column v
    if j == 0:
        w[0] = v[3]; w[1] = v[2]; w[2] = v[1]; w[3] = v[0]
    elif j == 1:
        w[0] = -v[3]; w[1] = v[2]; w[2] = v[1]; w[3] = -v[0]
    else:
        w[0] = v[0]; w[1] = -v[1]; w[2] = -v[2]; w[3] = v[3]


cdef void _isometry(const double* x, double complex* K) noexcept nogil:
    """K[4*2]: row-major images of |00> and |10>."""
    cdef double complex C[4]
    cdef double complex D[4]
    cdef double complex A[4]
    cdef double complex B[4]
    cdef double complex cols[8]
    cdef double complex v[4]
    cdef double complex w[4]
    cdef double h, ch, sh
    cdef int s, p, i, j, a, b, a2, b2
    cdef double complex acc
    _su2(x[3], x[4], x[5], C)
    _su2(x[6], x[7], x[8], D)
    for s in range(2):
        for p in range(2):
            for i in range(2):
                cols[(2 * s + p) * 2 + i] = C[2 * s + i] * D[2 * p]
    for j in range(3):
        h = 0.5 * x[j]
        ch = cos(h)
        sh = sin(h)
        for i in range(2):
            for s in range(4):
                v[s] = cols[2 * s + i]
            _apply_ss(j, v, w)
            for s in range(4):
                cols[2 * s + i] = ch * v[s] + 1j * sh * w[s]
    _su2(x[9], x[10], x[11], A)
    _su2(x[12], x[13], x[14], B)
    for a in range(2):
        for b in range(2):
            for i in range(2):
                acc = 0
                for a2 in range(2):
                    for b2 in range(2):
                        acc = acc + A[2 * a + a2] * B[2 * b + b2] * cols[(2 * a2 + b2) * 2 + i]
                K[(2 * a + b) * 2 + i] = acc


cdef inline double _mean_errors(double complex* M, const double complex* X) noexcept nogil:
    cdef double complex d00 = M[0] - X[0]
    cdef double complex d01 = M[1] - X[1]
    cdef double complex d10 = M[2] - X[2]
    cdef double complex d11 = M[3] - X[3]
    cdef double t0 = 0.5 * creal(d00 + d11)
    cdef double t1 = 0.5 * (creal(d01) + creal(d10))
    cdef double t2 = 0.5 * (cimag(d10) - cimag(d01))
    cdef double t3 = 0.5 * creal(d00 - d11)
    return t0 * t0 + (t0 + t1) * (t0 + t1) + (t0 + t2) * (t0 + t2) + (t0 + t3) * (t0 + t3)


cdef double _objective(const double* x, const double complex* gens, int ngen) noexcept nogil:
    cdef double complex K[8]
    cdef double complex M1[4]
    cdef double complex M2[4]
    cdef const double complex* X
    cdef int g, i, j, s, t, p
    cdef double total = 0.0
    _isometry(x, K)
    for g in range(ngen):
        X = gens + 4 * g
        for i in range(2):
            for j in range(2):
                M1[2 * i + j] = 0
                M2[2 * i + j] = 0
                for s in range(2):
                    for t in range(2):
                        for p in range(2):
                            # K[s,p,i] lives at ((2s+p)*2 + i)
                            M1[2 * i + j] = M1[2 * i + j] + conj(K[(2 * s + p) * 2 + i]) * X[2 * s + t] * K[(2 * t + p) * 2 + j]
                            M2[2 * i + j] = M2[2 * i + j] + conj(K[(2 * p + s) * 2 + i]) * X[2 * s + t] * K[(2 * p + t) * 2 + j]
        total += _mean_errors(M1, X)
        total += _mean_errors(M2, X)
    return total


def _as_gens(gens):
    g = np.ascontiguousarray(gens, dtype=np.complex128)
    if g.ndim != 3 or g.shape[1:] != (2, 2):
        raise ValueError("generators must have shape (k, 2, 2)")
    return g


def nogo_objective(x, gens):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    if xv.shape[0] != 15:
        raise ValueError("expected 15 coordinates")
    cdef double complex[:, :, ::1] gv = _as_gens(gens)
    return _objective(&xv[0], &gv[0, 0, 0], gv.shape[0])


def isometry(x):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty((4, 2), dtype=np.complex128)
    cdef double complex[:, ::1] ov = out
    _isometry(&xv[0], &ov[0, 0])
    return out


def nelder_mead(x0, gens, double step=0.5, int maxiter=2000, double xtol=1e-9):
    cdef double[::1] start = np.ascontiguousarray(x0, dtype=np.float64)
    cdef int n = start.shape[0]
    if n != 15:
        raise ValueError("expected 15 coordinates")
    cdef double complex[:, :, ::1] gv = _as_gens(gens)
    cdef const double complex* G = &gv[0, 0, 0]
    cdef int ngen = gv.shape[0]

    cdef double rho = 1.0, chi = 1.0 + 2.0 / n
    cdef double psi = 0.75 - 0.5 / n, sigma = 1.0 - 1.0 / n

    sim_a = np.empty((n + 1, n))
    tmp_a = np.empty((n + 1, n))
    cdef double[:, ::1] sim = sim_a
    cdef double[:, ::1] tmp = tmp_a
    cdef double[::1] fsim = np.empty(n + 1)
    cdef double[::1] ftmp = np.empty(n + 1)
    cdef long[::1] order = np.empty(n + 1, dtype=np.int64)
    cdef double[::1] xbar = np.empty(n)
    cdef double[::1] xr = np.empty(n)
    cdef double[::1] xe = np.empty(n)
    cdef double[::1] xc = np.empty(n)
    cdef int i, j, k, it = 0
    cdef long nfev, key
    cdef double fr, fe, fc, fkey, diam, dv
    cdef bint shrink

    with nogil:
        for j in range(n + 1):
            for i in range(n):
                sim[j, i] = start[i]
            if j > 0:
                sim[j, j - 1] += step
            fsim[j] = _objective(&sim[j, 0], G, ngen)
        nfev = n + 1

        while True:
            # stable insertion sort of vertex indices by value
            for j in range(n + 1):
                order[j] = j
            for j in range(1, n + 1):
                key = order[j]
                fkey = fsim[key]
                k = j - 1
                while k >= 0 and fsim[order[k]] > fkey:
                    order[k + 1] = order[k]
                    k -= 1
                order[k + 1] = key
            for j in range(n + 1):
                ftmp[j] = fsim[order[j]]
                for i in range(n):
                    tmp[j, i] = sim[order[j], i]
            for j in range(n + 1):
                fsim[j] = ftmp[j]
                for i in range(n):
                    sim[j, i] = tmp[j, i]

            diam = 0.0
            for j in range(1, n + 1):
                for i in range(n):
                    dv = fabs(sim[j, i] - sim[0, i])
                    if dv > diam:
                        diam = dv
            if it >= maxiter or diam <= xtol:
                break
            it += 1

            for i in range(n):
                xbar[i] = 0.0
                for j in range(n):
                    xbar[i] += sim[j, i]
                xbar[i] = xbar[i] / n
            for i in range(n):
                xr[i] = (1 + rho) * xbar[i] - rho * sim[n, i]
            fr = _objective(&xr[0], G, ngen)
            nfev += 1
            shrink = False
            if fr < fsim[0]:
                for i in range(n):
                    xe[i] = (1 + rho * chi) * xbar[i] - rho * chi * sim[n, i]
                fe = _objective(&xe[0], G, ngen)
                nfev += 1
                if fe < fr:
                    for i in range(n):
                        sim[n, i] = xe[i]
                    fsim[n] = fe
                else:
                    for i in range(n):
                        sim[n, i] = xr[i]
                    fsim[n] = fr
            elif fr < fsim[n - 1]:
                for i in range(n):
                    sim[n, i] = xr[i]
                fsim[n] = fr
            elif fr < fsim[n]:
                for i in range(n):
                    xc[i] = (1 + psi * rho) * xbar[i] - psi * rho * sim[n, i]
                fc = _objective(&xc[0], G, ngen)
                nfev += 1
                if fc <= fr:
                    for i in range(n):
                        sim[n, i] = xc[i]
                    fsim[n] = fc
                else:
                    shrink = True
            else:
                for i in range(n):
                    xc[i] = (1 - psi) * xbar[i] + psi * sim[n, i]
                fc = _objective(&xc[0], G, ngen)
                nfev += 1
                if fc < fsim[n]:
                    for i in range(n):
                        sim[n, i] = xc[i]
                    fsim[n] = fc
                else:
                    shrink = True
            if shrink:
                for j in range(1, n + 1):
                    for i in range(n):
                        sim[j, i] = sim[0, i] + sigma * (sim[j, i] - sim[0, i])
                    fsim[j] = _objective(&sim[j, 0], G, ngen)
                nfev += n

    return np.asarray(sim[0]).copy(), float(fsim[0]), it, nfev
