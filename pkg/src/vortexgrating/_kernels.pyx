# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: RK4 stepping, Bessel series, per-cell grating orders.

Signatures and semantics mirror :mod:`vortexgrating._kernels_py`.
"""
import numpy as np

from libc.math cimport M_PI, NAN, cos, exp, fabs, hypot, isnan, sin

cdef enum:
    MAX_ORDERS = 64

cdef double SERIES_RADIUS = 12.0
cdef double SERIES_EPS = 1e-16
cdef int SERIES_MAX_TERMS = 1000

BACKEND = "cython"


cdef inline double cabs_(double complex z) noexcept nogil:
    return hypot(z.real, z.imag)


cdef inline void matmul4(double complex a[4][4], double complex b[4][4],
                         double complex out[4][4]) noexcept nogil:
    cdef int i, j
    for i in range(4):
        for j in range(4):
            out[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]
                         + a[i][2] * b[2][j] + a[i][3] * b[3][j])


cdef inline void copy4(double complex src[4][4], double complex dst[4][4]) noexcept nogil:
    cdef int i, j
    for i in range(4):
        for j in range(4):
            dst[i][j] = src[i][j]


def rk4_propagate(const double complex[:, ::1] gen, const double complex[::1] state,
                  double h, Py_ssize_t nsteps):
    """Advance ``a' = gen @ a`` by ``nsteps`` classical RK4 steps of size ``h``.

    For a linear system one RK4 step is multiplication by the degree-4 Taylor
    polynomial of ``h gen``; the step matrix is raised to ``nsteps`` by
    repeated squaring.
    """
    if gen.shape[0] != 4 or gen.shape[1] != 4 or state.shape[0] != 4:
        raise ValueError("rk4_propagate expects a 4x4 generator and a length-4 state")
    if nsteps < 0:
        raise ValueError("nsteps must be >= 0")
    cdef double complex hg[4][4]
    cdef double complex term[4][4]
    cdef double complex step[4][4]
    cdef double complex acc[4][4]
    cdef double complex tmp[4][4]
    cdef double complex out[4]
    cdef Py_ssize_t left = nsteps
    cdef int i, j, k
    for i in range(4):
        for j in range(4):
            hg[i][j] = h * gen[i, j]
            term[i][j] = 1.0 if i == j else 0.0
            step[i][j] = term[i][j]
            acc[i][j] = term[i][j]
    with nogil:
        for k in range(1, 5):
            matmul4(term, hg, tmp)
            for i in range(4):
                for j in range(4):
                    term[i][j] = tmp[i][j] / k
                    step[i][j] = step[i][j] + term[i][j]
        while left > 0:
            if left & 1:
                matmul4(acc, step, tmp)
                copy4(tmp, acc)
            left >>= 1
            if left:
                matmul4(step, step, tmp)
                copy4(tmp, step)
        for i in range(4):
            out[i] = (acc[i][0] * state[0] + acc[i][1] * state[1]
                      + acc[i][2] * state[2] + acc[i][3] * state[3])
    return np.array([out[0], out[1], out[2], out[3]], dtype=np.complex128)


cdef double complex _jseries(int n, double complex z) noexcept nogil:
    cdef double complex half = 0.5 * z
    cdef double complex term = 1.0
    cdef double complex q = -half * half
    cdef double complex total
    cdef double complex nxt
    cdef int k
    for k in range(1, n + 1):
        term = term * half / k
    total = term
    for k in range(1, SERIES_MAX_TERMS):
        nxt = term * q / (k * (n + k))
        if cabs_(nxt) < SERIES_EPS * (cabs_(total) + 1e-30):
            break
        total = total + nxt
        term = nxt
    return total


def bessel_series(int n, double complex z):
    """Ascending power series for J_n(z), n >= 0, no range guard."""
    if n < 0:
        raise ValueError("order must be non-negative")
    return _jseries(n, z)


cdef void _scaled_orders(double complex z, int nmax, double complex *out) noexcept nogil:
    # exp(-|Im z|) * J_n(z) for n = 0..nmax
    cdef double az = cabs_(z)
    cdef double scale, mag, arg, s, c, s1, c1, tmp, weight
    cdef double complex w, ph, step
    cdef int n, j, nodes, quarter
    if az <= SERIES_RADIUS:
        scale = exp(-fabs(z.imag))
        for n in range(nmax + 1):
            out[n] = _jseries(n, z) * scale
        return
    # trapezoid on (1/2pi) int exp(i z sin t - i n t) dt with a multiple of 4
    # nodes; t and pi - t share sin t, so only t in [-pi/2, pi/2] is visited
    nodes = <int>(1.1 * az) + nmax + 48
    nodes += (4 - nodes % 4) % 4
    quarter = nodes // 4
    for n in range(nmax + 1):
        out[n] = 0.0
    s1 = sin(2.0 * M_PI / nodes)
    c1 = cos(2.0 * M_PI / nodes)
    for j in range(-quarter, quarter + 1):
        if (j + quarter) % 32 == 0:
            # reseed the rotation recurrence against drift
            s = sin(2.0 * M_PI * j / nodes)
            c = cos(2.0 * M_PI * j / nodes)
        mag = exp(-z.imag * s - fabs(z.imag))
        arg = z.real * s
        w = mag * cos(arg) + 1j * (mag * sin(arg))
        step = c - 1j * s
        ph = 1.0
        weight = 1.0 if (j == quarter or j == -quarter) else 2.0
        for n in range(nmax + 1):
            # e^{-in t} + (-1)^n e^{in t}, halved at the self-paired ends
            if n % 2 == 0:
                out[n] = out[n] + w * (weight * ph.real)
            else:
                out[n] = out[n] + w * (1j * weight * ph.imag)
            ph = ph * step
        tmp = s * c1 + c * s1
        c = c * c1 - s * s1
        s = tmp
    for n in range(nmax + 1):
        out[n] = out[n] / nodes


def scaled_bessel_orders(double complex z, int max_order):
    """``exp(-|Im z|) J_n(z)`` for n = 0..max_order (series or trapezoid)."""
    if max_order < 0 or max_order >= MAX_ORDERS:
        raise ValueError(f"max_order must lie in [0, {MAX_ORDERS - 1}]")
    cdef double complex buf[MAX_ORDERS]
    _scaled_orders(z, max_order, buf)
    return np.array([buf[n] for n in range(max_order + 1)], dtype=np.complex128)


def grating_intensities(const double complex[::1] chi1, const double complex[::1] chi3,
                        double length, double omega_c0_sq, int max_order):
    """Order intensities |Pi J_n|^2 per cell; rows are cells, columns orders."""
    if max_order < 0 or max_order >= MAX_ORDERS:
        raise ValueError(f"max_order must lie in [0, {MAX_ORDERS - 1}]")
    if chi1.shape[0] != chi3.shape[0]:
        raise ValueError("chi1 and chi3 must have equal length")
    cdef Py_ssize_t ncell = chi1.shape[0]
    out_arr = np.empty((ncell, max_order + 1), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double complex buf[MAX_ORDERS]
    cdef double complex z
    cdef double gain
    cdef Py_ssize_t c
    cdef int n
    with nogil:
        for c in range(ncell):
            if (isnan(chi1[c].real) or isnan(chi1[c].imag)
                    or isnan(chi3[c].real) or isnan(chi3[c].imag)):
                for n in range(max_order + 1):
                    out[c, n] = NAN
                continue
            z = -0.5 * length * omega_c0_sq * chi3[c]
            _scaled_orders(z, max_order, buf)
            gain = exp(2.0 * (-length * chi1[c].imag + z.imag + fabs(z.imag)))
            for n in range(max_order + 1):
                out[c, n] = gain * (buf[n].real * buf[n].real + buf[n].imag * buf[n].imag)
    return out_arr
