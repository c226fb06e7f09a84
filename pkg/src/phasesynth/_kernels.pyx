# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels. Mirrors ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin
from libc.stdint cimport uint32_t, uint64_t

cnp.import_array()

cdef uint32_t M0 = 0xD2511F53u
cdef uint32_t M1 = 0xCD9E8D57u
cdef uint32_t W0 = 0x9E3779B9u
cdef uint32_t W1 = 0xBB67AE85u
cdef double INV_SQRT2 = 0.7071067811865476


cdef inline void _philox(uint32_t* c, uint32_t k0, uint32_t k1) nogil:
    cdef uint64_t p0, p1
    cdef uint32_t c0 = c[0], c1 = c[1], c2 = c[2], c3 = c[3]
    cdef int r
    for r in range(10):
        if r:
            k0 = k0 + W0
            k1 = k1 + W1
        p0 = <uint64_t>M0 * c0
        p1 = <uint64_t>M1 * c2
        c0 = <uint32_t>(p1 >> 32) ^ c1 ^ k0
        c1 = <uint32_t>p1
        c2 = <uint32_t>(p0 >> 32) ^ c3 ^ k1
        c3 = <uint32_t>p0
    c[0] = c0
    c[1] = c1
    c[2] = c2
    c[3] = c3


def philox4x32(ctr, key):
    cdef const uint64_t[:, :] cv = np.ascontiguousarray(ctr, dtype=np.uint64)
    k = np.asarray(key, dtype=np.uint64)
    cdef uint32_t k0 = <uint32_t>int(k[0]), k1 = <uint32_t>int(k[1])
    cdef Py_ssize_t m = cv.shape[0], i
    out = np.empty((m, 4), dtype=np.uint64)
    cdef uint64_t[:, :] ov = out
    cdef uint32_t c[4]
    for i in range(m):
        c[0] = <uint32_t>cv[i, 0]
        c[1] = <uint32_t>cv[i, 1]
        c[2] = <uint32_t>cv[i, 2]
        c[3] = <uint32_t>cv[i, 3]
        _philox(c, k0, k1)
        ov[i, 0] = c[0]
        ov[i, 1] = c[1]
        ov[i, 2] = c[2]
        ov[i, 3] = c[3]
    return out


def philox_uniforms(seed, stream, slots, draws):
    s, d = np.broadcast_arrays(np.asarray(slots, dtype=np.uint64),
                               np.asarray(draws, dtype=np.uint64))
    shape = s.shape
    cdef const uint64_t[::1] sv = np.ascontiguousarray(s.ravel())
    cdef const uint64_t[::1] dv = np.ascontiguousarray(d.ravel())
    cdef uint64_t key = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef uint32_t k0 = <uint32_t>key, k1 = <uint32_t>(key >> 32)
    cdef uint32_t st = <uint32_t>(int(stream) & 0xFFFFFFFF)
    cdef Py_ssize_t m = sv.shape[0], i
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] ov = out
    cdef uint32_t c[4]
    with nogil:
        for i in range(m):
            c[0] = <uint32_t>dv[i]
            c[1] = <uint32_t>(dv[i] >> 32)
            c[2] = <uint32_t>sv[i]
            c[3] = st
            _philox(c, k0, k1)
            ov[i] = (<double>(c[0] >> 5) * 67108864.0 + <double>(c[1] >> 6) + 0.5) \
                * (1.0 / 9007199254740992.0)
    return out.reshape(shape)


def inverse_cdf(u, grid, cdf):
    ua = np.asarray(u, dtype=np.float64)
    shape = ua.shape
    cdef const double[::1] uv = np.ascontiguousarray(ua.ravel())
    cdef const double[::1] gv = np.ascontiguousarray(grid, dtype=np.float64)
    cdef const double[::1] cv = np.ascontiguousarray(cdf, dtype=np.float64)
    cdef Py_ssize_t m = uv.shape[0], n = cv.shape[0], i, lo, hi, mid
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double x, c0, dc, x0, dx
    with nogil:
        for i in range(m):
            x = uv[i]
            # last index with cdf[lo] <= x, clipped to [0, n-2]
            lo = 0
            hi = n
            while lo < hi:
                mid = (lo + hi) >> 1
                if cv[mid] <= x:
                    lo = mid + 1
                else:
                    hi = mid
            lo = lo - 1
            if lo < 0:
                lo = 0
            elif lo > n - 2:
                lo = n - 2
            c0 = cv[lo]
            dc = cv[lo + 1] - c0
            x0 = gv[lo]
            dx = gv[lo + 1] - x0
            if dc <= 0.0:
                ov[i] = x0
            else:
                ov[i] = x0 + (x - c0) * (dx / dc)
    return out.reshape(shape)


cdef void _hadamard(double complex[::1] amps, int qubit) nogil:
    cdef Py_ssize_t s = (<Py_ssize_t>1) << qubit
    cdef Py_ssize_t dim = amps.shape[0], base, i
    cdef double complex a, b
    base = 0
    while base < dim:
        for i in range(base, base + s):
            a = amps[i]
            b = amps[i + s]
            amps[i] = (a + b) * INV_SQRT2
            amps[i + s] = (a - b) * INV_SQRT2
        base += 2 * s


def prepare_phase_state(phases, int n):
    cdef const double[::1] pv = np.ascontiguousarray(phases, dtype=np.float64)
    cdef Py_ssize_t npix = (<Py_ssize_t>1) << (2 * n), k
    amps = np.zeros(2 * npix, dtype=np.complex128)
    cdef double complex[::1] av = amps
    cdef int q, hadamards = 0
    cdef Py_ssize_t rotations = 0
    cdef double t
    av[0] = 1.0
    with nogil:
        for q in range(2 * n + 1):
            _hadamard(av, q)
            hadamards += 1
        for k in range(npix):
            t = pv[k]
            av[npix + k] = av[npix + k] * (cos(t) + 1j * sin(t))
            rotations += 1
    return amps, hadamards, rotations


def prepare_frqi_state(angles, int n):
    cdef const double[::1] bv = np.ascontiguousarray(angles, dtype=np.float64)
    cdef Py_ssize_t npix = (<Py_ssize_t>1) << (2 * n), k
    amps = np.zeros(2 * npix, dtype=np.complex128)
    cdef double complex[::1] av = amps
    cdef int q, hadamards = 0
    cdef Py_ssize_t rotations = 0
    cdef double c, s
    cdef double complex a, b
    av[0] = 1.0
    with nogil:
        for q in range(2 * n):
            _hadamard(av, q)
            hadamards += 1
        for k in range(npix):
            c = cos(bv[k])
            s = sin(bv[k])
            a = av[k]
            b = av[npix + k]
            av[k] = c * a - s * b
            av[npix + k] = s * a + c * b
            rotations += 1
    return amps, hadamards, rotations
