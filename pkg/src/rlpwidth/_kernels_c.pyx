# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: counter-based normals and the Gaussian tail moment.

Same algorithms as ``_kernels_py``; outputs agree to a few ulps (libm vs numpy
transcendentals), integer streams agree exactly.
"""
import numpy as np

from libc.math cimport cos, erfc, exp, log, sin, sqrt
from libc.stdint cimport uint64_t

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX2 = 0x94D049BB133111EBULL

cdef double INV_SQRT_2PI = 0.3989422804014327
cdef double SQRT1_2 = 0.7071067811865476
cdef double TWO_PI = 6.283185307179586
cdef double TWO_M53 = 1.0 / 9007199254740992.0
cdef double CF_SWITCH = 4.0
cdef int CF_DEPTH = 64


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline double to_unit(uint64_t bits) noexcept nogil:
    return (<double>(bits >> 11) + 1.0) * TWO_M53


def splitmix_uint64(seed, Py_ssize_t count, Py_ssize_t offset=0):
    out = np.empty(count, dtype=np.uint64)
    cdef uint64_t[::1] view = out
    cdef uint64_t s = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t i
    with nogil:
        for i in range(count):
            view[i] = mix64(s + <uint64_t>(offset + i + 1) * GAMMA)
    return out


def uniforms(seed, Py_ssize_t count, Py_ssize_t offset=0):
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] view = out
    cdef uint64_t s = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t i
    with nogil:
        for i in range(count):
            view[i] = to_unit(mix64(s + <uint64_t>(offset + i + 1) * GAMMA))
    return out


def normals(seed, Py_ssize_t count):
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] view = out
    cdef uint64_t s = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t j, pairs = (count + 1) // 2
    cdef double u1, u2, r, theta
    with nogil:
        for j in range(pairs):
            u1 = to_unit(mix64(s + <uint64_t>(2 * j + 1) * GAMMA))
            u2 = to_unit(mix64(s + <uint64_t>(2 * j + 2) * GAMMA))
            r = sqrt(-2.0 * log(u1))
            theta = TWO_PI * u2
            view[2 * j] = r * cos(theta)
            if 2 * j + 1 < count:
                view[2 * j + 1] = r * sin(theta)
    return out


cdef inline double direct_moment(double u, bint scaled) noexcept nogil:
    cdef double val = 0.5 * (u * u + 1.0) * erfc(u * SQRT1_2) - u * exp(-0.5 * u * u) * INV_SQRT_2PI
    if scaled:
        val = val * exp(0.5 * u * u)
    return val


cdef enum:
    BLOCK = 8


cdef void cf_block(const double* u, double* out, int width, bint scaled) noexcept nogil:
    # the recurrence is a chain of dependent divisions; running BLOCK
    # independent chains side by side hides the division latency
    cdef double r[BLOCK]
    cdef double r0, r1
    cdef int j, k
    for j in range(width):
        r[j] = 0.0
    for k in range(CF_DEPTH, 2, -1):
        for j in range(width):
            r[j] = 1.0 / (u[j] + k * r[j])
    for j in range(width):
        r1 = 1.0 / (u[j] + 2.0 * r[j])
        r0 = 1.0 / (u[j] + r1)
        out[j] = 2.0 * INV_SQRT_2PI * (r0 * r1 * r[j])
        if not scaled:
            out[j] = out[j] * exp(-0.5 * u[j] * u[j])


def tail_second_moment(u, bint scaled=False):
    arr = np.ascontiguousarray(u, dtype=np.float64)
    out = np.empty_like(arr)
    cdef const double[::1] src = arr.reshape(-1)
    cdef double[::1] dst = out.reshape(-1)
    cdef Py_ssize_t i, n = src.shape[0]
    cdef Py_ssize_t idx[BLOCK]
    cdef double ub[BLOCK]
    cdef double vals[BLOCK]
    cdef int j, fill = 0
    with nogil:
        for i in range(n):
            if src[i] < CF_SWITCH:
                dst[i] = direct_moment(src[i], scaled)
                continue
            idx[fill] = i
            ub[fill] = src[i]
            fill += 1
            if fill == BLOCK:
                cf_block(ub, vals, fill, scaled)
                for j in range(fill):
                    dst[idx[j]] = vals[j]
                fill = 0
        if fill:
            cf_block(ub, vals, fill, scaled)
            for j in range(fill):
                dst[idx[j]] = vals[j]
    return out
