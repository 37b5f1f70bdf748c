"""Pure numpy implementations of the hot kernels.

These mirror ``_kernels_c.pyx`` step for step and are used whenever the
compiled extension is unavailable (or ``RLPWIDTH_PURE_PYTHON=1`` is set).
"""
from __future__ import annotations

import numpy as np
from scipy.special import erfc

GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1

INV_SQRT_2PI = 0.3989422804014327
SQRT1_2 = 0.7071067811865476
TWO_PI = 6.283185307179586
TWO_M53 = 1.0 / 9007199254740992.0

# Above this argument the closed form loses more than ~u**4 ulps to
# cancellation, so the Hh-function continued fraction takes over.
CF_SWITCH = 4.0
CF_DEPTH = 64

_G = np.uint64(GAMMA)
_M1 = np.uint64(MIX1)
_M2 = np.uint64(MIX2)
_S30, _S27, _S31, _S11 = (np.uint64(k) for k in (30, 27, 31, 11))


def _mix64_array(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def splitmix_uint64(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """The SplitMix64 output sequence from state ``seed``, positions offset.. offset+count-1."""
    k = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + k * _G
        return _mix64_array(z)


def uniforms(seed: int, count: int, offset: int = 0) -> np.ndarray:
    bits = splitmix_uint64(seed, count, offset)
    return ((bits >> _S11).astype(np.float64) + 1.0) * TWO_M53


def normals(seed: int, count: int) -> np.ndarray:
    pairs = (count + 1) // 2
    u = uniforms(seed, 2 * pairs)
    u1 = u[0::2]
    u2 = u[1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    theta = TWO_PI * u2
    out = np.empty(2 * pairs)
    out[0::2] = r * np.cos(theta)
    out[1::2] = r * np.sin(theta)
    return out[:count]


def _cf_product(u):
    # r_k = Hh_k(u) / Hh_{k-1}(u) by backward recurrence; returns r0*r1*r2.
    r = np.zeros_like(u)
    for k in range(CF_DEPTH, 2, -1):
        r = 1.0 / (u + k * r)
    r1 = 1.0 / (u + 2.0 * r)
    r0 = 1.0 / (u + r1)
    return r0 * r1 * r


def tail_second_moment(u: np.ndarray, scaled: bool = False) -> np.ndarray:
    """E[max(g - u, 0)**2] for standard normal g, elementwise.

    With ``scaled=True`` the result is multiplied by exp(u**2 / 2), which keeps
    it representable for large positive u.
    """
    u = np.asarray(u, dtype=np.float64)
    out = np.empty_like(u)
    big = u >= CF_SWITCH
    small = ~big
    us = u[small]
    direct = 0.5 * (us * us + 1.0) * erfc(us * SQRT1_2) - us * np.exp(-0.5 * us * us) * INV_SQRT_2PI
    if scaled:
        direct = direct * np.exp(0.5 * us * us)
    out[small] = direct
    ub = u[big]
    if ub.size:
        prod = 2.0 * INV_SQRT_2PI * _cf_product(ub)
        out[big] = prod if scaled else prod * np.exp(-0.5 * ub * ub)
    return out
