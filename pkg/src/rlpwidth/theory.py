"""Closed-form asymptotics of Gaussian random LPs.

For ``min c^T x`` subject to ``A x <= a`` with ``A`` an ``m x n`` standard
Gaussian matrix and ``||c||_2 = sqrt(n)``, the normalized optimum
``(1/sqrt(n)) min c^T x`` concentrates at ``-xi_opt`` where

    xi_opt = sqrt(q(x*)),   q(x) = x**2 - f1(x)**2,
    f1(x)  = x * sqrt((1/n) * sum_i T(a_i / x)),
    T(u)   = E[max(g - u, 0)**2],   g ~ N(0, 1),

and ``x*`` is the interior stationary point of ``q`` (its maximum on the
interval where ``q > 0``).  Twice ``xi_opt`` is the concentration point of
the mean width of ``{x : A x <= a}`` when ``a = 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from . import kernels
from .errors import ConvergenceError, DomainError, NoFeasibleScaleError, ParameterError
from .specfun import DEFAULT_ORDER, gauss_hermite_rule

GRID_POINTS = 64
GRID_DECADES = 6.0
DEFAULT_TOL = 1e-10
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


# --------------------------------------------------------------------------
# right-hand-side models


def _finite(value: float, what: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ParameterError(f"{what} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ConstantRhs:
    """Every component of ``a`` equals ``value``."""

    value: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "value", _finite(self.value, "constant rhs"))

    def mean_term(self, x: float, alpha: float) -> float:
        return alpha * float(kernels.tail_second_moment(np.array([self.value / x]))[0])

    def scale(self) -> float:
        return abs(self.value)

    def scaled(self, gamma: float) -> "ConstantRhs":
        return ConstantRhs(gamma * self.value)


@dataclass(frozen=True)
class VectorRhs:
    """An explicit m-vector ``a`` with normalization count ``n`` (so alpha = m/n)."""

    values: tuple
    n: int

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if vals.size == 0:
            raise ParameterError("vector rhs must have at least one entry")
        if not np.all(np.isfinite(vals)):
            raise ParameterError("vector rhs entries must be finite")
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"vector rhs needs n >= 1, got {self.n!r}")
        object.__setattr__(self, "values", tuple(float(v) for v in vals))
        object.__setattr__(self, "n", int(self.n))

    @property
    def m(self) -> int:
        return len(self.values)

    @property
    def alpha(self) -> float:
        return self.m / self.n

    def mean_term(self, x: float, alpha: float) -> float:
        terms = kernels.tail_second_moment(np.asarray(self.values) / x)
        return float(math.fsum(terms)) / self.n

    def scale(self) -> float:
        return float(np.sqrt(np.mean(np.square(self.values))))

    def scaled(self, gamma: float) -> "VectorRhs":
        return VectorRhs(tuple(gamma * v for v in self.values), self.n)


@dataclass(frozen=True)
class AtomsRhs:
    """iid components drawn from a finite discrete law."""

    values: tuple
    probs: tuple

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64).reshape(-1)
        probs = np.asarray(self.probs, dtype=np.float64).reshape(-1)
        if vals.size == 0 or vals.shape != probs.shape:
            raise ParameterError("atoms need matching, non-empty values and probabilities")
        if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(probs))):
            raise ParameterError("atoms must be finite")
        if np.any(probs < 0) or abs(math.fsum(probs) - 1.0) > 1e-12:
            raise ParameterError("atom probabilities must be nonnegative and sum to 1 (within 1e-12)")
        object.__setattr__(self, "values", tuple(float(v) for v in vals))
        object.__setattr__(self, "probs", tuple(float(p) for p in probs))

    def mean_term(self, x: float, alpha: float) -> float:
        terms = kernels.tail_second_moment(np.asarray(self.values) / x)
        return alpha * float(np.dot(self.probs, terms))

    def scale(self) -> float:
        return float(np.sqrt(np.dot(self.probs, np.square(self.values))))

    def scaled(self, gamma: float) -> "AtomsRhs":
        return AtomsRhs(tuple(gamma * v for v in self.values), self.probs)


@dataclass(frozen=True)
class GaussianRhs:
    """iid components ``a_i ~ N(mean, std**2)``; expectations by Gauss-Hermite."""

    mean: float
    std: float
    order: int = DEFAULT_ORDER
    _rule: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "mean", _finite(self.mean, "gaussian rhs mean"))
        object.__setattr__(self, "std", _finite(self.std, "gaussian rhs std"))
        if self.std < 0:
            raise ParameterError(f"gaussian rhs std must be >= 0, got {self.std}")
        object.__setattr__(self, "_rule", gauss_hermite_rule(self.order))

    def mean_term(self, x: float, alpha: float) -> float:
        rule = self._rule
        terms = kernels.tail_second_moment((self.mean + self.std * rule.nodes) / x)
        return alpha * float(np.dot(rule.weights, terms))

    def scale(self) -> float:
        return math.hypot(self.mean, self.std)

    def scaled(self, gamma: float) -> "GaussianRhs":
        return GaussianRhs(gamma * self.mean, abs(gamma) * self.std, self.order)


RhsModel = Union[ConstantRhs, VectorRhs, AtomsRhs, GaussianRhs]


# --------------------------------------------------------------------------
# pointwise quantities


def _check_x(x: float) -> float:
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise ParameterError(f"x must be positive and finite, got {x!r}")
    return x


def per_constraint_term(x: float, a_i: float) -> float:
    """T(a_i / x) = E[max(g - a_i/x, 0)**2]; underflows to 0 past a_i/x ~ 37.5."""
    x = _check_x(x)
    a_i = _finite(a_i, "a_i")
    return float(kernels.tail_second_moment(np.array([a_i / x]))[0])


def per_constraint_term_scaled(u: float) -> float:
    """exp(u**2 / 2) * T(u), representable for every finite u >= 0."""
    u = _finite(u, "u")
    return float(kernels.tail_second_moment(np.array([u]), scaled=True)[0])


def _effective_alpha(rhs: RhsModel, alpha: float | None) -> float:
    if isinstance(rhs, VectorRhs):
        return rhs.alpha
    if alpha is None or not float(alpha) > 0 or not math.isfinite(alpha):
        raise ParameterError(f"alpha must be positive and finite, got {alpha!r}")
    return float(alpha)


def f1(x: float, rhs: RhsModel, alpha: float | None = None) -> float:
    x = _check_x(x)
    alpha = _effective_alpha(rhs, alpha)
    return x * math.sqrt(rhs.mean_term(x, alpha))


def q(x: float, rhs: RhsModel, alpha: float | None = None) -> float:
    """x**2 - f1(x)**2; negative values mark scales outside the feasible domain."""
    x = _check_x(x)
    alpha = _effective_alpha(rhs, alpha)
    return x * x * (1.0 - rhs.mean_term(x, alpha))


def lambda_hat(x: float, rhs: RhsModel, alpha: float | None = None) -> float:
    """Optimal dual norm scale f1 / sqrt(x**2 - f1**2) at fixed x."""
    val = f1(x, rhs, alpha)
    qq = x * x - val * val
    if not qq > 0:
        raise DomainError(f"dual scalar diverges: q({x!r}) = {qq!r} <= 0")
    return val / math.sqrt(qq)


# --------------------------------------------------------------------------
# extremization


@dataclass(frozen=True)
class TheoryResult:
    xi_opt: float
    x_star: float
    lambda_hat: float
    x_max: float
    alpha: float
    f1_star: float = float("nan")
    q_star: float = float("nan")

    @property
    def mean_width(self) -> float:
        return 2.0 * self.xi_opt

    def as_dict(self) -> dict:
        return {
            "xi_opt": self.xi_opt,
            "x_star": self.x_star,
            "lambda_hat": self.lambda_hat,
            "x_max": None if math.isinf(self.x_max) else self.x_max,
            "alpha": self.alpha,
            "mean_width": self.mean_width,
        }


def golden_section_max(func: Callable[[float], float], lo: float, hi: float, tol: float,
                       max_iter: int = 500) -> tuple[float, float]:
    """Maximize a unimodal ``func`` on ``[lo, hi]`` until the bracket is narrower than ``tol``."""
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1_, f2_ = func(x1), func(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1_ >= f2_:
            hi, x2, f2_ = x2, x1, f1_
            x1 = hi - _INVPHI * (hi - lo)
            f1_ = func(x1)
        else:
            lo, x1, f1_ = x1, x2, f2_
            x2 = lo + _INVPHI * (hi - lo)
            f2_ = func(x2)
    else:
        raise ConvergenceError("golden section did not reach the requested tolerance",
                               {"lo": lo, "hi": hi, "tol": tol})
    return (x1, f1_) if f1_ >= f2_ else (x2, f2_)


def _bisect_root(func: Callable[[float], float], pos: float, neg: float) -> float:
    # func(pos) > 0 >= func(neg); returns the boundary point on the positive side.
    for _ in range(200):
        mid = 0.5 * (pos + neg)
        if mid == pos or mid == neg:
            break
        if func(mid) > 0:
            pos = mid
        else:
            neg = mid
    return pos


def solve_xi(rhs: RhsModel, alpha: float | None = None, tol: float = DEFAULT_TOL) -> TheoryResult:
    """Locate the interior maximum of q and return xi_opt = sqrt(q(x*))."""
    alpha = _effective_alpha(rhs, alpha)
    if not (0 < tol <= 1e-4):
        raise ParameterError(f"tol must lie in (0, 1e-4], got {tol!r}")

    scale = rhs.scale() or 1.0
    grid = scale * np.logspace(-GRID_DECADES, GRID_DECADES, GRID_POINTS)

    def qfun(x: float) -> float:
        return x * x * (1.0 - rhs.mean_term(x, alpha))

    qv = np.array([qfun(x) for x in grid])
    diag = {"alpha": alpha, "grid_min": float(grid[0]), "grid_max": float(grid[-1]),
            "q_max_on_grid": float(qv.max())}
    if not np.any(qv > 0):
        raise NoFeasibleScaleError(
            f"no feasible scale: q(x) <= 0 at all {GRID_POINTS} probed x in "
            f"[{grid[0]:.3g}, {grid[-1]:.3g}] (alpha={alpha})")

    best = int(np.argmax(qv))
    if best in (0, GRID_POINTS - 1):
        raise ConvergenceError(
            f"q has no interior maximum on [{grid[0]:.3g}, {grid[-1]:.3g}]; it peaks at the "
            f"{'upper' if best else 'lower'} end (the LP objective is unbounded for this "
            f"alpha/rhs, e.g. alpha <= 2 with a = 1)", dict(diag, peak_index=best))

    threshold = (1.0 - 1e-6) * qv[best]
    peaks = [i for i in range(1, GRID_POINTS - 1)
             if qv[i] >= qv[i - 1] and qv[i] >= qv[i + 1] and qv[i] > 0 and qv[i] >= threshold]
    if any(j - i > 1 for i, j in zip(peaks, peaks[1:])):
        raise ConvergenceError("q has several separated near-maximal local maxima",
                               dict(diag, peaks=[float(grid[i]) for i in peaks]))

    x_max = math.inf
    beyond = np.nonzero(qv[best:] <= 0)[0]
    if beyond.size:
        k = best + int(beyond[0])
        x_max = _bisect_root(qfun, float(grid[k - 1]), float(grid[k]))

    lo = float(grid[best - 1])
    hi = min(float(grid[best + 1]), x_max)
    x_star, q_star = golden_section_max(qfun, lo, hi, tol)
    if not q_star > 0:
        raise NoFeasibleScaleError(f"q(x*) = {q_star!r} <= 0 at x* = {x_star!r}")

    f1_star = x_star * math.sqrt(rhs.mean_term(x_star, alpha))
    xi = math.sqrt(q_star)
    return TheoryResult(xi_opt=xi, x_star=x_star, lambda_hat=f1_star / xi, x_max=x_max,
                        alpha=alpha, f1_star=f1_star, q_star=q_star)


def mean_width(rhs: RhsModel, alpha: float | None = None, tol: float = DEFAULT_TOL) -> float:
    return 2.0 * solve_xi(rhs, alpha, tol).xi_opt


def xi_asymptote(alpha: float) -> float:
    """Large-alpha approximation 1 / sqrt(2 log alpha)."""
    alpha = float(alpha)
    if not alpha > 1 or not math.isfinite(alpha):
        raise ParameterError(f"asymptote needs alpha > 1, got {alpha!r}")
    return 1.0 / math.sqrt(2.0 * math.log(alpha))
