"""Dense LP solving for ``min c^T x  s.t.  A x <= a`` with free ``x``.

The primal is solved through its dual in standard form

    min a^T lam   s.t.  A^T lam = -c,  lam >= 0        (n rows, m columns)

by a two-phase revised simplex with an explicit n x n basis inverse.  At the
optimum the simplex multipliers of the dual are exactly the primal solution,
and the basic rows of ``A`` are the active constraints at ``x*``.  This shape
suits the random-LP regime m >> n: the basis stays small while pricing is one
m x n matrix-vector product per pivot.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .errors import ParameterError

PIVOT_TOL = 1e-10
REFACTOR_EVERY = 50
MAX_CONDITION = 1e14

# certificate tolerances
FEAS_TOL = 1e-8
STAT_TOL = 1e-8
GAP_TOL = 1e-7
SLACK_TOL = 1e-7
DUAL_SIGN_TOL = 1e-12


class LpStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"
    NUMERICAL_FAILURE = "numerical_failure"


@dataclass(frozen=True)
class LpInstance:
    A: np.ndarray
    a: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        A = np.ascontiguousarray(np.asarray(self.A, dtype=np.float64))
        a = np.ascontiguousarray(np.asarray(self.a, dtype=np.float64).reshape(-1))
        c = np.ascontiguousarray(np.asarray(self.c, dtype=np.float64).reshape(-1))
        if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
            raise ParameterError(f"A must be a non-empty 2-D matrix, got shape {A.shape}")
        if a.shape != (A.shape[0],) or c.shape != (A.shape[1],):
            raise ParameterError(f"inconsistent dimensions: A {A.shape}, a {a.shape}, c {c.shape}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(a)) and np.all(np.isfinite(c))):
            raise ParameterError("LP data must be finite")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c", c)

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]


@dataclass
class LpSolution:
    status: LpStatus
    objective: float = math.nan
    x_star: np.ndarray = field(default_factory=lambda: np.empty(0))
    lambda_star: np.ndarray = field(default_factory=lambda: np.empty(0))
    iterations: int = 0
    message: str = ""

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


def certificate_violations(inst: LpInstance, sol: LpSolution) -> list[str]:
    """Empty list when x*, lambda* certify optimality; otherwise a description per failed check."""
    A, a, c = inst.A, inst.a, inst.c
    x, lam = sol.x_star, sol.lambda_star
    if x.shape != (inst.n,) or lam.shape != (inst.m,):
        return ["certificate vectors have the wrong shape"]
    problems = []
    slack = a - A @ x
    feas = FEAS_TOL * (1.0 + np.abs(a).max())
    if slack.min() < -feas:
        problems.append(f"primal infeasibility {-slack.min():.3e} > {feas:.3e}")
    cnorm = np.linalg.norm(c)
    stat = np.linalg.norm(A.T @ lam + c)
    if stat > STAT_TOL * cnorm + 1e-14:
        problems.append(f"dual residual |A^T lam + c| = {stat:.3e}")
    if lam.min() < -DUAL_SIGN_TOL:
        problems.append(f"negative multiplier {lam.min():.3e}")
    primal = float(c @ x)
    gap = abs(primal + float(a @ lam))
    if gap > GAP_TOL * (1.0 + abs(primal)):
        problems.append(f"duality gap {gap:.3e}")
    comp = float((lam * slack).max())
    if comp > SLACK_TOL:
        problems.append(f"complementary slackness violation {comp:.3e}")
    return problems


class _NumericalTrouble(Exception):
    pass


class DualSimplex:
    """Revised simplex working on the dual of ``min c^T x, A x <= a``.

    An instance owns its workspace and is not thread-safe; create one per
    thread (``solve_lp`` does this for you).
    """

    def __init__(self, pivot_tol: float = PIVOT_TOL, refactor_every: int = REFACTOR_EVERY,
                 max_condition: float = MAX_CONDITION, max_iter: int | None = None):
        self.pivot_tol = pivot_tol
        self.refactor_every = refactor_every
        self.max_condition = max_condition
        self.max_iter = max_iter

    # -- basis bookkeeping -------------------------------------------------

    def _column(self, j: int) -> np.ndarray:
        if j < self.m:
            return self.sign * self.A[j]
        col = np.zeros(self.n)
        col[j - self.m] = 1.0
        return col

    def _refactor(self):
        B = np.column_stack([self._column(j) for j in self.basis])
        try:
            Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise _NumericalTrouble("singular basis") from exc
        cond = np.linalg.norm(B, 1) * np.linalg.norm(Binv, 1)
        if not cond <= self.max_condition:
            raise _NumericalTrouble(f"basis condition estimate {cond:.3e} exceeds {self.max_condition:.0e}")
        self.Binv = Binv
        beta = Binv @ self.b
        beta[(beta < 0) & (beta > -1e-9 * (1.0 + self.bscale))] = 0.0
        self.beta = beta
        self.since_refactor = 0

    def _pivot(self, row: int, j: int, w: np.ndarray, theta: float):
        self.beta -= theta * w
        self.beta[row] = theta
        prow = self.Binv[row] / w[row]
        self.Binv -= np.outer(w, prow)
        self.Binv[row] = prow
        old = self.basis[row]
        if old < self.m:
            self.in_basis[old] = False
        self.basis[row] = j
        self.in_basis[j] = True
        self.iterations += 1
        self.since_refactor += 1
        if self.since_refactor >= self.refactor_every:
            self._refactor()

    def _basic_costs(self, cost: np.ndarray, art_cost: float) -> np.ndarray:
        return np.array([cost[j] if j < self.m else art_cost for j in self.basis])

    # -- simplex phases ----------------------------------------------------

    def _run_phase(self, cost: np.ndarray, art_cost: float) -> str:
        m = self.m
        opt_tol = 1e-9 * (1.0 + float(np.abs(cost).max(initial=0.0)))
        while True:
            if self.iterations >= self.limit:
                raise _NumericalTrouble(f"iteration limit {self.limit} reached")
            pi = self.Binv.T @ self._basic_costs(cost, art_cost)
            reduced = cost - self.A @ (self.sign * pi)
            reduced[self.in_basis] = np.inf
            if self.bland:
                cands = np.flatnonzero(reduced < -opt_tol)
                if cands.size == 0:
                    return "optimal"
                j = int(cands[0])
            else:
                j = int(np.argmin(reduced))
                if reduced[j] >= -opt_tol:
                    return "optimal"
            w = self.Binv @ self._column(j)
            ok = w > self.pivot_tol * max(1.0, float(np.abs(w).max()))
            if not ok.any():
                return "unbounded"
            rows = np.flatnonzero(ok)
            ratios = np.maximum(self.beta[rows], 0.0) / w[rows]
            theta = float(ratios.min())
            tied = rows[ratios <= theta + 1e-12 * (1.0 + theta)]
            if self.bland:
                row = int(min(tied, key=lambda r: self.basis[r]))
            else:
                # prefer retiring artificials, then the largest pivot, then the lowest row
                row = int(min(tied, key=lambda r: (self.basis[r] < m, -w[r], r)))
            if theta <= 1e-12:
                self.degenerate += 1
                if self.degenerate > 10 * m:
                    self.bland = True
            self._pivot(row, j, w, theta)

    def _expel_artificials(self):
        for row in range(self.n):
            if self.basis[row] < self.m:
                continue
            coeffs = self.A @ (self.sign * self.Binv[row])
            coeffs[self.in_basis] = 0.0
            j = int(np.argmax(np.abs(coeffs)))
            if abs(coeffs[j]) <= 1e-9 * max(1.0, float(np.abs(self.Binv[row]).max())):
                continue  # redundant equality row: the artificial stays basic at zero
            w = self.Binv @ self._column(j)
            self._pivot(row, j, w, 0.0)

    def solve(self, inst: LpInstance, _probe: bool = False) -> LpSolution:
        A, a, c = inst.A, inst.a, inst.c
        m, n = inst.m, inst.n
        self.A, self.m, self.n = A, m, n
        self.sign = np.where(-c >= 0, 1.0, -1.0)
        self.b = self.sign * -c
        self.bscale = float(np.abs(self.b).max())
        self.basis = np.arange(m, m + n)
        self.in_basis = np.zeros(m, dtype=bool)
        self.Binv = np.eye(n)
        self.beta = self.b.copy()
        self.iterations = 0
        self.since_refactor = 0
        self.degenerate = 0
        self.bland = False
        self.limit = self.max_iter if self.max_iter is not None else 50 * (m + n) + 1000

        try:
            status = self._run_phase(np.zeros(m), 1.0)
            self._refactor()
            infeas = float(sum(self.beta[r] for r in range(n) if self.basis[r] >= m))
            if infeas > 1e-9 * (1.0 + self.bscale):
                # -c is outside the cone spanned by the rows of A
                return self._dual_infeasible(inst, _probe)
            self._expel_artificials()
            self._refactor()
            status = self._run_phase(a, 0.0)
            self._refactor()
        except _NumericalTrouble as exc:
            return LpSolution(LpStatus.NUMERICAL_FAILURE, iterations=self.iterations, message=str(exc))

        if status == "unbounded":
            return LpSolution(LpStatus.INFEASIBLE, iterations=self.iterations,
                              message="dual objective unbounded: primal constraints are inconsistent")

        pi = self.Binv.T @ self._basic_costs(a, 0.0)
        x = self.sign * pi
        lam = np.zeros(m)
        for r, j in enumerate(self.basis):
            if j < m:
                lam[j] = max(self.beta[r], 0.0)
        sol = LpSolution(LpStatus.OPTIMAL, float(c @ x), x, lam, self.iterations)
        problems = certificate_violations(inst, sol)
        if problems:
            sol.status = LpStatus.NUMERICAL_FAILURE
            sol.message = "; ".join(problems)
        return sol

    def _dual_infeasible(self, inst: LpInstance, probe: bool) -> LpSolution:
        iters = self.iterations
        if probe or inst.a.min() >= 0:
            return LpSolution(LpStatus.UNBOUNDED, iterations=iters,
                              message="-c is not in the cone of the constraint normals")
        # Primal may be empty instead; probe min t s.t. A x - t <= a.
        A_aux = np.hstack([inst.A, -np.ones((inst.m, 1))])
        c_aux = np.zeros(inst.n + 1)
        c_aux[-1] = 1.0
        aux = DualSimplex(self.pivot_tol, self.refactor_every, self.max_condition).solve(
            LpInstance(A_aux, inst.a, c_aux), _probe=True)
        iters += aux.iterations
        if aux.status is LpStatus.NUMERICAL_FAILURE:
            return LpSolution(LpStatus.NUMERICAL_FAILURE, iterations=iters, message=aux.message)
        if aux.status is LpStatus.OPTIMAL and aux.objective > FEAS_TOL * (1.0 + np.abs(inst.a).max()):
            return LpSolution(LpStatus.INFEASIBLE, iterations=iters,
                              message=f"primal infeasible: min max-violation {aux.objective:.3e}")
        return LpSolution(LpStatus.UNBOUNDED, iterations=iters,
                          message="-c is not in the cone of the constraint normals")


def solve_lp(inst: LpInstance, **options) -> LpSolution:
    """Solve ``min c^T x s.t. A x <= a``; Optimal results carry verified certificates."""
    return DualSimplex(**options).solve(inst)


# --------------------------------------------------------------------------
# brute-force oracle

MAX_ORACLE_N = 4
MAX_ORACLE_SUBSETS = math.comb(16, 4)


def vertex_enumerate(inst: LpInstance, tol: float = 1e-9) -> LpSolution:
    """Solve a tiny LP by visiting every basic solution.

    Unboundedness is decided by checking, at each vertex and each choice of
    n active constraints, whether releasing one constraint gives a ray that
    stays feasible and improves the objective.
    """
    A, a, c = inst.A, inst.a, inst.c
    m, n = inst.m, inst.n
    if n > MAX_ORACLE_N or math.comb(m, n) > MAX_ORACLE_SUBSETS:
        raise ParameterError(f"vertex enumeration limited to n <= {MAX_ORACLE_N} and "
                             f"C(m, n) <= {MAX_ORACLE_SUBSETS}; got m={m}, n={n}")
    if np.linalg.matrix_rank(A) < n:
        raise ParameterError("vertex enumeration needs A with full column rank")

    feas = tol * (1.0 + np.abs(a).max())
    bases = []
    for subset in combinations(range(m), n):
        S = list(subset)
        B = A[S]
        if np.linalg.cond(B) > 1e12:
            continue
        Binv = np.linalg.inv(B)
        v = Binv @ a[S]
        if (A @ v - a).max() <= feas:
            bases.append((S, v, Binv))
    if not bases:
        return LpSolution(LpStatus.INFEASIBLE, message="no feasible vertex")

    for S, v, Binv in bases:
        for k in range(n):
            d = -Binv[:, k]
            dn = np.linalg.norm(d)
            if c @ d < -tol * dn and (A @ d).max() <= tol * dn:
                return LpSolution(LpStatus.UNBOUNDED, message=f"improving ray from vertex {S}")

    objs = np.array([float(c @ v) for _, v, _ in bases])
    best = objs.min()
    chosen = None
    for (S, v, Binv), obj in zip(bases, objs):
        if obj > best + 1e-12 * (1.0 + abs(best)):
            continue
        lam_S = -(Binv.T @ c)
        if chosen is None or lam_S.min() >= -tol:
            chosen = (S, v, lam_S)
            if lam_S.min() >= -tol:
                break
    S, v, lam_S = chosen
    lam = np.zeros(m)
    lam[S] = np.maximum(lam_S, 0.0)
    return LpSolution(LpStatus.OPTIMAL, float(c @ v), v, lam, len(bases))


# --------------------------------------------------------------------------
# instance serialization

_HEADER = "# rlpwidth LP instance: 'm n', then A row-major (one row per line), then a, then c"


def _fmt(values) -> str:
    return " ".join(format(float(v), ".17g") for v in values)


def dump_instance(inst: LpInstance, path) -> None:
    lines = [_HEADER, f"{inst.m} {inst.n}"]
    lines.extend(_fmt(row) for row in inst.A)
    lines.append(_fmt(inst.a))
    lines.append(_fmt(inst.c))
    Path(path).write_text("\n".join(lines) + "\n")


def load_instance(path) -> LpInstance:
    tokens = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            tokens.extend(line.split())
    if len(tokens) < 2:
        raise ParameterError(f"{path}: missing 'm n' header")
    m, n = int(tokens[0]), int(tokens[1])
    values = np.array([float(t) for t in tokens[2:]])
    if values.size != m * n + m + n:
        raise ParameterError(f"{path}: expected {m * n + m + n} numbers for m={m}, n={n}, got {values.size}")
    A = values[: m * n].reshape(m, n)
    return LpInstance(A, values[m * n: m * n + m], values[m * n + m:])
