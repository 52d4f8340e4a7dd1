"""Copositivity testing through a mixed-integer linear program.

A symmetric X is copositive iff min{y'Xy : sum(y) = 1, y >= 0} >= 0.
That minimum equals the optimum of a MILP in (y, z, mu, nu) where binary
z marks the support of y and nu carries the complementary slack, bounded
by bigM*(1 - z_i).  The solver below is an in-house best-first branch
and bound over z with LP relaxations; an exact support-enumeration
oracle is provided for cross-checking.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass

import numpy as np

from .linalg import require_symmetric
from .simplex import EQ, GE, LE, LpCyclingError, solve_lp

_INT_TOL = 1e-9
_PRUNE_MARGIN = 1e-10


class MilpInfeasibleError(RuntimeError):
    """The restricted model has no feasible binary pattern."""


class MilpNumericError(RuntimeError):
    """The solver could not produce a numerically trustworthy solution."""


class CopositivityModel:
    """The MILP data for one copositivity test.

    fixed_z pins individual binaries, excluded_patterns forbids whole
    binary vectors via no-good cuts; both default to unrestricted.
    """

    def __init__(self, X, big_m: float | None = None, fixed_z=None,
                 excluded_patterns=()):
        X = require_symmetric(X, tol=1e-12, name="copositivity matrix")
        self.X = 0.5 * (X + X.T)
        self.dim = X.shape[0]
        self.max_abs = float(np.max(np.abs(self.X))) if self.X.size else 0.0
        self.big_m = 2.0 * self.dim * self.max_abs if big_m is None else float(big_m)
        if self.big_m < 0.0:
            raise ValueError("bigM must be nonnegative")
        if self.big_m == 0.0 and self.max_abs > 0.0:
            raise ValueError("bigM may be zero only for the zero matrix")
        self.fixed_z = dict(sorted((int(k), int(v)) for k, v in (fixed_z or {}).items()))
        for k, v in self.fixed_z.items():
            if not 0 <= k < self.dim or v not in (0, 1):
                raise ValueError(f"invalid fixed_z entry {k}: {v}")
        pats = []
        for p in excluded_patterns:
            p = tuple(int(v) for v in p)
            if len(p) != self.dim or any(v not in (0, 1) for v in p):
                raise ValueError(f"invalid excluded pattern {p}")
            pats.append(p)
        self.excluded_patterns = tuple(pats)

    @property
    def comp_tol(self) -> float:
        return 1e-8 * (1.0 + self.max_abs)

    def with_fixed_pattern(self, z) -> "CopositivityModel":
        """Copy of the model with every binary pinned to the given pattern."""
        fixed = dict(self.fixed_z)
        fixed.update({i: int(z[i]) for i in range(self.dim)})
        return CopositivityModel(self.X, self.big_m, fixed, self.excluded_patterns)

    def with_excluded_pattern(self, z) -> "CopositivityModel":
        """Copy of the model with a no-good cut forbidding the pattern."""
        pats = self.excluded_patterns + (tuple(int(v) for v in z),)
        return CopositivityModel(self.X, self.big_m, self.fixed_z, pats)


@dataclass
class MilpSolution:
    """One solution of the copositivity MILP; objective equals -mu."""

    y: np.ndarray
    z: np.ndarray
    mu: float
    nu: np.ndarray
    objective: float

    def validate(self, model: CopositivityModel) -> "MilpSolution":
        scale = 1.0 + model.max_abs
        if abs(float(np.sum(self.y)) - 1.0) > 1e-9:
            raise MilpNumericError("simplex constraint violated in MILP solution")
        if np.any(self.y < -1e-9) or np.any(self.y > self.z + 1e-9):
            raise MilpNumericError("y outside [0, z] in MILP solution")
        resid = model.X @ self.y + self.mu - self.nu
        if float(np.max(np.abs(resid))) > 1e-8 * scale:
            raise MilpNumericError("stationarity rows violated in MILP solution")
        return self


@dataclass(frozen=True)
class Cut:
    """A simplex vector certifying y'Xy < 0."""

    y: np.ndarray
    value: float


@dataclass(frozen=True)
class OracleVerdict:
    copositive: bool
    cut: Cut | None = None

    def __post_init__(self):
        if self.copositive != (self.cut is None):
            raise ValueError("verdict must carry a cut exactly when not copositive")
        if self.cut is not None:
            if not self.cut.value < 0.0:
                raise ValueError("cut value must be negative")
            if np.any(self.cut.y < 0.0) or abs(float(np.sum(self.cut.y)) - 1.0) > 1e-9:
                raise ValueError("cut vector must lie on the simplex")


# ---------------------------------------------------------------------------
# LP relaxation assembly.  Variable layout: [y (d) | z (d) | nu (d) | mu].

def _base_lp(model: CopositivityModel):
    d = model.dim
    X = model.X
    M = model.big_m
    n = 3 * d + 1
    rows = []
    senses = []
    rhs = []
    for i in range(d):
        r = np.zeros(n)
        r[:d] = X[i]
        r[2 * d + i] = -1.0
        r[3 * d] = 1.0
        rows.append(r)
        senses.append(EQ)
        rhs.append(0.0)
    r = np.zeros(n)
    r[:d] = 1.0
    rows.append(r)
    senses.append(EQ)
    rhs.append(1.0)
    for i in range(d):
        r = np.zeros(n)
        r[i] = 1.0
        r[d + i] = -1.0
        rows.append(r)
        senses.append(LE)
        rhs.append(0.0)
    for i in range(d):
        r = np.zeros(n)
        r[2 * d + i] = 1.0
        r[d + i] = M
        rows.append(r)
        senses.append(LE)
        rhs.append(M)
    for pat in model.excluded_patterns:
        r = np.zeros(n)
        ones = 0
        for i, v in enumerate(pat):
            r[d + i] = -1.0 if v else 1.0
            ones += v
        rows.append(r)
        senses.append(GE)
        rhs.append(1.0 - ones)
    c = np.zeros(n)
    c[3 * d] = -1.0
    lower = np.zeros(n)
    upper = np.ones(n)
    upper[2 * d : 3 * d] = M
    # Valid bound on mu: |y'Xy| <= max|X| on the simplex, and every integer
    # feasible point has mu = -(Xy)_i for some i with z_i = 1.
    lower[3 * d] = -model.max_abs
    upper[3 * d] = model.max_abs
    for i, v in model.fixed_z.items():
        lower[d + i] = upper[d + i] = float(v)
    return c, np.array(rows), senses, np.array(rhs), lower, upper


def _heuristic_incumbents(model: CopositivityModel):
    """MILP-feasible points from size-1 and size-2 support stationary
    points of y'Xy; used only to warm the incumbent for pruning."""
    if model.fixed_z:
        return []
    d, X, M = model.dim, model.X, model.big_m
    excluded = set(model.excluded_patterns)
    candidates = []
    for i in range(d):
        y = np.zeros(d)
        y[i] = 1.0
        candidates.append(y)
    for i, j in itertools.combinations(range(d), 2):
        quad = X[i, i] - 2.0 * X[i, j] + X[j, j]
        if quad > 0.0:
            t = (X[i, i] - X[i, j]) / quad
            if 0.0 < t < 1.0:
                y = np.zeros(d)
                y[i] = 1.0 - t
                y[j] = t
                candidates.append(y)
    out = []
    tol = 1e-12 * (1.0 + model.max_abs)
    for y in candidates:
        val = float(y @ X @ y)
        nu = X @ y - val
        if float(np.min(nu)) < -tol or float(np.max(nu)) > M + tol:
            continue
        nu = np.maximum(nu, 0.0)
        z = (y > 0.0).astype(float)
        nu[z > 0.0] = 0.0
        if tuple(int(v) for v in z) in excluded:
            continue
        x = np.concatenate([y, z, nu, [-val]])
        out.append((val, x))
    return out


def branch_and_bound(model: CopositivityModel, stats: dict | None = None) -> MilpSolution:
    """Best-first branch and bound on the binary support pattern.

    Branches on the most fractional z (ties to the lowest index), selects
    nodes by best bound (ties by insertion order), and returns a solution
    within 1e-9*(1+|objective|) of the global optimum.  Deterministic for
    identical input.
    """
    d = model.dim
    c, A, senses, rhs, lower, upper = _base_lp(model)
    z_slice = slice(d, 2 * d)

    best_x = None
    best_val = np.inf
    for val, x in _heuristic_incumbents(model):
        if val < best_val:
            best_val, best_x = val, x

    heap: list[tuple[float, int, np.ndarray, np.ndarray]] = []
    counter = 0
    nodes = branched = 0
    heapq.heappush(heap, (-np.inf, counter, lower[z_slice].copy(), upper[z_slice].copy()))
    while heap:
        bound, _, zlo, zhi = heapq.heappop(heap)
        if bound >= best_val - _PRUNE_MARGIN * (1.0 + abs(best_val)):
            break
        lo = lower.copy()
        hi = upper.copy()
        lo[z_slice] = zlo
        hi[z_slice] = zhi
        try:
            res = solve_lp(c, A, senses, rhs, lo, hi)
        except LpCyclingError as exc:
            raise MilpNumericError(
                f"LP cycling guard exceeded at node {nodes} "
                f"(zlo={zlo.tolist()}, zhi={zhi.tolist()})"
            ) from exc
        nodes += 1
        if res.status == "infeasible":
            continue
        if res.status != "optimal":
            raise MilpNumericError(f"unexpected LP status {res.status!r}")
        if res.objective >= best_val - _PRUNE_MARGIN * (1.0 + abs(best_val)):
            continue
        zval = res.x[z_slice]
        frac = np.abs(zval - np.round(zval))
        if float(np.max(frac)) <= _INT_TOL:
            best_val = res.objective
            best_x = res.x
            continue
        q = int(np.argmax(frac))
        branched += 1
        for fix in (0.0, 1.0):
            counter += 1
            nzlo, nzhi = zlo.copy(), zhi.copy()
            if fix == 0.0:
                nzhi[q] = 0.0
            else:
                nzlo[q] = 1.0
            heapq.heappush(heap, (res.objective, counter, nzlo, nzhi))
    if stats is not None:
        stats["nodes"] = nodes
        stats["branched"] = branched
    if best_x is None:
        raise MilpInfeasibleError("no feasible binary pattern")
    y = np.maximum(best_x[:d], 0.0)
    z = best_x[z_slice].copy()
    nu = np.maximum(best_x[2 * d : 3 * d], 0.0)
    mu = float(best_x[3 * d])
    return MilpSolution(y=y, z=z, mu=mu, nu=nu, objective=float(-mu)).validate(model)


# ---------------------------------------------------------------------------
# The repair recursion around the raw solver.

def _round_half_up(z: np.ndarray) -> np.ndarray:
    return np.where(z >= 0.5, 1, 0).astype(int)


def solve_model(model: CopositivityModel, upper: float = np.inf,
                solver=None) -> MilpSolution:
    """Solve the model, repairing complementarity violations.

    If the returned solution has y'nu above tolerance (a sign the binary
    pattern was accepted fractionally) and improves on ``upper``, the
    model is re-solved with z pinned to the rounded pattern and, in
    parallel, with that pattern forbidden; the better result wins.
    """
    solver = solver or branch_and_bound
    sol = solver(model)
    if float(sol.y @ sol.nu) > model.comp_tol and sol.objective < upper:
        pattern = _round_half_up(sol.z)
        pinned = model.with_fixed_pattern(pattern)
        forbidden = model.with_excluded_pattern(pattern)
        try:
            sol_bar = solver(pinned)
        except MilpInfeasibleError:
            return solve_model(forbidden, solver=solver)
        try:
            sol_prime = solve_model(forbidden, upper=sol_bar.objective, solver=solver)
        except MilpInfeasibleError:
            return sol_bar
        return sol_prime if sol_prime.objective < sol_bar.objective else sol_bar
    return sol


def min_quadratic_over_simplex_milp(model: CopositivityModel) -> MilpSolution:
    """Globally minimize y'Xy over the simplex within the model's
    restrictions, via the MILP plus the repair recursion."""
    return solve_model(model)


def check_copositive(X) -> OracleVerdict:
    """Decide copositivity of X; on failure return a certifying simplex
    vector y with y'Xy < 0."""
    X = require_symmetric(X, tol=1e-12, name="copositivity matrix")
    X = 0.5 * (X + X.T)
    if not np.any(X):
        return OracleVerdict(copositive=True)
    sol = solve_model(CopositivityModel(X))
    y = np.maximum(sol.y, 0.0)
    value = float(y @ X @ y)
    if value >= 0.0:
        return OracleVerdict(copositive=True)
    return OracleVerdict(copositive=False, cut=Cut(y=y, value=value))


# ---------------------------------------------------------------------------
# Exact reference oracle.

def brute_force_simplex_min(X) -> tuple[float, np.ndarray]:
    """Exact min of y'Xy over the simplex by support enumeration.

    Every nonempty support gets its equality-KKT system solved; interior
    candidates with y >= 0 compete with all vertices.  Supports whose
    KKT system is singular contribute vertices only (the minimum over
    such a face is attained on another enumerated face anyway).
    """
    X = require_symmetric(X, tol=1e-12, name="brute force matrix")
    X = 0.5 * (X + X.T)
    d = X.shape[0]
    if d > 20:
        raise ValueError(f"support enumeration limited to d <= 20, got {d}")
    best_val = np.inf
    best_y = None
    for i in range(d):
        if X[i, i] < best_val:
            best_val = float(X[i, i])
            best_y = np.zeros(d)
            best_y[i] = 1.0
    for size in range(2, d + 1):
        for support in itertools.combinations(range(d), size):
            idx = np.array(support)
            K = np.zeros((size + 1, size + 1))
            K[:size, :size] = 2.0 * X[np.ix_(idx, idx)]
            K[:size, size] = -1.0
            K[size, :size] = 1.0
            rhs = np.zeros(size + 1)
            rhs[size] = 1.0
            try:
                sol = np.linalg.solve(K, rhs)
            except np.linalg.LinAlgError:
                continue
            if float(np.max(np.abs(K @ sol - rhs))) > 1e-8:
                continue
            ys = sol[:size]
            if float(np.min(ys)) < -1e-10:
                continue
            ys = np.maximum(ys, 0.0)
            total = float(np.sum(ys))
            if total <= 0.0:
                continue
            ys = ys / total
            y = np.zeros(d)
            y[idx] = ys
            val = float(y @ X @ y)
            if val < best_val:
                best_val = val
                best_y = y
    return best_val, best_y
