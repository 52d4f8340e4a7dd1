"""Dense bounded-variable revised simplex.

Solves  min c'x  subject to row constraints A x {<=,==,>=} b and box
bounds l <= x <= u (entries may be infinite).  Two phases with
artificial variables, Dantzig pricing, and a Bland's-rule fallback after
5*(rows+cols) iterations so the method cannot cycle.  All tie-breaks are
by lowest index, which makes runs bitwise reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

LE, EQ, GE = "<=", "==", ">="

_REDCOST_TOL = 1e-9
_PIVOT_TOL = 1e-10
_FEAS_TOL = 1e-9

# Nonbasic rest positions.
_AT_LOWER = 0
_AT_UPPER = 1
_FREE = 2


class LpCyclingError(RuntimeError):
    """The iteration guard tripped; the LP could not be finished reliably."""


@dataclass
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    objective: float | None
    iterations: int


def solve_lp(c, A, senses, b, lower, upper) -> LpResult:
    """Solve the LP; raises LpCyclingError only on iteration-guard failure."""
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    m, n = A.shape
    if m != len(senses) or m != b.size or n != c.size:
        raise ValueError("inconsistent LP dimensions")

    # Slack per inequality row: <= gets s in [0, inf), >= gets s in (-inf, 0].
    slack_rows = [i for i, s in enumerate(senses) if s != EQ]
    n_slack = len(slack_rows)
    A_std = np.hstack([A, np.zeros((m, n_slack))]) if n_slack else A.copy()
    lo = np.concatenate([lower, np.zeros(n_slack)])
    hi = np.concatenate([upper, np.zeros(n_slack)])
    for k, i in enumerate(slack_rows):
        A_std[i, n + k] = 1.0
        if senses[i] == LE:
            lo[n + k], hi[n + k] = 0.0, np.inf
        else:
            lo[n + k], hi[n + k] = -np.inf, 0.0

    tab = _Tableau(A_std, b, lo, hi)
    status, iters1 = tab.run_phase1()
    if status != "optimal":
        return LpResult("infeasible", None, None, iters1)

    c_std = np.concatenate([c, np.zeros(n_slack)])
    status, iters2 = tab.run_phase2(c_std)
    if status == "unbounded":
        return LpResult("unbounded", None, None, iters1 + iters2)
    x = tab.solution()[:n]
    return LpResult("optimal", x, float(c @ x), iters1 + iters2)


class _Tableau:
    """Mutable simplex state over columns [structural | slack | artificial]."""

    def __init__(self, A, b, lo, hi):
        self.m, n_real = A.shape
        self.n_real = n_real
        # Artificial columns come last; their signs are fixed in phase 1.
        self.A = np.hstack([A, np.zeros((self.m, self.m))])
        self.b = b.astype(float)
        self.lo = np.concatenate([lo, np.zeros(self.m)])
        self.hi = np.concatenate([hi, np.full(self.m, np.inf)])
        self.n = self.n_real + self.m
        self.basis = np.zeros(self.m, dtype=np.intp)
        self.rest = np.full(self.n, _AT_LOWER, dtype=np.int8)
        self.in_basis = np.zeros(self.n, dtype=bool)
        self.iterations = 0

    # -- setup ---------------------------------------------------------

    def _rest_value(self, j: int) -> float:
        if self.rest[j] == _AT_LOWER:
            return self.lo[j]
        if self.rest[j] == _AT_UPPER:
            return self.hi[j]
        return 0.0

    def _nonbasic_values(self) -> np.ndarray:
        vals = np.where(self.rest == _AT_UPPER, self.hi, self.lo)
        vals = np.where(self.rest == _FREE, 0.0, vals)
        vals[~np.isfinite(vals)] = 0.0
        vals[self.in_basis] = 0.0
        return vals

    def run_phase1(self):
        # Rest nonbasic structural variables at the finite bound closest to 0.
        for j in range(self.n_real):
            lj, hj = self.lo[j], self.hi[j]
            if np.isinf(lj) and np.isinf(hj):
                self.rest[j] = _FREE
            elif np.isinf(lj):
                self.rest[j] = _AT_UPPER
            elif np.isinf(hj):
                self.rest[j] = _AT_LOWER
            else:
                self.rest[j] = _AT_LOWER if abs(lj) <= abs(hj) else _AT_UPPER
        x_rest = self._nonbasic_values()
        resid = self.b - self.A[:, : self.n_real] @ x_rest[: self.n_real]
        for i in range(self.m):
            j = self.n_real + i
            self.A[i, j] = 1.0 if resid[i] >= 0.0 else -1.0
            self.basis[i] = j
            self.in_basis[j] = True
        c1 = np.zeros(self.n)
        c1[self.n_real :] = 1.0
        status, iters = self._iterate(c1, phase=1)
        if status != "optimal":
            return status, iters
        xb = self._basic_values()
        art = [i for i in range(self.m) if self.basis[i] >= self.n_real]
        infeas = sum(abs(xb[i]) for i in art)
        scale = 1.0 + float(np.max(np.abs(self.b))) if self.m else 1.0
        if infeas > 1e-8 * scale:
            return "infeasible", iters
        self._drive_out_artificials()
        # Pin every artificial at zero for phase 2.
        self.lo[self.n_real :] = 0.0
        self.hi[self.n_real :] = 0.0
        self.rest[self.n_real :] = _AT_LOWER
        return "optimal", iters

    def run_phase2(self, c):
        c2 = np.concatenate([c, np.zeros(self.m)])
        return self._iterate(c2, phase=2)

    def _drive_out_artificials(self):
        """Pivot basic artificials onto real columns where possible; rows
        where no pivot exists are redundant and keep a zero artificial."""
        for i in range(self.m):
            if self.basis[i] < self.n_real:
                continue
            B = self.A[:, self.basis]
            lu = lu_factor(B)
            for j in range(self.n_real):
                if self.in_basis[j]:
                    continue
                w = lu_solve(lu, self.A[:, j])
                if abs(w[i]) > 1e-7:
                    leaving = self.basis[i]
                    self.in_basis[leaving] = False
                    self.rest[leaving] = _AT_LOWER
                    self.basis[i] = j
                    self.in_basis[j] = True
                    break

    # -- core iteration --------------------------------------------------

    def _basic_values(self) -> np.ndarray:
        xr = self._nonbasic_values()
        rhs = self.b - self.A @ xr
        B = self.A[:, self.basis]
        return lu_solve(lu_factor(B), rhs)

    def solution(self) -> np.ndarray:
        x = self._nonbasic_values()
        x[self.basis] = self._basic_values()
        return x

    def _iterate(self, c, phase: int):
        m, n = self.m, self.n
        bland_after = 5 * (m + n)
        guard = 60 * (m + n) + 2000
        count = 0
        while True:
            if count > guard:
                raise LpCyclingError(
                    f"simplex iteration guard exceeded in phase {phase}"
                )
            count += 1
            self.iterations += 1
            B = self.A[:, self.basis]
            lu = lu_factor(B)
            x_rest = self._nonbasic_values()
            xb = lu_solve(lu, self.b - self.A @ x_rest)
            pi = lu_solve(lu, c[self.basis], trans=1)
            red = c - self.A.T @ pi

            q, direction = self._price(red, phase, bland=count > bland_after)
            if q < 0:
                return "optimal", count
            w = lu_solve(lu, self.A[:, q])

            # Ratio test: x_q moves by t*direction, basics by -t*direction*w.
            t_best = np.inf
            leave_row = -1
            leave_to = _AT_LOWER
            rate = -direction * w
            for i in range(m):
                bi = self.basis[i]
                if rate[i] < -_PIVOT_TOL and np.isfinite(self.lo[bi]):
                    t = max(0.0, (xb[i] - self.lo[bi]) / -rate[i])
                    if t < t_best - 1e-15 or (
                        abs(t - t_best) <= 1e-15
                        and (leave_row < 0 or bi < self.basis[leave_row])
                    ):
                        t_best, leave_row, leave_to = t, i, _AT_LOWER
                elif rate[i] > _PIVOT_TOL and np.isfinite(self.hi[bi]):
                    t = max(0.0, (self.hi[bi] - xb[i]) / rate[i])
                    if t < t_best - 1e-15 or (
                        abs(t - t_best) <= 1e-15
                        and (leave_row < 0 or bi < self.basis[leave_row])
                    ):
                        t_best, leave_row, leave_to = t, i, _AT_UPPER
            t_flip = self.hi[q] - self.lo[q] if self.rest[q] != _FREE else np.inf
            if t_flip <= t_best:
                if np.isinf(t_flip):
                    return "unbounded", count
                # Bound flip: q jumps to its opposite bound, basis unchanged.
                self.rest[q] = _AT_UPPER if self.rest[q] == _AT_LOWER else _AT_LOWER
                continue
            if leave_row < 0:
                return "unbounded", count
            leaving = self.basis[leave_row]
            self.in_basis[leaving] = False
            self.rest[leaving] = leave_to
            self.basis[leave_row] = q
            self.in_basis[q] = True

    def _price(self, red, phase: int, bland: bool):
        """Pick the entering column and its direction (+1 from lower/free,
        -1 from upper); returns (-1, 0) at optimality."""
        best_j, best_dir, best_score = -1, 0, _REDCOST_TOL
        limit = self.n if phase == 1 else self.n_real
        for j in range(limit):
            if self.in_basis[j]:
                continue
            if self.lo[j] == self.hi[j]:
                continue  # pinned: flipping a fixed column cannot move x
            r = red[j]
            pos = self.rest[j]
            score = 0.0
            direction = 0
            if pos in (_AT_LOWER, _FREE) and r < -_REDCOST_TOL:
                score, direction = -r, 1
            elif pos in (_AT_UPPER, _FREE) and r > _REDCOST_TOL:
                score, direction = r, -1
            if direction == 0:
                continue
            if bland:
                return j, direction
            if score > best_score:
                best_j, best_dir, best_score = j, direction, score
        return best_j, best_dir
