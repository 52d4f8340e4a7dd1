import numpy as np
from scipy.optimize import linprog

from copcut.simplex import EQ, GE, LE, solve_lp


def test_simple_bounded_min():
    # min -x1 - x2 s.t. x1 + x2 <= 1, 0 <= x <= 1
    res = solve_lp(
        c=[-1.0, -1.0],
        A=[[1.0, 1.0]],
        senses=[LE],
        b=[1.0],
        lower=[0.0, 0.0],
        upper=[1.0, 1.0],
    )
    assert res.status == "optimal"
    assert abs(res.objective + 1.0) <= 1e-9


def test_equality_with_free_variable():
    # min t s.t. x + t = 2, x <= 1, x >= 0, t free  ->  t = 1.
    res = solve_lp(
        c=[0.0, 1.0],
        A=[[1.0, 1.0]],
        senses=[EQ],
        b=[2.0],
        lower=[0.0, -np.inf],
        upper=[1.0, np.inf],
    )
    assert res.status == "optimal"
    assert abs(res.objective - 1.0) <= 1e-9
    assert abs(res.x[0] - 1.0) <= 1e-9


def test_infeasible():
    res = solve_lp(
        c=[1.0],
        A=[[1.0], [1.0]],
        senses=[GE, LE],
        b=[2.0, 1.0],
        lower=[0.0],
        upper=[10.0],
    )
    assert res.status == "infeasible"


def test_unbounded():
    res = solve_lp(
        c=[-1.0],
        A=[[0.0]],
        senses=[LE],
        b=[1.0],
        lower=[0.0],
        upper=[np.inf],
    )
    assert res.status == "unbounded"


def test_upper_bounded_variables_only():
    # min -x1 - 2 x2 with x <= (1, 2), trivial row keeps m >= 1.
    res = solve_lp(
        c=[-1.0, -2.0],
        A=[[1.0, 1.0]],
        senses=[LE],
        b=[5.0],
        lower=[0.0, 0.0],
        upper=[1.0, 2.0],
    )
    assert res.status == "optimal"
    assert np.allclose(res.x, [1.0, 2.0], atol=1e-9)


def test_against_scipy_random_instances():
    rng = np.random.default_rng(42)
    for trial in range(60):
        m = int(rng.integers(1, 6))
        n = int(rng.integers(2, 7))
        A = rng.normal(size=(m, n))
        b = rng.normal(size=m) + 1.0
        c = rng.normal(size=n)
        lower = np.zeros(n)
        upper = rng.uniform(0.5, 3.0, size=n)
        senses = [LE if rng.random() < 0.7 else GE for _ in range(m)]
        res = solve_lp(c, A, senses, b, lower, upper)

        A_ub = []
        b_ub = []
        for i, s in enumerate(senses):
            if s == LE:
                A_ub.append(A[i])
                b_ub.append(b[i])
            else:
                A_ub.append(-A[i])
                b_ub.append(-b[i])
        ref = linprog(
            c,
            A_ub=np.array(A_ub),
            b_ub=np.array(b_ub),
            bounds=list(zip(lower, upper)),
            method="highs",
        )
        if ref.status == 2:
            assert res.status == "infeasible", f"trial {trial}"
        else:
            assert ref.status == 0
            assert res.status == "optimal", f"trial {trial}"
            assert abs(res.objective - ref.fun) <= 1e-7 * (1.0 + abs(ref.fun)), (
                f"trial {trial}: {res.objective} vs {ref.fun}"
            )


def test_equality_rows_against_scipy():
    rng = np.random.default_rng(9)
    for trial in range(40):
        n = int(rng.integers(3, 8))
        m_eq = int(rng.integers(1, 3))
        A = rng.normal(size=(m_eq, n))
        x_feas = rng.uniform(0.1, 0.9, size=n)
        b = A @ x_feas
        c = rng.normal(size=n)
        res = solve_lp(c, A, [EQ] * m_eq, b, np.zeros(n), np.ones(n))
        ref = linprog(c, A_eq=A, b_eq=b, bounds=[(0.0, 1.0)] * n, method="highs")
        assert ref.status == 0 and res.status == "optimal"
        assert abs(res.objective - ref.fun) <= 1e-7 * (1.0 + abs(ref.fun)), f"trial {trial}"


def test_determinism():
    rng = np.random.default_rng(1)
    A = rng.normal(size=(4, 6))
    b = rng.normal(size=4) + 2.0
    c = rng.normal(size=6)
    r1 = solve_lp(c, A, [LE] * 4, b, np.zeros(6), np.ones(6))
    r2 = solve_lp(c, A, [LE] * 4, b, np.zeros(6), np.ones(6))
    assert r1.objective == r2.objective
    assert np.array_equal(r1.x, r2.x)
