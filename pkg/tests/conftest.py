import numpy as np
import pytest
import scipy.optimize

from wacbench.lp_model import AugmentedLp, LpInstance


def triangle_lp() -> AugmentedLp:
    """1-D fixture: x <= 1 plus a duplicated x >= 0 row (m=3, n=1)."""
    return AugmentedLp(
        A=np.array([[1.0], [-1.0], [-1.0]]),
        b=np.array([1.0, 0.0, 0.0]),
        v=0.0,
        row_labels=["r1", "r2", "r3"],
        c=np.array([1.0]),
    )


def triangle_class_instances() -> list[AugmentedLp]:
    """The three m=3, n=1 instances used for the simplex-geometry examples."""
    data = [
        ([1.0, -1.0, -1.0], [1.0, 0.0, 0.0]),
        ([1.0, -1.0, 0.0], [1.0, 0.0, 1.0]),
        ([3.0, -3.0, -2.0], [1.0, 1.0, 0.0]),
    ]
    out = []
    for a, b in data:
        out.append(
            AugmentedLp(
                A=np.array(a).reshape(-1, 1),
                b=np.array(b),
                v=0.0,
                row_labels=[f"r{i + 1}" for i in range(3)],
                c=np.array([1.0]),
            )
        )
    return out


def random_bounded_aug(rng: np.random.Generator, n: int, m: int) -> tuple[AugmentedLp, np.ndarray]:
    """Bounded full-rank instance with a certified interior point.

    For n = 1 and n = 2 boundedness comes from construction (opposing
    directions / angular gaps below pi); for larger n, rows are resampled
    until they positively span, certified by an explicit y > 0, A'y = 0.
    """
    if n == 1:
        a = np.concatenate([[1.0, -1.0], rng.choice([-1.0, 1.0], size=m - 2)])
        A = a.reshape(-1, 1) * rng.uniform(0.5, 2.0, size=(m, 1))
    elif n == 2:
        for _ in range(200):
            ang = np.sort(rng.uniform(0, 2 * np.pi, size=m))
            gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))
            if gaps.max() < np.pi - 0.15:
                break
        A = np.stack([np.cos(ang), np.sin(ang)], axis=1) * rng.uniform(0.5, 2.0, size=(m, 1))
    else:
        while True:
            A = rng.standard_normal((m, n))
            A /= np.linalg.norm(A, axis=1, keepdims=True)
            res = scipy.optimize.linprog(
                np.zeros(m),
                A_eq=np.vstack([A.T, np.ones(m)]),
                b_eq=np.concatenate([np.zeros(n), [1.0]]),
                bounds=[(1e-3, None)] * m,
                method="highs",
            )
            if res.success:
                break
    x0 = rng.standard_normal(n) * 0.5
    b = A @ x0 + rng.uniform(0.3, 2.0, size=m)
    aug = AugmentedLp(
        A=A, b=b, v=0.0, row_labels=[f"r{i + 1}" for i in range(m)], c=np.zeros(n)
    )
    return aug, x0


def random_simplex_weight(rng: np.random.Generator, m: int, floor: float = 0.2) -> np.ndarray:
    """Dirichlet weight blended with uniform mass to keep conditioning sane."""
    w = rng.dirichlet(np.ones(m))
    return (1 - floor) * w + floor / m


def solve_lp_instance(inst: LpInstance) -> float:
    """Reference solve of a parsed instance with scipy handling each row kind."""
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for kind, row, rhs in zip(inst.row_kinds, inst.A, inst.b):
        if kind == "<=":
            A_ub.append(row)
            b_ub.append(rhs)
        elif kind == ">=":
            A_ub.append(-row)
            b_ub.append(-rhs)
        else:
            A_eq.append(row)
            b_eq.append(rhs)
    c = inst.c if inst.objective_sense == "min" else -inst.c
    bounds = [
        (lo if np.isfinite(lo) else None, hi if np.isfinite(hi) else None)
        for lo, hi in zip(inst.lower, inst.upper)
    ]
    res = scipy.optimize.linprog(
        c,
        A_ub=np.array(A_ub) if A_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.array(A_eq) if A_eq else None,
        b_eq=np.array(b_eq) if b_eq else None,
        bounds=bounds,
        method="highs",
    )
    assert res.success, res.message
    return float(res.fun if inst.objective_sense == "min" else -res.fun)


@pytest.fixture
def tri():
    return triangle_lp()


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
