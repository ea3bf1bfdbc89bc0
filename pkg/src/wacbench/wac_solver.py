"""Weighted analytic centers of Ax <= b by damped Newton on the log barrier.

The center of a positive weight vector w is the unique minimizer of
phi(x) = -sum_i w_i ln(b_i - <a_i, x>) over the interior of the polytope;
the companion vectors are s = b - Ax and y = w / s, which satisfy A'y = 0
at the minimizer.  Weights on the unit simplex {w > 0, e'w = 1} are enough
to sweep the whole interior, and this module also provides the probes into
the constant-s slices (W_s) and constant-y slices (W_y) of that simplex.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import EmptyInteriorError, SolverError, UnboundedRegionError
from .lp_model import AugmentedLp


@dataclass
class SolverOptions:
    tol_decrement: float = 1e-10
    tol_gradient: float = 1e-10
    tol_kkt: float = 1e-8
    max_iter: int = 200
    armijo: float = 1e-4
    pivot_guard: float = 1e-14
    # accept convergence at the float64 noise floor once the decrement is
    # inside the quadratic basin (objective gap <= decrement^2/2 <= 5e-13)
    stall_decrement: float = 1e-6


@dataclass
class CenterTriple:
    """A weighted center (x, y, s) with its weight vector and KKT residual."""

    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    w: np.ndarray
    kkt_residual: float
    iterations: int = 0
    trace: list[dict] = field(default_factory=list, repr=False)


# ---------------------------------------------------------------------------
# Phase 1 and centric vectors
# ---------------------------------------------------------------------------


def find_interior_point(aug: AugmentedLp) -> np.ndarray:
    """Max-min-slack point: solve max t s.t. Ax + t e <= b.

    A large box on (x, t) keeps the auxiliary LP bounded even when the
    polytope itself is not; the box never binds for validated instances.
    """
    m, n = aug.num_rows, aug.num_cols
    A_aux = np.hstack([aug.A, np.ones((m, 1))])
    cobj = np.zeros(n + 1)
    cobj[-1] = -1.0
    big = 1e8
    res = scipy.optimize.linprog(
        cobj, A_ub=A_aux, b_ub=aug.b, bounds=[(-big, big)] * (n + 1), method="highs"
    )
    if not res.success:
        raise EmptyInteriorError(f"phase-1 LP failed: {res.message}")
    t_star = -res.fun
    if t_star <= 0:
        raise EmptyInteriorError(f"empty interior: best achievable minimum slack is {t_star:.3e}")
    return res.x[:n]


def centric_y(aug: AugmentedLp) -> np.ndarray:
    """Some y > 0 with A'y = 0 and <b, y> = 1.

    Found by maximizing the minimum coordinate over {A'y = 0, e'y = 1},
    then rescaling to <b, y> = 1 (the inner product is positive whenever
    the interior is nonempty).  Nonexistence signals an unbounded region.
    """
    m, n = aug.num_rows, aug.num_cols
    # variables (y, t): max t s.t. A'y = 0, e'y = 1, y - t e >= 0
    cobj = np.zeros(m + 1)
    cobj[-1] = -1.0
    A_eq = np.zeros((n + 1, m + 1))
    A_eq[:n, :m] = aug.A.T
    A_eq[n, :m] = 1.0
    b_eq = np.zeros(n + 1)
    b_eq[n] = 1.0
    A_ub = np.hstack([-np.eye(m), np.ones((m, 1))])
    res = scipy.optimize.linprog(
        cobj,
        A_ub=A_ub,
        b_ub=np.zeros(m),
        A_eq=A_eq,
        b_eq=b_eq,
        bounds=[(None, None)] * (m + 1),
        method="highs",
    )
    if not res.success or -res.fun <= 1e-12:
        raise UnboundedRegionError(
            "no centric y-vector: the null space of A' meets the positive orthant only at 0"
        )
    y = res.x[:m]
    scale = float(aug.b @ y)
    if scale <= 0:
        raise UnboundedRegionError("degenerate region: <b, y> <= 0 for every candidate y")
    return y / scale


# ---------------------------------------------------------------------------
# Weighted center by damped Newton
# ---------------------------------------------------------------------------


def _barrier_value(w: np.ndarray, s: np.ndarray) -> float:
    return float(-(w @ np.log(s)))


def weighted_center(
    aug: AugmentedLp,
    w: np.ndarray,
    opts: SolverOptions | None = None,
    x0: np.ndarray | None = None,
) -> CenterTriple:
    """Minimize phi(x) = -sum w_i ln(b_i - <a_i,x>) by damped Newton.

    Stops when the Newton decrement or the sup-norm gradient falls under
    the configured tolerances.  The Hessian A' diag(w/s^2) A is factored by
    Cholesky with a relative pivot guard against rank loss.
    """
    opts = opts or SolverOptions()
    w = np.asarray(w, dtype=float)
    if np.any(w <= 0):
        raise ValueError("weights must be strictly positive")
    A, b = aug.A, aug.b
    m, n = A.shape

    x = np.array(x0, dtype=float) if x0 is not None else find_interior_point(aug)
    s = b - A @ x
    if np.any(s <= 0):
        # caller-provided start was not interior; fall back to phase 1
        x = find_interior_point(aug)
        s = b - A @ x
        if np.any(s <= 0):
            raise EmptyInteriorError(
                "interior too thin to realize in floating point "
                f"(min slack {s.min():.3e} at the phase-1 point)"
            )

    trace: list[dict] = []
    no_progress = 0
    for it in range(opts.max_iter):
        ys = w / s
        grad = A.T @ ys
        H = (A.T * (ys / s)) @ A
        try:
            L = np.linalg.cholesky(H)
        except np.linalg.LinAlgError as exc:
            raise SolverError(f"Hessian not positive definite at iteration {it}: {exc}") from exc
        pivots = np.diag(L) ** 2
        if pivots.min() < opts.pivot_guard * np.trace(H) / n:
            raise SolverError(
                f"rank loss: smallest Cholesky pivot {pivots.min():.3e} under guard "
                f"at iteration {it}"
            )
        d = -scipy.linalg.cho_solve((L, True), grad)
        decrement2 = float(-(grad @ d))
        decrement = np.sqrt(max(decrement2, 0.0))
        trace.append({"iteration": it, "decrement": decrement, "grad_inf": float(np.abs(grad).max())})

        if decrement <= opts.tol_decrement or np.abs(grad).max() <= opts.tol_gradient:
            break

        phi = _barrier_value(w, s)
        alpha = 1.0
        Ad = A @ d
        stalled = False
        while True:
            s_new = s - alpha * Ad
            if np.all(s_new > 0):
                phi_new = _barrier_value(w, s_new)
                if phi_new <= phi - opts.armijo * alpha * decrement2:
                    break
            alpha *= 0.5
            if alpha < 1e-18:
                stalled = True
                break
        if not stalled:
            x = x + alpha * d
            s = s - alpha * Ad
            if not np.all(np.isfinite(s)):
                raise SolverError(f"non-finite slack at iteration {it}; trace: {trace[-3:]}")
            trace[-1]["step"] = alpha
            if phi - _barrier_value(w, s) <= 8 * np.finfo(float).eps * (1 + abs(phi)):
                no_progress += 1
            else:
                no_progress = 0
        if stalled or no_progress >= 2:
            # float64 noise floor: the barrier no longer resolves any descent
            if decrement <= opts.stall_decrement:
                break
            raise SolverError(
                f"line search stalled at iteration {it} outside the quadratic basin "
                f"(decrement {decrement:.3e})"
            )
    else:
        raise SolverError(
            f"iteration cap {opts.max_iter} exceeded; last decrement {trace[-1]['decrement']:.3e}"
        )

    y = w / s
    kkt = float(np.abs(A.T @ y).max())
    return CenterTriple(x=x, y=y, s=s, w=w.copy(), kkt_residual=kkt, iterations=it, trace=trace)


def weight_of_point(
    aug: AugmentedLp,
    x: np.ndarray,
    y: np.ndarray,
    tol: float = 1e-6,
) -> np.ndarray:
    """The weight w = S y that makes x the w-center, for a centric y.

    e'w = 1 is automatic from A'y = 0 and <b,y> = 1.
    """
    s = aug.b - aug.A @ x
    if np.any(s <= 0):
        raise ValueError("x is not strictly interior")
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise ValueError("y must be strictly positive")
    if np.abs(aug.A.T @ y).max() > tol * (1 + np.abs(y).max()):
        raise ValueError("y fails A'y = 0 beyond tolerance")
    if abs(aug.b @ y - 1.0) > tol:
        raise ValueError("y fails <b,y> = 1 beyond tolerance")
    return s * y


# ---------------------------------------------------------------------------
# Geometry probes: W_y and W_s slices of the weight simplex
# ---------------------------------------------------------------------------


def nullspace_basis(A: np.ndarray, rel_tol: float = 1e-10) -> np.ndarray:
    """Rows form an orthonormal basis of null(A')."""
    ns = scipy.linalg.null_space(A.T, rcond=rel_tol)
    return ns.T


def sample_interior_points(
    aug: AugmentedLp, count: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """Strictly interior points: random rays from a deep point, retreated to 60%."""
    x0 = find_interior_point(aug)
    out = []
    A, b = aug.A, aug.b
    for _ in range(count):
        d = rng.standard_normal(aug.num_cols)
        d /= np.linalg.norm(d)
        Ad = A @ d
        s0 = b - A @ x0
        with np.errstate(divide="ignore"):
            steps = np.where(Ad > 0, s0 / Ad, np.inf)
        t_max = steps.min()
        t = 0.6 * rng.uniform(0.05, 1.0) * t_max
        out.append(x0 + t * d)
    return out


def sample_w_y(aug: AugmentedLp, y: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    """Points of W_y: w = Y s over random centric slack vectors s."""
    pts = sample_interior_points(aug, count, rng)
    return np.array([y * (aug.b - aug.A @ x) for x in pts])


def sample_w_s(aug: AugmentedLp, s: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    """Points of W_s: w = S y over random centric y-vectors.

    Centric y's form {y0 + N'z > 0, b'(y0 + N'z) = 1} for N spanning
    null(A'); random z are retreated toward y0 to keep positivity.
    """
    y0 = centric_y(aug)
    N = nullspace_basis(aug.A)
    # directions inside the affine set must also keep <b, y> = 1
    bn = N @ aug.b
    out = []
    for _ in range(count):
        z = rng.standard_normal(N.shape[0])
        d = N.T @ z
        denom = float(aug.b @ d)
        # project the direction onto the hyperplane <b, d> = 0
        if abs(denom) > 0 and bn @ bn > 0:
            d = d - (N.T @ bn) * (denom / float(bn @ bn))
        nd = np.linalg.norm(d)
        if nd < 1e-14:
            out.append(s * y0)
            continue
        d /= nd
        with np.errstate(divide="ignore"):
            steps = np.where(d < 0, -y0 / d, np.inf)
        t_max = steps.min()
        t = 0.6 * rng.uniform(0.05, 1.0) * t_max
        out.append(s * (y0 + t * d))
    return np.array(out)


def affine_dimension(points: np.ndarray, rel_tol: float = 1e-8) -> int:
    """Rank of the centered sample matrix at a relative tolerance."""
    centered = points - points.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > rel_tol * sv[0]))


# ---------------------------------------------------------------------------
# Brute-force oracle (grid + golden section) for n <= 2
# ---------------------------------------------------------------------------

_GOLDEN = (np.sqrt(5) - 1) / 2


def _golden_min(f, lo: float, hi: float, iters: int = 80):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (a + b) / 2


def polytope_vertices_2d(A: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """All feasible intersection points of constraint pairs (n = 2 only)."""
    m = A.shape[0]
    verts = []
    for i in range(m):
        for j in range(i + 1, m):
            M = np.array([A[i], A[j]])
            if abs(np.linalg.det(M)) < 1e-12:
                continue
            p = np.linalg.solve(M, np.array([b[i], b[j]]))
            if np.all(A @ p <= b + tol * (1 + np.abs(b))):
                verts.append(p)
    return np.array(verts)


def brute_force_center(aug: AugmentedLp, w: np.ndarray, grid: int = 48, rounds: int = 60) -> np.ndarray:
    """Grid search plus golden-section refinement; independent of Newton.

    For n = 1 the feasible interval is exact and a single golden section
    suffices; for n = 2 the bounding box comes from vertex enumeration and
    refinement alternates golden sections along the coordinate axes.
    """
    A, b = aug.A, aug.b
    n = aug.num_cols
    w = np.asarray(w, dtype=float)

    def phi(pt: np.ndarray) -> float:
        s = b - A @ pt
        if np.any(s <= 0):
            return np.inf
        return -(w @ np.log(s))

    if n == 1:
        a_col = A[:, 0]
        lo, hi = -np.inf, np.inf
        for ai, bi in zip(a_col, b):
            if ai > 0:
                hi = min(hi, bi / ai)
            elif ai < 0:
                lo = max(lo, bi / ai)
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise ValueError("unbounded interval: oracle needs a bounded instance")
        x = _golden_min(lambda t: phi(np.array([t])), lo, hi, iters=120)
        return np.array([x])

    if n != 2:
        raise ValueError("brute-force oracle supports n <= 2 only")

    verts = polytope_vertices_2d(A, b)
    if len(verts) == 0:
        raise ValueError("no vertices found: empty or unbounded instance")
    lo = verts.min(axis=0)
    hi = verts.max(axis=0)

    xs = np.linspace(lo[0], hi[0], grid)
    ys = np.linspace(lo[1], hi[1], grid)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    P = np.stack([X.ravel(), Y.ravel()], axis=1)
    S = b[None, :] - P @ A.T
    ok = np.all(S > 0, axis=1)
    if not np.any(ok):
        raise ValueError("grid found no interior point; refine the instance")
    vals = np.full(len(P), np.inf)
    vals[ok] = -np.log(S[ok]) @ w
    best = P[np.argmin(vals)].copy()

    # Powell-style direction-set search: golden sections along the exact
    # feasible segment through the current point (ratio test keeps the line
    # objective finite); the net-displacement direction replaces the oldest
    # so narrow valleys do not force axis zigzag
    def line_min(point, d):
        Ad = A @ d
        s_now = b - A @ point
        with np.errstate(divide="ignore"):
            t_pos = np.where(Ad > 0, s_now / Ad, np.inf).min()
            t_neg = np.where(Ad < 0, -s_now / Ad, np.inf).min()
        t = _golden_min(lambda t: phi(point + t * d), -0.999999 * t_neg, 0.999999 * t_pos, iters=48)
        return point + t * d

    dirs = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    for _ in range(rounds):
        start = best.copy()
        for d in dirs:
            best = line_min(best, d)
        disp = best - start
        norm = np.linalg.norm(disp)
        if norm < 1e-11:
            break
        dirs = [dirs[1], disp / norm]
        best = line_min(best, dirs[1])
    return best
