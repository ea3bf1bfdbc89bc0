"""Cutting-plane search in the weight simplex (and the slack-space variant).

Each iteration centers the polytope at the current weight vector, asks the
DM for a supergradient of the utility at the resulting slacks, converts it
into a half-space cut on the simplex, and picks the next weight inside the
shrunken localization set.  The anchored cut normal

    u_k = inv(S_k) A h_k,   A' Y0 inv(S_k) A h_k = A' g_k

keeps the anchored image Y0 s_opt of every maximizer inside all cuts; the
cheaper naive normal inv(Y_k) g_k is sound only for the NDAS family and is
kept for experiments and the regression fixture that shows it failing.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import EmptyInteriorError, SolverError
from .lp_model import AugmentedLp
from .utility_oracles import OracleAnswer
from .wac_solver import CenterTriple, SolverOptions, weighted_center

log = logging.getLogger(__name__)

STOP_GRADIENT = "gradient_tolerance"
STOP_SATISFIED = "dm_satisfied"
STOP_CAP = "iteration_cap"
STOP_EMPTY = "empty_localization"


# ---------------------------------------------------------------------------
# Cuts and the localization set
# ---------------------------------------------------------------------------


@dataclass
class CutHalfspace:
    """Half-space {w : <u, w> >= rhs} through the anchor weight."""

    u: np.ndarray
    w_anchor: np.ndarray
    rhs: float

    def margin(self, w: np.ndarray) -> float:
        return float(self.u @ w - self.rhs)

    @property
    def is_stationary(self) -> bool:
        return bool(np.abs(self.u).max() <= 1e-14) if self.u.size else True


def cut_normal(center_k: CenterTriple, g_k: np.ndarray, y0: np.ndarray, A: np.ndarray) -> CutHalfspace:
    """Anchored cut through w_k: contains W_{s_k}, valid at Y0 s_opt."""
    g_k = np.asarray(g_k, dtype=float)
    rhs_vec = A.T @ g_k
    scale = y0 / center_k.s
    M = (A.T * scale) @ A
    try:
        L = np.linalg.cholesky(M)
    except np.linalg.LinAlgError as exc:
        raise SolverError(
            f"cut normal system not positive definite (cond ~ {np.linalg.cond(M):.2e})"
        ) from exc
    h = scipy.linalg.cho_solve((L, True), rhs_vec)
    u = (A @ h) / center_k.s
    return CutHalfspace(u=u, w_anchor=center_k.w.copy(), rhs=float(u @ center_k.w))


def naive_cut(center_k: CenterTriple, g_k: np.ndarray) -> CutHalfspace:
    """The inv(Y_k) g_k cut: sound for NDAS utilities only."""
    u = np.asarray(g_k, dtype=float) / center_k.y
    return CutHalfspace(u=u, w_anchor=center_k.w.copy(), rhs=float(u @ center_k.w))


class CutSimplex:
    """The unit simplex intersected with accumulated cut half-spaces.

    Cuts are stored as given (tests inspect the raw normals) but all
    geometric queries run on unit-norm copies for conditioning.
    """

    def __init__(self, m: int, positivity_floor: float = 1e-10):
        self.m = m
        self.cuts: list[CutHalfspace] = []
        self.floor = positivity_floor
        self._Z = scipy.linalg.null_space(np.ones((1, m)))  # simplex tangent basis
        self._U = np.zeros((0, m))
        self._r = np.zeros(0)

    def add(self, cut: CutHalfspace):
        self.cuts.append(cut)
        scale = np.linalg.norm(cut.u)
        if scale <= 0:
            return
        self._U = np.vstack([self._U, cut.u / scale])
        self._r = np.append(self._r, cut.rhs / scale)

    def margins(self, w: np.ndarray) -> np.ndarray:
        return self._U @ w - self._r

    def contains(self, w: np.ndarray, tol: float = 1e-9) -> bool:
        w = np.asarray(w, dtype=float)
        if w.shape != (self.m,) or np.any(w <= 0) or abs(w.sum() - 1.0) > 1e-9:
            return False
        return bool(self._r.size == 0 or self.margins(w).min() >= -tol)

    def relative_interior_point(self) -> np.ndarray | None:
        """Phase 1: max t s.t. e'w = 1, w >= t e, cuts >= t; None if empty."""
        m = self.m
        k = self._U.shape[0]
        cobj = np.zeros(m + 1)
        cobj[-1] = -1.0
        rows = [np.concatenate([-np.eye(m), np.ones((m, 1))], axis=1)]
        rhs = [np.zeros(m)]
        if k:
            rows.append(np.concatenate([-self._U, np.ones((k, 1))], axis=1))
            rhs.append(-self._r)
        A_ub = np.vstack(rows)
        b_ub = np.concatenate(rhs)
        A_eq = np.zeros((1, m + 1))
        A_eq[0, :m] = 1.0
        res = scipy.optimize.linprog(
            cobj, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
            bounds=[(None, None)] * (m + 1), method="highs",
        )
        if not res.success or -res.fun <= 1e-13:
            return None
        w = res.x[:m]
        if np.any(w <= 0) or (self._r.size and self.margins(w).min() <= 0):
            return None  # LP feasibility noise exceeds the sliver width
        return w

    def max_step(self, w: np.ndarray, d: np.ndarray) -> float:
        """Largest t with w + t d inside (positivity floor and all cuts)."""
        t_max = np.inf
        dec = d < 0
        if np.any(dec):
            t_max = min(t_max, float(((w[dec] - self.floor) / -d[dec]).min()))
        if self._U.size:
            ud = self._U @ d
            mar = self.margins(w)
            blocking = ud < 0
            if np.any(blocking):
                t_max = min(t_max, float((mar[blocking] / -ud[blocking]).min()))
        return max(t_max, 0.0)

    def analytic_center(
        self, start: np.ndarray | None = None, tol: float = 1e-10, max_iter: int = 100
    ) -> np.ndarray:
        """Minimize -sum ln w_i - sum ln(cut margins) over the simplex slice.

        Best-effort on nearly degenerate sets: once float64 cannot resolve
        a descent direction the current (feasible) iterate is returned.
        """
        w = start if start is not None and self.contains(start, tol=-1e-12) else None
        if w is None:
            w = self.relative_interior_point()
            if w is None:
                raise SolverError("localization set has empty relative interior")
        w = np.asarray(w, dtype=float)
        Z = self._Z
        U, r = self._U, self._r

        def value(wv):
            if np.any(wv <= 0):
                return np.inf
            mar = U @ wv - r
            if mar.size and mar.min() <= 0:
                return np.inf
            return -np.log(wv).sum() - (np.log(mar).sum() if mar.size else 0.0)

        for _ in range(max_iter):
            mar = U @ w - r
            grad = -1.0 / w
            if U.size:
                grad -= U.T @ (1.0 / mar)
            gv = Z.T @ grad
            H = np.diag(1.0 / w**2)
            if U.size:
                H += (U.T / mar**2) @ U
            Hv = Z.T @ H @ Z
            try:
                dv = -np.linalg.solve(Hv, gv)
            except np.linalg.LinAlgError:
                break  # degenerate sliver: keep the feasible iterate
            if not np.all(np.isfinite(dv)):
                break
            dec2 = float(-(gv @ dv))
            if np.sqrt(max(dec2, 0.0)) <= tol:
                break
            d = Z @ dv
            f0 = value(w)
            alpha = 1.0
            while alpha > 1e-18:
                trial = w + alpha * d
                if value(trial) <= f0 - 1e-4 * alpha * dec2:
                    break
                alpha *= 0.5
            else:
                break  # no usable descent left at this precision
            w = w + alpha * d
        return w


# ---------------------------------------------------------------------------
# Next-weight selection
# ---------------------------------------------------------------------------


def next_weight(
    loc: CutSimplex,
    strategy: str,
    context: dict | None = None,
) -> np.ndarray | None:
    """Pick the next iterate inside the localization set; None when empty.

    analytic_center has the only shrinkage guarantee; toward_scaled_gradient
    jumps at the scaled-gradient image S_k g_k (exact for log utilities);
    midpoint_bisection implements the same-anchor bisection move.
    """
    context = context or {}
    if strategy == "analytic_center":
        if loc.relative_interior_point() is None:
            return None
        return loc.analytic_center(start=context.get("warm_start"))

    if strategy == "toward_scaled_gradient":
        w_k = context["w"]
        target = context["s"] * context["g"]
        total = float(target.sum())
        if total <= 1e-14:
            return next_weight(loc, "analytic_center", context)
        d = target / total - w_k
        if np.abs(d).max() < 1e-15:
            return next_weight(loc, "analytic_center", context)
        t_max = loc.max_step(w_k, d)
        if t_max <= 1e-12:
            return next_weight(loc, "analytic_center", context)
        t = 1.0 if t_max > 1.0 else 0.9 * t_max
        return w_k + t * d

    if strategy == "midpoint_bisection":
        w_k = context["w"]
        w_prev = context.get("w_prev")
        if w_prev is None:
            return next_weight(loc, "analytic_center", context)
        latest = loc.cuts[-1] if loc.cuts else None
        if latest is not None and float(latest.u @ (w_prev - w_k)) >= 0:
            mid = 0.5 * (w_k + w_prev)
            if loc.contains(mid, tol=1e-12):
                return mid
        d = w_k - w_prev
        t_max = loc.max_step(w_k, d)
        if t_max <= 1e-12:
            return None
        return w_k + 0.5 * t_max * d

    if strategy == "random_interior":
        # hit-and-run realization of "pick an arbitrary point"; the short
        # step (30% of the chord) cuts away little per iteration, keeping
        # the localization set fat for long diagnostic runs
        rng = context.get("rng") or np.random.default_rng(0)
        w = context.get("w")
        if w is None or not loc.contains(w, tol=1e-9):
            fresh = loc.relative_interior_point()
            if fresh is not None:
                w = fresh
            elif w is None:
                return None
            # else: degenerate sliver; stay at the boundary iterate
        for _ in range(16):
            d = rng.standard_normal(loc.m)
            d -= d.mean()  # stay on the simplex affine hull
            nd = np.linalg.norm(d)
            if nd < 1e-14:
                continue
            d /= nd
            hi = loc.max_step(w, d)
            lo = loc.max_step(w, -d)
            if hi + lo <= 1e-13:
                continue
            t = rng.uniform(-0.3 * lo, 0.3 * hi)
            return w + t * d
        return w.copy()

    raise ValueError(f"unknown strategy {strategy!r}")


# ---------------------------------------------------------------------------
# Run configuration and trace
# ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    strategy: str = "auto"  # auto | analytic_center | toward_scaled_gradient | midpoint_bisection
    variant: str = "plain"  # plain | modified1 | modified2
    cut_kind: str = "anchored"  # anchored | naive
    max_iter: int = 200
    grad_tol: float = 1e-6
    stationary_tol: float | None = None  # defaults to grad_tol / 100
    eps_switch: float = 1e-4
    positivity_floor: float = 1e-10
    forced_weights: list | None = None
    new_row_weight_rule: str = "paper"  # paper | uniform  (s-space only)
    seed: int = 0
    solver: SolverOptions = field(default_factory=SolverOptions)

    def resolve_strategy(self, oracle) -> str:
        if self.strategy != "auto":
            return self.strategy
        if getattr(oracle, "is_log_like", False):
            return "toward_scaled_gradient"
        return "analytic_center"


@dataclass
class IterateRecord:
    k: int
    w: np.ndarray
    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    g: np.ndarray | None = None
    value: float | None = None
    u: np.ndarray | None = None

    def to_json(self) -> dict:
        out = {
            "k": self.k,
            "w": [float(v) for v in self.w],
            "x": [float(v) for v in self.x],
            "y": [float(v) for v in self.y],
            "s": [float(v) for v in self.s],
        }
        out["g"] = None if self.g is None else [float(v) for v in self.g]
        out["value"] = None if self.value is None else float(self.value)
        out["u"] = None if self.u is None else [float(v) for v in self.u]
        return out

    @staticmethod
    def from_json(doc: dict) -> "IterateRecord":
        arr = lambda v: None if v is None else np.array(v, dtype=float)
        return IterateRecord(
            k=doc["k"], w=arr(doc["w"]), x=arr(doc["x"]), y=arr(doc["y"]), s=arr(doc["s"]),
            g=arr(doc["g"]), value=doc["value"], u=arr(doc["u"]),
        )


@dataclass
class RunTrace:
    iterates: list[IterateRecord] = field(default_factory=list)
    stop_reason: str | None = None
    y0: np.ndarray | None = None
    centers_computed: int = 0

    def to_jsonl(self) -> str:
        return "".join(json.dumps(rec.to_json()) + "\n" for rec in self.iterates)

    @property
    def final(self) -> IterateRecord:
        return self.iterates[-1]


# ---------------------------------------------------------------------------
# The w-space run (single-stepping object + batch driver)
# ---------------------------------------------------------------------------


class WSpaceRun:
    """One cutting-plane run; submit() consumes one DM answer per call.

    The run owns its trace and localization set; the y-vector of the first
    center anchors every cut for the whole run.
    """

    def __init__(self, aug: AugmentedLp, config: RunConfig | None = None, w0: np.ndarray | None = None):
        self.aug = aug
        self.config = config or RunConfig()
        m = aug.num_rows
        if self.config.forced_weights:
            w0 = np.asarray(self.config.forced_weights[0], dtype=float)
        self.w = w0 if w0 is not None else np.full(m, 1.0 / m)
        self.simplex = CutSimplex(m, positivity_floor=self.config.positivity_floor)
        self.trace = RunTrace()
        self.center = weighted_center(aug, self.w, self.config.solver)
        self.trace.centers_computed += 1
        self.y0 = self.center.y.copy()
        self.trace.y0 = self.y0
        self.stop_reason: str | None = None
        self._strategy_cache: str | None = None
        self._rng = np.random.default_rng(self.config.seed)
        # modified-variant bookkeeping
        self._history: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []  # (s, g, x)
        self._proj_Q: np.ndarray | None = None

    # -- public surface ----------------------------------------------------

    @property
    def k(self) -> int:
        return len(self.trace.iterates)

    @property
    def stopped(self) -> bool:
        return self.stop_reason is not None

    def current_slacks(self) -> np.ndarray:
        return self.center.s.copy()

    def strategy_for(self, oracle=None) -> str:
        if self._strategy_cache is None:
            self._strategy_cache = self.config.resolve_strategy(oracle)
        return self._strategy_cache

    def submit(self, answer: OracleAnswer, strategy: str | None = None) -> str | None:
        """Consume one answer: record, stop-check, cut, move, recenter."""
        if self.stopped:
            return self.stop_reason
        cfg = self.config
        strategy = strategy or self.strategy_for(None)
        g = np.asarray(answer.g, dtype=float)
        rec = IterateRecord(
            k=self.k, w=self.w.copy(), x=self.center.x.copy(), y=self.center.y.copy(),
            s=self.center.s.copy(), g=g.copy(), value=answer.value,
        )
        self.trace.iterates.append(rec)
        self._history.append((self.center.s.copy(), g.copy(), self.center.x.copy()))

        if answer.satisfied:
            return self._stop(STOP_SATISFIED)
        if np.linalg.norm(g) <= cfg.grad_tol:
            return self._stop(STOP_GRADIENT)

        if cfg.cut_kind == "naive":
            cut = naive_cut(self.center, g)
        else:
            cut = cut_normal(self.center, g, self.y0, self.aug.A)
        stat_tol = cfg.stationary_tol if cfg.stationary_tol is not None else cfg.grad_tol / 100
        if cut.is_stationary or np.abs(self.aug.A.T @ g).max() <= stat_tol:
            return self._stop(STOP_GRADIENT)
        rec.u = cut.u.copy()
        self.simplex.add(cut)

        if self.k >= cfg.max_iter:
            return self._stop(STOP_CAP)

        ok = self._advance(g, strategy)
        if not ok:
            return self._stop(STOP_EMPTY)
        return None

    # -- internals -----------------------------------------------------------

    def _stop(self, reason: str) -> str:
        self.stop_reason = reason
        self.trace.stop_reason = reason
        return reason

    def _recenter(self, w_next: np.ndarray):
        self.center = weighted_center(self.aug, w_next, self.config.solver, x0=self.center.x)
        self.trace.centers_computed += 1
        self.w = np.asarray(w_next, dtype=float)

    def _same_anchor_move(self, s_next: np.ndarray, x_next: np.ndarray):
        """Adopt a combination-law center (shared y0) without a Newton solve."""
        w_next = self.y0 * s_next
        self.center = CenterTriple(
            x=x_next, y=self.y0.copy(), s=s_next, w=w_next,
            kkt_residual=float(np.abs(self.aug.A.T @ self.y0).max()),
        )
        self.w = w_next

    def _forced_next(self) -> np.ndarray | None:
        fw = self.config.forced_weights
        if fw and self.k < len(fw):
            return np.asarray(fw[self.k], dtype=float)
        return None

    def _advance(self, g: np.ndarray, strategy: str) -> bool:
        forced = self._forced_next()
        if forced is not None:
            self._recenter(forced)
            return True
        if self.config.variant == "modified1":
            return self._advance_modified1()
        if self.config.variant == "modified2":
            return self._advance_modified2()
        ctx = {
            "w": self.w, "s": self.center.s, "g": g,
            "w_prev": self.trace.iterates[-2].w if self.k >= 2 else None,
            "warm_start": self.w, "rng": self._rng,
        }
        w_next = next_weight(self.simplex, strategy, ctx)
        if w_next is None:
            return False
        self._recenter(w_next)
        return True

    def _remap_through_anchor(self) -> bool:
        """Module-2 move: recenter at a fresh point, pull back to the y0 slice."""
        if self.simplex.relative_interior_point() is None:
            return False
        w_pick = self.simplex.analytic_center(start=None)
        fresh = weighted_center(self.aug, w_pick, self.config.solver, x0=self.center.x)
        self.trace.centers_computed += 1
        target = self.y0 * fresh.s
        d = target - self.w
        if np.abs(d).max() < 1e-15:
            return False
        t_max = self.simplex.max_step(self.w, d)
        t = 1.0 if t_max > 1.0 else 0.9 * t_max
        if t <= 1e-15:
            return False
        # s moves affinely with w on the shared-y0 slice
        s_next = (self.w + t * d) / self.y0
        x_next = self._x_from_slack(s_next)
        self._same_anchor_move(s_next, x_next)
        return True

    def _x_from_slack(self, s: np.ndarray) -> np.ndarray:
        x, *_ = np.linalg.lstsq(self.aug.A, self.aug.b - s, rcond=None)
        return x

    def _plain_fallback(self) -> bool:
        """One original-algorithm iteration: fresh pick plus Newton solve."""
        if self.simplex.relative_interior_point() is None:
            return False
        self._recenter(self.simplex.analytic_center())
        return True

    def _advance_modified1(self) -> bool:
        # bisect between the anchored images Y0 s of the last two centers;
        # the slack then moves affinely (combination law). Only sound when
        # both images still lie in the cut simplex, so gate on containment.
        hist = self._history
        if len(hist) >= 2:
            w_k = self.y0 * hist[-1][0]
            w_prev = self.y0 * hist[-2][0]
            # w_prev may sit outside the newest cut (that is what the
            # extrapolation branch is for); only the current image must
            # still be inside for the ratio test to be meaningful
            if (
                np.linalg.norm(w_k - w_prev) > self.config.eps_switch
                and self.simplex.contains(w_k, tol=1e-9)
            ):
                ctx = {"w": w_k, "w_prev": w_prev}
                w_next = next_weight(self.simplex, "midpoint_bisection", ctx)
                if w_next is not None and np.abs(w_next - self.w).max() > 1e-16:
                    s_next = w_next / self.y0
                    self._same_anchor_move(s_next, self._x_from_slack(s_next))
                    return True
        return self._remap_through_anchor()

    def _advance_modified2(self) -> bool:
        hist = self._history
        j = len(hist)
        tol = 1e-9
        undominated = [
            p for p in range(j)
            if all(float(hist[i][1] @ (hist[p][0] - hist[i][0])) >= -tol for i in range(j))
        ]
        if not undominated:
            # numerical noise emptied the set: best recorded value, lowest index
            values = [r.value for r in self.trace.iterates]
            if any(v is not None for v in values):
                best = max(
                    (v for v in values if v is not None), default=None
                )
                undominated = [min(i for i, v in enumerate(values) if v == best)]
            else:
                undominated = [j - 1]

        if len(undominated) > 1:
            s_next = np.mean([hist[p][0] for p in undominated], axis=0)
            x_next = np.mean([hist[p][2] for p in undominated], axis=0)
            w_next = self.y0 * s_next
            if np.linalg.norm(w_next - self.w) > self.config.eps_switch and self.simplex.contains(
                w_next, tol=1e-9
            ):
                self._same_anchor_move(s_next, x_next)
                return True
            if self._remap_through_anchor():
                return True
            return self._plain_fallback()

        p = undominated[0]
        s_p, g_p, x_p = hist[p]
        if self._proj_Q is None:
            self._proj_Q, _ = np.linalg.qr(self.aug.A)
        ds = self._proj_Q @ (self._proj_Q.T @ g_p)
        w_base = self.y0 * s_p
        d = self.y0 * ds
        t_max = self.simplex.max_step(w_base, d) if np.abs(d).max() > 0 else 0.0
        if t_max > 1e-12:
            alpha = 0.5 * t_max
            s_next = s_p + alpha * ds
            w_next = self.y0 * s_next
            if np.linalg.norm(w_next - self.w) > self.config.eps_switch:
                self._same_anchor_move(s_next, self._x_from_slack(s_next))
                return True
        if self._remap_through_anchor():
            return True
        return self._plain_fallback()


def run_w_space(aug: AugmentedLp, oracle, config: RunConfig | None = None) -> RunTrace:
    """Batch driver: loop center -> oracle -> cut -> move until a stop fires."""
    config = config or RunConfig()
    run = WSpaceRun(aug, config)
    strategy = run.strategy_for(oracle)
    while not run.stopped:
        answer = oracle(run.current_slacks())
        run.submit(answer, strategy=strategy)
    return run.trace


# ---------------------------------------------------------------------------
# The s-space algorithm (appends cut rows to the polytope itself)
# ---------------------------------------------------------------------------


def run_s_space(aug: AugmentedLp, oracle, config: RunConfig | None = None) -> RunTrace:
    """Slack-space cutting plane: each cut becomes a new constraint row.

    New rows get weight 1/m^2 and old rows 1/m - k/m^2 until those turn
    nonpositive (k >= m), after which all weights switch to uniform
    1/(m+k) with a logged warning.
    """
    config = config or RunConfig()
    m = aug.num_rows
    A_work = aug.A.copy()
    b_work = aug.b.copy()
    labels = list(aug.row_labels)
    trace = RunTrace()
    warned = False
    x_prev = None

    for k in range(config.max_iter + 1):
        if config.new_row_weight_rule == "paper" and (1.0 / m - k / m**2) > 0:
            w = np.concatenate([np.full(m, 1.0 / m - k / m**2), np.full(k, 1.0 / m**2)])
        else:
            if not warned and config.new_row_weight_rule == "paper" and k >= m:
                log.warning(
                    "step-5 weights nonpositive at k=%d >= m=%d; switching to uniform", k, m
                )
                warned = True
            w = np.full(m + k, 1.0 / (m + k))
        work = AugmentedLp(A=A_work, b=b_work, v=aug.v, row_labels=labels, c=aug.c, name=aug.name)
        try:
            center = weighted_center(work, w, config.solver, x0=x_prev)
        except (EmptyInteriorError, SolverError) as exc:
            # cuts through consecutive centers squeeze the working polytope
            # until it is numerically empty: the iterates have converged
            log.info("s-space recentering stopped at k=%d: %s", k, exc)
            trace.stop_reason = STOP_EMPTY
            break
        trace.centers_computed += 1
        x_prev = center.x
        if trace.y0 is None:
            trace.y0 = center.y.copy()

        s_orig = aug.b - aug.A @ center.x
        answer = oracle(s_orig)
        g = np.asarray(answer.g, dtype=float)
        rec = IterateRecord(
            k=k, w=w, x=center.x.copy(), y=center.y.copy(), s=center.s.copy(),
            g=g.copy(), value=answer.value,
        )
        trace.iterates.append(rec)

        if answer.satisfied:
            trace.stop_reason = STOP_SATISFIED
            break
        if np.linalg.norm(g) <= config.grad_tol:
            trace.stop_reason = STOP_GRADIENT
            break
        stat_tol = config.stationary_tol if config.stationary_tol is not None else config.grad_tol
        new_row = g @ aug.A
        if np.abs(new_row).max() <= stat_tol:
            trace.stop_reason = STOP_GRADIENT
            break
        if k == config.max_iter:
            trace.stop_reason = STOP_CAP
            break
        A_work = np.vstack([A_work, new_row])
        b_work = np.append(b_work, new_row @ center.x)
        labels.append(f"cut-{k}")
    else:
        trace.stop_reason = STOP_CAP
    return trace
