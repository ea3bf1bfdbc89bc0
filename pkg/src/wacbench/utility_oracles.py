"""Decision-Maker abstraction: utility families over slack vectors.

The cutting-plane machinery consumes only two things from a DM: a scaled
supergradient of the (unknown) utility at the current slack vector, and a
satisfaction bit.  This module provides the built-in synthetic families,
the AHP-style priority-to-gradient conversion, the NDAS class test, the
driving-factor chain rule, and the robust-barrier utility constructor.

Row indices in family parameters are 1-based, matching every DM-facing
artifact ("obj" refers to the embedded objective row).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .lp_model import LpInstance


@dataclass
class OracleQuery:
    """What the DM is asked: the current slacks plus the probe points."""

    s: np.ndarray
    kind: str  # "supergradient" | "pairwise_priorities" | "satisfaction"
    eps: np.ndarray | None = None  # probe sizes for pairwise mode


@dataclass
class OracleAnswer:
    g: np.ndarray
    satisfied: bool = False
    value: float | None = None


# ---------------------------------------------------------------------------
# Utility families
# ---------------------------------------------------------------------------


class UtilitySpec:
    """Base class; subclasses implement value_and_supergradient(s)."""

    family = "custom"
    is_log_like = False

    def value_and_supergradient(self, s: np.ndarray) -> tuple[float, np.ndarray]:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError(f"{self.family} specs do not serialize")


def _require_positive(s: np.ndarray):
    if np.any(s <= 0):
        raise DomainError("slack vector must be strictly positive")


class LogWeighted(UtilitySpec):
    """U(s) = sum_i t_i ln s_i with t >= 0, t != 0; the NDAS workhorse."""

    family = "log_weighted"
    is_log_like = True

    def __init__(self, t):
        self.t = np.asarray(t, dtype=float)
        if np.any(self.t < 0) or not np.any(self.t):
            raise ValueError("log_weighted needs t >= 0 with at least one positive entry")

    def value_and_supergradient(self, s):
        s = np.asarray(s, dtype=float)
        _require_positive(s)
        return float(self.t @ np.log(s)), self.t / s

    def to_json(self):
        return {"family": self.family, "t": [float(v) for v in self.t]}


class QuadraticPair(UtilitySpec):
    """U(s) = -(s_i - s_j)^2 for a 1-based row pair; pulls two slacks together."""

    family = "quadratic_pair"

    def __init__(self, i: int, j: int):
        if i < 1 or j < 1 or i == j:
            raise ValueError("quadratic_pair needs two distinct 1-based indices")
        self.i, self.j = int(i), int(j)

    def value_and_supergradient(self, s):
        s = np.asarray(s, dtype=float)
        _require_positive(s)
        i, j = self.i - 1, self.j - 1
        diff = s[i] - s[j]
        g = np.zeros_like(s)
        g[i] = -2 * diff
        g[j] = 2 * diff
        return float(-(diff**2)), g

    def to_json(self):
        return {"family": self.family, "i": self.i, "j": self.j}


class PiecewiseProb(UtilitySpec):
    """U(s) = sum ln u_i(s_i) over configured rows.

    Each u_i rises linearly to the plateau at eps1 (typically |Delta b_i|_1),
    stays flat through eps2, then falls with slope -1, reaching zero at
    eps2 + eps1 (the domain boundary).  At the two kinks the supergradient
    is the average of the one-sided derivatives.
    """

    family = "piecewise_prob"

    def __init__(self, rows: dict[int, tuple[float, float]]):
        self.rows = {}
        for idx, (e1, e2) in rows.items():
            if not (0 < e1 <= e2):
                raise ValueError("piecewise_prob needs 0 < eps1 <= eps2 per row")
            self.rows[int(idx)] = (float(e1), float(e2))
        if not self.rows:
            raise ValueError("piecewise_prob needs at least one row")

    @staticmethod
    def _u_and_dlog(si: float, e1: float, e2: float) -> tuple[float, float]:
        if si < e1:
            return si, 1.0 / si
        if si == e1:
            return si, 0.5 / si
        if si < e2:
            return e1, 0.0
        if si == e2:
            return e1, -0.5 / e1
        u = e1 - (si - e2)
        if u <= 0:
            raise DomainError(f"slack {si} beyond the utility domain edge {e2 + e1}")
        return u, -1.0 / u

    def value_and_supergradient(self, s):
        s = np.asarray(s, dtype=float)
        _require_positive(s)
        val = 0.0
        g = np.zeros_like(s)
        for idx, (e1, e2) in self.rows.items():
            u, d = self._u_and_dlog(s[idx - 1], e1, e2)
            val += np.log(u)
            g[idx - 1] = d
        return float(val), g

    def to_json(self):
        return {
            "family": self.family,
            "rows": {str(k): [v[0], v[1]] for k, v in self.rows.items()},
        }


class LinearMin(UtilitySpec):
    """U(s) = min_k <c_k, s>: concave piecewise linear.

    At ties the supergradient is the average of the active rows.
    """

    family = "linear_min"

    def __init__(self, rows):
        self.rows = np.atleast_2d(np.asarray(rows, dtype=float))

    def value_and_supergradient(self, s):
        s = np.asarray(s, dtype=float)
        vals = self.rows @ s
        vmin = vals.min()
        active = np.isclose(vals, vmin, rtol=0, atol=1e-12)
        g = self.rows[active].mean(axis=0)
        return float(vmin), g

    def to_json(self):
        return {"family": self.family, "rows": [[float(v) for v in r] for r in self.rows]}


def two_piece_balance_utility(m: int) -> LinearMin:
    """min(3 s1 - s2, 3 s2 - s1) padded to m slots: the naive-cut stress case."""
    r1 = np.zeros(m)
    r2 = np.zeros(m)
    r1[0], r1[1] = 3.0, -1.0
    r2[0], r2[1] = -1.0, 3.0
    return LinearMin([r1, r2])


# --- robust-barrier utility (objective plus margin-aware log barrier) -----


@dataclass
class MarginFn:
    """A convex, nonnegative row margin f_i(x): 'zero', 'const', or 'abs'."""

    kind: str
    value: float = 0.0
    coeffs: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("zero", "const", "abs"):
            raise ValueError(f"unknown margin kind {self.kind!r}")
        if self.kind == "abs":
            self.coeffs = np.asarray(self.coeffs, dtype=float)
            if np.any(self.coeffs < 0):
                raise ValueError("abs margins need nonnegative coefficients")

    def __call__(self, x: np.ndarray) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "const":
            return self.value
        return float(self.coeffs @ np.abs(x))

    def gradient(self, x: np.ndarray) -> np.ndarray:
        if self.kind in ("zero", "const"):
            return np.zeros_like(x)
        return self.coeffs * np.sign(x)

    def to_json(self):
        out = {"kind": self.kind}
        if self.kind == "const":
            out["value"] = self.value
        if self.kind == "abs":
            out["coeffs"] = [float(v) for v in self.coeffs]
        return out

    @staticmethod
    def from_json(doc: dict) -> "MarginFn":
        return MarginFn(
            kind=doc["kind"],
            value=float(doc.get("value", 0.0)),
            coeffs=doc.get("coeffs"),
        )


class RobustBarrier(UtilitySpec):
    """U = <c,x> + mu * sum_i ln(s_i - f_i(x)), x recovered from s by A+.

    Maximizing this over the slack polytope lands within m*mu of the
    worst-case-feasible optimum of the margin-tightened program.  Slack
    vectors longer than m (an appended objective row) have the extra
    entries ignored: their content is already determined by x.
    """

    family = "robust_barrier"

    def __init__(self, mu: float, A, b, c, margins: list[MarginFn]):
        if mu <= 0:
            raise ValueError("mu must be positive")
        self.mu = float(mu)
        self.A = np.atleast_2d(np.asarray(A, dtype=float))
        self.b = np.asarray(b, dtype=float)
        self.c = np.asarray(c, dtype=float)
        if len(margins) != self.A.shape[0]:
            raise ValueError("one margin function per row required")
        self.margins = margins
        self._pinv = np.linalg.pinv(self.A)

    def value_and_supergradient(self, s):
        s = np.asarray(s, dtype=float)
        m = self.A.shape[0]
        s_rows = s[:m]
        x = self._pinv @ (self.b - s_rows)
        margins = np.array([f(x) for f in self.margins])
        gaps = s_rows - margins
        if np.any(gaps <= 0):
            raise DomainError("point outside the margin-tightened region (no Slater slack)")
        val = float(self.c @ x + self.mu * np.log(gaps).sum())
        # d/dx of the value, then back through x = A+ (b - s)
        gx = self.c.copy()
        for i, f in enumerate(self.margins):
            gx -= (self.mu / gaps[i]) * f.gradient(x)
        gs = np.zeros_like(s)
        gs[:m] = self._pinv.T @ (-gx) + self.mu / gaps
        return val, gs

    def to_json(self):
        return {
            "family": self.family,
            "mu": self.mu,
            "A": [[float(v) for v in col] for col in self.A.T],
            "b": [float(v) for v in self.b],
            "c": [float(v) for v in self.c],
            "margins": [f.to_json() for f in self.margins],
        }


class CustomUtility(UtilitySpec):
    """Callable-backed spec for tests and in-process simulated DMs."""

    family = "custom"

    def __init__(self, fn, is_log_like=False):
        self.fn = fn
        self.is_log_like = is_log_like

    def value_and_supergradient(self, s):
        return self.fn(np.asarray(s, dtype=float))


def robust_barrier_utility(ineq: LpInstance, margins: list[MarginFn], mu: float) -> RobustBarrier:
    """Build the barrier utility for max <c,x> s.t. a_i'x + f_i(x) <= b_i."""
    if any(k != "<=" for k in ineq.row_kinds):
        raise ValueError("robust_barrier_utility needs an all-<= instance")
    return RobustBarrier(mu=mu, A=ineq.A, b=ineq.b, c=ineq.c, margins=margins)


def maximize_robust_barrier(spec: RobustBarrier, solver: str | None = None) -> np.ndarray:
    """Maximizer of <c,x> + mu sum ln(b_i - a_i'x - f_i(x)) via cvxpy.

    The margins make the objective nonsmooth in general ('abs' kind), so a
    conic solver does the heavy lifting here rather than our Newton code.
    """
    import cvxpy as cp

    n = spec.A.shape[1]
    x = cp.Variable(n)
    terms = []
    for i, f in enumerate(spec.margins):
        gap = spec.b[i] - spec.A[i] @ x
        if f.kind == "const":
            gap = gap - f.value
        elif f.kind == "abs":
            gap = gap - f.coeffs @ cp.abs(x)
        terms.append(cp.log(gap))
    objective = cp.Maximize(spec.c @ x + spec.mu * cp.sum(cp.hstack(terms)))
    prob = cp.Problem(objective)
    if solver is None:
        prob.solve(solver="SCS", eps=1e-10, max_iters=200_000)
    else:
        prob.solve(solver=solver)
    if prob.status not in ("optimal", "optimal_inaccurate") or x.value is None:
        raise DomainError(f"no Slater point found: solver status {prob.status}")
    return np.asarray(x.value, dtype=float)


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------


def evaluate_and_supergradient(spec: UtilitySpec, s) -> tuple[float, np.ndarray]:
    return spec.value_and_supergradient(np.asarray(s, dtype=float))


def approx_gradient(p, eps, base=None) -> np.ndarray:
    """Scaled gradient from an AHP-style priority vector.

    g_i = (p_i - p_0) / eps_i: equal to the true gradient up to the unknown
    positive factor beta_0, which cancels in every cut computation and is
    deliberately dropped.  p has m+1 entries, p_0 first; eps has m.
    """
    p = np.asarray(p, dtype=float)
    eps = np.asarray(eps, dtype=float)
    if np.any(p <= 0):
        raise ValueError("priorities must be strictly positive")
    if np.any(eps <= 0):
        raise ValueError("probe sizes must be strictly positive")
    if p.shape[0] != eps.shape[0] + 1:
        raise ValueError(f"need {eps.shape[0] + 1} priorities, got {p.shape[0]}")
    return (p[1:] - p[0]) / eps


def default_probe_sizes(s: np.ndarray, rel: float = 1e-3) -> np.ndarray:
    """Relative probes eps_i = rel * s_i: scale-free and always interior-safe."""
    return rel * np.asarray(s, dtype=float)


def synthetic_priorities(spec: UtilitySpec, s: np.ndarray, eps: np.ndarray) -> np.ndarray:
    """Priorities a perfectly consistent DM would give for the m+1 probes.

    Shifted to be positive; only priority differences matter downstream.
    """
    s = np.asarray(s, dtype=float)
    vals = [evaluate_and_supergradient(spec, s)[0]]
    for i in range(s.shape[0]):
        probe = s.copy()
        probe[i] += eps[i]
        vals.append(evaluate_and_supergradient(spec, probe)[0])
    vals = np.array(vals)
    return vals - vals.min() + 1.0


def lift_driving_factors(C, g_xi) -> np.ndarray:
    """Chain rule through xi = C s: a factor-space supergradient times C'."""
    C = np.atleast_2d(np.asarray(C, dtype=float))
    g_xi = np.asarray(g_xi, dtype=float)
    if g_xi.shape[0] != C.shape[0]:
        raise ValueError(f"factor gradient has {g_xi.shape[0]} entries, C has {C.shape[0]} rows")
    return C.T @ g_xi


# ---------------------------------------------------------------------------
# NDAS verification (probabilistic refutation)
# ---------------------------------------------------------------------------


@dataclass
class NdasReport:
    passed: bool
    witness: tuple[np.ndarray, np.ndarray] | None = None
    property_violated: int | None = None  # 1 or 2
    trials: int = 0

    def __bool__(self):
        return self.passed


def _ndas_property1_violation(spec: UtilitySpec, s: np.ndarray, d: np.ndarray, tol: float = 1e-9):
    f = lambda v: evaluate_and_supergradient(spec, v)[0]
    fs = f(s)
    fd = max(f(d * s), f(s / d))
    return fs - fd > tol


def ndas_check(spec: UtilitySpec, dim: int, trials: int = 400, seed: int = 0) -> NdasReport:
    """Search for a witness violating the affine-scaling monotonicity class.

    Property 1: f(s) <= max(f(Ds), f(inv(D)s)).  Property 2: the direction
    of the inequality f(s) vs f(Ds) is the same at every base point.  A
    pass means only that no counterexample surfaced in the given trials.
    """
    rng = np.random.default_rng(seed)

    probes_s = [np.ones(dim)]
    probes_d = []
    for i in range(min(dim, 4)):
        d = np.ones(dim)
        d[i] = 2.0
        probes_d.append(d)
    canned = [(s, d) for s in probes_s for d in probes_d]

    tried = 0
    for s, d in canned:
        tried += 1
        try:
            if _ndas_property1_violation(spec, s, d):
                return NdasReport(False, (s, d), 1, tried)
        except DomainError:
            continue

    f = lambda v: evaluate_and_supergradient(spec, v)[0]
    for _ in range(trials):
        tried += 1
        s = np.exp(rng.normal(0, 0.7, dim))
        d = np.exp(rng.normal(0, 0.5, dim))
        try:
            if _ndas_property1_violation(spec, s, d):
                return NdasReport(False, (s, d), 1, tried)
            s2 = np.exp(rng.normal(0, 0.7, dim))
            # property 2: a strict direction at s must not flip at s2
            if f(s) < f(d * s) - 1e-9 and f(s2) > f(d * s2) + 1e-9:
                return NdasReport(False, (s2, d), 2, tried)
        except DomainError:
            continue
    return NdasReport(True, None, None, tried)


def ndas_witness_violation(spec: UtilitySpec, s, d) -> bool:
    """Check a specific (s, d) pair against NDAS property 1."""
    return _ndas_property1_violation(
        spec, np.asarray(s, dtype=float), np.asarray(d, dtype=float)
    )


# ---------------------------------------------------------------------------
# Synthetic DM wrapper
# ---------------------------------------------------------------------------


@dataclass
class SyntheticOracle:
    """Answers queries from a known utility spec; optional satisfaction bar."""

    spec: UtilitySpec
    satisfied_above: float | None = None
    calls: int = field(default=0, init=False)

    def __call__(self, s: np.ndarray) -> OracleAnswer:
        self.calls += 1
        value, g = evaluate_and_supergradient(self.spec, s)
        satisfied = self.satisfied_above is not None and value >= self.satisfied_above
        return OracleAnswer(g=g, satisfied=satisfied, value=value)

    @property
    def is_log_like(self):
        return self.spec.is_log_like


# ---------------------------------------------------------------------------
# JSON round trip for serializable specs
# ---------------------------------------------------------------------------


def utility_spec_from_json(doc: dict) -> UtilitySpec:
    fam = doc.get("family")
    if fam == "log_weighted":
        return LogWeighted(doc["t"])
    if fam == "quadratic_pair":
        return QuadraticPair(doc["i"], doc["j"])
    if fam == "piecewise_prob":
        return PiecewiseProb({int(k): (v[0], v[1]) for k, v in doc["rows"].items()})
    if fam == "linear_min":
        return LinearMin(doc["rows"])
    if fam == "robust_barrier":
        return RobustBarrier(
            mu=doc["mu"],
            A=np.array(doc["A"], dtype=float).T,
            b=doc["b"],
            c=doc["c"],
            margins=[MarginFn.from_json(f) for f in doc["margins"]],
        )
    raise ValueError(f"unknown utility family {fam!r}")
