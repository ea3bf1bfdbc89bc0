"""Per-constraint infeasibility probability bounds and robustness reports.

For RHS uncertainty b_i = b0_i + sum_l db_i^l z_l with independent z in
[-1, 1], the slack-to-uncertainty ratio delta_i = s_i / |db_i|_1 governs
everything: delta_i >= 1 certifies worst-case feasibility of row i, and
for delta_i < 1 two tail bounds are reported.  These numbers face the DM,
so binomial arithmetic is exact and conversions round outward (a reported
bound never understates risk).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lp_model import AugmentedLp
from .wac_solver import CenterTriple


@dataclass
class RowUncertainty:
    delta: np.ndarray  # scale factors db_i^l, all positive
    N: int

    def __post_init__(self):
        self.delta = np.asarray(self.delta, dtype=float)
        if np.any(self.delta <= 0):
            raise ValueError("uncertainty scale factors must be positive")
        if self.N != len(self.delta):
            raise ValueError("N must match the number of scale factors")

    @property
    def norm1(self) -> float:
        return float(self.delta.sum())

    @property
    def max_entry(self) -> float:
        return float(self.delta.max())


@dataclass
class UncertaintySpec:
    """Per-row RHS uncertainty; rows absent from the mapping are certain.

    Row keys are 1-based, matching reports and the JSON schema.
    """

    rows: dict[int, RowUncertainty]
    symmetric: bool = True

    def to_json(self) -> dict:
        return {
            "rows": {
                str(i): {"delta": [float(v) for v in r.delta], "N": r.N}
                for i, r in self.rows.items()
            },
            "symmetric": self.symmetric,
        }

    @staticmethod
    def from_json(doc: dict) -> "UncertaintySpec":
        rows = {
            int(i): RowUncertainty(delta=np.array(r["delta"], dtype=float), N=int(r["N"]))
            for i, r in doc.get("rows", {}).items()
        }
        return UncertaintySpec(rows=rows, symmetric=bool(doc.get("symmetric", True)))


# ---------------------------------------------------------------------------
# Tail bounds
# ---------------------------------------------------------------------------


def binomial_tail_bound_exact(N: int, p) -> Fraction:
    """B(N, p) as an exact rational.

    With nu = (N+p)/2 and mu = nu - floor(nu):

        B(N, p) = 2^-N [ (1 - mu) C(N, floor(nu)) + sum_{i > floor(nu)} C(N, i) ]

    For integer p >= 1 with p + N even this equals the exact tail
    probability of N fair signs; in general it upper-bounds the tail of
    any sum of independent symmetric [-1,1] terms with unit-capped scales.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    p = Fraction(p)
    if p < 0:
        raise ValueError("p must be >= 0")
    if p > N:
        return Fraction(0)
    nu = Fraction(N + p, 2)
    fl = math.floor(nu)
    mu = nu - fl
    total = (1 - mu) * math.comb(N, fl) + sum(math.comb(N, i) for i in range(fl + 1, N + 1))
    return total / Fraction(2**N)


def _round_outward(value: Fraction) -> float:
    out = float(value)
    if Fraction(out) < value:
        out = math.nextafter(out, math.inf)
    return min(out, 1.0)


def binomial_tail_bound(N: int, p) -> float:
    """Float version of B(N, p), rounded outward so it never understates."""
    return _round_outward(binomial_tail_bound_exact(N, p))


def enumerate_sign_tail(N: int, p) -> Fraction:
    """Exact Pr(sum of N fair +-1 signs >= p): the oracle for B(N, p)."""
    p = Fraction(p)
    count = sum(math.comb(N, k) for k in range(N + 1) if 2 * k - N >= p)
    return Fraction(count, 2**N)


def hoeffding_bound(delta: float, delta_b) -> float:
    """exp(-delta^2 |db|_1^2 / (2 sum db_l^2)), capped at 1."""
    if delta < 0:
        raise ValueError("delta must be >= 0")
    db = np.asarray(delta_b, dtype=float)
    if np.any(db <= 0):
        raise ValueError("scale factors must be positive")
    norm1 = db.sum()
    return float(min(1.0, math.exp(-(delta**2) * norm1**2 / (2.0 * float(db @ db)))))


# ---------------------------------------------------------------------------
# Feasibility classification
# ---------------------------------------------------------------------------


@dataclass
class RowReport:
    row: int  # 1-based
    delta_ratio: float
    robust_feasible: bool
    hoeffding_bound: float
    binomial_bound: float | None  # None when the symmetry hypothesis fails

    def to_json(self) -> dict:
        return {
            "row": self.row,
            "delta_ratio": self.delta_ratio,
            "robust_feasible": self.robust_feasible,
            "hoeffding": self.hoeffding_bound,
            "binomial": self.binomial_bound,
        }


@dataclass
class FeasibilityReport:
    rows: list[RowReport]

    def to_json(self) -> dict:
        return {"rows": [r.to_json() for r in self.rows]}

    @staticmethod
    def from_json(doc: dict) -> "FeasibilityReport":
        return FeasibilityReport(
            rows=[
                RowReport(
                    row=r["row"],
                    delta_ratio=r["delta_ratio"],
                    robust_feasible=r["robust_feasible"],
                    hoeffding_bound=r["hoeffding"],
                    binomial_bound=r["binomial"],
                )
                for r in doc["rows"]
            ]
        )

    def to_text_table(self) -> str:
        """Aligned table with columns matching the JSON field order."""
        header = f"{'row':>6}  {'delta_i':>12}  {'robust':>6}  {'hoeffding':>12}  {'binomial':>12}"
        lines = [header, "-" * len(header)]
        for r in self.rows:
            binom = "-" if r.binomial_bound is None else f"{r.binomial_bound:.6g}"
            lines.append(
                f"{r.row:>6}  {r.delta_ratio:>12.6g}  {str(r.robust_feasible):>6}  "
                f"{r.hoeffding_bound:>12.6g}  {binom:>12}"
            )
        return "\n".join(lines) + "\n"


def feasibility_report(center: CenterTriple, unc: UncertaintySpec) -> FeasibilityReport:
    """Classify each uncertain row of a weighted center.

    delta_i = s_i / |db_i|_1 (identically w_i / (y_i |db_i|_1)); rows with
    delta_i >= 1 are worst-case feasible and report zero violation
    probability; otherwise the Hoeffding bound and, under symmetry, the
    binomial bound B(N_i, delta_i |db_i|_1 / max(db_i)) are evaluated.
    """
    m = len(center.s)
    out = []
    for idx in sorted(unc.rows):
        if not (1 <= idx <= m):
            raise IndexError(f"uncertain row {idx} out of range 1..{m}")
        ru = unc.rows[idx]
        s_i = float(center.s[idx - 1])
        delta_i = s_i / ru.norm1
        if delta_i >= 1.0:
            out.append(RowReport(idx, delta_i, True, 0.0, 0.0 if unc.symmetric else None))
            continue
        hoeff = hoeffding_bound(delta_i, ru.delta)
        binom = None
        if unc.symmetric:
            binom = binomial_tail_bound(ru.N, delta_i * ru.norm1 / ru.max_entry)
        out.append(RowReport(idx, delta_i, False, hoeff, binom))
    return FeasibilityReport(rows=out)


def robust_weight_membership(
    aug: AugmentedLp,
    w: np.ndarray,
    y: np.ndarray,
    unc: UncertaintySpec,
    tol: float = 1e-8,
) -> bool:
    """w_i >= y_i |db_i|_1 for every uncertain row: x(w) is robust feasible.

    The pair must be consistent: s = w / y has to be a reachable slack
    vector (b - s in the range of A).
    """
    w = np.asarray(w, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0) or np.any(w <= 0):
        raise ValueError("w and y must be strictly positive")
    s = w / y
    resid = aug.b - s
    x, *_ = np.linalg.lstsq(aug.A, resid, rcond=None)
    if np.abs(aug.A @ x - resid).max() > tol * (1 + np.abs(aug.b).max()):
        raise ValueError("inconsistent (w, y) pair: w/y is not a reachable slack vector")
    for idx, ru in unc.rows.items():
        if not (1 <= idx <= len(w)):
            raise IndexError(f"uncertain row {idx} out of range")
        if w[idx - 1] < y[idx - 1] * ru.norm1:
            return False
    return True


def delta_ratios(center: CenterTriple, unc: UncertaintySpec) -> dict[int, float]:
    """Both formulas agree on valid centers; the slack form is primary."""
    return {i: float(center.s[i - 1]) / r.norm1 for i, r in unc.rows.items()}


def dumps_report(report: FeasibilityReport) -> str:
    return json.dumps(report.to_json())
