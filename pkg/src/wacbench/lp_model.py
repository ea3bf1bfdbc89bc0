"""LP ingestion and conversion to the all-inequality form used by the solver.

The pipeline is::

    parse_mps -> LpInstance -> to_inequality_form -> LpInstance (max c'x, Ax<=b, x free)
              -> embed_objective -> AugmentedLp (objective row appended)
              -> validate

Row and variable indices in all *external* artifacts (JSON, CLI, reports)
are 1-based; in-memory numpy arrays are 0-based.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .errors import EmptyInteriorError, MpsParseError, UnboundedRegionError

INF = math.inf

ROW_KINDS = ("<=", ">=", "=")

_MPS_KIND = {"L": "<=", "G": ">=", "E": "="}
_KIND_MPS = {v: k for k, v in _MPS_KIND.items()}


@dataclass
class LpInstance:
    """A dense LP: optimize <c,x> subject to A x (row_kinds) b, bounds on x."""

    name: str
    objective_sense: str  # "min" | "max"
    c: np.ndarray
    A: np.ndarray
    row_kinds: list[str]
    b: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    row_names: list[str] = field(default_factory=list)
    col_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.b = np.asarray(self.b, dtype=float)
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        m, n = self.A.shape
        if self.c.shape != (n,):
            raise ValueError(f"c must have shape ({n},), got {self.c.shape}")
        if self.b.shape != (m,):
            raise ValueError(f"b must have shape ({m},), got {self.b.shape}")
        if len(self.row_kinds) != m:
            raise ValueError(f"row_kinds must have length {m}")
        bad = [k for k in self.row_kinds if k not in ROW_KINDS]
        if bad:
            raise ValueError(f"unknown row kinds {bad}")
        if self.objective_sense not in ("min", "max"):
            raise ValueError("objective_sense must be 'min' or 'max'")
        if self.lower.shape != (n,) or self.upper.shape != (n,):
            raise ValueError("bounds must have length n")
        finite = np.isfinite(self.lower) & np.isfinite(self.upper)
        if np.any(self.lower[finite] > self.upper[finite]):
            raise ValueError("some lower bound exceeds its upper bound")
        if not self.row_names:
            self.row_names = [f"R{i + 1}" for i in range(m)]
        if not self.col_names:
            self.col_names = [f"C{j + 1}" for j in range(n)]

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]

    @property
    def num_cols(self) -> int:
        return self.A.shape[1]


@dataclass
class AugmentedLp:
    """All-<= system Ax <= b whose last row is the embedded objective -c'x <= -v."""

    A: np.ndarray
    b: np.ndarray
    v: float
    row_labels: list[str]
    c: np.ndarray  # objective vector of the source inequality form
    name: str = ""

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.b = np.asarray(self.b, dtype=float)
        self.c = np.asarray(self.c, dtype=float)
        if self.b.shape[0] != self.A.shape[0]:
            raise ValueError("A and b row counts differ")
        if len(self.row_labels) != self.A.shape[0]:
            raise ValueError("row_labels length mismatch")

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]

    @property
    def num_cols(self) -> int:
        return self.A.shape[1]

    def slack(self, x: np.ndarray) -> np.ndarray:
        return self.b - self.A @ x

    def objective(self, x: np.ndarray) -> float:
        """Original objective <c,x>; equals v + slack of the embedded row."""
        return float(self.c @ x)


# ---------------------------------------------------------------------------
# MPS parsing / writing
# ---------------------------------------------------------------------------

_SECTIONS = {"NAME", "OBJSENSE", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "ENDATA"}

_SUPPORTED_BOUND_KEYS = {"UP", "LO", "FX", "FR", "MI", "PL"}


def parse_mps(text: str) -> LpInstance:
    """Parse a fixed- or free-format MPS document into an LpInstance.

    Coefficients are kept exactly as read.  RHS entries not listed default
    to 0; variables without BOUNDS entries default to [0, +inf).  RANGES
    rows are split into two inequality rows.
    """
    name = ""
    sense = "min"
    obj_row: str | None = None
    row_kind: dict[str, str] = {}
    row_order: list[str] = []
    col_order: list[str] = []
    col_index: dict[str, int] = {}
    entries: dict[str, dict[int, float]] = {}  # row -> {col: coeff}
    obj_coeffs: dict[int, float] = {}
    rhs: dict[str, float] = {}
    ranges: dict[str, float] = {}
    lower: dict[int, float] = {}
    upper: dict[int, float] = {}

    section = None
    expect_objsense_value = False

    def fail(msg: str, ln: int):
        raise MpsParseError(msg, line_no=ln)

    def num(tok: str, ln: int) -> float:
        try:
            return float(tok.replace("D", "E").replace("d", "e"))
        except ValueError:
            fail(f"bad numeric field {tok!r}", ln)

    lines = text.splitlines()
    for ln, raw in enumerate(lines, start=1):
        if not raw.strip() or raw.lstrip().startswith("*"):
            continue
        is_header = not raw[0].isspace()
        toks = raw.split()
        if is_header:
            head = toks[0].upper()
            if head not in _SECTIONS:
                fail(f"malformed section header {toks[0]!r}", ln)
            if head == "NAME":
                name = toks[1] if len(toks) > 1 else ""
                section = None
            elif head == "ENDATA":
                break
            else:
                section = head
                expect_objsense_value = head == "OBJSENSE"
            continue

        if section == "OBJSENSE":
            if expect_objsense_value:
                val = toks[0].upper()
                if val in ("MIN", "MINIMIZE"):
                    sense = "min"
                elif val in ("MAX", "MAXIMIZE"):
                    sense = "max"
                else:
                    fail(f"unknown OBJSENSE {toks[0]!r}", ln)
                expect_objsense_value = False
            continue

        if section == "ROWS":
            if len(toks) < 2:
                fail("ROWS entry needs a type and a name", ln)
            kind, rname = toks[0].upper(), toks[1]
            if rname in row_kind or rname == obj_row:
                fail(f"duplicate row name {rname!r}", ln)
            if kind == "N":
                if obj_row is None:
                    obj_row = rname
                # subsequent N rows are free rows; recorded nowhere
                continue
            if kind not in _MPS_KIND:
                fail(f"unknown row type {toks[0]!r}", ln)
            row_kind[rname] = _MPS_KIND[kind]
            row_order.append(rname)
            entries[rname] = {}
            continue

        if section == "COLUMNS":
            if len(toks) >= 3 and toks[1].upper() == "'MARKER'":
                fail("integer MARKER sections are not supported", ln)
            cname = toks[0]
            if cname not in col_index:
                col_index[cname] = len(col_order)
                col_order.append(cname)
            j = col_index[cname]
            pairs = toks[1:]
            if len(pairs) % 2 != 0:
                fail("COLUMNS entry needs (row, value) pairs", ln)
            for rname, val in zip(pairs[::2], pairs[1::2]):
                value = num(val, ln)
                if rname == obj_row:
                    obj_coeffs[j] = obj_coeffs.get(j, 0.0) + value
                elif rname in entries:
                    entries[rname][j] = entries[rname].get(j, 0.0) + value
                else:
                    fail(f"reference to undeclared row {rname!r}", ln)
            continue

        if section in ("RHS", "RANGES"):
            # field 1 is the (ignored) set name unless it names a row directly
            pairs = toks[1:] if toks[0] not in entries and toks[0] != obj_row else toks
            if len(pairs) % 2 != 0:
                fail(f"{section} entry needs (row, value) pairs", ln)
            target = rhs if section == "RHS" else ranges
            for rname, val in zip(pairs[::2], pairs[1::2]):
                if rname == obj_row and section == "RHS":
                    continue  # objective offset: ignored
                if rname not in entries:
                    fail(f"reference to undeclared row {rname!r}", ln)
                target[rname] = num(val, ln)
            continue

        if section == "BOUNDS":
            key = toks[0].upper()
            if key not in _SUPPORTED_BOUND_KEYS:
                fail(f"unsupported BOUNDS key {toks[0]!r}", ln)
            needs_value = key in ("UP", "LO", "FX")
            min_len = 4 if needs_value else 3
            if len(toks) < min_len:
                fail("short BOUNDS entry", ln)
            cname = toks[2]
            if cname not in col_index:
                fail(f"reference to undeclared column {cname!r}", ln)
            j = col_index[cname]
            if key == "UP":
                upper[j] = num(toks[3], ln)
            elif key == "LO":
                lower[j] = num(toks[3], ln)
            elif key == "FX":
                lower[j] = upper[j] = num(toks[3], ln)
            elif key == "FR":
                lower[j], upper[j] = -INF, INF
            elif key == "MI":
                lower[j] = -INF
            elif key == "PL":
                upper[j] = INF
            continue

        if section is None:
            fail(f"data line outside any section: {raw.strip()!r}", ln)

    if obj_row is None:
        raise MpsParseError("no objective (N) row declared")

    n = len(col_order)
    out_names: list[str] = []
    out_kinds: list[str] = []
    out_rows: list[np.ndarray] = []
    out_b: list[float] = []

    for rname in row_order:
        row = np.zeros(n)
        for j, vv in entries[rname].items():
            row[j] = vv
        bval = rhs.get(rname, 0.0)
        kind = row_kind[rname]
        if rname in ranges:
            r = ranges[rname]
            if kind == "=" and r < 0:
                raise MpsParseError(
                    f"negative RANGES value on equality row {rname!r} is not supported"
                )
            # split into a two-sided pair of inequalities
            if kind == "<=":
                lo, hi = bval - abs(r), bval
            elif kind == ">=":
                lo, hi = bval, bval + abs(r)
            else:  # "=", r >= 0
                lo, hi = bval, bval + r
            out_names.append(rname)
            out_kinds.append("<=")
            out_rows.append(row)
            out_b.append(hi)
            out_names.append(rname + "#lo")
            out_kinds.append(">=")
            out_rows.append(row.copy())
            out_b.append(lo)
        else:
            out_names.append(rname)
            out_kinds.append(kind)
            out_rows.append(row)
            out_b.append(bval)

    cvec = np.zeros(n)
    for j, vv in obj_coeffs.items():
        cvec[j] = vv
    lo = np.zeros(n)
    hi = np.full(n, INF)
    for j, vv in lower.items():
        lo[j] = vv
    for j, vv in upper.items():
        hi[j] = vv

    return LpInstance(
        name=name,
        objective_sense=sense,
        c=cvec,
        A=np.vstack(out_rows) if out_rows else np.zeros((0, n)),
        row_kinds=out_kinds,
        b=np.array(out_b),
        lower=lo,
        upper=hi,
        row_names=out_names,
        col_names=list(col_order),
    )


def write_mps(inst: LpInstance) -> str:
    """Serialize an instance back to free-format MPS (exact float fields)."""
    out = io.StringIO()
    out.write(f"NAME {inst.name}\n" if inst.name else "NAME\n")
    if inst.objective_sense == "max":
        out.write("OBJSENSE\n    MAX\n")
    out.write("ROWS\n")
    out.write(" N  OBJ\n")
    for kind, rname in zip(inst.row_kinds, inst.row_names):
        out.write(f" {_KIND_MPS[kind]}  {rname}\n")
    out.write("COLUMNS\n")
    for j, cname in enumerate(inst.col_names):
        if inst.c[j] != 0.0:
            out.write(f"    {cname}  OBJ  {float(inst.c[j])!r}\n")
        for i, rname in enumerate(inst.row_names):
            if inst.A[i, j] != 0.0:
                out.write(f"    {cname}  {rname}  {float(inst.A[i, j])!r}\n")
    out.write("RHS\n")
    for i, rname in enumerate(inst.row_names):
        if inst.b[i] != 0.0:
            out.write(f"    RHS  {rname}  {float(inst.b[i])!r}\n")
    out.write("BOUNDS\n")
    for j, cname in enumerate(inst.col_names):
        lo, hi = inst.lower[j], inst.upper[j]
        if lo == 0.0 and hi == INF:
            continue
        if lo == hi:
            out.write(f" FX BND  {cname}  {float(lo)!r}\n")
            continue
        if lo == -INF and hi == INF:
            out.write(f" FR BND  {cname}\n")
            continue
        if lo == -INF:
            out.write(f" MI BND  {cname}\n")
        elif lo != 0.0:
            out.write(f" LO BND  {cname}  {float(lo)!r}\n")
        if hi != INF:
            out.write(f" UP BND  {cname}  {float(hi)!r}\n")
    out.write("ENDATA\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# Conversion to the all-inequality form (standard equality form, then dual)
# ---------------------------------------------------------------------------


def to_standard_equality_form(inst: LpInstance):
    """Rewrite as min <c,x>, Ax = b, x >= 0.

    Steps, in order: flip max to min; shift finite lower bounds to zero;
    mirror columns with only an upper bound; split free columns into +/-
    parts; append bound rows for remaining finite upper bounds; add slack
    or surplus columns for inequality rows.

    Returns (c, A, b, col_labels, obj_offset, sense_flipped).
    """
    m, n = inst.num_rows, inst.num_cols
    c = inst.c.copy()
    sense_flipped = inst.objective_sense == "max"
    if sense_flipped:
        c = -c

    A = inst.A.copy()
    b = inst.b.copy()
    kinds = list(inst.row_kinds)
    row_names = list(inst.row_names)

    cols: list[np.ndarray] = []
    ccoef: list[float] = []
    labels: list[str] = []
    upper_rows: list[tuple[int, float]] = []  # (std column index, bound value)
    offset = 0.0

    for j in range(n):
        lo, hi = inst.lower[j], inst.upper[j]
        nm = inst.col_names[j]
        col = A[:, j]
        if math.isfinite(lo):
            # x = lo + x', x' >= 0
            if lo != 0.0:
                b = b - col * lo
                offset += c[j] * lo
            if math.isfinite(hi):
                upper_rows.append((len(cols), hi - lo))
            cols.append(col.copy())
            ccoef.append(c[j])
            labels.append(f"x:{nm}")
        elif math.isfinite(hi):
            # x = hi - x'', x'' >= 0  (mirror)
            b = b - col * hi
            offset += c[j] * hi
            cols.append(-col)
            ccoef.append(-c[j])
            labels.append(f"xm:{nm}")
        else:
            # free: x = x+ - x-
            cols.append(col.copy())
            ccoef.append(c[j])
            labels.append(f"xp:{nm}")
            cols.append(-col)
            ccoef.append(-c[j])
            labels.append(f"xn:{nm}")

    A2 = np.column_stack(cols) if cols else np.zeros((m, 0))
    nstd = A2.shape[1]

    # bound rows x'_j <= u  appended as new <= rows
    if upper_rows:
        bound_block = np.zeros((len(upper_rows), nstd))
        for i, (jstd, u) in enumerate(upper_rows):
            bound_block[i, jstd] = 1.0
            b = np.append(b, u)
            kinds.append("<=")
            row_names.append(f"UB:{labels[jstd]}")
        A2 = np.vstack([A2, bound_block])

    # slack / surplus columns for inequality rows
    slack_labels = []
    slack_cols = []
    for i, kind in enumerate(kinds):
        if kind == "=":
            continue
        col = np.zeros(A2.shape[0])
        col[i] = 1.0 if kind == "<=" else -1.0
        slack_cols.append(col)
        slack_labels.append(f"s:{row_names[i]}")
    if slack_cols:
        A2 = np.hstack([A2, np.column_stack(slack_cols)])
        ccoef.extend([0.0] * len(slack_cols))
        labels.extend(slack_labels)

    return np.array(ccoef), A2, b, labels, offset, sense_flipped, row_names


def to_inequality_form(inst: LpInstance) -> LpInstance:
    """Convert to max <c,x>, Ax <= b with x free, via the standard-form dual.

    The primal min{<c~,x~> : A~ x~ = b~, x~ >= 0} has dual
    max{<b~,y> : A~' y <= c~} with y free, which is exactly the shape the
    weighted-center machinery needs.  Row i of the result corresponds to
    standard-form variable i; column j to equality row j.
    """
    cstd, Astd, bstd, var_labels, offset, flipped, eq_names = to_standard_equality_form(inst)
    dual = LpInstance(
        name=inst.name + "-ineq" if inst.name else "ineq",
        objective_sense="max",
        c=bstd.copy(),
        A=Astd.T.copy(),
        row_kinds=["<="] * Astd.shape[1],
        b=cstd.copy(),
        lower=np.full(Astd.shape[0], -INF),
        upper=np.full(Astd.shape[0], INF),
        row_names=list(var_labels),
        col_names=[f"y:{nm}" for nm in eq_names],
    )
    # Dual optimum equals primal optimum; map back to the original objective:
    # original = (dual optimum + offset), negated again if the sense was max.
    dual.origin = {  # type: ignore[attr-defined]
        "objective_offset": offset,
        "sense_flipped": flipped,
        "source_name": inst.name,
    }
    return dual


def original_objective_value(ineq: LpInstance, dual_value: float) -> float:
    """Translate the inequality-form objective back to the parsed instance's."""
    info = getattr(ineq, "origin", None)
    if not info:
        return dual_value
    val = dual_value + info["objective_offset"]
    return -val if info["sense_flipped"] else val


# ---------------------------------------------------------------------------
# Objective embedding and validation
# ---------------------------------------------------------------------------


def nominal_optimum(ineq: LpInstance) -> float:
    """Solve max <c,x> s.t. Ax <= b (x free) with an off-the-shelf LP solver."""
    res = scipy.optimize.linprog(
        -ineq.c,
        A_ub=ineq.A,
        b_ub=ineq.b,
        bounds=[(None, None)] * ineq.num_cols,
        method="highs",
    )
    if not res.success:
        if res.status == 3:
            raise UnboundedRegionError(f"nominal LP is unbounded: {res.message}")
        raise EmptyInteriorError(f"nominal LP solve failed: {res.message}")
    return float(-res.fun)


def default_floor(optimum: float) -> float:
    return optimum - max(1.0, 1e-3 * abs(optimum))


def embed_objective(ineq: LpInstance, v: float | None = None) -> AugmentedLp:
    """Append the objective row -c'x <= -v; its slack is <c,x> - v.

    With v omitted, v = optimum - max(1, 1e-3 |optimum|) keeps the interior
    nonempty while staying near-optimal.
    """
    if any(k != "<=" for k in ineq.row_kinds):
        raise ValueError("embed_objective requires an all-<= instance")
    opt = nominal_optimum(ineq)
    if v is None:
        v = default_floor(opt)
    elif v >= opt:
        raise ValueError(
            f"objective floor v={v} is not strictly below the nominal optimum {opt}; "
            "the interior would be empty"
        )
    A = np.vstack([ineq.A, -ineq.c])
    b = np.append(ineq.b, -v)
    labels = list(ineq.row_names) + ["objective-floor"]
    return AugmentedLp(A=A, b=b, v=float(v), row_labels=labels, c=ineq.c.copy(), name=ineq.name)


def add_bounding_box(inst: LpInstance, box: float = 1e7) -> LpInstance:
    """Opt-in repair for unbounded regions: append |x_j| <= box rows.

    Weighted centers need a bounded polytope; call this when validate()
    reports a recession direction and re-validate.
    """
    n = inst.num_cols
    eye = np.eye(n)
    A = np.vstack([inst.A, eye, -eye])
    b = np.concatenate([inst.b, np.full(2 * n, float(box))])
    names = list(inst.row_names)
    names += [f"box+:{c}" for c in inst.col_names] + [f"box-:{c}" for c in inst.col_names]
    return LpInstance(
        name=inst.name,
        objective_sense=inst.objective_sense,
        c=inst.c,
        A=A,
        row_kinds=list(inst.row_kinds) + ["<="] * (2 * n),
        b=b,
        lower=inst.lower,
        upper=inst.upper,
        row_names=names,
        col_names=list(inst.col_names),
    )


@dataclass
class ValidationReport:
    rank: int
    full_column_rank: bool
    interior_point: np.ndarray | None
    interior_empty: bool
    bounded: bool
    recession_direction: np.ndarray | None
    messages: list[str]

    @property
    def ok(self) -> bool:
        return self.full_column_rank and not self.interior_empty and self.bounded


def numerical_rank(A: np.ndarray, rel_tol: float = 1e-10) -> int:
    sv = np.linalg.svd(A, compute_uv=False)
    if sv.size == 0:
        return 0
    return int(np.sum(sv > rel_tol * sv[0]))


def _recession_direction(A: np.ndarray) -> np.ndarray | None:
    """A nonzero d with Ad <= 0, or None.  Scans signed coordinates in a box."""
    m, n = A.shape
    for j in range(n):
        for sgn in (1.0, -1.0):
            cobj = np.zeros(n)
            cobj[j] = -sgn  # maximize sgn * d_j
            res = scipy.optimize.linprog(
                cobj, A_ub=A, b_ub=np.zeros(m), bounds=[(-1, 1)] * n, method="highs"
            )
            if res.success and -res.fun > 1e-9:
                return res.x
    return None


def validate(aug: AugmentedLp) -> ValidationReport:
    """Check full column rank, nonempty interior, and boundedness.

    Boundedness is certified by the recession-cone test: with full column
    rank, {d : Ad <= 0} = {0} iff some strictly positive y solves A'y = 0,
    which the centric-vector search provides.  Failures are report entries,
    not exceptions.
    """
    from .wac_solver import find_interior_point, centric_y  # local: avoid cycle

    msgs: list[str] = []
    rank = numerical_rank(aug.A)
    full = rank == aug.num_cols
    if not full:
        msgs.append(f"rank {rank} < n = {aug.num_cols}: A lacks full column rank")

    interior = None
    interior_empty = False
    try:
        interior = find_interior_point(aug)
    except EmptyInteriorError as exc:
        interior_empty = True
        msgs.append(str(exc))

    bounded = True
    direction = None
    try:
        centric_y(aug)
    except UnboundedRegionError as exc:
        bounded = False
        direction = _recession_direction(aug.A)
        msgs.append(f"{exc}; recession direction {direction}")

    return ValidationReport(
        rank=rank,
        full_column_rank=full,
        interior_point=interior,
        interior_empty=interior_empty,
        bounded=bounded,
        recession_direction=direction,
        messages=msgs,
    )


# ---------------------------------------------------------------------------
# JSON serialization (column-major matrices, "+inf"/"-inf" sentinels)
# ---------------------------------------------------------------------------


def _num_out(x: float):
    if x == INF:
        return "+inf"
    if x == -INF:
        return "-inf"
    return x


def _num_in(x) -> float:
    if x == "+inf":
        return INF
    if x == "-inf":
        return -INF
    return float(x)


def _matrix_out(A: np.ndarray) -> list[list[float]]:
    return [[float(v) for v in A[:, j]] for j in range(A.shape[1])]


def _matrix_in(cols: list[list[float]]) -> np.ndarray:
    return np.array(cols, dtype=float).T if cols else np.zeros((0, 0))


def instance_to_json(inst: LpInstance) -> dict:
    return {
        "name": inst.name,
        "objective_sense": inst.objective_sense,
        "c": [float(v) for v in inst.c],
        "A": _matrix_out(inst.A),
        "row_kinds": list(inst.row_kinds),
        "b": [float(v) for v in inst.b],
        "lower": [_num_out(v) for v in inst.lower],
        "upper": [_num_out(v) for v in inst.upper],
        "row_names": list(inst.row_names),
        "col_names": list(inst.col_names),
    }


def instance_from_json(doc: dict) -> LpInstance:
    return LpInstance(
        name=doc["name"],
        objective_sense=doc["objective_sense"],
        c=np.array(doc["c"], dtype=float),
        A=_matrix_in(doc["A"]),
        row_kinds=list(doc["row_kinds"]),
        b=np.array(doc["b"], dtype=float),
        lower=np.array([_num_in(v) for v in doc["lower"]]),
        upper=np.array([_num_in(v) for v in doc["upper"]]),
        row_names=list(doc.get("row_names", [])),
        col_names=list(doc.get("col_names", [])),
    )


def augmented_to_json(aug: AugmentedLp) -> dict:
    return {
        "A": _matrix_out(aug.A),
        "b": [float(v) for v in aug.b],
        "v": aug.v,
        "row_labels": list(aug.row_labels),
        "c": [float(v) for v in aug.c],
        "name": aug.name,
    }


def augmented_from_json(doc: dict) -> AugmentedLp:
    return AugmentedLp(
        A=_matrix_in(doc["A"]),
        b=np.array(doc["b"], dtype=float),
        v=float(doc["v"]),
        row_labels=list(doc["row_labels"]),
        c=np.array(doc["c"], dtype=float),
        name=doc.get("name", ""),
    )


def dumps(obj) -> str:
    if isinstance(obj, LpInstance):
        return json.dumps(instance_to_json(obj))
    if isinstance(obj, AugmentedLp):
        return json.dumps(augmented_to_json(obj))
    raise TypeError(type(obj))
