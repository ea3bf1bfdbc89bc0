"""Interactive run orchestration: state machine, persistence, simulated DMs.

A session owns one w-space run.  Interactive sessions alternate between
awaiting_answer (a question is out to the DM) and ready_to_step; simulated
sessions loop internally.  All mutations of one session go through the
store's per-session lock; snapshots are plain JSON documents written
atomically, and a reload reproduces the trace numbers bit for bit.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import time
import uuid
from dataclasses import dataclass, field

import numpy as np

from .cutting_plane import IterateRecord, RunConfig, RunTrace, WSpaceRun
from .errors import PhaseError
from .lp_model import AugmentedLp, augmented_from_json, augmented_to_json, validate
from .prob_bounds import FeasibilityReport, UncertaintySpec, feasibility_report
from .utility_oracles import (
    OracleAnswer,
    SyntheticOracle,
    UtilitySpec,
    approx_gradient,
    default_probe_sizes,
    utility_spec_from_json,
)

SCHEMA_VERSION = 1

PHASE_AWAITING = "awaiting_answer"
PHASE_READY = "ready_to_step"
PHASE_STOPPED = "stopped"


@dataclass
class PendingQuestion:
    """The m+1 pairwise-priority probes (base slacks plus one-at-a-time bumps)."""

    s: np.ndarray
    eps: np.ndarray
    kind: str = "pairwise_priorities"

    def probe_points(self) -> list[list[float]]:
        base = [float(v) for v in self.s]
        probes = [base]
        for i in range(len(self.s)):
            bumped = list(base)
            bumped[i] += float(self.eps[i])
            probes.append(bumped)
        return probes

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "s": [float(v) for v in self.s],
            "eps": [float(v) for v in self.eps],
            "probe_points": self.probe_points(),
        }


@dataclass
class SessionState:
    id: str
    aug: AugmentedLp
    uncertainty: UncertaintySpec
    config: RunConfig
    mode: str  # "interactive" | "simulated"
    utility: UtilitySpec | None
    run: WSpaceRun
    phase: str
    question: PendingQuestion | None
    report: FeasibilityReport | None
    pending_answer: OracleAnswer | None = None
    warnings: list[str] = field(default_factory=list)
    created: float = field(default_factory=time.time)
    updated: float = field(default_factory=time.time)

    @property
    def trace(self) -> RunTrace:
        return self.run.trace

    @property
    def stop_reason(self) -> str | None:
        return self.run.stop_reason


def _new_question(run: WSpaceRun) -> PendingQuestion:
    s = run.current_slacks()
    return PendingQuestion(s=s, eps=default_probe_sizes(s))


def create_session(
    aug: AugmentedLp,
    uncertainty: UncertaintySpec | None = None,
    config: RunConfig | None = None,
    mode: str = "interactive",
    utility: UtilitySpec | None = None,
    w0: np.ndarray | None = None,
    session_id: str | None = None,
) -> SessionState:
    """Validate the problem, center the start weight, and open the session."""
    if mode not in ("interactive", "simulated"):
        raise ValueError("mode must be 'interactive' or 'simulated'")
    if mode == "simulated" and utility is None:
        raise ValueError("simulated mode needs a utility spec")
    report = validate(aug)
    if not report.ok:
        detail = "; ".join(report.messages) or "validation failed"
        if report.recession_direction is not None:
            detail += f" (recession direction {list(report.recession_direction)})"
        raise ValueError(detail)
    config = config or RunConfig()
    uncertainty = uncertainty or UncertaintySpec(rows={})
    run = WSpaceRun(aug, config, w0=w0)
    state = SessionState(
        id=session_id or uuid.uuid4().hex[:12],
        aug=aug,
        uncertainty=uncertainty,
        config=config,
        mode=mode,
        utility=utility,
        run=run,
        phase=PHASE_AWAITING if mode == "interactive" else PHASE_READY,
        question=_new_question(run) if mode == "interactive" else None,
        report=feasibility_report(run.center, uncertainty),
    )
    return state


def _concavity_warning(state: SessionState, s_new: np.ndarray, g_new: np.ndarray) -> str | None:
    """Supergradient maps of concave functions are monotone decreasing:
    (g' - g)'(s' - s) <= 0.  Flag answers violating this against >= 3
    past answers; the latest answer is kept either way."""
    violations = 0
    for rec in state.trace.iterates:
        if rec.g is None:
            continue
        if float((g_new - rec.g) @ (s_new - rec.s)) > 1e-6:
            violations += 1
    if violations >= 3:
        return (
            f"answer at step {len(state.trace.iterates)} contradicts the concavity "
            f"certificate against {violations} earlier answers"
        )
    return None


def submit_answer(state: SessionState, answer) -> SessionState:
    """Accept a priority vector (list of m+1 positive reals) or an OracleAnswer."""
    if state.phase != PHASE_AWAITING:
        raise PhaseError(f"cannot submit an answer in phase {state.phase!r}")
    q = state.question
    m = len(q.s)
    if isinstance(answer, OracleAnswer):
        g = np.asarray(answer.g, dtype=float)
        if g.shape != (m,):
            raise ValueError(f"supergradient must have {m} entries, got {g.shape[0]}")
        oracle_answer = answer
    else:
        p = np.asarray(answer, dtype=float)
        if p.shape != (m + 1,):
            raise ValueError(f"priority vector must have {m + 1} entries, got {p.shape[0]}")
        g = approx_gradient(p, q.eps)
        oracle_answer = OracleAnswer(g=g, satisfied=False)

    warning = _concavity_warning(state, q.s, np.asarray(oracle_answer.g, dtype=float))
    if warning:
        state.warnings.append(warning)

    if oracle_answer.satisfied or np.linalg.norm(oracle_answer.g) <= state.config.grad_tol:
        state.run.submit(oracle_answer)  # records the iterate and stops
        state.phase = PHASE_STOPPED
        state.question = None
    else:
        state.pending_answer = oracle_answer
        state.phase = PHASE_READY
        state.question = None
    state.updated = time.time()
    return state


def step(state: SessionState, store: "SessionStore | None" = None) -> SessionState:
    """Advance the run: one cut + recentering (interactive) or run to stop."""
    if state.phase != PHASE_READY:
        raise PhaseError(f"cannot step in phase {state.phase!r}")

    if state.mode == "interactive":
        answer = state.pending_answer
        if answer is None:
            raise PhaseError("no consumed answer to step with")
        state.run.submit(answer)
        state.pending_answer = None
        if state.run.stopped:
            state.phase = PHASE_STOPPED
            state.question = None
        else:
            state.phase = PHASE_AWAITING
            state.question = _new_question(state.run)
    else:
        oracle = SyntheticOracle(state.utility)
        strategy = state.run.strategy_for(oracle)
        while not state.run.stopped:
            ans = oracle(state.run.current_slacks())
            state.run.submit(ans, strategy=strategy)
        state.phase = PHASE_STOPPED

    state.report = feasibility_report(state.run.center, state.uncertainty)
    state.updated = time.time()
    if store is not None:
        store.save(state)
    return state


# ---------------------------------------------------------------------------
# Snapshots
# ---------------------------------------------------------------------------


def session_to_json(state: SessionState) -> dict:
    doc = {
        "schema": SCHEMA_VERSION,
        "id": state.id,
        "mode": state.mode,
        "phase": state.phase,
        "stop_reason": state.stop_reason,
        "created": state.created,
        "updated": state.updated,
        "problem": augmented_to_json(state.aug),
        "uncertainty": state.uncertainty.to_json(),
        "config": {
            "strategy": state.config.strategy,
            "variant": state.config.variant,
            "cut_kind": state.config.cut_kind,
            "max_iter": state.config.max_iter,
            "grad_tol": state.config.grad_tol,
            "stationary_tol": state.config.stationary_tol,
            "eps_switch": state.config.eps_switch,
            "positivity_floor": state.config.positivity_floor,
            "forced_weights": state.config.forced_weights,
            "new_row_weight_rule": state.config.new_row_weight_rule,
            "seed": state.config.seed,
        },
        "utility": state.utility.to_json() if state.utility is not None else None,
        "question": state.question.to_json() if state.question else None,
        "pending_answer": (
            None
            if state.pending_answer is None
            else {
                "g": [float(v) for v in state.pending_answer.g],
                "satisfied": state.pending_answer.satisfied,
                "value": state.pending_answer.value,
            }
        ),
        "current": {
            "w": [float(v) for v in state.run.w],
            "x": [float(v) for v in state.run.center.x],
            "s": [float(v) for v in state.run.center.s],
            "y": [float(v) for v in state.run.center.y],
            "objective": state.aug.objective(state.run.center.x),
            "iteration": state.run.k,
        },
        "y0": [float(v) for v in state.run.y0],
        "trace": [rec.to_json() for rec in state.trace.iterates],
        # per-iterate series precomputed here so UIs can display history
        # without doing numerical work of their own
        "history": [
            {
                "k": rec.k,
                "objective": state.aug.objective(rec.x),
                "value": None if rec.value is None else float(rec.value),
            }
            for rec in state.trace.iterates
        ],
        "report": state.report.to_json() if state.report else None,
        "warnings": list(state.warnings),
        "row_labels": list(state.aug.row_labels),
    }
    return doc


def session_from_json(doc: dict) -> SessionState:
    if doc.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported session schema {doc.get('schema')!r}")
    aug = augmented_from_json(doc["problem"])
    cfg_doc = doc["config"]
    config = RunConfig(
        strategy=cfg_doc["strategy"],
        variant=cfg_doc["variant"],
        cut_kind=cfg_doc["cut_kind"],
        max_iter=cfg_doc["max_iter"],
        grad_tol=cfg_doc["grad_tol"],
        stationary_tol=cfg_doc.get("stationary_tol"),
        eps_switch=cfg_doc["eps_switch"],
        positivity_floor=cfg_doc.get("positivity_floor", 1e-10),
        forced_weights=cfg_doc.get("forced_weights"),
        new_row_weight_rule=cfg_doc.get("new_row_weight_rule", "paper"),
        seed=cfg_doc["seed"],
    )
    utility = utility_spec_from_json(doc["utility"]) if doc.get("utility") else None
    uncertainty = UncertaintySpec.from_json(doc["uncertainty"])

    run = WSpaceRun.__new__(WSpaceRun)
    run.aug = aug
    run.config = config
    run.trace = RunTrace(
        iterates=[IterateRecord.from_json(r) for r in doc["trace"]],
        stop_reason=doc.get("stop_reason"),
        y0=np.array(doc["y0"], dtype=float),
    )
    run.y0 = np.array(doc["y0"], dtype=float)
    run.stop_reason = doc.get("stop_reason")
    run._strategy_cache = None
    run._rng = np.random.default_rng(config.seed)
    run._proj_Q = None
    run.w = np.array(doc["current"]["w"], dtype=float)

    from .cutting_plane import CutHalfspace, CutSimplex  # late import: cycle-free
    from .wac_solver import CenterTriple

    run.center = CenterTriple(
        x=np.array(doc["current"]["x"], dtype=float),
        y=np.array(doc["current"]["y"], dtype=float),
        s=np.array(doc["current"]["s"], dtype=float),
        w=run.w.copy(),
        kkt_residual=float(np.abs(aug.A.T @ np.array(doc["current"]["y"])).max()),
    )
    run.simplex = CutSimplex(aug.num_rows, positivity_floor=config.positivity_floor)
    run._history = []
    for rec in run.trace.iterates:
        if rec.g is not None:
            run._history.append((rec.s.copy(), rec.g.copy(), rec.x.copy()))
        if rec.u is not None:
            run.simplex.add(
                CutHalfspace(u=rec.u.copy(), w_anchor=rec.w.copy(), rhs=float(rec.u @ rec.w))
            )

    pending = None
    if doc.get("pending_answer"):
        pa = doc["pending_answer"]
        pending = OracleAnswer(
            g=np.array(pa["g"], dtype=float), satisfied=pa["satisfied"], value=pa["value"]
        )

    state = SessionState(
        id=doc["id"],
        aug=aug,
        uncertainty=uncertainty,
        config=config,
        mode=doc["mode"],
        utility=utility,
        run=run,
        phase=doc["phase"],
        question=None,
        report=FeasibilityReport.from_json(doc["report"]) if doc.get("report") else None,
        pending_answer=pending,
        warnings=list(doc.get("warnings", [])),
        created=doc["created"],
    )
    state.updated = doc["updated"]
    if doc.get("question"):
        q = doc["question"]
        state.question = PendingQuestion(
            s=np.array(q["s"], dtype=float), eps=np.array(q["eps"], dtype=float), kind=q["kind"]
        )
    return state


def fork_session(
    state: SessionState,
    iteration: int,
    mode: str | None = None,
    session_id: str | None = None,
) -> SessionState:
    """New session starting from the chosen iterate's weight vector.

    The original session is untouched; forking a stopped session yields a
    live one awaiting its first answer.
    """
    if not (0 <= iteration < len(state.trace.iterates)):
        raise IndexError(
            f"iteration {iteration} out of range 0..{len(state.trace.iterates) - 1}"
        )
    w0 = state.trace.iterates[iteration].w.copy()
    return create_session(
        aug=state.aug,
        uncertainty=state.uncertainty,
        config=state.config,
        mode=mode or state.mode,
        utility=state.utility,
        w0=w0,
        session_id=session_id,
    )


def export_session(state: SessionState, fmt: str = "json") -> str:
    """Lossless snapshot; 'jsonl-trace' emits one iterate per line."""
    if fmt == "json":
        return json.dumps(session_to_json(state), sort_keys=True)
    if fmt == "jsonl-trace":
        return state.trace.to_jsonl()
    raise ValueError(f"unknown export format {fmt!r}")


# ---------------------------------------------------------------------------
# Store: one JSON file per session, atomic write-rename, single writer
# ---------------------------------------------------------------------------


class SessionStore:
    def __init__(self, directory: str):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)
        self._sessions: dict[str, SessionState] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _path(self, session_id: str) -> str:
        return os.path.join(self.directory, f"{session_id}.json")

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def save(self, state: SessionState):
        self._sessions[state.id] = state
        payload = json.dumps(session_to_json(state), sort_keys=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(payload)
            os.replace(tmp, self._path(state.id))
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    def get(self, session_id: str) -> SessionState | None:
        if session_id in self._sessions:
            return self._sessions[session_id]
        path = self._path(session_id)
        if not os.path.exists(path):
            return None
        with open(path) as fh:
            state = session_from_json(json.load(fh))
        self._sessions[session_id] = state
        return state

    def ids(self) -> list[str]:
        disk = {
            name[: -len(".json")]
            for name in os.listdir(self.directory)
            if name.endswith(".json")
        }
        return sorted(disk | set(self._sessions))
