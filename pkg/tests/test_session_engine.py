import json

import numpy as np
import pytest

from wacbench import session_engine as se
from wacbench import utility_oracles as uo
from wacbench.cutting_plane import RunConfig
from wacbench.errors import PhaseError
from wacbench.lp_model import AugmentedLp
from wacbench.prob_bounds import RowUncertainty, UncertaintySpec


def log_spec():
    return uo.LogWeighted([0.2, 0.3, 0.5])


# ---------------------------------------------------------------------------
# create_session
# ---------------------------------------------------------------------------


def test_create_simulated_session(tri):
    st = se.create_session(tri, mode="simulated", utility=log_spec())
    assert st.phase == se.PHASE_READY
    assert st.run.center.x[0] == pytest.approx(2 / 3, abs=1e-9)
    np.testing.assert_allclose(st.run.w, [1 / 3, 1 / 3, 1 / 3])


def test_create_interactive_session_question(tri):
    st = se.create_session(tri, mode="interactive")
    assert st.phase == se.PHASE_AWAITING
    q = st.question
    probes = q.probe_points()
    assert len(probes) == len(q.s) + 1
    np.testing.assert_allclose(probes[0], st.run.center.s)
    for i, probe in enumerate(probes[1:]):
        diff = np.array(probe) - np.array(probes[0])
        assert diff[i] == pytest.approx(q.eps[i])
        assert np.count_nonzero(diff) == 1


def test_create_rejects_invalid_problem():
    unbounded = AugmentedLp(
        A=np.array([[1.0]]), b=np.array([1.0]), v=0.0, row_labels=["a"], c=np.array([1.0])
    )
    with pytest.raises(ValueError, match="recession direction"):
        se.create_session(unbounded, mode="interactive")


# ---------------------------------------------------------------------------
# submit_answer / step
# ---------------------------------------------------------------------------


def test_equal_priorities_stop_immediately(tri):
    st = se.create_session(tri, mode="interactive")
    m = len(st.question.s)
    st = se.submit_answer(st, [1.0] * (m + 1))
    assert st.phase == se.PHASE_STOPPED
    assert st.stop_reason == "gradient_tolerance"


def test_satisfied_answer_stops(tri):
    st = se.create_session(tri, mode="interactive")
    st = se.submit_answer(st, uo.OracleAnswer(g=np.array([1.0, 0, 0]), satisfied=True))
    assert st.phase == se.PHASE_STOPPED and st.stop_reason == "dm_satisfied"


def test_wrong_dimension_and_nonpositive_priorities(tri):
    st = se.create_session(tri, mode="interactive")
    with pytest.raises(ValueError, match="entries"):
        se.submit_answer(st, uo.OracleAnswer(g=np.array([1.0, 0.0])))
    with pytest.raises(ValueError, match="positive"):
        se.submit_answer(st, [1.0, -1.0, 1.0, 1.0])
    with pytest.raises(PhaseError):
        se.step(st)  # still awaiting


def test_interactive_loop_reaches_optimum(tri):
    st = se.create_session(tri, mode="interactive", config=RunConfig(max_iter=60))
    spec = log_spec()
    guard = 0
    while st.phase != se.PHASE_STOPPED and guard < 80:
        if st.phase == se.PHASE_AWAITING:
            _, g = uo.evaluate_and_supergradient(spec, st.question.s)
            st = se.submit_answer(st, uo.OracleAnswer(g=g))
        else:
            st = se.step(st)
        guard += 1
    assert st.phase == se.PHASE_STOPPED
    np.testing.assert_allclose(st.run.center.s, [0.2, 0.8, 0.8], atol=1e-3)
    assert len(st.trace.iterates) >= 1
    assert st.report is not None


def test_step_in_wrong_phase(tri):
    st = se.create_session(tri, mode="simulated", utility=log_spec())
    st = se.step(st)
    assert st.phase == se.PHASE_STOPPED
    with pytest.raises(PhaseError):
        se.step(st)


def test_simulated_session_recomputes_report(tri):
    unc = UncertaintySpec(rows={1: RowUncertainty(delta=[0.05] * 4, N=4)})
    st = se.create_session(tri, mode="simulated", utility=log_spec(), uncertainty=unc)
    st = se.step(st)
    row = st.report.rows[0]
    assert row.delta_ratio == pytest.approx(st.run.center.s[0] / 0.2, rel=1e-9)


def test_contradiction_warning_kept_not_rejected(tri):
    # the triangle's slack line is 1-D: pushing s3 up while reporting a
    # growing derivative violates supergradient monotonicity against every
    # earlier answer once three of them exist
    st = se.create_session(tri, mode="interactive", config=RunConfig(max_iter=60))
    k = 0
    for _ in range(14):
        if st.phase == se.PHASE_STOPPED:
            break
        if st.phase == se.PHASE_AWAITING:
            k += 1
            st = se.submit_answer(st, uo.OracleAnswer(g=np.array([0.0, 0.0, float(k)])))
        else:
            st = se.step(st)
    assert st.warnings, "expected a concavity-contradiction warning"
    assert st.phase != se.PHASE_STOPPED or st.stop_reason  # answers were kept


# ---------------------------------------------------------------------------
# export / persistence / determinism
# ---------------------------------------------------------------------------


def test_export_import_export_byte_identical(tri):
    st = se.create_session(tri, mode="simulated", utility=log_spec())
    st = se.step(st)
    doc = se.export_session(st)
    again = se.export_session(se.session_from_json(json.loads(doc)))
    assert doc == again


def test_jsonl_trace_line_count(tri):
    st = se.create_session(tri, mode="simulated", utility=log_spec())
    st = se.step(st)
    lines = se.export_session(st, fmt="jsonl-trace").strip().split("\n")
    assert len(lines) == len(st.trace.iterates)


def test_export_records_stop_reason(tri):
    st = se.create_session(tri, mode="simulated", utility=log_spec())
    st = se.step(st)
    doc = json.loads(se.export_session(st))
    assert doc["stop_reason"] == "gradient_tolerance"
    assert doc["phase"] == "stopped"


def test_replay_determinism(tri):
    def run_once():
        st = se.create_session(
            tri, mode="simulated", utility=log_spec(), config=RunConfig(seed=5, max_iter=60)
        )
        return se.export_session(se.step(st), fmt="jsonl-trace")

    assert run_once() == run_once()


def test_crash_safety_reload_after_each_transition(tri, tmp_path):
    store = se.SessionStore(str(tmp_path))
    st = se.create_session(tri, mode="interactive", config=RunConfig(max_iter=60))
    store.save(st)
    spec = log_spec()
    for _ in range(4):
        if st.phase == se.PHASE_STOPPED:
            break
        if st.phase == se.PHASE_AWAITING:
            _, g = uo.evaluate_and_supergradient(spec, st.question.s)
            st = se.submit_answer(st, uo.OracleAnswer(g=g))
        else:
            st = se.step(st)
        store.save(st)
        reloaded = se.SessionStore(str(tmp_path)).get(st.id)
        assert reloaded.phase == st.phase
        assert se.export_session(reloaded) == se.export_session(st)


def test_interactive_equals_simulated_with_same_answers(tri):
    """The same answer generator through both protocols gives one trace."""
    base = log_spec()

    def priority_answER_fn(s):
        eps = uo.default_probe_sizes(s)
        p = uo.synthetic_priorities(base, s, eps)
        return uo.approx_gradient(p, eps)

    def fn(s):
        value, _ = uo.evaluate_and_supergradient(base, s)
        return value, priority_answER_fn(s)

    wrapped = uo.CustomUtility(fn)

    sim = se.create_session(
        tri, mode="simulated", utility=wrapped, config=RunConfig(seed=2, max_iter=40)
    )
    sim = se.step(sim)

    inter = se.create_session(tri, mode="interactive", config=RunConfig(seed=2, max_iter=40))
    guard = 0
    while inter.phase != se.PHASE_STOPPED and guard < 90:
        if inter.phase == se.PHASE_AWAITING:
            eps = inter.question.eps
            p = uo.synthetic_priorities(base, inter.question.s, eps)
            inter = se.submit_answer(inter, p)
        else:
            inter = se.step(inter)
        guard += 1

    sim_lines = [json.loads(l) for l in se.export_session(sim, "jsonl-trace").strip().split("\n")]
    int_lines = [
        json.loads(l) for l in se.export_session(inter, "jsonl-trace").strip().split("\n")
    ]
    assert len(sim_lines) == len(int_lines)
    for a, b in zip(sim_lines, int_lines):
        np.testing.assert_allclose(a["w"], b["w"], atol=1e-12)
        np.testing.assert_allclose(a["s"], b["s"], atol=1e-12)


# ---------------------------------------------------------------------------
# fork
# ---------------------------------------------------------------------------


def test_fork_initial_and_head(tri):
    st = se.create_session(tri, mode="simulated", utility=log_spec())
    st = se.step(st)
    f0 = se.fork_session(st, 0, mode="interactive")
    np.testing.assert_allclose(f0.run.w, st.trace.iterates[0].w)
    assert f0.phase == se.PHASE_AWAITING

    last = len(st.trace.iterates) - 1
    fl = se.fork_session(st, last, mode="interactive")
    np.testing.assert_allclose(fl.run.w, st.trace.iterates[last].w)
    np.testing.assert_allclose(fl.run.center.s, st.trace.iterates[last].s, atol=1e-9)

    with pytest.raises(IndexError):
        se.fork_session(st, 99)
