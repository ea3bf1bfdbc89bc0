import numpy as np
import pytest

from wacbench import wac_solver as ws
from wacbench.errors import EmptyInteriorError, UnboundedRegionError
from wacbench.lp_model import AugmentedLp

from conftest import random_bounded_aug, random_simplex_weight, triangle_class_instances


def make_aug(A, b):
    A = np.atleast_2d(np.array(A, dtype=float))
    return AugmentedLp(
        A=A, b=np.array(b, dtype=float), v=0.0,
        row_labels=[f"r{i}" for i in range(A.shape[0])], c=np.zeros(A.shape[1]),
    )


# ---------------------------------------------------------------------------
# find_interior_point
# ---------------------------------------------------------------------------


def test_interior_point_triangle(tri):
    # max-min-slack on (1-x, x, x): maximized at x = 1/2
    x = ws.find_interior_point(tri)
    assert x[0] == pytest.approx(0.5, abs=1e-8)
    assert tri.slack(x).min() > 0


def test_interior_point_symmetric_interval():
    aug = make_aug([[1.0], [-1.0]], [1.0, 1.0])
    x = ws.find_interior_point(aug)
    assert x[0] == pytest.approx(0.0, abs=1e-9)


def test_interior_point_empty():
    aug = make_aug([[1.0], [-1.0]], [-1.0, 0.0])
    with pytest.raises(EmptyInteriorError, match="empty interior"):
        ws.find_interior_point(aug)


# ---------------------------------------------------------------------------
# weighted_center examples
# ---------------------------------------------------------------------------


def test_uniform_center_triangle(tri):
    ct = ws.weighted_center(tri, np.array([1 / 3, 1 / 3, 1 / 3]))
    assert ct.x[0] == pytest.approx(2 / 3, abs=1e-9)
    np.testing.assert_allclose(ct.s, [1 / 3, 2 / 3, 2 / 3], atol=1e-9)
    np.testing.assert_allclose(ct.y, [1.0, 0.5, 0.5], atol=1e-9)
    assert ct.kkt_residual <= 1e-8


def test_skewed_center_matches_counterexample_fixture(tri):
    ct = ws.weighted_center(tri, np.array([0.4, 0.1, 0.5]))
    np.testing.assert_allclose(ct.s, [0.4, 0.6, 0.6], atol=1e-9)
    np.testing.assert_allclose(ct.y, [1.0, 1 / 6, 5 / 6], atol=1e-9)


def test_symmetric_interval_center():
    aug = make_aug([[1.0], [-1.0]], [1.0, 1.0])
    ct = ws.weighted_center(aug, np.array([0.5, 0.5]))
    assert ct.x[0] == pytest.approx(0.0, abs=1e-9)
    np.testing.assert_allclose(ct.s, [1.0, 1.0], atol=1e-9)
    np.testing.assert_allclose(ct.y, [0.5, 0.5], atol=1e-9)


def test_center_triple_invariants(rng):
    for _ in range(10):
        n = int(rng.integers(1, 3))
        m = int(rng.integers(n + 2, 6))
        aug, x0 = random_bounded_aug(rng, n, m)
        w = random_simplex_weight(rng, m)
        ct = ws.weighted_center(aug, w, x0=x0)
        resid = aug.A @ ct.x + ct.s - aug.b
        assert np.abs(resid).max() <= 1e-10 * (1 + np.abs(aug.b).max())
        assert ct.kkt_residual <= 1e-8
        np.testing.assert_allclose(ct.s * ct.y, w, atol=1e-14)
        assert abs(ct.w.sum() - 1.0) <= 1e-12


def test_rejects_nonpositive_weights(tri):
    with pytest.raises(ValueError):
        ws.weighted_center(tri, np.array([0.5, 0.5, 0.0]))


def test_diagnostic_trace_serializes_to_json(tri):
    import json

    ct = ws.weighted_center(tri, np.array([0.4, 0.1, 0.5]))
    doc = json.loads(json.dumps(ct.trace))
    assert doc and {"iteration", "decrement", "grad_inf"} <= set(doc[0])
    assert any("step" in entry for entry in doc)


# ---------------------------------------------------------------------------
# weight_of_point / centric_y
# ---------------------------------------------------------------------------


def test_weight_of_point_examples(tri):
    w = ws.weight_of_point(tri, np.array([2 / 3]), np.array([1.0, 0.5, 0.5]))
    np.testing.assert_allclose(w, [1 / 3, 1 / 3, 1 / 3], atol=1e-12)

    w = ws.weight_of_point(tri, np.array([0.8]), np.array([1.0, 0.5, 0.5]))
    np.testing.assert_allclose(w, [0.2, 0.4, 0.4], atol=1e-12)
    assert w.sum() == pytest.approx(1.0, abs=1e-12)

    # the counterexample fixture: x = 0.5 under y0 = (1, 1/6, 5/6)
    w = ws.weight_of_point(tri, np.array([0.5]), np.array([1.0, 1 / 6, 5 / 6]))
    np.testing.assert_allclose(w, [0.5, 1 / 12, 5 / 12], atol=1e-12)


def test_weight_of_point_rejects_bad_y(tri):
    with pytest.raises(ValueError, match="A'y = 0"):
        ws.weight_of_point(tri, np.array([0.5]), np.array([1.0, 0.5, 0.4]))
    with pytest.raises(ValueError, match="interior"):
        ws.weight_of_point(tri, np.array([1.5]), np.array([1.0, 0.5, 0.5]))


def test_centric_y_triangle(tri):
    y = ws.centric_y(tri)
    assert y[0] == pytest.approx(1.0, abs=1e-9)  # forced: y1 = y2 + y3, b'y = y1
    assert 0 < y[1] < 1 and 0 < y[2] < 1
    assert y[1] + y[2] == pytest.approx(1.0, abs=1e-9)


def test_centric_y_interval_and_second_example():
    aug = make_aug([[1.0], [-1.0]], [1.0, 1.0])
    y = ws.centric_y(aug)
    np.testing.assert_allclose(y, [0.5, 0.5], atol=1e-9)

    aug2 = make_aug([[1.0], [-1.0], [0.0]], [1.0, 0.0, 1.0])
    y = ws.centric_y(aug2)
    assert y[0] == pytest.approx(y[1], abs=1e-9)
    assert y[0] + y[2] == pytest.approx(1.0, abs=1e-9)  # b'y = y1 + y3


def test_centric_y_unbounded():
    aug = make_aug([[1.0]], [1.0])
    with pytest.raises(UnboundedRegionError):
        ws.centric_y(aug)


# ---------------------------------------------------------------------------
# Invariants: orthogonality, combination law, round trip, oracle
# ---------------------------------------------------------------------------


def test_orthogonality_identity(rng):
    for aug in triangle_class_instances():
        N = ws.nullspace_basis(aug.A)
        c1 = ws.weighted_center(aug, random_simplex_weight(rng, 3))
        c2 = ws.weighted_center(aug, random_simplex_weight(rng, 3))
        for _ in range(5):
            ybar = N.T @ rng.standard_normal(N.shape[0])
            lhs = abs((c1.s - c2.s) @ ybar)
            assert lhs <= 1e-8 * np.linalg.norm(ybar) * np.linalg.norm(c1.s - c2.s) + 1e-14


def test_convex_combination_law(rng):
    for aug in triangle_class_instances() + [random_bounded_aug(rng, 2, 5)[0]]:
        m = aug.num_rows
        y0 = ws.centric_y(aug)
        pts = ws.sample_interior_points(aug, 3, rng)
        slacks = [aug.b - aug.A @ x for x in pts]
        weights = [y0 * s for s in slacks]
        beta = rng.dirichlet(np.ones(3))
        w_mix = sum(b * w for b, w in zip(beta, weights))
        assert abs(w_mix.sum() - 1.0) <= 1e-12  # weight-sum preservation
        ct = ws.weighted_center(aug, w_mix)
        x_mix = sum(b * x for b, x in zip(beta, pts))
        s_mix = sum(b * s for b, s in zip(beta, slacks))
        np.testing.assert_allclose(ct.x, x_mix, rtol=1e-7, atol=1e-9)
        np.testing.assert_allclose(ct.s, s_mix, rtol=1e-7, atol=1e-9)


def test_round_trip_weight_center_weight(rng):
    for _ in range(10):
        n = int(rng.integers(1, 3))
        m = int(rng.integers(n + 2, 6))
        aug, x0 = random_bounded_aug(rng, n, m)
        w = random_simplex_weight(rng, m)
        ct = ws.weighted_center(aug, w, x0=x0)
        w_back = ws.weight_of_point(aug, ct.x, ct.y)
        np.testing.assert_allclose(w_back, w, rtol=1e-7, atol=1e-9)


def test_newton_matches_brute_force(rng):
    for _ in range(8):
        n = int(rng.integers(1, 3))
        m = int(rng.integers(n + 2, 6))
        aug, x0 = random_bounded_aug(rng, n, m)
        w = random_simplex_weight(rng, m)
        ct = ws.weighted_center(aug, w, x0=x0)
        ref = ws.brute_force_center(aug, w)
        assert np.abs(ct.x - ref).max() <= 1e-5


# ---------------------------------------------------------------------------
# W_s / W_y geometry probes
# ---------------------------------------------------------------------------


def test_affine_dimensions_triangle_class(rng):
    for aug in triangle_class_instances():
        m, n = aug.num_rows, aug.num_cols
        y0 = ws.centric_y(aug)
        ct = ws.weighted_center(aug, np.full(m, 1 / m))
        Wy = ws.sample_w_y(aug, y0, 12, rng)
        Ws = ws.sample_w_s(aug, ct.s, 12, rng)
        assert ws.affine_dimension(Wy) == n
        assert ws.affine_dimension(Ws) == m - n - 1


def test_affine_dimensions_random_instance(rng):
    aug, _ = random_bounded_aug(rng, 2, 5)
    y0 = ws.centric_y(aug)
    ct = ws.weighted_center(aug, np.full(5, 0.2))
    assert ws.affine_dimension(ws.sample_w_y(aug, y0, 20, rng)) == 2
    assert ws.affine_dimension(ws.sample_w_s(aug, ct.s, 20, rng)) == 5 - 2 - 1


def test_w_y_membership_characterization(rng):
    for aug in triangle_class_instances():
        y0 = ws.centric_y(aug)
        B = ws.nullspace_basis(aug.A)  # rows: orthonormal basis of null(A')
        target = B @ aug.b
        for w in ws.sample_w_y(aug, y0, 10, rng):
            assert np.abs(B @ (w / y0) - target).max() <= 1e-8
        assert abs(w.sum() - 1.0) <= 1e-10  # Y s lands on the simplex
