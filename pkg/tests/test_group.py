import math

import numpy as np
import pytest

from cartanconj.group import GroupPoint, dilate, frame_field, invariant_coords, rotate


def test_frame_at_identity():
    g = GroupPoint.identity()
    assert np.allclose(frame_field(1, g), [1, 0, 0, 0, 0])
    assert np.allclose(frame_field(2, g), [0, 1, 0, 0, 0])


def test_frame_x3_components():
    g = GroupPoint(0.7, -1.2, 3.0, 0.5, 0.1)
    assert np.allclose(frame_field(3, g), [0, 0, 1, 0.7, -1.2])


def test_frame_x0_example():
    g = GroupPoint(1.0, 0.0, 0.0, 0.0, 1.0)
    assert np.allclose(frame_field(0, g), [0, 1, 0, -1, 0])


def test_frame_invalid_index():
    with pytest.raises(ValueError):
        frame_field(6, GroupPoint.identity())


def _bracket_fd(i, j, g, h=1e-5):
    """[X_i, X_j] at g via finite-difference Jacobians of the fields."""
    def jac(idx):
        J = np.empty((5, 5))
        arr = g.as_array()
        for col in range(5):
            ap = arr.copy(); ap[col] += h
            am = arr.copy(); am[col] -= h
            J[:, col] = (frame_field(idx, GroupPoint.from_array(ap))
                         - frame_field(idx, GroupPoint.from_array(am))) / (2 * h)
        return J
    Xi = frame_field(i, g)
    Xj = frame_field(j, g)
    return jac(j) @ Xi - jac(i) @ Xj


@pytest.mark.parametrize("i,j,target", [(1, 2, 3), (1, 3, 4), (2, 3, 5)])
def test_bracket_relations(rng, i, j, target):
    for _ in range(5):
        g = GroupPoint(*rng.uniform(-2, 2, 5))
        lhs = _bracket_fd(i, j, g)
        assert np.allclose(lhs, frame_field(target, g), atol=1e-8)


def test_rotate_examples():
    g = GroupPoint(1.0, 0.0, 5.0, 1.0, 0.0)
    r = rotate(g, math.pi / 2.0)
    assert np.allclose(r.as_array(), [0, 1, 5, 0, 1], atol=1e-15)
    g2 = GroupPoint(0.3, -0.7, 1.1, 0.2, 0.9)
    assert np.allclose(rotate(g2, 0.0).as_array(), g2.as_array())
    assert np.allclose(rotate(g2, 2 * math.pi).as_array(), g2.as_array(), atol=1e-12)
    assert np.allclose(rotate(rotate(g2, 0.8), -0.8).as_array(), g2.as_array(), atol=1e-15)


def test_dilate_examples():
    g = GroupPoint(1.0, 1.0, 1.0, 1.0, 1.0)
    d = dilate(g, math.log(2.0))
    assert np.allclose(d.as_array(), [2, 2, 4, 8, 8], atol=1e-12)
    g2 = GroupPoint(0.3, -0.7, 1.1, 0.2, 0.9)
    assert np.allclose(dilate(g2, 0.0).as_array(), g2.as_array())
    assert np.allclose(dilate(dilate(g2, 0.37), -0.37).as_array(), g2.as_array(), atol=1e-12)


def test_invariant_coords_example():
    P, Q, R, r, chi = invariant_coords(GroupPoint(1.0, 0.0, 2.0, 0.0, 0.0))
    assert (P, Q, R, r) == pytest.approx((1.0, 0.0, 0.0, 1.0))


def test_invariant_coords_axis_rejected():
    with pytest.raises(ValueError):
        invariant_coords(GroupPoint(0.0, 0.0, 1.0, 0.0, 0.0))


def test_pqr_rotation_invariance(rng):
    for _ in range(100):
        g = GroupPoint(*rng.uniform(-2, 2, 5))
        if g.r < 0.1:
            continue
        s = rng.uniform(0, 2 * math.pi)
        b = invariant_coords(g)
        a = invariant_coords(rotate(g, s))
        assert np.allclose(a[:4], b[:4], atol=1e-10)
        dchi = (a[4] - b[4] - s) % (2 * math.pi)
        assert min(dchi, 2 * math.pi - dchi) < 1e-10


def test_pqr_dilation_invariance(rng):
    for _ in range(100):
        g = GroupPoint(*rng.uniform(-2, 2, 5))
        if g.r < 0.1:
            continue
        r0 = rng.uniform(-0.6, 0.6)
        b = invariant_coords(g)
        a = invariant_coords(dilate(g, r0))
        assert np.allclose(a[:3], b[:3], atol=1e-10)
        assert a[3] == pytest.approx(math.exp(r0) * b[3], rel=1e-12)
        assert a[4] == pytest.approx(b[4], abs=1e-12)


def test_chart_jacobian_value(rng):
    h = 1e-6
    for _ in range(20):
        g = GroupPoint(*rng.uniform(-2, 2, 5))
        if g.r < 0.3:
            g = GroupPoint(g.x + 1.0, g.y, g.z, g.v, g.w)
        arr = g.as_array()
        M = np.empty((5, 5))
        for col in range(5):
            ap = arr.copy(); ap[col] += h
            am = arr.copy(); am[col] -= h
            M[:, col] = (np.array(invariant_coords(GroupPoint.from_array(ap)))
                         - np.array(invariant_coords(GroupPoint.from_array(am)))) / (2 * h)
        det = np.linalg.det(M)
        assert det == pytest.approx(1.0 / (2.0 * g.r ** 9), rel=1e-6)
