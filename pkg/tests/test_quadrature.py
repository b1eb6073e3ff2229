import math

import numpy as np
import pytest

from hamstab.immersion import AxisDomain
from hamstab.quadrature import GridSpec, SupportError, build_grid, integrate, pairwise_sum


def test_cos_squared_on_circle():
    # periodic trapezoid is exact for trig polynomials below the node count
    dom = (AxisDomain.circle(2 * np.pi),)
    val = integrate(lambda p: np.cos(p[:, 0]) ** 2, dom, GridSpec(circle_nodes=8, line_nodes=8))
    assert val == pytest.approx(np.pi, rel=1e-14)


def test_product_angle_integral():
    # int over T^2 of sin^2(s1 - s2) = 2 pi^2
    dom = (AxisDomain.circle(2 * np.pi), AxisDomain.circle(2 * np.pi))
    val = integrate(lambda p: np.sin(p[:, 0] - p[:, 1]) ** 2, dom)
    assert val == pytest.approx(2 * np.pi**2, rel=1e-13)


def test_gaussian_derivative_energy():
    # int (d/ds exp(-s^2/(2 sigma^2)))^2 = sqrt(pi) / (2 sigma), box 10 sigma
    sigma = 1.3
    dom = (AxisDomain.line(),)

    def fld(p):
        s = p[:, 0]
        return (s / sigma**2) ** 2 * np.exp(-(s**2) / sigma**2)

    val = integrate(fld, dom, boxes=(10 * sigma,))
    assert val == pytest.approx(np.sqrt(np.pi) / (2 * sigma), rel=1e-10)


def test_pairwise_sum_matches_fsum():
    rng = np.random.default_rng(0)
    vals = rng.uniform(-1, 1, size=1003)
    assert pairwise_sum(vals) == pytest.approx(math.fsum(vals), rel=1e-14)
    assert pairwise_sum(np.array([])) == 0.0
    assert pairwise_sum(np.array([2.5])) == 2.5


def test_support_leak_detected():
    # a field that does not vanish at the line box boundary
    dom = (AxisDomain.line(),)
    with pytest.raises(SupportError, match="boundary"):
        integrate(lambda p: np.ones(len(p)), dom, boxes=(3.0,))


def test_box_exceeding_truncation():
    dom = (AxisDomain.line(5.0),)
    with pytest.raises(SupportError, match="truncation"):
        build_grid(dom, boxes=(10.0,))


def test_missing_box():
    with pytest.raises(ValueError, match="truncation box"):
        build_grid((AxisDomain.line(),))


def test_gridspec_validation():
    with pytest.raises(ValueError):
        GridSpec(circle_nodes=4)
    with pytest.raises(ValueError):
        GridSpec(line_box=-1.0)


def test_grid_points_shape():
    dom = (AxisDomain.circle(2 * np.pi), AxisDomain.line())
    grid = build_grid(dom, GridSpec(circle_nodes=16, line_nodes=12), boxes=(None, 5.0))
    pts, w = grid.points_and_weights()
    assert pts.shape == (16 * 12, 2)
    assert w.shape == (16 * 12,)
    # circle weights sum to the circumference, line weights to the box length
    assert np.sum(grid.axis_weights[0]) == pytest.approx(2 * np.pi)
    assert np.sum(grid.axis_weights[1]) == pytest.approx(10.0)


def test_chunked_evaluation_consistency():
    # force chunking with a fine grid and compare against a plain dot product
    dom = (AxisDomain.line(),)
    spec = GridSpec(line_nodes=96)

    def fld(p):
        return np.exp(-p[:, 0] ** 2)

    direct = integrate(fld, dom, spec, boxes=(10.0,))
    import hamstab.quadrature as q

    old = q.CHUNK
    try:
        q.CHUNK = 7
        chunked = integrate(fld, dom, spec, boxes=(10.0,))
    finally:
        q.CHUNK = old
    assert chunked == direct
