import numpy as np
import pytest

from hamstab.jets import Jet2, jcos, jcosh, jexp, jsin, jsinh


def _example(seeds):
    # a composite with products, powers and transcendentals
    s, t = seeds
    return jsin(s * 2.0) * jcosh(t) + jexp(s * t * 0.3) - (s**3) * 0.5 + jcos(t) * jsinh(s * 0.7)


def _example_scalar(x, y):
    return (
        np.sin(2 * x) * np.cosh(y)
        + np.exp(0.3 * x * y)
        - 0.5 * x**3
        + np.cos(y) * np.sinh(0.7 * x)
    )


def _fd_grad_hess(f, pt, h=1e-4):
    """Independent oracle: central differences of a scalar function."""
    n = len(pt)
    grad = np.zeros(n)
    hess = np.zeros((n, n))
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        grad[i] = (f(*(pt + e)) - f(*(pt - e))) / (2 * h)
        hess[i, i] = (f(*(pt + e)) - 2 * f(*pt) + f(*(pt - e))) / h**2
        for j in range(i + 1, n):
            d = np.zeros(n)
            d[j] = h
            hess[i, j] = hess[j, i] = (
                f(*(pt + e + d)) - f(*(pt + e - d)) - f(*(pt - e + d)) + f(*(pt - e - d))
            ) / (4 * h**2)
    return grad, hess


def test_jets_match_finite_differences():
    rng = np.random.default_rng(3)
    pts = rng.uniform(-1.2, 1.2, size=(6, 2))
    jet = _example(Jet2.variables(pts))
    for i, pt in enumerate(pts):
        assert jet.val[i] == pytest.approx(_example_scalar(*pt), rel=1e-12)
        grad, hess = _fd_grad_hess(_example_scalar, pt)
        assert np.allclose(jet.grad[i], grad, rtol=1e-6, atol=1e-6)
        assert np.allclose(jet.hess[i], hess, rtol=1e-5, atol=1e-5)


def test_product_rule_exact():
    pts = np.array([[0.5, -0.3]])
    s, t = Jet2.variables(pts)
    p = s * t
    assert p.val[0] == pytest.approx(-0.15)
    assert np.allclose(p.grad[0], [-0.3, 0.5])
    assert np.allclose(p.hess[0], [[0.0, 1.0], [1.0, 0.0]])


def test_power_and_scalar_ops():
    pts = np.array([[2.0]])
    (s,) = Jet2.variables(pts)
    q = (s**3) / 2.0 - 1.0 + 0.5 * s
    assert q.val[0] == pytest.approx(4.0)  # 8/2 - 1 + 1
    assert q.grad[0, 0] == pytest.approx(6.5)  # 3*4/2 + 0.5
    assert q.hess[0, 0, 0] == pytest.approx(6.0)  # 6*2/2


def test_constant():
    pts = np.zeros((3, 2))
    s, _ = Jet2.variables(pts)
    c = Jet2.constant(4.25, s)
    assert np.all(c.val == 4.25)
    assert not c.grad.any()
    assert not c.hess.any()


def test_subtraction_and_negation():
    pts = np.array([[1.0, 2.0]])
    s, t = Jet2.variables(pts)
    z = (s - t) - 1.0
    assert z.val[0] == pytest.approx(-2.0)
    assert np.allclose(z.grad[0], [1.0, -1.0])
    w = 1.0 - s
    assert w.val[0] == pytest.approx(0.0)
    assert w.grad[0, 0] == pytest.approx(-1.0)
