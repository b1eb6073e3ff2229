"""The Hamiltonian second-variation functional and its identity checks.

For a chart with induced metric ``g``, cubic form ``C`` and mean-curvature
covector ``H_k`` (see :mod:`hamstab.immersion`), the second variation of
volume along the Hamiltonian field ``J grad u`` is

    integral of  eps * ((lap u)^2 - 2 * g(nH, h(grad u, grad u)))
                 + g(nH, J grad u)^2   dv,

where ``eps`` is the ambient sign (+1 complex, -1 split-complex), the
ambient Ricci term drops because the ambients here are flat, and

    g(nH, h(grad u, grad u)) = eps * C_ijk (grad u)^i (grad u)^j (g^{kl} H_l),
    g(nH, J grad u)          = H_k (grad u)^k.

The intermediate (pre-trace-identity) form replaces ``(lap u)^2`` by the
squared Hessian ``g^{ik} g^{jl} u_ij u_kl``; for compactly supported or
periodic ``u`` over a flat induced metric the two integrals agree, which is
exactly the content of the integral trace identity checked by
:func:`reilly_residual`, itself a corollary of the pointwise identity
checked by :func:`bochner_residual`.

Sign convention: ``lap = div grad``, so on the flat unit torus
``-lap cos(s_1) = cos(s_1)`` (eigenvalue +1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import quadrature
from .immersion import AxisDomain, LagrangianChart, induced_geometry_batch
from .quadrature import GridSpec
from .testfunctions import LinComb, TestFunction, compatible_with

__all__ = [
    "MetricField",
    "gradient",
    "laplacian",
    "SecondVariationFunctional",
    "RawHessianFunctional",
    "as_functional",
    "evaluate_functional",
    "second_variation",
    "second_variation_raw",
    "bochner_residual",
    "reilly_residual",
]


# ------------------------------------------------------------- metric fields

@dataclass
class MetricField:
    """Metric (and optional Ricci) data as functions of the chart point.

    ``constant`` marks coordinate systems in which the matrix is constant;
    non-constant metrics get their first derivatives by central differences
    inside :func:`laplacian`.
    """

    dim: int
    g_fn: Callable[[np.ndarray], np.ndarray]
    ricci_fn: Callable[[np.ndarray], np.ndarray] | None = None
    constant: bool = False
    name: str = ""

    @classmethod
    def flat(cls, signs) -> "MetricField":
        d = np.diag(np.asarray(signs, dtype=float))
        return cls.constant_matrix(d, name=f"flat{tuple(int(s) for s in signs)}")

    @classmethod
    def constant_matrix(cls, matrix, name: str = "constant") -> "MetricField":
        m = np.asarray(matrix, dtype=float)

        def g_fn(pts):
            pts = np.atleast_2d(pts)
            return np.broadcast_to(m, (len(pts),) + m.shape).copy()

        return cls(dim=m.shape[0], g_fn=g_fn, constant=True, name=name)

    @classmethod
    def from_chart(cls, chart: LagrangianChart) -> "MetricField":
        def g_fn(pts):
            return induced_geometry_batch(chart, pts)["g"]

        return cls(
            dim=chart.dim,
            g_fn=g_fn,
            constant=chart.metric_is_constant,
            name=chart.name or "chart",
        )

    def g(self, pts) -> np.ndarray:
        return self.g_fn(np.atleast_2d(np.asarray(pts, dtype=float)))

    def g_inv(self, pts) -> np.ndarray:
        return np.linalg.inv(self.g(pts))

    def vol_density(self, pts) -> np.ndarray:
        return np.sqrt(np.abs(np.linalg.det(self.g(pts))))

    def ricci(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if self.ricci_fn is None:
            return np.zeros((len(pts), self.dim, self.dim))
        return self.ricci_fn(pts)


def gradient(u: TestFunction, m: MetricField, s) -> np.ndarray:
    """Raised gradient ``(grad u)^j = g^{ij} u_i`` at one point."""
    pt = np.atleast_2d(np.asarray(s, dtype=float))
    _, du, _ = u.jet(pt)
    return (np.einsum("nij,nj->ni", m.g_inv(pt), du))[0]


def _laplacian_batch(u: TestFunction, m: MetricField, pts: np.ndarray, rel_step: float = 1e-4):
    _, du, d2u = u.jet(pts)
    ginv = m.g_inv(pts)
    lap = np.einsum("nij,nij->n", ginv, d2u)
    if not m.constant:
        lap += np.einsum("nj,nj->n", _divergence_coeffs(m, pts, rel_step), du)
    return lap


def _divergence_coeffs(m: MetricField, pts: np.ndarray, rel_step: float) -> np.ndarray:
    """Central-difference ``b^j = (1/sqrt|g|) d_i (sqrt|g| g^{ij})``."""
    n = m.dim
    vol0 = m.vol_density(pts)
    out = np.zeros((len(pts), n))
    for i in range(n):
        shift = np.zeros(n)
        shift[i] = rel_step
        plus = pts + shift
        minus = pts - shift
        fp = m.vol_density(plus)[:, None] * m.g_inv(plus)[:, i, :]
        fm = m.vol_density(minus)[:, None] * m.g_inv(minus)[:, i, :]
        out += (fp - fm) / (2 * rel_step)
    return out / vol0[:, None]


def laplacian(u: TestFunction, m: MetricField, s) -> float:
    """Laplace-Beltrami ``(1/sqrt|g|) d_i (sqrt|g| g^{ij} d_j u)`` at one point."""
    return float(_laplacian_batch(u, m, np.atleast_2d(np.asarray(s, dtype=float)))[0])


# --------------------------------------------------------------- functionals

class SecondVariationFunctional:
    """Pointwise second-variation integrand of a chart, quadratic in the jet."""

    def __init__(self, chart: LagrangianChart):
        self.chart = chart
        self.domains = chart.domains
        self._const = None
        if chart.geometry_is_constant:
            geo = induced_geometry_batch(chart, np.zeros((1, chart.dim)))
            self._const = (geo["g_inv"][0], geo["C"][0], geo["nH_cov"][0])

    def integrand(self, points: np.ndarray, jet) -> np.ndarray:
        u, du, d2u = jet
        chart = self.chart
        eps = chart.ambient.eps
        if self._const is not None:
            ginv, C, H = self._const
            grad_up = np.einsum("ij,nj->ni", ginv, du)
            lap = np.einsum("ij,nij->n", ginv, d2u)
            c_up = ginv @ H
            hterm = eps * np.einsum("ijk,ni,nj,k->n", C, grad_up, grad_up, c_up)
            pair = np.einsum("k,nk->n", H, grad_up)
            return eps * (lap * lap - 2.0 * hterm) + pair * pair
        geo = induced_geometry_batch(chart, points)
        ginv = geo["g_inv"]
        grad_up = np.einsum("nij,nj->ni", ginv, du)
        lap = np.einsum("nij,nij->n", ginv, d2u)
        if not chart.metric_is_constant:
            lap += np.einsum("nj,nj->n", self._metric_divergence(points, geo), du)
        c_up = np.einsum("nkl,nl->nk", ginv, geo["nH_cov"])
        hterm = eps * np.einsum("nijk,ni,nj,nk->n", geo["C"], grad_up, grad_up, c_up)
        pair = np.einsum("nk,nk->n", geo["nH_cov"], grad_up)
        return eps * (lap * lap - 2.0 * hterm) + pair * pair

    def _metric_divergence(self, points: np.ndarray, geo, rel_step: float = 1e-4) -> np.ndarray:
        chart = self.chart
        n = chart.dim
        pts = geo["points"]
        out = np.zeros((len(pts), n))
        for i in range(n):
            h = rel_step * chart.domains[i].scale
            shift = np.zeros(n)
            shift[i] = h
            gp = induced_geometry_batch(chart, pts + shift)
            gm = induced_geometry_batch(chart, pts - shift)
            fp = gp["vol"][:, None] * gp["g_inv"][:, i, :]
            fm = gm["vol"][:, None] * gm["g_inv"][:, i, :]
            out += (fp - fm) / (2 * h)
        return out / geo["vol"][:, None]


class RawHessianFunctional:
    """Intermediate form with the squared Hessian in place of ``(lap u)^2``.

    Restricted to charts whose induced metric is constant in the chart
    coordinates, where the covariant Hessian reduces to raw second partials.
    """

    def __init__(self, chart: LagrangianChart):
        if not chart.metric_is_constant:
            raise ValueError(
                "raw-Hessian form needs a chart with constant induced metric coefficients"
            )
        self.chart = chart
        self.domains = chart.domains
        self._const = None
        if chart.geometry_is_constant:
            geo = induced_geometry_batch(chart, np.zeros((1, chart.dim)))
            self._const = (geo["g_inv"][0], geo["C"][0], geo["nH_cov"][0])

    def integrand(self, points: np.ndarray, jet) -> np.ndarray:
        u, du, d2u = jet
        chart = self.chart
        eps = chart.ambient.eps
        if self._const is not None:
            ginv, C, H = self._const
            grad_up = np.einsum("ij,nj->ni", ginv, du)
            hess_sq = np.einsum("ik,jl,nij,nkl->n", ginv, ginv, d2u, d2u)
            c_up = ginv @ H
            hterm = eps * np.einsum("ijk,ni,nj,k->n", C, grad_up, grad_up, c_up)
            pair = np.einsum("k,nk->n", H, grad_up)
            return eps * (hess_sq - 2.0 * hterm) + pair * pair
        geo = induced_geometry_batch(chart, points)
        ginv = geo["g_inv"]
        grad_up = np.einsum("nij,nj->ni", ginv, du)
        hess_sq = np.einsum("nik,njl,nij,nkl->n", ginv, ginv, d2u, d2u)
        c_up = np.einsum("nkl,nl->nk", ginv, geo["nH_cov"])
        hterm = eps * np.einsum("nijk,ni,nj,nk->n", geo["C"], grad_up, grad_up, c_up)
        pair = np.einsum("nk,nk->n", geo["nH_cov"], grad_up)
        return eps * (hess_sq - 2.0 * hterm) + pair * pair


def as_functional(target):
    """Coerce a chart or integrand-bearing object to the functional protocol."""
    if isinstance(target, LagrangianChart):
        return SecondVariationFunctional(target)
    if hasattr(target, "integrand") and hasattr(target, "domains"):
        return target
    raise TypeError(f"cannot interpret {target!r} as a quadratic functional")


def _check_compatible(u: TestFunction, domains) -> None:
    if compatible_with(u, domains):
        return
    if isinstance(u, LinComb) and u.compatible_terms(domains):
        return
    raise ValueError(
        f"test function {u.label or u!r} is incompatible with the domains {domains}"
    )


def evaluate_functional(functional, u: TestFunction, gridspec: GridSpec | None = None) -> float:
    """Quadrature value of a quadratic functional on a test function.

    The grid uses the functional's domains; line boxes default to the test
    function's declared support boxes.
    """
    functional = as_functional(functional)
    _check_compatible(u, functional.domains)

    def field(pts):
        return functional.integrand(pts, u.jet(pts))

    return quadrature.integrate(field, functional.domains, gridspec, boxes=u.axis_boxes)


def second_variation(target, u: TestFunction, gridspec: GridSpec | None = None) -> float:
    """Second variation of volume along ``J grad u`` (chart targets), or the
    value of a closed-form quadratic functional."""
    return evaluate_functional(target, u, gridspec)


def second_variation_raw(chart: LagrangianChart, u: TestFunction, gridspec: GridSpec | None = None) -> float:
    """Intermediate squared-Hessian form; agrees with
    :func:`second_variation` after integration on flat charts."""
    return evaluate_functional(RawHessianFunctional(chart), u, gridspec)


# ---------------------------------------------------------- identity checks

def _fd_jacobian(field, pt: np.ndarray, step: float) -> np.ndarray:
    """Richardson-extrapolated central differences of ``field`` at one point.

    ``field`` maps (N, n) points to (N, k) values; the result has shape
    (k, n) with entry [a, l] = d field_a / d s_l.
    """
    n = pt.shape[-1]
    k = np.atleast_2d(field(np.atleast_2d(pt))).shape[-1]
    out = np.empty((k, n))
    for l in range(n):
        shift = np.zeros(n)
        shift[l] = 1.0

        def diff(h):
            fp = np.atleast_2d(field(np.atleast_2d(pt + h * shift)))[0]
            fm = np.atleast_2d(field(np.atleast_2d(pt - h * shift)))[0]
            return (fp - fm) / (2 * h)

        out[:, l] = (4.0 * diff(step / 2) - diff(step)) / 3.0
    return out


def bochner_residual(u: TestFunction, m: MetricField, s, step: float = 1e-3) -> float:
    """Pointwise residual of the curvature identity

    ``(1/2) lap g(grad u, grad u) = Ric(grad u, grad u)
      + g(grad u, grad lap u) + g(hess u, hess u)``

    computed with exact first-level quantities and nested central
    differences (Richardson extrapolated) for the outer derivatives.
    Restricted to metrics that are constant in the chart coordinates.
    """
    if not m.constant:
        raise NotImplementedError("pointwise identity check needs flat-coordinate metrics")
    pt = np.asarray(s, dtype=float)
    ginv = m.g_inv(pt)[0]
    ric = m.ricci(pt)[0]

    def w_grad(pts):
        # exact gradient of w = g(grad u, grad u): d_k w = 2 g^{ij} u_{ik} u_j
        _, du, d2u = u.jet(pts)
        return 2.0 * np.einsum("ij,nik,nj->nk", ginv, d2u, du)

    def lap_field(pts):
        _, _, d2u = u.jet(pts)
        return np.einsum("ij,nij->n", ginv, d2u)[:, None]

    dW = _fd_jacobian(w_grad, pt, step)
    lap_w = float(np.einsum("kl,kl->", ginv, dW))
    d_lap = _fd_jacobian(lap_field, pt, step)[0]

    _, du0, d2u0 = u.jet(np.atleast_2d(pt))
    grad_up = ginv @ du0[0]
    ric_term = float(grad_up @ ric @ grad_up)
    cross = float(grad_up @ d_lap)
    hess_sq = float(np.einsum("ik,jl,ij,kl->", ginv, ginv, d2u0[0], d2u0[0]))
    return 0.5 * lap_w - ric_term - cross - hess_sq


def _domains_from_support(u: TestFunction) -> tuple[AxisDomain, ...]:
    domains = []
    for j in range(u.n):
        p = u.axis_periods[j]
        b = u.axis_boxes[j]
        if p not in (None, 0.0):
            domains.append(AxisDomain.circle(p))
        elif b is not None:
            domains.append(AxisDomain.line(b))
        else:
            raise ValueError(f"axis {j}: cannot infer an integration domain for {u.label or u!r}")
    return tuple(domains)


def reilly_residual(
    u: TestFunction,
    m: MetricField,
    domains=None,
    gridspec: GridSpec | None = None,
) -> float:
    """Integral residual ``int (lap u)^2 - g(hess u, hess u) - Ric(grad u, grad u) dv``.

    Vanishes for periodic or compactly supported ``u``; the integration
    domain defaults to one period per periodic axis and the declared
    support box per line axis.
    """
    if not m.constant:
        raise NotImplementedError("integral trace identity implemented for constant metrics")
    doms = tuple(domains) if domains is not None else _domains_from_support(u)
    vol = float(m.vol_density(np.zeros((1, m.dim)))[0])
    ginv0 = m.g_inv(np.zeros((1, m.dim)))[0]

    def field(pts):
        _, du, d2u = u.jet(pts)
        lap = np.einsum("ij,nij->n", ginv0, d2u)
        hess_sq = np.einsum("ik,jl,nij,nkl->n", ginv0, ginv0, d2u, d2u)
        ric = m.ricci(pts)
        grad_up = np.einsum("ij,nj->ni", ginv0, du)
        ric_term = np.einsum("nij,ni,nj->n", ric, grad_up, grad_up)
        return (lap * lap - hess_sq - ric_term) * vol

    return quadrature.integrate(field, doms, gridspec, boxes=u.axis_boxes)
