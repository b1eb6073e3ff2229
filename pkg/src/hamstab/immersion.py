"""Parametrized Lagrangian charts in flat ambients.

A chart is an immersion oracle ``s -> (f, f_s, f_ss)`` into the real
interleaved coordinates of a flat ambient, together with per-axis domains
(circles or truncated lines).  From the oracle we assemble the induced
metric ``g_ij``, the cubic form ``C_ijk = g(f_ij, J f_k)`` (the second
fundamental form contracted against the normal frame ``J f_k``), and the
mean-curvature covector ``H_k = g(nH, J f_k) = g^{ij} C_ijk``.

Structural checks (Lagrangian, divergence-free mean curvature, full
symmetry of ``C``) are report-style: they return worst-case residuals over
a sample grid and leave the accept/reject decision to the caller.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .geometry import AmbientFlat
from .jets import Jet2

__all__ = [
    "AxisDomain",
    "LagrangianChart",
    "InducedGeometry",
    "DegenerateMetricError",
    "chart_from_components",
    "induced_geometry",
    "induced_geometry_batch",
    "check_lagrangian",
    "check_h_minimal",
    "trisymmetry_residual",
    "sample_grid",
]

# Oracle signature: points (N, n) -> (f (N, 2n), df (N, n, 2n), d2f (N, n, n, 2n))
ImmersionOracle = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]


class DegenerateMetricError(ValueError):
    """Induced metric is singular (or nearly so) at a sample point."""


@dataclass(frozen=True)
class AxisDomain:
    """One chart axis: a circle of given circumference, or a line with a
    truncation half-width beyond which test functions must vanish."""

    kind: str
    size: float

    def __post_init__(self) -> None:
        if self.kind not in ("circle", "line"):
            raise ValueError(f"unknown axis kind {self.kind!r}")
        if not self.size > 0:
            raise ValueError(f"axis size must be positive, got {self.size}")

    @classmethod
    def circle(cls, circumference: float) -> "AxisDomain":
        return cls("circle", float(circumference))

    @classmethod
    def line(cls, truncation: float = 1e4) -> "AxisDomain":
        return cls("line", float(truncation))

    @property
    def scale(self) -> float:
        """Natural length unit of the axis (radius for a circle)."""
        return self.size / (2 * np.pi) if self.kind == "circle" else 1.0


@dataclass(frozen=True)
class LagrangianChart:
    """Immersed chart with derivative oracle.

    ``metric_is_constant`` marks charts whose induced metric is constant in
    these coordinates (all the closed-form catalog charts); it lets the
    second-variation assembly skip finite-difference metric derivatives.
    ``geometry_is_constant`` additionally marks charts whose cubic form and
    mean-curvature covector are constant, so the second-variation integrand
    may be assembled from the geometry at the origin (this also keeps
    far-out probe evaluations away from overflowing oracle factors; the
    structural checks still sample the oracle itself).
    """

    ambient: AmbientFlat
    domains: tuple[AxisDomain, ...]
    oracle: ImmersionOracle = field(repr=False)
    oracle_kind: str = "closed_form"
    name: str = ""
    metric_is_constant: bool = False
    geometry_is_constant: bool = False

    def __post_init__(self) -> None:
        if self.oracle_kind not in ("closed_form", "dual_number"):
            raise ValueError(f"unknown oracle kind {self.oracle_kind!r}")
        if len(self.domains) != self.ambient.n:
            raise ValueError(
                f"chart has {len(self.domains)} axes but the ambient expects {self.ambient.n}"
            )

    @property
    def dim(self) -> int:
        return len(self.domains)


def chart_from_components(
    ambient: AmbientFlat,
    domains: Sequence[AxisDomain],
    components: Sequence[Callable[[list[Jet2]], Jet2]],
    name: str = "",
    metric_is_constant: bool = False,
    geometry_is_constant: bool = False,
) -> LagrangianChart:
    """Build a dual-number chart from scalar component functions.

    Each entry of ``components`` maps the list of coordinate jets to the jet
    of one real ambient coordinate; first and second partials come out of
    the jet algebra exactly.
    """
    if len(components) != ambient.real_dim:
        raise ValueError(
            f"need {ambient.real_dim} component functions, got {len(components)}"
        )

    def oracle(points: np.ndarray):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        npts, n = pts.shape
        seeds = Jet2.variables(pts)
        f = np.empty((npts, 2 * n))
        df = np.empty((npts, n, 2 * n))
        d2f = np.empty((npts, n, n, 2 * n))
        for a, comp in enumerate(components):
            jet = comp(seeds)
            f[:, a] = jet.val
            df[:, :, a] = jet.grad
            d2f[:, :, :, a] = jet.hess
        return f, df, d2f

    return LagrangianChart(
        ambient=ambient,
        domains=tuple(domains),
        oracle=oracle,
        oracle_kind="dual_number",
        name=name,
        metric_is_constant=metric_is_constant,
        geometry_is_constant=geometry_is_constant,
    )


@dataclass(frozen=True)
class InducedGeometry:
    """Induced data at a single chart point.

    ``nH_cov[k] = g(nH, J f_k)`` is the mean-curvature covector in the
    normal frame ``J f_k``; raising an index with ``g_inv`` gives the
    coefficients of ``g(nH, J grad u)`` on the partials of ``u``.
    """

    point: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    vol_density: float
    C: np.ndarray
    nH_cov: np.ndarray


def induced_geometry_batch(chart: LagrangianChart, points) -> dict[str, np.ndarray]:
    """Vectorized induced geometry over points of shape (N, n)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    f, df, d2f = chart.oracle(pts)
    if not (np.all(np.isfinite(f)) and np.all(np.isfinite(df)) and np.all(np.isfinite(d2f))):
        raise ValueError("immersion oracle returned non-finite values")
    sgn = chart.ambient.signature.as_array()
    g = np.einsum("nia,nja,a->nij", df, df, sgn)
    det = np.linalg.det(g)
    scale = np.max(np.abs(g), axis=(1, 2))
    n = chart.dim
    bad = np.abs(det) < 1e-10 * np.maximum(scale, 1e-300) ** n
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise DegenerateMetricError(
            f"induced metric degenerate at chart point {pts[idx]} (det={det[idx]:.3e})"
        )
    g_inv = np.linalg.inv(g)
    jdf = chart.ambient.j_apply(df)
    C = np.einsum("nija,nka,a->nijk", d2f, jdf, sgn)
    nH_cov = np.einsum("nij,nijk->nk", g_inv, C)
    return {
        "points": pts,
        "f": f,
        "df": df,
        "d2f": d2f,
        "g": g,
        "g_inv": g_inv,
        "det": det,
        "vol": np.sqrt(np.abs(det)),
        "C": C,
        "nH_cov": nH_cov,
    }


def induced_geometry(chart: LagrangianChart, s) -> InducedGeometry:
    """Induced geometry at one chart point."""
    geo = induced_geometry_batch(chart, np.atleast_2d(np.asarray(s, dtype=float)))
    return InducedGeometry(
        point=geo["points"][0],
        g=geo["g"][0],
        g_inv=geo["g_inv"][0],
        vol_density=float(geo["vol"][0]),
        C=geo["C"][0],
        nH_cov=geo["nH_cov"][0],
    )


def sample_grid(chart: LagrangianChart, per_axis: int = 17, line_window: float = 4.0) -> np.ndarray:
    """Evaluation points for structural checks: equispaced around circles,
    symmetric window on line axes."""
    axes = []
    for dom in chart.domains:
        if dom.kind == "circle":
            axes.append(np.linspace(0.0, dom.size, per_axis, endpoint=False))
        else:
            w = min(dom.size, line_window)
            axes.append(np.linspace(-w, w, per_axis))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def check_lagrangian(chart: LagrangianChart, grid: np.ndarray | None = None) -> float:
    """Worst symplectic pairing ``max |omega(f_i, f_j)|`` over the grid."""
    pts = sample_grid(chart) if grid is None else np.atleast_2d(grid)
    if len(pts) == 0:
        raise ValueError("empty sample grid")
    _, df, _ = chart.oracle(pts)
    amb = chart.ambient
    jdf = amb.j_apply(df)
    omega = amb.eps * np.einsum("nia,nja,a->nij", jdf, df, amb.signature.as_array())
    return float(np.max(np.abs(omega)))


def check_h_minimal(
    chart: LagrangianChart, grid: np.ndarray | None = None, rel_step: float = 1e-4
) -> float:
    """Worst ``|div(n J H)|`` over the grid.

    The tangent field has components ``X^l = g^{lk} H_k`` (overall sign
    conventions drop out of the zero test), and the divergence is computed
    as ``(1/sqrt|g|) d_l(sqrt|g| X^l)`` with central differences of step
    ``rel_step`` times the axis scale.
    """
    pts = sample_grid(chart) if grid is None else np.atleast_2d(grid)
    n = chart.dim

    def weighted_components(p: np.ndarray) -> np.ndarray:
        geo = induced_geometry_batch(chart, p)
        xl = np.einsum("nlk,nk->nl", geo["g_inv"], geo["nH_cov"])
        return geo["vol"][:, None] * xl

    base = induced_geometry_batch(chart, pts)
    div = np.zeros(len(pts))
    for l in range(n):
        h = rel_step * chart.domains[l].scale
        shift = np.zeros(n)
        shift[l] = h
        div += (weighted_components(pts + shift)[:, l] - weighted_components(pts - shift)[:, l]) / (
            2 * h
        )
    div /= base["vol"]
    return float(np.max(np.abs(div)))


def trisymmetry_residual(chart: LagrangianChart, grid: np.ndarray | None = None) -> float:
    """Worst deviation of ``C_ijk`` from full symmetry over the grid."""
    pts = sample_grid(chart) if grid is None else np.atleast_2d(grid)
    C = induced_geometry_batch(chart, pts)["C"]
    residual = 0.0
    for perm in ((0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        permuted = np.transpose(C, (0,) + tuple(1 + p for p in perm))
        residual = max(residual, float(np.max(np.abs(C - permuted))))
    return residual
