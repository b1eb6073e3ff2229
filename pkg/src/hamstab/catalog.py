"""Constructors for the example families and the catalog ID registry.

Flat-ambient families (products of circles in ``C^n_p``, products of
hyperbola branches in ``D^n``, flat Lagrangian planes) are returned as
charts; the curved-ambient families (normal congruences of geodesic tubes
in the spaces of geodesics of 3-dimensional space forms, rank-one surfaces
in the tangent bundle of a Riemannian surface) enter through closed-form
quadratic functionals with their sign data.

The geodesic-tube functionals are a single two-parameter family driven by
the sign tuple ``(e1, e2, e3, e4)`` of the first metric in the adapted
frame, with overall signs ``eps = e1*e3`` and ``eps' = e1*e2``:

    A_G(u)  = eps  * int ( (e3 u_ss + e2 u_tt)^2 - 2 (e1 u_s^2 + e4 u_t^2) )
    A_G'(u) = eps' * int ( 4 u_st^2 + 2 (e1 u_s^2 + e4 u_t^2) )

Each of the eight tube rows is one data record; the per-row displayed
integrands and the stability columns are golden tests of this encoding.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import AmbientFlat
from .immersion import AxisDomain, LagrangianChart, chart_from_components
from .jets import Jet2, jcos, jcosh, jsin, jsinh
from .quadrature import GridSpec

__all__ = [
    "CatalogIdError",
    "CurveData",
    "ClosedFormFunctional",
    "JetSquareTerm",
    "SumOfSquares",
    "TubeRow",
    "TUBE_ROWS",
    "CatalogEntry",
    "make_torus",
    "make_hyperbola_product",
    "make_lagrangian_plane",
    "make_geodesic_tube",
    "make_rank_one_bundle",
    "resolve",
    "default_catalog_ids",
]

LINE_TRUNCATION = 1e4


class CatalogIdError(ValueError):
    """Malformed or unknown catalog ID."""


# ------------------------------------------------------------- functionals

@dataclass
class ClosedFormFunctional:
    """Quadratic functional given directly by a pointwise integrand."""

    domains: tuple[AxisDomain, ...]
    integrand: Callable[[np.ndarray, tuple], np.ndarray] = field(repr=False)
    eps_tuple: tuple[int, int, int, int] | None = None
    expected_verdict: str | None = None
    provenance: str = ""
    name: str = ""


@dataclass(frozen=True)
class JetSquareTerm:
    """One ``weight * L(jet)^2`` term; L is linear with the given coefficients."""

    weight: float | Callable[[np.ndarray], np.ndarray]
    grad_coeffs: tuple
    hess_coeffs: tuple

    def linear_value(self, jet) -> np.ndarray:
        _, du, d2u = jet
        g = np.asarray(self.grad_coeffs, dtype=float)
        h = np.asarray(self.hess_coeffs, dtype=float)
        return np.einsum("ni,i->n", du, g) + np.einsum("nij,ij->n", d2u, h)

    def weight_values(self, points: np.ndarray) -> np.ndarray:
        if callable(self.weight):
            return np.asarray(self.weight(points), dtype=float)
        return np.full(len(points), float(self.weight))


@dataclass(frozen=True)
class SumOfSquares:
    """Signed sum-of-squares decomposition of an integrand.

    All weights must share ``sign`` (checked numerically by the analyzer
    for point-dependent weights); the decomposition certifies semi-
    definiteness pointwise, and ``kernel_note`` records why the kernel is
    trivial on the admissible class, upgrading it to definiteness.
    """

    terms: tuple[JetSquareTerm, ...]
    sign: int
    kernel_note: str = ""

    def form_values(self, points: np.ndarray, jet) -> np.ndarray:
        out = np.zeros(len(points))
        for term in self.terms:
            out += term.weight_values(points) * term.linear_value(jet) ** 2
        return out


# ------------------------------------------------------------ flat families

def make_torus(radii, p: int, oracle: str = "closed_form") -> LagrangianChart:
    """Product of circles ``f(s) = (r_j exp(i s_j / r_j))`` in ``C^n_p``.

    Induced metric ``sum eps_j ds_j^2``, cubic form ``C_jjj = eps_j / r_j``,
    mean-curvature covector ``H_j = 1/r_j``; H-minimal but not minimal.
    """
    r = np.asarray(radii, dtype=float)
    if np.any(r <= 0):
        raise ValueError("radii must be positive")
    n = len(r)
    if not 0 <= p <= n:
        raise ValueError(f"p must satisfy 0 <= p <= n, got {p}")
    ambient = AmbientFlat.pseudo_kahler(n, p)
    domains = tuple(AxisDomain.circle(2 * np.pi * rj) for rj in r)
    name = f"torus:n={n},r={','.join(f'{x:g}' for x in r)},p={p}"

    if oracle == "dual_number":
        comps: list[Callable[[list[Jet2]], Jet2]] = []
        for j in range(n):
            comps.append(lambda S, j=j: jcos(S[j] / r[j]) * r[j])
            comps.append(lambda S, j=j: jsin(S[j] / r[j]) * r[j])
        return chart_from_components(
            ambient, domains, comps, name=name,
            metric_is_constant=True, geometry_is_constant=True,
        )

    def oracle_fn(points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        npts = len(pts)
        theta = pts / r
        c, s = np.cos(theta), np.sin(theta)
        f = np.zeros((npts, 2 * n))
        f[:, 0::2] = r * c
        f[:, 1::2] = r * s
        df = np.zeros((npts, n, 2 * n))
        d2f = np.zeros((npts, n, n, 2 * n))
        for j in range(n):
            df[:, j, 2 * j] = -s[:, j]
            df[:, j, 2 * j + 1] = c[:, j]
            d2f[:, j, j, 2 * j] = -c[:, j] / r[j]
            d2f[:, j, j, 2 * j + 1] = -s[:, j] / r[j]
        return f, df, d2f

    return LagrangianChart(
        ambient=ambient,
        domains=domains,
        oracle=oracle_fn,
        oracle_kind="closed_form",
        name=name,
        metric_is_constant=True,
        geometry_is_constant=True,
    )


def make_hyperbola_product(
    radii, branch_signs, oracle: str = "closed_form", truncation: float = LINE_TRUNCATION
) -> LagrangianChart:
    """Product of hyperbola branches ``f(s) = (r_j ex_j(tau s_j / r_j))`` in ``D^n``.

    Branch sign +1 is ``x^2 - y^2 = r^2, x > 0`` (factor cosh + tau sinh),
    branch sign -1 is ``x^2 - y^2 = -r^2, y > 0`` (factor sinh + tau cosh).
    Induced metric ``-sum eps_j ds_j^2``; H-minimal but not minimal.
    """
    r = np.asarray(radii, dtype=float)
    eps = tuple(int(e) for e in branch_signs)
    if np.any(r <= 0):
        raise ValueError("radii must be positive")
    if len(eps) != len(r) or any(e not in (-1, 1) for e in eps):
        raise ValueError("need one branch sign (+1 or -1) per radius")
    n = len(r)
    ambient = AmbientFlat.para_kahler(n)
    domains = tuple(AxisDomain.line(truncation) for _ in range(n))
    eps_str = ",".join("+" if e == 1 else "-" for e in eps)
    name = f"hyperbola:n={n},r={','.join(f'{x:g}' for x in r)},eps={eps_str}"

    if oracle == "dual_number":
        comps = []
        for j in range(n):
            if eps[j] == 1:
                comps.append(lambda S, j=j: jcosh(S[j] / r[j]) * r[j])
                comps.append(lambda S, j=j: jsinh(S[j] / r[j]) * r[j])
            else:
                comps.append(lambda S, j=j: jsinh(S[j] / r[j]) * r[j])
                comps.append(lambda S, j=j: jcosh(S[j] / r[j]) * r[j])
        return chart_from_components(
            ambient, domains, comps, name=name,
            metric_is_constant=True, geometry_is_constant=True,
        )

    def oracle_fn(points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        npts = len(pts)
        theta = pts / r
        ch, sh = np.cosh(theta), np.sinh(theta)
        f = np.zeros((npts, 2 * n))
        df = np.zeros((npts, n, 2 * n))
        d2f = np.zeros((npts, n, n, 2 * n))
        for j in range(n):
            x, y = (ch, sh) if eps[j] == 1 else (sh, ch)
            f[:, 2 * j] = r[j] * x[:, j]
            f[:, 2 * j + 1] = r[j] * y[:, j]
            df[:, j, 2 * j] = y[:, j]
            df[:, j, 2 * j + 1] = x[:, j]
            d2f[:, j, j, 2 * j] = x[:, j] / r[j]
            d2f[:, j, j, 2 * j + 1] = y[:, j] / r[j]
        return f, df, d2f

    return LagrangianChart(
        ambient=ambient,
        domains=domains,
        oracle=oracle_fn,
        oracle_kind="closed_form",
        name=name,
        metric_is_constant=True,
        geometry_is_constant=True,
    )


def make_lagrangian_plane(
    n: int, p: int = 0, para: bool = False, truncation: float = LINE_TRUNCATION
) -> LagrangianChart:
    """Totally geodesic plane ``{y = 0}``: ``f(s) = s`` on the real axes.

    Minimal (not just H-minimal); the Hamiltonian second variation reduces
    to ``eps * int (lap u)^2``.
    """
    ambient = AmbientFlat.para_kahler(n) if para else AmbientFlat.pseudo_kahler(n, p)
    domains = tuple(AxisDomain.line(truncation) for _ in range(n))
    name = f"plane:n={n},amb=para" if para else f"plane:n={n},p={p}"

    def oracle_fn(points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        npts = len(pts)
        f = np.zeros((npts, 2 * n))
        f[:, 0::2] = pts
        df = np.zeros((npts, n, 2 * n))
        for j in range(n):
            df[:, j, 2 * j] = 1.0
        d2f = np.zeros((npts, n, n, 2 * n))
        return f, df, d2f

    return LagrangianChart(
        ambient=ambient,
        domains=domains,
        oracle=oracle_fn,
        oracle_kind="closed_form",
        name=name,
        metric_is_constant=True,
        geometry_is_constant=True,
    )


# ------------------------------------------------------------ geodesic tubes

@dataclass(frozen=True)
class TubeRow:
    space: str
    p: int
    geodesic: str
    induced: str
    eps_tuple: tuple[int, int, int, int]
    topology: str
    domain_kinds: tuple[str, str]
    g_verdict: str
    gprime_verdict: str

    @property
    def row_key(self) -> str:
        return f"{self.geodesic}-{self.induced}"


# One record per row of the stability table; domain kinds follow each row's
# integration domain (s-axis first).
TUBE_ROWS: tuple[TubeRow, ...] = (
    TubeRow("S3", 0, "closed", "definite", (1, 1, 1, 1), "torus", ("circle", "circle"), "unstable", "stable"),
    TubeRow("dS3", 1, "closed", "definite", (1, 1, -1, -1), "cylinder", ("circle", "line"), "unstable", "unstable"),
    TubeRow("dS3", 1, "closed", "indefinite", (1, -1, 1, -1), "cylinder", ("circle", "line"), "unstable", "unstable"),
    TubeRow("dS3", 1, "unbounded", "indefinite", (-1, 1, -1, 1), "cylinder", ("line", "circle"), "unstable", "unstable"),
    TubeRow("AdS3", 2, "closed", "indefinite", (1, -1, -1, 1), "torus", ("circle", "circle"), "unstable", "stable"),
    TubeRow("AdS3", 2, "unbounded", "indefinite", (-1, 1, 1, -1), "plane", ("line", "line"), "stable", "unstable"),
    TubeRow("AdS3", 2, "unbounded", "definite", (-1, -1, -1, -1), "plane", ("line", "line"), "stable", "unstable"),
    TubeRow("H3", 3, "unbounded", "definite", (-1, -1, 1, 1), "cylinder", ("line", "circle"), "unstable", "unstable"),
)

_SPACE_BY_P = {0: "S3", 1: "dS3", 2: "AdS3", 3: "H3"}


def _tube_domains(row: TubeRow) -> tuple[AxisDomain, AxisDomain]:
    return tuple(
        AxisDomain.circle(2 * np.pi) if kind == "circle" else AxisDomain.line(LINE_TRUNCATION)
        for kind in row.domain_kinds
    )


def _tube_integrand_G(eps_tuple):
    e1, e2, e3, e4 = eps_tuple
    sign = e1 * e3

    def integrand(points, jet):
        _, du, d2u = jet
        us, ut = du[:, 0], du[:, 1]
        uss, utt = d2u[:, 0, 0], d2u[:, 1, 1]
        lap = e3 * uss + e2 * utt
        return sign * (lap * lap - 2.0 * (e1 * us * us + e4 * ut * ut))

    return integrand


def _tube_integrand_Gprime(eps_tuple):
    e1, e2, e4 = eps_tuple[0], eps_tuple[1], eps_tuple[3]
    sign = e1 * e2

    def integrand(points, jet):
        _, du, d2u = jet
        us, ut = du[:, 0], du[:, 1]
        ust = d2u[:, 0, 1]
        return sign * (4.0 * ust * ust + 2.0 * (e1 * us * us + e4 * ut * ut))

    return integrand


def tube_sos_certificate(row: TubeRow, metric_choice: str) -> SumOfSquares | None:
    """Pointwise signed sum-of-squares form of a tube integrand, when one exists."""
    e1, e2, e3, e4 = row.eps_tuple
    if metric_choice == "G":
        sign = e1 * e3
        weights = (sign * 1.0, -2.0 * sign * e1, -2.0 * sign * e4)
        terms = (
            JetSquareTerm(weights[0], (0.0, 0.0), ((e3, 0.0), (0.0, e2))),
            JetSquareTerm(weights[1], (1.0, 0.0), ((0.0, 0.0), (0.0, 0.0))),
            JetSquareTerm(weights[2], (0.0, 1.0), ((0.0, 0.0), (0.0, 0.0))),
        )
    else:
        sign = e1 * e2
        weights = (4.0 * sign, 2.0 * sign * e1, 2.0 * sign * e4)
        terms = (
            JetSquareTerm(weights[0], (0.0, 0.0), ((0.0, 1.0), (0.0, 0.0))),
            JetSquareTerm(weights[1], (1.0, 0.0), ((0.0, 0.0), (0.0, 0.0))),
            JetSquareTerm(weights[2], (0.0, 1.0), ((0.0, 0.0), (0.0, 0.0))),
        )
    if all(w > 0 for w in weights):
        cert_sign = 1
    elif all(w < 0 for w in weights):
        cert_sign = -1
    else:
        return None
    return SumOfSquares(
        terms=terms,
        sign=cert_sign,
        kernel_note=(
            "value 0 forces u_s = u_t = 0 pointwise, and a function constant on the "
            "whole domain is excluded by compact support on line axes (it represents "
            "the zero variation on tori)"
        ),
    )


def make_geodesic_tube(space_form, row, metric_choice: str = "G") -> ClosedFormFunctional:
    """Second-variation functional of the normal congruence of a geodesic
    tube, selected by space form (0..3 or name), row descriptor and metric.

    Row descriptors combine the geodesic type with the tube metric
    character when needed: 'closed', 'unbounded', 'closed-definite',
    'closed-indefinite', 'unbounded-definite', 'unbounded-indefinite'.
    """
    if metric_choice not in ("G", "Gprime"):
        raise CatalogIdError(f"metric choice must be 'G' or 'Gprime', got {metric_choice!r}")
    if isinstance(space_form, str):
        space = space_form
    else:
        try:
            space = _SPACE_BY_P[int(space_form)]
        except (KeyError, ValueError):
            raise CatalogIdError(f"space form must be 0..3 or a name, got {space_form!r}")
    candidates = [t for t in TUBE_ROWS if t.space == space]
    if not candidates:
        raise CatalogIdError(f"unknown space form {space!r}")
    row = str(row)
    parts = set(row.split("-")) if row else set()
    matches = [
        t
        for t in candidates
        if parts <= {t.geodesic, t.induced} and t.geodesic in parts
    ]
    if len(matches) != 1:
        raise CatalogIdError(
            f"row selector {row!r} matches {len(matches)} rows of {space}; "
            f"valid selectors: {sorted({t.row_key for t in candidates})}"
        )
    t = matches[0]
    integr = _tube_integrand_G(t.eps_tuple) if metric_choice == "G" else _tube_integrand_Gprime(t.eps_tuple)
    expected = t.g_verdict if metric_choice == "G" else t.gprime_verdict
    return ClosedFormFunctional(
        domains=_tube_domains(t),
        integrand=integr,
        eps_tuple=t.eps_tuple,
        expected_verdict=expected,
        provenance=f"geodesic-tube table row {t.space}:{t.row_key}, metric {metric_choice}",
        name=f"tube:{t.space}:{t.row_key}:{metric_choice}",
    )


# -------------------------------------------------------- rank-one surfaces

def _as_curve_fn(value) -> Callable[[np.ndarray], np.ndarray]:
    if callable(value):
        return lambda s: np.asarray(value(s), dtype=float)
    return lambda s: np.full_like(np.asarray(s, dtype=float), float(value))


@dataclass(frozen=True)
class CurveData:
    """Curve data for the rank-one surface in the tangent bundle: geodesic
    curvature ``kappa(s)``, Gaussian curvature ``K(s)`` of the base surface
    along the curve, and the optional tangential profile ``a(s)``."""

    kappa: float | Callable = 0.0
    K_along: float | Callable = 0.0
    closed: bool = False
    length: float | None = None
    a_profile: float | Callable = 0.0

    def __post_init__(self) -> None:
        if self.closed:
            if self.length is None or self.length <= 0:
                raise ValueError("closed curves need a positive length")
            for fn_raw in (self.kappa, self.K_along):
                if callable(fn_raw):
                    fn = _as_curve_fn(fn_raw)
                    s = np.linspace(0.0, self.length, 5, endpoint=False)
                    if not np.allclose(fn(s), fn(s + self.length), atol=1e-9):
                        raise ValueError("closed curve data must be periodic with the curve length")

    def kappa_fn(self):
        return _as_curve_fn(self.kappa)

    def K_fn(self):
        return _as_curve_fn(self.K_along)

    def a_fn(self):
        return _as_curve_fn(self.a_profile)

    @property
    def a_is_zero(self) -> bool:
        if not callable(self.a_profile):
            return float(self.a_profile) == 0.0
        s = np.linspace(-10.0, 10.0, 17)
        return bool(np.all(np.abs(self.a_fn()(s)) < 1e-15))


def make_rank_one_bundle(curve: CurveData, truncation: float = LINE_TRUNCATION) -> ClosedFormFunctional:
    """Second-variation functional of the rank-one surface over a curve.

    For the normal bundle (``a == 0``) the integrand is
    ``4 u_st^2 - (kappa^2 + 2 K)(s) u_t^2``.  A nonzero tangential profile
    changes the Laplacian to ``-2 u_st + 2 a kappa u_tt``; the constructor
    then warns and uses the full integrand
    ``(2 u_st - 2 a kappa u_tt)^2 - (kappa^2 + 2 K) u_t^2``.
    """
    kappa = curve.kappa_fn()
    K = curve.K_fn()
    a = curve.a_fn()
    a_zero = curve.a_is_zero
    if not a_zero:
        warnings.warn(
            "rank-one surface with a nonzero tangential profile: the simplified "
            "4 u_st^2 integrand does not apply; using the full Laplacian "
            "(2 u_st - 2 a kappa u_tt)^2 form",
            stacklevel=2,
        )

    def integrand(points, jet):
        _, du, d2u = jet
        s = points[:, 0]
        ut = du[:, 1]
        ust = d2u[:, 0, 1]
        coeff = kappa(s) ** 2 + 2.0 * K(s)
        if a_zero:
            lap2 = 4.0 * ust * ust
        else:
            utt = d2u[:, 1, 1]
            lap = 2.0 * ust - 2.0 * a(s) * kappa(s) * utt
            lap2 = lap * lap
        return lap2 - coeff * ut * ut

    s_dom = AxisDomain.circle(curve.length) if curve.closed else AxisDomain.line(truncation)
    if curve.closed:
        tag = f"tn:closed,L={curve.length:g}"
    else:
        tag = "tn:open"
    return ClosedFormFunctional(
        domains=(s_dom, AxisDomain.line(truncation)),
        integrand=integrand,
        expected_verdict=None,
        provenance="rank-one surface in the tangent bundle of a Riemannian surface",
        name=tag,
    )


def tn_sos_certificate(curve: CurveData) -> SumOfSquares:
    """Certificate ``4 u_st^2 + (-(kappa^2 + 2K))(s) u_t^2`` for curves with
    ``kappa^2 <= -2K`` everywhere (weights checked at verification time)."""
    kappa = curve.kappa_fn()
    K = curve.K_fn()

    def weight(points):
        s = points[:, 0]
        return -(kappa(s) ** 2 + 2.0 * K(s))

    return SumOfSquares(
        terms=(
            JetSquareTerm(4.0, (0.0, 0.0), ((0.0, 1.0), (0.0, 0.0))),
            JetSquareTerm(weight, (0.0, 1.0), ((0.0, 0.0), (0.0, 0.0))),
        ),
        sign=1,
        kernel_note=(
            "value 0 forces u_t = 0 (strict-coefficient case), and compact support "
            "in the fibre direction then gives u = 0"
        ),
    )


# ------------------------------------------------------------- the registry

@dataclass
class CatalogEntry:
    """A resolvable catalog item: the object to analyze plus its metadata."""

    catalog_id: str
    kind: str
    functional: object
    chart: LagrangianChart | None
    default_strategy: str
    params: dict
    certificate: SumOfSquares | None = None
    expected_verdict: str | None = None
    spectral: dict | None = None
    curve: CurveData | None = None
    default_gridspec: GridSpec | None = None
    provenance: str = ""


def _parse_kv(segment: str, allowed: dict[str, bool]) -> dict[str, list[str]]:
    """Parse 'k=v,v2,k2=v' segments; values may contain commas.

    ``allowed`` maps key -> required flag.  Unknown keys are rejected.
    """
    out: dict[str, list[str]] = {}
    current: str | None = None
    for token in segment.split(","):
        if "=" in token:
            key, val = token.split("=", 1)
            if key not in allowed:
                raise CatalogIdError(f"unknown key {key!r} (allowed: {sorted(allowed)})")
            if key in out:
                raise CatalogIdError(f"duplicate key {key!r}")
            out[key] = [val]
            current = key
        else:
            if current is None:
                raise CatalogIdError(f"value {token!r} without a key")
            out[current].append(token)
    missing = [k for k, req in allowed.items() if req and k not in out]
    if missing:
        raise CatalogIdError(f"missing required keys {missing}")
    return out


def _floats(vals: list[str], what: str) -> list[float]:
    try:
        return [float(v) for v in vals]
    except ValueError:
        raise CatalogIdError(f"bad {what}: {vals!r}")


def _int(vals: list[str], what: str) -> int:
    if len(vals) != 1:
        raise CatalogIdError(f"{what} takes a single value")
    try:
        return int(vals[0])
    except ValueError:
        raise CatalogIdError(f"bad {what}: {vals[0]!r}")


def resolve(catalog_id: str) -> CatalogEntry:
    """Resolve a catalog ID string to an entry; strict grammar."""
    from .variation import SecondVariationFunctional  # local import, avoids a cycle

    parts = catalog_id.split(":")
    kind = parts[0]

    if kind == "torus":
        if len(parts) != 2:
            raise CatalogIdError("torus IDs look like 'torus:n=2,r=1,2,p=1'")
        kv = _parse_kv(parts[1], {"n": True, "r": True, "p": True})
        n = _int(kv["n"], "n")
        radii = _floats(kv["r"], "radii")
        p = _int(kv["p"], "p")
        if len(radii) != n:
            raise CatalogIdError(f"expected {n} radii, got {len(radii)}")
        chart = make_torus(radii, p)
        return CatalogEntry(
            catalog_id=chart.name,
            kind="torus",
            functional=SecondVariationFunctional(chart),
            chart=chart,
            default_strategy="fourier_sweep",
            params={"n": n, "radii": radii, "p": p},
            expected_verdict="unstable" if 0 < p < n else "stable",
            provenance="product of circles in indefinite complex space",
        )

    if kind == "hyperbola":
        if len(parts) != 2:
            raise CatalogIdError("hyperbola IDs look like 'hyperbola:n=2,r=1,3,eps=+,+'")
        kv = _parse_kv(parts[1], {"n": True, "r": True, "eps": True})
        n = _int(kv["n"], "n")
        radii = _floats(kv["r"], "radii")
        try:
            eps = [{"+": 1, "-": -1, "+1": 1, "-1": -1}[e] for e in kv["eps"]]
        except KeyError:
            raise CatalogIdError(f"branch signs must be '+' or '-', got {kv['eps']!r}")
        if len(radii) != n or len(eps) != n:
            raise CatalogIdError(f"expected {n} radii and {n} branch signs")
        chart = make_hyperbola_product(radii, eps)
        entry = CatalogEntry(
            catalog_id=chart.name,
            kind="hyperbola",
            functional=SecondVariationFunctional(chart),
            chart=chart,
            default_strategy="sos_certificate" if n <= 2 else "scaling_probe",
            params={"n": n, "radii": radii, "eps": eps},
            expected_verdict="stable" if n <= 2 else "unstable",
            provenance="product of hyperbola branches in split-complex space",
        )
        entry.certificate = _hyperbola_certificate(radii, eps) if n <= 2 else None
        if n == 3:
            entry.default_gridspec = GridSpec(line_nodes=64)
        elif n >= 4:
            entry.default_gridspec = GridSpec(line_nodes=40)
        return entry

    if kind == "plane":
        if len(parts) != 2:
            raise CatalogIdError("plane IDs look like 'plane:n=2,p=1' or 'plane:n=2,amb=para'")
        kv = _parse_kv(parts[1], {"n": True, "p": False, "amb": False})
        n = _int(kv["n"], "n")
        para = kv.get("amb", ["euclid"])[0] == "para"
        if "amb" in kv and kv["amb"][0] not in ("para",):
            raise CatalogIdError("amb only takes the value 'para'")
        if para and "p" in kv:
            raise CatalogIdError("para-Kahler planes take no p")
        p = _int(kv["p"], "p") if "p" in kv else 0
        chart = make_lagrangian_plane(n, p=p, para=para)
        eps = chart.ambient.eps
        # induced metric diag(eps_j) (pseudo) or the identity (para), so
        # lap u = sum_j ginv_jj u_jj with ginv_jj = +-1
        ginv_diag = np.ones(n) if para else chart.ambient.axis_signs
        lap_coeffs = tuple(
            tuple(ginv_diag[i] if i == j else 0.0 for j in range(n)) for i in range(n)
        )
        cert = SumOfSquares(
            terms=(JetSquareTerm(float(eps), (0.0,) * n, lap_coeffs),),
            sign=eps,
            kernel_note=(
                "value 0 forces lap u = 0 pointwise; the flat Laplacian (any signature) "
                "has no nontrivial compactly supported null solutions"
            ),
        )
        return CatalogEntry(
            catalog_id=chart.name,
            kind="plane",
            functional=SecondVariationFunctional(chart),
            chart=chart,
            default_strategy="sos_certificate",
            params={"n": n, "p": p, "para": para},
            certificate=cert,
            expected_verdict="stable",
            provenance="totally geodesic Lagrangian plane (minimal, Ricci-flat ambient)",
        )

    if kind == "tube":
        if len(parts) != 4:
            raise CatalogIdError("tube IDs look like 'tube:S3:closed:G'")
        _, space, row, metric = parts
        functional = make_geodesic_tube(space, row, metric)
        t = next(
            tr
            for tr in TUBE_ROWS
            if functional.name == f"tube:{tr.space}:{tr.row_key}:{metric}"
        )
        cert = tube_sos_certificate(t, metric)
        if cert is not None:
            strategy = "sos_certificate"
        elif t.space == "S3" and metric == "G":
            strategy = "spectral_criterion"
        elif t.topology == "plane":
            strategy = "scaling_probe"
        else:
            strategy = "fourier_sweep"
        return CatalogEntry(
            catalog_id=functional.name,
            kind="tube",
            functional=functional,
            chart=None,
            default_strategy=strategy,
            params={"space": t.space, "row": t.row_key, "metric": metric, "eps_tuple": t.eps_tuple},
            certificate=cert,
            expected_verdict=functional.expected_verdict,
            spectral={"radii": (1.0, 1.0), "c": 2.0} if (t.space, metric) == ("S3", "G") else None,
            provenance=functional.provenance,
        )

    if kind == "tn":
        if len(parts) != 2:
            raise CatalogIdError("tn IDs look like 'tn:kappa=1,K=0' or 'tn:kappa=1,K=0,L=12.57'")
        kv = _parse_kv(parts[1], {"kappa": True, "K": True, "L": False})
        kappa = _floats(kv["kappa"], "kappa")[0]
        K = _floats(kv["K"], "K")[0]
        length = _floats(kv["L"], "L")[0] if "L" in kv else None
        curve = CurveData(kappa=kappa, K_along=K, closed=length is not None, length=length)
        functional = make_rank_one_bundle(curve)
        coeff = kappa**2 + 2 * K
        if coeff <= 0:
            strategy = "sos_certificate"
            expected = "stable"
        elif curve.closed:
            strategy = "spectral_criterion"
            expected = "stable" if coeff <= 16 * np.pi**2 / length**2 else None
        else:
            strategy = "scaling_probe"
            expected = "unstable"
        return CatalogEntry(
            catalog_id=catalog_id,
            kind="tn",
            functional=functional,
            chart=None,
            default_strategy=strategy,
            params={"kappa": kappa, "K": K, "length": length},
            certificate=tn_sos_certificate(curve) if coeff <= 0 else None,
            expected_verdict=expected,
            curve=curve,
            provenance=functional.provenance,
        )

    raise CatalogIdError(
        f"unknown catalog kind {kind!r} (known: torus, hyperbola, plane, tube, tn)"
    )


def _hyperbola_certificate(radii, eps) -> SumOfSquares:
    """Signed sum of squares for hyperbola products with one or two factors.

    n=1: -(lap u)^2 - (u_s / r)^2;
    n=2: -(e1 u_ss + e2 u_tt)^2 - (e1 u_s / r1 - e2 u_t / r2)^2.
    """
    r = [float(x) for x in radii]
    n = len(r)
    if n == 1:
        terms = (
            JetSquareTerm(-1.0, (0.0,), ((float(eps[0]),),)),
            JetSquareTerm(-1.0, (1.0 / r[0],), ((0.0,),)),
        )
    elif n == 2:
        terms = (
            JetSquareTerm(
                -1.0,
                (0.0, 0.0),
                ((float(eps[0]), 0.0), (0.0, float(eps[1]))),
            ),
            JetSquareTerm(
                -1.0,
                (eps[0] / r[0], -eps[1] / r[1]),
                ((0.0, 0.0), (0.0, 0.0)),
            ),
        )
    else:
        raise ValueError("sum-of-squares certificates exist only for n <= 2")
    return SumOfSquares(
        terms=terms,
        sign=-1,
        kernel_note=(
            "value 0 forces the gradient combination to vanish identically, so u is "
            "constant along unbounded lines; compact support then gives u = 0"
        ),
    )


def default_catalog_ids() -> list[str]:
    """The IDs exercised by the reproduction suite."""
    ids = [
        "torus:n=1,r=1,p=0",
        "torus:n=2,r=1,1,p=1",
        "torus:n=2,r=1,2,p=1",
        "torus:n=3,r=1,2,3,p=1",
        "torus:n=3,r=1,1,1,p=2",
        "hyperbola:n=1,r=1,eps=+",
        "hyperbola:n=1,r=1,eps=-",
        "hyperbola:n=2,r=1,3,eps=+,+",
        "hyperbola:n=2,r=1,2,eps=+,-",
        "hyperbola:n=3,r=1,1,1,eps=+,+,+",
        "hyperbola:n=4,r=1,1,1,1,eps=+,+,+,+",
        "plane:n=2,p=0",
        "plane:n=2,p=1",
        "plane:n=2,amb=para",
    ]
    for t in TUBE_ROWS:
        for metric in ("G", "Gprime"):
            ids.append(f"tube:{t.space}:{t.row_key}:{metric}")
    ids += [
        "tn:kappa=0,K=-1",
        f"tn:kappa=1,K=0,L={2 * np.pi:.17g}",
        "tn:kappa=1,K=0",
    ]
    return ids
