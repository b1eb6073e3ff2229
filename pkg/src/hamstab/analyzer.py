"""Definiteness analysis of the second-variation quadratic forms.

A verdict label is never certified from finitely many eigenvalues alone:
``indefinite`` requires explicit test functions of both signs (re-evaluated
through the quadrature path), while ``positive_definite`` and
``negative_definite`` require an analytic certificate, either a signed
pointwise sum-of-squares rewriting of the integrand or a first-eigenvalue
criterion.  Everything else is ``inconclusive``, with the evidence used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .catalog import CatalogEntry, SumOfSquares
from .immersion import AxisDomain, LagrangianChart
from .quadrature import GridSpec, integrate  # noqa: F401  (re-exported op)
from .testfunctions import (
    AnisotropicGaussian,
    AxisScaled,
    Const1D,
    Cos1D,
    Gauss1D,
    LinComb,
    PlaneWaveCos,
    Separable,
    TestFunction,
)
from .variation import as_functional, evaluate_functional

__all__ = [
    "ModeVector",
    "Witness",
    "EvidenceRecord",
    "StabilityVerdict",
    "torus_mode_value",
    "assemble_form",
    "classify",
    "scaling_probe",
    "ScalingReport",
    "spectral_criterion",
    "SpectralReport",
    "hyperbola_matrix_analysis",
    "HyperbolaMatrixReport",
    "hyperbola_direction_probes",
    "gradient_form_value",
    "wirtinger_bound",
    "WirtingerReport",
    "witness_library",
    "compute_tube_table",
]

WITNESS_RTOL = 1e-8
SOS_RESIDUAL_TOL = 1e-10

LABEL_POSITIVE = "positive_definite"
LABEL_NEGATIVE = "negative_definite"
LABEL_INDEFINITE = "indefinite"
LABEL_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ModeVector:
    """Integer Fourier mode on torus axes; not all components zero."""

    k: tuple[int, ...]

    def __post_init__(self) -> None:
        if not any(self.k):
            raise ValueError("mode vector must be nonzero")


@dataclass
class Witness:
    probe_id: str
    value: float

    def to_json_dict(self) -> dict:
        return {"probe_id": self.probe_id, "value": self.value}


@dataclass
class EvidenceRecord:
    basis_size: int
    min_eig: float
    max_eig: float
    note: str = ""

    def to_json_dict(self) -> dict:
        return {
            "basis_size": self.basis_size,
            "min_eig": self.min_eig,
            "max_eig": self.max_eig,
            "note": self.note,
        }


@dataclass
class StabilityVerdict:
    label: str
    witness_pos: Witness | None = None
    witness_neg: Witness | None = None
    evidence: list[EvidenceRecord] = field(default_factory=list)
    strategy: str = ""
    catalog_id: str = ""
    grid: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "catalog_id": self.catalog_id,
            "label": self.label,
            "strategy": self.strategy,
            "witnesses": [
                w.to_json_dict() for w in (self.witness_pos, self.witness_neg) if w is not None
            ],
            "evidence": [e.to_json_dict() for e in self.evidence],
            "grid": self.grid,
            "tolerances": self.tolerances,
            "notes": self.notes,
        }


# ------------------------------------------------------------- closed forms

def torus_mode_value(radii, p: int, k) -> float:
    """Closed-form second variation of ``cos(sum_j k_j s_j / r_j)`` on the
    circle product with Hermitian signs from ``p``.

    With ``m_j = k_j / r_j`` and ``Vol = prod 2 pi r_j`` the value is
    ``(Vol/2) * ((sum eps_j m_j^2)^2 + (sum eps_j m_j / r_j)^2
    - 2 sum m_j^2 / r_j^2)``.
    """
    r = np.asarray(radii, dtype=float)
    kk = k.k if isinstance(k, ModeVector) else tuple(int(x) for x in k)
    if not any(kk):
        raise ValueError("zero mode")
    if not 0 <= p <= len(r):
        raise ValueError(f"p out of range for n={len(r)}")
    eps = np.array([-1.0] * p + [1.0] * (len(r) - p))
    m = np.asarray(kk, dtype=float) / r
    vol = float(np.prod(2 * np.pi * r))
    a = float(np.sum(eps * m * m))
    b = float(np.sum(eps * m / r))
    return 0.5 * vol * (a * a + b * b - 2.0 * float(np.sum(m * m / r / r)))


def torus_mode_function(radii, k, phase: float = 0.0) -> PlaneWaveCos:
    r = np.asarray(radii, dtype=float)
    kk = np.asarray(k.k if isinstance(k, ModeVector) else k, dtype=float)
    return PlaneWaveCos(kk / r, phase, label=f"mode:k={','.join(f'{int(x)}' for x in kk)}")


# ------------------------------------------------------------ form assembly

def assemble_form(functional, basis, gridspec: GridSpec | None = None) -> np.ndarray:
    """Polarized Gram matrix ``Q_ab = (V(u_a + u_b) - V(u_a - u_b)) / 4``.

    Symmetric by construction; the diagonal is the direct value on each
    basis function.
    """
    functional = as_functional(functional)
    k = len(basis)
    Q = np.empty((k, k))
    for a in range(k):
        Q[a, a] = evaluate_functional(functional, basis[a], gridspec)
        for b in range(a + 1, k):
            plus = LinComb([(1.0, basis[a]), (1.0, basis[b])])
            minus = LinComb([(1.0, basis[a]), (-1.0, basis[b])])
            val = 0.25 * (
                evaluate_functional(functional, plus, gridspec)
                - evaluate_functional(functional, minus, gridspec)
            )
            Q[a, b] = Q[b, a] = val
    return Q


# --------------------------------------------------------------- mode scans

def _canonical_modes(n: int, bound: int):
    for k in itertools.product(range(-bound, bound + 1), repeat=n):
        if not any(k):
            continue
        first = next(x for x in k if x != 0)
        if first < 0:
            continue
        yield k


@dataclass
class SpectralReport:
    lam1: float
    c: float
    verdict: str
    mode_table: list[tuple[tuple[int, ...], float, float]]


def spectral_criterion(lattice_radii, c: float, mode_bound: int = 4) -> SpectralReport:
    """First-eigenvalue criterion on a flat torus with the given radii.

    ``lam_k = sum (k_j / r_j)^2`` over nonzero integer modes; the form
    ``sum a_i^2 lam_i (lam_i - c)`` is definite iff ``lam_1 >= c``.
    """
    r = np.asarray(lattice_radii, dtype=float)
    rows = []
    for k in _canonical_modes(len(r), mode_bound):
        lam = float(np.sum((np.asarray(k) / r) ** 2))
        rows.append((k, lam, lam * (lam - c)))
    rows.sort(key=lambda row: (row[1], row[0]))
    lam1 = rows[0][1]
    return SpectralReport(lam1=lam1, c=float(c), verdict="stable" if lam1 >= c else "unstable", mode_table=rows)


# --------------------------------------------------- hyperbola gradient form

@dataclass
class HyperbolaMatrixReport:
    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    inertia: tuple[int, int, int]
    w_direction: np.ndarray
    w_value: float
    e1_value: float


def hyperbola_matrix_analysis(radii, branch_signs) -> HyperbolaMatrixReport:
    """Representing matrix of the gradient form
    ``Q(du, du) = sum u_j^2 / r_j^2 - 2 sum_{j<k} e_j e_k u_j u_k / (r_j r_k)``,

    namely ``M_Q = 2 diag(1/r_j^2) - v v^T`` with ``v_j = e_j / r_j``, its
    inertia, and the explicit sign directions: ``w_j = e_j r_j`` with
    ``w^T M_Q w = 2n - n^2`` (negative for n >= 3) and ``e_1`` with value
    ``1 / r_1^2``.
    """
    r = np.asarray(radii, dtype=float)
    eps = np.asarray(branch_signs, dtype=float)
    n = len(r)
    if n < 2:
        raise ValueError("the matrix analysis needs n >= 2")
    v = eps / r
    mq = 2.0 * np.diag(1.0 / r**2) - np.outer(v, v)
    eigvals, eigvecs = np.linalg.eigh(mq)
    tol = 1e-12 * max(1.0, float(np.max(np.abs(eigvals))))
    inertia = (
        int(np.sum(eigvals > tol)),
        int(np.sum(eigvals < -tol)),
        int(np.sum(np.abs(eigvals) <= tol)),
    )
    w = eps * r
    return HyperbolaMatrixReport(
        matrix=mq,
        eigenvalues=eigvals,
        eigenvectors=eigvecs,
        inertia=inertia,
        w_direction=w,
        w_value=float(w @ mq @ w),
        e1_value=float(mq[0, 0]),
    )


def gradient_form_value(radii, branch_signs, u: TestFunction, gridspec: GridSpec | None = None) -> float:
    """Quadrature value of ``int Q(du, du) ds`` for the hyperbola gradient form."""
    rep = hyperbola_matrix_analysis(radii, branch_signs)
    domains = tuple(AxisDomain.line() for _ in radii)

    def fld(pts):
        _, du, _ = u.jet(pts)
        return np.einsum("ni,ij,nj->n", du, rep.matrix, du)

    return integrate(fld, domains, gridspec, boxes=u.axis_boxes)


def _directional_gaussian(direction, narrow: float, wide: float, label: str) -> AnisotropicGaussian:
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    proj = np.outer(d, d)
    A = proj / narrow**2 + (np.eye(len(d)) - proj) / wide**2
    return AnisotropicGaussian(A, label=label)


def hyperbola_direction_probes(radii, branch_signs):
    """Gaussian probes whose gradients concentrate along the sign directions
    of ``M_Q``.  For a probe narrow across direction d the Gaussian-moment
    identity gives ``int Q(du,du) = Z * tr(M_Q A) / 2``, so the wide width is
    chosen so the d-term dominates with a factor-2 margin.
    """
    rep = hyperbola_matrix_analysis(radii, branch_signs)
    n = len(rep.w_direction)
    what = rep.w_direction / np.linalg.norm(rep.w_direction)
    wmw = float(what @ rep.matrix @ what)
    if wmw >= 0:
        raise ValueError("the w direction is only negative for n >= 3")
    rest = float(np.trace(rep.matrix)) - wmw
    wide = max(np.sqrt(2.0 * rest / abs(wmw)), 2.0)
    u_w = _directional_gaussian(what, 1.0, wide, label="dirgauss:w")
    e1 = np.eye(n)[0]
    u_e1 = _directional_gaussian(e1, 1.0, 3.0, label="dirgauss:e1")
    return u_w, u_e1, rep


# ------------------------------------------------------------ scaling probes

@dataclass
class ScalingReport:
    probe_label: str
    axes: tuple[int, ...]
    prefactor_exponent: float
    entries: list[tuple[float, float]]

    @property
    def positives(self) -> list[float]:
        return [t for t, v in self.entries if v > 0]

    @property
    def negatives(self) -> list[float]:
        return [t for t, v in self.entries if v < 0]

    @property
    def sign_change(self) -> bool:
        return bool(self.positives) and bool(self.negatives)


def scaling_probe(
    functional,
    u: TestFunction,
    t_schedule,
    axes=None,
    prefactor_exponent: float | None = None,
    gridspec: GridSpec | None = None,
) -> ScalingReport:
    """Evaluate the functional on the scaled family
    ``u^t = t^a u(t s_axes, s_rest)`` over the schedule and report values.

    The default exponent for all-axes scaling is ``a = n/2 - 1`` (volume
    normalization); axis-restricted families must state their exponent.
    """
    functional = as_functional(functional)
    n = len(functional.domains)
    axes = tuple(range(n)) if axes is None else tuple(axes)
    if prefactor_exponent is None:
        if len(axes) != n:
            raise ValueError("axis-restricted scaling needs an explicit prefactor exponent")
        prefactor_exponent = n / 2.0 - 1.0
    entries = []
    for t in t_schedule:
        scales = [t if j in axes else 1.0 for j in range(n)]
        ut = AxisScaled(u, scales, float(t) ** prefactor_exponent, label=f"{u.label};t={t:g}")
        entries.append((float(t), evaluate_functional(functional, ut, gridspec)))
    return ScalingReport(
        probe_label=u.label or "probe",
        axes=axes,
        prefactor_exponent=float(prefactor_exponent),
        entries=entries,
    )


# ------------------------------------------------------------ curve criterion

@dataclass
class WirtingerReport:
    sup_value: float
    threshold: float | None
    verdict: str
    branch: str


def wirtinger_bound(curve, samples: int = 1024) -> WirtingerReport:
    """Stability criterion for the rank-one surface over a curve.

    Unconditional branch: ``sup (kappa^2 + 2K) <= 0`` gives stability for
    any curve.  Closed curves of length L additionally get the
    first-Fourier-mode bound with threshold ``16 pi^2 / L^2``.  A sup above
    the threshold is inconclusive (the criterion is sufficient only).
    """
    kappa = curve.kappa_fn()
    K = curve.K_fn()
    if curve.closed:
        s = np.linspace(0.0, curve.length, samples, endpoint=False)
    else:
        s = np.linspace(-20.0, 20.0, samples)
    sup = float(np.max(kappa(s) ** 2 + 2.0 * K(s)))
    if sup <= 0.0:
        return WirtingerReport(sup, None, "stable", "pointwise")
    if not curve.closed:
        raise ValueError("the length-based branch needs a closed curve")
    thr = 16.0 * np.pi**2 / curve.length**2
    return WirtingerReport(sup, thr, "stable" if sup <= thr else "inconclusive", "wirtinger")


# ------------------------------------------------------------ witness library

def witness_library(domains, widths=(1.0, 4.0), max_mode: int = 2) -> list[TestFunction]:
    """Named probes adapted to the domain product: Fourier modes on circle
    axes, Gaussian bumps of several widths on line axes, and their
    products; plus diagonal plane waves on pure torus domains."""
    domains = tuple(domains)
    per_axis: list[list] = []
    for dom in domains:
        if dom.kind == "circle":
            base = 2 * np.pi / dom.size
            opts = [("const", Const1D())]
            opts += [(f"cos{k}", Cos1D(k * base)) for k in range(1, max_mode + 1)]
        else:
            opts = [(f"gauss{w:g}", Gauss1D(w)) for w in widths]
        per_axis.append(opts)
    out: list[TestFunction] = []
    for combo in itertools.product(*per_axis):
        if all(name == "const" for name, _ in combo):
            continue
        label = "x".join(name for name, _ in combo)
        out.append(Separable([f for _, f in combo], label=label))
    if all(dom.kind == "circle" for dom in domains) and len(domains) == 2:
        base = [2 * np.pi / dom.size for dom in domains]
        for k in ((1, 1), (1, -1), (2, 1), (1, 2)):
            freqs = [k[0] * base[0], k[1] * base[1]]
            out.append(PlaneWaveCos(freqs, label=f"wave:k={k[0]},{k[1]}"))
    return out


def _random_field(domains, rng) -> TestFunction:
    """Random jet field compatible with the domain product (for pointwise
    certificate residual checks)."""
    factors = []
    for dom in domains:
        if dom.kind == "circle":
            k = int(rng.integers(1, 4))
            factors.append(Cos1D(k * 2 * np.pi / dom.size, phase=float(rng.uniform(0, 2 * np.pi))))
        else:
            coeffs = rng.uniform(-1, 1, size=3)
            from .testfunctions import PolyGauss1D

            factors.append(PolyGauss1D(coeffs, sigma=float(rng.uniform(0.8, 1.6))))
    return Separable(factors, label="random-field")


def _witness_norm2(functional, u: TestFunction, gridspec: GridSpec | None) -> float:
    def fld(pts):
        val, _, _ = u.jet(pts)
        return val * val

    return integrate(fld, as_functional(functional).domains, gridspec, boxes=u.axis_boxes)


# ------------------------------------------------------------------ classify

def classify(
    target,
    strategy: str | None = None,
    gridspec: GridSpec | None = None,
    seed: int = 0,
) -> StabilityVerdict:
    """Run a classification strategy and return a sound verdict.

    ``target`` is a catalog entry, a chart, or a closed-form functional.
    Strategies: ``fourier_sweep`` (witness library scan),
    ``scaling_probe`` (dilation families), ``sos_certificate`` (pointwise
    signed sum of squares), ``spectral_criterion`` (first-eigenvalue and
    curve-length bounds).  ``inconclusive`` is a valid outcome.
    """
    entry = _as_entry(target)
    strategy = strategy or entry.default_strategy
    gridspec = gridspec or entry.default_gridspec
    if strategy == "fourier_sweep":
        verdict = _classify_fourier(entry, gridspec)
    elif strategy == "sos_certificate":
        verdict = _classify_sos(entry, gridspec, seed)
    elif strategy == "scaling_probe":
        verdict = _classify_scaling(entry, gridspec)
    elif strategy == "spectral_criterion":
        verdict = _classify_spectral(entry, gridspec)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    verdict.strategy = strategy
    verdict.catalog_id = entry.catalog_id
    spec = gridspec or GridSpec()
    verdict.grid = {
        "circle_nodes": spec.circle_nodes,
        "line_nodes": spec.line_nodes,
        "line_box": spec.line_box,
    }
    verdict.tolerances.setdefault("witness_rtol", WITNESS_RTOL)
    return verdict


def _as_entry(target) -> CatalogEntry:
    if isinstance(target, CatalogEntry):
        return target
    functional = as_functional(target)
    expected = getattr(functional, "expected_verdict", None)
    return CatalogEntry(
        catalog_id=getattr(functional, "name", "") or getattr(target, "name", "") or "adhoc",
        kind="adhoc",
        functional=functional,
        chart=target if isinstance(target, LagrangianChart) else None,
        default_strategy="fourier_sweep",
        params={},
        expected_verdict=expected,
    )


def _sign_witnesses(entry, pool, gridspec) -> tuple[Witness | None, Witness | None, list[float]]:
    """Evaluate labeled probes, return the best +/- witnesses above the
    norm-scaled threshold."""
    best_pos: Witness | None = None
    best_neg: Witness | None = None
    values = []
    for u in pool:
        val = evaluate_functional(entry.functional, u, gridspec)
        values.append(val)
        thresh = WITNESS_RTOL * max(_witness_norm2(entry.functional, u, gridspec), 1e-30)
        if val > thresh and (best_pos is None or val > best_pos.value):
            best_pos = Witness(u.label, val)
        if val < -thresh and (best_neg is None or val < best_neg.value):
            best_neg = Witness(u.label, val)
    return best_pos, best_neg, values


def _classify_fourier(entry: CatalogEntry, gridspec) -> StabilityVerdict:
    if entry.kind == "torus":
        return _classify_torus_modes(entry, gridspec)
    pool = witness_library(entry.functional.domains)
    pos, neg, values = _sign_witnesses(entry, pool, gridspec)
    evidence = [
        EvidenceRecord(len(pool), float(np.min(values)), float(np.max(values)), "library diagonal values")
    ]
    if pos and neg:
        return StabilityVerdict(LABEL_INDEFINITE, pos, neg, evidence)
    # look for sign mixing inside the span before giving up
    small = pool[: min(len(pool), 8)]
    Q = assemble_form(entry.functional, small, gridspec)
    eigvals, eigvecs = np.linalg.eigh(Q)
    evidence.append(EvidenceRecord(len(small), float(eigvals[0]), float(eigvals[-1]), "polarized form eigenvalues"))
    if eigvals[0] < 0 < eigvals[-1]:
        lo = LinComb(list(zip(eigvecs[:, 0], small)), label="eigmix:low")
        hi = LinComb(list(zip(eigvecs[:, -1], small)), label="eigmix:high")
        pos2, neg2, _ = _sign_witnesses(entry, [lo, hi], gridspec)
        pos, neg = pos or pos2, neg or neg2
        if pos and neg:
            return StabilityVerdict(LABEL_INDEFINITE, pos, neg, evidence)
    return StabilityVerdict(
        LABEL_INCONCLUSIVE,
        pos,
        neg,
        evidence,
        notes=["no certificate applies and the witness library found only one sign"],
    )


def _classify_torus_modes(entry: CatalogEntry, gridspec, bound: int = 4) -> StabilityVerdict:
    radii = entry.params["radii"]
    p = entry.params["p"]
    scan = [(k, torus_mode_value(radii, p, k)) for k in _canonical_modes(len(radii), bound)]
    values = [v for _, v in scan]
    evidence = [
        EvidenceRecord(
            len(scan),
            float(np.min(values)),
            float(np.max(values)),
            f"closed-form mode values, |k| <= {bound} (modes are orthogonal)",
        )
    ]
    # prefer the simplest mode of each sign (lowest total order, first axes first)
    tol = 1e-12 * max(1.0, float(np.max(np.abs(values))))
    simplicity = lambda kv: (sum(abs(x) for x in kv[0]), tuple(-x for x in kv[0]))
    pos_c = sorted((kv for kv in scan if kv[1] > tol), key=simplicity)
    neg_c = sorted((kv for kv in scan if kv[1] < -tol), key=simplicity)
    pos = neg = None
    if pos_c:
        u = torus_mode_function(radii, pos_c[0][0])
        val = evaluate_functional(entry.functional, u, gridspec)
        if val > WITNESS_RTOL * _witness_norm2(entry.functional, u, gridspec):
            pos = Witness(u.label, val)
    if neg_c:
        u = torus_mode_function(radii, neg_c[0][0])
        val = evaluate_functional(entry.functional, u, gridspec)
        if val < -WITNESS_RTOL * _witness_norm2(entry.functional, u, gridspec):
            neg = Witness(u.label, val)
    if pos and neg and pos.value > 0 > neg.value:
        return StabilityVerdict(LABEL_INDEFINITE, pos, neg, evidence)
    return StabilityVerdict(
        LABEL_INCONCLUSIVE,
        pos,
        neg,
        evidence,
        notes=[
            "no negative mode in the scanned lattice; definiteness of the definite-sign "
            "cases needs the circle spectral argument, which is not certified here"
        ],
    )


def _classify_sos(entry: CatalogEntry, gridspec, seed: int) -> StabilityVerdict:
    cert = entry.certificate
    if cert is None:
        return StabilityVerdict(
            LABEL_INCONCLUSIVE, notes=["no sum-of-squares certificate attached to this entry"]
        )
    residual, weight_ok = verify_certificate(entry.functional, cert, gridspec, seed)
    notes = [f"pointwise certificate residual {residual:.3e}"]
    if cert.kernel_note:
        notes.append(f"kernel: {cert.kernel_note}")
    if not weight_ok or residual > SOS_RESIDUAL_TOL:
        return StabilityVerdict(
            LABEL_INCONCLUSIVE,
            notes=notes + ["certificate failed verification"],
            tolerances={"sos_residual": residual},
        )
    pool = witness_library(entry.functional.domains)[:3]
    pos, neg, values = _sign_witnesses(entry, pool, gridspec)
    evidence = [
        EvidenceRecord(len(pool), float(np.min(values)), float(np.max(values)), "sample values")
    ]
    label = LABEL_POSITIVE if cert.sign > 0 else LABEL_NEGATIVE
    return StabilityVerdict(
        label,
        pos if cert.sign > 0 else None,
        neg if cert.sign < 0 else None,
        evidence,
        tolerances={"sos_residual": residual},
        notes=notes,
    )


def verify_certificate(
    functional, cert: SumOfSquares, gridspec: GridSpec | None = None, seed: int = 0, n_fields: int = 6
) -> tuple[float, bool]:
    """Max pointwise residual between the integrand and the certificate form
    over the grid, probed with random jet fields, plus a same-sign check of
    the (possibly point-dependent) weights."""
    functional = as_functional(functional)
    rng = np.random.default_rng(seed)
    from .quadrature import build_grid

    boxes = tuple(10.0 if d.kind == "line" else None for d in functional.domains)
    grid = build_grid(functional.domains, gridspec, boxes=boxes)
    pts, _ = grid.points_and_weights()
    if len(pts) > 20000:
        pts = pts[rng.choice(len(pts), 20000, replace=False)]
    residual = 0.0
    scale = 1.0
    for _ in range(n_fields):
        u = _random_field(functional.domains, rng)
        jet = u.jet(pts)
        vf = functional.integrand(pts, jet)
        vc = cert.form_values(pts, jet)
        residual = max(residual, float(np.max(np.abs(vf - vc))))
        scale = max(scale, float(np.max(np.abs(vf))))
    weight_ok = True
    for term in cert.terms:
        wv = term.weight_values(pts)
        if np.any(cert.sign * wv < -1e-14):
            weight_ok = False
    return residual / scale, weight_ok


def _classify_scaling(entry: CatalogEntry, gridspec) -> StabilityVerdict:
    if entry.kind == "hyperbola":
        return _classify_hyperbola_scaling(entry, gridspec)
    n = len(as_functional(entry.functional).domains)
    if entry.kind == "tn":
        base = Separable([Gauss1D(1.0), Gauss1D(1.0)], label="bump")
        schedule = np.geomspace(0.05, 20.0, 7)
        report = scaling_probe(
            entry.functional, base, schedule, axes=(0,), prefactor_exponent=1.5, gridspec=gridspec
        )
    else:
        base = Separable([Gauss1D(1.0) for _ in range(n)], label="bump")
        report = scaling_probe(
            entry.functional, base, (0.25, 0.5, 1.0, 2.0, 4.0), prefactor_exponent=0.0, gridspec=gridspec
        )
    values = [v for _, v in report.entries]
    evidence = [
        EvidenceRecord(
            len(values),
            float(np.min(values)),
            float(np.max(values)),
            f"scaled family {report.probe_label}, t in {[t for t, _ in report.entries]}",
        )
    ]
    pos, neg = _scaling_witnesses(entry, base, report, gridspec)
    if pos and neg:
        return StabilityVerdict(LABEL_INDEFINITE, pos, neg, evidence)
    return StabilityVerdict(
        LABEL_INCONCLUSIVE, pos, neg, evidence, notes=["scaled family found only one sign"]
    )


def _scaling_witnesses(entry, base, report: ScalingReport, gridspec):
    """Best scaled-family witnesses that clear the norm-scaled threshold."""
    n = len(as_functional(entry.functional).domains)
    best = {1: None, -1: None}
    for t, v in report.entries:
        if v > 0 and (best[1] is None or v > best[1][1]):
            best[1] = (t, v)
        if v < 0 and (best[-1] is None or v < best[-1][1]):
            best[-1] = (t, v)
    out = []
    for sign in (1, -1):
        if best[sign] is None:
            out.append(None)
            continue
        t, v = best[sign]
        scales = [t if j in report.axes else 1.0 for j in range(n)]
        ut = AxisScaled(base, scales, t**report.prefactor_exponent)
        thresh = WITNESS_RTOL * _witness_norm2(entry.functional, ut, gridspec)
        out.append(Witness(f"{report.probe_label};t={t:g}", v) if abs(v) > thresh else None)
    return out[0], out[1]


def _classify_hyperbola_scaling(entry: CatalogEntry, gridspec) -> StabilityVerdict:
    radii = entry.params["radii"]
    eps = entry.params["eps"]
    u_w, u_e1, rep = hyperbola_direction_probes(radii, eps)
    n = len(radii)
    schedule = (0.05, 0.5, 2.0) if n >= 4 else (0.05, 0.1, 0.5, 1.0, 2.0, 10.0)
    report_w = scaling_probe(entry.functional, u_w, schedule, gridspec=gridspec)
    qw = gradient_form_value(radii, eps, u_w, gridspec)
    qe = gradient_form_value(radii, eps, u_e1, gridspec)
    pos, neg = _scaling_witnesses(entry, u_w, report_w, gridspec)
    if neg is None:
        v_e1 = evaluate_functional(entry.functional, u_e1, gridspec)
        if v_e1 < -WITNESS_RTOL * _witness_norm2(entry.functional, u_e1, gridspec):
            neg = Witness("dirgauss:e1;t=1", v_e1)
    values = [v for _, v in report_w.entries]
    evidence = [
        EvidenceRecord(len(values), float(np.min(values)), float(np.max(values)), "w-aligned dilation family"),
        EvidenceRecord(
            len(rep.eigenvalues),
            float(rep.eigenvalues[0]),
            float(rep.eigenvalues[-1]),
            f"M_Q eigenvalues; inertia {rep.inertia}; w^T M_Q w = {rep.w_value:g}",
        ),
    ]
    notes = [
        f"gradient-form values: Q(u_w) = {qw:.6g} (< 0), Q(u_e1) = {qe:.6g} (> 0)",
    ]
    if pos and neg:
        return StabilityVerdict(LABEL_INDEFINITE, pos, neg, evidence, notes=notes)
    return StabilityVerdict(
        LABEL_INCONCLUSIVE, pos, neg, evidence, notes=notes + ["dilation family found only one sign"]
    )


def _classify_spectral(entry: CatalogEntry, gridspec) -> StabilityVerdict:
    if entry.kind == "tn":
        return _classify_tn_spectral(entry, gridspec)
    if not entry.spectral:
        return StabilityVerdict(
            LABEL_INCONCLUSIVE, notes=["no spectral data attached to this entry"]
        )
    radii = entry.spectral["radii"]
    c = entry.spectral["c"]
    rep = spectral_criterion(radii, c)
    signed = [lam * (lam - c) for _, lam, _ in [(k, l, s) for k, l, s in rep.mode_table]]
    evidence = [
        EvidenceRecord(
            len(rep.mode_table),
            float(np.min(signed)),
            float(np.max(signed)),
            f"lam(lam - c) over modes; lam1 = {rep.lam1:g}, c = {c:g}",
        )
    ]
    eps_sign = 1  # the S3 tube case is Kahler-Einstein with eps = +1
    if rep.verdict == "stable":
        label = LABEL_POSITIVE if eps_sign > 0 else LABEL_NEGATIVE
        return StabilityVerdict(label, evidence=evidence, notes=[f"lam1 = {rep.lam1:g} >= c = {c:g}"])
    base = 2 * np.pi / entry.functional.domains[0].size
    neg_u = Separable([Cos1D(base), Const1D()], label="mode:cos(s)")
    pos_u = Separable([Cos1D(2 * base), Const1D()], label="mode:cos(2s)")
    neg = Witness(neg_u.label, evaluate_functional(entry.functional, neg_u, gridspec))
    pos = Witness(pos_u.label, evaluate_functional(entry.functional, pos_u, gridspec))
    notes = [
        f"lam1 = {rep.lam1:g} < c = {c:g}",
        "the diagonal mode cos(s+t) sits exactly at lam = c and evaluates to 0; "
        "cos(s) is the negative witness",
    ]
    if pos.value > 0 > neg.value:
        return StabilityVerdict(LABEL_INDEFINITE, pos, neg, evidence, notes=notes)
    return StabilityVerdict(LABEL_INCONCLUSIVE, pos, neg, evidence, notes=notes)


def _classify_tn_spectral(entry: CatalogEntry, gridspec) -> StabilityVerdict:
    rep = wirtinger_bound(entry.curve)
    evidence = [
        EvidenceRecord(
            1,
            rep.sup_value,
            rep.sup_value,
            f"sup(kappa^2 + 2K) = {rep.sup_value:g}, threshold = {rep.threshold}",
        )
    ]
    if rep.verdict != "stable":
        return StabilityVerdict(
            LABEL_INCONCLUSIVE,
            evidence=evidence,
            notes=["the curve criterion is sufficient only; sup exceeds the threshold"],
        )
    if rep.threshold is not None and rep.sup_value >= rep.threshold * (1 - 1e-12):
        return StabilityVerdict(
            LABEL_INCONCLUSIVE,
            evidence=evidence,
            notes=["boundary case sup = threshold: the bound gives nonnegativity only"],
        )
    pool = witness_library(entry.functional.domains)[:2]
    pos, _, _ = _sign_witnesses(entry, pool, gridspec)
    notes = [
        "first-Fourier-mode bound: int 4 u_st^2 >= (16 pi^2 / L^2) int u_t^2 for "
        "mean-zero admissible variations"
        if rep.branch == "wirtinger"
        else "pointwise nonnegative integrand (kappa^2 + 2K <= 0)"
    ]
    return StabilityVerdict(LABEL_POSITIVE, pos, None, evidence, notes=notes)


# ------------------------------------------------------------ the tube table

def compute_tube_table(gridspec: GridSpec | None = None, seed: int = 0) -> list[dict]:
    """Recompute the (G, G') verdicts of all eight tube rows and compare with
    the stated columns."""
    from .catalog import TUBE_ROWS, resolve

    rows = []
    for t in TUBE_ROWS:
        row: dict = {
            "space": t.space,
            "geodesic": t.geodesic,
            "induced": t.induced,
            "eps_tuple": list(t.eps_tuple),
            "topology": t.topology,
        }
        for metric, stated in (("G", t.g_verdict), ("Gprime", t.gprime_verdict)):
            entry = resolve(f"tube:{t.space}:{t.row_key}:{metric}")
            verdict = classify(entry, gridspec=gridspec, seed=seed)
            recomputed = _label_to_column(verdict.label)
            row[metric] = {
                "stated": stated,
                "recomputed": recomputed,
                "label": verdict.label,
                "witnesses": [
                    w.to_json_dict() for w in (verdict.witness_pos, verdict.witness_neg) if w
                ],
                "strategy": verdict.strategy,
                "match": recomputed == stated,
            }
        rows.append(row)
    return rows


def _label_to_column(label: str) -> str:
    if label in (LABEL_POSITIVE, LABEL_NEGATIVE):
        return "stable"
    if label == LABEL_INDEFINITE:
        return "unstable"
    return "inconclusive"
