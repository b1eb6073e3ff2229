import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hamstab.catalog import (
    TUBE_ROWS,
    CatalogIdError,
    CurveData,
    default_catalog_ids,
    make_geodesic_tube,
    make_hyperbola_product,
    make_rank_one_bundle,
    make_torus,
    resolve,
)
from hamstab.immersion import check_h_minimal, induced_geometry, induced_geometry_batch, sample_grid


def test_unit_circle_chart():
    chart = make_torus((1.0,), 0)
    geo = induced_geometry(chart, [0.5])
    assert geo.g[0, 0] == pytest.approx(1.0)
    assert geo.nH_cov[0] == pytest.approx(1.0)
    assert chart.domains[0].kind == "circle"
    assert chart.domains[0].size == pytest.approx(2 * np.pi)


def test_torus_metric_signs():
    chart = make_torus((1.0, 2.0), 1)
    geo = induced_geometry(chart, [0.1, 0.2])
    assert np.allclose(geo.g, np.diag([-1.0, 1.0]), atol=1e-14)
    assert check_h_minimal(chart) <= 1e-10


def test_torus_validation():
    with pytest.raises(ValueError):
        make_torus((1.0, -1.0), 0)
    with pytest.raises(ValueError):
        make_torus((1.0,), 2)


def test_hyperbola_metric_signs():
    chart = make_hyperbola_product((1.0, 2.0), (1, -1))
    geo = induced_geometry(chart, [0.3, -0.7])
    assert np.allclose(geo.g, np.diag([-1.0, 1.0]), atol=1e-12)
    assert check_h_minimal(chart) <= 1e-9


def test_hyperbola_validation():
    with pytest.raises(ValueError):
        make_hyperbola_product((1.0,), (2,))
    with pytest.raises(ValueError):
        make_hyperbola_product((1.0, 1.0), (1,))


def test_catalog_charts_h_minimal_but_not_minimal():
    for cid in ("torus:n=2,r=1,2,p=1", "hyperbola:n=2,r=1,3,eps=+,+"):
        chart = resolve(cid).chart
        grid = sample_grid(chart)
        assert check_h_minimal(chart, grid) <= 1e-8
        h_cov = induced_geometry_batch(chart, grid)["nH_cov"]
        assert np.max(np.abs(h_cov)) > 0.1


# ------------------------------------------------------------ geodesic tubes

# The per-row displayed integrands, transcribed independently of the generic
# (e1..e4) encoding; these are the golden checks of that encoding.
_DISPLAYED = {
    ("S3", "closed-definite", "G"): lambda us, ut, uss, ust, utt: (uss + utt) ** 2 - 2 * (us**2 + ut**2),
    ("S3", "closed-definite", "Gprime"): lambda us, ut, uss, ust, utt: 4 * ust**2 + 2 * (us**2 + ut**2),
    ("dS3", "closed-definite", "G"): lambda us, ut, uss, ust, utt: -((-uss + utt) ** 2 - 2 * us**2 + 2 * ut**2),
    ("dS3", "closed-definite", "Gprime"): lambda us, ut, uss, ust, utt: 4 * ust**2 + 2 * us**2 - 2 * ut**2,
    ("dS3", "closed-indefinite", "G"): lambda us, ut, uss, ust, utt: (uss - utt) ** 2 - 2 * us**2 + 2 * ut**2,
    ("dS3", "closed-indefinite", "Gprime"): lambda us, ut, uss, ust, utt: -(4 * ust**2 + 2 * us**2 - 2 * ut**2),
    ("dS3", "unbounded-indefinite", "G"): lambda us, ut, uss, ust, utt: (-uss + utt) ** 2 + 2 * us**2 - 2 * ut**2,
    ("dS3", "unbounded-indefinite", "Gprime"): lambda us, ut, uss, ust, utt: -(4 * ust**2 - 2 * us**2 + 2 * ut**2),
    ("AdS3", "closed-indefinite", "G"): lambda us, ut, uss, ust, utt: -((uss + utt) ** 2 - 2 * us**2 - 2 * ut**2),
    ("AdS3", "closed-indefinite", "Gprime"): lambda us, ut, uss, ust, utt: -(4 * ust**2 + 2 * (us**2 + ut**2)),
    ("AdS3", "unbounded-indefinite", "G"): lambda us, ut, uss, ust, utt: -((uss + utt) ** 2 + 2 * (us**2 + ut**2)),
    ("AdS3", "unbounded-indefinite", "Gprime"): lambda us, ut, uss, ust, utt: -(4 * ust**2 - 2 * (us**2 + ut**2)),
    ("AdS3", "unbounded-definite", "G"): lambda us, ut, uss, ust, utt: (uss + utt) ** 2 + 2 * (us**2 + ut**2),
    ("AdS3", "unbounded-definite", "Gprime"): lambda us, ut, uss, ust, utt: 4 * ust**2 - 2 * (us**2 + ut**2),
    ("H3", "unbounded-definite", "G"): lambda us, ut, uss, ust, utt: -((uss - utt) ** 2 + 2 * us**2 - 2 * ut**2),
    ("H3", "unbounded-definite", "Gprime"): lambda us, ut, uss, ust, utt: 4 * ust**2 - 2 * us**2 + 2 * ut**2,
}


def _random_jets(rng, npts=40):
    pts = rng.uniform(-1, 1, size=(npts, 2))
    u = rng.uniform(-1, 1, size=npts)
    du = rng.uniform(-1, 1, size=(npts, 2))
    hess = rng.uniform(-1, 1, size=(npts, 2, 2))
    hess = 0.5 * (hess + np.swapaxes(hess, 1, 2))
    return pts, (u, du, hess)


@pytest.mark.parametrize("row", TUBE_ROWS, ids=lambda t: f"{t.space}-{t.row_key}")
@pytest.mark.parametrize("metric", ["G", "Gprime"])
def test_tube_integrands_match_displayed_forms(row, metric):
    functional = make_geodesic_tube(row.space, row.row_key, metric)
    displayed = _DISPLAYED[(row.space, row.row_key, metric)]
    rng = np.random.default_rng(17)
    pts, jets = _random_jets(rng)
    got = functional.integrand(pts, jets)
    _, du, hess = jets
    want = displayed(du[:, 0], du[:, 1], hess[:, 0, 0], hess[:, 0, 1], hess[:, 1, 1])
    assert np.max(np.abs(got - want)) <= 1e-12


def test_tube_sign_tuple_consistency():
    # e4 = e1 e2 e3 holds on every row (the two overall signs are e1*e3, e1*e2)
    for t in TUBE_ROWS:
        e1, e2, e3, e4 = t.eps_tuple
        assert e4 == e1 * e2 * e3


def test_tube_domain_topology():
    expected = {
        ("S3", "closed-definite"): ("circle", "circle"),
        ("AdS3", "closed-indefinite"): ("circle", "circle"),
        ("dS3", "closed-definite"): ("circle", "line"),
        ("dS3", "closed-indefinite"): ("circle", "line"),
        ("dS3", "unbounded-indefinite"): ("line", "circle"),
        ("H3", "unbounded-definite"): ("line", "circle"),
        ("AdS3", "unbounded-indefinite"): ("line", "line"),
        ("AdS3", "unbounded-definite"): ("line", "line"),
    }
    for t in TUBE_ROWS:
        functional = make_geodesic_tube(t.space, t.row_key, "G")
        kinds = tuple(d.kind for d in functional.domains)
        assert kinds == expected[(t.space, t.row_key)]
        assert ("torus" if kinds == ("circle", "circle") else
                "plane" if kinds == ("line", "line") else "cylinder") == t.topology


def test_tube_row_selectors():
    # numeric space forms are accepted
    f = make_geodesic_tube(0, "closed", "G")
    assert f.name == "tube:S3:closed-definite:G"
    # ambiguous selector on dS3
    with pytest.raises(CatalogIdError, match="matches 2 rows"):
        make_geodesic_tube("dS3", "closed", "G")
    with pytest.raises(CatalogIdError):
        make_geodesic_tube("dS3", "spacelike", "G")
    with pytest.raises(CatalogIdError):
        make_geodesic_tube("S3", "closed", "H")
    with pytest.raises(CatalogIdError):
        make_geodesic_tube(7, "closed", "G")


@given(st.floats(min_value=-3.0, max_value=3.0))
def test_functional_quadratic_homogeneity(c):
    functional = make_geodesic_tube("S3", "closed", "G")
    rng = np.random.default_rng(23)
    pts, (u, du, hess) = _random_jets(rng, npts=8)
    base = functional.integrand(pts, (u, du, hess))
    scaled = functional.integrand(pts, (c * u, c * du, c * hess))
    assert np.allclose(scaled, c * c * base, rtol=1e-12, atol=1e-9)


# -------------------------------------------------------- rank-one surfaces

def test_rank_one_geodesic_hyperbolic_base():
    functional = make_rank_one_bundle(CurveData(kappa=0.0, K_along=-1.0))
    rng = np.random.default_rng(19)
    pts, jets = _random_jets(rng)
    vals = functional.integrand(pts, jets)
    _, du, hess = jets
    assert np.allclose(vals, 4 * hess[:, 0, 1] ** 2 + 2 * du[:, 1] ** 2, atol=1e-12)
    assert np.all(vals >= 0)


def test_rank_one_circle_domains():
    length = 2 * np.pi
    functional = make_rank_one_bundle(CurveData(kappa=1.0, K_along=0.0, closed=True, length=length))
    assert functional.domains[0].kind == "circle"
    assert functional.domains[0].size == pytest.approx(length)
    assert functional.domains[1].kind == "line"


def test_rank_one_nonzero_profile_warns_and_changes_integrand():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        functional = make_rank_one_bundle(CurveData(kappa=1.0, K_along=0.0, a_profile=0.5))
    assert any("tangential profile" in str(w.message) for w in caught)
    rng = np.random.default_rng(29)
    pts, jets = _random_jets(rng)
    _, du, hess = jets
    got = functional.integrand(pts, jets)
    lap = 2 * hess[:, 0, 1] - 2 * 0.5 * 1.0 * hess[:, 1, 1]
    want = lap**2 - 1.0 * du[:, 1] ** 2
    assert np.allclose(got, want, atol=1e-12)


def test_curve_data_validation():
    with pytest.raises(ValueError, match="length"):
        CurveData(kappa=1.0, K_along=0.0, closed=True)
    with pytest.raises(ValueError, match="periodic"):
        CurveData(kappa=lambda s: s, K_along=0.0, closed=True, length=1.0)
    # periodic callables pass
    CurveData(kappa=lambda s: np.cos(2 * np.pi * s), K_along=0.0, closed=True, length=1.0)


# ------------------------------------------------------------------ registry

def test_resolve_round_trip():
    entry = resolve("torus:n=2,r=1,2,p=1")
    assert entry.kind == "torus"
    assert entry.params == {"n": 2, "radii": [1.0, 2.0], "p": 1}
    entry = resolve("hyperbola:n=2,r=1,3,eps=+,+")
    assert entry.params["eps"] == [1, 1]
    entry = resolve("tube:AdS3:closed-indefinite:Gprime")
    assert entry.certificate is not None and entry.certificate.sign == -1
    entry = resolve("plane:n=2,amb=para")
    assert entry.params["para"] is True


@pytest.mark.parametrize(
    "bad",
    [
        "bogus:x=1",
        "torus:n=2,r=1,p=1",            # wrong radius count
        "torus:n=2,r=1,2,p=1,q=3",      # unknown key
        "torus:n=2,r=1,2",              # missing p
        "torus:n=2,r=1,2,p=1,p=2",      # duplicate key
        "hyperbola:n=2,r=1,1,eps=+,0",  # bad sign
        "plane:n=2,p=1,amb=para",       # p with para
        "plane:n=2,amb=euclidean",      # bad amb value
        "tube:S3:closed",               # missing metric
        "tn:kappa=1",                   # missing K
        "torus:r=1,n=1,p=0,extra",      # stray value
    ],
)
def test_resolve_rejects_malformed_ids(bad):
    with pytest.raises(CatalogIdError):
        resolve(bad)


def test_default_catalog_ids_resolve():
    ids = default_catalog_ids()
    assert len(ids) >= 30
    for cid in ids:
        entry = resolve(cid)
        assert entry.functional is not None


def test_default_strategies():
    assert resolve("torus:n=2,r=1,1,p=1").default_strategy == "fourier_sweep"
    assert resolve("hyperbola:n=2,r=1,3,eps=+,+").default_strategy == "sos_certificate"
    assert resolve("hyperbola:n=3,r=1,1,1,eps=+,+,+").default_strategy == "scaling_probe"
    assert resolve("tube:S3:closed:G").default_strategy == "spectral_criterion"
    assert resolve("tube:S3:closed:Gprime").default_strategy == "sos_certificate"
    assert resolve("tube:AdS3:unbounded-definite:Gprime").default_strategy == "scaling_probe"
    assert resolve("tn:kappa=0,K=-1").default_strategy == "sos_certificate"
    assert resolve("tn:kappa=1,K=0").default_strategy == "scaling_probe"
