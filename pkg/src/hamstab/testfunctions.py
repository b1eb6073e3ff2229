"""Test functions (Hamiltonian variation generators) with exact jets.

Every test function reports its value, gradient and Hessian at a batch of
chart points, plus per-axis support metadata:

* ``axis_periods[j]``: period on axis j (``0.0`` means constant along the
  axis, ``None`` means not periodic);
* ``axis_boxes[j]``: half-width of a box outside which the function and its
  listed partials vanish below 1e-14 (``None`` if unbounded support).

Gaussian-type factors are treated as compactly supported with a declared
box of ten standard deviations, where the tail is far below the vanishing
threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TestFunction",
    "Const1D",
    "Cos1D",
    "Gauss1D",
    "PolyGauss1D",
    "HermGauss1D",
    "Separable",
    "PlaneWaveCos",
    "AnisotropicGaussian",
    "LinComb",
    "AxisScaled",
    "isotropic_rescale",
    "random_trig_poly",
    "random_bump_poly",
    "compatible_with",
]

GAUSS_BOX_SIGMAS = 10.0


class TestFunction:
    """Base class; subclasses fill n, axis_periods, axis_boxes and jet()."""

    n: int
    axis_periods: tuple
    axis_boxes: tuple
    label: str = ""

    def jet(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        raise NotImplementedError

    def __add__(self, other: "TestFunction") -> "LinComb":
        return LinComb([(1.0, self), (1.0, other)])

    def __sub__(self, other: "TestFunction") -> "LinComb":
        return LinComb([(1.0, self), (-1.0, other)])

    def __mul__(self, c: float) -> "LinComb":
        return LinComb([(float(c), self)])

    __rmul__ = __mul__


def compatible_with(u: TestFunction, domains) -> bool:
    """Does ``u`` respect every circle period and fit every line box?"""
    domains = tuple(domains)
    if u.n != len(domains):
        return False
    for j, dom in enumerate(domains):
        if dom.kind == "circle":
            p = u.axis_periods[j]
            if p is None:
                return False
            if p == 0.0:
                continue
            ratio = dom.size / p
            if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio) or round(ratio) < 1:
                return False
        else:
            box = u.axis_boxes[j]
            if box is None or box > dom.size * (1 + 1e-12):
                return False
    return True


# --------------------------------------------------------------------- 1-d

class Func1D:
    period: float | None = None
    box: float | None = None

    def jet1(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        raise NotImplementedError


@dataclass(frozen=True)
class Const1D(Func1D):
    value: float = 1.0
    period = 0.0
    box = None

    def jet1(self, x):
        z = np.zeros_like(x)
        return np.full_like(x, self.value), z, z


class Cos1D(Func1D):
    """cos(freq*x + phase); period 2*pi/freq."""

    def __init__(self, freq: float, phase: float = 0.0):
        if freq <= 0:
            raise ValueError("Cos1D needs freq > 0 (use Const1D for a constant)")
        self.freq = float(freq)
        self.phase = float(phase)
        self.period = 2 * np.pi / self.freq
        self.box = None

    def jet1(self, x):
        arg = self.freq * x + self.phase
        c = np.cos(arg)
        s = np.sin(arg)
        return c, -self.freq * s, -self.freq**2 * c


class Gauss1D(Func1D):
    """exp(-(x - center)^2 / (2 sigma^2))."""

    def __init__(self, sigma: float = 1.0, center: float = 0.0):
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        self.sigma = float(sigma)
        self.center = float(center)
        self.period = None
        self.box = abs(center) + GAUSS_BOX_SIGMAS * self.sigma

    def jet1(self, x):
        t = (x - self.center) / self.sigma**2
        v = np.exp(-0.5 * (x - self.center) ** 2 / self.sigma**2)
        return v, -t * v, (t * t - 1.0 / self.sigma**2) * v


class PolyGauss1D(Func1D):
    """p(x) * exp(-x^2 / (2 sigma^2)) for a polynomial p."""

    def __init__(self, coeffs, sigma: float = 1.0):
        self.p = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
        self.sigma = float(sigma)
        # d/dx (q * gauss) = (q' - q x/sigma^2) * gauss
        x_over = np.polynomial.Polynomial([0.0, 1.0 / self.sigma**2])
        self.p1 = self.p.deriv() - self.p * x_over
        self.p2 = self.p1.deriv() - self.p1 * x_over
        self.period = None
        self.box = GAUSS_BOX_SIGMAS * self.sigma

    def jet1(self, x):
        g = np.exp(-0.5 * x * x / self.sigma**2)
        return self.p(x) * g, self.p1(x) * g, self.p2(x) * g


def HermGauss1D(degree: int, sigma: float = 1.0) -> PolyGauss1D:
    """Probabilists' Hermite polynomial of given degree times a Gaussian."""
    coeffs = np.polynomial.hermite_e.herme2poly([0.0] * degree + [1.0])
    return PolyGauss1D(coeffs, sigma)


# ----------------------------------------------------------------- products

class Separable(TestFunction):
    """Product of one-variable factors, one per axis."""

    def __init__(self, factors, label: str = ""):
        self.factors = list(factors)
        self.n = len(self.factors)
        self.axis_periods = tuple(f.period for f in self.factors)
        self.axis_boxes = tuple(f.box for f in self.factors)
        self.label = label

    def jet(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        npts, n = pts.shape
        v = np.empty((n, npts))
        d1 = np.empty((n, npts))
        d2 = np.empty((n, npts))
        for j, f in enumerate(self.factors):
            v[j], d1[j], d2[j] = f.jet1(pts[:, j])
        u = np.prod(v, axis=0)
        du = np.empty((npts, n))
        hess = np.empty((npts, n, n))
        for j in range(n):
            pj = np.ones(npts)
            for k in range(n):
                if k != j:
                    pj = pj * v[k]
            du[:, j] = d1[j] * pj
            hess[:, j, j] = d2[j] * pj
            for k in range(j + 1, n):
                pjk = np.ones(npts)
                for l in range(n):
                    if l != j and l != k:
                        pjk = pjk * v[l]
                hess[:, j, k] = hess[:, k, j] = d1[j] * d1[k] * pjk
        return u, du, hess


class PlaneWaveCos(TestFunction):
    """cos(sum_j freqs[j] * s_j + phase); the basic torus mode."""

    def __init__(self, freqs, phase: float = 0.0, label: str = ""):
        self.freqs = np.asarray(freqs, dtype=float)
        self.phase = float(phase)
        self.n = len(self.freqs)
        self.axis_periods = tuple(
            2 * np.pi / abs(m) if m != 0.0 else 0.0 for m in self.freqs
        )
        self.axis_boxes = (None,) * self.n
        self.label = label

    def jet(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        arg = pts @ self.freqs + self.phase
        c = np.cos(arg)
        s = np.sin(arg)
        outer = np.einsum("i,j->ij", self.freqs, self.freqs)
        return c, -np.einsum("n,i->ni", s, self.freqs), -np.einsum("n,ij->nij", c, outer)


class AnisotropicGaussian(TestFunction):
    """exp(-(s - c)^T A (s - c) / 2) for symmetric positive definite A."""

    def __init__(self, A, center=None, label: str = ""):
        self.A = np.asarray(A, dtype=float)
        self.n = self.A.shape[0]
        if self.A.shape != (self.n, self.n) or not np.allclose(self.A, self.A.T):
            raise ValueError("A must be symmetric")
        eigs = np.linalg.eigvalsh(self.A)
        if eigs[0] <= 0:
            raise ValueError("A must be positive definite")
        self.center = np.zeros(self.n) if center is None else np.asarray(center, dtype=float)
        # per-axis marginal widths sqrt((A^{-1})_jj) keep the boxes tight
        # axis by axis, which the tensor-product quadrature needs
        marginal = np.sqrt(np.diag(np.linalg.inv(self.A)))
        self.axis_periods = (None,) * self.n
        self.axis_boxes = tuple(
            abs(c) + GAUSS_BOX_SIGMAS * w for c, w in zip(self.center, marginal)
        )
        self.label = label

    def jet(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float)) - self.center
        As = pts @ self.A
        u = np.exp(-0.5 * np.einsum("ni,ni->n", pts, As))
        du = -As * u[:, None]
        hess = (np.einsum("ni,nj->nij", As, As) - self.A) * u[:, None, None]
        return u, du, hess


def _common_period(periods) -> float | None:
    """Smallest integer multiple of the largest period that every period
    divides (None if no small common multiple exists)."""
    ps = sorted(periods)
    base = ps[-1]
    for m in range(1, 13):
        cand = m * base
        if all(abs(cand / p - round(cand / p)) < 1e-9 for p in ps):
            return cand
    return None


class LinComb(TestFunction):
    """Linear combination of test functions on the same axes."""

    def __init__(self, terms, label: str = ""):
        terms = [(float(c), f) for c, f in terms]
        if not terms:
            raise ValueError("empty combination")
        self.terms = terms
        self.n = terms[0][1].n
        if any(f.n != self.n for _, f in terms):
            raise ValueError("mixed dimensions in combination")
        periods = []
        boxes = []
        for j in range(self.n):
            ps = {f.axis_periods[j] for _, f in terms}
            nonconst = {p for p in ps if p not in (0.0,)}
            if None in nonconst:
                periods.append(None)
            elif not nonconst:
                periods.append(0.0)
            else:
                periods.append(_common_period(nonconst))
            bs = [f.axis_boxes[j] for _, f in terms]
            boxes.append(None if any(b is None for b in bs) else max(bs))
        self.axis_periods = tuple(periods)
        self.axis_boxes = tuple(boxes)
        self.label = label

    def compatible_terms(self, domains) -> bool:
        return all(compatible_with(f, domains) for _, f in self.terms)

    def jet(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        c0, f0 = self.terms[0]
        u, du, hess = f0.jet(pts)
        u, du, hess = c0 * u, c0 * du, c0 * hess
        for c, f in self.terms[1:]:
            v, dv, hv = f.jet(pts)
            u = u + c * v
            du = du + c * dv
            hess = hess + c * hv
        return u, du, hess


class AxisScaled(TestFunction):
    """prefactor * f(scales * s): the scaling families of the probes."""

    def __init__(self, base: TestFunction, scales, prefactor: float = 1.0, label: str = ""):
        self.base = base
        self.scales = np.asarray(scales, dtype=float)
        if len(self.scales) != base.n or np.any(self.scales <= 0):
            raise ValueError("need one positive scale per axis")
        self.prefactor = float(prefactor)
        self.n = base.n
        self.axis_periods = tuple(
            None if p is None else p / s for p, s in zip(base.axis_periods, self.scales)
        )
        self.axis_boxes = tuple(
            None if b is None else b / s for b, s in zip(base.axis_boxes, self.scales)
        )
        self.label = label or (base.label and f"{base.label};scaled")

    def jet(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        u, du, hess = self.base.jet(pts * self.scales)
        u = self.prefactor * u
        du = self.prefactor * du * self.scales
        hess = self.prefactor * hess * np.einsum("i,j->ij", self.scales, self.scales)
        return u, du, hess


def isotropic_rescale(u: TestFunction, t: float) -> AxisScaled:
    """u^t(s) = t^(n/2 - 1) u(t s), the volume-normalized dilation."""
    return AxisScaled(u, [t] * u.n, t ** (u.n / 2.0 - 1.0), label=f"{u.label};t={t:g}")


# ------------------------------------------------------------ random fields

def random_trig_poly(periods, rng, n_terms: int = 4, kmax: int = 3) -> LinComb:
    """Random real trigonometric polynomial respecting the given periods."""
    periods = np.asarray(periods, dtype=float)
    n = len(periods)
    terms = []
    for _ in range(n_terms):
        k = np.zeros(n, dtype=int)
        while not k.any():
            k = rng.integers(-kmax, kmax + 1, size=n)
        freqs = 2 * np.pi * k / periods
        coef = rng.uniform(-1.0, 1.0)
        phase = rng.uniform(0.0, 2 * np.pi)
        terms.append((coef, PlaneWaveCos(freqs, phase)))
    return LinComb(terms, label="random-trig")


def random_bump_poly(n: int, rng, sigma: float = 1.0, max_degree: int = 3, n_terms: int = 3) -> LinComb:
    """Random combination of Hermite-modulated Gaussian bump products."""
    terms = []
    for _ in range(n_terms):
        factors = [HermGauss1D(int(rng.integers(0, max_degree + 1)), sigma) for _ in range(n)]
        terms.append((rng.uniform(-1.0, 1.0), Separable(factors)))
    return LinComb(terms, label="random-bump")
