"""Flat ambient geometry: indefinite inner products, split-complex arithmetic,
the rotation operators J, and the symplectic pairing.

Conventions
-----------
Points of ``C^n_p`` and ``D^n`` are stored as real vectors of length ``2n``
with the interleaved layout ``(x_1, y_1, ..., x_n, y_n)``, where
``z_j = x_j + i y_j`` (complex case) or ``z_j = x_j + tau y_j``
(split-complex case, ``tau^2 = 1``).  A single sign ``eps`` distinguishes the
two families:

* ``eps = +1``: pseudo-Kahler ``C^n_p`` with Hermitian signs
  ``eps_j = -1`` for ``j <= p`` and ``+1`` otherwise; real metric signs
  ``(eps_j, eps_j)`` per pair; ``J`` is multiplication by ``i``.
* ``eps = -1``: para-Kahler ``D^n`` with neutral real metric
  ``(+1, -1)`` per pair; ``J`` is multiplication by ``tau``.

In both cases ``J^2 = -eps * Id``, ``g(J., J.) = eps * g``, and the
symplectic form is ``omega(X, Y) = eps * g(JX, Y)``.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Signature",
    "inner",
    "ParaComplex",
    "TAU",
    "pc_mul",
    "pc_conj",
    "pc_square_modulus",
    "pc_exp_tau",
    "AmbientFlat",
    "symplectic_form",
]


@dataclass(frozen=True)
class Signature:
    """Per-axis signs of a flat indefinite inner product diag(signs)."""

    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.signs) == 0:
            raise ValueError("signature needs at least one axis")
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError(f"signature entries must be +1 or -1, got {self.signs!r}")

    @property
    def dim(self) -> int:
        return len(self.signs)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.signs, dtype=float)


def inner(sig: Signature, x, y):
    """Indefinite dot product ``sum_j signs[j] * x[j] * y[j]``.

    Broadcasts over leading dimensions; the axis dimension is last.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != sig.dim or y.shape[-1] != sig.dim:
        raise ValueError(
            f"dimension mismatch: signature has {sig.dim} axes, "
            f"got vectors with {x.shape[-1]} and {y.shape[-1]}"
        )
    out = np.einsum("...j,...j,j->...", x, y, sig.as_array())
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ParaComplex:
    """Split-complex number ``x + tau*y`` with ``tau^2 = 1``.

    The product is commutative and associative; conjugation flips the sign
    of ``y`` and the square modulus ``z * conj(z)`` is the real number
    ``x^2 - y^2`` (Minkowski square).
    """

    x: float
    y: float

    def __add__(self, other: "ParaComplex") -> "ParaComplex":
        return ParaComplex(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "ParaComplex") -> "ParaComplex":
        return ParaComplex(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "ParaComplex":
        return ParaComplex(-self.x, -self.y)

    def __mul__(self, other):
        if isinstance(other, ParaComplex):
            return pc_mul(self, other)
        if isinstance(other, numbers.Real):
            return ParaComplex(self.x * other, self.y * other)
        return NotImplemented

    __rmul__ = __mul__

    def conj(self) -> "ParaComplex":
        return ParaComplex(self.x, -self.y)

    def square_modulus(self) -> float:
        return self.x * self.x - self.y * self.y

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


TAU = ParaComplex(0.0, 1.0)


def pc_mul(z: ParaComplex, w: ParaComplex) -> ParaComplex:
    """Split-complex product ``(x, y)(x', y') = (xx' + yy', xy' + x'y)``."""
    return ParaComplex(z.x * w.x + z.y * w.y, z.x * w.y + z.y * w.x)


def pc_conj(z: ParaComplex) -> ParaComplex:
    return z.conj()


def pc_square_modulus(z: ParaComplex) -> float:
    """Real part of ``z * conj(z)``; the tau part vanishes identically."""
    return z.square_modulus()


def pc_exp_tau(t: float, eps: int) -> ParaComplex:
    """Hyperbolic exponential along a hyperbola branch of sign ``eps``.

    ``eps = +1`` gives ``cosh t + tau sinh t`` (branch through 1),
    ``eps = -1`` gives ``sinh t + tau cosh t``.  Both satisfy
    ``d/dt ex(tau t) = tau * ex(tau t)`` and ``|ex(tau t)|^2 = eps``.
    """
    if eps == 1:
        return ParaComplex(np.cosh(t), np.sinh(t))
    if eps == -1:
        return ParaComplex(np.sinh(t), np.cosh(t))
    raise ValueError(f"branch sign must be +1 or -1, got {eps!r}")


@dataclass(frozen=True)
class AmbientFlat:
    """Flat ambient space ``C^n_p`` (kind 'pseudo_kahler') or ``D^n``
    (kind 'para_kahler'), with the real interleaved layout described in the
    module docstring."""

    kind: str
    n: int
    p: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("pseudo_kahler", "para_kahler"):
            raise ValueError(f"unknown ambient kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("ambient needs at least one complex axis")
        if self.kind == "pseudo_kahler" and not 0 <= self.p <= self.n:
            raise ValueError(f"p must satisfy 0 <= p <= n, got p={self.p}, n={self.n}")
        if self.kind == "para_kahler" and self.p != 0:
            raise ValueError("para-Kahler ambient takes no p parameter")

    @classmethod
    def pseudo_kahler(cls, n: int, p: int) -> "AmbientFlat":
        return cls("pseudo_kahler", n, p)

    @classmethod
    def para_kahler(cls, n: int) -> "AmbientFlat":
        return cls("para_kahler", n)

    @property
    def eps(self) -> int:
        """+1 for pseudo-Kahler, -1 for para-Kahler; ``J^2 = -eps Id``."""
        return 1 if self.kind == "pseudo_kahler" else -1

    @property
    def axis_signs(self) -> np.ndarray:
        """Hermitian signs per complex axis (pseudo-Kahler); all +1 for D^n,
        where branch signs live on the submanifold, not the ambient."""
        if self.kind == "pseudo_kahler":
            return np.array([-1.0] * self.p + [1.0] * (self.n - self.p))
        return np.ones(self.n)

    @property
    def signature(self) -> Signature:
        """Signs of the real 2n-dimensional metric, interleaved layout."""
        signs: list[int] = []
        if self.kind == "pseudo_kahler":
            for e in self.axis_signs:
                signs += [int(e), int(e)]
        else:
            signs = [1, -1] * self.n
        return Signature(tuple(signs))

    @property
    def real_dim(self) -> int:
        return 2 * self.n

    def j_apply(self, v: np.ndarray) -> np.ndarray:
        """Apply J per coordinate pair: multiplication by i (pseudo) or tau
        (para).  Accepts arrays with the 2n axis last."""
        v = np.asarray(v, dtype=float)
        if v.shape[-1] != self.real_dim:
            raise ValueError(f"expected real dimension {self.real_dim}, got {v.shape[-1]}")
        out = np.empty_like(v)
        xs = v[..., 0::2]
        ys = v[..., 1::2]
        if self.kind == "pseudo_kahler":
            out[..., 0::2] = -ys
            out[..., 1::2] = xs
        else:
            out[..., 0::2] = ys
            out[..., 1::2] = xs
        return out

    def metric(self, x, y):
        return inner(self.signature, x, y)

    def symplectic(self, x, y):
        """omega(X, Y) = eps * g(JX, Y)."""
        return self.eps * self.metric(self.j_apply(np.asarray(x, dtype=float)), y)


def symplectic_form(amb: AmbientFlat, X, Y):
    """Symplectic pairing of two real ambient vectors (or stacks thereof)."""
    return amb.symplectic(X, Y)
