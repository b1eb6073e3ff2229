"""Second-order forward-mode jets.

A :class:`Jet2` carries the value, gradient and Hessian of a scalar
expression in ``n`` seed variables, batched over an arbitrary number of
evaluation points.  Arithmetic and the elementary transcendental functions
propagate exact derivative recurrences, so oracles built on jets are exact
to rounding (no truncation error, unlike finite differences).
"""

from __future__ import annotations

import numbers

import numpy as np

__all__ = ["Jet2", "jsin", "jcos", "jsinh", "jcosh", "jexp"]


class Jet2:
    """Value/gradient/Hessian triple batched over N evaluation points.

    Shapes: ``val (N,)``, ``grad (N, n)``, ``hess (N, n, n)``.
    """

    __slots__ = ("val", "grad", "hess")

    def __init__(self, val, grad, hess):
        self.val = np.asarray(val, dtype=float)
        self.grad = np.asarray(grad, dtype=float)
        self.hess = np.asarray(hess, dtype=float)

    @classmethod
    def variables(cls, points) -> list["Jet2"]:
        """Seed jets for the coordinates of ``points`` with shape (N, n)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        npts, n = pts.shape
        out = []
        for j in range(n):
            grad = np.zeros((npts, n))
            grad[:, j] = 1.0
            out.append(cls(pts[:, j], grad, np.zeros((npts, n, n))))
        return out

    @classmethod
    def constant(cls, value: float, like: "Jet2") -> "Jet2":
        return cls(
            np.full_like(like.val, float(value)),
            np.zeros_like(like.grad),
            np.zeros_like(like.hess),
        )

    # ------------------------------------------------------------------ ops

    def __add__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.val + other.val, self.grad + other.grad, self.hess + other.hess)
        if isinstance(other, numbers.Real):
            return Jet2(self.val + other, self.grad, self.hess)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.val, -self.grad, -self.hess)

    def __sub__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.val - other.val, self.grad - other.grad, self.hess - other.hess)
        if isinstance(other, numbers.Real):
            return Jet2(self.val - other, self.grad, self.hess)
        return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, Jet2):
            cross = np.einsum("ni,nj->nij", self.grad, other.grad)
            return Jet2(
                self.val * other.val,
                self.val[:, None] * other.grad + other.val[:, None] * self.grad,
                self.val[:, None, None] * other.hess
                + other.val[:, None, None] * self.hess
                + cross
                + np.swapaxes(cross, 1, 2),
            )
        if isinstance(other, numbers.Real):
            return Jet2(self.val * other, self.grad * other, self.hess * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, numbers.Real):
            return self * (1.0 / other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, numbers.Integral) or k < 0:
            return NotImplemented
        out = Jet2.constant(1.0, self)
        for _ in range(int(k)):
            out = out * self
        return out

    def compose(self, f, fp, fpp) -> "Jet2":
        """Chain rule through a scalar function with derivatives f, f', f''."""
        v = f(self.val)
        d1 = fp(self.val)
        d2 = fpp(self.val)
        outer = np.einsum("ni,nj->nij", self.grad, self.grad)
        return Jet2(
            v,
            d1[:, None] * self.grad,
            d2[:, None, None] * outer + d1[:, None, None] * self.hess,
        )


def jsin(j: Jet2) -> Jet2:
    return j.compose(np.sin, np.cos, lambda v: -np.sin(v))


def jcos(j: Jet2) -> Jet2:
    return j.compose(np.cos, lambda v: -np.sin(v), lambda v: -np.cos(v))


def jsinh(j: Jet2) -> Jet2:
    return j.compose(np.sinh, np.cosh, np.sinh)


def jcosh(j: Jet2) -> Jet2:
    return j.compose(np.cosh, np.sinh, np.cosh)


def jexp(j: Jet2) -> Jet2:
    return j.compose(np.exp, np.exp, np.exp)
