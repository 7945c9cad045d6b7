"""Exact calculus on a function family closed under Cartesian derivatives.

Members are finite sums

    sum coeff * x^a y^b z^c * r^p * exp(-lam |x - mu|^2)

stored as a dict from ``(a, b, c, p, lam, mu)`` to a complex coefficient.
Radial powers are kept as :class:`fractions.Fraction` so like terms merge
exactly. Coefficient functions of operators are members with ``lam = 0``.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

_FD_WEIGHTS = (4 / 5, -1 / 5, 4 / 105, -1 / 280)


class FamilyClosureError(RuntimeError):
    """An operation would leave the function family."""


def _key(exps, p, lam, mu):
    return (int(exps[0]), int(exps[1]), int(exps[2]), Fraction(p), float(lam), tuple(float(m) for m in mu))


_ORIGIN = (0.0, 0.0, 0.0)


class SymbolicFunction:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for k, v in (terms or {}).items():
            if v != 0:
                self.terms[k] = complex(v)

    # constructors
    @classmethod
    def term(cls, coeff=1.0, exps=(0, 0, 0), p=0, lam=0.0, mu=_ORIGIN):
        if lam < 0:
            raise ValueError("gaussian width must be nonnegative")
        return cls({_key(exps, p, lam, mu): coeff})

    @classmethod
    def constant(cls, c=1.0):
        return cls.term(c)

    @classmethod
    def coordinate(cls, i, coeff=1.0, p=0):
        exps = [0, 0, 0]
        exps[i] = 1
        return cls.term(coeff, exps, p)

    @classmethod
    def radial(cls, p, coeff=1.0):
        return cls.term(coeff, (0, 0, 0), p)

    @classmethod
    def gaussian(cls, lam, mu, coeff=1.0, exps=(0, 0, 0)):
        return cls.term(coeff, exps, 0, lam, mu)

    # algebra
    def copy(self):
        return SymbolicFunction(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, 0) + v
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return SymbolicFunction(out)

    def __neg__(self):
        return SymbolicFunction({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SymbolicFunction):
            return self._product(other)
        return SymbolicFunction({k: v * other for k, v in self.terms.items()})

    __rmul__ = __mul__

    def _product(self, other):
        out = SymbolicFunction()
        for (a1, b1, c1, p1, l1, m1), v1 in self.terms.items():
            for (a2, b2, c2, p2, l2, m2), v2 in other.terms.items():
                if l1 and l2:
                    raise FamilyClosureError("product of two gaussians is not represented")
                lam, mu = (l1, m1) if l1 else (l2, m2)
                out = out + SymbolicFunction({(a1 + a2, b1 + b2, c1 + c2, p1 + p2, lam, mu): v1 * v2})
        return out

    def __len__(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    # calculus
    def diff(self, i):
        """Exact partial derivative along coordinate ``i``."""
        out = {}

        def add(k, v):
            s = out.get(k, 0) + v
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s

        for (a, b, c, p, lam, mu), v in self.terms.items():
            e = [a, b, c]
            if e[i]:
                low = list(e)
                low[i] -= 1
                add((*low, p, lam, mu), v * e[i])
            up = list(e)
            up[i] += 1
            if p:
                add((*up, p - 2, lam, mu), v * float(p))
            if lam:
                add((*up, p, lam, mu), -2.0 * lam * v)
                if mu[i]:
                    add((a, b, c, p, lam, mu), 2.0 * lam * mu[i] * v)
        return SymbolicFunction(out)

    def laplacian(self):
        return self.diff(0).diff(0) + self.diff(1).diff(1) + self.diff(2).diff(2)

    def __call__(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
        r = np.sqrt(x * x + y * y + z * z)
        out = np.zeros(pts.shape[0], dtype=np.complex128)
        for (a, b, c, p, lam, mu), v in self.terms.items():
            val = x**a * y**b * z**c
            if p:
                val = val * r ** float(p)
            if lam:
                d2 = (x - mu[0]) ** 2 + (y - mu[1]) ** 2 + (z - mu[2]) ** 2
                val = val * np.exp(-lam * d2)
            out += v * val
        return out

    def __repr__(self):
        return f"SymbolicFunction({len(self.terms)} terms)"


class Spinor:
    """A fixed-length tuple of :class:`SymbolicFunction` components."""

    __slots__ = ("components",)

    def __init__(self, components):
        self.components = tuple(components)

    @classmethod
    def zeros(cls, n=2):
        return cls(SymbolicFunction() for _ in range(n))

    @classmethod
    def basis(cls, k, n=2):
        return cls(SymbolicFunction.constant(1.0) if j == k else SymbolicFunction() for j in range(n))

    def __len__(self):
        return len(self.components)

    def __getitem__(self, k):
        return self.components[k]

    def __add__(self, other):
        return Spinor(a + b for a, b in zip(self.components, other.components))

    def __sub__(self, other):
        return Spinor(a - b for a, b in zip(self.components, other.components))

    def __neg__(self):
        return Spinor(-a for a in self.components)

    def scale(self, c):
        return Spinor(a * c for a in self.components)

    def diff(self, i):
        return Spinor(a.diff(i) for a in self.components)

    def laplacian(self):
        return Spinor(a.laplacian() for a in self.components)

    def matmul(self, m, s=None):
        """``(M (x) s) f`` for a constant matrix ``M`` and scalar coefficient ``s``."""
        m = np.asarray(m)
        comps = []
        for row in range(m.shape[0]):
            acc = SymbolicFunction()
            for col in range(m.shape[1]):
                if m[row, col] != 0:
                    acc = acc + self.components[col] * complex(m[row, col])
            comps.append(acc if s is None else acc * s)
        return Spinor(comps)

    def __call__(self, points):
        return np.stack([c(points) for c in self.components])

    def term_count(self):
        return sum(len(c) for c in self.components)


class MatrixDifferentialOperator:
    """``D = sum_i M_i(x) d_i + V(x)`` with matrix-times-scalar coefficients.

    ``derivs`` holds ``(axis, matrix, scalar)`` triples and ``potential``
    holds ``(matrix, scalar)`` pairs, each scalar a :class:`SymbolicFunction`
    without a gaussian factor.
    """

    def __init__(self, derivs=(), potential=(), size=2):
        self.derivs = [(int(i), np.asarray(m, dtype=np.complex128), s) for i, m, s in derivs]
        self.potential = [(np.asarray(m, dtype=np.complex128), s) for m, s in potential]
        self.size = size
        for _, s in self.potential + [(m, s) for _, m, s in self.derivs]:
            if any(k[4] for k in s.terms):
                raise FamilyClosureError("operator coefficients must not carry gaussian factors")

    def __add__(self, other):
        return MatrixDifferentialOperator(self.derivs + other.derivs, self.potential + other.potential, self.size)

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return MatrixDifferentialOperator(
            [(i, m * c, s) for i, m, s in self.derivs], [(m * c, s) for m, s in self.potential], self.size
        )

    def potential_part(self):
        return MatrixDifferentialOperator((), self.potential, self.size)

    def derivative_part(self):
        return MatrixDifferentialOperator(self.derivs, (), self.size)

    def apply(self, f):
        out = Spinor.zeros(self.size)
        for i, m, s in self.derivs:
            out = out + f.diff(i).matmul(m, s)
        for m, s in self.potential:
            out = out + f.matmul(m, s)
        return out

    __call__ = apply

    def apply_numeric(self, g, h=0.005):
        """Same operator acting on a callable, derivatives by 8th-order differences."""

        def result(points):
            pts = np.atleast_2d(np.asarray(points, dtype=float))
            base = g(pts)
            out = np.zeros_like(base)
            for i, m, s in self.derivs:
                out += m @ (s(pts) * central_difference(g, pts, i, h))
            for m, s in self.potential:
                out += m @ (s(pts) * base)
            return out

        return result


def central_difference(g, points, axis, h=0.005):
    """Eighth-order central difference of ``g`` along ``axis``."""
    step = np.zeros(3)
    step[axis] = h
    acc = 0.0
    for k, w in enumerate(_FD_WEIGHTS, start=1):
        acc = acc + w * (g(points + k * step) - g(points - k * step))
    return acc / h


def commutator_action(a, b, f):
    """``a(b f) - b(a f)`` in the closed family."""
    return a(b(f)) - b(a(f))


def commutator_numeric(a, b, g, h=0.005):
    ab = a.apply_numeric(b.apply_numeric(g, h), h)
    ba = b.apply_numeric(a.apply_numeric(g, h), h)
    return lambda pts: ab(pts) - ba(pts)
