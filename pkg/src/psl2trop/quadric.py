"""The boundary quadric Q = {det = 0} in CP^3 and its circle bundle.

Q is the projectivization of rank-1 matrices and factors as CP^1 x CP^1
through the outer-product (Segre) parametrization; the first factor is the
column space, the second the row space.  Over each point of Q sits a circle of
sign classes [c B] for unit phases c, realized here by `fiber_point`.  The
trace section s([B]) = [B / tr(B)] trivializes the bundle away from the
trace-zero curve.
"""

from __future__ import annotations

import cmath
import math
from typing import Tuple

from .hyperbolic import BoundaryPoint
from .mat2 import Mat2, ProjPointC, ProjPointR, dist_proj_c

CP1 = Tuple[complex, complex]

_Q_DET_TOL = 1e-10


def cp1_normalize(x: CP1) -> CP1:
    """Unit-norm representative with the larger entry rotated positive-real."""
    n = math.sqrt(abs(x[0]) ** 2 + abs(x[1]) ** 2)
    if n == 0.0:
        raise ValueError("zero vector is not a CP^1 point")
    v = (x[0] / n, x[1] / n)
    z = v[0] if abs(v[0]) >= abs(v[1]) else v[1]
    w = z.conjugate() / abs(z)
    return (v[0] * w, v[1] * w)


def cp1_dist(x: CP1, y: CP1) -> float:
    """Fubini-Study angle on CP^1, stable near zero."""
    xv, yv = cp1_normalize(x), cp1_normalize(y)
    z = xv[0] * yv[0].conjugate() + xv[1] * yv[1].conjugate()
    r0 = xv[0] - z * yv[0]
    r1 = xv[1] - z * yv[1]
    return math.atan2(math.sqrt(abs(r0) ** 2 + abs(r1) ** 2), abs(z))


class QPoint:
    """Point of the quadric: a projective class with rank-1 representative."""

    __slots__ = ("point",)

    def __init__(self, point: ProjPointC):
        if abs(point.m.det()) > _Q_DET_TOL:
            raise ValueError("not on the quadric: determinant of the norm-1 representative exceeds 1e-10")
        object.__setattr__(self, "point", point)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("QPoint is immutable")

    @classmethod
    def from_matrix(cls, m: Mat2) -> "QPoint":
        return cls(ProjPointC(m))

    def __repr__(self):
        return f"QPoint({self.point!r})"


class FiberPoint:
    """Point of the circle bundle: a sign class [cB] with det 0, norm 1."""

    __slots__ = ("rep",)

    def __init__(self, rep: ProjPointR):
        if abs(rep.m.det()) > _Q_DET_TOL:
            raise ValueError("fiber point must have a determinant-0 representative")
        object.__setattr__(self, "rep", rep)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("FiberPoint is immutable")

    def base(self) -> QPoint:
        """Forget the circle coordinate: the underlying quadric point."""
        return QPoint(ProjPointC(self.rep.m))

    def __repr__(self):
        return f"FiberPoint({self.rep!r})"


def segre(x: CP1, y: CP1) -> QPoint:
    """([x0:x1],[y0:y1]) -> [x0 y0 : x0 y1 : x1 y0 : x1 y1], the outer product."""
    xv, yv = cp1_normalize(x), cp1_normalize(y)
    m = Mat2(xv[0] * yv[0], xv[0] * yv[1], xv[1] * yv[0], xv[1] * yv[1])
    return QPoint(ProjPointC(m))


def unsegre(q: QPoint) -> Tuple[CP1, CP1]:
    """Inverse parametrization: (column space, row space) of the representative."""
    m = q.point.m
    col1, col2 = (m.a, m.c), (m.b, m.d)
    x = col1 if abs(col1[0]) ** 2 + abs(col1[1]) ** 2 >= abs(col2[0]) ** 2 + abs(col2[1]) ** 2 else col2
    row1, row2 = (m.a, m.b), (m.c, m.d)
    y = row1 if abs(row1[0]) ** 2 + abs(row1[1]) ** 2 >= abs(row2[0]) ** 2 + abs(row2[1]) ** 2 else row2
    return cp1_normalize(x), cp1_normalize(y)


def fiber_point(q: QPoint, theta: float) -> FiberPoint:
    """The sign class of e^(i theta) times the canonical representative.

    theta and theta + pi give the same point, so the fiber is parametrized by
    [0, pi): positive real scaling and sign are both killed by the quotient.
    """
    rep = q.point.m * cmath.exp(1j * theta)
    return FiberPoint(ProjPointR(rep))


def fiber_membership(u: Mat2, b1: BoundaryPoint, b2: BoundaryPoint) -> bool:
    """Does the rotation u send boundary point b2 to b1 (u b2 u* = b1)?"""
    if not u.is_unitary(1e-10):
        raise ValueError("fiber membership requires a unitary matrix")
    moved = ProjPointC(u @ b2.point.m @ u.adjoint())
    return dist_proj_c(moved, b1.point) < 1e-9


def section_s(q: QPoint) -> FiberPoint:
    """The trace section [B / tr(B)], defined away from the trace-zero curve."""
    rep = q.point.m
    tr = rep.tr()
    if abs(tr) <= 1e-10:
        raise ValueError("section undefined on the trace-zero curve")
    return FiberPoint(ProjPointR(rep * (1.0 / tr)))
