"""Hyperboloid model of hyperbolic 3-space and the amoeba maps.

H3 is the sheet of positive-definite Hermitian 2x2 matrices of determinant 1;
the basepoint O is the identity.  A determinant-1 matrix g acts isometrically
by p -> g p g*.  The amoeba map kappa(a) = a a* records the orbit position,
its twin kappa*(a) = a* a the left-quotient position, and the coamoeba
kappa_o(a) = [a + (a*)^-1] (the class of the unitary polar factor) records the
rotational phase the amoebas forget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .mat2 import (
    Mat2,
    ProjPointC,
    ProjPointR,
    _herm_eig,
    frac_power,
    outer,
)

_DET_ONE_TOL = 1e-10
_VERTEX_EIG_TOL = 1e-10  # top eigenvalue above 1 + this counts as off-vertex


class H3Point:
    """Positive-definite Hermitian matrix with det = 1 (renormalized on entry)."""

    __slots__ = ("m",)

    def __init__(self, m: Mat2):
        scale = max(m.frobenius(), 1e-300)
        if (m - m.adjoint()).frobenius() > 1e-9 * scale:
            raise ValueError("H3 point must be Hermitian")
        m = (m + m.adjoint()) * 0.5
        det = m.det().real
        if det <= 0.0 or m.tr().real <= 0.0:
            raise ValueError("H3 point must be positive-definite")
        m = m * (1.0 / math.sqrt(det))
        if abs(m.det().real - 1.0) > 1e-12:
            raise ValueError("H3 point failed det-1 normalization")
        object.__setattr__(self, "m", m)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("H3Point is immutable")

    def __repr__(self):
        return f"H3Point({self.m!r})"


def origin() -> H3Point:
    return H3Point(Mat2.identity())


class BoundaryPoint:
    """Boundary-at-infinity point: a rank-1 Hermitian PSD class in CP^3.

    Identified with CP^1 through the column space of the representative.
    """

    __slots__ = ("point",)

    def __init__(self, point: ProjPointC):
        rep = point.m
        if (rep - rep.adjoint()).frobenius() > 1e-8:
            raise ValueError("boundary point must be Hermitian")
        if abs(rep.det()) > 1e-8 or rep.tr().real <= 0.0:
            raise ValueError("boundary point must be rank-1 positive semi-definite")
        object.__setattr__(self, "point", point)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("BoundaryPoint is immutable")

    def direction(self) -> Tuple[complex, complex]:
        """Unit column-space vector (the CP^1 coordinate)."""
        _, _, u1, _ = _herm_eig(self.point.m)
        return u1

    def __repr__(self):
        return f"BoundaryPoint({self.point!r})"


@dataclass(frozen=True)
class QhatPoint:
    """Cone coordinates of a double-amoeba value: distance to O and, when
    positive, the pair of boundary projections."""

    d: float
    pair: Optional[Tuple[BoundaryPoint, BoundaryPoint]]

    def __post_init__(self):
        if (self.d <= 0.0) != (self.pair is None):
            raise ValueError("pair must be present exactly when d > 0")


def _top_eig(p: H3Point) -> Tuple[float, Tuple[complex, complex]]:
    lam1, _, u1, _ = _herm_eig(p.m)
    return lam1, u1


def dist_to_O(p: H3Point) -> float:
    """|log| of either eigenvalue (they are lambda and 1/lambda)."""
    lam1, _ = _top_eig(p)
    return math.log(max(lam1, 1.0))


def act(a: Mat2, p: H3Point) -> H3Point:
    """Isometry action p -> a p a* for det(a) = 1."""
    if abs(a.det() - 1.0) > _DET_ONE_TOL:
        raise ValueError("action requires a unimodular matrix (det = 1)")
    return H3Point(a @ p.m @ a.adjoint())


def _require_unimodular(a: Mat2):
    if abs(a.det() - 1.0) > _DET_ONE_TOL:
        raise ValueError("normalize to det = 1 first")


def amoeba(a: Mat2) -> H3Point:
    """kappa(a) = a O a* = a a*."""
    _require_unimodular(a)
    return H3Point(a @ a.adjoint())


def amoeba_star(a: Mat2) -> H3Point:
    """kappa*(a) = a* a; same distance to O as kappa(a)."""
    _require_unimodular(a)
    return H3Point(a.adjoint() @ a)


def coamoeba(a: Mat2) -> ProjPointR:
    """kappa_o(a) = [a + (a*)^-1] mod real scaling: the unitary polar factor."""
    _require_unimodular(a)
    det_adj = a.adjoint().det()
    if abs(det_adj) < 1e-300:
        raise ValueError("coamoeba requires a nonsingular matrix")
    inv_adjoint = a.adjoint().adjugate() * (1.0 / det_adj)
    return ProjPointR(a + inv_adjoint)


def boundary_proj(p: H3Point) -> BoundaryPoint:
    """Projection along the ray from O through p to the boundary CP^1."""
    lam1, u1 = _top_eig(p)
    if lam1 <= 1.0 + _VERTEX_EIG_TOL:
        raise ValueError("vertex has no boundary projection")
    return BoundaryPoint(ProjPointC(outer(u1, u1)))


def double_amoeba(a: Mat2) -> QhatPoint:
    """(kappa(a), kappa*(a)) in cone coordinates over the boundary quadric."""
    k = amoeba(a)
    lam1, _ = _top_eig(k)
    if lam1 <= 1.0 + _VERTEX_EIG_TOL:
        return QhatPoint(0.0, None)
    return QhatPoint(math.log(lam1), (boundary_proj(k), boundary_proj(amoeba_star(a))))


def dist(p: H3Point, q: H3Point) -> float:
    """Distance via the isometry moving p to O (the only trusted formula)."""
    half_inv = frac_power(p.m.adjugate(), 0.5)  # p^(-1/2); adjugate = inverse at det 1
    return dist_to_O(H3Point(half_inv @ q.m @ half_inv.adjoint()))
