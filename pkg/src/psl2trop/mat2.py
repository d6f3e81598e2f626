"""Closed-form complex 2x2 linear algebra and projective-space metrics.

Everything here is scalar complex arithmetic: the Hermitian eigenproblem of
m m* is solved with the quadratic formula, which gives the SVD, the polar
decomposition and fractional matrix powers in closed form.  Projective points
(matrices up to unit-complex scaling, or up to sign) carry canonical norm-1
representatives so they can be serialized and compared stably.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Tuple

Vec2 = Tuple[complex, complex]

_PHASE_TOL = 1e-9  # entry considered nonzero for canonicalization


@dataclass(frozen=True)
class Mat2:
    """Row-major 2x2 complex matrix (a b; c d)."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def diag(cls, x: complex, y: complex) -> "Mat2":
        return cls(x, 0.0, 0.0, y)

    def entries(self) -> Tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __add__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, s: complex) -> "Mat2":
        return Mat2(self.a * s, self.b * s, self.c * s, self.d * s)

    __rmul__ = __mul__

    def adjoint(self) -> "Mat2":
        return Mat2(
            self.a.conjugate(), self.c.conjugate(), self.b.conjugate(), self.d.conjugate()
        )

    def adjugate(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def tr(self) -> complex:
        return self.a + self.d

    def frobenius(self) -> float:
        return math.sqrt(
            abs(self.a) ** 2 + abs(self.b) ** 2 + abs(self.c) ** 2 + abs(self.d) ** 2
        )

    def apply(self, v: Vec2) -> Vec2:
        return (self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1])

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        scale = max(self.frobenius(), 1e-300)
        return (self - self.adjoint()).frobenius() <= tol * scale

    def is_unitary(self, tol: float = 1e-10) -> bool:
        return ((self @ self.adjoint()) - Mat2.identity()).frobenius() <= tol


def outer(u: Vec2, v: Vec2) -> Mat2:
    """u v* (conjugate-linear in v)."""
    cv0, cv1 = v[0].conjugate(), v[1].conjugate()
    return Mat2(u[0] * cv0, u[0] * cv1, u[1] * cv0, u[1] * cv1)


def det_tr_adj(m: Mat2) -> Tuple[complex, complex, Mat2]:
    """Determinant, trace and adjugate; m @ adj == det * I."""
    return m.det(), m.tr(), m.adjugate()


def _vnorm(v: Vec2) -> float:
    return math.sqrt(abs(v[0]) ** 2 + abs(v[1]) ** 2)


def _vnormalize(v: Vec2) -> Vec2:
    n = _vnorm(v)
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return (v[0] / n, v[1] / n)


def _vdot(u: Vec2, v: Vec2) -> complex:
    # <u, v> = sum u_i conj(v_i)
    return u[0] * v[0].conjugate() + u[1] * v[1].conjugate()


def perp(v: Vec2) -> Vec2:
    """Unit vector orthogonal (Hermitian) to v; assumes |v| = 1."""
    return (-v[1].conjugate(), v[0].conjugate())


def _herm_eig(h: Mat2) -> Tuple[float, float, Vec2, Vec2]:
    """Eigenpairs of a Hermitian 2x2, eigenvalues descending.

    Uses the quadratic formula; the smaller eigenvalue comes from det/lam1 to
    dodge cancellation.  Off-Hermitian dust in the input is ignored.
    """
    h11 = h.a.real
    h22 = h.d.real
    h12 = (h.b + h.c.conjugate()) / 2.0
    scale = max(abs(h11), abs(h22), abs(h12))
    if scale == 0.0:
        return 0.0, 0.0, (1.0 + 0j, 0j), (0j, 1.0 + 0j)
    gap = math.hypot(h11 - h22, 2.0 * abs(h12))
    lam1 = (h11 + h22 + gap) / 2.0
    det = h11 * h22 - abs(h12) ** 2
    lam2 = det / lam1 if lam1 != 0.0 else (h11 + h22 - gap) / 2.0
    if gap <= 1e-15 * scale:
        u1: Vec2 = (1.0 + 0j, 0j)
    else:
        w1: Vec2 = (h12, complex(lam1 - h11))
        w2: Vec2 = (complex(lam1 - h22), h12.conjugate())
        u1 = _vnormalize(w1 if _vnorm(w1) >= _vnorm(w2) else w2)
    return lam1, lam2, u1, perp(u1)


class SVD2(NamedTuple):
    """m = s1 * u1 v1* + s2 * u2 v2* with orthonormal u's and v's."""

    s1: float
    s2: float
    u1: Vec2
    u2: Vec2
    v1: Vec2
    v2: Vec2

    def reconstruct(self) -> Mat2:
        return outer(self.u1, self.v1) * self.s1 + outer(self.u2, self.v2) * self.s2


def svd2(m: Mat2) -> SVD2:
    """Closed-form SVD via the Hermitian eigenproblem of m m*."""
    lam1, _, u1, u2 = _herm_eig(m @ m.adjoint())
    s1 = math.sqrt(max(lam1, 0.0))
    if s1 == 0.0:
        return SVD2(0.0, 0.0, (1.0 + 0j, 0j), (0j, 1.0 + 0j), (1.0 + 0j, 0j), (0j, 1.0 + 0j))
    v1 = _vnormalize(m.adjoint().apply(u1))
    v2_raw = perp(v1)
    # the coefficient pairing u2 with v2_raw; its phase is folded into v2 so
    # the singular value stays real nonnegative
    coeff = _vdot(m.apply(v2_raw), u2)
    s2 = abs(coeff)
    v2 = v2_raw if s2 == 0.0 else (v2_raw[0] * (coeff.conjugate() / s2), v2_raw[1] * (coeff.conjugate() / s2))
    return SVD2(s1, min(s2, s1), u1, u2, v1, v2)


class PolarDecomposition(NamedTuple):
    p: Mat2
    u: Mat2
    unitary_nonunique: bool


def polar(m: Mat2) -> PolarDecomposition:
    """Right polar decomposition m = P U, P = sqrt(m m*) Hermitian PSD.

    For (numerically) singular m the unitary factor is completed arbitrarily
    and flagged, never guessed silently.
    """
    sv = svd2(m)
    p = outer(sv.u1, sv.u1) * sv.s1 + outer(sv.u2, sv.u2) * sv.s2
    u = outer(sv.u1, sv.v1) + outer(sv.u2, sv.v2)
    p = (p + p.adjoint()) * 0.5
    nonunique = sv.s2 <= 1e-13 * sv.s1
    return PolarDecomposition(p, u, nonunique)


def frac_power(p: Mat2, h: float) -> Mat2:
    """Spectral power P^h for Hermitian positive-definite P."""
    scale = max(p.frobenius(), 1e-300)
    if (p - p.adjoint()).frobenius() > 1e-10 * scale:
        raise ValueError("fractional power requires a Hermitian matrix")
    lam1, lam2, u1, u2 = _herm_eig(p)
    if lam2 <= 0.0:
        raise ValueError("fractional power requires a positive-definite matrix")
    out = outer(u1, u1) * (lam1**h) + outer(u2, u2) * (lam2**h)
    return (out + out.adjoint()) * 0.5


def _canonical_phase_entry(m: Mat2) -> complex:
    for z in m.entries():
        if abs(z) > _PHASE_TOL:
            return z
    return m.entries()[0]


class ProjPointC:
    """Point of CP^3 as a norm-1 matrix modulo unit complex scaling.

    The canonical representative has Frobenius norm 1 and its first nonzero
    entry rotated onto the positive real axis.
    """

    __slots__ = ("m",)

    def __init__(self, m: Mat2):
        n = m.frobenius()
        if n == 0.0 or not math.isfinite(n):
            raise ValueError("projective point needs a nonzero finite matrix")
        m = m * (1.0 / n)
        z = _canonical_phase_entry(m)
        if abs(z) > 0.0:
            m = m * (z.conjugate() / abs(z))
        object.__setattr__(self, "m", m)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("ProjPointC is immutable")

    def __repr__(self):
        return f"ProjPointC({self.m!r})"


class ProjPointR:
    """Norm-1 matrix modulo sign (classes [B] under real nonzero scaling).

    Canonical representative: first nonzero entry has positive real part, or
    positive imaginary part when its real part vanishes.
    """

    __slots__ = ("m",)

    def __init__(self, m: Mat2):
        n = m.frobenius()
        if n == 0.0 or not math.isfinite(n):
            raise ValueError("projective point needs a nonzero finite matrix")
        m = m * (1.0 / n)
        z = _canonical_phase_entry(m)
        if z.real < -1e-12 or (abs(z.real) <= 1e-12 and z.imag < 0.0):
            m = -m
        object.__setattr__(self, "m", m)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("ProjPointR is immutable")

    def __repr__(self):
        return f"ProjPointR({self.m!r})"


def _mdot(p: Mat2, q: Mat2) -> complex:
    # Frobenius inner product <p, q> = sum p_ij conj(q_ij)
    return (
        p.a * q.a.conjugate()
        + p.b * q.b.conjugate()
        + p.c * q.c.conjugate()
        + p.d * q.d.conjugate()
    )


def dist_proj_c(p: ProjPointC, q: ProjPointC) -> float:
    """Fubini-Study angle arccos |<p,q>| in [0, pi/2], stable near 0."""
    z = _mdot(p.m, q.m)
    resid = (p.m - q.m * z).frobenius()
    return math.atan2(resid, abs(z))


def dist_proj_r(p: ProjPointR, q: ProjPointR) -> float:
    """Angle arccos |Re <p,q>| in [0, pi/2] between sign classes."""
    s = _mdot(p.m, q.m).real
    resid = (p.m - q.m * s).frobenius()
    return math.atan2(resid, abs(s))
