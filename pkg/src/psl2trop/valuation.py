"""Matrix valuation: symbolic and numeric routes into the cone picture of CP^3.

CP^3 fibers over the cone on the quadric Q: the vertex carries the rotation
group PSU(2), points at height alpha > 0 carry a circle-bundle phase (a sign
class of a determinant-0 matrix), and the base at infinity is Q itself.

The symbolic valuation normalizes a series matrix to determinant 1, reads the
leading coefficient matrix B at its leading exponent alpha, and applies the
trichotomy: alpha > 0 gives (alpha, [B] mod sign) with det B = 0; alpha = 0
gives the vertex with the unitary phase of B; identically-zero determinant
gives the base point [B] on Q.

The numeric valuation evaluates the matrix family at large real t and pushes
it through the degeneration flow R_h (h = 1/log t), which raises the positive
polar factor to the power h.  All magnitudes are handled in the log domain so
the limit can be chased to t = exp(2^40) without overflow; only the stable
unitary data is taken from floating-point matrices.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from . import hahn
from .hahn import HahnSeries, InconclusiveTruncation
from .mat2 import (
    Mat2,
    ProjPointC,
    ProjPointR,
    dist_proj_c,
    outer,
    perp,
    svd2,
)
from .hyperbolic import coamoeba
from .quadric import FiberPoint, QPoint

_ON_Q_TOL = 1e-12  # |det| of a norm-1 representative below this counts as on Q
_BASE_TOL = 1e-10  # cone_coords Q-membership threshold
_VERTEX_LOG_TOL = 1e-10


# ---- cone points -----------------------------------------------------------


@dataclass(frozen=True)
class Vertex:
    """Height-0 point: a rotation class in PSU(2) (representative u with
    sqrt(2) * u unitary, stored mod sign)."""

    u: ProjPointR

    def __post_init__(self):
        rep = self.u.m * math.sqrt(2.0)
        if not rep.is_unitary(1e-8):
            raise ValueError("vertex representative must be unitary up to norm")


@dataclass(frozen=True)
class Interior:
    """Height alpha > 0 with a circle-bundle phase over its quadric point."""

    alpha: Union[Fraction, float]
    phase: FiberPoint

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("interior height must be positive")


@dataclass(frozen=True)
class Base:
    """Height-infinity point: a point of the quadric itself."""

    q: QPoint


ConePoint = Union[Vertex, Interior, Base]


def cone_point_to_json(p: ConePoint) -> dict:
    """Schema: {"kind": vertex|interior|base, "alpha": number|"inf", "matrix": [[re,im]x4]}."""
    if isinstance(p, Vertex):
        kind, alpha, rep = "vertex", 0.0, p.u.m
    elif isinstance(p, Interior):
        kind, alpha, rep = "interior", float(p.alpha), p.phase.rep.m
    elif isinstance(p, Base):
        kind, alpha, rep = "base", "inf", p.q.point.m
    else:
        raise TypeError(f"not a cone point: {p!r}")
    matrix = [[z.real, z.imag] for z in rep.entries()]
    return {"kind": kind, "alpha": alpha, "matrix": matrix}


def cone_point_from_json(data: dict) -> ConePoint:
    entries = [complex(re, im) for re, im in data["matrix"]]
    m = Mat2(*entries)
    kind = data["kind"]
    if kind == "vertex":
        return Vertex(ProjPointR(m))
    if kind == "interior":
        return Interior(float(data["alpha"]), FiberPoint(ProjPointR(m)))
    if kind == "base":
        return Base(QPoint(ProjPointC(m)))
    raise ValueError(f"unknown cone point kind {kind!r}")


# ---- series matrices -------------------------------------------------------


class HahnMat2:
    """2x2 matrix of truncated series, considered up to series scaling."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: HahnSeries, b: HahnSeries, c: HahnSeries, d: HahnSeries):
        if not any(s.has_terms() for s in (a, b, c, d)):
            if all(s.is_exact for s in (a, b, c, d)):
                raise ValueError("matrix must not be identically zero")
            raise InconclusiveTruncation("all entries vanish on stored terms")
        for name, s in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, s)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("HahnMat2 is immutable")

    @classmethod
    def parse(cls, a: str, b: str, c: str, d: str) -> "HahnMat2":
        return cls(*(hahn.parse_series(s) for s in (a, b, c, d)))

    @classmethod
    def constant(cls, m: Mat2) -> "HahnMat2":
        return cls(*(hahn.constant(z) for z in m.entries()))

    def entries(self) -> Tuple[HahnSeries, HahnSeries, HahnSeries, HahnSeries]:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> HahnSeries:
        return hahn.mul(self.a, self.d) - hahn.mul(self.b, self.c)

    def tr(self) -> HahnSeries:
        return self.a + self.d

    def scaled(self, s: HahnSeries) -> "HahnMat2":
        return HahnMat2(*(hahn.mul(e, s) for e in self.entries()))

    def lead_profile(self) -> Tuple[Fraction, Mat2]:
        """Leading exponent alpha across entries and the coefficient matrix
        of t^alpha (zero where an entry's own lead is lower)."""
        leads = [s.lead_exponent() for s in self.entries() if s.has_terms()]
        alpha = max(leads)
        for s in self.entries():
            if not s.has_terms() and s.trunc != hahn.NEG_INF and s.trunc >= alpha:
                raise InconclusiveTruncation(
                    "an entry is truncated above the leading exponent of the matrix"
                )
        coeffs = [s.coefficient_at(alpha) for s in self.entries()]
        return alpha, Mat2(*coeffs)

    def __repr__(self):
        parts = ", ".join(repr(str(s)) for s in self.entries())
        return f"HahnMat2.parse({parts})"


# ---- degeneration flow -----------------------------------------------------


def flow_R_h(m: ProjPointC, h: float) -> ProjPointC:
    """R_h: raise the positive polar factor to the power h, keep the rotation.

    Defined off the quadric; on-Q input is an error (the flow extends there as
    the identity, which the caller applies).  The result does not depend on
    the sign choice in the det-1 normalization.
    """
    if h < 0:
        raise ValueError("flow parameter must be nonnegative")
    rep = m.m
    det = rep.det()
    if abs(det) < _ON_Q_TOL:
        raise ValueError("flow undefined on the quadric (extend as the identity)")
    m1 = rep * (1.0 / cmath.sqrt(det))
    sv = svd2(m1)
    flowed = outer(sv.u1, sv.v1) * (sv.s1**h) + outer(sv.u2, sv.v2) * (sv.s2**h)
    return ProjPointC(flowed)


# ---- symbolic valuation ----------------------------------------------------


def val_symbolic(a: HahnMat2, depth: hahn.ExponentLike = 12) -> ConePoint:
    """Valuation from the leading term of the det-1 normalized matrix.

    Identically-zero determinant lands on the base; otherwise the matrix is
    divided by the square root of its determinant and the leading coefficient
    matrix B at exponent alpha decides: alpha > 0 gives an interior point with
    phase [B] (det B = 0 is checked, not assumed), alpha = 0 the vertex with
    the unitary phase of B (det B = 1 checked).
    """
    det = a.det()
    if not det.has_terms():
        if det.is_exact:
            alpha, b = a.lead_profile()
            return Base(QPoint(ProjPointC(b)))
        raise InconclusiveTruncation(
            "determinant vanishes on stored terms but the input is truncated"
        )
    root = hahn.sqrt(det, depth)
    normalized = a.scaled(hahn.invert(root, depth))
    alpha, b = normalized.lead_profile()
    scale = max(b.frobenius(), 1e-300)
    if alpha > 0:
        if abs(b.det()) > 1e-8 * scale * scale:
            raise ArithmeticError(
                "leading matrix at positive height has nonzero determinant; "
                "this indicates a truncation artifact in the input"
            )
        return Interior(alpha, FiberPoint(ProjPointR(b)))
    if alpha == 0:
        if abs(b.det() - 1.0) > 1e-8 * scale * scale:
            raise ArithmeticError(
                "leading matrix at height zero is not unimodular; "
                "this indicates a truncation artifact in the input"
            )
        return Vertex(coamoeba(b * (1.0 / cmath.sqrt(b.det()))))
    raise ArithmeticError(
        "det-1 normalization produced negative leading exponent; "
        "this indicates a truncation artifact in the input"
    )


# ---- cone coordinates ------------------------------------------------------


def embed_cone(p: ConePoint) -> ProjPointC:
    """Cone coordinates back into CP^3.

    Interior (alpha, [B]) maps to [e^alpha B + e^-alpha (B^c)*] where B^c is
    the adjugate; with norm-1 B this representative has determinant 1, so it
    lies in the unimodular group.  Vertex and base classes embed as they are.
    """
    if isinstance(p, Vertex):
        return ProjPointC(p.u.m)
    if isinstance(p, Base):
        return p.q.point
    if isinstance(p, Interior):
        b = p.phase.rep.m
        ea = math.exp(float(p.alpha))
        return ProjPointC(b * ea + b.adjugate().adjoint() * (1.0 / ea))
    raise TypeError(f"not a cone point: {p!r}")


def cone_coords(m: ProjPointC) -> ConePoint:
    """Inverse of embed_cone: classify a CP^3 point into the cone picture."""
    rep = m.m
    det = rep.det()
    if abs(det) < _BASE_TOL:
        return Base(QPoint(m))
    m1 = rep * (1.0 / cmath.sqrt(det))
    sv = svd2(m1)
    alpha = math.log(max(sv.s1, 1.0))
    if alpha < _VERTEX_LOG_TOL:
        return Vertex(ProjPointR(m1))
    return Interior(alpha, FiberPoint(ProjPointR(outer(sv.u1, sv.v1))))


# ---- numeric valuation -----------------------------------------------------


@dataclass(frozen=True)
class ConvergenceRow:
    """One schedule step: t (inf once beyond float range), h = 1/log t, the
    flowed point, and its distance to the target (or to the previous point)."""

    t: float
    h: float
    point: ProjPointC
    dist: float


@dataclass(frozen=True)
class ValNumericResult:
    estimate: ProjPointC
    rows: List[ConvergenceRow]


def default_log_schedule(k_min: int = 2, k_max: int = 40) -> List[float]:
    """log t = 2^k: geometric in log t, matching the O(1/log t) decay."""
    if not k_min < k_max:
        raise ValueError("k_min must be below k_max")
    return [float(2**k) for k in range(k_min, k_max + 1)]


def _shifted_profile(s: HahnSeries, shift: Fraction):
    """(exponent - shift) as floats with coefficients, ready for evaluation."""
    return [(float(t.exponent - shift), t.coefficient) for t in s.terms]


def _eval_profile(profile, log_t: float) -> complex:
    """Sum c * exp(e * log_t), small to large in magnitude; e <= 0 throughout,
    so underflow is benign and overflow impossible."""
    vals = [c * math.exp(e * log_t) for e, c in profile]
    vals.sort(key=abs)
    total = 0j
    for v in vals:
        total += v
    return total


def _flow_scaled(m: Mat2, log_abs_det: float, det_phase: complex, h: float) -> ProjPointC:
    """R_h of [m] given the true log |det m| and phase of det m.

    The unitary data (u1, v1 and their orthogonal complements) is taken from
    the float matrix, where it is well conditioned; the small singular value,
    destroyed by cancellation in floats, is reconstructed from the determinant
    in the log domain.  Projectively this equals flow_R_h of the det-1
    normalization whenever the latter is computable.
    """
    sv = svd2(m)
    v2 = perp(sv.v1)
    log_s1 = math.log(sv.s1)
    # det m = s1 * c with c the coefficient pairing u2 with perp(v1)
    big = math.exp(h * log_s1)
    small = math.exp(h * (log_abs_det - log_s1)) * det_phase
    return ProjPointC(outer(sv.u1, sv.v1) * big + outer(sv.u2, v2) * small)


def val_numeric(
    a: HahnMat2,
    schedule: Optional[Sequence[float]] = None,
    *,
    log_schedule: Optional[Sequence[float]] = None,
    target: Optional[ConePoint] = None,
) -> ValNumericResult:
    """Chase the degeneration limit along a schedule of evaluation points.

    The schedule is given either as t values (> e, increasing) or, because
    interesting schedules overflow floats, directly as log t values.  For each
    t the family is evaluated, projectivized and flowed with h = 1/log t;
    on-quadric evaluations keep the point itself (the flow extends there as
    the identity).  Rows record the distance to embed_cone(target) when a
    target is given, else the distance to the previous point.
    """
    if (schedule is None) == (log_schedule is None):
        raise ValueError("provide exactly one of schedule and log_schedule")
    if schedule is not None:
        if any(not t > math.e for t in schedule):
            raise ValueError("schedule values must exceed e")
        ss = [math.log(t) for t in schedule]
    else:
        ss = [float(s) for s in log_schedule]
        if any(not s > 1.0 for s in ss):
            raise ValueError("log-schedule values must exceed 1")
    if any(s2 <= s1 for s1, s2 in zip(ss, ss[1:])):
        raise ValueError("schedule must be strictly increasing")

    alpha_star, _ = a.lead_profile()
    det_series = a.det()
    det_is_zero = not det_series.has_terms()
    entry_profiles = [_shifted_profile(e, alpha_star) for e in a.entries()]
    if not det_is_zero:
        delta = det_series.lead_exponent()
        det_profile = _shifted_profile(det_series, delta)
        det_exponent = float(delta) - 2.0 * float(alpha_star)
    target_point = embed_cone(target) if target is not None else None

    rows: List[ConvergenceRow] = []
    prev: Optional[ProjPointC] = None
    for s in ss:
        m = Mat2(*(_eval_profile(p, s) for p in entry_profiles))
        if m.frobenius() == 0.0 or not math.isfinite(m.frobenius()):
            raise ArithmeticError(f"family evaluates to a degenerate matrix at log t = {s}")
        if det_is_zero:
            point = ProjPointC(m)
        else:
            resid = _eval_profile(det_profile, s)
            if resid == 0j:
                point = ProjPointC(m)  # accidentally on Q at this t
            else:
                log_abs_det = det_exponent * s + math.log(abs(resid))
                point = _flow_scaled(m, log_abs_det, resid / abs(resid), 1.0 / s)
        if target_point is not None:
            d = dist_proj_c(point, target_point)
        elif prev is not None:
            d = dist_proj_c(point, prev)
        else:
            d = float("nan")
        try:
            t_val = math.exp(s)
        except OverflowError:
            t_val = float("inf")
        rows.append(ConvergenceRow(t=t_val, h=1.0 / s, point=point, dist=d))
        prev = point
    return ValNumericResult(estimate=rows[-1].point, rows=rows)


def extrapolate_alpha(rows: Sequence[ConvergenceRow]) -> Optional[float]:
    """Richardson extrapolation (first order in h) of the height readout.

    Uses the last two rows whose cone coordinates are interior points;
    None when heights cannot be read off.
    """
    heights = []
    for row in rows:
        cp = cone_coords(row.point)
        if isinstance(cp, Interior):
            heights.append((row.h, float(cp.alpha)))
    if len(heights) < 2:
        return None
    (h_prev, a_prev), (h_last, a_last) = heights[-2], heights[-1]
    if h_prev == h_last:
        return a_last
    return (a_last * h_prev - a_prev * h_last) / (h_prev - h_last)
