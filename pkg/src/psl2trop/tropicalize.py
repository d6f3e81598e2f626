"""Phase tropicalization of constant families, plus two worked examples.

A variety V in CP^3 cut out over the complex numbers, with no component inside
the quadric Q, tropicalizes to three labeled components: the coamoeba floor
(vertex points from V off Q), the cylinder (every height alpha > 0 with every
circle phase over V cap Q), and the base copy of V cap Q at infinity.  This
module samples those components, constructs series witnesses hitting
prescribed interior points, and packages two fully worked families: a line
tangent to the quadric and the surface t^2 det = tr^2.
"""

from __future__ import annotations

import cmath
import math
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import hahn
from .hahn import HahnSeries
from .hyperbolic import coamoeba
from .mat2 import Mat2, ProjPointC, dist_proj_r
from .quadric import QPoint, fiber_point, section_s, segre
from .valuation import (
    Base,
    ConePoint,
    HahnMat2,
    Interior,
    Vertex,
    val_symbolic,
)

LABEL_FLOOR = "coamoeba-floor"
LABEL_CYLINDER = "cylinder"
LABEL_BASE = "infinity-base"

# component names for the t^2 det = tr^2 surface classification
COMPONENT_SECTION = "height-1-section"
COMPONENT_CYLINDER_C = "cylinder-over-trace-zero"
COMPONENT_BASE_C = "base-trace-zero"


class PolyParseError(ValueError):
    """Malformed polynomial text."""


class ComponentInsideQ(Exception):
    """The variety has a component inside the quadric: excluded hypothesis."""


class Falsification(Exception):
    """A classified point contradicts the predicted image; carries a report."""


# ---- homogeneous polynomials in the four matrix entries --------------------


Monomial = Tuple[int, int, int, int]


@dataclass(frozen=True)
class HomogPoly4:
    """Homogeneous polynomial in x0..x3 = matrix entries (a, b; c, d) row-major."""

    monomials: Dict[Monomial, complex]
    degree: int

    def __post_init__(self):
        if not self.monomials:
            raise ValueError("polynomial must have at least one nonzero monomial")
        for expo in self.monomials:
            if sum(expo) != self.degree:
                raise ValueError("polynomial is not homogeneous")

    def coeff_scale(self) -> float:
        return max(abs(c) for c in self.monomials.values())

    def eval_complex(self, v: Sequence[complex]) -> complex:
        total = 0j
        for expo, coeff in self.monomials.items():
            term = coeff
            for x, e in zip(v, expo):
                for _ in range(e):
                    term *= x
            total += term
        return total

    def eval_matrix(self, m: Mat2) -> complex:
        return self.eval_complex(m.entries())

    def eval_series(self, m: HahnMat2) -> HahnSeries:
        total = hahn.zero()
        for expo, coeff in self.monomials.items():
            term = hahn.constant(coeff)
            for s, e in zip(m.entries(), expo):
                for _ in range(e):
                    term = hahn.mul(term, s)
            total = total + term
        return total


_MONO_TOKEN = re.compile(r"x([0-3])(?:\s*\^\s*(\d+))?")
_COEFF_TOKEN = re.compile(
    r"\(\s*([+-]?\d+(?:\.\d+)?)\s*([+-])\s*(\d+(?:\.\d+)?)\s*i\s*\)"
    r"|([+-]?\d+(?:\.\d+)?)(i?)"
    r"|(i)"
)


def parse_poly(text: str) -> HomogPoly4:
    """Parse e.g. ``x0*x3 - x1*x2`` or ``2 x0^2 + (1+1i) x1 x2``.

    Monomials are +/- separated; within a monomial, factors may be separated
    by '*' or whitespace; coordinates x0..x3 are the matrix entries in
    row-major order.
    """
    if not text.strip():
        raise PolyParseError("empty polynomial")
    chunks: List[Tuple[float, str]] = []
    sign = 1.0
    buf: List[str] = []
    depth = 0
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0:
            if any(not c.isspace() for c in buf):
                chunks.append((sign, "".join(buf)))
                sign = -1.0 if ch == "-" else 1.0
                buf = []
            else:
                sign *= -1.0 if ch == "-" else 1.0
        else:
            buf.append(ch)
    if not any(not c.isspace() for c in buf):
        raise PolyParseError("dangling sign in polynomial")
    chunks.append((sign, "".join(buf)))

    monomials: Dict[Monomial, complex] = {}
    for sgn, chunk in chunks:
        coeff = complex(sgn)
        expo = [0, 0, 0, 0]
        pos = 0
        chunk = chunk.replace("*", " ")
        seen_factor = False
        while pos < len(chunk):
            if chunk[pos].isspace():
                pos += 1
                continue
            m = _MONO_TOKEN.match(chunk, pos)
            if m:
                expo[int(m.group(1))] += int(m.group(2) or 1)
                pos = m.end()
                seen_factor = True
                continue
            m = _COEFF_TOKEN.match(chunk, pos)
            if m:
                if m.group(1) is not None:
                    im_part = float(m.group(3))
                    if m.group(2) == "-":
                        im_part = -im_part
                    coeff *= complex(float(m.group(1)), im_part)
                elif m.group(6):
                    coeff *= 1j
                else:
                    val = float(m.group(4))
                    coeff *= val * 1j if m.group(5) else val
                pos = m.end()
                seen_factor = True
                continue
            raise PolyParseError(f"unexpected token at position {pos} in {chunk!r}")
        if not seen_factor:
            raise PolyParseError(f"empty monomial in {text!r}")
        key = tuple(expo)
        monomials[key] = monomials.get(key, 0j) + coeff
    monomials = {k: v for k, v in monomials.items() if abs(v) > 0.0}
    if not monomials:
        raise PolyParseError("polynomial cancelled to zero")
    degrees = {sum(k) for k in monomials}
    if len(degrees) != 1:
        raise PolyParseError(f"polynomial is not homogeneous: degrees {sorted(degrees)}")
    return HomogPoly4(monomials, degrees.pop())


# ---- univariate roots ------------------------------------------------------


def _polyval(coeffs: Sequence[complex], z: complex) -> complex:
    total = 0j
    for c in coeffs:
        total = total * z + c
    return total


def roots_univariate(coeffs: Sequence[complex], max_iter: int = 500) -> List[complex]:
    """All complex roots, with multiplicity, by simultaneous (Durand-Kerner)
    iteration.  Coefficients are descending; the leading one must be nonzero.
    """
    coeffs = [complex(c) for c in coeffs]
    if not coeffs or coeffs[0] == 0j:
        raise ValueError("leading coefficient must be nonzero")
    degree = len(coeffs) - 1
    if degree == 0:
        return []
    if degree == 1:
        return [-coeffs[1] / coeffs[0]]
    monic = [c / coeffs[0] for c in coeffs]
    radius = 1.0 + max(abs(c) for c in monic[1:])
    spin = (0.4 + 0.9j) / abs(0.4 + 0.9j)
    roots = [0.8 * radius * spin ** (k + 1) * (1.0 + 0.1 * k) for k in range(degree)]
    tol = 1e-14 * radius
    for _ in range(max_iter):
        moved = 0.0
        for i in range(degree):
            denom = 1.0 + 0j
            for j in range(degree):
                if j != i:
                    denom *= roots[i] - roots[j]
            if denom == 0j:
                denom = complex(1e-30)
            step = _polyval(monic, roots[i]) / denom
            roots[i] -= step
            moved = max(moved, abs(step))
        if moved < tol:
            break
    scale = max(abs(c) for c in coeffs)
    worst = max(abs(_polyval(coeffs, z)) for z in roots)
    if worst > 1e-10 * scale * max(1.0, radius) ** degree:
        raise ArithmeticError(
            f"root iteration did not converge: worst residual {worst:.3e} for degree {degree}"
        )
    return roots


# ---- samplers --------------------------------------------------------------


def _rand_complex(rng: random.Random) -> complex:
    return complex(rng.gauss(0.0, 1.0), rng.gauss(0.0, 1.0))


def _rand_vec4(rng: random.Random) -> List[complex]:
    return [_rand_complex(rng) for _ in range(4)]


def restrict_to_line(
    f: HomogPoly4, p: Sequence[complex], q: Sequence[complex]
) -> List[complex]:
    """Coefficients (descending in s) of the univariate s -> f(p + s q)."""
    acc = [0j] * (f.degree + 1)  # ascending powers of s
    for expo, coeff in f.monomials.items():
        poly = [coeff]
        for i, e in enumerate(expo):
            for _ in range(e):
                nxt = [0j] * (len(poly) + 1)
                for k, c in enumerate(poly):
                    nxt[k] += c * p[i]
                    nxt[k + 1] += c * q[i]
                poly = nxt
        for k, c in enumerate(poly):
            acc[k] += c
    acc.reverse()
    return acc


def sample_variety_buckets(
    f: HomogPoly4, n: int, rng: random.Random
) -> Tuple[List[ProjPointC], List[QPoint]]:
    """n points of V(f) from random line sections, split into off-Q points and
    the on-Q bucket (norm-1 representative with |det| < 1e-10)."""
    scale = f.coeff_scale()
    off_q: List[ProjPointC] = []
    on_q: List[QPoint] = []
    attempts = 0
    while len(off_q) + len(on_q) < n:
        attempts += 1
        if attempts > 100 * n:
            raise ArithmeticError("variety sampling failed: too many degenerate draws")
        p, q = _rand_vec4(rng), _rand_vec4(rng)
        coeffs = restrict_to_line(f, p, q)
        if abs(coeffs[0]) <= 1e-12 * scale:
            continue
        try:
            roots = roots_univariate(coeffs)
        except ArithmeticError:
            continue
        for z in roots:
            if len(off_q) + len(on_q) >= n:
                break
            entries = [pi + z * qi for pi, qi in zip(p, q)]
            try:
                pt = ProjPointC(Mat2(*entries))
            except ValueError:
                continue
            if abs(f.eval_matrix(pt.m)) > 1e-8 * scale:
                continue
            if abs(pt.m.det()) < 1e-10:
                on_q.append(QPoint(pt))
            else:
                off_q.append(pt)
    return off_q, on_q


def sample_variety(f: HomogPoly4, n: int, rng: random.Random) -> List[ProjPointC]:
    """n points of V(f) off the quadric, by intersecting with random lines.

    Points whose norm-1 representative has |det| < 1e-10 are filtered into the
    on-Q bucket (see sample_variety_buckets) and not returned; degenerate line
    draws are retried, capped at 100 n attempts.
    """
    points: List[ProjPointC] = []
    attempts = 0
    while len(points) < n:
        attempts += 1
        if attempts > 20:
            raise ArithmeticError("variety sampling failed: everything lands on the quadric")
        off_q, _ = sample_variety_buckets(f, n - len(points), rng)
        points.extend(off_q)
    return points


def segre_restrict(f: HomogPoly4) -> Dict[Tuple[int, int], complex]:
    """Bihomogeneous coefficients of f(x_i y_j) on CP^1 x CP^1.

    Key (p, q) is the monomial x0^p x1^(d-p) y0^q y1^(d-q); identically-zero
    restriction comes back as an empty dict.
    """
    out: Dict[Tuple[int, int], complex] = {}
    for (ea, eb, ec, ed), coeff in f.monomials.items():
        key = (ea + eb, ea + ec)
        out[key] = out.get(key, 0j) + coeff
    return {k: v for k, v in out.items() if abs(v) > 1e-12 * f.coeff_scale()}


def sample_V_cap_Q(f: HomogPoly4, n: int, rng: random.Random) -> List[QPoint]:
    """n points of V(f) on the quadric, alternating between the two rulings.

    Raises ComponentInsideQ when f vanishes identically on Q.
    """
    bihom = segre_restrict(f)
    if not bihom:
        raise ComponentInsideQ("the variety contains the whole quadric")
    d = f.degree
    scale = f.coeff_scale()
    points: List[QPoint] = []
    attempts = 0
    while len(points) < n:
        attempts += 1
        if attempts > 100 * n + 100:
            raise ArithmeticError("quadric sampling failed: too many degenerate draws")
        solve_in_y = attempts % 2 == 0
        fixed = (_rand_complex(rng), _rand_complex(rng))
        cs = [0j] * (d + 1)
        if solve_in_y:
            for (p, q), coeff in bihom.items():
                cs[q] += coeff * fixed[0] ** p * fixed[1] ** (d - p)
        else:
            for (p, q), coeff in bihom.items():
                cs[p] += coeff * fixed[0] ** q * fixed[1] ** (d - q)
        # cs[k] multiplies z0^k z1^(d-k); in the chart z0 = 1 with w = z1 the
        # polynomial is sum cs[k] w^(d-k), i.e. cs is already descending in w
        lead_idx = 0
        while lead_idx <= d and abs(cs[lead_idx]) <= 1e-12 * max(scale, 1e-300):
            lead_idx += 1
        if lead_idx > d:
            continue
        sols: List[Tuple[complex, complex]] = []
        if lead_idx > 0:
            sols.append((0j, 1.0 + 0j))  # the chart's root at infinity
        try:
            sols.extend((1.0 + 0j, w) for w in roots_univariate(cs[lead_idx:]))
        except ArithmeticError:
            continue
        for z in sols:
            if len(points) >= n:
                break
            x, y = (fixed, z) if solve_in_y else (z, fixed)
            try:
                qpt = segre(x, y)
            except ValueError:
                continue
            if abs(f.eval_matrix(qpt.point.m)) > 1e-8 * scale:
                continue
            points.append(qpt)
    return points


# ---- the constant-family image ---------------------------------------------


@dataclass(frozen=True)
class CloudPoint:
    point: ConePoint
    label: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = {
            LABEL_FLOOR: Vertex,
            LABEL_CYLINDER: Interior,
            LABEL_BASE: Base,
        }[self.label]
        if not isinstance(self.point, expected):
            raise ValueError(
                f"label {self.label!r} does not match {type(self.point).__name__}"
            )


@dataclass(frozen=True)
class LabeledCloud:
    points: Tuple[CloudPoint, ...]

    def by_label(self, label: str) -> List[CloudPoint]:
        return [p for p in self.points if p.label == label]


def constant_family_image(
    f: HomogPoly4,
    n_floor: int,
    n_base: int,
    alpha_grid: Sequence[float],
    theta_grid: Sequence[float],
    seed: int = 0,
) -> LabeledCloud:
    """Sampled three-component image of the constant family cut out by f.

    Floor points are coamoeba classes of det-1 normalized samples of V off Q
    (the sample matrix rides along in the metadata as a certificate); cylinder
    points put every grid height over every sampled quadric point with every
    grid phase; base points are the quadric samples at infinity.
    """
    if any(not a > 0 for a in alpha_grid):
        raise ValueError("cylinder heights must be positive")
    base_samples = sample_V_cap_Q(f, n_base, random.Random(f"{seed}:base"))
    floor_samples = sample_variety(f, n_floor, random.Random(f"{seed}:floor"))
    pts: List[CloudPoint] = []
    for m in floor_samples:
        normalized = m.m * (1.0 / cmath.sqrt(m.m.det()))
        matrix_meta = [[z.real, z.imag] for z in normalized.entries()]
        pts.append(
            CloudPoint(Vertex(coamoeba(normalized)), LABEL_FLOOR, {"matrix": matrix_meta})
        )
    for i, q in enumerate(base_samples):
        for alpha in alpha_grid:
            for theta in theta_grid:
                pts.append(
                    CloudPoint(
                        Interior(alpha, fiber_point(q, theta)),
                        LABEL_CYLINDER,
                        {"alpha": float(alpha), "theta": float(theta), "base_index": i},
                    )
                )
        pts.append(CloudPoint(Base(q), LABEL_BASE, {"base_index": i}))
    return LabeledCloud(tuple(pts))


# ---- exact K-points and witnesses ------------------------------------------


def _linear_coordinate(f: HomogPoly4) -> int:
    """Index of a coordinate in which f has degree exactly one."""
    for k in range(4):
        degs = {expo[k] for expo in f.monomials}
        if degs <= {0, 1} and 1 in degs:
            return k
    raise ValueError("polynomial is not linear in any coordinate")


def _split_linear(f: HomogPoly4, k: int):
    """f = L * x_k + M with L and M free of x_k (as monomial dicts)."""
    lin: Dict[Monomial, complex] = {}
    rest: Dict[Monomial, complex] = {}
    for expo, coeff in f.monomials.items():
        if expo[k] == 1:
            reduced = list(expo)
            reduced[k] = 0
            lin[tuple(reduced)] = coeff
        else:
            rest[expo] = coeff
    return lin, rest


def _eval_monomials_series(monos: Dict[Monomial, complex], entries) -> HahnSeries:
    total = hahn.zero()
    for expo, coeff in monos.items():
        term = hahn.constant(coeff)
        for s, e in zip(entries, expo):
            for _ in range(e):
                term = hahn.mul(term, s)
        total = total + term
    return total


def _random_series(
    rng: random.Random,
    n_terms: Tuple[int, int] = (1, 3),
    lead: Optional[Fraction] = None,
    lead_coeff: Optional[complex] = None,
) -> HahnSeries:
    """Random series with quarter-integer exponents in [-3, 3]."""
    count = rng.randint(*n_terms)
    grid = [Fraction(k, 4) for k in range(-12, 13)]
    exps = sorted(rng.sample(grid, count), reverse=True)
    if lead is not None:
        exps = [lead] + [e for e in exps if e < lead][: count - 1]
    pairs = [(e, _rand_complex(rng)) for e in exps]
    if lead_coeff is not None:
        pairs[0] = (pairs[0][0], lead_coeff)
    return HahnSeries(pairs)


def k_points_on(
    f: HomogPoly4,
    n: int,
    rng: random.Random,
    kind: str = "generic",
    depth: hahn.ExponentLike = 12,
) -> List[HahnMat2]:
    """Exact series points of V(f), for f linear in some coordinate.

    kind "floor" perturbs a complex sample of V off the quadric with random
    lower-order terms (the valuation lands on the coamoeba floor);
    "toward-quadric" pins the leading coefficients to a sampled point of
    V cap Q so the valuation climbs the cylinder; "generic" draws free series
    entries.  The linear coordinate is solved exactly over the series field,
    so the points lie on V to the full retained window.
    """
    k = _linear_coordinate(f)
    lin, rest = _split_linear(f, k)
    out: List[HahnMat2] = []
    guard = 0
    lead_pool: List[Mat2] = []
    if kind == "toward-quadric":
        lead_pool = [q.point.m for q in sample_V_cap_Q(f, max(8, n // 2), rng)]
    elif kind == "floor":
        lead_pool = [p.m for p in sample_variety(f, max(8, n // 2), rng)]
    elif kind != "generic":
        raise ValueError(f"unknown K-point kind {kind!r}")
    while len(out) < n:
        guard += 1
        if guard > 50 * n + 50:
            raise ArithmeticError("K-point generation stalled")
        entries: List[Optional[HahnSeries]] = [None] * 4
        if lead_pool:
            lead_m = lead_pool[rng.randrange(len(lead_pool))].entries()
            for i in range(4):
                if i != k:
                    entries[i] = _random_series(
                        rng, n_terms=(2, 3), lead=Fraction(0), lead_coeff=lead_m[i]
                    )
        else:
            for i in range(4):
                if i != k:
                    entries[i] = _random_series(rng)
        others = [e if e is not None else hahn.zero() for e in entries]
        l_val = _eval_monomials_series(lin, others)
        m_val = _eval_monomials_series(rest, others)
        if not l_val.has_terms():
            continue
        solved = (
            -hahn.mul(m_val, hahn.invert(l_val, depth))
            if m_val.has_terms()
            else hahn.zero()
        )
        entries[k] = solved
        try:
            mat = HahnMat2(*entries)  # type: ignore[arg-type]
        except (ValueError, hahn.InconclusiveTruncation):
            continue
        residual = f.eval_series(mat)
        coeff_caps = [
            max(abs(t.coefficient) for t in s.terms) if s.terms else 0.0
            for s in mat.entries()
        ]
        res_scale = f.coeff_scale() * max(max(coeff_caps), 1.0) ** f.degree
        if residual.has_terms() and any(
            abs(t.coefficient) > 1e-9 * res_scale for t in residual.terms
        ):
            continue
        out.append(mat)
    return out


def rank_one_k_points(f: HomogPoly4, n: int, rng: random.Random) -> List[HahnMat2]:
    """Series points with identically-zero determinant lying on V(f).

    Built as outer products x(t) y(t)^T of series vectors with one entry
    forced so f vanishes exactly; these land on the base component of the
    image.  Supports the two shipped linear forms (the b entry, and a - d).
    """
    keys = set(f.monomials)
    if keys == {(0, 1, 0, 0)}:
        mode = "b"
    elif keys == {(1, 0, 0, 0), (0, 0, 0, 1)}:
        mode = "a-d"
    else:
        raise ValueError("rank-one points are built in only for the shipped forms")
    out: List[HahnMat2] = []
    guard = 0
    while len(out) < n:
        guard += 1
        if guard > 50 * n + 50:
            raise ArithmeticError("rank-one K-point generation stalled")
        if mode == "b":
            x = (_random_series(rng), _random_series(rng))
            y = (_random_series(rng), hahn.zero())
        else:
            z = _random_series(rng)
            w = _random_series(rng)
            x = (hahn.one(), z)
            y = (hahn.mul(w, z), w)
        entries = (
            hahn.mul(x[0], y[0]),
            hahn.mul(x[0], y[1]),
            hahn.mul(x[1], y[0]),
            hahn.mul(x[1], y[1]),
        )
        try:
            mat = HahnMat2(*entries)
        except (ValueError, hahn.InconclusiveTruncation):
            continue
        if f.eval_series(mat).has_terms():
            continue
        out.append(mat)
    return out


def line_through_q(
    f: HomogPoly4, q: QPoint, rng: random.Random, depth: hahn.ExponentLike = 12
) -> HahnMat2:
    """A series curve inside V(f) through [q], transverse to the quadric.

    Takes t * q + r with a random constant matrix r, staying on V by solving
    the linear coordinate; the determinant is generically a nonzero degree-1
    series, so the curve leaves Q.  This is the built-in parametrization used
    to realize interior targets.
    """
    k = _linear_coordinate(f)
    lin, rest = _split_linear(f, k)
    q_entries = q.point.m.entries()
    for _ in range(200):
        entries: List[Optional[HahnSeries]] = [None] * 4
        for i in range(4):
            if i != k:
                entries[i] = HahnSeries([(1, q_entries[i]), (0, _rand_complex(rng))])
        others = [e if e is not None else hahn.zero() for e in entries]
        l_val = _eval_monomials_series(lin, others)
        m_val = _eval_monomials_series(rest, others)
        if not l_val.has_terms():
            continue
        solved = (
            -hahn.mul(m_val, hahn.invert(l_val, depth))
            if m_val.has_terms()
            else hahn.zero()
        )
        entries[k] = solved
        mat = HahnMat2(*entries)  # type: ignore[arg-type]
        if not mat.det().has_terms():
            continue
        _, lead = mat.lead_profile()
        target = q.point.m
        overlap = sum(
            bi * ti.conjugate() for bi, ti in zip(lead.entries(), target.entries())
        )
        if abs(overlap) < 1e-6 * lead.frobenius():
            continue
        if (lead - target * overlap).frobenius() > 1e-8 * lead.frobenius():
            continue
        return mat
    raise ArithmeticError("failed to build a curve through the quadric point")


def witness_for_cone_point(
    f: HomogPoly4,
    p: ConePoint,
    curve: HahnMat2,
    depth: hahn.ExponentLike = 12,
) -> HahnMat2:
    """Reparametrize a curve in V(f) so its valuation hits an interior target.

    The curve is normalized to determinant 1; its leading term c B t^gamma
    must be proportional to the target phase.  Substituting each t^beta by
    exp(-beta sigma / gamma) t^(alpha beta / gamma) with sigma = log c is a
    series automorphism fixing constants, so membership in V(f) is preserved
    while the leading term becomes B t^alpha exactly.
    """
    if not isinstance(p, Interior):
        raise ValueError("witnesses are defined for interior targets")
    det = curve.det()
    if not det.has_terms():
        if det.is_exact:
            raise ValueError("curve lies inside the quadric (det = 0)")
        raise hahn.InconclusiveTruncation("curve determinant is truncated away")
    root = hahn.sqrt(det, depth)
    normalized = curve.scaled(hahn.invert(root, depth))
    gamma, lead = normalized.lead_profile()
    if gamma <= 0:
        raise ValueError("curve does not degenerate toward the quadric")
    target_rep = p.phase.rep.m
    c = sum(li * ti.conjugate() for li, ti in zip(lead.entries(), target_rep.entries()))
    if abs(c) < 1e-10 * lead.frobenius() or (lead - target_rep * c).frobenius() > 1e-8 * lead.frobenius():
        raise ValueError("curve misses target phase")
    sigma = cmath.log(c)
    alpha = p.alpha if isinstance(p.alpha, Fraction) else Fraction(float(p.alpha))
    witness = HahnMat2(
        *(hahn.reparametrize(s, gamma, sigma, alpha) for s in normalized.entries())
    )
    got = val_symbolic(witness, depth)
    if not isinstance(got, Interior) or got.alpha != alpha:
        raise ArithmeticError("witness failed to reproduce the target height")
    if dist_proj_r(got.phase.rep, p.phase.rep) > 1e-9:
        raise ArithmeticError("witness failed to reproduce the target phase")
    return witness


# ---- worked example: the tangent line --------------------------------------


B_INFINITY = Mat2(0.0, 1.0, 0.0, 0.0)


def line_family(gamma: hahn.ExponentLike, c: complex) -> HahnMat2:
    """The family (t, c t^gamma; 0, t^-1): a line tangent to the quadric."""
    if c == 0:
        raise ValueError("coefficient must be nonzero")
    return HahnMat2(
        hahn.t_power(1),
        hahn.monomial(hahn.as_exponent(gamma), c),
        hahn.zero(),
        hahn.t_power(-1),
    )


def example_line(gamma: hahn.ExponentLike, c: complex) -> ConePoint:
    """Valuation of the tangent-line family at parameter z = c t^gamma.

    The trichotomy: gamma > 1 climbs the ray over the tangency point with the
    phase of c; gamma = 1 traces a section of the circle bundle; gamma < 1
    collapses to a single point, one of the two the section misses.
    """
    return val_symbolic(line_family(gamma, c))


# ---- worked example: the quadric surface t^2 det = tr^2 --------------------


def quadric_witness_base() -> HahnMat2:
    """Constant rank-one family at the tangency corner (height infinity)."""
    return HahnMat2.constant(B_INFINITY)


def quadric_witness_fiber(alpha: hahn.ExponentLike, sigma: complex) -> HahnMat2:
    """(t, sigma t^alpha; -(sigma t^alpha)^-1, 0): cylinder fiber at height alpha > 1."""
    a = hahn.as_exponent(alpha)
    if not a > 1:
        raise ValueError("fiber witnesses live at heights above 1")
    if sigma == 0:
        raise ValueError("sigma must be nonzero")
    return HahnMat2(
        hahn.t_power(1),
        hahn.monomial(a, sigma),
        hahn.monomial(-a, -1.0 / sigma),
        hahn.zero(),
    )


def quadric_witness_section(sigma: Optional[complex] = None) -> HahnMat2:
    """Height-1 witnesses hitting the trace section."""
    if sigma is None:
        return HahnMat2(
            hahn.parse_series("t - t^-1"),
            hahn.monomial(-1, -1.0),
            hahn.monomial(-1, 1.0),
            hahn.monomial(-1, 1.0),
        )
    if sigma == 0:
        raise ValueError("sigma must be nonzero")
    return HahnMat2(
        hahn.parse_series("t - t^-1"),
        hahn.monomial(-3, 1.0 / sigma),
        hahn.monomial(1, -sigma),
        hahn.monomial(-1, 1.0),
    )


def example_line_cloud(
    gamma_grid: Sequence[hahn.ExponentLike],
    theta_count: int,
    magnitudes: Sequence[float] = (0.25, 0.5, 1.0, 2.0, 4.0),
) -> LabeledCloud:
    """Deterministic point cloud of the tangent-line image.

    The ray over the tangency point (heights from gamma_grid, all above 1)
    carries a full circle of phases; the height-1 section covers the quadric
    minus two points (grid in the magnitude and angle of c); the gamma < 1
    collapse point and the base tangency point complete the picture.  The
    fiber over the tangency point at height exactly 1 stays empty: the image
    is disconnected there.
    """
    gammas = [hahn.as_exponent(g) for g in gamma_grid]
    if any(not g > 1 for g in gammas):
        raise ValueError("ray heights must exceed 1")
    thetas = [math.pi * j / theta_count for j in range(theta_count)]
    pts: List[CloudPoint] = []
    for g in gammas:
        for th in thetas:
            p = example_line(g, cmath.exp(1j * th))
            pts.append(
                CloudPoint(p, LABEL_CYLINDER, {"case": "ray", "gamma": float(g), "theta": th})
            )
    for rho in magnitudes:
        for th in thetas:
            c = rho * cmath.exp(1j * th)
            p = example_line(1, c)
            pts.append(
                CloudPoint(p, LABEL_CYLINDER, {"case": "section", "c": [c.real, c.imag]})
            )
    pts.append(CloudPoint(example_line(Fraction(1, 2), 1.0), LABEL_CYLINDER, {"case": "collapse"}))
    pts.append(
        CloudPoint(Base(QPoint(ProjPointC(B_INFINITY))), LABEL_BASE, {"case": "tangency"})
    )
    return LabeledCloud(tuple(pts))


_GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


def _cp1_grid(count: int, offset: float = 0.0):
    """Deterministic spread of CP^1 points (polar grid with golden-angle twist)."""
    pts = []
    for i in range(count):
        psi = math.pi * (i + 0.5) / (2.0 * count)
        phi = (offset + i * _GOLDEN_ANGLE) % (2.0 * math.pi)
        pts.append((complex(math.cos(psi)), math.sin(psi) * cmath.exp(1j * phi)))
    return pts


def example_quadric_cloud(
    alpha_grid: Sequence[float],
    theta_count: int,
    base_count: int = 12,
    section_count: int = 60,
) -> LabeledCloud:
    """Deterministic point cloud of the t^2 det = tr^2 surface image.

    The trace-zero curve C is parametrized by x -> segre(x, (x1, -x0)); over
    it sit the cylinder fibers (heights from alpha_grid, all above 1) and the
    base copy at infinity.  The rest of the quadric carries the height-1 trace
    section.  No point sits at height 1 with trace-zero phase: that curve is
    the documented gap in the image.
    """
    if any(not a > 1 for a in alpha_grid):
        raise ValueError("cylinder heights over the trace-zero curve must exceed 1")
    thetas = [math.pi * j / theta_count for j in range(theta_count)]
    pts: List[CloudPoint] = []
    for x in _cp1_grid(base_count):
        y = (x[1], -x[0])
        q = segre(x, y)  # tr = x0 y0 + x1 y1 = 0 by construction
        for alpha in alpha_grid:
            for th in thetas:
                pts.append(
                    CloudPoint(
                        Interior(alpha, fiber_point(q, th)),
                        LABEL_CYLINDER,
                        {"component": COMPONENT_CYLINDER_C, "alpha": float(alpha), "theta": th},
                    )
                )
        pts.append(CloudPoint(Base(q), LABEL_BASE, {"component": COMPONENT_BASE_C}))
    pool = 2 * section_count + 8
    xs = _cp1_grid(pool, offset=1.0)
    ys = _cp1_grid(pool, offset=2.5)
    made = 0
    for x, y in zip(xs, ys):
        if made >= section_count:
            break
        q = segre(x, y)
        if abs(q.point.m.tr()) < 0.05:
            continue  # too close to the trace-zero curve for the section
        pts.append(
            CloudPoint(
                Interior(1.0, section_s(q)),
                LABEL_CYLINDER,
                {"component": COMPONENT_SECTION},
            )
        )
        made += 1
    if made < section_count:
        raise ArithmeticError("section sampling grid exhausted")
    return LabeledCloud(tuple(pts))


def _check_quadric_constraint(a: HahnMat2):
    lhs = hahn.mul(hahn.t_power(2), a.det())
    tr = a.tr()
    rhs = hahn.mul(tr, tr)
    resid = lhs - rhs
    scales = [abs(t.coefficient) for t in lhs.terms]
    scales += [abs(t.coefficient) for t in rhs.terms]
    scale = max(scales) if scales else 1.0
    if resid.has_terms() and any(
        abs(t.coefficient) > 1e-9 * max(scale, 1.0) for t in resid.terms
    ):
        raise ValueError("family does not satisfy t^2 det = tr^2 on the retained window")


def example_quadric_classify(a: HahnMat2) -> Tuple[str, ConePoint]:
    """Classify a family on the surface t^2 det = tr^2 into the predicted image.

    Heights below 1, or height exactly 1 with a trace-free phase, contradict
    the prediction and raise Falsification with a report; so does a height-1
    phase off the trace section.
    """
    _check_quadric_constraint(a)
    p = val_symbolic(a)
    if isinstance(p, Base):
        tr = p.q.point.m.tr()
        if abs(tr) > 1e-8:
            raise Falsification(
                f"base point has trace {abs(tr):.3e}; it must lie on the trace-zero curve"
            )
        return COMPONENT_BASE_C, p
    if isinstance(p, Vertex):
        raise Falsification("height-0 point cannot satisfy t^2 det = tr^2")
    alpha = p.alpha
    tr = p.phase.rep.m.tr()
    if alpha < 1:
        raise Falsification(f"height {alpha} below the floor 1")
    if alpha == 1:
        if abs(tr) <= 1e-8:
            raise Falsification(
                "height-1 point with trace-zero phase: the missing curve appeared"
            )
        expected = section_s(p.phase.base())
        if dist_proj_r(p.phase.rep, expected.rep) > 1e-9:
            raise Falsification("height-1 phase is off the trace section")
        return COMPONENT_SECTION, p
    if abs(tr) > 1e-8:
        raise Falsification(
            f"height {float(alpha):.3f} > 1 with trace {abs(tr):.3e} off the trace-zero curve"
        )
    return COMPONENT_CYLINDER_C, p
