"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.  Every tolerance is pinned here, not configurable.
"""

import cmath
import json
import math
import random
import time
from fractions import Fraction

import pytest

from conftest import (
    QUARTER_GRID,
    rand_complex,
    rand_det1,
    rand_hahn_mat,
    rand_mat,
    rand_series,
    rand_unitary,
)
from psl2trop import hahn
from psl2trop.cli import main as cli_main
from psl2trop.hahn import HahnSeries, add, invert, mul, parse_series, print_series, reparametrize, sqrt
from psl2trop.hyperbolic import amoeba, amoeba_star, coamoeba, dist_to_O
from psl2trop.mat2 import (
    Mat2,
    ProjPointC,
    ProjPointR,
    dist_proj_c,
    dist_proj_r,
    frac_power,
    outer,
    polar,
    svd2,
)
from psl2trop.quadric import cp1_dist, fiber_point, segre, unsegre
from psl2trop.tropicalize import (
    B_INFINITY,
    COMPONENT_BASE_C,
    COMPONENT_CYLINDER_C,
    COMPONENT_SECTION,
    example_line,
    example_quadric_classify,
    k_points_on,
    line_through_q,
    parse_poly,
    quadric_witness_base,
    quadric_witness_fiber,
    quadric_witness_section,
    rank_one_k_points,
    sample_V_cap_Q,
    witness_for_cone_point,
)
from psl2trop.valuation import (
    Base,
    HahnMat2,
    Interior,
    Vertex,
    cone_coords,
    default_log_schedule,
    embed_cone,
    val_numeric,
    val_symbolic,
)


def _report(n, text, elapsed, budget):
    print(f"PASS criterion {n}: {text} [{elapsed:.2f}s < {budget}s]")


def test_criterion_1_oracle_equivalence():
    """Numeric limit vs symbolic valuation on 500 random series matrices."""
    start = time.time()
    rng = random.Random("acceptance:oracle")
    checked = 0
    worst = 0.0
    while checked < 500:
        a = rand_hahn_mat(rng)
        try:
            target = val_symbolic(a)
        except hahn.InconclusiveTruncation:
            continue  # filtered per the criterion
        res = val_numeric(a, log_schedule=default_log_schedule(2, 40), target=target)
        dist = res.rows[-1].dist
        assert dist < 5e-2, f"oracle divergence {dist} for {a!r}"
        worst = max(worst, dist)
        last5 = [r.dist for r in res.rows[-5:]]
        for x, y in zip(last5, last5[1:]):
            assert y <= x + 1e-12, f"non-monotone tail {last5} for {a!r}"
        checked += 1
    elapsed = time.time() - start
    assert elapsed < 60.0
    _report(1, f"500 matrices, worst distance {worst:.2e} < 5e-2, tails monotone", elapsed, 60)


def test_criterion_2_algebraic_identities():
    """Embedding determinant, coamoeba vs polar factor, equidistant amoebas."""
    start = time.time()
    rng = random.Random("acceptance:identities")
    for _ in range(1000):
        u = (rand_complex(rng), rand_complex(rng))
        v = (rand_complex(rng), rand_complex(rng))
        b = outer(u, v)
        if b.frobenius() < 1e-6:
            continue
        b = b * (1.0 / b.frobenius())
        alpha = rng.uniform(0.0, 5.0)
        raw = b * math.exp(alpha) + b.adjugate().adjoint() * math.exp(-alpha)
        assert abs(raw.det() - 1.0) < 1e-10
    for _ in range(1000):
        a = rand_det1(rng)
        assert dist_proj_r(coamoeba(a), ProjPointR(polar(a).u)) < 1e-9
        assert abs(dist_to_O(amoeba(a)) - dist_to_O(amoeba_star(a))) < 1e-10
    elapsed = time.time() - start
    _report(2, "det identity, coamoeba = polar factor, equidistant amoebas (1000 each)", elapsed, 30)


def test_criterion_3_example_line():
    """The tangent-line trichotomy and the missing fiber at height 1."""
    start = time.time()
    p = example_line(2, 1.0)
    assert isinstance(p, Interior) and p.alpha == 2
    assert dist_proj_r(p.phase.rep, ProjPointR(Mat2(0, 1, 0, 0))) < 1e-12
    p = example_line(1, 1j)
    assert isinstance(p, Interior) and p.alpha == 1
    assert dist_proj_r(p.phase.rep, ProjPointR(Mat2(1, 1j, 0, 0))) < 1e-12
    p = example_line(Fraction(1, 2), -3.0 + 0.5j)
    assert isinstance(p, Interior) and p.alpha == 1
    assert dist_proj_r(p.phase.rep, ProjPointR(Mat2(1, 0, 0, 0))) < 1e-12

    corner = ProjPointC(B_INFINITY)
    rng = random.Random("acceptance:line")
    over_corner_at_one = 0
    for _ in range(500):
        gamma = Fraction(rng.randint(-40, 80), 20)
        c = rand_complex(rng)
        if abs(c) < 1e-9:
            continue
        q = example_line(gamma, c)
        assert isinstance(q, Interior)
        if q.alpha == 1 and dist_proj_c(q.phase.base().point, corner) < 1e-6:
            over_corner_at_one += 1
    assert over_corner_at_one == 0
    elapsed = time.time() - start
    assert elapsed < 5.0
    _report(3, "trichotomy exact, fiber over the tangency point empty at height 1", elapsed, 5)


def test_criterion_4_example_quadric():
    """Witness classification on the surface t^2 det = tr^2."""
    start = time.time()
    comp, p = example_quadric_classify(quadric_witness_base())
    assert comp == COMPONENT_BASE_C and isinstance(p, Base)
    comp, p = example_quadric_classify(quadric_witness_fiber(2, 1.0))
    assert comp == COMPONENT_CYLINDER_C and p.alpha == 2
    comp, p = example_quadric_classify(quadric_witness_section())
    assert comp == COMPONENT_SECTION and p.alpha == 1

    rng = random.Random("acceptance:quadric")
    for i in range(200):
        sigma = rand_complex(rng)
        while abs(sigma) < 1e-3:
            sigma = rand_complex(rng)
        if i % 2 == 0:
            alpha = Fraction(rng.randint(9, 31), 8)  # random heights in (1, 4)
            family = quadric_witness_fiber(alpha, sigma)
        else:
            family = quadric_witness_section(sigma)
        comp, p = example_quadric_classify(family)  # Falsification would raise
        assert p.alpha >= 1
        if p.alpha == 1:
            assert abs(p.phase.rep.m.tr()) > 1e-8
    elapsed = time.time() - start
    assert elapsed < 10.0
    _report(4, "three witnesses + 200 random families classify without falsification", elapsed, 10)


def _forward_membership(f, mat, tol=1e-6):
    p = val_symbolic(mat)
    if isinstance(p, Vertex):
        _, lead = mat.lead_profile()
        scale = max(1.0, lead.frobenius()) ** f.degree
        assert abs(f.eval_matrix(lead)) < tol * scale
        assert abs(lead.det()) > 1e-8  # genuinely off the quadric
        normalized = lead * (1.0 / cmath.sqrt(lead.det()))
        assert dist_proj_r(coamoeba(normalized), p.u) < tol
    elif isinstance(p, Interior):
        rep = p.phase.rep.m
        assert abs(f.eval_matrix(rep)) < tol
        assert abs(rep.det()) < tol
    else:
        rep = p.q.point.m
        assert abs(f.eval_matrix(rep)) < tol


def test_criterion_5_constant_family_two_sided():
    """Forward and reverse checks of the three-component image."""
    start = time.time()
    polys = [parse_poly("x1"), parse_poly("x0 - x3")]
    forward = 0
    for f in polys:
        rng = random.Random(f"acceptance:forward:{sorted(f.monomials)}")
        for mat in k_points_on(f, 17, rng, "floor"):
            _forward_membership(f, mat)
            forward += 1
        for mat in k_points_on(f, 17, rng, "toward-quadric"):
            _forward_membership(f, mat)
            forward += 1
        for mat in rank_one_k_points(f, 16, rng):
            _forward_membership(f, mat)
            forward += 1
    assert forward == 100

    reverse = 0
    for f in polys:
        rng = random.Random(f"acceptance:reverse:{sorted(f.monomials)}")
        qs = sample_V_cap_Q(f, 25, rng)
        for q in qs:
            alpha = Fraction(rng.randint(1, 16), 4)
            theta = rng.random() * math.pi
            target = Interior(alpha, fiber_point(q, theta))
            curve = line_through_q(f, q, rng)
            witness = witness_for_cone_point(f, target, curve)
            got = val_symbolic(witness)
            assert isinstance(got, Interior) and got.alpha == alpha
            assert dist_proj_r(got.phase.rep, target.phase.rep) < 1e-9
            residual = f.eval_series(witness)
            if residual.has_terms():
                caps = [
                    max(abs(t.coefficient) for t in s.terms) if s.terms else 0.0
                    for s in witness.entries()
                ]
                scale = max(max(caps), 1.0) ** f.degree
                assert max(abs(t.coefficient) for t in residual.terms) < 1e-9 * scale
            reverse += 1
    assert reverse == 50
    elapsed = time.time() - start
    assert elapsed < 30.0
    _report(5, "100 exact points land in the image; 50 interior targets witnessed", elapsed, 30)


def _series_close(a, b, tol):
    if len(a.terms) != len(b.terms):
        return False
    for ta, tb in zip(a.terms, b.terms):
        if ta.exponent != tb.exponent:
            return False
        if abs(ta.coefficient - tb.coefficient) > tol * max(1.0, abs(ta.coefficient)):
            return False
    return True


def test_criterion_6_kernel_property_suites():
    """Series ring, matrix decomposition, parametrization, cone roundtrips."""
    start = time.time()
    rng = random.Random("acceptance:kernel")

    for _ in range(200):
        a, b, c = (rand_series(rng, 0, 3) for _ in range(3))
        assert _series_close(mul(mul(a, b), c), mul(a, mul(b, c)), 1e-11)
        assert _series_close(mul(a, add(b, c)), add(mul(a, b), mul(a, c)), 1e-11)
        assert add(add(a, b), c) == add(a, add(b, c))
        nz = rand_series(rng, 1, 3)
        depth = 6
        residual = mul(invert(nz, depth), nz) - hahn.one()
        assert all(t.exponent < -depth for t in residual.terms)
        root = sqrt(nz, depth)
        sq_residual = mul(root, root) - nz
        assert all(t.exponent < nz.lead_exponent() - depth for t in sq_residual.terms)
        gamma, sigma, alpha = Fraction(3, 2), rand_complex(rng), Fraction(5, 4)
        lhs = reparametrize(mul(a, b), gamma, sigma, alpha)
        rhs = mul(reparametrize(a, gamma, sigma, alpha), reparametrize(b, gamma, sigma, alpha))
        assert _series_close(lhs, rhs, 1e-9)
        assert parse_series(print_series(nz)) == nz

    for _ in range(1000):
        m = rand_mat(rng)
        sv = svd2(m)
        assert (sv.reconstruct() - m).frobenius() < 1e-10 * max(1.0, m.frobenius())
        p, u, nonunique = polar(m)
        assert ((p @ u) - m).frobenius() < 1e-10 * max(1.0, m.frobenius())
        if not nonunique and abs(m.det()) > 1e-3:
            assert (p - frac_power(m @ m.adjoint(), 0.5)).frobenius() < 1e-9 * max(
                1.0, p.frobenius()
            )

    for _ in range(1000):
        x = (rand_complex(rng), rand_complex(rng))
        y = (rand_complex(rng), rand_complex(rng))
        if min(abs(x[0]) + abs(x[1]), abs(y[0]) + abs(y[1])) < 1e-3:
            continue
        q = segre(x, y)
        x2, y2 = unsegre(q)
        assert cp1_dist(x, x2) < 1e-10
        assert cp1_dist(y, y2) < 1e-10

    for _ in range(1000):
        m = ProjPointC(rand_mat(rng))
        assert dist_proj_c(embed_cone(cone_coords(m)), m) < 1e-8

    elapsed = time.time() - start
    assert elapsed < 30.0
    _report(6, "series ring (200), decompositions (1000), segre and cone roundtrips (1000)", elapsed, 30)


def test_criterion_7_cli_determinism(tmp_path):
    """Fixed seed gives byte-identical output files across runs."""
    start = time.time()
    for name, args in {
        "example": ["example", "line", "--seed", "9"],
        "family": ["family", "x0 - x3", "--seed", "9", "--floor-count", "12", "--base-count", "5"],
    }.items():
        outputs = []
        for run in (1, 2):
            path = tmp_path / f"{name}_{run}.json"
            assert cli_main([*args, "--out", str(path)]) == 0
            outputs.append(path.read_bytes())
        assert outputs[0] == outputs[1], f"{name} output not deterministic"
        csvs = []
        for run in (1, 2):
            path = tmp_path / f"{name}_{run}.csv"
            assert cli_main([*args, "--format", "csv", "--out", str(path)]) == 0
            csvs.append(path.read_bytes())
        assert csvs[0] == csvs[1]
    elapsed = time.time() - start
    _report(7, "example and family outputs byte-identical across runs", elapsed, 30)
