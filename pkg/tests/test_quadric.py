import cmath
import math

import pytest

from conftest import rand_complex, rand_unitary
from psl2trop.hyperbolic import BoundaryPoint
from psl2trop.mat2 import Mat2, ProjPointC, ProjPointR, dist_proj_c, dist_proj_r, outer
from psl2trop.quadric import (
    FiberPoint,
    QPoint,
    cp1_dist,
    cp1_normalize,
    fiber_membership,
    fiber_point,
    section_s,
    segre,
    unsegre,
)

ROT = Mat2(0, -1, 1, 0)


def rand_cp1(rng):
    while True:
        v = (rand_complex(rng), rand_complex(rng))
        if abs(v[0]) + abs(v[1]) > 1e-3:
            return v


class TestSegre:
    def test_corner_point(self):
        q = segre((1, 0), (0, 1))
        assert dist_proj_c(q.point, ProjPointC(Mat2(0, 1, 0, 0))) < 1e-12

    def test_north_north(self):
        q = segre((1, 0), (1, 0))
        assert dist_proj_c(q.point, ProjPointC(Mat2(1, 0, 0, 0))) < 1e-12

    def test_rank_one_exactly(self, rng):
        for _ in range(100):
            q = segre(rand_cp1(rng), rand_cp1(rng))
            assert abs(q.point.m.det()) < 1e-14


class TestUnsegre:
    def test_corner(self):
        x, y = unsegre(QPoint.from_matrix(Mat2(0, 1, 0, 0)))
        assert cp1_dist(x, (1, 0)) < 1e-12
        assert cp1_dist(y, (0, 1)) < 1e-12

    def test_ones(self):
        x, y = unsegre(QPoint.from_matrix(Mat2(1, 1, 1, 1)))
        assert cp1_dist(x, (1, 1)) < 1e-12
        assert cp1_dist(y, (1, 1)) < 1e-12

    def test_roundtrip(self, rng):
        for _ in range(200):
            x, y = rand_cp1(rng), rand_cp1(rng)
            q = segre(x, y)
            x2, y2 = unsegre(q)
            assert cp1_dist(x, x2) < 1e-10
            assert cp1_dist(y, y2) < 1e-10
            back = segre(x2, y2)
            assert dist_proj_c(back.point, q.point) < 1e-10


class TestFiberPoint:
    def test_theta_zero_is_canonical(self, rng):
        q = segre(rand_cp1(rng), rand_cp1(rng))
        fp = fiber_point(q, 0.0)
        assert dist_proj_r(fp.rep, ProjPointR(q.point.m)) < 1e-12

    def test_quarter_turn(self):
        q = QPoint.from_matrix(Mat2(0, 1, 0, 0))
        fp = fiber_point(q, math.pi / 2)
        assert dist_proj_r(fp.rep, ProjPointR(Mat2(0, 1j, 0, 0))) < 1e-12

    def test_half_turn_is_identity(self, rng):
        q = segre(rand_cp1(rng), rand_cp1(rng))
        assert dist_proj_r(fiber_point(q, 0.3).rep, fiber_point(q, 0.3 + math.pi).rep) < 1e-12

    def test_projection_forgets_phase(self, rng):
        for theta in (0.1, 0.9, 2.2, 3.0):
            q = segre(rand_cp1(rng), rand_cp1(rng))
            assert dist_proj_c(fiber_point(q, theta).base().point, q.point) < 1e-12

    def test_injective_on_half_circle(self, rng):
        q = segre(rand_cp1(rng), rand_cp1(rng))
        thetas = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]
        for i, t1 in enumerate(thetas):
            for t2 in thetas[i + 1 :]:
                assert dist_proj_r(fiber_point(q, t1).rep, fiber_point(q, t2).rep) > 1e-6


class TestFiberMembership:
    def test_identity_same_point(self):
        b = BoundaryPoint(ProjPointC(Mat2.diag(1, 0)))
        assert fiber_membership(Mat2.identity(), b, b)

    def test_rotation_swaps_poles(self):
        b1 = BoundaryPoint(ProjPointC(Mat2.diag(1, 0)))
        b2 = BoundaryPoint(ProjPointC(Mat2.diag(0, 1)))
        assert fiber_membership(ROT, b1, b2)

    def test_identity_different_points(self):
        b1 = BoundaryPoint(ProjPointC(Mat2.diag(1, 0)))
        b2 = BoundaryPoint(ProjPointC(Mat2.diag(0, 1)))
        assert not fiber_membership(Mat2.identity(), b1, b2)

    def test_rejects_non_unitary(self):
        b = BoundaryPoint(ProjPointC(Mat2.diag(1, 0)))
        with pytest.raises(ValueError):
            fiber_membership(Mat2.diag(2, 1), b, b)


class TestSection:
    def test_formula(self):
        fp = section_s(QPoint.from_matrix(Mat2(1, 1, 0, 0)))
        assert dist_proj_r(fp.rep, ProjPointR(Mat2(1, 1, 0, 0))) < 1e-12

    def test_well_defined_on_classes(self, rng):
        for lam in (1.0, 2.5, -0.3 + 1.1j, 1j):
            fp = section_s(QPoint.from_matrix(Mat2(lam, lam, 0, 0)))
            ref = section_s(QPoint.from_matrix(Mat2(1, 1, 0, 0)))
            assert dist_proj_r(fp.rep, ref.rep) < 1e-12

    def test_undefined_on_trace_zero(self):
        with pytest.raises(ValueError, match="trace-zero"):
            section_s(QPoint.from_matrix(Mat2(0, 1, 0, 0)))

    def test_section_property(self, rng):
        for _ in range(100):
            q = segre(rand_cp1(rng), rand_cp1(rng))
            if abs(q.point.m.tr()) <= 1e-6:
                continue
            fp = section_s(q)
            assert dist_proj_c(fp.base().point, q.point) < 1e-10


class TestEquivariance:
    def test_conjugation_transforms_factors(self, rng):
        # u q u^{-1} has column space u x and row space conj(u) y, matching the
        # membership relation for the boundary classes
        for _ in range(50):
            x, y = rand_cp1(rng), rand_cp1(rng)
            q = segre(x, y)
            u = rand_unitary(rng)
            moved = QPoint(ProjPointC(u @ q.point.m @ u.adjoint()))
            x2, y2 = unsegre(moved)
            ux = u.apply(x)
            conj_u_y = (
                u.a.conjugate() * y[0] + u.b.conjugate() * y[1],
                u.c.conjugate() * y[0] + u.d.conjugate() * y[1],
            )
            assert cp1_dist(x2, ux) < 1e-9
            assert cp1_dist(y2, conj_u_y) < 1e-9
            bx1 = BoundaryPoint(ProjPointC(outer(cp1_normalize(ux), cp1_normalize(ux))))
            bx0 = BoundaryPoint(ProjPointC(outer(cp1_normalize(x), cp1_normalize(x))))
            assert fiber_membership(u, bx1, bx0)


class TestValidation:
    def test_qpoint_rejects_off_quadric(self):
        with pytest.raises(ValueError):
            QPoint.from_matrix(Mat2.identity())

    def test_fiber_point_rejects_off_quadric(self):
        with pytest.raises(ValueError):
            FiberPoint(ProjPointR(Mat2.identity()))
