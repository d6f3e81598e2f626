import cmath
import math

import pytest

from conftest import rand_det1, rand_mat, rand_unitary
from psl2trop.hyperbolic import (
    BoundaryPoint,
    H3Point,
    QhatPoint,
    act,
    amoeba,
    amoeba_star,
    boundary_proj,
    coamoeba,
    dist,
    dist_to_O,
    double_amoeba,
    origin,
)
from psl2trop.mat2 import (
    Mat2,
    ProjPointC,
    ProjPointR,
    dist_proj_c,
    dist_proj_r,
    frac_power,
    polar,
    svd2,
)

E = math.e


class TestDistToO:
    def test_origin(self):
        assert dist_to_O(origin()) == 0.0

    def test_diagonal(self):
        assert abs(dist_to_O(H3Point(Mat2.diag(E**2, E**-2))) - 2.0) < 1e-12

    def test_matches_singular_values(self, rng):
        for _ in range(100):
            a = rand_det1(rng)
            d = dist_to_O(amoeba(a))
            assert abs(d - 2.0 * math.log(svd2(a).s1)) < 1e-9


class TestAction:
    def test_identity(self, rng):
        p = amoeba(rand_det1(rng))
        q = act(Mat2.identity(), p)
        assert (q.m - p.m).frobenius() < 1e-12

    def test_action_on_origin_is_amoeba(self, rng):
        a = rand_det1(rng)
        assert (act(a, origin()).m - amoeba(a).m).frobenius() < 1e-10

    def test_preserves_h3(self, rng):
        for _ in range(100):
            a, p = rand_det1(rng), amoeba(rand_det1(rng))
            q = act(a, p)
            assert (q.m - q.m.adjoint()).frobenius() < 1e-10
            assert abs(q.m.det().real - 1.0) < 1e-10

    def test_isometry(self, rng):
        for _ in range(50):
            a = rand_det1(rng)
            p, q = amoeba(rand_det1(rng)), amoeba(rand_det1(rng))
            before = dist(p, q)
            after = dist(act(a, p), act(a, q))
            assert abs(before - after) < 1e-9 * max(1.0, before)

    def test_rejects_non_unimodular(self, rng):
        with pytest.raises(ValueError):
            act(Mat2.diag(2, 2), origin())


class TestAmoebas:
    def test_unitary_coamoeba_is_itself(self, rng):
        u = rand_unitary(rng)
        assert dist_proj_r(coamoeba(u), ProjPointR(u)) < 1e-12

    def test_diagonal_hyperbolic_element(self):
        a = Mat2.diag(E, 1 / E)
        expected = Mat2.diag(E**2, E**-2)
        assert (amoeba(a).m - expected).frobenius() < 1e-12
        assert (amoeba_star(a).m - expected).frobenius() < 1e-12
        assert dist_proj_r(coamoeba(a), ProjPointR(Mat2.identity())) < 1e-12

    def test_two_amoebas_equidistant(self, rng):
        for _ in range(200):
            a = rand_det1(rng)
            assert abs(dist_to_O(amoeba(a)) - dist_to_O(amoeba_star(a))) < 1e-10

    def test_coamoeba_is_polar_unitary(self, rng):
        for _ in range(200):
            a = rand_det1(rng)
            assert dist_proj_r(coamoeba(a), ProjPointR(polar(a).u)) < 1e-9


class TestBoundary:
    def test_diagonal_projects_north(self):
        b = boundary_proj(H3Point(Mat2.diag(E**2, E**-2)))
        assert dist_proj_c(b.point, ProjPointC(Mat2.diag(1, 0))) < 1e-12

    def test_ray_invariance(self, rng):
        for _ in range(50):
            p = amoeba(rand_det1(rng))
            if dist_to_O(p) < 1e-3:
                continue
            squared = H3Point(frac_power(p.m, 2.0))
            d = dist_proj_c(boundary_proj(p).point, boundary_proj(squared).point)
            assert d < 1e-7

    def test_rotation_equivariance(self, rng):
        for _ in range(50):
            p = amoeba(rand_det1(rng))
            if dist_to_O(p) < 1e-3:
                continue
            u = rand_unitary(rng)
            moved = H3Point(u @ p.m @ u.adjoint())
            lhs = boundary_proj(moved).point
            rhs = ProjPointC(u @ boundary_proj(p).point.m @ u.adjoint())
            assert dist_proj_c(lhs, rhs) < 1e-7

    def test_vertex_rejected(self):
        with pytest.raises(ValueError, match="vertex"):
            boundary_proj(origin())


class TestDoubleAmoeba:
    def test_unitary_lands_on_vertex(self, rng):
        q = double_amoeba(rand_unitary(rng))
        assert q.d == 0.0 and q.pair is None

    def test_diagonal(self):
        q = double_amoeba(Mat2.diag(E, 1 / E))
        assert abs(q.d - 2.0) < 1e-12
        b1, b2 = q.pair
        north = ProjPointC(Mat2.diag(1, 0))
        assert dist_proj_c(b1.point, north) < 1e-12
        assert dist_proj_c(b2.point, north) < 1e-12

    def test_distance_is_log_singular_value(self, rng):
        for _ in range(100):
            a = rand_det1(rng)
            q = double_amoeba(a)
            assert abs(q.d - 2.0 * math.log(max(svd2(a).s1, 1.0))) < 1e-9

    def test_pair_consistency_invariant(self):
        with pytest.raises(ValueError):
            QhatPoint(1.0, None)
        with pytest.raises(ValueError):
            QhatPoint(0.0, (None, None))


class TestH3Validation:
    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            H3Point(Mat2(1, 1, 0, 1))

    def test_rejects_negative_definite(self):
        with pytest.raises(ValueError):
            H3Point(Mat2.diag(-1, -1))

    def test_renormalizes_determinant(self):
        p = H3Point(Mat2.diag(2, 2))
        assert abs(p.m.det().real - 1.0) < 1e-12
