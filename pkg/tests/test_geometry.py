import numpy as np
import pytest

from timegov.errors import DomainError
from timegov.geometry import (
    Disc,
    Ellipsoid,
    Polytope,
    containment_margin,
    gjk_distance,
    point,
    set_radius,
    sphere_directions,
    support_point,
    sym_sqrt,
)

SQUARE10 = Polytope([[0, 0], [10, 0], [10, 10], [0, 10]])


class TestSymSqrt:
    def test_identity(self):
        np.testing.assert_allclose(sym_sqrt(np.eye(3)), np.eye(3), atol=1e-15)

    def test_diagonal(self):
        np.testing.assert_allclose(sym_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)

    def test_squares_back(self):
        M = np.array([[2.0, 1.0], [1.0, 2.0]])
        R = sym_sqrt(M)
        assert np.linalg.norm(R @ R - M) <= 1e-12
        np.testing.assert_allclose(R, R.T)

    def test_rejects_indefinite(self):
        with pytest.raises(DomainError):
            sym_sqrt(np.diag([1.0, -1.0]))

    def test_rejects_asymmetric(self):
        with pytest.raises(DomainError):
            sym_sqrt(np.array([[1.0, 2.0], [0.0, 1.0]]))


class TestSupport:
    def test_disc(self):
        np.testing.assert_allclose(support_point(Disc([1, 1], 2), [0, 1]), [1, 3])

    def test_polytope(self):
        P = Polytope([[0, 0], [2, 0], [0, 2]])
        np.testing.assert_allclose(support_point(P, [1, 0]), [2, 0])

    def test_ellipsoid(self):
        E = Ellipsoid([0, 0], np.diag([4.0, 1.0]), 1.0)
        np.testing.assert_allclose(support_point(E, [1, 0]), [2, 0])

    def test_zero_direction(self):
        with pytest.raises(DomainError):
            support_point(Disc([0, 0], 1), [0, 0])

    def test_wrong_dimension(self):
        with pytest.raises(DomainError):
            support_point(Disc([0, 0], 1), [1, 0, 0])

    def test_support_values_match_points(self, rng):
        bodies = [Disc([1, -2], 0.7), Polytope(rng.normal(size=(6, 2))),
                  Ellipsoid([0.5, 0.5], np.array([[2.0, 0.3], [0.3, 0.5]]), 1.3)]
        U = rng.normal(size=(20, 2))
        for B in bodies:
            h = B.support_values(U)
            for u, hu in zip(U, h):
                assert np.isclose(B.support(u) @ u, hu, atol=1e-12)


class TestGjk:
    def test_collinear_discs(self):
        assert gjk_distance(Disc([0, 0], 1), Disc([3, 0], 1)) == pytest.approx(1.0, abs=1e-12)

    def test_overlap(self):
        assert gjk_distance(Disc([0, 0], 1), Polytope([[0.5, 0], [3, 0], [3, 1]])) == 0.0

    def test_vertex_to_vertex(self):
        A = Polytope([[0, 0], [1, 0], [0, 1]])
        assert gjk_distance(A, point([2, 0])) == pytest.approx(1.0, abs=1e-12)

    def test_edge_distance(self):
        A = Polytope([[0, 0], [2, 0], [2, 2], [0, 2]])
        assert gjk_distance(A, Disc([1, 5], 1)) == pytest.approx(2.0, abs=1e-10)

    def test_ellipsoid_to_point(self):
        E = Ellipsoid([0, 0], np.diag([4.0, 1.0]), 1.0)
        assert gjk_distance(E, point([5, 0])) == pytest.approx(3.0, abs=1e-9)
        assert gjk_distance(E, point([0, 3])) == pytest.approx(2.0, abs=1e-9)

    def test_three_dimensions(self):
        cube = Polytope([[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)])
        assert gjk_distance(cube, Disc([3, 0.5, 0.5], 1)) == pytest.approx(1.0, abs=1e-10)

    def test_symmetric(self, rng):
        for _ in range(20):
            A = Polytope(rng.normal(size=(5, 2)))
            B = Disc(rng.normal(size=2) * 4, 0.5)
            assert gjk_distance(A, B) == pytest.approx(gjk_distance(B, A), abs=1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            gjk_distance(Disc([0, 0], 1), Disc([0, 0, 0], 1))


class TestContainment:
    def test_point_inside(self):
        assert containment_margin(point([2, 3]), SQUARE10) == pytest.approx(2.0)

    def test_disc_inside(self):
        assert containment_margin(Disc([5, 5], 1), SQUARE10) == pytest.approx(4.0)

    def test_protrusion(self):
        assert containment_margin(point([-1, 5]), SQUARE10) == pytest.approx(-1.0)


def test_set_radius_of_simplex():
    P = Polytope([[0, 0], [1, 0], [1, 1]])
    assert set_radius(P, [0, 0]) == pytest.approx(np.sqrt(2))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_sphere_directions_are_unit(d):
    U = sphere_directions(d, 64)
    np.testing.assert_allclose(np.linalg.norm(U, axis=1), 1.0)
