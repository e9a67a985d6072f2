import numpy as np
import pytest

from timegov.errors import DomainError, NumericError
from timegov.geometry import Ellipsoid, Polytope, set_radius, sphere_directions
from timegov.phd import companion, gains_from_roots, reduced_gains
from timegov.prediction import (
    lyap_ellipsoid,
    lyap_norm,
    lyap_radius,
    make_predictor,
    predict,
    solve_lyapunov,
    vandermonde_radius,
    vandermonde_simplex,
    vandermonde_vertices,
)
from timegov.refpath import build_path
from timegov.verify import boundary_samples


def cert_for(roots):
    return solve_lyapunov(companion(gains_from_roots(roots)))


class TestLyapunov:
    def test_first_order(self):
        np.testing.assert_allclose(cert_for([-3]).P_small, [[1 / 6]], atol=1e-15)

    def test_second_order(self):
        np.testing.assert_allclose(cert_for([-3, -3]).P_small,
                                   [[7 / 6, 1 / 18], [1 / 18, 5 / 54]], atol=1e-14)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_residual(self, n):
        assert cert_for([-3.0] * n).residual <= 1e-10

    def test_unstable_matrix(self):
        with pytest.raises(NumericError):
            solve_lyapunov(np.array([[0.0, 1.0], [1.0, 0.0]]))

    def test_norm(self):
        cert = cert_for([-3])
        assert lyap_norm(cert, [[2.0]], [0.0]) == pytest.approx(np.sqrt(2 / 3))
        assert lyap_norm(cert, [[1.0]], [1.0]) == 0.0
        c2 = cert_for([-3, -3])
        x = np.array([[1.0, 2.0], [0.5, -1.0]])
        r = np.array([0.3, 0.1])
        e = x.copy()
        e[0] -= r
        x2 = e * 2
        x2[0] += r
        assert lyap_norm(c2, x2, r) == pytest.approx(2 * lyap_norm(c2, x, r))

    def test_norm_order_mismatch(self):
        with pytest.raises(DomainError):
            lyap_norm(cert_for([-3, -3]), np.zeros((3, 2)), [0, 0])
        with pytest.raises(DomainError):
            lyap_norm(cert_for([-3, -3]), np.zeros(2), [0, 0])

    def test_ellipsoid(self):
        cert = cert_for([-3])
        E = lyap_ellipsoid(cert, [[2.0]], [0.0])
        assert isinstance(E, Ellipsoid)
        assert E.support_values(np.array([[1.0], [-1.0]])) == pytest.approx([2.0, 2.0])
        assert lyap_ellipsoid(cert, [[0.0]], [0.0]).scale == 0.0
        assert lyap_radius(cert, [[2.0]], [0.0]) == pytest.approx(2.0)

    def test_ellipsoid_contains_position(self, rng):
        U = sphere_directions(2, 256)
        for n in (1, 2, 3):
            cert = cert_for([-3.0] * n)
            for _ in range(20):
                x, r = rng.normal(size=(n, 2)), rng.normal(size=2)
                E = lyap_ellipsoid(cert, x, r)
                assert np.min(E.support_values(U) - U @ x[0]) >= -1e-9

    def test_radius_matches_sampled_boundary(self, rng):
        cert = cert_for([-3, -3])
        x, r = rng.normal(size=(2, 2)), rng.normal(size=2)
        pts = boundary_samples(lyap_ellipsoid(cert, x, r), 1e-4)
        brute = np.linalg.norm(pts - r, axis=1).max()
        assert lyap_radius(cert, x, r) == pytest.approx(brute, abs=1e-6)


class TestVandermonde:
    def test_second_order_vertices(self):
        x = np.array([[1.0, 2.0], [3.0, -6.0]])
        V = vandermonde_vertices(reduced_gains([-3, -3]), x, [0, 0])
        np.testing.assert_allclose(V, [[0, 0], [1, 2], [2, 0]])

    def test_third_order_vertices(self):
        x = np.array([[1.0, 0.0], [3.0, 0.0], [9.0, 9.0]])
        V = vandermonde_vertices(reduced_gains([-3, -3, -3]), x, [0, 0])
        np.testing.assert_allclose(V, [[0, 0], [1, 0], [3, 0], [4, 1]])

    def test_degenerate(self):
        x = np.array([[1.0, 1.0], [0.0, 0.0]])
        S = vandermonde_simplex(reduced_gains([-3, -3]), x, [1, 1])
        np.testing.assert_allclose(S.vertices, 1.0)
        assert vandermonde_radius(reduced_gains([-3, -3]), x, [1, 1]) == 0.0

    def test_radius(self):
        # p = (1, 0), p + v/3 = (1, 1)
        x = np.array([[1.0, 0.0], [0.0, 3.0]])
        assert vandermonde_radius(reduced_gains([-3, -3]), x, [0, 0]) == pytest.approx(np.sqrt(2))

    def test_radius_is_set_radius(self, rng):
        red = reduced_gains([-3, -3, -3])
        for _ in range(10):
            x, r = rng.normal(size=(3, 2)), rng.normal(size=2)
            S = vandermonde_simplex(red, x, r)
            assert vandermonde_radius(red, x, r) == pytest.approx(set_radius(S, r))

    def test_order_mismatch(self):
        with pytest.raises(DomainError):
            vandermonde_vertices(reduced_gains([-3, -3]), np.zeros((3, 2)), [0, 0])


class TestPredict:
    def test_dispatch_and_containment(self, rng):
        path = build_path([[0, 0], [4, 0]])
        U = sphere_directions(2, 256)
        for kind, cls in (("lyapunov", Ellipsoid), ("vandermonde", Polytope)):
            pred = make_predictor(kind, [-3, -3])
            x = rng.normal(size=(2, 2))
            body = predict(pred, x, 1.5, path)
            assert isinstance(body, cls)
            for q in (x[0], path.eval(1.5)):
                assert np.min(body.support_values(U) - U @ q) >= -1e-9

    def test_evaluate_matches_body(self, rng):
        for kind in ("lyapunov", "vandermonde"):
            pred = make_predictor(kind, [-2, -3, -4])
            x, r = rng.normal(size=(3, 2)), rng.normal(size=2)
            body, radius = pred.evaluate(x, r)
            U = sphere_directions(2, 32)
            np.testing.assert_allclose(body.support_values(U), pred.body(x, r).support_values(U))
            assert radius == pytest.approx(pred.radius(x, r))

    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            make_predictor("sphere", [-3, -3])

    def test_vandermonde_needs_second_order(self):
        with pytest.raises(DomainError):
            make_predictor("vandermonde", [-3])
