import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from timegov.environment import make_environment, point_free_distance
from timegov.geometry import Disc, Polytope, gjk_distance
from timegov.governor import GovernorParams, safe_rate
from timegov.phd import gains_from_roots
from timegov.prediction import lyap_norm, solve_lyapunov, vandermonde_radius
from timegov.phd import companion, reduced_gains
from timegov.refpath import build_path

coord = st.floats(-5, 5, allow_nan=False)
vec2 = st.tuples(coord, coord).map(np.array)


@given(st.lists(st.floats(0.5, 5.0), min_size=1, max_size=5, unique=True))
def test_root_round_trip(mags):
    roots = -np.sort(mags)[::-1]
    if len(roots) > 1 and np.diff(roots).min() < 0.25:
        return
    coeffs = gains_from_roots(roots).coeffs
    rec = np.sort(np.roots(coeffs[::-1]).real)
    np.testing.assert_allclose(rec, np.sort(roots), atol=1e-9)


@given(vec2, vec2, st.floats(0, 2), st.floats(0, 2))
def test_disc_distance(c1, c2, r1, r2):
    expect = max(0.0, float(np.linalg.norm(c1 - c2)) - r1 - r2)
    assert abs(gjk_distance(Disc(c1, r1), Disc(c2, r2)) - expect) <= 1e-9


@settings(max_examples=50)
@given(st.lists(vec2, min_size=1, max_size=6), st.lists(vec2, min_size=1, max_size=6), vec2)
def test_gjk_symmetric_and_translation_invariant(a, b, shift):
    A, B = Polytope(np.array(a)), Polytope(np.array(b) + 12.0)
    d = gjk_distance(A, B)
    assert d >= 0.0
    assert abs(d - gjk_distance(B, A)) <= 1e-9 * max(1.0, d)
    At, Bt = Polytope(np.array(a) + shift), Polytope(np.array(b) + 12.0 + shift)
    assert abs(d - gjk_distance(At, Bt)) <= 1e-8 * max(1.0, d)


@given(st.floats(0, 10), st.floats(0, 10), st.floats(0, 10))
def test_safe_rate_bounds(sigma, s, extra):
    p = GovernorParams()
    s_max = s + extra
    rate = safe_rate(p, sigma, s, s_max)
    assert 0.0 <= rate <= p.kappa_s * (s_max - s) + 1e-12
    assert safe_rate(p, sigma, s_max, s_max) == 0.0


@given(st.integers(1, 4), st.floats(0.1, 10), st.data())
def test_lyap_norm_homogeneous(n, k, data):
    cert = solve_lyapunov(companion(gains_from_roots([-3.0] * n)))
    e = np.array(data.draw(st.lists(coord, min_size=2 * n, max_size=2 * n))).reshape(n, 2)
    r = np.array([0.5, -0.5])
    x, xk = e.copy(), k * e
    x[0] += r
    xk[0] += r
    assert abs(lyap_norm(cert, xk, r) - k * lyap_norm(cert, x, r)) <= 1e-9 * max(1.0, k * lyap_norm(cert, x, r))


@given(st.integers(2, 4), st.data())
def test_vandermonde_radius_covers_position(n, data):
    red = reduced_gains([-3.0] * n)
    x = np.array(data.draw(st.lists(coord, min_size=2 * n, max_size=2 * n))).reshape(n, 2)
    r = data.draw(vec2)
    assert vandermonde_radius(red, x, r) >= np.linalg.norm(x[0] - r) - 1e-12


@given(st.floats(-1, 8), st.floats(-1, 8))
def test_path_is_arc_length_parametrized(s1, s2):
    path = build_path([[0, 0], [3, 0], [3, 4]])
    assert np.linalg.norm(path.eval(s1) - path.eval(s2)) <= abs(s1 - s2) + 1e-12


ENV = make_environment([[0, 0], [10, 0], [10, 10], [0, 10]], [Disc([5, 5], 1.0)], 0.5, 0.5)


@given(st.tuples(st.floats(-1, 11), st.floats(-1, 11)), st.tuples(st.floats(-1, 11), st.floats(-1, 11)))
def test_free_distance_lipschitz(p, q):
    p, q = np.array(p), np.array(q)
    assert abs(point_free_distance(ENV, p) - point_free_distance(ENV, q)) <= np.linalg.norm(p - q) + 1e-9
