import numpy as np
import pytest

from timegov.errors import DomainError
from timegov.geometry import Disc, Polytope, gjk_distance
from timegov.phd import companion, gains_from_roots
from timegov.prediction import make_predictor, solve_lyapunov
from timegov.verify import (
    ContainmentReport,
    brute_force_distance,
    containment_report,
    containment_trial,
    frozen_trajectory,
    gjk_oracle_check,
    lyapunov_residual,
    radius_decay_check,
    random_state,
)


def test_containment_at_rest():
    g = gains_from_roots([-3, -3])
    for kind in ("lyapunov", "vandermonde"):
        x0 = np.array([[1.0, 2.0], [0.0, 0.0]])
        _, m = containment_trial(make_predictor(kind, [-3, -3]), g, x0, [1.0, 2.0], 5.0, 0.01)
        assert m == pytest.approx(0.0, abs=1e-12)


def test_containment_scalar_first_order():
    g = gains_from_roots([-3])
    _, m = containment_trial(make_predictor("lyapunov", [-3]), g, [[2.0]], [0.5], 20 / 3, 0.01)
    assert m >= -1e-9


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("kind", ["lyapunov", "vandermonde"])
def test_oracle_matrix(kind, n, d, rng):
    if kind == "vandermonde" and n < 2:
        pytest.skip("the Vandermonde predictor needs n >= 2")
    roots = [-3.0] * n
    rep = containment_report(kind, n, d, 20, rng, roots)
    assert isinstance(rep, ContainmentReport)
    assert rep.worst_margin == min(m for _, m in rep.per_trial)
    assert rep.worst_margin >= -1e-6
    g, pred = gains_from_roots(roots), make_predictor(kind, roots)
    bound = 1e-9 if kind == "lyapunov" else 1e-3
    for _ in range(5):
        r = rng.uniform(-2, 2, size=d)
        run = frozen_trajectory(g, random_state(rng, n, d, r), r, 20 / 3, 0.01)
        assert radius_decay_check(run, pred) <= bound
    assert solve_lyapunov(companion(g)).residual <= 1e-10


def test_distinct_roots_containment(rng):
    rep = containment_report("vandermonde", 3, 2, 30, rng, [-1.0, -2.0, -4.0])
    assert rep.worst_margin >= -1e-6


def test_lyapunov_residual():
    assert lyapunov_residual([[-3.0]], [[1 / 6]]) == pytest.approx(0.0, abs=1e-15)
    A = companion(gains_from_roots([-3, -3]))
    P = solve_lyapunov(A).P_small
    assert lyapunov_residual(A, P) <= 1e-10
    assert lyapunov_residual(A, P + 1e-3) > 1e-4
    with pytest.raises(DomainError):
        lyapunov_residual(A, np.eye(3))


def test_radius_decay_from_rest():
    g = gains_from_roots([-3, -3])
    r = np.array([1.0, -1.0])
    run = frozen_trajectory(g, np.array([r, [0.0, 0.0]]), r, 2.0, 0.01)
    assert radius_decay_check(run, make_predictor("vandermonde", [-3, -3])) == 0.0
    assert radius_decay_check(run, make_predictor("lyapunov", [-3, -3])) <= 0.0


def test_frozen_trajectory_errors():
    with pytest.raises(DomainError):
        frozen_trajectory(gains_from_roots([-3]), [[0.0]], [0.0], 0.0, 0.01)


def test_brute_force_distance():
    assert brute_force_distance(Disc([0, 0], 1), Disc([3, 0], 1), 1e-3) == pytest.approx(1.0, abs=1e-3)
    assert brute_force_distance(Disc([0, 0], 3), Disc([0.5, 0], 1), 1e-3) == 0.0
    sq = Polytope([[0, 0], [1, 0], [1, 1], [0, 1]])
    assert brute_force_distance(sq, Polytope([[3, 0.5]]), 1e-3) == pytest.approx(2.0, abs=1e-3)


def test_gjk_against_brute_force(rng):
    assert gjk_oracle_check(25, rng) <= 1e-3
