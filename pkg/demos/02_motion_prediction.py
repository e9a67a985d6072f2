"""
Feedback motion prediction
==========================

With the path parameter frozen, PhD control drives the robot to a fixed
reference point. Both predictors bound the whole future position trajectory
from the current state alone. Here we simulate one frozen run exactly and
check that it never leaves either prediction set.
"""

import numpy as np

from timegov.geometry import sphere_directions
from timegov.phd import companion, gains_from_roots
from timegov.prediction import make_predictor, solve_lyapunov
from timegov.verify import frozen_trajectory

roots = [-3.0, -3.0]
gains = gains_from_roots(roots)
print("gains a_0..a_n:", gains.coeffs)
print("companion matrix:\n", companion(gains))

# %%
# The Lyapunov certificate for A^T P + P A + I = 0.
cert = solve_lyapunov(companion(gains))
print("P =\n", cert.P_small, "\nresidual", cert.residual)

# %%
# A robot at (1, 0) moving up at 2 m/s, reference at the origin.
x0 = np.array([[1.0, 0.0], [0.0, 2.0]])
r = np.zeros(2)
run = frozen_trajectory(gains, x0, r, horizon=5.0, dt=0.01)
U = sphere_directions(2, 256)
for kind in ("lyapunov", "vandermonde"):
    pred = make_predictor(kind, roots)
    body, radius = pred.evaluate(x0, r)
    margin = (body.support_values(U)[None, :] - run.states[:, 0, :] @ U.T).min()
    print(f"{kind:12s} radius {radius:.3f} m, worst containment margin {margin:.2e}")

# %%
# Neither set is smaller for every state. Over random states we count how
# often the simplex has the smaller radius. The radius is not what the
# governor uses, though. The simplex is a thin sliver along the motion, so
# its distance to nearby walls is usually larger than the ellipse's.
far = np.linalg.norm(run.states[:, 0, :] - r, axis=1).max()
print(f"farthest the robot actually gets from r: {far:.3f} m")

rng = np.random.default_rng(0)
lyap, vand = make_predictor("lyapunov", roots), make_predictor("vandermonde", roots)
states = rng.normal(size=(2000, 2, 2))
smaller = np.mean([vand.radius(x, r) < lyap.radius(x, r) for x in states])
print(f"simplex radius is the smaller one in {100 * smaller:.0f}% of random states")
