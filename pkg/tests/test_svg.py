import xml.etree.ElementTree as ET

import pytest

from timegov.environment import make_environment
from timegov.geometry import Disc, Polytope
from timegov.governor import GovernorParams
from timegov.phd import gains_from_roots
from timegov.prediction import make_predictor
from timegov.refpath import build_path
from timegov.simulator import Problem, SimConfig, default_initial_state, run
from timegov.svg import render_scene

NS = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def scene():
    env = make_environment([[0, 0], [8, 0], [8, 4], [0, 4]],
                           [Disc([4, 3.3], 0.4), Polytope([[3, 0], [5, 0], [4, 0.8]])], 0.3, 0.4)
    path = build_path([[1, 2], [7, 2]])
    pb = Problem(env, path, gains_from_roots([-3, -3]), make_predictor("vandermonde", [-3, -3]),
                 GovernorParams(), True, SimConfig(dt=2e-3), default_initial_state(path, 2))
    log, _ = run(pb)
    return env, path, log


def test_deterministic(scene):
    assert render_scene(*scene) == render_scene(*scene)


def test_elements(scene):
    root = ET.fromstring(render_scene(*scene))
    assert root.tag == f"{NS}svg"
    polylines = root.findall(f"{NS}polyline")
    assert [p.get("stroke") for p in polylines] == ["#d62728", "#1f77b4"]
    assert len(root.findall(f"{NS}line")) > 0  # velocity bars
    fills = [c.get("fill") for c in root.findall(f"{NS}circle")]
    assert "#808080" in fills


def test_without_log(scene):
    env, path, _ = scene
    root = ET.fromstring(render_scene(env, path))
    assert len(root.findall(f"{NS}polyline")) == 1
    assert not root.findall(f"{NS}line")

