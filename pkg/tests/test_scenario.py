import copy
import json

import numpy as np
import pytest

from nevkit.cli import bundled_scenario_paths
from nevkit.scenario import ScenarioError, load_scenario, scenario_from_json


BASE = {
    "name": "probe",
    "dimension": 2,
    "measure": {"dimension": 2,
                "spheres": [{"center": [0.0, 0.0], "radius": 1.0, "mass": 1.0}]},
    "radii": {"r": 1.0, "R": 2.0},
    "functions": [{"label": "f",
                   "rational": {"zeros": [[0.5, 0.0]], "poles": [[2.0, 0.0], [2.0, 0.0]],
                                "scale": [1.0, 0.0]}}],
    "checks": ["statement_I", "statement_II"],
}


def variant(**updates):
    data = copy.deepcopy(BASE)
    data.update(updates)
    return data


def test_bundled_scenarios_parse():
    paths = bundled_scenario_paths()
    assert len(paths) >= 3
    for path in paths:
        sc = load_scenario(path)
        assert sc.r < sc.R
        assert sc.checks


def test_base_scenario_parses():
    sc = scenario_from_json(BASE)
    assert sc.name == "probe"
    assert sc.dimension == 2
    assert sc.r == 1.0 and sc.R == 2.0
    assert sc.r0 == sc.r  # defaults to r
    assert [c.kind for c in sc.checks] == ["statement_I", "statement_II"]
    assert sc.functions[0].label == "f"
    assert sc.functions[0].rational is not None


def test_unknown_top_level_key_rejected():
    with pytest.raises(ScenarioError, match="unknown"):
        scenario_from_json(variant(extra=1))


def test_bad_name_rejected():
    with pytest.raises(ScenarioError, match="name"):
        scenario_from_json(variant(name="white space"))


def test_radii_must_be_ordered():
    with pytest.raises(ScenarioError):
        scenario_from_json(variant(radii={"r": 2.0, "R": 1.0}))
    with pytest.raises(ScenarioError):
        scenario_from_json(variant(radii={"r": 0.0, "R": 1.0}))


def test_duplicate_function_labels_rejected():
    data = variant()
    data["functions"] = data["functions"] * 2
    with pytest.raises(ScenarioError, match="label"):
        scenario_from_json(data)


def test_function_dimension_mismatch_rejected():
    data = variant(dimension=3)
    data["measure"] = {"dimension": 3,
                       "spheres": [{"center": [0, 0, 0], "radius": 1.0, "mass": 1.0}]}
    # rational functions are two-dimensional models
    with pytest.raises(ScenarioError):
        scenario_from_json(data)


def test_checks_requiring_functions():
    data = variant(functions=[], checks=["statement_II"])
    with pytest.raises(ScenarioError, match="function"):
        scenario_from_json(data)


def test_corollary_requires_planar_rational():
    data = variant(checks=["corollary"])
    sc = scenario_from_json(data)
    assert sc.checks[0].kind == "corollary"

    data3 = variant(dimension=3, checks=["corollary"], functions=[
        {"label": "u", "dimension": 3,
         "charges": [{"point": [0.1, 0.0, 0.0], "weight": 1.0}]}])
    data3["measure"] = {"dimension": 3,
                        "spheres": [{"center": [0, 0, 0], "radius": 1.0, "mass": 1.0}]}
    with pytest.raises(ScenarioError):
        scenario_from_json(data3)


def test_check_option_validation():
    ok = variant(checks=[{"check": "statement_II", "tight": True, "R_star": 1.5}])
    sc = scenario_from_json(ok)
    assert sc.checks[0].options["R_star"] == 1.5

    with pytest.raises(ScenarioError, match="R_star"):
        scenario_from_json(variant(checks=[{"check": "statement_II", "R_star": 2.5}]))
    with pytest.raises(ScenarioError, match="t_cap"):
        scenario_from_json(variant(checks=[{"check": "statement_III", "t_cap": -1.0}]))
    with pytest.raises(ScenarioError, match="unknown"):
        scenario_from_json(variant(checks=[{"check": "statement_I", "bogus": 1}]))


def test_poisson_jensen_points_validated():
    ok = variant(checks=[{"check": "poisson_jensen", "points": [[0.1, -0.2]]}])
    sc = scenario_from_json(ok)
    assert sc.checks[0].options["points"]

    bad = variant(checks=[{"check": "poisson_jensen", "points": [[3.0, 0.0]]}])
    with pytest.raises(ScenarioError):
        scenario_from_json(bad)


def test_expect_fail_names_validated():
    sc = scenario_from_json(variant(expect_fail=["statement_I"]))
    assert set(sc.expect_fail) == {"statement_I"}
    with pytest.raises(ScenarioError):
        scenario_from_json(variant(expect_fail=["statement_IX"]))


def test_grid_bounds():
    sc = scenario_from_json(variant(grid=9))
    assert sc.grid == 9
    with pytest.raises(ScenarioError):
        scenario_from_json(variant(grid=2))


def test_quad_overrides():
    sc = scenario_from_json(variant(quad={"circle_nodes": 256, "abs_tol": 1e-8}))
    assert sc.quad.circle_nodes == 256
    assert sc.quad.abs_tol == 1e-8
    with pytest.raises(ScenarioError):
        scenario_from_json(variant(quad={"nodes": 10}))


def test_load_scenario_reports_path(tmp_path):
    path = tmp_path / "sc.json"
    path.write_text(json.dumps(variant(name="fromfile")))
    sc = load_scenario(path)
    assert sc.name == "fromfile"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ScenarioError):
        load_scenario(bad)
