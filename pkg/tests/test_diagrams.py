"""Scenario registry, model-map wiring, distances, counting windows."""
import math

import numpy as np
import pytest

from hetcontour import diagrams as dg
from hetcontour import modelmap as mm
from hetcontour.continuation import CurveTag
from hetcontour.errors import BracketError, NotFound


def test_scenario_registry():
    assert dg.scenario_names() == ["heart", "mono_first", "mono_second"]
    for name in dg.scenario_names():
        scn = dg.scenario(name)
        assert scn.name == name
        assert scn.recipes


def test_unknown_scenario_rejected():
    with pytest.raises(NotFound):
        dg.scenario("nope")


def test_model_map_wiring():
    heart = dg.model_map_for(dg.scenario("heart"))
    assert heart.orientation is mm.Orientation.NON_MONODROMIC
    assert 1.0 < heart.lam < heart.mu
    first = dg.model_map_for(dg.scenario("mono_first"))
    assert first.orientation is mm.Orientation.MONODROMIC
    assert first.lam == first.mu == 2.0


def test_model_bifurcation_set_of_second_subcase_has_fold():
    curves = dg.model_bifurcation_set(dg.scenario("mono_second"), k_max=1)
    tags = {c.tag for c in curves}
    assert {CurveTag.P_L, CurveTag.P_M, CurveTag.F,
            CurveTag.H_L, CurveTag.H_M} <= tags


def test_hausdorff_properties():
    rng = np.random.RandomState(7)
    a = rng.rand(40, 2)
    assert dg.hausdorff(a, a) == 0.0
    shift = a + (0.3, 0.0)
    assert abs(dg.hausdorff(a, shift) - 0.3) < 1e-12
    b = rng.rand(25, 2)
    assert dg.hausdorff(a, b) == dg.hausdorff(b, a)


def test_cycle_window_absent_for_heart():
    with pytest.raises(NotFound):
        dg.flow_cycle_count(dg.scenario("heart"), (0.0, 0.0))


def test_curve_start_needs_a_sign_change():
    scn = dg.scenario("mono_first")
    start = dg.CurveStart(CurveTag.H_L, "axis", 2e-3, (20.0, 30.0))
    with pytest.raises(BracketError):
        dg.find_curve_start(scn, start)


def test_params_at_maps_to_declared_names():
    scn = dg.scenario("mono_first")
    params = dg._params_at(scn, (0.01, -0.02))
    assert math.isclose(params["alpha"], 0.01)
    assert math.isclose(params["epsilon"], -0.02)
