"""Parametric system construction, evaluation, and exact invariances."""
from fractions import Fraction

import numpy as np
import pytest

from hetcontour import synthesis as sy
from hetcontour import vectorfield as vf
from hetcontour.errors import ConfigError, ParseError


@pytest.mark.parametrize("name", vf.BUILTIN_NAMES)
def test_fd_jacobian_matches_analytic(name, rng):
    sys_ = vf.builtin(name)
    params = sys_.full_params()
    for _ in range(100):
        x, y = rng.uniform(-3, 3, size=2)
        j_an = np.asarray(sys_.jacobian(x, y, params))
        j_fd = np.asarray(sys_.finite_difference_jacobian(x, y, params))
        assert np.allclose(j_an, j_fd, atol=1e-6 * (1 + np.abs(j_an).max()))


def test_contour_variety_invariant_exactly():
    # the unperturbed system leaves y*(y - x*(1-x)) = 0 invariant:
    # <grad G, (f, g)> has zero remainder mod G in exact rational arithmetic
    sys_ = vf.builtin("mono_unperturbed")
    variety = sy.Variety(sy.poly_from_string("y*(y-x*(1-x))"))
    params = sys_.full_params(exact=True)
    rem = sy.tangency_residual(variety, sys_.x_terms, sys_.y_terms, params)
    assert rem == {}


def test_reversible_base_involution(rng):
    # (t, x, y) -> (-t, -x, y): if (u, v) = rhs(x, y) then rhs(-x, y) = (u, -v)
    sys_ = vf.builtin("revers_base")
    params = sys_.full_params()
    for _ in range(100):
        x, y = rng.uniform(-3, 3, size=2)
        u, v = sys_.rhs(x, y, params)
        u2, v2 = sys_.rhs(-x, y, params)
        assert abs(u2 - u) < 1e-12 * (1 + abs(u))
        assert abs(v2 + v) < 1e-12 * (1 + abs(v))


def test_time_reversed_negates_rhs(rng):
    sys_ = vf.builtin("diss_heart")
    rev = sys_.time_reversed()
    params = sys_.full_params()
    for _ in range(20):
        x, y = rng.uniform(-2, 2, size=2)
        f = np.asarray(sys_.rhs(x, y, params))
        g = np.asarray(rev.rhs(x, y, params))
        assert np.allclose(f, -g, atol=1e-14)


def test_dict_roundtrip_preserves_system():
    for name in vf.BUILTIN_NAMES:
        sys_ = vf.builtin(name)
        again = vf.from_dict(sys_.to_dict())
        assert again == sys_


def test_save_load_roundtrip(tmp_path):
    sys_ = vf.builtin("mono_perturbed")
    path = tmp_path / "system.json"
    vf.save(sys_, path)
    assert vf.load(path) == sys_


def test_unknown_parameter_rejected():
    sys_ = vf.builtin("mono_unperturbed")
    with pytest.raises(ConfigError):
        sys_.full_params({"nope": 1.0})


def test_exact_parameters_are_rational():
    params = vf.builtin("mono_unperturbed").full_params(exact=True)
    assert params["c"] == Fraction(3, 2)


def test_unknown_builtin_rejected():
    with pytest.raises(Exception):
        vf.builtin("no_such_system")


def test_compiled_rhs_matches_rhs(rng):
    sys_ = vf.builtin("diss_heart")
    params = sys_.full_params({"alpha": 0.3, "epsilon": -0.2})
    f = sys_.compiled_rhs(params)
    for _ in range(20):
        x, y = rng.uniform(-2, 2, size=2)
        assert np.allclose(f(0.0, [x, y]), sys_.rhs(x, y, params), atol=1e-14)
