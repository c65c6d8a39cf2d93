"""First-order splitting integrals of the cubic contour family."""
import pytest

from hetcontour import melnikov as ml
from hetcontour.errors import QuadratureError


@pytest.mark.parametrize("c,expected", [(0.5, -0.0177888), (1.5, -0.0866532)])
def test_parabola_integral_values(c, expected):
    prob = ml.MelnikovProblem(c=c, connection=ml.Connection.PARABOLA)
    res = ml.melnikov_integral(prob)
    assert abs(res.value - expected) < 1e-5
    assert res.error_estimate < 1e-6


@pytest.mark.parametrize("c", [0.5, 1.5])
def test_axis_integral_certified_negative(c):
    prob = ml.MelnikovProblem(c=c, connection=ml.Connection.X_AXIS)
    res = ml.melnikov_integral(prob)
    assert res.value < 0
    assert res.sign_certified_negative


def test_value_stable_under_tolerance_halving():
    vals = []
    for tol in (1e-9, 5e-10):
        prob = ml.MelnikovProblem(c=1.5, tolerance=tol)
        vals.append(ml.melnikov_integral(prob).value)
    assert abs(vals[0] - vals[1]) < 1e-8


def test_broken_connection_rejected():
    # an interior zero of dx/dt on the parabola invalidates the integral
    prob = ml.MelnikovProblem(a=1.0, b=-1.5, c=1.0,
                              connection=ml.Connection.PARABOLA)
    with pytest.raises(QuadratureError):
        ml.melnikov_integral(prob)


def test_derivative_check_is_central_difference():
    d = ml.splitting_derivative_check(lambda h: 3.0 * h + h ** 3, h=1e-4)
    assert abs(d - 3.0) < 1e-7
