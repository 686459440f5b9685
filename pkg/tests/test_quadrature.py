import numpy as np
import pytest

from dipolewave import quadrature
from dipolewave.errors import ConvergenceError


def test_panel_rule_integrates_polynomials_exactly():
    x, w = quadrature.panel_rule(-1.0, 2.0, 3, order=4)
    assert np.dot(w, x**7) == pytest.approx((2.0**8 - 1.0) / 8, rel=1e-13)


def test_breakpoints_split_panels():
    x, w = quadrature.panel_rule(0.0, 1.0, 1, order=8, breakpoints=(0.3,))
    step = np.where(x < 0.3, 1.0, 0.0)
    assert np.dot(w, step) == pytest.approx(0.3, abs=1e-15)


def test_integrate_smooth_function():
    assert quadrature.integrate(np.exp, 0.0, 3.0) == pytest.approx(np.e**3 - 1, abs=1e-10)


def test_integrate_reversed_and_empty():
    assert quadrature.integrate(np.sin, np.pi, 0.0) == pytest.approx(-2.0, abs=1e-10)
    assert quadrature.integrate(np.sin, 1.0, 1.0) == 0.0


def test_integrate_reports_non_convergence():
    with pytest.raises(ConvergenceError):
        quadrature.integrate(lambda x: np.sign(x - 0.123456789), 0.0, 1.0, tol=1e-14, max_panels=8)
