import math

import numpy as np
import pytest

from mixedfrac import NonConvergedQuadrature
from mixedfrac import quadrature as quad


def test_polynomial_exact():
    val = quad.adaptive(lambda x: 3 * x ** 2, 0.0, 2.0, rel_tol=1e-12)
    assert abs(val - 8.0) < 1e-12


def test_smooth_function():
    val = quad.adaptive(np.sin, 0.0, math.pi, rel_tol=1e-12)
    assert abs(val - 2.0) < 1e-11


def test_endpoint_singularity_power_substitution():
    # int_0^1 x^(-1/2) dx = 2
    val = quad.adaptive_power(lambda x: x ** -0.5, 0.0, 1.0, rel_tol=1e-10,
                              p_left=-0.5)
    assert abs(val - 2.0) < 1e-9


def test_two_sided_singularity():
    # int_0^1 x^(-1/3) (1-x)^(-1/3) dx = B(2/3, 2/3)
    from scipy.special import beta
    val = quad.adaptive_power(lambda x: x ** (-1 / 3) * (1 - x) ** (-1 / 3),
                              0.0, 1.0, rel_tol=1e-10, p_left=-1 / 3, p_right=-1 / 3)
    assert abs(val - beta(2 / 3, 2 / 3)) < 1e-8


def test_nonintegrable_exponent_rejected():
    with pytest.raises(NonConvergedQuadrature):
        quad.adaptive_power(lambda x: x ** -1.2, 0.0, 1.0, p_left=-1.2)


def test_cos_tail_against_reference():
    # int_1^inf cos(x)/x^2 dx via scipy's oscillatory quadrature
    from scipy.integrate import quad as sciquad
    ref = sciquad(lambda x: x ** -2.0, 1, np.inf, weight="cos", wvar=1.0)[0]
    val = quad.cos_tail(2.0, 1.0, tol=1e-12)
    assert abs(val - ref) < 1e-10


@pytest.mark.parametrize("p", [1.3, 2.0, 2.7])
def test_j0_tail_against_reference(p):
    # QUADPACK on a long finite cut; the remainder is below the envelope
    # sqrt(2/(pi x)) x^(-p) integrated past the cut.
    from scipy.integrate import quad as sciquad
    from scipy.special import j0
    cut = 3000.0
    ref = sciquad(lambda x: j0(x) * x ** -p, 1.0, cut, limit=4000)[0]
    remainder = math.sqrt(2 / (math.pi * cut)) * cut ** (1 - p) / (p - 1)
    val = quad.j0_tail(p, 1.0, tol=1e-11)
    assert abs(val - ref) < max(1e-8, 2 * remainder)
