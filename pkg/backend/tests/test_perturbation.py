import math

import numpy as np
import pytest

from app.dressed.service import gauge_exact
from app.errors import InvalidParameterError
from app.perturbation.schemas import Limit
from app.perturbation.service import (
    abelian_correction,
    non_abelian_correction,
    rayleigh_schrodinger,
    singularity_locus,
)

THETA = 1.0
COS = math.cos(THETA)


def test_rayleigh_schrodinger_two_level():
    h0 = np.diag([1.0, -1.0])
    dh = np.array([[0.1, 0.2], [0.2, -0.1]])
    e0, first, second = rayleigh_schrodinger(h0, dh)
    assert e0 == 1.0
    assert first == pytest.approx(0.1)
    assert second == pytest.approx(0.04 / 2.0)


def test_abelian_correction_at_large_field():
    report = abelian_correction(100.0, THETA)
    assert report.limit is Limit.ABELIAN
    assert report.valid and not report.singular
    assert report.unperturbed_gauge == pytest.approx(-0.5 * COS)
    assert report.correction == pytest.approx(math.sin(THETA) ** 2 / (100.0 - COS))
    deviation = report.exact_gauge + 0.5 * COS
    assert deviation == pytest.approx(7.119e-3, rel=1e-3)
    assert report.correction == pytest.approx(deviation, rel=1e-3)
    assert report.first_order == pytest.approx(0.0, abs=1e-15)
    assert report.second_order == pytest.approx(report.correction)
    assert report.dressing_shift == -50.0


@pytest.mark.parametrize("x", np.geomspace(5.0, 1e3, 25))
def test_abelian_correction_within_five_percent(x):
    report = abelian_correction(x, THETA)
    deviation = report.exact_gauge + 0.5 * COS
    assert abs(report.correction - deviation) / deviation < 0.05


def test_abelian_correction_is_singular_at_pole():
    report = abelian_correction(COS, THETA)
    assert report.singular
    assert not report.valid
    assert math.isnan(report.correction)
    assert report.exact_gauge == pytest.approx(gauge_exact(COS, THETA))


def test_abelian_validity_flag_flips_at_cos_theta():
    assert not abelian_correction(0.54, THETA).valid
    assert abelian_correction(0.541, THETA).valid


def test_abelian_needs_positive_x():
    with pytest.raises(InvalidParameterError):
        abelian_correction(0.0, THETA)


def test_non_abelian_first_order():
    x = 1e-3
    root = math.sqrt(4 - 3 * COS**2)
    report = non_abelian_correction(x, THETA)
    assert report.limit is Limit.NON_ABELIAN
    assert report.valid
    assert report.unperturbed_gauge == pytest.approx(0.5 * root)
    assert report.correction == pytest.approx(x * COS / (2 * root))
    assert report.first_order == pytest.approx(-report.correction, rel=1e-12)
    assert report.first_order / x - 0.5 == pytest.approx(report.exact_slope, abs=1e-12)
    assert report.exact_curvature == pytest.approx(math.sin(THETA) ** 2 / root**3)


def test_non_abelian_approximation_error_is_second_order():
    small = non_abelian_correction(1e-3, THETA)
    smaller = non_abelian_correction(5e-4, THETA)
    assert small.abs_error == pytest.approx(small.exact_curvature * 1e-6, rel=0.05)
    assert smaller.abs_error / small.abs_error == pytest.approx(0.25, rel=0.05)


def test_non_abelian_at_zero_field_is_exact():
    report = non_abelian_correction(0.0, THETA)
    assert report.abs_error == pytest.approx(0.0, abs=1e-15)
    assert report.correction == 0.0


def test_non_abelian_validity_and_domain():
    assert not non_abelian_correction(2.0, THETA).valid
    with pytest.raises(InvalidParameterError):
        non_abelian_correction(-1.0, THETA)


def test_singularity_locus():
    locus = singularity_locus(THETA, 10.0)
    assert locus.b == 10.0 * COS
    assert locus.validity_threshold == pytest.approx(5.40302, abs=1e-5)
    assert not locus.reflected


def test_singularity_locus_reflected_for_obtuse_cone():
    locus = singularity_locus(2.0, 1.0)
    assert locus.reflected
    assert locus.b < 0
    assert locus.validity_threshold == pytest.approx(abs(math.cos(2.0)))


def test_singularity_locus_needs_positive_omega():
    with pytest.raises(InvalidParameterError):
        singularity_locus(THETA, 0.0)
