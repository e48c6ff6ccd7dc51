import math

import numpy as np
import pytest

import cdcrdyn as cd
from cdcrdyn.errors import ConfigurationError, DomainError


def test_constant_profiles_baseline(case1):
    s = np.linspace(0, case1.length, 7)
    assert np.allclose(case1.eval_I(s), 1.26e-11)
    assert np.allclose(case1.eval_A(s), 1.26e-5)
    assert np.allclose(case1.eval_W(s), 0.11)
    assert np.allclose(case1.eval_W_s(s), 0.0)


def test_taper_second_moment_at_base():
    model = cd.build_case_model("case2")
    expected = (math.pi / 64) * 0.006**4
    assert math.isclose(model.eval_I(0.0), expected, rel_tol=1e-12)
    assert math.isclose(expected, 6.3617e-11, rel_tol=1e-4)


def test_taper_area_at_tip():
    model = cd.build_case_model("case2")
    expected = (math.pi / 4) * 0.005**2
    assert math.isclose(model.eval_A(model.length), expected, rel_tol=1e-12)
    assert math.isclose(expected, 1.9635e-5, rel_tol=1e-4)


def test_degenerate_taper_is_constant():
    prof = cd.GeometryProfile.diameter_taper(0.004, 0.004)
    base = cd.build_case_model("case1")
    model = cd.RobotModel(length=base.length, profile_I=prof, profile_A=prof,
                          profile_W=base.profile_W, material=base.material,
                          load=base.load)
    s = np.linspace(0, base.length, 11)
    assert np.allclose(model.eval_I(s), (math.pi / 64) * 0.004**4)
    assert np.allclose(model.eval_A(s), (math.pi / 4) * 0.004**2)


def test_cubic_spacing_values():
    model = cd.build_case_model("case3")
    assert math.isclose(model.eval_W(0.0), 0.04, rel_tol=1e-12)
    assert math.isclose(model.eval_W(model.length), 0.01, rel_tol=1e-12)
    # gradient: -3 w1 s^2 / L^3
    assert math.isclose(model.eval_W_s(model.length), -3 * 0.03 / 0.4, rel_tol=1e-12)
    assert model.eval_W_s(0.0) == 0.0


def test_cumulative_load_closed_form(case1):
    qx, qy = case1.cumulative_load(0.0)
    assert qx == 0.0
    assert math.isclose(qy, 0.59176, rel_tol=1e-12)
    _, qy_mid = case1.cumulative_load(0.2)
    assert math.isclose(qy_mid, 0.29588, rel_tol=1e-12)
    assert case1.cumulative_load(case1.length) == (0.0, 0.0)


def test_cumulative_load_monotone(case1):
    s = np.linspace(0, case1.length, 1001)
    _, qy = case1.cumulative_load(s)
    assert np.all(np.diff(qy) <= 0)
    assert qy[-1] == 0.0


def test_domain_errors(case1):
    for bad in (-1e-6, case1.length + 1e-6):
        with pytest.raises(DomainError):
            case1.eval_I(bad)
        with pytest.raises(DomainError):
            case1.eval_W_s(bad)
        with pytest.raises(DomainError):
            case1.cumulative_load(bad)


def test_case_builders():
    c1 = cd.build_case_model("case1")
    assert c1.length == 0.4
    assert c1.material.youngs_modulus == 2e9
    assert c1.material.damping_coeff == 16.0
    assert c1.load.q_y == 1.4794 and c1.load.q_x == 0.0
    c2 = cd.build_case_model("case2")
    assert c2.profile_I.kind == "taper" and c2.profile_A.kind == "taper"
    assert c2.profile_W.kind == "constant"  # only the geometry changes
    c3 = cd.build_case_model("case3")
    assert c3.profile_W.kind == "cubic"
    assert c3.profile_I.kind == "constant"
    c4 = cd.build_case_model("case4")
    assert c4.profile_I == c1.profile_I and c4.profile_W == c1.profile_W
    with pytest.raises(ConfigurationError):
        cd.build_case_model("case9")


def test_default_density_reconstruction(case1):
    assert math.isclose(case1.material.density, 1.4794 / (1.26e-5 * 9.81), rel_tol=1e-12)
    assert math.isclose(case1.material.density, 1.1968e4, rel_tol=1e-4)


@pytest.mark.parametrize("case_id", ["case1", "case2", "case3", "case4"])
def test_profiles_positive_everywhere(case_id, rng):
    model = cd.build_case_model(case_id)
    s = rng.uniform(0, model.length, 1000)
    assert np.all(model.eval_I(s) > 0)
    assert np.all(model.eval_A(s) > 0)
    assert np.all(model.eval_W(s) > 0)


def test_tabulated_gradient_matches_analytic():
    base = cd.build_case_model("case3")
    s_tab = np.linspace(0, base.length, 8001)
    tab = cd.GeometryProfile.tabulated(s_tab, base.eval_W(s_tab))
    model = cd.RobotModel(length=base.length, profile_I=base.profile_I,
                          profile_A=base.profile_A, profile_W=tab,
                          material=base.material, load=base.load)
    interior = s_tab[400:-400:80]
    got = model.eval_W_s(interior)
    want = base.eval_W_s(interior)
    scale = np.abs(base.eval_W_s(base.length))
    # relative error where the gradient has settled away from its zero at s=0
    away = np.abs(want) > 0.01 * scale
    assert np.max(np.abs(got[away] - want[away]) / np.abs(want[away])) < 1e-6
    assert np.max(np.abs(got - want)) < 1e-6 * scale


def test_tabulated_validation():
    with pytest.raises(ConfigurationError):
        cd.GeometryProfile.tabulated([0.0, 0.1, 0.1], [1, 2, 3])
    with pytest.raises(ConfigurationError):
        cd.GeometryProfile.tabulated([0.0], [1.0])
    base = cd.build_case_model("case1")
    short = cd.GeometryProfile.tabulated([0.0, 0.2], [0.1, 0.1])
    with pytest.raises(ConfigurationError):
        cd.RobotModel(length=base.length, profile_I=base.profile_I,
                      profile_A=base.profile_A, profile_W=short,
                      material=base.material, load=base.load)


def test_profile_kind_role_validation(case1):
    cubic = cd.GeometryProfile.cubic_spacing(0.04, 0.03)
    with pytest.raises(ConfigurationError):
        cd.RobotModel(length=case1.length, profile_I=cubic,
                      profile_A=case1.profile_A, profile_W=case1.profile_W,
                      material=case1.material, load=case1.load)


def test_material_validation():
    with pytest.raises(ConfigurationError):
        cd.MaterialParams(-1.0, 1000.0, 16.0)
    with pytest.raises(ConfigurationError):
        cd.MaterialParams(2e9, 0.0, 16.0)
    with pytest.raises(ConfigurationError):
        cd.MaterialParams(2e9, 1000.0, -0.5)
