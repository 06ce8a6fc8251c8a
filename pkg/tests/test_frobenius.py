import math

import numpy as np
import pytest

from frobrecip import frobenius as fr
from frobrecip.constructions import induction_data, point_space, tangent_sphere
from frobrecip.lie import SO3, Subgroup, so2_in_so3
from frobrecip.report import APPROX, FAIL, PASS, Sampler

S = Sampler(9, 30)


@pytest.fixture(scope="module")
def sph2():
    return fr.spherical_harmonics_instance(2)


def test_r_at_identity_returns_x_and_y(sph2, rng):
    d = sph2.data
    n = d.level_N_sample(rng)
    x, y = d.split_N(n)
    m = d.join_M(x, np.eye(3), rng.standard_normal(3), y)
    assert np.array_equal(d.r(m), n)


def test_r_prime_from_point_space(rng):
    G, H = SO3(), Subgroup(SO3(), np.eye(3)[2:], "SO2<SO3")
    Y = point_space(H)
    data = induction_data(point_space(G), Y)
    m = data.r_prime(np.zeros(0))
    x, q, mu, y = data.split_M(m)
    assert x.size == 0 and y.size == 0
    assert np.array_equal(q, np.eye(3)) and np.array_equal(mu, np.zeros(3))


def test_phi_M_of_r_prime_vanishes_exactly(sph2, rng):
    d = sph2.data
    for _ in range(20):
        assert np.array_equal(d.phi_M(d.r_prime(d.level_N_sample(rng))), np.zeros(3))


def test_trivial_data_gives_zero_forms():
    G, H = SO3(), so2_in_so3()
    data = induction_data(point_space(G), point_space(H), lambda t: np.zeros(0), 1)
    inst = fr.frobenius_instance("trivial", data)
    rep = fr.check_frobenius_pullback(inst, Sampler(1, 10))
    assert rep.verdict == PASS and rep.max_residual < 1e-12


@pytest.mark.parametrize("make", [lambda: fr.spherical_harmonics_instance(1), lambda: fr.spherical_harmonics_instance(3),
                                  lambda: fr.winding_instance(math.sqrt(2)), lambda: fr.peter_weyl_instance(2)],
                         ids=["sph1", "sph3", "winding", "peter_weyl"])
def test_frobenius_pullback_passes(make):
    rep = fr.check_frobenius_pullback(make(), S)
    assert rep.verdict == PASS, rep.max_residual
    assert rep.details["level_residual_max"] < 1e-9
    assert max(rep.details["aggregate_terms"].values()) < 1e-6


def test_off_level_control_fails(sph2):
    rep = fr.check_frobenius_pullback(sph2, Sampler(9, 10), off_level=True, fail_tol=1e-3)
    assert rep.verdict == FAIL and rep.max_residual > 1e-2


@pytest.mark.parametrize("l", [1, 2])
def test_prequantum_pullback_and_isolated_step(l):
    inst = fr.prequantum_sphere_instance(l)
    rep = fr.check_prequantum_frobenius_pullback(inst, S)
    assert rep.verdict == PASS
    assert rep.details["aggregate_terms"]["nu_dot_Z"] < 1e-8


def test_prequantum_wrapper_rejects_symplectic(sph2):
    with pytest.raises(ValueError):
        fr.check_prequantum_frobenius_pullback(sph2, S)


@pytest.mark.parametrize("make", [lambda: fr.spherical_harmonics_instance(2), lambda: fr.prequantum_sphere_instance(2),
                                  lambda: fr.winding_instance(math.sqrt(5))], ids=["sph", "preq", "winding"])
def test_r_maps_and_orbits(make):
    inst = make()
    assert fr.check_r_maps(inst, S).verdict == PASS
    assert fr.check_orbit_correspondence(inst, S).verdict == PASS


def test_prequantum_levels():
    for l in (1, 2, 3):
        assert fr.check_prequantum_levels(l, S).verdict == PASS


def test_graph_level():
    assert fr.check_graph_level(fr.peter_weyl_instance(1), S).verdict == PASS


@pytest.fixture(scope="module")
def kms():
    return fr.kms_instance(math.sqrt(2))


def test_kms_annihilator_value(kms):
    assert np.allclose(kms.ann_h[0], np.array([-math.sqrt(2), 1.0]) / math.sqrt(3), atol=1e-15)


def test_kms_zero_mu_gives_zero(kms, rng):
    liouv, canon = kms.tg.varpi, fr.ambient_canonical_form(kms.tg)
    plot = fr.kms_plot(kms, rng, mu=[0.0, 0.0])
    from frobrecip.calculus import pullback

    for form in (liouv, canon):
        assert np.max(np.abs(pullback(form, plot).coefficients([0.1, 0.2]))) == 0.0


def test_kms_checks(kms):
    assert fr.check_kms_liouville(kms, S).verdict == PASS
    rep = fr.check_kms_moment(kms, S)
    assert rep.verdict == PASS and rep.details["finite_difference_max"] < 1e-8
    assert fr.check_kms_normalizes(kms, S).verdict == PASS
    assert fr.check_dense_orbit(kms, Sampler(9, 5)).verdict == APPROX


def test_kms_descent_splits_on_annihilator(kms):
    good = fr.check_kms_descent(kms, S, kms.ann_h[0], pairs=30)
    bad = fr.check_kms_descent(kms, S, [1.0, 0.0], pairs=30)
    assert good.verdict == PASS and good.max_residual < 1e-7
    assert bad.verdict == FAIL and bad.max_residual > 0.1
    assert good.details["mu_in_ann"] and not bad.details["mu_in_ann"]


def test_level_violation_is_raised_for_bad_parametrization():
    from frobrecip.errors import LevelViolation

    X, Y = tangent_sphere(), point_space(so2_in_so3())
    bad = induction_data(X, Y, lambda t: np.array([1.0, 0, 0, 0, 1.0, 0]), 1)
    inst = fr.frobenius_instance("bad", bad)
    with pytest.raises(LevelViolation):
        fr.check_frobenius_pullback(inst, Sampler(1, 10))
