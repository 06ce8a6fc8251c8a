import numpy as np
import pytest

from frobrecip import phase_spaces as ps
from frobrecip.constructions import (coadjoint_orbit_so3, cotangent_group, dual, fusion_power, level_point_spherical,
                                     plane_so2, point_prequantum, prequantized_sphere, prequantized_tangent_sphere,
                                     random_frame, tangent_sphere, xi_from_frame, realify)
from frobrecip.errors import LevelViolation, RankAmbiguity
from frobrecip.lie import SO3, Torus2, so2_in_so3
from frobrecip.report import FAIL, PASS


def test_infinitesimal_action_examples():
    X = coadjoint_orbit_so3(1.0)
    assert np.allclose(ps.infinitesimal_action(X, [0, 0, 0], [1.0, 0, 0]), 0.0)
    # Z = e3 at x = e1 gives e3 x e1 = e2
    assert np.allclose(ps.infinitesimal_action(X, [0, 0, 1.0], [1.0, 0, 0]), [0, 1.0, 0], atol=1e-10)
    R2 = plane_so2()
    assert np.allclose(ps.infinitesimal_action(R2, [1.0], [0.0, 0.0]), 0.0)


def test_moment_condition_passes_on_ts2_and_cotangent(sampler):
    assert ps.check_moment_condition(tangent_sphere(), sampler).verdict == PASS
    assert ps.check_moment_condition(cotangent_group(SO3()).space, sampler).verdict == PASS


def test_negated_moment_fails_with_twice_the_form(sampler):
    X = tangent_sphere()
    bad = ps.HamiltonianSpace("TS2(-Phi)", X.carrier, X.group, X.action, X.omega,
                              lambda x: -np.cross(x[:3], x[3:]), X.sample)
    rep = ps.check_moment_condition(bad, sampler)
    assert rep.verdict == FAIL
    w = rep.witness
    assert w["residual"] == pytest.approx(2 * abs(w["omega_term"]), rel=1e-6)


def test_equivariance_at_identity_is_exact(rng):
    X = tangent_sphere()
    x = X.sample(rng)
    G = X.group
    assert np.array_equal(X.moment(X.action(G.identity(), x)), G.coadjoint_coords(G.identity(), X.moment(x)))


def test_equivariance_ts2_tight(sampler):
    assert ps.check_equivariance(tangent_sphere(), sampler, tol=1e-9).verdict == PASS


def test_torus_equivariance_is_invariance(rng):
    from frobrecip.constructions import complex_pair

    X = complex_pair()
    for _ in range(10):
        x, g = X.sample(rng), Torus2().random_matrix(rng)
        assert np.allclose(X.moment(X.action(g, x)), X.moment(x), atol=1e-12)


def test_cardinal_ts2_zero_section():
    rep = ps.cardinal_checks(tangent_sphere(), np.array([1.0, 0, 0, 0, 0, 0]))
    assert rep.verdict == PASS
    assert rep.details["rank_dphi"] == 2 and rep.details["stabilizer_dim"] == 1


def test_cardinal_spherical_g_level(rng):
    from frobrecip.constructions import hom_data

    hom = hom_data(coadjoint_orbit_so3(1.0), tangent_sphere())
    rep = ps.cardinal_checks(hom, level_point_spherical(1.0, random_frame(rng)))
    assert rep.verdict == PASS
    assert rep.details["rank_dphi"] == 3 and rep.details["stabilizer_dim"] == 0


def test_cardinal_rejects_off_level_points():
    with pytest.raises(LevelViolation):
        ps.cardinal_checks(tangent_sphere(), np.array([1.0, 0, 0, 0, 1.0, 0]))


def test_rank_ambiguity_band():
    with pytest.raises(RankAmbiguity):
        ps._numeric_rank(np.array([1.0, 1e-8]), "test")
    assert ps._numeric_rank(np.array([1.0, 1e-13]), "test") == 1


def test_prequantized_sphere_moment_is_third_frame_vector(rng):
    X = prequantized_sphere()
    for _ in range(10):
        f = random_frame(rng)
        x = realify(xi_from_frame(f))
        assert np.max(np.abs(X.moment(x) - f[:, 2])) < 1e-12
        assert np.max(np.abs(ps.prequantum_moment(X, x) - f[:, 2])) < 1e-8


def test_point_prequantum_has_zero_moment(rng):
    Y = point_prequantum(so2_in_so3())
    for _ in range(5):
        y = Y.sample(rng)
        assert np.allclose(ps.prequantum_moment(Y, y), 0.0)


@pytest.mark.parametrize("make", [prequantized_sphere, lambda: fusion_power(2), lambda: fusion_power(3),
                                  prequantized_tangent_sphere], ids=["X~1", "X~2", "X~3", "TS2~"])
def test_reeb_normalization(make, sampler):
    assert ps.check_reeb_normalization(make(), sampler).verdict == PASS


@pytest.mark.parametrize("make", [tangent_sphere, lambda: coadjoint_orbit_so3(3.0), plane_so2,
                                  lambda: cotangent_group(SO3()).space, prequantized_sphere,
                                  lambda: fusion_power(2)], ids=["TS2", "X_3", "R2", "T*SO3", "X~1", "X~2"])
def test_form_invariance(make, sampler):
    assert ps.check_invariance(make(), sampler).verdict == PASS


def test_level_set_require():
    X = tangent_sphere()
    lvl = ps.LevelSet(X, lambda rng: np.array([1.0, 0, 0, 0, 0, 0]))
    assert lvl.contains(np.array([0, 1.0, 0, 0, 0, 0]))
    with pytest.raises(LevelViolation):
        lvl.require(np.array([1.0, 0, 0, 0, 1.0, 0]))


def test_isotropic_orbit_on_g_level(sampler):
    from frobrecip.constructions import hom_data

    hom = hom_data(coadjoint_orbit_so3(2.0), tangent_sphere())
    rep = ps.check_isotropic_orbit(hom, lambda r: level_point_spherical(2.0, random_frame(r)), sampler)
    assert rep.verdict == PASS
    assert rep.details["orbit_and_tangent_dims"] == [(3, 6)]


def test_isotropic_orbit_detects_non_isotropic_orbits(sampler):
    # SO3 orbits in X_1 are the whole sphere, so omega does not vanish on them
    rep = ps.check_isotropic_orbit(coadjoint_orbit_so3(1.0), coadjoint_orbit_so3(1.0).sample, sampler)
    assert rep.verdict == FAIL


def test_dual_flips_form_and_moment(rng):
    X = tangent_sphere()
    D = dual(X)
    x = X.sample(rng)
    v, w = X.carrier.random_tangent(x, rng), X.carrier.random_tangent(x, rng)
    assert D.omega(x, v, w) == pytest.approx(-X.omega(x, v, w), abs=1e-15)
    assert np.allclose(D.moment(x), -X.moment(x))
    DD = dual(D)
    assert DD.omega(x, v, w) == pytest.approx(X.omega(x, v, w), abs=1e-15)
    assert DD.name == X.name
