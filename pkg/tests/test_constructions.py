import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frobrecip import constructions as c
from frobrecip.errors import GaugeChartMiss, GroupMismatch
from frobrecip.frobenius import spherical_harmonics_instance, winding_instance
from frobrecip.lie import SO3, Torus2, so2_in_so3, winding_subgroup
from frobrecip.phase_spaces import axiom_gate
from frobrecip.report import PASS, Sampler

seeds = st.integers(0, 2**32 - 1)

CATALOG = {
    "X_1": lambda: c.coadjoint_orbit_so3(1.0),
    "X_3": lambda: c.coadjoint_orbit_so3(3.0),
    "TS2": c.tangent_sphere,
    "R2": c.plane_so2,
    "C2": c.complex_pair,
    "point": lambda: c.point_space(SO3()),
    "T*SO3": lambda: c.cotangent_group(SO3()).space,
    "T*T2//winding": lambda: c.cotangent_group(Torus2(), winding_subgroup(math.sqrt(2))).space,
    "Hom(X_2,TS2)": lambda: c.hom_data(c.coadjoint_orbit_so3(2.0), c.tangent_sphere()),
    "X~_1": c.prequantized_sphere,
    "X~_2": lambda: c.fusion_power(2),
    "TS2~": c.prequantized_tangent_sphere,
    "X~_1-[x]TS2~": lambda: c.prequantum_product(c.prequantized_sphere(), c.prequantized_tangent_sphere()),
    "Symp(Res X~_1)": lambda: c.symplectize(c.restrict(c.prequantized_sphere(), so2_in_so3())),
}


@pytest.mark.parametrize("name", list(CATALOG))
def test_axiom_gate(name):
    for rep in axiom_gate(CATALOG[name](), Sampler(5, 30)):
        assert rep.verdict == PASS, (rep.name, rep.max_residual)


def test_dual_of_point_is_point():
    P = c.point_space(SO3())
    D = c.dual(P)
    assert D.carrier.ambient_dim == 0
    assert np.array_equal(D.moment(np.zeros(0)), np.zeros(3))


def test_hom_from_point_reduces_to_second_factor(rng):
    X2 = c.tangent_sphere()
    H = c.hom_data(c.point_space(SO3()), X2)
    y = X2.sample(rng)
    v, w = X2.carrier.random_tangent(y, rng), X2.carrier.random_tangent(y, rng)
    assert np.allclose(H.moment(y), X2.moment(y))
    assert H.omega(y, v, w) == pytest.approx(X2.omega(y, v, w), abs=1e-14)


@given(seed=seeds)
def test_hom_moment_vanishes_on_diagonal(seed):
    rng = np.random.default_rng(seed)
    X = c.coadjoint_orbit_so3(2.0)
    H = c.hom_data(X, X)
    x = X.sample(rng)
    assert np.max(np.abs(H.moment(np.concatenate([x, x])))) < 1e-14


@given(seed=seeds)
def test_spherical_level_points_have_zero_moment(seed):
    rng = np.random.default_rng(seed)
    l = int(rng.integers(1, 6))
    H = c.hom_data(c.coadjoint_orbit_so3(float(l)), c.tangent_sphere())
    assert np.max(np.abs(H.moment(c.level_point_spherical(l, c.random_frame(rng))))) < 1e-12


def test_hom_requires_same_group():
    with pytest.raises(GroupMismatch):
        c.hom_data(c.plane_so2(), c.tangent_sphere())


def test_cotangent_moment_at_identity(rng):
    tg = c.cotangent_group(SO3())
    mu = rng.standard_normal(3)
    assert np.array_equal(tg.mu(tg.join(np.eye(3), mu)), mu)


def test_psi_for_h_equal_g(rng):
    G = SO3()
    H = c.Subgroup(G, np.eye(3), "SO3<SO3")
    tg = c.cotangent_group(G, H)
    q, mu = G.random_matrix(rng), rng.standard_normal(3)
    expected = -G.coadjoint_coords(q.T, mu)
    assert np.allclose(tg.psi(tg.join(q, mu)), expected, atol=1e-14)
    assert np.allclose(tg.psi(tg.join(q, np.zeros(3))), 0.0)
    assert np.linalg.norm(tg.psi(tg.join(q, mu))) == pytest.approx(np.linalg.norm(mu))


def test_psi_for_winding(rng):
    a = math.sqrt(2)
    tg = c.cotangent_group(Torus2(), winding_subgroup(a))
    q, mu = Torus2().random_matrix(rng), rng.standard_normal(2)
    assert tg.psi(tg.join(q, mu))[0] == pytest.approx(-(mu[0] + a * mu[1]) / math.sqrt(1 + a * a), abs=1e-14)


def test_induction_from_points_is_reduction_of_cotangent(rng):
    G, H = SO3(), so2_in_so3()
    data = c.induction_data(c.point_space(G), c.point_space(H))
    tg = data.tg
    for _ in range(5):
        q, mu = G.random_matrix(rng), rng.standard_normal(3)
        m = data.join_M(np.zeros(0), q, mu, np.zeros(0))
        assert np.allclose(data.psi_M(m), tg.psi(tg.join(q, mu)), atol=1e-14)
        assert np.allclose(data.phi_M(m), mu)


def test_induction_levels_from_parametrization(rng):
    for inst in (spherical_harmonics_instance(2), winding_instance(math.sqrt(3))):
        data = inst.data
        for _ in range(10):
            n = data.level_N_sample(rng)
            assert np.max(np.abs(data.psi_N(n))) < 1e-12
            m = inst.level_M.sample(rng)
            assert np.max(np.abs(data.M.moment(m))) < 1e-12


def test_fusion_power_one_is_identity(rng):
    sym = c.SymPower(1)
    xi = c.xi_from_frame(c.random_frame(rng))
    assert np.allclose(sym.power(xi), xi, atol=1e-15)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_power_fibers(l):
    assert c.check_power_fibers(l, Sampler(3, 30)).verdict == PASS


@given(seed=seeds, l=st.integers(1, 4))
def test_fusion_moment_scales_by_l(seed, l):
    rng = np.random.default_rng(seed)
    f = c.random_frame(rng)
    w = c.realify(c.SymPower(l).power(c.xi_from_frame(f)))
    assert np.max(np.abs(c.fusion_power(l).moment(w) - l * f[:, 2])) < 1e-12


def test_sym_dimensions():
    for l in range(1, 6):
        assert c.SymPower(l).dim == (l + 1) * (l + 2) // 2


def test_prequantum_product_diagonal_moment(rng):
    X = c.prequantized_sphere()
    P = c.prequantum_product(X, X)
    for _ in range(10):
        x = X.sample(rng)
        assert np.max(np.abs(P.moment(np.concatenate([x, x])))) < 1e-14


@pytest.mark.parametrize("sign", [-1, 1])
def test_antidiagonal_circle_gives_same_representative(sign, rng):
    X, T = c.prequantized_sphere(), c.prequantized_tangent_sphere()
    P = c.prequantum_product(X, T, sign=sign)
    fix = P.meta["gauge_fix"]
    for _ in range(10):
        x1, x2 = X.sample(rng), T.sample(rng)
        t = rng.uniform(-math.pi, math.pi)
        moved = np.concatenate([X.circle_action(t, x1), T.circle_action(-sign * t, x2)])
        assert np.max(np.abs(fix(moved) - fix(np.concatenate([x1, x2])))) < 1e-12


def test_gauge_chart_miss():
    X = c.prequantized_sphere()
    P = c.prequantum_product(X, X, charts=[2])
    # xi3 = 0 when u3 = e3
    x = c.realify(c.xi_from_frame(np.eye(3)))
    with pytest.raises(GaugeChartMiss):
        P.meta["gauge_fix"](np.concatenate([x, x]))


def test_symplectization_slices(rng):
    X = c.prequantized_sphere()
    S = c.symplectize(X)
    for _ in range(5):
        x = X.sample(rng)
        assert np.allclose(S.moment(np.concatenate([[0.0], x])), X.moment(x))
        s = rng.uniform(-1, 1)
        pt = np.concatenate([[s], x])
        v = np.concatenate([[0.0], X.carrier.random_tangent(x, rng)])
        ds = np.zeros(7)
        ds[0] = 1.0
        assert S.omega(pt, ds, v) == pytest.approx(math.exp(s) * X.varpi(x, v[1:]), abs=1e-12)


def test_symplectization_level_is_product_with_line(rng):
    H = so2_in_so3()
    S = c.symplectize(c.restrict(c.prequantized_sphere(), H))
    from frobrecip.frobenius import _equator_frame

    for _ in range(10):
        a, b = rng.uniform(-math.pi, math.pi, 2)
        x = c.realify(c.xi_from_frame(_equator_frame(a, b)))
        for s in (-2.0, 0.0, 1.5):
            assert abs(S.moment(np.concatenate([[s], x]))[0]) < 1e-14
        off = c.realify(c.xi_from_frame(c.random_frame(rng)))
        ratio = S.moment(np.concatenate([[1.0], off]))[0] / S.moment(np.concatenate([[0.0], off]))[0]
        assert ratio == pytest.approx(math.e)


def test_restrict_requires_subgroup():
    with pytest.raises(GroupMismatch):
        c.restrict(c.tangent_sphere(), winding_subgroup(math.sqrt(2)))
