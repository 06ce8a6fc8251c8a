import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frobrecip import calculus as calc
from frobrecip.calculus import DomainForm, KForm, Plot, cube, euclidean
from frobrecip.constructions import (coadjoint_orbit_so3, complex_pair, cotangent_group, plane_so2,
                                     tangent_sphere)
from frobrecip.descent import right_invariant_form
from frobrecip.errors import ArityMismatch, BoundaryViolation, DerivativeFailure, SpaceMismatch
from frobrecip.lie import SO3, group_plot
from frobrecip.report import PASS, Sampler

seeds = st.integers(0, 2**32 - 1)
R3 = euclidean(3, "R3")


def _tg_plot(tg, rng, dim=2):
    """u -> (exp(u0 Z1) exp(u1 Z2) q0, mu(u)) with mu a trig polynomial."""
    G = tg.G
    z1, z2, q0 = rng.standard_normal(3), rng.standard_normal(3), G.random_matrix(rng)
    mu = calc.trig_polynomial(rng, 3, dim)
    fn = lambda u: tg.join(G.exp_matrix(u[0] * z1) @ G.exp_matrix(u[1] * z2) @ q0, mu(u))
    return Plot("tg_plot", dim, cube(dim), fn, tg.carrier), (z1, z2, mu)


def test_affine_plot_derivative_is_exact(rng):
    a, b = rng.standard_normal((3, 2)), rng.standard_normal(3)
    p = Plot("affine", 2, cube(2, 5.0), lambda u: a @ u + b, R3)
    du = rng.standard_normal(2)
    assert np.max(np.abs(calc.plot_derivative(p, [0.3, -0.2], du) - a @ du)) < 1e-9


def test_circle_velocity():
    p = Plot("circle", 1, cube(1), lambda u: np.array([math.cos(u[0]), math.sin(u[0])]), euclidean(2))
    assert np.allclose(calc.plot_derivative(p, [0.0], [1.0]), [0.0, 1.0], atol=1e-10)


def test_group_curve_derivative_against_analytic(rng):
    G = SO3()
    z = rng.standard_normal(3)
    p = group_plot(G, lambda u: G.exp_matrix(u[0] * z))
    for t in (-0.5, 0.0, 0.7):
        analytic = G.to_point(G.hat(z) @ G.exp_matrix(t * z))
        assert np.max(np.abs(calc.plot_derivative(p, [t], [1.0], 1e-5) - analytic)) < 1e-8


def test_boundary_violation():
    p = Plot("line", 1, cube(1), lambda u: np.array([u[0], 0.0, 0.0]), R3)
    with pytest.raises(BoundaryViolation):
        calc.plot_derivative(p, [1.0 - 1e-6], [1.0])


def test_richardson_disagreement_raises():
    p = Plot("wiggle", 1, cube(1), lambda u: np.array([math.sin(3e5 * u[0]), 0.0, 0.0]), R3)
    with pytest.raises(DerivativeFailure):
        calc.plot_derivative(p, [0.1], [1.0])


def test_pullback_along_constant_plot_is_zero():
    X = tangent_sphere()
    x = X.sample(np.random.default_rng(3))
    p = calc.constant_plot(x, X.carrier, 2)
    assert np.max(np.abs(calc.pullback(X.omega, p).coefficients([0.1, 0.2]))) == 0.0


def test_right_invariant_form_along_one_parameter_group(rng):
    G = SO3()
    z, q, mu = rng.standard_normal(3), G.random_matrix(rng), rng.standard_normal(3)
    p = group_plot(G, lambda u: G.exp_matrix(u[0] * z) @ q)
    df = calc.pullback(right_invariant_form(G, mu), p)
    for t in (-0.4, 0.0, 0.6):
        assert abs(df.coefficients([t])[0] - mu @ z) < 1e-8


def test_liouville_pullback_matches_closed_form(rng):
    tg = cotangent_group(SO3())
    G = tg.G
    p, (z1, z2, mu) = _tg_plot(tg, rng)
    df = calc.pullback(tg.varpi, p)
    worst = 0.0
    for u in rng.uniform(-0.8, 0.8, (20, 2)):
        ad = G.adjoint_matrix(G.exp_matrix(u[0] * z1))
        closed = np.array([mu(u) @ z1, mu(u) @ (ad @ z2)])
        worst = max(worst, float(np.max(np.abs(df.coefficients(u) - closed))))
    assert worst < 1e-7


def test_exterior_derivative_examples():
    const = DomainForm(2, 1, lambda u: np.array([2.0, -1.0]))
    assert np.max(np.abs(calc.domain_exterior_derivative(const).coefficients([0.1, 0.2]))) < 1e-12
    u1du2 = DomainForm(2, 1, lambda u: np.array([0.0, u[0]]))
    d = calc.domain_exterior_derivative(u1du2).coefficients([0.3, -0.1])
    assert np.allclose(d, [[0.0, 1.0], [-1.0, 0.0]], atol=1e-9)


def test_d_of_liouville_pullback_matches_exact_d(rng):
    tg = cotangent_group(SO3())
    for _ in range(3):
        p, _ = _tg_plot(tg, rng, 3)
        numeric = calc.domain_exterior_derivative(calc.pullback(tg.varpi, p))
        exact = calc.pullback(tg.varpi.exact_d, p)
        rep = calc.forms_equal_on_samples(numeric, exact, Sampler(1, 10), atol=1e-6, rtol=0.0)
        assert rep.verdict == PASS, rep.max_residual


def test_forms_equal_on_identical_forms():
    f = DomainForm(2, 2, lambda u: np.array([[0.0, u[0]], [-u[0], 0.0]]))
    rep = calc.forms_equal_on_samples(f, f, Sampler(0, 10))
    assert rep.max_residual == 0.0 and rep.verdict == PASS


def test_pullback_space_mismatch():
    X = tangent_sphere()
    p = Plot("line", 1, cube(1), lambda u: np.array([u[0], 0.0, 0.0]), R3)
    with pytest.raises(SpaceMismatch):
        calc.pullback(X.omega, p)


def test_arity_checks():
    f = KForm(R3, 2, lambda x, a, b: a[0] * b[1])
    with pytest.raises(ArityMismatch):
        f(np.zeros(3), np.ones(3))
    with pytest.raises(ArityMismatch):
        KForm(R3, 4, lambda x, *v: 0.0)


def test_tangent_projection_of_sphere(rng):
    X = coadjoint_orbit_so3(2.0)
    x = X.sample(rng)
    t = X.carrier.tangent_basis(x)
    assert t.shape == (3, 2)
    assert np.max(np.abs(t.T @ x)) < 1e-12
    v = rng.standard_normal(3)
    assert abs(X.carrier.project(x, v) @ x) < 1e-12


@given(seed=seeds)
def test_antisymmetry_is_exact(seed):
    rng = np.random.default_rng(seed)
    f = KForm(R3, 2, lambda x, a, b: a[0] * b[1] + x[2] * a[2] * b[0])
    x, a, b = rng.standard_normal((3, 3))
    assert f(x, a, b) == -f(x, b, a)
    g = KForm(R3, 3, lambda x, a, b, c: a[0] * b[1] * c[2])
    a, b, c = rng.standard_normal((3, 3))
    assert g(x, a, b, c) == pytest.approx(-g(x, b, a, c), abs=1e-15)


@given(seed=seeds)
def test_plot_derivative_is_linear(seed):
    rng = np.random.default_rng(seed)
    f = calc.trig_polynomial(rng, 3, 2)
    p = Plot("trig", 2, cube(2), f, R3)
    u = rng.uniform(-0.5, 0.5, 2)
    a, b = rng.standard_normal(2), rng.standard_normal(2)
    s, t = rng.uniform(-2, 2, 2)
    lhs = calc.plot_derivative(p, u, s * a + t * b)
    rhs = s * calc.plot_derivative(p, u, a) + t * calc.plot_derivative(p, u, b)
    assert np.max(np.abs(lhs - rhs)) < 1e-8


@given(seed=seeds)
def test_pullback_is_functorial_under_affine_maps(seed):
    rng = np.random.default_rng(seed)
    X = tangent_sphere()
    x0 = X.sample(rng)
    frame = SO3()
    g = calc.trig_polynomial(rng, 3, 2, amplitude=1.0)
    p = Plot("ts_plot", 2, cube(2, 3.0), lambda u: X.action(frame.exp_matrix(g(u)), x0), X.carrier)
    A, c = rng.uniform(-0.5, 0.5, (2, 2)), rng.uniform(-0.3, 0.3, 2)
    composite = Plot("p.affine", 2, cube(2), lambda w: p(A @ w + c), X.carrier)
    w = rng.uniform(-0.5, 0.5, 2)
    direct = calc.pullback(X.omega, composite).coefficients(w)
    inner = calc.pullback(X.omega, p).coefficients(A @ w + c)
    assert np.max(np.abs(direct - A.T @ inner @ A)) < 1e-7


@pytest.mark.parametrize("make", [tangent_sphere, lambda: coadjoint_orbit_so3(2.0), plane_so2, complex_pair,
                                  lambda: cotangent_group(SO3()).space], ids=["TS2", "X_2", "R2", "C2", "T*SO3"])
def test_symplectic_pullbacks_are_closed(make):
    X = make()
    rng = np.random.default_rng(11)
    for _ in range(3):
        x0 = X.sample(rng)
        g = calc.trig_polynomial(rng, X.group.dim, 3, amplitude=1.0)
        shift = calc.trig_polynomial(rng, 1, 3, amplitude=0.5)
        p = Plot("orbit_plot", 3, cube(3), lambda u: X.action(X.group.exp_matrix(g(u)), x0), X.carrier)
        if X.group.dim < 3:
            # flat carriers: add a transverse direction so the pullback is not identically zero
            t = X.carrier.tangent_basis(x0)[:, -1]
            base = p.fn
            p = Plot("plot", 3, cube(3), lambda u, base=base: base(u) + shift(u)[0] * t, X.carrier)
        d = calc.domain_exterior_derivative(calc.pullback(X.omega, p))
        for u in rng.uniform(-0.7, 0.7, (3, 3)):
            assert np.max(np.abs(d.coefficients(u))) < 1e-5

