"""Builders for concrete Hamiltonian and prequantum spaces.

Complex vectors are stored realified as ``concat(real, imag)``.  The
cotangent bundle T*G is right-trivialized: a point is ``(q, mu)`` with
``q`` a flattened group matrix and ``mu`` coalgebra coordinates, and the
canonical 1-form reads ``<mu, dq q^-1>``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import null_space

from .calculus import (EmbeddedSpace, KForm, ProductSpace, euclidean, lift_form, scale_form, sum_forms,
                       zero_form)
from .errors import GaugeChartMiss, GroupMismatch
from .lie import DirectProduct, MatrixGroup, SO3, Subgroup, right_mc_coords
from .phase_spaces import HamiltonianSpace, LevelSet, PrequantumSpace
from .report import report_from_residuals

GAUGE_CHART_MIN = 1e-3


def realify(z) -> np.ndarray:
    z = np.asarray(z, complex).ravel()
    return np.concatenate([z.real, z.imag])


def complexify(x) -> np.ndarray:
    x = np.asarray(x, float)
    k = x.size // 2
    return x[:k] + 1j * x[k:]


def unit_vector(rng: np.random.Generator, n: int = 3) -> np.ndarray:
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_frame(rng: np.random.Generator) -> np.ndarray:
    """Random rotation matrix; its columns are an oriented orthonormal frame."""
    return SO3().random_matrix(rng)


def _tangent_from_jacobian(jac: Callable[[np.ndarray], np.ndarray]):
    return lambda x: null_space(np.atleast_2d(jac(x)))


def _restrict_tangent(basis: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Subspace of span(basis) killed by the linear functionals ``rows``."""
    a = np.atleast_2d(rows) @ basis
    return basis @ null_space(a) if a.size else basis


# Elementary spaces --------------------------------------------------------------


def sphere_space(radius: float = 1.0, name: str | None = None) -> EmbeddedSpace:
    return EmbeddedSpace(name or f"{radius:g}S2", 3, lambda x: np.array([x @ x - radius**2]),
                         tangent_rule=lambda x: null_space(x[None, :]))


def coadjoint_orbit_so3(l: float) -> HamiltonianSpace:
    """X_l = l S^2 with KKS form -<x, v x w>/|x|^2 and moment x."""
    if l <= 0:
        raise ValueError("coadjoint orbit radius must be positive")
    carrier = sphere_space(l, f"{l:g}S2")

    def omega(x, v, w):
        return -float(x @ np.cross(v, w)) / float(x @ x)

    form = KForm(carrier, 2, omega, exact_d=zero_form(carrier, 3), name="kks", antisymmetrize=False)
    return HamiltonianSpace(f"X_{l:g}", carrier, SO3(), lambda g, x: np.real(g) @ x, form,
                            lambda x: np.asarray(x, float).copy(), lambda rng: l * unit_vector(rng),
                            meta={"l": l})


def tangent_sphere() -> HamiltonianSpace:
    """TS^2 in R^6 with form d<p, dr> and moment r x p."""

    def constraint(x):
        r, p = x[:3], x[3:]
        return np.array([r @ r - 1.0, r @ p])

    def jac(x):
        r, p = x[:3], x[3:]
        return np.array([np.concatenate([2 * r, np.zeros(3)]), np.concatenate([p, r])])

    carrier = EmbeddedSpace("TS2", 6, constraint, _tangent_from_jacobian(jac))

    def omega(x, v, w):
        return float(v[3:] @ w[:3] - w[3:] @ v[:3])

    def sample(rng):
        r = unit_vector(rng)
        p = rng.standard_normal(3)
        return np.concatenate([r, p - (p @ r) * r])

    def action(g, x):
        g = np.real(g)
        return np.concatenate([g @ x[:3], g @ x[3:]])

    form = KForm(carrier, 2, omega, exact_d=zero_form(carrier, 3), name="dp^dr", antisymmetrize=False)
    return HamiltonianSpace("TS2", carrier, SO3(), action, form, lambda x: np.cross(x[:3], x[3:]), sample)


def point_space(group: MatrixGroup, name: str = "{0}") -> HamiltonianSpace:
    carrier = EmbeddedSpace(name, 0)
    return HamiltonianSpace(name, carrier, group, lambda g, x: np.asarray(x, float).copy(),
                            zero_form(carrier, 2), lambda x: np.zeros(group.dim), lambda rng: np.zeros(0))


def plane_so2() -> HamiltonianSpace:
    """R^2 with dx^dy, rotated by SO2, moment |x|^2/2."""
    from .lie import SO2

    carrier = euclidean(2, "R2")
    form = KForm(carrier, 2, lambda x, v, w: float(v[0] * w[1] - v[1] * w[0]), exact_d=zero_form(carrier, 3),
                 name="dx^dy", antisymmetrize=False)
    return HamiltonianSpace("R2", carrier, SO2(), lambda g, x: np.real(g) @ x, form,
                            lambda x: np.array([0.5 * float(x @ x)]), lambda rng: rng.standard_normal(2))


def complex_pair() -> HamiltonianSpace:
    """C^2 with the Torus2 action (a, b)(z1, z2) = (a z1, conj(b) z2).

    Form sum Im(conj(v_k) w_k), moment (|z1|^2, -|z2|^2)/2.
    """
    from .lie import Torus2

    carrier = euclidean(4, "C2")

    def omega(x, v, w):
        return float(np.imag(np.conj(complexify(v)) @ complexify(w)))

    def action(g, x):
        z = complexify(x)
        return realify([g[0, 0] * z[0], np.conj(g[1, 1]) * z[1]])

    def moment(x):
        z = complexify(x)
        return np.array([0.5 * abs(z[0]) ** 2, -0.5 * abs(z[1]) ** 2])

    form = KForm(carrier, 2, omega, exact_d=zero_form(carrier, 3), name="im<dz,dz>", antisymmetrize=False)
    return HamiltonianSpace("C2", carrier, Torus2(), action, form, moment, lambda rng: rng.standard_normal(4))


# Generic operations ----------------------------------------------------------


def dual(space: HamiltonianSpace) -> HamiltonianSpace:
    """(X, -omega, -Phi) with the same action."""
    name = space.name[:-1] if space.name.endswith("-") else space.name + "-"
    return HamiltonianSpace(name, space.carrier, space.group, space.action, -space.omega,
                            lambda x: -np.asarray(space.moment(x), float), space.sample, dict(space.meta))


def restrict(space, subgroup: Subgroup):
    """The same space viewed as a subgroup-space; the moment is restricted."""
    if subgroup.parent != space.group:
        raise GroupMismatch(f"{subgroup.id} is not a subgroup of {space.group.id}")
    moment = lambda x: subgroup.restrict(space.moment(x))
    name = f"Res[{subgroup.id}]{space.name}"
    if isinstance(space, PrequantumSpace):
        return PrequantumSpace(name, space.carrier, subgroup, space.action, space.varpi, space.circle_action,
                               space.sample, moment_rule=moment, meta=dict(space.meta))
    return HamiltonianSpace(name, space.carrier, subgroup, space.action, space.omega, moment, space.sample,
                            dict(space.meta))


def hom_data(x1: HamiltonianSpace, x2: HamiltonianSpace) -> HamiltonianSpace:
    """X1^- x X2 with the diagonal action, form omega2 - omega1 and moment Phi2 - Phi1."""
    if x1.group != x2.group:
        raise GroupMismatch(f"{x1.group.id} vs {x2.group.id}")
    carrier = ProductSpace([x1.carrier, x2.carrier])
    form = sum_forms([lift_form(x2.omega, carrier, 1), lift_form(-x1.omega, carrier, 0)], carrier,
                     name="omega2-omega1")

    def action(g, x):
        a, b = carrier.split(x)
        return carrier.join(x1.action(g, a), x2.action(g, b))

    def moment(x):
        a, b = carrier.split(x)
        return np.asarray(x2.moment(b), float) - np.asarray(x1.moment(a), float)

    return HamiltonianSpace(f"Hom({x1.name},{x2.name})", carrier, x1.group, action, form, moment,
                            lambda rng: carrier.join(x1.sample(rng), x2.sample(rng)))


# Cotangent bundle of a group -------------------------------------------------------


@dataclass(eq=False)
class CotangentGroup:
    """T*G right-trivialized as (q, mu), optionally with a right H-action.

    The action of (g, h) is (q, mu) -> (g q h^-1, Ad*_g mu) and the moment
    is (mu, -(Ad*_{q^-1} mu)|h).
    """

    G: MatrixGroup
    H: Subgroup | None = None
    carrier: ProductSpace = field(init=False)
    varpi: KForm = field(init=False)
    space: HamiltonianSpace = field(init=False)

    def __post_init__(self):
        G = self.G
        self.carrier = ProductSpace([G.carrier, euclidean(G.dim, "g*")], name=f"T*{G.id}")
        zero3 = zero_form(self.carrier, 3)
        d_varpi = KForm(self.carrier, 2, self._d_varpi, exact_d=zero3, name="dvarpi_T*G", antisymmetrize=False)
        self.varpi = KForm(self.carrier, 1, self._varpi, exact_d=d_varpi, name="varpi_T*G")
        if self.H is None:
            group, action, moment = G, self._left_action, self.mu
        else:
            if self.H.parent != G:
                raise GroupMismatch(f"{self.H.id} is not a subgroup of {G.id}")
            group = DirectProduct(G, self.H)
            action, moment = self._action, self._moment
        self.space = HamiltonianSpace(f"T*{G.id}" + (f"//{self.H.id}" if self.H is not None else ""),
                                      self.carrier, group, action, d_varpi, moment, self.sample)

    def split(self, x) -> tuple[np.ndarray, np.ndarray]:
        a, b = self.carrier.split(x)
        return self.G.from_point(a), b

    def join(self, q: np.ndarray, mu) -> np.ndarray:
        return self.carrier.join(self.G.to_point(q), mu)

    def mu(self, x) -> np.ndarray:
        return self.carrier.split(x)[1].copy()

    def right_mc(self, x, v) -> np.ndarray:
        """Coordinates of dq q^-1 for a tangent vector v at x."""
        q, _ = self.split(x)
        dq, _ = self.split(v)
        return right_mc_coords(self.G, q, dq)

    def _varpi(self, x, v):
        return float(self.mu(x) @ self.right_mc(x, v))

    def _d_varpi(self, x, v, w):
        mu = self.mu(x)
        z, zp = self.right_mc(x, v), self.right_mc(x, w)
        dmu, dmup = self.carrier.split(v)[1], self.carrier.split(w)[1]
        return float(dmu @ zp - dmup @ z + mu @ self.G.bracket_coords(z, zp))

    def sample(self, rng) -> np.ndarray:
        return self.join(self.G.random_matrix(rng), rng.standard_normal(self.G.dim))

    def _left_action(self, g, x):
        q, mu = self.split(x)
        return self.join(g @ q, self.G.coadjoint_coords(g, mu))

    def _action(self, gh, x):
        g, h = self.space.group.split(gh)
        q, mu = self.split(x)
        return self.join(g @ q @ self.G.inverse(h), self.G.coadjoint_coords(g, mu))

    def psi(self, x) -> np.ndarray:
        q, mu = self.split(x)
        return -self.H.restrict(self.G.coadjoint_coords(self.G.inverse(q), mu))

    def _moment(self, x):
        return np.concatenate([self.mu(x), self.psi(x)])


def cotangent_group(G: MatrixGroup, H: Subgroup | None = None) -> CotangentGroup:
    return CotangentGroup(G, H)


# Induction --------------------------------------------------------------------


@dataclass(eq=False)
class InductionData:
    """M = X^- x T*G x Y over G x H and N = X^- x Y over H.

    Either symplectic (``kind == "symplectic"``, forms omega) or prequantum
    (``kind == "prequantum"``, 1-forms varpi on the un-quotiented products).
    ``level_N_param`` maps parameters in R^param_dim smoothly onto psi_N = 0.
    """

    X: object
    Y: object
    tg: CotangentGroup
    M: object
    N: object
    kind: str
    level_N_param: Callable[[np.ndarray], np.ndarray] | None = None
    param_dim: int = 0

    def level_N_sample(self, rng: np.random.Generator) -> np.ndarray:
        if self.level_N_param is None:
            raise ValueError("no closed-form level parametrization was supplied")
        return self.level_N_param(rng.uniform(-np.pi, np.pi, self.param_dim))

    @property
    def G(self) -> MatrixGroup:
        return self.tg.G

    @property
    def H(self) -> Subgroup:
        return self.tg.H

    def split_M(self, m):
        x, qp, mup, y = self.M.carrier.split(m)
        return x, self.G.from_point(qp), mup, y

    def join_M(self, x, q, mu, y):
        return self.M.carrier.join(x, self.G.to_point(q), mu, y)

    def split_N(self, n):
        return self.N.carrier.split(n)

    def join_N(self, x, y):
        return self.N.carrier.join(x, y)

    def phi_M(self, m) -> np.ndarray:
        return self.M.moment(m)[: self.G.dim]

    def psi_M(self, m) -> np.ndarray:
        return self.M.moment(m)[self.G.dim:]

    def psi_N(self, n) -> np.ndarray:
        return self.N.moment(n)

    def level_N(self) -> LevelSet:
        return LevelSet(self.N, self.level_N_sample, name=f"level[{self.N.name}]")

    def level_M(self) -> LevelSet:
        def sample(rng):
            n = self.level_N_sample(rng)
            gh = self.M.group.random_matrix(rng)
            return self.M.action(gh, self.r_prime(n))

        return LevelSet(self.M, sample, name=f"level[{self.M.name}]")

    def r(self, m) -> np.ndarray:
        """(x, q, mu, y) -> (q^-1 x, y)."""
        x, q, _, y = self.split_M(m)
        return self.join_N(self.X.action(self.G.inverse(q), x), y)

    def r_prime(self, n) -> np.ndarray:
        """(x, y) -> (x, e, Phi(x), y)."""
        x, y = self.split_N(n)
        return self.join_M(x, self.G.identity(), self.X.moment(x), y)


def _induction_moments(X, Y, tg: CotangentGroup, carrier: ProductSpace):
    G, H = tg.G, tg.H

    def split(m):
        x, qp, mup, y = carrier.split(m)
        return x, G.from_point(qp), mup, y

    def moment_M(m):
        x, q, mu, y = split(m)
        phi = mu - np.asarray(X.moment(x), float)
        psi = np.asarray(Y.moment(y), float) - H.restrict(G.coadjoint_coords(G.inverse(q), mu))
        return np.concatenate([phi, psi])

    def action_M(gh, m):
        g, h = DirectProduct(G, H).split(gh)
        x, q, mu, y = split(m)
        return carrier.join(X.action(g, x), G.to_point(g @ q @ G.inverse(h)), G.coadjoint_coords(g, mu),
                            Y.action(h, y))

    return moment_M, action_M


def induction_data(X: HamiltonianSpace, Y: HamiltonianSpace, level_N_param: Callable | None = None,
                   param_dim: int = 0) -> InductionData:
    """Symplectic induction data for X over G and Y over a subgroup H of G."""
    if not isinstance(Y.group, Subgroup) or Y.group.parent != X.group:
        raise GroupMismatch("Y must be a space over a subgroup of X's group")
    G, H = X.group, Y.group
    tg = cotangent_group(G, H)
    carrier = ProductSpace([X.carrier, G.carrier, euclidean(G.dim, "g*"), Y.carrier],
                           name=f"{X.name}- x T*{G.id} x {Y.name}")
    d_varpi_M = KForm(carrier, 2, lambda m, v, w: tg.varpi.exact_d(_tg_part(carrier, m), _tg_part(carrier, v),
                                                                  _tg_part(carrier, w)),
                      exact_d=zero_form(carrier, 3), name="dvarpi", antisymmetrize=False)
    omega_M = sum_forms([lift_form(Y.omega, carrier, 3), d_varpi_M, lift_form(-X.omega, carrier, 0)], carrier,
                        name="omega_M")
    moment_M, action_M = _induction_moments(X, Y, tg, carrier)

    def sample_M(rng):
        return carrier.join(X.sample(rng), G.to_point(G.random_matrix(rng)), rng.standard_normal(G.dim),
                            Y.sample(rng))

    M = HamiltonianSpace(carrier.name, carrier, DirectProduct(G, H), action_M, omega_M, moment_M, sample_M)

    ncar = ProductSpace([X.carrier, Y.carrier], name=f"{X.name}- x {Y.name}")
    omega_N = sum_forms([lift_form(Y.omega, ncar, 1), lift_form(-X.omega, ncar, 0)], ncar, name="omega_N")

    def action_N(h, n):
        x, y = ncar.split(n)
        return ncar.join(X.action(h, x), Y.action(h, y))

    def moment_N(n):
        x, y = ncar.split(n)
        return np.asarray(Y.moment(y), float) - H.restrict(X.moment(x))

    N = HamiltonianSpace(ncar.name, ncar, H, action_N, omega_N, moment_N,
                         lambda rng: ncar.join(X.sample(rng), Y.sample(rng)))
    return InductionData(X, Y, tg, M, N, "symplectic", level_N_param, param_dim)


def _tg_part(carrier: ProductSpace, x):
    s = carrier.slices()
    return np.concatenate([x[s[1]], x[s[2]]])


def prequantum_induction_data(X: PrequantumSpace, Y: PrequantumSpace, level_N_param: Callable | None = None,
                              param_dim: int = 0) -> InductionData:
    """Un-quotiented prequantum analogs: varpi_M = varpi_Y + varpi_T*G - varpi_X and varpi_N = varpi_Y - varpi_X."""
    if not isinstance(Y.group, Subgroup) or Y.group.parent != X.group:
        raise GroupMismatch("Y must be a space over a subgroup of X's group")
    G, H = X.group, Y.group
    tg = cotangent_group(G, H)
    carrier = ProductSpace([X.carrier, G.carrier, euclidean(G.dim, "g*"), Y.carrier],
                           name=f"{X.name}- x T*{G.id} x {Y.name}")
    d_varpi_tg = KForm(carrier, 2, lambda m, v, w: tg.varpi.exact_d(_tg_part(carrier, m), _tg_part(carrier, v),
                                                                    _tg_part(carrier, w)),
                       exact_d=zero_form(carrier, 3), name="dvarpi_T*G", antisymmetrize=False)
    varpi_tg = KForm(carrier, 1, lambda m, v: tg.varpi(_tg_part(carrier, m), _tg_part(carrier, v)),
                     exact_d=d_varpi_tg, name="varpi_T*G")
    varpi_M = sum_forms([lift_form(Y.varpi, carrier, 3), varpi_tg, lift_form(-X.varpi, carrier, 0)], carrier,
                        name="varpi_M")
    moment_M, action_M = _induction_moments(X, Y, tg, carrier)

    def circle_M(theta, m):
        x, qp, mup, y = carrier.split(m)
        return carrier.join(x, qp, mup, Y.circle_action(theta, y))

    def sample_M(rng):
        return carrier.join(X.sample(rng), G.to_point(G.random_matrix(rng)), rng.standard_normal(G.dim),
                            Y.sample(rng))

    M = PrequantumSpace(carrier.name, carrier, DirectProduct(G, H), action_M, varpi_M, circle_M, sample_M,
                        moment_rule=moment_M)
    ncar = ProductSpace([X.carrier, Y.carrier], name=f"{X.name}- x {Y.name}")
    varpi_N = sum_forms([lift_form(Y.varpi, ncar, 1), lift_form(-X.varpi, ncar, 0)], ncar, name="varpi_N")

    def action_N(h, n):
        x, y = ncar.split(n)
        return ncar.join(X.action(h, x), Y.action(h, y))

    def moment_N(n):
        x, y = ncar.split(n)
        return np.asarray(Y.moment(y), float) - H.restrict(X.moment(x))

    def circle_N(theta, n):
        x, y = ncar.split(n)
        return ncar.join(x, Y.circle_action(theta, y))

    N = PrequantumSpace(ncar.name, ncar, H, action_N, varpi_N, circle_N,
                        lambda rng: ncar.join(X.sample(rng), Y.sample(rng)), moment_rule=moment_N)
    return InductionData(X, Y, tg, M, N, "prequantum", level_N_param, param_dim)


# Prequantum spaces -----------------------------------------------------------


def _sym_multi_indices(l: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations_with_replacement(range(3), l))


def _sym_isometry(l: int) -> np.ndarray:
    """Columns: orthonormal symmetric tensors in (C^3)^{(x)l}, one per monomial."""
    idx = _sym_multi_indices(l)
    v = np.zeros((3**l, len(idx)))
    for c, a in enumerate(idx):
        perms = set(itertools.permutations(a))
        for p in perms:
            v[np.ravel_multi_index(p, (3,) * l), c] = 1.0
        v[:, c] /= math.sqrt(len(perms))
    return v


class SymPower:
    """Coordinates on Sym^l(C^3) with |xi^l| = |xi|^l."""

    def __init__(self, l: int):
        if l < 1:
            raise ValueError("fusion power must be a positive integer")
        self.l = l
        self.indices = _sym_multi_indices(l)
        self.dim = len(self.indices)
        self.V = _sym_isometry(l)
        self.weights = np.array([math.sqrt(math.factorial(l) / np.prod([math.factorial(a.count(i)) for i in range(3)]))
                                 for a in self.indices])
        self.designated = self.indices.index((2,) * l)

    def power(self, xi) -> np.ndarray:
        xi = np.asarray(xi, complex)
        return self.weights * np.array([np.prod(xi[list(a)]) for a in self.indices])

    def tensor(self, w) -> np.ndarray:
        return (self.V @ np.asarray(w, complex)).reshape((3,) * self.l)

    def rep(self, g) -> np.ndarray:
        """S(g) = V^H g^{(x)l} V."""
        big = np.array([[1.0]], dtype=complex)
        for _ in range(self.l):
            big = np.kron(big, g)
        return self.V.T @ big @ self.V

    def rep_derivative(self, a) -> np.ndarray:
        """dS(A) = V^H (sum of A in each tensor slot) V."""
        eye = np.eye(3)
        total = np.zeros((3**self.l, 3**self.l), dtype=complex)
        for k in range(self.l):
            term = np.array([[1.0]], dtype=complex)
            for j in range(self.l):
                term = np.kron(term, a if j == k else eye)
            total += term
        return self.V.T @ total @ self.V


def _hermitian_varpi(carrier: EmbeddedSpace, name: str) -> KForm:
    """Im(conj(x) . dx) on realified complex vectors, with d = 2 Im(conj(v) . w)."""
    d = KForm(carrier, 2, lambda x, v, w: 2.0 * float(np.imag(np.conj(complexify(v)) @ complexify(w))),
              exact_d=zero_form(carrier, 3), name="d" + name, antisymmetrize=False)
    return KForm(carrier, 1, lambda x, v: float(np.imag(np.conj(complexify(x)) @ complexify(v))), exact_d=d,
                 name=name)


def xi_from_frame(frame: np.ndarray) -> np.ndarray:
    """(u1 - i u2)/sqrt2 from the columns of a rotation matrix."""
    return (frame[:, 0] - 1j * frame[:, 1]) / math.sqrt(2)


def frame_from_xi(xi) -> np.ndarray:
    xi = np.asarray(xi, complex)
    u1 = math.sqrt(2) * xi.real
    u2 = -math.sqrt(2) * xi.imag
    return np.stack([u1, u2, np.cross(u1, u2)], axis=1)


def fusion_power(l: int) -> PrequantumSpace:
    """Image of the prequantized sphere under xi -> xi^l, with varpi pushed from l*varpi_1.

    ``fusion_power(1)`` is the prequantized sphere itself; ``l = 2`` is the
    lens space.  The moment is the closed form Im(conj(w) . dS(A_k) w), which
    equals l * u3.
    """
    sym = SymPower(l)
    G = SO3()
    gens = [sym.rep_derivative(b) for b in G.basis]
    carrier = EmbeddedSpace(f"X~_{l}", 2 * sym.dim, None, None)

    def constraint(x):
        w = complexify(x)
        t = sym.tensor(w)
        flat = t.reshape(3, -1)
        sv = np.linalg.svd(flat, compute_uv=False)
        if l == 1:
            iso = np.sum(w**2)
        else:
            iso = np.linalg.norm(np.einsum("ii...->...", t))
        return np.array([np.vdot(w, w).real - 1.0, sv[1] if sv.size > 1 else 0.0, abs(iso)])

    def tangent(x):
        w = complexify(x)
        return np.stack([realify(a @ w) for a in gens], axis=1)

    carrier.constraint = constraint
    carrier.tangent_rule = tangent

    def action(g, x):
        return realify(sym.rep(np.asarray(g)) @ complexify(x))

    def circle(theta, x):
        return realify(np.exp(1j * theta) * complexify(x))

    def moment(x):
        w = complexify(x)
        return np.array([float(np.imag(np.conj(w) @ (a @ w))) for a in gens])

    def sample(rng):
        return realify(sym.power(xi_from_frame(random_frame(rng))))

    space = PrequantumSpace(carrier.name, carrier, G, action, _hermitian_varpi(carrier, f"varpi_{l}"), circle,
                            sample, moment_rule=moment,
                            meta={"l": l, "sym": sym, "designated": sym.designated})
    return space


def prequantized_sphere() -> PrequantumSpace:
    return fusion_power(1)


def point_prequantum(group: MatrixGroup, name: str = "{0~}") -> PrequantumSpace:
    """The circle with 1-form x dy - y dx, trivial group action, zero moment."""
    carrier = EmbeddedSpace(name, 2, lambda x: np.array([x @ x - 1.0]),
                            tangent_rule=lambda x: np.array([[-x[1]], [x[0]]]))
    d = KForm(carrier, 2, lambda x, v, w: 2.0 * float(v[0] * w[1] - v[1] * w[0]), exact_d=zero_form(carrier, 3),
              name="d(dtheta)", antisymmetrize=False)
    varpi = KForm(carrier, 1, lambda x, v: float(x[0] * v[1] - x[1] * v[0]), exact_d=d, name="dtheta")

    def circle(theta, x):
        c, s = math.cos(theta), math.sin(theta)
        return np.array([c * x[0] - s * x[1], s * x[0] + c * x[1]])

    def sample(rng):
        t = rng.uniform(-math.pi, math.pi)
        return np.array([math.cos(t), math.sin(t)])

    return PrequantumSpace(name, carrier, group, lambda g, x: np.asarray(x, float).copy(), varpi, circle,
                           sample, moment_rule=lambda x: np.zeros(group.dim))


def prequantized_tangent_sphere() -> PrequantumSpace:
    """TS^2 x circle with 1-form <p, dr> + dtheta."""
    ts = tangent_sphere()
    circ = point_prequantum(SO3(), "T")
    carrier = ProductSpace([ts.carrier, circ.carrier], name="TS2~")
    d = KForm(carrier, 2, lambda x, v, w: ts.omega(x[:6], v[:6], w[:6]) + circ.varpi.exact_d(x[6:], v[6:], w[6:]),
              exact_d=zero_form(carrier, 3), name="d(pdr+dtheta)", antisymmetrize=False)
    varpi = KForm(carrier, 1, lambda x, v: float(x[3:6] @ v[:3]) + circ.varpi(x[6:], v[6:]), exact_d=d,
                  name="pdr+dtheta")

    def action(g, x):
        return carrier.join(ts.action(g, x[:6]), x[6:])

    def circle(theta, x):
        return carrier.join(x[:6], circ.circle_action(theta, x[6:]))

    return PrequantumSpace("TS2~", carrier, SO3(), action, varpi, circle,
                           lambda rng: carrier.join(ts.sample(rng), circ.sample(rng)),
                           moment_rule=lambda x: np.cross(x[:3], x[3:6]))


@dataclass(frozen=True)
class GaugeChart:
    """Fix the antidiagonal circle by making one complex coordinate of the first factor real positive."""

    index: int
    ncomplex: int

    def value(self, x1) -> complex:
        return complex(x1[self.index] + 1j * x1[self.index + self.ncomplex])


def prequantum_product(s1: PrequantumSpace, s2: PrequantumSpace, sign: int = -1,
                       charts: Sequence[int] | None = None) -> PrequantumSpace:
    """s1^- boxtimes s2 (sign -1) or s1 boxtimes s2 (sign +1), as gauge-fixed pairs.

    The quotiented circle acts by (z x1, z^(-sign) x2), which leaves
    varpi2 + sign*varpi1 basic; representatives are chosen so the chart
    coordinate of the first factor is real positive.  ``charts`` lists complex coordinate indices of
    the first factor, tried in order.
    """
    if s1.group != s2.group:
        raise GroupMismatch(f"{s1.group.id} vs {s2.group.id}")
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    nc = s1.carrier.ambient_dim // 2
    if charts is None:
        charts = [s1.meta.get("designated", 0)] + [i for i in range(nc) if i != s1.meta.get("designated", 0)]
    chart_list = [GaugeChart(int(i), nc) for i in charts]
    base = ProductSpace([s1.carrier, s2.carrier], name=f"{s1.name}{'-' if sign < 0 else ''}[x]{s2.name}")

    def gauge_fix(x, chart: GaugeChart | None = None) -> np.ndarray:
        a, b = base.split(x)
        for ch in ([chart] if chart is not None else chart_list):
            c = ch.value(a)
            if abs(c) >= GAUGE_CHART_MIN:
                theta = -math.atan2(c.imag, c.real)
                return base.join(s1.circle_action(theta, a), s2.circle_action(-sign * theta, b))
        raise GaugeChartMiss(f"no gauge chart among {list(charts)} is usable at this point")

    primary = chart_list[0]

    def constraint(x):
        a, _ = base.split(x)
        return np.concatenate([base.residual_vector(x), [primary.value(a).imag]])

    def tangent(x):
        t = base.tangent_basis(x)
        row = np.zeros(base.ambient_dim)
        row[primary.index + nc] = 1.0
        return _restrict_tangent(t, row)

    carrier = EmbeddedSpace(base.name, base.ambient_dim, constraint, tangent)
    carrier.gauge_fix = gauge_fix
    carrier.base = base
    varpi = sum_forms([lift_form(s2.varpi, base, 1), lift_form(scale_form(s1.varpi, float(sign)), base, 0)],
                      carrier, name="varpi2" + ("-" if sign < 0 else "+") + "varpi1")

    def action(g, x):
        a, b = base.split(x)
        return gauge_fix(base.join(s1.action(g, a), s2.action(g, b)))

    def circle(theta, x):
        a, b = base.split(x)
        return base.join(a, s2.circle_action(theta, b))

    def moment(x):
        a, b = base.split(x)
        return np.asarray(s2.moment(b), float) + sign * np.asarray(s1.moment(a), float)

    def sample(rng):
        for _ in range(100):
            try:
                return gauge_fix(base.join(s1.sample(rng), s2.sample(rng)), primary)
            except GaugeChartMiss:
                continue
        raise GaugeChartMiss("could not sample inside the primary chart")

    return PrequantumSpace(carrier.name, carrier, s1.group, action, varpi, circle, sample, moment_rule=moment,
                           meta={"gauge_fix": gauge_fix, "base": base, "sign": sign, "charts": list(charts)})


def symplectize(s: PrequantumSpace) -> HamiltonianSpace:
    """R x X~ with omega = d(e^s varpi) and moment e^s Phi."""
    if s.varpi.exact_d is None:
        raise ValueError("symplectization needs d(varpi)")
    carrier = ProductSpace([euclidean(1, "R"), s.carrier], name=f"R x {s.name}")

    def omega(x, v, w):
        es = math.exp(x[0])
        p, a, b = x[1:], v[1:], w[1:]
        return es * (v[0] * s.varpi(p, b) - w[0] * s.varpi(p, a)) + es * s.varpi.exact_d(p, a, b)

    form = KForm(carrier, 2, omega, exact_d=zero_form(carrier, 3), name="d(e^s varpi)", antisymmetrize=False)

    def action(g, x):
        return carrier.join(x[:1], s.action(g, x[1:]))

    def moment(x):
        return math.exp(x[0]) * np.asarray(s.moment(x[1:]), float)

    return HamiltonianSpace(f"Symp({s.name})", carrier, s.group, action, form, moment,
                            lambda rng: carrier.join([rng.uniform(-1, 1)], s.sample(rng)))


def level_point_spherical(l: float, frame: np.ndarray) -> np.ndarray:
    """(l u, r, l s) on the zero level of X_l^- x TS^2, with frame columns (r, s, u)."""
    r, s, u = frame[:, 0], frame[:, 1], frame[:, 2]
    return np.concatenate([l * u, r, l * s])


def check_power_fibers(l: int, sampler, tol: float = 1e-12, separation: float = 1e-3):
    """xi^l = (zeta xi)^l exactly when zeta^l = 1, so X~_1 -> X~_l is an l-fold cover."""
    sym = SymPower(l)
    rng = sampler.rng("power_fibers", str(l))
    res, near_miss = [], 0
    for _ in range(sampler.samples):
        xi = xi_from_frame(random_frame(rng))
        w = sym.power(xi)
        for k in range(l):
            res.append(float(np.max(np.abs(sym.power(np.exp(2j * math.pi * k / l) * xi) - w))))
        # a phase at least 0.1 rad away from every l-th root of unity
        t = rng.uniform(0.1, 2 * math.pi / l - 0.1) + 2 * math.pi * rng.integers(l) / l if l > 1 else \
            rng.uniform(0.1, 2 * math.pi - 0.1)
        gap = float(np.max(np.abs(sym.power(np.exp(1j * t) * xi) - w)))
        if gap <= separation:
            near_miss += 1
            res.append(1.0)
    return report_from_residuals(f"power_fibers[l={l}]", res, tol, seed=sampler.seed,
                                 details={"non_root_collisions": near_miss})
