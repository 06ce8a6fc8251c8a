"""Hamiltonian and prequantum G-spaces, and the axiom checks run on them.

Conventions: Z_X(x) = d/dt exp(tZ)(x) at t = 0 and i_{Z_X} omega = -d<Phi, Z>.
Actions take a group *matrix* and an ambient point; moments return
coalgebra coordinates.  Moment maps and actions are written by explicit
formulas that extend smoothly off the carrier, so ambient line derivatives
along tangent vectors are legitimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import null_space, subspace_angles

from .calculus import FD_STEP, EmbeddedSpace, KForm, Plot, cube, euclidean, plot_derivative
from .errors import LevelViolation, RankAmbiguity
from .lie import MatrixGroup
from .report import CheckReport, Sampler, report_from_residuals

AXIOM_TOL = 1e-6
INVARIANCE_TOL = 1e-7
LEVEL_TOL = 1e-9
RANK_CUTOFF = 1e-8
RANK_BAND = (1e-10, 1e-6)


@dataclass(eq=False)
class HamiltonianSpace:
    """(X, omega, Phi) with a G-action.

    ``sample(rng)`` draws carrier points; ``action(g, x)`` takes a group
    matrix.  ``omega`` may be degenerate (presymplectic views of prequantum
    spaces use the same record).
    """

    name: str
    carrier: EmbeddedSpace
    group: MatrixGroup
    action: Callable[[np.ndarray, np.ndarray], np.ndarray]
    omega: KForm
    moment: Callable[[np.ndarray], np.ndarray]
    sample: Callable[[np.random.Generator], np.ndarray]
    meta: dict = field(default_factory=dict)

    def __repr__(self):
        return f"HamiltonianSpace({self.name!r}, group={self.group.id})"


@dataclass(eq=False)
class PrequantumSpace:
    """(X~, varpi) with a G-action commuting with a free circle action."""

    name: str
    carrier: EmbeddedSpace
    group: MatrixGroup
    action: Callable[[np.ndarray, np.ndarray], np.ndarray]
    varpi: KForm
    circle_action: Callable[[float, np.ndarray], np.ndarray]
    sample: Callable[[np.random.Generator], np.ndarray]
    moment_rule: Callable[[np.ndarray], np.ndarray] | None = None
    meta: dict = field(default_factory=dict)

    def __repr__(self):
        return f"PrequantumSpace({self.name!r}, group={self.group.id})"

    def moment(self, x) -> np.ndarray:
        """Closed-form moment if one was supplied, else varpi(Z_X) numerically."""
        if self.moment_rule is not None:
            return np.asarray(self.moment_rule(x), float)
        return prequantum_moment(self, x)

    def presymplectic(self) -> HamiltonianSpace:
        """(X~, d varpi, Phi) as a record the axiom checks accept."""
        if self.varpi.exact_d is None:
            raise ValueError(f"{self.name}: varpi has no exact_d wired")
        return HamiltonianSpace(self.name + ":dvarpi", self.carrier, self.group, self.action,
                                self.varpi.exact_d, self.moment, self.sample, dict(self.meta))


GSpace = HamiltonianSpace | PrequantumSpace


def _line_derivative(fn, x, v, fd_step: float = FD_STEP) -> np.ndarray:
    x = np.asarray(x, float)
    v = np.asarray(v, float)
    plot = Plot("line", 1, cube(1), lambda u: np.atleast_1d(fn(x + u[0] * v)), euclidean(x.size))
    return plot_derivative(plot, [0.0], [1.0], fd_step)


def infinitesimal_action(space: GSpace, z, x, fd_step: float = FD_STEP) -> np.ndarray:
    """Z_X(x) = d/dt action(exp(tZ), x) at t = 0."""
    z = np.asarray(z, float)
    x = np.asarray(x, float)
    g = space.group
    plot = Plot("orbit_curve", 1, cube(1), lambda u: space.action(g.exp_matrix(u[0] * z), x), space.carrier)
    return plot_derivative(plot, [0.0], [1.0], fd_step)


def orbit_tangents(space: GSpace, x, fd_step: float = FD_STEP) -> np.ndarray:
    """Columns Z_X(x) for the algebra basis."""
    cols = [infinitesimal_action(space, e, x, fd_step) for e in np.eye(space.group.dim)]
    return np.stack(cols, axis=1) if cols else np.zeros((space.carrier.ambient_dim, 0))


def pushforward(space: GSpace, g: np.ndarray, x, v, fd_step: float = FD_STEP) -> np.ndarray:
    return _line_derivative(lambda y: space.action(g, y), x, v, fd_step)


def moment_derivative(space: GSpace, x, v, fd_step: float = FD_STEP) -> np.ndarray:
    return _line_derivative(space.moment, x, v, fd_step)


def unit_tangent(space: EmbeddedSpace, x, rng: np.random.Generator) -> np.ndarray:
    v = space.random_tangent(x, rng)
    n = float(np.linalg.norm(v))
    return v / n if n > 0 else v


def check_moment_condition(space: HamiltonianSpace, sampler: Sampler, tol: float = AXIOM_TOL,
                           fd_step: float = FD_STEP) -> CheckReport:
    """omega(Z_X(x), v) + D<Phi, Z>(x) v over sampled x, unit tangent v and basis Z."""
    rng = sampler.rng("moment_condition", space.name)
    residuals, worst = [], None
    for _ in range(sampler.samples):
        x = space.sample(rng)
        v = unit_tangent(space.carrier, x, rng)
        zx = orbit_tangents(space, x, fd_step)
        dphi = moment_derivative(space, x, v, fd_step)
        for i in range(space.group.dim):
            r = abs(space.omega(x, zx[:, i], v) + dphi[i])
            residuals.append(r)
            if worst is None or r > worst["residual"]:
                worst = {"x": x, "v": v, "basis_index": i, "residual": r,
                         "omega_term": space.omega(x, zx[:, i], v)}
    return report_from_residuals(f"moment_condition[{space.name}]", residuals, tol,
                                 witness=worst, seed=sampler.seed)


def check_equivariance(space: GSpace, sampler: Sampler, tol: float = AXIOM_TOL) -> CheckReport:
    """Phi(g x) - Ad*_g Phi(x) over sampled (g, x)."""
    rng = sampler.rng("equivariance", space.name)
    residuals, worst = [], None
    G = space.group
    for _ in range(sampler.samples):
        x = space.sample(rng)
        g = G.random_matrix(rng)
        r = float(np.max(np.abs(space.moment(space.action(g, x)) - G.coadjoint_coords(g, space.moment(x))),
                         initial=0.0))
        residuals.append(r)
        if worst is None or r > worst["residual"]:
            worst = {"x": x, "g": G.to_point(g), "residual": r}
    return report_from_residuals(f"equivariance[{space.name}]", residuals, tol, witness=worst,
                                 seed=sampler.seed)


def check_action_law(space: GSpace, sampler: Sampler, tol: float = 1e-9) -> CheckReport:
    """action(e, x) = x and action(gh, x) = action(g, action(h, x))."""
    rng = sampler.rng("action_law", space.name)
    G = space.group
    res = []
    for _ in range(sampler.samples):
        x = space.sample(rng)
        g, h = G.random_matrix(rng), G.random_matrix(rng)
        res.append(float(np.max(np.abs(space.action(G.identity(), x) - x))))
        res.append(float(np.max(np.abs(space.action(g @ h, x) - space.action(g, space.action(h, x))))))
    return report_from_residuals(f"action_law[{space.name}]", res, tol, seed=sampler.seed)


def check_invariance(space: GSpace, sampler: Sampler, tol: float = INVARIANCE_TOL,
                     fd_step: float = FD_STEP) -> CheckReport:
    """g^* form - form at sampled points, for omega (Hamiltonian) or varpi (prequantum)."""
    form = space.omega if isinstance(space, HamiltonianSpace) else space.varpi
    rng = sampler.rng("invariance", space.name)
    G = space.group
    residuals, worst = [], None
    for _ in range(sampler.samples):
        x = space.sample(rng)
        g = G.random_matrix(rng)
        vs = [unit_tangent(space.carrier, x, rng) for _ in range(form.arity)]
        gx = space.action(g, x)
        pushed = [pushforward(space, g, x, v, fd_step) for v in vs]
        r = abs(form(gx, *pushed) - form(x, *vs))
        residuals.append(r)
        if worst is None or r > worst["residual"]:
            worst = {"x": x, "g": G.to_point(g), "residual": r}
    return report_from_residuals(f"invariance[{space.name}]", residuals, tol, witness=worst,
                                 seed=sampler.seed)


def prequantum_moment(space: PrequantumSpace, x, fd_step: float = FD_STEP) -> np.ndarray:
    """<Phi(x), Z> = varpi(Z_X(x)) over the algebra basis."""
    zx = orbit_tangents(space, x, fd_step)
    return np.array([space.varpi(x, zx[:, i]) for i in range(space.group.dim)])


def reeb_field(space: PrequantumSpace, x, fd_step: float = FD_STEP) -> np.ndarray:
    plot = Plot("circle_orbit", 1, cube(1), lambda u: space.circle_action(u[0], x), space.carrier)
    return plot_derivative(plot, [0.0], [1.0], fd_step)


def check_reeb_normalization(space: PrequantumSpace, sampler: Sampler, tol: float = 1e-8,
                             fd_step: float = FD_STEP) -> CheckReport:
    """varpi(Reeb) = 1 and the circle action preserves varpi."""
    rng = sampler.rng("reeb", space.name)
    res = []
    for _ in range(sampler.samples):
        x = space.sample(rng)
        res.append(abs(space.varpi(x, reeb_field(space, x, fd_step)) - 1.0))
        theta = rng.uniform(-np.pi, np.pi)
        v = unit_tangent(space.carrier, x, rng)
        pushed = _line_derivative(lambda y: space.circle_action(theta, y), x, v, fd_step)
        res.append(abs(space.varpi(space.circle_action(theta, x), pushed) - space.varpi(x, v)))
    return report_from_residuals(f"reeb_normalization[{space.name}]", res, tol, seed=sampler.seed)


def check_prequantum_moment_formula(space: PrequantumSpace, sampler: Sampler, tol: float = 1e-8,
                                    fd_step: float = FD_STEP) -> CheckReport:
    """Closed-form moment against varpi(Z_X) computed numerically."""
    rng = sampler.rng("prequantum_moment", space.name)
    res = []
    for _ in range(sampler.samples):
        x = space.sample(rng)
        res.append(float(np.max(np.abs(space.moment(x) - prequantum_moment(space, x, fd_step)), initial=0.0)))
    return report_from_residuals(f"prequantum_moment[{space.name}]", res, tol, seed=sampler.seed)


def axiom_gate(space: GSpace, sampler: Sampler, tol: float = AXIOM_TOL) -> list[CheckReport]:
    """Moment condition, equivariance and form invariance in one call."""
    ham = space.presymplectic() if isinstance(space, PrequantumSpace) else space
    return [check_moment_condition(ham, sampler, tol), check_equivariance(space, sampler, tol),
            check_invariance(space, sampler)]


class LevelSet:
    """Zero set of selected moment components inside a G-space.

    ``selector`` lists moment coordinates that must vanish (all by default).
    ``sample`` draws points on the level from a closed-form parametrization.
    """

    def __init__(self, parent: GSpace, sample: Callable[[np.random.Generator], np.ndarray],
                 selector: Sequence[int] | None = None, tol: float = LEVEL_TOL, name: str | None = None):
        self.parent = parent
        self.selector = None if selector is None else np.asarray(selector, int)
        self.tol = tol
        self._sample = sample
        self.name = name or f"level[{parent.name}]"
        self.carrier = EmbeddedSpace(self.name, parent.carrier.ambient_dim, self._constraint,
                                     parent=parent.carrier)

    def selected_moment(self, x) -> np.ndarray:
        m = np.asarray(self.parent.moment(x), float)
        return m if self.selector is None else m[self.selector]

    def _constraint(self, x):
        return np.concatenate([self.parent.carrier.residual_vector(x), self.selected_moment(x)])

    def residual(self, x) -> float:
        return float(np.max(np.abs(self.selected_moment(x)), initial=0.0))

    def contains(self, x) -> bool:
        return self.residual(x) < self.tol and self.parent.carrier.residual(x) < max(self.tol, 1e-9)

    def require(self, x) -> np.ndarray:
        if self.residual(x) >= self.tol:
            raise LevelViolation(f"{self.name}: |moment| = {self.residual(x):.3e}")
        return x

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return self.require(self._sample(rng))


def _tangent_coords_omega(space: HamiltonianSpace, x, basis: np.ndarray) -> np.ndarray:
    k = basis.shape[1]
    w = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            w[i, j] = space.omega(x, basis[:, i], basis[:, j])
            w[j, i] = -w[i, j]
    return w


def _numeric_rank(s: np.ndarray, what: str) -> int:
    if s.size == 0 or s[0] == 0:
        return 0
    rel = s / s[0]
    if np.any((rel > RANK_BAND[0]) & (rel < RANK_BAND[1])):
        raise RankAmbiguity(f"{what}: singular values {s} straddle the cutoff band")
    return int(np.sum(rel > RANK_CUTOFF))


def cardinal_checks(space: HamiltonianSpace, x, tol: float = 1e-6, level_tol: float = LEVEL_TOL,
                    fd_step: float = FD_STEP) -> CheckReport:
    """ker DPhi(x) = (orbit tangent)^omega and rank DPhi(x) = dim G - dim g_x at a zero-level point."""
    x = np.asarray(x, float)
    lvl = float(np.max(np.abs(space.moment(x)), initial=0.0))
    if lvl >= level_tol:
        raise LevelViolation(f"{space.name}: point is off the zero level (|Phi| = {lvl:.2e})")
    t = space.carrier.tangent_basis(x)
    k = t.shape[1]
    dphi = np.stack([moment_derivative(space, x, t[:, j], fd_step) for j in range(k)], axis=1) \
        if k else np.zeros((space.group.dim, 0))
    s_dphi = np.linalg.svd(dphi, compute_uv=False) if dphi.size else np.zeros(0)
    rank = _numeric_rank(s_dphi, "DPhi")

    zx = orbit_tangents(space, x, fd_step)
    s_orb = np.linalg.svd(zx, compute_uv=False) if zx.size else np.zeros(0)
    orbit_rank = _numeric_rank(s_orb, "orbit map")
    stab = space.group.dim - orbit_rank

    kernel = null_space(dphi, rcond=RANK_CUTOFF) if dphi.size else np.eye(k)
    w = _tangent_coords_omega(space, x, t)
    orbit_coords = t.T @ zx
    orth = null_space(orbit_coords.T @ w, rcond=RANK_CUTOFF) if orbit_coords.size else np.eye(k)
    if kernel.shape[1] != orth.shape[1]:
        distance = 1.0
    elif kernel.shape[1] == 0:
        distance = 0.0
    else:
        distance = float(np.sin(np.max(subspace_angles(kernel, orth))))
    rank_ok = rank == space.group.dim - stab
    rep = report_from_residuals(f"cardinal[{space.name}]", [distance if rank_ok else max(distance, 1.0)], tol,
                                details={"rank_dphi": rank, "stabilizer_dim": stab, "group_dim": space.group.dim,
                                         "kernel_dim": int(kernel.shape[1]), "omega_orth_dim": int(orth.shape[1]),
                                         "subspace_distance": distance, "rank_matches": rank_ok})
    rep.witness = {"x": x}
    return rep


def check_isotropic_orbit(space: GSpace, sample: Callable[[np.random.Generator], np.ndarray], sampler: Sampler,
                          tol: float = AXIOM_TOL, lagrangian: bool = True, fd_step: float = FD_STEP) -> CheckReport:
    """The form vanishes on orbit tangents at sampled points; optionally the orbit has half dimension.

    For a Hamiltonian space this is omega(Z_X, W_X) = 0 and, with
    ``lagrangian``, dim orbit = dim X / 2.  For a prequantum space it is
    varpi(Z_X) = 0 (Legendrian orbits) with dim orbit = (dim X - 1) / 2.
    """
    rng = sampler.rng("isotropic_orbit", space.name)
    res, dims = [], set()
    for _ in range(sampler.samples):
        x = sample(rng)
        zx = orbit_tangents(space, x, fd_step)
        s = np.linalg.svd(zx, compute_uv=False) if zx.size else np.zeros(0)
        orbit_dim = int(np.sum(s > RANK_CUTOFF * (s[0] if s.size else 1.0)))
        tdim = space.carrier.tangent_basis(x).shape[1]
        dims.add((orbit_dim, tdim))
        k = zx.shape[1]
        if isinstance(space, PrequantumSpace):
            vals = [abs(space.varpi(x, zx[:, i])) for i in range(k)]
            want = (tdim - 1) / 2
        else:
            vals = [abs(space.omega(x, zx[:, i], zx[:, j])) for i in range(k) for j in range(i + 1, k)]
            want = tdim / 2
        r = max(vals, default=0.0)
        if lagrangian and orbit_dim != want:
            r = max(r, 1.0)
        res.append(r)
    return report_from_residuals(f"isotropic_orbit[{space.name}]", res, tol, seed=sampler.seed,
                                 details={"orbit_and_tangent_dims": sorted(dims)})


def check_cardinal(space: HamiltonianSpace, sample: Callable[[np.random.Generator], np.ndarray], sampler: Sampler,
                   expect_rank: int | None = None, expect_stabilizer: int | None = None, n_points: int = 20,
                   tol: float = 1e-6, fd_step: float = FD_STEP) -> CheckReport:
    """cardinal_checks at several sampled zero-level points, with optional expected rank and stabilizer."""
    rng = sampler.rng("cardinal", space.name)
    res, ranks, stabs = [], set(), set()
    for _ in range(n_points):
        rep = cardinal_checks(space, sample(rng), tol, fd_step=fd_step)
        d = rep.details
        ranks.add(d["rank_dphi"])
        stabs.add(d["stabilizer_dim"])
        r = rep.max_residual
        if (expect_rank is not None and d["rank_dphi"] != expect_rank) or \
                (expect_stabilizer is not None and d["stabilizer_dim"] != expect_stabilizer):
            r = max(r, 1.0)
        res.append(r)
    return report_from_residuals(f"cardinal[{space.name}]", res, tol, seed=sampler.seed,
                                 details={"ranks": sorted(ranks), "stabilizer_dims": sorted(stabs),
                                          "expected_rank": expect_rank, "expected_stabilizer": expect_stabilizer})
