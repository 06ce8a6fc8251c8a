"""Souriau's criterion on sampled gauge pairs, and a probe for non-strict actions.

A gauge pair is two plots P, Q into a level set with Q(u) = R(u)(P(u)) for
an analytic group-valued R.  A form descends to the orbit space only if
P*form = Q*form for every such pair; sampling many pairs gives evidence,
and one bad pair is a witness against descent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .calculus import FD_STEP, KForm, Plot, cube, plot_derivative, pullback, sample_domain_point
from .errors import EmptyCatalog, NonFreePoint
from .lie import MatrixGroup, group_curve, group_plot
from .report import FAIL, PASS, CheckReport, Sampler, classify

PASS_TOL = 1e-6
FAIL_TOL = 1e-3


@dataclass(eq=False)
class GaugePair:
    P: Plot
    R: Plot
    Q: Plot
    group: MatrixGroup
    action: Callable[[np.ndarray, np.ndarray], np.ndarray]

    def gauge(self, u) -> np.ndarray:
        return self.group.from_point(self.R(u))


@dataclass
class DescentVerdict:
    form_id: str
    pair_count: int
    max_residual: float
    verdict: str
    witness: dict | None = None
    pass_tol: float = PASS_TOL
    fail_tol: float = FAIL_TOL
    mean_residual: float = 0.0
    details: dict = field(default_factory=dict)

    def to_report(self, seed: int | None = None) -> CheckReport:
        return CheckReport(f"souriau[{self.form_id}]", self.verdict, self.max_residual, self.mean_residual,
                           self.pair_count, self.pass_tol, self.witness,
                           dict(self.details, fail_tol=self.fail_tol), seed)


def generate_gauge_pairs(catalog: Sequence[Callable[[np.random.Generator], Plot]], group: MatrixGroup,
                         action: Callable[[np.ndarray, np.ndarray], np.ndarray], count: int,
                         sampler: Sampler, degree: int = 3, amplitude: float = 2.0,
                         label: str = "gauge_pairs") -> list[GaugePair]:
    """Draw P from the plot catalog and R = exp(trig polynomial); Q(u) = R(u)(P(u))."""
    if not catalog:
        raise EmptyCatalog("no base plots registered for this level")
    rng = sampler.rng(label)
    pairs = []
    for i in range(count):
        P = catalog[i % len(catalog)](rng)
        rfun = group_curve(group, rng, P.domain_dim, degree, amplitude)
        R = group_plot(group, rfun, P.domain_dim, name="R")
        R.domain_box = P.domain_box
        Q = Plot("Q", P.domain_dim, P.domain_box, lambda u, P=P, rfun=rfun: action(rfun(u), P(u)), P.target)
        pairs.append(GaugePair(P, R, Q, group, action))
    return pairs


def _contract(c, vs):
    for v in vs:
        c = np.tensordot(v, c, axes=(0, 0))
    return float(c)


def _moment_terms(pair: GaugePair, u, moment: Callable, vs, fd_step: float) -> dict:
    """Terms by which Q*omega and P*omega differ, with Z = R^-1 dR (left Maurer-Cartan).

    <D(Phi o P) v, Z'> - <D(Phi o P) v', Z> and <Phi(P), [Z, Z']>, which vanish
    because Phi o P = 0 on the level.
    """
    G = pair.group
    r = pair.gauge(u)
    rinv = G.inverse(r)
    zs = [G.vee(rinv @ G.from_point(plot_derivative(pair.R, u, v, fd_step))) for v in vs]
    mp = Plot("Phi.P", pair.P.domain_dim, pair.P.domain_box, lambda w: moment(pair.P(w)), None)
    dphis = [plot_derivative(mp, u, v, fd_step) for v in vs]
    phi = np.asarray(moment(pair.P(u)), float)
    if len(vs) == 1:
        return {"phi_Z": abs(float(phi @ zs[0]))}
    return {"dphi_Z": abs(float(dphis[0] @ zs[1] - dphis[1] @ zs[0])),
            "phi_bracket": abs(float(phi @ G.bracket_coords(zs[0], zs[1])))}


def souriau_check(form: KForm, pairs: Sequence[GaugePair], sampler: Sampler, form_id: str | None = None,
                  pass_tol: float = PASS_TOL, fail_tol: float = FAIL_TOL, fd_step: float = FD_STEP,
                  vectors_per_pair: int = 3, moment: Callable | None = None) -> DescentVerdict:
    """Compare P*form and Q*form at a seeded point of each gauge pair.

    ``moment`` (restricted to the gauge group) enables the term-by-term
    report of the moment-map cancellation.
    """
    form_id = form_id or form.name
    rng = sampler.rng("souriau", form_id)
    residuals, worst = [], None
    terms: dict[str, float] = {}
    for idx, pair in enumerate(pairs):
        u = sample_domain_point(pair.P.domain_box, rng)
        a = pullback(form, pair.P, fd_step).coefficients(u)
        b = pullback(form, pair.Q, fd_step).coefficients(u)
        for _ in range(vectors_per_pair):
            vs = [rng.standard_normal(pair.P.domain_dim) for _ in range(form.arity)]
            r = abs(_contract(a, vs) - _contract(b, vs))
            residuals.append(r)
            if worst is None or r > worst["residual"]:
                worst = {"pair": idx, "u": u, "vectors": vs, "residual": r}
            if moment is not None and form.arity in (1, 2):
                for k, v in _moment_terms(pair, u, moment, vs, fd_step).items():
                    terms[k] = max(terms.get(k, 0.0), v)
    res = np.asarray(residuals)
    mx = float(res.max()) if res.size else 0.0
    verdict = classify(mx, pass_tol, fail_tol)
    return DescentVerdict(form_id, len(pairs), mx, verdict, worst,
                          pass_tol, fail_tol, float(res.mean()) if res.size else 0.0,
                          {"moment_terms": terms} if moment is not None else {})


# Strictness probe ------------------------------------------------------------------

NONFREE_TINY = 1e-200


def so2_plane_solver(p, q) -> float:
    """Rotation angle taking p to q in the plane; raises at the fixed point."""
    p, q = np.asarray(p, float), np.asarray(q, float)
    np_, nq = math.hypot(*p), math.hypot(*q)
    if np_ < NONFREE_TINY or nq < NONFREE_TINY:
        raise NonFreePoint("stabilizer is all of SO2 at the origin")
    if abs(np_ - nq) > 1e-9 * max(np_, nq):
        raise ValueError("points lie on different SO2 orbits")
    # normalize first so tiny radii do not underflow in the products
    p, q = p / np_, q / nq
    return math.atan2(p[0] * q[1] - p[1] * q[0], p @ q)


def so3_frame_solver(frame_of: Callable[[np.ndarray], np.ndarray]):
    """Solver for free SO3 actions on frames: R = F_q F_p^T."""

    def solve(p, q):
        fp, fq = frame_of(p), frame_of(q)
        return fq @ fp.T

    return solve


def _angle_jump(a, b) -> float:
    if np.ndim(a) == 0:
        return abs(math.remainder(float(b) - float(a), 2 * math.pi))
    rel = np.asarray(b) @ np.asarray(a).T
    return math.acos(max(-1.0, min(1.0, (np.trace(rel) - 1) / 2)))


def flat_derivatives(plot: Plot, u0: float = 0.0, h: float = 0.05, order: int = 3) -> float:
    """Largest finite-difference derivative of order 1..order at u0 (central stencils)."""
    f = lambda t: np.asarray(plot([u0 + t]), float)
    stencils = {
        1: (f(h) - f(-h)) / (2 * h),
        2: (f(h) - 2 * f(0.0) + f(-h)) / h**2,
        3: (f(2 * h) - 2 * f(h) + 2 * f(-h) - f(-2 * h)) / (2 * h**3),
    }
    return max(float(np.max(np.abs(stencils[k]))) for k in range(1, order + 1))


def smooth_division_probe(P: Plot, Q: Plot, solver: Callable, sampler: Sampler | None = None,
                          grid: int = 2001, lipschitz: float | None = None, name: str = "smooth_division",
                          flat_at: float | None = None) -> CheckReport:
    """Reconstruct the pointwise gauge R(u) with Q(u) = R(u) P(u) on a 1-D grid and test its continuity.

    Grid points where the action is not free are excluded and counted.  The
    statistic is the largest jump of R between adjacent valid points; the
    probe passes (consistent with a smooth R) when every jump stays below
    ``lipschitz`` times the gap between the two points, and fails otherwise.
    """
    lo, hi = P.domain_box[0]
    us = np.linspace(lo + 1e-3 * (hi - lo), hi - 1e-3 * (hi - lo), grid)
    vals, valid_u, excluded = [], [], 0
    orbit_miss = 0
    for u in us:
        p, q = P([u]), Q([u])
        try:
            vals.append(solver(p, q))
            valid_u.append(u)
        except NonFreePoint:
            excluded += 1
        except ValueError:
            orbit_miss += 1
    if len(vals) < 2:
        raise NonFreePoint("fewer than two free grid points")
    jumps = np.array([_angle_jump(a, b) for a, b in zip(vals[:-1], vals[1:])])
    gaps = np.diff(np.asarray(valid_u))
    k = int(np.argmax(jumps))
    mesh = float((us[-1] - us[0]) / (grid - 1))
    if lipschitz is None:
        lipschitz = float(np.median(jumps / gaps)) * 10 + 1.0
    bound = lipschitz * gaps
    ok = bool(np.all(jumps <= bound + 1e-12)) and orbit_miss == 0
    details = {"excluded_nonfree": excluded, "orbit_mismatch": orbit_miss, "mesh": mesh,
               "lipschitz_bound": lipschitz, "jump_location": [float(valid_u[k]), float(valid_u[k + 1])],
               "max_gap": float(gaps.max())}
    if flat_at is not None:
        details["flat_derivative_P"] = flat_derivatives(P, flat_at)
        details["flat_derivative_Q"] = flat_derivatives(Q, flat_at)
    return CheckReport(name, PASS if ok else FAIL, float(jumps[k]), float(jumps.mean()), len(vals),
                       float(lipschitz * gaps[k]),
                       witness={"u_left": float(valid_u[k]), "u_right": float(valid_u[k + 1]), "jump": float(jumps[k])},
                       details=details, seed=sampler.seed if sampler is not None else None)


def counterexample_plots() -> tuple[Plot, Plot]:
    """P(u) = (0, e^{-1/u^2}) and Q(u) = (0, sign(u) e^{-1/u^2}) in the plane."""
    from .calculus import euclidean

    def flat(u):
        u = float(u[0])
        return 0.0 if u == 0.0 else math.exp(-1.0 / (u * u))

    target = euclidean(2, "R2")
    P = Plot("P_flat", 1, cube(1), lambda u: np.array([0.0, flat(u)]), target)
    Q = Plot("Q_flat", 1, cube(1), lambda u: np.array([0.0, math.copysign(1.0, u[0]) * flat(u)]), target)
    return P, Q


def right_invariant_form(group: MatrixGroup, mu, name: str | None = None) -> KForm:
    """theta_mu(dq) = <mu, dq q^-1> on the group carrier."""
    from .lie import right_mc_coords

    mu = np.asarray(mu, float)

    def rule(x, v):
        return float(mu @ right_mc_coords(group, group.from_point(x), group.from_point(v)))

    return KForm(group.carrier, 1, rule, name=name or f"theta[{np.round(mu, 6).tolist()}]")


def right_translation(group: MatrixGroup):
    """Action of h on the group carrier by q -> q h^-1."""
    return lambda h, x: group.to_point(group.from_point(x) @ group.inverse(h))
