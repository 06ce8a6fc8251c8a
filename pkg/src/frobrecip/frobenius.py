"""Reciprocity maps r, r' and the identity checks built on them.

A :class:`FrobeniusInstance` wraps induction data together with the two
level sets.  Plots into the level of M are generated as
``F(u) = (g(u), h(u)) . r'(n(u))`` with ``n(u)`` running over a closed-form
parametrization of the level of N, so they land on the level exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calculus import (FD_STEP, KForm, Plot, cube, plot_derivative, pullback, sample_domain_point,
                       trig_polynomial)
from .constructions import (InductionData, SymPower, coadjoint_orbit_so3, complex_pair, cotangent_group,
                            fusion_power, induction_data, point_prequantum, point_space, prequantized_tangent_sphere,
                            prequantum_induction_data, prequantum_product, random_frame, realify, restrict,
                            unit_vector, xi_from_frame)
from .errors import LevelViolation
from .lie import SO3, Subgroup, group_curve, group_plot, right_mc_coords, so2_in_so3, trivial_subgroup, winding_subgroup
from .phase_spaces import LevelSet
from .report import APPROX, FAIL, CheckReport, Sampler, report_from_residuals

LEVEL_TOL = 1e-9
PULLBACK_TOL = 1e-6


@dataclass(eq=False)
class FrobeniusInstance:
    name: str
    data: InductionData
    level_M: LevelSet
    level_N: LevelSet

    @property
    def prequantum(self) -> bool:
        return self.data.kind == "prequantum"

    @property
    def form_M(self) -> KForm:
        return self.data.M.varpi if self.prequantum else self.data.M.omega

    @property
    def form_N(self) -> KForm:
        return self.data.N.varpi if self.prequantum else self.data.N.omega


def frobenius_instance(name: str, data: InductionData) -> FrobeniusInstance:
    return FrobeniusInstance(name, data, data.level_M(), data.level_N())


def map_r(instance: FrobeniusInstance, m) -> np.ndarray:
    return instance.data.r(m)


def map_r_prime(instance: FrobeniusInstance, n) -> np.ndarray:
    return instance.data.r_prime(n)


# Catalog instances ----------------------------------------------------------------


def _equator_frame(a: float, b: float) -> np.ndarray:
    """Frame (u1, u2, u3) with u3 = (cos a, sin a, 0) on the equator."""
    u3 = np.array([math.cos(a), math.sin(a), 0.0])
    e3 = np.array([0.0, 0.0, 1.0])
    u1 = math.cos(b) * e3 + math.sin(b) * np.cross(e3, u3)
    return np.stack([u1, np.cross(u3, u1), u3], axis=1)


def spherical_harmonics_instance(l: int) -> FrobeniusInstance:
    """X = l S^2 over SO3, H = rotations about e3, Y = {0}."""
    H = so2_in_so3()
    X, Y = coadjoint_orbit_so3(l), point_space(H)
    param = lambda t: np.array([l * math.cos(t[0]), l * math.sin(t[0]), 0.0])
    return frobenius_instance(f"spherical_harmonics(l={l})", induction_data(X, Y, param, 1))


def prequantum_sphere_instance(l: int) -> FrobeniusInstance:
    """X = prequantized sphere fusion power l over SO3, H = SO2, Y = the circle {0~}."""
    H = so2_in_so3()
    X, Y = fusion_power(l), point_prequantum(H)
    sym = X.meta["sym"]

    def param(t):
        frame = _equator_frame(t[0], t[1])
        return np.concatenate([realify(sym.power(xi_from_frame(frame))), [math.cos(t[2]), math.sin(t[2])]])

    return frobenius_instance(f"prequantum_sphere(l={l})", prequantum_induction_data(X, Y, param, 3))


def winding_instance(alpha: float) -> FrobeniusInstance:
    """X = C^2 over Torus2 with weights (1, -1), H = dense winding of slope alpha, Y = {0}.

    The level of N is |z1|^2 = alpha |z2|^2.
    """
    H = winding_subgroup(alpha)
    X, Y = complex_pair(), point_space(H)

    def param(t):
        rho = math.exp(0.3 * math.sin(t[0]))
        z1 = math.sqrt(alpha) * rho * np.exp(1j * t[1])
        z2 = rho * np.exp(1j * t[2])
        return realify([z1, z2])

    return frobenius_instance(f"winding(alpha={alpha:.12g})", induction_data(X, Y, param, 3))


def peter_weyl_instance(l: int) -> FrobeniusInstance:
    """H trivial: the level of M is the graph mu = Phi(x) inside X^- x T*G."""
    H = trivial_subgroup(SO3())
    X, Y = coadjoint_orbit_so3(l), point_space(H)

    def param(t):
        return l * np.array([math.cos(t[0]) * math.cos(t[1]), math.sin(t[0]) * math.cos(t[1]), math.sin(t[1])])

    return frobenius_instance(f"peter_weyl(l={l})", induction_data(X, Y, param, 2))


# Level plots -------------------------------------------------------------------


def level_M_plot(instance: FrobeniusInstance, rng: np.random.Generator, domain_dim: int = 3,
                 off_level: bool = False) -> Plot:
    """Seeded analytic plot into the level of M (or off it, for the negative control)."""
    data = instance.data
    G, H = data.G, data.H
    theta = trig_polynomial(rng, data.param_dim, domain_dim, amplitude=3.0)
    g = group_curve(G, rng, domain_dim)
    h = group_curve(H, rng, domain_dim)
    shift = trig_polynomial(rng, G.dim, domain_dim) if off_level else None
    block = data.M.group.block
    mu_slice = data.M.carrier.slices()[2]

    def F(u):
        m = data.M.action(block(g(u), h(u)), data.r_prime(data.level_N_param(theta(u))))
        if shift is not None:
            m = m.copy()
            m[mu_slice] += shift(u)
        return m

    return Plot("F" + ("_off" if off_level else ""), domain_dim, cube(domain_dim), F, data.M.carrier)


def level_N_plot(instance: FrobeniusInstance, rng: np.random.Generator, domain_dim: int = 3) -> Plot:
    data = instance.data
    theta = trig_polynomial(rng, data.param_dim, domain_dim, amplitude=3.0)
    h = group_curve(data.H, rng, domain_dim)
    return Plot("n", domain_dim, cube(domain_dim),
                lambda u: data.N.action(h(u), data.level_N_param(theta(u))), data.N.carrier)


def composed_plot(fn, plot: Plot, target, name: str) -> Plot:
    return Plot(name, plot.domain_dim, plot.domain_box, lambda u: fn(plot(u)), target)


# Checks ------------------------------------------------------------------------


def _contract(c: np.ndarray, vs) -> float:
    for v in vs:
        c = np.tensordot(v, c, axes=(0, 0))
    return float(c)


def _aggregate_terms(data: InductionData, F: Plot, u, fd_step: float) -> dict:
    """The terms by which F*form_M and F*r*form_N differ; all carry a factor mu - Phi(x).

    Symplectic: <d(mu - Phi), Z'> - <d'(mu - Phi), Z> and <mu - Phi, [Z, Z']>.
    Prequantum: <mu - Phi, Z>.  Here Z = dq q^-1 along domain axes.
    """
    G = data.G
    nu = lambda m: data.split_M(m)[2] - np.asarray(data.X.moment(data.split_M(m)[0]), float)
    m = F(u)
    q = data.split_M(m)[1]
    eye = np.eye(F.domain_dim)
    zs, dnus = [], []
    for k in range(F.domain_dim):
        dm = plot_derivative(F, u, eye[k], fd_step)
        zs.append(right_mc_coords(G, q, G.from_point(data.M.carrier.split(dm)[1])))
        dnus.append(plot_derivative(composed_plot(nu, F, None, "nu"), u, eye[k], fd_step))
    nu0 = nu(m)
    if data.kind == "prequantum":
        return {"nu_dot_Z": max(abs(float(nu0 @ z)) for z in zs)}
    a1 = a2 = 0.0
    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            a1 = max(a1, abs(float(dnus[i] @ zs[j] - dnus[j] @ zs[i])))
            a2 = max(a2, abs(float(nu0 @ G.bracket_coords(zs[i], zs[j]))))
    return {"dnu_Z": a1, "nu_bracket": a2}


def check_frobenius_pullback(instance: FrobeniusInstance, sampler: Sampler, tol: float = PULLBACK_TOL,
                             fd_step: float = FD_STEP, pairs: int = 10, domain_dim: int = 3,
                             off_level: bool = False, fail_tol: float | None = None) -> CheckReport:
    """F*form_M against (r o F)*form_N over seeded level plots F and tangent tuples.

    With ``off_level=True`` the plots are pushed off the level by a smooth
    shift of mu, which should break the identity (negative control).
    """
    data = instance.data
    rng = sampler.rng("frobenius_pullback", instance.name, "off" if off_level else "on")
    residuals, worst = [], None
    agg: dict[str, float] = {}
    level_max = 0.0
    for _ in range(sampler.samples):
        F = level_M_plot(instance, rng, domain_dim, off_level)
        u = sample_domain_point(F.domain_box, rng)
        m = F(u)
        lvl = float(np.max(np.abs(data.M.moment(m)), initial=0.0))
        level_max = max(level_max, lvl)
        if not off_level and lvl >= LEVEL_TOL:
            raise LevelViolation(f"{instance.name}: plot value off the level of M by {lvl:.2e}")
        rF = composed_plot(data.r, F, data.N.carrier, "r.F")
        a = pullback(instance.form_M, F, fd_step).coefficients(u)
        b = pullback(instance.form_N, rF, fd_step).coefficients(u)
        for _ in range(pairs):
            vs = [rng.standard_normal(domain_dim) for _ in range(instance.form_M.arity)]
            r = abs(_contract(a, vs) - _contract(b, vs))
            residuals.append(r)
            if worst is None or r > worst["residual"]:
                worst = {"u": u, "vectors": vs, "residual": r, "lhs": _contract(a, vs), "rhs": _contract(b, vs)}
        if not off_level:
            for k, v in _aggregate_terms(data, F, u, fd_step).items():
                agg[k] = max(agg.get(k, 0.0), v)
    kind = "prequantum_frobenius_pullback" if instance.prequantum else "frobenius_pullback"
    return report_from_residuals(f"{kind}[{instance.name}]" + ("[off_level]" if off_level else ""), residuals,
                                 tol, fail_tol, witness=worst, seed=sampler.seed,
                                 details={"fd_step": fd_step, "level_residual_max": level_max,
                                          "aggregate_terms": agg, "domain_dim": domain_dim,
                                          "tangent_tuples_per_plot": pairs})


def check_prequantum_frobenius_pullback(instance: FrobeniusInstance, sampler: Sampler, **kw) -> CheckReport:
    if not instance.prequantum:
        raise ValueError("instance is not prequantum")
    return check_frobenius_pullback(instance, sampler, **kw)


def check_r_maps(instance: FrobeniusInstance, sampler: Sampler, tol: float = 1e-9) -> CheckReport:
    """r o r' = id on level N, r' maps level N into level M, r maps level M into level N."""
    data = instance.data
    rng = sampler.rng("r_maps", instance.name)
    roundtrip, into_m, into_n = [], [], []
    for _ in range(sampler.samples):
        n = data.level_N_sample(rng)
        roundtrip.append(float(np.max(np.abs(data.r(data.r_prime(n)) - n), initial=0.0)))
        into_m.append(float(np.max(np.abs(data.M.moment(data.r_prime(n))), initial=0.0)))
        m = instance.level_M.sample(rng)
        into_n.append(float(np.max(np.abs(data.N.moment(data.r(m))), initial=0.0)))
    res = np.maximum.reduce([roundtrip, into_m, into_n])
    return report_from_residuals(f"r_maps[{instance.name}]", res, tol, seed=sampler.seed,
                                 details={"roundtrip_max": max(roundtrip), "r_prime_level_max": max(into_m),
                                          "r_level_max": max(into_n)})


def check_orbit_correspondence(instance: FrobeniusInstance, sampler: Sampler, tol: float = 1e-10) -> CheckReport:
    """r((g, h) m) = h r(m) on level M and r'(h n) = (h, h) r'(n) on level N."""
    data = instance.data
    rng = sampler.rng("orbit_correspondence", instance.name)
    res_r, res_rp = [], []
    for _ in range(sampler.samples):
        m = instance.level_M.sample(rng)
        g, h = data.G.random_matrix(rng), data.H.random_matrix(rng)
        lhs = data.r(data.M.action(data.M.group.block(g, h), m))
        res_r.append(float(np.max(np.abs(lhs - data.N.action(h, data.r(m))), initial=0.0)))
        n = data.level_N_sample(rng)
        lhs = data.r_prime(data.N.action(h, n))
        res_rp.append(float(np.max(np.abs(lhs - data.M.action(data.M.group.block(h, h), data.r_prime(n))),
                                   initial=0.0)))
    return report_from_residuals(f"orbit_correspondence[{instance.name}]", np.maximum(res_r, res_rp), tol,
                                 seed=sampler.seed, details={"r_max": max(res_r), "r_prime_max": max(res_rp)})


# Torus KMS -------------------------------------------------------------------------


@dataclass(eq=False)
class KmsInstance:
    """Torus2 with a dense winding H of slope alpha; G x ann(h) sits in T*G."""

    alpha: float
    H: Subgroup

    def __post_init__(self):
        self.G = self.H.parent
        self.tg = cotangent_group(self.G, self.H)
        self.generator = self.H.generators[0]
        a = np.array([-self.alpha, 1.0]) / math.hypot(1.0, self.alpha)
        self.ann_h = a[None, :]

    def in_ann(self, mu, tol: float = 1e-12) -> bool:
        return abs(float(np.asarray(mu, float) @ self.generator)) < tol


def kms_instance(alpha: float) -> KmsInstance:
    return KmsInstance(float(alpha), winding_subgroup(alpha))


def dual_basis(G) -> np.ndarray:
    """Matrices B~_k with Re tr(B~_k^H B_j) = delta_kj."""
    b = G.basis
    gram = np.real(np.einsum("kab,jab->kj", np.conj(b), b))
    return np.tensordot(np.linalg.inv(gram), b, axes=(1, 0))


def ambient_canonical_form(tg) -> KForm:
    """Re tr(p^H dq) with p = mu~ q the cotangent vector as a matrix; independent of the Maurer-Cartan route."""
    G = tg.G
    dual = dual_basis(G)

    def rule(x, v):
        q, mu = tg.split(x)
        dq, _ = tg.split(v)
        p = np.tensordot(mu, dual, axes=(0, 0)) @ q
        return float(np.real(np.trace(np.conj(p).T @ dq)))

    return KForm(tg.carrier, 1, rule, name="Re tr(p^H dq)")


def kms_plot(inst: KmsInstance, rng: np.random.Generator, domain_dim: int = 2, mu=None) -> Plot:
    """u -> (Q(u), M(u)) into G x ann(h); if ``mu`` is given M is constant."""
    Q = group_curve(inst.G, rng, domain_dim)
    a = trig_polynomial(rng, 1, domain_dim)
    tg = inst.tg

    def fn(u):
        m = np.asarray(mu, float) if mu is not None else a(u)[0] * inst.ann_h[0]
        return tg.join(Q(u), m)

    return Plot("QxM", domain_dim, cube(domain_dim), fn, tg.carrier)


def check_kms_liouville(inst: KmsInstance, sampler: Sampler, tol: float = 1e-7, fd_step: float = FD_STEP,
                        domain_dim: int = 2, pairs: int = 5) -> CheckReport:
    """(Q x M)* Liouville form against (Q x M)* j* canonical form, with M valued in ann(h)."""
    rng = sampler.rng("kms_liouville", repr(inst.alpha))
    liouv = inst.tg.varpi
    canon = ambient_canonical_form(inst.tg)
    res, worst = [], None
    for _ in range(sampler.samples):
        plot = kms_plot(inst, rng, domain_dim)
        u = sample_domain_point(plot.domain_box, rng)
        a = pullback(liouv, plot, fd_step).coefficients(u)
        b = pullback(canon, plot, fd_step).coefficients(u)
        for _ in range(pairs):
            v = rng.standard_normal(domain_dim)
            r = abs(float(v @ a) - float(v @ b))
            res.append(r)
            if worst is None or r > worst["residual"]:
                worst = {"u": u, "v": v, "residual": r}
    return report_from_residuals(f"kms_liouville[alpha={inst.alpha:.12g}]", res, tol, witness=worst,
                                 seed=sampler.seed)


def check_kms_moment(inst: KmsInstance, sampler: Sampler, tol: float = 1e-12,
                     fd_step: float = FD_STEP) -> CheckReport:
    """Phi o F = phi o j = mu, with <Phi, Z> read off the Liouville form on the analytic velocity Zq."""
    rng = sampler.rng("kms_moment", repr(inst.alpha))
    G, tg = inst.G, inst.tg
    exact, fd = [], []
    for _ in range(sampler.samples):
        q = G.random_matrix(rng)
        mu = rng.standard_normal() * inst.ann_h[0]
        x = tg.join(q, mu)
        phi_j = tg.mu(x)
        liouv = []
        liouv_fd = []
        for k, b in enumerate(G.basis):
            v = tg.join(b @ q, np.zeros(G.dim))
            liouv.append(tg.varpi(x, v))
            curve = Plot("exp(tZ)q", 1, cube(1), lambda t, k=k: tg.join(G.exp_matrix(t[0] * np.eye(G.dim)[k]) @ q, mu),
                         tg.carrier)
            liouv_fd.append(tg.varpi(x, plot_derivative(curve, [0.0], [1.0], fd_step)))
        exact.append(max(float(np.max(np.abs(np.array(liouv) - mu))), float(np.max(np.abs(phi_j - mu)))))
        fd.append(float(np.max(np.abs(np.array(liouv_fd) - mu))))
    return report_from_residuals(f"kms_moment[alpha={inst.alpha:.12g}]", exact, tol, seed=sampler.seed,
                                 details={"finite_difference_max": max(fd)})


def check_kms_normalizes(inst: KmsInstance, sampler: Sampler, tol: float = 1e-12) -> CheckReport:
    """ann(h) is Ad*-invariant, and <mu, Z> = 0 on sampled Z in h exactly when mu is flagged in ann(h)."""
    rng = sampler.rng("kms_normalizes", repr(inst.alpha))
    G = inst.G
    res, flag_mismatch = [], 0
    proj = np.eye(G.dim) - inst.ann_h.T @ inst.ann_h
    for _ in range(sampler.samples):
        g = G.random_matrix(rng)
        mu = rng.standard_normal() * inst.ann_h[0]
        res.append(float(np.linalg.norm(proj @ G.coadjoint_coords(g, mu))))
        for cand in (mu, rng.standard_normal(G.dim)):
            zs = [inst.H.include([t]) for t in rng.standard_normal(3)]
            kills = all(abs(float(cand @ z)) < 1e-12 for z in zs)
            flag_mismatch += kills != inst.in_ann(cand)
    return report_from_residuals(f"kms_normalizes[alpha={inst.alpha:.12g}]", res + [float(flag_mismatch)], tol,
                                 seed=sampler.seed, details={"membership_flag_mismatches": flag_mismatch})


def check_dense_orbit(inst: KmsInstance, sampler: Sampler, eps: float = 1e-3, steps: int = 100_000) -> CheckReport:
    """Two level points with equal mu: find h in H with |h q1 - q2| < eps by a Weyl search.

    Success is reported as APPROX, never PASS, because H-orbits are dense
    and exact equality cannot be decided numerically.
    """
    rng = sampler.rng("dense_orbit", repr(inst.alpha))
    c = inst.generator
    k = np.arange(steps)
    res = []
    for _ in range(sampler.samples):
        d = rng.uniform(-math.pi, math.pi, 2)
        t = (d[0] + 2 * math.pi * k) / c[0]
        miss = np.angle(np.exp(1j * (t * c[1] - d[1])))
        res.append(float(np.min(np.abs(miss))))
    mx = max(res)
    return CheckReport(f"dense_orbit[alpha={inst.alpha:.12g}]", APPROX if mx < eps else FAIL, mx,
                       float(np.mean(res)), len(res), eps, details={"steps": steps}, seed=sampler.seed)


def check_kms_descent(inst: KmsInstance, sampler: Sampler, mu, pairs: int = 100, pass_tol: float = 1e-7,
                      fail_tol: float = 1e-3, fd_step: float = FD_STEP) -> CheckReport:
    """P*theta_mu = Q*theta_mu for Q = P h^-1 with h valued in the winding subgroup.

    theta_mu is the right-invariant 1-form <mu, dq q^-1>; it descends to G/H
    exactly when mu annihilates the Lie algebra of H.
    """
    from .descent import generate_gauge_pairs, right_invariant_form, right_translation, souriau_check

    G = inst.G
    mu = np.asarray(mu, float)
    tag = f"kms_descent[alpha={inst.alpha:.12g},mu={np.round(mu, 12).tolist()}]"
    catalog = [lambda rng: group_plot(G, group_curve(G, rng, 2), 2, name="P")]
    gp = generate_gauge_pairs(catalog, inst.H, right_translation(G), pairs, sampler, label=tag)
    verdict = souriau_check(right_invariant_form(G, mu), gp, sampler, tag, pass_tol, fail_tol, fd_step)
    rep = verdict.to_report(sampler.seed)
    rep.name = tag
    rep.details["mu_in_ann"] = inst.in_ann(mu)
    return rep


# Prequantum level structure -------------------------------------------------------


def _circle_angle(a: np.ndarray, b: np.ndarray) -> float:
    return math.atan2(a[0] * b[1] - a[1] * b[0], a @ b)


def check_prequantum_levels(l: int, sampler: Sampler, tol: float = 1e-9) -> CheckReport:
    """Zero levels of X~_l^- [x] {0~} over SO2 and of X~_l^- [x] TS2~ over SO3 are single group x circle orbits.

    Points come from the moment equation with random phases on both factors;
    after gauge fixing each one is matched to group . circle . base point
    by explicit solves.  Residuals combine the moment and the match.
    """
    sym = SymPower(l)
    H = so2_in_so3()
    Xl = fusion_power(l)
    h_prod = prequantum_product(restrict(Xl, H), point_prequantum(H), sign=-1)
    g_prod = prequantum_product(Xl, prequantized_tangent_sphere(), sign=-1)
    hfix, gfix = h_prod.meta["gauge_fix"], g_prod.meta["gauge_fix"]
    rng = sampler.rng("prequantum_levels", str(l))

    def phased(frame, zeta):
        return realify(sym.power(zeta * xi_from_frame(frame)))

    def match(space, x, gx):
        tail = space.carrier.ambient_dim - 2
        theta = _circle_angle(gx[tail:], x[tail:])
        return float(np.max(np.abs(space.circle_action(theta, gx) - x)))

    h_base = hfix(np.concatenate([phased(_equator_frame(0.0, 0.0), 1.0), [1.0, 0.0]]))
    g_base = gfix(np.concatenate([phased(np.eye(3), 1.0), [1.0, 0.0, 0.0, 0.0, float(l), 0.0, 1.0, 0.0]]))
    h_res, g_res = [], []
    for _ in range(sampler.samples):
        a, b, t = rng.uniform(-math.pi, math.pi, 3)
        zeta = np.exp(1j * rng.uniform(-math.pi, math.pi))
        x = hfix(np.concatenate([phased(_equator_frame(a, b), zeta), [math.cos(t), math.sin(t)]]))
        rot = SO3().exp_matrix([0.0, 0.0, a])
        h_res.append(max(float(np.max(np.abs(h_prod.moment(x)))), match(h_prod, x, h_prod.action(rot, h_base))))

        frame = random_frame(rng)
        r, s = frame[:, 0], frame[:, 1]
        zeta = np.exp(1j * rng.uniform(-math.pi, math.pi))
        z = unit_vector(rng, 2)
        x = gfix(np.concatenate([phased(frame, zeta), r, l * s, z]))
        g_res.append(max(float(np.max(np.abs(g_prod.moment(x)))), match(g_prod, x, g_prod.action(frame, g_base))))
    return report_from_residuals(f"prequantum_levels[l={l}]", np.maximum(h_res, g_res), tol, seed=sampler.seed,
                                 details={"h_level_max": max(h_res), "g_level_max": max(g_res)})


def check_graph_level(instance: FrobeniusInstance, sampler: Sampler, tol: float = 1e-9) -> CheckReport:
    """With H trivial the level of M is the graph mu = Phi(x), and m = (q, e) . r'(r(m)) on it."""
    data = instance.data
    rng = sampler.rng("graph_level", instance.name)
    graph, recon = [], []
    for _ in range(sampler.samples):
        m = instance.level_M.sample(rng)
        x, q, mu, _ = data.split_M(m)
        graph.append(float(np.max(np.abs(mu - data.X.moment(x)))))
        back = data.M.action(data.M.group.block(q, data.H.identity()), data.r_prime(data.r(m)))
        recon.append(float(np.max(np.abs(back - m))))
    return report_from_residuals(f"graph_level[{instance.name}]", np.maximum(graph, recon), tol, seed=sampler.seed,
                                 details={"graph_max": max(graph), "reconstruction_max": max(recon)})
