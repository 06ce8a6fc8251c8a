"""Scenario registry: worked examples bound to check pipelines with expected verdicts.

Each scenario expands into an ordered list of checks.  A check names the
library function that produces its report (``op``), a descriptive anchor id
from :data:`ANCHORS`, and the verdict it is expected to reach.  Negative
controls expect FAIL; the dense-orbit search expects APPROX.
"""

from __future__ import annotations

import math
import re
from dataclasses import asdict, dataclass, field
from functools import partial
from typing import Callable

import numpy as np

from . import constructions as cons
from . import descent, frobenius, phase_spaces, unitary
from .calculus import FD_STEP, KForm, Plot, cube, euclidean, trig_polynomial
from .errors import ConfigError, UnknownScenario
from .lie import SO3, group_curve, so2_in_so3
from .report import APPROX, FAIL, PASS, CheckReport, Sampler, _jsonable, report_from_residuals

VERDICTS = (PASS, FAIL, APPROX)


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 42
    samples: int = 200
    fd_step: float = FD_STEP
    pass_tol: float = 1e-6
    fail_tol: float = 1e-3

    def __post_init__(self):
        if not 0 < self.pass_tol < self.fail_tol:
            raise ConfigError(f"need 0 < pass tolerance < fail threshold, got {self.pass_tol} and {self.fail_tol}")
        if self.samples < 10:
            raise ConfigError(f"samples must be >= 10, got {self.samples}")
        if not self.fd_step > 0:
            raise ConfigError(f"fd_step must be positive, got {self.fd_step}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    def sampler(self, *stream: str) -> Sampler:
        return Sampler(self.seed, self.samples, tuple(stream))


# Parameters -------------------------------------------------------------------------

_SQRT = re.compile(r"^sqrt\((\d+)\)$")
_PI = re.compile(r"^pi(?:/(\d+)|\*(\d+)/(\d+))?$")


def parse_slope(text: str) -> float:
    """Irrational slope from a closed-form expression: sqrt(k), golden, pi, pi/k or pi*p/q.

    Plain decimals are rejected: a float cannot certify irrationality, and a
    rational slope gives a closed (non-dense) winding.
    """
    t = text.strip().replace(" ", "")
    if t == "golden":
        return (1 + math.sqrt(5)) / 2
    m = _SQRT.match(t)
    if m:
        k = int(m.group(1))
        if k == 0 or math.isqrt(k) ** 2 == k:
            raise ConfigError(f"sqrt({k}) is rational; the winding would be closed, not dense")
        return math.sqrt(k)
    m = _PI.match(t)
    if m:
        if m.group(1):
            k = int(m.group(1))
            if k == 0:
                raise ConfigError("division by zero in slope")
            return math.pi / k
        if m.group(2):
            p, q = int(m.group(2)), int(m.group(3))
            if p == 0 or q == 0:
                raise ConfigError("slope must be a nonzero multiple of pi")
            return math.pi * p / q
        return math.pi
    raise ConfigError(f"slope {text!r} is not an accepted irrational expression "
                      "(use sqrt(k), golden, pi, pi/k or pi*p/q)")


def _int_range(lo: int, hi: int):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise ConfigError(f"expected an integer, got {text!r}") from None
        if not lo <= v <= hi:
            raise ConfigError(f"value {v} outside [{lo}, {hi}]")
        return v

    return parse


@dataclass(frozen=True)
class Param:
    name: str
    parse: Callable[[str], object]
    default: str
    help: str = ""


# Anchors ----------------------------------------------------------------------------

ANCHORS: dict[str, str] = {
    "spherical.h_level": "zero level of the SO2 moment on l S^2 is the equator, an SO2 orbit",
    "spherical.g_level": "zero level of Hom(l S^2, TS^2) is a single free SO3 orbit",
    "spherical.lagrangian": "the zero levels are simultaneously coisotropic and orbits, hence Lagrangian",
    "spherical.frobenius": "induced form pulled back along level plots equals the form on Hom_H data under r",
    "spherical.cardinal": "rank of the moment differential and kernel = omega-orthogonal of orbit tangents",
    "spherical.multiplicity": "one reduced point matches the one-dimensional weight-zero space of V_l",
    "induction.r_maps": "r o r' = id and both maps preserve zero levels",
    "induction.orbits": "r and r' intertwine the G x H and H actions",
    "prequantum.contact": "prequantized sphere with its contact 1-form and free Reeb circle",
    "prequantum.lens": "fusion power l of the prequantized sphere, the lens space for l = 2",
    "prequantum.levels": "zero levels of the prequantum products are group x circle orbits",
    "prequantum.frobenius": "prequantum version of the pullback identity for 1-forms",
    "prequantum.reeb": "the Reeb field has period one and preserves the 1-form",
    "kms.dense": "T*G reduced by a dense winding subgroup identifies with G x ann(h)",
    "kms.descent": "right-invariant forms descend to G/H exactly for mu in ann(h)",
    "kms.liouville": "Liouville form pulled back equals the ambient canonical form along G x ann(h) plots",
    "kms.moment": "cotangent moment read through the Liouville form equals mu",
    "kms.normalizes": "G normalizes h, so ann(h) is coadjoint invariant",
    "peter_weyl.graph": "with H trivial the level of Hom_G(X, T*G) is the graph of the moment",
    "counterexample.nonstrict": "flat plots in the plane agreeing in the quotient admit no smooth gauge",
    "strict.descent": "strict actions: the restricted form passes the plot criterion on the induction level",
    "strict.control": "a non-invariant perturbation of the form is caught by the plot criterion",
    "symplectization.sanity": "R x X~ with d(e^s varpi) is Hamiltonian and its level form descends",
    "axioms": "moment condition, equivariance and invariance of the form",
}


# Check records ----------------------------------------------------------------------


def op_name(fn) -> str:
    fn = getattr(fn, "func", fn)
    return f"{fn.__module__.rsplit('.', 1)[-1]}.{fn.__qualname__}"


@dataclass(eq=False)
class Check:
    label: str
    op: str
    anchor: str
    expected: str
    run: Callable[[], CheckReport]

    def __post_init__(self):
        if self.expected not in VERDICTS:
            raise ValueError(f"{self.label}: expected verdict {self.expected!r} not in {VERDICTS}")
        if self.anchor not in ANCHORS:
            raise KeyError(f"{self.label}: unknown anchor {self.anchor!r}")


def _check(label: str, anchor: str, expected: str, fn, *args, **kw) -> Check:
    return Check(label, op_name(fn), anchor, expected, partial(fn, *args, **kw))


@dataclass
class CheckOutcome:
    label: str
    op: str
    anchor: str
    expected: str
    report: CheckReport

    @property
    def matched(self) -> bool:
        return self.report.verdict == self.expected

    def to_dict(self) -> dict:
        d = self.report.to_dict()
        d.update(label=self.label, op=self.op, anchor=self.anchor, expected=self.expected, matched=self.matched)
        return d


@dataclass
class ScenarioResult:
    scenario: str
    params: dict
    outcomes: list[CheckOutcome] = field(default_factory=list)
    seed: int | None = None

    @property
    def matched(self) -> bool:
        return all(o.matched for o in self.outcomes)

    @property
    def report(self) -> CheckReport:
        """Aggregate: PASS iff every check met its expected verdict."""
        pos = [o.report for o in self.outcomes if o.expected == PASS]
        return CheckReport(self.scenario, PASS if self.matched else FAIL,
                           max((r.max_residual for r in pos), default=0.0),
                           float(np.mean([r.mean_residual for r in pos])) if pos else 0.0,
                           sum(o.report.n_samples for o in self.outcomes), 0.0,
                           details={"checks": len(self.outcomes),
                                    "mismatched": [o.label for o in self.outcomes if not o.matched]},
                           seed=self.seed)

    def to_dict(self) -> dict:
        return _jsonable({"id": self.scenario, "params": self.params, "matched": self.matched,
                          "checks": [o.to_dict() for o in self.outcomes]})


@dataclass(frozen=True)
class Scenario:
    id: str
    doc: str
    summary: str
    builder: Callable[[SuiteConfig, dict], list[Check]]
    params: tuple[Param, ...] = ()

    def parse_params(self, raw: dict[str, str] | None = None) -> dict:
        raw = dict(raw or {})
        known = {p.name for p in self.params}
        extra = set(raw) - known
        if extra:
            raise ConfigError(f"scenario {self.id!r} has no parameter(s) {sorted(extra)}; known: {sorted(known)}")
        return {p.name: p.parse(str(raw.get(p.name, p.default))) for p in self.params}

    def raw_params(self, raw: dict[str, str] | None = None) -> dict[str, str]:
        raw = raw or {}
        return {p.name: str(raw.get(p.name, p.default)) for p in self.params}


# Plot catalog -----------------------------------------------------------------------


def spherical_g_level_plot(l: int, rng: np.random.Generator, domain_dim: int = 3) -> Plot:
    """u -> level point of Hom(l S^2, TS^2) from a moving frame exp(trig) F0."""
    G = SO3()
    g = group_curve(G, rng, domain_dim)
    f0 = cons.random_frame(rng)
    return Plot("spherical_g_level", domain_dim, cube(domain_dim),
                lambda u: cons.level_point_spherical(l, g(u) @ f0), None)


def symplectization_level_plot(rng: np.random.Generator, domain_dim: int = 3) -> Plot:
    """u -> (s(u), equatorial point of X~_1) on the zero level of Symp(Res X~_1)."""
    theta = trig_polynomial(rng, 3, domain_dim, amplitude=3.0)
    sym = cons.SymPower(1)

    def fn(u):
        s, a, b = theta(u)
        frame = frobenius._equator_frame(a, b)
        return np.concatenate([[0.5 * math.sin(s)], cons.realify(sym.power(cons.xi_from_frame(frame)))])

    return Plot("symplectization_level", domain_dim, cube(domain_dim), fn, None)


PLOT_CATALOG: dict[str, Callable] = {
    "spherical_g_level": spherical_g_level_plot,
    "level_M": frobenius.level_M_plot,
    "level_N": frobenius.level_N_plot,
    "kms_product": frobenius.kms_plot,
    "symplectization_level": symplectization_level_plot,
    "flat_pair": descent.counterexample_plots,
}


def _with_target(factory, target):
    def make(rng):
        p = factory(rng)
        p.target = target
        return p

    return make


def perturbed_form(form: KForm, eps: float = 1.0, i: int = 0, j: int = 1) -> KForm:
    """form + eps dx_i ^ dx_j in ambient coordinates, which no nontrivial rotation action preserves."""
    return KForm(form.space, 2, lambda x, a, b: form(x, a, b) + eps * float(a[i] * b[j] - a[j] * b[i]),
                 name=f"{form.name}+{eps:g}dx{i}^dx{j}", antisymmetrize=False)


def descent_report(form: KForm, catalog, group, action, pairs: int, sampler: Sampler, form_id: str,
                   pass_tol: float, fail_tol: float, fd_step: float, moment=None) -> CheckReport:
    gp = descent.generate_gauge_pairs(catalog, group, action, pairs, sampler, label=form_id)
    v = descent.souriau_check(form, gp, sampler, form_id, pass_tol, fail_tol, fd_step, moment=moment)
    return v.to_report(sampler.seed)


def _pairs(cfg: SuiteConfig) -> int:
    return max(10, cfg.samples // 2)


def _gate(label: str, space, sm: Sampler, cfg: SuiteConfig) -> list[Check]:
    ham = space.presymplectic() if isinstance(space, phase_spaces.PrequantumSpace) else space
    return [
        _check(f"{label}.moment_condition", "axioms", PASS, phase_spaces.check_moment_condition, ham, sm,
               cfg.pass_tol, cfg.fd_step),
        _check(f"{label}.equivariance", "axioms", PASS, phase_spaces.check_equivariance, space, sm, cfg.pass_tol),
        _check(f"{label}.invariance", "axioms", PASS, phase_spaces.check_invariance, space, sm,
               fd_step=cfg.fd_step),
    ]


# Builders ---------------------------------------------------------------------------


def _spherical(cfg: SuiteConfig, p: dict) -> list[Check]:
    l = p["l"]
    sm = cfg.sampler("spherical_harmonics", str(l))
    inst = frobenius.spherical_harmonics_instance(l)
    data = inst.data
    X, ts = cons.coadjoint_orbit_so3(l), cons.tangent_sphere()
    hom = cons.hom_data(X, ts)
    g_sample = lambda rng: cons.level_point_spherical(l, cons.random_frame(rng))
    zero_section = lambda rng: np.concatenate([cons.unit_vector(rng), np.zeros(3)])
    checks = _gate("X_l", X, sm, cfg) + _gate("TS2", ts, sm, cfg) + _gate("M", data.M, sm, cfg) \
        + _gate("N", data.N, sm, cfg)
    checks += [
        _check("h_level.lagrangian", "spherical.h_level", PASS, phase_spaces.check_isotropic_orbit, data.N,
               data.level_N_sample, sm, cfg.pass_tol),
        _check("g_level.lagrangian", "spherical.lagrangian", PASS, phase_spaces.check_isotropic_orbit, hom,
               g_sample, sm, cfg.pass_tol),
        _check("frobenius_pullback", "spherical.frobenius", PASS, frobenius.check_frobenius_pullback, inst, sm,
               cfg.pass_tol, cfg.fd_step, fail_tol=cfg.fail_tol),
        _check("frobenius_pullback.off_level", "spherical.frobenius", FAIL, frobenius.check_frobenius_pullback,
               inst, sm.with_samples(20), cfg.pass_tol, cfg.fd_step, off_level=True, fail_tol=cfg.fail_tol),
        _check("r_maps", "induction.r_maps", PASS, frobenius.check_r_maps, inst, sm),
        _check("orbit_correspondence", "induction.orbits", PASS, frobenius.check_orbit_correspondence, inst, sm),
        _check("g_level.descent", "spherical.g_level", PASS, descent_report, hom.omega,
               [_with_target(partial(spherical_g_level_plot, l), hom.carrier)], hom.group, hom.action,
               _pairs(cfg), sm, f"omega|Hom(X_{l},TS2)", cfg.pass_tol, cfg.fail_tol, cfg.fd_step, hom.moment),
        _check("g_level.cardinal", "spherical.cardinal", PASS, phase_spaces.check_cardinal, hom, g_sample, sm,
               3, 0),
        _check("zero_section.cardinal", "spherical.cardinal", PASS, phase_spaces.check_cardinal, ts, zero_section,
               sm, 2, 1),
        _check("multiplicity_match", "spherical.multiplicity", PASS, unitary.check_multiplicity_match, l, sm),
    ]
    return checks


def _prequantum(cfg: SuiteConfig, p: dict) -> list[Check]:
    l = p["l"]
    sm = cfg.sampler("prequantum_sphere", str(l))
    Xl = cons.fusion_power(l)
    inst = frobenius.prequantum_sphere_instance(l)
    anchor = "prequantum.contact" if l == 1 else "prequantum.lens"
    checks = _gate(f"X~_{l}", Xl, sm, cfg) + _gate("M~", inst.data.M, sm, cfg)
    checks += [
        _check("reeb", "prequantum.reeb", PASS, phase_spaces.check_reeb_normalization, Xl, sm,
               fd_step=cfg.fd_step),
        _check("moment_formula", anchor, PASS, phase_spaces.check_prequantum_moment_formula, Xl, sm,
               fd_step=cfg.fd_step),
        _check("power_fibers", anchor, PASS, cons.check_power_fibers, l, sm),
        _check("levels", "prequantum.levels", PASS, frobenius.check_prequantum_levels, l, sm),
        _check("legendrian_level", "prequantum.levels", PASS, phase_spaces.check_isotropic_orbit, inst.data.N,
               inst.data.level_N_sample, sm, cfg.pass_tol, False),
        _check("frobenius_pullback", "prequantum.frobenius", PASS, frobenius.check_prequantum_frobenius_pullback,
               inst, sm, tol=cfg.pass_tol, fd_step=cfg.fd_step, fail_tol=cfg.fail_tol),
        _check("frobenius_pullback.off_level", "prequantum.frobenius", FAIL,
               frobenius.check_prequantum_frobenius_pullback, inst, sm.with_samples(20), tol=cfg.pass_tol,
               fd_step=cfg.fd_step, off_level=True, fail_tol=cfg.fail_tol),
        _check("r_maps", "induction.r_maps", PASS, frobenius.check_r_maps, inst, sm),
    ]
    return checks


def _torus(cfg: SuiteConfig, p: dict) -> list[Check]:
    alpha = p["alpha"]
    sm = cfg.sampler("torus_kms", repr(alpha))
    inst = frobenius.kms_instance(alpha)
    pairs = _pairs(cfg)
    return _gate("T*T2//H", inst.tg.space, sm, cfg) + [
        _check("descent.ann", "kms.descent", PASS, frobenius.check_kms_descent, inst, sm, inst.ann_h[0], pairs,
               min(cfg.pass_tol, 1e-7), cfg.fail_tol, cfg.fd_step),
        _check("descent.not_ann", "kms.descent", FAIL, frobenius.check_kms_descent, inst, sm, [1.0, 0.0], pairs,
               min(cfg.pass_tol, 1e-7), cfg.fail_tol, cfg.fd_step),
        _check("liouville", "kms.liouville", PASS, frobenius.check_kms_liouville, inst, sm,
               min(cfg.pass_tol, 1e-7), cfg.fd_step),
        _check("moment", "kms.moment", PASS, frobenius.check_kms_moment, inst, sm, fd_step=cfg.fd_step),
        _check("normalizes", "kms.normalizes", PASS, frobenius.check_kms_normalizes, inst, sm),
        _check("dense_orbit", "kms.dense", APPROX, frobenius.check_dense_orbit, inst, sm.with_samples(20)),
    ]


def _peter_weyl(cfg: SuiteConfig, p: dict) -> list[Check]:
    l = p["l"]
    sm = cfg.sampler("peter_weyl", str(l))
    inst = frobenius.peter_weyl_instance(l)
    return _gate("M", inst.data.M, sm, cfg) + [
        _check("graph", "peter_weyl.graph", PASS, frobenius.check_graph_level, inst, sm),
        _check("r_maps", "induction.r_maps", PASS, frobenius.check_r_maps, inst, sm),
        _check("frobenius_pullback", "peter_weyl.graph", PASS, frobenius.check_frobenius_pullback, inst, sm,
               cfg.pass_tol, cfg.fd_step, fail_tol=cfg.fail_tol),
    ]


def _strict_plane_plots():
    """Nonvanishing plane curve and a smoothly rotated copy: a control the probe must pass."""
    target = euclidean(2, "R2")
    P = Plot("P_strict", 1, cube(1), lambda u: np.array([math.cos(u[0]), math.sin(u[0]) + 2.0]), target)

    def q(u):
        a = 3.0 * math.sin(2.0 * u[0])
        c, s = math.cos(a), math.sin(a)
        return np.array([[c, -s], [s, c]]) @ P(u)

    return P, Plot("Q_strict", 1, cube(1), q, target)


def flat_derivative_report(P: Plot, Q: Plot, at: float = 0.0, tol: float = 1e-8) -> CheckReport:
    """Derivatives of P and Q through order 3 at ``at``."""
    vals = [descent.flat_derivatives(P, at), descent.flat_derivatives(Q, at)]
    return report_from_residuals("flat_derivatives", vals, tol, details={"P": vals[0], "Q": vals[1]})


def _counterexample(cfg: SuiteConfig, p: dict) -> list[Check]:
    sm = cfg.sampler("so2_plane_counterexample")
    P, Q = descent.counterexample_plots()
    Ps, Qs = _strict_plane_plots()
    return _gate("R2", cons.plane_so2(), sm, cfg) + [
        _check("smooth_division", "counterexample.nonstrict", FAIL, descent.smooth_division_probe, P, Q,
               descent.so2_plane_solver, sm, flat_at=0.0),
        _check("flat_derivatives", "counterexample.nonstrict", PASS, flat_derivative_report, P, Q),
        _check("smooth_division.control", "counterexample.nonstrict", PASS, descent.smooth_division_probe, Ps, Qs,
               descent.so2_plane_solver, sm, lipschitz=6.0, name="smooth_division_control"),
    ]


def _strict(cfg: SuiteConfig, p: dict) -> list[Check]:
    checks = []
    for inst in (frobenius.spherical_harmonics_instance(p["l"]), frobenius.winding_instance(p["alpha"])):
        sm = cfg.sampler("strict_subgroup", inst.name)
        d = inst.data
        m_plots = [_with_target(partial(frobenius.level_M_plot, inst), d.M.carrier)]
        n_plots = [partial(frobenius.level_N_plot, inst)]
        tag = inst.name
        args = (_pairs(cfg), sm)
        tols = (cfg.pass_tol, cfg.fail_tol, cfg.fd_step)
        checks += [
            _check(f"{tag}.level_M", "strict.descent", PASS, descent_report, d.M.omega, m_plots, d.M.group,
                   d.M.action, *args, f"omega_M|{tag}", *tols, d.M.moment),
            _check(f"{tag}.level_N", "strict.descent", PASS, descent_report, d.N.omega, n_plots, d.H, d.N.action,
                   *args, f"omega_N|{tag}", *tols, d.N.moment),
            _check(f"{tag}.perturbed", "strict.control", FAIL, descent_report, perturbed_form(d.M.omega),
                   m_plots, d.M.group, d.M.action, *args, f"perturbed|{tag}", *tols),
        ]
    return checks


def _symplectization(cfg: SuiteConfig, p: dict) -> list[Check]:
    sm = cfg.sampler("symplectization_demo")
    H = so2_in_so3()
    sym = cons.symplectize(cons.restrict(cons.prequantized_sphere(), H))
    full = cons.symplectize(cons.prequantized_sphere())
    level_sample = lambda rng: symplectization_level_plot(rng)(rng.uniform(-1, 1, 3))
    plots = [_with_target(symplectization_level_plot, sym.carrier)]
    tols = (cfg.pass_tol, cfg.fail_tol, cfg.fd_step)
    return _gate("Symp(X~_1)", full, sm, cfg) + _gate("Symp(Res X~_1)", sym, sm, cfg) + [
        _check("level.isotropic", "symplectization.sanity", PASS, phase_spaces.check_isotropic_orbit, sym,
               level_sample, sm, cfg.pass_tol, False),
        _check("level.descent", "symplectization.sanity", PASS, descent_report, sym.omega, plots, H, sym.action,
               _pairs(cfg), sm, "omega|Symp(Res X~_1)", *tols, sym.moment),
        _check("level.perturbed", "strict.control", FAIL, descent_report, perturbed_form(sym.omega, 1.0, 1, 3),
               plots, H, sym.action, _pairs(cfg), sm, "perturbed|Symp(Res X~_1)", *tols),
    ]


_L = Param("l", _int_range(1, 10), "3", "weight l of the coadjoint orbit")
_ALPHA = Param("alpha", parse_slope, "sqrt(2)", "winding slope: sqrt(k), golden, pi, pi/k or pi*p/q")

SCENARIOS: dict[str, Scenario] = {s.id: s for s in [
    Scenario("spherical_harmonics", "spherical.g_level",
             "SO2 in SO3 acting on l S^2: levels, pullback identity, cardinal ranks, multiplicity",
             _spherical, (_L,)),
    Scenario("prequantum_sphere", "prequantum.lens",
             "prequantized sphere and its fusion powers: Reeb, levels, prequantum pullback identity",
             _prequantum, (Param("l", _int_range(1, 3), "2", "fusion power"),)),
    Scenario("torus_kms", "kms.dense", "dense winding in T2: descent of right-invariant forms and Liouville form",
             _torus, (_ALPHA,)),
    Scenario("peter_weyl", "peter_weyl.graph", "trivial H: the level of M is a graph identified with X data",
             _peter_weyl, (Param("l", _int_range(1, 10), "1", "weight l"),)),
    Scenario("so2_plane_counterexample", "counterexample.nonstrict",
             "SO2 on the plane is not strict: flat plots with no smooth gauge", _counterexample),
    Scenario("strict_subgroup", "strict.descent",
             "descent on induction levels for SO2 in SO3 and a dense winding in T2", _strict,
             (Param("l", _int_range(1, 10), "1", "weight l"), _ALPHA)),
    Scenario("symplectization_demo", "symplectization.sanity",
             "symplectization of the prequantized sphere: axioms and descent on the level", _symplectization),
]}


def list_scenarios() -> list[tuple[str, str, str]]:
    return [(s.id, s.doc, s.summary) for s in SCENARIOS.values()]


def get_scenario(sid: str) -> Scenario:
    try:
        return SCENARIOS[sid]
    except KeyError:
        raise UnknownScenario(f"unknown scenario {sid!r}; known: {', '.join(SCENARIOS)}") from None


def build_checks(sid: str, config: SuiteConfig | None = None, params: dict[str, str] | None = None) -> list[Check]:
    sc = get_scenario(sid)
    return sc.builder(config or SuiteConfig(), sc.parse_params(params))


def run_scenario(sid: str, config: SuiteConfig | None = None, params: dict[str, str] | None = None,
                 progress: Callable[[CheckOutcome], None] | None = None) -> ScenarioResult:
    """Run every check of a scenario and compare against expected verdicts."""
    config = config or SuiteConfig()
    sc = get_scenario(sid)
    result = ScenarioResult(sid, sc.raw_params(params), seed=config.seed)
    for chk in sc.builder(config, sc.parse_params(params)):
        out = CheckOutcome(chk.label, chk.op, chk.anchor, chk.expected, chk.run())
        result.outcomes.append(out)
        if progress is not None:
            progress(out)
    return result


def config_dict(config: SuiteConfig) -> dict:
    return asdict(config)
