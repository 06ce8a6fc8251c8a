"""Acceptance criteria 1-10, each printing one PASS/FAIL line at its stated tolerance."""

import json
import math
import time

import numpy as np
import pytest

from frobrecip import constructions as c
from frobrecip import descent as de
from frobrecip import frobenius as fr
from frobrecip import phase_spaces as ps
from frobrecip import unitary as un
from frobrecip.cli import main
from frobrecip.lie import SO3, Torus2
from frobrecip.report import FAIL, PASS, Sampler
from frobrecip.suites import SuiteConfig, run_scenario

SEED = 42
ROOT2 = math.sqrt(2)


@pytest.fixture
def emit(capsys):
    def _emit(n: int, ok: bool, text: str):
        with capsys.disabled():
            print(f"\n[acceptance {n:2d}] {'PASS' if ok else 'FAIL'}  {text}")
        assert ok, text

    return _emit


def _catalog_spaces():
    spaces = {
        "TS2": c.tangent_sphere(),
        "T*SO3": c.cotangent_group(SO3()).space,
        "T*T2": c.cotangent_group(Torus2()).space,
        "X~_1": c.prequantized_sphere(),
        "X~_2 (lens)": c.fusion_power(2),
    }
    for l in (1, 2, 3):
        spaces[f"{l}S2"] = c.coadjoint_orbit_so3(float(l))
    insts = [fr.spherical_harmonics_instance(l) for l in (1, 2, 3)] + \
        [fr.prequantum_sphere_instance(l) for l in (1, 2)] + \
        [fr.winding_instance(ROOT2), fr.peter_weyl_instance(1)]
    for inst in insts:
        spaces[f"M[{inst.name}]"] = inst.data.M
        spaces[f"N[{inst.name}]"] = inst.data.N
    return spaces


def test_criterion_01_axiom_gate(emit):
    t0 = time.perf_counter()
    worst, bad = 0.0, []
    spaces = _catalog_spaces()
    for name, space in spaces.items():
        sm = Sampler(SEED, 200, ("acceptance", name))
        ham = space.presymplectic() if isinstance(space, ps.PrequantumSpace) else space
        for rep in (ps.check_moment_condition(ham, sm, 1e-6), ps.check_equivariance(space, sm, 1e-6)):
            worst = max(worst, rep.max_residual)
            if rep.verdict != PASS:
                bad.append(rep.name)
    dt = time.perf_counter() - t0
    emit(1, not bad and worst < 1e-6 and dt < 30,
         f"axiom gate on {len(spaces)} spaces x 200 samples: max residual {worst:.2e} (< 1e-6), "
         f"{dt:.1f} s (< 30 s){'; failing ' + ', '.join(bad) if bad else ''}")


def test_criterion_02_symplectic_pullback(emit):
    worst, ratios = 0.0, []
    for l in (1, 2, 3):
        inst = fr.spherical_harmonics_instance(l)
        sm = Sampler(SEED, 200)
        worst = max(worst, fr.check_frobenius_pullback(inst, sm, pairs=10).max_residual)
        # the halving test is done where truncation error dominates roundoff
        coarse = fr.check_frobenius_pullback(inst, sm, fd_step=4e-3, pairs=10).max_residual
        fine = fr.check_frobenius_pullback(inst, sm, fd_step=2e-3, pairs=10).max_residual
        ratios.append(coarse / fine)
    emit(2, worst < 1e-6 and min(ratios) >= 3,
         f"symplectic pullback identity l=1,2,3, 200 plots x 10 pairs: max residual {worst:.2e} (< 1e-6); "
         f"fd 4e-3 -> 2e-3 reduction {min(ratios):.1f}x (>= 3x)")


def test_criterion_03_prequantum_pullback(emit):
    worst = max(fr.check_prequantum_frobenius_pullback(fr.prequantum_sphere_instance(l), Sampler(SEED, 200)).max_residual
                for l in (1, 2))
    emit(3, worst < 1e-6, f"prequantum pullback identity l=1,2, 200 plots: max residual {worst:.2e} (< 1e-6)")


def test_criterion_04_r_maps(emit):
    worst, names = 0.0, []
    for inst in (fr.spherical_harmonics_instance(2), fr.prequantum_sphere_instance(2), fr.winding_instance(ROOT2),
                 fr.peter_weyl_instance(1)):
        rep = fr.check_r_maps(inst, Sampler(SEED, 500), tol=1e-9)
        worst = max(worst, rep.max_residual)
        names.append(inst.name)
    emit(4, worst < 1e-9, f"r o r' = id and level preservation, 500 samples on {len(names)} instances: "
                          f"max {worst:.2e} (< 1e-9)")


def test_criterion_05_strict_descent(emit):
    res = run_scenario("strict_subgroup", SuiteConfig(seed=SEED))
    pos = [o.report for o in res.outcomes if o.expected == PASS and ".level_" in o.label]
    neg = [o.report for o in res.outcomes if o.expected == FAIL]
    pos_max = max(r.max_residual for r in pos)
    neg_min = min(r.max_residual for r in neg)
    ok = len(pos) == 4 and len(neg) == 2 and all(r.verdict == PASS for r in pos) and pos_max < 1e-6 \
        and all(r.verdict == FAIL for r in neg) and neg_min > 1e-3
    emit(5, ok, f"descent on induction levels (SO2<SO3, winding<T2): max {pos_max:.2e} (< 1e-6); "
                f"perturbed form min {neg_min:.2e} (> 1e-3)")


def test_criterion_06_torus_kms(emit):
    inst = fr.kms_instance(ROOT2)
    sm = Sampler(SEED, 200)
    good = fr.check_kms_descent(inst, sm, inst.ann_h[0], pairs=100, pass_tol=1e-7)
    bad = fr.check_kms_descent(inst, sm, [1.0, 0.0], pairs=100, pass_tol=1e-7)
    liouv = fr.check_kms_liouville(inst, sm, tol=1e-7)
    mom = fr.check_kms_moment(inst, sm, tol=1e-12)
    ok = good.verdict == PASS and good.max_residual < 1e-7 and bad.verdict == FAIL and bad.max_residual > 1e-2 \
        and liouv.max_residual < 1e-7 and mom.max_residual < 1e-12
    emit(6, ok, f"alpha=sqrt(2): ann descent {good.max_residual:.2e} (< 1e-7), mu=(1,0) witness "
                f"{bad.max_residual:.2e} (> 1e-2), Liouville {liouv.max_residual:.2e} (< 1e-7), "
                f"moment {mom.max_residual:.2e} (< 1e-12)")


def test_criterion_07_nonstrict_counterexample(emit):
    P, Q = de.counterexample_plots()
    rep = de.smooth_division_probe(P, Q, de.so2_plane_solver, Sampler(SEED), flat_at=0.0)
    lo, hi = rep.details["jump_location"]
    flat = max(rep.details["flat_derivative_P"], rep.details["flat_derivative_Q"])
    ok = rep.verdict == FAIL and rep.max_residual >= math.pi - 0.01 and lo < 0 < hi and flat < 1e-8
    emit(7, ok, f"gauge angle jump {rep.max_residual:.4f} across ({lo:.3f}, {hi:.3f}) (>= pi - 0.01); "
                f"derivatives to order 3 at 0: {flat:.1e} (< 1e-8)")


def test_criterion_08_cardinal(emit):
    sm = Sampler(SEED, 50)
    hom = c.hom_data(c.coadjoint_orbit_so3(1.0), c.tangent_sphere())
    g = ps.check_cardinal(hom, lambda rng: c.level_point_spherical(1.0, c.random_frame(rng)), sm, 3, 0)
    z = ps.check_cardinal(c.tangent_sphere(), lambda rng: np.concatenate([c.unit_vector(rng), np.zeros(3)]),
                          sm, 2, 1)
    ok = g.verdict == PASS and z.verdict == PASS and g.max_residual < 1e-6
    emit(8, ok, f"G-level (l=1) rank 3, kernel distance {g.max_residual:.2e} (< 1e-6); "
                f"TS2 zero section rank 2, stabilizer 1: {z.verdict}")


def test_criterion_09_multiplicity(emit):
    rows = []
    for l in range(1, 11):
        rep = un.geometric_multiplicity(l, Sampler(SEED), n_points=50, tol=1e-10)
        rows.append((l, rep.details["orbits"], un.frobenius_dimension(l), rep.max_residual))
    ok = all(o == 1 == d and r < 1e-10 for _, o, d, r in rows)
    emit(9, ok, f"l=1..10: orbits {[o for _, o, _, _ in rows]}, weight-zero dims {[d for _, _, d, _ in rows]}, "
                f"frame-solve max {max(r for *_, r in rows):.2e} (< 1e-10)")


def test_criterion_10_determinism(emit, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    t0 = time.perf_counter()
    codes = [main(["run", "--seed", str(SEED), "--format", "json", "--report", str(p)]) for p in paths]
    dt = (time.perf_counter() - t0) / 2
    same = paths[0].read_bytes() == paths[1].read_bytes()
    doc = json.loads(paths[0].read_text())
    emit(10, same and codes == [0, 0] and dt < 300,
         f"full default suite: byte-identical {same}, {doc['matched']}/{doc['total']} checks matched, "
         f"{dt:.1f} s per run (< 300 s)")
