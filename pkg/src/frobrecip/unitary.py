"""Desk-scale representation theory of SO3: weights on harmonic polynomials.

The carrier of V_l is the space of harmonic homogeneous polynomials of
degree l in (x, y, z).  Weights of the rotation subgroup about e3 are read
off the eigenvalues of L_z = x d/dy - y d/dx restricted to that space.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import null_space

from .report import FAIL, CheckReport, Sampler, report_from_residuals

EIG_ROUND_TOL = 1e-8
FRAME_TOL = 1e-10


def _monomials(deg: int) -> list[tuple[int, int, int]]:
    if deg < 0:
        return []
    return [(a, b, deg - a - b) for a in range(deg, -1, -1) for b in range(deg - a, -1, -1)]


def _derivative_matrix(deg: int, var: int, mult_var: int | None = None) -> np.ndarray:
    """Matrix of p -> x_mult * d p / d x_var on degree-deg monomials (or d/dx_var alone)."""
    src = _monomials(deg)
    dst_deg = deg if mult_var is not None else deg - 1
    dst = {m: i for i, m in enumerate(_monomials(dst_deg))}
    out = np.zeros((len(dst), len(src)))
    for j, m in enumerate(src):
        if m[var] == 0:
            continue
        e = list(m)
        coef = e[var]
        e[var] -= 1
        if mult_var is not None:
            e[mult_var] += 1
        out[dst[tuple(e)], j] += coef
    return out


def laplacian_matrix(deg: int) -> np.ndarray:
    if deg < 2:
        return np.zeros((0, len(_monomials(deg))))
    return sum(_derivative_matrix(deg - 1, v) @ _derivative_matrix(deg, v) for v in range(3))


@lru_cache(maxsize=None)
def _weights(l: int) -> tuple[int, ...]:
    mons = len(_monomials(l))
    lap = laplacian_matrix(l)
    harm = null_space(lap) if lap.size else np.eye(mons)
    lz = _derivative_matrix(l, 1, 0) - _derivative_matrix(l, 0, 1)
    restricted = np.linalg.pinv(harm) @ lz @ harm
    eig = np.linalg.eigvals(restricted)
    m = eig.imag
    rounded = np.rint(m)
    if np.max(np.abs(m - rounded), initial=0.0) > EIG_ROUND_TOL or np.max(np.abs(eig.real), initial=0.0) > EIG_ROUND_TOL:
        raise ArithmeticError(f"L_z eigenvalues on V_{l} are not integral multiples of i")
    return tuple(sorted(int(r) for r in rounded))


@dataclass(frozen=True)
class WeightProfile:
    l: int
    multiplicities: dict

    @property
    def dimension(self) -> int:
        return sum(self.multiplicities.values())

    def is_symmetric(self) -> bool:
        return all(self.multiplicities.get(-m, 0) == c for m, c in self.multiplicities.items())


def weight_profile(l: int) -> WeightProfile:
    if l < 0:
        raise ValueError("l must be nonnegative")
    return WeightProfile(l, dict(Counter(_weights(l))))


def weight_multiplicity(l: int, m: int) -> int:
    return weight_profile(l).multiplicities.get(int(m), 0)


def frobenius_dimension(l: int, m0: int = 0) -> int:
    """dim Hom_H(V_l, C_{m0}) for H = rotations about e3: the multiplicity of weight m0."""
    return weight_multiplicity(l, m0)


def spherical_level_point(l: float, u, r) -> np.ndarray:
    """Zero-level point (l u, r, p) of X_l^- x TS^2 from the moment equation r x p = l u."""
    return np.concatenate([l * np.asarray(u), np.asarray(r), l * np.cross(u, r)])


def _frame(point, l: float) -> np.ndarray:
    x, r, p = point[:3], point[3:6], point[6:]
    return np.stack([r, p / l, x / l], axis=1)


def geometric_multiplicity(l: int, sampler: Sampler, n_points: int = 50, tol: float = FRAME_TOL) -> CheckReport:
    """Count SO3-orbits among sampled zero-level points of X_l^- x TS^2.

    Pairs are related by the explicit solve g = F2 F1^T with F = (r, p/l, u);
    a pair is joined when |g . pt1 - pt2| and |g^T g - 1| are below ``tol``.
    The orbit count is the number of union-find components.
    """
    if l < 1:
        raise ValueError("geometric multiplicity is defined here for l >= 1")
    rng = sampler.rng("geometric_multiplicity", str(l))
    pts = []
    for _ in range(n_points):
        u = rng.standard_normal(3)
        u /= np.linalg.norm(u)
        r = rng.standard_normal(3)
        r -= (r @ u) * u
        r /= np.linalg.norm(r)
        pts.append(spherical_level_point(l, u, r))
    parent = list(range(n_points))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    res = []
    for i, j in itertools.combinations(range(n_points), 2):
        g = _frame(pts[j], l) @ _frame(pts[i], l).T
        moved = np.concatenate([g @ pts[i][:3], g @ pts[i][3:6], g @ pts[i][6:]])
        r = max(float(np.max(np.abs(moved - pts[j]))), float(np.max(np.abs(g.T @ g - np.eye(3)))),
                abs(float(np.linalg.det(g)) - 1.0))
        res.append(r)
        if r < tol:
            parent[find(i)] = find(j)
    orbits = len({find(i) for i in range(n_points)})
    rep = report_from_residuals(f"geometric_multiplicity[l={l}]", res, tol, seed=sampler.seed,
                                details={"orbits": orbits, "points": n_points,
                                         "frobenius_dimension": frobenius_dimension(l)})
    return rep


def check_multiplicity_match(l: int, sampler: Sampler, n_points: int = 50, tol: float = FRAME_TOL) -> CheckReport:
    """Geometric orbit count on the zero level equals frobenius_dimension(l)."""
    rep = geometric_multiplicity(l, sampler, n_points, tol)
    d = rep.details
    if d["orbits"] != d["frobenius_dimension"]:
        rep.verdict = FAIL
    rep.name = f"multiplicity_match[l={l}]"
    d["counts_equal"] = d["orbits"] == d["frobenius_dimension"]
    return rep
