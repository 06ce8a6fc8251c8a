"""Embedded spaces, plots and k-forms, evaluated numerically.

Every space is a subset of some R^d cut out by a residual function; points
and tangent vectors are plain float arrays in the ambient coordinates.
Forms take ambient tangent vectors.  Pulling a form back along a plot gives
a :class:`DomainForm`, stored as its antisymmetric coefficient tensor on
the plot's domain.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import null_space

from .errors import ArityMismatch, BoundaryViolation, DerivativeFailure, SpaceMismatch
from .report import CheckReport, Sampler, classify

FD_STEP = 1e-5
RICHARDSON_TOL = 1e-4
D_STEP = 1e-3
TANGENT_RCOND = 1e-8
EQUAL_ATOL = 1e-7
EQUAL_RTOL = 1e-6
MAX_ARITY = 3


class EmbeddedSpace:
    """A subset of R^ambient_dim given as the zero set of ``constraint``.

    ``tangent_rule`` may supply an exact tangent basis; otherwise the tangent
    space is the numeric kernel of the constraint Jacobian.  ``parent`` marks
    this space as a subset of another one sharing the same coordinates.
    """

    def __init__(
        self,
        name: str,
        ambient_dim: int,
        constraint: Callable[[np.ndarray], np.ndarray] | None = None,
        tangent_rule: Callable[[np.ndarray], np.ndarray] | None = None,
        parent: "EmbeddedSpace | None" = None,
    ):
        self.name = name
        self.ambient_dim = int(ambient_dim)
        self.constraint = constraint
        self.tangent_rule = tangent_rule
        self.parent = parent

    def __repr__(self):
        return f"EmbeddedSpace({self.name!r}, ambient_dim={self.ambient_dim})"

    def residual_vector(self, x) -> np.ndarray:
        if self.constraint is None:
            return np.zeros(0)
        return np.atleast_1d(np.asarray(self.constraint(np.asarray(x, float)), dtype=float))

    def residual(self, x) -> float:
        r = self.residual_vector(x)
        return float(np.max(np.abs(r))) if r.size else 0.0

    def constraint_jacobian(self, x, step: float = 1e-6) -> np.ndarray:
        x = np.asarray(x, float)
        r0 = self.residual_vector(x)
        jac = np.zeros((r0.size, self.ambient_dim))
        if r0.size == 0:
            return jac
        for i in range(self.ambient_dim):
            e = np.zeros(self.ambient_dim)
            e[i] = step
            jac[:, i] = (self.residual_vector(x + e) - self.residual_vector(x - e)) / (2 * step)
        return jac

    def tangent_basis(self, x) -> np.ndarray:
        """Orthonormal basis (columns) of the tangent space at ``x``."""
        if self.tangent_rule is not None:
            basis = np.asarray(self.tangent_rule(np.asarray(x, float)), dtype=float)
            if basis.size == 0:
                return np.zeros((self.ambient_dim, 0))
            q, _ = np.linalg.qr(basis)
            return q
        if self.ambient_dim == 0:
            return np.zeros((0, 0))
        jac = self.constraint_jacobian(x)
        if jac.shape[0] == 0:
            return np.eye(self.ambient_dim)
        return null_space(jac, rcond=TANGENT_RCOND)

    def project(self, x, v) -> np.ndarray:
        """Orthogonal projection of an ambient vector onto the tangent space."""
        t = self.tangent_basis(x)
        return t @ (t.T @ np.asarray(v, float))

    def random_tangent(self, x, rng: np.random.Generator) -> np.ndarray:
        t = self.tangent_basis(x)
        return t @ rng.standard_normal(t.shape[1])

    def is_subset_of(self, other: "EmbeddedSpace") -> bool:
        s = self
        while s is not None:
            if s is other:
                return True
            s = s.parent
        return False


def euclidean(n: int, name: str | None = None) -> EmbeddedSpace:
    return EmbeddedSpace(name or f"R{n}", n)


class ProductSpace(EmbeddedSpace):
    """Cartesian product; ambient coordinates are concatenated."""

    def __init__(self, factors: Sequence[EmbeddedSpace], name: str | None = None):
        self.factors = tuple(factors)
        self.offsets = np.cumsum([0] + [f.ambient_dim for f in self.factors])
        super().__init__(
            name or " x ".join(f.name for f in self.factors),
            int(self.offsets[-1]),
            constraint=self._constraint,
            tangent_rule=self._tangent,
        )

    def slices(self):
        return [slice(int(a), int(b)) for a, b in zip(self.offsets[:-1], self.offsets[1:])]

    def split(self, x) -> list[np.ndarray]:
        x = np.asarray(x, float)
        return [x[s] for s in self.slices()]

    def join(self, *parts) -> np.ndarray:
        return np.concatenate([np.asarray(p, float).ravel() for p in parts]) if parts else np.zeros(0)

    def _constraint(self, x):
        parts = [f.residual_vector(p) for f, p in zip(self.factors, self.split(x))]
        return np.concatenate(parts) if parts else np.zeros(0)

    def _tangent(self, x):
        blocks = [f.tangent_basis(p) for f, p in zip(self.factors, self.split(x))]
        cols = sum(b.shape[1] for b in blocks)
        out = np.zeros((self.ambient_dim, cols))
        c = 0
        for s, b in zip(self.slices(), blocks):
            out[s, c:c + b.shape[1]] = b
            c += b.shape[1]
        return out


class Plot:
    """A smooth map from an open box in R^domain_dim into ``target``."""

    def __init__(self, name: str, domain_dim: int, domain_box, fn: Callable, target: EmbeddedSpace):
        self.name = name
        self.domain_dim = int(domain_dim)
        box = np.asarray(domain_box, dtype=float)
        if box.ndim == 1:
            box = np.tile(box, (self.domain_dim, 1))
        self.domain_box = box
        self.fn = fn
        self.target = target

    def __call__(self, u) -> np.ndarray:
        return np.asarray(self.fn(np.atleast_1d(np.asarray(u, float))), dtype=float)

    def __repr__(self):
        return f"Plot({self.name!r}, domain_dim={self.domain_dim}, target={self.target.name!r})"


def cube(dim: int, half_width: float = 1.0) -> np.ndarray:
    return np.tile([-half_width, half_width], (dim, 1))


def constant_plot(point, target: EmbeddedSpace, domain_dim: int = 1) -> Plot:
    p = np.asarray(point, float)
    return Plot("constant", domain_dim, cube(domain_dim), lambda u: p, target)


def _central(plot: Plot, u, du, h):
    return (plot(u + h * du) - plot(u - h * du)) / (2 * h)


def plot_derivative(plot: Plot, u, du, fd_step: float = FD_STEP) -> np.ndarray:
    """Directional derivative D plot(u) du.

    Central differences at ``fd_step`` and ``fd_step/2`` combined by one
    Richardson level.  Raises if the two raw estimates disagree by more than
    ``RICHARDSON_TOL`` relative to the result.
    """
    u = np.atleast_1d(np.asarray(u, float))
    du = np.atleast_1d(np.asarray(du, float))
    reach = 2 * fd_step * float(np.max(np.abs(du))) if du.size else 0.0
    lo, hi = plot.domain_box[:, 0], plot.domain_box[:, 1]
    if np.any(u - reach < lo) or np.any(u + reach > hi):
        raise BoundaryViolation(f"{plot.name}: u={u} within 2*fd_step of the domain boundary")
    d1 = _central(plot, u, du, fd_step)
    d2 = _central(plot, u, du, fd_step / 2)
    rich = (4 * d2 - d1) / 3
    scale = max(float(np.linalg.norm(rich)), 1.0)
    if d1.size and float(np.linalg.norm(d1 - d2)) > RICHARDSON_TOL * scale:
        raise DerivativeFailure(f"{plot.name}: Richardson disagreement at u={u}")
    return rich


def plot_jacobian(plot: Plot, u, fd_step: float = FD_STEP) -> np.ndarray:
    """Columns are derivatives along the coordinate axes of the domain."""
    eye = np.eye(plot.domain_dim)
    cols = [plot_derivative(plot, u, eye[i], fd_step) for i in range(plot.domain_dim)]
    return np.stack(cols, axis=1) if cols else np.zeros((plot.target.ambient_dim, 0))


def _perm_sign(perm) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


class KForm:
    """A k-form on ``space``: ``rule(x, v1, ..., vk)`` on ambient vectors.

    For k >= 2 the rule is antisymmetrized on evaluation, so the form is
    exactly alternating whatever the rule does.  ``exact_d`` optionally
    carries the analytic exterior derivative.
    """

    def __init__(self, space: EmbeddedSpace, arity: int, rule: Callable, exact_d: "KForm | None" = None,
                 name: str = "", antisymmetrize: bool = True):
        if not 0 <= arity <= MAX_ARITY:
            raise ArityMismatch(f"arity {arity} outside 0..{MAX_ARITY}")
        if exact_d is not None and exact_d.arity != arity + 1:
            raise ArityMismatch("exact_d must have arity k+1")
        self.space = space
        self.arity = int(arity)
        self.rule = rule
        self.exact_d = exact_d
        self.name = name
        self.antisymmetrize = antisymmetrize
        self._perms = [(p, _perm_sign(p)) for p in itertools.permutations(range(arity))]

    def __repr__(self):
        return f"KForm({self.name!r}, arity={self.arity}, space={self.space.name!r})"

    def __call__(self, x, *vectors) -> float:
        if len(vectors) != self.arity:
            raise ArityMismatch(f"{self.name}: expected {self.arity} vectors, got {len(vectors)}")
        if self.arity <= 1 or not self.antisymmetrize:
            return float(self.rule(x, *vectors))
        total = 0.0
        for perm, sign in self._perms:
            total += sign * float(self.rule(x, *(vectors[i] for i in perm)))
        return total / math.factorial(self.arity)

    def __neg__(self):
        return scale_form(self, -1.0)


def scale_form(form: KForm, c: float, name: str | None = None) -> KForm:
    d = scale_form(form.exact_d, c) if form.exact_d is not None else None
    return KForm(form.space, form.arity, lambda x, *v: c * form(x, *v), exact_d=d,
                 name=name or f"{c:g}*{form.name}", antisymmetrize=False)


def sum_forms(forms: Sequence[KForm], space: EmbeddedSpace | None = None, name: str = "") -> KForm:
    arity = forms[0].arity
    if any(f.arity != arity for f in forms):
        raise ArityMismatch("cannot add forms of different arity")
    space = space or forms[0].space
    d = None
    if all(f.exact_d is not None for f in forms):
        d = sum_forms([f.exact_d for f in forms], space)
    return KForm(space, arity, lambda x, *v: sum(f(x, *v) for f in forms), exact_d=d,
                 name=name or "+".join(f.name for f in forms), antisymmetrize=False)


def lift_form(form: KForm, product: ProductSpace, index: int) -> KForm:
    """Pull a form on one factor back to the product by the projection."""
    sl = product.slices()[index]
    d = lift_form(form.exact_d, product, index) if form.exact_d is not None else None
    return KForm(product, form.arity, lambda x, *v: form(x[sl], *(w[sl] for w in v)),
                 exact_d=d, name=f"pr{index}*{form.name}", antisymmetrize=False)


def zero_form(space: EmbeddedSpace, arity: int, name: str = "0") -> KForm:
    d = zero_form(space, arity + 1) if arity < MAX_ARITY else None
    return KForm(space, arity, lambda x, *v: 0.0, exact_d=d, name=name, antisymmetrize=False)


def pullback_form(form: KForm, f: Callable[[np.ndarray], np.ndarray], df: Callable,
                  space: EmbeddedSpace, name: str = "") -> KForm:
    """Pull ``form`` back by a map ``f`` with tangent map ``df(x, v)``."""
    d = pullback_form(form.exact_d, f, df, space) if form.exact_d is not None else None
    return KForm(space, form.arity, lambda x, *v: form(f(x), *(df(x, w) for w in v)),
                 exact_d=d, name=name or f"f*{form.name}", antisymmetrize=False)


class DomainForm:
    """A k-form on an open box in R^n, given by its coefficient tensor."""

    def __init__(self, domain_dim: int, arity: int, coeff: Callable[[np.ndarray], np.ndarray],
                 domain_box=None, name: str = ""):
        self.domain_dim = int(domain_dim)
        self.arity = int(arity)
        self.coeff = coeff
        self.domain_box = cube(domain_dim) if domain_box is None else np.asarray(domain_box, float)
        self.name = name

    def __repr__(self):
        return f"DomainForm({self.name!r}, domain_dim={self.domain_dim}, arity={self.arity})"

    def coefficients(self, u) -> np.ndarray:
        c = np.asarray(self.coeff(np.atleast_1d(np.asarray(u, float))), dtype=float)
        return c.reshape((self.domain_dim,) * self.arity)

    def __call__(self, u, *vectors) -> float:
        if len(vectors) != self.arity:
            raise ArityMismatch(f"{self.name}: expected {self.arity} vectors")
        c = self.coefficients(u)
        for v in vectors:
            c = np.tensordot(np.asarray(v, float), c, axes=(0, 0))
        return float(c)

    def __sub__(self, other: "DomainForm") -> "DomainForm":
        _same_shape(self, other)
        return DomainForm(self.domain_dim, self.arity,
                          lambda u: self.coefficients(u) - other.coefficients(u),
                          self.domain_box, f"{self.name}-{other.name}")


def _same_shape(a: DomainForm, b: DomainForm):
    if a.domain_dim != b.domain_dim or a.arity != b.arity:
        raise ArityMismatch(f"domain forms differ: ({a.domain_dim},{a.arity}) vs ({b.domain_dim},{b.arity})")


def _coefficients_from_vectors(form: KForm, x, cols: np.ndarray) -> np.ndarray:
    n = cols.shape[1]
    k = form.arity
    if k == 0:
        return np.array(form(x))
    out = np.zeros((n,) * k)
    for idx in itertools.combinations(range(n), k):
        val = form(x, *(cols[:, i] for i in idx))
        for perm in itertools.permutations(range(k)):
            out[tuple(idx[p] for p in perm)] = _perm_sign(perm) * val
    return out


def pullback(form: KForm, plot: Plot, fd_step: float = FD_STEP) -> DomainForm:
    """plot* form, with the plot's derivative taken by finite differences."""
    if not plot.target.is_subset_of(form.space):
        raise SpaceMismatch(f"plot into {plot.target.name!r} but form lives on {form.space.name!r}")

    def coeff(u):
        x = plot(u)
        cols = plot_jacobian(plot, u, fd_step) if form.arity else np.zeros((x.size, plot.domain_dim))
        return _coefficients_from_vectors(form, x, cols)

    return DomainForm(plot.domain_dim, form.arity, coeff, plot.domain_box,
                      f"{plot.name}*{form.name}")


def domain_exterior_derivative(df: DomainForm, step: float = D_STEP) -> DomainForm:
    """Coordinate exterior derivative by central differences of the coefficients.

    The default step is larger than the plot step because the coefficients
    of a pulled-back form already carry finite-difference noise.
    """
    n, k = df.domain_dim, df.arity
    if k + 1 > MAX_ARITY:
        raise ArityMismatch("exterior derivative would exceed the supported arity")

    def grad(u):
        g = []
        for i in range(n):
            e = np.zeros(n)
            e[i] = 1.0
            lo, hi = df.domain_box[i]
            if u[i] - 2 * step < lo or u[i] + 2 * step > hi:
                raise BoundaryViolation(f"u={u} too close to the boundary for d")
            d1 = (df.coefficients(u + step * e) - df.coefficients(u - step * e)) / (2 * step)
            d2 = (df.coefficients(u + step / 2 * e) - df.coefficients(u - step / 2 * e)) / step
            rich = (4 * d2 - d1) / 3
            if np.max(np.abs(d1 - d2), initial=0.0) > RICHARDSON_TOL * max(np.max(np.abs(rich), initial=0.0), 1.0):
                raise DerivativeFailure(f"{df.name}: coefficient derivative unstable at u={u}")
            g.append(rich)
        return np.stack(g, axis=0)

    def coeff(u):
        d = grad(u)
        if k == 0:
            return d
        if k == 1:
            return d - d.T
        return d - np.transpose(d, (1, 0, 2)) + np.transpose(d, (1, 2, 0))

    return DomainForm(n, k + 1, coeff, df.domain_box, f"d({df.name})")


def sample_domain_point(box: np.ndarray, rng: np.random.Generator, margin: float = 0.1) -> np.ndarray:
    lo, hi = box[:, 0], box[:, 1]
    pad = margin * (hi - lo)
    return rng.uniform(lo + pad, hi - pad)


def forms_equal_on_samples(f1: DomainForm, f2: DomainForm, sampler: Sampler,
                           atol: float = EQUAL_ATOL, rtol: float = EQUAL_RTOL,
                           name: str = "forms_equal", vectors_per_point: int = 1) -> CheckReport:
    """Compare two domain forms on seeded (u, vector tuple) samples.

    Passes iff max residual < atol + rtol * (max sampled |value|).  The
    worst sample is returned as the witness.
    """
    _same_shape(f1, f2)
    rng = sampler.rng(name)
    box = np.maximum(f1.domain_box[:, :1], f2.domain_box[:, :1]), np.minimum(f1.domain_box[:, 1:], f2.domain_box[:, 1:])
    box = np.hstack(box)
    residuals, scale, worst = [], 0.0, None
    for _ in range(sampler.samples):
        u = sample_domain_point(box, rng)
        c1, c2 = f1.coefficients(u), f2.coefficients(u)
        for _ in range(vectors_per_point):
            vs = [rng.standard_normal(f1.domain_dim) for _ in range(f1.arity)]
            a, b = c1, c2
            for v in vs:
                a = np.tensordot(v, a, axes=(0, 0))
                b = np.tensordot(v, b, axes=(0, 0))
            r = abs(float(a) - float(b))
            scale = max(scale, abs(float(a)), abs(float(b)))
            residuals.append(r)
            if worst is None or r > worst["residual"]:
                worst = {"u": u.tolist(), "vectors": [v.tolist() for v in vs], "residual": r,
                         "values": [float(a), float(b)]}
    res = np.array(residuals)
    tol = atol + rtol * scale
    mx = float(res.max()) if res.size else 0.0
    return CheckReport(
        name=name,
        verdict=classify(mx, tol),
        max_residual=mx,
        mean_residual=float(res.mean()) if res.size else 0.0,
        n_samples=int(res.size),
        tolerance=tol,
        witness=worst,
        details={"scale": scale},
        seed=sampler.seed,
    )


def trig_polynomial(rng: np.random.Generator, out_dim: int, domain_dim: int, degree: int = 3,
                    amplitude: float = 2.0) -> Callable[[np.ndarray], np.ndarray]:
    """Seeded real-analytic map R^domain_dim -> R^out_dim.

    Each component is c + sum over axes m and harmonics j <= degree of
    a cos(j u_m) + b sin(j u_m), plus one mixed term sin(u . w); the absolute
    coefficients of a component sum to at most ``amplitude``.
    """
    a = rng.standard_normal((out_dim, degree, domain_dim))
    b = rng.standard_normal((out_dim, degree, domain_dim))
    c = rng.standard_normal(out_dim)
    e = rng.standard_normal(out_dim)
    w = rng.standard_normal(domain_dim)
    total = np.abs(a).sum(axis=(1, 2)) + np.abs(b).sum(axis=(1, 2)) + np.abs(c) + np.abs(e)
    scale = amplitude * rng.uniform(0.5, 1.0, out_dim) / np.where(total > 0, total, 1.0)
    a, b, c, e = a * scale[:, None, None], b * scale[:, None, None], c * scale, e * scale
    harmonics = np.arange(1, degree + 1)[:, None]

    def f(u):
        u = np.atleast_1d(np.asarray(u, float))
        ju = harmonics * u[None, :]
        return c + np.einsum("ijm,jm->i", a, np.cos(ju)) + np.einsum("ijm,jm->i", b, np.sin(ju)) \
            + e * np.sin(float(u @ w))

    return f
