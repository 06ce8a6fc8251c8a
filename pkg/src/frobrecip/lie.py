"""Matrix Lie groups with fixed algebra bases.

Algebra elements are coordinate vectors in ``group.basis``; coalgebra
elements use the dual coordinates, so the pairing is the dot product.
Group points are embedded into a real ambient space (real and imaginary
parts stacked for complex groups) so that group-valued plots are ordinary
plots.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .calculus import EmbeddedSpace, Plot, plot_derivative
from .errors import DerivativeFailure, GroupMismatch

GROUP_TOL = 1e-10
MC_TOL = 1e-6


def expm_taylor(a: np.ndarray) -> np.ndarray:
    """Scaling-and-squaring Taylor exponential, used when no closed form exists."""
    a = np.asarray(a)
    norm = float(np.max(np.abs(a))) * a.shape[0] if a.size else 0.0
    s = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0.5 else 0
    b = a / (2.0**s)
    out = np.eye(a.shape[0], dtype=b.dtype)
    term = np.eye(a.shape[0], dtype=b.dtype)
    for k in range(1, 30):
        term = term @ b / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


class MatrixGroup:
    """Base class. Subclasses set ``id``, ``n``, ``is_complex`` and ``basis``."""

    id: str = ""
    n: int = 0
    is_complex: bool = False
    basis: np.ndarray

    def __repr__(self):
        return f"{type(self).__name__}({self.id})"

    def __eq__(self, other):
        return isinstance(other, MatrixGroup) and other.id == self.id

    def __hash__(self):
        return hash(self.id)

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    @property
    def dtype(self):
        return complex if self.is_complex else float

    def identity(self) -> np.ndarray:
        return np.eye(self.n, dtype=self.dtype)

    def hat(self, coords) -> np.ndarray:
        c = np.asarray(coords, float).reshape(self.dim)
        if self.dim == 0:
            return np.zeros((self.n, self.n), dtype=self.dtype)
        return np.tensordot(c, self.basis, axes=(0, 0))

    @cached_property
    def _vee_solver(self) -> np.ndarray:
        b = self.basis.reshape(self.dim, -1)
        real = np.concatenate([b.real, b.imag], axis=1).T if self.is_complex else b.real.T
        return np.linalg.pinv(real)

    def vee(self, a: np.ndarray) -> np.ndarray:
        """Least-squares coordinates of a matrix in the algebra basis."""
        if self.dim == 0:
            return np.zeros(0)
        flat = np.asarray(a).reshape(-1)
        real = np.concatenate([flat.real, flat.imag]) if self.is_complex else flat.real
        return self._vee_solver @ real

    def vee_residual(self, a: np.ndarray) -> float:
        return float(np.max(np.abs(self.hat(self.vee(a)) - a), initial=0.0))

    def exp_matrix(self, coords) -> np.ndarray:
        return expm_taylor(self.hat(coords))

    def constraint(self, m: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def inverse(self, m: np.ndarray) -> np.ndarray:
        return np.conj(m).T

    def residual(self, m: np.ndarray) -> float:
        r = np.asarray(self.constraint(np.asarray(m)))
        return float(np.max(np.abs(r), initial=0.0))

    def adjoint_matrix(self, g: np.ndarray) -> np.ndarray:
        """Matrix of Ad_g in the algebra basis (columns are images of basis vectors)."""
        gi = self.inverse(g)
        cols = [self.vee(g @ b @ gi) for b in self.basis]
        return np.stack(cols, axis=1) if cols else np.zeros((0, 0))

    def coadjoint_coords(self, g: np.ndarray, mu) -> np.ndarray:
        """Ad*_g mu, defined by <Ad*_g mu, Z> = <mu, Ad_{g^-1} Z>."""
        mu = np.asarray(mu, float)
        if self.dim == 0:
            return mu.copy()
        return self.adjoint_matrix(self.inverse(g)).T @ mu

    def bracket_coords(self, a, b) -> np.ndarray:
        x, y = self.hat(a), self.hat(b)
        return self.vee(x @ y - y @ x)

    def random_coords(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        return scale * rng.standard_normal(self.dim)

    def random_matrix(self, rng: np.random.Generator, scale: float = 2.0) -> np.ndarray:
        return self.exp_matrix(self.random_coords(rng, scale))

    @property
    def point_dim(self) -> int:
        return 2 * self.n * self.n if self.is_complex else self.n * self.n

    def to_point(self, m: np.ndarray) -> np.ndarray:
        m = np.asarray(m)
        if self.is_complex:
            return np.concatenate([m.real.ravel(), m.imag.ravel()])
        return np.asarray(m.real, float).ravel()

    def from_point(self, x) -> np.ndarray:
        x = np.asarray(x, float)
        k = self.n * self.n
        if self.is_complex:
            return (x[:k] + 1j * x[k:]).reshape(self.n, self.n)
        return x.reshape(self.n, self.n)

    @cached_property
    def carrier(self) -> EmbeddedSpace:
        def constraint(x):
            return np.asarray(self.constraint(self.from_point(x)), dtype=complex).view(float).ravel() \
                if self.is_complex else np.asarray(self.constraint(self.from_point(x)), float).ravel()

        def tangent(x):
            g = self.from_point(x)
            cols = [self.to_point(b @ g) for b in self.basis]
            return np.stack(cols, axis=1) if cols else np.zeros((self.point_dim, 0))

        space = EmbeddedSpace(self.id, self.point_dim, constraint, tangent)
        space.group = self
        return space


def _orthogonal_constraint(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    return np.concatenate([(m.T @ m - np.eye(n)).ravel(), [np.linalg.det(m) - 1.0]])


class U1(MatrixGroup):
    id = "U1"
    n = 1
    is_complex = True
    basis = np.array([[[1j]]])

    def exp_matrix(self, coords):
        return np.array([[np.exp(1j * float(np.asarray(coords).reshape(1)[0]))]])

    def constraint(self, m):
        return np.array([abs(m[0, 0]) ** 2 - 1.0])


class SO2(MatrixGroup):
    id = "SO2"
    n = 2
    basis = np.array([[[0.0, -1.0], [1.0, 0.0]]])

    def exp_matrix(self, coords):
        t = float(np.asarray(coords).reshape(1)[0])
        c, s = np.cos(t), np.sin(t)
        return np.array([[c, -s], [s, c]])

    def constraint(self, m):
        return _orthogonal_constraint(np.real(m))


def so3_hat(w) -> np.ndarray:
    w = np.asarray(w, float)
    return np.array([[0.0, -w[2], w[1]], [w[2], 0.0, -w[0]], [-w[1], w[0], 0.0]])


def rodrigues(w) -> np.ndarray:
    w = np.asarray(w, float)
    theta = float(np.linalg.norm(w))
    k = so3_hat(w)
    if theta < 1e-8:
        a, b = 1.0 - theta**2 / 6, 0.5 - theta**2 / 24
    else:
        a, b = np.sin(theta) / theta, (1 - np.cos(theta)) / theta**2
    return np.eye(3) + a * k + b * (k @ k)


class SO3(MatrixGroup):
    id = "SO3"
    n = 3
    basis = np.stack([so3_hat(e) for e in np.eye(3)])

    def exp_matrix(self, coords):
        return rodrigues(coords)

    def vee(self, a):
        a = np.real(np.asarray(a))
        return 0.5 * np.array([a[2, 1] - a[1, 2], a[0, 2] - a[2, 0], a[1, 0] - a[0, 1]])

    def constraint(self, m):
        return _orthogonal_constraint(np.real(m))

    def random_matrix(self, rng, scale: float = 2.0):
        # Uniform on SO3 via a normalized Gaussian quaternion.
        q = rng.standard_normal(4)
        q /= np.linalg.norm(q)
        w, x, y, z = q
        return np.array([
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ])


class Torus2(MatrixGroup):
    id = "Torus2"
    n = 2
    is_complex = True
    basis = np.array([np.diag([1j, 0]), np.diag([0, 1j])])

    def exp_matrix(self, coords):
        t = np.asarray(coords, float).reshape(2)
        return np.diag(np.exp(1j * t))

    def constraint(self, m):
        d = np.diag(m)
        return np.concatenate([np.abs(d) ** 2 - 1.0, np.abs([m[0, 1], m[1, 0]])])

    def angles(self, m) -> np.ndarray:
        return np.angle(np.diag(m))


class DirectProduct(MatrixGroup):
    """Block-diagonal product; the exponential is computed blockwise."""

    def __init__(self, a: MatrixGroup, b: MatrixGroup):
        if _depth(a) + _depth(b) + 1 > 2:
            raise ValueError("DirectProduct nesting depth is limited to 2")
        self.a, self.b = a, b
        self.id = f"DirectProduct({a.id},{b.id})"
        self.n = a.n + b.n
        self.is_complex = a.is_complex or b.is_complex
        dt = self.dtype
        blocks = []
        for m in a.basis:
            z = np.zeros((self.n, self.n), dtype=dt)
            z[:a.n, :a.n] = m
            blocks.append(z)
        for m in b.basis:
            z = np.zeros((self.n, self.n), dtype=dt)
            z[a.n:, a.n:] = m
            blocks.append(z)
        self.basis = np.array(blocks, dtype=dt).reshape(len(blocks), self.n, self.n)

    def block(self, ga: np.ndarray, gb: np.ndarray) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=self.dtype)
        out[:self.a.n, :self.a.n] = ga
        out[self.a.n:, self.a.n:] = gb
        return out

    def split(self, m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        m = np.asarray(m)
        ga = m[:self.a.n, :self.a.n]
        gb = m[self.a.n:, self.a.n:]
        if not self.a.is_complex:
            ga = ga.real
        if not self.b.is_complex:
            gb = gb.real
        return ga, gb

    def split_coords(self, c) -> tuple[np.ndarray, np.ndarray]:
        c = np.asarray(c, float)
        return c[:self.a.dim], c[self.a.dim:]

    def exp_matrix(self, coords):
        ca, cb = self.split_coords(coords)
        return self.block(self.a.exp_matrix(ca), self.b.exp_matrix(cb))

    def constraint(self, m):
        ga, gb = self.split(m)
        off = np.concatenate([np.abs(m[:self.a.n, self.a.n:]).ravel(), np.abs(m[self.a.n:, :self.a.n]).ravel()])
        return np.concatenate([np.abs(self.a.constraint(ga)), np.abs(self.b.constraint(gb)), off])

    def random_matrix(self, rng, scale: float = 2.0):
        return self.block(self.a.random_matrix(rng, scale), self.b.random_matrix(rng, scale))


def _depth(g: MatrixGroup) -> int:
    return 1 + max(_depth(g.a), _depth(g.b)) if isinstance(g, DirectProduct) else 0


class Subgroup(MatrixGroup):
    """Connected subgroup exp(span of generators) of a parent group.

    ``generators`` are rows of parent algebra coordinates; with orthonormal
    rows the restriction mu|h is simply ``generators @ mu``.  The subgroup
    need not be closed (an irrational winding in Torus2 is allowed), and a
    zero-dimensional subgroup stands for the trivial group.
    """

    def __init__(self, parent: MatrixGroup, generators, name: str | None = None):
        self.parent = parent
        gens = np.asarray(generators, float).reshape(-1, parent.dim)
        self.generators = gens
        self.n = parent.n
        self.is_complex = parent.is_complex
        self.id = name or f"{parent.id}>span{np.round(gens, 12).tolist()}"
        if gens.shape[0]:
            self.basis = np.tensordot(gens, parent.basis, axes=(1, 0))
        else:
            self.basis = np.zeros((0, self.n, self.n), dtype=parent.dtype)

    def exp_matrix(self, coords):
        c = np.asarray(coords, float).reshape(self.dim)
        return self.parent.exp_matrix(self.generators.T @ c) if self.dim else self.parent.identity()

    def constraint(self, m):
        return self.parent.constraint(m)

    def include(self, coords) -> np.ndarray:
        """Algebra inclusion h -> g in coordinates."""
        return self.generators.T @ np.asarray(coords, float)

    def restrict(self, mu) -> np.ndarray:
        """Coalgebra restriction g* -> h*."""
        return self.generators @ np.asarray(mu, float)

    def annihilator(self) -> np.ndarray:
        """Orthonormal rows spanning ann(h) inside g* coordinates."""
        if self.dim == 0:
            return np.eye(self.parent.dim)
        _, s, vt = np.linalg.svd(self.generators)
        return vt[self.dim:]


def winding_subgroup(alpha: float, name: str | None = None) -> Subgroup:
    """One-parameter subgroup t -> (e^{it}, e^{i alpha t}) of Torus2 with unit generator."""
    gen = np.array([1.0, alpha]) / np.hypot(1.0, alpha)
    return Subgroup(Torus2(), gen, name or f"Winding({alpha:.12g})")


def so2_in_so3() -> Subgroup:
    return Subgroup(SO3(), [0.0, 0.0, 1.0], "SO2<SO3")


def trivial_subgroup(parent: MatrixGroup) -> Subgroup:
    return Subgroup(parent, np.zeros((0, parent.dim)), f"{{e}}<{parent.id}")


_BASE = {"U1": U1, "SO2": SO2, "SO3": SO3, "Torus2": Torus2}


def catalog_group(gid: str) -> MatrixGroup:
    """Look up a catalog group by id, e.g. ``"SO3"`` or ``"DirectProduct(SO3,Torus2)"``."""
    gid = gid.replace(" ", "")
    if gid in _BASE:
        return _BASE[gid]()
    m = re.fullmatch(r"DirectProduct\((.*)\)", gid)
    if m:
        inner = m.group(1)
        level = 0
        for i, ch in enumerate(inner):
            level += ch == "("
            level -= ch == ")"
            if ch == "," and level == 0:
                return DirectProduct(catalog_group(inner[:i]), catalog_group(inner[i + 1:]))
    raise KeyError(f"unknown group id {gid!r}")


# Element wrappers ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupElement:
    group: MatrixGroup
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=self.group.dtype)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        res = self.group.residual(m)
        if res > GROUP_TOL:
            raise ValueError(f"matrix violates {self.group.id} relations (residual {res:.2e})")

    def inverse(self) -> "GroupElement":
        return GroupElement(self.group, self.group.inverse(self.matrix))


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    group: MatrixGroup
    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).reshape(-1)
        if c.size != self.group.dim:
            raise ValueError(f"expected {self.group.dim} coordinates, got {c.size}")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def matrix(self) -> np.ndarray:
        return self.group.hat(self.coords)


@dataclass(frozen=True, eq=False)
class CoalgebraElement:
    group: MatrixGroup
    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).reshape(-1)
        if c.size != self.group.dim:
            raise ValueError(f"expected {self.group.dim} coordinates, got {c.size}")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def pair(self, z: AlgebraElement) -> float:
        _same(self.group, z.group)
        return float(self.coords @ z.coords)


def _same(a: MatrixGroup, b: MatrixGroup):
    if a.id != b.id:
        raise GroupMismatch(f"{a.id} vs {b.id}")


def identity(group: MatrixGroup) -> GroupElement:
    return GroupElement(group, group.identity())


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    _same(a.group, b.group)
    return GroupElement(a.group, a.matrix @ b.matrix)


def exp(z: AlgebraElement) -> GroupElement:
    return GroupElement(z.group, z.group.exp_matrix(z.coords))


def coadjoint(g: GroupElement, mu: CoalgebraElement) -> CoalgebraElement:
    _same(g.group, mu.group)
    return CoalgebraElement(g.group, g.group.coadjoint_coords(g.matrix, mu.coords))


def adjoint(g: GroupElement, z: AlgebraElement) -> AlgebraElement:
    _same(g.group, z.group)
    return AlgebraElement(g.group, g.group.adjoint_matrix(g.matrix) @ z.coords)


def bracket(z: AlgebraElement, w: AlgebraElement) -> AlgebraElement:
    _same(z.group, w.group)
    return AlgebraElement(z.group, z.group.bracket_coords(z.coords, w.coords))


def right_mc_coords(group: MatrixGroup, q: np.ndarray, dq: np.ndarray) -> np.ndarray:
    """Coordinates of dq q^-1, checked to lie in the algebra."""
    z = dq @ group.inverse(q)
    c = group.vee(z)
    scale = max(float(np.max(np.abs(z), initial=0.0)), 1.0)
    if group.vee_residual(z) > MC_TOL * scale:
        raise DerivativeFailure(f"dq q^-1 is not in the {group.id} algebra")
    return c


def maurer_cartan(plot: Plot, u, du, group: MatrixGroup | None = None, fd_step: float = 1e-5) -> AlgebraElement:
    """(DQ(u) du) Q(u)^-1 in algebra coordinates, for a plot into a group carrier."""
    if group is None:
        group = getattr(plot.target, "group", None)
        if group is None:
            group = _carrier_group(plot.target)
    q = group.from_point(plot(u))
    dq = group.from_point(plot_derivative(plot, u, du, fd_step))
    return AlgebraElement(group, right_mc_coords(group, q, dq))


def _carrier_group(space: EmbeddedSpace) -> MatrixGroup:
    try:
        return catalog_group(space.name)
    except KeyError as exc:
        raise GroupMismatch(f"plot target {space.name!r} is not a group carrier") from exc


def group_plot(group: MatrixGroup, fn, domain_dim: int = 1, half_width: float = 1.0, name: str = "group_plot") -> Plot:
    """Wrap a matrix-valued function of u as a plot into the group carrier."""
    return Plot(name, domain_dim, np.tile([-half_width, half_width], (domain_dim, 1)),
                lambda u: group.to_point(fn(u)), group.carrier)


def reorthonormalize(m: np.ndarray) -> np.ndarray:
    """Nearest orthogonal/unitary matrix (polar factor). Never applied implicitly."""
    u, _, vh = np.linalg.svd(np.asarray(m))
    return u @ vh


def group_curve(group: MatrixGroup, rng: np.random.Generator, domain_dim: int, degree: int = 3,
                amplitude: float = 2.0):
    """u -> exp(trig polynomial in u), a seeded analytic map into the group."""
    from .calculus import trig_polynomial

    coords = trig_polynomial(rng, group.dim, domain_dim, degree, amplitude)
    return lambda u: group.exp_matrix(coords(u))
