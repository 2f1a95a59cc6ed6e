"""Cells, chains, Gauss-Legendre integration and the boundary operator."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .forms import (
    DifferentialForm,
    VectorField,
    exterior_differential,
    interior_product,
    lie_derivative,
)
from .multilinear import minors
from .orientation import EVEN, Orientation, Parity, index

__all__ = [
    "Cell",
    "Chain",
    "affine_cell",
    "point_cell",
    "ball_cell",
    "random_polynomial_cell",
    "integrate",
    "boundary",
    "stokes_residual",
    "wedge_current_integral",
    "current_boundary_residual",
    "gauss_legendre_cube",
    "DEFAULT_ORDER",
]

DEFAULT_ORDER = 8
CELL_FD_STEP = 1e-5


def gauss_legendre_cube(q: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensor-product Gauss-Legendre nodes ``(n**q, q)`` and weights on ``[0, 1]**q``."""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    if q == 0:
        return np.zeros((1, 0)), np.ones(1)
    pts = np.array(list(itertools.product(nodes, repeat=q)))
    wts = np.prod(np.array(list(itertools.product(weights, repeat=q))), axis=1)
    return pts, wts


def _params(s, q: int) -> np.ndarray:
    arr = np.asarray(s, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == q:
        return arr
    if q == 0:
        return np.zeros((1, 0))
    return arr.reshape(-1, q)


@dataclass(frozen=True, eq=False)
class Cell:
    """A smooth map of the unit ``q``-cube into ``R^D`` paired with an orientation.

    Parameters
    ----------
    q : int
        Cell dimension.
    map : callable
        ``(N, q) -> (N, D)``.
    orientation : Orientation
        Orientation of the ambient space carried by the cell.
    ambient : int
        Dimension ``D`` of the ambient space.
    jacobian : callable, optional
        ``(N, q) -> (N, D, q)``; central differences with step 1e-5 otherwise.
    """

    q: int
    map: Callable[[np.ndarray], np.ndarray]
    orientation: Orientation
    ambient: int = 4
    jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __call__(self, s) -> np.ndarray:
        s = _params(s, self.q)
        return np.asarray(self.map(s), dtype=float).reshape(len(s), self.ambient)

    def tangents(self, s) -> np.ndarray:
        s = _params(s, self.q)
        if self.jacobian is not None:
            return np.asarray(self.jacobian(s), dtype=float).reshape(len(s), self.ambient, self.q)
        out = np.empty((len(s), self.ambient, self.q))
        for i in range(self.q):
            e = np.zeros(self.q)
            e[i] = CELL_FD_STEP
            out[..., i] = (self(s + e) - self(s - e)) / (2 * CELL_FD_STEP)
        return out

    def face(self, axis: int, end: int) -> Cell:
        """Restriction to the face ``s_axis = end``."""
        if self.q == 0:
            raise ValueError("a 0-cell has no faces")

        def lift(t):
            t = _params(t, self.q - 1)
            return np.insert(t, axis, float(end), axis=1)

        jac = None
        if self.jacobian is not None:
            keep = [i for i in range(self.q) if i != axis]

            def jac(t):
                return self.jacobian(lift(t))[..., keep]

        return Cell(self.q - 1, lambda t: self.map(lift(t)), self.orientation, self.ambient, jac)

    def with_orientation(self, orientation: Orientation) -> Cell:
        return replace(self, orientation=orientation)


def affine_cell(origin, edges, orientation: Orientation | None = None) -> Cell:
    """The parallelepiped ``origin + sum s_i edges[i]``."""
    origin = np.asarray(origin, dtype=float)
    edges = np.asarray(edges, dtype=float).reshape(-1, origin.size)
    o = Orientation.reference() if orientation is None else orientation
    q = len(edges)
    cols = edges.T.copy()
    return Cell(
        q,
        lambda s: origin + _params(s, q) @ edges,
        o,
        origin.size,
        lambda s: np.broadcast_to(cols, (len(_params(s, q)),) + cols.shape),
    )


def ball_cell(center, radius: float = 1.0, orientation: Orientation | None = None) -> Cell:
    """A ball as a single 3-cell: the cube ``[-1, 1]**3`` pushed radially onto the sphere.

    The map is only piecewise smooth inside, but each boundary face is a smooth
    patch of the sphere of the given radius.
    """
    ctr = np.asarray(center, dtype=float).reshape(3)
    o = Orientation.reference() if orientation is None else orientation

    def chi(s):
        p = 2.0 * np.asarray(s, dtype=float).reshape(-1, 3) - 1.0
        inf = np.abs(p).max(axis=1, keepdims=True)
        two = np.linalg.norm(p, axis=1, keepdims=True)
        scale = np.divide(inf, two, out=np.ones_like(two), where=two > 0)
        return ctr + radius * p * scale

    return Cell(3, chi, o, 3)


def random_polynomial_cell(
    rng: np.random.Generator, q: int, ambient: int = 4, curvature: float = 0.3, orientation: Orientation | None = None
) -> Cell:
    """A curved embedded cell ``b + A s + sum_ij C_ij s_i s_j`` with an exact Jacobian."""
    b = rng.uniform(-0.5, 0.5, size=ambient)
    lin = rng.normal(size=(ambient, q))
    quad = curvature * rng.normal(size=(ambient, q, q))
    quad = 0.5 * (quad + quad.transpose(0, 2, 1))
    o = Orientation.reference() if orientation is None else orientation

    def chi(s):
        s = _params(s, q)
        return b + s @ lin.T + np.einsum("aij,ni,nj->na", quad, s, s)

    def jac(s):
        s = _params(s, q)
        return lin[None] + 2 * np.einsum("aij,nj->nai", quad, s)

    return Cell(q, chi, o, ambient, jac)


def point_cell(x, orientation: Orientation | None = None) -> Cell:
    return affine_cell(x, np.zeros((0, np.asarray(x).size)), orientation)


@dataclass(frozen=True, eq=False)
class Chain:
    """A formal weighted sum of cells of one dimension, tagged even or odd."""

    terms: tuple
    parity: Parity = EVEN

    def __post_init__(self) -> None:
        terms = tuple((float(w), c) for w, c in self.terms)
        dims = {c.q for _, c in terms}
        if len(dims) > 1:
            raise ValueError(f"chain mixes cell dimensions {sorted(dims)}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, cell: Cell, parity: Parity = EVEN, weight: float = 1.0) -> Chain:
        return cls(((weight, cell),), parity)

    @property
    def q(self) -> int:
        return self.terms[0][1].q if self.terms else 0

    def __add__(self, other: Chain) -> Chain:
        if other.parity != self.parity:
            raise ValueError("cannot add chains of different parity")
        return Chain(self.terms + other.terms, self.parity)

    def __neg__(self) -> Chain:
        return self * -1.0

    def __sub__(self, other: Chain) -> Chain:
        return self + (-other)

    def __mul__(self, scalar) -> Chain:
        return Chain(tuple((scalar * w, c) for w, c in self.terms), self.parity)

    __rmul__ = __mul__

    def with_parity(self, parity: Parity) -> Chain:
        return Chain(self.terms, parity)


def _cell_integral(a: DifferentialForm, cell: Cell, n: int) -> float:
    s, w = gauss_legendre_cube(cell.q, n)
    x = cell(s)
    if a.degree == 0:
        vals = a.coeffs(x)[:, 0]
    else:
        vals = np.einsum("ni,ni->n", a.coeffs(x), minors(cell.tangents(s)))
    return index(a.parity, cell.orientation.offset) * float(vals @ w)


def integrate(a: DifferentialForm, c: Chain, n: int = DEFAULT_ORDER) -> float:
    """Gauss-Legendre approximation of the integral of ``a`` over ``c``.

    Raises
    ------
    ValueError
        On a degree, parity or orientation-model mismatch.
    """
    if not c.terms:
        return 0.0
    if a.degree != c.q:
        raise ValueError(f"cannot integrate a {a.degree}-form over a {c.q}-chain")
    if a.parity != c.parity:
        raise ValueError(f"cannot integrate a form of parity {a.parity} over a chain tagged {c.parity}")
    total = 0.0
    for weight, cell in c.terms:
        if cell.orientation.model is not a.model:
            raise ValueError("cell orientation and form belong to different orientation models")
        if cell.ambient != a.dim:
            raise ValueError("cell and form live in different dimensions")
        total += weight * _cell_integral(a, cell, n)
    return total


def boundary(c: Chain) -> Chain:
    """``sum_i (-1)^i (face(i, 1) - face(i, 0))`` with axes counted from 0."""
    if c.q == 0:
        raise ValueError("a 0-chain has no boundary")
    terms = []
    for weight, cell in c.terms:
        for axis in range(cell.q):
            sign = -1.0 if axis % 2 else 1.0
            terms.append((weight * sign, cell.face(axis, 1)))
            terms.append((-weight * sign, cell.face(axis, 0)))
    return Chain(tuple(terms), c.parity)


def stokes_residual(a: DifferentialForm, c: Chain, n: int = DEFAULT_ORDER, mode: str = "auto") -> float:
    """``|int_c dA - int_{dc} A|``."""
    return abs(integrate(exterior_differential(a, mode), c, n) - integrate(a, boundary(c), n))


def wedge_current_integral(x: VectorField, c: Chain, a: DifferentialForm, n: int = DEFAULT_ORDER) -> float:
    """Integral of ``a`` over the current ``X ^ c``, that is of ``i_X a`` over ``c``."""
    return integrate(interior_product(x, a), c, n)


def current_boundary_residual(
    x: VectorField, c: Chain, a: DifferentialForm, n: int = DEFAULT_ORDER, mode: str = "auto"
) -> float:
    """Residual of ``int_{d(X^c)} A = int_c d_X A - int_{X ^ dc} A``.

    The left side is ``int_{X ^ c} dA`` by definition of the current boundary.
    """
    lhs = wedge_current_integral(x, c, exterior_differential(a, mode), n)
    rhs = integrate(lie_derivative(x, a, mode), c, n) - wedge_current_integral(x, boundary(c), a, n)
    return abs(lhs - rhs)


def flip(c: Chain, parity: Parity | None = None) -> Chain:
    """Reverse the orientation tag of every cell (P, or S in the relativistic model)."""
    from .orientation import GroupClass, STANDARD

    terms = []
    for w, cell in c.terms:
        model = cell.orientation.model
        g = GroupClass(model, "P" if model is STANDARD else "S")
        terms.append((w, cell.with_orientation(g * cell.orientation)))
    return Chain(tuple(terms), c.parity if parity is None else parity)


