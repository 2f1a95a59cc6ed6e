"""Differential forms on an affine space: coefficient fields with parity tags.

A form stores only its coefficient field over the reference basis; the
orientation argument enters through the parity sign at evaluation.  The
field optionally carries exact first and second derivatives, and polynomial
fields carry their monomial representation so that ``d`` stays exact to any
order.  Without exact derivatives, central finite differences are used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.stats import qmc

from .multilinear import (
    MultiCovector,
    _divergence_table,
    basis_indices,
    compound,
    wedge_table,
    weyl_matrix,
)
from .orientation import (
    STANDARD,
    Orientation,
    OrientationModel,
    Parity,
    classify,
    index,
    top_odd_parity,
)

__all__ = [
    "CoefficientField",
    "DifferentialForm",
    "VectorField",
    "DensityField",
    "AffineMap",
    "Diffeomorphism",
    "exterior_differential",
    "wedge",
    "interior_product",
    "lie_derivative",
    "pullback",
    "homotopy_potential",
    "weyl_form",
    "weyl_dual",
    "div",
    "random_polynomial_form",
    "fd_step",
]

FD_SCALE = 1e-4
CLOSED_TOL = 1e-6
CLOSED_SAMPLES = 64


def fd_step(x: np.ndarray, scale: float = FD_SCALE) -> np.ndarray:
    """Per-point central-difference step ``scale * max(1, |x|)``."""
    return scale * np.maximum(1.0, np.linalg.norm(x, axis=-1))


def _points(x, dim: int) -> np.ndarray:
    pts = np.asarray(x, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.shape[-1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got shape {pts.shape}")
    return pts


# --------------------------------------------------------------------------
# polynomial coefficient fields


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Vector-valued polynomial ``sum_t coeffs[:, t] * prod_l x_l ** exps[t, l]``."""

    exps: np.ndarray
    coeffs: np.ndarray

    def __call__(self, x: np.ndarray) -> np.ndarray:
        mono = np.prod(x[:, None, :] ** self.exps[None, :, :], axis=-1)
        return mono @ self.coeffs.T

    def derivative(self, axis: int) -> Polynomial:
        scale = self.exps[:, axis].astype(float)
        exps = self.exps.copy()
        exps[:, axis] = np.maximum(exps[:, axis] - 1, 0)
        return Polynomial(exps, self.coeffs * scale[None, :])

    def linear(self, matrix: np.ndarray) -> Polynomial:
        return Polynomial(self.exps, matrix @ self.coeffs)

    @staticmethod
    def concat(parts) -> Polynomial:
        parts = list(parts)
        exps = np.concatenate([p.exps for p in parts])
        coeffs = np.concatenate([p.coeffs for p in parts], axis=1)
        uniq, inv = np.unique(exps, axis=0, return_inverse=True)
        merged = np.zeros((coeffs.shape[0], len(uniq)))
        np.add.at(merged.T, inv.reshape(-1), coeffs.T)
        return Polynomial(uniq, merged)


# --------------------------------------------------------------------------
# coefficient fields with optional exact derivatives


@dataclass(frozen=True, eq=False)
class CoefficientField:
    """A map ``(N, dim) -> (N, m)`` with optional exact derivatives.

    Parameters
    ----------
    value : callable
        Batched coefficient values.
    ncomp, dim : int
        Output components and input dimension.
    jac : callable, optional
        Returns ``(N, m, dim)``; ``jac[n, k, l]`` is ``d value_k / d x^l``.
    hess : callable, optional
        Returns ``(N, m, dim, dim)``.
    poly : Polynomial, optional
        Monomial representation; when present it supplies all derivatives.
    """

    value: Callable[[np.ndarray], np.ndarray]
    ncomp: int
    dim: int
    jac: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hess: Optional[Callable[[np.ndarray], np.ndarray]] = None
    poly: Optional[Polynomial] = None

    @classmethod
    def constant(cls, coeffs, dim: int) -> CoefficientField:
        c = np.array(coeffs, dtype=float).reshape(-1)
        exps = np.zeros((1, dim), dtype=int)
        return cls.from_polynomial(Polynomial(exps, c[:, None]))

    @classmethod
    def from_polynomial(cls, poly: Polynomial) -> CoefficientField:
        return cls(poly, poly.coeffs.shape[0], poly.exps.shape[1], poly=poly)

    @property
    def has_jacobian(self) -> bool:
        return self.poly is not None or self.jac is not None

    @property
    def has_hessian(self) -> bool:
        return self.poly is not None or self.hess is not None

    def __call__(self, x) -> np.ndarray:
        pts = _points(x, self.dim)
        out = np.asarray(self.value(pts), dtype=float)
        return out.reshape(len(pts), self.ncomp)

    def partial(self, axis: int) -> CoefficientField:
        """Exact partial derivative along ``axis`` (requires a polynomial or a hessian)."""
        if self.poly is not None:
            return CoefficientField.from_polynomial(self.poly.derivative(axis))
        if self.jac is None:
            raise ValueError("no exact derivative available")
        hess = self.hess
        return CoefficientField(
            lambda x: self.jac(x)[..., axis],
            self.ncomp,
            self.dim,
            None if hess is None else (lambda x: hess(x)[..., axis, :]),
        )

    def jacobian(self, x, mode: str = "auto", h: float | None = None) -> np.ndarray:
        pts = _points(x, self.dim)
        if mode not in ("auto", "exact", "fd"):
            raise ValueError(f"unknown derivative mode {mode!r}")
        if mode != "fd" and self.poly is not None:
            return np.stack([self.poly.derivative(l)(pts) for l in range(self.dim)], axis=-1)
        if mode != "fd" and self.jac is not None:
            return np.asarray(self.jac(pts), dtype=float).reshape(len(pts), self.ncomp, self.dim)
        if mode == "exact":
            raise ValueError("exact derivatives requested but none supplied")
        step = fd_step(pts) if h is None else np.full(len(pts), h)
        out = np.empty((len(pts), self.ncomp, self.dim))
        for l in range(self.dim):
            shift = np.zeros_like(pts)
            shift[:, l] = step
            out[..., l] = (self(pts + shift) - self(pts - shift)) / (2 * step[:, None])
        return out

    def hessian(self, x) -> np.ndarray:
        pts = _points(x, self.dim)
        if self.poly is not None:
            return np.stack(
                [np.stack([self.poly.derivative(a).derivative(b)(pts) for b in range(self.dim)], -1)
                 for a in range(self.dim)],
                axis=-2,
            )
        return np.asarray(self.hess(pts), dtype=float).reshape(len(pts), self.ncomp, self.dim, self.dim)

    # -- structure-preserving operations --------------------------------

    def linear(self, matrix) -> CoefficientField:
        """Apply a constant matrix ``(k, m)`` to the components."""
        m = np.asarray(matrix, dtype=float)
        if self.poly is not None:
            return CoefficientField.from_polynomial(self.poly.linear(m))
        jac, hess = self.jac, self.hess
        return CoefficientField(
            lambda x: self.value(x) @ m.T,
            m.shape[0],
            self.dim,
            None if jac is None else (lambda x: np.einsum("km,nml->nkl", m, jac(x))),
            None if hess is None else (lambda x: np.einsum("km,nmab->nkab", m, hess(x))),
        )

    def add(self, other: CoefficientField, scale: float = 1.0) -> CoefficientField:
        if (self.ncomp, self.dim) != (other.ncomp, other.dim):
            raise ValueError("cannot add fields of different shapes")
        if self.poly is not None and other.poly is not None:
            q = other.poly
            return CoefficientField.from_polynomial(Polynomial.concat([self.poly, Polynomial(q.exps, scale * q.coeffs)]))
        jac = (lambda x: self.jacobian(x) + scale * other.jacobian(x)) if self.has_jacobian and other.has_jacobian else None
        hess = (lambda x: self.hessian(x) + scale * other.hessian(x)) if self.has_hessian and other.has_hessian else None
        return CoefficientField(lambda x: self(x) + scale * other(x), self.ncomp, self.dim, jac, hess)

    def derivative_contract(self, table: np.ndarray) -> CoefficientField:
        """``out_k = sum_{l, j} table[k, l, j] * d_l value_j`` with exact derivatives."""
        t = np.asarray(table, dtype=float)
        if self.poly is not None:
            parts = [self.poly.derivative(l).linear(t[:, l, :]) for l in range(self.dim)]
            return CoefficientField.from_polynomial(Polynomial.concat(parts))
        if self.jac is None:
            raise ValueError("no exact derivative available")
        jac, hess = self.jac, self.hess
        return CoefficientField(
            lambda x: np.einsum("klj,njl->nk", t, jac(x)),
            t.shape[0],
            self.dim,
            None if hess is None else (lambda x: np.einsum("klj,njlm->nkm", t, hess(x))),
        )

    def fd_derivative_contract(self, table: np.ndarray, h: float | None = None) -> CoefficientField:
        t = np.asarray(table, dtype=float)
        return CoefficientField(
            lambda x: np.einsum("klj,njl->nk", t, self.jacobian(x, mode="fd", h=h)), t.shape[0], self.dim
        )

    def bilinear(self, other: CoefficientField, table: np.ndarray) -> CoefficientField:
        """``out_k = sum table[k, i, j] a_i b_j`` with the product rule for derivatives."""
        t = np.asarray(table, dtype=float)
        a, b = self, other
        value = lambda x: np.einsum("kij,ni,nj->nk", t, a(x), b(x))
        jac = hess = None
        if a.has_jacobian and b.has_jacobian:
            def jac(x):
                return np.einsum("kij,nil,nj->nkl", t, a.jacobian(x), b(x)) + np.einsum(
                    "kij,ni,njl->nkl", t, a(x), b.jacobian(x)
                )
        if a.has_hessian and b.has_hessian:
            def hess(x):
                ja, jb = a.jacobian(x), b.jacobian(x)
                cross = np.einsum("kij,nip,njq->nkpq", t, ja, jb)
                return (
                    np.einsum("kij,nipq,nj->nkpq", t, a.hessian(x), b(x))
                    + cross
                    + cross.transpose(0, 1, 3, 2)
                    + np.einsum("kij,ni,njpq->nkpq", t, a(x), b.hessian(x))
                )
        return CoefficientField(value, t.shape[0], a.dim, jac, hess)

    def compose_affine(self, linear: np.ndarray, translation: np.ndarray, matrix: np.ndarray) -> CoefficientField:
        """``x -> matrix @ value(linear @ x + translation)`` with chain-rule derivatives."""
        lin = np.asarray(linear, dtype=float)
        b = np.asarray(translation, dtype=float)
        m = np.asarray(matrix, dtype=float)
        src = self

        def move(x):
            return _points(x, lin.shape[1]) @ lin.T + b

        jac = hess = None
        if src.has_jacobian:
            def jac(x):
                return np.einsum("km,nml,lp->nkp", m, src.jacobian(move(x)), lin)
        if src.has_hessian:
            def hess(x):
                return np.einsum("km,nmab,ap,bq->nkpq", m, src.hessian(move(x)), lin, lin)
        return CoefficientField(lambda x: src(move(x)) @ m.T, m.shape[0], lin.shape[1], jac, hess)


# --------------------------------------------------------------------------
# forms


@dataclass(frozen=True, eq=False)
class DifferentialForm:
    """A twisted differential form of given degree and parity.

    Parameters
    ----------
    degree : int
        Form degree.
    parity : Parity
        Parity tag; also fixes the orientation model.
    coefficients : CoefficientField
        Coefficients over ascending basis tuples as functions of the point.
    """

    degree: int
    parity: Parity
    coefficients: CoefficientField

    def __post_init__(self) -> None:
        expected = math.comb(self.dim, self.degree) if self.degree <= self.dim else 0
        if self.coefficients.ncomp != expected:
            raise ValueError(
                f"degree-{self.degree} form in dimension {self.dim} needs {expected} components, "
                f"got {self.coefficients.ncomp}"
            )

    @property
    def dim(self) -> int:
        return self.coefficients.dim

    @property
    def model(self) -> OrientationModel:
        return self.parity.model

    # -- constructors --------------------------------------------------

    @classmethod
    def constant(cls, degree: int, parity: Parity, coeffs, dim: int = 4) -> DifferentialForm:
        return cls(degree, parity, CoefficientField.constant(coeffs, dim))

    @classmethod
    def zero(cls, degree: int, parity: Parity, dim: int = 4) -> DifferentialForm:
        n = math.comb(dim, degree) if degree <= dim else 0
        return cls(degree, parity, CoefficientField.constant(np.zeros(n), dim))

    @classmethod
    def from_multicovector(cls, a: MultiCovector) -> DifferentialForm:
        return cls.constant(a.degree, a.parity, a.coeffs, a.dim)

    @classmethod
    def polynomial(cls, degree: int, parity: Parity, exps, coeffs) -> DifferentialForm:
        """Polynomial coefficients: ``coeffs[k, t]`` multiplies the monomial ``x ** exps[t]``."""
        poly = Polynomial(np.asarray(exps, dtype=int), np.asarray(coeffs, dtype=float))
        return cls(degree, parity, CoefficientField.from_polynomial(poly))

    @classmethod
    def from_function(cls, degree, parity, value, dim=4, jacobian=None, hessian=None) -> DifferentialForm:
        n = math.comb(dim, degree) if degree <= dim else 0
        return cls(degree, parity, CoefficientField(value, n, dim, jacobian, hessian))

    # -- evaluation ----------------------------------------------------

    def coeffs(self, x) -> np.ndarray:
        """Batched coefficients at reference orientation, shape ``(N, C(dim, q))``."""
        return self.coefficients(x)

    def at(self, x) -> MultiCovector:
        return MultiCovector(self.degree, self.parity, self.coefficients(x)[0], self.dim)

    def __call__(self, x, *vectors, orientation: Orientation | None = None) -> float:
        return self.at(x)(*vectors, orientation=orientation)

    @property
    def has_exact_derivative(self) -> bool:
        return self.coefficients.has_jacobian

    # -- arithmetic ----------------------------------------------------

    def _like(self, coefficients: CoefficientField) -> DifferentialForm:
        return DifferentialForm(self.degree, self.parity, coefficients)

    def _check(self, other: DifferentialForm) -> None:
        if (self.degree, self.parity, self.dim) != (other.degree, other.parity, other.dim):
            raise ValueError("forms differ in degree, parity or dimension")

    def __add__(self, other: DifferentialForm) -> DifferentialForm:
        self._check(other)
        return self._like(self.coefficients.add(other.coefficients))

    def __sub__(self, other: DifferentialForm) -> DifferentialForm:
        self._check(other)
        return self._like(self.coefficients.add(other.coefficients, -1.0))

    def __neg__(self) -> DifferentialForm:
        return self * -1.0

    def __mul__(self, scalar) -> DifferentialForm:
        if not np.isscalar(scalar):
            return NotImplemented
        return self._like(self.coefficients.linear(float(scalar) * np.eye(self.coefficients.ncomp)))

    __rmul__ = __mul__

    def with_parity(self, parity: Parity) -> DifferentialForm:
        """The same coefficients reinterpreted with another parity tag."""
        return DifferentialForm(self.degree, parity, self.coefficients)

    def linear(self, matrix, degree: int | None = None, parity: Parity | None = None) -> DifferentialForm:
        return DifferentialForm(
            self.degree if degree is None else degree,
            self.parity if parity is None else parity,
            self.coefficients.linear(matrix),
        )


@dataclass(frozen=True, eq=False)
class VectorField:
    """A vector field given by its components ``(N, dim) -> (N, dim)``."""

    components: CoefficientField

    @classmethod
    def constant(cls, vector) -> VectorField:
        v = np.asarray(vector, dtype=float)
        return cls(CoefficientField.constant(v, v.size))

    @classmethod
    def affine(cls, matrix, offset=None) -> VectorField:
        """``x -> matrix @ x + offset``."""
        m = np.asarray(matrix, dtype=float)
        dim = m.shape[0]
        b = np.zeros(dim) if offset is None else np.asarray(offset, dtype=float)
        exps = np.vstack([np.zeros((1, dim), dtype=int), np.eye(dim, dtype=int)])
        coeffs = np.hstack([b[:, None], m])
        return cls(CoefficientField.from_polynomial(Polynomial(exps, coeffs)))

    @classmethod
    def from_function(cls, value, dim: int = 4, jacobian=None, hessian=None) -> VectorField:
        return cls(CoefficientField(value, dim, dim, jacobian, hessian))

    @property
    def dim(self) -> int:
        return self.components.dim

    def __call__(self, x) -> np.ndarray:
        return self.components(x)


# --------------------------------------------------------------------------
# calculus


def exterior_differential(a: DifferentialForm, mode: str = "auto", h: float | None = None) -> DifferentialForm:
    """Exterior differential ``dA`` with ``d(f e^K) = d_l f e^l ^ e^K``.

    Parameters
    ----------
    mode : {"auto", "exact", "fd"}
        ``auto`` uses exact derivatives when the form carries them.
    h : float, optional
        Fixed finite-difference step; defaults to ``1e-4 * max(1, |x|)``.
    """
    if a.degree >= a.dim:
        return DifferentialForm.zero(a.degree + 1, a.parity, a.dim)
    table = wedge_table(a.dim, 1, a.degree)
    coeff = a.coefficients
    if mode == "fd" or (mode == "auto" and not coeff.has_jacobian):
        return DifferentialForm(a.degree + 1, a.parity, coeff.fd_derivative_contract(table, h))
    if not coeff.has_jacobian:
        raise ValueError("exact derivatives requested but the form carries none")
    if coeff.poly is None and coeff.hess is None:
        # exact values but no second derivatives: only the first d is exact
        jac = coeff.jac
        return DifferentialForm(
            a.degree + 1,
            a.parity,
            CoefficientField(lambda x: np.einsum("klj,njl->nk", table, jac(x)), table.shape[0], a.dim),
        )
    return DifferentialForm(a.degree + 1, a.parity, coeff.derivative_contract(table))


d = exterior_differential


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    """Pointwise exterior product; degrees past the dimension give the zero form."""
    if a.model is not b.model or a.dim != b.dim:
        raise ValueError("forms live in different orientation models or dimensions")
    parity = a.parity * b.parity
    q = a.degree + b.degree
    if q > a.dim:
        return DifferentialForm.zero(q, parity, a.dim)
    table = wedge_table(a.dim, a.degree, b.degree)
    return DifferentialForm(q, parity, a.coefficients.bilinear(b.coefficients, table))


def interior_product(x: VectorField, a: DifferentialForm) -> DifferentialForm:
    """``i_X A``: insert ``X`` as the first argument."""
    if a.degree == 0:
        raise ValueError("interior product of a 0-form is undefined")
    if x.dim != a.dim:
        raise ValueError("vector field and form have different dimensions")
    # (i_X A)_J = sum_{i,K} T[K, i, J] X^i A_K
    table = np.transpose(wedge_table(a.dim, 1, a.degree - 1), (2, 1, 0))
    return DifferentialForm(a.degree - 1, a.parity, x.components.bilinear(a.coefficients, table))


def lie_derivative(x: VectorField, a: DifferentialForm, mode: str = "auto") -> DifferentialForm:
    """Cartan formula ``d_X A = i_X dA + d i_X A``."""
    first = interior_product(x, exterior_differential(a, mode)) if a.degree < a.dim else None
    if a.degree == 0:
        return first
    second = exterior_differential(interior_product(x, a), mode)
    return second if first is None else first + second


# --------------------------------------------------------------------------
# maps


@dataclass(frozen=True, eq=False)
class AffineMap:
    """``x -> linear @ x + translation``."""

    linear: np.ndarray
    translation: np.ndarray = None

    def __post_init__(self) -> None:
        lin = np.array(self.linear, dtype=float)
        if lin.ndim != 2 or lin.shape[0] != lin.shape[1]:
            raise ValueError("linear part must be square")
        b = np.zeros(lin.shape[0]) if self.translation is None else np.array(self.translation, dtype=float)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", b)

    @classmethod
    def identity(cls, dim: int = 4) -> AffineMap:
        return cls(np.eye(dim))

    @property
    def dim(self) -> int:
        return self.linear.shape[0]

    def __call__(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.linear.T + self.translation

    def derivative(self, x) -> np.ndarray:
        pts = _points(x, self.dim)
        return np.broadcast_to(self.linear, (len(pts),) + self.linear.shape)

    def inverse(self) -> AffineMap:
        inv = np.linalg.inv(self.linear)
        return AffineMap(inv, -inv @ self.translation)

    def compose(self, other: AffineMap) -> AffineMap:
        """``self o other``."""
        return AffineMap(self.linear @ other.linear, self.linear @ other.translation + self.translation)

    def __matmul__(self, other: AffineMap) -> AffineMap:
        return self.compose(other)


@dataclass(frozen=True, eq=False)
class Diffeomorphism:
    """A general map with a user-supplied derivative ``(N, dim) -> (N, dim, dim)``."""

    map: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]
    dim: int = 4
    probe: np.ndarray = field(default=None)

    def __call__(self, x) -> np.ndarray:
        return self.map(_points(x, self.dim))


def pullback(phi, a: DifferentialForm, metric=None) -> DifferentialForm:
    """``phi^* A``: evaluate at ``phi(x)`` on pushed vectors with the orientation moved by ``[D phi]``.

    Exact derivatives of ``A`` are carried through affine maps by the chain rule.
    """
    if isinstance(phi, AffineMap):
        if phi.dim != a.dim:
            raise ValueError("map and form have different dimensions")
        cls = classify(phi.linear, a.model, metric)
        matrix = index(a.parity, cls) * compound(phi.linear, a.degree).T
        return DifferentialForm(a.degree, a.parity, a.coefficients.compose_affine(phi.linear, phi.translation, matrix))
    probe = np.zeros(phi.dim) if phi.probe is None else phi.probe
    cls = classify(phi.derivative(probe[None, :])[0], a.model, metric)
    sign = index(a.parity, cls)
    src = a.coefficients

    def value(x):
        pts = _points(x, phi.dim)
        jac = phi.derivative(pts)
        if np.any(np.sign(np.linalg.det(jac)) != np.sign(np.linalg.det(jac[:1]))):
            raise ValueError("derivative class is not constant over the sample points")
        c = compound(jac, a.degree)
        return sign * np.einsum("nki,nk->ni", c, src(phi(pts)))

    return DifferentialForm(a.degree, a.parity, CoefficientField(value, src.ncomp, a.dim))


# --------------------------------------------------------------------------
# Poincare lemma


def _halton_box(box, n: int, seed: int = 0) -> np.ndarray:
    lo, hi = (np.asarray(b, dtype=float) for b in box)
    sampler = qmc.Halton(d=lo.size, scramble=True, seed=seed)
    return qmc.scale(sampler.random(n), lo, hi)


def homotopy_potential(
    a: DifferentialForm,
    x0=None,
    box=None,
    order: int = 16,
    tol: float = CLOSED_TOL,
    mode: str = "auto",
) -> DifferentialForm:
    """A primitive ``B`` of a closed form ``A`` by the radial homotopy operator.

    ``B(x; v...) = int_0^1 s^(q-1) A(x0 + s (x - x0); x - x0, v...) ds``.

    Parameters
    ----------
    x0 : array_like, optional
        Centre of the homotopy; defaults to the origin.
    box : (lo, hi), optional
        Box for the closedness check; defaults to the unit cube around ``x0``.
    order : int
        Gauss-Legendre order along the ray.

    Raises
    ------
    ValueError
        If ``dA`` exceeds ``tol`` at one of 64 quasi-random sample points.
    """
    if a.degree == 0:
        raise ValueError("homotopy potential needs degree >= 1")
    dim = a.dim
    x0 = np.zeros(dim) if x0 is None else np.asarray(x0, dtype=float)
    box = (x0 - 1.0, x0 + 1.0) if box is None else box
    if a.degree < dim:
        pts = _halton_box(box, CLOSED_SAMPLES)
        residual = np.abs(exterior_differential(a, mode).coeffs(pts)).max(axis=1)
        worst = int(np.argmax(residual))
        if residual[worst] > tol:
            raise ValueError(f"form is not closed: |dA| = {residual[worst]:.3e} at {pts[worst].tolist()}")
    q = a.degree
    nodes, weights = np.polynomial.legendre.leggauss(order)
    s = 0.5 * (nodes + 1.0)
    w = 0.5 * weights * s ** (q - 1)
    table = np.transpose(wedge_table(dim, 1, q - 1), (2, 1, 0))
    src = a.coefficients

    def value(x):
        pts = _points(x, dim)
        r = pts - x0
        out = 0.0
        for sk, wk in zip(s, w):
            out = out + wk * np.einsum("jik,ni,nk->nj", table, r, src(x0 + sk * r))
        return out

    jac = None
    if src.has_jacobian:
        def jac(x):
            pts = _points(x, dim)
            r = pts - x0
            out = 0.0
            for sk, wk in zip(s, w):
                p = x0 + sk * r
                out = out + wk * (
                    np.einsum("jmk,nk->njm", table, src(p))
                    + sk * np.einsum("jik,ni,nkm->njm", table, r, src.jacobian(p))
                )
            return out

    return DifferentialForm(q - 1, a.parity, CoefficientField(value, table.shape[0], dim, jac))


# --------------------------------------------------------------------------
# vector densities


@dataclass(frozen=True, eq=False)
class DensityField:
    """A field of q-vector densities; ``parity`` is that of the multivector factor."""

    degree: int
    parity: Parity
    coefficients: CoefficientField

    @property
    def dim(self) -> int:
        return self.coefficients.dim

    @property
    def model(self) -> OrientationModel:
        return self.parity.model

    def coeffs(self, x) -> np.ndarray:
        return self.coefficients(x)

    def __add__(self, other: DensityField) -> DensityField:
        return DensityField(self.degree, self.parity, self.coefficients.add(other.coefficients))

    def __sub__(self, other: DensityField) -> DensityField:
        return DensityField(self.degree, self.parity, self.coefficients.add(other.coefficients, -1.0))

    def __mul__(self, scalar) -> DensityField:
        return DensityField(self.degree, self.parity, self.coefficients.linear(float(scalar) * np.eye(self.coefficients.ncomp)))

    __rmul__ = __mul__


def weyl_form(dens: DensityField) -> DifferentialForm:
    """Pointwise Weyl isomorphism: density of degree q to a form of degree dim - q."""
    dim = dens.dim
    return DifferentialForm(
        dim - dens.degree,
        dens.parity * top_odd_parity(dens.model),
        dens.coefficients.linear(weyl_matrix(dim, dens.degree)),
    )


def weyl_dual(a: DifferentialForm) -> DensityField:
    """Inverse of :func:`weyl_form`."""
    q = a.dim - a.degree
    return DensityField(q, a.parity * top_odd_parity(a.model), a.coefficients.linear(weyl_matrix(a.dim, q).T))


def div(dens: DensityField, mode: str = "auto", h: float | None = None) -> DensityField:
    """Coordinate divergence ``(Div A)^I = sum_l sgn(I, l) d_l A^{I l}``."""
    if dens.degree == 0:
        raise ValueError("divergence of a scalar density is undefined")
    table = _divergence_table(dens.dim, dens.degree)
    coeff = dens.coefficients
    if mode == "fd" or (mode == "auto" and not coeff.has_jacobian):
        out = coeff.fd_derivative_contract(table, h)
    elif coeff.poly is None and coeff.hess is None:
        jac = coeff.jac
        out = CoefficientField(lambda x: np.einsum("klj,njl->nk", table, jac(x)), table.shape[0], dens.dim)
    else:
        out = coeff.derivative_contract(table)
    return DensityField(dens.degree - 1, dens.parity, out)


# --------------------------------------------------------------------------
# fixtures


def random_polynomial_form(
    rng: np.random.Generator,
    degree: int,
    parity: Parity,
    dim: int = 4,
    max_power: int = 2,
    n_terms: int = 6,
) -> DifferentialForm:
    """A form with random polynomial coefficients of unit scale."""
    ncomp = math.comb(dim, degree)
    exps = rng.integers(0, max_power + 1, size=(n_terms, dim))
    exps = exps[np.argsort(exps.sum(axis=1))]
    over = exps.sum(axis=1) > max_power
    exps[over] = np.minimum(exps[over], 1)
    coeffs = rng.uniform(-1.0, 1.0, size=(ncomp, n_terms))
    return DifferentialForm.polynomial(degree, parity, exps, coeffs)


def as_model(parity: Parity) -> OrientationModel:
    return parity.model if parity is not None else STANDARD


def basis_labels(dim: int, q: int) -> list[str]:
    return ["".join(str(i) for i in idx) for idx in basis_indices(dim, q)]
