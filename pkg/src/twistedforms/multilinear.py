"""Parity-tagged multicovectors, multivectors and vector densities.

Coefficients are stored over ascending index tuples of the reference basis,
so a stored coefficient *is* the value on the corresponding ascending basis
tuple at the reference orientation.  With that convention the ``1/q!``
normalisations of the basis expansions disappear, evaluation is a sum of
minors and pairing is a dot product.

The module also exposes the batched coefficient kernels (``wedge_table``,
``compound``, ``weyl_matrix``...) used by the differential-form layer.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

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
    "basis_indices",
    "shuffle_sign",
    "wedge_table",
    "compound",
    "minors",
    "weyl_matrix",
    "MultiCovector",
    "MultiVector",
    "Density",
    "evaluate",
    "wedge",
    "pair",
    "pushforward",
    "pullback",
    "push_density",
    "contract",
    "weyl",
    "weyl_inverse",
    "metric_sharp",
    "metric_flat",
    "basis_covector",
    "basis_vector",
]


# --------------------------------------------------------------------------
# combinatorial kernels


@lru_cache(maxsize=None)
def basis_indices(dim: int, q: int) -> tuple[tuple[int, ...], ...]:
    """Ascending index tuples of length ``q`` drawn from ``range(dim)``."""
    if q < 0 or q > dim:
        return ()
    return tuple(itertools.combinations(range(dim), q))


@lru_cache(maxsize=None)
def _position(dim: int, q: int) -> dict[tuple[int, ...], int]:
    return {idx: k for k, idx in enumerate(basis_indices(dim, q))}


def shuffle_sign(first, second) -> int:
    """Sign of the permutation sorting ``first + second``; 0 if they overlap."""
    seq = list(first) + list(second)
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def wedge_table(dim: int, q1: int, q2: int) -> np.ndarray:
    """Structure constants ``T[K, I, J]`` with ``(a ^ b)_K = sum T[K,I,J] a_I b_J``."""
    rows = basis_indices(dim, q1 + q2)
    table = np.zeros((len(rows), math.comb(dim, q1), math.comb(dim, q2)))
    pos = _position(dim, q1 + q2)
    for i, idx_a in enumerate(basis_indices(dim, q1)):
        for j, idx_b in enumerate(basis_indices(dim, q2)):
            sign = shuffle_sign(idx_a, idx_b)
            if sign:
                table[pos[tuple(sorted(idx_a + idx_b))], i, j] = sign
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def weyl_matrix(dim: int, q: int) -> np.ndarray:
    """Matrix of ``w -> w _| e`` for the unit top covector: ``a_J = sum_I W[J, I] w^I``.

    Read off from the contraction identity ``<e, w ^ v> = <w _| e, v>`` on basis
    elements; it is a signed permutation, so its inverse is its transpose.
    """
    top = wedge_table(dim, q, dim - q)[0]
    out = np.ascontiguousarray(top.T)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _divergence_table(dim: int, q: int) -> np.ndarray:
    """``D[I, lam, K]``: sign of ``A^{I lam}`` as a multiple of ``A^K``, K = sorted(I + lam)."""
    pos = _position(dim, q)
    table = np.zeros((math.comb(dim, q - 1), dim, math.comb(dim, q)))
    for i, idx in enumerate(basis_indices(dim, q - 1)):
        for lam in range(dim):
            sign = shuffle_sign(idx, (lam,))
            if sign:
                table[i, lam, pos[tuple(sorted(idx + (lam,)))]] = sign
    table.setflags(write=False)
    return table


def compound(matrix, q: int) -> np.ndarray:
    """The ``q``-th compound matrix ``C[K, I] = det(matrix[K, I])`` (batched over leading axes)."""
    m = np.asarray(matrix, dtype=float)
    if q == 0:
        return np.ones(m.shape[:-2] + (1, 1))
    dim = m.shape[-1]
    idx = np.array(basis_indices(dim, q), dtype=int)
    n = len(idx)
    sub = m[..., idx[:, None, :, None], idx[None, :, None, :]]
    return np.linalg.det(sub.reshape(m.shape[:-2] + (n, n, q, q)))


def minors(vectors, q: int | None = None) -> np.ndarray:
    """``det(V[I, :])`` over ascending row tuples ``I``; ``V`` has the vectors as columns.

    ``vectors`` has shape ``(..., dim, q)``.
    """
    v = np.asarray(vectors, dtype=float)
    dim, q = v.shape[-2], v.shape[-1]
    if q == 0:
        return np.ones(v.shape[:-2] + (1,))
    idx = np.array(basis_indices(dim, q), dtype=int)
    return np.linalg.det(v[..., idx, :])


def _coerce(coeffs, dim: int, degree: int) -> np.ndarray:
    arr = np.array(coeffs, dtype=float).reshape(-1)
    expected = math.comb(dim, degree) if degree <= dim else 0
    if arr.shape != (expected,):
        raise ValueError(f"degree-{degree} object in dimension {dim} needs {expected} coefficients, got {arr.size}")
    arr.setflags(write=False)
    return arr


# --------------------------------------------------------------------------
# value types


@dataclass(frozen=True, eq=False)
class MultiCovector:
    """An even/odd (or parity-pair) q-covector over ``dim`` dimensions.

    Parameters
    ----------
    degree : int
        Number of vector arguments.
    parity : Parity
        Behaviour under orientation change; carries the orientation model.
    coeffs : array_like
        Values on ascending basis tuples at the reference orientation.
    dim : int
        Dimension of the model space, 4 for space-time and 3 for space.
    """

    degree: int
    parity: Parity
    coeffs: np.ndarray
    dim: int = 4

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise ValueError("degree must be non-negative")
        object.__setattr__(self, "coeffs", _coerce(self.coeffs, self.dim, self.degree))

    @property
    def model(self) -> OrientationModel:
        return self.parity.model

    @classmethod
    def zero(cls, degree: int, parity: Parity, dim: int = 4) -> MultiCovector:
        return cls(degree, parity, np.zeros(math.comb(dim, degree) if degree <= dim else 0), dim)

    def component(self, *idx: int) -> float:
        """Value on the basis tuple ``idx`` (any order) at the reference orientation."""
        sign = shuffle_sign(idx, ())
        if not sign:
            return 0.0
        return sign * float(self.coeffs[_position(self.dim, self.degree)[tuple(sorted(idx))]])

    def __call__(self, *vectors, orientation: Orientation | None = None) -> float:
        o = Orientation.reference(self.model) if orientation is None else orientation
        return evaluate(self, vectors, o)

    def _like(self, coeffs) -> MultiCovector:
        return type(self)(self.degree, self.parity, coeffs, self.dim)

    def __add__(self, other):
        _check_same(self, other)
        return self._like(self.coeffs + other.coeffs)

    def __sub__(self, other):
        _check_same(self, other)
        return self._like(self.coeffs - other.coeffs)

    def __neg__(self):
        return self._like(-self.coeffs)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return self._like(scalar * self.coeffs)

    __rmul__ = __mul__

    def allclose(self, other, atol: float = 1e-12, rtol: float = 0.0) -> bool:
        return (
            type(self) is type(other)
            and self.degree == other.degree
            and self.parity == other.parity
            and self.dim == other.dim
            and np.allclose(self.coeffs, other.coeffs, atol=atol, rtol=rtol)
        )

    def __repr__(self) -> str:
        return f"{type(self).__name__}(degree={self.degree}, parity={self.parity}, coeffs={self.coeffs.tolist()})"


class MultiVector(MultiCovector):
    """A q-vector, stored by coefficients ``w^I`` on the basis classes ``[(e_I, o_ref)]``."""


def _check_same(a, b) -> None:
    if type(a) is not type(b) or a.degree != b.degree or a.parity != b.parity or a.dim != b.dim:
        raise ValueError("operands differ in type, degree, parity or dimension")


@dataclass(frozen=True, eq=False)
class Density:
    """A q-vector tensored with a top odd covector (a weight-one q-vector density).

    ``parity`` is the parity of the multivector factor; the covector factor has
    the top odd parity of the model (odd, or (o,o)).  ``coeffs`` are the
    multivector coefficients scaled by the covector's single coefficient.
    """

    degree: int
    parity: Parity
    coeffs: np.ndarray
    dim: int = 4

    def __post_init__(self) -> None:
        if not 0 <= self.degree <= self.dim:
            raise ValueError(f"density degree must lie in 0..{self.dim}")
        object.__setattr__(self, "coeffs", _coerce(self.coeffs, self.dim, self.degree))

    @property
    def model(self) -> OrientationModel:
        return self.parity.model

    @classmethod
    def from_product(cls, w: MultiVector, e: MultiCovector) -> Density:
        if e.degree != e.dim or e.parity != top_odd_parity(e.model) or w.dim != e.dim:
            raise ValueError("the covector factor must be a top-degree odd covector")
        return cls(w.degree, w.parity, w.coeffs * e.coeffs[0], w.dim)

    def allclose(self, other: Density, atol: float = 1e-12) -> bool:
        return (
            self.degree == other.degree
            and self.parity == other.parity
            and self.dim == other.dim
            and np.allclose(self.coeffs, other.coeffs, atol=atol, rtol=0.0)
        )


def basis_covector(idx, parity: Parity = None, dim: int = 4) -> MultiCovector:
    """The basis multicovector ``e^{idx}`` (indices in any order, sign included)."""
    from .orientation import EVEN

    parity = EVEN if parity is None else parity
    q = len(idx)
    coeffs = np.zeros(math.comb(dim, q))
    sign = shuffle_sign(idx, ())
    if sign:
        coeffs[_position(dim, q)[tuple(sorted(idx))]] = sign
    return MultiCovector(q, parity, coeffs, dim)


def basis_vector(idx, parity: Parity = None, dim: int = 4) -> MultiVector:
    """The basis multivector ``e_{idx}``."""
    c = basis_covector(idx, parity, dim)
    return MultiVector(c.degree, c.parity, c.coeffs, dim)


# --------------------------------------------------------------------------
# operations


def evaluate(a: MultiCovector, vectors, o: Orientation) -> float:
    """Value of ``a`` on ``q`` vectors and an orientation."""
    vecs = np.asarray(vectors, dtype=float).reshape(len(vectors), -1) if len(vectors) else np.zeros((0, a.dim))
    if vecs.shape != (a.degree, a.dim):
        raise ValueError(f"expected {a.degree} vectors of dimension {a.dim}, got shape {vecs.shape}")
    if o.model is not a.model:
        raise ValueError("orientation model does not match the covector's parity model")
    return index(a.parity, o.offset) * float(a.coeffs @ minors(vecs.T))


def wedge(a: MultiCovector, b: MultiCovector) -> MultiCovector:
    """Exterior product; degrees past ``dim`` give the zero object of the product parity."""
    if type(a) is not type(b):
        raise TypeError("cannot wedge a multivector with a multicovector")
    if a.model is not b.model or a.dim != b.dim:
        raise ValueError("operands live in different orientation models or dimensions")
    parity = a.parity * b.parity
    q = a.degree + b.degree
    if q > a.dim:
        return type(a).zero(q, parity, a.dim)
    coeffs = np.einsum("kij,i,j->k", wedge_table(a.dim, a.degree, b.degree), a.coeffs, b.coeffs)
    return type(a)(q, parity, coeffs, a.dim)


def pair(a: MultiCovector, w: MultiVector) -> float:
    """The pairing between q-covectors and q-vectors of equal parity."""
    if not isinstance(w, MultiVector) or isinstance(a, MultiVector):
        raise TypeError("pair expects (MultiCovector, MultiVector)")
    if a.degree != w.degree or a.dim != w.dim:
        raise ValueError("pairing needs equal degrees and dimensions")
    if a.parity != w.parity:
        raise ValueError(f"pairing needs equal parities, got {a.parity} and {w.parity}")
    return float(a.coeffs @ w.coeffs)


def _map_class(rho, model: OrientationModel, metric=None):
    return classify(rho, model, metric)


def pushforward(rho, w: MultiVector, metric=None) -> MultiVector:
    """Image ``rho_* w`` of a multivector under a linear automorphism."""
    rho = np.asarray(rho, dtype=float)
    sign = index(w.parity, _map_class(rho, w.model, metric))
    return MultiVector(w.degree, w.parity, sign * compound(rho, w.degree) @ w.coeffs, w.dim)


def pullback(rho, a: MultiCovector, metric=None) -> MultiCovector:
    """``rho^* a``: the covector ``(v, o) -> a(rho v..., [rho] o)``.

    The transport of ``a`` along ``rho`` is ``pullback(inv(rho), a)``.
    """
    rho = np.asarray(rho, dtype=float)
    sign = index(a.parity, _map_class(rho, a.model, metric))
    return MultiCovector(a.degree, a.parity, sign * compound(rho, a.degree).T @ a.coeffs, a.dim)


def push_density(rho, d: Density, metric=None) -> Density:
    """``rho_*(w (x) e) = rho_* w (x) (rho^-1)^* e``."""
    rho = np.asarray(rho, dtype=float)
    cls = _map_class(rho, d.model, metric)
    sign = index(d.parity, cls) * index(top_odd_parity(d.model), cls)
    factor = sign / np.linalg.det(rho)
    return Density(d.degree, d.parity, factor * compound(rho, d.degree) @ d.coeffs, d.dim)


def contract(w: MultiVector, e: MultiCovector) -> MultiCovector:
    """``w _| e`` for a top-degree ``e``, fixed by ``<e, w ^ v> = <w _| e, v>``."""
    if e.degree != e.dim:
        raise ValueError("contraction is defined against top-degree covectors")
    if w.dim != e.dim or w.model is not e.model:
        raise ValueError("operands live in different orientation models or dimensions")
    coeffs = e.coeffs[0] * (weyl_matrix(e.dim, w.degree) @ w.coeffs)
    return MultiCovector(e.dim - w.degree, w.parity * e.parity, coeffs, e.dim)


def weyl(d: Density) -> MultiCovector:
    """The Weyl isomorphism ``w (x) e -> w _| e``."""
    top = MultiCovector(d.dim, top_odd_parity(d.model), [1.0], d.dim)
    return contract(MultiVector(d.degree, d.parity, d.coeffs, d.dim), top)


def weyl_inverse(a: MultiCovector) -> Density:
    """Inverse of :func:`weyl`: the density whose Weyl image is ``a``."""
    if isinstance(a, MultiVector):
        raise TypeError("weyl_inverse expects a multicovector")
    q = a.dim - a.degree
    if q < 0:
        raise ValueError(f"degree {a.degree} exceeds dimension {a.dim}")
    coeffs = weyl_matrix(a.dim, q).T @ a.coeffs
    return Density(q, a.parity * top_odd_parity(a.model), coeffs, a.dim)


def _metric_matrix(g) -> np.ndarray:
    return np.asarray(getattr(g, "matrix", g), dtype=float)


def metric_sharp(g, a: MultiCovector) -> MultiVector:
    """``wedge^q g^{-1}``: raise every index of ``a`` with the inverse metric."""
    if isinstance(a, MultiVector):
        raise TypeError("metric_sharp expects a multicovector")
    if not 0 <= a.degree <= a.dim:
        raise ValueError(f"unsupported degree {a.degree}")
    ginv = np.linalg.inv(_metric_matrix(g))
    return MultiVector(a.degree, a.parity, compound(ginv, a.degree) @ a.coeffs, a.dim)


def metric_flat(g, w: MultiVector) -> MultiCovector:
    """``wedge^q g``: lower every index of ``w``."""
    if not isinstance(w, MultiVector):
        raise TypeError("metric_flat expects a multivector")
    return MultiCovector(w.degree, w.parity, compound(_metric_matrix(g), w.degree) @ w.coeffs, w.dim)


def standard_parity(parity: Parity) -> Parity:
    """Standard-model parity with the same behaviour under orientation reversal."""
    if parity.model is STANDARD:
        return parity
    from .orientation import EVEN, ODD

    return ODD if sum(parity.bits) % 2 else EVEN
