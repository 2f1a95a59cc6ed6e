"""Orientation sets, the quotient groups acting on them, and parity indices.

Two orientation models are supported.  The standard model has the two
orientations of a real vector space, acted on by the group {E, P} of
determinant-sign classes.  The relativistic model has the four orientations
of a Minkowski space, acted on by the Klein four-group {E, T, S, TS} of
connected components of the Lorentz group.

Group classes and parities are both stored as tuples of bits so that the
group law, the parity product and the index are one code path for both
models: composition and parity products are componentwise XOR and the
index is ``(-1) ** sum(parity_bit * class_bit)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "OrientationModel",
    "STANDARD",
    "RELATIVISTIC",
    "GroupClass",
    "Orientation",
    "Parity",
    "compose",
    "index",
    "classify_gl",
    "classify_lorentz",
    "classify",
    "MINKOWSKI_MATRIX",
    "EVEN",
    "ODD",
    "EE",
    "OE",
    "EO",
    "OO",
]

MINKOWSKI_MATRIX = np.diag([1.0, -1.0, -1.0, -1.0])

SINGULAR_TOL = 1e-12
LORENTZ_TOL = 1e-9


class OrientationModel(enum.Enum):
    STANDARD = "standard"
    RELATIVISTIC = "relativistic"

    @property
    def n_bits(self) -> int:
        return 1 if self is OrientationModel.STANDARD else 2

    @property
    def n_orientations(self) -> int:
        return 2**self.n_bits

    def classes(self) -> tuple[GroupClass, ...]:
        return tuple(GroupClass(self, label) for label in _LABELS[self])

    def parities(self) -> tuple[Parity, ...]:
        if self is OrientationModel.STANDARD:
            return (Parity(self, (0,)), Parity(self, (1,)))
        return tuple(Parity(self, (t, s)) for t in (0, 1) for s in (0, 1))

    def orientations(self) -> tuple[Orientation, ...]:
        return tuple(Orientation(self, c) for c in self.classes())


STANDARD = OrientationModel.STANDARD
RELATIVISTIC = OrientationModel.RELATIVISTIC

_LABELS = {
    STANDARD: ("E", "P"),
    RELATIVISTIC: ("E", "T", "S", "TS"),
}
_BITS = {
    STANDARD: {"E": (0,), "P": (1,)},
    RELATIVISTIC: {"E": (0, 0), "T": (1, 0), "S": (0, 1), "TS": (1, 1)},
}
_FROM_BITS = {model: {bits: label for label, bits in table.items()} for model, table in _BITS.items()}


def _check_model(a, b) -> None:
    if a.model is not b.model:
        raise ValueError(f"orientation model mismatch: {a.model.value} vs {b.model.value}")


@dataclass(frozen=True)
class GroupClass:
    """An element of the quotient group acting on orientations."""

    model: OrientationModel
    label: str

    def __post_init__(self) -> None:
        if self.label not in _BITS[self.model]:
            raise ValueError(f"no class {self.label!r} in the {self.model.value} model")

    @property
    def bits(self) -> tuple[int, ...]:
        return _BITS[self.model][self.label]

    @classmethod
    def from_bits(cls, model: OrientationModel, bits) -> GroupClass:
        return cls(model, _FROM_BITS[model][tuple(int(b) for b in bits)])

    @classmethod
    def identity(cls, model: OrientationModel) -> GroupClass:
        return cls(model, "E")

    def __mul__(self, other):
        if isinstance(other, GroupClass):
            return compose(self, other)
        if isinstance(other, Orientation):
            _check_model(self, other)
            return Orientation(self.model, compose(self, other.offset))
        return NotImplemented

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Orientation:
    """An orientation, stored as the class carrying the reference orientation to it."""

    model: OrientationModel
    offset: GroupClass

    def __post_init__(self) -> None:
        _check_model(self, self.offset)

    @classmethod
    def reference(cls, model: OrientationModel = STANDARD) -> Orientation:
        return cls(model, GroupClass.identity(model))

    @classmethod
    def of(cls, model: OrientationModel, label: str) -> Orientation:
        return cls(model, GroupClass(model, label))

    def relative_to(self, other: Orientation) -> GroupClass:
        """The unique class mapping ``other`` to ``self``."""
        _check_model(self, other)
        return compose(self.offset, other.offset)

    def to_standard(self) -> Orientation:
        """The standard orientation containing this relativistic one (T, S reverse; TS keeps)."""
        if self.model is STANDARD:
            return self
        parity_bit = sum(self.offset.bits) % 2
        return Orientation(STANDARD, GroupClass.from_bits(STANDARD, (parity_bit,)))

    def __str__(self) -> str:
        return f"{self.offset.label}·o_ref"


@dataclass(frozen=True)
class Parity:
    """Standard parity ``(odd,)`` or relativistic pair ``(temporal_odd, spatial_odd)``."""

    model: OrientationModel
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        bits = tuple(int(b) for b in self.bits)
        if len(bits) != self.model.n_bits or any(b not in (0, 1) for b in bits):
            raise ValueError(f"invalid parity bits {self.bits} for the {self.model.value} model")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, text: str) -> Parity:
        """Parse ``"even"``, ``"odd"``, ``"e,o"``, ``"(o,e)"`` and similar."""
        key = text.strip().lower().strip("()").replace(" ", "")
        if key in ("even", "e"):
            return EVEN
        if key in ("odd", "o"):
            return ODD
        parts = key.split(",")
        if len(parts) == 2 and all(p in ("e", "o") for p in parts):
            return cls(RELATIVISTIC, tuple(int(p == "o") for p in parts))
        raise ValueError(f"cannot parse parity {text!r}")

    @property
    def is_even(self) -> bool:
        return not any(self.bits)

    @property
    def temporal(self) -> int:
        if self.model is not RELATIVISTIC:
            raise ValueError("temporal parity is defined in the relativistic model only")
        return self.bits[0]

    @property
    def spatial(self) -> int:
        return self.bits[-1]

    def __mul__(self, other: Parity) -> Parity:
        if not isinstance(other, Parity):
            return NotImplemented
        _check_model(self, other)
        return Parity(self.model, tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def __str__(self) -> str:
        if self.model is STANDARD:
            return "odd" if self.bits[0] else "even"
        return "({},{})".format(*("o" if b else "e" for b in self.bits))


EVEN = Parity(STANDARD, (0,))
ODD = Parity(STANDARD, (1,))
EE = Parity(RELATIVISTIC, (0, 0))
OE = Parity(RELATIVISTIC, (1, 0))
EO = Parity(RELATIVISTIC, (0, 1))
OO = Parity(RELATIVISTIC, (1, 1))


def even_parity(model: OrientationModel) -> Parity:
    return EVEN if model is STANDARD else EE


def top_odd_parity(model: OrientationModel) -> Parity:
    """Parity of the metric volume form: odd, or (o,o) in the relativistic model."""
    return ODD if model is STANDARD else OO


def compose(a: GroupClass, b: GroupClass) -> GroupClass:
    """Group product of two classes of the same model."""
    _check_model(a, b)
    return GroupClass.from_bits(a.model, tuple(x ^ y for x, y in zip(a.bits, b.bits)))


def index(parity: Parity, cls: GroupClass) -> int:
    """Sign picked up by a multicovector of ``parity`` under a map of class ``cls``."""
    _check_model(parity, cls)
    return -1 if sum(p * c for p, c in zip(parity.bits, cls.bits)) % 2 else 1


def classify_gl(matrix, tol: float = SINGULAR_TOL) -> GroupClass:
    """Classify an invertible linear map by the sign of its determinant."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    det = np.linalg.det(m)
    if abs(det) <= tol:
        raise ValueError(f"singular linear map (det = {det:.3e})")
    return GroupClass(STANDARD, "E" if det > 0 else "P")


def future_unit_vector(metric=None) -> np.ndarray:
    """A unit timelike vector for ``metric``; ``e_0`` for the orthonormal reference basis."""
    g = MINKOWSKI_MATRIX if metric is None else np.asarray(metric, dtype=float)
    if np.array_equal(g, MINKOWSKI_MATRIX):
        return np.array([1.0, 0.0, 0.0, 0.0])
    vals, vecs = np.linalg.eigh(g)
    u = vecs[:, int(np.argmax(vals))]
    u = u / np.sqrt(u @ g @ u)
    return u if u[int(np.argmax(np.abs(u)))] > 0 else -u


def classify_lorentz(matrix, metric=None, tol: float = LORENTZ_TOL) -> GroupClass:
    """Classify a Lorentz map into one of the four components E, T, S, TS.

    Parameters
    ----------
    matrix : array_like, shape (4, 4)
        The linear map in the reference basis.
    metric : array_like, optional
        Metric coefficients; defaults to ``diag(1, -1, -1, -1)``.
    tol : float
        Entrywise tolerance on ``matrix.T @ metric @ matrix - metric``.

    Raises
    ------
    ValueError
        If the map does not preserve the metric; the message names the worst entry.
    """
    g = MINKOWSKI_MATRIX if metric is None else np.asarray(metric, dtype=float)
    m = np.asarray(matrix, dtype=float)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    defect = m.T @ g @ m - g
    worst = np.unravel_index(int(np.argmax(np.abs(defect))), defect.shape)
    if abs(defect[worst]) > tol:
        raise ValueError(
            "not a Lorentz map: <g(rho e_{0}), rho e_{1}> deviates from the metric by {2:.3e}".format(
                worst[0], worst[1], defect[worst]
            )
        )
    u0 = future_unit_vector(g)
    reverses_time = (m @ u0) @ g @ u0 < 0
    improper = np.linalg.det(m) < 0
    return GroupClass.from_bits(RELATIVISTIC, (int(reverses_time), int(reverses_time != improper)))


def classify(matrix, model: OrientationModel, metric=None) -> GroupClass:
    """Class of ``matrix`` in the quotient group of ``model``."""
    if model is STANDARD:
        return classify_gl(matrix)
    return classify_lorentz(matrix, metric)
