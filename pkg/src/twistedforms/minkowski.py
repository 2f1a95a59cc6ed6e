"""Minkowski metric, Lorentz maps, inertial frames and the vacuum constitutive map."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.transform import Rotation

from .forms import AffineMap, DensityField, DifferentialForm
from .multilinear import MultiCovector, compound, weyl_matrix
from .orientation import (
    EVEN,
    MINKOWSKI_MATRIX,
    OE,
    STANDARD,
    GroupClass,
    OrientationModel,
    Parity,
    classify,
    classify_lorentz,
    top_odd_parity,
)

__all__ = [
    "MinkowskiMetric",
    "SpatialMetric",
    "InertialFrame",
    "volume_form",
    "boost",
    "rotation",
    "TIME_REVERSAL",
    "SPACE_INVERSION",
    "COMPONENT_REPRESENTATIVES",
    "random_lorentz",
    "spatial_split",
    "spatial_metric",
    "constitutive",
    "constitutive_matrix",
    "spatial_constitutive",
    "spatial_constitutive_B",
    "spatial_constitutive_matrix",
    "field_parity",
]

TIME_REVERSAL = np.diag([-1.0, 1.0, 1.0, 1.0])
SPACE_INVERSION = np.diag([1.0, -1.0, -1.0, -1.0])
COMPONENT_REPRESENTATIVES = {
    "E": np.eye(4),
    "T": TIME_REVERSAL,
    "S": SPACE_INVERSION,
    "TS": -np.eye(4),
}


@dataclass(frozen=True, eq=False)
class MinkowskiMetric:
    """Metric coefficients of signature (1, 3); defaults to ``diag(1, -1, -1, -1)``."""

    matrix: np.ndarray = field(default_factory=lambda: MINKOWSKI_MATRIX.copy())

    def __post_init__(self) -> None:
        g = np.array(self.matrix, dtype=float)
        if g.shape != (4, 4) or not np.allclose(g, g.T):
            raise ValueError("metric must be a symmetric 4x4 matrix")
        vals = np.linalg.eigvalsh(g)
        if np.sum(vals > 0) != 1 or np.sum(vals < 0) != 3:
            raise ValueError(f"metric must have signature (1, 3), eigenvalues {vals.tolist()}")
        g.setflags(write=False)
        object.__setattr__(self, "matrix", g)

    @property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)

    @property
    def sqrt_det(self) -> float:
        return math.sqrt(abs(np.linalg.det(self.matrix)))

    def __call__(self, v, w) -> float:
        return float(np.asarray(v) @ self.matrix @ np.asarray(w))


def _g(metric) -> np.ndarray:
    if metric is None:
        return MINKOWSKI_MATRIX
    return np.asarray(getattr(metric, "matrix", metric), dtype=float)


def volume_form(metric=None, model: OrientationModel = STANDARD) -> MultiCovector:
    """The metric volume form, odd (or parity (o,o)), positive on the reference basis."""
    g = _g(metric)
    det = np.linalg.det(g)
    if abs(det) < 1e-300:
        raise ValueError("degenerate metric")
    return MultiCovector(4, top_odd_parity(model), [math.sqrt(abs(det))], 4)


# --------------------------------------------------------------------------
# Lorentz maps


def boost(beta) -> np.ndarray:
    """Pure boost with velocity ``beta`` (3-vector, units of c)."""
    b = np.asarray(beta, dtype=float).reshape(3)
    b2 = float(b @ b)
    if b2 >= 1.0:
        raise ValueError("boost speed must be below 1")
    out = np.eye(4)
    if b2 == 0.0:
        return out
    gamma = 1.0 / math.sqrt(1.0 - b2)
    out[0, 0] = gamma
    out[0, 1:] = out[1:, 0] = gamma * b
    out[1:, 1:] += (gamma - 1.0) * np.outer(b, b) / b2
    return out


def rotation(matrix_or_rotvec) -> np.ndarray:
    """Spatial rotation from a 3x3 orthogonal matrix or a rotation vector."""
    r = np.asarray(matrix_or_rotvec, dtype=float)
    rot = r if r.shape == (3, 3) else Rotation.from_rotvec(r.reshape(3)).as_matrix()
    out = np.eye(4)
    out[1:, 1:] = rot
    return out


def random_lorentz(rng: np.random.Generator, component: str = "E", max_rapidity: float = 1.5) -> np.ndarray:
    """A random Lorentz map in the given component, built as boost x rotation x reflection."""
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    speed = math.tanh(rng.uniform(0.0, max_rapidity))
    rot = Rotation.random(random_state=rng).as_matrix()
    return boost(speed * direction) @ rotation(rot) @ COMPONENT_REPRESENTATIVES[component]


# --------------------------------------------------------------------------
# inertial frames


@dataclass(frozen=True, eq=False)
class InertialFrame:
    """Unit timelike ``u``, initial event ``x0`` and orthonormal spatial triad.

    ``triad`` holds ``f_1, f_2, f_3`` as rows; they satisfy ``g(u, f_i) = 0`` and
    ``g(f_i, f_j) = -delta_ij``.
    """

    u: np.ndarray
    x0: np.ndarray = None
    triad: np.ndarray = None
    c: float = 1.0
    metric: MinkowskiMetric = field(default_factory=MinkowskiMetric)

    def __post_init__(self) -> None:
        g = self.metric.matrix
        u = np.array(self.u, dtype=float).reshape(4)
        x0 = np.zeros(4) if self.x0 is None else np.array(self.x0, dtype=float).reshape(4)
        if self.triad is None:
            triad = _complete_triad(u, g)
        else:
            triad = np.array(self.triad, dtype=float).reshape(3, 4)
        basis = np.vstack([u, triad])
        gram = basis @ g @ basis.T
        if not np.allclose(gram, np.diag([1.0, -1.0, -1.0, -1.0]), atol=1e-9):
            raise ValueError(f"frame is not orthonormal: Gram matrix {np.round(gram, 12).tolist()}")
        if self.c <= 0:
            raise ValueError("speed of light must be positive")
        for name, val in (("u", u), ("x0", x0), ("triad", triad)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @classmethod
    def rest(cls, x0=None, c: float = 1.0) -> InertialFrame:
        return cls(np.array([1.0, 0, 0, 0]), x0, np.eye(4)[1:], c)

    @classmethod
    def from_velocity(cls, beta, x0=None, c: float = 1.0) -> InertialFrame:
        """The rest frame boosted to velocity ``beta`` (3-vector or scalar along e_1)."""
        b = np.asarray(beta, dtype=float)
        b = np.array([float(b), 0.0, 0.0]) if b.ndim == 0 else b
        lam = boost(b)
        return cls(lam[:, 0], x0, lam[:, 1:].T, c)

    @property
    def basis(self) -> np.ndarray:
        """Columns ``u, f_1, f_2, f_3``."""
        return np.vstack([self.u, self.triad]).T

    def basis_class(self, model: OrientationModel) -> GroupClass:
        return classify(self.basis, model, self.metric.matrix)

    def chart(self) -> AffineMap:
        """``(t, xi) -> x0 + c t u + xi^i f_i``."""
        lin = self.basis.copy()
        lin[:, 0] *= self.c
        return AffineMap(lin, self.x0)

    def nu(self, t, y) -> np.ndarray:
        """``nu(t, y) = y + c t u``."""
        return np.asarray(y, dtype=float) + self.c * np.asarray(t, dtype=float)[..., None] * self.u

    def split(self, x) -> tuple[np.ndarray, np.ndarray]:
        """``(tau(x), theta(x))``: observer time and the spatial point."""
        x = np.asarray(x, dtype=float)
        s = (x - self.x0) @ self.metric.matrix @ self.u
        return s / self.c, x - s[..., None] * self.u

    def event(self, t, xi) -> np.ndarray:
        return self.chart()(np.concatenate([np.atleast_1d(t)[..., None], np.atleast_2d(xi)], axis=-1))

    def coordinates(self, x) -> np.ndarray:
        """``(t, xi)`` for events ``x``; inverse of :meth:`event`."""
        return self.chart().inverse()(np.asarray(x, dtype=float))

    def time_reflection(self) -> AffineMap:
        """``x -> x - 2 g(u, x - x0) u``."""
        gu = self.metric.matrix @ self.u
        lin = np.eye(4) - 2.0 * np.outer(self.u, gu)
        return AffineMap(lin, 2.0 * (gu @ self.x0) * self.u)


def _complete_triad(u: np.ndarray, g: np.ndarray) -> np.ndarray:
    # Gram-Schmidt in the indefinite metric, starting from the reference spatial axes
    rows = []
    for k in range(1, 4):
        w = np.eye(4)[k]
        w = w - (u @ g @ w) * u
        for f in rows:
            w = w + (f @ g @ w) * f
        rows.append(w / math.sqrt(-(w @ g @ w)))
    return np.array(rows)


def spatial_split(frame: InertialFrame, x) -> tuple[np.ndarray, np.ndarray]:
    return frame.split(x)


@dataclass(frozen=True, eq=False)
class SpatialMetric:
    """Euclidean metric ``h(w) = -pi(g(w))`` on the frame's spatial space ``W``."""

    frame: InertialFrame

    @property
    def matrix(self) -> np.ndarray:
        """Coefficients in the triad; the identity for an orthonormal triad."""
        f = self.frame.triad
        return -(f @ self.frame.metric.matrix @ f.T)

    def __call__(self, v, w) -> float:
        for vec in (v, w):
            if abs(self.frame.u @ self.frame.metric.matrix @ np.asarray(vec)) > 1e-9 * max(1.0, np.linalg.norm(vec)):
                raise ValueError("vector is not in the spatial space of the frame")
        return -float(np.asarray(v) @ self.frame.metric.matrix @ np.asarray(w))


def spatial_metric(frame: InertialFrame) -> SpatialMetric:
    return SpatialMetric(frame)


# --------------------------------------------------------------------------
# constitutive relations


def field_parity(model: OrientationModel) -> Parity:
    """Parity of the field strength: even, or (o,e) in the relativistic model."""
    return EVEN if model is STANDARD else OE


def constitutive_matrix(metric=None, dim: int = 4) -> np.ndarray:
    """Coefficient matrix of ``F -> We_2((wedge^2 g^-1 F) (x) sqrt|g|)``."""
    g = _g(metric)
    return weyl_matrix(dim, 2) @ (math.sqrt(abs(np.linalg.det(g))) * compound(np.linalg.inv(g), 2))


def constitutive(f, metric=None):
    """Vacuum constitutive relation; accepts a form or a single bicovector.

    Raises
    ------
    ValueError
        If ``f`` is not a 2-form with field-strength parity.
    """
    if f.degree != 2 or f.dim != 4:
        raise ValueError("constitutive relation needs a 2-form on space-time")
    if f.parity != field_parity(f.model):
        raise ValueError(f"field strength must have parity {field_parity(f.model)}, got {f.parity}")
    parity = f.parity * top_odd_parity(f.model)
    m = constitutive_matrix(metric)
    if isinstance(f, MultiCovector):
        return MultiCovector(2, parity, m @ f.coeffs, 4)
    return f.linear(m, parity=parity)


def spatial_constitutive_matrix(degree: int, h=None) -> np.ndarray:
    """Coefficient matrix of the spatial constitutive maps for E (degree 1) or B (degree 2)."""
    hm = np.eye(3) if h is None else np.asarray(getattr(h, "matrix", h), dtype=float)
    sign = -1.0 if degree == 1 else 1.0
    return sign * math.sqrt(abs(np.linalg.det(hm))) * compound(np.linalg.inv(hm), degree)


def _spatial_density(form: DifferentialForm, h) -> DensityField:
    m = spatial_constitutive_matrix(form.degree, h)
    return DensityField(form.degree, form.parity, form.coefficients.linear(m))


def spatial_constitutive(e: DifferentialForm, h=None) -> DensityField:
    """``D = -(h^-1 E) (x) sqrt|h|`` for a spatial 1-form in triad coordinates.

    The sign is the one forced by the frame decomposition of the space-time
    constitutive relation.
    """
    if e.degree != 1 or e.dim != 3:
        raise ValueError("spatial_constitutive needs a spatial 1-form")
    if not e.parity.is_even:
        raise ValueError("the electric field must be even")
    return _spatial_density(e, h)


def spatial_constitutive_B(b: DifferentialForm, h=None) -> DensityField:
    """``H = (h^-1 B) (x) sqrt|h|`` for a spatial 2-form in triad coordinates."""
    if b.degree != 2 or b.dim != 3:
        raise ValueError("spatial_constitutive_B needs a spatial 2-form")
    if not b.parity.is_even:
        raise ValueError("the magnetic field must be even")
    return _spatial_density(b, h)


def is_lorentz(matrix, metric=None) -> bool:
    try:
        classify_lorentz(matrix, _g(metric))
    except ValueError:
        return False
    return True
