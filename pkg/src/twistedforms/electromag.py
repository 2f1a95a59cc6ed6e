"""Field configurations, frame decomposition, Maxwell residuals and time-reflection parities.

Spatial objects live in frame coordinates ``z = (t, xi)`` with
``x = x0 + c t u + xi^i f_i``.  Each of the eight frame fields is a
:class:`TimeDependentForm`: a spatial form (or vector density) whose
coefficients over the triad basis depend on ``z``.

Sign conventions follow from ``dF = 0``, ``dG + (4 pi / c) J = 0`` and
``F = dA`` with ``E = i_u F``, ``D`` the spatial part of ``G``, ``Q`` the
spatial part of ``J`` and ``A3 = -`` the spatial part of ``A``:

* ``(1/c) dB/dt - dE = 0`` and ``dB = 0``;
* ``(1/c) dD/dt - Div H + (4 pi / c) J3 = 0`` and ``Div D + (4 pi / c) Q = 0``;
* ``D = -(h^-1 E) (x) sqrt|h|`` and ``H = (h^-1 B) (x) sqrt|h|``;
* ``E = -(1/c) dA3/dt - dU`` and ``B = -dA3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.special import erf

from .chains import Chain, boundary, integrate
from .forms import (
    AffineMap,
    CoefficientField,
    DifferentialForm,
    VectorField,
    _halton_box,
    exterior_differential,
    interior_product,
    pullback,
)
from .multilinear import _divergence_table, _position, basis_indices, compound, wedge_table, weyl_matrix
from .minkowski import (
    InertialFrame,
    constitutive,
    spatial_constitutive_matrix,
)
from .orientation import (
    EO,
    EVEN,
    MINKOWSKI_MATRIX,
    ODD,
    OE,
    RELATIVISTIC,
    STANDARD,
    OrientationModel,
    Parity,
    classify,
    index,
)

__all__ = [
    "FieldConfiguration",
    "PointCharge",
    "TimeDependentForm",
    "FrameFields",
    "OBJECTS",
    "MODEL_A",
    "MODEL_B",
    "decompose",
    "maxwell_residual_4d",
    "maxwell_residual_3d",
    "integral_laws_stationary",
    "enclosed_charge",
    "time_reflection_parities",
    "parity_table",
    "builtin_fields",
    "BUILTIN_FIELDS",
    "expected_parities",
    "gauss_flux",
]

FOUR_PI = 4.0 * math.pi
OBJECTS = ("E", "B", "D", "H", "Q", "J", "U", "A")
MODEL_A = {"E": "odd", "B": "even", "D": "odd", "H": "even", "Q": "odd", "J": "even", "U": "odd", "A": "even"}
MODEL_B = {k: ("even" if v == "odd" else "odd") for k, v in MODEL_A.items()}
SIGN_TOL = 1e-8
DEFAULT_BOX = (np.full(4, -1.0), np.full(4, 1.0))

_PARITIES = {
    STANDARD: {"F": EVEN, "G": ODD, "J": ODD, "A": EVEN},
    RELATIVISTIC: {"F": OE, "G": EO, "J": EO, "A": OE},
}


def expected_parities(model: OrientationModel) -> dict[str, str]:
    """The time-reflection table expected for ``model``."""
    return dict(MODEL_A if model is STANDARD else MODEL_B)


# --------------------------------------------------------------------------
# configurations


@dataclass(frozen=True)
class PointCharge:
    """A charge ``q`` at rest in the reference frame, at spatial position ``center``."""

    q: float
    center: tuple = (0.0, 0.0, 0.0)

    def event(self, s: float, c: float = 1.0) -> np.ndarray:
        return np.concatenate([[c * s], np.asarray(self.center, dtype=float)])


@dataclass(frozen=True, eq=False)
class FieldConfiguration:
    """Field strength ``F``, induction ``G``, current ``J`` and optional potential ``A``.

    Parameters
    ----------
    box : (lo, hi)
        Default sampling box in frame coordinates ``(t, xi)``.
    charges : tuple of PointCharge
        Delta-supported charges not represented by ``J``.
    """

    F: DifferentialForm
    G: DifferentialForm
    J: DifferentialForm
    A: Optional[DifferentialForm] = None
    c: float = 1.0
    name: str = "custom"
    charges: tuple = ()
    box: tuple = DEFAULT_BOX
    metric: np.ndarray = field(default_factory=lambda: MINKOWSKI_MATRIX)

    def __post_init__(self) -> None:
        expected = _PARITIES[self.model]
        for key, degree in (("F", 2), ("G", 2), ("J", 3), ("A", 1)):
            form = getattr(self, key)
            if form is None:
                continue
            if form.degree != degree or form.dim != 4:
                raise ValueError(f"{key} must be a {degree}-form on space-time")
            if form.parity != expected[key]:
                raise ValueError(f"{key} must have parity {expected[key]} in the {self.model.value} model, got {form.parity}")

    @property
    def model(self) -> OrientationModel:
        return self.F.model

    def forms(self) -> dict[str, DifferentialForm]:
        out = {"F": self.F, "G": self.G, "J": self.J}
        if self.A is not None:
            out["A"] = self.A
        return out

    def with_model(self, model: OrientationModel) -> FieldConfiguration:
        """Same coefficients, parities re-tagged for another orientation model."""
        tags = _PARITIES[model]
        kw = {k: f.with_parity(tags[k]) for k, f in self.forms().items()}
        return replace(self, **kw)

    def pullback(self, phi: AffineMap) -> FieldConfiguration:
        kw = {k: pullback(phi, f, self.metric) for k, f in self.forms().items()}
        return replace(self, charges=(), **kw)


# --------------------------------------------------------------------------
# time-dependent spatial objects


def _pad_time(table: np.ndarray) -> np.ndarray:
    """Extend a spatial derivative table ``[k, l, j]`` with a zero time slot ``l = 0``."""
    out = np.zeros((table.shape[0], 4, table.shape[2]))
    out[:, 1:, :] = table
    return out


@dataclass(frozen=True, eq=False)
class TimeDependentForm:
    """A spatial form or vector density with coefficients depending on ``(t, xi)``.

    ``density`` marks a vector density; then ``degree`` and ``parity`` refer to
    the multivector factor.
    """

    degree: int
    parity: Parity
    coefficients: CoefficientField
    density: bool = False
    mode: str = "auto"

    def values(self, z) -> np.ndarray:
        return self.coefficients(z)

    def _like(self, coefficients, degree=None, density=None, parity=None) -> TimeDependentForm:
        return TimeDependentForm(
            self.degree if degree is None else degree,
            self.parity if parity is None else parity,
            coefficients,
            self.density if density is None else density,
            self.mode,
        )

    def __add__(self, other: TimeDependentForm) -> TimeDependentForm:
        self._check(other)
        return self._like(self.coefficients.add(other.coefficients))

    def __sub__(self, other: TimeDependentForm) -> TimeDependentForm:
        self._check(other)
        return self._like(self.coefficients.add(other.coefficients, -1.0))

    def __mul__(self, scalar) -> TimeDependentForm:
        return self._like(self.coefficients.linear(float(scalar) * np.eye(self.coefficients.ncomp)))

    __rmul__ = __mul__

    def __neg__(self) -> TimeDependentForm:
        return self * -1.0

    def _check(self, other: TimeDependentForm) -> None:
        if (self.degree, self.parity, self.density) != (other.degree, other.parity, other.density):
            raise ValueError(
                f"incompatible spatial objects: degree {self.degree}/{other.degree}, "
                f"parity {self.parity}/{other.parity}"
            )

    def _contract(self, table: np.ndarray) -> CoefficientField:
        coeff = self.coefficients
        if self.mode == "fd" or (self.mode == "auto" and not coeff.has_jacobian):
            return coeff.fd_derivative_contract(table)
        if coeff.poly is None and coeff.hess is None:
            jac = coeff.jac
            return CoefficientField(lambda z: np.einsum("klj,njl->nk", table, jac(z)), table.shape[0], 4)
        return coeff.derivative_contract(table)

    def dt(self) -> TimeDependentForm:
        """Partial derivative in ``t`` at fixed ``xi``."""
        n = self.coefficients.ncomp
        table = np.zeros((n, 4, n))
        table[:, 0, :] = np.eye(n)
        return self._like(self._contract(table))

    def d(self) -> TimeDependentForm:
        """Spatial exterior differential."""
        if self.density:
            raise TypeError("use div() on densities")
        if self.degree >= 3:
            return self._like(CoefficientField.constant(np.zeros(0), 4), degree=self.degree + 1)
        return self._like(self._contract(_pad_time(wedge_table(3, 1, self.degree))), degree=self.degree + 1)

    def div(self) -> TimeDependentForm:
        """Spatial divergence of a vector density."""
        if not self.density:
            raise TypeError("div() needs a vector density")
        return self._like(self._contract(_pad_time(_divergence_table(3, self.degree))), degree=self.degree - 1)

    def weyl_dual(self) -> TimeDependentForm:
        """Form to density (``We^-1``)."""
        if self.density:
            raise TypeError("already a density")
        q = 3 - self.degree
        return self._like(self.coefficients.linear(weyl_matrix(3, q).T), degree=q, density=True, parity=self.parity * ODD)

    def weyl_form(self) -> TimeDependentForm:
        """Density to form (``We``)."""
        if not self.density:
            raise TypeError("not a density")
        return self._like(
            self.coefficients.linear(weyl_matrix(3, self.degree)), degree=3 - self.degree, density=False, parity=self.parity * ODD
        )

    def at(self, t: float) -> DifferentialForm:
        """The spatial form at time ``t`` as a form on ``R^3``."""
        if self.density:
            raise TypeError("convert densities with weyl_form() first")
        lift = np.zeros((4, 3))
        lift[1:, :] = np.eye(3)
        coeff = self.coefficients.compose_affine(lift, np.array([t, 0.0, 0.0, 0.0]), np.eye(self.coefficients.ncomp))
        return DifferentialForm(self.degree, self.parity, coeff)


@dataclass(frozen=True, eq=False)
class FrameFields:
    """The eight spatial objects of a configuration relative to an inertial frame."""

    frame: InertialFrame
    E: TimeDependentForm
    B: TimeDependentForm
    D: TimeDependentForm
    H: TimeDependentForm
    Q: TimeDependentForm
    J: TimeDependentForm
    U: Optional[TimeDependentForm] = None
    A: Optional[TimeDependentForm] = None
    charges: tuple = ()
    box: tuple = DEFAULT_BOX

    @property
    def c(self) -> float:
        return self.frame.c

    def objects(self) -> dict[str, TimeDependentForm]:
        return {k: getattr(self, k) for k in OBJECTS if getattr(self, k) is not None}

    def charge_position(self, charge: PointCharge, t: float) -> np.ndarray:
        """Frame spatial coordinates of a static reference-frame charge at frame time ``t``."""
        inv = self.frame.chart().inverse()
        z0 = inv(charge.event(0.0, self.c))
        z1 = inv(charge.event(1.0, self.c))
        s = (t - z0[0]) / (z1[0] - z0[0])
        return (z0 + s * (z1 - z0))[1:]


def _selection(q4: int, time_part: bool, scale: float) -> np.ndarray:
    """Rows: spatial index tuples; columns: space-time tuples of degree ``q4``."""
    q3 = q4 - 1 if time_part else q4
    pos = _position(4, q4)
    idx3 = basis_indices(3, q3)
    out = np.zeros((len(idx3), math.comb(4, q4)))
    for r, idx in enumerate(idx3):
        shifted = tuple(i + 1 for i in idx)
        out[r, pos[(0,) + shifted if time_part else shifted]] = scale
    return out


def _spatial_parity(p: Parity) -> Parity:
    return p if p.model is STANDARD else Parity(STANDARD, (p.spatial,))


def decompose(cfg: FieldConfiguration, frame: InertialFrame, mode: str = "auto") -> FrameFields:
    """Split ``F, G, J, A`` into ``E, B, D, H, Q, J, U, A`` relative to ``frame``.

    Coefficients over ``(dt, dxi)`` come from pulling back along the frame chart
    with the orientation ``[u, o]`` of the frame basis; the time components are
    divided by ``c`` so that ``E = i_u F`` and so on.
    """
    if not math.isclose(frame.c, cfg.c):
        raise ValueError(f"frame and configuration disagree on c: {frame.c} vs {cfg.c}")
    chart = frame.chart()
    cls = classify(frame.basis, cfg.model, cfg.metric)
    c = frame.c

    def framed(form: DifferentialForm) -> CoefficientField:
        m = index(form.parity, cls) * compound(chart.linear, form.degree).T
        return form.coefficients.compose_affine(chart.linear, chart.translation, m)

    def part(form, time_part, sign=1.0):
        scale = sign / c if time_part else sign
        q3 = form.degree - 1 if time_part else form.degree
        coeff = framed(form).linear(_selection(form.degree, time_part, scale))
        return TimeDependentForm(q3, _spatial_parity(form.parity), coeff, False, mode)

    out = dict(
        E=part(cfg.F, True),
        B=part(cfg.F, False),
        H=part(cfg.G, True),
        D=part(cfg.G, False),
        J=part(cfg.J, True),
        Q=part(cfg.J, False),
    )
    if cfg.A is not None:
        out["U"] = part(cfg.A, True)
        out["A"] = part(cfg.A, False, -1.0)
    return FrameFields(frame, charges=tuple(cfg.charges), box=cfg.box, **out)


# --------------------------------------------------------------------------
# residuals


def _max_abs(values: np.ndarray) -> float:
    return float(np.abs(values).max(initial=0.0))


def maxwell_residual_4d(cfg: FieldConfiguration, box=None, n: int = 64, mode: str = "auto", seed: int = 0) -> tuple[float, float]:
    """Max-norms of ``dF`` and ``dG + (4 pi / c) J`` at quasi-random events.

    ``box`` is given in reference coordinates and defaults to the configuration's box.
    """
    lo, hi = cfg.box if box is None else box
    x = _halton_box((lo, hi), n, seed)
    r1 = _max_abs(exterior_differential(cfg.F, mode).coeffs(x))
    r2 = _max_abs((exterior_differential(cfg.G, mode) + (FOUR_PI / cfg.c) * cfg.J).coeffs(x))
    return r1, r2


def maxwell_residual_3d(ff: FrameFields, box=None, n: int = 64, seed: int = 0) -> dict[str, float]:
    """Residuals of the 3D field, constitutive and potential equations.

    Returns a dict with keys ``faraday``, ``no_monopole``, ``ampere``, ``gauss``,
    ``constitutive_d``, ``constitutive_h`` and, when a potential is present,
    ``potential_e`` and ``potential_b``.
    """
    lo, hi = ff.box if box is None else box
    z = _halton_box((lo, hi), n, seed)
    c = ff.c
    d_bar, h_bar = ff.D.weyl_dual(), ff.H.weyl_dual()
    j_bar, q_bar = ff.J.weyl_dual(), ff.Q.weyl_dual()
    eqs = {
        "faraday": (1.0 / c) * ff.B.dt() - ff.E.d(),
        "no_monopole": ff.B.d(),
        "ampere": (1.0 / c) * d_bar.dt() - h_bar.div() + (FOUR_PI / c) * j_bar,
        "gauss": d_bar.div() + (FOUR_PI / c) * q_bar,
        "constitutive_d": d_bar - _apply_spatial_constitutive(ff.E),
        "constitutive_h": h_bar - _apply_spatial_constitutive(ff.B),
    }
    if ff.A is not None:
        eqs["potential_e"] = ff.E + (1.0 / c) * ff.A.dt() + ff.U.d()
        eqs["potential_b"] = ff.B + ff.A.d()
    return {k: _max_abs(v.values(z)) for k, v in eqs.items()}


def _apply_spatial_constitutive(obj: TimeDependentForm) -> TimeDependentForm:
    m = spatial_constitutive_matrix(obj.degree)
    return obj._like(obj.coefficients.linear(m), density=True)


def _newton_preimage(cell, target: np.ndarray, iters: int = 60) -> Optional[np.ndarray]:
    s = np.full(cell.q, 0.5)
    for _ in range(iters):
        r = cell(s)[0] - target
        if np.linalg.norm(r) < 1e-12:
            return s
        jac = cell.tangents(s)[0]
        try:
            s = s - np.linalg.solve(jac, r)
        except np.linalg.LinAlgError:
            return None
        s = np.clip(s, -0.5, 1.5)
    return s if np.linalg.norm(cell(s)[0] - target) < 1e-9 else None


def enclosed_charge(ff: FrameFields, volume: Chain, t: float = 0.0) -> float:
    """Signed point charge inside a 3-chain, counted with orientation and weight."""
    total = 0.0
    for charge in ff.charges:
        pos = ff.charge_position(charge, t)
        for weight, cell in volume.terms:
            s = _newton_preimage(cell, pos)
            if s is None or np.any(s < -1e-9) or np.any(s > 1 + 1e-9):
                continue
            if np.any(np.minimum(s, 1 - s) < 1e-6):
                raise ValueError("a point charge lies on the boundary of the chain")
            orient = index(ODD, cell.orientation.offset)
            total += weight * orient * np.sign(np.linalg.det(cell.tangents(s)[0])) * charge.q
    return total


def integral_laws_stationary(
    ff: FrameFields,
    surface: Chain | None = None,
    volume: Chain | None = None,
    t: float = 0.0,
    n: int = 8,
    dt: float | None = None,
) -> dict[str, float]:
    """Residuals of the integral Maxwell laws over stationary spatial chains.

    ``surface`` (a 2-chain) gives ``faraday`` and ``ampere``; ``volume`` (a
    3-chain) gives ``monopole`` and ``gauss``.  Point charges enter the Gauss
    law through their analytic enclosed charge.
    """
    c = ff.c
    delta = 1e-4 / c if dt is None else dt
    out: dict[str, float] = {}

    def rate(obj, chain):
        chain = chain.with_parity(obj.parity)
        return (integrate(obj.at(t + delta), chain, n) - integrate(obj.at(t - delta), chain, n)) / (2 * delta)

    def over(obj, chain):
        return integrate(obj.at(t), chain.with_parity(obj.parity), n)

    if surface is not None:
        if surface.q != 2:
            raise ValueError("the surface chain must be 2-dimensional")
        rim = boundary(surface)
        out["faraday"] = abs(rate(ff.B, surface) / c - over(ff.E, rim))
        out["ampere"] = abs(rate(ff.D, surface) / c - over(ff.H, rim) + (FOUR_PI / c) * over(ff.J, surface))
    if volume is not None:
        if volume.q != 3:
            raise ValueError("the volume chain must be 3-dimensional")
        shell = boundary(volume)
        out["monopole"] = abs(over(ff.B, shell))
        flux = over(ff.D, shell)
        out["gauss"] = float(abs(flux + (FOUR_PI / c) * over(ff.Q, volume) - FOUR_PI * enclosed_charge(ff, volume, t)))
    return out


def gauss_flux(ff: FrameFields, volume: Chain, t: float = 0.0, n: int = 12) -> float:
    """``int_{dV} D`` at time ``t``."""
    return integrate(ff.D.at(t), boundary(volume).with_parity(ff.D.parity), n)


# --------------------------------------------------------------------------
# time reflection


def time_reflection_parities(
    cfg: FieldConfiguration,
    frame: InertialFrame | None = None,
    n: int = 16,
    tol: float = SIGN_TOL,
    seed: int = 0,
) -> dict[str, str]:
    """Temporal parity of each frame object under the frame's time reflection.

    Pulls ``F, G, J, A`` back along ``x -> x - 2 g(u, x - x0) u`` with the
    orientation rule of ``cfg.model``, decomposes in the same frame and compares
    each object with ``+-X(-t, xi)``.  Objects vanishing at the samples are
    reported as ``"indeterminate"``.

    Raises
    ------
    ValueError
        If neither sign matches within ``tol`` relative to the sample scale.
    """
    frame = InertialFrame.rest(c=cfg.c) if frame is None else frame
    reflected = cfg.pullback(frame.time_reflection())
    ff, ff_r = decompose(cfg, frame), decompose(reflected, frame)
    z = _halton_box(cfg.box, n, seed)
    z_rev = z * np.array([-1.0, 1.0, 1.0, 1.0])
    out = {}
    for name, obj in ff.objects().items():
        base = obj.values(z_rev)
        image = getattr(ff_r, name).values(z)
        scale = _max_abs(base)
        if scale < 1e-12:
            out[name] = "indeterminate"
        elif _max_abs(image - base) <= tol * scale:
            out[name] = "even"
        elif _max_abs(image + base) <= tol * scale:
            out[name] = "odd"
        else:
            raise ValueError(f"no consistent sign for {name}: residuals {_max_abs(image - base):.3e} / {_max_abs(image + base):.3e}")
    return out


def parity_table(
    field: str = "plane_wave",
    model: OrientationModel = STANDARD,
    frame: InertialFrame | None = None,
    fallback_seed: int = 7,
    **params,
) -> dict[str, tuple[str, str]]:
    """Parity table with indeterminate entries filled from a generic polynomial witness.

    Returns ``{object: (parity, fixture)}``.
    """
    cfg = builtin_fields(field, model=model, **params)
    table = time_reflection_parities(cfg, frame)
    out = {k: (v, field) for k, v in table.items()}
    missing = [k for k in OBJECTS if out.get(k, ("indeterminate",))[0] == "indeterminate"]
    if missing:
        witness = builtin_fields("polynomial", model=model, seed=fallback_seed, c=cfg.c)
        extra = time_reflection_parities(witness, frame)
        for k in missing:
            out[k] = (extra[k], "polynomial")
    return {k: out[k] for k in OBJECTS}


# --------------------------------------------------------------------------
# built-in configurations


def _parities(model: OrientationModel) -> dict[str, Parity]:
    return _PARITIES[model]


def _zero(model, c):
    p = _parities(model)
    return {k: DifferentialForm.zero(q, p[k]) for k, q in (("F", 2), ("G", 2), ("J", 3), ("A", 1))}


def zero_field(model: OrientationModel = STANDARD, c: float = 1.0) -> FieldConfiguration:
    return FieldConfiguration(**_zero(model, c), c=c, name="zero")


def constant_field(model: OrientationModel = STANDARD, c: float = 1.0, coeffs=None, x0=None) -> FieldConfiguration:
    """Uniform field ``F`` with ``G = constitutive(F)`` and potential ``A = i_r F / 2``."""
    p = _parities(model)
    coeffs = np.array([0.3, -0.7, 0.2, 0.5, -0.4, 0.9]) if coeffs is None else np.asarray(coeffs, dtype=float)
    f = DifferentialForm.constant(2, p["F"], coeffs)
    x0 = np.zeros(4) if x0 is None else np.asarray(x0, dtype=float)
    radial = VectorField.affine(np.eye(4), -x0)
    a = 0.5 * interior_product(radial, f)
    return FieldConfiguration(f, constitutive(f), DifferentialForm.zero(3, p["J"]), a, c, "constant")


_WAVEFORMS = {
    # (primitive, f, f', f'')
    "sin": (lambda s: -np.cos(s), np.sin, np.cos, lambda s: -np.sin(s)),
    "gaussian": (
        lambda s: 0.5 * math.sqrt(math.pi) * erf(s),
        lambda s: np.exp(-s * s),
        lambda s: -2 * s * np.exp(-s * s),
        lambda s: (4 * s * s - 2) * np.exp(-s * s),
    ),
}


def plane_wave(
    model: OrientationModel = STANDARD,
    c: float = 1.0,
    k=(1.0, 1.0, 0.0, 0.0),
    a=(0.0, 0.0, 1.0, 0.0),
    x0=None,
    waveform: str = "sin",
) -> FieldConfiguration:
    """``F = f(<k, x - x0>) k ^ a`` for a lightlike covector ``k`` and transverse ``a``.

    Raises
    ------
    ValueError
        If ``k`` is not lightlike or ``a`` is not transverse to it.
    """
    ginv = np.linalg.inv(MINKOWSKI_MATRIX)
    k = np.asarray(k, dtype=float)
    a = np.asarray(a, dtype=float)
    x0 = np.zeros(4) if x0 is None else np.asarray(x0, dtype=float)
    scale = max(1.0, float(k @ k))
    if abs(k @ ginv @ k) > 1e-12 * scale:
        raise ValueError(f"wave covector is not lightlike: g^-1(k, k) = {k @ ginv @ k:.3e}")
    if abs(k @ ginv @ a) > 1e-12 * scale * max(1.0, float(a @ a)):
        raise ValueError(f"amplitude is not transverse: g^-1(k, a) = {k @ ginv @ a:.3e}")
    if waveform not in _WAVEFORMS:
        raise ValueError(f"unknown waveform {waveform!r}; choose from {sorted(_WAVEFORMS)}")
    prim, f0, f1, f2 = _WAVEFORMS[waveform]
    ka = np.einsum("kij,i,j->k", wedge_table(4, 1, 1), k, a)
    p = _parities(model)

    def phase(x):
        return (x - x0) @ k

    field_f = CoefficientField(
        lambda x: f0(phase(x))[:, None] * ka,
        6,
        4,
        lambda x: np.einsum("n,k,l->nkl", f1(phase(x)), ka, k),
        lambda x: np.einsum("n,k,l,m->nklm", f2(phase(x)), ka, k, k),
    )
    field_a = CoefficientField(
        lambda x: prim(phase(x))[:, None] * a,
        4,
        4,
        lambda x: np.einsum("n,k,l->nkl", f0(phase(x)), a, k),
        lambda x: np.einsum("n,k,l,m->nklm", f1(phase(x)), a, k, k),
    )
    f = DifferentialForm(2, p["F"], field_f)
    return FieldConfiguration(
        f, constitutive(f), DifferentialForm.zero(3, p["J"]), DifferentialForm(1, p["A"], field_a), c, "plane_wave"
    )


def coulomb(
    model: OrientationModel = STANDARD,
    c: float = 1.0,
    q: float = 1.0,
    center=(0.0, 0.0, 0.0),
    r_min: float = 1e-3,
) -> FieldConfiguration:
    """Static charge at rest in the reference frame, from ``A = -(q / r) e^0``.

    ``D`` is then the radial field ``q r_hat / r^2`` with total flux ``4 pi q``.
    Evaluation closer than ``r_min`` to the charge raises ``ValueError``.
    """
    p = _parities(model)
    ctr = np.asarray(center, dtype=float)

    def rel(x):
        r = x[:, 1:] - ctr
        rad = np.linalg.norm(r, axis=1)
        if np.any(rad < r_min):
            raise ValueError(f"evaluation within r_min = {r_min} of the point charge")
        return r, rad

    def f_val(x):
        r, rad = rel(x)
        out = np.zeros((len(x), 6))
        out[:, :3] = -q * r / rad[:, None] ** 3
        return out

    def f_jac(x):
        r, rad = rel(x)
        out = np.zeros((len(x), 6, 4))
        out[:, :3, 1:] = -q * (np.eye(3)[None] / rad[:, None, None] ** 3 - 3 * np.einsum("ni,nj->nij", r, r) / rad[:, None, None] ** 5)
        return out

    def a_val(x):
        _, rad = rel(x)
        out = np.zeros((len(x), 4))
        out[:, 0] = -q / rad
        return out

    def a_jac(x):
        r, rad = rel(x)
        out = np.zeros((len(x), 4, 4))
        out[:, 0, 1:] = q * r / rad[:, None] ** 3
        return out

    f = DifferentialForm(2, p["F"], CoefficientField(f_val, 6, 4, f_jac))
    a = DifferentialForm(1, p["A"], CoefficientField(a_val, 4, 4, a_jac))
    lo = np.array([-1.0, *(ctr + 0.4)])
    hi = np.array([1.0, *(ctr + 1.2)])
    return FieldConfiguration(
        f, constitutive(f), DifferentialForm.zero(3, p["J"]), a, c, "coulomb", (PointCharge(q, tuple(ctr)),), (lo, hi)
    )


def polynomial_field(model: OrientationModel = STANDARD, c: float = 1.0, seed: int = 0, max_power: int = 3) -> FieldConfiguration:
    """Generic witness: random polynomial ``A``, ``F = dA``, ``G = constitutive(F)``, ``J = -(c / 4 pi) dG``."""
    from .forms import random_polynomial_form

    p = _parities(model)
    rng = np.random.default_rng(seed)
    a = random_polynomial_form(rng, 1, p["A"], max_power=max_power, n_terms=10)
    f = exterior_differential(a)
    g = constitutive(f)
    j = (-c / FOUR_PI) * exterior_differential(g)
    return FieldConfiguration(f, g, j, a, c, "polynomial")


BUILTIN_FIELDS: dict[str, Callable[..., FieldConfiguration]] = {
    "zero": zero_field,
    "constant": constant_field,
    "plane_wave": plane_wave,
    "coulomb": coulomb,
    "polynomial": polynomial_field,
}


def builtin_fields(name: str, **params) -> FieldConfiguration:
    """Fixture configurations: ``zero``, ``constant``, ``plane_wave``, ``coulomb``, ``polynomial``."""
    key = name.replace("-", "_")
    if key not in BUILTIN_FIELDS:
        raise ValueError(f"unknown field {name!r}; choose from {sorted(BUILTIN_FIELDS)}")
    return BUILTIN_FIELDS[key](**params)
