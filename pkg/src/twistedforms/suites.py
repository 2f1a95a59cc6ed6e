"""Verification suites and the report record emitted by the command-line tool."""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import time
from dataclasses import dataclass, field
from typing import Any, Optional

import jsonschema
import numpy as np

from . import chains, electromag, forms, minkowski, multilinear
from .chains import Chain, affine_cell, ball_cell, random_polynomial_cell
from .electromag import OBJECTS, builtin_fields, decompose, expected_parities
from .forms import DifferentialForm, VectorField, random_polynomial_form
from .multilinear import MultiCovector, MultiVector, basis_indices
from .orientation import (
    EVEN,
    ODD,
    RELATIVISTIC,
    STANDARD,
    GroupClass,
    Orientation,
    OrientationModel,
    Parity,
    classify_lorentz,
    compose,
    index,
)

__all__ = [
    "Check",
    "Report",
    "REPORT_SCHEMA",
    "DEFAULT_SEED",
    "algebra_suite",
    "calculus_suite",
    "maxwell_suite",
    "parity_suite",
    "index_oracle",
    "PRODUCT_TABLE",
    "polynomial_corpus",
]

DEFAULT_SEED = 20240601

REPORT_SCHEMA = {
    "type": "object",
    "required": ["suite", "config", "checks", "pass"],
    "additionalProperties": False,
    "properties": {
        "suite": {"type": "string"},
        "config": {"type": "object"},
        "pass": {"type": "boolean"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "value", "tolerance", "pass"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string"},
                    "value": {"type": ["number", "string"]},
                    "tolerance": {"type": ["number", "null"]},
                    "pass": {"type": "boolean"},
                    "expected": {"type": ["number", "string", "null"]},
                    "digest": {"type": ["string", "null"]},
                },
            },
        },
    },
}


@dataclass(frozen=True)
class Check:
    """One verification outcome: a residual against a tolerance, or a sign against an expectation."""

    id: str
    value: Any
    tolerance: Optional[float]
    passed: bool
    expected: Any = None
    digest: Optional[str] = None

    @classmethod
    def residual(cls, id: str, value: float, tolerance: float, digest: str | None = None) -> Check:
        value = float(value)
        return cls(id, value, tolerance, bool(np.isfinite(value) and value <= tolerance), None, digest)

    @classmethod
    def equal(cls, id: str, value, expected, digest: str | None = None) -> Check:
        return cls(id, value, None, value == expected, expected, digest)

    def to_dict(self) -> dict:
        out = {"id": self.id, "value": self.value, "tolerance": self.tolerance, "pass": self.passed}
        if self.expected is not None:
            out["expected"] = self.expected
        if self.digest is not None:
            out["digest"] = self.digest
        return out

    @classmethod
    def from_dict(cls, d: dict) -> Check:
        return cls(d["id"], d["value"], d["tolerance"], d["pass"], d.get("expected"), d.get("digest"))


@dataclass(frozen=True)
class Report:
    """A suite outcome; passes iff every check passes."""

    suite: str
    config: dict
    checks: tuple
    runtime: float = field(default=0.0, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "checks", tuple(sorted(self.checks, key=lambda c: c.id)))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
            "pass": self.passed,
        }

    def to_json(self) -> str:
        out = self.to_dict()
        jsonschema.validate(out, REPORT_SCHEMA)
        return json.dumps(out, indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> Report:
        jsonschema.validate(d, REPORT_SCHEMA)
        return cls(d["suite"], d["config"], tuple(Check.from_dict(c) for c in d["checks"]))

    def render(self) -> str:
        lines = [f"suite: {self.suite}  config: {json.dumps(self.config, sort_keys=True)}"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            if c.tolerance is None:
                detail = f"{c.value} (expected {c.expected})"
            else:
                detail = f"{c.value:.3e} <= {c.tolerance:.1e}"
            lines.append(f"  [{status}] {c.id}: {detail}")
        lines.append(f"{'PASS' if self.passed else 'FAIL'} ({len(self.checks)} checks, {self.runtime:.2f}s)")
        return "\n".join(lines)


def _digest(*parts) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(np.asarray(p, dtype=float).tobytes() if not isinstance(p, str) else p.encode())
    return h.hexdigest()[:12]


# --------------------------------------------------------------------------
# oracles shared by the suites


def index_oracle(parity: Parity, cls: GroupClass) -> int:
    """Index read off the defining sign rules.

    An odd form flips sign under orientation reversal; a temporally odd form
    flips under every class reversing time orientation (T, TS) and a spatially
    odd one under every class reversing spatial orientation (S, TS).
    """
    if parity.model is STANDARD:
        return -1 if parity.bits[0] and cls.label == "P" else 1
    sign = 1
    if parity.bits[0] and cls.label in ("T", "TS"):
        sign = -sign
    if parity.bits[1] and cls.label in ("S", "TS"):
        sign = -sign
    return sign


# parity of a ^ b for relativistic parity pairs, rows a, columns b
_PAIRS = {"ee": (0, 0), "oe": (1, 0), "eo": (0, 1), "oo": (1, 1)}
PRODUCT_TABLE = {
    ("ee", "ee"): "ee", ("ee", "oe"): "oe", ("ee", "eo"): "eo", ("ee", "oo"): "oo",
    ("oe", "ee"): "oe", ("oe", "oe"): "ee", ("oe", "eo"): "oo", ("oe", "oo"): "eo",
    ("eo", "ee"): "eo", ("eo", "oe"): "oo", ("eo", "eo"): "ee", ("eo", "oo"): "oe",
    ("oo", "ee"): "oo", ("oo", "oe"): "eo", ("oo", "eo"): "oe", ("oo", "oo"): "ee",
}  # fmt: skip


def polynomial_corpus(rng: np.random.Generator, n: int = 30, dim: int = 4) -> list[DifferentialForm]:
    """Random polynomial forms cycling through degrees and parities."""
    parities = [EVEN, ODD]
    return [
        random_polynomial_form(rng, k % dim, parities[(k // dim) % 2], dim=dim)
        for k in range(n)
    ]


def _random_multi(rng, cls, q, parity, dim=4):
    return cls(q, parity, rng.normal(size=math.comb(dim, q)), dim)


# --------------------------------------------------------------------------
# suites


def algebra_suite(seed: int = DEFAULT_SEED) -> Report:
    """Index tables, exterior-algebra laws, pairing invariance and Weyl duality."""
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    checks = []

    mismatches = sum(
        index(p, g) != index_oracle(p, g)
        for model in (STANDARD, RELATIVISTIC)
        for p in model.parities()
        for g in model.classes()
    )
    checks.append(Check.residual("index.tables", mismatches, 0))

    products = sum(
        Parity(RELATIVISTIC, _PAIRS[a]) * Parity(RELATIVISTIC, _PAIRS[b]) != Parity(RELATIVISTIC, _PAIRS[r])
        for (a, b), r in PRODUCT_TABLE.items()
    )
    checks.append(Check.residual("wedge.parity_table", products, 0))

    group = sum(
        compose(compose(a, b), c) != compose(a, compose(b, c)) or compose(a, a).label != "E"
        for model in (STANDARD, RELATIVISTIC)
        for a, b, c in itertools.product(model.classes(), repeat=3)
    )
    checks.append(Check.residual("group.laws", group, 0))

    basis = [
        multilinear.basis_covector(idx) for q in range(5) for idx in basis_indices(4, q)
    ]
    comm = max(
        np.abs(multilinear.wedge(b, a).coeffs - (-1) ** (a.degree * b.degree) * multilinear.wedge(a, b).coeffs).max(initial=0)
        for a in basis
        for b in basis
    )
    checks.append(Check.residual("wedge.graded_commutativity", comm, 0.0))
    assoc = 0.0
    for a, b, c in itertools.product(basis, repeat=3):
        if a.degree + b.degree + c.degree > 4:
            continue
        lhs = multilinear.wedge(multilinear.wedge(a, b), c).coeffs
        rhs = multilinear.wedge(a, multilinear.wedge(b, c)).coeffs
        assoc = max(assoc, float(np.abs(lhs - rhs).max(initial=0)))
    checks.append(Check.residual("wedge.associativity", assoc, 0.0))

    worst = 0.0
    for k in range(100):
        rho = minkowski.random_lorentz(rng, ("E", "T", "S", "TS")[k % 4])
        q = int(rng.integers(0, 5))
        parity = RELATIVISTIC.parities()[k % 4]
        a = _random_multi(rng, MultiCovector, q, parity)
        w = _random_multi(rng, MultiVector, q, parity)
        lhs = multilinear.pair(multilinear.pullback(np.linalg.inv(rho), a), multilinear.pushforward(rho, w))
        ref = multilinear.pair(a, w)
        worst = max(worst, abs(lhs - ref) / max(1.0, abs(ref)))
    checks.append(Check.residual("pairing.lorentz_invariance", worst, 1e-10))

    worst = 0.0
    for k in range(100):
        rho = rng.normal(size=(4, 4))
        q = int(rng.integers(0, 5))
        parity = (EVEN, ODD)[k % 2]
        a = _random_multi(rng, MultiCovector, q, parity)
        w = _random_multi(rng, MultiVector, q, parity)
        lhs = multilinear.pair(multilinear.pullback(np.linalg.inv(rho), a), multilinear.pushforward(rho, w))
        ref = multilinear.pair(a, w)
        worst = max(worst, abs(lhs - ref) / max(1.0, abs(ref)))
    checks.append(Check.residual("pairing.gl_invariance", worst, 1e-10))

    worst = 0.0
    for _ in range(20):
        rho = rng.normal(size=(4, 4))
        det = np.linalg.det(rho)
        even = multilinear.pushforward(rho, MultiVector(4, EVEN, [1.0])).coeffs[0]
        odd = multilinear.pushforward(rho, MultiVector(4, ODD, [1.0])).coeffs[0]
        worst = max(worst, abs(even - det), abs(odd - abs(det)))
    checks.append(Check.residual("pushforward.top_degree", worst, 1e-10))

    top = MultiCovector(4, ODD, [rng.normal()])
    worst = 0.0
    for q in range(5):
        for w in (multilinear.basis_vector(i, EVEN) for i in basis_indices(4, q)):
            for v in (multilinear.basis_vector(j, ODD) for j in basis_indices(4, 4 - q)):
                lhs = multilinear.pair(top, multilinear.wedge(w, v))
                rhs = multilinear.pair(multilinear.contract(w, top), v)
                worst = max(worst, abs(lhs - rhs))
    checks.append(Check.residual("contract.defining_identity", worst, 1e-12))

    worst_rt = worst_eq = 0.0
    for k in range(50):
        q = k % 5
        dens = multilinear.Density(q, RELATIVISTIC.parities()[k % 4], rng.normal(size=math.comb(4, q)))
        back = multilinear.weyl_inverse(multilinear.weyl(dens))
        worst_rt = max(worst_rt, float(np.abs(back.coeffs - dens.coeffs).max()))
        rho = minkowski.random_lorentz(rng, ("E", "T", "S", "TS")[k % 4])
        lhs = multilinear.weyl(multilinear.push_density(rho, dens))
        rhs = multilinear.pullback(np.linalg.inv(rho), multilinear.weyl(dens))
        worst_eq = max(worst_eq, float(np.abs(lhs.coeffs - rhs.coeffs).max()))
    checks.append(Check.residual("weyl.round_trip", worst_rt, 1e-10))
    checks.append(Check.residual("weyl.lorentz_equivariance", worst_eq, 1e-10))

    hom = 0
    for _ in range(50):
        a, b = (minkowski.random_lorentz(rng, str(rng.choice(["E", "T", "S", "TS"]))) for _ in range(2))
        hom += classify_lorentz(a @ b) != compose(classify_lorentz(a), classify_lorentz(b))
    checks.append(Check.residual("lorentz.classification_homomorphism", hom, 0))

    return Report("algebra", {"seed": seed}, tuple(checks), time.perf_counter() - start)


def calculus_suite(order: int = chains.DEFAULT_ORDER, fd_step: float | None = None, seed: int = DEFAULT_SEED) -> Report:
    """``dd = 0``, Stokes, the current boundary identity and ``Div`` of Weyl duals."""
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    corpus = polynomial_corpus(rng)
    pts = rng.uniform(-1, 1, size=(16, 4))
    checks = []

    dd_exact = max(_max(forms.exterior_differential(forms.exterior_differential(a, "exact"), "exact").coeffs(pts)) for a in corpus)
    dd_fd = max(
        _max(forms.exterior_differential(forms.exterior_differential(a, "fd", fd_step), "fd", fd_step).coeffs(pts))
        for a in corpus
    )
    checks.append(Check.residual("dd.exact", dd_exact, 1e-12))
    checks.append(Check.residual("dd.finite_difference", dd_fd, 1e-6))

    stokes = conv = 0.0
    for k in range(20):
        q = 1 + k % 4
        cell = random_polynomial_cell(rng, q)
        a = random_polynomial_form(rng, q - 1, (EVEN, ODD)[k % 2])
        c = Chain.of(cell, a.parity)
        stokes = max(stokes, chains.stokes_residual(a, c, order))
        da = forms.exterior_differential(a)
        conv = max(conv, abs(chains.integrate(da, c, order) - chains.integrate(da, c, order + 4)))
    checks.append(Check.residual("stokes.residual", stokes, 1e-6))
    checks.append(Check.residual("stokes.self_convergence", conv, 1e-6))

    current = 0.0
    for k in range(10):
        q = 1 + k % 3
        cell = random_polynomial_cell(rng, q)
        a = random_polynomial_form(rng, q, EVEN)
        x = VectorField.affine(0.5 * rng.normal(size=(4, 4)), rng.normal(size=4))
        current = max(current, chains.current_boundary_residual(x, Chain.of(cell), a, order))
    checks.append(Check.residual("current.boundary_identity", current, 1e-6))

    div = 0.0
    for a in corpus:
        if a.degree == 0:
            continue
        dens = forms.weyl_dual(a)
        lhs = forms.div(dens, "fd", fd_step).coeffs(pts)
        rhs = forms.weyl_dual(forms.exterior_differential(a)).coeffs(pts)
        div = max(div, _max(lhs - rhs))
    checks.append(Check.residual("div.weyl_dual", div, 1e-6))

    return Report(
        "calculus", {"order": order, "fd_step": fd_step, "seed": seed}, tuple(checks), time.perf_counter() - start
    )


def _max(values) -> float:
    return float(np.abs(values).max(initial=0.0))


def _gauss_chains(ff, cfg):
    """A ball and a box around each point charge, at frame time 0."""
    out = []
    for charge in cfg.charges:
        pos = ff.charge_position(charge, 0.0)
        out.append(("sphere", Chain.of(ball_cell(pos, 1.0), ODD)))
        out.append(("box", Chain.of(affine_cell(pos - [0.9, 0.7, 1.1], np.diag([1.9, 1.6, 2.0]), Orientation.reference(STANDARD)), ODD)))
    return out


def maxwell_suite(field: str = "plane-wave", beta: float = 0.0, order: int = 12, tol: float = 1e-6) -> Report:
    """Differential, constitutive, potential and integral Maxwell residuals for a fixture."""
    start = time.perf_counter()
    cfg = builtin_fields(field)
    frame = minkowski.InertialFrame.from_velocity(beta, c=cfg.c)
    ff = decompose(cfg, frame)
    checks = []

    r1, r2 = electromag.maxwell_residual_4d(cfg)
    checks.append(Check.residual("4d.dF", r1, tol))
    checks.append(Check.residual("4d.dG_plus_J", r2, tol))
    for key, val in electromag.maxwell_residual_3d(ff).items():
        checks.append(Check.residual(f"3d.{key}", val, tol))

    lo, hi = cfg.box
    xi_lo = lo[1:]
    span = 0.5 * (hi[1:] - lo[1:])
    surface = Chain.of(affine_cell(xi_lo, [[span[0], 0, 0.2 * span[2]], [0, span[1], 0]], Orientation.reference(STANDARD)))
    volume = Chain.of(affine_cell(xi_lo, np.diag(span), Orientation.reference(STANDARD)))
    laws = electromag.integral_laws_stationary(ff, surface, volume, t=0.25, n=order)
    for key, val in laws.items():
        checks.append(Check.residual(f"integral.{key}", val, tol))

    for name, chain in _gauss_chains(ff, cfg):
        flux = electromag.gauss_flux(ff, chain, 0.0, order)
        q = sum(ch.q for ch in cfg.charges)
        checks.append(Check.residual(f"gauss_flux.{name}", abs(flux / (4 * math.pi * q) - 1.0), 1e-3))

    return Report("maxwell", {"field": field, "frame_boost": beta, "order": order}, tuple(checks), time.perf_counter() - start)


def parity_suite(model: OrientationModel = STANDARD, field: str = "plane-wave", betas=(0.0,)) -> Report:
    """Time-reflection parity table against the expected column for ``model``."""
    start = time.perf_counter()
    expected = expected_parities(model)
    checks = []
    for beta in betas:
        frame = minkowski.InertialFrame.from_velocity(beta)
        table = electromag.parity_table(field.replace("-", "_"), model, frame)
        for name in OBJECTS:
            value, fixture = table[name]
            suffix = "" if len(betas) == 1 else f"@beta={beta}"
            checks.append(Check.equal(f"parity.{name}{suffix}", value, expected[name], digest=_digest(fixture, [beta])))
    return Report(
        "parity", {"model": model.value, "field": field, "frame_boosts": [float(b) for b in betas]}, tuple(checks), time.perf_counter() - start
    )
