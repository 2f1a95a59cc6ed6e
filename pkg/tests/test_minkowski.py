import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistedforms.forms import AffineMap, DifferentialForm, pullback, random_polynomial_form
from twistedforms.minkowski import (
    MINKOWSKI_MATRIX,
    InertialFrame,
    MinkowskiMetric,
    boost,
    constitutive,
    constitutive_matrix,
    random_lorentz,
    spatial_constitutive,
    spatial_constitutive_B,
    spatial_metric,
    spatial_split,
    volume_form,
)
from twistedforms.multilinear import MultiCovector, basis_covector, basis_indices, pullback as pullback_covector
from twistedforms.orientation import EVEN, ODD, OE, OO, RELATIVISTIC, STANDARD, Orientation

seeds = st.integers(0, 2**32 - 1)
components = st.sampled_from(("E", "T", "S", "TS"))


def levi_civita(n=4):
    eps = np.zeros((n,) * n)
    for perm in itertools.permutations(range(n)):
        eps[perm] = np.linalg.det(np.eye(n)[list(perm)])
    return eps


def constitutive_oracle(f_coeffs, g):
    """G_kl = 1/2 F^ij eps_ijkl sqrt|g| with all indices raised by g^-1."""
    f = np.zeros((4, 4))
    for c, (i, j) in zip(f_coeffs, basis_indices(4, 2)):
        f[i, j], f[j, i] = c, -c
    ginv = np.linalg.inv(g)
    raised = ginv @ f @ ginv.T
    full = 0.5 * np.sqrt(abs(np.linalg.det(g))) * np.einsum("ij,ijkl->kl", raised, levi_civita())
    return np.array([full[k, l] for k, l in basis_indices(4, 2)])


class TestMetric:
    def test_signature_check(self):
        with pytest.raises(ValueError, match="signature"):
            MinkowskiMetric(np.eye(4))
        with pytest.raises(ValueError, match="symmetric"):
            MinkowskiMetric(np.triu(np.ones((4, 4))))

    def test_defaults(self):
        g = MinkowskiMetric()
        assert g.sqrt_det == 1.0
        assert g(np.eye(4)[1], np.eye(4)[1]) == -1.0


class TestVolumeForm:
    def test_orthonormal_basis(self):
        vol = volume_form()
        assert vol(*np.eye(4)) == 1.0
        assert vol(*np.eye(4)[[1, 0, 2, 3]]) == -1.0
        assert vol(*(2 * np.eye(4))) == pytest.approx(16.0)

    def test_parities(self):
        assert volume_form().parity == ODD
        assert volume_form(model=RELATIVISTIC).parity == OO

    @given(seeds, components)
    def test_lorentz_invariant(self, seed, comp):
        rng = np.random.default_rng(seed)
        rho = random_lorentz(rng, comp)
        for model in (STANDARD, RELATIVISTIC):
            vol = volume_form(model=model)
            assert pullback_covector(rho, vol).allclose(vol, atol=1e-10)

    def test_orientation_dependence(self):
        vol = volume_form(model=RELATIVISTIC)
        o = Orientation.of(RELATIVISTIC, "T")
        assert vol(*np.eye(4), orientation=o) == -1.0


class TestFrames:
    def test_split_examples(self):
        frame = InertialFrame.from_velocity(0.6, x0=[0.3, 0.1, -0.2, 0.5], c=2.0)
        x0, u, f1 = frame.x0, frame.u, frame.triad[0]
        for x, (t, y) in ((x0, (0.0, x0)), (x0 + 2.0 * u, (1.0, x0)), (x0 + f1, (0.0, x0 + f1))):
            tt, yy = spatial_split(frame, x)
            assert tt == pytest.approx(t)
            assert np.allclose(yy, y)

    def test_coordinates_round_trip(self, rng):
        frame = InertialFrame.from_velocity(rng.uniform(-0.5, 0.5, size=3), x0=rng.normal(size=4))
        z = rng.normal(size=(5, 4))
        assert np.allclose(frame.coordinates(frame.chart()(z)), z)

    def test_not_orthonormal(self):
        with pytest.raises(ValueError, match="orthonormal"):
            InertialFrame(np.array([1.0, 0, 0, 0]), triad=np.eye(4)[[1, 1, 3]])

    def test_spatial_metric(self, rng):
        frame = InertialFrame.from_velocity([0.3, -0.4, 0.2])
        h = spatial_metric(frame)
        f1, f2 = frame.triad[:2]
        assert h(f1, f1) == pytest.approx(1.0)
        assert h(f1, f2) == pytest.approx(0.0, abs=1e-14)
        w = rng.normal(size=3) @ frame.triad
        assert h(w, w) == pytest.approx(-(w @ MINKOWSKI_MATRIX @ w))
        assert h(w, w) > 0
        assert np.allclose(h.matrix, np.eye(3))
        with pytest.raises(ValueError):
            h(frame.u, f1)

    def test_time_reflection_fixes_space(self, rng):
        frame = InertialFrame.from_velocity(0.5, x0=rng.normal(size=4))
        phi = frame.time_reflection()
        t, y = 0.7, rng.normal(size=3)
        x = frame.event(t, y)[0]
        assert np.allclose(frame.coordinates(phi(x)), np.concatenate([[-t], y]))


class TestConstitutive:
    def test_basis_example(self):
        g = constitutive(basis_covector((0, 1)))
        assert g.parity == ODD
        assert np.allclose(g.coeffs, -basis_covector((2, 3)).coeffs)

    def test_zero(self):
        assert np.all(constitutive(MultiCovector.zero(2, EVEN)).coeffs == 0)

    @given(seeds)
    def test_oracle_with_general_metric(self, seed):
        rng = np.random.default_rng(seed)
        lam = random_lorentz(rng, "E") @ np.diag(rng.uniform(0.5, 2.0, size=4))
        g = lam.T @ MINKOWSKI_MATRIX @ lam
        f = rng.normal(size=6)
        assert np.allclose(constitutive_matrix(g) @ f, constitutive_oracle(f, g), atol=1e-10)

    def test_double_application(self):
        # applying the constitutive matrix twice gives -1 in Lorentzian signature
        m = constitutive_matrix()
        assert np.allclose(m @ m, -np.eye(6))

    def test_wrong_parity(self):
        with pytest.raises(ValueError, match="parity"):
            constitutive(basis_covector((0, 1), ODD))
        with pytest.raises(ValueError):
            constitutive(basis_covector((0,)))

    @given(seeds, components, st.sampled_from((STANDARD, RELATIVISTIC)))
    def test_poincare_equivariance(self, seed, comp, model):
        rng = np.random.default_rng(seed)
        phi = AffineMap(random_lorentz(rng, comp), rng.normal(size=4))
        f = random_polynomial_form(rng, 2, EVEN if model is STANDARD else OE)
        pts = rng.uniform(-1, 1, size=(6, 4))
        lhs = constitutive(pullback(phi, f)).coeffs(pts)
        rhs = pullback(phi, constitutive(f)).coeffs(pts)
        assert np.abs(lhs - rhs).max() <= 1e-8

    def test_fails_for_non_lorentz_maps(self, rng):
        phi = AffineMap(np.diag([1.0, 2.0, 1.0, 1.0]))
        f = random_polynomial_form(rng, 2, EVEN)
        pts = rng.uniform(-1, 1, size=(6, 4))
        lhs = constitutive(pullback(phi, f)).coeffs(pts)
        rhs = pullback(phi, constitutive(f)).coeffs(pts)
        assert np.abs(lhs - rhs).max() > 1e-3


class TestSpatialConstitutive:
    def test_electric_sign(self):
        # D = -(h^-1 E) sqrt|h|: the sign forced by decomposing the space-time relation
        e = DifferentialForm.constant(1, EVEN, [1.0, 0, 0], dim=3)
        assert np.allclose(spatial_constitutive(e).coeffs(np.zeros((1, 3))), [[-1.0, 0, 0]])

    def test_magnetic(self):
        b = DifferentialForm.constant(2, EVEN, [1.0, 0, 0], dim=3)
        assert np.allclose(spatial_constitutive_B(b).coeffs(np.zeros((1, 3))), [[1.0, 0, 0]])

    def test_zero(self):
        z = DifferentialForm.zero(1, EVEN, dim=3)
        assert np.all(spatial_constitutive(z).coeffs(np.ones((2, 3))) == 0)

    def test_scaled_metric(self):
        h = 4.0 * np.eye(3)
        e = DifferentialForm.constant(1, EVEN, [1.0, 0, 0], dim=3)
        # h^-1 contributes 1/4, sqrt det h contributes 8
        assert np.allclose(spatial_constitutive(e, h).coeffs(np.zeros((1, 3))), [[-2.0, 0, 0]])

    def test_rejects_wrong_input(self):
        with pytest.raises(ValueError):
            spatial_constitutive(DifferentialForm.zero(1, EVEN))
        with pytest.raises(ValueError):
            spatial_constitutive(DifferentialForm.zero(1, ODD, dim=3))
        with pytest.raises(ValueError):
            spatial_constitutive_B(DifferentialForm.zero(1, EVEN, dim=3))


def test_boost_is_lorentz():
    lam = boost([0.3, 0.4, 0.5])
    assert np.allclose(lam.T @ MINKOWSKI_MATRIX @ lam, MINKOWSKI_MATRIX)
    with pytest.raises(ValueError):
        boost([1.0, 0, 0])
