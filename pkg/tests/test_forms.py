
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from twistedforms.forms import (
    AffineMap,
    CoefficientField,
    DensityField,
    Polynomial,
    DifferentialForm,
    Diffeomorphism,
    VectorField,
    div,
    exterior_differential,
    homotopy_potential,
    interior_product,
    lie_derivative,
    pullback,
    random_polynomial_form,
    wedge,
    weyl_dual,
    weyl_form,
)
from twistedforms.minkowski import random_lorentz
from twistedforms.multilinear import basis_covector, basis_indices
from twistedforms.orientation import EE, EVEN, ODD, OE, OO, Orientation

seeds = st.integers(0, 2**32 - 1)


def const(idx, parity=EVEN):
    return DifferentialForm.from_multicovector(basis_covector(idx, parity))


def max_abs(form, pts):
    return float(np.abs(form.coeffs(pts)).max(initial=0.0))


def d_oracle(a, x, vectors, h=1e-5):
    """(dA)(v_0..v_q) = sum_i (-1)^i D_{v_i} A(v_0..^v_i..v_q) for constant vectors."""
    o = Orientation.reference(a.model)
    total = 0.0
    for i, v in enumerate(vectors):
        rest = [w for j, w in enumerate(vectors) if j != i]
        plus = a.at(x + h * v)(*rest, orientation=o)
        minus = a.at(x - h * v)(*rest, orientation=o)
        total += (-1) ** i * (plus - minus) / (2 * h)
    return total


class TestExteriorDifferential:
    def test_constant_is_closed(self, rng):
        a = DifferentialForm.constant(2, ODD, rng.normal(size=6))
        assert max_abs(exterior_differential(a), rng.normal(size=(5, 4))) == 0.0

    def test_coordinate_example(self):
        # d(x^0 e^1 ^ e^2) = e^0 ^ e^1 ^ e^2
        a = DifferentialForm.polynomial(2, EVEN, [[1, 0, 0, 0]], np.eye(6)[:, [basis_indices(4, 2).index((1, 2))]])
        da = exterior_differential(a)
        assert np.allclose(da.coeffs(np.zeros((1, 4)))[0], basis_covector((0, 1, 2)).coeffs)

    @given(seeds, st.integers(0, 3), st.sampled_from((EVEN, ODD, OE)))
    def test_matches_coordinate_free_oracle(self, seed, q, parity):
        rng = np.random.default_rng(seed)
        a = random_polynomial_form(rng, q, parity)
        x = rng.uniform(-1, 1, size=4)
        vecs = rng.normal(size=(q + 1, 4))
        val = exterior_differential(a).at(x[None])(*vecs)
        assert val == pytest.approx(d_oracle(a, x, vecs), abs=1e-6)

    @given(seeds, st.integers(0, 2), st.sampled_from((EVEN, ODD, EE, OO)))
    def test_dd_exact_vanishes(self, seed, q, parity):
        rng = np.random.default_rng(seed)
        a = random_polynomial_form(rng, q, parity, max_power=3)
        dd = exterior_differential(exterior_differential(a, "exact"), "exact")
        assert max_abs(dd, rng.uniform(-1, 1, size=(16, 4))) <= 1e-12

    @given(seeds, st.integers(0, 2))
    def test_dd_finite_difference_vanishes(self, seed, q):
        rng = np.random.default_rng(seed)
        a = random_polynomial_form(rng, q, ODD, max_power=3)
        dd = exterior_differential(exterior_differential(a, "fd"), "fd")
        assert max_abs(dd, rng.uniform(-1, 1, size=(8, 4))) <= 1e-6

    @given(seeds, st.integers(0, 2), st.integers(0, 2))
    def test_leibniz_rule(self, seed, q, r):
        rng = np.random.default_rng(seed)
        a = random_polynomial_form(rng, q, OE)
        b = random_polynomial_form(rng, r, OO)
        lhs = exterior_differential(wedge(a, b))
        rhs = wedge(exterior_differential(a), b) + (-1) ** q * wedge(a, exterior_differential(b))
        pts = rng.uniform(-1, 1, size=(8, 4))
        assert np.allclose(lhs.coeffs(pts), rhs.coeffs(pts), atol=1e-12)

    def test_exact_mode_needs_derivatives(self):
        a = DifferentialForm.from_function(1, EVEN, lambda x: np.sin(x))
        with pytest.raises(ValueError):
            exterior_differential(a, "exact")

    def test_top_degree(self):
        assert exterior_differential(const((0, 1, 2, 3), ODD)).degree == 5


class TestInteriorProduct:
    def test_basis_contraction(self):
        out = interior_product(VectorField.constant([1.0, 0, 0, 0]), const((0, 1)))
        assert np.allclose(out.coeffs(np.zeros((1, 4)))[0], basis_covector((1,)).coeffs)

    def test_one_form_is_evaluation(self, rng):
        a = random_polynomial_form(rng, 1, ODD)
        x = VectorField.affine(rng.normal(size=(4, 4)), rng.normal(size=4))
        pts = rng.uniform(-1, 1, size=(6, 4))
        expected = np.einsum("ni,ni->n", a.coeffs(pts), x(pts))
        assert np.allclose(interior_product(x, a).coeffs(pts)[:, 0], expected)

    @given(seeds, st.integers(2, 4))
    def test_twice_vanishes(self, seed, q):
        rng = np.random.default_rng(seed)
        a = random_polynomial_form(rng, q, EVEN)
        x = VectorField.affine(rng.normal(size=(4, 4)))
        pts = rng.uniform(-1, 1, size=(6, 4))
        assert max_abs(interior_product(x, interior_product(x, a)), pts) <= 1e-12

    def test_zero_form_rejected(self):
        with pytest.raises(ValueError):
            interior_product(VectorField.constant(np.ones(4)), DifferentialForm.constant(0, EVEN, [1.0]))

    def test_first_argument(self, rng):
        a = random_polynomial_form(rng, 3, EVEN)
        v = rng.normal(size=4)
        ws = rng.normal(size=(2, 4))
        x = np.zeros((1, 4))
        lhs = interior_product(VectorField.constant(v), a).at(x)(*ws)
        assert lhs == pytest.approx(a.at(x)(v, *ws))


class TestLieDerivative:
    def test_constant_data(self):
        out = lie_derivative(VectorField.constant([1.0, 2, 3, 4]), const((1, 2), ODD))
        assert max_abs(out, np.zeros((2, 4))) == 0.0

    def test_function_is_directional_derivative(self, rng):
        f = random_polynomial_form(rng, 0, EVEN)
        v = rng.normal(size=4)
        x = rng.uniform(-1, 1, size=4)
        h = 1e-5
        fd = (f.coeffs((x + h * v)[None]) - f.coeffs((x - h * v)[None]))[0, 0] / (2 * h)
        assert lie_derivative(VectorField.constant(v), f).coeffs(x[None])[0, 0] == pytest.approx(fd, abs=1e-7)

    @pytest.mark.parametrize("q", [1, 2, 3])
    def test_matches_flow_derivative(self, rng, q):
        # linear field X = M x has the affine flow exp(tM); L_X A = d/dt phi_t^* A at t = 0
        m = 0.5 * rng.normal(size=(4, 4))
        a = random_polynomial_form(rng, q, EVEN)
        pts = rng.uniform(-1, 1, size=(5, 4))
        h = 1e-4
        plus = pullback(AffineMap(expm(h * m)), a).coeffs(pts)
        minus = pullback(AffineMap(expm(-h * m)), a).coeffs(pts)
        lie = lie_derivative(VectorField.affine(m), a).coeffs(pts)
        assert np.allclose(lie, (plus - minus) / (2 * h), atol=1e-6)


class TestPullback:
    def test_identity(self, rng):
        a = random_polynomial_form(rng, 2, ODD)
        pts = rng.normal(size=(4, 4))
        assert np.allclose(pullback(AffineMap.identity(), a).coeffs(pts), a.coeffs(pts))

    def test_time_reflection_even(self):
        a = const((1, 2, 3), EVEN)
        out = pullback(AffineMap(np.diag([-1.0, 1, 1, 1])), a)
        assert np.allclose(out.coeffs(np.zeros((1, 4))), a.coeffs(np.zeros((1, 4))))

    def test_time_reflection_odd(self):
        a = const((1, 2, 3), ODD)
        out = pullback(AffineMap(np.diag([-1.0, 1, 1, 1])), a)
        assert np.allclose(out.coeffs(np.zeros((1, 4))), -a.coeffs(np.zeros((1, 4))))

    def test_argument_is_reflected(self, rng):
        a = random_polynomial_form(rng, 0, EVEN)
        phi = AffineMap(np.diag([-1.0, 1, 1, 1]), [0.5, 0, 0, 0])
        pts = rng.normal(size=(3, 4))
        assert np.allclose(pullback(phi, a).coeffs(pts), a.coeffs(phi(pts)))

    @given(seeds, st.integers(0, 3), st.sampled_from(("E", "T", "S", "TS")))
    def test_commutes_with_d(self, seed, q, comp):
        rng = np.random.default_rng(seed)
        phi = AffineMap(random_lorentz(rng, comp), rng.normal(size=4))
        a = random_polynomial_form(rng, q, OE)
        pts = rng.uniform(-1, 1, size=(6, 4))
        lhs = exterior_differential(pullback(phi, a)).coeffs(pts)
        rhs = pullback(phi, exterior_differential(a)).coeffs(pts)
        assert np.allclose(lhs, rhs, atol=1e-10)

    def test_composition(self, rng):
        a = random_polynomial_form(rng, 2, ODD)
        f = AffineMap(rng.normal(size=(4, 4)), rng.normal(size=4))
        g = AffineMap(rng.normal(size=(4, 4)), rng.normal(size=4))
        pts = rng.normal(size=(3, 4))
        lhs = pullback(f @ g, a).coeffs(pts)
        rhs = pullback(g, pullback(f, a)).coeffs(pts)
        assert np.allclose(lhs, rhs, atol=1e-10)

    def test_general_diffeomorphism(self, rng):
        a = random_polynomial_form(rng, 2, ODD)
        f = AffineMap(rng.normal(size=(4, 4)) + 3 * np.eye(4), rng.normal(size=4))
        phi = Diffeomorphism(f, f.derivative)
        pts = rng.normal(size=(3, 4))
        assert np.allclose(pullback(phi, a).coeffs(pts), pullback(f, a).coeffs(pts))


class TestHomotopy:
    def test_constant_two_form(self):
        a = const((1, 2))
        b = homotopy_potential(a)
        pts = np.random.default_rng(0).uniform(-1, 1, size=(16, 4))
        assert np.abs(exterior_differential(b).coeffs(pts) - a.coeffs(pts)).max() <= 1e-8

    @given(seeds, st.integers(0, 2), st.sampled_from((EVEN, OE)))
    def test_exact_forms(self, seed, q, parity):
        rng = np.random.default_rng(seed)
        a = exterior_differential(random_polynomial_form(rng, q, parity))
        b = homotopy_potential(a, x0=rng.uniform(-0.5, 0.5, size=4))
        pts = rng.uniform(-1, 1, size=(8, 4))
        assert np.abs(exterior_differential(b).coeffs(pts) - a.coeffs(pts)).max() <= 1e-6

    def test_zero(self):
        b = homotopy_potential(DifferentialForm.zero(2, ODD))
        assert max_abs(b, np.ones((2, 4))) == 0.0

    def test_not_closed(self):
        a = DifferentialForm.polynomial(1, EVEN, [[0, 1, 0, 0]], [[0], [0], [1], [0]])
        with pytest.raises(ValueError, match="not closed"):
            homotopy_potential(a)


class TestDensities:
    @given(seeds, st.integers(0, 4))
    def test_weyl_round_trip(self, seed, q):
        rng = np.random.default_rng(seed)
        a = random_polynomial_form(rng, q, OE)
        pts = rng.normal(size=(3, 4))
        back = weyl_form(weyl_dual(a))
        assert back.degree == q and back.parity == OE
        assert np.allclose(back.coeffs(pts), a.coeffs(pts))

    @given(seeds, st.integers(1, 4), st.sampled_from((EVEN, EE)))
    def test_div_is_conjugated_d(self, seed, q, parity):
        rng = np.random.default_rng(seed)
        a = random_polynomial_form(rng, 4 - q, parity)
        dens = weyl_dual(a)
        pts = rng.uniform(-1, 1, size=(8, 4))
        lhs = div(dens).coeffs(pts)
        rhs = weyl_dual(exterior_differential(a)).coeffs(pts)
        assert np.allclose(lhs, rhs, atol=1e-12)

    def test_div_of_vector_density(self):
        # a vector density x^i e_i has divergence 4
        poly = Polynomial(np.eye(4, dtype=int), np.eye(4))
        dens = DensityField(1, EVEN, CoefficientField.from_polynomial(poly))
        assert np.allclose(div(dens).coeffs(np.ones((2, 4))), 4.0)


def test_vectors_contract_forms_linearly(rng):
    a = random_polynomial_form(rng, 2, ODD)
    b = random_polynomial_form(rng, 2, ODD)
    pts = rng.normal(size=(3, 4))
    assert np.allclose((2.0 * a - b).coeffs(pts), 2 * a.coeffs(pts) - b.coeffs(pts))
    with pytest.raises(ValueError):
        a + random_polynomial_form(rng, 2, EVEN)
