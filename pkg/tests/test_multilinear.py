import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistedforms.minkowski import MINKOWSKI_MATRIX, boost, random_lorentz
from twistedforms.multilinear import (
    Density,
    MultiCovector,
    MultiVector,
    basis_covector,
    basis_indices,
    basis_vector,
    compound,
    contract,
    evaluate,
    metric_sharp,
    pair,
    pullback,
    push_density,
    pushforward,
    wedge,
    weyl,
    weyl_inverse,
)
from twistedforms.orientation import EE, EO, EVEN, ODD, OE, OO, RELATIVISTIC, STANDARD, Orientation, index

seeds = st.integers(0, 2**32 - 1)
ALL_PARITIES = (EVEN, ODD, EE, OE, EO, OO)


def random_covector(rng, q, parity, dim=4, cls=MultiCovector):
    return cls(q, parity, rng.normal(size=math.comb(dim, q)), dim)


def perm_sign(perm):
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def full_tensor(a):
    """Antisymmetric array A[i1..iq] from ascending coefficients."""
    t = np.zeros((a.dim,) * a.degree)
    for c, idx in zip(a.coeffs, basis_indices(a.dim, a.degree)):
        for perm in itertools.permutations(range(a.degree)):
            t[tuple(idx[k] for k in perm)] = perm_sign(perm) * c
    return t


def evaluate_oracle(a, vectors, o):
    """Multilinear expansion over all index tuples, times the orientation index."""
    t = full_tensor(a)
    for v in vectors:
        t = np.tensordot(v, t, axes=([0], [0])) if t.ndim else t
    return index(a.parity, o.offset) * float(t)


def wedge_oracle(a, b, vectors, o):
    """Leibniz sum over (q, r)-shuffles of the evaluated factors."""
    q, r = a.degree, b.degree
    total = 0.0
    for first in itertools.combinations(range(q + r), q):
        second = tuple(i for i in range(q + r) if i not in first)
        sign = perm_sign(first + second)
        total += sign * evaluate_oracle(a, [vectors[i] for i in first], o) * evaluate_oracle(b, [vectors[i] for i in second], o)
    return total


class TestEvaluate:
    def test_dual_basis(self):
        a = basis_covector((1, 2))
        o = Orientation.reference()
        e = np.eye(4)
        assert evaluate(a, [e[1], e[2]], o) == 1.0
        assert evaluate(a, [e[2], e[1]], o) == -1.0

    def test_odd_flips_with_orientation(self, rng):
        a = random_covector(rng, 2, ODD)
        v = rng.normal(size=(2, 4))
        c = evaluate(a, v, Orientation.reference())
        assert evaluate(a, v, Orientation.of(STANDARD, "P")) == pytest.approx(-c)

    @given(seeds, st.integers(0, 4), st.sampled_from(ALL_PARITIES))
    def test_matches_tensor_oracle(self, seed, q, parity):
        rng = np.random.default_rng(seed)
        a = random_covector(rng, q, parity)
        v = rng.normal(size=(q, 4))
        for o in parity.model.orientations():
            assert evaluate(a, v, o) == pytest.approx(evaluate_oracle(a, v, o), abs=1e-10)

    def test_arity_mismatch(self):
        with pytest.raises(ValueError):
            evaluate(basis_covector((0, 1)), [np.ones(4)], Orientation.reference())


class TestWedge:
    def test_nilpotent(self):
        assert np.all(wedge(basis_covector((1,)), basis_covector((1,))).coeffs == 0)

    def test_even_with_odd(self):
        out = wedge(basis_covector((1,)), basis_covector((2,), ODD))
        assert out.parity == ODD
        assert out.component(1, 2) == 1.0

    def test_parity_pair_product(self):
        a = basis_covector((0,), OE)
        b = basis_covector((1,), EO)
        assert wedge(a, b).parity == OO

    def test_past_top_degree_is_zero(self):
        out = wedge(basis_covector((0, 1, 2)), basis_covector((1, 3), ODD))
        assert out.degree == 5 and out.parity == ODD and out.coeffs.size == 0

    @given(seeds, st.integers(0, 4), st.integers(0, 4), st.sampled_from(ALL_PARITIES))
    def test_leibniz_oracle(self, seed, q, r, parity):
        if q + r > 4:
            return
        rng = np.random.default_rng(seed)
        a = random_covector(rng, q, parity)
        b = random_covector(rng, r, parity.model.parities()[-1])
        v = rng.normal(size=(q + r, 4))
        for o in parity.model.orientations():
            assert evaluate(wedge(a, b), v, o) == pytest.approx(wedge_oracle(a, b, v, o), abs=1e-9)

    def test_graded_commutativity_on_basis(self):
        for q, r in itertools.product(range(5), repeat=2):
            for I, J in itertools.product(basis_indices(4, q), basis_indices(4, r)):
                ab = wedge(basis_covector(I), basis_covector(J))
                ba = wedge(basis_covector(J), basis_covector(I))
                assert np.array_equal(ab.coeffs, (-1) ** (q * r) * ba.coeffs)

    @given(seeds, st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
    def test_associative(self, seed, q, r, s):
        rng = np.random.default_rng(seed)
        a, b, c = (random_covector(rng, k, p) for k, p in zip((q, r, s), (OE, EO, OO)))
        left = wedge(wedge(a, b), c)
        right = wedge(a, wedge(b, c))
        assert left.parity == right.parity == OE * EO * OO
        assert np.allclose(left.coeffs, right.coeffs, atol=1e-12)

    def test_model_mismatch(self):
        with pytest.raises(ValueError):
            wedge(basis_covector((0,), ODD), basis_covector((1,), OE))


class TestPair:
    def test_dual_bases(self):
        assert pair(basis_covector((1, 2)), basis_vector((1, 2))) == 1.0
        assert pair(basis_covector((1, 2)), basis_vector((1, 3))) == 0.0

    def test_parity_mismatch(self):
        with pytest.raises(ValueError):
            pair(basis_covector((1, 2), ODD), basis_vector((1, 2)))

    @given(seeds, st.integers(1, 4), st.sampled_from(ALL_PARITIES))
    def test_formal_combination_oracle(self, seed, q, parity):
        # w = sum_k c_k [(v_k1 .. v_kq, o_k)]; pairing is sum_k c_k a(v_k, o_k)
        rng = np.random.default_rng(seed)
        a = random_covector(rng, q, parity)
        orientations = parity.model.orientations()
        w = MultiVector.zero(q, parity)
        expected = 0.0
        for _ in range(3):
            c = rng.normal()
            vecs = rng.normal(size=(q, 4))
            o = orientations[rng.integers(len(orientations))]
            simple = MultiVector(0, parity, [1.0])
            for v in vecs:
                simple = wedge(simple, MultiVector(1, even_of(parity), v))
            w = w + (c * index(parity, o.offset)) * simple
            expected += c * evaluate_oracle(a, vecs, o)
        assert pair(a, w) == pytest.approx(expected, abs=1e-9)


def even_of(parity):
    return parity.model.parities()[0]


class TestTransport:
    def test_identity(self, rng):
        w = random_covector(rng, 2, ODD, cls=MultiVector)
        assert pushforward(np.eye(4), w).allclose(w)
        a = random_covector(rng, 2, OE)
        assert pullback(np.eye(4), a).allclose(a)

    def test_top_degree_scaling(self, rng):
        rho = rng.normal(size=(4, 4))
        if np.linalg.det(rho) > 0:
            rho[0] *= -1
        det = np.linalg.det(rho)
        even = MultiVector(4, EVEN, [1.0])
        odd = MultiVector(4, ODD, [1.0])
        assert pushforward(rho, even).coeffs[0] == pytest.approx(det)
        assert pushforward(rho, odd).coeffs[0] == pytest.approx(abs(det))
        inv = np.linalg.inv(rho)
        assert pullback(inv, MultiCovector(4, EVEN, [1.0])).coeffs[0] == pytest.approx(1 / det)
        assert pullback(inv, MultiCovector(4, ODD, [1.0])).coeffs[0] == pytest.approx(1 / abs(det))

    @given(seeds, st.integers(0, 4), st.sampled_from((EE, OE, EO, OO)), st.sampled_from(("E", "T", "S", "TS")))
    def test_pairing_invariant_under_lorentz(self, seed, q, parity, comp):
        rng = np.random.default_rng(seed)
        rho = random_lorentz(rng, comp)
        a = random_covector(rng, q, parity)
        w = random_covector(rng, q, parity, cls=MultiVector)
        lhs = pair(pullback(np.linalg.inv(rho), a), pushforward(rho, w))
        assert lhs == pytest.approx(pair(a, w), rel=1e-10, abs=1e-10)

    @given(seeds, st.integers(0, 4), st.sampled_from((EVEN, ODD)))
    def test_pairing_invariant_under_gl(self, seed, q, parity):
        rng = np.random.default_rng(seed)
        rho = rng.normal(size=(4, 4)) + 2 * np.eye(4)
        a = random_covector(rng, q, parity)
        w = random_covector(rng, q, parity, cls=MultiVector)
        lhs = pair(pullback(np.linalg.inv(rho), a), pushforward(rho, w))
        assert lhs == pytest.approx(pair(a, w), rel=1e-9, abs=1e-9)

    def test_pullback_definition(self, rng):
        rho = random_lorentz(rng, "T")
        a = random_covector(rng, 2, OE)
        v = rng.normal(size=(2, 4))
        o = Orientation.reference(RELATIVISTIC)
        # (rho^* a)(v, o) = a(rho v, [rho] o)
        lhs = evaluate(pullback(rho, a), v, o)
        rhs = evaluate(a, v @ rho.T, Orientation.of(RELATIVISTIC, "T"))
        assert lhs == pytest.approx(rhs)

    def test_non_lorentz_rejected(self):
        with pytest.raises(ValueError):
            pullback(np.diag([2.0, 1, 1, 1]), basis_covector((0,), OE))

    def test_singular_rejected(self):
        with pytest.raises(ValueError):
            pushforward(np.zeros((4, 4)), basis_vector((0,)))

    def test_compound_is_multiplicative(self, rng):
        a, b = rng.normal(size=(2, 4, 4))
        for q in range(5):
            assert np.allclose(compound(a @ b, q), compound(a, q) @ compound(b, q))


class TestContract:
    def test_time_basis_vector(self):
        out = contract(basis_vector((0,)), MultiCovector(4, ODD, [1.0]))
        assert out.degree == 3 and out.parity == ODD
        assert np.array_equal(out.coeffs, basis_covector((1, 2, 3)).coeffs)

    def test_top_vector(self):
        out = contract(basis_vector((0, 1, 2, 3)), MultiCovector(4, EVEN, [1.0]))
        assert out.degree == 0 and out.coeffs[0] == 1.0

    @pytest.mark.parametrize("q", range(5))
    def test_defining_identity_on_basis(self, q):
        e = MultiCovector(4, ODD, [1.0])
        for I, J in itertools.product(basis_indices(4, q), basis_indices(4, 4 - q)):
            w = basis_vector(I)
            v = basis_vector(J, ODD)
            lhs = pair(e, wedge(w, v))
            rhs = pair(contract(w, e), MultiVector(4 - q, ODD, v.coeffs))
            assert lhs == rhs

    @given(seeds, st.integers(0, 4))
    def test_defining_identity_random(self, seed, q):
        rng = np.random.default_rng(seed)
        e = MultiCovector(4, OO, [rng.normal()])
        w = random_covector(rng, q, OE, cls=MultiVector)
        c = contract(w, e)
        for J in basis_indices(4, 4 - q):
            v = basis_vector(J, EO)
            assert pair(e, wedge(w, v)) == pytest.approx(pair(c, MultiVector(4 - q, c.parity, v.coeffs)), abs=1e-12)

    def test_degree_mismatch(self):
        with pytest.raises(ValueError):
            contract(basis_vector((0,)), basis_covector((0, 1)))


class TestWeyl:
    @given(seeds, st.integers(0, 4), st.sampled_from(ALL_PARITIES))
    def test_round_trip(self, seed, q, parity):
        rng = np.random.default_rng(seed)
        d = Density(q, parity, rng.normal(size=math.comb(4, q)))
        assert weyl_inverse(weyl(d)).allclose(d)

    def test_scalar_density_is_top_odd_covector(self):
        out = weyl(Density(0, EVEN, [2.5]))
        assert out.degree == 4 and out.parity == ODD and out.coeffs[0] == 2.5

    @given(seeds, st.integers(0, 4), st.sampled_from(("E", "T", "S", "TS")))
    def test_lorentz_equivariance(self, seed, q, comp):
        rng = np.random.default_rng(seed)
        rho = random_lorentz(rng, comp)
        d = Density(q, EO, rng.normal(size=math.comb(4, q)))
        lhs = weyl(push_density(rho, d))
        rhs = pullback(np.linalg.inv(rho), weyl(d))
        assert lhs.allclose(rhs, atol=1e-10)

    def test_from_product(self, rng):
        w = random_covector(rng, 2, EVEN, cls=MultiVector)
        d = Density.from_product(w, MultiCovector(4, ODD, [3.0]))
        assert np.allclose(d.coeffs, 3 * w.coeffs)
        with pytest.raises(ValueError):
            Density.from_product(w, MultiCovector(4, EVEN, [3.0]))


class TestMetricSharp:
    def test_examples(self):
        g = MINKOWSKI_MATRIX
        assert np.array_equal(metric_sharp(g, basis_covector((0,))).coeffs, basis_vector((0,)).coeffs)
        assert np.array_equal(metric_sharp(g, basis_covector((1,))).coeffs, -basis_vector((1,)).coeffs)
        assert np.array_equal(metric_sharp(g, basis_covector((0, 1))).coeffs, -basis_vector((0, 1)).coeffs)

    def test_simple_products(self, rng):
        g = boost([0.3, 0.1, 0]).T @ MINKOWSKI_MATRIX @ boost([0.3, 0.1, 0])
        a, b = random_covector(rng, 1, EVEN), random_covector(rng, 1, EVEN)
        lhs = metric_sharp(g, wedge(a, b))
        rhs = wedge(metric_sharp(g, a), metric_sharp(g, b))
        assert lhs.allclose(rhs, atol=1e-12)


def test_three_dimensional_algebra(rng):
    a = random_covector(rng, 1, EVEN, dim=3)
    b = random_covector(rng, 2, ODD, dim=3)
    v = rng.normal(size=(3, 3))
    o = Orientation.reference()
    assert evaluate(wedge(a, b), v, o) == pytest.approx(wedge_oracle(a, b, v, o))
