import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import prefix_dominates, random_coeffs, random_prob
from schmidt_dinf import (
    DimensionError,
    InvalidInput,
    MajorizationVerdict,
    locc_verdict,
    majorizes,
    make_pure_state,
    max_entangled,
    prob_vector,
    schmidt_decompose,
    to_prob_vector,
)
from schmidt_dinf.majorization import verdict_from_vectors

V = MajorizationVerdict


def sd_from_probs(p, n=None):
    n = len(p) if n is None else n
    c = np.zeros((len(p), n))
    c[np.arange(len(p)), np.arange(len(p))] = np.sqrt(p)
    return schmidt_decompose(make_pure_state(c))


class TestProbVector:
    @pytest.mark.parametrize(
        "p, expected",
        [((1, 0), (1, 0)), ((0.5, 0.5), (0.5, 0.5)), ((0.75, 0.25), (0.75, 0.25))],
    )
    def test_to_prob_vector(self, p, expected):
        np.testing.assert_allclose(to_prob_vector(sd_from_probs(p)).p, expected, atol=1e-15)

    def test_squares_tau(self):
        sd = sd_from_probs((0.75, 0.25))
        np.testing.assert_allclose(sd.tau, [math.sqrt(0.75), math.sqrt(0.25)], atol=1e-15)
        np.testing.assert_allclose(to_prob_vector(sd).p, [x * x for x in sd.tau], atol=1e-15)

    def test_sorted_and_validated(self):
        np.testing.assert_array_equal(prob_vector([0.2, 0.5, 0.3]).p, [0.5, 0.3, 0.2])
        for bad in ([0.5, 0.6], [1.2, -0.2], [], [np.nan, 1.0]):
            with pytest.raises(InvalidInput):
                prob_vector(bad)


class TestMajorizes:
    def test_extreme_points(self):
        assert majorizes(prob_vector([1, 0]), prob_vector([0.5, 0.5]))
        assert not majorizes(prob_vector([0.5, 0.5]), prob_vector([1, 0]))

    def test_two_component(self):
        assert majorizes(prob_vector([0.7, 0.3]), prob_vector([0.6, 0.4]))

    def test_incomparable_triple(self):
        a, b = [0.5, 0.25, 0.25], [0.4, 0.4, 0.2]
        assert not prefix_dominates(a, b) and not prefix_dominates(b, a)
        assert not majorizes(prob_vector(a), prob_vector(b))
        assert not majorizes(prob_vector(b), prob_vector(a))

    def test_boundary_counts_as_dominated(self):
        a = prob_vector([0.6, 0.4])
        assert majorizes(a, a, tol=0.0)

    def test_zero_padding(self):
        assert majorizes(prob_vector([1.0]), prob_vector([0.5, 0.5]))
        assert not majorizes(prob_vector([0.5, 0.5]), prob_vector([1.0]))

    def test_matches_loop_oracle(self, rng):
        for _ in range(2000):
            d = int(rng.integers(1, 7))
            a, b = random_prob(rng, d), random_prob(rng, d)
            assert majorizes(prob_vector(a), prob_vector(b)) == prefix_dominates(list(a), list(b))

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=8).filter(lambda xs: sum(xs) > 1e-3))
    def test_reflexive_property(self, xs):
        p = prob_vector(np.array(xs) / sum(xs))
        assert majorizes(p, p)
        assert verdict_from_vectors(p, p) is V.EQUIVALENT


class TestLoccVerdict:
    def test_max_entangled_to_product(self):
        assert locc_verdict(sd_from_probs((0.5, 0.5)), sd_from_probs((1, 0))) is V.CONVERTIBLE_12
        assert locc_verdict(sd_from_probs((1, 0)), sd_from_probs((0.5, 0.5))) is V.CONVERTIBLE_21

    def test_identical(self, rng):
        sd = schmidt_decompose(make_pure_state(random_coeffs(rng, 3, 4)))
        assert locc_verdict(sd, sd) is V.EQUIVALENT

    def test_incomparable(self):
        assert locc_verdict(sd_from_probs((0.5, 0.25, 0.25)), sd_from_probs((0.4, 0.4, 0.2))) is V.INCOMPARABLE

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            locc_verdict(sd_from_probs((0.5, 0.5)), sd_from_probs((0.5, 0.25, 0.25)))

    def test_uniform_is_minimal(self, rng):
        for d in (2, 3, 5):
            src = schmidt_decompose(max_entangled(d, d + 2))
            for _ in range(50):
                other = schmidt_decompose(make_pure_state(random_coeffs(rng, d, d + 2)))
                assert locc_verdict(src, other) in (V.CONVERTIBLE_12, V.EQUIVALENT)

    def test_product_is_maximal(self, rng):
        prod = sd_from_probs((1, 0, 0))
        for _ in range(50):
            other = schmidt_decompose(make_pure_state(random_coeffs(rng, 3, 3)))
            assert locc_verdict(prod, other) is V.CONVERTIBLE_21

    def test_permutation_invariance(self, rng):
        for _ in range(200):
            d = int(rng.integers(2, 6))
            p1, p2 = random_prob(rng, d), random_prob(rng, d)
            base = locc_verdict(sd_from_probs(p1), sd_from_probs(p2))
            perm = rng.permutation(d)
            assert locc_verdict(sd_from_probs(p1[perm]), sd_from_probs(p2[rng.permutation(d)])) is base
