import pytest
import numpy as np
import sys
import os
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from errors import AlgebraMismatch, BadCommutationMatrix, InternalError, NotHomogeneous, StructureMismatch
from modrep import check_module
from qalgebra import (Algebra, build_algebra, config_from_dict, frobenius_form, homogeneous_config,
                      is_wild, multiply, nakayama_automorphism, opposite_algebra, regular_module)


def prop_associative(algebra, rng, samples=25):
    """(uv)w = u(vw) on random triples"""
    for _ in range(samples):
        u, v, w = (algebra.element(rng.integers(0, algebra.p, size=algebra.dimension)) for _ in range(3))
        left = multiply(algebra, multiply(algebra, u, v), w)
        right = multiply(algebra, u, multiply(algebra, v, w))
        if not np.array_equal(left.coefficients, right.coefficients):
            return False
    return True


class TestConstruction:

    def test_dimensions(self, alg22, alg23, alg32):
        assert alg22.dimension == 4
        assert alg23.dimension == 8
        assert alg32.dimension == 9

    def test_basis_is_graded_lex(self, alg22):
        assert alg22.basis == [(0, 0), (1, 0), (0, 1), (1, 1)]

    def test_homogeneous_root(self, alg22, alg32):
        assert alg22.config.q(0, 1) == 4
        assert alg32.config.q(0, 1) == 2
        assert alg32.config.q(1, 0) == 4

    def test_bad_commutation_matrix(self):
        with pytest.raises(BadCommutationMatrix):
            config_from_dict({"p": 5, "c": 2, "exponents": [2, 2], "commutation": [[1, 2], [2, 1]]})

    def test_shorthand_dict(self):
        config = config_from_dict({"p": 7, "c": 2, "a": 3})
        assert config.q(0, 1) == 2
        assert config.homogeneous

    def test_mixed_exponents_are_not_homogeneous(self):
        config = config_from_dict({"p": 5, "c": 2, "exponents": [2, 3], "commutation": [[1, 1], [1, 1]]})
        assert not config.homogeneous
        with pytest.raises(NotHomogeneous):
            config.a
        assert build_algebra(config).dimension == 6

    def test_digest_is_stable(self):
        assert homogeneous_config(5, 2, 2).digest() == homogeneous_config(5, 2, 2).digest()
        assert homogeneous_config(5, 2, 2).digest() != homogeneous_config(5, 3, 2).digest()


class TestMultiplication:

    def test_commutation_relation(self, alg22):
        x1, x2 = alg22.generator(0), alg22.generator(1)
        assert (x2 * x1).coefficient((1, 1)) == 4
        assert (x1 * x2).coefficient((1, 1)) == 1

    def test_nilpotent_generators(self, alg22, alg32):
        assert (alg22.generator(0) * alg22.generator(0)).is_zero()
        assert alg32.generator(1).power(3).is_zero()
        assert not alg32.generator(1).power(2).is_zero()

    def test_structure_and_associativity(self, alg22, alg23, alg32):
        for A in (alg22, alg23, alg32):
            assert A.check_structure()
            assert A.check_associativity()

    def test_oracle_disagreement_is_internal(self, mocker):
        mocker.patch.object(Algebra, "check_structure", return_value=False)
        with pytest.raises(StructureMismatch) as info:
            build_algebra.__wrapped__(homogeneous_config(11, 2, 2))
        assert isinstance(info.value, InternalError)

    def test_random_triples(self, alg32):
        assert prop_associative(alg32, np.random.default_rng(3))

    def test_element_length_checked(self, alg22):
        with pytest.raises(AlgebraMismatch):
            alg22.element([1, 2, 3])

    def test_characteristic_dividing_a(self):
        A = build_algebra(homogeneous_config(3, 2, 3))
        assert A.config.q(0, 1) == 1
        u = A.generator(0) + A.generator(1).scale(2)
        assert u.power(3).is_zero()


class TestRegularModule:

    def test_regular_module_is_a_module(self, alg22, alg32):
        for A in (alg22, alg32):
            R = regular_module(A)
            assert R.dim == A.dimension
            check_module(A, R.actions)

    def test_x1_sends_x2_to_top(self, alg22):
        R = regular_module(alg22)
        i2, top = alg22.index[(0, 1)], alg22.index[(1, 1)]
        assert R.actions[0][top, i2] == 1
        assert not np.any(R.actions[0] @ R.actions[0])


class TestFrobenius:

    def test_pairing_values(self, alg22):
        G = frobenius_form(alg22)
        i1, i2, one, top = (alg22.index[e] for e in [(1, 0), (0, 1), (0, 0), (1, 1)])
        assert G[i1, i2] == 1
        assert G[i2, i1] == 4
        assert G[one, top] == 1

    def test_nondegenerate(self, alg22, alg23, alg32):
        import linalg
        for A in (alg22, alg23, alg32):
            assert linalg.is_invertible(frobenius_form(A), A.p)


class TestNakayama:

    def test_exterior_even(self, alg22):
        nu = nakayama_automorphism(alg22)
        assert nu.generator_scalars == (4, 4)
        assert nu.order() == 2
        assert not nu.is_identity()

    def test_exterior_odd(self, alg23):
        nu = nakayama_automorphism(alg23)
        assert nu.is_identity()
        assert nu.order() == 1

    def test_cube_roots(self, alg32):
        nu = nakayama_automorphism(alg32)
        assert nu.generator_scalars == (4, 2)
        assert nu.order() == 3
        assert nu.power(nu.order()).is_identity()
        assert nu.is_multiplicative()

    def test_defining_identity(self, alg22, alg23, alg32):
        """<u, v> = <v, nu(u)> on the monomial basis"""
        for A in (alg22, alg23, alg32):
            G = frobenius_form(A)
            N = nakayama_automorphism(A).basis_action()
            assert np.array_equal(G, (G @ N % A.p).T)

    def test_inverse_and_negative_powers(self, alg32):
        nu = nakayama_automorphism(alg32)
        assert nu.compose(nu.inverse()).is_identity()
        assert nu.power(-1).generator_scalars == nu.inverse().generator_scalars


class TestOpposite:

    def test_self_opposite(self, alg22):
        assert opposite_algebra(alg22).config.q(0, 1) == 4

    def test_inverse_root(self, alg32):
        assert opposite_algebra(alg32).config.q(0, 1) == 4

    def test_involution(self, alg32):
        assert opposite_algebra(opposite_algebra(alg32)) == alg32


class TestWild:

    def test_dichotomy(self, alg22, alg23, alg32):
        assert not is_wild(alg22.config)
        assert is_wild(alg23.config)
        assert is_wild(alg32.config)
