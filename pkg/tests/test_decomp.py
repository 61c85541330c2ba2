import pytest
import numpy as np
import sys
import os
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from decomp import (Verdict, decompose, end_algebra, is_indecomposable, is_isomorphic, is_projective,
                    projective_rank, strip_projective_summands)
from errors import SplitBudgetExceeded
from homology import free_module, rad_mod_soc, radical_module, socle_quotient, syzygy
from modrep import direct_sum, simple_module, twist, zero_module
from qalgebra import nakayama_automorphism


class TestEndAlgebra:

    def test_simple_module(self, alg22):
        E = end_algebra(simple_module(alg22))
        assert E.dim == 1
        assert E.radical_dim == 0
        assert E.semisimple_dim == 1

    def test_regular_module(self, alg22):
        E = end_algebra(free_module(alg22, 1))
        assert E.dim == 4
        assert E.radical_dim == 3
        assert E.multiplication_table().shape == (4, 4, 4)

    def test_memoized(self, alg22):
        M = radical_module(alg22)
        assert end_algebra(M) is end_algebra(M)


class TestIndecomposable:

    def test_simple(self, alg22):
        result = is_indecomposable(simple_module(alg22))
        assert result.verdict is Verdict.ABSOLUTELY_INDECOMPOSABLE
        assert result

    def test_sum_of_simples(self, alg22):
        k = simple_module(alg22)
        result = is_indecomposable(direct_sum(k, k))
        assert result.verdict is Verdict.DECOMPOSABLE
        E = result.witness.idempotent(5)
        assert np.array_equal(E @ E % 5, E)
        assert not result

    def test_syzygies(self, alg22):
        assert is_indecomposable(radical_module(alg22))
        assert is_indecomposable(socle_quotient(alg22))

    def test_rad_mod_soc_for_cube_roots(self, alg32):
        assert is_indecomposable(rad_mod_soc(alg32)).verdict is Verdict.ABSOLUTELY_INDECOMPOSABLE

    def test_zero_module_rejected(self, alg22):
        with pytest.raises(ValueError):
            is_indecomposable(zero_module(alg22))


class TestIsomorphism:

    def test_syzygy_is_the_radical(self, alg22):
        iso = is_isomorphic(radical_module(alg22), syzygy(simple_module(alg22), 1))
        assert iso
        assert iso.witness.shape == (3, 3)

    def test_rank_profiles_differ(self, alg22):
        iso = is_isomorphic(radical_module(alg22), socle_quotient(alg22))
        assert not iso
        assert iso.method == "rank-profile"

    def test_dimension_mismatch(self, alg22):
        assert not is_isomorphic(simple_module(alg22), radical_module(alg22))

    def test_twisted_simple(self, alg32):
        k = simple_module(alg32)
        assert is_isomorphic(twist(k, nakayama_automorphism(alg32)), k)


class TestProjectiveSummands:

    def test_projective_rank(self, alg22):
        assert projective_rank(free_module(alg22, 2)) == 2
        assert projective_rank(radical_module(alg22)) == 0
        assert is_projective(free_module(alg22, 1))
        assert not is_projective(simple_module(alg22))

    def test_strip(self, alg22):
        M = direct_sum(free_module(alg22, 1), simple_module(alg22))
        rest, r = strip_projective_summands(M)
        assert r == 1
        assert rest.dim == 1
        assert strip_projective_summands(free_module(alg22, 1))[0].dim == 0


class TestDecompose:

    def test_groups_and_witness(self, alg22):
        k = simple_module(alg22)
        M = direct_sum(k, radical_module(alg22), k)
        D = decompose(M, seed=3)
        assert D.dims() == [(1, 2), (3, 1)]
        assert D.check()
        assert not D.flagged

    def test_indecomposable_is_one_leaf(self, alg32):
        D = decompose(rad_mod_soc(alg32))
        assert D.dims() == [(7, 1)]
        assert D.check()

    def test_memoized_per_seed(self, alg22):
        M = direct_sum(simple_module(alg22), simple_module(alg22))
        assert decompose(M, seed=1) is decompose(M, seed=1)

    def test_exhausted_split_budget_reports_partial(self, alg22, mocker):
        k = simple_module(alg22)
        M = direct_sum(k, k)
        mocker.patch("decomp._fitting_split", return_value=None)
        with pytest.raises(SplitBudgetExceeded) as info:
            decompose(M, seed=2, retries=0)
        partial = info.value.partial
        assert partial.module is M
        assert partial.flagged == [0]
        assert partial.leaves[0].verdict is Verdict.NOT_ABSOLUTELY_INDECOMPOSABLE

    def test_larger_budget_is_not_served_from_memo(self, alg22, mocker):
        k = simple_module(alg22)
        M = direct_sum(k, k)
        mocker.patch("decomp._fitting_split", return_value=None)
        with pytest.raises(SplitBudgetExceeded):
            decompose(M, seed=2, retries=0)
        mocker.stopall()
        D = decompose(M, seed=2, retries=4)
        assert D.dims() == [(1, 2)]
        assert D.check()
