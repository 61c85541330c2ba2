import pytest
import sys
import os
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from artranslate import (ar_sequence_ending_at, arrow_valuation, classify_component, explore_component,
                         nakayama_orbit_sum, nakayama_twist, tau, tau_inverse, tau_period, tau_power,
                         tau_syzygy_first)
from decomp import is_isomorphic
from errors import MissingSequence, NotIndecomposable, ProjectiveInput
from homology import free_module, radical_module, socle_quotient, syzygy
from modrep import direct_sum, simple_module
from rankvariety import principal_module, rank_point


class TestTau:

    def test_tau_of_simple(self, alg22):
        k = simple_module(alg22)
        assert tau(k).dim == 5
        assert tau_inverse(k).dim == 5
        assert is_isomorphic(tau(k), syzygy(k, 2))

    def test_both_orders_agree(self, alg22, alg32):
        for A in (alg22, alg32):
            for M in (simple_module(A), radical_module(A)):
                assert is_isomorphic(tau(M), tau_syzygy_first(M))

    def test_inverse(self, alg32):
        k = simple_module(alg32)
        assert is_isomorphic(tau(tau_inverse(k)), k)
        assert tau_power(k, 0) is k
        assert tau_power(tau_power(k, 2), -2).dim == 1

    def test_projective_rejected(self, alg22):
        with pytest.raises(ProjectiveInput):
            tau(free_module(alg22, 1))

    def test_nakayama_twist_of_simple(self, alg32):
        k = simple_module(alg32)
        assert nakayama_twist(k).same_as(k)
        assert nakayama_orbit_sum(k).dim == 3


class TestTauPeriods:

    def test_principal_module_a2_is_fixed(self, alg22):
        M = principal_module(alg22, rank_point(alg22, [1, 2]))
        assert tau_period(M, 2) == 1

    def test_simple_is_not_periodic(self, alg22):
        assert tau_period(simple_module(alg22), 2) is None

    def test_principal_module_moves_with_nu(self, alg32):
        lam = rank_point(alg32, [1, 1])
        M = principal_module(alg32, lam)
        T = tau(M)
        assert T.dim == 6
        # tau(A u) is A u at the point moved by nu or its inverse
        moved = [principal_module(alg32, rank_point(alg32, pt)) for pt in ([4, 2], [2, 4])]
        assert any(is_isomorphic(T, N) for N in moved)
        assert tau_period(M, 3) == 3


class TestARSequences:

    def test_sequence_ending_at_simple(self, alg22):
        k = simple_module(alg22)
        ar = ar_sequence_ending_at(k)
        assert ar.middle.dim == 6
        assert ar.projective_multiplicity() == 0
        assert [(X.dim, m) for X, m in ar.stable_middle()] == [(3, 2)]
        result = ar.check()
        assert result["exact"] and result["non_split"] and result["left_is_tau"]

    def test_projective_attaches_at_a_mod_soc(self, alg22):
        ar = ar_sequence_ending_at(socle_quotient(alg22))
        assert ar.projective_multiplicity() == 1
        assert [(X.dim, m) for X, m in ar.stable_middle()] == [(1, 2)]

    def test_lifting_with_catalog(self, alg22):
        k = simple_module(alg22)
        catalog = [radical_module(alg22), socle_quotient(alg22), syzygy(k, 2), syzygy(k, -2)]
        ar = ar_sequence_ending_at(k, catalog)
        assert ar.lifting_tests >= 10
        assert ar.lifting_failures == 0
        assert all(ar.check().values())

    def test_decomposable_end_rejected(self, alg22):
        k = simple_module(alg22)
        with pytest.raises(NotIndecomposable):
            ar_sequence_ending_at(direct_sum(k, k))


@pytest.mark.slow
class TestFragments:

    def test_component_of_simple(self, alg22):
        frag = explore_component(simple_module(alg22), radius=2, seed=3)
        assert frag.start.dim == 1
        assert len(frag.orbits()) == 2
        assert frag.projective_attachments()
        evidence = classify_component(frag)
        assert evidence.label() == "TildeA12Pattern"
        assert evidence.data["non_regular_boundary"]

    def test_component_of_simple_at_radius_four(self, alg22):
        frag = explore_component(simple_module(alg22), radius=4, seed=1)
        dims = {v.dim for v in frag.vertices}
        # syzygies of k have dimension 2|n| + 1
        assert {1, 3, 5, 7, 9} <= dims
        assert all(d % 2 == 1 for d in dims)
        assert not any(v.periodic for v in frag.vertices)
        assert classify_component(frag).verdict == "TildeA12Pattern"

    def test_arrow_valuation(self, alg22):
        k = simple_module(alg22)
        frag = explore_component(k, radius=2, seed=3)
        om = frag.vertex_of(radical_module(alg22))
        assert om is not None
        assert arrow_valuation(om.id, frag.start.id, frag) == (2, 2)

    def test_missing_vertex(self, alg22):
        frag = explore_component(simple_module(alg22), radius=1, seed=3)
        with pytest.raises(MissingSequence):
            arrow_valuation(syzygy(simple_module(alg22), 6), 0, frag)

    def test_tube_at_principal_module(self, alg22):
        M = principal_module(alg22, rank_point(alg22, [1, 1]))
        evidence = classify_component(explore_component(M, radius=2, seed=3))
        assert evidence.verdict == "Tube"
        assert evidence.parameter == 1
