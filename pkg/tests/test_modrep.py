import pytest
import json
import numpy as np
import sys
import os
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

import linalg
from errors import (AlgebraMismatch, BadModuleJSON, CommutationViolated, NotInvariant,
                    RelationViolated)
from modrep import (ModuleMap, check_module, direct_sum, dual, invariant_key, module_from_dict,
                    quotient, quotient_with_complement, radical, restrict, simple_module, socle,
                    submodule_generated, top, twist, zero_module)
from qalgebra import nakayama_automorphism, opposite_algebra, regular_module


def prop_valid_module(M):
    """Action matrices satisfy the defining relations"""
    check_module(M.algebra, M.actions)
    return True


class TestCheckModule:

    def test_regular_and_zero(self, alg22):
        assert prop_valid_module(regular_module(alg22))
        assert check_module(alg22, [linalg.zeros(0, 0), linalg.zeros(0, 0)]).dim == 0

    def test_two_dim_accept_case(self, alg22):
        J = np.array([[0, 1], [0, 0]], dtype=np.int64)
        assert check_module(alg22, [J, J]).dim == 2

    def test_relation_violated(self, alg32):
        J = np.array([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0]], dtype=np.int64)
        Z = linalg.zeros(4, 4)
        with pytest.raises(RelationViolated) as exc:
            check_module(alg32, [J, Z])
        assert exc.value.i == 0
        assert np.any(linalg.matpow(J, 3, 7) @ exc.value.witness % 7)

    def test_commutation_violated(self, alg22):
        X1 = np.array([[0, 0, 0], [1, 0, 0], [0, 0, 0]], dtype=np.int64)
        X2 = np.array([[0, 0, 0], [0, 0, 0], [0, 1, 0]], dtype=np.int64)
        # X2 X1 != 0 but X1 X2 = 0
        with pytest.raises(CommutationViolated):
            check_module(alg22, [X1, X2])

    def test_wrong_number_of_actions(self, alg22):
        with pytest.raises(AlgebraMismatch):
            check_module(alg22, [linalg.zeros(1, 1)])


class TestSubmodules:

    def test_radical_and_socle_of_regular(self, alg22):
        R = regular_module(alg22)
        assert radical(R).dim == 3
        S = socle(R)
        assert S.dim == 1
        top_vec = linalg.identity(4)[:, alg22.index[(1, 1)]]
        assert linalg.rank(np.concatenate([S.basis, top_vec.reshape(-1, 1)], axis=1), 5) == 1

    def test_simple_module(self, alg22):
        k = simple_module(alg22)
        assert k.dim == 1
        assert all(not np.any(X) for X in k.actions)
        assert radical(k).dim == 0
        assert socle(k).dim == 1

    def test_generated_submodule(self, alg32):
        R = regular_module(alg32)
        x1 = linalg.identity(9)[:, [alg32.index[(1, 0)]]]
        S = submodule_generated(R, x1)
        # x1 A = span of x1^i x2^j with i >= 1
        assert S.dim == 6

    def test_restrict_rejects_non_invariant(self, alg22):
        R = regular_module(alg22)
        with pytest.raises(NotInvariant):
            restrict(R, linalg.identity(4)[:, [0]])


class TestQuotients:

    def test_a_mod_soc(self, alg22):
        R = regular_module(alg22)
        Q, proj = quotient(R, socle(R))
        assert Q.dim == 3
        assert proj.is_intertwiner() and proj.is_surjective()
        assert prop_valid_module(Q)

    def test_rad_mod_soc(self, alg22, alg32):
        for A, expected in ((alg22, 2), (alg32, 7)):
            rad = radical(regular_module(A)).as_module()
            Q, _ = quotient(rad, socle(rad))
            assert Q.dim == expected

    def test_complement_lifts_basis(self, alg32):
        R = regular_module(alg32)
        Q, proj, C = quotient_with_complement(R, radical(R))
        assert Q.dim == 1
        assert np.array_equal(proj.matrix @ C % 7, linalg.identity(1))

    def test_top(self, alg23):
        assert top(regular_module(alg23)).dim == 1


class TestConstructions:

    def test_direct_sum(self, alg22):
        k = simple_module(alg22)
        R = regular_module(alg22)
        assert direct_sum(k, k).dim == 2
        rad = radical(R).as_module()
        assert direct_sum(R, quotient(rad, socle(rad))[0]).dim == 6

    def test_direct_sum_algebra_mismatch(self, alg22, alg23):
        with pytest.raises(AlgebraMismatch):
            direct_sum(simple_module(alg22), simple_module(alg23))

    def test_twist(self, alg22):
        nu = nakayama_automorphism(alg22)
        R = regular_module(alg22)
        T = twist(R, nu)
        assert all(np.array_equal(Y, (-X) % 5) for X, Y in zip(R.actions, T.actions))
        assert twist(T, nu).same_as(R)
        assert twist(simple_module(alg22), nu).same_as(simple_module(alg22))

    def test_dual(self, alg32):
        R = regular_module(alg32)
        D = dual(R)
        assert D.algebra == opposite_algebra(alg32)
        assert D.dim == R.dim
        assert prop_valid_module(D)
        assert dual(D).same_as(R)

    def test_invariant_key_separates_dimensions(self, alg22):
        R = regular_module(alg22)
        assert invariant_key(R) != invariant_key(radical(R).as_module())
        assert invariant_key(R) == invariant_key(regular_module(alg22))


class TestMaps:

    def test_identity_map(self, alg22):
        R = regular_module(alg22)
        f = ModuleMap(R, R, linalg.identity(4))
        assert f.is_isomorphism()
        assert f.compose(f).rank() == 4

    def test_inclusion_of_socle(self, alg22):
        R = regular_module(alg22)
        inc = socle(R).inclusion()
        assert inc.is_intertwiner() and inc.is_injective() and not inc.is_surjective()


class TestModuleJSON:

    def test_roundtrip(self, alg22):
        R = regular_module(alg22)
        M = module_from_dict(json.loads(R.to_json()), alg22)
        assert M.same_as(R)

    def test_by_hash(self, alg22):
        d = {"algebra": alg22.digest(), "dim": 1, "actions": [[[0]], [[0]]]}
        assert module_from_dict(d, alg22).dim == 1

    def test_unknown_hash(self, alg22):
        with pytest.raises(BadModuleJSON):
            module_from_dict({"algebra": "deadbeef", "dim": 1, "actions": [[[0]], [[0]]]}, alg22)

    def test_entries_out_of_range(self, alg22):
        d = {"algebra": alg22.digest(), "dim": 1, "actions": [[[5]], [[0]]]}
        with pytest.raises(BadModuleJSON):
            module_from_dict(d, alg22)

    def test_missing_field(self, alg22):
        with pytest.raises(BadModuleJSON):
            module_from_dict({"algebra": alg22.digest(), "actions": []}, alg22)

    def test_zero_module(self, alg22):
        assert zero_module(alg22).dim == 0
