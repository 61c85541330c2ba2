#!/usr/bin/env python3
"""Finite-dimensional modules as tuples of action matrices."""

import hashlib
import json
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

import linalg
from errors import (AlgebraMismatch, BadModuleJSON, CommutationViolated,
                    NotInvariant, RelationViolated)
from qalgebra import Algebra, AlgebraAutomorphism, AlgebraElement, config_from_dict, build_algebra, opposite_algebra

logger = logging.getLogger(__name__)


class ModuleRep:
    """A left module: actions[i] is the matrix of x_i. Treated as immutable."""

    def __init__(self, algebra: Algebra, actions: Sequence[np.ndarray], dim: Optional[int] = None):
        self.algebra = algebra
        if dim is None:
            dim = actions[0].shape[0] if len(actions) else 0
        self.dim = int(dim)
        self.actions: List[np.ndarray] = [linalg.mod_p(X, algebra.p).reshape(self.dim, self.dim)
                                          for X in actions]
        if len(self.actions) != algebra.c:
            raise AlgebraMismatch(f"expected {algebra.c} action matrices, got {len(self.actions)}")
        self._monomials: Optional[List[np.ndarray]] = None
        self._digest: Optional[str] = None
        # per-module memo used by homology (covers, hulls) and decomp
        self.memo: Dict = {}

    @property
    def p(self) -> int:
        return self.algebra.p

    def __repr__(self):
        return f"ModuleRep(dim={self.dim}, id={self.digest()[:8]})"

    def digest(self) -> str:
        if self._digest is None:
            h = hashlib.sha256(self.algebra.digest().encode())
            h.update(str(self.dim).encode())
            for X in self.actions:
                h.update(np.ascontiguousarray(X, dtype=np.int64).tobytes())
            self._digest = h.hexdigest()
        return self._digest

    def same_as(self, other: "ModuleRep") -> bool:
        """Literal equality of action matrices (not isomorphism)."""
        return (self.algebra == other.algebra and self.dim == other.dim
                and all(np.array_equal(X, Y) for X, Y in zip(self.actions, other.actions)))

    def monomial_actions(self) -> List[np.ndarray]:
        """Matrices of x^e = x_1^{e_1} ... x_c^{e_c}, indexed like the algebra basis."""
        if self._monomials is None:
            p = self.p
            powers = []
            for i, X in enumerate(self.actions):
                row = [linalg.identity(self.dim)]
                for _ in range(1, self.algebra.config.exponents[i]):
                    row.append(linalg.matmul(row[-1], X, p))
                powers.append(row)
            mats = []
            for e in self.algebra.basis:
                M = linalg.identity(self.dim)
                for i, k in enumerate(e):
                    if k:
                        M = linalg.matmul(M, powers[i][k], p)
                mats.append(M)
            self._monomials = mats
        return self._monomials

    def action_of(self, u: AlgebraElement) -> np.ndarray:
        out = linalg.zeros(self.dim, self.dim)
        for k in np.flatnonzero(u.coefficients):
            out = (out + int(u.coefficients[k]) * self.monomial_actions()[k]) % self.p
        return out

    def orbit_matrix(self, v: np.ndarray) -> np.ndarray:
        """Columns x^e v over the algebra basis: the A-map A -> M sending 1 to v."""
        return np.stack([M @ v % self.p for M in self.monomial_actions()], axis=1) if self.dim else \
            linalg.zeros(0, self.algebra.dimension)

    def to_dict(self) -> Dict:
        return {
            "algebra": self.algebra.config.to_dict(),
            "dim": self.dim,
            "actions": [X.tolist() for X in self.actions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def module_from_dict(d: Dict, algebra: Optional[Algebra] = None) -> ModuleRep:
    try:
        spec = d["algebra"]
        if isinstance(spec, dict):
            alg = build_algebra(config_from_dict(spec))
            if algebra is not None and alg != algebra:
                raise BadModuleJSON("module JSON names a different algebra")
        else:
            if algebra is None or str(spec) != algebra.digest():
                raise BadModuleJSON(f"unknown algebra hash {spec}")
            alg = algebra
        n = int(d["dim"])
        actions = [np.array(X, dtype=np.int64).reshape(n, n) for X in d["actions"]]
    except (KeyError, TypeError, ValueError) as e:
        raise BadModuleJSON(f"malformed module JSON: {e}") from e
    if any(np.any((X < 0) | (X >= alg.p)) for X in actions):
        raise BadModuleJSON(f"entries must lie in [0, {alg.p})")
    return check_module(alg, actions)


@dataclass(eq=False)
class ModuleMap:
    source: ModuleRep
    target: ModuleRep
    matrix: np.ndarray

    @property
    def p(self) -> int:
        return self.source.p

    def is_intertwiner(self) -> bool:
        return all(np.array_equal(Y @ self.matrix % self.p, self.matrix @ X % self.p)
                   for X, Y in zip(self.source.actions, self.target.actions))

    def compose(self, first: "ModuleMap") -> "ModuleMap":
        """self after first."""
        return ModuleMap(first.source, self.target, linalg.matmul(self.matrix, first.matrix, self.p))

    def rank(self) -> int:
        return linalg.rank(self.matrix, self.p)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_isomorphism(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()


@dataclass(eq=False)
class Submodule:
    parent: ModuleRep
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def as_module(self) -> ModuleRep:
        return restrict(self.parent, self.basis)

    def inclusion(self) -> ModuleMap:
        return ModuleMap(self.as_module(), self.parent, self.basis.copy())


def check_module(algebra: Algebra, actions: Sequence[np.ndarray]) -> ModuleRep:
    p = algebra.p
    mats = [linalg.mod_p(X, p) for X in actions]
    if len(mats) != algebra.c:
        raise AlgebraMismatch(f"expected {algebra.c} action matrices, got {len(mats)}")
    n = mats[0].shape[0] if mats else 0
    if any(X.shape != (n, n) for X in mats):
        raise ValueError("action matrices must be square of equal size")
    for i, X in enumerate(mats):
        P = linalg.matpow(X, algebra.config.exponents[i], p)
        if np.any(P):
            raise RelationViolated(i, linalg.identity(n)[:, int(np.flatnonzero(P.any(axis=0))[0])])
    for i in range(algebra.c):
        for j in range(i + 1, algebra.c):
            D = (mats[i] @ mats[j] - algebra.config.q(i, j) * (mats[j] @ mats[i])) % p
            if np.any(D):
                raise CommutationViolated(i, j, linalg.identity(n)[:, int(np.flatnonzero(D.any(axis=0))[0])])
    return ModuleRep(algebra, mats, n)


def zero_module(algebra: Algebra) -> ModuleRep:
    return ModuleRep(algebra, [linalg.zeros(0, 0) for _ in range(algebra.c)], 0)


def simple_module(algebra: Algebra) -> ModuleRep:
    """The trivial module k: every generator acts as 0."""
    return ModuleRep(algebra, [linalg.zeros(1, 1) for _ in range(algebra.c)], 1)


def restrict(M: ModuleRep, basis: np.ndarray) -> ModuleRep:
    """Actions on an invariant subspace given by independent columns."""
    k = basis.shape[1]
    if k == 0:
        return zero_module(M.algebra)
    stacked = np.concatenate([X @ basis % M.p for X in M.actions], axis=1)
    Y = linalg.solve(basis, stacked, M.p)
    if Y is None:
        raise NotInvariant("subspace is not invariant under the action")
    return ModuleRep(M.algebra, [Y[:, i * k:(i + 1) * k] for i in range(M.algebra.c)], k)


def radical(M: ModuleRep) -> Submodule:
    """rad M = sum of the images of the x_i."""
    if M.dim == 0:
        return Submodule(M, linalg.zeros(0, 0))
    return Submodule(M, linalg.span_basis(np.concatenate(M.actions, axis=1), M.p))


def socle(M: ModuleRep) -> Submodule:
    """soc M = common kernel of the x_i."""
    if M.dim == 0:
        return Submodule(M, linalg.zeros(0, 0))
    K = linalg.nullspace(np.concatenate(M.actions, axis=0), M.p)
    return Submodule(M, linalg.span_basis(K, M.p))


def submodule_generated(M: ModuleRep, vectors: np.ndarray) -> Submodule:
    """Smallest submodule containing the given columns (action closure to a fixed point)."""
    p = M.p
    V = linalg.span_basis(linalg.mod_p(vectors, p).reshape(M.dim, -1), p)
    while True:
        W = linalg.span_basis(np.concatenate([V] + [X @ V % p for X in M.actions], axis=1), p)
        if W.shape[1] == V.shape[1]:
            return Submodule(M, W)
        V = W


def is_invariant(M: ModuleRep, basis: np.ndarray) -> bool:
    if basis.shape[1] == 0:
        return True
    r = linalg.rank(basis, M.p)
    return all(linalg.rank(np.concatenate([basis, X @ basis % M.p], axis=1), M.p) == r for X in M.actions)


def quotient_with_complement(M: ModuleRep, S) -> Tuple[ModuleRep, ModuleMap, np.ndarray]:
    """M / S on the complement spanned by identity columns not pivotal in S.

    Also returns the complement C: the class of column j of C is basis vector j
    of the quotient.
    """
    basis = S.basis if isinstance(S, Submodule) else S
    p = M.p
    basis = linalg.span_basis(basis, p) if basis.shape[1] else basis
    if not is_invariant(M, basis):
        raise NotInvariant("cannot form a quotient by a non-invariant subspace")
    k = basis.shape[1]
    C = linalg.complement_columns(basis, p)
    B = np.concatenate([basis, C], axis=1)
    proj = linalg.inverse(B, p)[k:, :] if M.dim else linalg.zeros(0, 0)
    actions = [proj @ X % p @ C % p for X in M.actions]
    Q = ModuleRep(M.algebra, actions, M.dim - k)
    return Q, ModuleMap(M, Q, proj), C


def quotient(M: ModuleRep, S) -> Tuple[ModuleRep, ModuleMap]:
    Q, proj, _ = quotient_with_complement(M, S)
    return Q, proj


def top(M: ModuleRep) -> ModuleRep:
    return quotient(M, radical(M))[0]


def direct_sum(*modules: ModuleRep) -> ModuleRep:
    if not modules:
        raise ValueError("direct_sum needs at least one module")
    algebra = modules[0].algebra
    if any(N.algebra != algebra for N in modules):
        raise AlgebraMismatch("direct sum of modules over different algebras")
    actions = [linalg.block_diag(*(N.actions[i] for N in modules)) for i in range(algebra.c)]
    return ModuleRep(algebra, actions, sum(N.dim for N in modules))


def twist(M: ModuleRep, phi: AlgebraAutomorphism) -> ModuleRep:
    """The module with x_i acting as phi(x_i) = s_i x_i."""
    return ModuleRep(M.algebra, [s * X % M.p for s, X in zip(phi.generator_scalars, M.actions)], M.dim)


def dual(M: ModuleRep) -> ModuleRep:
    """Hom_k(M, k) as a left module over the opposite algebra (transposed actions)."""
    return ModuleRep(opposite_algebra(M.algebra), [X.T.copy() for X in M.actions], M.dim)


def invariant_key(M: ModuleRep) -> Tuple:
    """(dim, sorted ranks of all x_i and x_i x_j, dim soc, dim top); isomorphism-invariant."""
    p = M.p
    ranks = [linalg.rank(X, p) for X in M.actions]
    c = M.algebra.c
    for i in range(c):
        for j in range(i, c):
            ranks.append(linalg.rank(M.actions[i] @ M.actions[j] % p, p))
    rad = radical(M).dim
    return (M.dim, tuple(sorted(ranks)), socle(M).dim, M.dim - rad)
