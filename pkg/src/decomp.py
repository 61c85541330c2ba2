#!/usr/bin/env python3
"""Endomorphism algebras, Fitting splitting, indecomposability and isomorphism."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

import linalg
from errors import RadicalUncertain, SplitBudgetExceeded
from homology import hom_space
from modrep import ModuleRep, invariant_key, restrict, submodule_generated, quotient
from scalars import derive_seed

logger = logging.getLogger(__name__)

DEFAULT_RETRIES = 16
DEFAULT_ISO_TRIALS = 32


# --- End(M) and its radical -----------------------------------------------------

@dataclass(eq=False)
class EndAlgebra:
    module: ModuleRep
    basis: np.ndarray  # (d, n, n)
    radical: np.ndarray  # (r, n, n)
    method: str

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def radical_dim(self) -> int:
        return self.radical.shape[0]

    @property
    def semisimple_dim(self) -> int:
        return self.dim - self.radical_dim

    def multiplication_table(self) -> np.ndarray:
        """Structure constants t[i, j, k]: B_i B_j = sum_k t[i, j, k] B_k."""
        p = self.module.p
        d = self.dim
        n = self.module.dim
        V = _vecs(self.basis)
        prods = np.einsum("iab,jbc->ijac", self.basis, self.basis) % p
        rhs = prods.transpose(0, 1, 3, 2).reshape(d * d, n * n).T
        coords = linalg.solve(V, rhs, p)
        return coords.T.reshape(d, d, d)


def _vecs(mats: np.ndarray) -> np.ndarray:
    k = mats.shape[0]
    return mats.transpose(0, 2, 1).reshape(k, -1).T.copy()


def _single_eigenvalue(B: np.ndarray, p: int) -> Optional[int]:
    """lambda with B - lambda I nilpotent, if there is one in F_p."""
    n = B.shape[0]
    if n == 0:
        return 0
    I = linalg.identity(n)
    if n % p:
        lam = int(np.trace(B)) * pow(n, -1, p) % p
        return lam if linalg.is_nilpotent((B - lam * I) % p, p) else None
    for lam in range(p):
        if linalg.is_nilpotent((B - lam * I) % p, p):
            return lam
    return None


def _local_radical(basis: np.ndarray, p: int) -> Optional[np.ndarray]:
    """Certificate that span(basis) = k 1 + J with J a nilpotent ideal; returns J or None."""
    d, n, _ = basis.shape
    if d == 0:
        return None
    I = linalg.identity(n)
    shifted = []
    for B in basis:
        lam = _single_eigenvalue(B, p)
        if lam is None:
            return None
        shifted.append((B - lam * I) % p)
    S = np.stack(shifted)
    Sv = linalg.span_basis(_vecs(S), p)
    if Sv.shape[1] != d - 1:
        return None
    J = np.stack([linalg.unvec(Sv[:, k], n, n) for k in range(Sv.shape[1])]) if Sv.shape[1] else \
        np.zeros((0, n, n), dtype=np.int64)
    # J closed under products and J^n = 0
    cur = J
    for _ in range(n):
        if cur.shape[0] == 0:
            return J
        prods = np.einsum("iab,jbc->ijac", cur, J) % p
        prods = prods.reshape(-1, n, n)
        pv = linalg.span_basis(_vecs(prods), p) if prods.shape[0] else linalg.zeros(n * n, 0)
        if cur is J and pv.shape[1] and linalg.rank(np.concatenate([Sv, pv], axis=1), p) != Sv.shape[1]:
            return None
        cur = np.stack([linalg.unvec(pv[:, k], n, n) for k in range(pv.shape[1])]) if pv.shape[1] else \
            np.zeros((0, n, n), dtype=np.int64)
    return J if cur.shape[0] == 0 else None


def _trace_radical(basis: np.ndarray, p: int) -> Optional[np.ndarray]:
    """Kernel of the trace form tr(B_i B_j) on the natural representation; needs p > dim M."""
    d, n, _ = basis.shape
    T = np.einsum("iab,jba->ij", basis, basis) % p
    K = linalg.nullspace(T, p)
    rad = np.tensordot(K.T, basis, axes=1) % p if K.shape[1] else np.zeros((0, n, n), dtype=np.int64)
    if all(linalg.is_nilpotent(R, p) for R in rad):
        return rad
    return None


def end_algebra(M: ModuleRep) -> EndAlgebra:
    cached = M.memo.get("end")
    if cached is not None:
        return cached
    p = M.p
    basis = hom_space(M, M).matrices
    rad, method = None, ""
    if p > M.dim:
        rad, method = _trace_radical(basis, p), "trace-form"
    if rad is None:
        rad, method = _local_radical(basis, p), "local-certificate"
    if rad is None:
        raise RadicalUncertain(f"cannot certify rad End(M) for dim {M.dim} at p={p}")
    E = EndAlgebra(M, basis, rad, method)
    logger.debug("End of %d-dim module: dim %d, radical %d (%s)", M.dim, E.dim, E.radical_dim, method)
    M.memo["end"] = E
    return E


# --- indecomposability ------------------------------------------------------------

class Verdict(Enum):
    ABSOLUTELY_INDECOMPOSABLE = "AbsolutelyIndecomposable"
    DECOMPOSABLE = "Decomposable"
    NOT_ABSOLUTELY_INDECOMPOSABLE = "NotAbsolutelyIndecomposable"


@dataclass(eq=False)
class FittingSplit:
    """M = kernel (+) image of a power of a non-nilpotent, non-invertible endomorphism."""

    endomorphism: np.ndarray
    kernel: np.ndarray
    image: np.ndarray

    def idempotent(self, p: int) -> np.ndarray:
        """Projection onto the kernel summand along the image summand."""
        B = np.concatenate([self.kernel, self.image], axis=1)
        k = self.kernel.shape[1]
        D = np.diag([1] * k + [0] * self.image.shape[1]).astype(np.int64)
        return B @ D @ linalg.inverse(B, p) % p


@dataclass(eq=False)
class IndecomposabilityResult:
    verdict: Verdict
    witness: Optional[FittingSplit] = None

    def __bool__(self):
        return self.verdict is Verdict.ABSOLUTELY_INDECOMPOSABLE


def _fitting_split(M: ModuleRep, phi: np.ndarray) -> Optional[FittingSplit]:
    p = M.p
    n = M.dim
    I = linalg.identity(n)
    for lam in range(p):
        psi = (phi - lam * I) % p
        if linalg.rank(psi, p) == n:
            continue
        Q = linalg.matpow(psi, n, p)
        r = linalg.rank(Q, p)
        if 0 < r < n:
            K = linalg.span_basis(linalg.nullspace(Q, p), p)
            Im = linalg.span_basis(Q, p)
            return FittingSplit(phi, K, Im)
    return None


def find_split(M: ModuleRep, seed: int = 0, retries: int = DEFAULT_RETRIES) -> Optional[FittingSplit]:
    """Basis sweep of End(M), then seeded random combinations."""
    p = M.p
    basis = hom_space(M, M).matrices
    for B in basis:
        split = _fitting_split(M, B)
        if split is not None:
            return split
    if basis.shape[0] < 2:
        return None
    rng = np.random.default_rng(derive_seed(seed, "fitting", M.digest()))
    for _ in range(retries):
        phi = np.tensordot(rng.integers(0, p, size=basis.shape[0]), basis, axes=1) % p
        split = _fitting_split(M, phi)
        if split is not None:
            return split
    return None


def is_indecomposable(M: ModuleRep, seed: int = 0, retries: int = DEFAULT_RETRIES) -> IndecomposabilityResult:
    if M.dim == 0:
        raise ValueError("the zero module has no indecomposability verdict")
    memo = M.memo.setdefault("verdict", {})
    if (seed, retries) in memo:
        return memo[(seed, retries)]
    basis = hom_space(M, M).matrices
    if _local_radical(basis, M.p) is not None:
        result = IndecomposabilityResult(Verdict.ABSOLUTELY_INDECOMPOSABLE)
    else:
        split = find_split(M, seed, retries)
        if split is not None:
            result = IndecomposabilityResult(Verdict.DECOMPOSABLE, split)
        else:
            logger.warning("End(M) of %d-dim module is not local but no idempotent was found", M.dim)
            result = IndecomposabilityResult(Verdict.NOT_ABSOLUTELY_INDECOMPOSABLE)
    memo[(seed, retries)] = result
    return result


# --- isomorphism ----------------------------------------------------------------

@dataclass(eq=False)
class IsoResult:
    isomorphic: bool
    witness: Optional[np.ndarray] = None
    method: str = ""

    def __bool__(self):
        return self.isomorphic


def is_isomorphic(M: ModuleRep, N: ModuleRep, seed: int = 0,
                  trials: int = DEFAULT_ISO_TRIALS) -> IsoResult:
    """Search Hom(M, N) for an invertible map after cheap invariant filters."""
    if M.algebra != N.algebra or M.dim != N.dim:
        return IsoResult(False, method="dimension")
    if M.dim == 0:
        return IsoResult(True, linalg.zeros(0, 0), "zero")
    memo = M.memo.setdefault("iso", {})
    key = N.digest()
    if key in memo:
        return memo[key]
    result = _search_iso(M, N, seed, trials)
    memo[key] = result
    return result


def _search_iso(M: ModuleRep, N: ModuleRep, seed: int, trials: int) -> IsoResult:
    p = M.p
    if M.same_as(N):
        return IsoResult(True, linalg.identity(M.dim), "identical")
    if invariant_key(M) != invariant_key(N):
        return IsoResult(False, method="rank-profile")
    H = hom_space(M, N)
    if H.dim == 0 or H.dim != hom_space(N, M).dim or H.dim != hom_space(M, M).dim:
        return IsoResult(False, method="hom-dimensions")
    for F in H.matrices:
        if linalg.is_invertible(F, p):
            return IsoResult(True, F, "basis-sweep")
    rng = np.random.default_rng(derive_seed(seed, "iso", M.digest(), N.digest()))
    for _ in range(trials):
        F = H.combination(rng.integers(0, p, size=H.dim))
        if linalg.is_invertible(F, p):
            return IsoResult(True, F, "random")
    return IsoResult(False, method=f"no invertible map in {trials} trials")


# --- projective summands --------------------------------------------------------

def projective_rank(M: ModuleRep) -> int:
    """Number of free summands: rank of the top monomial's action."""
    if M.dim == 0:
        return 0
    top = M.monomial_actions()[M.algebra.top_index]
    return linalg.rank(top, M.p)


def is_projective(M: ModuleRep) -> bool:
    return projective_rank(M) * M.algebra.dimension == M.dim


def strip_projective_summands(M: ModuleRep) -> Tuple[ModuleRep, int]:
    """(M', r) with M = M' (+) A^r and M' without projective summands."""
    if M.dim == 0:
        return M, 0
    p = M.p
    top = M.monomial_actions()[M.algebra.top_index]
    pivots = linalg.rref(top, p)[1]
    if not pivots:
        return M, 0
    # top action is injective on the free submodule generated by these coordinates
    gens = linalg.identity(M.dim)[:, pivots]
    F = submodule_generated(M, gens)
    rest, _ = quotient(M, F)
    return rest, len(pivots)


# --- decomposition --------------------------------------------------------------

@dataclass(eq=False)
class Leaf:
    module: ModuleRep
    basis: np.ndarray  # columns in the coordinates of the decomposed module
    verdict: Verdict


@dataclass(eq=False)
class Decomposition:
    module: ModuleRep
    leaves: List[Leaf]
    groups: List[List[int]]  # leaf indices, one list per isomorphism class

    @property
    def pieces(self) -> List[Tuple[ModuleRep, int]]:
        return [(self.leaves[g[0]].module, len(g)) for g in self.groups]

    @property
    def witness(self) -> np.ndarray:
        order = [i for g in self.groups for i in g]
        if not order:
            return linalg.zeros(self.module.dim, 0)
        return np.concatenate([self.leaves[i].basis for i in order], axis=1)

    @property
    def flagged(self) -> List[int]:
        return [i for i, leaf in enumerate(self.leaves)
                if leaf.verdict is Verdict.NOT_ABSOLUTELY_INDECOMPOSABLE]

    def dims(self) -> List[Tuple[int, int]]:
        return [(N.dim, m) for N, m in self.pieces]

    def check(self) -> bool:
        """W^{-1} X_i W is the block diagonal of the leaf actions, for every generator."""
        M = self.module
        p = M.p
        W = self.witness
        if W.shape != (M.dim, M.dim) or not linalg.is_invertible(W, p):
            return False
        order = [i for g in self.groups for i in g]
        for k, X in enumerate(M.actions):
            D = linalg.block_diag(*(self.leaves[i].module.actions[k] for i in order))
            if not np.array_equal(X @ W % p, W @ D % p):
                return False
        return True


def decompose(M: ModuleRep, seed: int = 0, retries: int = DEFAULT_RETRIES,
              iso_trials: int = DEFAULT_ISO_TRIALS) -> Decomposition:
    """Recursive Fitting splitting; leaves grouped into isomorphism classes.

    Raises SplitBudgetExceeded, carrying the partial decomposition, when some leaf
    is neither split nor certified absolutely indecomposable within the budget.
    """
    memo = M.memo.setdefault("decomposition", {})
    key = (seed, retries, iso_trials)
    if key in memo:
        return memo[key]
    p = M.p
    leaves: List[Leaf] = []
    stack: List[Tuple[ModuleRep, np.ndarray]] = [(M, linalg.identity(M.dim))]
    while stack:
        N, B = stack.pop()
        if N.dim == 0:
            continue
        result = is_indecomposable(N, seed, retries)
        if result.verdict is Verdict.DECOMPOSABLE:
            split = result.witness
            for part in (split.image, split.kernel):
                stack.append((restrict(N, part), B @ part % p))
            continue
        leaves.append(Leaf(N, B, result.verdict))
    leaves.sort(key=lambda leaf: (leaf.module.dim, invariant_key(leaf.module)))
    groups: List[List[int]] = []
    for i, leaf in enumerate(leaves):
        for g in groups:
            rep = leaves[g[0]].module
            if invariant_key(rep) == invariant_key(leaf.module) and \
                    is_isomorphic(rep, leaf.module, seed, iso_trials):
                g.append(i)
                break
        else:
            groups.append([i])
    D = Decomposition(M, leaves, groups)
    logger.debug("decomposed %d-dim module into %s", M.dim, D.dims())
    if D.flagged:
        raise SplitBudgetExceeded(f"{len(D.flagged)} leaves are not certified indecomposable", partial=D)
    memo[key] = D
    return D
