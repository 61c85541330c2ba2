#!/usr/bin/env python3
"""Hom spaces, stable Hom, projective covers, syzygies, Ext and extensions.

A is local and selfinjective, so projective modules are free, injective hulls
land in free modules and Ext^n(M, N) is the stable Hom space from Omega^n M
to N. Everything here is exact linear algebra over F_p.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

import linalg
from errors import AlgebraMismatch, HullConstructionFailed, InternalError
from modrep import (ModuleMap, ModuleRep, direct_sum, quotient, quotient_with_complement,
                    radical, restrict, socle, zero_module)
from qalgebra import Algebra, regular_module
from scalars import derive_seed

logger = logging.getLogger(__name__)


# --- free modules -------------------------------------------------------------

@lru_cache(maxsize=32)
def _regular(algebra: Algebra) -> ModuleRep:
    return regular_module(algebra)


@lru_cache(maxsize=256)
def free_module(algebra: Algebra, rank: int) -> ModuleRep:
    """A^rank; block j holds the monomial basis of the j-th copy."""
    if rank == 0:
        return zero_module(algebra)
    return direct_sum(*([_regular(algebra)] * rank))


def radical_module(algebra: Algebra) -> ModuleRep:
    """rad A = Omega k."""
    return radical(_regular(algebra)).as_module()


def socle_quotient(algebra: Algebra) -> ModuleRep:
    """A / soc A = Omega^{-1} k."""
    R = _regular(algebra)
    return quotient(R, socle(R))[0]


def rad_mod_soc(algebra: Algebra) -> ModuleRep:
    """rad A / soc A; soc A lies in rad A and is its socle."""
    rad = radical_module(algebra)
    return quotient(rad, socle(rad))[0]


def _monomial_stack(M: ModuleRep) -> np.ndarray:
    """Array (dim A, n, n) of the monomial action matrices of M."""
    T = M.memo.get("monomial_stack")
    if T is None:
        T = np.stack(M.monomial_actions())
        M.memo["monomial_stack"] = T
    return T


def _vec_stack(mats: np.ndarray) -> np.ndarray:
    """Columns vec(F_k) for a stack (k, m, n) of matrices."""
    k = mats.shape[0]
    return mats.transpose(0, 2, 1).reshape(k, -1).T.copy()


# --- Hom ----------------------------------------------------------------------

@dataclass(eq=False)
class HomSpace:
    source: ModuleRep
    target: ModuleRep
    matrices: np.ndarray  # (dim, target.dim, source.dim)

    @property
    def dim(self) -> int:
        return self.matrices.shape[0]

    @property
    def basis(self) -> List[ModuleMap]:
        return [ModuleMap(self.source, self.target, F) for F in self.matrices]

    def combination(self, coefficients) -> np.ndarray:
        c = np.asarray(coefficients, dtype=np.int64) % self.source.p
        return np.tensordot(c, self.matrices, axes=1) % self.source.p

    def vectors(self) -> np.ndarray:
        return _vec_stack(self.matrices)


@dataclass(eq=False)
class Cover:
    """Minimal projective cover A^beta -> M with its kernel Omega M.

    Unpacks as (map, syzygy).
    """

    module: ModuleRep
    beta: int
    free: ModuleRep
    generators: np.ndarray  # columns: preimages in M of a basis of top M
    map: ModuleMap
    kernel: np.ndarray  # basis of Omega M in the coordinates of A^beta
    syzygy: ModuleRep
    section: np.ndarray  # k-linear right inverse of map.matrix
    _relations: Optional[np.ndarray] = field(default=None, repr=False)

    def __iter__(self) -> Iterator:
        yield self.map
        yield self.syzygy

    def relations(self) -> np.ndarray:
        """Generators of Omega M (top of the syzygy) in A^beta coordinates."""
        if self._relations is None:
            Om = self.syzygy
            if Om.dim == 0:
                self._relations = linalg.zeros(self.free.dim, 0)
            else:
                gens = linalg.complement_columns(radical(Om).basis, Om.p)
                self._relations = self.kernel @ gens % Om.p
        return self._relations


def projective_cover(M: ModuleRep) -> Cover:
    cached = M.memo.get("cover")
    if cached is not None:
        return cached
    A = M.algebra
    p = M.p
    n = M.dim
    gens = linalg.complement_columns(radical(M).basis, p) if n else linalg.zeros(0, 0)
    beta = gens.shape[1]
    F = free_module(A, beta)
    if beta:
        pi = np.concatenate([M.orbit_matrix(gens[:, j]) for j in range(beta)], axis=1)
    else:
        pi = linalg.zeros(n, 0)
    K = linalg.nullspace(pi, p) if beta else linalg.zeros(0, 0)
    section = linalg.solve(pi, linalg.identity(n), p)
    if section is None:
        raise InternalError("projective cover is not surjective")
    cover = Cover(M, beta, F, gens, ModuleMap(F, M, pi), K, restrict(F, K), section)
    logger.debug("cover of dim %d module: beta=%d, syzygy dim %d", n, beta, cover.syzygy.dim)
    M.memo["cover"] = cover
    return cover


def hom_space(M: ModuleRep, N: ModuleRep) -> HomSpace:
    """All A-maps M -> N.

    A map is fixed by images n_j of the cover generators of M subject to the
    relations generating Omega M; it is recovered on all of M through the
    section of the cover.
    """
    if M.algebra != N.algebra:
        raise AlgebraMismatch("Hom between modules over different algebras")
    memo = M.memo.setdefault("hom", {})
    key = N.digest()
    if key not in memo:
        memo[key] = _solve_hom(M, N)
    return memo[key]


def _solve_hom(M: ModuleRep, N: ModuleRep) -> HomSpace:
    p = M.p
    nM, nN = M.dim, N.dim
    if nM == 0 or nN == 0:
        return HomSpace(M, N, np.zeros((0, nN, nM), dtype=np.int64))
    cov = projective_cover(M)
    beta, dA = cov.beta, M.algebra.dimension
    T = _monomial_stack(N)
    rel = cov.relations()
    s = rel.shape[1]
    if s == 0:
        sol = linalg.identity(beta * nN)
    else:
        # relation r imposes sum_j sum_e r[j, e] x^e n_j = 0
        R = rel.T.reshape(s, beta, dA)
        blocks = np.tensordot(R, T, axes=([2], [0])) % p  # (s, beta, a, b)
        system = blocks.transpose(0, 2, 1, 3).reshape(s * nN, beta * nN)
        sol = linalg.nullspace(system, p)
    k = sol.shape[1]
    if k == 0:
        return HomSpace(M, N, np.zeros((0, nN, nM), dtype=np.int64))
    images = sol.T.reshape(k, beta, nN)
    orbits = np.tensordot(images, T, axes=([2], [2])) % p  # (k, beta, e, a)
    G = orbits.transpose(0, 3, 1, 2).reshape(k, nN, beta * dA)
    mats = (G @ cov.section) % p
    logger.debug("Hom(%d-dim, %d-dim): %d relations, dim %d", nM, nN, s, k)
    return HomSpace(M, N, mats)


# --- injective hulls -----------------------------------------------------------

@dataclass(eq=False)
class Hull:
    """Injective hull M -> A^t with cokernel Omega^{-1} M."""

    module: ModuleRep
    t: int
    free: ModuleRep
    matrix: np.ndarray  # (t * dim A, dim M)
    cokernel: ModuleRep
    projection: ModuleMap

    @property
    def map(self) -> ModuleMap:
        return ModuleMap(self.module, self.free, self.matrix)


def injective_hull(M: ModuleRep) -> Hull:
    cached = M.memo.get("hull")
    if cached is not None:
        return cached
    A = M.algebra
    p = M.p
    S = socle(M).basis
    t = S.shape[1]
    kept: List[np.ndarray] = []
    stack = linalg.zeros(0, t)
    r = 0
    if t:
        for F in hom_space(M, _regular(A)).matrices:
            cand = np.concatenate([stack, F @ S % p], axis=0)
            rc = linalg.rank(cand, p)
            if rc > r:
                kept.append(F)
                stack, r = cand, rc
                if r == t:
                    break
    if r < t:
        raise HullConstructionFailed(f"socle of dimension {t} reached rank {r}")
    free = free_module(A, t)
    H = np.concatenate(kept, axis=0) if kept else linalg.zeros(0, M.dim)
    cok, proj = quotient(free, H)
    hull = Hull(M, t, free, H, cok, proj)
    logger.debug("hull of dim %d module: t=%d, cosyzygy dim %d", M.dim, t, cok.dim)
    M.memo["hull"] = hull
    return hull


# --- syzygies -------------------------------------------------------------------

def syzygy(M: ModuleRep, n: int) -> ModuleRep:
    """Omega^n M; n < 0 takes cosyzygies, n = 0 strips projective summands."""
    if n == 0:
        from decomp import strip_projective_summands
        return strip_projective_summands(M)[0]
    cur = M
    for _ in range(abs(n)):
        cur = projective_cover(cur).syzygy if n > 0 else injective_hull(cur).cokernel
    return cur


def syzygy_map(g: ModuleMap) -> ModuleMap:
    """A lift Omega g: Omega X -> Omega Y of g: X -> Y through the covers."""
    p = g.p
    cm = projective_cover(g.source)
    cn = projective_cover(g.target)
    om, on = cm.syzygy, cn.syzygy
    if om.dim == 0 or on.dim == 0:
        return ModuleMap(om, on, linalg.zeros(on.dim, om.dim))
    Y = cn.section @ (g.matrix @ cm.generators % p) % p
    G = np.concatenate([cn.free.orbit_matrix(Y[:, j]) for j in range(cm.beta)], axis=1)
    Z = linalg.solve(cn.kernel, G @ cm.kernel % p, p)
    if Z is None:
        raise InternalError("lifted map does not carry syzygy into syzygy")
    return ModuleMap(om, on, Z)


def omega_map(g: ModuleMap, n: int) -> ModuleMap:
    for _ in range(n):
        g = syzygy_map(g)
    return g


def omega_period(M: ModuleRep, bound: int) -> Optional[int]:
    """Smallest n <= bound with Omega^n M isomorphic to M (projective part removed)."""
    from decomp import is_isomorphic
    base = syzygy(M, 0)
    if base.dim == 0:
        return None
    cur = base
    for n in range(1, bound + 1):
        cur = syzygy(cur, 1)
        if cur.dim == base.dim and is_isomorphic(cur, base):
            return n
    return None


# --- stable Hom and Ext ------------------------------------------------------

def _factoring_span(hull_matrix: np.ndarray, t: int, target: ModuleRep) -> np.ndarray:
    """vec of the maps W -> A^t -> target for e_j -> target basis vectors."""
    nW = hull_matrix.shape[1]
    nT = target.dim
    if t == 0 or nT == 0 or nW == 0:
        return linalg.zeros(nT * nW, 0)
    dA = target.algebra.dimension
    T = _monomial_stack(target)  # (e, a, l)
    Hr = hull_matrix.reshape(t, dA, nW)
    C = np.tensordot(T, Hr, axes=([0], [1])) % target.p  # (a, l, j, w)
    return C.transpose(3, 0, 1, 2).reshape(nW * nT, nT * t)


def factoring_span(W: ModuleRep, M: ModuleRep) -> np.ndarray:
    """Columns spanning (as vec) the maps W -> M that factor through a projective."""
    hull = injective_hull(W)
    return _factoring_span(hull.matrix, hull.t, M)


def stable_hom_dim(W: ModuleRep, M: ModuleRep) -> int:
    """d_W(M): dim Hom(W, M) minus the maps factoring through projectives."""
    memo = W.memo.setdefault("stable_hom", {})
    key = M.digest()
    if key in memo:
        return memo[key]
    H = hom_space(W, M)
    d = 0
    if H.dim:
        d = H.dim - linalg.rank(factoring_span(W, M), W.p)
    memo[key] = d
    return d


def ext_dim(M: ModuleRep, N: ModuleRep, n: int) -> int:
    if n < 1:
        raise ValueError("Ext degree must be positive")
    return stable_hom_dim(syzygy(M, n), N)


def ext_dim_via_cosyzygy(L: ModuleRep, W: ModuleRep) -> int:
    """dim Ext^1(L, W) as stable maps L -> Omega^{-1} W."""
    return stable_hom_dim(L, syzygy(W, -1))


def induced_ext_map_rank(g: ModuleMap, W: ModuleRep, n: int) -> int:
    """Rank of Ext^n(g, W): Ext^n(Y, W) -> Ext^n(X, W) for g: X -> Y (n = 0 is Hom)."""
    p = g.p
    if n == 0:
        H = hom_space(g.target, W)
        if H.dim == 0 or g.source.dim == 0:
            return 0
        return linalg.rank(_vec_stack(H.matrices @ g.matrix % p), p)
    Z = omega_map(g, n)
    H = hom_space(Z.target, W)
    if H.dim == 0 or Z.source.dim == 0:
        return 0
    images = _vec_stack(H.matrices @ Z.matrix % p)
    P = factoring_span(Z.source, W)
    return linalg.rank(np.concatenate([images, P], axis=1), p) - linalg.rank(P, p)


def _stably_zero_after(g: ModuleMap, W: ModuleRep) -> bool:
    """f o g factors through a projective for every f: target(g) -> W."""
    p = g.p
    H = hom_space(g.target, W)
    if H.dim == 0 or g.source.dim == 0:
        return True
    images = _vec_stack(H.matrices @ g.matrix % p)
    P = factoring_span(g.source, W)
    return linalg.rank(np.concatenate([P, images], axis=1), p) == linalg.rank(P, p)


def exists_monomorphism(L: ModuleRep, X: ModuleRep, seed: int = 0,
                        trials: int = 32) -> Tuple[bool, Optional[ModuleMap]]:
    """Search Hom(L, X) for a map injective on soc L (hence injective)."""
    p = L.p
    if L.dim == 0:
        return True, ModuleMap(L, X, linalg.zeros(X.dim, 0))
    H = hom_space(L, X)
    if H.dim == 0:
        return False, None
    S = socle(L).basis
    t = S.shape[1]
    for F in H.matrices:
        if linalg.rank(F @ S % p, p) == t:
            return True, ModuleMap(L, X, F)
    rng = np.random.default_rng(derive_seed(seed, "monomorphism", L.digest(), X.digest()))
    for _ in range(trials):
        F = H.combination(rng.integers(0, p, size=H.dim))
        if linalg.rank(F @ S % p, p) == t:
            return True, ModuleMap(L, X, F)
    return False, None


# --- extensions ------------------------------------------------------------------

@dataclass(eq=False)
class ShortExactSequence:
    left: ModuleRep
    middle: ModuleRep
    right: ModuleRep
    inject: ModuleMap
    surject: ModuleMap

    def check(self) -> bool:
        p = self.middle.p
        return (self.inject.is_intertwiner() and self.surject.is_intertwiner()
                and self.inject.is_injective() and self.surject.is_surjective()
                and linalg.is_zero(self.surject.matrix @ self.inject.matrix % p)
                and self.middle.dim == self.left.dim + self.right.dim)


def extension_from_cocycle(N: ModuleRep, W: ModuleRep,
                           f: Union[ModuleMap, np.ndarray]) -> ShortExactSequence:
    """0 -> W -> E -> N -> 0 with E the pushout of W <- Omega N -> A^beta along f."""
    p = N.p
    cov = projective_cover(N)
    F = f.matrix if isinstance(f, ModuleMap) else np.asarray(f, dtype=np.int64)
    if F.shape != (W.dim, cov.syzygy.dim):
        raise AlgebraMismatch(f"cocycle of shape {F.shape}, expected {(W.dim, cov.syzygy.dim)}")
    total = direct_sum(W, cov.free)
    S = np.concatenate([F % p, (-cov.kernel) % p], axis=0)
    E, proj, C = quotient_with_complement(total, S)
    inject = ModuleMap(W, E, proj.matrix[:, :W.dim].copy())
    lift = np.concatenate([linalg.zeros(N.dim, W.dim), cov.map.matrix], axis=1)
    surject = ModuleMap(E, N, lift @ C % p)
    logger.debug("extension of %d-dim by %d-dim: middle dim %d", N.dim, W.dim, E.dim)
    return ShortExactSequence(W, E, N, inject, surject)


def is_split(seq: ShortExactSequence) -> Optional[ModuleMap]:
    """A section s of the surjection (surject o s = id), or None when none exists."""
    p = seq.middle.p
    n = seq.right.dim
    if n == 0:
        return ModuleMap(seq.right, seq.middle, linalg.zeros(seq.middle.dim, 0))
    H = hom_space(seq.right, seq.middle)
    if H.dim == 0:
        return None
    images = _vec_stack(seq.surject.matrix @ H.matrices % p)
    c = linalg.solve(images, linalg.vec(linalg.identity(n)), p)
    if c is None:
        return None
    return ModuleMap(seq.right, seq.middle, H.combination(c))


def image_hom_restriction_dim(seq: ShortExactSequence, W: ModuleRep) -> int:
    """dim of the image of Hom(middle, W) -> Hom(left, W)."""
    return induced_ext_map_rank(seq.inject, W, 0)


@dataclass
class LESReport:
    table: pd.DataFrame
    failures: List[str]

    @property
    def consistent(self) -> bool:
        return not self.failures

    def connecting_ranks(self) -> List[int]:
        rows = self.table[self.table["position"] == "left"]
        return [int(r) for r in rows["rank_out"]]


def les_dimension_check(seq: ShortExactSequence, W: ModuleRep, degree: int = 2) -> LESReport:
    """Dimension bookkeeping of the long exact sequence of Ext(-, W) up to Ext^degree.

    For 0 -> L -> M -> N -> 0 the terms run Hom(N,W), Hom(M,W), Hom(L,W),
    Ext^1(N,W), ... with ranks of the maps induced by the surjection, the
    injection, and the connecting maps (inferred from exactness on the left).
    """
    terms = (("right", seq.right), ("middle", seq.middle), ("left", seq.left))

    def dim_at(X: ModuleRep, n: int) -> int:
        return hom_space(X, W).dim if n == 0 else ext_dim(X, W, n)

    failures: List[str] = []
    rows = []
    dims = {}
    alpha = {}
    beta = {}
    for n in range(degree + 1):
        for name, X in terms:
            dims[(name, n)] = dim_at(X, n)
        alpha[n] = induced_ext_map_rank(seq.surject, W, n)
        beta[n] = induced_ext_map_rank(seq.inject, W, n)
    for n in range(degree + 1):
        delta = dims[("left", n)] - beta[n]
        rows.append({"term": f"Ext^{n}(N,W)", "degree": n, "position": "right",
                     "dim": dims[("right", n)], "rank_out": alpha[n]})
        rows.append({"term": f"Ext^{n}(M,W)", "degree": n, "position": "middle",
                     "dim": dims[("middle", n)], "rank_out": beta[n]})
        rows.append({"term": f"Ext^{n}(L,W)", "degree": n, "position": "left",
                     "dim": dims[("left", n)], "rank_out": delta})
        if n == 0 and alpha[0] != dims[("right", 0)]:
            failures.append("Hom(N,W) -> Hom(M,W) is not injective")
        if alpha[n] + beta[n] != dims[("middle", n)]:
            failures.append(f"not exact at Ext^{n}(M,W): {alpha[n]} + {beta[n]} != {dims[('middle', n)]}")
        if n < degree and delta != dims[("right", n + 1)] - alpha[n + 1]:
            failures.append(f"not exact at Ext^{n + 1}(N,W)")
        if n and not _stably_zero_after(omega_map(seq.surject, n).compose(omega_map(seq.inject, n)), W):
            failures.append(f"composite Ext^{n}(N,W) -> Ext^{n}(L,W) is nonzero")
    table = pd.DataFrame(rows, columns=["term", "degree", "position", "dim", "rank_out"])
    signs = np.array([(-1) ** i for i in range(len(table))])
    alternating = int((signs * table["dim"].to_numpy()).sum())
    last = len(table) - 1
    if alternating != (-1) ** last * int(table["rank_out"].iloc[-1]):
        failures.append(f"alternating sum {alternating} does not match the outgoing rank")
    return LESReport(table, failures)
