#!/usr/bin/env python3
"""Rank varieties and Jordan types along the cyclic subalgebras k[u_lambda].

u_lambda = lambda_1 x_1 + ... + lambda_c x_c satisfies u_lambda^a = 0, so a
module restricts to a k[u]/(u^a)-module; its Jordan type counts blocks of each
size. A direction lies in the rank variety when some block is shorter than a.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

import linalg
from errors import BlockOutOfRange, InternalError, NotDivisible, ZeroPoint
from homology import ext_dim, free_module
from modrep import ModuleRep, Submodule, quotient, submodule_generated
from qalgebra import Algebra, AlgebraElement
from scalars import derive_seed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RankPoint:
    lambdas: Tuple[int, ...]
    p: int

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(int(x) % self.p for x in self.lambdas))

    def is_zero(self) -> bool:
        return not any(self.lambdas)

    def scaled(self, t: int) -> "RankPoint":
        return RankPoint(tuple(t * x for x in self.lambdas), self.p)

    def normalized(self) -> "RankPoint":
        """Representative of the line with first nonzero coordinate 1."""
        for x in self.lambdas:
            if x:
                return self.scaled(pow(x, -1, self.p))
        return self

    def __repr__(self):
        return f"RankPoint({list(self.lambdas)} mod {self.p})"


def rank_point(algebra: Algebra, lambdas: Sequence[int]) -> RankPoint:
    if len(lambdas) != algebra.c:
        raise ValueError(f"expected {algebra.c} coordinates, got {len(lambdas)}")
    return RankPoint(tuple(lambdas), algebra.p)


@dataclass(frozen=True)
class JordanType:
    """multiplicities[i - 1] = number of Jordan blocks of size i."""

    multiplicities: Tuple[int, ...]

    @property
    def a(self) -> int:
        return len(self.multiplicities)

    def total_dim(self) -> int:
        return sum((i + 1) * n for i, n in enumerate(self.multiplicities))

    def is_free(self) -> bool:
        return not any(self.multiplicities[:-1])

    def blocks(self) -> List[int]:
        out = []
        for i, n in enumerate(self.multiplicities):
            out.extend([i + 1] * n)
        return sorted(out, reverse=True)

    def __add__(self, other: "JordanType") -> "JordanType":
        if self.a != other.a:
            raise ValueError("Jordan types over different truncations")
        return JordanType(tuple(x + y for x, y in zip(self.multiplicities, other.multiplicities)))

    def to_dict(self) -> Dict[str, int]:
        return {str(i + 1): n for i, n in enumerate(self.multiplicities)}


def u_element(algebra: Algebra, lam: RankPoint) -> AlgebraElement:
    u = algebra.element(np.zeros(algebra.dimension, dtype=np.int64))
    for i, x in enumerate(lam.lambdas):
        if x:
            u = u + algebra.generator(i).scale(x)
    return u


def u_action(M: ModuleRep, lam: RankPoint) -> np.ndarray:
    p = M.p
    U = linalg.zeros(M.dim, M.dim)
    for x, X in zip(lam.lambdas, M.actions):
        U = (U + x * X) % p
    return U


def jordan_type(M: ModuleRep, lam: RankPoint) -> JordanType:
    """n_i = rank U^{i-1} - 2 rank U^i + rank U^{i+1}."""
    a = M.algebra.config.a
    if lam.is_zero():
        raise ZeroPoint()
    p = M.p
    U = u_action(M, lam)
    ranks = [M.dim]
    P = linalg.identity(M.dim)
    for _ in range(a + 1):
        P = P @ U % p
        ranks.append(linalg.rank(P, p))
    if ranks[a]:
        raise ValueError("u_lambda^a does not act as zero")
    mult = tuple(ranks[i - 1] - 2 * ranks[i] + ranks[i + 1] for i in range(1, a + 1))
    jt = JordanType(mult)
    if jt.total_dim() != M.dim:
        raise ValueError(f"Jordan type {mult} does not add up to dim {M.dim}")
    return jt


restrict_to_point = jordan_type


def rank_variety_contains(M: ModuleRep, lam: RankPoint) -> bool:
    """lambda = 0, or M restricted to k[u_lambda] is not free."""
    if lam.is_zero():
        return True
    a = M.algebra.config.a
    r = linalg.rank(u_action(M, lam), M.p)
    threshold = (a - 1) * M.dim
    # free over k[u]/(u^a) iff a rank U = (a - 1) dim M
    if a * r == threshold and M.dim % a:
        raise NotDivisible(f"rank threshold met but {a} does not divide dim {M.dim}")
    member = a * r < threshold
    if member == jordan_type(M, lam).is_free():
        raise InternalError("rank test disagrees with the block count")
    return member


# --- principal and induced modules ----------------------------------------------

def _ideal(algebra: Algebra, u: AlgebraElement) -> Submodule:
    R = free_module(algebra, 1)
    return submodule_generated(R, u.coefficients.reshape(-1, 1))


def principal_submodule(algebra: Algebra, lam: RankPoint, s: int = 1) -> Submodule:
    """A u_lambda^s inside the regular module."""
    a = algebra.config.a
    if lam.is_zero():
        raise ZeroPoint()
    if not 1 <= s <= a - 1:
        raise BlockOutOfRange(f"power {s} outside 1..{a - 1}")
    return _ideal(algebra, u_element(algebra, lam).power(s))


def principal_module(algebra: Algebra, lam: RankPoint, s: int = 1) -> ModuleRep:
    return principal_submodule(algebra, lam, s).as_module()


def induce_from_point(algebra: Algebra, lam: RankPoint, i: int) -> ModuleRep:
    """A (x)_{k[u]} k[u]/(u^i): the cyclic module A/A u_lambda^i, of dim i a^{c-1}."""
    a = algebra.config.a
    if lam.is_zero():
        raise ZeroPoint()
    if not 1 <= i <= a:
        raise BlockOutOfRange(f"block size {i} outside 1..{a}")
    R = free_module(algebra, 1)
    if i == a:
        return R
    S = _ideal(algebra, u_element(algebra, lam).power(i))
    return quotient(R, S)[0]


# --- the truncated polynomial ring k[x]/(x^a) ----------------------------------

def truncated_ext_dim(i: int, j: int, a: int) -> int:
    """dim Ext^1 between the blocks M_i and M_j over k[x]/(x^a)."""
    if not (1 <= i <= a and 1 <= j <= a):
        raise BlockOutOfRange(f"blocks ({i}, {j}) outside 1..{a}")
    return min(i, j, a - i, a - j)


def truncated_syzygy(i: int, a: int) -> int:
    """Omega M_i = M_{a-i}; 0 stands for the zero module."""
    if not 1 <= i <= a:
        raise BlockOutOfRange(f"block {i} outside 1..{a}")
    return a - i


def eckmann_shapiro_dims(algebra: Algebra, lam: RankPoint, i: int, L: ModuleRep) -> Tuple[int, int]:
    """(dim Ext^1_A(A (x) M_i, L), dim Ext^1_{k[u]}(M_i, L restricted)); equal by Eckmann-Shapiro."""
    a = algebra.config.a
    lhs = ext_dim(induce_from_point(algebra, lam, i), L, 1)
    jt = jordan_type(L, lam)
    rhs = sum(n * truncated_ext_dim(i, j + 1, a) for j, n in enumerate(jt.multiplicities))
    return lhs, rhs


# --- probing ------------------------------------------------------------------

@dataclass
class ProbeReport:
    module: str
    strategy: str
    directions: List[RankPoint]
    members: List[RankPoint]
    jordan_types: Dict[Tuple[int, ...], JordanType]
    homogeneity_ok: bool
    violations: List[RankPoint] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "module": self.module,
            "strategy": self.strategy,
            "members": [list(m.lambdas) for m in self.members],
            "jordan_types": {",".join(map(str, k)): jt.to_dict() for k, jt in self.jordan_types.items()},
            "homogeneity_ok": self.homogeneity_ok,
        }

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for d in self.directions:
            jt = self.jordan_types[d.lambdas]
            rows.append({"direction": list(d.lambdas), "blocks": jt.blocks(),
                         "member": not jt.is_free()})
        return pd.DataFrame(rows, columns=["direction", "blocks", "member"])


def projective_line(p: int) -> List[RankPoint]:
    """All p + 1 directions of P^1(F_p): (1, t) and (0, 1)."""
    return [RankPoint((1, t), p) for t in range(p)] + [RankPoint((0, 1), p)]


def random_point(algebra: Algebra, rng: np.random.Generator) -> RankPoint:
    while True:
        lam = RankPoint(tuple(int(x) for x in rng.integers(0, algebra.p, size=algebra.c)), algebra.p)
        if not lam.is_zero():
            return lam


def probe_variety(M: ModuleRep, strategy: str = "line_scan_c2", samples: int = 64,
                  seed: int = 0) -> ProbeReport:
    algebra = M.algebra
    p = M.p
    rng = np.random.default_rng(derive_seed(seed, "probe", M.digest(), strategy))
    if strategy == "line_scan_c2":
        if algebra.c != 2:
            raise ValueError("line scan needs c = 2; use the random strategy")
        directions = projective_line(p)
    elif strategy == "random":
        seen = {}
        for _ in range(samples):
            lam = random_point(algebra, rng).normalized()
            seen.setdefault(lam.lambdas, lam)
        directions = [seen[k] for k in sorted(seen)]
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    jts = {}
    members = []
    violations = []
    for lam in directions:
        jt = jordan_type(M, lam)
        jts[lam.lambdas] = jt
        inside = rank_variety_contains(M, lam)
        if inside:
            members.append(lam)
        t = int(rng.integers(1, p))
        if rank_variety_contains(M, lam.scaled(t)) != inside:
            violations.append(lam)
    logger.debug("probe of %d-dim module: %d of %d directions are members",
                 M.dim, len(members), len(directions))
    return ProbeReport(M.digest()[:16], strategy, directions, members, jts, not violations, violations)
