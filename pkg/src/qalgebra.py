#!/usr/bin/env python3
"""Quantum complete intersections k<x_1..x_c>/(x_i^{a_i}, x_i x_j - q_ij x_j x_i).

Basis: monomials x_1^{e_1} ... x_c^{e_c}, 0 <= e_i < a_i, in graded-lex order
(degree first, then x_1 before x_2 before ...). The algebra is local and
Frobenius; the form picks the coefficient of the top monomial.
"""

import hashlib
import itertools
import json
import logging
from dataclasses import dataclass
from functools import lru_cache, reduce
from math import lcm, prod
from typing import Dict, List, Optional, Tuple

import numpy as np
import sympy

import linalg
from errors import (AlgebraMismatch, BadCommutationMatrix, ConfigError, DegenerateForm,
                    NotAutomorphism, NotDiagonal, NotHomogeneous, StructureMismatch)
from scalars import Field, Scalar, make_field, primitive_root_of_unity, root_order

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]

# full associativity oracle is run up to this dimension at build time
ORACLE_LIMIT = 256


@dataclass(frozen=True)
class AlgebraConfig:
    field: Field
    c: int
    exponents: Tuple[int, ...]
    commutation: Tuple[Tuple[int, ...], ...]

    @property
    def p(self) -> int:
        return self.field.p

    def q(self, i: int, j: int) -> int:
        return self.commutation[i][j]

    def validate(self):
        if self.c < 2 or len(self.exponents) != self.c:
            raise BadCommutationMatrix(0, 0, f"need c >= 2 exponents, got {list(self.exponents)}")
        if any(a < 2 for a in self.exponents):
            raise BadCommutationMatrix(0, 0, "exponents must be >= 2")
        if len(self.commutation) != self.c or any(len(row) != self.c for row in self.commutation):
            raise BadCommutationMatrix(0, 0, "commutation matrix must be c x c")
        p = self.p
        for i in range(self.c):
            if self.commutation[i][i] % p != 1:
                raise BadCommutationMatrix(i, i, "diagonal entry must be 1")
            for j in range(i + 1, self.c):
                if (self.commutation[i][j] * self.commutation[j][i]) % p != 1:
                    raise BadCommutationMatrix(
                        i, j, f"q_ij * q_ji = {self.commutation[i][j] * self.commutation[j][i] % p} != 1")

    @property
    def homogeneous(self) -> bool:
        if len(set(self.exponents)) != 1:
            return False
        upper = {self.commutation[i][j] for i in range(self.c) for j in range(i + 1, self.c)}
        if len(upper) != 1:
            return False
        q = upper.pop()
        b = root_order(self.exponents[0], self.p)
        return (self.p - 1) % b == 0 and sympy.n_order(q, self.p) == b

    @property
    def a(self) -> int:
        """Common exponent; rank-variety machinery needs all a_i equal."""
        if len(set(self.exponents)) != 1:
            raise NotHomogeneous(f"exponents {list(self.exponents)} are not all equal")
        return self.exponents[0]

    def to_dict(self) -> Dict:
        return {
            "p": self.p,
            "c": self.c,
            "exponents": list(self.exponents),
            "commutation": [list(row) for row in self.commutation],
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def homogeneous_config(p: int, c: int, a: int, b: Optional[int] = None) -> AlgebraConfig:
    """Uniform exponents a and q_ij = q (i < j) for the smallest primitive b-th root q."""
    field = make_field(p)
    if b is None:
        b = root_order(a, p)
    q = primitive_root_of_unity(field, b)
    qinv = q.inverse()
    rows = []
    for i in range(c):
        rows.append(tuple(1 if i == j else (q.value if i < j else qinv.value) for j in range(c)))
    return AlgebraConfig(field, c, tuple([a] * c), tuple(rows))


def config_from_dict(d: Dict) -> AlgebraConfig:
    """Full form {p, c, exponents, commutation} or shorthand {p, c, a, root_order}."""
    try:
        p = int(d["p"])
        c = int(d["c"])
        if "commutation" in d:
            field = make_field(p)
            exps = tuple(int(x) for x in d["exponents"])
            comm = tuple(tuple(int(x) % p for x in row) for row in d["commutation"])
            config = AlgebraConfig(field, c, exps, comm)
        else:
            b = d.get("root_order")
            config = homogeneous_config(p, c, int(d["a"]), None if b is None else int(b))
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"malformed algebra config: {e}") from e
    config.validate()
    return config


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    algebra: "Algebra"
    coefficients: np.ndarray

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return multiply(self.algebra, self, other)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(self.algebra, (self.coefficients + other.coefficients) % self.algebra.p)

    def scale(self, s: int) -> "AlgebraElement":
        return AlgebraElement(self.algebra, (self.coefficients * int(s)) % self.algebra.p)

    def power(self, n: int) -> "AlgebraElement":
        result = self.algebra.one()
        for _ in range(n):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return linalg.is_zero(self.coefficients)

    def coefficient(self, e: Exponent) -> int:
        return int(self.coefficients[self.algebra.index[tuple(e)]])

    def __repr__(self):
        terms = []
        for k, e in enumerate(self.algebra.basis):
            v = int(self.coefficients[k])
            if v:
                mono = "".join(f"x{i + 1}" + (f"^{x}" if x > 1 else "") for i, x in enumerate(e) if x) or "1"
                terms.append(f"{v}*{mono}")
        return " + ".join(terms) or "0"


class Algebra:
    def __init__(self, config: AlgebraConfig):
        self.config = config
        self.p = config.p
        self.c = config.c
        ranges = [range(a) for a in config.exponents]
        self.basis: List[Exponent] = sorted(itertools.product(*ranges),
                                            key=lambda e: (sum(e), tuple(-x for x in e)))
        self.index: Dict[Exponent, int] = {e: k for k, e in enumerate(self.basis)}
        self.dimension = prod(config.exponents)
        self.top: Exponent = tuple(a - 1 for a in config.exponents)
        self.top_index = self.index[self.top]
        n = self.dimension
        self.product_index = np.full((n, n), -1, dtype=np.int64)
        self.product_scalar = np.zeros((n, n), dtype=np.int64)
        for i, e in enumerate(self.basis):
            for j, f in enumerate(self.basis):
                res = self.monomial_product(e, f)
                if res is not None:
                    s, g = res
                    self.product_index[i, j] = self.index[g]
                    self.product_scalar[i, j] = s
        self._nakayama: Optional["AlgebraAutomorphism"] = None
        self._gram: Optional[np.ndarray] = None

    def __eq__(self, other):
        return isinstance(other, Algebra) and self.config == other.config

    def __hash__(self):
        return hash(self.config)

    def __repr__(self):
        return f"Algebra(p={self.p}, c={self.c}, exponents={list(self.config.exponents)}, dim={self.dimension})"

    def digest(self) -> str:
        return self.config.digest()

    # --- monomials ----------------------------------------------------------

    def monomial_product(self, e: Exponent, f: Exponent) -> Optional[Tuple[int, Exponent]]:
        """x^e x^f = (prod_{i>j} q_ij^{e_i f_j}) x^{e+f}, or None when some e_i + f_i >= a_i."""
        g = tuple(x + y for x, y in zip(e, f))
        if any(x >= a for x, a in zip(g, self.config.exponents)):
            return None
        s = 1
        for i in range(self.c):
            if not e[i]:
                continue
            for j in range(i):
                if f[j]:
                    s = s * pow(self.config.q(i, j), e[i] * f[j], self.p) % self.p
        return s, g

    def _generator_move(self, i: int, f: Exponent) -> Optional[Tuple[int, Exponent]]:
        if f[i] + 1 >= self.config.exponents[i]:
            return None
        s = 1
        for j in range(i):
            s = s * pow(self.config.q(i, j), f[j], self.p) % self.p
        g = list(f)
        g[i] += 1
        return s, tuple(g)

    def oracle_product(self, e: Exponent, f: Exponent) -> Optional[Tuple[int, Exponent]]:
        """x^e x^f by pushing the generators of x^e onto x^f one at a time, right to left."""
        s, cur = 1, tuple(f)
        for i in reversed(range(self.c)):
            for _ in range(e[i]):
                step = self._generator_move(i, cur)
                if step is None:
                    return None
                s = s * step[0] % self.p
                cur = step[1]
        return s, cur

    def check_structure(self) -> bool:
        """Structure constants agree with the single-generator oracle on every basis pair."""
        for e in self.basis:
            for f in self.basis:
                if self.monomial_product(e, f) != self.oracle_product(e, f):
                    logger.error("structure constant mismatch at %s * %s", e, f)
                    return False
        return True

    def check_associativity(self) -> bool:
        """(x^e x^f) x^g = x^e (x^f x^g) on the full basis."""
        n = self.dimension
        for i in range(n):
            for j in range(n):
                k1 = self.product_index[i, j]
                s1 = self.product_scalar[i, j]
                for k in range(n):
                    if k1 < 0:
                        left = None
                    else:
                        m = self.product_index[k1, k]
                        left = None if m < 0 else (int(m), s1 * self.product_scalar[k1, k] % self.p)
                    k2 = self.product_index[j, k]
                    if k2 < 0:
                        right = None
                    else:
                        m = self.product_index[i, k2]
                        right = None if m < 0 else (int(m), self.product_scalar[j, k] * self.product_scalar[i, k2] % self.p)
                    if left != right:
                        return False
        return True

    # --- elements -------------------------------------------------------------

    def element(self, coefficients) -> AlgebraElement:
        v = linalg.mod_p(coefficients, self.p).reshape(-1)
        if v.shape[0] != self.dimension:
            raise AlgebraMismatch(f"element of length {v.shape[0]} in algebra of dimension {self.dimension}")
        return AlgebraElement(self, v)

    def monomial(self, e: Exponent) -> AlgebraElement:
        v = np.zeros(self.dimension, dtype=np.int64)
        v[self.index[tuple(e)]] = 1
        return AlgebraElement(self, v)

    def one(self) -> AlgebraElement:
        return self.monomial(tuple([0] * self.c))

    def generator(self, i: int) -> AlgebraElement:
        e = [0] * self.c
        e[i] = 1
        return self.monomial(tuple(e))

    def left_multiplication(self, u: AlgebraElement) -> np.ndarray:
        """Matrix of v -> u v on the monomial basis."""
        n = self.dimension
        L = np.zeros((n, n), dtype=np.int64)
        for i in np.flatnonzero(u.coefficients):
            for j in range(n):
                k = self.product_index[i, j]
                if k >= 0:
                    L[k, j] = (L[k, j] + u.coefficients[i] * self.product_scalar[i, j]) % self.p
        return L

    # --- Frobenius data -----------------------------------------------------

    def gram(self) -> np.ndarray:
        if self._gram is None:
            G = np.where(self.product_index == self.top_index, self.product_scalar, 0).astype(np.int64)
            if linalg.rank(G, self.p) != self.dimension:
                raise DegenerateForm("Frobenius form is degenerate")
            self._gram = G
        return self._gram


def multiply(algebra: Algebra, u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    if u.algebra != algebra or v.algebra != algebra:
        raise AlgebraMismatch("elements belong to different algebras")
    coeff = np.outer(u.coefficients, v.coefficients) % algebra.p * algebra.product_scalar % algebra.p
    mask = algebra.product_index >= 0
    out = np.zeros(algebra.dimension, dtype=np.int64)
    np.add.at(out, algebra.product_index[mask], coeff[mask])
    return AlgebraElement(algebra, out % algebra.p)


@lru_cache(maxsize=64)
def build_algebra(config: AlgebraConfig) -> Algebra:
    config.validate()
    algebra = Algebra(config)
    if algebra.dimension <= ORACLE_LIMIT and not algebra.check_structure():
        raise StructureMismatch("structure constants disagree with the generator oracle")
    logger.debug("built %r", algebra)
    return algebra


def regular_module(algebra: Algebra):
    """Left regular representation: X_i is left multiplication by x_i."""
    from modrep import ModuleRep
    actions = [algebra.left_multiplication(algebra.generator(i)) for i in range(algebra.c)]
    return ModuleRep(algebra, actions)


def frobenius_form(algebra: Algebra) -> np.ndarray:
    """Gram matrix of <u, v> = coefficient of the top monomial in u v."""
    return algebra.gram().copy()


@dataclass(frozen=True)
class AlgebraAutomorphism:
    """x_i -> s_i x_i; acts on x^e by prod s_i^{e_i}."""

    algebra: Algebra
    generator_scalars: Tuple[int, ...]

    def scalar_on(self, e: Exponent) -> int:
        p = self.algebra.p
        return reduce(lambda acc, t: acc * pow(t[0], t[1], p) % p, zip(self.generator_scalars, e), 1)

    def basis_action(self) -> np.ndarray:
        return np.diag([self.scalar_on(e) for e in self.algebra.basis]).astype(np.int64)

    def apply(self, u: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.basis_action() @ u.coefficients % self.algebra.p)

    def inverse(self) -> "AlgebraAutomorphism":
        p = self.algebra.p
        return AlgebraAutomorphism(self.algebra, tuple(pow(s, -1, p) for s in self.generator_scalars))

    def power(self, n: int) -> "AlgebraAutomorphism":
        p = self.algebra.p
        return AlgebraAutomorphism(self.algebra, tuple(pow(s, n, p) for s in self.generator_scalars))

    def compose(self, other: "AlgebraAutomorphism") -> "AlgebraAutomorphism":
        p = self.algebra.p
        return AlgebraAutomorphism(self.algebra, tuple(
            s * t % p for s, t in zip(self.generator_scalars, other.generator_scalars)))

    def is_identity(self) -> bool:
        return all(s == 1 for s in self.generator_scalars)

    def order(self) -> int:
        return int(reduce(lcm, (int(sympy.n_order(s, self.algebra.p)) for s in self.generator_scalars), 1))

    def is_multiplicative(self) -> bool:
        """phi(x^e x^f) = phi(x^e) phi(x^f) on every basis pair."""
        A = self.algebra
        for e in A.basis:
            for f in A.basis:
                res = A.monomial_product(e, f)
                if res is None:
                    continue
                if self.scalar_on(res[1]) != self.scalar_on(e) * self.scalar_on(f) % A.p:
                    return False
        return True


def nakayama_automorphism(algebra: Algebra) -> AlgebraAutomorphism:
    """The automorphism nu with <u, v> = <v, nu(u)>, solved from the Gram matrix."""
    if algebra._nakayama is not None:
        return algebra._nakayama
    p = algebra.p
    G = algebra.gram()
    # u^T G v = v^T G N u for all u, v  <=>  N = G^{-1} G^T
    N = linalg.matmul(linalg.inverse(G, p), G.T, p)
    off = N - np.diag(np.diag(N))
    if np.any(off):
        raise NotDiagonal("Nakayama automorphism is not diagonal on monomials")
    scalars = []
    for i in range(algebra.c):
        k = algebra.index[tuple(1 if j == i else 0 for j in range(algebra.c))]
        scalars.append(int(N[k, k]))
    nu = AlgebraAutomorphism(algebra, tuple(scalars))
    if not np.array_equal(nu.basis_action(), N) or not nu.is_multiplicative():
        raise NotAutomorphism("solved Nakayama map is not the induced algebra automorphism")
    algebra._nakayama = nu
    logger.debug("Nakayama scalars %s of order %d", scalars, nu.order())
    return nu


def opposite_algebra(algebra: Algebra) -> Algebra:
    cfg = algebra.config
    comm = tuple(tuple(cfg.commutation[j][i] for j in range(cfg.c)) for i in range(cfg.c))
    return build_algebra(AlgebraConfig(cfg.field, cfg.c, cfg.exponents, comm))


def is_wild(config: AlgebraConfig) -> bool:
    """Everything except two generators with both exponents 2 is wild."""
    return config.c >= 3 or max(config.exponents) >= 3
