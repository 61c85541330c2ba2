#!/usr/bin/env python3
"""Prime-field arithmetic and roots of unity."""

import hashlib
import logging
from dataclasses import dataclass
from math import gcd
from typing import Any

import sympy

from errors import NotPrime, NoSuchRoot

logger = logging.getLogger(__name__)

DEFAULT_PRIME_FLOOR = 101


@dataclass(frozen=True)
class Scalar:
    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, Scalar):
            if other.p != self.p:
                raise ValueError(f"scalars over F_{self.p} and F_{other.p} do not mix")
            return other.value
        return int(other) % self.p

    def __add__(self, other):
        return Scalar(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return Scalar(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return Scalar(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(-self.value, self.p)

    def __pow__(self, n: int):
        return Scalar(pow(self.value, n, self.p), self.p)

    def inverse(self) -> "Scalar":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return Scalar(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * Scalar(self._coerce(other), self.p).inverse()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


@dataclass(frozen=True)
class Field:
    p: int

    def __call__(self, value: int) -> Scalar:
        return Scalar(value, self.p)

    @property
    def zero(self) -> Scalar:
        return Scalar(0, self.p)

    @property
    def one(self) -> Scalar:
        return Scalar(1, self.p)

    def elements(self):
        return (Scalar(v, self.p) for v in range(self.p))


def make_field(p: int) -> Field:
    if p < 2 or not sympy.isprime(p):
        raise NotPrime(p)
    return Field(int(p))


def primitive_root_of_unity(field: Field, b: int) -> Scalar:
    """Smallest q in F_p of exact multiplicative order b."""
    p = field.p
    if b < 1 or (p - 1) % b != 0:
        raise NoSuchRoot(p, b)
    if b == 1:
        return field.one
    for q in range(2, p):
        if sympy.n_order(q, p) == b:
            return field(q)
    raise NoSuchRoot(p, b)


def root_order(a: int, p: int) -> int:
    """b = a / gcd(a, char k): the order of the commutator in the homogeneous setup."""
    return a // gcd(a, p)


def default_prime(a: int) -> int:
    """Smallest prime p >= 101 with p = 1 (mod a) and gcd(p, a) = 1, so that b = a."""
    p = sympy.nextprime(DEFAULT_PRIME_FLOOR - 1)
    while (p - 1) % a != 0 or gcd(p, a) != 1:
        p = sympy.nextprime(p)
    logger.debug("default prime for a=%d is %d", a, p)
    return int(p)


def derive_seed(master: int, operation: str, *parts: Any) -> int:
    """Stable per-call seed from (master, operation, input digests)."""
    h = hashlib.sha256()
    h.update(str(int(master)).encode())
    h.update(b"|" + operation.encode())
    for part in parts:
        h.update(b"|" + str(part).encode())
    return int.from_bytes(h.digest()[:8], "big")
