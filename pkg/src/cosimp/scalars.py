"""Exact scalar fields and small vector helpers.

Two fields share one interface: the rationals (backed by gmpy2.mpq) and a
prime field Z/p used for cross-checking.  Field elements support the usual
arithmetic operators, so the linear algebra elsewhere is written once.
"""
from __future__ import annotations

import random as _random
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

Vector = tuple


class Field:
    name = "field"

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def to_json(self, x) -> str:
        raise NotImplementedError

    def random(self, rng: _random.Random, bound: int = 3, nonzero: bool = False):
        while True:
            num = rng.randint(-bound, bound)
            den = rng.randint(1, 2) if self is QQ else 1
            x = self(Fraction(num, den)) if self is QQ else self(num)
            if not nonzero or x != 0:
                return x


class RationalField(Field):
    name = "QQ"

    def __call__(self, x):
        if isinstance(x, str):
            return mpq(x)
        if isinstance(x, Fraction):
            return mpq(x.numerator, x.denominator)
        if isinstance(x, ModP):
            raise TypeError("cannot coerce a Z/p element into QQ")
        return mpq(x)

    def to_json(self, x) -> str:
        x = mpq(x)
        return f"{x.numerator}/{x.denominator}"

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class ModP:
    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError("mixed characteristics")
            return other.v
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in Z/%d" % self.p)
        return ModP(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        return ModP(self._coerce(other), self.p) / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v} mod {self.p}"


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"GF({p})"

    def __call__(self, x):
        if isinstance(x, ModP):
            return ModP(x.v, self.p)
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction) or type(x).__name__ == "mpq":
            return ModP(int(x.numerator), self.p) / int(x.denominator)
        return ModP(int(x), self.p)

    def to_json(self, x) -> str:
        return f"{self(x).v}/1"

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


def field_from_name(name: str) -> Field:
    if name in ("QQ", "rationals", "Q"):
        return QQ
    if name.startswith("GF(") and name.endswith(")"):
        return PrimeField(int(name[3:-1]))
    if name.isdigit():
        return PrimeField(int(name))
    raise ValueError(f"unknown field {name!r}")


# --- vectors as tuples -------------------------------------------------------

def zeros(field: Field, n: int) -> Vector:
    z = field.zero
    return (z,) * n


def unit(field: Field, n: int, i: int) -> Vector:
    v = [field.zero] * n
    v[i] = field.one
    return tuple(v)


def vadd(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a: Sequence, b: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vscale(c, a: Sequence) -> Vector:
    return tuple(c * x for x in a)


def vneg(a: Sequence) -> Vector:
    return tuple(-x for x in a)


def is_zero(a: Iterable) -> bool:
    return all(x == 0 for x in a)


def vsum(vectors: Iterable[Sequence], n: int, field: Field) -> Vector:
    acc = [field.zero] * n
    for v in vectors:
        for i, x in enumerate(v):
            if x:
                acc[i] += x
    return tuple(acc)


def lincomb(coeffs: Sequence, vectors: Sequence[Sequence], n: int, field: Field) -> Vector:
    acc = [field.zero] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i, x in enumerate(v):
                if x:
                    acc[i] += c * x
    return tuple(acc)
