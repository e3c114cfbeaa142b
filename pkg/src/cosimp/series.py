"""Truncated polynomials K[h]/(h^N) with coefficients in an ambient module.

Coefficients may be scalars, tuples (coordinate vectors or matrices as tuples
of rows) or dicts of those.  Addition is structural; multiplication needs a
bilinear product, which defaults to scalar multiplication.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Sequence


def add(a, b):
    if isinstance(a, tuple):
        return tuple(add(x, y) for x, y in zip(a, b, strict=True))
    if isinstance(a, dict):
        out = dict(a)
        for k, v in b.items():
            out[k] = add(out[k], v) if k in out else v
        return out
    return a + b


def scale(c, a):
    if isinstance(a, tuple):
        return tuple(scale(c, x) for x in a)
    if isinstance(a, dict):
        return {k: scale(c, v) for k, v in a.items()}
    return c * a


def neg(a):
    return scale(-1, a)


def sub(a, b):
    return add(a, neg(b))


def iszero(a) -> bool:
    if isinstance(a, tuple):
        return all(iszero(x) for x in a)
    if isinstance(a, dict):
        return all(iszero(v) for v in a.values())
    return a == 0


def zero_like(a):
    return scale(0, a)


@dataclass(frozen=True)
class TruncatedSeries:
    """An element c_0 + c_1 h + ... + c_{N-1} h^{N-1} of M[h]/(h^N)."""

    order: int
    coeffs: tuple

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("truncation order must be positive")
        if len(self.coeffs) != self.order:
            raise ValueError(f"expected {self.order} coefficients, got {len(self.coeffs)}")

    @classmethod
    def from_list(cls, coeffs: Sequence, order: int, zero=None) -> "TruncatedSeries":
        coeffs = list(coeffs)[:order]
        if len(coeffs) < order:
            z = zero if zero is not None else zero_like(coeffs[0])
            coeffs += [z] * (order - len(coeffs))
        return cls(order, tuple(coeffs))

    @classmethod
    def constant(cls, c, order: int) -> "TruncatedSeries":
        return cls.from_list([c], order)

    def __getitem__(self, m: int):
        return self.coeffs[m]

    def _check(self, other: "TruncatedSeries"):
        if not isinstance(other, TruncatedSeries):
            raise TypeError("expected a TruncatedSeries")
        if other.order != self.order:
            raise ValueError(f"truncation order mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        self._check(other)
        return TruncatedSeries(self.order, tuple(add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return TruncatedSeries(self.order, tuple(sub(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return TruncatedSeries(self.order, tuple(neg(a) for a in self.coeffs))

    def scaled(self, c) -> "TruncatedSeries":
        return TruncatedSeries(self.order, tuple(scale(c, a) for a in self.coeffs))

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot raise truncation order without new coefficients")
        return TruncatedSeries(order, self.coeffs[:order])

    def extend(self, order: int) -> "TruncatedSeries":
        """Pad with zero coefficients (meaningful for polynomials of low degree)."""
        return TruncatedSeries.from_list(self.coeffs, order, zero_like(self.coeffs[0]))

    def leading(self):
        """(m, c_m) for the least m with c_m nonzero, or None."""
        for m, c in enumerate(self.coeffs):
            if not iszero(c):
                return m, c
        return None

    def to_json(self, encode: Callable[[Any], Any]) -> dict:
        return {"order": self.order, "coeffs": [encode(c) for c in self.coeffs]}

    def __repr__(self):
        return f"TruncatedSeries(order={self.order}, coeffs={self.coeffs!r})"


def series_mul(a: TruncatedSeries, b: TruncatedSeries,
               mul: Callable[[Any, Any], Any] | None = None) -> TruncatedSeries:
    """Cauchy product truncated at the common order; `mul` is the bilinear product."""
    a._check(b)
    mul = mul or (lambda x, y: x * y)
    out = []
    for m in range(a.order):
        acc = None
        for p in range(m + 1):
            t = mul(a.coeffs[p], b.coeffs[m - p])
            acc = t if acc is None else add(acc, t)
        out.append(acc)
    return TruncatedSeries(a.order, tuple(out))
