"""Truncated power series R[[t]]/t^N with non-commutative coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import MalformedInputError, NotSpecialUnitError, RingMismatchError
from .rings import Ring, ring_make


@dataclass(frozen=True)
class TruncatedSeries:
    ring: Ring
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) < 1:
            raise ValueError("a truncated series needs precision N >= 1")

    @property
    def N(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int):
        return self.coeffs[i]

    # construction

    @classmethod
    def zero(cls, ring: Ring, N: int) -> "TruncatedSeries":
        return cls(ring, (ring.zero,) * N)

    @classmethod
    def one(cls, ring: Ring, N: int) -> "TruncatedSeries":
        return cls.monomial(ring, N, 0, ring.one)

    @classmethod
    def monomial(cls, ring: Ring, N: int, degree: int, coeff) -> "TruncatedSeries":
        cs = [ring.zero] * N
        if degree < N:
            cs[degree] = coeff
        return cls(ring, tuple(cs))

    @classmethod
    def from_coeffs(cls, ring: Ring, coeffs: Sequence, N: int) -> "TruncatedSeries":
        cs = list(coeffs[:N]) + [ring.zero] * max(0, N - len(coeffs))
        return cls(ring, tuple(cs))

    @classmethod
    def one_minus(cls, ring: Ring, N: int, degree: int, a) -> "TruncatedSeries":
        """The Teichmuller-type factor 1 - a t^degree."""
        cs = [ring.zero] * N
        cs[0] = ring.one
        if degree < N:
            cs[degree] = ring.sub(cs[degree], a)
        return cls(ring, tuple(cs))

    # arithmetic

    def _align(self, other: "TruncatedSeries"):
        if self.ring != other.ring:
            raise RingMismatchError(f"series over {self.ring!r} and {other.ring!r}")
        n = min(self.N, other.N)
        return self.coeffs[:n], other.coeffs[:n]

    def __add__(self, other):
        a, b = self._align(other)
        add = self.ring.add
        return TruncatedSeries(self.ring, tuple(add(x, y) for x, y in zip(a, b)))

    def __neg__(self):
        return TruncatedSeries(self.ring, tuple(self.ring.neg(x) for x in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        a, b = self._align(other)
        R = self.ring
        add, mul, zero, is_zero = R.add, R.mul, R.zero, R.is_zero
        n = len(a)
        nz_b = [(j, y) for j, y in enumerate(b) if not is_zero(y)]
        out = [zero] * n
        for i, x in enumerate(a):
            if is_zero(x):
                continue
            for j, y in nz_b:
                if i + j >= n:
                    break
                out[i + j] = add(out[i + j], mul(x, y))
        return TruncatedSeries(R, tuple(out))

    def scale(self, n: int) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, tuple(self.ring.scale(n, x) for x in self.coeffs))

    def left_mul(self, r) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, tuple(self.ring.mul(r, x) for x in self.coeffs))

    def right_mul(self, r) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, tuple(self.ring.mul(x, r) for x in self.coeffs))

    def truncate(self, N: int) -> "TruncatedSeries":
        return TruncatedSeries.from_coeffs(self.ring, self.coeffs, N)

    def is_special(self) -> bool:
        return self.coeffs[0] == self.ring.one

    def valuation(self) -> int:
        """Index of the first nonzero coefficient, or N if the series vanishes."""
        for i, c in enumerate(self.coeffs):
            if not self.ring.is_zero(c):
                return i
        return self.N

    def substitute_power(self, n: int) -> "TruncatedSeries":
        """t -> t^n at the same precision."""
        R = self.ring
        out = [R.zero] * self.N
        for i, c in enumerate(self.coeffs):
            if i * n >= self.N:
                break
            out[i * n] = c
        return TruncatedSeries(R, tuple(out))

    # serialization

    def to_json(self) -> dict:
        return {
            "ring": self.ring.descriptor(),
            "N": self.N,
            "coeffs": [self.ring.element_to_json(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict, ring: Ring | None = None) -> "TruncatedSeries":
        try:
            R = ring if ring is not None else ring_make(obj["ring"])
            N = int(obj["N"])
            coeffs = [R.element_from_json(c) for c in obj["coeffs"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInputError(f"bad series document: {exc}") from exc
        if N < 1 or len(coeffs) > N:
            raise MalformedInputError("series precision N must cover all coefficients")
        return cls.from_coeffs(R, coeffs, N)

    def format(self) -> str:
        R = self.ring
        parts = []
        for i, c in enumerate(self.coeffs):
            if R.is_zero(c):
                continue
            tpow = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            parts.append(f"({R.format(c)}){tpow}" if tpow else R.format(c))
        return " + ".join(parts) or "0"


def ts_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f * g


def su_inv(u: TruncatedSeries) -> TruncatedSeries:
    """Two-sided inverse of a special unit, via v_n = -sum_{i=1..n} u_i v_{n-i}."""
    if not u.is_special():
        raise NotSpecialUnitError("constant coefficient is not 1")
    R = u.ring
    add, mul, neg, is_zero = R.add, R.mul, R.neg, R.is_zero
    cs = u.coeffs
    nz = [(i, c) for i, c in enumerate(cs) if i and not is_zero(c)]
    v = [R.one]
    for n in range(1, u.N):
        acc = R.zero
        for i, c in nz:
            if i > n:
                break
            acc = add(acc, mul(c, v[n - i]))
        v.append(neg(acc))
    return TruncatedSeries(R, tuple(v))


def t_weighted_derivative(f: TruncatedSeries) -> TruncatedSeries:
    R = f.ring
    return TruncatedSeries(R, tuple(R.scale(i, c) for i, c in enumerate(f.coeffs)))
