"""Truncated big Witt vectors of a (possibly non-commutative) ring.

A ``WittRep`` stores the coordinates ``a_n`` of the normal-form unit
``prod_{n in S ascending} (1 - a_n t^n)`` modulo ``t^N``.  Classes are only
ever compared through the ghost map, which takes values in R/[R,R].
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import (
    ConfigurationError,
    MalformedInputError,
    NotSpecialUnitError,
    RingMismatchError,
)
from .rings import Ring, ring_make, tensor_ring
from .series import TruncatedSeries, su_inv, t_weighted_derivative


@dataclass(frozen=True)
class TruncationSet:
    """A finite divisor-closed set of positive integers."""

    elements: tuple

    def __post_init__(self):
        elems = tuple(sorted(set(int(e) for e in self.elements)))
        object.__setattr__(self, "elements", elems)
        if elems and elems[0] < 1:
            raise ConfigurationError("truncation sets contain positive integers only")
        members = set(elems)
        for m in elems:
            for d in range(1, m):
                if m % d == 0 and d not in members:
                    raise ConfigurationError(
                        f"truncation set is not divisor-closed: {m} in S but {d} is not"
                    )

    @classmethod
    def full(cls, N: int) -> "TruncationSet":
        return cls(tuple(range(1, N)))

    @classmethod
    def p_typical(cls, p: int, N: int) -> "TruncationSet":
        elems, q = [], 1
        while q < N:
            elems.append(q)
            q *= p
        return cls(tuple(elems))

    @classmethod
    def parse(cls, text: str) -> "TruncationSet":
        text = text.strip()
        if not text:
            return cls(())
        try:
            return cls(tuple(int(x) for x in text.split(",") if x.strip()))
        except ValueError:
            raise MalformedInputError(f"bad truncation set {text!r}") from None

    @cached_property
    def members(self) -> frozenset:
        return frozenset(self.elements)

    def __contains__(self, n) -> bool:
        return n in self.members

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def max(self) -> int:
        return self.elements[-1] if self.elements else 0

    def divide(self, n: int) -> "TruncationSet":
        """S/n = {k : nk in S}."""
        return TruncationSet(tuple(m // n for m in self.elements if m % n == 0))

    def without_multiples(self, k: int) -> "TruncationSet":
        """S' = S minus kN."""
        return TruncationSet(tuple(m for m in self.elements if m % k))

    def issubset(self, other: "TruncationSet") -> bool:
        return self.members <= other.members


class Verdict(enum.Enum):
    Equal = "Equal"
    NotEqual = "NotEqual"
    Unknown = "Unknown"


@dataclass(frozen=True, eq=False)
class GhostVector:
    """Ghost components indexed by a truncation set, valued in R/[R,R].

    Equality compares the trace-class values only, so ghosts over Matrix(k, R)
    and over R are directly comparable.
    """

    ring: Ring
    S: TruncationSet
    entries: tuple

    def __eq__(self, other):
        if not isinstance(other, GhostVector):
            return NotImplemented
        return (
            self.S == other.S
            and self.trace_ring == other.trace_ring
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.S, self.trace_ring, self.entries))

    @property
    def trace_ring(self) -> Ring:
        return self.ring.trace_ring

    def __getitem__(self, n: int):
        return self.entries[self.S.elements.index(n)]

    def as_dict(self) -> dict:
        return dict(zip(self.S.elements, self.entries))

    def _check(self, other: "GhostVector"):
        if self.S != other.S or self.trace_ring != other.trace_ring:
            raise RingMismatchError("ghost vectors over different index sets or rings")

    def __add__(self, other):
        self._check(other)
        T = self.trace_ring
        return GhostVector(self.ring, self.S, tuple(T.add(x, y) for x, y in zip(self.entries, other.entries)))

    def __neg__(self):
        T = self.trace_ring
        return GhostVector(self.ring, self.S, tuple(T.neg(x) for x in self.entries))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, n: int) -> "GhostVector":
        T = self.trace_ring
        return GhostVector(self.ring, self.S, tuple(T.scale(n, x) for x in self.entries))

    def restrict(self, S: TruncationSet) -> "GhostVector":
        return GhostVector(self.ring, S, tuple(self[n] for n in S))

    def is_zero(self) -> bool:
        return all(self.trace_ring.is_zero(x) for x in self.entries)

    def to_json(self) -> dict:
        T = self.trace_ring
        return {
            "S": list(self.S.elements),
            "entries": {str(n): T.element_to_json(x) for n, x in zip(self.S.elements, self.entries)},
        }


@dataclass(frozen=True)
class WittRep:
    ring: Ring
    N: int
    S: TruncationSet
    coords: tuple

    def __post_init__(self):
        if self.N < 1:
            raise ConfigurationError("precision N must be positive")
        if self.S.max() >= self.N:
            raise ConfigurationError(f"truncation set {list(self.S)} exceeds precision N={self.N}")
        if len(self.coords) != len(self.S):
            raise ValueError("one coordinate per element of S is required")

    @classmethod
    def from_map(cls, ring: Ring, N: int, S: TruncationSet, coords: Mapping[int, object]) -> "WittRep":
        extra = set(coords) - S.members
        if extra:
            raise ConfigurationError(f"coordinates {sorted(extra)} lie outside S")
        return cls(ring, N, S, tuple(coords.get(n, ring.zero) for n in S))

    def coord(self, n: int):
        if n not in self.S:
            return self.ring.zero
        return self.coords[self.S.elements.index(n)]

    def coord_map(self) -> dict:
        return dict(zip(self.S.elements, self.coords))

    def nonzero_coords(self) -> list:
        z = self.ring.is_zero
        return [(n, a) for n, a in zip(self.S.elements, self.coords) if not z(a)]

    def is_neutral(self) -> bool:
        return not self.nonzero_coords()

    def to_json(self) -> dict:
        R = self.ring
        return {
            "ring": R.descriptor(),
            "N": self.N,
            "S": list(self.S.elements),
            "coords": {str(n): R.element_to_json(a) for n, a in self.nonzero_coords()},
        }

    @classmethod
    def from_json(cls, obj: dict, ring: Ring | None = None) -> "WittRep":
        try:
            R = ring if ring is not None else ring_make(obj["ring"])
            N = int(obj["N"])
            S = TruncationSet(tuple(obj["S"])) if "S" in obj else TruncationSet.full(N)
            raw = obj.get("coords", {})
            coords = {int(n): R.element_from_json(a) for n, a in raw.items()}
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise MalformedInputError(f"bad Witt vector document: {exc}") from exc
        return cls.from_map(R, N, S, coords)


def neutral(ring: Ring, N: int, S: TruncationSet) -> WittRep:
    return WittRep(ring, N, S, (ring.zero,) * len(S))


def teichmuller(ring: Ring, N: int, S: TruncationSet, n: int, a) -> WittRep:
    """The class of 1 - a t^n, reduced to W_S."""
    return from_series(TruncatedSeries.one_minus(ring, N, n, a), S)


def _times_factor(r: TruncatedSeries, n: int, a) -> TruncatedSeries:
    """r * (1 - a t^n)."""
    R = r.ring
    cs = list(r.coeffs)
    for i in range(r.N - 1 - n, -1, -1):
        c = r.coeffs[i]
        if not R.is_zero(c):
            cs[i + n] = R.sub(cs[i + n], R.mul(c, a))
    return TruncatedSeries(R, tuple(cs))


def _peel(r: TruncatedSeries, n: int, a) -> TruncatedSeries:
    """(1 - a t^n)^{-1} * r, using the geometric series in a t^n."""
    R = r.ring
    N = r.N
    out = list(r.coeffs)
    power = a
    shift = n
    while shift < N:
        for i in range(N - shift):
            c = r.coeffs[i]
            if not R.is_zero(c):
                out[i + shift] = R.add(out[i + shift], R.mul(power, c))
        shift += n
        if shift < N:
            power = R.mul(power, a)
    return TruncatedSeries(R, tuple(out))


def from_series(u: TruncatedSeries, S: TruncationSet) -> WittRep:
    """Peel u into ascending factors 1 - a_n t^n, discarding indices outside S."""
    if not u.is_special():
        raise NotSpecialUnitError("from_series needs a special unit")
    R = u.ring
    coords = {}
    r = u
    for n in range(1, u.N):
        c = r.coeffs[n]
        if R.is_zero(c):
            continue
        a = R.neg(c)
        if n in S:
            coords[n] = a
        r = _peel(r, n, a)
    return WittRep.from_map(R, u.N, S, coords)


def to_series(w: WittRep) -> TruncatedSeries:
    r = TruncatedSeries.one(w.ring, w.N)
    for n, a in w.nonzero_coords():
        r = _times_factor(r, n, a)
    return r


def _check_same(*ws: WittRep):
    first = ws[0]
    for w in ws[1:]:
        if w.ring != first.ring:
            raise RingMismatchError(f"Witt vectors over {first.ring!r} and {w.ring!r}")
        if w.N != first.N or w.S != first.S:
            raise RingMismatchError("Witt vectors with different precision or truncation set")


def witt_add(w1: WittRep, w2: WittRep) -> WittRep:
    _check_same(w1, w2)
    return from_series(to_series(w1) * to_series(w2), w1.S)


def witt_sum(ws: Iterable[WittRep], ring: Ring, N: int, S: TruncationSet) -> WittRep:
    acc = TruncatedSeries.one(ring, N)
    for w in ws:
        _check_same(neutral(ring, N, S), w)
        acc = acc * to_series(w)
    return from_series(acc, S)


def witt_neg(w: WittRep) -> WittRep:
    return from_series(su_inv(to_series(w)), w.S)


def witt_sub(w1: WittRep, w2: WittRep) -> WittRep:
    return witt_add(w1, witt_neg(w2))


def witt_scale(n: int, w: WittRep) -> WittRep:
    """n-fold Witt sum (negative n allowed)."""
    base = to_series(w) if n >= 0 else su_inv(to_series(w))
    acc = TruncatedSeries.one(w.ring, w.N)
    for _ in range(abs(n)):
        acc = acc * base
    return from_series(acc, w.S)


def series_ghost(u: TruncatedSeries, indices: Iterable[int]) -> dict:
    """n -> trace class of -[(t d/dt u) u^{-1}]_n."""
    R = u.ring
    log_derivative = t_weighted_derivative(u) * su_inv(u)
    return {n: R.trace_class(R.neg(log_derivative.coeffs[n])) for n in indices}


def ghost(w: WittRep) -> GhostVector:
    g = series_ghost(to_series(w), w.S)
    return GhostVector(w.ring, w.S, tuple(g[n] for n in w.S))


def ghost_injective(ring: Ring, S: TruncationSet) -> bool:
    """Whether R/[R,R] has no n-torsion for every n in S."""
    return not any(ring.has_torsion(n) for n in S)


def witt_equals(w1: WittRep, w2: WittRep) -> Verdict:
    _check_same(w1, w2)
    if ghost(w1) != ghost(w2):
        return Verdict.NotEqual
    if w1.coords == w2.coords or ghost_injective(w1.ring, w1.S):
        return Verdict.Equal
    return Verdict.Unknown


def restrict(w: WittRep, S_sub: TruncationSet) -> WittRep:
    if not S_sub.issubset(w.S):
        raise ConfigurationError(f"{list(S_sub)} is not a subset of {list(w.S)}")
    return WittRep(w.ring, w.N, S_sub, tuple(w.coord(n) for n in S_sub))


def verschiebung_target(n: int, S_source: TruncationSet, N: int) -> TruncationSet:
    """Largest S below N with S/n contained in the source set."""
    return TruncationSet(
        tuple(m for m in range(1, N) if m % n or m // n in S_source)
    )


def verschiebung(
    n: int, w: WittRep, S: TruncationSet | None = None, N: int | None = None
) -> WittRep:
    """V_n: substitute t -> t^n.  The input must live over S/n (or a superset)."""
    if n < 1:
        raise ConfigurationError("V_n needs n >= 1")
    N = w.N if N is None else N
    S = verschiebung_target(n, w.S, N) if S is None else S
    if S.max() >= N:
        raise ConfigurationError("target truncation set exceeds the precision")
    quotient = S.divide(n)
    if not quotient.issubset(w.S):
        raise ConfigurationError(
            f"V_{n} needs a source over {list(quotient)}, got {list(w.S)}"
        )
    coords = {n * k: w.coord(k) for k in quotient}
    return WittRep.from_map(w.ring, N, S, coords)


def frobenius(n: int, w: WittRep) -> WittRep:
    """F_n: output over S/n at precision (N-1)//n + 1."""
    if n < 1:
        raise ConfigurationError("F_n needs n >= 1")
    R = w.ring
    S_out = w.S.divide(n)
    N_out = (w.N - 1) // n + 1
    acc = TruncatedSeries.one(R, N_out)
    for k, a in w.nonzero_coords():
        d = math.gcd(n, k)
        index = k // d
        if index not in S_out:
            continue
        factor = R.pow(a, n // d)
        for _ in range(d):
            acc = _times_factor(acc, index, factor)
    return from_series(acc, S_out)


def star(w1: WittRep, w2: WittRep) -> WittRep:
    """Bilinear product into W(R1 (x) R2)."""
    if w1.N != w2.N or w1.S != w2.S:
        raise RingMismatchError("star needs equal precision and truncation sets")
    T = tensor_ring(w1.ring, w2.ring)
    R1, R2 = w1.ring, w2.ring
    acc = TruncatedSeries.one(T.ring, w1.N)
    for k, a in w1.nonzero_coords():
        for l, b in w2.nonzero_coords():
            d = math.gcd(k, l)
            index = k * l // d
            if index not in w1.S:
                continue
            factor = T.embed(R1.pow(a, l // d), R2.pow(b, k // d))
            for _ in range(d):
                acc = _times_factor(acc, index, factor)
    return from_series(acc, w1.S)


def ghost_product(g1: GhostVector, g2: GhostVector) -> GhostVector:
    """Entrywise product of ghosts through the tensor pairing of trace classes."""
    if g1.S != g2.S:
        raise RingMismatchError("ghost vectors over different index sets")
    T = tensor_ring(g1.ring, g2.ring)
    entries = tuple(T.embed_trace(x, y) for x, y in zip(g1.entries, g2.entries))
    return GhostVector(T.ring, g1.S, entries)
