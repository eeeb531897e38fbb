"""Witt vectors with coefficients in chains of rectangular matrix bimodules.

A chain ``((k0, k1), (k1, k2), ..., (k_{m-1}, k0))`` describes the bimodule
``M = M_{k0 x k1} (x) ... (x) M_{k_{m-1} x k0}`` over ``Matrix(k0, base)``.
A coordinate at index n is a list of pure tensor words of n*m factors that
cycle through the chain; each word w stands for the factor ``1 - contract(w) t^n``.
Contraction identifies every tensor power of M with ``Matrix(k0, base)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from . import matrices as mx
from .charpoly import chi
from .errors import (
    ConfigurationError,
    MalformedInputError,
    RingMismatchError,
    ShapeError,
)
from .rings import MatrixRing, Ring, ring_make
from .series import TruncatedSeries, su_inv
from .witt import (
    GhostVector,
    TruncationSet,
    Verdict,
    WittRep,
    from_series,
    ghost_injective,
    series_ghost,
    to_series,
    verschiebung_target,
)

Chain = tuple  # tuple of (rows, cols) pairs


@dataclass(frozen=True)
class MatBimodule:
    """k x l matrices over base: a Matrix(k)-Matrix(l) bimodule."""

    base: Ring
    k: int
    l: int

    def act(self, left, x, right):
        if mx.shape(x) != (self.k, self.l):
            raise ShapeError(f"expected a {self.k}x{self.l} matrix")
        return mx.mat_mul(self.base, mx.mat_mul(self.base, left, x), right)

    def random_element(self, rng):
        return tuple(
            tuple(self.base.random_element(rng) for _ in range(self.l)) for _ in range(self.k)
        )

    def zero(self):
        return mx.zeros(self.base, self.k, self.l)


@dataclass(frozen=True)
class TensorWord:
    factors: tuple
    coeff: int = 1

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(mx.as_matrix(f) for f in self.factors))
        if not self.factors:
            raise ShapeError("a tensor word needs at least one factor")
        for left, right in zip(self.factors, self.factors[1:]):
            if mx.shape(left)[1] != mx.shape(right)[0]:
                raise ShapeError("adjacent factors of a tensor word do not compose")

    def shapes(self) -> tuple:
        return tuple(mx.shape(f) for f in self.factors)

    def rotate(self, steps: int = 1) -> "TensorWord":
        """Move the last ``steps`` factors to the front."""
        steps %= len(self.factors)
        if not steps:
            return self
        return TensorWord(self.factors[-steps:] + self.factors[:-steps], self.coeff)

    def to_json(self, base: Ring) -> dict:
        return {
            "coeff": self.coeff,
            "factors": [[[base.element_to_json(x) for x in row] for row in f] for f in self.factors],
        }

    @classmethod
    def from_json(cls, obj: dict, base: Ring) -> "TensorWord":
        try:
            factors = [
                tuple(tuple(base.element_from_json(x) for x in row) for row in f)
                for f in obj["factors"]
            ]
            coeff = int(obj.get("coeff", 1))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInputError(f"bad tensor word: {exc}") from exc
        return cls(tuple(factors), coeff)


def contract(base: Ring, word: TensorWord):
    """Ordered product of the factors times the coefficient."""
    acc = word.factors[0]
    for f in word.factors[1:]:
        acc = mx.mat_mul(base, acc, f)
    return mx.mat_scale(base, word.coeff, acc)


def _check_chain(chain: Chain) -> Chain:
    chain = tuple((int(a), int(b)) for a, b in chain)
    if not chain:
        raise ConfigurationError("a bimodule chain needs at least one link")
    for (_, b), (c, _) in zip(chain, chain[1:] + chain[:1]):
        if b != c:
            raise ConfigurationError(f"chain {chain} does not close up")
    if min(min(p) for p in chain) < 1:
        raise ConfigurationError("matrix sizes must be positive")
    return chain


@dataclass(frozen=True)
class CoefWittRep:
    base: Ring
    chain: Chain
    N: int
    S: TruncationSet
    coords: tuple  # per element of S: tuple of TensorWords

    def __post_init__(self):
        object.__setattr__(self, "chain", _check_chain(self.chain))
        if self.S.max() >= self.N:
            raise ConfigurationError("truncation set exceeds the precision")
        if len(self.coords) != len(self.S):
            raise ValueError("one coordinate per element of S is required")
        m = len(self.chain)
        for n, words in zip(self.S, self.coords):
            for w in words:
                expected = tuple(self.chain[i % m] for i in range(n * m))
                if w.shapes() != expected:
                    raise ShapeError(f"word at index {n} does not follow the chain {self.chain}")

    @property
    def k0(self) -> int:
        return self.chain[0][0]

    @property
    def contracted_ring(self) -> MatrixRing:
        return MatrixRing(self.k0, self.base)

    def words(self, n: int) -> tuple:
        if n not in self.S:
            return ()
        return self.coords[self.S.elements.index(n)]

    @classmethod
    def from_map(cls, base, chain, N, S, coords: dict) -> "CoefWittRep":
        extra = set(coords) - S.members
        if extra:
            raise ConfigurationError(f"coordinates {sorted(extra)} lie outside S")
        return cls(base, chain, N, S, tuple(tuple(coords.get(n, ())) for n in S))

    def to_json(self) -> dict:
        return {
            "ring": self.base.descriptor(),
            "N": self.N,
            "S": list(self.S),
            "chain": [{"k": a, "l": b} for a, b in self.chain],
            "coords": {
                str(n): [w.to_json(self.base) for w in words]
                for n, words in zip(self.S, self.coords)
                if words
            },
        }

    @classmethod
    def from_json(cls, obj: dict, base: Ring | None = None) -> "CoefWittRep":
        try:
            R = base if base is not None else ring_make(obj["ring"])
            N = int(obj["N"])
            S = TruncationSet(tuple(obj["S"]))
            chain = tuple((int(c["k"]), int(c["l"])) for c in obj["chain"])
            coords = {
                int(n): [TensorWord.from_json(w, R) for w in words]
                for n, words in obj.get("coords", {}).items()
            }
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInputError(f"bad coefficient Witt vector: {exc}") from exc
        return cls.from_map(R, chain, N, S, coords)


def contract_series(w: CoefWittRep) -> TruncatedSeries:
    """Product over n in S (ascending) and words of 1 - contract(word) t^n."""
    R = w.contracted_ring
    acc = TruncatedSeries.one(R, w.N)
    for n, words in zip(w.S, w.coords):
        for word in words:
            acc = acc * TruncatedSeries.one_minus(R, w.N, n, contract(w.base, word))
    return acc


def coef_ghost(w: CoefWittRep) -> GhostVector:
    """Ghost components as trace classes over the base ring."""
    g = series_ghost(contract_series(w), w.S)
    return GhostVector(w.base, w.S, tuple(g[n] for n in w.S))


def coef_equals(w1: CoefWittRep, w2: CoefWittRep) -> Verdict:
    if w1.base != w2.base or w1.N != w2.N or w1.S != w2.S:
        raise RingMismatchError("coefficient Witt vectors over different data")
    if coef_ghost(w1) != coef_ghost(w2):
        return Verdict.NotEqual
    if ghost_injective(w1.base, w1.S):
        return Verdict.Equal
    return Verdict.Unknown


def weyl_shift(w: CoefWittRep, steps: int = 1) -> CoefWittRep:
    """Rotate every word by one factor; the chain rotates along."""
    m = len(w.chain)
    s = steps % m
    chain = w.chain[-s:] + w.chain[:-s] if s else w.chain
    coords = tuple(tuple(word.rotate(steps) for word in words) for words in w.coords)
    return CoefWittRep(w.base, chain, w.N, w.S, coords)


def trace_iso(w: CoefWittRep) -> CoefWittRep:
    return weyl_shift(w, 1)


def trace_iso_inverse(w: CoefWittRep) -> CoefWittRep:
    return weyl_shift(w, -1)


def decompose_pure(base: Ring, C, l: int) -> list[tuple]:
    """Pairs (A_s, B_s) of k x l and l x k matrices with sum A_s B_s = C (column slicing)."""
    if l < 1:
        raise ConfigurationError("slice width must be positive")
    k = len(C)
    pairs = []
    for start in range(0, k, l):
        cols = range(start, min(start + l, k))
        A = tuple(
            tuple(C[i][j] if j < k else base.zero for j in range(start, start + l))
            for i in range(k)
        )
        if mx.is_zero_matrix(base, A):
            continue
        B = tuple(
            tuple(base.one if start + r == j and j in cols else base.zero for j in range(k))
            for r in range(l)
        )
        pairs.append((A, B))
    return pairs


def _unit_matrix(base: Ring, rows: int, cols: int, i: int, j: int, value=None):
    v = base.one if value is None else value
    return tuple(
        tuple(v if (r, c) == (i, j) else base.zero for c in range(cols)) for r in range(rows)
    )


def pure_words(base: Ring, C, chain: Chain, n: int) -> list[TensorWord]:
    """Words of n*len(chain) factors along the chain whose contractions sum to C."""
    m = len(chain)
    length = n * m
    if mx.is_zero_matrix(base, C):
        return []
    if m == 1:
        k = chain[0][0]
        return [TensorWord((C,) + (mx.identity(base, k),) * (length - 1))]
    if m == 2:
        l = chain[0][1]
        words = []
        for A, B in decompose_pure(base, C, l):
            tail = []
            for i in range(length - 2):
                tail.append(mx.transpose(B) if i % 2 == 0 else B)
            words.append(TensorWord((A, B) + tuple(tail)))
        return words
    # route each nonzero entry through index 0 of every intermediate size
    words = []
    k0 = chain[0][0]
    for i in range(k0):
        for j in range(k0):
            c = C[i][j]
            if base.is_zero(c):
                continue
            factors = []
            for pos in range(length):
                rows, cols = chain[pos % m]
                r = i if pos == 0 else 0
                s = j if pos == length - 1 else 0
                factors.append(_unit_matrix(base, rows, cols, r, s, c if pos == 0 else None))
            words.append(TensorWord(tuple(factors)))
    return words


def from_contracted(u: TruncatedSeries, chain: Chain, S: TruncationSet) -> CoefWittRep:
    """Peel a special unit over Matrix(k0, base) into pure words along the chain."""
    chain = _check_chain(chain)
    R = u.ring
    if not isinstance(R, MatrixRing) or R.k != chain[0][0]:
        raise RingMismatchError("series must live over Matrix(k0, base) for the chain's k0")
    base = R.base
    coords: dict = {}
    r = u
    for n in range(1, u.N):
        c = r.coeffs[n]
        if R.is_zero(c):
            continue
        words = pure_words(base, R.neg(c), chain, n)
        factor = TruncatedSeries.one(R, u.N)
        for word in words:
            factor = factor * TruncatedSeries.one_minus(R, u.N, n, contract(base, word))
        if n in S:
            coords[n] = words
        r = su_inv(factor) * r
    return CoefWittRep.from_map(base, chain, u.N, S, coords)


def rechain(w: CoefWittRep) -> CoefWittRep:
    """Canonical pure-word representative of the same contracted series."""
    return from_contracted(contract_series(w), w.chain, w.S)


def coef_from_witt(w: WittRep, chain: Chain | None = None) -> CoefWittRep:
    """View a Witt vector over Matrix(k, base) as a coefficient vector along a chain."""
    if not isinstance(w.ring, MatrixRing):
        raise RingMismatchError("expected a Witt vector over a matrix ring")
    chain = ((w.ring.k, w.ring.k),) if chain is None else chain
    return from_contracted(to_series(w), chain, w.S)


def chi_coef(base: Ring, f, k: int, N: int, S: TruncationSet | None = None) -> CoefWittRep:
    """Characteristic element of an r x r matrix of k x k blocks, along the square chain."""
    S = TruncationSet.full(N) if S is None else S
    R = MatrixRing(k, base)
    for row in f:
        for block in row:
            if mx.shape(block) != (k, k):
                raise ShapeError("chi_coef needs square k x k bimodule entries")
    return coef_from_witt(chi(R, f, N, S), ((k, k),))


def coef_verschiebung(
    n: int, w: CoefWittRep, S: TruncationSet | None = None, N: int | None = None
) -> CoefWittRep:
    """V_n from coefficients in M^(x)n (chain repeated n times) to coefficients in M."""
    m = len(w.chain)
    if m % n:
        raise ConfigurationError(f"chain of length {m} is not an {n}-fold power")
    period = m // n
    short = w.chain[:period]
    if w.chain != short * n:
        raise ConfigurationError("chain is not a repeated chain")
    N = w.N if N is None else N
    S = verschiebung_target(n, w.S, N) if S is None else S
    quotient = S.divide(n)
    if not quotient.issubset(w.S):
        raise ConfigurationError(f"V_{n} needs a source over {list(quotient)}")
    coords = {n * k: w.words(k) for k in quotient}
    return CoefWittRep.from_map(w.base, short, N, S, coords)


def coef_frobenius(n: int, w: CoefWittRep) -> CoefWittRep:
    """F_n from coefficients in M to coefficients in M^(x)n (chain repeated n times)."""
    m = len(w.chain)
    S_out = w.S.divide(n)
    N_out = (w.N - 1) // n + 1
    coords: dict = {}
    for k, words in zip(w.S, w.coords):
        d = math.gcd(n, k)
        index = k // d
        if index not in S_out:
            continue
        for word in words:
            long_word = TensorWord(word.factors * (n // d), word.coeff ** (n // d))
            for j in range(d):
                coords.setdefault(index, []).append(long_word.rotate(j * (n // d) * m))
    return CoefWittRep.from_map(w.base, w.chain * n, N_out, S_out, coords)


def morita_via_trace(w: WittRep) -> WittRep:
    """W(Matrix(k, base)) -> W(base) through the chain (k x 1, 1 x k) and the trace isomorphism."""
    if not isinstance(w.ring, MatrixRing):
        raise RingMismatchError("expected a Witt vector over a matrix ring")
    k, base = w.ring.k, w.ring.base
    rotated = trace_iso(coef_from_witt(w, ((k, 1), (1, k))))
    u = contract_series(rotated)
    scalar = TruncatedSeries(base, tuple(c[0][0] for c in u.coeffs))
    return from_series(scalar, w.S)


def coef_teichmuller(
    base: Ring, chain: Chain, N: int, S: TruncationSet, n: int, words: Iterable[TensorWord]
) -> CoefWittRep:
    return CoefWittRep.from_map(base, chain, N, S, {n: list(words)})
