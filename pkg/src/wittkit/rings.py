"""Exact rings and their trace-class quotients R/[R,R].

Every ring is an immutable descriptor object that owns the arithmetic of
its elements.  Elements are plain hashable Python values in a canonical
form, so ``==`` on elements is equality in the ring:

* ``Integers``   -- ``int``
* ``Modular(m)`` -- ``int`` in ``range(m)``
* ``MatrixRing`` -- tuple of row tuples of base elements
* ``FreeAssoc``  -- tuple of ``(word, coeff)`` pairs sorted by
  ``(len(word), word)``; words are tuples of generator indices
* ``CommPoly``   -- tuple of ``(exponents, coeff)`` pairs sorted by exponents
* ``ProductRing``-- pair ``(left, right)``

``trace_class`` maps an element to a canonical representative of its class
in R/[R,R].  Representatives are elements of ``ring.trace_ring`` (the ring
itself, except for matrix rings where traces land in the base), so trace
classes can be added and scaled with that ring's arithmetic.
"""

from __future__ import annotations

import itertools
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Iterator

from . import matrices as mx
from .errors import (
    ConfigurationError,
    MalformedInputError,
    TensorUnsupportedError,
)


class Ring(ABC):
    kind: str = "?"

    @property
    @abstractmethod
    def zero(self): ...

    @property
    @abstractmethod
    def one(self): ...

    @abstractmethod
    def from_int(self, n: int): ...

    @abstractmethod
    def add(self, a, b): ...

    @abstractmethod
    def neg(self, a): ...

    @abstractmethod
    def mul(self, a, b): ...

    @abstractmethod
    def trace_class(self, a): ...

    @abstractmethod
    def has_torsion(self, n: int) -> bool:
        """Whether R/[R,R] has nonzero n-torsion."""

    @abstractmethod
    def random_element(self, rng): ...

    @abstractmethod
    def descriptor(self) -> dict: ...

    @abstractmethod
    def element_to_json(self, a): ...

    @abstractmethod
    def element_from_json(self, obj): ...

    @abstractmethod
    def format(self, a) -> str: ...

    is_commutative: bool = False
    is_finite: bool = False

    @property
    def trace_ring(self) -> "Ring":
        return self

    @property
    def tq_torsion_free(self) -> bool:
        return not self.has_torsion(0)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale(self, n: int, a):
        return self.mul(self.from_int(n), a)

    def is_zero(self, a) -> bool:
        return a == self.zero

    def sum(self, items):
        acc = self.zero
        for x in items:
            acc = self.add(acc, x)
        return acc

    def pow(self, a, n: int):
        if n < 0:
            raise ValueError("negative powers are not available in a general ring")
        result, base = self.one, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def elements(self) -> Iterator:
        raise ConfigurationError(f"{self!r} is not a finite ring")

    def cardinality(self) -> int:
        raise ConfigurationError(f"{self!r} is not a finite ring")


def _check_int_param(name, value, minimum):
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ConfigurationError(f"{name} must be an integer >= {minimum}, got {value!r}")


def _parse_int(obj) -> int:
    if isinstance(obj, bool):
        raise MalformedInputError(f"expected an integer, got {obj!r}")
    if isinstance(obj, int):
        return obj
    if isinstance(obj, str):
        try:
            return int(obj.strip())
        except ValueError:
            pass
    raise MalformedInputError(f"expected a decimal integer string, got {obj!r}")


@dataclass(frozen=True)
class Integers(Ring):
    kind = "Integers"
    is_commutative = True
    is_finite = False

    zero = 0
    one = 1

    def from_int(self, n):
        return n

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def scale(self, n, a):
        return n * a

    def pow(self, a, n):
        return a**n

    def trace_class(self, a):
        return a

    def has_torsion(self, n):
        return False

    def random_element(self, rng, bound=5):
        return rng.randint(-bound, bound)

    def descriptor(self):
        return {"kind": self.kind, "params": {}}

    def element_to_json(self, a):
        return str(a)

    def element_from_json(self, obj):
        return _parse_int(obj)

    def format(self, a):
        return str(a)


@dataclass(frozen=True)
class Modular(Ring):
    m: int
    kind = "Modular"
    is_commutative = True
    is_finite = True

    def __post_init__(self):
        _check_int_param("modulus m", self.m, 2)

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def from_int(self, n):
        return n % self.m

    def add(self, a, b):
        return (a + b) % self.m

    def neg(self, a):
        return -a % self.m

    def sub(self, a, b):
        return (a - b) % self.m

    def mul(self, a, b):
        return a * b % self.m

    def scale(self, n, a):
        return n * a % self.m

    def pow(self, a, n):
        return pow(a, n, self.m)

    def trace_class(self, a):
        return a

    def has_torsion(self, n):
        # Z/m has n-torsion iff gcd(n, m) > 1; n = 0 asks "any torsion".
        return math.gcd(n, self.m) > 1

    def random_element(self, rng):
        return rng.randrange(self.m)

    def elements(self):
        return iter(range(self.m))

    def cardinality(self):
        return self.m

    def descriptor(self):
        return {"kind": self.kind, "params": {"m": self.m}}

    def element_to_json(self, a):
        return str(a)

    def element_from_json(self, obj):
        return _parse_int(obj) % self.m

    def format(self, a):
        return str(a)


@dataclass(frozen=True)
class MatrixRing(Ring):
    k: int
    base: Ring
    kind = "Matrix"

    def __post_init__(self):
        _check_int_param("matrix size k", self.k, 1)
        if not isinstance(self.base, Ring):
            raise ConfigurationError("matrix base must be a ring")

    @property
    def is_commutative(self):
        return self.k == 1 and self.base.is_commutative

    @property
    def is_finite(self):
        return self.base.is_finite

    @cached_property
    def zero(self):
        return mx.zeros(self.base, self.k, self.k)

    @cached_property
    def one(self):
        return mx.identity(self.base, self.k)

    def from_int(self, n):
        b = self.base
        c = b.from_int(n)
        return tuple(
            tuple(c if i == j else b.zero for j in range(self.k)) for i in range(self.k)
        )

    def add(self, a, b):
        return mx.mat_add(self.base, a, b)

    def neg(self, a):
        return mx.mat_neg(self.base, a)

    def mul(self, a, b):
        return mx.mat_mul(self.base, a, b)

    def scale(self, n, a):
        return mx.mat_scale(self.base, n, a)

    def trace_class(self, a):
        return self.base.trace_class(mx.mat_trace(self.base, a))

    @property
    def trace_ring(self):
        return self.base.trace_ring

    def has_torsion(self, n):
        return self.base.has_torsion(n)

    def random_element(self, rng):
        return tuple(
            tuple(self.base.random_element(rng) for _ in range(self.k))
            for _ in range(self.k)
        )

    def elements(self):
        entries = list(self.base.elements())
        k = self.k
        for flat in itertools.product(entries, repeat=k * k):
            yield tuple(tuple(flat[i * k : (i + 1) * k]) for i in range(k))

    def cardinality(self):
        return self.base.cardinality() ** (self.k * self.k)

    def descriptor(self):
        return {"kind": self.kind, "params": {"k": self.k, "base": self.base.descriptor()}}

    def element_to_json(self, a):
        return [[self.base.element_to_json(x) for x in row] for row in a]

    def element_from_json(self, obj):
        if not isinstance(obj, list) or len(obj) != self.k:
            raise MalformedInputError(f"expected a {self.k}x{self.k} nested array")
        rows = []
        for row in obj:
            if not isinstance(row, list) or len(row) != self.k:
                raise MalformedInputError(f"expected a {self.k}x{self.k} nested array")
            rows.append(tuple(self.base.element_from_json(x) for x in row))
        return tuple(rows)

    def format(self, a):
        return "[" + ", ".join(
            "[" + ", ".join(self.base.format(x) for x in row) + "]" for row in a
        ) + "]"


def least_rotation(word) -> int:
    """Start index of the lexicographically least rotation (Booth)."""
    n = len(word)
    if n == 0:
        return 0
    s = tuple(word) * 2
    fail = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j]
        i = fail[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k


def necklace(word) -> tuple:
    k = least_rotation(word)
    return tuple(word[k:]) + tuple(word[:k])


@dataclass(frozen=True)
class FreeAssoc(Ring):
    """Free associative ring Z<generators> modulo all words longer than D."""

    generators: tuple
    D: int
    kind = "FreeAssoc"
    is_finite = False

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ConfigurationError("FreeAssoc needs at least one generator")
        if len(set(gens)) != len(gens):
            raise ConfigurationError("FreeAssoc generators must be distinct")
        if not all(isinstance(g, str) and g for g in gens):
            raise ConfigurationError("FreeAssoc generators must be non-empty strings")
        _check_int_param("maximal word length D", self.D, 1)

    @property
    def is_commutative(self):
        return len(self.generators) == 1

    @property
    def zero(self):
        return ()

    @property
    def one(self):
        return (((), 1),)

    @staticmethod
    def _canon(d: dict) -> tuple:
        return tuple(sorted(((w, c) for w, c in d.items() if c), key=lambda t: (len(t[0]), t[0])))

    def from_int(self, n):
        return (((), n),) if n else ()

    def word(self, symbols) -> tuple:
        """The element given by one word; a str is split into single-letter symbols."""
        idx = self._word_indices(symbols)
        if len(idx) > self.D:
            return ()
        return ((idx, 1),)

    def gen(self, name):
        return self.word([name])

    def gens(self):
        return tuple(self.gen(g) for g in self.generators)

    def _word_indices(self, symbols) -> tuple:
        if isinstance(symbols, str):
            if all(len(g) == 1 for g in self.generators):
                symbols = list(symbols)
            else:
                symbols = [s for s in symbols.split("*") if s]
        try:
            return tuple(self.generators.index(s) for s in symbols)
        except ValueError:
            raise MalformedInputError(f"unknown generator in word {symbols!r}") from None

    def add(self, a, b):
        if not a:
            return b
        if not b:
            return a
        d = dict(a)
        for w, c in b:
            d[w] = d.get(w, 0) + c
        return self._canon(d)

    def neg(self, a):
        return tuple((w, -c) for w, c in a)

    def scale(self, n, a):
        if n == 0:
            return ()
        return tuple((w, n * c) for w, c in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        D = self.D
        buckets: dict[int, list] = {}
        for w, c in b:
            buckets.setdefault(len(w), []).append((w, c))
        lengths = sorted(buckets)
        out: dict = {}
        for w1, c1 in a:
            room = D - len(w1)
            for L in lengths:
                if L > room:
                    break
                for w2, c2 in buckets[L]:
                    w = w1 + w2
                    out[w] = out.get(w, 0) + c1 * c2
        return self._canon(out)

    def trace_class(self, a):
        d: dict = {}
        for w, c in a:
            nw = necklace(w)
            d[nw] = d.get(nw, 0) + c
        return self._canon(d)

    def has_torsion(self, n):
        return False

    def random_element(self, rng, terms=3, max_len=2, bound=3):
        d: dict = {}
        g = len(self.generators)
        for _ in range(rng.randint(1, terms)):
            L = rng.randint(0, min(max_len, self.D))
            w = tuple(rng.randrange(g) for _ in range(L))
            d[w] = d.get(w, 0) + rng.randint(-bound, bound)
        return self._canon(d)

    def descriptor(self):
        return {
            "kind": self.kind,
            "params": {"generators": list(self.generators), "D": self.D},
        }

    def element_to_json(self, a):
        return [
            {"coeff": str(c), "word": [self.generators[i] for i in w]} for w, c in a
        ]

    def element_from_json(self, obj):
        if not isinstance(obj, list):
            raise MalformedInputError("free-ring element must be a list of {coeff, word}")
        d: dict = {}
        for term in obj:
            if not isinstance(term, dict) or "coeff" not in term or "word" not in term:
                raise MalformedInputError(f"bad free-ring term {term!r}")
            w = self._word_indices(term["word"])
            if len(w) > self.D:
                continue
            d[w] = d.get(w, 0) + _parse_int(term["coeff"])
        return self._canon(d)

    def format(self, a):
        if not a:
            return "0"
        sep = "" if all(len(g) == 1 for g in self.generators) else "*"
        parts = []
        for w, c in a:
            body = sep.join(self.generators[i] for i in w)
            if not body:
                text = str(abs(c))
            elif abs(c) == 1:
                text = body
            else:
                text = f"{abs(c)}{'*' if sep else ''}{body}"
            parts.append(("-" if c < 0 else "+", text))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {s} {t}" for s, t in parts[1:])


@dataclass(frozen=True)
class CommPoly(Ring):
    """Commutative polynomial ring over Integers or Modular(m)."""

    variables: tuple
    base: Ring
    kind = "CommPoly"
    is_commutative = True
    is_finite = False

    def __post_init__(self):
        vs = tuple(self.variables)
        object.__setattr__(self, "variables", vs)
        if not vs:
            raise ConfigurationError("CommPoly needs at least one variable")
        if len(set(vs)) != len(vs):
            raise ConfigurationError("CommPoly variables must be distinct")
        if not isinstance(self.base, (Integers, Modular)):
            raise ConfigurationError("CommPoly base must be Integers or Modular")

    @property
    def zero(self):
        return ()

    @property
    def one(self):
        return ((self._zero_exps(), self.base.one),)

    def _zero_exps(self):
        return (0,) * len(self.variables)

    def _canon(self, d: dict) -> tuple:
        b = self.base
        return tuple(sorted((e, c) for e, c in d.items() if not b.is_zero(c)))

    def from_int(self, n):
        c = self.base.from_int(n)
        return () if self.base.is_zero(c) else ((self._zero_exps(), c),)

    def var(self, name):
        i = self.variables.index(name)
        e = tuple(1 if j == i else 0 for j in range(len(self.variables)))
        return ((e, self.base.one),)

    def monomial(self, exps, coeff=1):
        c = self.base.from_int(coeff)
        return () if self.base.is_zero(c) else ((tuple(exps), c),)

    def add(self, a, b):
        d = dict(a)
        badd = self.base.add
        for e, c in b:
            d[e] = badd(d[e], c) if e in d else c
        return self._canon(d)

    def neg(self, a):
        return tuple((e, self.base.neg(c)) for e, c in a)

    def scale(self, n, a):
        return self._canon({e: self.base.scale(n, c) for e, c in a})

    def mul(self, a, b):
        d: dict = {}
        badd, bmul = self.base.add, self.base.mul
        for e1, c1 in a:
            for e2, c2 in b:
                e = tuple(x + y for x, y in zip(e1, e2))
                p = bmul(c1, c2)
                d[e] = badd(d[e], p) if e in d else p
        return self._canon(d)

    def trace_class(self, a):
        return a

    def has_torsion(self, n):
        return self.base.has_torsion(n)

    def random_element(self, rng, terms=3, max_deg=2):
        d: dict = {}
        for _ in range(rng.randint(1, terms)):
            e = tuple(rng.randint(0, max_deg) for _ in self.variables)
            c = self.base.random_element(rng)
            d[e] = self.base.add(d[e], c) if e in d else c
        return self._canon(d)

    def descriptor(self):
        return {
            "kind": self.kind,
            "params": {"variables": list(self.variables), "base": self.base.descriptor()},
        }

    def element_to_json(self, a):
        return [
            {"coeff": self.base.element_to_json(c), "exponents": list(e)} for e, c in a
        ]

    def element_from_json(self, obj):
        if not isinstance(obj, list):
            raise MalformedInputError("polynomial must be a list of {coeff, exponents}")
        d: dict = {}
        for term in obj:
            try:
                e = tuple(int(x) for x in term["exponents"])
                c = self.base.element_from_json(term["coeff"])
            except (KeyError, TypeError, ValueError) as exc:
                raise MalformedInputError(f"bad polynomial term {term!r}") from exc
            if len(e) != len(self.variables) or min(e, default=0) < 0:
                raise MalformedInputError(f"bad exponent vector {e!r}")
            d[e] = self.base.add(d[e], c) if e in d else c
        return self._canon(d)

    def format(self, a):
        if not a:
            return "0"
        parts = []
        for e, c in reversed(a):
            mono = "*".join(
                v if x == 1 else f"{v}^{x}" for v, x in zip(self.variables, e) if x
            )
            cs = self.base.format(c)
            parts.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
        return " + ".join(parts)


@dataclass(frozen=True)
class ProductRing(Ring):
    left: Ring
    right: Ring
    kind = "Product"

    @property
    def is_commutative(self):
        return self.left.is_commutative and self.right.is_commutative

    @property
    def is_finite(self):
        return self.left.is_finite and self.right.is_finite

    @property
    def zero(self):
        return (self.left.zero, self.right.zero)

    @property
    def one(self):
        return (self.left.one, self.right.one)

    def from_int(self, n):
        return (self.left.from_int(n), self.right.from_int(n))

    def add(self, a, b):
        return (self.left.add(a[0], b[0]), self.right.add(a[1], b[1]))

    def neg(self, a):
        return (self.left.neg(a[0]), self.right.neg(a[1]))

    def mul(self, a, b):
        return (self.left.mul(a[0], b[0]), self.right.mul(a[1], b[1]))

    def scale(self, n, a):
        return (self.left.scale(n, a[0]), self.right.scale(n, a[1]))

    def trace_class(self, a):
        return (self.left.trace_class(a[0]), self.right.trace_class(a[1]))

    @property
    def trace_ring(self):
        return ProductRing(self.left.trace_ring, self.right.trace_ring)

    def has_torsion(self, n):
        return self.left.has_torsion(n) or self.right.has_torsion(n)

    def random_element(self, rng):
        return (self.left.random_element(rng), self.right.random_element(rng))

    def elements(self):
        return itertools.product(list(self.left.elements()), list(self.right.elements()))

    def cardinality(self):
        return self.left.cardinality() * self.right.cardinality()

    def descriptor(self):
        return {
            "kind": self.kind,
            "params": {"left": self.left.descriptor(), "right": self.right.descriptor()},
        }

    def element_to_json(self, a):
        return [self.left.element_to_json(a[0]), self.right.element_to_json(a[1])]

    def element_from_json(self, obj):
        if not isinstance(obj, list) or len(obj) != 2:
            raise MalformedInputError("product element must be a pair [left, right]")
        return (self.left.element_from_json(obj[0]), self.right.element_from_json(obj[1]))

    def format(self, a):
        return f"({self.left.format(a[0])}, {self.right.format(a[1])})"


def ring_make(descriptor: dict) -> Ring:
    """Build a ring from its JSON descriptor ``{"kind": ..., "params": {...}}``."""
    if isinstance(descriptor, Ring):
        return descriptor
    if not isinstance(descriptor, dict) or "kind" not in descriptor:
        raise ConfigurationError(f"ring descriptor must be an object with 'kind': {descriptor!r}")
    kind = descriptor["kind"]
    params = descriptor.get("params", {}) or {}
    try:
        if kind == "Integers":
            return Integers()
        if kind == "Modular":
            return Modular(params["m"])
        if kind == "Matrix":
            return MatrixRing(params["k"], ring_make(params["base"]))
        if kind == "FreeAssoc":
            return FreeAssoc(tuple(params["generators"]), params["D"])
        if kind == "CommPoly":
            base = ring_make(params.get("base", {"kind": "Integers"}))
            return CommPoly(tuple(params["variables"]), base)
        if kind == "Product":
            return ProductRing(ring_make(params["left"]), ring_make(params["right"]))
    except KeyError as exc:
        raise ConfigurationError(f"ring descriptor {kind!r} is missing {exc}") from None
    raise ConfigurationError(f"unknown ring kind {kind!r}")


def trace_class(ring: Ring, r):
    return ring.trace_class(r)


@dataclass(frozen=True)
class TensorProduct:
    """A supported tensor product R (x) S with its bilinear embedding."""

    left: Ring
    right: Ring
    ring: Ring
    embed: Callable[[Any, Any], Any]

    def embed_trace(self, tl, tr):
        """Image of trace classes under the induced pairing on R/[R,R] (x) S/[S,S]."""
        if isinstance(self.left, Integers):
            return self.ring.trace_ring.scale(tl, tr)
        if isinstance(self.right, Integers):
            return self.ring.trace_ring.scale(tr, tl)
        # every other supported pair is commutative, where trace classes are elements
        return self.embed(tl, tr)


def _scalar_tensor(a: Ring, b: Ring) -> Ring:
    if isinstance(a, Integers):
        return b
    if isinstance(b, Integers):
        return a
    g = math.gcd(a.m, b.m)
    if g < 2:
        raise TensorUnsupportedError(a, b)
    return Modular(g)


def tensor_ring(R: Ring, S: Ring) -> TensorProduct:
    if isinstance(R, Integers):
        return TensorProduct(R, S, S, lambda r, s: S.scale(r, s))
    if isinstance(S, Integers):
        return TensorProduct(R, S, R, lambda r, s: R.scale(s, r))
    if isinstance(R, Modular) and isinstance(S, Modular):
        T = _scalar_tensor(R, S)
        return TensorProduct(R, S, T, lambda r, s: r * s % T.m)
    if isinstance(R, CommPoly) and isinstance(S, CommPoly):
        if set(R.variables) & set(S.variables):
            raise TensorUnsupportedError(R, S)
        T = CommPoly(R.variables + S.variables, _scalar_tensor(R.base, S.base))

        def embed(p, q):
            d: dict = {}
            for e1, c1 in p:
                for e2, c2 in q:
                    c = T.base.from_int(c1 * c2)
                    e = e1 + e2
                    d[e] = T.base.add(d[e], c) if e in d else c
            return T._canon(d)

        return TensorProduct(R, S, T, embed)
    if isinstance(R, Modular) and isinstance(S, CommPoly) and isinstance(S.base, Integers):
        T = CommPoly(S.variables, R)
        return TensorProduct(R, S, T, lambda r, q: T._canon({e: r * c % R.m for e, c in q}))
    if isinstance(R, CommPoly) and isinstance(R.base, Integers) and isinstance(S, Modular):
        T = CommPoly(R.variables, S)
        return TensorProduct(R, S, T, lambda p, s: T._canon({e: s * c % S.m for e, c in p}))
    raise TensorUnsupportedError(R, S)
