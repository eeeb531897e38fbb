"""Brute-force ground truth for small finite rings.

``enumerate_witt`` lists every special unit mod t^N, closes the relation
subgroup under products and conjugation, and labels cosets.  Two units are
equal in W_S(R) mod t^N exactly when their coset labels agree.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import matrices as mx
from .charpoly import SpecialMatrix, morita_map, witt_det
from .errors import SizeGuardError, TensorUnsupportedError, UnsupportedOperationError
from .rings import Integers, MatrixRing, Ring, tensor_ring
from .series import TruncatedSeries, su_inv
from .witt import (
    TruncationSet,
    Verdict,
    WittRep,
    frobenius,
    from_series,
    restrict,
    series_ghost,
    star,
    to_series,
    verschiebung,
    witt_equals,
)

SIZE_GUARD = 10**6


@dataclass
class EnumeratedWitt:
    ring: Ring
    N: int
    S: TruncationSet
    elements: list
    index: dict
    subgroup: frozenset
    class_ids: list
    num_classes: int
    relation_list: list = field(default_factory=list, repr=False)
    _products: dict = field(default_factory=dict, repr=False)

    @property
    def group_size(self) -> int:
        return len(self.class_ids)

    def encode(self, u: TruncatedSeries) -> int:
        if u.N != self.N or u.ring != self.ring or not u.is_special():
            raise ValueError("series does not belong to this enumeration")
        q = len(self.elements)
        code = 0
        for c in reversed(u.coeffs[1:]):
            code = code * q + self.index[c]
        return code

    def decode(self, code: int) -> TruncatedSeries:
        return special_unit(self.ring, self.elements, self.N, code)

    def mul(self, i: int, j: int) -> int:
        key = (i, j)
        hit = self._products.get(key)
        if hit is None:
            hit = self.encode(self.decode(i) * self.decode(j))
            self._products[key] = hit
        return hit

    def class_of(self, x) -> int:
        """Coset label of a special unit, a WittRep or an encoded element."""
        if isinstance(x, WittRep):
            x = to_series(x)
        if isinstance(x, TruncatedSeries):
            x = self.encode(x)
        return self.class_ids[x]

    def same_class(self, x, y) -> bool:
        return self.class_of(x) == self.class_of(y)

    def ghost_image_size(self) -> int:
        images = set()
        for code in range(self.group_size):
            g = series_ghost(self.decode(code), self.S)
            images.add(tuple(g[n] for n in self.S))
        return len(images)

    def random_element(self, rng: random.Random) -> int:
        return rng.randrange(self.group_size)

    def random_relation(self, rng: random.Random) -> int:
        return rng.choice(self.relation_list)


def special_unit(ring: Ring, elements: Sequence, N: int, code: int) -> TruncatedSeries:
    """The special unit whose coefficients are the base-|R| digits of code."""
    q = len(elements)
    cs = [ring.one]
    for _ in range(N - 1):
        code, r = divmod(code, q)
        cs.append(elements[r])
    return TruncatedSeries(ring, tuple(cs))


def _closure(generators: Sequence[int], mul, identity: int) -> set:
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for h in frontier:
            for g in generators:
                p = mul(h, g)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return seen


def enumerate_witt(ring: Ring, N: int, S: TruncationSet | None = None) -> EnumeratedWitt:
    if not ring.is_finite:
        raise UnsupportedOperationError(f"{ring!r} is not finite")
    S = TruncationSet.full(N) if S is None else S
    if S.max() >= N:
        raise ValueError("truncation set exceeds the precision")
    q = ring.cardinality()
    size = q ** (N - 1)
    if size > SIZE_GUARD:
        raise SizeGuardError(f"|G| = {q}^{N - 1} = {size} exceeds the guard {SIZE_GUARD}")
    elements = list(ring.elements())
    index = {e: i for i, e in enumerate(elements)}
    E = EnumeratedWitt(ring, N, S, elements, index, frozenset(), [], 0)

    inverse = {}

    def inv(c: int) -> int:
        if c not in inverse:
            inverse[c] = E.encode(su_inv(E.decode(c)))
        return inverse[c]

    identity = 0
    group_gens = sorted(
        {
            E.encode(TruncatedSeries.monomial(ring, N, n, r) + TruncatedSeries.one(ring, N))
            for n in range(1, N)
            for r in elements
        }
        - {identity}
    )

    candidates = set()
    for x in group_gens:
        for y in group_gens:
            candidates.add(E.mul(E.mul(x, y), inv(E.mul(y, x))))
    for r in elements:
        for fc in range(size):
            f = E.decode(fc) - TruncatedSeries.one(ring, N)
            left = TruncatedSeries.one(ring, N) - f.left_mul(r)
            right = TruncatedSeries.one(ring, N) - f.right_mul(r)
            candidates.add(E.encode(left * su_inv(right)))
    for n in range(1, N):
        if n not in S:
            for r in elements:
                candidates.add(E.encode(TruncatedSeries.one_minus(ring, N, n, r)))
    candidates.discard(identity)

    kept: list[int] = []
    H = {identity}
    pending = sorted(candidates)
    while pending:
        for c in pending:
            if c not in H:
                kept.append(c)
                H = _closure(kept, E.mul, identity)
        # normal closure under conjugation by the group generators
        pending = []
        for g in group_gens:
            gi = inv(g)
            for x in kept:
                c = E.mul(E.mul(g, x), gi)
                if c not in H:
                    pending.append(c)

    class_ids = [-1] * size
    count = 0
    members = sorted(H)
    for g in range(size):
        if class_ids[g] < 0:
            for h in members:
                class_ids[E.mul(g, h)] = count
            count += 1
    E.subgroup = frozenset(H)
    E.relation_list = members
    E.class_ids = class_ids
    E.num_classes = count
    return E


def classical_char_poly(ring: Ring, f, N: int) -> TruncatedSeries:
    """det(I - f t) mod t^N by the Leibniz expansion."""
    if not ring.is_commutative:
        raise UnsupportedOperationError("classical determinants need a commutative ring")
    k, cols = mx.shape(f)
    if k != cols:
        raise ValueError("square matrix expected")
    total = TruncatedSeries.zero(ring, N)
    for perm in itertools.permutations(range(k)):
        inversions = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
        term = TruncatedSeries.one(ring, N)
        for i, j in enumerate(perm):
            entry = TruncatedSeries.from_coeffs(
                ring, [ring.one if i == j else ring.zero, ring.neg(f[i][j])], N
            )
            term = term * entry
        total = total + (term.scale(-1) if inversions % 2 else term)
    return total


def ghost_poly_oracle(ring: Ring, coords: dict, n: int, S: Iterable[int] | None = None):
    """Classical ghost polynomial sum_{d | n, d in S} d * a_d^(n/d)."""
    if not ring.is_commutative:
        raise UnsupportedOperationError("ghost polynomials need a commutative ring")
    allowed = set(coords) if S is None else set(S)
    acc = ring.zero
    for d, a in coords.items():
        if d in allowed and n % d == 0:
            acc = ring.add(acc, ring.scale(d, ring.pow(a, n // d)))
    return acc


# consistency checks against the enumeration


def _random_special_matrix(ring: Ring, N: int, k: int, rng: random.Random) -> SpecialMatrix:
    rows = []
    for i in range(k):
        row = []
        for j in range(k):
            cs = [ring.one if i == j else ring.zero]
            cs += [ring.random_element(rng) for _ in range(N - 1)]
            row.append(TruncatedSeries(ring, tuple(cs)))
        rows.append(tuple(row))
    return SpecialMatrix(ring, N, tuple(rows))


class _Report:
    def __init__(self):
        self.checks: dict = {}
        self.discrepancies: list = []
        self.unknown: list = []

    def case(self, name: str, ok: bool, detail: dict | None = None):
        entry = self.checks.setdefault(name, {"cases": 0, "discrepancies": 0})
        entry["cases"] += 1
        if not ok:
            entry["discrepancies"] += 1
            self.discrepancies.append({"check": name, **(detail or {})})


def _check_equality(E: EnumeratedWitt, rng, samples: int, report: _Report):
    # pairs cycle through: unrelated, relation-equivalent, equal ghosts
    S = E.S
    fibres: dict = {}
    for code in range(E.group_size):
        g = series_ghost(E.decode(code), S)
        fibres.setdefault(tuple(g[n] for n in S), []).append(code)
    fibre_of = {c: f for f in fibres.values() for c in f}
    for i in range(samples):
        a = E.random_element(rng)
        if i % 3 == 0:
            b = E.random_element(rng)
        elif i % 3 == 1:
            b = E.mul(a, E.random_relation(rng))
        else:
            b = rng.choice(fibre_of[a])
        wa, wb = from_series(E.decode(a), S), from_series(E.decode(b), S)
        verdict = witt_equals(wa, wb)
        truth = E.class_of(a) == E.class_of(b)
        if verdict is Verdict.Unknown:
            report.unknown.append(
                {"left": a, "right": b, "resolved": "Equal" if truth else "NotEqual"}
            )
            report.case("equality", True)
            continue
        ok = (verdict is Verdict.Equal) == truth
        report.case("equality", ok, {"left": a, "right": b, "verdict": verdict.value})


def _check_pivot(E: EnumeratedWitt, rng, samples: int, report: _Report):
    for _ in range(samples):
        U = _random_special_matrix(E.ring, E.N, 2, rng)
        forward = witt_det(U, E.S)
        backward = witt_det(U, E.S, order=(1, 0))
        report.case(
            "pivot",
            E.same_class(forward, backward),
            {"matrix": SpecialMatrix.to_json(U)["entries"]},
        )


def _star_partners(ring: Ring) -> list:
    partners = [Integers()]
    try:
        tensor_ring(ring, ring)
        partners.append(ring)
    except TensorUnsupportedError:
        pass
    return partners


def _check_descent(E: EnumeratedWitt, rng, samples: int, report: _Report, cache: dict):
    R, N, S = E.ring, E.N, E.S
    for _ in range(samples):
        a = E.random_element(rng)
        b = E.mul(a, E.random_relation(rng))
        wa, wb = from_series(E.decode(a), S), from_series(E.decode(b), S)
        report.case("descent:from_series", E.same_class(wa, wb) and E.same_class(wa, a))
        for n in range(2, N):
            fa, fb = frobenius(n, wa), frobenius(n, wb)
            if fa.N < 2:
                continue
            target = _enumeration(R, fa.N, fa.S, cache)
            report.case(
                "descent:frobenius",
                target.same_class(fa, fb),
                {"n": n, "left": a, "right": b},
            )
        for partner in _star_partners(R):
            T = tensor_ring(partner, R).ring
            target = _enumeration(T, N, S, cache)
            coords = {m: partner.random_element(rng) for m in S}
            x = WittRep.from_map(partner, N, S, coords)
            report.case(
                "descent:star",
                target.same_class(star(x, wa), star(x, wb)),
                {"partner": partner.descriptor(), "left": a, "right": b},
            )


def _enumeration(ring: Ring, N: int, S: TruncationSet, cache: dict) -> EnumeratedWitt:
    key = (ring, N, S)
    if key not in cache:
        cache[key] = enumerate_witt(ring, N, S)
    return cache[key]


def _check_exactness(E: EnumeratedWitt, report: _Report, cache: dict):
    R, N, S = E.ring, E.N, E.S
    neutral_class = E.class_of(0)
    for k in range(2, N):
        if k not in S:
            continue
        S_rest = S.without_multiples(k)
        E_rest = _enumeration(R, N, S_rest, cache)
        rest_neutral = E_rest.class_of(0)
        image_under_restrict: dict = {}
        kernel = set()
        consistent = True
        for code in range(E.group_size):
            w = from_series(E.decode(code), S)
            target = E_rest.class_of(restrict(w, S_rest))
            cls = E.class_ids[code]
            if image_under_restrict.setdefault(cls, target) != target:
                consistent = False
            if target == rest_neutral:
                kernel.add(cls)
        report.case("exactness:restrict-descends", consistent, {"k": k})
        S_src = S.divide(k)
        N_src = (N - 1) // k + 1
        image = {neutral_class}
        for code in range(len(E.elements) ** (N_src - 1)):
            u = special_unit(R, E.elements, N_src, code)
            v = verschiebung(k, from_series(u, S_src), S, N)
            image.add(E.class_of(v))
        report.case(
            "exactness",
            image == kernel,
            {"k": k, "image": sorted(image), "kernel": sorted(kernel)},
        )


def _check_morita(E: EnumeratedWitt, rng, samples: int, report: _Report, cache: dict):
    R = E.ring
    if not isinstance(R, MatrixRing):
        return
    target = _enumeration(R.base, E.N, E.S, cache)
    for _ in range(samples):
        a = E.random_element(rng)
        b = E.mul(a, E.random_relation(rng))
        ma = morita_map(from_series(E.decode(a), E.S))
        mb = morita_map(from_series(E.decode(b), E.S))
        report.case("morita:descent", target.same_class(ma, mb), {"left": a, "right": b})
    images = {}
    for code in range(E.group_size):
        cls = E.class_ids[code]
        img = target.class_of(morita_map(from_series(E.decode(code), E.S)))
        images.setdefault(cls, img)
    bijective = len(set(images.values())) == E.num_classes == target.num_classes
    report.case("morita:bijective", bijective, {"classes": E.num_classes, "target": target.num_classes})


ALL_CHECKS = ("equality", "pivot", "descent", "exactness", "morita")


def run_oracle_checks(
    ring: Ring,
    N: int,
    checks: Sequence[str] = ALL_CHECKS,
    seed: int = 0,
    samples: int = 50,
    S: TruncationSet | None = None,
) -> dict:
    unknown_checks = set(checks) - set(ALL_CHECKS)
    if unknown_checks:
        raise UnsupportedOperationError(f"unknown oracle checks {sorted(unknown_checks)}")
    rng = random.Random(seed)
    S = TruncationSet.full(N) if S is None else S
    cache: dict = {}
    E = _enumeration(ring, N, S, cache)
    report = _Report()
    if "equality" in checks:
        _check_equality(E, rng, 4 * samples, report)
    if "pivot" in checks:
        _check_pivot(E, rng, samples, report)
    if "descent" in checks:
        _check_descent(E, rng, samples, report, cache)
    if "exactness" in checks:
        _check_exactness(E, report, cache)
    if "morita" in checks:
        _check_morita(E, rng, samples, report, cache)
    return {
        "ring": ring.descriptor(),
        "N": N,
        "S": list(S),
        "seed": seed,
        "groupSize": E.group_size,
        "relationSubgroupSize": len(E.subgroup),
        "numClasses": E.num_classes,
        "ghostImageSize": E.ghost_image_size(),
        "checks": report.checks,
        "unknownResolved": report.unknown,
        "discrepancies": report.discrepancies,
    }
