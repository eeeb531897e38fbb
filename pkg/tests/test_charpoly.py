import pytest

from wittkit import matrices as mx
from wittkit.charpoly import (
    SpecialMatrix,
    block_matrix,
    chi,
    hs_trace,
    morita_map,
    witt_det,
)
from wittkit.errors import NotSpecialUnitError, ShapeError
from wittkit.oracle import classical_char_poly
from wittkit.rings import CommPoly, FreeAssoc, Integers, MatrixRing, Modular
from wittkit.series import TruncatedSeries, su_inv
from wittkit.witt import (
    TruncationSet,
    Verdict,
    WittRep,
    from_series,
    ghost,
    neutral,
    teichmuller,
    to_series,
    witt_add,
    witt_equals,
)

Z = Integers()
FREE4 = FreeAssoc(("a", "b", "c", "d"), 6)


def random_matrix(ring, rng, rows, cols=None):
    return tuple(
        tuple(ring.random_element(rng) for _ in range(cols or rows)) for _ in range(rows)
    )


def random_special(ring, rng, k, N):
    rows = []
    for i in range(k):
        row = []
        for j in range(k):
            cs = [ring.one if i == j else ring.zero] + [ring.random_element(rng) for _ in range(N - 1)]
            row.append(TruncatedSeries(ring, tuple(cs)))
        rows.append(tuple(row))
    return SpecialMatrix(ring, N, tuple(rows))


class TestWittDet:
    def test_diagonal(self, rng):
        N = 5
        u = random_special(Z, rng, 1, N).entries[0][0]
        v = random_special(Z, rng, 1, N).entries[0][0]
        zero = TruncatedSeries.zero(Z, N)
        U = SpecialMatrix(Z, N, ((u, zero), (zero, v)))
        S = TruncationSet.full(N)
        assert witt_det(U, S) == witt_add(from_series(u, S), from_series(v, S))

    @pytest.mark.parametrize("upper", [True, False])
    def test_strictly_triangular_is_neutral(self, upper, rng):
        N, k = 5, 3
        f = tuple(
            tuple(
                FREE4.random_element(rng) if (j > i if upper else j < i) else FREE4.zero
                for j in range(k)
            )
            for i in range(k)
        )
        assert chi(FREE4, f, N).is_neutral()

    def test_generic_two_by_two_ghost(self):
        a, b, c, d = FREE4.gens()
        N = 5
        one_minus = lambda x: TruncatedSeries.one_minus(FREE4, N, 1, x)
        t2 = TruncatedSeries.monomial(FREE4, N, 2, FREE4.one)
        expected = one_minus(a) * one_minus(d) - one_minus(a) * TruncatedSeries.monomial(
            FREE4, N, 0, c
        ) * su_inv(one_minus(a)) * TruncatedSeries.monomial(FREE4, N, 0, b) * t2
        w = chi(FREE4, ((a, b), (c, d)), N)
        assert ghost(w) == ghost(from_series(expected, w.S))

    def test_requires_special(self):
        f = TruncatedSeries.from_coeffs(Z, [2], 3)
        with pytest.raises(NotSpecialUnitError):
            SpecialMatrix(Z, 3, ((f,),))

    def test_pivot_order_ghosts_agree(self, rng):
        for ring in (Z, FREE4, Modular(5)):
            U = random_special(ring, rng, 3, 5)
            g = ghost(witt_det(U))
            for order in ((0, 2, 1), (2, 1, 0), (1, 2, 0)):
                assert ghost(witt_det(U, order=order)) == g

    def test_conjugation_invariance(self, rng):
        N, k = 5, 3
        for _ in range(20):
            U = random_special(Z, rng, k, N)
            alpha = mx.identity(Z, k)
            for _ in range(4):
                i, j = rng.sample(range(k), 2)
                E = tuple(
                    tuple(1 if r == s else (rng.randint(-2, 2) if (r, s) == (i, j) else 0) for s in range(k))
                    for r in range(k)
                )
                alpha = mx.mat_mul(Z, alpha, E)
            alpha_inv = invert_unimodular(alpha)
            conj = conjugate(U, alpha, alpha_inv)
            assert witt_equals(witt_det(conj), witt_det(U)) is Verdict.Equal

    def test_block_triangular_additivity(self, rng):
        N = 5
        for ring in (Z, FREE4):
            for _ in range(5):
                A = random_special(ring, rng, 2, N)
                D = random_special(ring, rng, 1, N)
                corner = TruncatedSeries(ring, (ring.zero,) + tuple(ring.random_element(rng) for _ in range(N - 1)))
                zero = TruncatedSeries.zero(ring, N)
                rows = (
                    A.entries[0] + (corner,),
                    A.entries[1] + (corner,),
                    (zero, zero) + D.entries[0],
                )
                U = SpecialMatrix(ring, N, rows)
                total = witt_add(witt_det(A), witt_det(D))
                assert witt_equals(witt_det(U), total) is Verdict.Equal


def invert_unimodular(alpha):
    k = len(alpha)
    from fractions import Fraction

    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(alpha)]
    for col in range(k):
        piv = next(r for r in range(col, k) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                m = aug[r][col]
                aug[r] = [x - m * y for x, y in zip(aug[r], aug[col])]
    inv = tuple(tuple(int(x) for x in row[k:]) for row in aug)
    assert mx.mat_mul(Z, alpha, inv) == mx.identity(Z, k)
    return inv


def conjugate(U, alpha, alpha_inv):
    k, N = U.k, U.N
    out = []
    for i in range(k):
        row = []
        for j in range(k):
            acc = TruncatedSeries.zero(Z, N)
            for p in range(k):
                for q in range(k):
                    coeff = alpha[i][p] * alpha_inv[q][j]
                    if coeff:
                        acc = acc + U.entries[p][q].scale(coeff)
            row.append(acc)
        out.append(tuple(row))
    return SpecialMatrix(Z, N, tuple(out))


class TestChi:
    def test_zero_matrix(self):
        assert chi(FREE4, ((FREE4.zero,) * 2,) * 2, 5).is_neutral()

    def test_generic_free_example(self):
        a, b, c, d = FREE4.gens()
        F = FREE4
        u = to_series(chi(F, ((a, b), (c, d)), 5))
        ca, ac = F.mul(c, a), F.mul(a, c)
        expected = (
            F.one,
            F.neg(F.add(a, d)),
            F.sub(F.mul(a, d), F.mul(c, b)),
            F.neg(F.mul(F.sub(ca, ac), b)),
            F.neg(F.mul(F.sub(F.mul(ca, a), F.mul(ac, a)), b)),
        )
        assert u.coeffs == expected

    def test_integer_example(self):
        assert to_series(chi(Z, ((1, 2), (3, 4)), 3)).coeffs == (1, -5, -2)

    def test_ghost_trace_identity(self, rng):
        for ring, k in ((Z, 2), (Z, 3), (FreeAssoc(("a", "b"), 6), 2), (Modular(5), 2)):
            for _ in range(5):
                f = random_matrix(ring, rng, k)
                g = ghost(chi(ring, f, 6))
                for n in range(1, 6):
                    assert g[n] == hs_trace(ring, mx.mat_pow(ring, f, n))

    def test_commutative_agreement(self, rng):
        for ring in (Z, Modular(6), CommPoly(("x",), Z)):
            for k in (1, 2, 3):
                f = random_matrix(ring, rng, k)
                assert to_series(chi(ring, f, 6)) == classical_char_poly(ring, f, 6)

    def test_trace_property(self, rng):
        for _ in range(20):
            k, l = rng.randint(1, 3), rng.randint(1, 3)
            f, g = random_matrix(Z, rng, k, l), random_matrix(Z, rng, l, k)
            fg = chi(Z, mx.mat_mul(Z, f, g), 5)
            gf = chi(Z, mx.mat_mul(Z, g, f), 5)
            assert witt_equals(fg, gf) is Verdict.Equal

    def test_block_triangular_additivity(self, rng):
        F = FreeAssoc(("a", "b"), 6)
        for _ in range(5):
            f1, f3 = random_matrix(F, rng, 2), random_matrix(F, rng, 1)
            f2 = random_matrix(F, rng, 2, 1)
            zero = mx.zeros(F, 1, 2)
            f = block_matrix(((f1, f2), (zero, f3)))
            combined = witt_add(chi(F, f1, 5), chi(F, f3, 5))
            assert witt_equals(chi(F, f, 5), combined) is Verdict.Equal

    def test_non_square(self):
        with pytest.raises(ShapeError):
            chi(Z, ((1, 2),), 3)


class TestMorita:
    def test_elementary(self):
        M = MatrixRing(2, Z)
        S = TruncationSet.full(4)
        w = teichmuller(M, 4, S, 1, ((7, 0), (0, 0)))
        assert morita_map(w) == teichmuller(Z, 4, S, 1, 7)

    def test_rank_one_contract(self, rng):
        M = MatrixRing(2, Z)
        S = TruncationSet.full(5)
        for n in (1, 2):
            x = (rng.randint(-3, 3), rng.randint(-3, 3))
            psi = (rng.randint(-3, 3), rng.randint(-3, 3))
            outer = tuple(tuple(x[i] * psi[j] for j in range(2)) for i in range(2))
            image = morita_map(teichmuller(M, 5, S, n, outer))
            expected = teichmuller(Z, 5, S, n, x[0] * psi[0] + x[1] * psi[1])
            assert witt_equals(image, expected) is Verdict.Equal

    def test_neutral(self):
        M = MatrixRing(3, Modular(4))
        assert morita_map(neutral(M, 4, TruncationSet.full(4))).is_neutral()

    def test_direct_sums(self, rng):
        M1, M2, M3 = MatrixRing(1, Z), MatrixRing(2, Z), MatrixRing(3, Z)
        S = TruncationSet.full(5)
        for _ in range(5):
            f, g = random_matrix(Z, rng, 1), random_matrix(Z, rng, 2)
            wf = from_series(TruncatedSeries.one_minus(M1, 5, 1, f), S)
            wg = from_series(TruncatedSeries.one_minus(M2, 5, 1, g), S)
            h = block_matrix(((f, mx.zeros(Z, 1, 2)), (mx.zeros(Z, 2, 1), g)))
            wh = from_series(TruncatedSeries.one_minus(M3, 5, 1, h), S)
            assert morita_map(wh) == witt_add(morita_map(wf), morita_map(wg))

    def test_ghost_preserved(self, rng):
        M = MatrixRing(2, FreeAssoc(("a", "b"), 5))
        S = TruncationSet.full(5)
        for _ in range(5):
            w = WittRep.from_map(M, 5, S, {n: M.random_element(rng) for n in S})
            assert ghost(morita_map(w)) == ghost(w)


class TestHattoriStallings:
    def test_examples(self):
        assert hs_trace(Z, ((0, 1), (0, 0))) == 0
        assert hs_trace(Z, ((1, 2), (3, 4))) == 5

    def test_rectangular(self, rng):
        F = FreeAssoc(("a", "b"), 6)
        for _ in range(50):
            f, g = random_matrix(F, rng, 2, 3), random_matrix(F, rng, 3, 2)
            assert hs_trace(F, mx.mat_mul(F, f, g)) == hs_trace(F, mx.mat_mul(F, g, f))


def test_special_matrix_json(rng):
    U = random_special(FREE4, rng, 2, 4)
    assert SpecialMatrix.from_json(U.to_json()) == U
