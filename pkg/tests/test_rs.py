import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rscodes import linalg as la
from rscodes.errors import BadParameters, TooManyErasures
from rscodes.galois import GaloisField
from rscodes.rs import RsCode, min_distance_bruteforce

F8 = GaloisField.binary(3)
a = F8.alpha_pow


def all_codewords(code):
    return [cw for _, block in la.iter_codewords(code.field, code.G) for cw in block.tolist()]


def nearest(codebook, word):
    """Every codeword at minimum Hamming distance from word."""
    dists = [sum(x != y for x, y in zip(c, word)) for c in codebook]
    best = min(dists)
    return best, [c for c, d in zip(codebook, dists) if d == best]


def test_worked_decode_example():
    code = RsCode(F8, 7, 5)
    C = code.encode_poly([a(1), 0, 0, 0, a(3)])
    assert C == [a(4), a(5), a(1), 0, a(6), 1, a(3)]
    R = list(C)
    R[5] = a(6)
    assert code.syndrome(R) == [1, a(5)]
    res = code.decode_errors(R)
    assert res.ok and res.error_positions == [5] and res.error_values == [a(2)]
    assert res.locator == [1, a(5)]  # 1 + a^5 X, root at a^-5
    assert res.codeword == C


def test_vandermonde_rows_and_systematic_forms():
    code = RsCode(F8, 7, 3)
    assert code.G[1] == [a(j) for j in range(7)]
    assert code.G[2] == [a(2 * j) for j in range(7)]
    # rows alpha^0, alpha^-j, alpha^-2j give the systematic matrix with integer labels
    alt = RsCode(F8, 7, 3, first_row=5)
    assert alt.G_sys == [[1, 0, 0, 6, 1, 6, 7], [0, 1, 0, 4, 1, 5, 5], [0, 0, 1, 3, 1, 2, 3]]


def test_semi_systematic_two_field_examples():
    F = GaloisField.binary(3, "1+X^2+X^3")
    b = F.alpha_pow
    code = RsCode(F, 7, 3)
    G1, _ = code.semi_systematic(1)
    assert G1 == [[1] * 7, [0, 1, 0, b(5), 1, b(1), b(1)], [0, 0, 1, b(4), 1, b(6), b(4)]]
    G2, _ = code.semi_systematic(2)
    assert G2 == [
        [1, 0, b(1), b(6), b(5), b(2), b(4)],
        [0, 1, b(5), b(4), b(1), b(3), b(6)],
        [0, 0, 1, b(4), 1, b(6), b(4)],
    ]
    G3, _ = code.semi_systematic(3)
    assert G3 == code.G_sys
    for u in (1, 2):
        Gs, _ = code.semi_systematic(u)
        assert la.min_distance(F, Gs[:u]) == 7 - u + 1
        assert la.min_distance(F, [row[u:] for row in Gs[u:]]) == 7 - 3 + 1
        assert la.rank(F, Gs + code.G) == 3


@pytest.mark.parametrize("nk", [(7, 5), (7, 3), (15, 11), (15, 7)])
def test_generator_times_syndrome_former_is_zero(nk):
    F = GaloisField.binary(3 if nk[0] == 7 else 4)
    code = RsCode(F, *nk)
    assert all(v == 0 for v in la.mat_mul(F, code.G, code.H_T) for v in v)


@given(st.lists(st.integers(0, 7), min_size=3, max_size=3))
def test_encoders_produce_codewords(info):
    code = RsCode(F8, 7, 3)
    for enc in (code.encode, code.encode_systematic, code.encode_poly, code.encode_systematic_poly):
        assert code.is_codeword(enc(info))
    assert code.encode_systematic(info)[:3] == info
    assert code.encode_systematic_poly(info)[4:] == info
    assert code.unencode(code.encode(info)) == info


def test_single_error_syndrome_shape():
    code = RsCode(F8, 7, 3)
    for i in range(7):
        for E in range(1, 8):
            e = [0] * 7
            e[i] = E
            assert code.syndrome(e) == [F8.mul(E, a(i * (j + 1))) for j in range(4)]


def test_min_distance_small():
    assert min_distance_bruteforce(RsCode(F8, 7, 5)) == 3
    assert min_distance_bruteforce(RsCode(F8, 7, 3)) == 5
    assert min_distance_bruteforce(RsCode(GaloisField.binary(2), 3, 2)) == 2


def test_random_column_selections_invertible():
    rng = random.Random(5)
    F = GaloisField.binary(4)
    for _ in range(200):
        k = rng.randint(1, 14)
        code = RsCode(F, 15, k)
        cols = rng.sample(range(15), k)
        assert la.rank(F, la.submatrix_cols(code.G, cols)) == k
        if k < 15:
            rows = rng.sample(range(15), 15 - k)
            assert la.rank(F, [code.H_T[r] for r in rows]) == 15 - k


@pytest.mark.parametrize("k", [5, 3])
def test_decoder_matches_nearest_codeword_exhaustively(k):
    code = RsCode(F8, 7, k)
    book = all_codewords(code)
    t = (7 - k) // 2
    rng = random.Random(k)
    for c in rng.sample(book, 20):
        for w in range(t + 1):
            for pos in itertools.combinations(range(7), w):
                r = list(c)
                for p in pos:
                    r[p] ^= a(p)  # fixed nonzero error values
                res = code.decode_errors(r)
                d, near = nearest(book, r)
                assert res.ok and near == [res.codeword] and res.codeword == c


def test_beyond_capability_never_silently_wrong():
    code = RsCode(F8, 7, 3)
    book = all_codewords(code)
    rng = random.Random(1)
    for _ in range(300):
        c = rng.choice(book)
        r = list(c)
        for p in rng.sample(range(7), 3):
            r[p] ^= rng.randint(1, 7)
        res = code.decode_errors(r)
        if res.ok:
            assert code.is_codeword(res.codeword)
            assert sum(x != y for x, y in zip(res.codeword, r)) <= 2


def test_erasures():
    rng = random.Random(2)
    for k in (5, 3):
        code = RsCode(F8, 7, k)
        for _ in range(50):
            info = [rng.randrange(8) for _ in range(k)]
            c = code.encode(info)
            er = rng.sample(range(7), 7 - k)
            r = [0 if j in er else x for j, x in enumerate(c)]
            res = code.decode_erasures(r, er)
            assert res.ok and res.codeword == c and res.info == info
        assert code.decode_erasures(c, []).codeword == c
        with pytest.raises(TooManyErasures):
            code.decode_erasures(c, range(8 - k))


def test_errors_and_erasures_two_plus_one():
    code = RsCode(F8, 7, 3)
    book = all_codewords(code)
    rng = random.Random(3)
    for c in rng.sample(book, 30):
        for er in itertools.combinations(range(7), 2):
            for p in range(7):
                if p in er:
                    continue
                r = list(c)
                for j in er:
                    r[j] = rng.randrange(8)
                r[p] ^= rng.randint(1, 7)
                res = code.decode_errors_and_erasures(r, er)
                assert res.ok and res.codeword == c


def test_all_erasures_budget_matches_erasure_decoder():
    code = RsCode(F8, 7, 3)
    c = code.encode([1, 2, 3])
    er = [0, 2, 4, 6]
    r = [5 if j in er else x for j, x in enumerate(c)]
    assert code.decode_errors_and_erasures(r, er).codeword == code.decode_erasures(r, er).codeword == c


def test_no_erasures_equals_plain_decoder_random():
    code = RsCode(F8, 7, 3)
    rng = np.random.default_rng(9)
    for _ in range(10_000):
        r = rng.integers(0, 8, 7).tolist()
        x, y = code.decode_errors(r), code.decode_errors_and_erasures(r, [])
        assert (x.status, x.codeword) == (y.status, y.codeword)


def test_bad_parameters():
    with pytest.raises(BadParameters):
        RsCode(F8, 6, 3)
    with pytest.raises(BadParameters):
        RsCode(F8, 7, 8)


def test_shortened_and_extended():
    F = GaloisField.binary(5)
    sh = RsCode(F, 20, 10, "shortened")
    rng = random.Random(4)
    for _ in range(20):
        info = [rng.randrange(32) for _ in range(10)]
        c = sh.encode(info)
        assert sh.is_codeword(c)
        r = list(c)
        for p in rng.sample(range(20), 5):
            r[p] ^= rng.randint(1, 31)
        res = sh.decode_errors(r)
        assert res.ok and res.codeword == c and res.info == info
    ext = RsCode(GaloisField.binary(2), 4, 2, "extended")
    assert ext.G == [[1, 1, 1, 1], [0, 1, 2, 3]]
    assert min_distance_bruteforce(ext) == 3


def test_prime_field_code_decodes():
    F = GaloisField.prime(11)
    code = RsCode(F, 10, 4)
    c = code.encode([1, 2, 3, 4])
    r = list(c)
    r[2] = (r[2] + 5) % 11
    r[7] = (r[7] + 1) % 11
    r[9] = (r[9] + 3) % 11
    assert code.decode_errors(r).codeword == c
