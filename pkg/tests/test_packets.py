import itertools

import numpy as np
import pytest

from rscodes import linalg as la
from rscodes.errors import InsufficientRank, TooManyCorruptRows
from rscodes.galois import GaloisField
from rscodes.packets import G_7_3_BINARY, combine, encode_array, mk_decode, recover
from rscodes.rs import RsCode

F16 = GaloisField.binary(4)


def matmul_oracle(F, G, P):
    n, k = len(G[0]), len(G)
    out = []
    for i in range(n):
        acc = [0] * len(P[0])
        for j in range(k):
            acc = [F.add(x, F.mul(G[j][i], y)) for x, y in zip(acc, P[j])]
        out.append(acc)
    return out


def test_combined_last_packet_is_xor_of_all():
    rng = np.random.default_rng(0)
    P = rng.integers(0, 16, (3, 8))
    Q = combine(F16, P, G_7_3_BINARY)
    assert np.array_equal(Q[6], P[0] ^ P[1] ^ P[2])
    assert np.array_equal(combine(F16, P, la.identity(3)), P)


def test_combine_matches_oracle_random():
    rng = np.random.default_rng(1)
    for _ in range(20):
        G = rng.integers(0, 16, (3, 6)).tolist()
        P = rng.integers(0, 16, (3, 5)).tolist()
        assert combine(F16, P, G).tolist() == matmul_oracle(F16, G, P)


def test_three_lost_packets_example():
    rng = np.random.default_rng(2)
    P = rng.integers(0, 256, (3, 10))
    F = GaloisField.binary(8)
    Q = combine(F, P, G_7_3_BINARY)
    got = {i: Q[i] for i in (0, 1, 5, 6)}  # packets 3, 4, 5 lost
    rec, ids, inv = recover(F, {i: got[i] for i in (0, 1, 6)}, G_7_3_BINARY)
    assert inv == [[1, 0, 1], [0, 1, 1], [0, 0, 1]]
    assert np.array_equal(rec, P)
    assert np.array_equal(recover(F, got, G_7_3_BINARY)[0], P)


def test_every_three_losses_recoverable():
    G = G_7_3_BINARY
    assert la.min_distance(GaloisField.binary(1), G) == 4
    P = np.arange(12).reshape(3, 4) % 2
    F2 = GaloisField.binary(1)
    Q = combine(F2, P, G)
    for lost in itertools.combinations(range(7), 3):
        got = {i: Q[i] for i in range(7) if i not in lost}
        assert np.array_equal(recover(F2, got, G)[0], P)


def test_insufficient_rank():
    Q = combine(F16, np.ones((3, 2), dtype=int), G_7_3_BINARY)
    with pytest.raises(InsufficientRank):
        recover(F16, {0: Q[0], 1: Q[1]}, G_7_3_BINARY)


def corrupt(rng, C, rows, q):
    R = C.copy()
    for r in rows:
        R[r] = rng.integers(0, q, C.shape[1])
    return R


def test_mk_decode_three_error_rows():
    F = GaloisField.binary(3)
    code = RsCode(F, 6, 2, "shortened")
    rng = np.random.default_rng(3)
    done = 0
    for _ in range(200):
        P = rng.integers(0, 8, (2, 5))
        C = encode_array(code, P)
        rows = rng.choice(6, 3, replace=False)
        R = corrupt(rng, C, rows, 8)
        E = F.vsub(R, C)[rows]
        if la.rank(F, E.tolist()) < 3:
            continue
        info, trace = mk_decode(code, R, return_trace=True)
        assert np.array_equal(info, P)
        assert trace["rank"] == 3
        assert not set(rows) & set(trace["clean_rows"])
        done += 1
    assert done > 150


def test_mk_decode_clean_and_too_many():
    F = GaloisField.binary(3)
    code = RsCode(F, 6, 2, "shortened")
    rng = np.random.default_rng(4)
    P = rng.integers(0, 8, (2, 5))
    C = encode_array(code, P)
    assert np.array_equal(mk_decode(code, C), P)
    while True:
        R = corrupt(rng, C, [0, 1, 2, 3], 8)
        if la.rank(F, F.vsub(R, C)[:4].tolist()) == 4:
            break
    with pytest.raises(TooManyCorruptRows):
        mk_decode(code, R)


def test_mk_decode_randomised_ground_truth():
    F = GaloisField.binary(4)
    code = RsCode(F, 15, 7)
    rng = np.random.default_rng(5)
    ok = 0
    for _ in range(1000):
        P = rng.integers(0, 16, (7, 10))
        C = encode_array(code, P)
        t = rng.integers(0, 8)
        rows = rng.choice(15, t, replace=False)
        R = corrupt(rng, C, rows, 16)
        E = F.vsub(R, C)[rows]
        indep = t == 0 or la.rank(F, E.tolist()) == t
        # rank of the syndrome array equals the number of independent error rows
        S = F.vmatmul(np.asarray(la.transpose(code.H_T)), R)
        if indep:
            assert la.rank(F, S.tolist()) == t
            assert np.array_equal(mk_decode(code, R), P)
            ok += 1
    assert ok > 990
