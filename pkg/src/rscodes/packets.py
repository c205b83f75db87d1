"""Packet-level erasure coding and feedback-free array decoding.

Packets are rows of an integer array of field labels.  A block of k packets
P (k x N) is combined into n packets Q = G^T P, i.e. packet i is the linear
combination sum_j g[j][i] P_j.
"""

from __future__ import annotations

import numpy as np

from . import linalg as la
from .errors import DependentErrors, InsufficientRank, TooManyCorruptRows
from .galois import GaloisField
from .rs import RsCode

# (7,3) binary combining matrix with minimum distance 4
G_7_3_BINARY = [
    [1, 0, 0, 0, 1, 1, 1],
    [0, 1, 0, 1, 0, 1, 1],
    [0, 0, 1, 1, 1, 0, 1],
]


def combine(F: GaloisField, packets, G) -> np.ndarray:
    """Return the n combined packets (n x N) for k packets (k x N)."""
    P = np.asarray(packets, dtype=np.int64)
    return F.vmatmul(np.asarray(G, dtype=np.int64).T, P)


def choose_information_set(F: GaloisField, G, ids):
    """First k of ``ids`` (in order) whose columns of G are independent."""
    k = len(G)
    chosen = []
    for i in ids:
        trial = chosen + [i]
        if la.rank(F, la.submatrix_cols(G, trial)) == len(trial):
            chosen = trial
            if len(chosen) == k:
                return chosen
    raise InsufficientRank(f"received columns have rank {len(chosen)} < {k}")


def recover(F: GaloisField, received: dict, G):
    """Reconstruct the k packets from {packet id (0-based column): word}.

    Returns (packets, used_ids, inverse) where packets = (Q_used) * inverse in
    the row-vector sense, i.e. packets = inverse^T Q_used.
    """
    ids = choose_information_set(F, G, sorted(received))
    inv = la.inverse(F, la.submatrix_cols(G, ids))
    Q = np.asarray([received[i] for i in ids], dtype=np.int64)
    P = F.vmatmul(np.asarray(inv, dtype=np.int64).T, Q)
    return P, ids, inv


def encode_array(code: RsCode, packets) -> np.ndarray:
    """Code array (n x N) whose columns are codewords of ``code``."""
    return combine(code.field, packets, code.G)


def mk_decode(code: RsCode, received, return_trace: bool = False):
    """Recover the k x N packet array from an n x N array with corrupted rows.

    The syndrome array S = H R is reduced by Gaussian elimination while the
    same row operations are tracked and applied to H, giving H0.  A row of H0
    whose syndrome row became zero has its nonzero entries only on rows of R
    that are error free (when the error rows are independent), and these are
    at least k + 1 positions, enough to rebuild every column.
    """
    F = code.field
    n, k = code.n, code.k
    R = np.asarray(received, dtype=np.int64)
    H = la.transpose(code.H_T)  # (n-k) x n
    S = F.vmatmul(np.asarray(H, dtype=np.int64), R)
    S_red, piv, T = la.rref(F, S.tolist(), track=True)
    rank_s = len(piv)
    if rank_s >= n - k:
        raise TooManyCorruptRows(f"syndrome array has full rank {rank_s}")
    H0 = la.mat_mul(F, T, H)
    for h in H0[rank_s:]:
        clean = [j for j in range(n) if h[j]]
        if len(clean) <= k:
            continue
        keep = clean[:k]
        inv = la.inverse(F, la.submatrix_cols(code.G, keep))
        info = F.vmatmul(np.asarray(inv, dtype=np.int64).T, R[keep])  # k x N
        C = F.vmatmul(np.asarray(code.G, dtype=np.int64).T, info)
        if np.array_equal(C[clean], R[clean]):
            if return_trace:
                return info, {"S": S, "H0": H0, "rank": rank_s, "clean_rows": clean}
            return info
    raise DependentErrors("no zero-syndrome row of H0 gave a consistent reconstruction")
