"""Dense linear algebra over a GaloisField on lists of integer labels."""

from __future__ import annotations

from .errors import InsufficientRank
from .galois import GaloisField


def zeros(r: int, c: int) -> list[list[int]]:
    return [[0] * c for _ in range(r)]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def vec_add(F: GaloisField, a, b) -> list[int]:
    return [F.add(x, y) for x, y in zip(a, b)]


def vec_sub(F: GaloisField, a, b) -> list[int]:
    return [F.sub(x, y) for x, y in zip(a, b)]


def vec_scale(F: GaloisField, c: int, a) -> list[int]:
    return [F.mul(c, x) for x in a]


def dot(F: GaloisField, a, b) -> int:
    s = 0
    for x, y in zip(a, b):
        if x and y:
            s = F.add(s, F.mul(x, y))
    return s


def vec_mat(F: GaloisField, v, M) -> list[int]:
    """Row vector times matrix."""
    cols = len(M[0]) if M else 0
    out = [0] * cols
    for vi, row in zip(v, M):
        if vi:
            for j, mij in enumerate(row):
                if mij:
                    out[j] = F.add(out[j], F.mul(vi, mij))
    return out


def mat_mul(F: GaloisField, A, B) -> list[list[int]]:
    return [vec_mat(F, row, B) for row in A]


def rref(F: GaloisField, M, track: bool = False, col_order=None):
    """Reduced row echelon form.

    Returns (R, pivot_columns, T) with T @ M == R when ``track`` is set,
    otherwise T is None.  ``col_order`` restricts/orders the pivot search.
    """
    R = [list(r) for r in M]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    T = identity(rows) if track else None
    pivots = []
    r = 0
    for c in col_order if col_order is not None else range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if R[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            R[r], R[piv] = R[piv], R[r]
            if track:
                T[r], T[piv] = T[piv], T[r]
        inv = F.inv(R[r][c])
        if inv != 1:
            R[r] = vec_scale(F, inv, R[r])
            if track:
                T[r] = vec_scale(F, inv, T[r])
        for i in range(rows):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = vec_sub(F, R[i], vec_scale(F, f, R[r]))
                if track:
                    T[i] = vec_sub(F, T[i], vec_scale(F, f, T[r]))
        pivots.append(c)
        r += 1
    return R, pivots, T


def rank(F: GaloisField, M) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(F, M)[1])


def inverse(F: GaloisField, M) -> list[list[int]]:
    n = len(M)
    R, piv, T = rref(F, M, track=True)
    if len(piv) != n:
        raise InsufficientRank("matrix is singular")
    return T


def solve_right(F: GaloisField, A, b):
    """One solution x of A x = b, or None when inconsistent."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    aug = [list(A[i]) + [b[i]] for i in range(rows)]
    R, piv, _ = rref(F, aug, col_order=range(cols + 1))
    if cols in piv:
        return None
    x = [0] * cols
    for r, c in enumerate(piv):
        x[c] = R[r][cols]
    return x


def solve_left(F: GaloisField, A, b):
    """One solution x of x A = b, or None when inconsistent."""
    return solve_right(F, transpose(A), b)


def nullspace(F: GaloisField, A) -> list[list[int]]:
    """Basis of {x : A x = 0} as a list of vectors."""
    cols = len(A[0]) if A else 0
    R, piv, _ = rref(F, A)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        x = [0] * cols
        x[f] = 1
        for r, c in enumerate(piv):
            x[c] = F.neg(R[r][f])
        basis.append(x)
    return basis


def submatrix_cols(M, cols) -> list[list[int]]:
    return [[row[c] for c in cols] for row in M]


def iter_codewords(F: GaloisField, G, chunk: int = 1 << 16):
    """Yield (info, codeword) numpy blocks covering every info vector of G."""
    import numpy as np

    k = len(G)
    q = F.q
    total = q**k
    Gm = np.asarray(G, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        info = np.empty((idx.size, k), dtype=np.int64)
        rest = idx.copy()
        for i in range(k - 1, -1, -1):
            info[:, i] = rest % q
            rest //= q
        yield info, F.vmatmul(info, Gm)


def min_distance(F: GaloisField, G, budget: int = 1 << 20) -> int:
    """Exact minimum nonzero weight of the row space of G by enumeration."""
    import numpy as np

    from .errors import TooLarge

    if F.q ** len(G) > budget:
        raise TooLarge(f"q^k = {F.q ** len(G)} exceeds {budget}")
    best = None
    for info, cw in iter_codewords(F, G):
        w = np.count_nonzero(cw, axis=1)
        nz = np.any(info != 0, axis=1)
        if nz.any():
            m = int(w[nz].min())
            best = m if best is None else min(best, m)
    return best if best is not None else 0


def weight_distribution(F: GaloisField, G, budget: int = 1 << 20) -> list[int]:
    import numpy as np

    from .errors import TooLarge

    if F.q ** len(G) > budget:
        raise TooLarge("code too large to enumerate")
    n = len(G[0])
    dist = np.zeros(n + 1, dtype=np.int64)
    for _, cw in iter_codewords(F, G):
        dist += np.bincount(np.count_nonzero(cw, axis=1), minlength=n + 1)
    return [int(x) for x in dist]
