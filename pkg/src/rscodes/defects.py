"""Memories with stuck-at defects: additive matchers (one defect, two-defect
matrix, random Kuznetsov-Tsybakov matrices), the parity extreme, linear and
RS symbol matchers with optional error correction, the KT existence bound and
two-write WOM coding.

A defect vector is a length-n list with None for a free cell and the stuck
value (bit or field symbol) otherwise.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .capacity import h2
from .errors import BadParameters, CapacityExceeded, DecodeFailure, TooLarge, Unmatchable
from .galois import GaloisField
from .rng import stream
from .rs import RsCode

F2 = GaloisField.prime(2)


def matches(word, defects) -> bool:
    return all(d is None or w == d for w, d in zip(word, defects))


def defect_count(defects) -> int:
    return sum(d is not None for d in defects)


def parse_image(text: str) -> list[int | None]:
    """Memory image tokens: '.' or '?' free, S0/S1 (or 0/1) stuck."""
    out: list[int | None] = []
    for tok in text.replace(",", " ").split():
        t = tok.upper()
        if t in (".", "?", "F"):
            out.append(None)
        elif t in ("S0", "0"):
            out.append(0)
        elif t in ("S1", "1"):
            out.append(1)
        else:
            raise BadParameters(f"bad memory token {tok!r}")
    return out


def format_image(defects) -> str:
    return " ".join("." if d is None else f"S{d}" for d in defects)


def _check_defects(defects, n: int, capability: int):
    if len(defects) != n:
        raise BadParameters(f"defect vector must have length {n}")
    if defect_count(defects) > capability:
        raise Unmatchable(f"{defect_count(defects)} defects exceed capability {capability}")


# additive (row-selection) matchers
class AdditiveMatcher:
    """Store x~ = (0^L, x) XOR c for the first row c of C making it defect
    compatible; the reader identifies c by its length-L prefix."""

    def __init__(self, C, prefix: int, capability: int, name: str = "additive"):
        C = [list(map(int, r)) for r in C]
        if len({tuple(r[:prefix]) for r in C}) != len(C):
            raise BadParameters("row prefixes must be distinct")
        self.C, self.L, self.capability, self.name = C, prefix, capability, name
        self.n = len(C[0])
        self.k = self.n - prefix
        self._by_prefix = {tuple(r[:prefix]): r for r in C}

    @property
    def rate(self) -> float:
        return self.k / self.n

    def write(self, x, defects) -> list[int]:
        if len(x) != self.k:
            raise BadParameters(f"need {self.k} information bits")
        if len(defects) != self.n:
            raise BadParameters(f"defect vector must have length {self.n}")
        xt = [0] * self.L + [int(b) for b in x]
        for row in self.C:
            c = [a ^ b for a, b in zip(xt, row)]
            if matches(c, defects):
                return c
        raise Unmatchable("no row of the matching matrix fits the defects")

    def read(self, stored) -> list[int]:
        row = self._by_prefix.get(tuple(stored[: self.L]))
        if row is None:
            raise DecodeFailure("prefix names no row")
        return [a ^ b for a, b in zip(stored[self.L:], row[self.L:])]


def one_defect(n: int) -> AdditiveMatcher:
    """(0, x) or (1, complement of x): one defect, rate 1 - 1/n."""
    return AdditiveMatcher([[0] * n, [1] * n], 1, 1, "one-defect")


def identity_matcher(n: int) -> AdditiveMatcher:
    """No redundancy, no defects tolerated."""
    return AdditiveMatcher([[0] * n], 0, 0, "identity")


TWO_DEFECT_ALPHA3 = (
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 1, 0, 1, 1, 0, 1, 1, 1),
    (0, 1, 0, 1, 0, 1, 1, 0, 1, 1),
    (1, 1, 0, 0, 1, 0, 1, 1, 0, 1),
    (1, 0, 1, 1, 0, 0, 1, 1, 1, 0),
    (1, 1, 1, 1, 1, 1, 0, 0, 0, 0),
)


def two_defect_matrix(alpha: int) -> tuple[list[list[int]], int]:
    """(C, prefix length): weight-alpha columns of length 2 alpha - 1, a zero
    row on top, and ceil(log2 2 alpha) columns with distinct rows moved first.
    alpha = 3 returns the canonical displayed instance."""
    if alpha < 2:
        raise BadParameters("need alpha >= 2")
    L = math.ceil(math.log2(2 * alpha))
    if alpha == 3:
        return [list(r) for r in TWO_DEFECT_ALPHA3], L
    cols = []
    for ones in itertools.combinations(range(2 * alpha - 1), alpha):
        col = [0] * (2 * alpha)
        for i in ones:
            col[i + 1] = 1
        cols.append(col)
    for pick in itertools.combinations(range(len(cols)), L):
        rows = {tuple(cols[j][i] for j in pick) for i in range(2 * alpha)}
        if len(rows) == 2 * alpha:
            order = list(pick) + [j for j in range(len(cols)) if j not in pick]
            return [[cols[j][i] for j in order] for i in range(2 * alpha)], L
    raise BadParameters("no distinct-prefix column set")  # pragma: no cover


def two_defect(alpha: int) -> AdditiveMatcher:
    C, L = two_defect_matrix(alpha)
    return AdditiveMatcher(C, L, 2, f"two-defect(alpha={alpha})")


def pair_coverage(C) -> bool:
    """Every column pair shows all four bit pairs in some row."""
    n = len(C[0])
    for i, j in itertools.combinations(range(n), 2):
        if len({(r[i], r[j]) for r in C}) != 4:
            return False
    return True


def kt_random(n: int, k: int, seed: int) -> AdditiveMatcher:
    """Random KT matrix: 2^(n-k) rows, prefix = row index in binary, uniform
    random last k columns.  Matching is not guaranteed for any t."""
    r = n - k
    if r < 0 or r > 20:
        raise BadParameters("need 0 <= n - k <= 20")
    rng = stream(seed)
    C = []
    for idx in range(2**r):
        prefix = [(idx >> (r - 1 - b)) & 1 for b in range(r)]
        C.append(prefix + rng.integers(0, 2, k).tolist())
    return AdditiveMatcher(C, r, 0, "kt-random")


def kt_useless_probability(n: int, k: int, u: int, v: int) -> float:
    """Probability that a random KT matrix cannot match one fixed defect
    vector with u defects in the prefix and v in the last k cells."""
    return (1 - 2.0**-v) ** (2 ** (n - k - u))


@dataclass
class KtBound:
    log_F: float
    F_bound: float
    R_bound: float


def _log_choose(n: int, t: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(t + 1) - math.lgamma(n - t + 1)


def kt_bound(n: int, k: int, t: int) -> KtBound:
    """ln F <= -2^(n-k-t) + ln(C(n,t) 2^t); F < 1 for
    k/n <= 1 - t/n - (1/n) log2 ln(C(n,t) 2^t)."""
    if not 0 <= t <= n or not 0 <= k <= n or n - k - t < 0:
        raise BadParameters("need n - k - t >= 0")
    ln_patterns = _log_choose(n, t) + t * math.log(2)
    e = n - k - t
    log_F = -math.inf if e > 1000 else -(2.0**e) + ln_patterns
    F = math.exp(min(0.0, log_F))
    R = 1.0 if ln_patterns == 0 else min(1.0, 1 - t / n - math.log2(ln_patterns) / n)
    return KtBound(log_F, F, R)


# parity extreme
class ParityMatcher:
    """One bit in n cells as the word parity; works with up to n - 1 defects."""

    name = "parity"

    def __init__(self, n: int):
        self.n, self.k, self.capability = n, 1, n - 1

    @property
    def rate(self) -> float:
        return 1 / self.n

    def write(self, x, defects) -> list[int]:
        bit = int(x[0]) if not isinstance(x, int) else x
        _check_defects(defects, self.n, self.capability)
        word = [0 if d is None else d for d in defects]
        free = [i for i, d in enumerate(defects) if d is None]
        if sum(word) % 2 != bit:
            word[free[0]] ^= 1
        return word

    def read(self, stored) -> list[int]:
        return [sum(stored) % 2]


# linear matchers
class LinearMatcher:
    """Stored word (c, x) G: the first m rows of G are matching rows whose
    coefficients c are solved from the defect equations, the rest carry x.
    An optional decoder maps a noisy word to the nearest codeword of G
    before (c, x) is recovered."""

    def __init__(self, F: GaloisField, G, m: int, decoder=None, name: str = "linear"):
        G = [list(r) for r in G]
        if la.rank(F, G) != len(G):
            raise BadParameters("G must have full row rank")
        if not 0 <= m <= len(G):
            raise BadParameters("bad number of matching rows")
        self.F, self.G, self.m, self.decoder, self.name = F, G, m, decoder, name
        self.n = len(G[0])
        self.k = len(G) - m
        self.capability = matching_capability(F, G[:m], self.n)

    @property
    def rate(self) -> float:
        return self.k / self.n

    def write(self, x, defects) -> list[int]:
        F = self.F
        if len(x) != self.k:
            raise BadParameters(f"need {self.k} information symbols")
        if len(defects) != self.n:
            raise BadParameters(f"defect vector must have length {self.n}")
        base = la.vec_mat(F, [0] * self.m + list(x), self.G)
        pos = [j for j, d in enumerate(defects) if d is not None]
        c = [0] * self.m
        if pos:
            A = [[self.G[i][j] for j in pos] for i in range(self.m)]
            b = [F.sub(defects[j], base[j]) for j in pos]
            c = la.solve_left(F, A, b) if self.m else (None if any(b) else [])
            if c is None:
                raise Unmatchable("defect equations have no solution")
        word = la.vec_mat(F, list(c) + list(x), self.G)
        return word

    def read(self, stored) -> list[int]:
        word = list(stored)
        if self.decoder is not None:
            word = self.decoder(word)
        msg = la.solve_left(self.F, self.G, word)
        if msg is None:
            raise DecodeFailure("word is not in the code")
        return msg[self.m:]


def matching_capability(F: GaloisField, M, n: int) -> int:
    """Largest s with every s columns of M independent (d of the code with
    parity-check matrix M, minus one)."""
    if not M:
        return 0
    null = la.nullspace(F, M)
    if not null:
        return n
    return la.min_distance(F, null) - 1


def nearest_codeword_decoder(F: GaloisField, G, budget: int = 1 << 16):
    """Minimum-distance decoding by enumeration; ties raise DecodeFailure."""
    if F.q ** len(G) > budget:
        raise TooLarge("code too large for enumeration")
    words = np.concatenate([cw for _, cw in la.iter_codewords(F, G)])

    def decode(r):
        dist = np.count_nonzero(words != np.asarray(r), axis=1)
        best = np.flatnonzero(dist == dist.min())
        if best.size > 1:
            raise DecodeFailure("tie between nearest codewords")
        return words[best[0]].tolist()

    return decode


def matching_generator(G_sys) -> list[list[int]]:
    """[[I_(n-k), H^T], [0, I_k]] from a binary systematic [I_k | H]."""
    k, n = len(G_sys), len(G_sys[0])
    H = [row[k:] for row in G_sys]
    top = [[int(i == j) for j in range(n - k)] + [H[c][i] for c in range(k)] for i in range(n - k)]
    bottom = [[0] * (n - k) + [int(i == j) for j in range(k)] for i in range(k)]
    return top + bottom


def linear_matcher(G_sys) -> LinearMatcher:
    """Matches any d_min - 1 defects of the base code [I_k | H]."""
    G = matching_generator(G_sys)
    return LinearMatcher(F2, G, len(G_sys[0]) - len(G_sys), name="linear")


def combined_matcher(G, m: int) -> LinearMatcher:
    """Binary generator whose first m rows match defects; reading corrects
    random errors by nearest-codeword decoding first."""
    return LinearMatcher(F2, G, m, nearest_codeword_decoder(F2, G), name="combined")


def rs_symbol_matcher(F: GaloisField, n: int, k: int, delta: int) -> LinearMatcher:
    """(c^(n-k), x^(k-delta)) G_(n-delta,n): matches n - k symbol defects and
    corrects floor(delta/2) symbol errors."""
    if not 0 <= delta <= k - 1 or not 0 <= n - k:
        raise BadParameters("need 0 <= delta < k <= n")
    code = RsCode(F, n, n - delta)

    def decode(r):
        if delta == 0:
            return r
        res = code.decode_errors(r)
        if not res.ok:
            raise DecodeFailure("RS decoding failed")
        return code.encode(res.info)

    return LinearMatcher(F, code.G, n - k, decode, name=f"rs-symbol(delta={delta})")


# WOM
def wom_messages(n: int, w: int) -> int:
    return sum(math.comb(n, i) for i in range(w + 1))


def rank_pattern(pattern) -> int:
    """Index of a binary pattern among all patterns ordered by weight, then
    lexicographically by the sorted positions of its ones."""
    n = len(pattern)
    ones = [i for i, b in enumerate(pattern) if b]
    w = len(ones)
    idx = wom_messages(n, w - 1) if w else 0
    prev = -1
    for j, p in enumerate(ones):
        for skip in range(prev + 1, p):
            idx += math.comb(n - 1 - skip, w - 1 - j)
        prev = p
    return idx


def unrank_pattern(n: int, index: int) -> list[int]:
    w = 0
    while index >= math.comb(n, w):
        index -= math.comb(n, w)
        w += 1
        if w > n:
            raise BadParameters("index out of range")
    out = [0] * n
    p = 0
    for j in range(w):
        while True:
            cnt = math.comb(n - 1 - p, w - 1 - j)
            if index < cnt:
                break
            index -= cnt
            p += 1
        out[p] = 1
        p += 1
    return out


def total_rate(p: float) -> float:
    """Two-write WOM asymptotic rate h(p) + (1 - p) bit per cell."""
    return h2(p) + (1 - p)


def wom_two_write(n: int, w: int, message1: int, message2, code) -> tuple[list[int], list[int]]:
    """First write: message1 < sum_(i<=w) C(n,i) as a hole pattern of weight
    <= w.  Second write: message2 through a matcher that treats the holes as
    stuck-at-1 cells and only adds holes."""
    M = wom_messages(n, w)
    if not 0 <= message1 < M:
        raise CapacityExceeded(f"first write holds {M} messages")
    if code.n != n:
        raise BadParameters("matcher length differs from the card")
    if code.capability < w:
        raise CapacityExceeded(f"matcher handles {code.capability} defects, first write may punch {w}")
    card1 = unrank_pattern(n, message1)
    defects = [1 if b else None for b in card1]
    card2 = code.write(list(message2), defects)
    if any(a > b for a, b in zip(card1, card2)):
        raise CapacityExceeded("second write would close a hole")  # pragma: no cover
    return card1, card2


def wom_read(card1, card2, code) -> tuple[int, list[int]]:
    return rank_pattern(card1), code.read(card2)
