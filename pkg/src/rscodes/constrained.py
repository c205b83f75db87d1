"""Constrained outputs from RS codes: forbidden-symbol avoidance with control
words, RLL block codes with 1-symbol look-ahead and soft decoding, distance
profiles under row deletion/extension, and the same-weight coset code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import linalg as la
from .errors import (BadParameters, ConstraintViolation, DecodeFailure, NoControlWord, TooLarge,
                     TooManyErasures)
from .galois import GaloisField
from .rs import RsCode


# symbol avoidance
class AvoidanceConfig:
    """Systematic (n, k) code with k = kappa + r: kappa information symbols,
    r control symbols chosen so that no codeword symbol lies in A."""

    def __init__(self, rs: RsCode, kappa: int, r: int, A, allow_infeasible: bool = False):
        F = rs.field
        if kappa < 0 or r < 1 or kappa + r != rs.k:
            raise BadParameters("need kappa + r = k with r >= 1")
        A = frozenset(int(a) for a in A)
        if any(not 0 <= a < F.q for a in A):
            raise BadParameters("forbidden symbols must be field elements")
        if len(A) >= F.q:
            raise BadParameters("A leaves no usable symbol")
        self.rs, self.F, self.kappa, self.r, self.A = rs, F, kappa, r, A
        self.n, self.k = rs.n, rs.k
        self.G = rs.G_sys
        self.alphabet = [s for s in range(F.q) if s not in A]
        if not (self.feasible or allow_infeasible):
            raise BadParameters("n - (kappa + r) >= (q - |A|)/|A|: a control word is not guaranteed")

    @property
    def feasible(self) -> bool:
        a = len(self.A)
        return a == 0 or (self.n - self.k) * a < self.F.q - a

    def codeword(self, m, s) -> list[int]:
        return la.vec_mat(self.F, list(m) + list(s), self.G)

    def controls(self):
        """Control words in search order: lexicographic over (alphabet minus A)^r."""
        return itertools.product(self.alphabet, repeat=self.r)

    def _check_info(self, m):
        if len(m) != self.kappa:
            raise BadParameters(f"need {self.kappa} information symbols")
        if any(x in self.A for x in m):
            raise BadParameters("information symbols must avoid A")


def control_candidates(cfg: AvoidanceConfig, m) -> list[tuple[int, ...]]:
    """Every control word whose codeword avoids A."""
    cfg._check_info(m)
    return [s for s in cfg.controls() if not cfg.A.intersection(cfg.codeword(m, s))]


def avoid_encode(cfg: AvoidanceConfig, m) -> list[int]:
    cfg._check_info(m)
    for s in cfg.controls():
        c = cfg.codeword(m, s)
        if not cfg.A.intersection(c):
            return c
    raise NoControlWord(f"no control word avoids {sorted(cfg.A)} for {list(m)}")


def avoid_decode(cfg: AvoidanceConfig, c) -> list[int]:
    return list(c[: cfg.kappa])


# RLL codes
@dataclass(frozen=True)
class RllCode:
    """Block RLL code: message i maps to one of table[i] (alternatives chosen
    by look-ahead).  d + 1 is the minimum run length."""

    d: int
    table: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        lengths = {len(w) for alts in self.table for w in alts}
        if len(lengths) != 1:
            raise BadParameters("all RLL words must have one length")
        words = [w for alts in self.table for w in alts]
        if len(set(words)) != len(words):
            raise BadParameters("RLL words must be distinct")

    @property
    def length(self) -> int:
        return len(self.table[0][0])

    @property
    def rate(self) -> Fraction:
        """Message bits per RLL bit (log2 of the message count over the length)."""
        return Fraction(len(self.table).bit_length() - 1, self.length)

    @property
    def d_min(self) -> int:
        """Minimum Hamming distance between words of different messages."""
        best = self.length
        for (i, a), (j, b) in itertools.combinations(enumerate(self.table), 2):
            for u in a:
                for v in b:
                    best = min(best, sum(x != y for x, y in zip(u, v)))
        return best

    def words(self) -> list[tuple[int, str]]:
        return [(i, w) for i, alts in enumerate(self.table) for w in alts]


RLL_D1_CODE = RllCode(1, (
    ("00011",), ("00111",), ("11000",), ("11100",),
    ("00001", "00110"), ("11110", "11001"), ("01111", "10011"), ("10000", "01100"),
))


def runs(bits) -> list[int]:
    out = []
    prev = None
    for b in bits:
        if b == prev:
            out[-1] += 1
        else:
            out.append(1)
            prev = b
    return out


def min_interior_run(bits) -> int | None:
    """Shortest run excluding the first and last (open) runs; None if there is none."""
    r = runs(bits)[1:-1]
    return min(r) if r else None


def _interior_ok(bits: str, d: int) -> bool:
    m = min_interior_run(bits)
    return m is None or m >= d + 1


def rll_encode(code: RllCode, messages) -> str:
    """Concatenate RLL words, choosing among alternatives with 1-symbol
    look-ahead so that every closed run has length >= d + 1."""
    msgs = list(messages)
    L = code.length
    out = ""
    for i, msg in enumerate(msgs):
        if not 0 <= msg < len(code.table):
            raise BadParameters(f"message {msg} outside the code table")
        tail = out[-2 * L:]
        nxt = code.table[msgs[i + 1]] if i + 1 < len(msgs) else None
        for c in code.table[msg]:
            if not _interior_ok(tail + c, code.d):
                continue
            if nxt is None or any(_interior_ok(tail + c + c2, code.d) for c2 in nxt):
                out += c
                break
        else:
            raise ConstraintViolation(f"no legal word for message {msg} at block {i}")
    return out


def rll_decode_hard(code: RllCode, bits: str) -> list[int]:
    L = code.length
    if len(bits) % L or set(bits) - {"0", "1"}:
        raise ConstraintViolation("stream is not a whole number of binary RLL words")
    if not _interior_ok(bits, code.d):
        raise ConstraintViolation(f"run shorter than {code.d + 1}")
    lookup = {w: i for i, w in code.words()}
    out = []
    for j in range(0, len(bits), L):
        w = bits[j: j + L]
        if w not in lookup:
            raise ConstraintViolation(f"unknown RLL word {w} at block {j // L}")
        out.append(lookup[w])
    return out


def rll_decode_soft(code: RllCode, soft) -> list[int]:
    """Per block argmax_i sum_j c_j^i s_j with c = +1 for bit 1, -1 for bit 0."""
    s = np.asarray(soft, dtype=float).reshape(-1, code.length)
    msgs, words = zip(*code.words())
    C = np.array([[1.0 if b == "1" else -1.0 for b in w] for w in words])
    return [msgs[i] for i in np.argmax(s @ C.T, axis=1)]


def rll_generate(length: int, d: int, d_min: int) -> RllCode:
    """Words whose runs (boundary runs included) are all >= d + 1, so any
    concatenation is legal; greedy lexicographic selection at distance d_min."""
    chosen: list[str] = []
    for t in itertools.product("01", repeat=length):
        w = "".join(t)
        if min(runs(w)) < d + 1:
            continue
        if all(sum(x != y for x, y in zip(w, v)) >= d_min for v in chosen):
            chosen.append(w)
    if not chosen:
        raise BadParameters("no word satisfies the run constraint")
    return RllCode(d, tuple((w,) for w in chosen))


def rate_product(k: int, n: int, r_rll, d: int) -> Fraction:
    """(k/n) R_RLL (d+1); equal to 1 means no bandwidth expansion."""
    return Fraction(k, n) * Fraction(r_rll) * (d + 1)


def rs_pairing(n: int, r_rll, d: int) -> int:
    """Largest k with (k/n) R_RLL (d+1) <= 1."""
    k = int(Fraction(n) / (Fraction(r_rll) * (d + 1)))
    if k < 1:
        raise BadParameters("no RS dimension fits")
    return min(k, n)


# distance profiles
@dataclass
class DistanceProfile:
    """deletion: (d_k, ..., d_1); extension: (delta_1, ..., delta_k).  matrix is
    an encoder whose first i rows generate the i-th sub-code."""

    direction: str
    values: tuple[int, ...]
    matrix: list[list[int]]


def distance_profile(F: GaloisField, G, direction: str) -> DistanceProfile:
    k = len(G)
    d = [la.min_distance(F, G[:i]) for i in range(1, k + 1)]
    if direction == "deletion":
        return DistanceProfile(direction, tuple(reversed(d)), [list(r) for r in G])
    if direction == "extension":
        return DistanceProfile(direction, tuple(d), [list(r) for r in G])
    raise BadParameters(f"unknown direction {direction!r}")


def rs_profile(n: int, k: int, direction: str) -> tuple[int, ...]:
    if direction == "deletion":
        return tuple(range(n - k + 1, n + 1))
    if direction == "extension":
        return tuple(range(n, n - k, -1))
    raise BadParameters(f"unknown direction {direction!r}")


def _normalized(F: GaloisField, length: int):
    """Nonzero vectors with leading nonzero entry 1 (one per 1-dim subspace)."""
    for p in range(length):
        for rest in itertools.product(range(F.q), repeat=length - p - 1):
            yield [0] * p + [1] + list(rest)


class _Lattice:
    """Subspaces of the message space F^k, keyed by RREF, with sub-code d_min."""

    def __init__(self, F: GaloisField, G):
        self.F, self.G, self.k = F, [list(r) for r in G], len(G)

    def key(self, rows) -> tuple:
        R, piv, _ = la.rref(self.F, rows)
        return tuple(tuple(r) for r in R[: len(piv)])

    @lru_cache(maxsize=None)
    def dmin(self, key) -> int:
        return la.min_distance(self.F, la.mat_mul(self.F, [list(r) for r in key], self.G))

    def hyperplanes(self, key) -> list[tuple]:
        B = [list(r) for r in key]
        out = {}
        for f in _normalized(self.F, len(B)):
            ker = la.nullspace(self.F, [f])
            out.setdefault(self.key(la.mat_mul(self.F, ker, B)), None)
        return list(out)

    def superspaces(self, key) -> list[tuple]:
        B = [list(r) for r in key]
        _, piv, _ = la.rref(self.F, B)
        free = [c for c in range(self.k) if c not in piv]
        out = []
        for y in _normalized(self.F, len(free)):
            v = [0] * self.k
            for c, val in zip(free, y):
                v[c] = val
            out.append(self.key(B + [v]))
        return out

    def lines(self) -> list[tuple]:
        return [self.key([v]) for v in _normalized(self.F, self.k)]

    def encoder(self, chain) -> list[list[int]]:
        """Rows r_1..r_k with span(r_1..r_i) = chain[i-1], mapped through G."""
        rows: list[list[int]] = []
        for key in chain:
            for v in key:
                if la.rank(self.F, rows + [list(v)]) > len(rows):
                    rows.append(list(v))
                    break
        return la.mat_mul(self.F, rows, self.G)


EXHAUSTIVE_MAX_K = 4
EXHAUSTIVE_MAX_WORDS = 1 << 16


def odp(F: GaloisField, G, direction: str, mode: str = "exhaustive") -> DistanceProfile:
    """Best distance profile over all encoders of the code spanned by G.

    exhaustive: lexicographic optimum over every chain of sub-codes (deletion
    compares d_k, d_(k-1), ... in turn, extension delta_1, delta_2, ...).
    greedy: each step takes the sub-code (deletion) or super-code (extension)
    with the largest next minimum distance, first found on ties.
    """
    k = len(G)
    if la.rank(F, G) != k:
        raise BadParameters("G must have full row rank")
    if direction not in ("deletion", "extension"):
        raise BadParameters(f"unknown direction {direction!r}")
    if mode not in ("exhaustive", "greedy"):
        raise BadParameters(f"unknown mode {mode!r}")
    if mode == "exhaustive" and (k > EXHAUSTIVE_MAX_K or F.q**k > EXHAUSTIVE_MAX_WORDS):
        raise TooLarge(f"exhaustive profile search limited to k <= {EXHAUSTIVE_MAX_K}, q^k <= {EXHAUSTIVE_MAX_WORDS}")
    lat = _Lattice(F, G)
    full = lat.key(la.identity(k))

    if direction == "deletion":
        if mode == "greedy":
            chain = [full]
            while len(chain[-1]) > 1:
                chain.append(max(lat.hyperplanes(chain[-1]), key=lat.dmin))
        else:
            @lru_cache(maxsize=None)
            def best(key):
                if len(key) == 1:
                    return (lat.dmin(key),), (key,)
                tails = [best(w) for w in lat.hyperplanes(key)]
                vals, ch = max(tails, key=lambda t: t[0])
                return (lat.dmin(key),) + vals, (key,) + ch

            chain = list(best(full)[1])
        values = tuple(lat.dmin(c) for c in chain)
        return DistanceProfile(direction, values, lat.encoder(chain[::-1]))

    if mode == "greedy":
        chain = [max(lat.lines(), key=lat.dmin)]
        while len(chain[-1]) < k:
            chain.append(max(lat.superspaces(chain[-1]), key=lat.dmin))
    else:
        @lru_cache(maxsize=None)
        def best_up(key):
            if len(key) == k:
                return (lat.dmin(key),), (key,)
            tails = [best_up(w) for w in lat.superspaces(key)]
            vals, ch = max(tails, key=lambda t: t[0])
            return (lat.dmin(key),) + vals, (key,) + ch

        chain = list(max((best_up(v) for v in lat.lines()), key=lambda t: t[0])[1])
    values = tuple(lat.dmin(c) for c in chain)
    return DistanceProfile(direction, values, lat.encoder(chain))


# same-weight construction
class SameWeightCode:
    """Coset of the (n, k) RS code C1 (first k rows of the canonical
    G_(k+1,n)) shifted by the last row alpha^(k j).  No symbol occurs more
    than k times in a codeword; d_min = n - k + 1."""

    def __init__(self, field: GaloisField, n: int, k: int):
        if not 1 <= k < n:
            raise BadParameters("need 1 <= k < n")
        self.field, self.n, self.k = field, n, k
        self.big = RsCode(field, n, k + 1)
        self.c1 = RsCode(field, n, k)
        self.offset = self.big.G[k]

    def encode(self, x) -> list[int]:
        return la.vec_add(self.field, self.c1.encode(x), self.offset)

    def decode(self, received, erasures=()) -> list[int]:
        r = [0 if s is None else s for s in received]
        try:
            res = self.c1.decode_errors_and_erasures(la.vec_sub(self.field, r, self.offset), list(erasures))
        except TooManyErasures as e:
            raise DecodeFailure(str(e)) from e
        if not res.ok:
            raise DecodeFailure("RS decoding failed")
        return list(res.info)

    def decode_detections(self, detected, disturbed) -> list[int]:
        """MFSK detections (one symbol set per position) under permanent
        narrowband disturbances on the symbols in ``disturbed``: those symbols
        are removed and positions left without a unique symbol are erased."""
        dist = set(disturbed)
        word, erasures = [], []
        for i, s in enumerate(detected):
            rest = set(s) - dist
            if len(rest) == 1:
                word.append(rest.pop())
            else:
                word.append(None)
                erasures.append(i)
        return self.decode(word, erasures)

    @staticmethod
    def max_multiplicity(word) -> int:
        return max(list(word).count(s) for s in set(word))


def nb_correctable(n: int, k: int) -> int:
    """Largest number NB of narrowband disturbances with NB < (n-k+1)/k."""
    return (n - k) // k
