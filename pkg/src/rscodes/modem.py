"""Antipodal AWGN transmission, single parity check (SPC) soft decoding, RS
codes concatenated with SPC checks, MFSK threshold detection and permutation
codes.

Bits map to signals as 1 -> +d/2 and 0 -> -d/2.  Symbols of GF(2^m) are carried
as m bits, least significant bit first.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .capacity import q_func, q_inv
from .errors import Ambiguous, BadParameters, DecodingStopped
from .galois import GaloisField
from .report import SimReport
from .rng import chunks, stream
from .rs import RsCode, rs_new

MAX_PASSES = 3


# AWGN channel
@dataclass
class AwgnChannel:
    """Antipodal signalling with amplitude d/2 per transmitted bit.

    E_s = amplitude^2 is the energy per transmitted bit and E_b = E_s / rate the
    energy per information bit.  The channel owns its generator.
    """

    sigma2: float
    amplitude: float = 1.0
    rate: float = 1.0
    seed: int = 0
    rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise BadParameters("sigma2 must be > 0")
        if not 0 < self.rate <= 1:
            raise BadParameters("rate must lie in (0, 1]")
        self.rng = stream(self.seed)

    @classmethod
    def from_ebn0_db(cls, ebn0_db: float, rate: float = 1.0, amplitude: float = 1.0, seed: int = 0):
        eb = amplitude**2 / rate
        n0 = eb / 10 ** (ebn0_db / 10)
        return cls(sigma2=n0 / 2, amplitude=amplitude, rate=rate, seed=seed)

    @property
    def d(self) -> float:
        return 2 * self.amplitude

    @property
    def Es(self) -> float:
        return self.amplitude**2

    @property
    def Eb(self) -> float:
        return self.Es / self.rate


def modulate(bits, amplitude: float = 1.0) -> np.ndarray:
    return amplitude * (2 * np.asarray(bits, dtype=np.float64) - 1)


def awgn(channel: AwgnChannel, bits) -> np.ndarray:
    s = modulate(bits, channel.amplitude)
    return s + channel.rng.normal(0.0, math.sqrt(channel.sigma2), s.shape)


def hard(soft) -> np.ndarray:
    return (np.asarray(soft) > 0).astype(np.int8)


def p_bsc(channel: AwgnChannel) -> float:
    return q_func(math.sqrt(channel.d**2 / (4 * channel.sigma2)))


def spc_soft_decode(soft, axis: int = -1, parity=0) -> np.ndarray:
    """Hard decisions, with the least reliable bit inverted when the parity
    differs from ``parity`` (0 for an even parity code)."""
    soft = np.asarray(soft, dtype=np.float64)
    bits = hard(soft)
    odd = (bits.sum(axis=axis, keepdims=True) + np.expand_dims(np.asarray(parity), axis)) % 2 == 1
    weakest = np.argmin(np.abs(soft), axis=axis)
    flip = np.zeros_like(bits)
    np.put_along_axis(flip, np.expand_dims(weakest, axis), 1, axis=axis)
    return bits ^ (flip & odd).astype(np.int8)


# symbol <-> bit conversion
def symbols_to_bits(symbols, m: int) -> np.ndarray:
    s = np.asarray(symbols, dtype=np.int64)
    return ((s[..., None] >> np.arange(m)) & 1).astype(np.int8)


def bits_to_symbols(bits) -> np.ndarray:
    b = np.asarray(bits, dtype=np.int64)
    return (b << np.arange(b.shape[-1])).sum(axis=-1)


def rs_decode_rows(code: RsCode, words) -> tuple[np.ndarray, np.ndarray]:
    """Decode each row of a W x n label array; returns (decoded, failed)."""
    words = np.asarray(words, dtype=np.int64)
    out = words.copy()
    failed = np.zeros(len(words), dtype=bool)
    S = code.field.vmatmul(words, np.asarray(code.H_T, dtype=np.int64))
    for i in np.flatnonzero(S.any(axis=1)):
        res = code.decode_errors(words[i].tolist())
        if res.ok:
            out[i] = res.codeword
        else:
            failed[i] = True
    return out, failed


def _binary_code(code: RsCode) -> int:
    if code.field.kind != "binary":
        raise BadParameters("RS + SPC needs a code over GF(2^m)")
    return code.field.m


# structure A: a parity bit per RS symbol
class RsSpcSymbol:
    """Every RS symbol is sent as its m bits plus an even parity bit."""

    def __init__(self, code: RsCode):
        self.code = code
        self.m = _binary_code(code)

    @property
    def rate(self) -> float:
        return self.code.k / self.code.n * self.m / (self.m + 1)

    def bits(self, symbols) -> np.ndarray:
        b = symbols_to_bits(symbols, self.m)
        return np.concatenate([b, b.sum(axis=-1, keepdims=True) % 2], axis=-1).astype(np.int8)

    def encode(self, info) -> np.ndarray:
        """n x (m + 1) bit array of the systematic codeword of ``info``."""
        return self.bits(self.code.encode_systematic(list(info)))

    def symbols(self, soft) -> np.ndarray:
        """Per-symbol SPC soft decision; returns labels with the parity bit dropped."""
        return bits_to_symbols(spc_soft_decode(soft)[..., : self.m])

    def decode(self, soft):
        return self.code.decode_errors(self.symbols(soft).tolist())

    def decode_batch(self, soft) -> tuple[np.ndarray, np.ndarray]:
        """soft has shape (W, n, m + 1); returns (codewords, failed)."""
        return rs_decode_rows(self.code, self.symbols(soft))


# structure B: N rows of RS words, the last being the XOR of the others
@dataclass
class BlockResult:
    rows: np.ndarray
    info: np.ndarray
    actions: list
    flagged: list
    passes: int
    stopped: bool = False


class BlockRsSpc:
    """N rows of RS codewords; row N-1 is the bitwise XOR of rows 0..N-2 so that
    every bit column is an SPC word across the rows."""

    def __init__(self, code: RsCode, N: int):
        if N < 2:
            raise BadParameters("N >= 2")
        self.code, self.N = code, N
        self.m = _binary_code(code)

    @property
    def rate(self) -> float:
        return self.code.k / self.code.n * (self.N - 1) / self.N

    def encode(self, info) -> np.ndarray:
        """(N-1) x k info labels -> N x n x m bit array."""
        info = np.asarray(info, dtype=np.int64)
        if info.shape != (self.N - 1, self.code.k):
            raise BadParameters(f"info must have shape {(self.N - 1, self.code.k)}")
        rows = [self.code.encode_systematic(r.tolist()) for r in info]
        rows.append(np.bitwise_xor.reduce(np.asarray(rows), axis=0))
        return symbols_to_bits(np.asarray(rows), self.m)

    def select_row(self, soft, rows, E) -> int:
        """Row whose likelihood gains most when E is added to it, evaluated only
        on the bits where E is 1."""
        eb = symbols_to_bits(E, self.m).astype(bool)
        s = modulate(symbols_to_bits(rows, self.m))
        gain = -(soft * s)[:, eb].sum(axis=1)
        return int(np.argmax(gain))

    def decode(self, soft, strict: bool = False) -> BlockResult:
        soft = np.asarray(soft, dtype=np.float64)
        if soft.shape != (self.N, self.code.n, self.m):
            raise BadParameters(f"soft must have shape {(self.N, self.code.n, self.m)}")
        rows, flags = rs_decode_rows(self.code, bits_to_symbols(spc_soft_decode(soft, axis=0)))
        actions, passes, stopped = [], 1, False
        while True:
            idx = np.flatnonzero(flags)
            E = np.bitwise_xor.reduce(rows[~flags], axis=0) if (~flags).any() else np.zeros(self.code.n, np.int64)
            if len(idx) == 0:
                if E.any():
                    i = self.select_row(soft, rows, E)
                    rows[i] ^= E
                    actions.append(("likelihood", i))
                elif not actions:
                    actions.append(("clean",))
                break
            if len(idx) == 1:
                rows[idx[0]] = E
                flags[idx[0]] = False
                actions.append(("xor", int(idx[0])))
                break
            if passes >= MAX_PASSES:
                stopped = True
                break
            # column SPC restricted to the flagged rows with target parity E
            bits = spc_soft_decode(soft[idx], axis=0, parity=symbols_to_bits(E, self.m))
            new_rows, new_flags = rs_decode_rows(self.code, bits_to_symbols(bits))
            passes += 1
            actions.append(("reiterate", [int(i) for i in idx]))
            if new_flags.sum() >= len(idx):
                stopped = True
                break
            rows[idx] = new_rows
            flags[idx] = new_flags
        if stopped and strict:
            raise DecodingStopped(f"{int(flags.sum())} rows still flagged after {passes} passes")
        return BlockResult(rows, rows[: self.N - 1, : self.code.k].copy(), actions,
                           [int(i) for i in np.flatnonzero(flags)], passes, stopped)


# MFSK detection
def tone_matrix(word, M: int, offset: int = 0) -> np.ndarray:
    """M x n matrix with a 1 at (symbol - offset, t) for each transmitted symbol."""
    word = np.asarray(word, dtype=np.int64) - offset
    out = np.zeros((M, len(word)), dtype=np.int8)
    out[word, np.arange(len(word))] = 1
    return out


def mfsk_envelopes(word, M: int, Es: float, sigma2: float, rng, offset: int = 0) -> np.ndarray:
    """Envelope detector outputs: |sqrt(Es) [f sent at t] + complex Gaussian noise|."""
    sig = math.sqrt(Es) * tone_matrix(word, M, offset)
    s = math.sqrt(sigma2)
    return np.abs(sig + rng.normal(0, s, sig.shape) + 1j * rng.normal(0, s, sig.shape))


def mfsk_detect(envelopes, Es: float, offset: float = 0.0) -> np.ndarray:
    """Threshold each envelope at sqrt(Es)/2 + offset."""
    return (np.asarray(envelopes) > 0.5 * math.sqrt(Es) + offset).astype(np.int8)


def apply_disturbance(matrix, kind: str, where) -> np.ndarray:
    """Inject a disturbance into a copy of a detection matrix.

    kind: narrowband (rows set to 1), impulse (columns set to 1), fade (rows set
    to 0), background-insert / background-delete (cells set to 1 / 0).  ``where``
    lists 0-based row indices, column indices or (row, column) cells.
    """
    out = np.array(matrix, dtype=np.int8, copy=True)
    where = list(where) if isinstance(where, (list, tuple, set, np.ndarray)) else [where]
    if kind == "narrowband":
        out[where, :] = 1
    elif kind == "impulse":
        out[:, where] = 1
    elif kind == "fade":
        out[where, :] = 0
    elif kind in ("background-insert", "background-delete"):
        for f, t in where:
            out[f, t] = int(kind == "background-insert")
    else:
        raise BadParameters(f"unknown disturbance {kind!r}")
    return out


def detected_sets(matrix, offset: int = 1) -> list[tuple[int, ...]]:
    """Per time slot, the tuple of detected symbols."""
    m = np.asarray(matrix)
    return [tuple(int(f) + offset for f in np.flatnonzero(m[:, t])) for t in range(m.shape[1])]


# permutation codes
@dataclass(frozen=True)
class PermutationCode:
    M: int
    codewords: tuple
    offset: int = 1  # smallest symbol: 1 for {1..M}, 0 for field labels

    def __post_init__(self):
        alphabet = set(range(self.offset, self.offset + self.M))
        for w in self.codewords:
            if len(w) != self.M or set(w) != alphabet:
                raise BadParameters(f"{w} is not a permutation of {sorted(alphabet)}")

    def __len__(self):
        return len(self.codewords)

    @property
    def d_min(self) -> int:
        a = np.asarray(self.codewords)
        if len(a) < 2:
            return self.M
        d = (a[:, None, :] != a[None, :, :]).sum(axis=2)
        return int(d[~np.eye(len(a), dtype=bool)].min())

    def array(self) -> np.ndarray:
        return np.asarray(self.codewords, dtype=np.int64) - self.offset


LISTED = {
    (4, 4): [(1, 2, 3, 4), (2, 1, 4, 3), (3, 4, 1, 2), (4, 3, 2, 1)],
    (4, 3): [(1, 2, 3, 4), (1, 3, 4, 2), (2, 1, 4, 3), (2, 4, 3, 1), (3, 1, 2, 4), (3, 4, 1, 2),
             (4, 2, 1, 3), (4, 3, 2, 1), (1, 4, 2, 3), (2, 3, 1, 4), (3, 2, 4, 1), (4, 1, 3, 2)],
    (3, 2): [(1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1)],
    (3, 3): [(1, 2, 3), (2, 3, 1), (3, 1, 2)],
}


def perm_bound(M: int, d: int) -> int:
    if not 1 <= d <= M:
        raise BadParameters("need 1 <= d <= M")
    return math.factorial(M) // math.factorial(d - 1)


def perm_code(M: int, source: str = "rs_derived", d: int | None = None) -> PermutationCode:
    """rs_derived: words x (1,...,1) + y (0, 1, alpha, ..., alpha^(M-2)) over
    GF(M), y != 0, as field labels.  table: a listed codebook for (M, d)."""
    if source == "table":
        if (M, d) not in LISTED:
            raise BadParameters(f"no listed code for M={M}, d={d}")
        return PermutationCode(M, tuple(LISTED[(M, d)]))
    if source != "rs_derived":
        raise BadParameters(f"unknown source {source!r}")
    m = M.bit_length() - 1
    if M < 2 or 1 << m != M:
        raise BadParameters("rs_derived needs M = 2^m")
    F = GaloisField.binary(m)
    pts = [0] + [F.alpha_pow(j) for j in range(M - 1)]
    words = [tuple(F.add(x, F.mul(y, p)) for p in pts) for x in range(M) for y in range(1, M)]
    return PermutationCode(M, tuple(words), offset=0)


def perm_search(M: int, d: int, budget: int = 10**7) -> PermutationCode:
    """Largest permutation code of length M and distance >= d by branch and
    bound (maximum clique on the distance graph), stopping early once the
    cardinality bound is reached."""
    perms = list(itertools.permutations(range(1, M + 1)))
    if len(perms) > 5040:
        raise BadParameters("exhaustive search limited to M <= 7")
    a = np.asarray(perms)
    adj = (a[:, None, :] != a[None, :, :]).sum(axis=2) >= d
    target = perm_bound(M, d)
    best: list[int] = []
    nodes = 0

    def grow(clique, cand):
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise BadParameters("search budget exhausted")
        if len(clique) > len(best):
            best = list(clique)
        if len(best) == target:
            return True
        while cand:
            if len(clique) + len(cand) <= len(best):
                return False
            v = cand[0]
            if grow(clique + [v], [u for u in cand[1:] if adj[v, u]]):
                return True
            cand = cand[1:]
        return False

    # relabelling symbols preserves distance, so the identity can be fixed
    grow([0], [u for u in range(1, len(perms)) if adj[0, u]])
    return PermutationCode(M, tuple(perms[i] for i in sorted(best)))


def perm_scores(code: PermutationCode, matrix) -> np.ndarray:
    """Agreements of every codeword with the detection matrix."""
    m = np.asarray(matrix)
    if m.shape != (code.M, code.M):
        raise BadParameters(f"matrix must be {code.M} x {code.M}")
    w = code.array()
    return m[w, np.arange(code.M)].sum(axis=1)


def perm_decode(code: PermutationCode, matrix) -> int:
    """Index of the codeword with the most agreements; Ambiguous on a tie."""
    s = perm_scores(code, matrix)
    top = np.flatnonzero(s == s.max())
    if len(top) > 1:
        raise Ambiguous(f"codewords {top.tolist()} tie with {int(s.max())} agreements")
    return int(top[0])


# gains and bounds
def coding_gain(d_min: int, k: int, n: int) -> float:
    return 10 * math.log10(d_min * k / n)


def union_bound(k: int, d_min: int, R: float, eb_sigma2: float) -> float:
    """2^k Q(sqrt(d_min R E_b / sigma^2))."""
    return 2.0**k * q_func(math.sqrt(d_min * R * eb_sigma2))


def uncoded_ber(ebn0_db: float) -> float:
    return q_func(math.sqrt(2 * 10 ** (ebn0_db / 10)))


def equivalent_gain_db(ber: float, ebn0_db: float) -> float:
    """Eb/N0 saving against uncoded antipodal signalling at the same BER."""
    return 10 * math.log10(q_inv(ber) ** 2 / 2) - ebn0_db


# BER simulation
SCHEMES = ("uncoded", "spc", "rs-spc-A", "rs-spc-B")


def _scheme(scheme: str, m: int, k: int, N: int, spc_n: int):
    if scheme == "uncoded":
        return 1.0, 1
    if scheme == "spc":
        return (spc_n - 1) / spc_n, spc_n - 1
    code = rs_new(GaloisField.binary(m), (1 << m) - 1, k)
    if scheme == "rs-spc-A":
        return RsSpcSymbol(code), k * m
    if scheme == "rs-spc-B":
        return BlockRsSpc(code, N), (N - 1) * k * m
    raise BadParameters(f"unknown scheme {scheme!r}; choose from {SCHEMES}")


def _run_words(scheme, obj, words, ch_sigma, amp, rng, m, k, spc_n):
    """Simulate ``words`` coded words; returns information bit errors."""
    s = ch_sigma
    if scheme == "uncoded":
        b = rng.integers(0, 2, words)
        return int(np.count_nonzero(hard(modulate(b, amp) + rng.normal(0, s, words)) != b))
    if scheme == "spc":
        info = rng.integers(0, 2, (words, spc_n - 1)).astype(np.int8)
        cw = np.concatenate([info, info.sum(axis=1, keepdims=True) % 2], axis=1)
        r = modulate(cw, amp) + rng.normal(0, s, cw.shape)
        return int(np.count_nonzero(spc_soft_decode(r)[:, :-1] != info))
    code = obj.code
    if scheme == "rs-spc-A":
        info = rng.integers(0, 1 << m, (words, k))
        tx = np.stack([obj.encode(u.tolist()) for u in info])
        r = modulate(tx, amp) + rng.normal(0, s, tx.shape)
        dec, failed = obj.decode_batch(r)
        est = np.where(failed[:, None], obj.symbols(r)[:, :k], dec[:, :k])
        return int(np.count_nonzero(symbols_to_bits(est, m) != symbols_to_bits(info, m)))
    errs = 0
    for _ in range(words):
        info = rng.integers(0, 1 << m, (obj.N - 1, k))
        tx = obj.encode(info)
        res = obj.decode(modulate(tx, amp) + rng.normal(0, s, tx.shape))
        errs += int(np.count_nonzero(symbols_to_bits(res.info, m) != symbols_to_bits(info, m)))
    return errs


def ber_sim(scheme: str, ebn0_db: float, info_bits: int, seed: int,
            m: int = 5, k: int = 21, N: int = 9, spc_n: int = 8) -> SimReport:
    """Information bit error rate at a given Eb/N0 (E_b = 1, N_0 = 2 sigma^2)."""
    t0 = time.perf_counter()
    obj, bits_per_word = _scheme(scheme, m, k, N, spc_n)
    rate = obj if isinstance(obj, float) else obj.rate
    amp = math.sqrt(rate)
    sigma = math.sqrt(1 / (2 * 10 ** (ebn0_db / 10)))
    words = -(-info_bits // bits_per_word)
    per_chunk = max(1, 10_000 // bits_per_word) if scheme != "rs-spc-B" else 8
    errs = 0
    for c, w in chunks(words, per_chunk):
        errs += _run_words(scheme, obj, w, sigma, amp, stream(seed, c), m, k, spc_n)
    total = words * bits_per_word
    params = {"scheme": scheme, "ebn0_db": ebn0_db, "m": m, "k": k, "N": N, "spc_n": spc_n}
    rep = SimReport("ber", params, seed)
    rep.add_proportion("ber", errs, total)
    rep.add("rate", rate)
    rep.add("ber_uncoded", uncoded_ber(ebn0_db))
    rep.wall_time = time.perf_counter() - t0
    return rep


def ber_sweep(scheme: str, grid, info_bits: int, seed: int, **kw) -> SimReport:
    rows = []
    for i, snr in enumerate(grid):
        r = ber_sim(scheme, float(snr), info_bits, seed + i, **kw)
        rows.append({"snr_db": float(snr), "ber": r["ber"], "stderr": r.metrics["ber"].stderr,
                     "ber_uncoded": r["ber_uncoded"]})
    return SimReport("ber_sweep", {"scheme": scheme, "info_bits": info_bits, **kw}, seed, rows=rows)
