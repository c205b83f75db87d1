"""Random-access channel models, throughput formulas, simulators and signature codes."""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .errors import BadParameters, CodingError, DecodeFailure, TooLarge
from .galois import GaloisField, is_prime
from .packets import encode_array, mk_decode
from .report import SimReport
from .rng import chunks, stream
from .rs import RsCode

LN2 = math.log(2)


@dataclass
class AccessParams:
    T: int = 1  # active users
    U: int | None = None  # potential users
    Z: int = 1  # parallel channels (rows)
    M: int = 2  # alphabet size
    L: int = 1  # signature length
    p: float = 0.0  # per-slot transmit or symbol probability

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise BadParameters("p must lie in [0, 1]")
        if self.T < 0 or (self.U is not None and self.T > self.U):
            raise BadParameters("need 0 <= T <= U")

    @property
    def G(self) -> float:
        return self.p * self.T


def h2(p) -> float:
    """Binary entropy in bits."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


# slotted Aloha
def aloha(params: AccessParams) -> float:
    T, p = params.T, params.p
    return p * T * (1 - p) ** (T - 1) if T else 0.0


def aloha_sim(params: AccessParams, slots: int, seed: int) -> SimReport:
    if slots < 1:
        raise BadParameters("slots >= 1")
    t0 = time.perf_counter()
    hits = 0
    for c, m in chunks(slots, 100_000):
        hits += int(np.count_nonzero(stream(seed, c).binomial(params.T, params.p, m) == 1))
    rep = SimReport("aloha", {"T": params.T, "p": params.p}, seed)
    rep.add_proportion("eta", hits, slots)
    rep.add("eta_formula", aloha(params))
    rep.wall_time = time.perf_counter() - t0
    return rep


def aloha_sweep(T: int, loads, slots: int, seed: int) -> SimReport:
    """Simulated and formula throughput against offered load G = pT."""
    rows = []
    for i, G in enumerate(loads):
        prm = AccessParams(T=T, p=min(1.0, G / T))
        r = aloha_sim(prm, slots, seed + i)
        rows.append({"G": G, "eta": r["eta"], "stderr": r.metrics["eta"].stderr, "eta_formula": aloha(prm)})
    rep = SimReport("aloha_sweep", {"T": T, "slots": slots}, seed, rows=rows)
    best = max(rows, key=lambda r: r["eta"])
    rep.add("peak_G", best["G"])
    rep.add("peak_eta", best["eta"], best["stderr"], slots)
    return rep


# array access over Z parallel channels
def row_collision_prob(Z: int, T: int) -> float:
    return 1 - ((Z - 1) / Z) ** (T - 1)


def expected_collisions(params: AccessParams, n: int) -> float:
    """Expected collided rows for one user sending n rows, each on a random channel."""
    return n * row_collision_prob(params.Z, params.T)


def array_throughput(Z: int, T: int) -> float:
    """Fraction of the Z x n array carrying uncollided user rows, on average."""
    return (T / Z) * ((Z - 1) / Z) ** (T - 1)


def largest_rate_k(Z: int, T: int, n: int) -> int:
    """Largest k with k/n below the probability that a row is not collided."""
    ok = ((Z - 1) / Z) ** (T - 1)
    k = math.ceil(ok * n) - 1
    return max(1, k)


def _binary_field_for(n: int) -> GaloisField:
    m = 1
    while (1 << m) - 1 < n:
        m += 1
    return GaloisField.binary(m)


def array_access_sim(params: AccessParams, n: int, k: int, N: int, blocks: int, seed: int) -> SimReport:
    """Feedback-free array access.

    In each block every active user sends its n x N code array row by row,
    row i in time slot i on a uniformly chosen channel out of Z.  A row that
    shares its channel and slot with another user arrives as i.i.d. uniform
    symbols.  Each user decodes with ``mk_decode`` and success means the exact
    k x N information array was returned.
    """
    t0 = time.perf_counter()
    F = _binary_field_for(n)
    code = RsCode(F, n, k, "standard" if n == F.q - 1 else "shortened")
    T, Z = params.T, params.Z
    users = ok_all = users_below = ok_below = clean_rows = collided_rows = 0
    for b in range(blocks):
        rng = stream(seed, b)
        chan = rng.integers(0, Z, (T, n))
        hit = np.zeros((T, n), dtype=bool)
        for i in range(n):
            counts = np.bincount(chan[:, i], minlength=Z)
            hit[:, i] = counts[chan[:, i]] > 1
        for u in range(T):
            info = rng.integers(0, F.q, (k, N))
            R = encode_array(code, info)
            bad = np.flatnonzero(hit[u])
            R[bad] = rng.integers(0, F.q, (len(bad), N))
            try:
                good = np.array_equal(mk_decode(code, R), info)
            except CodingError:
                good = False
            users += 1
            ok_all += good
            collided_rows += len(bad)
            clean_rows += n - len(bad)
            if len(bad) < n - k - 1:
                users_below += 1
                ok_below += good
    rep = SimReport("array_access", {"Z": Z, "T": T, "n": n, "k": k, "N": N, "blocks": blocks}, seed)
    rep.add_proportion("success_below_bound", ok_below, users_below)
    rep.add_proportion("success", ok_all, users)
    cells = blocks * Z * n
    eta = clean_rows / cells
    # per-cell indicator variance bounded by a Bernoulli with the same mean
    rep.add("eta_rows", eta, math.sqrt(eta * (1 - eta) / cells), cells)
    rep.add("eta_formula", array_throughput(Z, T))
    rep.add("eta_decoded", ok_all * k / (blocks * Z * n))
    rep.add("collisions_per_user", collided_rows / users, 0.0, users)
    rep.add("expected_collisions", expected_collisions(params, n))
    rep.wall_time = time.perf_counter() - t0
    return rep


# OR channel
def _or_distribution(M: int, p: float) -> np.ndarray:
    if M < 2:
        raise BadParameters("M >= 2")
    rest = (1 - p) / (M - 1)
    return np.array([p] + [rest] * (M - 1))


def _entropy_bits(prob: np.ndarray) -> float:
    q = prob[prob > 0]
    return float(-(q * np.log2(q)).sum())


def or_mutual_information(pi, T: int) -> float:
    """I(X; Y) for one of T users on the M-ary OR channel, all users i.i.d. ~ pi.

    The output is the set of symbols sent.  The set sent by the other T - 1
    users has P(set within A) = pi(A)^(T-1); Moebius inversion over subsets
    turns that into the exact distribution.
    """
    pi = np.asarray(pi, dtype=float)
    M = len(pi)
    if M > 16:
        raise TooLarge("M-ary OR evaluation enumerates 2^M output sets")
    masks = np.arange(1 << M)
    bits = (masks[:, None] >> np.arange(M)) & 1
    mass = bits @ pi
    g = mass ** (T - 1) if T > 1 else (masks == 0).astype(float)
    if T > 1:
        g[0] = 0.0
        for i in range(M):
            b = 1 << i
            sel = (masks & b) != 0
            g[sel] -= g[masks[sel] ^ b]
    g = np.clip(g, 0.0, None)
    py = np.zeros(1 << M)
    h_cond = 0.0
    for x in range(M):
        if pi[x] == 0:
            continue
        cond = np.zeros(1 << M)
        np.add.at(cond, masks | (1 << x), g)
        h_cond += pi[x] * _entropy_bits(cond)
        py += pi[x] * cond
    return _entropy_bits(py) - h_cond


def or_channel_rate(M: int, T: int, p: float) -> float:
    """Sum rate T I(X; Y) in bits per transmission.

    p is the probability of the central symbol 0; the other M - 1 symbols
    share 1 - p equally.  For M = 2 this is the binary OR (Z-channel) view in
    which symbol 0 is silence; for M > 2 every user sends one pulse and the
    receiver sees the set of occupied positions (``or_set_rate``).
    """
    if T < 1:
        raise BadParameters("T >= 1")
    if M == 2:
        return T * (h2(p**T) - p * h2(p ** (T - 1)))
    return or_set_rate(M, T, p)


def or_set_rate(M: int, T: int, p: float) -> float:
    """Sum rate when the output is the set of symbols sent (ternary output for M = 2)."""
    return T * or_mutual_information(_or_distribution(M, p), T)


def or_theorem_p(M: int, T: int) -> float:
    """Central-symbol probability 1 - (M - 1) ln 2 / T."""
    return 1 - (M - 1) * LN2 / T


def _golden_max(f, a: float, b: float, tol: float = 1e-9):
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def or_optimal(M: int, T: int, grid: int = 1000):
    """(p*, max rate, rate at the 1 - (M-1) ln2 / T distribution).

    The rate is not assumed concave: a dense scan (uniform points plus points
    clustered near p = 1 where the optimum sits for large T) brackets the
    best value, then golden-section refines it.
    """
    f = lambda p: or_channel_rate(M, T, p)  # noqa: E731
    pts = np.unique(np.concatenate([np.linspace(0, 1, grid), 1 - np.logspace(-12, 0, grid)]))
    vals = np.array([f(p) for p in pts])
    i = int(np.argmax(vals))
    lo, hi = pts[max(i - 1, 0)], pts[min(i + 1, len(pts) - 1)]
    p_star, best = _golden_max(f, lo, hi)
    if vals[i] > best:
        p_star, best = float(pts[i]), float(vals[i])
    p_thm = or_theorem_p(M, T)
    thm = f(p_thm) if 0 <= p_thm <= 1 else float("nan")
    return p_star, best, thm


# random signatures
def signature_error(M: int, T: int, L: int, scheme: str = "symmetric", approx: bool = False) -> float:
    if L < 1:
        raise BadParameters("L >= 1")
    if scheme == "symmetric":
        return (M - 1) * (1 - (1 - 1 / M) ** (T - 1)) ** L
    if scheme == "asymmetric":
        pT = (M - 1) * LN2
        if approx:
            return M * (1 - math.exp(-pT / M)) ** L
        return (M - 1) * (1 - (1 - 1 / (M - 1)) ** (pT - 1)) ** L
    raise BadParameters(f"unknown scheme {scheme!r}")


def _log2_h(p: float) -> float:
    """h(p) accurate for tiny p."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - math.log1p(-p) / LN2 * (1 - p)


def signature_rate(M: int, T: float, L: int, scheme: str = "symmetric") -> float:
    """Normalized rate in bits per transmission."""
    if scheme == "symmetric":
        return T * math.log2(M) / (L * M)
    if scheme == "asymmetric":
        p = (M - 1) * LN2 / T
        return T * (_log2_h(p) + p * math.log2(M - 1)) / (L * M)
    raise BadParameters(f"unknown scheme {scheme!r}")


def signature_sim(M: int, T: int, L: int, scheme: str, trials: int, seed: int) -> SimReport:
    """Error frequency for one user with freshly drawn random signatures.

    Symmetric: each user owns M uniform signatures and sends one uniformly.
    Asymmetric: message 1 is the all-central word (symbol 0), sent with
    probability 1 - p, p = (M - 1) ln2 / T; the other M - 1 signatures use
    the non-central symbols uniformly.  A trial is an error when any own
    signature other than the one sent is fully present in the OR output.
    """
    t0 = time.perf_counter()
    errors = 0
    ar = np.arange(L)
    for c, m in chunks(trials):
        rng = stream(seed, c)
        present = np.zeros((m, L, M), dtype=bool)
        rows = np.arange(m)[:, None]
        if scheme == "symmetric":
            others = rng.integers(0, M, (m, T - 1, L))
            own = rng.integers(0, M, (m, M, L))
            sent = rng.integers(0, M, m)
            for u in range(T - 1):
                present[rows, ar, others[:, u]] = True
            present[rows, ar, own[np.arange(m), sent]] = True
            det = present[rows[:, :, None], ar[None, None, :], own].all(axis=2)
            det[np.arange(m), sent] = False
            errors += int(det.any(axis=1).sum())
        elif scheme == "asymmetric":
            p = (M - 1) * LN2 / T
            if p > 1:
                raise BadParameters("asymmetric scheme needs (M - 1) ln 2 <= T")
            active = rng.random((m, T - 1)) < p
            words = rng.integers(1, M, (m, T - 1, L))
            words[~active] = 0
            for u in range(T - 1):
                present[rows, ar, words[:, u]] = True
            own = rng.integers(1, M, (m, M - 1, L))
            sent = np.where(rng.random(m) < p, rng.integers(0, M - 1, m), -1)
            tx = np.where(sent[:, None] >= 0, own[np.arange(m), np.maximum(sent, 0)], 0)
            present[rows, ar, tx] = True
            det = present[rows[:, :, None], ar[None, None, :], own].all(axis=2)
            sel = sent >= 0
            det[np.flatnonzero(sel), sent[sel]] = False
            errors += int(det.any(axis=1).sum())
        else:
            raise BadParameters(f"unknown scheme {scheme!r}")
    rep = SimReport("signature", {"M": M, "T": T, "L": L, "scheme": scheme}, seed)
    rep.add_proportion("pe", errors, trials)
    rep.add("pe_bound", signature_error(M, T, L, scheme))
    rep.wall_time = time.perf_counter() - t0
    return rep


# Titlebaum signatures
class Titlebaum:
    """M - 1 user signatures, nonzero multiples of the evaluation-point row.

    For prime M the points are 0, 1, ..., M - 1 with arithmetic mod M; for
    M = 2^m they are 0, 1, alpha, ..., alpha^(M-2) in GF(2^m).  Signatures may
    be shortened to their first L positions.  User j (1..M-1) modulates
    message c (0..M-1) as signature_j + c (1, ..., 1).
    """

    def __init__(self, M: int, L: int | None = None):
        L = M if L is None else L
        if not 1 <= L <= M:
            raise BadParameters("need 1 <= L <= M")
        if is_prime(M):
            self.field = GaloisField.prime(M)
            points = list(range(M))
        elif M >= 2 and M & (M - 1) == 0:
            self.field = GaloisField.binary(M.bit_length() - 1)
            points = [0] + [self.field.alpha_pow(i) for i in range(M - 1)]
        else:
            raise BadParameters("M must be prime or a power of two")
        F = self.field
        self.M, self.L = M, L
        self.points = points[:L]
        self.signatures = np.array([[F.mul(j, x) for x in self.points] for j in range(1, M)], dtype=np.int64)
        self._add = np.array([[F.add(a, b) for b in range(M)] for a in range(M)], dtype=np.int64)

    def signature(self, user: int) -> np.ndarray:
        return self.signatures[user - 1]

    def modulated(self, user: int) -> np.ndarray:
        """M x L array; row c is the word for message c."""
        return self._add[np.arange(self.M)[:, None], self.signature(user)[None, :]]

    def max_cross_agreement(self) -> int:
        """Largest agreement count between modulated words of different users, by brute force."""
        mods = np.stack([self.modulated(u) for u in range(1, self.M)])  # (M-1, M, L)
        best = 0
        for a in range(self.M - 1):
            eq = mods[a][None, :, None, :] == mods[a + 1 :, None, :, :]
            if eq.size:
                best = max(best, int(eq.sum(axis=3).max()))
        return best


def titlebaum(M: int, L: int | None = None) -> Titlebaum:
    return Titlebaum(M, L)


def titlebaum_decode(ts: Titlebaum, demod, user: int) -> int:
    """Message with the most agreements between its word and the L x M demodulator output."""
    demod = np.asarray(demod, dtype=bool)
    mod = ts.modulated(user)
    agree = demod[np.arange(ts.L)[None, :], mod].sum(axis=1)
    return int(np.argmax(agree))


def titlebaum_pe(M: int, T: int, L: int) -> float:
    return (M - 1) * (1 / M) ** L * math.comb(T - 1, L) * math.factorial(L)


def titlebaum_pe_approx(M: int, T: int, L: int) -> float:
    return M * (T / M) ** L


def titlebaum_rate(M: int, T: int, L: int) -> float:
    return T * math.log2(M) / (L * M)


def titlebaum_sim(M: int, T: int, L: int, trials: int, seed: int) -> SimReport:
    """T distinct random users with uniform messages; decode the first of them."""
    if not 1 <= T <= M - 1:
        raise BadParameters("need 1 <= T <= M - 1")
    t0 = time.perf_counter()
    ts = Titlebaum(M, L)
    mods = np.stack([ts.modulated(u) for u in range(1, M)])  # (M-1, M, L)
    ar = np.arange(L)
    errors = 0
    for c, m in chunks(trials):
        rng = stream(seed, c)
        users = np.argsort(rng.random((m, M - 1)), axis=1)[:, :T]
        msgs = rng.integers(0, M, (m, T))
        words = mods[users, msgs]  # (m, T, L)
        present = np.zeros((m, L, M), dtype=bool)
        rows = np.arange(m)[:, None]
        for u in range(T):
            present[rows, ar, words[:, u]] = True
        target = mods[users[:, 0]]  # (m, M, L)
        agree = present[rows[:, :, None], ar[None, None, :], target].sum(axis=2)
        dec = np.argmax(agree, axis=1)
        errors += int(np.count_nonzero(dec != msgs[:, 0]))
    rep = SimReport("titlebaum", {"M": M, "T": T, "L": L}, seed)
    rep.add_proportion("pe", errors, trials)
    rep.add("pe_bound", titlebaum_pe(M, T, L))
    rep.add("eta", titlebaum_rate(M, T, L))
    rep.wall_time = time.perf_counter() - t0
    return rep


# superimposed codes
@dataclass
class SicCode:
    codewords: list
    q: int
    T: int

    def __post_init__(self):
        self.codewords = [tuple(int(x) for x in w) for w in self.codewords]
        if len({len(w) for w in self.codewords}) > 1:
            raise BadParameters("codewords must share one length")
        if any(not 0 <= x < self.q for w in self.codewords for x in w):
            raise BadParameters("symbol outside alphabet")

    @property
    def U(self) -> int:
        return len(self.codewords)

    @property
    def n(self) -> int:
        return len(self.codewords[0]) if self.codewords else 0

    @property
    def params(self):
        return (self.U, self.n, self.q, self.T)


def _cover_masks(code: SicCode, boolean: bool) -> np.ndarray:
    """Per codeword, the (position, symbol) cells it occupies, as bit rows."""
    W = np.asarray(code.codewords, dtype=np.int64)
    cells = np.zeros((code.U, code.n * code.q), dtype=bool)
    rows = np.arange(code.U)[:, None]
    cells[rows, np.arange(code.n)[None, :] * code.q + W] = True
    if boolean:  # only the 1 symbols matter for a Boolean OR
        cells &= np.tile(np.arange(code.q) == 1, code.n)[None, :]
    return np.packbits(cells, axis=1)


def sic_check(code: SicCode, T: int | None = None, boolean: bool = False, limit: float = 1e8) -> bool:
    """True iff no union of T or fewer codewords covers a codeword outside the set.

    A union covers v when adding v leaves every component set unchanged.  With
    ``boolean`` the union is the Boolean OR of binary words instead.
    """
    T = code.T if T is None else T
    U = code.U
    t = min(T, U - 1)  # supersets of a covering set still cover, so size t suffices
    if t < 1:
        return True
    if math.comb(U, t) * U > limit:
        raise TooLarge(f"C({U},{t}) x {U} exceeds {limit:g}")
    masks = _cover_masks(code, boolean)
    combos = itertools.combinations(range(U), t)
    while True:
        batch = np.array(list(itertools.islice(combos, 20_000)), dtype=np.int64)
        if batch.size == 0:
            return True
        union = np.bitwise_or.reduce(masks[batch], axis=1)  # (B, bytes)
        covered = ((masks[None, :, :] & ~union[:, None, :]) == 0).all(axis=2)  # (B, U)
        covered[np.arange(len(batch))[:, None], batch] = False
        if covered.any():
            return False


def sic_from_rs(q: int, k: int, n: int | None = None, binary: bool = True, T: int | None = None, first_row: int = 0):
    """Superimposed code from all codewords of an (n, k) RS code over GF(q).

    Distinct codewords agree in at most k - 1 places, so T < n / (k - 1)
    words cannot cover another.  With ``binary`` each symbol s becomes the
    length-q word with a single 1 at position s.
    """
    F = GaloisField.prime(q) if is_prime(q) else GaloisField.binary(q.bit_length() - 1)
    if F.q != q:
        raise BadParameters("q must be prime or a power of two")
    n = q - 1 if n is None else n
    variant = "standard" if n == q - 1 else "shortened" if n < q - 1 else "extended"
    code = RsCode(F, n, k, variant, first_row)
    T_max = q - 1 if k == 1 else -(-n // (k - 1)) - 1
    T = T_max if T is None else T
    if not 1 <= T <= T_max:
        raise BadParameters(f"need T < n / (k - 1); T = {T}, n = {n}, k = {k}")
    words = [tuple(w) for _, block in la.iter_codewords(F, code.G) for w in block.tolist()]
    outer = SicCode(words, q, T)
    if not binary:
        return outer
    unit = SicCode([tuple(int(i == s) for i in range(q)) for s in range(q)], 2, T)
    return sic_compose(unit, outer)


def sic_compose(inner: SicCode, outer: SicCode, assignment=None) -> SicCode:
    """Replace each outer symbol s by inner codeword ``assignment[s]`` (default s)."""
    if outer.q > inner.U:
        raise BadParameters("outer alphabet larger than inner code")
    assignment = list(range(outer.q)) if assignment is None else list(assignment)
    if len(set(assignment)) != outer.q:
        raise BadParameters("assignment must use distinct inner codewords")
    sub = [inner.codewords[i] for i in assignment]
    words = [tuple(x for s in w for x in sub[s]) for w in outer.codewords]
    return SicCode(words, inner.q, min(inner.T, outer.T))


# XOR channel
def xor_channel(code: RsCode, active: dict) -> list[int]:
    """z = sum of t_i times row user_i of H_T."""
    F = code.field
    e = [0] * code.n
    for u, t in active.items():
        if not t:
            raise BadParameters("active users need a nonzero symbol")
        e[u] = t
    return code.syndrome(e)


def xor_decode(code: RsCode, z) -> dict:
    e = code.decode_syndrome(z)
    if e is None:
        raise DecodeFailure("syndrome not within decoding radius")
    return {i: v for i, v in enumerate(e) if v}


def xor_access(code: RsCode, active: dict) -> dict:
    """Identify active users and their symbols from the XOR channel output."""
    if code.field.p != 2:
        raise BadParameters("XOR access needs a binary extension field")
    if len(active) > (code.n - code.k) // 2:
        raise DecodeFailure(f"{len(active)} active users exceed (U - k)/2 = {(code.n - code.k) // 2}")
    return xor_decode(code, xor_channel(code, active))


def r_xor(c: float) -> float:
    """Asymptotic XOR-channel rate c e^(-2c) log2((1 + e^(-2c)) / (1 - e^(-2c)))."""
    x = math.exp(-2 * c)
    return c * x * math.log2((1 + x) / (1 - x))


def xor_crossover(p: float, T: int) -> float:
    """Probability that the XOR of T - 1 Bernoulli(p) bits is 1."""
    return 0.5 * (1 - (1 - 2 * p) ** (T - 1))


def xor_access_sim(code: RsCode, T: int, trials: int, seed: int) -> SimReport:
    """T distinct users with uniform nonzero symbols per trial; success when
    the decoder returns exactly the active set and its symbols."""
    if not 0 <= T <= code.n:
        raise BadParameters("need 0 <= T <= U")
    t0 = time.perf_counter()
    ok = 0
    for c, m in chunks(trials):
        rng = stream(seed, c)
        for _ in range(m):
            users = rng.choice(code.n, T, replace=False)
            active = {int(u): int(s) for u, s in zip(users, rng.integers(1, code.field.q, T))}
            try:
                ok += xor_decode(code, xor_channel(code, active)) == active
            except DecodeFailure:
                pass
    rep = SimReport("xor_access", {"U": code.n, "k": code.k, "T": T}, seed)
    rep.add_proportion("success", ok, trials)
    rep.add("guaranteed", float(T <= (code.n - code.k) // 2))
    rep.wall_time = time.perf_counter() - t0
    return rep
