"""Secret embedding against a wiretapper: secrecy capacities, parity and
syndrome based schemes, RS schemes for noiseless and noisy main channels, and
equivocation of a wiretapper who observes a chosen subset of symbols.

Equivocation of symbol schemes is measured in q-ary symbols.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .capacity import h2
from .errors import BadParameters, LegalDecodeFailure, TooLarge
from .galois import GaloisField
from .report import SimReport
from .rng import chunks, stream
from .rs import RsCode


# capacities
def secrecy_capacity(p: float, q: float) -> float:
    """h(q) - h(p) bits per binary symbol."""
    return h2(q) - h2(p)


def secrecy_plus(p: float, q: float) -> float:
    """h(p(1-q) + q(1-p)) - h(p): the receiver also sees the wiretapper's output."""
    return h2(p * (1 - q) + q * (1 - p)) - h2(p)


def rd_region(p: float, q: float, R: float) -> float:
    """Largest normalised equivocation Delta <= 1 with R Delta <= C_main - C_wt."""
    if R <= 0:
        raise BadParameters("R must be > 0")
    return min(1.0, max(0.0, secrecy_capacity(p, q)) / R)


def tandem_crossover(p: float, q: float) -> float:
    """Crossover of a BSC(p) followed by a BSC(q)."""
    return p * (1 - q) + q * (1 - p)


def model_b_to_a(p: float, q_total: float) -> float:
    """Second-stage crossover q with tandem_crossover(p, q) = q_total."""
    if not 0 <= p < 0.5:
        raise BadParameters("need 0 <= p < 1/2")
    return (q_total - p) / (1 - 2 * p)


def bsc(bits, p: float, rng) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.int8)
    return bits ^ (rng.random(bits.shape) < p).astype(np.int8)


# single parity check: one secret bit
def spc_secret(message, secret: int) -> np.ndarray:
    """n - 1 message bits followed by the even parity plus the secret bit."""
    m = np.asarray(message, dtype=np.int8)
    return np.append(m, (int(m.sum()) + secret) % 2).astype(np.int8)


def spc_recover(word) -> int:
    return int(np.asarray(word).sum() % 2)


def attacker_error(n: int, p: float) -> float:
    """Probability of an odd number of errors among n bits."""
    return 0.5 * (1 - (1 - 2 * p) ** n)


def spc_secret_sim(n: int, p: float, trials: int, seed: int) -> SimReport:
    t0 = time.perf_counter()
    errs = 0
    for c, m in chunks(trials):
        rng = stream(seed, c)
        flips = rng.random((m, n)) < p
        errs += int(np.count_nonzero(flips.sum(axis=1) % 2))  # parity attack fails on odd flips
    rep = SimReport("spc_secret", {"n": n, "p": p}, seed)
    rep.add_proportion("attacker_error", errs, trials)
    rep.add("attacker_error_formula", attacker_error(n, p))
    rep.wall_time = time.perf_counter() - t0
    return rep


# (7,4) Hamming: three secret bits
HAMMING_G = [
    [1, 0, 0, 0, 1, 1, 1],
    [0, 1, 0, 0, 1, 1, 0],
    [0, 0, 1, 0, 1, 0, 1],
    [0, 0, 0, 1, 0, 1, 1],
]
HAMMING_HT = [[1, 1, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1]]


def hamming_secret(message, secret) -> np.ndarray:
    """m G + (0^4, s^3)."""
    c = np.asarray(message, dtype=np.int64) @ np.asarray(HAMMING_G) % 2
    c[4:] ^= np.asarray(secret, dtype=np.int64)
    return c


def hamming_attack(received) -> np.ndarray:
    """Secret estimate: the syndrome r H^T."""
    return np.asarray(received, dtype=np.int64) @ np.asarray(HAMMING_HT) % 2


def hamming_legal(received) -> tuple[np.ndarray, np.ndarray]:
    r = np.asarray(received, dtype=np.int64)
    return r[:4].copy(), hamming_attack(r)


def codeword_probability(weights, p: float, q: int = 2) -> float:
    """Probability that the noise word is a codeword when each symbol is in
    error with probability p and error values are uniform over the q - 1
    nonzero symbols; weights[i] = number of codewords of weight i."""
    n = len(weights) - 1
    return math.fsum(a * (p / (q - 1)) ** i * (1 - p) ** (n - i) for i, a in enumerate(weights))


def pe_weight_distribution(p: float, weights=None) -> float:
    """Syndrome attacker error 1 - sum_i A_i p^i (1-p)^(n-i) (binary codes)."""
    if weights is None:
        weights = la.weight_distribution(GaloisField.prime(2), HAMMING_G)
    return 1 - codeword_probability(weights, p)


def rs_attacker_error_bound(n: int, k: int, m: int, p: float) -> float:
    """1 - (1-p)^n - ((2^m)^k - 1) p^d (1-p)^(n-d): all nonzero codewords
    taken at minimum weight d = n - k + 1."""
    d = n - k + 1
    return 1 - (1 - p) ** n - ((2**m) ** k - 1) * p**d * (1 - p) ** (n - d)


# RS schemes
class RsSecret:
    """Message m^u and secret s^v sent as (m, s) G_s.

    Noiseless main channel (u = k): G_s = [[G_sys], [0, I_(n-k)]], the secret
    is added to the check symbols.  Noisy main channel (u < k): G_s is the
    semi-systematic generator [[I_u, T, U], [0, I_v, W]] of the code and the
    legal receiver decodes before reading (m, s).

    The wiretapper's syndrome former H^T satisfies G_u H^T = 0 and maps the
    secret rows to (I_v, 0), so z = r H^T = (s, 0) + e H^T.
    """

    def __init__(self, code: RsCode, u: int | None = None):
        F = code.field
        self.code, self.field = code, F
        n, k = code.n, code.k
        self.noisy = u is not None
        if u is None:
            self.u, self.v = k, n - k
            rows, piv = [list(r) for r in code.G_sys], list(range(k))
            rows += [[int(j == c) for j in range(n)] for c in range(k, n)]
            self.G = rows
            self.pivots = piv + list(range(k, n))
        else:
            if not 0 < u < k:
                raise BadParameters("need 0 < u < k")
            self.u, self.v = u, k - u
            self.G, self.pivots = code.semi_systematic(u)
        full = [list(r) for r in self.G]
        full += [[int(j == c) for j in range(n)] for c in range(n) if c not in self.pivots]
        self._full = full
        self._inv = la.inverse(F, full)
        self.H_T = [row[self.u :] for row in self._inv]

    def encode(self, message, secret) -> list[int]:
        if len(message) != self.u or len(secret) != self.v:
            raise BadParameters(f"need |m| = {self.u}, |s| = {self.v}")
        return la.vec_mat(self.field, list(message) + list(secret), self.G)

    def legal_decode(self, received) -> tuple[list[int], list[int]]:
        r = list(received)
        if self.noisy:
            res = self.code.decode_errors(r)
            if not res.ok:
                raise LegalDecodeFailure("main-channel errors exceed the correction capability")
            r = res.codeword
        x = la.vec_mat(self.field, r, self._inv)
        if self.noisy and any(x[self.u + self.v :]):
            raise LegalDecodeFailure("decoded word is outside the code")
        return x[: self.u], x[self.u : self.u + self.v]

    def syndrome(self, received) -> list[int]:
        return la.vec_mat(self.field, list(received), self.H_T)

    def attack(self, received) -> list[int]:
        """Secret estimate assuming the all-zero wiretap noise."""
        return self.syndrome(received)[: self.v]

    def explanation_weights(self, received, max_weight: int | None = None) -> dict:
        """For every candidate secret, the least weight of a noise pattern that
        explains the observation (exhaustive up to ``max_weight``)."""
        table = self._syndrome_weights(self.code.n - self.u if max_weight is None else max_weight)
        z = self.syndrome(received)
        out = {}
        for s in itertools.product(range(self.field.q), repeat=self.v):
            key = tuple(la.vec_sub(self.field, z, list(s) + [0] * (len(z) - self.v)))
            out[s] = table.get(key)
        return out

    def _syndrome_weights(self, max_weight: int) -> dict:
        cache = getattr(self, "_wt_cache", {})
        if max_weight not in cache:
            F, n = self.field, self.code.n
            count = sum(math.comb(n, t) * (F.q - 1) ** t for t in range(max_weight + 1))
            if count > 5 * 10**6:
                raise TooLarge(f"{count} noise patterns")
            best: dict = {}
            for t in range(max_weight + 1):
                for pos in itertools.combinations(range(n), t):
                    for vals in itertools.product(range(1, F.q), repeat=t):
                        e = [0] * n
                        for p_, v in zip(pos, vals):
                            e[p_] = v
                        best.setdefault(tuple(self.syndrome(e)), t)
            cache[max_weight] = best
            self._wt_cache = cache
        return cache[max_weight]


def rs_secret_noiseless(code: RsCode) -> RsSecret:
    return RsSecret(code)


def rs_secret_noisy(code: RsCode, u: int) -> RsSecret:
    return RsSecret(code, u)


def noisy_parameters(n: int, p: float, q: float) -> tuple[int, int, int]:
    """(k, u, v) with n - k = 2pn and v = n(2q - 2p), rounded to integers."""
    r = round(2 * p * n)
    v = round(n * (2 * q - 2 * p))
    k = n - r
    if not 0 < v < k:
        raise BadParameters("parameters leave no room for message and secret")
    return k, k - v, v


def correctable_patterns(n: int, q: int, t: int, exact: bool = True) -> int:
    """Number of error patterns of weight <= t; exact uses (q-1)^i error
    values, otherwise the estimate sum q^i C(n, i)."""
    base = q - 1 if exact else q
    return sum(base**i * math.comb(n, i) for i in range(t + 1))


# wiretap channel of type II
def _check_budget(n: int, mu: int, limit: int):
    if math.comb(n, mu) > limit:
        raise TooLarge(f"C({n},{mu}) subsets exceed {limit}")


def idlp(F: GaloisField, G, limit: int = 10**7) -> list[int]:
    """k_mu = min over mu-subsets of the rank of the selected columns of G."""
    n = len(G[0])
    out = []
    for mu in range(n + 1):
        _check_budget(n, mu, limit)
        out.append(min(la.rank(F, la.submatrix_cols(G, t)) for t in itertools.combinations(range(n), mu)))
    return out


@dataclass
class Equivocation:
    value: int
    exact: bool = True
    subsets: int = 0


def wiretap2_equivocation(F: GaloisField, G, mu: int, limit: int = 10**7,
                          samples: int | None = None, seed: int = 0) -> Equivocation:
    """Least number of unresolved secret symbols over all observation sets of
    size mu, for a random codeword of G plus a secret on the check part.

    For a set tau: Delta = (n - k) - rank(Gfull_tau) + rank(G_tau), where Gfull
    stacks G over [0 | I_(n-k)] (I(S; Y_tau) = H(Y_tau) - H(Y_tau | S)).
    Beyond ``limit`` subsets a random sample of ``samples`` subsets is used;
    its minimum is then only an upper estimate of the equivocation.
    """
    k, n = len(G), len(G[0])
    full = [list(r) for r in G] + [[int(j == c) for j in range(n)] for c in range(k, n)]

    def delta(t):
        return (n - k) - la.rank(F, la.submatrix_cols(full, t)) + la.rank(F, la.submatrix_cols(G, t))

    if math.comb(n, mu) <= limit:
        subsets = list(itertools.combinations(range(n), mu))
        return Equivocation(min(delta(t) for t in subsets), True, len(subsets))
    if samples is None:
        raise TooLarge(f"C({n},{mu}) subsets exceed {limit}; pass samples for an estimate")
    rng = stream(seed)
    vals = [delta(tuple(sorted(rng.choice(n, mu, replace=False).tolist()))) for _ in range(samples)]
    return Equivocation(min(vals), False, samples)


def consistent_secrets(F: GaloisField, G, tau, observed) -> set:
    """All secrets s for which some codeword x G + (0, s) matches ``observed``
    on positions tau (brute force)."""
    k, n = len(G), len(G[0])
    out = set()
    for x in itertools.product(range(F.q), repeat=k):
        c = la.vec_mat(F, list(x), G)
        for s in itertools.product(range(F.q), repeat=n - k):
            y = c[:k] + [F.add(a, b) for a, b in zip(c[k:], s)]
            if all(y[i] == o for i, o in zip(tau, observed)):
                out.add(s)
    return out
