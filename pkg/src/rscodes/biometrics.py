"""Biometric template protection with RS codes: syndrome reconstruction, the
Juels-Wattenberg commitment (full length and fixed t), the Juels-Sudan vault
and the Dodis polynomial variant, with FAR/FRR and guessing estimates.

Property-set biometrics are t distinct nonzero field labels.  Label beta
addresses codeword position log_alpha(beta), whose evaluation point is beta
itself, so c_i = P(alpha^i) reads as P(beta).
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from . import poly as P
from .errors import BadParameters, ReconstructFailure
from .galois import GaloisField
from .report import SimReport
from .rng import chunks, stream
from .rs import RsCode


ACCEPT = "Accept"
REJECT = "Reject"


def digest(symbols) -> str:
    """SHA-256 of the labels, each as 4 big-endian bytes."""
    return hashlib.sha256(b"".join(int(s).to_bytes(4, "big") for s in symbols)).hexdigest()


@dataclass(frozen=True)
class VaultRecord:
    scheme: str
    n: int
    k: int
    payload: tuple
    commitment: str
    t: int | None = None

    def to_json(self) -> str:
        d = {"scheme": self.scheme, "n": self.n, "k": self.k, "t": self.t,
             "payload": list(self.payload), "commitment": self.commitment}
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "VaultRecord":
        d = json.loads(text)
        return cls(d["scheme"], d["n"], d["k"], tuple(d["payload"]), d["commitment"], d.get("t"))


@dataclass
class AuthResult:
    status: str
    secret: list | None = None
    errors: list = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return self.status == ACCEPT


def _require_standard(code: RsCode):
    if code.variant != "standard" or code.first_row != 0:
        raise BadParameters("schemes use the standard RS code with rows alpha^(ij)")


def _random_secret(code: RsCode, rng) -> list[int]:
    return rng.integers(0, code.field.q, code.k).tolist()


def positions(F: GaloisField, labels) -> list[int]:
    """Codeword positions addressed by nonzero property labels."""
    labels = list(labels)
    if len(set(labels)) != len(labels):
        raise BadParameters("property labels must be distinct")
    if any(not 0 < b < F.q for b in labels):
        raise BadParameters("property labels must be nonzero field elements")
    return [F.log(b) for b in labels]


# syndrome reconstruction
def syndrome_enroll(b, code: RsCode) -> VaultRecord:
    """Store s = b H^T and a digest of b for the re-check."""
    return VaultRecord("syndrome", code.n, code.k, tuple(code.syndrome(list(b))), digest(b))


def syndrome_reconstruct(b_noisy, record: VaultRecord, code: RsCode) -> list[int]:
    F = code.field
    S = la.vec_sub(F, code.syndrome(list(b_noisy)), list(record.payload))
    e = code.decode_syndrome(S)
    if e is None:
        raise ReconstructFailure("error pattern not correctable")
    b = la.vec_sub(F, list(b_noisy), e)
    if digest(b) != record.commitment:
        raise ReconstructFailure("reconstruction fails the digest re-check")
    return b


# Juels-Wattenberg, full length
def jw_enroll(b, code: RsCode, seed: int) -> VaultRecord:
    """Store b + c for the codeword c of a random P^k, and hash(P^k)."""
    _require_standard(code)
    Pk = _random_secret(code, stream(seed))
    c = code.encode(Pk)
    return VaultRecord("jw", code.n, code.k, tuple(la.vec_add(code.field, list(b), c)), digest(Pk))


def jw_auth(record: VaultRecord, b_noisy, code: RsCode) -> AuthResult:
    r = la.vec_sub(code.field, list(record.payload), list(b_noisy))
    res = code.decode_errors(r)
    if not res.ok or digest(res.info) != record.commitment:
        return AuthResult(REJECT)
    return AuthResult(ACCEPT, res.info, res.error_positions)


# erasure-decoding vaults (JW fixed t, JS)
def _vault_enroll(scheme: str, labels, code: RsCode, seed: int) -> VaultRecord:
    _require_standard(code)
    F = code.field
    pos = set(positions(F, labels))
    t = len(pos)
    if not code.k <= t <= code.n:
        raise BadParameters("need k <= t <= n")
    rng = stream(seed)
    Pk = _random_secret(code, rng)
    c = code.encode(Pk)
    # chaff: uniform over the q - 1 values that differ from the codeword symbol
    stored = [ci if i in pos else F.add(ci, int(rng.integers(1, F.q))) for i, ci in enumerate(c)]
    return VaultRecord(scheme, code.n, code.k, tuple(stored), digest(Pk), t)


def _vault_auth(record: VaultRecord, labels, code: RsCode) -> AuthResult:
    F = code.field
    try:
        pos = set(positions(F, labels))
    except BadParameters:
        return AuthResult(REJECT)
    erasures = [i for i in range(code.n) if i not in pos]
    if len(erasures) > code.n - code.k:
        return AuthResult(REJECT)
    res = code.decode_errors_and_erasures(list(record.payload), erasures)
    if not res.ok or digest(res.info) != record.commitment:
        return AuthResult(REJECT)
    return AuthResult(ACCEPT, res.info, res.error_positions)


def jw_fixed_t(labels, code: RsCode, seed: int) -> VaultRecord:
    """Codeword symbols kept at the t positions named by the biometric, all
    other positions changed."""
    return _vault_enroll("jw-t", labels, code, seed)


def jw_fixed_t_auth(record: VaultRecord, labels, code: RsCode) -> AuthResult:
    return _vault_auth(record, labels, code)


def js_enroll(labels, code: RsCode, seed: int) -> VaultRecord:
    """c_i = P(alpha^i) for i in the biometric, c_i != P(alpha^i) elsewhere."""
    return _vault_enroll("js", labels, code, seed)


def js_auth(record: VaultRecord, labels, code: RsCode) -> AuthResult:
    return _vault_auth(record, labels, code)


# Dodis variant
def js_improved_enroll(labels, code: RsCode, seed: int) -> VaultRecord:
    """Store the t low coefficients of Q(X) = P(X) + prod (X - b_i); the
    coefficient of X^t is 1 and not stored."""
    _require_standard(code)
    F = code.field
    labels = list(labels)
    positions(F, labels)
    t = len(labels)
    if not code.k <= t:
        raise BadParameters("need deg P = k - 1 < t")
    Pk = _random_secret(code, stream(seed))
    prod = P.from_roots(F, labels)
    Q = P.add(F, Pk, prod)
    Q = Q + [0] * (t + 1 - len(Q))
    return VaultRecord("js-dodis", code.n, code.k, tuple(Q[:t]), digest(Pk), t)


def js_improved_values(record: VaultRecord, labels, F: GaloisField) -> list[int]:
    Q = list(record.payload) + [1]
    return [P.evaluate(F, Q, b) for b in labels]


def js_improved_auth(record: VaultRecord, labels, code: RsCode) -> AuthResult:
    F = code.field
    labels = list(labels)
    try:
        pos = positions(F, labels)
    except BadParameters:
        return AuthResult(REJECT)
    r = [0] * code.n
    for i, v in zip(pos, js_improved_values(record, labels, F)):
        r[i] = v
    erasures = [i for i in range(code.n) if i not in set(pos)]
    if len(erasures) > code.n - code.k:
        return AuthResult(REJECT)
    res = code.decode_errors_and_erasures(r, erasures)
    if not res.ok or digest(res.info) != record.commitment:
        return AuthResult(REJECT)
    return AuthResult(ACCEPT, res.info, res.error_positions)


def jw_t_guaranteed(n: int, k: int, t: int, r: int) -> bool:
    """(n - k + 1) - (n - t) >= 2r + 1, i.e. t - k >= 2r."""
    return (n - k + 1) - (n - t) >= 2 * r + 1


# closed forms
def _tail(n: int, p: float, start: int) -> float:
    return math.fsum(math.comb(n, i) * p**i * (1 - p) ** (n - i) for i in range(start, n + 1))


def far_frr_formulas(scheme: str, n: int, k: int, q: int, p: float = 0.0, t: int | None = None,
                     max_prob: float | None = None) -> dict:
    """Closed-form FRR/FAR values and (lower, upper) guessing bounds.

    syndrome / jw: FRR bound = P(more than (n-k)/2 symbol errors) and its
    (np)^(floor((n-k)/2)+1) approximation; FAR literal sums over correctable
    weights with (n+1)^-(n-k) resp. (n+1)^-n.  js / js-dodis / jw-t: FRR
    approximation (tp)^(1+(t-k)/2), FAR <= C(t,k)^2 / C(n,k) (capped at 1) and
    guess success C(t,k)/C(n,k).  max_prob defaults to a uniform biometric.
    """
    tc = (n - k) // 2
    out = {}
    if scheme in ("syndrome", "jw"):
        out["FRR_bound"] = _tail(n, p, tc + 1)
        out["FRR_approx"] = (n * p) ** (tc + 1)
        span = n - k if scheme == "syndrome" else n
        out["FAR"] = math.fsum(math.comb(n, i) for i in range(tc + 1)) * float(n + 1) ** (-span)
        mp = q ** (-n) if max_prob is None else max_prob
        out["guess"] = (q ** (-k), q ** (n - k) * mp)
    elif scheme in ("js", "js-dodis", "jw-t"):
        if t is None or not k <= t <= n:
            raise BadParameters("need k <= t <= n")
        out["FRR_bound"] = _tail(t, p, (t - k) // 2 + 1)
        out["FRR_approx"] = (t * p) ** (1 + (t - k) / 2)
        raw = math.comb(t, k) ** 2 / math.comb(n, k)
        out["FAR_raw"] = raw
        out["FAR"] = min(1.0, raw)
        out["guess_success"] = math.comb(t, k) / math.comb(n, k)
        mp = 1 / math.comb(n, t) if max_prob is None else max_prob
        out["guess"] = (q ** (-k), (q / (q - 1)) ** n * q ** (t - k) * mp)
    else:
        raise BadParameters(f"unknown scheme {scheme!r}")
    return out


# Monte Carlo
def _symbol_errors(rng, shape, p: float, q: int) -> np.ndarray:
    hit = rng.random(shape) < p
    return np.where(hit, rng.integers(1, q, shape), 0)


def jw_frr_sim(code: RsCode, p: float, trials: int, seed: int) -> SimReport:
    """Legal users with i.i.d. symbol errors (probability p, uniform nonzero
    value); a trial is rejected unless decoding returns the enrolled P^k."""
    from .modem import rs_decode_rows

    t0 = time.perf_counter()
    F = code.field
    G = np.asarray(code.G, dtype=np.int64)
    inv = np.asarray(code._info_inv, dtype=np.int64)
    rejects = 0
    for c, m in chunks(trials):
        rng = stream(seed, c)
        Pk = rng.integers(0, F.q, (m, code.k))
        b = rng.integers(0, F.q, (m, code.n))
        stored = F.vadd(b, F.vmatmul(Pk, G))
        b_noisy = F.vadd(b, _symbol_errors(rng, b.shape, p, F.q))
        dec, failed = rs_decode_rows(code, F.vsub(stored, b_noisy))
        info = F.vmatmul(dec[:, : code.k], inv)
        rejects += int(np.count_nonzero(failed | np.any(info != Pk, axis=1)))
    rep = SimReport("jw_frr", {"n": code.n, "k": code.k, "p": p}, seed)
    rep.add_proportion("FRR", rejects, trials)
    f = far_frr_formulas("jw", code.n, code.k, code.field.q, p)
    rep.add("FRR_bound", f["FRR_bound"])
    rep.add("FRR_approx", f["FRR_approx"])
    rep.wall_time = time.perf_counter() - t0
    return rep


def impostor_far_sim(scheme: str, code: RsCode, trials: int, seed: int, t: int | None = None) -> SimReport:
    """Uniformly random impostor templates of the scheme's mode against one
    enrolled record per trial."""
    t0 = time.perf_counter()
    F = code.field
    accepts = 0
    rng = stream(seed)
    for i in range(trials):
        if scheme in ("syndrome", "jw"):
            b = rng.integers(0, F.q, code.n).tolist()
            imp = rng.integers(0, F.q, code.n).tolist()
            if scheme == "syndrome":
                rec = syndrome_enroll(b, code)
                try:
                    syndrome_reconstruct(imp, rec, code)
                    accepts += 1
                except ReconstructFailure:
                    pass
            else:
                accepts += jw_auth(jw_enroll(b, code, seed * 1_000_003 + i), imp, code).accepted
        else:
            labels = (rng.choice(F.q - 1, t, replace=False) + 1).tolist()
            imp = (rng.choice(F.q - 1, t, replace=False) + 1).tolist()
            enroll, auth = {"js": (js_enroll, js_auth), "jw-t": (jw_fixed_t, jw_fixed_t_auth),
                            "js-dodis": (js_improved_enroll, js_improved_auth)}[scheme]
            accepts += auth(enroll(labels, code, seed * 1_000_003 + i), imp, code).accepted
    rep = SimReport("far", {"scheme": scheme, "n": code.n, "k": code.k, "t": t}, seed)
    rep.add_proportion("FAR", accepts, trials)
    rep.add("FAR_formula", far_frr_formulas(scheme, code.n, code.k, F.q, t=t)["FAR"])
    rep.wall_time = time.perf_counter() - t0
    return rep


def guess_attack(record: VaultRecord, code: RsCode) -> tuple[int, int]:
    """Try every k-subset of positions as the trusted ones (the rest erased);
    returns (successes, attempts)."""
    ok = 0
    total = 0
    for S in itertools.combinations(range(code.n), code.k):
        total += 1
        erasures = [i for i in range(code.n) if i not in S]
        res = code.decode_erasures(list(record.payload), erasures)
        ok += res.ok and digest(res.info) == record.commitment
    return ok, total
