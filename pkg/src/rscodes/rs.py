"""Reed-Solomon codes: construction, encoding, syndromes and decoding.

A code of length n = q - 1 has generator rows G[i][j] = alpha^((b + i) j) for
i = 0..k-1, where b is the first row exponent (0 by default).  Its codewords
vanish at alpha^l0, ..., alpha^(l0 + n - k - 1) with l0 = (n - b + 1) mod n, so
for b = 0 the syndromes are the evaluations R(alpha), ..., R(alpha^(n-k)).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import linalg as la
from . import poly as P
from .errors import BadParameters, TooManyErasures
from .galois import GaloisField

CORRECTED = "Corrected"
FAILURE = "Failure"


@dataclass
class DecodeResult:
    status: str
    codeword: list[int] | None = None
    info: list[int] | None = None
    error_positions: list[int] = dc_field(default_factory=list)
    error_values: list[int] = dc_field(default_factory=list)
    syndrome: list[int] | None = None
    locator: list[int] | None = None
    evaluator: list[int] | None = None

    @property
    def ok(self) -> bool:
        return self.status == CORRECTED


class RsCode:
    """An (n, k) Reed-Solomon code over ``field``.

    variant
        ``standard``: n = q - 1, evaluation points alpha^0..alpha^(n-1).
        ``shortened``: n < q - 1, the length-(q-1) code restricted to words that
        vanish on the dropped positions; defined through its syndrome former.
        ``extended``: n = q, an extra leading evaluation point 0 (first column is
        (1, 0, ..., 0)); used for signature and permutation constructions.
    """

    def __init__(self, field: GaloisField, n: int, k: int, variant: str = "standard", first_row: int = 0):
        F = field
        N = F.q - 1
        if not 1 <= k <= n:
            raise BadParameters("need 1 <= k <= n")
        if variant == "standard" and n != N:
            raise BadParameters(f"standard variant needs n = q - 1 = {N}")
        if variant == "shortened" and not n < N:
            raise BadParameters("shortened variant needs n < q - 1")
        if variant == "extended" and n != F.q:
            raise BadParameters("extended variant needs n = q")
        if variant not in ("standard", "shortened", "extended"):
            raise BadParameters(f"unknown variant {variant!r}")
        self.field = F
        self.n, self.k, self.variant, self.first_row = n, k, variant, first_row
        self.d_min = n - k + 1
        self.r = n - k
        self.l0 = (N - first_row + 1) % N if N else 0
        if variant == "extended":
            pts = [0] + [F.alpha_pow(j) for j in range(N)]
            self.G = [[F.pow(x, first_row + i) if x else int(first_row + i == 0) for x in pts] for i in range(k)]
            self.H_T = la.transpose(la.nullspace(F, self.G)) if k < n else [[] for _ in range(n)]
        else:
            self.H_T = [[F.alpha_pow((self.l0 + l) * j) for l in range(self.r)] for j in range(n)]
            if variant == "standard":
                self.G = [[F.alpha_pow((first_row + i) * j) for j in range(n)] for i in range(k)]
            else:
                self.G = _systematic_basis(F, la.nullspace(F, la.transpose(self.H_T)), k)
        self.G_sys, piv, _ = la.rref(F, self.G)
        if piv != list(range(k)):
            raise BadParameters("leading k columns of G are not independent")
        info_cols = list(range(k))
        self._info_inv = la.inverse(F, la.submatrix_cols(self.G, info_cols))

    def __repr__(self):
        return f"RsCode({self.field}, n={self.n}, k={self.k}, {self.variant})"

    # generator polynomial view
    @property
    def roots(self) -> list[int]:
        return [self.field.alpha_pow(self.l0 + j) for j in range(self.r)]

    @property
    def generator_poly(self) -> list[int]:
        return P.from_roots(self.field, self.roots)

    # encoders
    def encode(self, info) -> list[int]:
        """info (length k) times G."""
        self._len(info, self.k)
        return la.vec_mat(self.field, info, self.G)

    def encode_systematic(self, info) -> list[int]:
        """info times [I_k | T]; info occupies the first k positions."""
        self._len(info, self.k)
        return la.vec_mat(self.field, info, self.G_sys)

    def encode_poly(self, info) -> list[int]:
        """Coefficients of A(X) g(X) where A has coefficients ``info``."""
        self._require_cyclic()
        self._len(info, self.k)
        c = P.mul(self.field, list(info), self.generator_poly)
        return c + [0] * (self.n - len(c))

    def encode_systematic_poly(self, info) -> list[int]:
        """X^(n-k) A(X) minus its remainder mod g(X); info sits in the last k positions."""
        self._require_cyclic()
        self._len(info, self.k)
        shifted = [0] * self.r + list(info)
        _, rem = P.divmod_(self.field, shifted, self.generator_poly)
        c = P.sub(self.field, shifted, rem)
        return c + [0] * (self.n - len(c))

    def unencode(self, codeword) -> list[int]:
        """Info vector u with u G = codeword (read off the first k positions)."""
        return la.vec_mat(self.field, codeword[: self.k], self._info_inv)

    def is_codeword(self, word) -> bool:
        return not any(self.syndrome(word))

    # syndromes
    def syndrome(self, received) -> list[int]:
        self._len(received, self.n)
        return la.vec_mat(self.field, received, self.H_T)

    def word_with_syndrome(self, syndrome) -> list[int]:
        """Some word r with r H_T = syndrome, supported on the last n - k positions."""
        F = self.field
        if not hasattr(self, "_tail_inv"):
            self._tail_inv = la.inverse(F, self.H_T[self.k :])
        tail = la.vec_mat(F, syndrome, self._tail_inv)
        return [0] * self.k + tail

    def decode_syndrome(self, syndrome):
        """Error pattern e of weight <= floor((n-k)/2) with e H_T = syndrome, or None."""
        r = self.word_with_syndrome(syndrome)
        res = self.decode_errors(r)
        if not res.ok:
            return None
        return la.vec_sub(self.field, r, res.codeword)

    # decoders
    def decode_errors(self, received) -> DecodeResult:
        return self.decode_errors_and_erasures(received, ())

    def decode_erasures(self, received, erasures) -> DecodeResult:
        F = self.field
        erasures = sorted(set(erasures))
        if len(erasures) > self.d_min - 1:
            raise TooManyErasures(f"{len(erasures)} erasures > d_min - 1 = {self.d_min - 1}")
        keep = [j for j in range(self.n) if j not in erasures][: self.k]
        sub = la.submatrix_cols(self.G, keep)
        info = la.vec_mat(F, [received[j] for j in keep], la.inverse(F, sub))
        cw = la.vec_mat(F, info, self.G)
        clean = all(cw[j] == received[j] for j in range(self.n) if j not in erasures)
        return DecodeResult(
            CORRECTED if clean else FAILURE,
            codeword=cw if clean else None,
            info=info if clean else None,
            error_positions=erasures if clean else [],
            error_values=[F.sub(received[j], cw[j]) for j in erasures] if clean else [],
        )

    def decode_errors_and_erasures(self, received, erasures) -> DecodeResult:
        """Euclid key-equation decoding with an erasure locator folded in.

        Erased positions are zeroed before the syndrome is taken.  With E
        erasures and N = n - k syndromes, only E + 2 floor((N - E)/2) of them
        enter the key equation, so E = 0 reduces exactly to plain error
        decoding with t = floor((n - k)/2); the remaining syndrome is used in
        the final re-check.
        """
        self._require_cyclic()
        F = self.field
        n = self.n
        erasures = sorted(set(erasures))
        E = len(erasures)
        if E > self.d_min - 1:
            raise TooManyErasures(f"{E} erasures > d_min - 1 = {self.d_min - 1}")
        r = list(received)
        self._len(r, n)
        for j in erasures:
            r[j] = 0
        S = self.syndrome(r)
        tau = (self.r - E) // 2
        Nk = E + 2 * tau
        if not any(S):
            return DecodeResult(CORRECTED, r, self.unencode(r), erasures, [0] * E, S, [1], [0])
        gamma = [1]
        for j in erasures:
            gamma = P.mul(F, gamma, [1, F.neg(F.alpha_pow(j))])
        T = P.mod_xn(P.mul(F, gamma, S[:Nk]), Nk)
        lam, omega = _euclid(F, [0] * Nk + [1], T, E + tau)
        fail = DecodeResult(FAILURE, syndrome=S)
        if lam is None or P.degree(lam) > tau:
            return fail
        psi = P.mul(F, lam, gamma)
        dpsi = P.derivative(F, psi)
        positions = [i for i in range(n) if P.evaluate(F, psi, F.alpha_pow(-i)) == 0]
        if len(positions) != P.degree(psi):
            return fail
        values = []
        cw = list(r)
        for i in positions:
            xinv = F.alpha_pow(-i)
            den = P.evaluate(F, dpsi, xinv)
            if den == 0:
                return fail
            mag = F.div(P.evaluate(F, omega, xinv), den)
            mag = F.neg(F.mul(F.alpha_pow(i * (1 - self.l0)), mag))
            values.append(mag)
            cw[i] = F.sub(cw[i], mag)
        if any(self.syndrome(cw)):
            return fail
        # report values relative to what was actually received at erased spots
        rep_vals = [F.sub(received[i], cw[i]) for i in positions]
        return DecodeResult(CORRECTED, cw, self.unencode(cw), positions, rep_vals, S, lam, omega)

    # matrix forms
    def semi_systematic(self, u: int):
        """Return (G_s, column_order) with G_s = [[I_u, T, U], [0, I_v, W]].

        The top u rows span the first u rows of G; the bottom v = k - u rows
        are zero on the first u columns.  ``column_order`` lists the columns
        used as pivots (identity unless a leading minor was singular).
        """
        return semi_systematic(self.field, self.G, u)

    def _len(self, v, n):
        if len(v) != n:
            raise BadParameters(f"expected length {n}, got {len(v)}")

    def _require_cyclic(self):
        if self.variant == "extended":
            raise BadParameters("operation needs a standard or shortened code")


def semi_systematic(F: GaloisField, G, u: int):
    k = len(G)
    n = len(G[0])
    if not 0 < u <= k:
        raise BadParameters("need 0 < u <= k")
    top, piv_top, _ = la.rref(F, G[:u])
    if len(piv_top) < u:
        raise BadParameters("first u rows are dependent")
    rows = [list(r) for r in top]
    # clear the pivot columns of the remaining rows using the top block
    bottom = []
    for row in G[u:]:
        row = list(row)
        for r_i, c in zip(rows, piv_top):
            if row[c]:
                row = la.vec_sub(F, row, la.vec_scale(F, row[c], r_i))
        bottom.append(row)
    rest_cols = [c for c in range(n) if c not in piv_top]
    if bottom:
        bot, piv_bot, _ = la.rref(F, bottom, col_order=rest_cols)
        if len(piv_bot) < k - u:
            raise BadParameters("generator has rank < k")
    else:
        bot, piv_bot = [], []
    # the top block is kept reduced only on its own pivots, leaving T non-zero
    return rows + bot, piv_top + piv_bot


def _systematic_basis(F, basis, k):
    R, piv, _ = la.rref(F, basis)
    if len(piv) != k:
        raise BadParameters("nullspace dimension mismatch")
    return R


def _euclid(F: GaloisField, a, b, stop: int):
    """Extended Euclid on (a, b) until deg(remainder) < stop.

    Returns (locator, evaluator) normalised to locator(0) = 1, or (None, None).
    """
    r0, r1 = P.trim(a), P.trim(b)
    t0, t1 = [0], [1]
    while P.degree(r1) >= stop:
        q, rem = P.divmod_(F, r0, r1)
        r0, r1 = r1, rem
        t0, t1 = t1, P.sub(F, t0, P.mul(F, q, t1))
    if t1[0] == 0:
        return None, None
    c = F.inv(t1[0])
    return P.scale(F, c, t1), P.scale(F, c, r1)


def min_distance_bruteforce(code: RsCode, budget: int = 1 << 20) -> int:
    return la.min_distance(code.field, code.G, budget)


def rs_new(field: GaloisField, n: int, k: int, variant: str = "standard", first_row: int = 0) -> RsCode:
    return RsCode(field, n, k, variant, first_row)
