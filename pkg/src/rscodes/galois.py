"""Finite field arithmetic over GF(p) and GF(2^m).

Elements are plain integer labels.  For binary extension fields the label of
the polynomial p_0 + p_1 X + ... + p_{m-1} X^{m-1} is sum(p_i * 2**i), so the
least significant bit is the constant term.  The polynomial X (label 2) is
always the primitive element; a defining polynomial for which X has period
smaller than 2^m - 1 is rejected.
"""

from __future__ import annotations

import re
from functools import cached_property

import numpy as np

from .errors import BadParameters, DivideByZero, NotMinimalPolynomial, NotPrime

# primitive polynomials as bitmasks (bit i = coefficient of X^i)
DEFAULT_POLYS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}

_SUPERSCRIPTS = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹", "0123456789")


def parse_poly(text) -> int:
    """Parse '1+X+X^3', 'x^3+x+1', '1+X+X³', '0b1011', '0xb' or '11' to a bitmask."""
    if isinstance(text, int):
        return text
    s = str(text).strip().translate(_SUPERSCRIPTS).replace(" ", "")
    if re.fullmatch(r"0[bB][01]+", s):
        return int(s, 2)
    if re.fullmatch(r"0[xX][0-9a-fA-F]+", s):
        return int(s, 16)
    if s.isdigit():
        return int(s)
    mask = 0
    for term in s.replace("-", "+").split("+"):
        if not term:
            continue
        t = term.upper().replace("**", "^")
        if t == "1":
            e = 0
        elif t == "X":
            e = 1
        elif re.fullmatch(r"X\^?\d+", t):
            e = int(t.lstrip("X^"))
        else:
            raise BadParameters(f"cannot parse polynomial term {term!r}")
        mask ^= 1 << e
    return mask


def poly_to_str(mask: int, var: str = "X") -> str:
    terms = []
    for e in range(mask.bit_length()):
        if mask >> e & 1:
            terms.append("1" if e == 0 else var if e == 1 else f"{var}^{e}")
    return "+".join(terms) if terms else "0"


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class GaloisField:
    """GF(p) for prime p, or GF(2^m) defined by a primitive polynomial.

    Use :meth:`prime` or :meth:`binary` (or :func:`field_new`) to construct.
    """

    def __init__(self, kind: str, p: int, m: int, poly: int | None):
        self.kind = kind
        self.p = p
        self.m = m
        self.poly = poly
        self.q = p**m
        n = self.q - 1
        exp = [0] * (2 * n) if n else []
        log = [-1] * self.q
        if kind == "prime":
            self.alpha = self._primitive_root(p)
            x = 1
            for i in range(n):
                exp[i] = x
                x = x * self.alpha % p
        else:
            self.alpha = 2 % (1 << m) if m > 1 else 1
            x = 1
            for i in range(n):
                exp[i] = x
                x <<= 1
                if x >> m & 1:
                    x ^= poly
        for i in range(n):
            if log[exp[i]] != -1:
                raise NotMinimalPolynomial(
                    f"{poly_to_str(poly)}: X has period {i} < {n}"
                )
            log[exp[i]] = i
        if kind == "binary" and x != 1:
            raise NotMinimalPolynomial(f"{poly_to_str(poly)} is not minimal")
        for i in range(n):
            exp[n + i] = exp[i]
        self.exp_table = exp
        self.log_table = log
        self.order = n  # multiplicative group order

    @classmethod
    def prime(cls, p: int) -> "GaloisField":
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        return cls("prime", p, 1, None)

    @classmethod
    def binary(cls, m: int, poly=None) -> "GaloisField":
        if not 1 <= m <= 16:
            raise BadParameters("m must be in 1..16")
        poly = DEFAULT_POLYS[m] if poly is None else parse_poly(poly)
        if poly.bit_length() != m + 1:
            raise BadParameters(f"polynomial {poly_to_str(poly)} does not have degree {m}")
        if not poly & 1:
            raise NotMinimalPolynomial(f"{poly_to_str(poly)} is divisible by X")
        return cls("binary", 2, m, poly)

    @staticmethod
    def _primitive_root(p: int) -> int:
        if p == 2:
            return 1
        n = p - 1
        factors = {f for f in range(2, n + 1) if n % f == 0 and is_prime(f)}
        for g in range(2, p):
            if all(pow(g, n // f, p) != 1 for f in factors):
                return g
        raise NotPrime(p)  # unreachable for primes

    def __repr__(self):
        if self.kind == "prime":
            return f"GF({self.p})"
        return f"GF(2^{self.m}, {poly_to_str(self.poly)})"

    def __eq__(self, other):
        return (
            isinstance(other, GaloisField)
            and (self.kind, self.p, self.m, self.poly) == (other.kind, other.p, other.m, other.poly)
        )

    def __hash__(self):
        return hash((self.kind, self.p, self.m, self.poly))

    @property
    def characteristic(self) -> int:
        return self.p

    def elements(self):
        return range(self.q)

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise BadParameters(f"label {a} outside {self}")
        return a

    # scalar arithmetic
    def add(self, a: int, b: int) -> int:
        if self.kind == "binary":
            return a ^ b
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        if self.kind == "binary":
            return a ^ b
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        if self.kind == "binary":
            return a
        return -a % self.p

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp_table[self.log_table[a] + self.log_table[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivideByZero("inverse of zero")
        return self.exp_table[(self.order - self.log_table[a]) % self.order]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise DivideByZero("division by zero")
        if a == 0:
            return 0
        return self.exp_table[(self.log_table[a] - self.log_table[b]) % self.order]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DivideByZero("zero to a negative power")
            return 1 if e == 0 else 0
        return self.exp_table[(self.log_table[a] * e) % self.order]

    def alpha_pow(self, e: int) -> int:
        """alpha^e for any integer e."""
        return self.exp_table[e % self.order]

    def log(self, a: int) -> int:
        if a == 0:
            raise DivideByZero("log of zero")
        return self.log_table[a]

    def arith(self, op: str, a: int, b: int | None = None) -> int:
        self.check(a)
        if op == "inv":
            return self.inv(a)
        if op == "pow":
            return self.pow(a, b)
        self.check(b)
        return {"add": self.add, "sub": self.sub, "mul": self.mul, "div": self.div}[op](a, b)

    def element_name(self, a: int) -> str:
        if a == 0:
            return "0"
        if a == 1:
            return "1"
        e = self.log_table[a]
        return "a" if e == 1 else f"a^{e}"

    def tuple_of(self, a: int) -> tuple:
        """Coefficient tuple (p_0, ..., p_{m-1}) of a binary-field label."""
        return tuple(a >> i & 1 for i in range(self.m))

    # vectorised helpers (numpy arrays of labels)
    @cached_property
    def _np_exp(self):
        return np.array(self.exp_table + self.exp_table[:1], dtype=np.int64)

    @cached_property
    def _np_log(self):
        lg = np.array(self.log_table, dtype=np.int64)
        lg[0] = 0
        return lg

    @cached_property
    def mul_table(self) -> np.ndarray:
        if self.q > 4096:
            raise BadParameters("multiplication table only built for q <= 4096")
        a = np.arange(self.q)
        return self.vmul(a[:, None], a[None, :])

    def vadd(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        if self.kind == "binary":
            return np.bitwise_xor(a, b)
        return (a + b) % self.p

    def vsub(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        if self.kind == "binary":
            return np.bitwise_xor(a, b)
        return (a - b) % self.p

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        s = (self._np_log[a] + self._np_log[b]) % self.order if self.order else 0 * a
        out = self._np_exp[s]
        return np.where((a == 0) | (b == 0), 0, out)

    def vmatmul(self, A, B):
        """Matrix product over the field for integer arrays (..., r, s) @ (s, c)."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
        for i in range(A.shape[-1]):
            prod = self.vmul(A[..., i, None], B[i])
            out = self.vadd(out, prod)
        return out


def field_new(kind: str, p_or_m: int, poly=None) -> GaloisField:
    """Construct GF(p) (kind 'prime') or GF(2^m) (kind 'binary')."""
    if kind == "prime":
        return GaloisField.prime(p_or_m)
    if kind == "binary":
        return GaloisField.binary(p_or_m, poly)
    raise BadParameters(f"unknown field kind {kind!r}")


def element_table(field: GaloisField) -> list[dict]:
    """Rows of the power / polynomial / tuple / inverse table, powers 1..q-1."""
    rows = []
    for i in range(1, field.q):
        a = field.alpha_pow(i)
        inv_e = (field.order - i) % field.order
        row = {"power": i, "label": a, "inverse": "1" if inv_e == 0 else f"a^{inv_e}"}
        if field.kind == "binary":
            row["polynomial"] = poly_to_str(a)
            row["tuple"] = "".join(str(b) for b in field.tuple_of(a))
        else:
            row["polynomial"] = str(a)
            row["tuple"] = str(a)
        rows.append(row)
    return rows
