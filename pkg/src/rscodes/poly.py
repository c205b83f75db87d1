"""Polynomials over a GaloisField as coefficient lists, lowest degree first."""

from __future__ import annotations

from .errors import DivideByZero
from .galois import GaloisField


def trim(a: list[int]) -> list[int]:
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a or [0]


def degree(a) -> int:
    a = trim(a)
    return -1 if a == [0] else len(a) - 1


def add(F: GaloisField, a, b) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return trim([F.add(x, y) for x, y in zip(a, b)])


def sub(F: GaloisField, a, b) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return trim([F.sub(x, y) for x, y in zip(a, b)])


def mul(F: GaloisField, a, b) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def scale(F: GaloisField, c: int, a) -> list[int]:
    return trim([F.mul(c, x) for x in a])


def divmod_(F: GaloisField, a, b):
    b = trim(b)
    db = degree(b)
    if db < 0:
        raise DivideByZero("polynomial division by zero")
    r = trim(a)
    qlen = max(len(r) - db, 1)
    q = [0] * qlen
    lead_inv = F.inv(b[db])
    while degree(r) >= db:
        dr = degree(r)
        c = F.mul(r[dr], lead_inv)
        shift = dr - db
        q[shift] = c
        for i in range(db + 1):
            r[i + shift] = F.sub(r[i + shift], F.mul(c, b[i]))
        r = trim(r)
    return trim(q), r


def evaluate(F: GaloisField, a, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def derivative(F: GaloisField, a) -> list[int]:
    out = []
    for i in range(1, len(a)):
        c = 0
        for _ in range(i % F.p):
            c = F.add(c, a[i])
        out.append(c)
    return trim(out) if out else [0]


def mod_xn(a, n: int) -> list[int]:
    return trim(list(a)[:n])


def from_roots(F: GaloisField, roots) -> list[int]:
    """prod (X - r)."""
    out = [1]
    for r in roots:
        out = mul(F, out, [F.neg(r), 1])
    return out
