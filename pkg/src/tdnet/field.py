"""Small finite fields GF(p^m) with precomputed tables.

Elements are the integers ``0..q-1``; for ``m > 1`` an element encodes the
coefficient vector of a polynomial over GF(p) in base ``p`` (constant term is
the least significant digit). Reduction uses the Conway polynomial of the
order, so the representation is fixed across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# coefficients, constant term first, monic leading term included
CONWAY_POLYNOMIALS: dict[int, tuple[int, ...]] = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (2, 2, 1),
    16: (1, 1, 0, 0, 1),
    25: (2, 4, 1),
    27: (1, 2, 0, 1),
    32: (1, 0, 1, 0, 0, 1),
    49: (3, 6, 1),
    64: (1, 1, 0, 1, 1, 0, 1),
    81: (2, 0, 0, 2, 1),
    121: (2, 7, 1),
    128: (1, 1, 0, 0, 0, 0, 0, 1),
}

MAX_ORDER = 128


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, m)`` with ``q == p**m`` or ``None``."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            if not _is_prime(p):
                return None
            m, r = 0, q
            while r % p == 0:
                r //= p
                m += 1
            return (p, m) if r == 1 else None
    return None


def is_supported_order(q: int) -> bool:
    pm = prime_power(q)
    if pm is None or q > MAX_ORDER:
        return False
    return pm[1] == 1 or q in CONWAY_POLYNOMIALS


@dataclass(frozen=True)
class FiniteField:
    q: int
    p: int
    m: int
    modulus: tuple[int, ...] | None
    add_table: tuple[tuple[int, ...], ...] = field(repr=False)
    mul_table: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.add_table[a].index(0)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.mul_table[a].index(1)

    def audit(self) -> list[str]:
        """Check the field axioms on the tables; returns the list of failures."""
        problems = []
        q, add, mul = self.q, self.add_table, self.mul_table
        for a in range(q):
            if add[a][0] != a or mul[a][1] != a:
                problems.append(f"identity fails at {a}")
            if 0 not in add[a]:
                problems.append(f"{a} has no additive inverse")
            if a and 1 not in mul[a]:
                problems.append(f"{a} has no multiplicative inverse")
            for b in range(q):
                if add[a][b] != add[b][a] or mul[a][b] != mul[b][a]:
                    problems.append(f"commutativity fails at ({a},{b})")
        if q <= 16:
            for a in range(q):
                for b in range(q):
                    for c in range(q):
                        if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]:
                            problems.append(f"distributivity fails at ({a},{b},{c})")
                        if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                            problems.append(f"associativity fails at ({a},{b},{c})")
        return problems


def _digits(x: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(x % p)
        x //= p
    return out


def _undigits(ds: list[int], p: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * p + d
    return x


def _poly_mulmod(a: list[int], b: list[int], modulus: tuple[int, ...], p: int) -> list[int]:
    m = len(modulus) - 1
    prod = [0] * (2 * m - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for deg in range(len(prod) - 1, m - 1, -1):
        c = prod[deg]
        if c:
            for i, mi in enumerate(modulus):
                prod[deg - m + i] = (prod[deg - m + i] - c * mi) % p
    return prod[:m]


def build_field(q: int) -> FiniteField:
    pm = prime_power(q)
    if pm is None:
        raise FieldError(f"{q} is not a prime power")
    if not is_supported_order(q):
        raise FieldError(f"GF({q}) is not in the supported catalog (q <= {MAX_ORDER})")
    p, m = pm
    if m == 1:
        add = tuple(tuple((a + b) % p for b in range(q)) for a in range(q))
        mul = tuple(tuple((a * b) % p for b in range(q)) for a in range(q))
        return FiniteField(q, p, 1, None, add, mul)
    modulus = CONWAY_POLYNOMIALS[q]
    digs = [_digits(x, p, m) for x in range(q)]
    add = tuple(
        tuple(_undigits([(u + v) % p for u, v in zip(digs[a], digs[b])], p) for b in range(q))
        for a in range(q)
    )
    mul = tuple(
        tuple(_undigits(_poly_mulmod(digs[a], digs[b], modulus, p), p) for b in range(q))
        for a in range(q)
    )
    return FiniteField(q, p, m, modulus, add, mul)
