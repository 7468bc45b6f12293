"""Integer primitives: smallest-prime-factor sieve, factorization, square-free
cores, Legendre symbols and p-adic valuations.

Every factorization goes through an :class:`SpfTable`.  Tables are immutable
once built and may be shared between threads.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RangeError, ResourceError

# int32 entries, so 4 bytes each: 400 MB ceiling.
MAX_TABLE_LIMIT = 100_000_000


@dataclass(frozen=True)
class Factorization:
    value: int
    sign: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = self.sign
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise DomainError(f"bad factor list {self.factors}")
            last = p
            prod *= p**e
        if prod != self.value:
            raise DomainError(f"factors {self.factors} do not multiply to {self.value}")

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]


@dataclass(frozen=True)
class SquarefreeCore:
    """``value == core * cofactor**2`` with ``core`` square-free and signed."""

    core: int
    cofactor: int


class SpfTable:
    """Smallest prime factor of every integer in ``[2, limit]``."""

    def __init__(self, limit: int):
        if limit < 2:
            raise DomainError("table limit must be at least 2")
        if limit > MAX_TABLE_LIMIT:
            raise ResourceError(
                f"spf table of size {limit} exceeds budget {MAX_TABLE_LIMIT}")
        self.limit = int(limit)
        spf = np.zeros(self.limit + 1, dtype=np.int32)
        for p in range(2, math.isqrt(self.limit) + 1):
            if spf[p] == 0:
                block = spf[p * p::p]
                block[block == 0] = p
        unset = spf == 0
        spf[unset] = np.nonzero(unset)[0]
        spf[0] = spf[1] = 0
        spf.flags.writeable = False
        self.spf = spf

    def __getitem__(self, n: int) -> int:
        return int(self.spf[n])

    def __len__(self):
        return self.limit + 1

    def is_prime(self, n: int) -> bool:
        return 2 <= n <= self.limit and self.spf[n] == n


_shared_table: SpfTable | None = None
_shared_lock = threading.Lock()


def shared_table(limit: int) -> SpfTable:
    """Process-wide table covering at least ``limit``; grows on demand."""
    global _shared_table
    limit = max(int(limit), 2)
    table = _shared_table
    if table is not None and table.limit >= limit:
        return table
    with _shared_lock:
        if _shared_table is None or _shared_table.limit < limit:
            size = max(limit, 1 << 16)
            if _shared_table is not None:
                size = max(size, min(2 * _shared_table.limit, MAX_TABLE_LIMIT))
            _shared_table = SpfTable(size)
        return _shared_table


def build_spf_table(limit: int) -> SpfTable:
    return SpfTable(limit)


def _check_range(n: int, table: SpfTable | None) -> SpfTable:
    if n == 0:
        raise DomainError("zero has no factorization")
    if table is None:
        return shared_table(abs(n))
    if abs(n) > table.limit:
        raise RangeError(f"|{n}| exceeds table limit {table.limit}")
    return table


def factorize(n: int, table: SpfTable | None = None) -> Factorization:
    table = _check_range(n, table)
    m = abs(n)
    spf = table.spf
    factors = []
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        factors.append((p, e))
    return Factorization(n, 1 if n > 0 else -1, tuple(factors))


def squarefree_core(n: int, table: SpfTable | None = None) -> SquarefreeCore:
    f = factorize(n, table)
    core = f.sign
    cof = 1
    for p, e in f.factors:
        if e & 1:
            core *= p
        cof *= p ** (e >> 1)
    return SquarefreeCore(core, cof)


def is_squarefree(n: int, table: SpfTable | None = None) -> bool:
    return all(e == 1 for _, e in factorize(n, table).factors)


def is_prime(n: int) -> bool:
    """Trial division; only used to validate small moduli."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def legendre_symbol(a: int, p: int) -> int:
    if p == 2 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def p_adic_valuation(n: int, p: int) -> tuple[int, int]:
    """Return ``(v, unit)`` with ``n == p**v * unit`` and ``p`` not dividing ``unit``."""
    if n == 0:
        raise DomainError("valuation of zero is infinite")
    if p < 2:
        raise DomainError(f"{p} is not a prime")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n
