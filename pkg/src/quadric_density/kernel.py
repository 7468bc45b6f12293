"""Compiled counting kernel for the nondegenerate and degenerate strata.

For a gauge-fixed parameter t with square-free cores u, the fiber form
<u0u2, u1u3, u0u3, u1u2> equals u0u2 * <1, a, b, ab> up to squares, where
a = u2u3 and b = u0u1.  Its discriminant is a square, so it is isotropic at
a place exactly when the quaternion algebra (-a, -b) splits there.  The kernel
therefore evaluates one Hilbert symbol (-u2u3, -u0u1) per place.  Both
arguments are square-free because gcd(t0, t1) = gcd(t2, t3) = 1.

All functions release the GIL, so strata can run on a thread pool.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .arithmetic import SpfTable

# per-stratum counter layout
N_NONDEG, N_SOLUBLE, N_THIN_REMOVED_SOLUBLE, N_ANTIDIAG_SOLUBLE = range(4)
N_COUNTERS = 4


@njit(cache=True, nogil=True)
def _gcd(a, b):
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


@njit(cache=True, nogil=True)
def _legendre(x, p):
    x %= p
    if x < 0:
        x += p
    if x == 0:
        return 0
    e = (p - 1) // 2
    r = 1
    while e:
        if e & 1:
            r = r * x % p
        x = x * x % p
        e >>= 1
    return -1 if r == p - 1 else 1


@njit(cache=True, nogil=True)
def _eps(u):
    return 0 if (u % 4 + 4) % 4 == 1 else 1


@njit(cache=True, nogil=True)
def _omega(u):
    r = (u % 8 + 8) % 8
    return 0 if r == 1 or r == 7 else 1


@njit(cache=True, nogil=True)
def _odd_part_ok(a, b, n, off, pr, b_side):
    # Symbol (a, b)_p for the odd primes p dividing the core of n.
    for k in range(off[n], off[n + 1]):
        p = pr[k]
        if b_side:
            if a % p == 0:
                continue  # handled from the a side
            if _legendre(a, p) < 0:
                return False
        elif b % p == 0:
            s = _legendre(a // p, p) * _legendre(b // p, p)
            if (p - 1) // 2 % 2 == 1:
                s = -s
            if s < 0:
                return False
        elif _legendre(b, p) < 0:
            return False
    return True


@njit(cache=True, nogil=True)
def quaternion_splits(a, b, n2, n3, n0, n1, off, pr):
    """(a, b)_v = +1 at every place; n_i index the prime lists of |t_i|."""
    if a < 0 and b < 0:
        return False
    if not _odd_part_ok(a, b, n2, off, pr, False):
        return False
    if not _odd_part_ok(a, b, n3, off, pr, False):
        return False
    if not _odd_part_ok(a, b, n0, off, pr, True):
        return False
    if not _odd_part_ok(a, b, n1, off, pr, True):
        return False
    alpha = 1 if a % 2 == 0 else 0
    beta = 1 if b % 2 == 0 else 0
    u = a // 2 if alpha else a
    v = b // 2 if beta else b
    e = _eps(u) * _eps(v) + alpha * _omega(v) + beta * _omega(u)
    return e % 2 == 0


@njit(cache=True, nogil=True)
def count_stratum(s, t0_lo, t0_hi, core, off, pr):
    out = np.zeros(N_COUNTERS, dtype=np.int64)
    for t0 in range(t0_lo, t0_hi + 1):
        bound23 = s // t0
        u0 = core[t0]
        for t2 in range(1, bound23 + 1):
            u2 = core[t2]
            for t3 in range(-bound23, bound23 + 1):
                if t3 == 0 or _gcd(t2, t3) != 1:
                    continue
                at3 = -t3 if t3 < 0 else t3
                u3 = core[at3] if t3 > 0 else -core[at3]
                a = -u2 * u3
                m = t2 if t2 > at3 else at3
                bound1 = s // m
                anti = t3 == -t2
                for t1 in range(-bound1, bound1 + 1):
                    if t1 == 0 or _gcd(t0, t1) != 1:
                        continue
                    out[N_NONDEG] += 1
                    at1 = -t1 if t1 < 0 else t1
                    u1 = core[at1] if t1 > 0 else -core[at1]
                    b = -u0 * u1
                    if quaternion_splits(a, b, t2, at3, t0, at1, off, pr):
                        out[N_SOLUBLE] += 1
                        if a != 1 and b != 1:
                            out[N_THIN_REMOVED_SOLUBLE] += 1
                        if anti:
                            out[N_ANTIDIAG_SOLUBLE] += 1
    return out


@njit(cache=True, nogil=True)
def count_mixed_pairs(s):
    """#{(a, b): 1 <= a <= s, 0 < |b| <= s, gcd(a, b) = 1}."""
    n = 0
    for a in range(1, s + 1):
        for b in range(1, s + 1):
            if _gcd(a, b) == 1:
                n += 2
    return n


@njit(cache=True)
def _core_tables(spf):
    limit = spf.shape[0] - 1
    core = np.ones(limit + 1, dtype=np.int64)
    counts = np.zeros(limit + 2, dtype=np.int64)
    for n in range(2, limit + 1):
        m = n
        c = 1
        k = 0
        while m > 1:
            p = spf[m]
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e % 2 == 1:
                c *= p
                if p != 2:
                    k += 1
        core[n] = c
        counts[n + 1] = k
    off = np.cumsum(counts)
    pr = np.zeros(off[-1], dtype=np.int64)
    for n in range(2, limit + 1):
        c = core[n]
        k = off[n]
        m = c
        while m > 1:
            p = spf[m]
            m //= p
            if p != 2:
                pr[k] = p
                k += 1
    return core, off, pr


class CoreTables:
    """Square-free cores of 1..s and the odd primes of each core (CSR layout)."""

    def __init__(self, s: int):
        self.s = s
        table = SpfTable(max(s, 2))
        self.core, self.off, self.pr = _core_tables(np.asarray(table.spf, dtype=np.int64))
