"""Exclusion sets modulo p, the large-sieve denominator F(L) and the
resulting upper-bound main term (dimension 4)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .arithmetic import SpfTable, is_prime, legendre_symbol
from .errors import DomainError, ResourceError

EXACT_LIMIT = 10_000
BRUTEFORCE_BUDGET = 10**9


def _check_prime(p: int):
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")


def omega_membership(r: Sequence[int], p: int, _residues=None) -> Optional[int]:
    """Index i of the component containing ``r`` mod p, or None.

    Components 0 and 1 test -r2*r3, components 2 and 3 test -r0*r1; each
    requires exactly its own coordinate to vanish, so they are disjoint.
    """
    _check_prime(p)
    if len(r) != 4 or any(not 0 <= c < p for c in r):
        raise DomainError(f"residues must be 4 values in [0, {p})")
    if p == 2:
        return None
    zeros = [i for i in range(4) if r[i] == 0]
    if len(zeros) != 1:
        return None
    i = zeros[0]
    other = -r[2] * r[3] if i < 2 else -r[0] * r[1]
    chi = _residues[other % p] if _residues is not None else legendre_symbol(other, p)
    return i if chi == -1 else None


def omega_size_formula(p: int) -> int:
    if p == 2:
        raise DomainError("the cardinality formula is stated for odd primes")
    _check_prime(p)
    return 2 * (p - 1) ** 3


def omega_size_bruteforce(p: int) -> int:
    _check_prime(p)
    if p**4 > BRUTEFORCE_BUDGET:
        raise ResourceError(f"{p}^4 residue vectors exceed budget")
    chi = None
    if p > 2:
        chi = [0] + [legendre_symbol(x, p) for x in range(1, p)]
    return sum(omega_membership(r, p, chi) is not None
               for r in itertools.product(range(p), repeat=4))


def omega_size(p: int) -> int:
    """|Omega_p|, taking |Omega_2| = 0."""
    return 0 if p == 2 else omega_size_formula(p)


@dataclass(frozen=True)
class SieveEvaluation:
    L: int
    value: Optional[Fraction]
    approx: float


def _local_ratio(p: int) -> Fraction:
    w = omega_size(p)
    return Fraction(w, p**4 - w)


def f_of_L(L: int, exact: Optional[bool] = None) -> SieveEvaluation:
    """F(L) = sum over square-free n <= L of prod_{p | n} |Omega_p| / (p^4 - |Omega_p|).

    Exact rational arithmetic up to ``EXACT_LIMIT`` (unless ``exact=False``),
    compensated float summation otherwise.  Even n contribute nothing.
    """
    if L < 1:
        raise DomainError("L must be positive")
    if exact is None:
        exact = L <= EXACT_LIMIT
    table = SpfTable(max(L, 2))
    spf = table.spf
    primes = [p for p in range(3, L + 1) if spf[p] == p]
    if exact:
        ratios = {p: _local_ratio(p) for p in primes}
    else:
        ratios = {p: float(_local_ratio(p)) for p in primes}
    terms = [Fraction(1) if exact else 1.0]
    for n in range(3, L + 1, 2):
        m = n
        t = 1
        while m > 1:
            p = int(spf[m])
            m //= p
            if m % p == 0:
                break
            t = t * ratios[p]
        else:
            terms.append(t)
    if exact:
        value = _exact_sum(terms)
        return SieveEvaluation(L, value, float(value))
    return SieveEvaluation(L, None, math.fsum(terms))


def _exact_sum(terms):
    # pairwise summation keeps the intermediate denominators balanced
    while len(terms) > 1:
        nxt = [terms[i] + terms[i + 1] for i in range(0, len(terms) - 1, 2)]
        if len(terms) % 2:
            nxt.append(terms[-1])
        terms = nxt
    return terms[0]


def f_of_L_termwise(L: int) -> Fraction:
    """Direct evaluation from the definition (Moebius test by trial division).

    Independent of the sieve used in :func:`f_of_L`; for cross-checks only.
    """
    total = Fraction(0)
    for n in range(1, L + 1):
        ps, m, sqfree = [], n, True
        d = 2
        while d * d <= m:
            if m % d == 0:
                m //= d
                if m % d == 0:
                    sqfree = False
                    break
                ps.append(d)
            d += 1
        if not sqfree:
            continue
        if m > 1:
            ps.append(m)
        term = Fraction(1)
        for p in ps:
            w = 0 if p == 2 else 2 * (p - 1) ** 3
            term *= Fraction(w, p**4 - w)
        total += term
    return total


def large_sieve_bound(U: Sequence[float], L: int) -> float:
    """Main term prod(U_i + L^2) / F(L), without the implied constant."""
    if len(U) != 4:
        raise DomainError("need four box sizes")
    if L < 1:
        raise DomainError("L must be positive")
    num = math.prod(u + L * L for u in U)
    return num / f_of_L(L).approx


def f_growth_table(Ls: Sequence[int]) -> list[tuple[int, float]]:
    out = []
    for L in Ls:
        if L < 2:
            raise DomainError("growth table needs L >= 2")
        out.append((L, f_of_L(L).approx / math.log(L) ** 2))
    return out
