"""Local isotropy of diagonal ternary and quaternary forms.

Hilbert symbols are computed from the usual valuation/residue formulas; the
p-adic verdicts can be cross-examined with :func:`oracle_isotropic_mod_pk`,
which decides the same question by searching residue classes only.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Union

from .arithmetic import is_prime, legendre_symbol, p_adic_valuation, shared_table
from .errors import DomainError, ResourceError

COEFF_BOUND = 2**31
ORACLE_BUDGET = 10**8


@dataclass(frozen=True)
class RealPlace:
    def __str__(self):
        return "real"


@dataclass(frozen=True, order=True)
class FinitePlace:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")

    def __str__(self):
        return str(self.p)


Place = Union[RealPlace, FinitePlace]
REAL = RealPlace()


@dataclass(frozen=True)
class DiagonalForm:
    coefficients: tuple[int, ...]

    def __init__(self, coefficients):
        coeffs = tuple(int(a) for a in coefficients)
        if len(coeffs) not in (3, 4):
            raise DomainError(f"need 3 or 4 coefficients, got {len(coeffs)}")
        if any(a == 0 for a in coeffs):
            raise DomainError(f"zero coefficient in {coeffs}")
        if any(abs(a) > COEFF_BOUND for a in coeffs):
            raise DomainError(f"coefficient exceeds 2^31 in {coeffs}")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def rank(self) -> int:
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def __str__(self):
        return "<" + ",".join(map(str, self.coefficients)) + ">"

    def evaluate(self, x) -> int:
        return sum(a * xi * xi for a, xi in zip(self.coefficients, x))


def _hilbert_odd(a: int, b: int, p: int) -> int:
    alpha, u = p_adic_valuation(a, p)
    beta, v = p_adic_valuation(b, p)
    s = -1 if (alpha * beta * (p - 1) // 2) & 1 else 1
    if beta & 1:
        s *= legendre_symbol(u, p)
    if alpha & 1:
        s *= legendre_symbol(v, p)
    return s


def _eps(u: int) -> int:
    return 0 if u % 4 == 1 else 1


def _omega(u: int) -> int:
    return 0 if u % 8 in (1, 7) else 1


def _hilbert_two(a: int, b: int) -> int:
    alpha, u = p_adic_valuation(a, 2)
    beta, v = p_adic_valuation(b, 2)
    e = _eps(u) * _eps(v) + alpha * _omega(v) + beta * _omega(u)
    return -1 if e & 1 else 1


def hilbert_symbol(a: int, b: int, place: Place) -> int:
    if a == 0 or b == 0:
        raise DomainError("Hilbert symbol needs nonzero arguments")
    if isinstance(place, RealPlace):
        return -1 if a < 0 and b < 0 else 1
    if place.p == 2:
        return _hilbert_two(a, b)
    return _hilbert_odd(a, b, place.p)


def hasse_invariant(form: DiagonalForm, place: Place) -> int:
    c = form.coefficients
    h = 1
    for i in range(len(c)):
        for j in range(i + 1, len(c)):
            h *= hilbert_symbol(c[i], c[j], place)
    return h


def square_class_is_square(n: int, place: Place) -> bool:
    if n == 0:
        raise DomainError("zero has no square class")
    if isinstance(place, RealPlace):
        return n > 0
    v, u = p_adic_valuation(n, place.p)
    if v & 1:
        return False
    if place.p == 2:
        return u % 8 == 1
    return legendre_symbol(u, place.p) == 1


def _discriminant_is_square(form: DiagonalForm, place: Place) -> bool:
    # The product of the coefficients is never formed.
    if isinstance(place, RealPlace):
        return sum(a < 0 for a in form) % 2 == 0
    p = place.p
    total_v = 0
    unit = 1
    for a in form:
        v, u = p_adic_valuation(a, p)
        total_v += v
        unit = unit * u % (8 if p == 2 else p)
    if total_v & 1:
        return False
    if p == 2:
        return unit % 8 == 1
    return legendre_symbol(unit, p) == 1


def is_isotropic(form: DiagonalForm, place: Place) -> bool:
    if isinstance(place, RealPlace):
        signs = {a > 0 for a in form}
        return len(signs) == 2
    if form.rank == 3:
        a0, a1, a2 = form.coefficients
        return hilbert_symbol(-a0 * a2, -a1 * a2, place) == 1
    if not _discriminant_is_square(form, place):
        return True
    return hasse_invariant(form, place) != -hilbert_symbol(-1, -1, place)


def relevant_places(form: DiagonalForm) -> list[Place]:
    """Real place, 2, and the odd primes dividing a coefficient."""
    table = shared_table(max(abs(a) for a in form))
    primes = {2}
    for a in form:
        m = abs(a)
        while m > 1:
            p = int(table.spf[m])
            primes.add(p)
            while m % p == 0:
                m //= p
    return [REAL] + [FinitePlace(p) for p in sorted(primes)]


@dataclass
class SolubilityReport:
    form: DiagonalForm
    real_soluble: bool
    prime_verdicts: dict[int, bool] = field(default_factory=dict)

    @property
    def everywhere_soluble(self) -> bool:
        return self.real_soluble and all(self.prime_verdicts.values())

    def failing_places(self) -> list[str]:
        out = [] if self.real_soluble else ["real"]
        return out + [str(p) for p, ok in self.prime_verdicts.items() if not ok]

    def to_dict(self) -> dict:
        return {
            "form": list(self.form.coefficients),
            "real_soluble": self.real_soluble,
            "prime_verdicts": {str(p): ok for p, ok in self.prime_verdicts.items()},
            "everywhere_soluble": self.everywhere_soluble,
        }


def is_locally_soluble_everywhere(form: DiagonalForm, isotropy=None) -> SolubilityReport:
    """Evaluate isotropy at every relevant place.

    ``isotropy(form, place)`` may replace :func:`is_isotropic`; verification
    runs pass an oracle-backed decision here.
    """
    isotropy = isotropy or is_isotropic
    places = relevant_places(form)
    report = SolubilityReport(form, isotropy(form, REAL))
    for place in places[1:]:
        report.prime_verdicts[place.p] = isotropy(form, place)
    return report


class OracleVerdict(enum.Enum):
    ISOTROPIC = "isotropic"
    ANISOTROPIC = "anisotropic"
    UNKNOWN = "unknown"


def default_oracle_depth(form: DiagonalForm, p: int) -> int:
    vmax = max(p_adic_valuation(a, p)[0] for a in form)
    return 2 * vmax + (5 if p == 2 else 3)


def _val(n: int, p: int, cap: int) -> int:
    if n == 0:
        return cap
    v = 0
    while n % p == 0 and v < cap:
        n //= p
        v += 1
    return v


def _level_one_zeros(a, p):
    """Primitive zeros mod p whose first nonzero coordinate is 1, generated lazily.

    One free coordinate with a unit coefficient is solved from a square-root
    table instead of being scanned.
    """
    r = len(a)
    roots = [[] for _ in range(p)]
    for x in range(p):
        roots[x * x % p].append(x)
    for j in range(r):
        free = list(range(j + 1, r))
        solve = next((i for i in reversed(free) if a[i] % p), None)
        scan = [i for i in free if i != solve]
        for vals in itertools.product(range(p), repeat=len(scan)):
            x = [0] * r
            x[j] = 1
            for i, v in zip(scan, vals):
                x[i] = v
            rest = sum(a[i] * x[i] * x[i] for i in range(r))
            if solve is None:
                if rest % p == 0:
                    yield tuple(x)
                continue
            target = -rest * pow(a[solve], -1, p) % p
            for root in roots[target]:
                x[solve] = root
                yield tuple(x)


def oracle_isotropic_mod_pk(form: DiagonalForm, p: int, depth: int | None = None,
                            max_nodes: int = 5_000_000) -> OracleVerdict:
    """Search primitive zeros of the form modulo ``p**depth``.

    The search walks the tree of primitive zeros mod p, p^2, ... (a zero mod
    p^(k+1) reduces to a zero mod p^k), normalising the first unit coordinate
    to 1.  A node ``x`` is a Hensel certificate when
    ``v_p(Q(x)) > 2 * min_i v_p(2 a_i x_i)``.  Children are visited depth
    first and the walk stops at the first certificate.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if depth is None:
        depth = default_oracle_depth(form, p)
    if depth < 1:
        raise DomainError("depth must be positive")
    if p**depth > ORACLE_BUDGET:
        raise ResourceError(f"{p}^{depth} exceeds oracle budget {ORACLE_BUDGET}")

    a = form.coefficients
    r = len(a)
    cap = 4 * depth + 8
    two_a = [2 * c for c in a]
    nodes = 0
    saw_frontier = False

    def certificate(x) -> bool:
        m = min(_val(two_a[i] * x[i], p, cap) for i in range(r) if x[i])
        return _val(form.evaluate(x), p, cap) > 2 * m

    def visit(x, k, j) -> bool:
        nonlocal nodes, saw_frontier
        nodes += 1
        if nodes > max_nodes:
            raise ResourceError(f"oracle exceeded {max_nodes} nodes at p={p} for {form}")
        if certificate(x):
            return True
        if k >= depth:
            saw_frontier = True
            return False
        pk = p**k
        # Not a certificate, so p | 2 a_i x_i for every i and each child
        # x + p^k d satisfies Q(child) = Q(x) mod p^(k+1): all lifts or none.
        if form.evaluate(x) % (pk * p):
            return False
        free = [i for i in range(r) if i != j]
        for delta in itertools.product(range(p), repeat=r - 1):
            y = list(x)
            for i, d in zip(free, delta):
                y[i] += pk * d
            if visit(tuple(y), k + 1, j):
                return True
        return False

    for x in _level_one_zeros(a, p):
        j = next(i for i in range(r) if x[i])
        if visit(x, 1, j):
            return OracleVerdict.ISOTROPIC
    return OracleVerdict.UNKNOWN if saw_frontier else OracleVerdict.ANISOTROPIC


def oracle_isotropy(form: DiagonalForm, place: Place) -> bool:
    """Drop-in replacement for :func:`is_isotropic` backed by the search oracle."""
    if isinstance(place, RealPlace):
        return len({a > 0 for a in form}) == 2
    verdict = oracle_isotropic_mod_pk(form, place.p)
    if verdict is OracleVerdict.UNKNOWN:
        raise ResourceError(f"oracle inconclusive for {form} at {place.p}")
    return verdict is OracleVerdict.ISOTROPIC
