"""Verification suites, ratio tables and ledger export."""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .arithmetic import is_prime, is_squarefree, shared_table
from .counting import CountLedger, RunConfig, count_nloc
from .errors import DomainError, ResourceError
from .sieve import omega_membership
from .solubility import (REAL, DiagonalForm, FinitePlace, OracleVerdict, hilbert_symbol,
                         is_isotropic, is_locally_soluble_everywhere, oracle_isotropic_mod_pk)

LEDGER_FIELDS = ["B", "n_total", "n_loc", "n_degenerate", "n_nondeg_soluble",
                 "n_thin_removed_soluble", "n_antidiagonal_soluble"]
RATIO_FIELDS = ["B", "n_loc_over_B", "n_degenerate_over_B", "n_nondeg_soluble_over_B",
                "thin_removed_logB_over_B"]
NSTAR_BUDGET = 10**6


def _shell(U: float) -> list[int]:
    lo = math.floor(U / 2) + 1
    hi = math.floor(U)
    return [s * k for k in range(lo, hi + 1) for s in (1, -1)]


def n_star_empirical(U: Sequence[float]) -> int:
    """Square-free u with U_i/2 < |u_i| <= U_i whose fiber form is everywhere soluble."""
    if len(U) != 4:
        raise DomainError("need four shell sizes")
    shells = [_shell(u) for u in U]
    if math.prod(len(s) for s in shells) > NSTAR_BUDGET:
        raise ResourceError("shell product exceeds the N* budget")
    table = shared_table(max(2, max(int(u) for u in U)))
    shells = [[u for u in s if is_squarefree(u, table)] for s in shells]
    n = 0
    for u0, u1, u2, u3 in itertools.product(*shells):
        form = DiagonalForm((u0 * u2, u1 * u3, u0 * u3, u1 * u2))
        n += is_locally_soluble_everywhere(form).everywhere_soluble
    return n


@dataclass
class OmegaReport:
    p: int
    bound: int
    checked: int = 0
    in_omega: int = 0
    violations: list = field(default_factory=list)

    def to_dict(self):
        return {"p": self.p, "bound": self.bound, "checked": self.checked,
                "in_omega": self.in_omega, "violations": len(self.violations),
                "examples": [list(v) for v in self.violations[:10]]}


def verify_omega_vs_solubility(p: int, bound: int) -> OmegaReport:
    """Every square-free u with u mod p in Omega_p must give a fiber with no Q_p-point."""
    if p == 2 or not is_prime(p) or p > 13:
        raise DomainError("p must be an odd prime <= 13")
    if not 1 <= bound <= 20:
        raise DomainError("bound must lie in [1, 20]")
    values = [s * k for k in range(1, bound + 1) for s in (1, -1) if is_squarefree(k)]
    report = OmegaReport(p, bound)
    place = FinitePlace(p)
    for u in itertools.product(values, repeat=4):
        report.checked += 1
        if omega_membership([c % p for c in u], p) is None:
            continue
        report.in_omega += 1
        u0, u1, u2, u3 = u
        if is_isotropic(DiagonalForm((u0 * u2, u1 * u3, u0 * u3, u1 * u2)), place):
            report.violations.append(u)
    return report


REGRESSION_FORMS = [(1, 1, 1, -7), (1, 1, -1, -1), (1, 1, 1, 1), (3, 1, 3, 1)]


@dataclass
class OracleReport:
    samples: int
    coeff_bound: int
    primes: list
    comparisons: int = 0
    disagreements: list = field(default_factory=list)
    unknowns: list = field(default_factory=list)

    def to_dict(self):
        return {"samples": self.samples, "coeff_bound": self.coeff_bound,
                "primes": self.primes, "comparisons": self.comparisons,
                "disagreements": len(self.disagreements), "unknowns": len(self.unknowns),
                "examples": [[list(f), p] for f, p in (self.disagreements + self.unknowns)[:10]]}


def verify_symbol_vs_oracle(samples: int, coeff_bound: int, primes: Sequence[int],
                            seed: int = 0) -> OracleReport:
    """Compare the symbol criterion with the residue-class search on random forms."""
    for p in primes:
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
    rng = random.Random(seed)
    choices = [c for c in range(-coeff_bound, coeff_bound + 1) if c]
    forms = [tuple(f) for f in REGRESSION_FORMS]
    forms += [tuple(rng.choice(choices) for _ in range(4)) for _ in range(samples)]
    report = OracleReport(samples, coeff_bound, list(primes))
    for coeffs in forms:
        form = DiagonalForm(coeffs)
        for p in primes:
            verdict = oracle_isotropic_mod_pk(form, p)
            report.comparisons += 1
            if verdict is OracleVerdict.UNKNOWN:
                report.unknowns.append((coeffs, p))
            elif (verdict is OracleVerdict.ISOTROPIC) != is_isotropic(form, FinitePlace(p)):
                report.disagreements.append((coeffs, p))
    return report


def verify_product_formula(samples: int = 10_000, bound: int = 10**6,
                           seed: int = 1) -> list[tuple[int, int]]:
    """Pairs (a, b) whose Hilbert symbols over all places fail to multiply to +1."""
    rng = random.Random(seed)
    table = shared_table(bound)
    failures = []
    for _ in range(samples):
        a = rng.choice((1, -1)) * rng.randint(1, bound)
        b = rng.choice((1, -1)) * rng.randint(1, bound)
        primes = {2}
        for n in (a, b):
            m = abs(n)
            while m > 1:
                p = int(table.spf[m])
                primes.add(p)
                m //= p
        prod = hilbert_symbol(a, b, REAL)
        for p in primes:
            prod *= hilbert_symbol(a, b, FinitePlace(p))
        if prod != 1:
            failures.append((a, b))
    return failures


def ratio_row(ledger: CountLedger) -> dict:
    B = ledger.B
    return {
        "B": B,
        "n_loc_over_B": ledger.n_loc / B,
        "n_degenerate_over_B": ledger.n_degenerate / B,
        "n_nondeg_soluble_over_B": ledger.n_nondeg_soluble / B,
        "thin_removed_logB_over_B": ledger.n_thin_removed_soluble * math.log(B) / B,
    }


def ratio_report(Bs: Sequence[int], workers: int = 1) -> tuple[list[dict], list[CountLedger]]:
    if any(b >= c for b, c in zip(Bs, Bs[1:])):
        raise DomainError("height bounds must be increasing")
    ledgers = [count_nloc(RunConfig(B, workers=workers)) for B in Bs]
    return [ratio_row(l) for l in ledgers], ledgers


def _write_csv(rows: Iterable[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def export(ledgers: Sequence[CountLedger], path, fmt: str = "csv") -> Path:
    rows = sorted((l.as_row() for l in ledgers), key=lambda r: r["B"])
    if fmt == "csv":
        text = _write_csv(rows, LEDGER_FIELDS)
    elif fmt == "json":
        text = json.dumps([{k: r[k] for k in LEDGER_FIELDS} for r in rows], indent=2) + "\n"
    else:
        raise DomainError(f"unknown format {fmt!r}")
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path


def export_ratios(rows: Sequence[dict], path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(_write_csv(sorted(rows, key=lambda r: r["B"]), RATIO_FIELDS))
    return path
