"""Counting everywhere-locally-soluble fibers over points of bounded height."""

from __future__ import annotations

import json
import logging
import math
import os
import time
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from . import kernel
from .arithmetic import shared_table
from .errors import DomainError, PartialResultError
from .solubility import is_locally_soluble_everywhere, oracle_isotropy
from .surface import (MAX_HEIGHT, anti_diagonal_member, enumerate_degenerate,
                      iter_params, param_to_point, raw_fiber_form, reduced_fiber_form,
                      thin_set_member)

log = logging.getLogger(__name__)

SOLVERS = ("kernel", "symbol", "raw", "oracle")


@dataclass
class CountLedger:
    B: int
    n_total: int = 0
    n_loc: int = 0
    n_degenerate: int = 0
    n_nondeg_soluble: int = 0
    n_thin_removed_soluble: int = 0
    n_antidiagonal_soluble: int = 0

    def __add__(self, other: "CountLedger") -> "CountLedger":
        if other.B != self.B:
            raise DomainError("cannot merge ledgers for different height bounds")
        return CountLedger(self.B, *(getattr(self, f.name) + getattr(other, f.name)
                                     for f in fields(self)[1:]))

    def check(self):
        assert self.n_loc == self.n_degenerate + self.n_nondeg_soluble
        assert 0 <= self.n_thin_removed_soluble <= self.n_nondeg_soluble <= self.n_loc <= self.n_total
        assert min(asdict(self).values()) >= 0

    def as_row(self) -> dict:
        return asdict(self)


@dataclass
class RunConfig:
    B: int
    workers: int = 1
    thin_removed: bool = True
    degenerate: bool = True
    solver: str = "kernel"
    checkpoint: str | os.PathLike | None = None
    max_seconds: float | None = None

    def __post_init__(self):
        if not 1 <= self.B <= MAX_HEIGHT:
            raise DomainError(f"height bound must lie in [1, 2^62], got {self.B}")
        if self.workers < 1:
            raise DomainError("need at least one worker")
        if self.solver not in SOLVERS:
            raise DomainError(f"unknown solver {self.solver!r}; choose from {SOLVERS}")


def t0_strata(s: int, target: int = 64) -> list[tuple[int, int]]:
    """Split t0 in [1, s] into intervals of roughly equal work.

    Work in stratum t0 scales like 1/t0, so boundaries follow the harmonic sum.
    """
    if s < 1:
        return []
    target = min(target, s)
    weights = [1.0 / t for t in range(1, s + 1)]
    share = sum(weights) / target
    strata, lo, acc = [], 1, 0.0
    for t0, w in enumerate(weights, start=1):
        acc += w
        if acc >= share or t0 == s:
            strata.append((lo, t0))
            lo, acc = t0 + 1, 0.0
    return strata


def _count_stratum_reference(B: int, lo: int, hi: int, solver: str,
                             thin_removed: bool) -> CountLedger:
    ledger = CountLedger(B)
    table = shared_table(max(math.isqrt(B), 2))
    isotropy = oracle_isotropy if solver == "oracle" else None
    for t in iter_params(B, (lo, hi)):
        ledger.n_total += 1
        form = raw_fiber_form(t) if solver == "raw" else reduced_fiber_form(t, table)
        if not is_locally_soluble_everywhere(form, isotropy).everywhere_soluble:
            continue
        point = param_to_point(t)
        ledger.n_nondeg_soluble += 1
        if not thin_removed or not thin_set_member(point):
            ledger.n_thin_removed_soluble += 1
        if anti_diagonal_member(point):
            ledger.n_antidiagonal_soluble += 1
    ledger.n_loc = ledger.n_nondeg_soluble
    return ledger


def _count_stratum_kernel(B: int, lo: int, hi: int, tables: kernel.CoreTables,
                          thin_removed: bool) -> CountLedger:
    c = kernel.count_stratum(tables.s, lo, hi, tables.core, tables.off, tables.pr)
    sol = int(c[kernel.N_SOLUBLE])
    return CountLedger(
        B,
        n_total=int(c[kernel.N_NONDEG]),
        n_loc=sol,
        n_nondeg_soluble=sol,
        n_thin_removed_soluble=int(c[kernel.N_THIN_REMOVED_SOLUBLE]) if thin_removed else sol,
        n_antidiagonal_soluble=int(c[kernel.N_ANTIDIAG_SOLUBLE]),
    )


def _count_degenerate(B: int, solver: str) -> CountLedger:
    # Degenerate fibers contain an obvious rational point: all are soluble.
    ledger = CountLedger(B)
    if solver == "kernel":
        s = math.isqrt(B)
        n = 4 * kernel.count_mixed_pairs(s) + 4
        anti = 2  # (1,0,-1,0) and (0,1,0,-1)
    else:
        n = anti = 0
        for point in enumerate_degenerate(B):
            n += 1
            anti += anti_diagonal_member(point)
    ledger.n_total = ledger.n_loc = ledger.n_degenerate = n
    ledger.n_antidiagonal_soluble = anti
    return ledger


def _config_key(config: RunConfig) -> dict:
    return {"B": config.B, "solver": config.solver, "thin_removed": config.thin_removed,
            "degenerate": config.degenerate}


def _load_checkpoint(path: Path, config: RunConfig, strata) -> tuple[set, bool, CountLedger]:
    if path is None or not path.exists():
        return set(), False, CountLedger(config.B)
    state = json.loads(path.read_text())
    if state.get("config") != _config_key(config) or state.get("strata") != [list(s) for s in strata]:
        log.warning("checkpoint %s belongs to a different run; starting over", path)
        return set(), False, CountLedger(config.B)
    return set(state["done"]), state["degenerate_done"], CountLedger(**state["ledger"])


def _write_checkpoint(path: Path, config: RunConfig, strata, done, degenerate_done, ledger):
    state = {
        "config": _config_key(config),
        "strata": [list(s) for s in strata],
        "done": sorted(done),
        "degenerate_done": degenerate_done,
        "ledger": asdict(ledger),
    }
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(state, indent=1))
    os.replace(tmp, path)


def count_nloc(config: RunConfig | int) -> CountLedger:
    """Count points of height <= B whose fiber is everywhere locally soluble.

    Nondegenerate strata are independent; their ledgers are summed, so the
    result does not depend on ``workers`` or completion order.
    """
    if not isinstance(config, RunConfig):
        config = RunConfig(int(config))
    B = config.B
    s = math.isqrt(B)
    strata = t0_strata(s)
    ckpt = Path(config.checkpoint) if config.checkpoint else None
    done, degenerate_done, ledger = _load_checkpoint(ckpt, config, strata)
    if not config.degenerate:
        degenerate_done = True

    if config.solver == "kernel":
        tables = kernel.CoreTables(s)
        job = lambda lo, hi: _count_stratum_kernel(B, lo, hi, tables, config.thin_removed)
    else:
        job = lambda lo, hi: _count_stratum_reference(B, lo, hi, config.solver,
                                                      config.thin_removed)

    start = time.monotonic()
    if not degenerate_done:
        ledger = ledger + _count_degenerate(B, config.solver)
        degenerate_done = True
        if ckpt:
            _write_checkpoint(ckpt, config, strata, done, degenerate_done, ledger)

    todo = [i for i in range(len(strata)) if i not in done]
    stopped = False
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        pending = {}
        queue = list(todo)
        while queue or pending:
            while queue and len(pending) < config.workers and not stopped:
                i = queue.pop(0)
                pending[pool.submit(job, *strata[i])] = i
            if not pending:
                break
            finished, _ = wait(pending, return_when=FIRST_COMPLETED)
            for fut in finished:
                i = pending.pop(fut)
                ledger = ledger + fut.result()
                done.add(i)
                log.debug("B=%d stratum %s done", B, strata[i])
            if ckpt:
                _write_checkpoint(ckpt, config, strata, done, degenerate_done, ledger)
            if (config.max_seconds is not None and queue
                    and time.monotonic() - start > config.max_seconds):
                stopped = True
                queue.clear()

    if stopped:
        raise PartialResultError(
            f"time budget of {config.max_seconds}s exhausted after {len(done)}/{len(strata)} strata",
            checkpoint=str(ckpt) if ckpt else None, ledger=ledger)
    ledger.check()
    return ledger
