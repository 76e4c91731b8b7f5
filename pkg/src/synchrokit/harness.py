"""Population sweeps with deterministic, mergeable verification reports.

Exhaustive mode enumerates every k-tuple of transition tables in
lexicographic order (within a work budget); random mode draws seeded
uniform tables.  Work is split into fixed-size blocks verified
independently -- possibly by a process pool -- and merged into one report
per theorem.  Reports are byte-identical for identical scope and seed,
regardless of the number of jobs: counts are summed and counterexamples
are sorted by their serialized form.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from functools import partial

from .automaton import MAX_STATES, Dfa
from .checks import CHECKS, THEOREM_IDS, Auto, check_corank3, check_pin, subset_images_for_table
from .errors import BudgetExceeded

__all__ = [
    "THEOREM_IDS",
    "EnumerationScope",
    "VerificationReport",
    "enumerate_dfas",
    "random_dfa",
    "canonical_form",
    "is_canonical",
    "run_check",
    "run_checks",
]

_BLOCK = 16384
_DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class EnumerationScope:
    """What population to sweep: exhaustive n^(n*k) or seeded random draws."""

    n: int
    k: int
    mode: str = "exhaustive"
    sample_count: int | None = None
    rng_seed: int | None = None
    canonical_filter: bool = False
    max_word_len: int = 6
    include_c4: bool = False
    work_budget: int = _DEFAULT_BUDGET

    def __post_init__(self):
        if not 1 <= self.n <= MAX_STATES:
            raise ValueError(f"state count {self.n} out of range 1..{MAX_STATES}")
        if self.k < 1:
            raise ValueError("letter count must be at least 1")
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "random":
            if self.sample_count is None or self.sample_count < 1:
                raise ValueError("random mode needs sample_count >= 1")
            if self.rng_seed is None:
                raise ValueError("random mode needs an explicit rng_seed")
        if self.max_word_len < 0:
            raise ValueError("max_word_len must be non-negative")

    @property
    def total(self):
        if self.mode == "random":
            return self.sample_count
        return self.n ** (self.n * self.k)

    def to_json(self):
        out = {"n": self.n, "k": self.k, "mode": self.mode}
        if self.mode == "random":
            out["samples"] = self.sample_count
            out["seed"] = self.rng_seed
        if self.canonical_filter:
            out["canonical"] = True
        if self.max_word_len != 6:
            out["max_word_len"] = self.max_word_len
        if self.include_c4:
            out["include_c4"] = True
        return out


@dataclass
class VerificationReport:
    """Aggregate outcome of one theorem check over one scope."""

    theorem_id: str
    scope: EnumerationScope
    checked_count: int = 0
    applicable_count: int = 0
    counterexamples: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def violation_count(self):
        return len(self.counterexamples)

    def to_json(self, include_timing=False):
        out = {
            "theorem": self.theorem_id,
            "scope": self.scope.to_json(),
            "checked": self.checked_count,
            "applicable": self.applicable_count,
            "violations": self.violation_count,
            "counterexamples": self.counterexamples,
            "stats": {k: self.stats[k] for k in sorted(self.stats)},
        }
        if include_timing:
            out["wall_time_s"] = round(self.wall_time, 3)
        return out

    def render(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def random_dfa(n, k, rng):
    """Uniform automaton: every image independently uniform on the states."""
    if not 1 <= n <= MAX_STATES:
        raise ValueError(f"state count {n} out of range 1..{MAX_STATES}")
    tables = [
        tuple(rng.randrange(1, n + 1) for _ in range(n)) for _ in range(k)
    ]
    return Dfa.from_tables(tables)


def canonical_form(tables, n):
    """Lexicographically least tuple of tables under simultaneous state
    permutation and letter reordering (0-based tables)."""
    best = None
    for perm in itertools.permutations(range(n)):
        relabeled = tuple(
            tuple(perm[table[q]] for q in _inverse_order(perm, n))
            for table in tables
        )
        candidate = tuple(sorted(relabeled))
        if best is None or candidate < best:
            best = candidate
    return best


def _inverse_order(perm, n):
    inv = [0] * n
    for q, label in enumerate(perm):
        inv[label] = q
    return inv


def is_canonical(tables, n):
    return tuple(tables) == canonical_form(tables, n)


def _function_table(fid, n):
    digits = []
    for _ in range(n):
        fid, d = divmod(fid, n)
        digits.append(d)
    digits.reverse()
    return tuple(digits)


def _tables_from_index(index, n, k):
    base = n ** n
    fids = []
    for _ in range(k):
        index, fid = divmod(index, base)
        fids.append(fid)
    fids.reverse()
    return fids


def enumerate_dfas(scope):
    """Stream the scope's population as Dfa values (budget enforced)."""
    _check_budget(scope)
    if scope.mode == "random":
        for start in range(0, scope.sample_count, _BLOCK):
            block = range(start, min(start + _BLOCK, scope.sample_count))
            rng = _block_rng(scope.rng_seed, start)
            for _ in block:
                yield random_dfa(scope.n, scope.k, rng)
        return
    n, k = scope.n, scope.k
    for index in range(scope.total):
        fids = _tables_from_index(index, n, k)
        tables = tuple(_function_table(fid, n) for fid in fids)
        if scope.canonical_filter and not is_canonical(tables, n):
            continue
        yield Dfa.from_tables([tuple(x + 1 for x in t) for t in tables])


def _check_budget(scope):
    if scope.mode == "exhaustive" and scope.total > scope.work_budget:
        raise BudgetExceeded(
            f"exhaustive scope would enumerate {scope.total} automata, "
            f"budget is {scope.work_budget}",
            count=scope.total,
        )


def _block_rng(seed, block_start):
    return random.Random(seed * 1_000_003 + block_start)


# Per-process cache of subset-image tables keyed by function id.
_SI_CACHE = {}


def _si_tables(n):
    if n not in _SI_CACHE:
        if n ** n <= 3200:  # n <= 5: precompute per-function image tables
            _SI_CACHE[n] = [
                subset_images_for_table(n, _function_table(fid, n))
                for fid in range(n ** n)
            ]
        else:
            _SI_CACHE[n] = None
    return _SI_CACHE[n]


def _iter_block(scope, block_start, block_end):
    """Yield (tables, imgs) pairs for one block of the population."""
    n, k = scope.n, scope.k
    if scope.mode == "random":
        rng = _block_rng(scope.rng_seed, block_start)
        for _ in range(block_start, block_end):
            tables = tuple(
                tuple(rng.randrange(n) for _ in range(n)) for _ in range(k)
            )
            yield tables, None
        return
    si = _si_tables(n)
    funcs = [_function_table(fid, n) for fid in range(n ** n)] if n ** n <= 3200 else None
    for index in range(block_start, block_end):
        fids = _tables_from_index(index, n, k)
        if funcs is not None:
            tables = tuple(funcs[fid] for fid in fids)
        else:
            tables = tuple(_function_table(fid, n) for fid in fids)
        if scope.canonical_filter and not is_canonical(tables, n):
            continue
        imgs = [si[fid] for fid in fids] if si is not None else None
        yield tables, imgs


def _run_block(args):
    scope, theorem_ids, block_start, block_end = args
    checks = {}
    for tid in theorem_ids:
        if tid == "pin":
            checks[tid] = partial(check_pin, max_word_len=scope.max_word_len)
        elif tid == "corank3" and scope.include_c4:
            checks[tid] = partial(check_corank3, include_c4=True)
        else:
            checks[tid] = CHECKS[tid]
    counts = {tid: [0, 0] for tid in theorem_ids}  # checked, applicable
    violations = {tid: [] for tid in theorem_ids}
    stats = {tid: {} for tid in theorem_ids}
    for tables, imgs in _iter_block(scope, block_start, block_end):
        auto = Auto(scope.n, tables, imgs)
        for tid in theorem_ids:
            applicable, detail = checks[tid](auto, stats[tid])
            counts[tid][0] += 1
            if applicable:
                counts[tid][1] += 1
            if detail is not None:
                violations[tid].append(
                    {"dfa": auto.serialized(), "detail": detail}
                )
    return counts, violations, stats


def _merge_stats(into, part):
    for key, value in part.items():
        if key.startswith("max_"):
            into[key] = max(into.get(key, 0), value)
        else:
            into[key] = into.get(key, 0) + value


def run_checks(theorem_ids, scope, jobs=1):
    """Run several theorem checks in one pass over the scope's population.

    Returns a dict theorem_id -> VerificationReport.  Identical scope and
    seed give byte-identical reports for any job count.
    """
    for tid in theorem_ids:
        if tid not in CHECKS:
            raise ValueError(f"unknown theorem id {tid!r} (known: {', '.join(THEOREM_IDS)})")
    _check_budget(scope)
    start_time = time.monotonic()
    total = scope.total
    blocks = [
        (scope, tuple(theorem_ids), start, min(start + _BLOCK, total))
        for start in range(0, total, _BLOCK)
    ]
    reports = {tid: VerificationReport(theorem_id=tid, scope=scope) for tid in theorem_ids}
    if jobs > 1 and len(blocks) > 1:
        import multiprocessing

        with multiprocessing.get_context("fork").Pool(jobs) as pool:
            partials = pool.imap_unordered(_run_block, blocks)
            for counts, violations, stats in partials:
                _fold(reports, counts, violations, stats)
    else:
        for block in blocks:
            counts, violations, stats = _run_block(block)
            _fold(reports, counts, violations, stats)
    elapsed = time.monotonic() - start_time
    for tid in theorem_ids:
        report = reports[tid]
        report.counterexamples.sort(
            key=lambda ce: (ce["dfa"], json.dumps(ce["detail"], sort_keys=True))
        )
        report.wall_time = elapsed
    return reports


def _fold(reports, counts, violations, stats):
    for tid, (checked, applicable) in counts.items():
        reports[tid].checked_count += checked
        reports[tid].applicable_count += applicable
        reports[tid].counterexamples.extend(violations[tid])
        _merge_stats(reports[tid].stats, stats[tid])


def run_check(theorem_id, scope, jobs=1):
    """Run one theorem check over a scope; see run_checks."""
    return run_checks((theorem_id,), scope, jobs=jobs)[theorem_id]
