"""Revenue, the exhaustive oracle and the separator recursion.

Values are exact scaled integers; ``NEG_INF`` stands for an infeasible
budget.  The oracle works on the graph exactly as given (no triangulation,
no perturbation), so it is an independent check of the recursive solver,
which runs on the prepared form of each connected component.
"""
from __future__ import annotations

import heapq
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from threading import Lock
from typing import Callable

from .errors import NotNormal, UnknownObjectId
from .instance import Instance, Prepared, bits, mask_of, prepare, split_components
from .separators import (banned_mask, covered_mask, interaction_components,
                         separator_sequences)

NEG_INF = float("-inf")
THREADS_ENV = "NETCOVER_THREADS"


@dataclass(frozen=True)
class Revenue:
    value: int | float
    witness: tuple | None

    @property
    def feasible(self) -> bool:
        return self.value != NEG_INF


def _lex(mask: int) -> tuple:
    return tuple(bits(mask))


def _better(a, b) -> bool:
    """Whether candidate ``a = (value, mask)`` beats ``b``: larger value,
    then lexicographically smaller object set."""
    if b is None:
        return True
    if a[0] != b[0]:
        return a[0] > b[0]
    if a[0] == NEG_INF:
        return False
    return _lex(a[1]) < _lex(b[1])


# ----------------------------------------------------------------------
# oracle on the unmodified instance


def exact_distances(inst: Instance) -> list[list[int | None]]:
    """``dist[p][v]``: distance from ``v`` to ``loc(p)``, ``None`` if
    unreachable."""
    g = inst.graph
    out = []
    for f in inst.facilities:
        dist: list = [None] * g.n
        heap = [(0, v) for v in f.loc]
        for v in f.loc:
            dist[v] = 0
        heapq.heapify(heap)
        while heap:
            dv, v = heapq.heappop(heap)
            if dv != dist[v]:
                continue
            for w in g.neighbors(v):
                nd = dv + g.weight(v, w)
                if dist[w] is None or nd < dist[w]:
                    dist[w] = nd
                    heapq.heappush(heap, (nd, w))
        out.append(dist)
    return out


class Oracle:
    """Direct evaluation of normality, coverage and revenue."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self.dist = exact_distances(inst)
        facs, clis = inst.facilities, inst.clients
        d = len(facs)
        self.pair_ok = [[True] * d for _ in range(d)]
        for p, q in combinations(range(d), 2):
            gaps = [self.dist[p][v] for v in facs[q].loc if self.dist[p][v] is not None]
            ok = not gaps or (min(gaps) > facs[p].rad - facs[q].rad
                              and min(gaps) > facs[q].rad - facs[p].rad)
            self.pair_ok[p][q] = self.pair_ok[q][p] = ok
        self.cover = [{j for j, c in enumerate(clis)
                       if self.dist[p][c.pla] is not None
                       and self.dist[p][c.pla] <= c.sen + facs[p].rad}
                      for p in range(d)]

    def normal(self, family) -> bool:
        return all(self.pair_ok[p][q] for p, q in combinations(family, 2))

    def revenue(self, family) -> int:
        covered = set()
        for p in family:
            covered |= self.cover[p]
        return (sum(self.inst.clients[j].pri for j in covered)
                - sum(self.inst.facilities[p].cost for p in family))


def revenue(inst: Instance, family) -> Revenue:
    fam = tuple(sorted(set(family)))
    if any(not 0 <= p < len(inst.facilities) for p in fam):
        raise UnknownObjectId(f"unknown object in {fam}")
    orc = Oracle(inst)
    if not orc.normal(fam):
        raise NotNormal(f"{fam} is not normal")
    return Revenue(orc.revenue(fam), fam)


def solve_bruteforce(inst: Instance) -> Revenue:
    """Best normal family of size exactly ``k`` (at most ``k`` when the
    instance asks for it); ties go to the lexicographically smallest."""
    orc = Oracle(inst)
    d = len(inst.facilities)
    sizes = range(inst.k + 1) if inst.at_most else (inst.k,)
    best = None
    for size in sizes:
        if size > d:
            continue
        for fam in combinations(range(d), size):
            if not orc.normal(fam):
                continue
            val = orc.revenue(fam)
            if best is None or val > best[0] or (val == best[0] and fam < best[1]):
                best = (val, fam)
    return Revenue(NEG_INF, None) if best is None else Revenue(best[0], best[1])


# ----------------------------------------------------------------------
# knapsack over independent pieces


def knapsack_combine(tables, budget: int):
    """Best total over pieces, piece ``i`` taking ``l`` units for value
    ``tables[i][l]`` (missing entries are infeasible), units summing to
    ``budget``."""
    row = {0: 0}
    for table in tables:
        nxt: dict = {}
        for used, acc in row.items():
            for units, val in table.items():
                tot = used + units
                if tot > budget or val == NEG_INF:
                    continue
                if acc + val > nxt.get(tot, NEG_INF):
                    nxt[tot] = acc + val
        row = nxt
    return row.get(budget, NEG_INF)


def _knapsack_witness(tables, budget: int):
    """As :func:`knapsack_combine`, with tables of ``(value, mask)`` and the
    deterministic tie rule of :func:`_better`."""
    row = {0: (0, 0)}
    for table in tables:
        nxt: dict = {}
        for used, (acc, wm) in row.items():
            for units, (val, m) in table.items():
                tot = used + units
                if tot > budget or val == NEG_INF:
                    continue
                cand = (acc + val, wm | m)
                if _better(cand, nxt.get(tot)):
                    nxt[tot] = cand
        row = nxt
    return row.get(budget, (NEG_INF, 0))


# ----------------------------------------------------------------------
# recursion


@dataclass
class Options:
    memo: bool = True
    threads: int = 1
    max_seps: int | None = None
    timeout: float | None = None
    prune: bool = True
    # extra guarded separators per level: (prep, objects, clients, k) -> iterable
    inject: Callable | None = None


@dataclass
class Stats:
    separators: int = 0
    cache_hits: int = 0
    calls: int = 0
    depth: int = 0
    truncated: bool = False


@dataclass
class _Run:
    prep: Prepared
    opts: Options
    stats: Stats
    deadline: float | None
    memo: dict = field(default_factory=dict)
    lock: Lock = field(default_factory=Lock)

    def value(self, objmask: int, climask: int, k: int, depth: int = 0, pool=None):
        key = (objmask, climask, k)
        if self.opts.memo:
            hit = self.memo.get(key)
            if hit is not None:
                with self.lock:
                    self.stats.cache_hits += 1
                return hit
        with self.lock:
            self.stats.calls += 1
            self.stats.depth = max(self.stats.depth, depth)
        res = self._compute(objmask, climask, k, depth, pool)
        if self.opts.memo:
            res = self.memo.setdefault(key, res)
        return res

    def _compute(self, objmask, climask, k, depth, pool):
        if k == 0:
            return (0, 0)
        if bin(objmask).count("1") < k:
            return (NEG_INF, 0)
        if k <= 3:
            return self._small(objmask, climask, k)
        cands = self._separators(objmask, climask, k)
        if pool is not None:
            results = pool.map(lambda x: self._evaluate(x, objmask, climask, k, depth), cands)
        else:
            results = (self._evaluate(x, objmask, climask, k, depth) for x in cands)
        best = (NEG_INF, 0)
        for r in results:
            if _better(r, best):
                best = r
        return best

    def _small(self, objmask, climask, k):
        prep = self.prep
        best = (NEG_INF, 0)
        for fam in combinations(bits(objmask), k):
            m = mask_of(fam)
            if not prep.is_normal_mask(m):
                continue
            cand = (prep.revenue_of_mask(m, climask), m)
            if _better(cand, best):
                best = cand
        return best

    def _separators(self, objmask, climask, k) -> list:
        """Distinct (Q, banned) pairs to branch on, in enumeration order."""
        prep = self.prep
        seen, out = set(), []
        limit = self.opts.max_seps
        objects = tuple(bits(objmask))

        def take(qmask, gamma):
            ban = banned_mask(prep, qmask, gamma, objmask)
            if (qmask, ban) in seen:
                return True
            if limit is not None and len(out) >= limit:
                self.stats.truncated = True
                return False
            seen.add((qmask, ban))
            out.append((qmask, ban))
            return True

        for seq, gamma in separator_sequences(prep, k, objects, self.opts.prune):
            if self.deadline is not None and time.monotonic() > self.deadline:
                self.stats.truncated = True
                break
            if not take(mask_of(q[0] for q in seq), gamma):
                break
        if self.opts.inject is not None:
            for x in self.opts.inject(prep, objects, tuple(bits(climask)), k):
                qmask = mask_of(x.objects)
                if qmask & ~objmask or not prep.is_normal_mask(qmask):
                    continue
                take(qmask, mask_of(x.gamma))
        with self.lock:
            self.stats.separators += len(out)
        return out

    def _evaluate(self, cand, objmask, climask, k, depth):
        if self.deadline is not None and time.monotonic() > self.deadline:
            self.stats.truncated = True
            return (NEG_INF, 0)
        prep = self.prep
        qmask, ban = cand
        budget = k - bin(qmask).count("1")
        if budget < 0:
            return (NEG_INF, 0)
        cov = covered_mask(prep, qmask, climask)
        base = prep.revenue_of_mask(qmask, climask)
        comps = interaction_components(prep, objmask & ~qmask & ~ban, climask & ~cov)
        top = min((2 * k) // 3, budget)
        tables = []
        for o, c in comps:
            if not o:
                continue
            table = {}
            for ell in range(min(top, bin(o).count("1")) + 1):
                assert ell <= (2 * k) // 3 and (o != objmask or ell < k)
                val, wm = self.value(o, c, ell, depth + 1)
                if val != NEG_INF:
                    table[ell] = (val, wm)
            tables.append(table)
        val, wm = _knapsack_witness(tables, budget)
        if val == NEG_INF:
            return (NEG_INF, 0)
        return (base + val, wm | qmask)


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _run_for(prep: Prepared, opts: Options, stats: Stats, deadline) -> _Run:
    return _Run(prep, opts, stats, deadline)


def solve_dnc(inst: Instance, opts: Options | None = None, stats: Stats | None = None) -> Revenue:
    """Recursive solver on a connected instance for budget exactly ``k``."""
    opts = opts or Options()
    stats = stats if stats is not None else Stats()
    prep = prepare(inst)
    deadline = None if opts.timeout is None else time.monotonic() + opts.timeout
    run = _run_for(prep, opts, stats, deadline)
    val, wm = _top(run, inst.k)
    return Revenue(val, None if val == NEG_INF else _lex(wm))


def _top(run: _Run, k: int):
    full_o = (1 << run.prep.d) - 1
    full_c = (1 << run.prep.c) - 1
    if run.opts.threads > 1 and k > 3:
        with ThreadPoolExecutor(run.opts.threads) as pool:
            return run.value(full_o, full_c, k, 0, pool)
    return run.value(full_o, full_c, k)


@dataclass
class Result:
    status: str                 # optimal | infeasible | incomplete
    value: int | float
    witness: tuple | None
    scale: int
    stats: Stats

    @property
    def revenue(self) -> Revenue:
        return Revenue(self.value, self.witness)

    def record(self) -> dict:
        return {"format": "netcover-result", "version": 1, "status": self.status,
                "value": format_value(self.value, self.scale),
                "witness": list(self.witness) if self.witness is not None else None}

    def diagnostics(self) -> dict:
        s = self.stats
        return {"separators": s.separators, "cache_hits": s.cache_hits,
                "calls": s.calls, "recursion_depth": s.depth}


def format_value(value, scale: int) -> str:
    if value == NEG_INF:
        return "-inf"
    x = Fraction(value, scale)
    if x.denominator == 1:
        return str(x.numerator)
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{x.numerator}/{x.denominator}"
    places = max(twos, fives)
    digits = abs(x.numerator) * 10 ** places // x.denominator
    sign = "-" if x < 0 else ""
    whole, frac = divmod(digits, 10 ** places)
    return f"{sign}{whole}.{str(frac).rjust(places, '0').rstrip('0')}"


def solve(inst: Instance, opts: Options | None = None) -> Result:
    """Split into connected components, solve each for every budget, and
    merge by knapsack."""
    opts = opts or Options()
    inst.validate()
    stats = Stats()
    deadline = None if opts.timeout is None else time.monotonic() + opts.timeout
    k = inst.k
    parts = split_components(inst)
    tables = []
    for part in parts:
        sub = part.instance
        if not sub.facilities:
            tables.append({0: (0, ())})
            continue
        run = _run_for(prepare(sub), opts, stats, deadline)
        budgets = [k] if len(parts) == 1 and not inst.at_most else range(min(k, len(sub.facilities)) + 1)
        table = {}
        for b in budgets:
            val, wm = _top(run, b)
            if val != NEG_INF:
                table[b] = (val, tuple(sorted(part.facility_ids[i] for i in bits(wm))))
        tables.append(table)
    best = None
    targets = range(k + 1) if inst.at_most else (k,)
    for target in targets:
        cand = _merge_parts(tables, target)
        if cand is not None and (best is None or cand[0] > best[0]
                                 or (cand[0] == best[0] and cand[1] < best[1])):
            best = cand
    if best is None:
        status = "incomplete" if stats.truncated else "infeasible"
        return Result(status, NEG_INF, None, inst.scale, stats)
    status = "incomplete" if stats.truncated else "optimal"
    return Result(status, best[0], best[1], inst.scale, stats)


def _merge_parts(tables, budget):
    row = {0: (0, ())}
    for table in tables:
        nxt: dict = {}
        for used, (acc, wit) in row.items():
            for units, (val, w) in table.items():
                tot = used + units
                if tot > budget:
                    continue
                cand = (acc + val, tuple(sorted(wit + w)))
                cur = nxt.get(tot)
                if cur is None or cand[0] > cur[0] or (cand[0] == cur[0] and cand[1] < cur[1]):
                    nxt[tot] = cand
        row = nxt
    return row.get(budget)
