"""Enumeration of refined tables on pure elliptic chains, within a defect budget.

A table is grown column by column.  At each genus-1 column one row may take
sum d (gaining a box; the delta row) and every other row takes sum d-1 minus
an optional extra slack; the defect budget pays one unit per missing delta
and one per unit of slack.  Initial ramification of the first column spends
from the same budget.  Validity of a column choice is just distinctness of
the resulting next-column values and the bound a <= d; swaps are the column
choices that invert the relative order of two rows.

Enumeration order is canonical: ramification vectors first, then per-column
choices ordered by (delta row, slack assignment), so the stream of tables is
reproducible and can be partitioned by index ranges.  Subtree sizes come
from an exact dynamic program on sorted value tuples, which also powers
uniform deterministic sampling (unranking seeded random indices) and the
stratified streams used for the big verification runs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

from .chain import ChainCurve, build_elliptic_chain
from .table import VanishingTable, rho_accounting, table_from_columns, validate_table

MAX_BUDGET = 2

STRATA: dict[str, Callable[[int], bool]] = {
    "all": lambda s: True,
    "swap_free": lambda s: s == 0,
    "has_swap": lambda s: s >= 1,
    "one_swap": lambda s: s == 1,
    "le1_swap": lambda s: s <= 1,
    "two_swap": lambda s: s == 2,
}


class EnumerationError(ValueError):
    pass


@lru_cache(maxsize=None)
def _slack_menu(rows: int, spare: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Slack assignments (row, extra) with total extra <= spare, canonical order."""
    menu: list[tuple[tuple[int, int], ...]] = [()]
    if spare >= 1:
        menu += [((j, 1),) for j in range(rows)]
    if spare >= 2:
        menu += [((j, 2),) for j in range(rows)]
        menu += [
            ((j1, 1), (j2, 1)) for j1 in range(rows) for j2 in range(j1 + 1, rows)
        ]
    return tuple(menu)


def _ram_vectors(rows: int, budget: int) -> list[tuple[int, ...]]:
    """Nondecreasing nonnegative ramification vectors with sum <= budget."""
    out = [tuple([0] * rows)]
    if budget >= 1:
        out.append(tuple([0] * (rows - 1) + [1]))
    if budget >= 2:
        out.append(tuple([0] * (rows - 2) + [1, 1]))
        out.append(tuple([0] * (rows - 1) + [2]))
    return sorted(out)


@dataclass(frozen=True)
class _Choice:
    new_a: tuple[int, ...]
    cost: int
    swaps: int


def _column_choices(a: tuple[int, ...], budget: int, d: int) -> list[_Choice]:
    """All valid column continuations from row values ``a``, canonical order."""
    rows = len(a)
    out: list[_Choice] = []
    for delta in list(range(rows)) + [None]:
        base_cost = 0 if delta is not None else 1
        if base_cost > budget:
            continue
        for slack in _slack_menu(rows, budget - base_cost):
            if delta is not None and any(j == delta for j, _ in slack):
                continue
            extra = dict(slack)
            new_a = list(a)
            ok = True
            for j in range(rows):
                if j == delta:
                    continue
                v = a[j] + 1 + extra.get(j, 0)
                if v > d:
                    ok = False
                    break
                new_a[j] = v
            if not ok or len(set(new_a)) != rows:
                continue
            swaps = 0
            for j, _ in slack:
                for k in range(rows):
                    if k == j or (k in extra and k < j):
                        continue
                    if (a[j] - a[k] > 0) != (new_a[j] - new_a[k] > 0):
                        swaps += 1
            out.append(_Choice(tuple(new_a), base_cost + sum(extra.values()), swaps))
    return out


class TableEnumerator:
    """Canonical, resumable, exactly countable stream of valid tables."""

    def __init__(self, g: int, r: int, d: int, rho_max: int | None = None,
                 stratum: str = "all"):
        if g < 1 or r < 0 or d < 0:
            raise EnumerationError("bad family parameters")
        rho = g - (r + 1) * (g + r - d)
        if rho < 0:
            raise EnumerationError(f"infeasible family: rho = {rho} < 0")
        if rho_max is None:
            rho_max = min(rho, MAX_BUDGET)
        if rho_max > rho:
            raise EnumerationError(f"rho_max {rho_max} exceeds rho = {rho}")
        if rho_max > MAX_BUDGET:
            raise EnumerationError(
                f"defect budgets above {MAX_BUDGET} are not supported"
            )
        if stratum not in STRATA:
            raise EnumerationError(f"unknown stratum {stratum!r}")
        self.g, self.r, self.d = g, r, d
        self.rho, self.rho_max = rho, rho_max
        self.stratum = stratum
        self._accept = STRATA[stratum]
        self.chain: ChainCurve = build_elliptic_chain(g)
        self._memo: dict[tuple, int] = {}
        self._choice_cache: dict[tuple[tuple[int, ...], int], list[_Choice]] = {}

    # -- counting ----------------------------------------------------------

    def _choices(self, a: tuple[int, ...], budget: int) -> list[_Choice]:
        key = (a, budget)
        cached = self._choice_cache.get(key)
        if cached is None:
            cached = _column_choices(a, budget, self.d)
            self._choice_cache[key] = cached
        return cached

    def _count(self, i: int, vals: tuple[int, ...], budget: int, swaps: int) -> int:
        """Completions of a state after column i (vals sorted ascending)."""
        if i == self.g:
            return 1 if self._accept(swaps) else 0
        key = (i, vals, budget, swaps)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        total = 0
        for ch in self._choices(vals, budget):
            total += self._count(
                i + 1,
                tuple(sorted(ch.new_a)),
                budget - ch.cost,
                min(MAX_BUDGET, swaps + ch.swaps),
            )
        self._memo[key] = total
        return total

    def _roots(self) -> list[tuple[tuple[int, ...], int]]:
        """Initial (a^1, remaining budget) states in canonical order."""
        out = []
        for m in _ram_vectors(self.r + 1, self.rho_max):
            a1 = tuple(j + m[j] for j in range(self.r + 1))
            out.append((a1, self.rho_max - sum(m)))
        return out

    def total(self) -> int:
        return sum(self._count(0, a1, b, 0) for a1, b in self._roots())

    # -- streaming ---------------------------------------------------------

    def _materialize(self, a1: tuple[int, ...], path: list[_Choice]) -> VanishingTable:
        d = self.d
        a_cols = [a1] + [ch.new_a for ch in path[:-1]]
        b_cols = [
            tuple(d - v for v in ch.new_a) for ch in path
        ]
        return table_from_columns(self.chain, self.r, d, a_cols, b_cols)

    def iter_range(self, start: int, count: int) -> Iterator[tuple[int, VanishingTable]]:
        """Yield (index, table) for the canonical slice [start, start+count)."""
        if start < 0 or count < 0:
            raise EnumerationError("bad range")
        produced = 0
        target = start
        roots = self._roots()
        skipped = 0
        for a1, budget0 in roots:
            sub = self._count(0, a1, budget0, 0)
            if target >= skipped + sub:
                skipped += sub
                continue
            offset = target - skipped
            for got in self._walk_root(a1, budget0, offset, count - produced):
                yield (target, got)
                target += 1
                produced += 1
            skipped += sub
            if produced >= count:
                return

    def _walk_root(self, a1: tuple[int, ...], budget0: int, offset: int,
                   limit: int) -> Iterator[VanishingTable]:
        """Walk up to ``limit`` leaves below one root, starting at ``offset``."""
        if limit <= 0:
            return
        g = self.g
        # frame: [labeled_a, budget, swaps, choices, position]
        frames: list[list] = []
        state = (a1, budget0, 0)
        k = offset
        for depth in range(g):
            a, budget, swaps = state
            choices = self._choices(a, budget)
            pos = 0
            while pos < len(choices):
                ch = choices[pos]
                sub = self._count(
                    depth + 1, tuple(sorted(ch.new_a)), budget - ch.cost,
                    min(MAX_BUDGET, swaps + ch.swaps),
                )
                if k < sub:
                    break
                k -= sub
                pos += 1
            if pos == len(choices):
                raise EnumerationError("offset out of range")
            frames.append([a, budget, swaps, choices, pos])
            ch = choices[pos]
            state = (ch.new_a, budget - ch.cost, min(MAX_BUDGET, swaps + ch.swaps))

        produced = 0
        while True:
            if self._accept(state[2]):
                yield self._materialize(a1, [f[3][f[4]] for f in frames])
                produced += 1
                if produced >= limit:
                    return
            # advance the odometer to the next nonempty leaf
            depth = g - 1
            while depth >= 0:
                a, budget, swaps, choices, pos = frames[depth]
                pos += 1
                while pos < len(choices):
                    ch = choices[pos]
                    if self._count(
                        depth + 1, tuple(sorted(ch.new_a)), budget - ch.cost,
                        min(MAX_BUDGET, swaps + ch.swaps),
                    ) > 0:
                        break
                    pos += 1
                if pos < len(choices):
                    frames[depth][4] = pos
                    break
                frames.pop()
                depth -= 1
            if depth < 0:
                return
            for lower in range(depth + 1, g):
                a, budget, swaps, choices, pos = frames[lower - 1]
                ch = choices[pos]
                nxt = (ch.new_a, budget - ch.cost, min(MAX_BUDGET, swaps + ch.swaps))
                lo_choices = self._choices(nxt[0], nxt[1])
                lo_pos = 0
                while lo_pos < len(lo_choices):
                    ch2 = lo_choices[lo_pos]
                    if self._count(
                        lower + 1, tuple(sorted(ch2.new_a)), nxt[1] - ch2.cost,
                        min(MAX_BUDGET, nxt[2] + ch2.swaps),
                    ) > 0:
                        break
                    lo_pos += 1
                frames.append([nxt[0], nxt[1], nxt[2], lo_choices, lo_pos])
            last = frames[-1]
            ch = last[3][last[4]]
            state = (ch.new_a, last[1] - ch.cost, min(MAX_BUDGET, last[2] + ch.swaps))

    def iter_all(self) -> Iterator[tuple[int, VanishingTable]]:
        return self.iter_range(0, self.total())

    def sample_indices(self, n: int, seed: int) -> list[int]:
        total = self.total()
        n = min(n, total)
        rng = random.Random(seed)
        return sorted(rng.sample(range(total), n))

    def iter_indices(self, indices) -> Iterator[tuple[int, VanishingTable]]:
        """Yield (index, table) for an ascending list of stratum indices."""
        prev = None
        for idx in indices:
            if prev is not None and idx <= prev:
                raise EnumerationError("indices must be strictly ascending")
            for _, table in self.iter_range(idx, 1):
                yield (idx, table)
            prev = idx


def enumerate_tables(g: int, r: int, d: int, rho_max: int | None = None,
                     mode: str = "exhaustive", n: int | None = None,
                     seed: int | None = None,
                     stratum: str = "all") -> Iterator[VanishingTable]:
    """Stream valid tables, exhaustively or as a seeded uniform sample."""
    enum = TableEnumerator(g, r, d, rho_max, stratum)
    if mode == "exhaustive":
        for _, table in enum.iter_all():
            yield table
    elif mode == "sampled":
        if n is None or seed is None:
            raise EnumerationError("sampled mode needs n and seed")
        for _, table in enum.iter_indices(enum.sample_indices(n, seed)):
            yield table
    else:
        raise EnumerationError(f"unknown mode {mode!r}")


class OracleSpaceTooLarge(EnumerationError):
    pass


def count_small_oracle(g: int, r: int, d: int, rho_max: int,
                       node_limit: int = 10_000_000) -> int:
    """Brute-force table count on a pure chain: no pruning, post-hoc filter.

    Generates every choice of strictly increasing first column and, per
    column, every distinct b-tuple obeying the sum bounds and the one-sum-d
    genericity rule, then keeps the tables whose defect total fits the
    budget.  Only for small search spaces; raises once ``node_limit``
    internal nodes are visited.
    """
    from itertools import combinations

    chain = build_elliptic_chain(g)
    rows = r + 1
    nodes = 0

    def b_columns(a_col: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        def rec(j: int, used: set[int], acc: list[int], full: int):
            nonlocal nodes
            nodes += 1
            if nodes > node_limit:
                raise OracleSpaceTooLarge("oracle exceeded its node budget")
            if j == rows:
                yield tuple(acc)
                return
            for bj in range(d - a_col[j] + 1):
                if bj in used:
                    continue
                f = 1 if a_col[j] + bj == d else 0
                if full + f > 1:
                    continue
                used.add(bj)
                acc.append(bj)
                yield from rec(j + 1, used, acc, full + f)
                acc.pop()
                used.remove(bj)

        yield from rec(0, set(), [], 0)

    count = 0

    def grow(i: int, a_col: tuple[int, ...], a_cols: list, b_cols: list):
        nonlocal count, nodes
        if i == g:
            table = table_from_columns(chain, r, d, a_cols, b_cols)
            validate_table(table)
            if rho_accounting(table).total <= rho_max:
                count += 1
            return
        for b_col in b_columns(a_col):
            nxt = tuple(d - bj for bj in b_col)
            grow(i + 1, nxt, a_cols + [nxt] if i + 1 < g else a_cols,
                 b_cols + [b_col])

    for a1 in combinations(range(d + 1), rows):
        grow(0, a1, [a1], [])
    return count
