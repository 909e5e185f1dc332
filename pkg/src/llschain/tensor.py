"""Tensor-square tables and potentially appearing sections.

The tensor table of a vanishing table has one row per unordered pair
(j, j'), with entries a^i_j + a^i_{j'} and b^i_j + b^i_{j'}.  In a fixed
bounded multidegree of total degree 2d, a row is potentially appearing in
column i when a^i >= c_i and b^i >= 2d - c_{i+1}; strictness of the first
(second) inequality makes it potentially starting (ending).  At the ends of
the chain there is no node to glue through, so a section may start in
column 1 and end in column N without strictness.

A potential section is a maximal contiguous run of appearing columns,
trimmed on the left until it potentially starts and on the right until it
potentially ends.  Appearing columns shaved off in the trim belong to no
section.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .multidegree import MultidegreeError, TwistVector
from .table import VanishingTable


@lru_cache(maxsize=None)
def pair_list(r: int) -> tuple[tuple[int, int], ...]:
    """Unordered row pairs (j <= j'), sorted by total then first entry."""
    pairs = [(j1, j2) for j1 in range(r + 1) for j2 in range(j1, r + 1)]
    pairs.sort(key=lambda p: (p[0] + p[1], p[0]))
    return tuple(pairs)


@dataclass(frozen=True)
class TensorTable:
    base: VanishingTable
    pairs: tuple[tuple[int, int], ...]
    ta: tuple[tuple[int, ...], ...]
    tb: tuple[tuple[int, ...], ...]

    @property
    def n_columns(self) -> int:
        return self.base.n_columns

    @property
    def d2(self) -> int:
        return 2 * self.base.d

    def pair_index(self, pair: tuple[int, int]) -> int:
        return self.pairs.index((min(pair), max(pair)))


def build_tensor_table(table: VanishingTable) -> TensorTable:
    pairs = pair_list(table.r)
    ta = tuple(
        tuple(ai[j1] + ai[j2] for (j1, j2) in pairs) for ai in table.a
    )
    tb = tuple(
        tuple(bi[j1] + bi[j2] for (j1, j2) in pairs) for bi in table.b
    )
    return TensorTable(table, pairs, ta, tb)


@dataclass(frozen=True)
class AppearFlags:
    appearing: bool
    starting: bool
    ending: bool


def _check_w(tt: TensorTable, w: TwistVector) -> tuple[int, ...]:
    if w.n_components != tt.n_columns:
        raise MultidegreeError("twist vector length disagrees with table")
    if w.D != tt.d2:
        raise MultidegreeError(f"expected total degree {tt.d2}, got {w.D}")
    if not w.bounded:
        raise MultidegreeError("twist vector is not bounded")
    return w.extended()


def appearance_flags(tt: TensorTable, w: TwistVector, i: int,
                     pair: tuple[int, int]) -> AppearFlags:
    """Per-column appear/start/end flags of one row (column i is 1-based)."""
    ext = _check_w(tt, w)
    n = tt.n_columns
    p = tt.pair_index(pair)
    a = tt.ta[i - 1][p]
    b = tt.tb[i - 1][p]
    left, right = ext[i], tt.d2 - ext[i + 1]
    appearing = a >= left and b >= right
    starting = appearing and (i == 1 or a > left)
    ending = appearing and (i == n or b > right)
    return AppearFlags(appearing, starting, ending)


@dataclass(frozen=True)
class PotentialSection:
    """Maximal support interval of one tensor row, columns 1-based inclusive."""

    row: tuple[int, int]
    start: int
    end: int

    def covers(self, i: int) -> bool:
        return self.start <= i <= self.end

    def to_json(self) -> dict:
        return {"row": list(self.row), "start": self.start, "end": self.end}


def extract_potential_sections(tt: TensorTable, w: TwistVector) -> list[PotentialSection]:
    """All potential sections in row-major order, left to right within a row."""
    ext = _check_w(tt, w)
    n = tt.n_columns
    d2 = tt.d2
    out = []
    for p, pair in enumerate(tt.pairs):
        x = 0
        while x < n:
            ax = tt.ta[x][p]
            bx = tt.tb[x][p]
            if ax < ext[x + 1] or bx < d2 - ext[x + 2]:
                x += 1
                continue
            run_start = x
            x += 1
            while x < n and tt.ta[x][p] >= ext[x + 1] and tt.tb[x][p] >= d2 - ext[x + 2]:
                x += 1
            run_end = x - 1
            s = run_start
            while s <= run_end and s != 0 and tt.ta[s][p] == ext[s + 1]:
                s += 1
            e = run_end
            while e >= s and e != n - 1 and tt.tb[e][p] == d2 - ext[e + 2]:
                e -= 1
            if s <= e:
                out.append(PotentialSection(pair, s + 1, e + 1))
    return out


def spanning_count(tt: TensorTable, w: TwistVector, i: int,
                   sections: list[PotentialSection] | None = None) -> int:
    """Number of potential sections covering both column i and column i+1."""
    if sections is None:
        sections = extract_potential_sections(tt, w)
    return sum(1 for s in sections if s.start <= i and s.end >= i + 1)
