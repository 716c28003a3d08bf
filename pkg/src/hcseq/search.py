"""Backtracking search for admissible sequences on a finite box of vectors.

The unknown is E on the box [0, K]^m, read through capping at K.  Some cells
are fixed to the bottom element (any vector containing the bottom element,
and for truncated searches every vector of size > T).  Free cells are
assigned in order of weighted size, so that every vector comes after the
vectors obtained by deleting an argument or lowering one.

Each axiom instance is checked as soon as its last cell is assigned.  Cells
with a join-reducible argument x = y v z are not branched on: join
distributivity fixes E(a) = E(a - e_x + e_y) v E(a - e_x + e_z).  Completed
assignments go through the full admissibility check before being reported.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from itertools import product as _cartesian
from typing import Callable, Optional

import numpy as np

from .axioms import check_admissible
from .errors import SearchBudgetExceeded
from .lattice import Lattice
from .sequences import DenseTable, SequencePresentation, from_dense

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 5_000_000


def default_budget() -> int:
    raw = os.environ.get("HCSEQ_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    rejected_leaves: int = 0
    cells: int = 0
    forced_cells: int = 0


@dataclass
class _Plan:
    cells: list[int]
    forced: dict[int, tuple[int, int]]
    bound: dict[int, int]
    le_at: list[list[tuple[int, int]]]
    eq_at: list[list[tuple[int, int, int]]]
    hc8_at: list[list[tuple[int, int, int]]]
    plus: list[tuple[int, ...]] = field(repr=False, default_factory=list)
    pos: list[int] = field(repr=False, default_factory=list)


class BoxSearch:
    """All admissible E on [0, K]^m (capped) whose free cells pass ``is_fixed``."""

    def __init__(self, lattice: Lattice, K: int, is_fixed: Callable[[tuple[int, ...]], bool]):
        self.l = lattice
        self.K = K
        self.m = len(lattice)
        self.N = (K + 1) ** self.m
        self.strides = [(K + 1) ** (self.m - 1 - i) for i in range(self.m)]
        self.coords = list(_cartesian(range(K + 1), repeat=self.m))
        self.fixed = [True] + [is_fixed(a) or a[lattice.bottom] > 0 for a in self.coords[1:]]
        self.stats = SearchStats()
        self.plan = self._plan()

    def _index(self, a) -> int:
        K = self.K
        return sum(min(x, K) * s for x, s in zip(a, self.strides))

    def _plan(self) -> _Plan:
        l, m, K = self.l, self.m, self.K
        weight = [l.height[k] + 1 for k in range(m)]
        free = [i for i in range(1, self.N) if not self.fixed[i]]
        free.sort(key=lambda i: (sum(w * x for w, x in zip(weight, self.coords[i])), self.coords[i]))
        pos = [-1] * self.N
        for p, i in enumerate(free):
            pos[i] = p
        n = len(free)
        plus = []
        for a in self.coords:
            plus.append(tuple(self._index(a[:k] + (a[k] + 1,) + a[k + 1:]) for k in range(m)))

        le_at: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        eq_at: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
        hc8_at: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]

        def at(*cells):
            return max(pos[c] for c in cells)

        relevant = [i for i in range(self.N) if self.coords[i][l.bottom] == 0]
        for i in relevant:
            a = self.coords[i]
            if i and not self.fixed[i]:
                for k in range(m):
                    hi = plus[i][k]
                    if hi != i:
                        le_at[at(i, hi)].append((hi, i))
                for s in range(m):
                    if not a[s]:
                        continue
                    for t in range(m):
                        if s == t or not l.leq[s][t]:
                            continue
                        moved = list(a)
                        moved[s] -= 1
                        moved[t] += 1
                        j = self._index(moved)
                        le_at[at(i, j)].append((i, j))
                        if a[s] == K:
                            j = plus[i][t]
                            le_at[at(i, j)].append((i, j))
            for b in range(m):
                for c in range(b + 1, m):
                    if l.bottom in (b, c):
                        continue
                    t, u, v = plus[i][l.join[b][c]], plus[i][b], plus[i][c]
                    p = at(t, u, v)
                    if p >= 0:
                        eq_at[p].append((t, u, v))

        forced: dict[int, tuple[int, int]] = {}
        bound: dict[int, int] = {}
        jirr = set(l.join_irreducibles)
        for i in free:
            a = self.coords[i]
            bound[i] = l.meet_all(k for k in range(m) if a[k])
            reducible = [k for k in range(m) if a[k] and k not in jirr]
            if reducible:
                x = reducible[0]
                y, z = l.lower_covers[x][:2]
                base = list(a)
                base[x] -= 1
                u = base.copy()
                u[y] += 1
                v = base.copy()
                v[z] += 1
                forced[i] = (self._index(u), self._index(v))
            else:
                for b in relevant:
                    s = self._index(tuple(p + q for p, q in zip(self.coords[b], a)))
                    hc8_at[at(i, s)].append((i, s, b))
        self.stats.cells = n
        self.stats.forced_cells = len(forced)
        return _Plan(free, forced, bound, le_at, eq_at, hc8_at, plus, pos)

    def _candidates(self, p: int, val: list[int]) -> list[int]:
        plan = self.plan
        i = plan.cells[p]
        if i in plan.forced:
            u, v = plan.forced[i]
            return [self.l.join[val[u]][val[v]]]
        ub = plan.bound[i]
        return [x for x in self.l.linear_extension if self.l.leq[x][ub]]

    def _consistent(self, p: int, val: list[int]) -> bool:
        leq, join = self.l.leq, self.l.join
        plan = self.plan
        for u, v in plan.le_at[p]:
            if not leq[val[u]][val[v]]:
                return False
        for t, u, v in plan.eq_at[p]:
            if val[t] != join[val[u]][val[v]]:
                return False
        bottom = self.l.bottom
        pos, plus = plan.pos, plan.plus
        for c, s, b in plan.hc8_at[p]:
            x = val[c]
            if x == bottom:
                continue
            t = plus[b][x]
            if pos[t] <= p and not leq[val[t]][val[s]]:
                return False
        return True

    def run(self, budget: Optional[int] = None) -> list[SequencePresentation]:
        budget = default_budget() if budget is None else budget
        val = [self.l.bottom] * self.N
        val[0] = self.l.top
        n = len(self.plan.cells)
        found: list[SequencePresentation] = []
        cells = self.plan.cells

        def leaf():
            self.stats.leaves += 1
            table = DenseTable(self.l, self.K, np.array(val))
            if check_admissible(table).ok:
                found.append(from_dense(table))
            else:
                self.stats.rejected_leaves += 1

        if n == 0:
            leaf()
            return found
        cands: list[list[int]] = [[] for _ in range(n)]
        ptr = [0] * n
        p = 0
        cands[0] = self._candidates(0, val)
        while p >= 0:
            if ptr[p] == len(cands[p]):
                p -= 1
                continue
            val[cells[p]] = cands[p][ptr[p]]
            ptr[p] += 1
            self.stats.nodes += 1
            if self.stats.nodes > budget:
                raise SearchBudgetExceeded(
                    f"search exceeded its budget of {budget} nodes",
                    witness={"budget": budget, "found_so_far": len(found)},
                )
            if not self._consistent(p, val):
                continue
            if p == n - 1:
                leaf()
                continue
            p += 1
            cands[p] = self._candidates(p, val)
            ptr[p] = 0
        log.debug("search on %s K=%d: %s", self.l, self.K, self.stats)
        return found
