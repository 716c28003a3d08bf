"""Admissibility check for operation sequences.

Every axiom is rewritten on multiplicity vectors and quantified over the box
[0, K]^m of a cap-invariant table (K = presentation cap, or T + 1 for a
truncated table).  Capping commutes with addition,
    min(b + c, K) = min(min(b, K) + min(c, K), K),
so every instance over N_0^m has a capped twin inside the box with identical
values on both sides.  The one exception is replacing an argument that occurs
more than K times (HC2); those instances are covered by the explicit
excursion a_i = K + 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .sequences import DenseTable, SequencePresentation, TruncatedTable, _np_tables

AXIOMS = ("HC1", "HC2", "HC3", "HC4", "HC7", "HC8")


@dataclass
class AxiomResult:
    axiom: str
    passed: bool
    witness: Optional[dict] = None

    def to_json(self) -> dict:
        out: dict = {"axiom": self.axiom, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class AdmissibilityReport:
    box: int
    results: dict[str, AxiomResult] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results.values())

    def failures(self) -> list[str]:
        return [a for a, r in self.results.items() if not r.passed]

    def to_json(self) -> dict:
        return {
            "admissible": self.ok,
            "box": self.box,
            "axioms": [self.results[a].to_json() for a in AXIOMS],
        }


def _first(bad: np.ndarray) -> Optional[int]:
    hits = np.flatnonzero(bad)
    return int(hits[0]) if len(hits) else None


def _unit(m: int, k: int, scale: int = 1) -> np.ndarray:
    v = np.zeros(m, dtype=np.int64)
    v[k] = scale
    return v


class _Checker:
    def __init__(self, table: DenseTable):
        self.t = table
        self.l = table.lattice
        self.m = table.m
        self.K = table.K
        self.E = table.values
        self.coords = table.coords
        self.leq, self.meet, self.join = _np_tables(self.l)
        self.nonzero = np.arange(len(self.E)) != 0
        self._plus: dict[int, np.ndarray] = {}

    def name(self, x) -> str:
        return self.l.elements[int(x)]

    def vec(self, flat_index: int, extra: Optional[np.ndarray] = None) -> list[int]:
        v = self.coords[flat_index].copy()
        if extra is not None:
            v = v + extra
        return v.tolist()

    def plus(self, k: int) -> np.ndarray:
        """E(cap(a + e_k)) for every box vector a."""
        if k not in self._plus:
            self._plus[k] = self.E[self.t.shifted(_unit(self.m, k))]
        return self._plus[k]

    def hc1(self) -> AxiomResult:
        best = None
        for k in range(self.m):
            bad = (self.coords[:, k] > 0) & ~self.leq[self.E, k]
            i = _first(bad)
            if i is not None and (best is None or (i, k) < best):
                best = (i, k)
        if best is None:
            return AxiomResult("HC1", True)
        i, k = best
        return AxiomResult("HC1", False, {
            "vector": self.vec(i), "argument": self.name(k), "value": self.name(self.E[i]),
        })

    def hc2(self) -> AxiomResult:
        best = None
        E = self.E
        for i in range(self.m):
            for j in range(self.m):
                if i == j or not self.leq[i, j]:
                    continue
                swap = E[self.t.shifted(_unit(self.m, j) - _unit(self.m, i))]
                bad = (self.coords[:, i] > 0) & ~self.leq[E, swap]
                a = _first(bad)
                if a is not None and (best is None or (a, 0, i, j) < best):
                    best = (a, 0, i, j)
                # a_i = K + 1 caps to a_i = K; removing one copy leaves K copies
                bad = (self.coords[:, i] == self.K) & ~self.leq[E, self.plus(j)]
                a = _first(bad)
                if a is not None and (best is None or (a, 1, i, j) < best):
                    best = (a, 1, i, j)
        if best is None:
            return AxiomResult("HC2", True)
        a, excursion, i, j = best
        vec = self.vec(a, _unit(self.m, i) if excursion else None)
        after = list(vec)
        after[i] -= 1
        after[j] += 1
        return AxiomResult("HC2", False, {
            "vector": vec, "smaller": self.name(i), "larger": self.name(j),
            "value": self.name(E[a]), "value_after_raise": self.name(self.t.at(after)),
        })

    def hc3(self) -> AxiomResult:
        best = None
        for i in range(self.m):
            bad = self.nonzero & ~self.leq[self.plus(i), self.E]
            a = _first(bad)
            if a is not None and (best is None or (a, i) < best):
                best = (a, i)
        if best is None:
            return AxiomResult("HC3", True)
        a, i = best
        return AxiomResult("HC3", False, {
            "vector": self.vec(a), "index": i, "added": self.name(i),
            "value": self.name(self.E[a]), "value_after_add": self.name(self.plus(i)[a]),
        })

    def hc7(self) -> AxiomResult:
        best = None
        for b in range(self.m):
            for c in range(b + 1, self.m):
                lhs = self.plus(int(self.l.join[b][c]))
                rhs = self.join[self.plus(b), self.plus(c)]
                a = _first(lhs != rhs)
                if a is not None and (best is None or (a, b, c) < best):
                    best = (a, b, c)
        if best is None:
            return AxiomResult("HC7", True)
        a, b, c = best
        jn = self.l.join[b][c]
        return AxiomResult("HC7", False, {
            "vector": self.vec(a), "pair": [self.name(b), self.name(c)],
            "value_at_join": self.name(self.plus(jn)[a]),
            "join_of_values": self.name(self.join[self.plus(b)[a], self.plus(c)[a]]),
        })

    def _hc8_at(self, inner: int) -> Optional[int]:
        x = int(self.E[inner])
        rhs = self.E[self.t.flat(self.coords + self.coords[inner])]
        return _first(~self.leq[self.plus(x), rhs])

    def _hc8_witness(self, b: int, inner: int) -> dict:
        x = int(self.E[inner])
        return {
            "outer": self.vec(b), "inner": self.vec(inner), "inner_value": self.name(x),
            "nested": self.name(self.plus(x)[b]),
            "flat": self.name(self.t.at(self.coords[b] + self.coords[inner])),
        }

    def hc8(self, reduced: bool) -> AxiomResult:
        """E(b + e_{E(c)}) <= E(b + c) for all b and all nonzero c.

        With HC1 and HC3 in force, inner vectors with value 0 are vacuous and,
        for each value x, it is enough to test the maximal c of the convex
        set {E = x}: enlarging c only lowers the right hand side.
        """
        if reduced:
            violated = False
            for x in range(self.m):
                if x == self.l.bottom:
                    continue
                block = self.nonzero & (self.E == x)
                maximal = block.copy()
                for i in range(self.m):
                    step = self.coords[:, i] < self.K
                    src = np.flatnonzero(step & block)
                    s = int(self.t.strides[i])
                    maximal[src[block[src + s]]] = False
                for inner in np.flatnonzero(maximal):
                    if self._hc8_at(int(inner)) is not None:
                        violated = True
                        break
                if violated:
                    break
            if not violated:
                return AxiomResult("HC8", True)
        best = None
        for inner in np.flatnonzero(self.nonzero):
            b = self._hc8_at(int(inner))
            if b is not None and (best is None or (b, int(inner)) < best):
                best = (b, int(inner))
        if best is None:
            return AxiomResult("HC8", True)
        return AxiomResult("HC8", False, self._hc8_witness(*best))


def check_admissible(obj: Union[SequencePresentation, TruncatedTable, DenseTable]) -> AdmissibilityReport:
    """Per-axiom pass/fail with the lexicographically first witness on failure."""
    table = obj if isinstance(obj, DenseTable) else obj.dense
    ck = _Checker(table)
    report = AdmissibilityReport(box=table.K)
    r1, r3 = ck.hc1(), ck.hc3()
    report.results["HC1"] = r1
    report.results["HC2"] = ck.hc2()
    report.results["HC3"] = r3
    # symmetry is built into the multiset encoding
    report.results["HC4"] = AxiomResult("HC4", True)
    report.results["HC7"] = ck.hc7()
    report.results["HC8"] = ck.hc8(reduced=r1.passed and r3.passed)
    return report


def is_admissible(obj) -> bool:
    return check_admissible(obj).ok
