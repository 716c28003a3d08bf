"""Counting admissible sequences: finite enumeration, the infinite family, and the oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as _cartesian
from typing import Iterator, Optional

import networkx as nx
import numpy as np

from .axioms import check_admissible
from .errors import HasSplittingPair, NotModular, NotStrong
from .lattice import Lattice, SplittingPair, atoms, catalog, decompose, splits_strongly, splitting_pairs
from .search import BoxSearch
from .sequences import (
    SequencePresentation,
    TruncatedTable,
    b2_sequences,
    from_truncated_table,
    leq_sequences,
    product_sequence,
    relabel,
)


def _atom_count(l: Lattice) -> int:
    return 0 if len(l) == 1 else len(atoms(l))


def enumerate_nonsplitting(m: Lattice, budget: Optional[int] = None) -> list[SequencePresentation]:
    """All admissible sequences on a lattice without splitting pairs.

    They all vanish from arity #atoms on, so E is searched on vectors of size
    below #atoms with zero tail.
    """
    if len(m) > 1:
        pairs = splitting_pairs(m)
        if pairs:
            raise HasSplittingPair(
                "lattice has a splitting pair",
                witness=list(pairs[0].labels(m)),
            )
    T = max(_atom_count(m) - 1, 0)
    search = BoxSearch(m, T + 1, lambda a: sum(a) > T)
    return search.run(budget)


def brute_force_oracle(l: Lattice, c: int, budget: Optional[int] = None) -> list[SequencePresentation]:
    """Every admissible sequence whose presentation has cap degree <= c.

    Direct search over E on [0, c]^m; no decomposition or product argument.
    """
    if c < 1:
        raise ValueError("cap must be at least 1")
    return BoxSearch(l, c, lambda a: False).run(budget)


def family_member(l: Lattice, pair: SplittingPair, j: int) -> SequencePresentation:
    """h^(j): identity at arity 1, then eps or 0 up to arity j, zero beyond.

    At arity n >= 2 the value is 0 as soon as one argument lies below delta,
    eps otherwise; h^(0) is the zero sequence.
    """
    if not pair.strong or not l.leq[pair.epsilon][pair.delta]:
        raise NotStrong("the family needs a strong splitting pair", witness=list(pair.labels(l)))
    values = {}
    m = len(l)
    for a in _vectors_up_to(m, j):
        support = [k for k in range(m) if a[k]]
        if sum(a) == 1:
            values[a] = support[0]
        elif any(l.leq[k][pair.delta] for k in support):
            values[a] = l.bottom
        else:
            values[a] = pair.epsilon
    return from_truncated_table(TruncatedTable(l, j, values))


def _vectors_up_to(m: int, T: int):
    for a in _cartesian(range(T + 1), repeat=m):
        if 1 <= sum(a) <= T:
            yield a


def infinite_family(l: Lattice, pair: SplittingPair, k: int) -> list[SequencePresentation]:
    return [family_member(l, pair, j) for j in range(k + 1)]


@dataclass(frozen=True)
class InfiniteFamily:
    """Lazy handle on h^(0), h^(1), ... for a strong splitting pair."""

    lattice: Lattice
    pair: SplittingPair

    def __getitem__(self, j: int) -> SequencePresentation:
        return family_member(self.lattice, self.pair, j)

    def __iter__(self) -> Iterator[SequencePresentation]:
        j = 0
        while True:
            yield self[j]
            j += 1

    def prefix(self, k: int) -> list[SequencePresentation]:
        return infinite_family(self.lattice, self.pair, k)


@dataclass
class Classification:
    lattice: Lattice
    verdict: str
    method: str
    sequences: Optional[list[SequencePresentation]] = None
    pair: Optional[SplittingPair] = None
    family: Optional[InfiniteFamily] = None
    cap: Optional[int] = None

    @property
    def finite(self) -> bool:
        return self.verdict == "finite"

    @property
    def count(self) -> Optional[int]:
        return None if self.sequences is None else len(self.sequences)


def derived_cap(l: Lattice) -> int:
    """Oracle cap that is complete on a modular lattice that does not split strongly."""
    return max(_atom_count(decompose(l).core), 2)


def _dedupe(seqs):
    seen = set()
    out = []
    for s in seqs:
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def _by_decomposition(l: Lattice, budget: Optional[int]) -> list[SequencePresentation]:
    d = decompose(l)
    core_seqs = enumerate_nonsplitting(d.core, budget)
    b2 = catalog("B2")
    factors = list(b2_sequences(b2).values())
    # index of x in core x B2 x ... x B2 built by repeated product()
    inverse = [0] * len(l)
    for x in range(len(l)):
        c, bits = d.iso[x]
        idx = c
        for bit in bits:
            idx = idx * 2 + (b2.top if bit else b2.bottom)
        inverse[idx] = x
    out = []
    for combo in _cartesian(core_seqs, *[factors] * d.b2_power):
        p = combo[0]
        for s in combo[1:]:
            p = product_sequence(p, s)
        q = relabel(p, l, inverse)
        report = check_admissible(q)
        if not report.ok:
            raise AssertionError(f"product of admissible sequences failed {report.failures()}")
        out.append(q)
    return _dedupe(out)


def classify(
    l: Lattice,
    method: str = "decomposition",
    cap: Optional[int] = None,
    budget: Optional[int] = None,
) -> Classification:
    """Finite list of all admissible sequences, or the infinite family.

    ``method="oracle"`` lists the sequences of cap degree <= ``cap`` instead
    of using the product decomposition; without ``cap`` the derived cap is
    used, which needs modularity.
    """
    pair = None if len(l) == 1 else splits_strongly(l)
    if method == "oracle":
        if cap is None:
            if pair is not None:
                raise ValueError("an explicit cap is required for a strongly splitting lattice")
            cap = derived_cap(l)
        seqs = brute_force_oracle(l, cap, budget)
        if pair is not None:
            return Classification(l, "infinite", "oracle", seqs, pair, InfiniteFamily(l, pair), cap)
        return Classification(l, "finite", "oracle", seqs, None, None, cap)
    if method != "decomposition":
        raise ValueError(f"unknown method {method!r}")
    if pair is not None:
        return Classification(l, "infinite", "decomposition", None, pair, InfiniteFamily(l, pair))
    try:
        seqs = _by_decomposition(l, budget)
    except NotModular:
        raise
    return Classification(l, "finite", "decomposition", seqs)


@dataclass
class PosetReport:
    size: int
    relation: list[list[bool]]
    longest_chain: int
    largest_antichain: int
    injective: bool
    order_reversing: bool
    mismatches: list[tuple[int, int]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "longest_chain": self.longest_chain,
            "largest_antichain": self.largest_antichain,
            "embedding_injective": self.injective,
            "embedding_order_reversing": self.order_reversing,
            "relation": [[int(x) for x in row] for row in self.relation],
        }


def pointwise_leq(p: SequencePresentation, q: SequencePresentation) -> bool:
    """f_n <= g_n everywhere, by evaluating both on a common box."""
    K = max(p.cap, q.cap)
    m = len(p.lattice)
    coords = np.indices((K + 1,) * m).reshape(m, -1).T[1:]
    leq = np.array(p.lattice.leq, dtype=bool)
    return bool(leq[p.evaluate_many(coords), q.evaluate_many(coords)].all())


def sequence_poset(seqs: list[SequencePresentation]) -> PosetReport:
    """The order between sequences, with chain/antichain sizes.

    Also confirms that seq -> (levels) is injective and that level
    containment reverses the pointwise order.
    """
    n = len(seqs)
    if n:
        for s in seqs[1:]:
            if s.lattice != seqs[0].lattice:
                from .errors import LatticeMismatch

                raise LatticeMismatch("sequences live on different lattices")
    rel = [[leq_sequences(p, q) for q in seqs] for p in seqs]
    mismatches = []
    for i in range(n):
        for j in range(n):
            if rel[i][j] != pointwise_leq(seqs[i], seqs[j]):
                mismatches.append((i, j))
    injective = len({s.levels for s in seqs}) == n
    strict = nx.DiGraph()
    strict.add_nodes_from(range(n))
    strict.add_edges_from((i, j) for i in range(n) for j in range(n) if i != j and rel[i][j])
    longest = nx.dag_longest_path_length(strict) + 1 if n else 0
    # Dilworth: largest antichain = n - maximum matching in the comparability graph
    bip = nx.Graph()
    left = [("L", i) for i in range(n)]
    bip.add_nodes_from(left)
    bip.add_nodes_from(("R", i) for i in range(n))
    bip.add_edges_from((("L", i), ("R", j)) for i, j in strict.edges)
    matching = nx.bipartite.hopcroft_karp_matching(bip, top_nodes=left) if n else {}
    antichain = n - len(matching) // 2
    return PosetReport(n, rel, longest, antichain, injective, not mismatches, mismatches)
