"""Operation sequences on a finite lattice and their finite presentations.

A symmetric operation sequence (f_n) is a function E on nonzero multiplicity
vectors a in N_0^m: E(a) = f_n applied to a_k copies of element k,
n = sum(a).  A presentation stores, for every element x, the upward closed
set levels[x] = {a != 0 : E(a) <= x}; E is recovered as the meet of all x
whose level contains a.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as _cartesian
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    EmptyArgs,
    FormatError,
    InconsistentTable,
    InvalidPresentation,
    LatticeMismatch,
    NotAProduct,
)
from .lattice import Lattice, product
from .upsets import UpwardClosedSet, Vector


def encode(lattice: Lattice, args: Sequence["int | str"]) -> Vector:
    """Multiplicity vector of an argument list."""
    v = [0] * len(lattice)
    for x in args:
        v[lattice.idx(x)] += 1
    return tuple(v)


def support_meet(lattice: Lattice, a: Sequence[int]) -> int:
    return lattice.meet_all(k for k, n in enumerate(a) if n)


class DenseTable:
    """E tabulated on the box [0, K]^m; any other vector is read after capping at K.

    Entry 0 (the zero vector) carries no meaning.
    """

    def __init__(self, lattice: Lattice, K: int, values: np.ndarray):
        self.lattice = lattice
        self.K = K
        self.m = len(lattice)
        self.shape = (K + 1,) * self.m
        self.values = np.asarray(values, dtype=np.int64).reshape(-1)
        self.strides = np.array([(K + 1) ** (self.m - 1 - i) for i in range(self.m)], dtype=np.int64)

    @cached_property
    def coords(self) -> np.ndarray:
        """(N, m) array of box vectors in lexicographic (C) order."""
        return np.indices(self.shape).reshape(self.m, -1).T.copy()

    def flat(self, vectors: np.ndarray) -> np.ndarray:
        return np.minimum(vectors, self.K) @ self.strides

    def at(self, a: Sequence[int]) -> int:
        return int(self.values[int(np.minimum(np.asarray(a), self.K) @ self.strides)])

    def shifted(self, delta: Sequence[int]) -> np.ndarray:
        """Flat indices of cap(a + delta) for every box vector a (clipped at 0)."""
        target = np.clip(self.coords + np.asarray(delta, dtype=np.int64), 0, self.K)
        return target @ self.strides


def _np_tables(lattice: Lattice):
    return (
        np.array(lattice.leq, dtype=bool),
        np.array(lattice.meet, dtype=np.int64),
        np.array(lattice.join, dtype=np.int64),
    )


class SequencePresentation:
    """Level family {x -> levels[x]} of an operation sequence."""

    def __init__(self, lattice: Lattice, levels: Sequence[UpwardClosedSet], validate: bool = True):
        m = len(lattice)
        if len(levels) != m:
            raise InvalidPresentation(f"expected {m} levels, got {len(levels)}")
        norm = []
        for lv in levels:
            if lv.m != m:
                raise InvalidPresentation(f"level of dimension {lv.m} on a lattice of size {m}")
            # levels live on nonzero vectors; the full set is stored as such
            if (0,) * m in lv:
                lv = UpwardClosedSet.nonzero(m)
            norm.append(lv)
        self.lattice = lattice
        self.levels: tuple[UpwardClosedSet, ...] = tuple(norm)
        if validate:
            self._validate()

    def _validate(self) -> None:
        l = self.lattice
        m = len(l)
        if self.levels[l.top] != UpwardClosedSet.nonzero(m):
            raise InvalidPresentation(
                "level of the top element must contain every nonzero vector",
                witness={"element": l.elements[l.top]},
            )
        for x in range(m):
            for y in range(m):
                if l.leq[x][y] and not self.levels[x].is_subset(self.levels[y]):
                    raise InvalidPresentation(
                        "levels are not monotone",
                        witness={"below": l.elements[x], "above": l.elements[y]},
                    )
                if y > x and self.levels[l.meet[x][y]] != self.levels[x] & self.levels[y]:
                    raise InvalidPresentation(
                        "levels are not meet-compatible",
                        witness={"pair": [l.elements[x], l.elements[y]]},
                    )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SequencePresentation):
            return NotImplemented
        return self.lattice == other.lattice and self.levels == other.levels

    def __hash__(self) -> int:
        return hash((self.lattice, self.levels))

    def __repr__(self) -> str:
        body = ", ".join(f"{self.lattice.elements[x]}: {list(lv.generators)}" for x, lv in enumerate(self.levels))
        return f"SequencePresentation({{{body}}})"

    def cap_degree(self) -> int:
        return max(lv.cap_degree() for lv in self.levels)

    @property
    def cap(self) -> int:
        """Box bound used for verification: at least 1."""
        return max(1, self.cap_degree())

    def value(self, a: Sequence[int]) -> int:
        if not any(a):
            raise EmptyArgs("E is undefined on the zero vector")
        l = self.lattice
        r = l.top
        for x, lv in enumerate(self.levels):
            if a in lv:
                r = l.meet[r][x]
        return r

    def evaluate(self, args: Sequence["int | str"]) -> int:
        if not args:
            raise EmptyArgs("evaluate needs at least one argument")
        return self.value(encode(self.lattice, args))

    def evaluate_many(self, vectors: np.ndarray) -> np.ndarray:
        """Vectorised E over an (N, m) array of nonzero vectors."""
        vectors = np.asarray(vectors, dtype=np.int64)
        _, meet, _ = _np_tables(self.lattice)
        out = np.full(len(vectors), self.lattice.top, dtype=np.int64)
        for x, lv in enumerate(self.levels):
            member = np.zeros(len(vectors), dtype=bool)
            for g in lv.generators:
                member |= (vectors >= np.asarray(g)).all(axis=1)
            out[member] = meet[out[member], x]
        return out

    @cached_property
    def dense(self) -> DenseTable:
        K = self.cap
        shape = (K + 1,) * len(self.lattice)
        coords = np.indices(shape).reshape(len(shape), -1).T
        return DenseTable(self.lattice, K, self.evaluate_many(coords))


@dataclass(frozen=True, eq=False)
class TruncatedTable:
    """Values of E on all nonzero a with sum(a) <= T; E is zero beyond T."""

    lattice: Lattice
    T: int
    values: Mapping[Vector, int]

    def __post_init__(self) -> None:
        l = self.lattice
        m = len(l)
        if self.T < 0:
            raise InconsistentTable("T must be nonnegative")
        vals = {}
        for a, x in self.values.items():
            a = tuple(int(n) for n in a)
            if len(a) != m or any(n < 0 for n in a) or not 1 <= sum(a) <= self.T:
                raise InconsistentTable(f"vector {list(a)} is outside the table domain", witness=list(a))
            bound = support_meet(l, a)
            if not l.leq[x][bound]:
                raise InconsistentTable(
                    f"value {l.elements[x]} at {list(a)} is not below the meet of its arguments",
                    witness={"vector": list(a), "value": l.elements[x]},
                )
            vals[a] = x
        for a in _simplex(m, self.T):
            if a not in vals:
                raise InconsistentTable(f"table has no value for {list(a)}", witness=list(a))
        object.__setattr__(self, "values", vals)

    def value(self, a: Sequence[int]) -> int:
        a = tuple(a)
        if not any(a):
            raise EmptyArgs("E is undefined on the zero vector")
        if sum(a) > self.T:
            return self.lattice.bottom
        return self.values[a]

    @property
    def cap(self) -> int:
        return self.T + 1

    @cached_property
    def dense(self) -> DenseTable:
        l = self.lattice
        K = self.T + 1
        shape = (K + 1,) * len(l)
        coords = np.indices(shape).reshape(len(shape), -1).T
        vals = np.full(len(coords), l.bottom, dtype=np.int64)
        for a, x in self.values.items():
            vals[int(np.asarray(a) @ np.array([(K + 1) ** (len(l) - 1 - i) for i in range(len(l))]))] = x
        vals[0] = l.top
        return DenseTable(l, K, vals)


def _simplex(m: int, T: int):
    """Nonzero vectors in N_0^m with entry sum <= T."""
    def rec(prefix, left, k):
        if k == m:
            if sum(prefix):
                yield tuple(prefix)
            return
        for n in range(left + 1):
            yield from rec(prefix + [n], left - n, k + 1)

    yield from rec([], T, 0)


def from_dense(table: DenseTable) -> SequencePresentation:
    """Presentation of a K-cap-invariant E; errors if some level is not upward closed."""
    l = table.lattice
    leq, _, _ = _np_tables(l)
    E = table.values
    coords = table.coords
    m, K = table.m, table.K
    levels = []
    for x in range(m):
        inside = leq[E, x]
        inside[0] = False
        for i in range(m):
            s = int(table.strides[i])
            can_step = coords[:, i] < K
            src = np.nonzero(can_step & inside)[0]
            broken = src[~inside[src + s]]
            if len(broken):
                a = coords[broken[0]]
                raise InconsistentTable(
                    "value set is not upward closed (E(a + e_i) is not below E(a))",
                    witness={"vector": a.tolist(), "index": i, "level": l.elements[x]},
                )
        minimal = inside.copy()
        for i in range(m):
            s = int(table.strides[i])
            has = coords[:, i] > 0
            pos = np.nonzero(has & minimal)[0]
            minimal[pos[inside[pos - s]]] = False
        levels.append(UpwardClosedSet(m, coords[minimal].tolist()))
    return SequencePresentation(l, levels)


def from_function(lattice: Lattice, fn: Callable[[Vector], int], K: int) -> SequencePresentation:
    """Presentation of a K-cap-invariant E given as a Python callable on vectors."""
    m = len(lattice)
    vals = [lattice.top if not any(a) else fn(a) for a in _cartesian(range(K + 1), repeat=m)]
    return from_dense(DenseTable(lattice, K, np.array(vals)))


def from_truncated_table(t: TruncatedTable) -> SequencePresentation:
    return from_dense(t.dense)


def zero_sequence(lattice: Lattice) -> SequencePresentation:
    nz = UpwardClosedSet.nonzero(len(lattice))
    return SequencePresentation(lattice, [nz] * len(lattice))


def meet_sequence(lattice: Lattice) -> SequencePresentation:
    """f_n(x_1, ..., x_n) = x_1 ^ ... ^ x_n (admissible on distributive lattices)."""
    return from_function(lattice, lambda a: support_meet(lattice, a), 1)


def b2_sequences(b2: Optional[Lattice] = None) -> dict[str, SequencePresentation]:
    """The zero sequence f, g (f_1 = id, zero above arity 1) and the meet sequence h."""
    from .lattice import catalog

    b2 = catalog("B2") if b2 is None else b2
    if len(b2) != 2:
        raise LatticeMismatch("B2 sequences need a two-element lattice")
    unit = {tuple(int(k == x) for k in range(2)): x for x in (b2.bottom, b2.top)}
    g = from_truncated_table(TruncatedTable(b2, 1, unit))
    return {"f": zero_sequence(b2), "g": g, "h": meet_sequence(b2)}


def _same_lattice(p: SequencePresentation, q: SequencePresentation) -> None:
    if p.lattice != q.lattice:
        raise LatticeMismatch("sequences live on different lattices")


def leq_sequences(p: SequencePresentation, q: SequencePresentation) -> bool:
    """p below q pointwise, decided by reverse containment of levels."""
    _same_lattice(p, q)
    return all(q.levels[x].is_subset(p.levels[x]) for x in range(len(p.lattice)))


def product_sequence(p1: SequencePresentation, p2: SequencePresentation) -> SequencePresentation:
    """Componentwise sequence on L1 x L2: f_n((a_i, b_i)) = (f1_n(a), f2_n(b))."""
    l = product(p1.lattice, p2.lattice)
    m2 = len(p2.lattice)
    proj1 = [k // m2 for k in range(len(l))]
    proj2 = [k % m2 for k in range(len(l))]
    pulled1 = [lv.pullback(proj1) for lv in p1.levels]
    pulled2 = [lv.pullback(proj2) for lv in p2.levels]
    levels = [pulled1[k // m2] & pulled2[k % m2] for k in range(len(l))]
    return SequencePresentation(l, levels)


def project_sequence(p: SequencePresentation, side: int) -> SequencePresentation:
    """Restrict to arguments of the form (x, 0) (side 1) or (0, y) (side 2)."""
    l = p.lattice
    if l.factors is None:
        raise NotAProduct("sequence does not live on a recorded product lattice")
    l1, l2 = l.factors
    m2 = len(l2)
    if side == 1:
        coords = [k * m2 + l2.bottom for k in range(len(l1))]
        levels = [p.levels[x * m2 + l2.top].restrict(coords) for x in range(len(l1))]
        return SequencePresentation(l1, levels)
    if side == 2:
        coords = [l1.bottom * m2 + k for k in range(m2)]
        levels = [p.levels[l1.top * m2 + y].restrict(coords) for y in range(m2)]
        return SequencePresentation(l2, levels)
    raise ValueError("side must be 1 or 2")


def relabel(p: SequencePresentation, target: Lattice, mapping: Sequence[int]) -> SequencePresentation:
    """Transport along an isomorphism given as mapping[source index] = target index."""
    if sorted(mapping) != list(range(len(target))) or len(mapping) != len(p.lattice):
        raise LatticeMismatch("mapping is not a bijection onto the target lattice")
    src = p.lattice
    for x in range(len(src)):
        for y in range(len(src)):
            if src.leq[x][y] != target.leq[mapping[x]][mapping[y]]:
                raise LatticeMismatch("mapping is not an order isomorphism")
    levels: list[Optional[UpwardClosedSet]] = [None] * len(target)
    for x, lv in enumerate(p.levels):
        levels[mapping[x]] = lv.permute(mapping, len(target))
    return SequencePresentation(target, levels)


@dataclass(frozen=True)
class CentralSeries:
    terms: tuple[int, ...]
    nilpotent: bool

    @property
    def steps(self) -> Optional[int]:
        """Number of commutator steps until the series reaches bottom."""
        return len(self.terms) - 1 if self.nilpotent else None


def lower_central_series(p: SequencePresentation) -> CentralSeries:
    """gamma_1 = 1, gamma_n = f_2(1, gamma_{n-1}); stops at 0 or at the first repeat."""
    l = p.lattice
    terms = [l.top]
    while terms[-1] != l.bottom:
        nxt = p.evaluate([l.top, terms[-1]])
        if nxt == terms[-1]:
            return CentralSeries(tuple(terms), False)
        terms.append(nxt)
    return CentralSeries(tuple(terms), True)


def vanishing_arity(p: SequencePresentation) -> Optional[int]:
    """Least N with f_N(1, ..., 1) = 0, or None if f_n(1, ..., 1) never vanishes."""
    l = p.lattice
    # E(n * e_top) is constant for n >= cap
    for n in range(1, p.cap + 1):
        v = [0] * len(l)
        v[l.top] = n
        if p.value(v) == l.bottom:
            return n
    return None


def table_from_values(lattice: Lattice, T: int, rows: Sequence[tuple[Sequence[int], "int | str"]]) -> TruncatedTable:
    vals = {}
    for vec, x in rows:
        key = tuple(int(n) for n in vec)
        if key in vals:
            raise FormatError(f"duplicate table row for {list(key)}")
        vals[key] = lattice.idx(x)
    return TruncatedTable(lattice, T, vals)
