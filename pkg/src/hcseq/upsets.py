"""Upward closed subsets of N_0^m, stored as their antichain of minimal elements."""

from __future__ import annotations

from itertools import product as _cartesian
from typing import Iterable, Sequence

from .errors import DimensionMismatch, FormatError

Vector = tuple[int, ...]


def dominates(a: Sequence[int], b: Sequence[int]) -> bool:
    """a >= b componentwise."""
    return all(x >= y for x, y in zip(a, b))


def minimal_elements(vs: Iterable[Sequence[int]]) -> list[Vector]:
    """Minimal elements of a finite set of vectors, sorted lexicographically."""
    # sorting by total size puts every vector after all vectors below it
    cands = sorted(set(map(tuple, vs)), key=lambda v: (sum(v), v))
    keep: list[Vector] = []
    for v in cands:
        if not any(dominates(v, g) for g in keep):
            keep.append(v)
    return sorted(keep)


def cap_vector(a: Sequence[int], c: int) -> Vector:
    return tuple(min(x, c) for x in a)


class UpwardClosedSet:
    __slots__ = ("m", "generators", "_hash")

    def __init__(self, m: int, generators: Iterable[Sequence[int]] = ()):
        gens = [tuple(int(x) for x in g) for g in generators]
        for g in gens:
            if len(g) != m:
                raise DimensionMismatch(f"generator {g} does not have length {m}")
            if any(x < 0 for x in g):
                raise FormatError(f"generator {g} has a negative entry")
        self.m = m
        self.generators: tuple[Vector, ...] = tuple(minimal_elements(gens))
        self._hash = hash((m, self.generators))

    @classmethod
    def full(cls, m: int) -> "UpwardClosedSet":
        return cls(m, [(0,) * m])

    @classmethod
    def nonzero(cls, m: int) -> "UpwardClosedSet":
        """N_0^m without the zero vector."""
        return cls(m, [tuple(int(i == k) for i in range(m)) for k in range(m)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UpwardClosedSet):
            return NotImplemented
        return self.m == other.m and self.generators == other.generators

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"UpwardClosedSet({self.m}, {list(self.generators)})"

    def _same_dim(self, other: "UpwardClosedSet") -> None:
        if self.m != other.m:
            raise DimensionMismatch(f"dimensions {self.m} and {other.m} differ")

    def __contains__(self, a: Sequence[int]) -> bool:
        if len(a) != self.m:
            raise DimensionMismatch(f"vector of length {len(a)} in dimension {self.m}")
        return any(dominates(a, g) for g in self.generators)

    contains = __contains__

    def union(self, other: "UpwardClosedSet") -> "UpwardClosedSet":
        self._same_dim(other)
        return UpwardClosedSet(self.m, self.generators + other.generators)

    def intersect(self, other: "UpwardClosedSet") -> "UpwardClosedSet":
        self._same_dim(other)
        return UpwardClosedSet(
            self.m,
            (tuple(map(max, g, h)) for g in self.generators for h in other.generators),
        )

    __or__ = union
    __and__ = intersect

    def is_subset(self, other: "UpwardClosedSet") -> bool:
        self._same_dim(other)
        return all(g in other for g in self.generators)

    __le__ = is_subset

    def cap_degree(self) -> int:
        return max((max(g) for g in self.generators), default=0)

    def is_empty(self) -> bool:
        return not self.generators

    def permute(self, target: Sequence[int], m: int | None = None) -> "UpwardClosedSet":
        """Move coordinate k to position ``target[k]``."""
        m = self.m if m is None else m
        out = []
        for g in self.generators:
            v = [0] * m
            for k, x in enumerate(g):
                v[target[k]] += x
            out.append(v)
        return UpwardClosedSet(m, out)

    def pullback(self, proj: Sequence[int]) -> "UpwardClosedSet":
        """{a in N_0^len(proj) : pushforward of a along proj lies in self}.

        ``proj[k]`` is the coordinate of self that new coordinate k maps to.
        """
        fibers: list[list[int]] = [[] for _ in range(self.m)]
        for k, y in enumerate(proj):
            fibers[y].append(k)
        out = []
        for g in self.generators:
            choices = []
            for y, n in enumerate(g):
                if n and not fibers[y]:
                    break
                choices.append(list(_distributions(n, fibers[y])))
            else:
                for parts in _cartesian(*choices):
                    v = [0] * len(proj)
                    for part in parts:
                        for k, x in part:
                            v[k] += x
                    out.append(v)
        return UpwardClosedSet(len(proj), out)

    def restrict(self, coords: Sequence[int]) -> "UpwardClosedSet":
        """{a in N_0^len(coords) : the vector placing a_k at coords[k] lies in self}."""
        inside = set(coords)
        out = []
        for g in self.generators:
            if all(x == 0 or k in inside for k, x in enumerate(g)):
                out.append([g[c] for c in coords])
        return UpwardClosedSet(len(coords), out)

    def to_json(self) -> dict:
        return {"m": self.m, "generators": [list(g) for g in self.generators]}

    @classmethod
    def from_json(cls, data: object) -> "UpwardClosedSet":
        if not isinstance(data, dict) or "m" not in data or "generators" not in data:
            raise FormatError("upward closed set JSON needs 'm' and 'generators'")
        try:
            return cls(int(data["m"]), data["generators"])
        except TypeError:
            raise FormatError("generators must be arrays of integers") from None


def from_generators(m: int, vs: Iterable[Sequence[int]]) -> UpwardClosedSet:
    return UpwardClosedSet(m, vs)


def _distributions(n: int, slots: list[int]):
    """All ways to put n indistinguishable items into ``slots``."""
    if n == 0:
        yield ()
        return
    if len(slots) == 1:
        yield ((slots[0], n),)
        return
    head, rest = slots[0], slots[1:]
    for k in range(n, -1, -1):
        for tail in _distributions(n - k, rest):
            yield (((head, k),) if k else ()) + tail


def box(m: int, c: int):
    return _cartesian(range(c + 1), repeat=m)
