"""Finite lattices given by explicit order, meet and join tables.

Elements are addressed by their position in ``Lattice.elements``; that index
order is the coordinate order used by every vector encoding downstream.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as _cartesian
from typing import Iterable, Optional, Sequence

from .errors import (
    FormatError,
    NotALattice,
    NotAPoset,
    NotComparable,
    NotModular,
    StronglySplits,
    TrivialLattice,
    UnknownName,
)


@dataclass(frozen=True, eq=False)
class Lattice:
    elements: tuple[str, ...]
    leq: tuple[tuple[bool, ...], ...]
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    bottom: int
    top: int
    # set by product(); (left, right) with index = i * len(right) + j
    factors: Optional[tuple["Lattice", "Lattice"]] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.elements == other.elements and self.leq == other.leq

    def __hash__(self) -> int:
        return hash((self.elements, self.leq))

    def __repr__(self) -> str:
        return f"Lattice({list(self.elements)!r})"

    @cached_property
    def index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.elements)}

    def idx(self, x: "int | str") -> int:
        if isinstance(x, int):
            if not 0 <= x < len(self):
                raise FormatError(f"element index {x} out of range")
            return x
        try:
            return self.index[x]
        except KeyError:
            raise FormatError(f"unknown element {x!r}") from None

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.leq[x][y]

    @cached_property
    def down(self) -> tuple[int, ...]:
        """Bitmask of the principal ideal of each element."""
        m = len(self)
        return tuple(sum(1 << y for y in range(m) if self.leq[y][x]) for x in range(m))

    @cached_property
    def up(self) -> tuple[int, ...]:
        m = len(self)
        return tuple(sum(1 << y for y in range(m) if self.leq[x][y]) for x in range(m))

    @cached_property
    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        m = len(self)
        out = []
        for x in range(m):
            below = [y for y in range(m) if self.lt(y, x)]
            out.append(tuple(y for y in below if not any(self.lt(y, z) and self.lt(z, x) for z in below)))
        return tuple(out)

    @cached_property
    def upper_covers(self) -> tuple[tuple[int, ...], ...]:
        m = len(self)
        return tuple(tuple(y for y in range(m) if x in self.lower_covers[y]) for x in range(m))

    @cached_property
    def height(self) -> tuple[int, ...]:
        """Length of the longest chain from bottom to each element."""
        h = [0] * len(self)
        for x in sorted(range(len(self)), key=lambda x: bin(self.down[x]).count("1")):
            h[x] = max((h[y] + 1 for y in self.lower_covers[x]), default=0)
        return tuple(h)

    @cached_property
    def join_irreducibles(self) -> tuple[int, ...]:
        return tuple(x for x in range(len(self)) if len(self.lower_covers[x]) == 1)

    def meet_all(self, xs: Iterable[int]) -> int:
        r = self.top
        for x in xs:
            r = self.meet[r][x]
        return r

    def join_all(self, xs: Iterable[int]) -> int:
        r = self.bottom
        for x in xs:
            r = self.join[r][x]
        return r

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        """Elements bottom-up: by height, then index."""
        return tuple(sorted(range(len(self)), key=lambda x: (self.height[x], x)))

    def label(self, x: int) -> str:
        return self.elements[x]


def _closure(m: int, pairs: Iterable[tuple[int, int]]) -> list[int]:
    reach = [1 << i for i in range(m)]
    for a, b in pairs:
        reach[a] |= 1 << b
    for k in range(m):
        bit = 1 << k
        rk = reach[k]
        for i in range(m):
            if reach[i] & bit:
                reach[i] |= rk
    return reach


def _from_leq(elements: Sequence[str], reach: Sequence[int], factors=None) -> Lattice:
    """Compute meet/join tables from an up-set bitmask per element."""
    m = len(elements)
    for i in range(m):
        for j in range(i + 1, m):
            if reach[i] >> j & 1 and reach[j] >> i & 1:
                raise NotAPoset(
                    f"{elements[i]!r} and {elements[j]!r} are mutually below each other",
                    witness=[elements[i], elements[j]],
                )
    up = list(reach)
    down = [sum(1 << y for y in range(m) if up[y] >> x & 1) for x in range(m)]

    def bound(sets, a, b):
        common = sets[a] & sets[b]
        for g in range(m):
            if common >> g & 1 and sets[g] == common:
                return g
        return None

    join = [[0] * m for _ in range(m)]
    meet = [[0] * m for _ in range(m)]
    missing = []
    for a in range(m):
        for b in range(a, m):
            j, mt = bound(up, a, b), bound(down, a, b)
            if j is None or mt is None:
                missing.append((a, b, j is None, mt is None))
                continue
            join[a][b] = join[b][a] = j
            meet[a][b] = meet[b][a] = mt
    if missing:
        # a pair lacking only one bound is the more telling witness
        a, b, no_join, no_meet = min(missing, key=lambda t: (t[2] and t[3], t[0], t[1]))
        what = "join" if no_join else "meet"
        raise NotALattice(
            f"{elements[a]!r} and {elements[b]!r} have no {what}",
            witness={"pair": [elements[a], elements[b]], "missing": what},
        )
    bottom = 0
    top = 0
    for x in range(m):
        bottom = meet[bottom][x]
        top = join[top][x]
    leq = tuple(tuple(bool(up[x] >> y & 1) for y in range(m)) for x in range(m))
    return Lattice(
        elements=tuple(elements),
        leq=leq,
        meet=tuple(map(tuple, meet)),
        join=tuple(map(tuple, join)),
        bottom=bottom,
        top=top,
        factors=factors,
    )


def build_lattice(elements: Sequence[str], order_pairs: Iterable[tuple[str, str]]) -> Lattice:
    """Build a lattice from element ids and any generating set of order pairs.

    The order is the reflexive-transitive closure of ``order_pairs``.
    """
    elements = [str(e) for e in elements]
    if not elements:
        raise FormatError("a lattice needs at least one element")
    if len(set(elements)) != len(elements):
        raise FormatError("duplicate element ids")
    pos = {e: i for i, e in enumerate(elements)}
    pairs = []
    for pair in order_pairs:
        try:
            a, b = pair
            pairs.append((pos[str(a)], pos[str(b)]))
        except KeyError as exc:
            raise FormatError(f"order pair mentions unknown element {exc.args[0]!r}") from None
        except (TypeError, ValueError):
            raise FormatError(f"malformed order pair {pair!r}") from None
    return _from_leq(elements, _closure(len(elements), pairs))


def cover_pairs(l: Lattice) -> list[tuple[str, str]]:
    return [(l.elements[y], l.elements[x]) for x in range(len(l)) for y in l.lower_covers[x]]


def axiom_violations(l: Lattice) -> list[str]:
    """Exhaustively re-verify the lattice laws on the stored tables."""
    m = len(l)
    le, mt, jn = l.leq, l.meet, l.join
    bad = []
    for x, y, z in _cartesian(range(m), repeat=3):
        if le[x][y] and le[y][z] and not le[x][z]:
            bad.append(f"transitivity fails at {l.elements[x]}, {l.elements[y]}, {l.elements[z]}")
        if mt[x][mt[y][z]] != mt[mt[x][y]][z] or jn[x][jn[y][z]] != jn[jn[x][y]][z]:
            bad.append(f"associativity fails at {l.elements[x]}, {l.elements[y]}, {l.elements[z]}")
        if le[z][x] and le[z][y] and not le[z][mt[x][y]]:
            bad.append(f"meet is not greatest at {l.elements[x]}, {l.elements[y]}")
        if le[x][z] and le[y][z] and not le[jn[x][y]][z]:
            bad.append(f"join is not least at {l.elements[x]}, {l.elements[y]}")
        if len(bad) > 20:
            break
    for x in range(m):
        if not le[x][x] or mt[x][x] != x or jn[x][x] != x:
            bad.append(f"idempotence/reflexivity fails at {l.elements[x]}")
        if not (le[l.bottom][x] and le[x][l.top]):
            bad.append(f"{l.elements[x]} is outside [bottom, top]")
        for y in range(m):
            if x != y and le[x][y] and le[y][x]:
                bad.append(f"antisymmetry fails at {l.elements[x]}, {l.elements[y]}")
            if mt[x][y] != mt[y][x] or jn[x][y] != jn[y][x]:
                bad.append(f"commutativity fails at {l.elements[x]}, {l.elements[y]}")
            if mt[x][jn[x][y]] != x or jn[x][mt[x][y]] != x:
                bad.append(f"absorption fails at {l.elements[x]}, {l.elements[y]}")
            if not (le[mt[x][y]][x] and le[mt[x][y]][y] and le[x][jn[x][y]] and le[y][jn[x][y]]):
                bad.append(f"bounds fail at {l.elements[x]}, {l.elements[y]}")
    return bad


def modularity_witness(l: Lattice) -> Optional[tuple[int, int, int]]:
    """First (x, y, z) with x <= z and x v (y ^ z) != (x v y) ^ z, or None."""
    m = len(l)
    for x in range(m):
        for z in range(m):
            if not l.leq[x][z]:
                continue
            for y in range(m):
                if l.join[x][l.meet[y][z]] != l.meet[l.join[x][y]][z]:
                    return (x, y, z)
    return None


def is_modular(l: Lattice) -> bool:
    return modularity_witness(l) is None


def _nontrivial(l: Lattice) -> None:
    if len(l) < 2:
        raise TrivialLattice("the one-element lattice has no atoms, coatoms or splitting pairs")


def atoms(l: Lattice) -> list[int]:
    _nontrivial(l)
    return list(l.upper_covers[l.bottom])


def coatoms(l: Lattice) -> list[int]:
    _nontrivial(l)
    return list(l.lower_covers[l.top])


@dataclass(frozen=True)
class SplittingPair:
    delta: int
    epsilon: int
    strong: bool

    def labels(self, l: Lattice) -> tuple[str, str]:
        return (l.elements[self.delta], l.elements[self.epsilon])


def splitting_pairs(l: Lattice) -> list[SplittingPair]:
    """All (delta, epsilon) with every element >= epsilon or <= delta.

    Ordered lexicographically by (delta, epsilon) index.
    """
    _nontrivial(l)
    full = (1 << len(l)) - 1
    out = []
    for d in range(len(l)):
        if d == l.top:
            continue
        for e in range(len(l)):
            if e == l.bottom:
                continue
            if l.up[e] | l.down[d] == full:
                out.append(SplittingPair(d, e, l.leq[e][d]))
    return out


def splits_strongly(l: Lattice) -> Optional[SplittingPair]:
    for p in splitting_pairs(l):
        if p.strong:
            return p
    return None


def interval(l: Lattice, a: int, b: int) -> Lattice:
    """The sublattice [a, b], keeping element ids and relative index order."""
    if not l.leq[a][b]:
        raise NotComparable(f"{l.elements[a]!r} is not below {l.elements[b]!r}")
    keep = [x for x in range(len(l)) if l.leq[a][x] and l.leq[x][b]]
    pos = {x: i for i, x in enumerate(keep)}
    return Lattice(
        elements=tuple(l.elements[x] for x in keep),
        leq=tuple(tuple(l.leq[x][y] for y in keep) for x in keep),
        meet=tuple(tuple(pos[l.meet[x][y]] for y in keep) for x in keep),
        join=tuple(tuple(pos[l.join[x][y]] for y in keep) for x in keep),
        bottom=pos[a],
        top=pos[b],
    )


def product(l1: Lattice, l2: Lattice) -> Lattice:
    """Componentwise product; element (i, j) sits at index i * len(l2) + j."""
    m2 = len(l2)
    pairs = [(i, j) for i in range(len(l1)) for j in range(m2)]
    return Lattice(
        elements=tuple(f"({l1.elements[i]},{l2.elements[j]})" for i, j in pairs),
        leq=tuple(tuple(l1.leq[i][k] and l2.leq[j][n] for k, n in pairs) for i, j in pairs),
        meet=tuple(tuple(l1.meet[i][k] * m2 + l2.meet[j][n] for k, n in pairs) for i, j in pairs),
        join=tuple(tuple(l1.join[i][k] * m2 + l2.join[j][n] for k, n in pairs) for i, j in pairs),
        bottom=l1.bottom * m2 + l2.bottom,
        top=l1.top * m2 + l2.top,
        factors=(l1, l2),
    )


def projection(l: Lattice, side: int) -> list[int]:
    """Coordinate map of a recorded product onto factor ``side`` (1 or 2)."""
    from .errors import NotAProduct

    if l.factors is None:
        raise NotAProduct("lattice is not a recorded product")
    m2 = len(l.factors[1])
    if side == 1:
        return [x // m2 for x in range(len(l))]
    if side == 2:
        return [x % m2 for x in range(len(l))]
    raise ValueError("side must be 1 or 2")


def _signature(l: Lattice, x: int) -> tuple[int, int, int, int]:
    return (
        l.height[x],
        len(l.lower_covers[x]),
        len(l.upper_covers[x]),
        bin(l.down[x]).count("1"),
    )


def is_isomorphic(l1: Lattice, l2: Lattice) -> Optional[list[int]]:
    """Return an order isomorphism ``f`` (as a list, f[x] in l2) or None."""
    m = len(l1)
    if m != len(l2):
        return None
    sig1 = [_signature(l1, x) for x in range(m)]
    sig2 = [_signature(l2, y) for y in range(m)]
    if sorted(sig1) != sorted(sig2):
        return None
    order = sorted(range(m), key=lambda x: (l1.height[x], x))
    f = [-1] * m
    used = [False] * m

    def extend(k: int) -> bool:
        if k == m:
            return True
        x = order[k]
        for y in range(m):
            if used[y] or sig2[y] != sig1[x]:
                continue
            if all(
                l1.leq[u][x] == l2.leq[f[u]][y] and l1.leq[x][u] == l2.leq[y][f[u]]
                for u in order[:k]
            ):
                f[x] = y
                used[y] = True
                if extend(k + 1):
                    return True
                used[y] = False
        f[x] = -1
        return False

    return f if extend(0) else None


@dataclass(frozen=True)
class Decomposition:
    """``source`` is isomorphic to ``core`` x B2^b2_power via ``iso``.

    ``iso[x]`` is ``(index of x's core component in core, bit tuple)``.
    """

    source: Lattice
    core: Lattice
    b2_power: int
    iso: tuple[tuple[int, tuple[int, ...]], ...]
    steps: tuple[SplittingPair, ...] = ()

    def image(self, x: int) -> tuple[int, tuple[int, ...]]:
        return self.iso[x]

    def verify(self) -> list[str]:
        """Check bijectivity and preservation of meets and joins exhaustively."""
        bad = []
        if len(set(self.iso)) != len(self.source) or len(self.source) != len(self.core) * 2**self.b2_power:
            bad.append("iso is not a bijection")
        c = self.core
        for x in range(len(self.source)):
            for y in range(len(self.source)):
                (cx, bx), (cy, by) = self.iso[x], self.iso[y]
                mt = (c.meet[cx][cy], tuple(p & q for p, q in zip(bx, by)))
                jn = (c.join[cx][cy], tuple(p | q for p, q in zip(bx, by)))
                if self.iso[self.source.meet[x][y]] != mt:
                    bad.append(f"meet not preserved at {self.source.elements[x]}, {self.source.elements[y]}")
                if self.iso[self.source.join[x][y]] != jn:
                    bad.append(f"join not preserved at {self.source.elements[x]}, {self.source.elements[y]}")
        return bad


def decompose(l: Lattice) -> Decomposition:
    """Split off B2 factors until the remaining interval does not split.

    Each round takes the least splitting pair (a, b), the least atom
    eps <= b and the least coatom delta >= a, and uses
    x -> (x ^ delta, x ^ eps) to peel off [0, eps] ~ B2; it then continues
    on [0, delta].
    """
    w = modularity_witness(l)
    if w is not None:
        raise NotModular(
            "decomposition requires a modular lattice",
            witness=[l.elements[i] for i in w],
        )
    if len(l) > 1:
        strong = splits_strongly(l)
        if strong is not None:
            raise StronglySplits(
                "lattice splits strongly; no M x B2^n decomposition",
                witness=list(strong.labels(l)),
            )
    current = l
    # element of current (as an index into l) reached by each source element
    reach = list(range(len(l)))
    bits: list[list[int]] = [[] for _ in range(len(l))]
    steps = []
    while len(current) > 1:
        pairs = splitting_pairs(current)
        if not pairs:
            break
        a, b = pairs[0].delta, pairs[0].epsilon
        eps = min(x for x in atoms(current) if current.leq[x][b])
        delta = min(x for x in coatoms(current) if current.leq[a][x])
        steps.append(SplittingPair(l.index[current.elements[delta]], l.index[current.elements[eps]], False))
        d_src = l.index[current.elements[delta]]
        e_src = l.index[current.elements[eps]]
        for x in range(len(l)):
            y = reach[x]
            bits[x].append(1 if l.leq[e_src][y] else 0)
            reach[x] = l.meet[y][d_src]
        current = interval(current, current.bottom, delta)
    core_pos = {l.index[e]: i for i, e in enumerate(current.elements)}
    iso = tuple((core_pos[reach[x]], tuple(bits[x])) for x in range(len(l)))
    return Decomposition(source=l, core=current, b2_power=len(steps), iso=iso, steps=tuple(steps))


# ---------------------------------------------------------------- catalog

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def chain(n: int) -> Lattice:
    if n < 1:
        raise UnknownName("chains need at least one element")
    if n == 1:
        names = ["0"]
    elif n == 3:
        names = ["0", "θ", "1"]
    else:
        names = ["0"] + [f"θ{i}" for i in range(1, n - 1)] + ["1"]
    return build_lattice(names, zip(names, names[1:]))


def diamond(k: int) -> Lattice:
    """Height-2 lattice with ``k`` atoms."""
    if k < 1:
        raise UnknownName("M_k needs k >= 1")
    mids = list(_LETTERS[:k]) if k <= len(_LETTERS) else [f"a{i}" for i in range(1, k + 1)]
    names = ["0", *mids, "1"]
    return build_lattice(names, [("0", x) for x in mids] + [(x, "1") for x in mids])


def pentagon() -> Lattice:
    return build_lattice(["0", "a", "b", "c", "1"], [("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")])


CATALOG_NAMES = ("ONE", "B2", "M2", "M3", "Mk", "Cn", "N5")


def catalog(name: str) -> Lattice:
    """Built-in lattices: ONE, B2, N5, M<k>, C<n>, and products joined by 'x'."""
    name = name.strip()
    if "x" in name:
        parts = name.split("x")
        out = catalog(parts[0])
        for p in parts[1:]:
            out = product(out, catalog(p))
        return out
    if name == "ONE":
        return chain(1)
    if name == "B2":
        return chain(2)
    if name == "N5":
        return pentagon()
    m = re.fullmatch(r"([MC])(\d+)", name)
    if m:
        n = int(m.group(2))
        return diamond(n) if m.group(1) == "M" else chain(n)
    raise UnknownName(f"unknown catalog lattice {name!r}", witness=name)


# ---------------------------------------------------------------- JSON

def lattice_to_json(l: Lattice) -> dict:
    return {"elements": list(l.elements), "leq": [list(p) for p in cover_pairs(l)]}


def lattice_from_json(data: object) -> Lattice:
    if isinstance(data, str):
        return catalog(data)
    if not isinstance(data, dict) or "elements" not in data:
        raise FormatError("lattice JSON must be an object with 'elements' and 'leq'")
    elements = data["elements"]
    leq = data.get("leq", [])
    if not isinstance(elements, list) or not isinstance(leq, list):
        raise FormatError("'elements' and 'leq' must be arrays")
    return build_lattice(elements, [tuple(p) if isinstance(p, list) else p for p in leq])
