from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hcseq.errors import DimensionMismatch, FormatError
from hcseq.upsets import UpwardClosedSet, box, cap_vector, dominates, minimal_elements


def upsets(m, hi=3):
    vec = st.tuples(*[st.integers(0, hi)] * m)
    return st.lists(vec, max_size=5).map(lambda gs: UpwardClosedSet(m, gs))


def members(u, c):
    """Brute-force membership on the box [0, c]^m, straight from the generators."""
    return {a for a in box(u.m, c) if any(all(x >= y for x, y in zip(a, g)) for g in u.generators)}


def test_dominance_and_minimal_elements():
    assert dominates((2, 1), (1, 1))
    assert not dominates((2, 0), (1, 1))
    assert minimal_elements([(2, 1), (1, 1), (0, 3), (1, 1)]) == [(0, 3), (1, 1)]


@given(upsets(3))
def test_generators_form_an_antichain(u):
    for g, h in product(u.generators, repeat=2):
        assert g == h or not dominates(g, h)


@given(upsets(3), upsets(3))
def test_union_and_intersection_are_setwise(u, v):
    assert members(u | v, 5) == members(u, 5) | members(v, 5)
    assert members(u & v, 5) == members(u, 5) & members(v, 5)
    assert (u <= v) == (members(u, 5) <= members(v, 5))


@given(upsets(3), st.integers(0, 5))
def test_membership_is_cap_invariant(u, extra):
    c = max(u.cap_degree(), 1) + extra
    for a in box(3, c + 2):
        assert (a in u) == (cap_vector(a, c) in u)


@given(upsets(2), st.lists(st.integers(0, 1), min_size=3, max_size=3))
def test_pullback_matches_pushforward(u, proj):
    pulled = u.pullback(proj)
    for a in box(3, 4):
        push = [0, 0]
        for k, y in enumerate(proj):
            push[y] += a[k]
        assert (a in pulled) == (tuple(push) in u)


@given(upsets(3))
def test_restrict_and_permute(u):
    r = u.restrict([2, 0])
    for a in box(2, 4):
        assert (a in r) == ((a[1], 0, a[0]) in u)
    p = u.permute([1, 2, 0])
    for a in box(3, 4):
        assert (a in u) == ((a[2], a[0], a[1]) in p)


@given(upsets(3))
@settings(max_examples=50)
def test_json_round_trip(u):
    assert UpwardClosedSet.from_json(u.to_json()) == u


def test_special_sets_and_errors():
    assert (0, 0) in UpwardClosedSet.full(2)
    nz = UpwardClosedSet.nonzero(2)
    assert (0, 0) not in nz and (0, 1) in nz
    assert UpwardClosedSet(2).is_empty()
    with pytest.raises(DimensionMismatch):
        UpwardClosedSet(2, [(1, 0, 0)])
    with pytest.raises(DimensionMismatch):
        (1, 1, 1) in nz
    with pytest.raises(FormatError):
        UpwardClosedSet(2, [(-1, 0)])
    with pytest.raises(FormatError):
        UpwardClosedSet.from_json({"m": 2})
