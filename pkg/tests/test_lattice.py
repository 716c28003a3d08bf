import itertools

import pytest

from hcseq.errors import NotALattice, NotAPoset, NotModular, StronglySplits, TrivialLattice, UnknownName
from hcseq.lattice import (
    atoms,
    axiom_violations,
    build_lattice,
    catalog,
    chain,
    coatoms,
    decompose,
    interval,
    is_isomorphic,
    is_modular,
    lattice_from_json,
    lattice_to_json,
    modularity_witness,
    product,
    projection,
    splits_strongly,
    splitting_pairs,
)

from naive import naive_join, naive_meet, naive_splitting_pairs

CATALOG = ["ONE", "B2", "C3", "C4", "M2", "M3", "M4", "N5", "B2xC3", "B2xB2xB2"]


@pytest.mark.parametrize("name", CATALOG)
def test_tables_match_order_relation(name):
    l = catalog(name)
    assert axiom_violations(l) == []
    for x, y in itertools.product(range(len(l)), repeat=2):
        assert l.meet[x][y] == naive_meet(l, x, y)
        assert l.join[x][y] == naive_join(l, x, y)


@pytest.mark.parametrize("name", [n for n in CATALOG if n != "ONE"])
def test_splitting_pairs_match_definition(name):
    l = catalog(name)
    got = [(p.delta, p.epsilon, p.strong) for p in splitting_pairs(l)]
    assert got == naive_splitting_pairs(l)


def test_build_lattice_rejects_cycle():
    with pytest.raises(NotAPoset):
        build_lattice(["0", "a", "1"], [("0", "a"), ("a", "0"), ("a", "1")])


def test_build_lattice_reports_missing_join():
    with pytest.raises(NotALattice) as exc:
        build_lattice(["0", "a", "b", "1"], [("0", "a"), ("0", "b")])
    assert exc.value.witness == {"pair": ["a", "b"], "missing": "join"}


def test_two_maximal_elements_under_common_atoms_is_not_a_lattice():
    # a, b both above c, d: no least upper bound of c and d
    with pytest.raises(NotALattice):
        build_lattice(["0", "c", "d", "a", "b", "1"],
                      [("0", "c"), ("0", "d"), ("c", "a"), ("d", "a"), ("c", "b"), ("d", "b"), ("a", "1"), ("b", "1")])


def test_modularity():
    assert is_modular(catalog("M3"))
    assert is_modular(catalog("B2xC3"))
    l = catalog("N5")
    x, y, z = modularity_witness(l)
    assert l.leq[x][z]
    assert l.join[x][l.meet[y][z]] != l.meet[l.join[x][y]][z]


def test_atoms_and_coatoms():
    l = catalog("M3")
    assert [l.elements[x] for x in atoms(l)] == ["a", "b", "c"]
    assert [l.elements[x] for x in coatoms(l)] == ["a", "b", "c"]
    with pytest.raises(TrivialLattice):
        atoms(catalog("ONE"))


def test_spec_splitting_examples():
    c3 = catalog("C3")
    labels = [(p.labels(c3), p.strong) for p in splitting_pairs(c3)]
    assert (("θ", "θ"), True) in labels
    assert splits_strongly(c3).labels(c3) == ("θ", "θ")
    assert splitting_pairs(catalog("M3")) == []
    m2 = catalog("M2")
    assert {p.labels(m2) for p in splitting_pairs(m2)} == {("a", "b"), ("b", "a")}
    assert splits_strongly(m2) is None


def test_product_and_projection_are_homomorphisms():
    l1, l2 = catalog("B2"), catalog("C3")
    p = product(l1, l2)
    assert len(p) == 6 and axiom_violations(p) == []
    for side, factor in ((1, l1), (2, l2)):
        pr = projection(p, side)
        for x, y in itertools.product(range(len(p)), repeat=2):
            assert pr[p.meet[x][y]] == factor.meet[pr[x]][pr[y]]
            assert pr[p.join[x][y]] == factor.join[pr[x]][pr[y]]


def test_interval_keeps_ids():
    l = catalog("C4")
    sub = interval(l, l.idx("θ1"), l.top)
    assert sub.elements == ("θ1", "θ2", "1")


def test_isomorphism():
    m2, bb = catalog("M2"), catalog("B2xB2")
    iso = is_isomorphic(m2, bb)
    assert iso is not None
    for x, y in itertools.product(range(4), repeat=2):
        assert m2.leq[x][y] == bb.leq[iso[x]][iso[y]]
    assert is_isomorphic(catalog("M3"), catalog("C5")) is None


@pytest.mark.parametrize("name,core,power", [("M2", 1, 2), ("M3", 5, 0), ("B2", 1, 1), ("ONE", 1, 0),
                                             ("B2xM3", 5, 1), ("M3xM3", 25, 0), ("B2xB2xB2", 1, 3)])
def test_decompose(name, core, power):
    d = decompose(catalog(name))
    assert (len(d.core), d.b2_power) == (core, power)
    assert d.verify() == []
    assert splitting_pairs(d.core) == [] if len(d.core) > 1 else True


def test_decompose_refusals():
    with pytest.raises(StronglySplits):
        decompose(catalog("C3"))
    with pytest.raises(NotModular):
        decompose(catalog("N5"))


def test_catalog_and_json_round_trip():
    with pytest.raises(UnknownName):
        catalog("Q7")
    for name in CATALOG:
        l = catalog(name)
        assert lattice_from_json(lattice_to_json(l)) == l
        assert lattice_from_json(name) == l
    assert chain(3).elements == ("0", "θ", "1")
