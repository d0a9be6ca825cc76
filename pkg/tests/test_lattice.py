"""Lattice engine tests: the small worked examples are the tors and wide
lattices of the A2 fixture (element bitmasks hardcoded over the module set
{S1, S2, P1}) and divisor lattices, where canonical join representations
coincide with primary decomposition."""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from torskit import lattice as lat
from torskit.errors import (
    KappaUndefined,
    NoUniqueMax,
    NotALattice,
    NotCJI,
    NotJoinSemidistributive,
)

S1, S2, P1 = 1, 2, 4  # bitmask bits for the three A2 indecomposables

# torsion classes of A2 ordered by inclusion: 0, add(S1), add(S2),
# add(S1,P1), everything
TORS_A2 = [0, S1, S2, S1 | P1, S1 | S2 | P1]
# wide subcategories of A2: 0, add(S1), add(S2), add(P1), everything
WIDE_A2 = [0, S1, S2, P1, S1 | S2 | P1]


@pytest.fixture(scope="module")
def tors_a2():
    return lat.build_lattice(TORS_A2)


@pytest.fixture(scope="module")
def wide_a2():
    return lat.build_lattice(WIDE_A2)


def test_build_lattice_tors_a2(tors_a2):
    assert tors_a2.bottom == 0
    assert tors_a2.top == 4
    assert len(tors_a2.cover_edges) == 5
    assert tors_a2.join(1, 2) == 4  # add(S1) v add(S2) = mod
    assert tors_a2.meet(3, 2) == 0


def test_build_lattice_singleton():
    one = lat.build_lattice([0])
    assert one.bottom == one.top == 0
    assert one.cover_edges == []
    assert lat.cji_elements(one) == []


def test_build_lattice_wide_a2_has_six_covers(wide_a2):
    assert len(wide_a2.cover_edges) == 6


def test_not_a_lattice_reports_pair():
    # two maximal lower bounds for the two top elements
    with pytest.raises(NotALattice):
        lat.build_lattice([0b00000, 0b00001, 0b00010, 0b01011, 0b10011])


def test_lattice_axioms_exhaustively(tors_a2, wide_a2):
    for lattice in (tors_a2, wide_a2, lat.divisor_lattice(12)[0]):
        n = lattice.n
        for x, y in itertools.product(range(n), repeat=2):
            m, j = lattice.meet(x, y), lattice.join(x, y)
            assert lattice.leq(m, x) and lattice.leq(m, y)
            assert lattice.leq(x, j) and lattice.leq(y, j)
            assert lattice.meet(x, x) == x and lattice.join(x, x) == x
            assert m == lattice.meet(y, x) and j == lattice.join(y, x)
            assert lattice.join(x, m) == x and lattice.meet(x, j) == x
        for x, y, z in itertools.product(range(n), repeat=3):
            assert lattice.meet(x, lattice.meet(y, z)) == lattice.meet(
                lattice.meet(x, y), z
            )
            assert lattice.join(x, lattice.join(y, z)) == lattice.join(
                lattice.join(x, y), z
            )


def test_semidistributive_tors_but_not_wide(tors_a2, wide_a2):
    ok, witness = lat.is_semidistributive(tors_a2)
    assert ok and witness is None
    ok, witness = lat.is_semidistributive(wide_a2)
    assert not ok
    law, x, y, z = witness
    assert law == "SDjoin"
    # the witness must genuinely violate SD-join
    assert wide_a2.join(x, y) == wide_a2.join(x, z)
    assert wide_a2.join(x, wide_a2.meet(y, z)) != wide_a2.join(x, y)
    # the documented triple (add(S2), add(S1), add(P1)) violates it too
    x, y, z = 2, 1, 3
    assert wide_a2.join(x, y) == wide_a2.join(x, z)
    assert wide_a2.join(x, wide_a2.meet(y, z)) != wide_a2.join(x, y)


def test_divisor_lattice_semidistributive():
    sixty, values = lat.divisor_lattice(60)
    assert values == [1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]
    ok, _ = lat.is_semidistributive(sixty)
    assert ok


def test_cji_cmi_tors_a2(tors_a2):
    assert lat.cji_elements(tors_a2) == [1, 2, 3]  # add(S1), add(S2), add(S1,P1)
    assert lat.cmi_elements(tors_a2) == [1, 2, 3]


def test_cji_divisor_12():
    twelve, values = lat.divisor_lattice(12)
    cji = {values[e] for e in lat.cji_elements(twelve)}
    assert cji == {2, 3, 4}


def test_kappa_values_tors_a2(tors_a2):
    # elements: 0=0, 1=add(S1), 2=add(S2), 3=add(S1,P1), 4=mod
    assert lat.kappa(tors_a2, 2) == 3  # kappa(add S2) = add(S1,P1)
    assert lat.kappa(tors_a2, 1) == 2
    assert lat.kappa(tors_a2, 3) == 1
    with pytest.raises(NotCJI):
        lat.kappa(tors_a2, 4)  # top covers two elements


def test_kappa_star_inverts(tors_a2):
    assert lat.kappa_star(tors_a2, 3) == 2  # kappa_star(add(S1,P1)) = add(S2)
    assert lat.kappa_star(tors_a2, 2) == 1
    for j in lat.cji_elements(tors_a2):
        assert lat.kappa_star(tors_a2, lat.kappa(tors_a2, j)) == j


def test_kappa_star_chain():
    chain = lat.build_lattice([0b0, 0b1, 0b11])
    assert lat.kappa_star(chain, 1) == 2  # unique element not below the middle


def test_kappa_no_unique_max_on_wide(wide_a2):
    with pytest.raises(NoUniqueMax):
        lat.kappa(wide_a2, 1)  # add(S1) in the wide lattice


def test_kappa_bijection_cji_to_cmi(tors_a2):
    for lattice in (tors_a2, lat.divisor_lattice(12)[0], lat.divisor_lattice(60)[0]):
        cji = lat.cji_elements(lattice)
        image = sorted(lat.kappa(lattice, j) for j in cji)
        assert image == sorted(lat.cmi_elements(lattice))


def test_cjr_tors_a2(tors_a2):
    rep = lat.cjr(tors_a2, 4)
    assert rep.joinands == frozenset({1, 2})  # add(S1) v add(S2)
    assert lat.cjr(tors_a2, 0).joinands == frozenset()
    for j in lat.cji_elements(tors_a2):
        assert lat.cjr(tors_a2, j).joinands == frozenset({j})


def test_cjr_divisor_primary_decomposition():
    sixty, values = lat.divisor_lattice(60)
    rep = lat.cjr(sixty, values.index(60))
    assert {values[e] for e in rep.joinands} == {4, 3, 5}
    twelve, v12 = lat.divisor_lattice(12)
    rep = lat.cjr(twelve, v12.index(12))
    assert {v12[e] for e in rep.joinands} == {4, 3}


def test_cjr_fails_exactly_when_sd_join_fails(tors_a2, wide_a2):
    for x in range(tors_a2.n):
        lat.cjr(tors_a2, x)  # must not raise
    failed = False
    for x in range(wide_a2.n):
        try:
            lat.cjr(wide_a2, x)
        except NotJoinSemidistributive:
            failed = True
    assert failed


def test_canonical_joinands_are_cji(tors_a2):
    for lattice in (tors_a2, lat.divisor_lattice(36)[0]):
        for x in range(lattice.n):
            for j in lat.cjr(lattice, x).joinands:
                assert len(lattice.lower_covers[j]) == 1


def test_cmr_tors_a2(tors_a2):
    rep = lat.cmr(tors_a2, 0)
    assert rep.meetands == frozenset({2, 3})  # add(S2) and add(S1,P1)
    for m in lat.cmi_elements(tors_a2):
        assert lat.cmr(tors_a2, m).meetands == frozenset({m})
    assert lat.cmr(tors_a2, tors_a2.top).meetands == frozenset()


def test_brute_force_cjr_matches_fast(tors_a2):
    lattices = [
        tors_a2,
        lat.divisor_lattice(12)[0],
        lat.divisor_lattice(36)[0],
        lat.divisor_lattice(60)[0],
    ]
    for lattice in lattices:
        for x in range(lattice.n):
            oracle = lat.brute_force_cjr(lattice, x)
            assert oracle is not None
            assert oracle.joinands == lat.cjr(lattice, x).joinands


def test_brute_force_cjr_no_canonical_on_wide(wide_a2):
    assert lat.brute_force_cjr(wide_a2, wide_a2.top) is None
    assert lat.brute_force_cmr(wide_a2, wide_a2.bottom) is None


def test_kappa_bar_tors_a2(tors_a2):
    assert lat.kappa_bar(tors_a2, 4) == 0  # kappa_bar(mod) = 0
    assert lat.kappa_bar(tors_a2, 0) == 4  # empty join, empty meet
    assert lat.kappa_bar(tors_a2, 1) == 2


def test_kappa_bar_undefined_on_wide(wide_a2):
    with pytest.raises(KappaUndefined):
        lat.kappa_bar(wide_a2, wide_a2.top)


def test_kappa_bar_orbits_tors_a2(tors_a2):
    orbits = lat.kappa_bar_orbits(tors_a2)
    assert [o.elements for o in orbits] == [(0, 4), (1, 2, 3)]
    assert orbits[0].joinand_counts == (0, 2)
    assert orbits[1].joinand_counts == (1, 1, 1)
    assert str(orbits[0].average) == "1" and str(orbits[1].average) == "1"


def test_kappa_bar_orbit_singleton():
    one = lat.build_lattice([0])
    orbits = lat.kappa_bar_orbits(one)
    assert len(orbits) == 1 and orbits[0].average == 0


@given(st.integers(2, 120))
def test_divisor_lattice_properties(n):
    lattice, values = lat.divisor_lattice(n)
    ok, _ = lat.is_semidistributive(lattice)
    assert ok
    for x in range(lattice.n):
        fast = lat.cjr(lattice, x)
        oracle = lat.brute_force_cjr(lattice, x)
        assert oracle is not None and oracle.joinands == fast.joinands
        # joinands are prime powers
        for j in fast.joinands:
            v = values[j]
            factors = {q for q in range(2, v + 1) if v % q == 0 and _is_prime(q)}
            assert len(factors) == 1
    orbits = lat.kappa_bar_orbits(lattice)
    assert sum(len(o.elements) for o in orbits) == lattice.n


def _is_prime(n):
    return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))


def test_exchange_format_roundtrip(tors_a2):
    tors_a2.edge_labels = {edge: f"L{i}" for i, edge in enumerate(tors_a2.cover_edges)}
    text = lat.to_text(tors_a2, names=[f"T{i}" for i in range(5)])
    again, names = lat.from_text(text)
    assert names == [f"T{i}" for i in range(5)]
    assert (again.poset.leq == tors_a2.poset.leq).all()
    assert set(again.cover_edges) == set(tors_a2.cover_edges)
    assert again.edge_labels == tors_a2.edge_labels


def test_from_text_rejects_bad_header():
    with pytest.raises(NotALattice):
        lat.from_text("nope\nelem a\n")


def test_from_text_rejects_non_hasse_covers():
    text = "lattice v1\nelem a\nelem b\nelem c\ncover a b\ncover b c\ncover a c\n"
    with pytest.raises(NotALattice):
        lat.from_text(text)


def test_dot_output(tors_a2):
    dot = lat.to_dot(tors_a2, names=["0", "S1", "S2", "S1P1", "mod"],
                     edge_labels={(0, 1): "S1"})
    assert dot.startswith("digraph")
    assert 'label="S1"' in dot
    assert dot.count("->") == 5
