import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from skewbrace.groups import PRESETS_12, GroupError, abelianization_invariants, groups_of_order, preset
from skewbrace.morphisms import (
    BRUTE_FORCE_AUT_LIMIT,
    AutomorphismGroup,
    GroupMorphism,
    automorphism_from_images,
    automorphism_group,
    hom_count_formula,
    homs_to_cyclic,
    orbits_and_stabilizers,
    stabilizer_of_character,
)

SMALL = [G for n in range(1, 13) for G in groups_of_order(n)]


@pytest.mark.parametrize("name, order", [("C12", 4), ("C6xC2", 12), ("A4", 24), ("D12", 12), ("Dic12", 12)])
def test_aut_orders(name, order):
    A = automorphism_group(preset(name))
    assert A.order == order
    A.check_closed()
    assert A.is_valid()


def test_aut_structures():
    census = lambda n: dict(automorphism_group(preset(n)).group_structure.order_census)  # noqa: E731
    # Aut(A4) = S4, Aut(D12) = Aut(Dic12) = D12, Aut(C12) = C2 x C2
    assert census("A4") == {1: 1, 2: 9, 3: 8, 4: 6}
    assert census("D12") == dict(preset("D12").order_census)
    assert census("Dic12") == dict(preset("D12").order_census)
    assert census("C12") == {1: 1, 2: 3}


def test_identity_first_and_lookup():
    A = automorphism_group(preset("D12"))
    assert np.array_equal(A.maps[0], np.arange(12))
    for i in range(A.order):
        assert A.index_of(A.maps[i]) == i
    assert A.index_of(np.roll(np.arange(12), 1)) == -1


@given(st.sampled_from(PRESETS_12), st.data())
def test_aut_composition_and_inverse(name, data):
    A = automorphism_group(preset(name))
    f = data.draw(st.integers(0, A.order - 1))
    g = data.draw(st.integers(0, A.order - 1))
    fg = A.compose[f, g]
    assert np.array_equal(A.maps[fg], A.maps[f][A.maps[g]])
    assert A.compose[f, A.inverse[f]] == 0
    conj = A.conjugates_of(f)
    assert sorted(set(conj.tolist())) == sorted(set(A.conj[:, f].tolist()))


def test_group_morphism_ops():
    G = preset("C12")
    m5 = GroupMorphism(G, G, (5 * np.arange(12)) % 12)
    assert m5.is_homomorphism() and m5.is_bijective()
    assert np.array_equal(m5.compose(m5).map, np.arange(12))
    assert np.array_equal(m5.inverse().map, m5.map)
    bad = GroupMorphism(G, G, (np.arange(12) + 1) % 12)
    assert not bad.is_homomorphism()


def test_automorphism_from_images():
    D = preset("D12")
    r, s = D.gen("r"), D.gen("s")
    g1 = automorphism_from_images(D, {"r": D.inv(r), "s": s})
    assert g1[r] == D.inv(r)
    with pytest.raises(GroupError):
        automorphism_from_images(D, {"r": s, "s": s})


def test_brute_force_limit():
    assert BRUTE_FORCE_AUT_LIMIT >= 156


# -- characters -------------------------------------------------------------------------


@given(st.sampled_from(SMALL), st.integers(1, 24))
def test_hom_count_formula(G, m):
    space = homs_to_cyclic(G, m)
    expected = math.prod(math.gcd(f, m) for f in abelianization_invariants(G)) if G.order > 1 else 1
    assert len(space) == expected == hom_count_formula(G, m) == space.expected_size()
    keys = {c.key for c in space}
    assert len(keys) == len(space)
    for chi in space:
        assert chi.is_homomorphism_for(G.table)
        assert chi(G.identity) == 0


@pytest.mark.parametrize("name, m, size", [("C12", 12, 12), ("C6xC2", 12, 12), ("A4", 12, 3),
                                           ("D12", 12, 4), ("Dic12", 12, 4), ("Dic12", 6, 2)])
def test_hom_sizes(name, m, size):
    assert len(homs_to_cyclic(preset(name), m)) == size


def test_character_basics():
    G = preset("C12")
    space = homs_to_cyclic(G, 12)
    chi = next(c for c in space if c.order == 4)
    assert chi.kernel_size == 3 and len(chi.kernel()) == 3
    assert chi.kernel().is_normal()
    assert space.trivial().is_trivial
    assert space.index(chi) == space.characters.index(chi)
    vals = chi.values_mod_p(13, 2)
    assert vals[G.identity] == 1
    assert all(pow(int(v), 4, 13) == 1 for v in vals)


# -- orbits on Hom(E, C12): (kernel size, orbit size, stabilizer size) per orbit ---------

ORBIT_TABLES = {
    "C12": [(12, 1, 4), (6, 1, 4), (4, 2, 2), (3, 2, 2), (2, 2, 2), (1, 4, 1)],
    "C6xC2": [(12, 1, 12), (6, 3, 4), (4, 2, 6), (2, 6, 2)],
    "A4": [(12, 1, 24), (4, 2, 12)],
    "D12": [(12, 1, 12), (6, 1, 12), (6, 2, 6)],
    "Dic12": [(12, 1, 12), (6, 1, 12), (3, 2, 6)],
}


@pytest.mark.parametrize("name", PRESETS_12)
def test_orbit_tables(name):
    G = preset(name)
    aut = automorphism_group(G)
    space = homs_to_cyclic(G, 12)
    orbs = orbits_and_stabilizers(aut, space.characters)
    got = sorted((space[o[0]].kernel_size, len(o), len(s)) for o, s in zip(orbs.orbits, orbs.stabilizers))
    assert got == sorted(ORBIT_TABLES[name])


def test_cyclic_orbits_serialized():
    G = preset("C12")
    aut = automorphism_group(G)
    space = homs_to_cyclic(G, 12)
    orbs = orbits_and_stabilizers(aut, space.characters)
    got = {frozenset(space[i].serialize() for i in o) for o in orbs.orbits}
    assert got == {
        frozenset({(1, 0)}), frozenset({(2, 1)}), frozenset({(3, 1), (3, 2)}), frozenset({(4, 1), (4, 3)}),
        frozenset({(6, 1), (6, 5)}), frozenset({(12, 1), (12, 5), (12, 7), (12, 11)}),
    }
    # stabilizers are {g_i : i = 1 mod d}
    mult = {u: aut.index_of((u * np.arange(12)) % 12) for u in (1, 5, 7, 11)}
    for chi in space:
        d = chi.order
        stab = set(stabilizer_of_character(aut, chi))
        assert stab == {mult[u] for u in mult if u % d == 1 % d}


def test_c6xc2_orbits_serialized():
    # (j mod d, i mod 2) with sigma(a) = zeta_d^j, sigma(b) = (-1)^i
    G = preset("C6xC2")
    aut = automorphism_group(G)
    space = homs_to_cyclic(G, 12)
    orbs = orbits_and_stabilizers(aut, space.characters)
    got = {frozenset(space[i].serialize() for i in o) for o in orbs.orbits}
    assert got == {
        frozenset({(0, 0)}),
        frozenset({(1, 0), (0, 1), (1, 1)}),
        frozenset({(1, 0), (2, 0)}),
        frozenset({(1, 0), (2, 1), (1, 1), (5, 0), (4, 1), (5, 1)}),
    }


def test_orbit_stabilizer_rejects_non_group():
    G = preset("C12")
    aut = automorphism_group(G)
    space = homs_to_cyclic(G, 12)
    # a single non-identity automorphism is not a group
    with pytest.raises(GroupError):
        orbits_and_stabilizers([1], space.characters, act=lambda g, c: c.precompose(aut.maps[g]))


@given(st.sampled_from(PRESETS_12 + ("D8", "Q8", "C4xC2", "C10")), st.sampled_from([2, 4, 6, 12]))
def test_orbit_stabilizer_and_burnside(name, m):
    G = preset(name)
    aut = automorphism_group(G)
    pts = homs_to_cyclic(G, m).characters
    orbs = orbits_and_stabilizers(aut, pts)
    assert sum(len(o) for o in orbs.orbits) == len(pts)
    for o, s in zip(orbs.orbits, orbs.stabilizers):
        assert len(o) * len(s) == aut.order
        assert aut.subgroup(s).is_subgroup()
    assert orbs.burnside_count() == Fraction(len(orbs.orbits))
    first, last = orbs.representatives("first"), orbs.representatives("last")
    assert [orbs.orbit_of(i) for i in first] == [orbs.orbit_of(i) for i in last] == list(range(len(orbs)))


def test_automorphism_group_validity():
    G = preset("C12")
    bad = AutomorphismGroup(G, np.array([np.arange(12), (np.arange(12) + 1) % 12]))
    assert not bad.is_valid()
    with pytest.raises(GroupError):
        AutomorphismGroup(G, np.array([(np.arange(12) * 5) % 12]))
