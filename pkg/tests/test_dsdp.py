import numpy as np
import pytest
from hypothesis import given, strategies as st

from skewbrace.counting import brace_catalog
from skewbrace.dsdp import (
    DsdpSpec,
    aut_of_semidirect,
    build_G_pair,
    check_dsdp_condition,
    double_semidirect,
    dsdp_decomposition,
    semidirect_aut_index,
    semidirect_Zp,
    spec_from_characters,
    trivial_prime_brace,
    unit_values,
)
from skewbrace.groups import GroupError, are_isomorphic, groups_of_order, preset
from skewbrace.holomorph import are_conjugate, brace_characters, brace_from_regular, verify_brace
from skewbrace.morphisms import automorphism_group, homs_to_cyclic

BRACES_12 = list(brace_catalog(12))
SMALL_CASES = [(p, E) for p in (5, 7, 13) for n in range(1, 13) if n % p for E in groups_of_order(n)]


def is_circ_hom(chi, B):
    e = chi.exponents
    return bool(np.array_equal(e[B.mul.table], (e[:, None] + e[None, :]) % chi.modulus))


# -- Z_p x| E and its automorphisms ------------------------------------------------------


def test_semidirect_names_and_centers():
    E = preset("C12")
    chars = homs_to_cyclic(E, 12)
    faithful = next(c for c in chars if c.order == 12)
    G = semidirect_Zp(13, E, faithful)
    assert G.order == 156 and G.name == "C13:1C12" and len(G.center()) == 1
    D = semidirect_Zp(13, E, chars.trivial())
    assert D.name == "C13xC12" and D.is_abelian
    with pytest.raises(GroupError):
        semidirect_Zp(3, E, chars.trivial())


def test_unit_values_are_a_character():
    E = preset("D12")
    for chi in homs_to_cyclic(E, 6):
        u = unit_values(chi, 7)
        assert np.array_equal(u[E.table], (u[:, None] * u[None, :]) % 7)


@given(st.sampled_from(SMALL_CASES), st.data())
def test_aut_of_semidirect_matches_brute_force(case, data):
    p, E = case
    chars = homs_to_cyclic(E, p - 1)
    sigma = chars[data.draw(st.integers(0, len(chars) - 1))]
    A = aut_of_semidirect(p, sigma, E)
    B = automorphism_group(A.base)
    assert A.order == B.order
    assert set(map(tuple, A.maps.tolist())) == set(map(tuple, B.maps.tolist()))


def test_aut_of_semidirect_order_formula():
    # |Aut| = (p - 1) * p^[sigma != 1] * |Stab(sigma)|
    E = preset("C12")
    aut = automorphism_group(E)
    for chi in homs_to_cyclic(E, 12):
        A = aut_of_semidirect(13, chi, E, aut)
        stab = sum(1 for g in range(aut.order) if np.array_equal(chi.exponents[aut.maps[g]], chi.exponents))
        assert A.order == 12 * (1 if chi.is_trivial else 13) * stab


def test_semidirect_aut_index_lookup():
    E = preset("C12")
    chi = next(c for c in homs_to_cyclic(E, 12) if c.order == 12)
    A = aut_of_semidirect(13, chi, E)
    j = semidirect_aut_index(A, 2, 3, 0)
    assert A.structured[j].k == 2 and A.structured[j].i == 3
    with pytest.raises(GroupError):
        semidirect_aut_index(A, 0, 0, 0)


# -- the double semidirect condition -----------------------------------------------------


@given(st.sampled_from(range(len(BRACES_12))), st.data())
def test_condition_iff_sigma_is_circ_homomorphism(i, data):
    B = brace_from_regular(BRACES_12[i].realization)
    sig = homs_to_cyclic(B.add, 12).characters
    tau = homs_to_cyclic(B.mul, 12).characters
    s = sig[data.draw(st.integers(0, len(sig) - 1))]
    t = tau[data.draw(st.integers(0, len(tau) - 1))]
    spec = spec_from_characters(13, B, s, t)
    spec.validate()
    ok, wit = check_dsdp_condition(spec)
    assert ok == is_circ_hom(s, B)
    if ok:
        X = double_semidirect(spec)
        assert verify_brace(X) == (True, None)
        assert are_isomorphic(X.add, semidirect_Zp(13, B.add, s)) is not None
        assert are_isomorphic(X.mul, semidirect_Zp(13, B.mul, t)) is not None
    else:
        assert wit is not None
        with pytest.raises(GroupError):
            double_semidirect(spec)


def test_condition_witness_is_a_failure():
    rec = next(r for r in BRACES_12 if r.E.name == "C12" and r.F.name == "D12")
    B = brace_from_regular(rec.realization)
    s = next(c for c in homs_to_cyclic(B.add, 12) if not is_circ_hom(c, B))
    spec = spec_from_characters(13, B, s, homs_to_cyclic(B.mul, 12).trivial())
    ok, (a, b1, b2) = check_dsdp_condition(spec)
    assert not ok
    S, T, lam = spec.sigma, spec.tau, spec.A.lam
    add, mul = B.add.table, B.mul.table
    c = add[mul[b1, b2], B.add.inverses[b1]]
    lhs = S[c][lam[a]]
    rhs = lam[a][T[b1][S[b2][T[B.mul.inverses[b1]]]]]
    assert not np.array_equal(lhs, rhs)


def test_validate_rejects_bad_actions():
    B = brace_from_regular(BRACES_12[0].realization)
    chars = homs_to_cyclic(B.add, 12)
    spec = spec_from_characters(13, B, chars.trivial(), chars.trivial())
    bad = DsdpSpec(spec.A, spec.B, np.tile((np.arange(13) + 1) % 13, (12, 1)), spec.tau)
    with pytest.raises(GroupError):
        bad.validate()
    swapped = spec.sigma.copy()
    swapped[1] = (2 * np.arange(13)) % 13
    with pytest.raises(GroupError):
        DsdpSpec(spec.A, spec.B, swapped, spec.tau).validate()


def test_trivial_brace_over_trivial_brace():
    A = trivial_prime_brace(7)
    spec = spec_from_characters(7, brace_from_regular(BRACES_12[0].realization),
                                *[homs_to_cyclic(BRACES_12[0].E, 6).trivial()] * 2)
    X = double_semidirect(spec)
    assert X.order == 84 and A.order == 7
    assert X.add.is_abelian and X.mul.is_abelian


# -- G(sigma, tau) and G(sigma, tau)' ----------------------------------------------------


@given(st.sampled_from(range(len(BRACES_12))), st.data())
def test_G_pair(i, data):
    rec = BRACES_12[i]
    F = rec.realization
    sigmas = brace_characters(F, 12).characters
    taus = homs_to_cyclic(rec.mul_group, 12).characters
    sigma = sigmas[data.draw(st.integers(0, len(sigmas) - 1))]
    tau = taus[data.draw(st.integers(0, len(taus) - 1))]
    G, H = build_G_pair(F, sigma, tau, 13)
    assert G.is_regular() and H.is_regular()
    if sigma.is_trivial:
        assert np.array_equal(G.lam, H.lam)
    else:
        assert not are_conjugate(G, H)
    mul_ref = semidirect_Zp(13, rec.mul_group, tau)
    assert are_isomorphic(G.as_group(), mul_ref) is not None
    assert are_isomorphic(H.as_group(), mul_ref) is not None


def test_G_pair_decompositions():
    rec = next(r for r in BRACES_12 if r.E.name == "D12" and r.F.name == "Dic12")
    F = rec.realization
    sigma = next(c for c in brace_characters(F, 12) if not c.is_trivial)
    tau = next(c for c in homs_to_cyclic(rec.mul_group, 12) if c.order == 2)
    G, H = build_G_pair(F, sigma, tau, 13)
    BG, BH = brace_from_regular(G), brace_from_regular(H)
    left = dsdp_decomposition(BG, 13, "left")
    assert left and not dsdp_decomposition(BH, 13, "left")
    mixed = dsdp_decomposition(BH, 13, "mixed")
    assert mixed
    su, tu = unit_values(sigma, 13), unit_values(tau, 13)
    for dec in left + mixed:
        a = np.array(dec.complement) // 13
        assert np.array_equal(dec.sigma, su[a]) and np.array_equal(dec.tau, tu[a])


def test_G_prime_not_conjugate_to_any_G():
    rec = next(r for r in BRACES_12 if r.E.name == "C12" and r.F.name == "C12")
    F = rec.realization
    sigma = next(c for c in brace_characters(F, 12) if c.order == 12)
    A = aut_of_semidirect(13, sigma, rec.E, F.hol.aut)
    taus = homs_to_cyclic(rec.mul_group, 12).characters
    _, H = build_G_pair(F, sigma, taus[1], 13, A)
    for t2 in taus:
        G2, _ = build_G_pair(F, sigma, t2, 13, A)
        assert not are_conjugate(G2, H)


def test_build_G_pair_rejects_non_brace_character():
    rec = next(r for r in BRACES_12 if r.E.name == "C12" and r.F.name == "D12")
    F = rec.realization
    keep = {c.key for c in brace_characters(F, 12)}
    bad = next(c for c in homs_to_cyclic(rec.E, 12) if c.key not in keep)
    with pytest.raises(GroupError):
        build_G_pair(F, bad, homs_to_cyclic(rec.mul_group, 12).trivial(), 13)
