"""Acceptance criteria. Each test prints one PASS/FAIL line; tolerances are pinned below."""
import time

import numpy as np
import pytest

from skewbrace import golden
from skewbrace.counting import RESIDUE_CLASSES, PrimeSpec, brace_catalog, burnside_totals, count_np
from skewbrace.dsdp import aut_of_semidirect, build_G_pair, check_dsdp_condition, spec_from_characters
from skewbrace.groups import GroupError, groups_of_order
from skewbrace.holomorph import (
    are_conjugate,
    brace_characters,
    brace_from_regular,
    regular_from_brace,
    regular_subgroup_classes,
    verify_brace,
)
from skewbrace.morphisms import automorphism_group, homs_to_cyclic
from skewbrace.oracle import compare_reports, default_catalog, enumerate_braces_bruteforce, plain_catalog

# pinned limits, in seconds; all counts must match exactly
TABLE_12_SECONDS = 60
TOTAL_SECONDS = 60
ORACLE_SECONDS = 300
STRETCH_SECONDS = 1800
GRAND = {11: 324, 5: 410, 7: 606, 1: 782}
SUPPORTED_GV_ORDERS = [n for n in range(1, 31) if n not in (16, 18, 24, 27)]
MISSING_GV_ORDERS = (16, 18, 24, 27)


def test_braces_of_size_12(acceptance):
    t0 = time.perf_counter()
    rep = enumerate_braces_bruteforce(12, plain_catalog(12))
    dt = time.perf_counter() - t0
    ok = rep.total == 38 and rep.block() == {k: v for k, v in golden.braces_12().items() if v}
    acceptance("size-12 brace table (total 38)", ok and dt <= TABLE_12_SECONDS, f"total={rep.total}, {dt:.1f}s")


@pytest.mark.parametrize("r", [11, 5, 7, 1])
def test_grand_totals(acceptance, r):
    t0 = time.perf_counter()
    rep = count_np(12, PrimeSpec.residue(r))
    dt = time.perf_counter() - t0
    acceptance(f"grand total 12p, p={r} mod 12 is {GRAND[r]}", rep.total == GRAND[r] and dt <= TOTAL_SECONDS,
               f"got {rep.total}, {dt:.1f}s")


@pytest.mark.parametrize("r", RESIDUE_CLASSES)
def test_block_matrices(acceptance, r):
    blk = count_np(12, PrimeSpec.residue(r)).block()
    ref = {k: v for k, v in golden.totals_12p(r).items() if v}
    bad = sorted(set(blk.items()) ^ set(ref.items()))
    acceptance(f"5x5 totals matrix, p={r} mod 12", not bad, f"{len(bad)} differing cells")


@pytest.mark.parametrize("E", ["C12", "A4", "D12", "Dic12"])
def test_subtables(acceptance, E):
    rep = count_np(12, PrimeSpec.residue(1))
    rows, cols, vals = golden.subtables_12p(1)[(E, E)]
    grow, gcol, gvals = rep.subtable(E, E)
    ok = [l.short() for l in grow] == rows and [l.short() for l in gcol] == cols and gvals == vals
    acceptance(f"sub-table ({E}, {E}), p=1 mod 12", ok)


def test_burnside_matches_enumeration(acceptance):
    bad = []
    for n in (1, 2, 3, 4, 6, 12):
        for r in RESIDUE_CLASSES:
            _, total = burnside_totals(n, PrimeSpec.residue(r))
            got = count_np(n, PrimeSpec.residue(r)).total
            if total != got:
                bad.append((n, r, total, got))
    acceptance("closed-form totals equal orbit enumeration (n in 1,2,3,4,6,12; all classes)", not bad, str(bad))


@pytest.mark.parametrize("order, n, p, assume", [(20, 4, 5, False), (30, 6, 5, True)])
def test_oracle_small(acceptance, order, n, p, assume):
    t0 = time.perf_counter()
    oracle = enumerate_braces_bruteforce(order)
    dt = time.perf_counter() - t0
    diff = compare_reports(oracle, count_np(n, PrimeSpec.concrete(p), assume_hypothesis=assume))
    acceptance(f"brute-force oracle at order {order} equals count_np", not diff and dt <= ORACLE_SECONDS,
               f"total={oracle.total}, diff={diff}, {dt:.1f}s")


def test_oracle_order_84(acceptance):
    t0 = time.perf_counter()
    oracle = enumerate_braces_bruteforce(84, pruned=True, budget_seconds=STRETCH_SECONDS)
    dt = time.perf_counter() - t0
    diff = compare_reports(oracle, count_np(12, PrimeSpec.concrete(7)))
    acceptance("pruned oracle at order 84 gives 606 and equals count_np",
               oracle.total == 606 and not diff and dt <= STRETCH_SECONDS, f"total={oracle.total}, {dt:.1f}s")


def test_verify_every_brace_and_round_trip(acceptance):
    seen, bad = 0, []
    for n in SUPPORTED_GV_ORDERS:
        cat = default_catalog(n)
        for N in cat.groups:
            for c in regular_subgroup_classes(N, cat.groups):
                B = brace_from_regular(c.rep)
                back = regular_from_brace(B, c.rep.hol)
                if not (verify_brace(B)[0] and np.array_equal(back.lam, c.rep.lam)):
                    bad.append(n)
                seen += 1
    acceptance("every brace verifies and round-trips (orders 1-30 with a catalog)", not bad and seen == 255,
               f"{seen} braces")


@pytest.mark.xfail(strict=True, raises=AssertionError, reason="no group catalog for orders 16, 18, 24, 27")
def test_round_trip_missing_orders(acceptance):
    missing = []
    for n in MISSING_GV_ORDERS:
        try:
            default_catalog(n)
        except GroupError:
            missing.append(n)
    acceptance("brace round-trip at orders 16, 18, 24, 27", not missing, f"no catalog for {missing}")


def test_dsdp_condition_equivalence(acceptance):
    bad, checked = [], 0
    for rec in brace_catalog(12):
        B = brace_from_regular(rec.realization)
        circ = B.mul.table
        for s in homs_to_cyclic(B.add, 12):
            e = s.exponents
            is_hom = bool(np.array_equal(e[circ], (e[:, None] + e[None, :]) % 12))
            for t in homs_to_cyclic(B.mul, 12):
                ok, _ = check_dsdp_condition(spec_from_characters(13, B, s, t))
                checked += 1
                if ok != is_hom:
                    bad.append((rec.E.name, rec.F.name))
    acceptance("dsdp condition holds iff sigma is a circ-homomorphism (size 12, p=13, all pairs)", not bad,
               f"{checked} pairs")


def test_G_pair_sweep(acceptance):
    bad, checked = [], 0
    for rec in brace_catalog(12):
        F = rec.realization
        taus = homs_to_cyclic(rec.mul_group, 12).characters
        for sigma in brace_characters(F, 12):
            A = aut_of_semidirect(13, sigma, rec.E, F.hol.aut)
            for tau in taus:
                G, H = build_G_pair(F, sigma, tau, 13, A)
                same = np.array_equal(G.lam, H.lam) if sigma.is_trivial else not are_conjugate(G, H)
                checked += 1
                if not same:
                    bad.append((rec.E.name, rec.F.name))
    acceptance("G and G' are distinct classes exactly when sigma is nontrivial (p=13)", not bad,
               f"{checked} pairs")


def test_aut_of_semidirect_sweep(acceptance):
    bad, checked = [], 0
    for p in (5, 7, 13):
        for n in range(1, 13):
            if n % p == 0:
                continue
            for E in groups_of_order(n):
                for sigma in homs_to_cyclic(E, p - 1):
                    A = aut_of_semidirect(p, sigma, E)
                    brute = automorphism_group(A.base)
                    checked += 1
                    if set(map(tuple, A.maps.tolist())) != set(map(tuple, brute.maps.tolist())):
                        bad.append((p, E.name))
    acceptance("structured Aut(Z_p x| E) equals brute force (p in 5,7,13; |E| <= 12)", not bad,
               f"{checked} cases")
