"""Brute-force brace enumeration straight from the holomorph definition."""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .counting import CountReport, PlainLabel, PrimeSpec, label_structures
from .dsdp import semidirect_Zp
from .groups import FiniteGroup, GroupError, are_isomorphic, groups_of_order, is_prime
from .holomorph import BudgetExceeded, regular_subgroup_classes
from .morphisms import automorphism_group, homs_to_cyclic, orbits_and_stabilizers


@dataclass
class GroupCatalog:
    order: int
    groups: list[FiniteGroup]
    labels: list  # StructureLabel or PlainLabel, one per group
    n: int = 0
    prime: Optional[PrimeSpec] = None
    base_names: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.groups)

    def check_distinct(self) -> None:
        for i, G in enumerate(self.groups):
            for H in self.groups[i + 1:]:
                if G.invariants == H.invariants and are_isomorphic(G, H) is not None:
                    raise GroupError(f"catalog lists {G.name} and {H.name}, which are isomorphic")


def plain_catalog(order: int) -> GroupCatalog:
    groups = groups_of_order(order)
    labels = [PlainLabel(i, G.name) for i, G in enumerate(groups)]
    return GroupCatalog(order, groups, labels, n=order, base_names=[G.name for G in groups])


def np_catalog(n: int, p: int) -> GroupCatalog:
    """Z_p x|_sigma E for E of order n and sigma over Aut(E)-orbit representatives."""
    groups, labels = [], []
    bases = groups_of_order(n)
    for rank, E in enumerate(bases):
        aut = automorphism_group(E)
        space = homs_to_cyclic(E, p - 1)
        orbs = orbits_and_stabilizers(aut, space.characters)
        for orb in orbs.orbits:
            sigma = space[orb[0]]
            groups.append(semidirect_Zp(p, E, sigma))
            labels.append(label_structures(E, sigma, rank))
    cat = GroupCatalog(n * p, groups, labels, n, PrimeSpec.concrete(p), [E.name for E in bases])
    cat.check_distinct()
    return cat


def default_catalog(order: int) -> GroupCatalog:
    """Order n*p with p the largest prime factor when p^2 does not divide the order
    and p >= 5; otherwise the plain catalog of the order."""
    p = max((q for q in range(2, order + 1) if order % q == 0 and is_prime(q)), default=1)
    if p >= 5 and order % (p * p) and order != p:
        return np_catalog(order // p, p)
    return plain_catalog(order)


def _search_member(catalog: GroupCatalog, i: int, remaining: Optional[float], pruned: bool) -> dict:
    """Classes of regular subgroups of Hol(catalog.groups[i]), counted by catalog index."""
    N = catalog.groups[i]
    t0 = time.monotonic()
    aut = automorphism_group(N)
    classes = regular_subgroup_classes(N, catalog.groups, aut=aut, anchored=pruned, budget_seconds=remaining)
    counts: dict = {}
    for c in classes:
        if c.label is None:
            raise GroupError(f"a regular subgroup of Hol({N.name}) is missing from the catalog")
        counts[c.label] = counts.get(c.label, 0) + 1
    return {"aut_order": aut.order, "counts": counts, "seconds": round(time.monotonic() - t0, 3)}


def _worker_count(workers: Optional[int]) -> int:
    if workers is None:
        workers = int(os.environ.get("SKEWBRACE_THREADS", "1") or 1)
    return max(1, workers)


def enumerate_braces_bruteforce(order: int, catalog: Optional[GroupCatalog] = None,
                                budget_seconds: Optional[float] = None, pruned: bool = False,
                                workers: Optional[int] = None) -> CountReport:
    """Count conjugacy classes of regular subgroups of Hol(N) for every N in
    the catalog, by isomorphism type of the subgroup.

    Catalog members are independent; with workers > 1 (default from
    SKEWBRACE_THREADS) they run in a process pool and are merged in catalog
    order. If the budget runs out, BudgetExceeded is raised with the partial
    report (all finished catalog members, in order) attached as ``partial``.
    """
    if catalog is None:
        catalog = default_catalog(order)
    if catalog.order != order:
        raise ValueError("catalog order does not match")
    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds

    def remaining() -> Optional[float]:
        return None if deadline is None else max(deadline - time.monotonic(), 0.0)

    results: list = [None] * len(catalog)
    failure = None
    nw = min(_worker_count(workers), len(catalog))
    if nw > 1:
        with ProcessPoolExecutor(max_workers=nw) as pool:
            futs = [pool.submit(_search_member, catalog, i, remaining(), pruned) for i in range(len(catalog))]
            for i, fut in enumerate(futs):
                try:
                    results[i] = fut.result()
                except BudgetExceeded:
                    failure = failure if failure is not None else i
    else:
        for i in range(len(catalog)):
            try:
                results[i] = _search_member(catalog, i, remaining(), pruned)
            except BudgetExceeded:
                failure = i
                break

    matrix: dict = {}
    per_group = []
    report = CountReport(catalog.n, catalog.prime, matrix, per_group, catalog.base_names)
    for i, N in enumerate(catalog.groups):
        if failure is not None and i >= failure:
            raise BudgetExceeded(f"budget exhausted while searching Hol({catalog.groups[failure].name})",
                                 partial=report)
        res = results[i]
        row: dict = {}
        for j, cnt in sorted(res["counts"].items()):
            key = (catalog.labels[i], catalog.labels[j])
            matrix[key] = matrix.get(key, 0) + cnt
            row[str(catalog.labels[j])] = cnt
        per_group.append({
            "group": N.name,
            "label": str(catalog.labels[i]),
            "aut_order": res["aut_order"],
            "classes": sum(res["counts"].values()),
            "by_type": row,
            "seconds": res["seconds"],
        })
    return report


def compare_reports(a: CountReport, b: CountReport) -> list[tuple[tuple[str, str], int, int]]:
    """Cells where the two reports differ, as ((add, mul), count in a, count in b)."""
    pa = a.prime.value if a.prime else None
    pb = b.prime.value if b.prime else None
    if a.n != b.n:
        raise ValueError(f"reports are for different n ({a.n} vs {b.n})")
    if a.prime and b.prime and a.prime.mode == b.prime.mode == "concrete" and pa != pb:
        raise ValueError(f"reports are for different primes ({pa} vs {pb})")
    ca = {(str(x), str(y)): v for (x, y), v in a.matrix.items()}
    cb = {(str(x), str(y)): v for (x, y), v in b.matrix.items()}
    diff = []
    for key in sorted(set(ca) | set(cb)):
        va, vb = ca.get(key, 0), cb.get(key, 0)
        if va != vb:
            diff.append((key, va, vb))
    return diff


__all__ = [
    "GroupCatalog", "np_catalog", "plain_catalog", "default_catalog", "enumerate_braces_bruteforce",
    "compare_reports",
]
