"""Counting skew braces of size n*p from the braces of size n.

For each brace B of size n (additive E, multiplicative F realized in Hol(E)):

1. Hom(B) = characters sigma of E fixed by every lambda map;
2. Aut(B) = automorphisms of E normalizing F;
3. orbits of Aut(B) on Hom(B) give the additive structures Z_p x|_sigma E;
4. for each orbit representative sigma, orbits of Aut(B) cap Stab(sigma) on
   Hom(F, Z_p^*) give the multiplicative structures, each counted once for
   sigma = 1 and twice otherwise (the G(sigma,tau) / G(sigma,tau)' pair).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .groups import FiniteGroup, GroupError, are_isomorphic, divisors, groups_of_order, is_prime
from .holomorph import RegularSubgroup, brace_automorphisms, brace_characters, regular_subgroup_classes
from .morphisms import (
    Character,
    automorphism_group,
    homs_to_cyclic,
    orbits_and_stabilizers,
)

RESIDUE_CLASSES = (1, 5, 7, 11)


@dataclass(frozen=True)
class PrimeSpec:
    mode: str  # "concrete" or "residue"
    value: int

    @classmethod
    def concrete(cls, p: int) -> "PrimeSpec":
        if not is_prime(p) or p < 5:
            raise ValueError(f"concrete mode needs a prime p >= 5, got {p}")
        return cls("concrete", p)

    @classmethod
    def residue(cls, r: int) -> "PrimeSpec":
        if r not in RESIDUE_CLASSES:
            raise ValueError(f"residue class must be one of {RESIDUE_CLASSES}, got {r}")
        return cls("residue", r)

    @classmethod
    def parse(cls, text: str) -> "PrimeSpec":
        m = re.fullmatch(r"\s*(?:r|class)?\s*=?\s*(\d+)\s*(mod\s*12)?\s*", text)
        if not m:
            raise ValueError(text)
        v = int(m.group(1))
        return cls.residue(v) if m.group(2) else cls.concrete(v)

    def modulus(self, n: int) -> int:
        """Order of the cyclic group standing in for Z_p^*."""
        if self.mode == "concrete":
            return self.value - 1
        if 12 % n:
            raise ValueError("residue-class mode needs n dividing 12")
        return math.gcd(12, self.value - 1)

    def check(self, n: int) -> None:
        if self.mode == "concrete" and n % self.value == 0:
            raise ValueError("p must not divide n")
        if self.mode == "residue" and 12 % n:
            raise ValueError("residue-class mode needs n dividing 12")

    def __str__(self) -> str:
        return f"p={self.value}" if self.mode == "concrete" else f"p={self.value} mod 12"

    def to_json(self) -> dict:
        return {"mode": self.mode, "value": self.value}


def hypothesis_check(n: int, p: int) -> str:
    """'holds_by_sylow' when no divisor d > 1 of n is 1 mod p; otherwise 'unknown'."""
    if n % p == 0:
        raise ValueError("p divides n")
    if any(d % p == 1 for d in divisors(n) if d > 1):
        return "unknown"
    return "holds_by_sylow"


# -- labels -----------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class StructureLabel:
    """Z_p x|_k^tag G: base group, kernel size of the character, kernel tag."""

    rank: int  # catalog position of the base group, for sorting
    base: str
    order: int
    k: int
    tag: str = ""

    @property
    def sort_key(self) -> tuple:
        return (self.rank, -self.k, self.tag)

    @property
    def is_direct(self) -> bool:
        return self.k == self.order

    def short(self) -> str:
        return "x" if self.is_direct else f":{self.k}{self.tag}"

    def __str__(self) -> str:
        if self.is_direct:
            return f"Cp x {self.base}"
        return f"Cp :{self.k}{self.tag} {self.base}"


@dataclass(frozen=True, order=True)
class PlainLabel:
    """An isomorphism type with no prime attached (braces of size n itself)."""

    rank: int
    base: str

    @property
    def sort_key(self) -> tuple:
        return (self.rank, 0, "")

    def short(self) -> str:
        return self.base

    def __str__(self) -> str:
        return self.base


_LABEL_RE = re.compile(r"Cp (?:x|:(\d+)([a-z]?)) (\S+)")


def parse_label(text: str, catalog_names: Sequence[str], orders: dict) -> StructureLabel:
    m = _LABEL_RE.fullmatch(text)
    if not m:
        if text in catalog_names:
            return PlainLabel(list(catalog_names).index(text), text)
        raise ValueError(f"bad label {text!r}")
    base = m.group(3)
    order = orders[base]
    k = int(m.group(1)) if m.group(1) else order
    return StructureLabel(list(catalog_names).index(base), base, order, k, m.group(2) or "")


@dataclass
class _RefOrbit:
    k: int
    kernel: FiniteGroup
    cyclic: bool
    tag: str = ""


@lru_cache(maxsize=None)
def _reference(G: FiniteGroup) -> tuple[_RefOrbit, ...]:
    aut = automorphism_group(G)
    space = homs_to_cyclic(G, G.exponent)
    orbs = orbits_and_stabilizers(aut, space.characters)
    refs = []
    for orb in orbs.orbits:
        chi = space[orb[0]]
        K = chi.kernel().as_group()
        refs.append(_RefOrbit(chi.kernel_size, K, K.is_cyclic))
    by_k: dict[int, list[_RefOrbit]] = {}
    for r in refs:
        by_k.setdefault(r.k, []).append(r)
    for k, group in by_k.items():
        if len(group) == 1:
            continue
        letters = iter("defghij")
        for r in group:
            r.tag = "c" if r.cyclic else next(letters)
        for i, r in enumerate(group):
            for s in group[i + 1:]:
                if r.cyclic == s.cyclic and are_isomorphic(r.kernel, s.kernel) is not None:
                    raise GroupError(f"{G.name}: two orbits with k={k} share the kernel type")
    return tuple(refs)


def label_structures(base: FiniteGroup, chi: Character, rank: int = 0) -> StructureLabel:
    """Label of Z_p x|_chi base.  ``chi`` may live on any group isomorphic to
    ``base`` (e.g. the multiplicative group of a brace); only its kernel is used."""
    k = chi.kernel_size
    same = [r for r in _reference(base) if r.k == k]
    if not same:
        raise GroupError(f"no character of {base.name} has kernel size {k}")
    tag = ""
    if len(same) > 1:
        K = chi.kernel().as_group()
        if K.is_cyclic:
            tag = "c"
        else:
            for r in same:
                if not r.cyclic and are_isomorphic(K, r.kernel) is not None:
                    tag = r.tag
                    break
            else:
                raise GroupError("kernel matches no reference orbit")
    return StructureLabel(rank, base.name, base.order, k, tag)


def structure_labels(base: FiniteGroup, rank: int = 0) -> list[StructureLabel]:
    """Every label of Z_p x| base, sorted."""
    out = [StructureLabel(rank, base.name, base.order, r.k, r.tag) for r in _reference(base)]
    return sorted(out, key=lambda l: l.sort_key)


# -- brace catalog ------------------------------------------------------------------


@dataclass
class BraceRecord:
    index: int
    E: FiniteGroup  # catalog group, also the carrier of the realization
    F: FiniteGroup  # catalog group isomorphic to the multiplicative group
    e_rank: int
    f_rank: int
    realization: RegularSubgroup

    @property
    def name(self) -> str:
        return f"({self.E.name},{self.F.name})#{self.index}"

    @property
    def mul_group(self) -> FiniteGroup:
        g = getattr(self, "_mul", None)
        if g is None:
            g = self.realization.as_group(f"{self.F.name}~")
            self._mul = g
        return g


@lru_cache(maxsize=None)
def brace_catalog(n: int) -> tuple[BraceRecord, ...]:
    """Braces of size n, one per conjugacy class of regular subgroups."""
    groups = groups_of_order(n)
    out = []
    for i, E in enumerate(groups):
        aut = automorphism_group(E)
        for c in regular_subgroup_classes(E, groups, aut=aut):
            if c.label is None:
                raise GroupError(f"multiplicative group of a brace on {E.name} is not in the catalog")
            out.append(BraceRecord(len(out), E, groups[c.label], i, c.label, c.rep))
    return tuple(out)


def catalog_groups(n: int) -> list[FiniteGroup]:
    return groups_of_order(n)


# -- reports ------------------------------------------------------------------------


@dataclass
class CountReport:
    n: int
    prime: Optional[PrimeSpec]
    matrix: dict  # (StructureLabel, StructureLabel) -> int
    per_brace: list = field(default_factory=list)
    groups: list = field(default_factory=list)  # catalog names, in order

    @property
    def total(self) -> int:
        return sum(self.matrix.values())

    def cells(self) -> list[tuple[StructureLabel, StructureLabel, int]]:
        keys = sorted(self.matrix, key=lambda kv: (kv[0].sort_key, kv[1].sort_key))
        return [(a, b, self.matrix[(a, b)]) for a, b in keys]

    def block(self) -> dict:
        """(E name, F name) -> count, summed over kernel labels."""
        out: dict = {}
        for (a, b), v in self.matrix.items():
            out[(a.base, b.base)] = out.get((a.base, b.base), 0) + v
        return out

    def block_rows(self) -> list[list[int]]:
        blk = self.block()
        return [[blk.get((e, f), 0) for f in self.groups] for e in self.groups]

    def subtable(self, E: str, F: str) -> tuple[list[StructureLabel], list[StructureLabel], list[list[int]]]:
        rows = sorted({a for (a, b) in self.matrix if a.base == E and b.base == F}, key=lambda l: l.sort_key)
        cols = sorted({b for (a, b) in self.matrix if a.base == E and b.base == F}, key=lambda l: l.sort_key)
        vals = [[self.matrix.get((r, c), 0) for c in cols] for r in rows]
        return rows, cols, vals

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "prime": self.prime.to_json() if self.prime else {"mode": "none", "value": None},
            "groups": list(self.groups),
            "matrix": [{"add_label": str(a), "mul_label": str(b), "count": v} for a, b, v in self.cells()],
            "per_brace": self.per_brace,
            "total": self.total,
        }

    def dumps(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_json(), indent=indent)

    @classmethod
    def from_json(cls, data: dict) -> "CountReport":
        names = data["groups"]
        n = data["n"]
        orders = {name: n for name in names}
        mat = {}
        for cell in data["matrix"]:
            a = parse_label(cell["add_label"], names, orders)
            b = parse_label(cell["mul_label"], names, orders)
            mat[(a, b)] = int(cell["count"])
        p = data["prime"]
        prime = None if p["mode"] == "none" else PrimeSpec(p["mode"], p["value"])
        report = cls(n, prime, mat, data.get("per_brace", []), names)
        if "total" in data and data["total"] != report.total:
            raise ValueError("total does not match the matrix")
        return report


def _precompose_on(maps):
    def act(g, chi: Character) -> Character:
        return chi.precompose(maps[g])

    return act


def count_np(n: int, prime: PrimeSpec, assume_hypothesis: bool = False, representative: str = "first",
             catalog: Optional[Sequence[BraceRecord]] = None) -> CountReport:
    """Steps 1-4 for every brace of size n."""
    prime.check(n)
    if prime.mode == "concrete" and not assume_hypothesis:
        if hypothesis_check(n, prime.value) != "holds_by_sylow":
            raise ValueError(
                f"cannot establish a normal Sylow {prime.value}-subgroup in every group of order "
                f"{n * prime.value}; pass assume_hypothesis=True (--assume-hypothesis) to proceed"
            )
    m = prime.modulus(n)
    records = brace_catalog(n) if catalog is None else catalog
    matrix: dict = {}
    per_brace = []
    hom_cache: dict = {}
    for rec in records:
        F = rec.realization
        aut = F.hol.aut
        act = _precompose_on(aut.maps)
        if rec.e_rank not in hom_cache:
            hom_cache[rec.e_rank] = homs_to_cyclic(rec.E, m)
        hom_b = brace_characters(F, m, hom_cache[rec.e_rank])
        aut_b = brace_automorphisms(F)
        sig_orbits = orbits_and_stabilizers(aut_b, hom_b.characters, act=act)
        Fgrp = rec.mul_group
        hom_f = homs_to_cyclic(Fgrp, m)
        entry = {
            "brace": rec.name,
            "E": rec.E.name,
            "F": rec.F.name,
            "aut_order": len(aut_b),
            "hom_count": len(hom_b),
            "hom_f_count": len(hom_f),
            "sigma_orbits": [],
        }
        for orb in sig_orbits.orbits:
            rep = orb[0] if representative == "first" else orb[-1]
            sigma = hom_b[rep]
            a_sigma = [g for g in aut_b if np.array_equal(sigma.exponents[aut.maps[g]], sigma.exponents)]
            tau_orbits = orbits_and_stabilizers(a_sigma, hom_f.characters, act=act)
            weight = 1 if sigma.is_trivial else 2
            add_label = label_structures(rec.E, sigma, rec.e_rank)
            for torb in tau_orbits.orbits:
                tau = hom_f[torb[0]]
                mul_label = label_structures(rec.F, tau, rec.f_rank)
                matrix[(add_label, mul_label)] = matrix.get((add_label, mul_label), 0) + weight
            entry["sigma_orbits"].append({
                "label": str(add_label),
                "orbit_size": len(orb),
                "A_sigma": len(a_sigma),
                "tau_orbits": len(tau_orbits),
                "contribution": weight * len(tau_orbits),
            })
        per_brace.append(entry)
    names = [g.name for g in groups_of_order(n)]
    return CountReport(n, prime, matrix, per_brace, names)


# -- closed forms -------------------------------------------------------------------


def _fixed_incidence(chars: Sequence[Character], maps: np.ndarray, acting: Sequence[int]) -> np.ndarray:
    """fix[c, j]: chars[c] o maps[acting[j]] == chars[c]."""
    if not chars or not len(acting):
        return np.zeros((len(chars), len(acting)), dtype=bool)
    X = np.array([c.exponents for c in chars])  # (c, n)
    M = maps[np.asarray(acting)]  # (g, n)
    return (X[:, M] == X[:, None, :]).all(axis=2)


def _orbit_reps(fix_perm_source: Sequence[Character], maps: np.ndarray, acting: Sequence[int]) -> list[int]:
    keys = {c.key: i for i, c in enumerate(fix_perm_source)}
    seen = set()
    reps = []
    for i, c in enumerate(fix_perm_source):
        if i in seen:
            continue
        reps.append(i)
        for g in acting:
            seen.add(keys[tuple(int(v) for v in c.exponents[maps[g]])])
    return reps


@dataclass
class BurnsideTotals:
    additive_stab: Fraction
    additive_fix: Fraction
    total_stab: Fraction
    total_fix: Fraction

    @property
    def additive(self) -> int:
        return int(self.additive_stab)

    @property
    def total(self) -> int:
        return int(self.total_stab)


def burnside_forms(n: int, prime: PrimeSpec, assume_hypothesis: bool = False) -> BurnsideTotals:
    """Both closed forms (stabilizer sums and fixed-point sums), exactly."""
    prime.check(n)
    if prime.mode == "concrete" and not assume_hypothesis and hypothesis_check(n, prime.value) != "holds_by_sylow":
        raise ValueError("hypothesis not established; pass assume_hypothesis=True")
    m = prime.modulus(n)
    add_s = add_f = tot_s = tot_f = Fraction(0)
    for rec in brace_catalog(n):
        F = rec.realization
        maps = F.hol.aut.maps
        hom_b = brace_characters(F, m).characters
        aut_b = brace_automorphisms(F)
        inc = _fixed_incidence(hom_b, maps, aut_b)
        add_s += Fraction(int(inc.sum(axis=1).sum()), len(aut_b))  # sum of stabilizer sizes
        add_f += Fraction(int(inc.sum(axis=0).sum()), len(aut_b))  # sum of fixed-point counts
        H = homs_to_cyclic(rec.mul_group, m).characters
        for r in _orbit_reps(hom_b, maps, aut_b):
            sigma = hom_b[r]
            a_sigma = [g for j, g in enumerate(aut_b) if inc[r, j]]
            w = 1 if sigma.is_trivial else 2
            inc_t = _fixed_incidence(H, maps, a_sigma)
            tot_s += w * Fraction(int(inc_t.sum(axis=1).sum()), len(a_sigma))
            tot_f += w * Fraction(int(inc_t.sum(axis=0).sum()), len(a_sigma))
    return BurnsideTotals(add_s, add_f, tot_s, tot_f)


def burnside_totals(n: int, prime: PrimeSpec, report: Optional[CountReport] = None,
                    assume_hypothesis: bool = False) -> tuple[int, int]:
    """(number of additive structures, number of braces) of size n*p.

    Both closed forms are evaluated and must agree with each other, be
    integral, and match the direct enumeration of count_np.
    """
    b = burnside_forms(n, prime, assume_hypothesis)
    for v in (b.additive_stab, b.additive_fix, b.total_stab, b.total_fix):
        if v.denominator != 1:
            raise AssertionError(f"closed form is not an integer: {v}")
    if b.additive_stab != b.additive_fix or b.total_stab != b.total_fix:
        raise AssertionError("stabilizer and fixed-point forms disagree")
    if report is None:
        report = count_np(n, prime, assume_hypothesis=assume_hypothesis)
    additive = sum(len(e["sigma_orbits"]) for e in report.per_brace)
    if additive != b.additive or report.total != b.total:
        raise AssertionError(
            f"closed forms ({b.additive}, {b.total}) disagree with enumeration ({additive}, {report.total})"
        )
    return b.additive, b.total


__all__ = [
    "PrimeSpec", "StructureLabel", "CountReport", "BraceRecord", "hypothesis_check", "count_np",
    "burnside_totals", "burnside_forms", "label_structures", "structure_labels", "brace_catalog",
    "parse_label", "RESIDUE_CLASSES",
]
