"""Holomorphs, regular subgroups and the brace correspondence.

A regular subgroup G of Hol(N) = N x| Aut(N) is stored as its lambda array:
``lam[x]`` is the automorphism index f with (x, f) in G.  The brace attached
to G has a o b = a . lam[a](b).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .groups import FiniteGroup, GroupError, Subgroup, are_isomorphic, generating_set
from .morphisms import (
    AutomorphismGroup,
    Character,
    CharacterSpace,
    automorphism_group,
    homs_to_cyclic,
)


class BudgetExceeded(RuntimeError):
    """Raised when a search runs past its time budget."""

    def __init__(self, msg: str, partial=None):
        super().__init__(msg)
        self.partial = partial


class HolGroup:
    """Hol(N) as pairs (x, f), never materialized as a Cayley table."""

    def __init__(self, base: FiniteGroup, aut: AutomorphismGroup):
        if aut.base is not base:
            raise GroupError("automorphism group belongs to a different base group")
        self.base = base
        self.aut = aut
        self.order = base.order * aut.order

    def __repr__(self) -> str:
        return f"HolGroup({self.base.name or '?'}, order={self.order})"

    def encode(self, x: int, f: int) -> int:
        return int(x) + self.base.order * int(f)

    def decode(self, h: int) -> tuple[int, int]:
        return h % self.base.order, h // self.base.order

    def pi1(self, pair) -> int:
        return pair[0]

    def pi2(self, pair) -> int:
        return pair[1]

    @property
    def identity(self) -> tuple[int, int]:
        return (self.base.identity, 0)

    def mul(self, u, v) -> tuple[int, int]:
        (x, f), (y, g) = u, v
        return int(self.base.table[x, self.aut.maps[f, y]]), int(self.aut.compose[f, g])

    def inv(self, u) -> tuple[int, int]:
        x, f = u
        fi = int(self.aut.inverse[f])
        return int(self.aut.maps[fi, self.base.inverses[x]]), fi

    def conjugate_by_aut(self, g: int, u) -> tuple[int, int]:
        """Phi_g(x, f) = (g(x), g f g^-1), conjugation by (1, g)."""
        x, f = u
        return int(self.aut.maps[g, x]), int(self.aut.conj[g, f])


def holomorph(N: FiniteGroup, aut: Optional[AutomorphismGroup] = None) -> HolGroup:
    if aut is None:
        aut = automorphism_group(N)
    else:
        aut.check_closed()
    return HolGroup(N, aut)


@dataclass(eq=False)
class RegularSubgroup:
    hol: HolGroup
    lam: np.ndarray

    def __post_init__(self):
        self.lam = np.asarray(self.lam, dtype=np.int64)
        self.lam.setflags(write=False)

    @property
    def order(self) -> int:
        return len(self.lam)

    def elements(self) -> list[tuple[int, int]]:
        return [(x, int(f)) for x, f in enumerate(self.lam)]

    def lambda_maps(self) -> np.ndarray:
        """n x n array: row a is lambda_a as an image array."""
        return self.hol.aut.maps[self.lam]

    @cached_property
    def circ_table(self) -> np.ndarray:
        N = self.hol.base
        return N.table[np.arange(N.order)[:, None], self.lambda_maps()]

    def as_group(self, name: str = "") -> FiniteGroup:
        return FiniteGroup(self.circ_table, name, validate=False)

    def is_regular(self) -> bool:
        """Closure of {(x, lam[x])}: lam[x . lam_x(y)] = lam_x o lam_y."""
        N = self.hol.base
        if self.lam[N.identity] != 0:
            return False
        L = self.lambda_maps()
        n = N.order
        for x in range(n):
            # lambda_{x o y} must equal lambda_x after lambda_y, for every y
            if not np.array_equal(L[self.circ_table[x]], L[x][L]):
                return False
        return True

    def conjugate(self, g: int) -> "RegularSubgroup":
        """Phi_g(G) = {(g(x), g f g^-1)}."""
        aut = self.hol.aut
        new = np.empty_like(self.lam)
        new[aut.maps[g]] = aut.conj[g, self.lam]
        return RegularSubgroup(self.hol, new)

    def all_conjugates(self) -> np.ndarray:
        """k x n array: row g is the lambda array of Phi_g(G)."""
        aut = self.hol.aut
        k = aut.order
        new = np.empty((k, self.order), dtype=np.int64)
        new[np.arange(k)[:, None], aut.maps] = aut.conj[:, self.lam]
        return new

    def canonical_lam(self) -> np.ndarray:
        rows = self.all_conjugates()
        best = np.lexsort(rows.T[::-1])[0]
        return rows[best]

    def canonical_key(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.canonical_lam())

    def canonical(self) -> "RegularSubgroup":
        return RegularSubgroup(self.hol, self.canonical_lam())

    @cached_property
    def generators(self) -> list[int]:
        return generating_set(self.as_group())

    def normalizing_automorphisms(self) -> list[int]:
        """g in Aut(N) with Phi_g(G) = G."""
        aut = self.hol.aut
        img = aut.conj[:, self.lam]  # conj of lam[x] by g
        target = self.lam[aut.maps]  # lam[g(x)]
        return [int(g) for g in np.nonzero((img == target).all(axis=1))[0]]

    def to_json(self) -> dict:
        return {"base": self.hol.base.name, "lam": self.lam.tolist()}


def conjugating_automorphisms(G: RegularSubgroup, H: RegularSubgroup, first_only: bool = False) -> list[int]:
    """All g in Aut(N) with Phi_g(G) = H, testing generators of G only.

    Phi_g(G) is a subgroup of the same order, so it equals H once it maps a
    generating set of G into H.  Conjugacy in Hol(N) reduces to this case
    because Hol(N) = N . Aut(N) and the translation part is absorbed by the
    point stabilizer of a regular subgroup.
    """
    aut = G.hol.aut
    alive = np.ones(aut.order, dtype=bool)
    for x in G.generators:
        f = int(G.lam[x])
        conj_f = aut.conjugates_of(f) if aut.order > 2048 else aut.conj[:, f]
        alive &= H.lam[aut.maps[:, x]] == conj_f
        if not alive.any():
            return []
    found = [int(g) for g in np.nonzero(alive)[0]]
    return found[:1] if first_only else found


def are_conjugate(G: RegularSubgroup, H: RegularSubgroup) -> bool:
    return bool(conjugating_automorphisms(G, H, first_only=True))


# -- search ---------------------------------------------------------------------


def semiregular_cyclic(hol: HolGroup) -> np.ndarray:
    """ok[x, f]: <(x, f)> meets the point stabilizer trivially and has order dividing |N|."""
    N, aut = hol.base, hol.aut
    n, k = N.order, aut.order
    X = np.repeat(np.arange(n), k)
    F = np.tile(np.arange(k), n)
    ux, uf = X.copy(), F.copy()
    comp = aut.compose
    ok = np.zeros(n * k, dtype=bool)
    done = np.zeros(n * k, dtype=bool)
    e = N.identity
    for j in range(1, n + 1):
        hit_e = (ux == e) & ~done
        good = hit_e & (uf == 0) & (n % j == 0)
        ok |= good
        done |= hit_e
        if done.all():
            break
        # (ux, uf) <- (ux, uf) * (x, f)
        ux = N.table[ux, aut.maps[uf, X]]
        uf = comp[uf, F]
    return ok.reshape(n, k)


class _Search:
    def __init__(self, hol: HolGroup, deadline: Optional[float]):
        self.hol = hol
        N, aut = hol.base, hol.aut
        self.n = N.order
        self.ntab = N.table.tolist()
        self.maps = aut.maps.tolist()
        self.comp = aut.compose.tolist()
        self.ok = semiregular_cyclic(hol)
        self.cands = [np.nonzero(self.ok[x])[0].tolist() for x in range(self.n)]
        self.order = sorted(range(self.n), key=lambda x: (len(self.cands[x]), x))
        self.deadline = deadline
        self.found: list[np.ndarray] = []
        self.nodes = 0

    def close(self, lam: list, members: list, gens: list, new) -> Optional[tuple[list, list]]:
        """Closure of <members, new>; None if two elements share a first coordinate."""
        ntab, maps, comp, ok = self.ntab, self.maps, self.comp, self.ok
        lam = lam.copy()
        members = members.copy()
        x0, f0 = new
        if lam[x0] != -1:
            return (lam, members) if lam[x0] == f0 else None
        allg = gens + [new]
        queue = [(x, lam[x], [new]) for x in members]
        lam[x0] = f0
        members.append(x0)
        queue.append((x0, f0, allg))
        while queue:
            x, f, gl = queue.pop()
            mf = maps[f]
            for y, g in gl:
                z = ntab[x][mf[y]]
                h = comp[f][g]
                cur = lam[z]
                if cur == -1:
                    if not ok[z, h]:
                        return None
                    lam[z] = h
                    members.append(z)
                    queue.append((z, h, allg))
                elif cur != h:
                    return None
        return lam, members

    def run(self, root_candidates: Optional[dict] = None):
        e = self.hol.base.identity
        lam = [-1] * self.n
        lam[e] = 0
        self._rec(lam, [e], [], root_candidates)

    def _rec(self, lam, members, gens, root_candidates):
        self.nodes += 1
        if self.deadline is not None and (self.nodes & 255) == 1 and time.monotonic() > self.deadline:
            raise BudgetExceeded("regular subgroup search exceeded its budget")
        if len(members) == self.n:
            self.found.append(np.array(lam, dtype=np.int64))
            return
        x = next(v for v in self.order if lam[v] == -1)
        cands = self.cands[x]
        if root_candidates is not None:
            x = root_candidates["x"]
            cands = root_candidates["f"]
        for f in cands:
            res = self.close(lam, members, gens, (x, f))
            if res is None:
                continue
            self._rec(res[0], res[1], gens + [(x, f)], None)


def regular_subgroups(N: FiniteGroup, aut: Optional[AutomorphismGroup] = None, anchored: bool = False,
                      budget_seconds: Optional[float] = None) -> list[RegularSubgroup]:
    """Regular subgroups of Hol(N).

    Full mode returns every regular subgroup exactly once.  Anchored mode
    fixes the first branching element x0 and only tries one candidate per
    orbit of Stab_Aut(x0); the result then meets every conjugacy class but
    is not the full list.
    """
    hol = holomorph(N, aut)
    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds
    s = _Search(hol, deadline)
    root = None
    if anchored and N.order > 1:
        a = hol.aut
        x0 = next(v for v in s.order if v != N.identity)
        stab = np.nonzero(a.maps[:, x0] == x0)[0]
        reps, seen = [], set()
        for f in s.cands[x0]:
            if f in seen:
                continue
            reps.append(f)
            seen.update(int(v) for v in a.conj[stab, f])
        root = {"x": x0, "f": reps}
    try:
        s.run(root)
    except BudgetExceeded as exc:
        exc.partial = [RegularSubgroup(hol, lam) for lam in s.found]
        raise
    return [RegularSubgroup(hol, lam) for lam in s.found]


@dataclass
class RegularClass:
    rep: RegularSubgroup
    label: Optional[int]  # index into the catalog of the abstract group
    size: int  # number of regular subgroups in the class (0 when unknown)


def regular_subgroup_classes(N: FiniteGroup, catalog: Sequence[FiniteGroup], aut: Optional[AutomorphismGroup] = None,
                             anchored: bool = False, budget_seconds: Optional[float] = None,
                             limit: int = 84) -> list[RegularClass]:
    """One canonical representative per conjugacy class of regular subgroups,
    labelled by the catalog index of its isomorphism type."""
    if N.order > limit:
        raise GroupError(f"full regular subgroup search limited to order {limit}")
    subs = regular_subgroups(N, aut, anchored=anchored, budget_seconds=budget_seconds)
    by_key: dict = {}
    for G in subs:
        key = G.canonical_key()
        if key in by_key:
            by_key[key][1] += 1
        else:
            by_key[key] = [G, 1]
    out = []
    for key in sorted(by_key):
        G, cnt = by_key[key]
        rep = RegularSubgroup(G.hol, np.array(key))
        label = identify_regular(rep, catalog)
        out.append(RegularClass(rep, label, 0 if anchored else cnt))
    out.sort(key=lambda c: (c.label if c.label is not None else 1 << 30, c.rep.canonical_key()))
    return out


def identify_regular(G: RegularSubgroup, catalog: Sequence[FiniteGroup]) -> Optional[int]:
    M = G.as_group()
    for i, H in enumerate(catalog):
        if H.invariants == M.invariants and are_isomorphic(M, H) is not None:
            return i
    return None


# -- braces ---------------------------------------------------------------------


@dataclass(eq=False)
class SkewBrace:
    add: FiniteGroup
    mul: FiniteGroup
    name: str = ""

    def __post_init__(self):
        if self.add.order != self.mul.order:
            raise GroupError("additive and multiplicative groups differ in size")

    @property
    def order(self) -> int:
        return self.add.order

    @cached_property
    def lam(self) -> np.ndarray:
        """lam[a, b] = a^-1 . (a o b)."""
        inv = self.add.inverses
        return self.add.table[inv[:, None], self.mul.table]

    def to_json(self, labels: Optional[dict] = None) -> dict:
        return {
            "order": self.order,
            "add": self.add.table.tolist(),
            "mul": self.mul.table.tolist(),
            "lambda": self.lam.tolist(),
            "labels": labels or {"add": self.add.name, "mul": self.mul.name},
        }

    def dumps(self, labels: Optional[dict] = None) -> str:
        return json.dumps(self.to_json(labels))


def trivial_brace(G: FiniteGroup) -> SkewBrace:
    return SkewBrace(G, G, f"triv({G.name})")


def brace_from_regular(G: RegularSubgroup) -> SkewBrace:
    if not G.is_regular():
        raise GroupError("subgroup is not regular")
    N = G.hol.base
    return SkewBrace(N, FiniteGroup(G.circ_table, "", validate=False))


def regular_from_brace(B: SkewBrace, hol: HolGroup) -> RegularSubgroup:
    idx = hol.aut.index_of_maps(B.lam)
    if (idx < 0).any():
        raise GroupError("some lambda map is not an automorphism of the additive group")
    return RegularSubgroup(hol, idx)


def verify_brace(B: SkewBrace) -> tuple[bool, Optional[tuple[int, int, int]]]:
    """Check both group axioms and a o (b . c) = (a o b) . a^-1 . (a o c).

    Returns (True, None) or (False, witness) where the witness is the
    lexicographically first failing triple (or (-1, -1, -1) when a table is
    not a group).
    """
    for T in (B.add, B.mul):
        try:
            T.check_axioms()
        except GroupError:
            return False, (-1, -1, -1)
    add, mul = B.add.table, B.mul.table
    inv = B.add.inverses
    n = B.order
    for a in range(n):
        lhs = mul[a][add]  # (b, c) -> a o (b . c)
        ab = mul[a]
        rhs = add[add[ab, inv[a]][:, None], ab[None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            b, c = bad[0]
            return False, (a, int(b), int(c))
    return True, None


def brace_automorphisms(F: RegularSubgroup) -> list[int]:
    """Aut(B) = {g in Aut(E) : Phi_g(F) = F}, as automorphism indices."""
    return F.normalizing_automorphisms()


def brace_characters(F: RegularSubgroup, m: int, space: Optional[CharacterSpace] = None) -> CharacterSpace:
    """sigma in Hom(E, C_m) with pi_2(F) inside the stabilizer of sigma."""
    E = F.hol.base
    if space is None:
        space = homs_to_cyclic(E, m)
    L = F.lambda_maps()
    keep = []
    circ = F.circ_table
    for chi in space:
        e = chi.exponents
        fixed = bool((e[L] == e[None, :]).all())
        morph = bool(np.array_equal(e[circ], (e[:, None] + e[None, :]) % chi.modulus))
        if fixed != morph:
            raise GroupError("stabilizer and circ-homomorphism characterizations disagree")
        if fixed:
            keep.append(chi)
    return CharacterSpace(E, space.capacity, keep)


__all__ = [
    "HolGroup", "holomorph", "RegularSubgroup", "RegularClass", "SkewBrace", "regular_subgroups",
    "regular_subgroup_classes", "brace_from_regular", "regular_from_brace", "verify_brace",
    "brace_automorphisms", "brace_characters", "trivial_brace", "conjugating_automorphisms",
    "are_conjugate", "semiregular_cyclic", "BudgetExceeded", "identify_regular",
]
