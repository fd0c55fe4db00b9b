"""Automorphism groups, characters into cyclic groups, and orbit machinery."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Hashable, Iterable, Optional, Sequence

import numpy as np

from .groups import (
    FiniteGroup,
    GroupError,
    Subgroup,
    abelianization_invariants,
    generating_set,
    iter_homomorphisms,
    iter_isomorphisms,
    subgroup_generated,
)

BRUTE_FORCE_AUT_LIMIT = 200


@dataclass(frozen=True, eq=False)
class GroupMorphism:
    source: FiniteGroup
    target: FiniteGroup
    map: np.ndarray

    def __call__(self, x: int) -> int:
        return int(self.map[x])

    def is_homomorphism(self) -> bool:
        s, t, m = self.source, self.target, self.map
        return bool(np.array_equal(m[s.table], t.table[m[:, None], m[None, :]]))

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and len(np.unique(self.map)) == self.source.order

    def compose(self, other: "GroupMorphism") -> "GroupMorphism":
        """self after other."""
        return GroupMorphism(other.source, self.target, self.map[other.map])

    def inverse(self) -> "GroupMorphism":
        inv = np.empty_like(self.map)
        inv[self.map] = np.arange(len(self.map))
        return GroupMorphism(self.target, self.source, inv)


class AutomorphismGroup:
    """A group of automorphisms of ``base`` stored as image arrays.

    ``maps[i]`` is the i-th automorphism; index 0 is always the identity.
    Composition follows function composition: ``compose[i, j]`` is the
    index of ``maps[i] o maps[j]``.
    """

    def __init__(self, base: FiniteGroup, maps, structured: Optional[list] = None):
        maps = np.asarray(maps, dtype=np.int64)
        ident = np.arange(base.order)
        if maps.ndim != 2 or maps.shape[1] != base.order:
            raise GroupError("automorphisms must be image arrays over the base group")
        pos = [i for i in range(len(maps)) if np.array_equal(maps[i], ident)]
        if not pos:
            raise GroupError("automorphism list lacks the identity")
        if pos[0] != 0:
            order = [pos[0]] + [i for i in range(len(maps)) if i != pos[0]]
            maps = maps[order]
            if structured is not None:
                structured = [structured[i] for i in order]
        self.base = base
        self.maps = maps
        self.maps.setflags(write=False)
        self.order = len(maps)
        self.structured = structured
        self._gens = generating_set(base) if base.order > 1 else []
        keys = self._encode(maps[:, self._gens]) if self._gens else np.zeros(len(maps), dtype=np.int64)
        self._sorter = np.argsort(keys, kind="stable")
        self._keys_sorted = keys[self._sorter]
        if len(np.unique(keys)) != len(keys):
            raise GroupError("duplicate automorphisms")

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"AutomorphismGroup(of {self.base.name or '?'}, order={self.order})"

    def _encode(self, gen_images: np.ndarray) -> np.ndarray:
        n = self.base.order
        key = np.zeros(gen_images.shape[:-1], dtype=np.int64)
        for c in range(gen_images.shape[-1]):
            key = key * n + gen_images[..., c]
        return key

    def index_of_maps(self, maps: np.ndarray) -> np.ndarray:
        """Indices of the given image arrays (shape (..., n)); -1 if absent."""
        maps = np.asarray(maps)
        if not self._gens:
            return np.zeros(maps.shape[:-1], dtype=np.int64)
        keys = self._encode(maps[..., self._gens])
        pos = np.searchsorted(self._keys_sorted, keys)
        pos = np.clip(pos, 0, self.order - 1)
        found = self._keys_sorted[pos] == keys
        return np.where(found, self._sorter[pos], -1)

    def index_of(self, m) -> int:
        return int(self.index_of_maps(np.asarray(m)[None, :])[0])

    def morphism(self, i: int) -> GroupMorphism:
        return GroupMorphism(self.base, self.base, self.maps[i])

    @cached_property
    def inverse(self) -> np.ndarray:
        inv_maps = np.empty_like(self.maps)
        rows = np.arange(self.order)[:, None]
        inv_maps[rows, self.maps] = np.arange(self.base.order)[None, :]
        idx = self.index_of_maps(inv_maps)
        if (idx < 0).any():
            raise GroupError("automorphism set is not closed under inverses")
        return idx

    @cached_property
    def compose(self) -> np.ndarray:
        k = self.order
        out = np.empty((k, k), dtype=np.int64)
        gimg = self.maps[:, self._gens] if self._gens else None
        for i in range(k):
            if gimg is None:
                out[i] = 0
                continue
            # maps[i] o maps[j], evaluated on the generators only
            imgs = self.maps[i][gimg]
            keys = self._encode(imgs)
            pos = np.clip(np.searchsorted(self._keys_sorted, keys), 0, k - 1)
            if not np.array_equal(self._keys_sorted[pos], keys):
                raise GroupError("automorphism set is not closed under composition")
            out[i] = self._sorter[pos]
        return out

    @cached_property
    def conj(self) -> np.ndarray:
        """``conj[g, f]`` is the index of g f g^-1."""
        c = self.compose
        return c[c, self.inverse[:, None]] if self.order else c

    def conjugates_of(self, f: int) -> np.ndarray:
        """Index of g f g^-1 for every g, without building the full tables."""
        inv_maps = np.empty_like(self.maps)
        rows = np.arange(self.order)[:, None]
        inv_maps[rows, self.maps] = np.arange(self.base.order)[None, :]
        m = self.maps[rows, self.maps[f][inv_maps]]
        return self.index_of_maps(m)

    @cached_property
    def group_structure(self) -> FiniteGroup:
        return FiniteGroup(self.compose, f"Aut({self.base.name})", validate=False)

    def subgroup(self, indices: Iterable[int]) -> Subgroup:
        return Subgroup(self.group_structure, tuple(int(i) for i in indices))

    def generated(self, indices: Iterable[int]) -> Subgroup:
        return subgroup_generated(self.group_structure, list(indices))

    def check_closed(self) -> None:
        self.compose  # raises if not closed
        self.inverse

    def is_valid(self) -> bool:
        b = self.base
        for m in self.maps:
            if len(np.unique(m)) != b.order:
                return False
            if not np.array_equal(m[b.table], b.table[m[:, None], m[None, :]]):
                return False
        return True


def automorphism_group(G: FiniteGroup, limit: int = BRUTE_FORCE_AUT_LIMIT) -> AutomorphismGroup:
    """All automorphisms of G by backtracking over generator images."""
    if G.order > limit:
        raise GroupError(f"brute-force automorphism search limited to order {limit}")
    maps = list(iter_isomorphisms(G, G))
    maps.sort(key=lambda m: tuple(m))
    return AutomorphismGroup(G, np.array(maps))


def automorphism_from_images(G: FiniteGroup, images: dict) -> np.ndarray:
    """Extend generator images (keys: names or indices) to an automorphism."""
    gens, imgs = [], []
    for k, v in images.items():
        gens.append(G.gen(k) if isinstance(k, str) else int(k))
        imgs.append(G.gen(v) if isinstance(v, str) else int(v))
    if len(subgroup_generated(G, gens)) != G.order:
        raise GroupError("given elements do not generate the group")
    from .groups import _GenPlan

    plan = _GenPlan(G, gens)
    lv = plan.levels[-1]
    img = np.full(G.order, -1, dtype=np.int64)
    img[G.identity] = G.identity
    himg = np.array(imgs)
    for ch, pa, gi in lv.layers:
        img[ch] = G.table[img[pa], himg[gi]]
    mor = GroupMorphism(G, G, img)
    if not (mor.is_homomorphism() and mor.is_bijective()):
        raise GroupError("generator images do not define an automorphism")
    return img


# -- characters ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Character:
    """A homomorphism from ``source`` into the cyclic group of order ``modulus``,
    stored additively: the value at x is zeta^exponents[x]."""

    source: FiniteGroup
    modulus: int
    exponents: np.ndarray

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(int(e) for e in self.exponents)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Character)
            and other.source is self.source
            and other.modulus == self.modulus
            and np.array_equal(other.exponents, self.exponents)
        )

    def __hash__(self) -> int:
        return hash((id(self.source), self.modulus, self.key))

    def __repr__(self) -> str:
        return f"Character(order={self.order}, kernel={self.kernel_size}, gens={self.on_generators()})"

    def __call__(self, x: int) -> int:
        return int(self.exponents[x])

    @cached_property
    def order(self) -> int:
        m = self.modulus
        g = 0
        for e in self.exponents:
            g = math.gcd(g, int(e))
        return m // math.gcd(g, m) if m > 1 else 1

    @property
    def is_trivial(self) -> bool:
        return not self.exponents.any()

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, tuple(np.nonzero(self.exponents == 0)[0]))

    @property
    def kernel_size(self) -> int:
        return int(np.sum(self.exponents == 0))

    def precompose(self, g: np.ndarray) -> "Character":
        """sigma o g for an endomorphism g given as an image array."""
        return Character(self.source, self.modulus, self.exponents[np.asarray(g)])

    def is_homomorphism_for(self, table: np.ndarray) -> bool:
        e = self.exponents
        return bool(np.array_equal(e[table], (e[:, None] + e[None, :]) % self.modulus))

    def values_mod_p(self, p: int, zeta: int) -> np.ndarray:
        """Realize as units mod p, with zeta a primitive root."""
        if (p - 1) % self.modulus:
            raise ValueError("modulus must divide p - 1")
        base = pow(zeta, (p - 1) // self.modulus, p)
        table = [pow(base, k, p) for k in range(self.modulus)]
        return np.array(table, dtype=np.int64)[self.exponents]

    def on_generators(self) -> dict:
        hints = self.source.generator_hints
        if hints:
            return {k: int(self.exponents[v]) for k, v in hints.items()}
        return {}

    def pair(self) -> tuple[int, int]:
        """(d, j) with sigma(c) = zeta_d^j for a cyclic source generated by c."""
        gen = self._hint_value(next(iter(self.source.generator_hints)))
        d = self.order
        return d, (gen * d // self.modulus) % d

    def _hint_value(self, name: str) -> int:
        return int(self.exponents[self.source.generator_hints[name]])

    def serialize(self):
        """(d, j) for cyclic sources; (j mod d, i mod 2) with sigma(a) = zeta_d^j,
        sigma(b) = (-1)^i for C6xC2 with generators a, b; otherwise the
        exponents on the named generators."""
        hints = self.source.generator_hints
        d = self.order
        if self.source.is_cyclic and len(hints) == 1:
            return self.pair()
        if set(hints) == {"a", "b"} and self.source.order == 12 and self.source.is_abelian:
            j = (self._hint_value("a") * d // self.modulus) % d
            i = (self._hint_value("b") * 2 // self.modulus) % 2
            return (j, i)
        return tuple(self._hint_value(k) for k in hints)


@dataclass
class CharacterSpace:
    source: FiniteGroup
    capacity: int
    characters: list[Character] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.characters)

    def __iter__(self):
        return iter(self.characters)

    def __getitem__(self, i) -> Character:
        return self.characters[i]

    def index(self, chi: Character) -> int:
        return self._index[chi.key]

    @cached_property
    def _index(self) -> dict:
        return {c.key: i for i, c in enumerate(self.characters)}

    def trivial(self) -> Character:
        return self.characters[0]

    def expected_size(self) -> int:
        return hom_count_formula(self.source, self.capacity)


def hom_count_formula(G: FiniteGroup, m: int) -> int:
    """|Hom(G, C_m)| from the abelianization's cyclic factors."""
    out = 1
    for f in abelianization_invariants(G):
        out *= math.gcd(f, m)
    return out


def homs_to_cyclic(G: FiniteGroup, m: int) -> CharacterSpace:
    if m < 1:
        raise ValueError("modulus must be positive")
    from .groups import cyclic

    target = cyclic(m)
    chars = [Character(G, m, img) for img in iter_homomorphisms(G, target)]
    chars.sort(key=lambda c: c.key)
    space = CharacterSpace(G, m, chars)
    return space


# -- actions ------------------------------------------------------------------


@dataclass
class ActionOrbits:
    acting: list[int]
    points: list
    orbits: list[list[int]]
    stabilizers: list[list[int]]
    permutations: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.orbits)

    def representatives(self, which: str = "first") -> list[int]:
        if which == "first":
            return [o[0] for o in self.orbits]
        if which == "last":
            return [o[-1] for o in self.orbits]
        raise ValueError(which)

    def orbit_of(self, point: int) -> int:
        for i, o in enumerate(self.orbits):
            if point in o:
                return i
        raise KeyError(point)

    def fixed_points(self) -> list[int]:
        return [int(np.sum(row == np.arange(len(self.points)))) for row in self.permutations]

    def burnside_count(self) -> Fraction:
        return Fraction(sum(self.fixed_points()), len(self.acting))


def precompose_action(aut: AutomorphismGroup) -> Callable:
    def act(g: int, chi: Character) -> Character:
        return chi.precompose(aut.maps[g])

    return act


def orbits_and_stabilizers(acting, points, act: Optional[Callable] = None,
                           key: Callable[[object], Hashable] = None) -> ActionOrbits:
    """Orbits and stabilizers of a finite group acting on a finite point set.

    ``acting`` is an AutomorphismGroup, a Subgroup of its group structure, or a
    list of automorphism indices.  The default action is precomposition
    ``(g, sigma) -> sigma o g``.  The orbit count is cross-checked against
    Burnside's average of fixed points.
    """
    aut = None
    if isinstance(acting, AutomorphismGroup):
        aut = acting
        elems = list(range(acting.order))
    elif isinstance(acting, Subgroup):
        elems = list(acting.elements)
    else:
        elems = [int(g) for g in acting]
    pts = list(points)
    if act is None:
        if aut is None:
            raise ValueError("default precomposition action needs the automorphism group")
        act = precompose_action(aut)
    if key is None:
        key = lambda x: x.key if isinstance(x, Character) else x  # noqa: E731
    index = {key(x): i for i, x in enumerate(pts)}
    perms = np.empty((len(elems), len(pts)), dtype=np.int64)
    for r, g in enumerate(elems):
        for i, x in enumerate(pts):
            k = key(act(g, x))
            if k not in index:
                raise GroupError("action does not preserve the point set")
            perms[r, i] = index[k]
    seen = np.full(len(pts), False)
    orbits = []
    stabs = []
    for i in range(len(pts)):
        if seen[i]:
            continue
        orb = sorted(set(int(v) for v in perms[:, i]))
        seen[orb] = True
        orbits.append(orb)
        stabs.append([elems[r] for r in range(len(elems)) if perms[r, i] == i])
        if len(orb) * len(stabs[-1]) != len(elems):
            raise GroupError("orbit-stabilizer relation violated; acting set is not a group")
    out = ActionOrbits(elems, pts, orbits, stabs, perms)
    if out.burnside_count() != len(orbits):
        raise GroupError("Burnside count disagrees with orbit enumeration")
    return out


def stabilizer_of_character(aut: AutomorphismGroup, chi: Character) -> list[int]:
    """Automorphisms g with chi o g = chi."""
    imgs = chi.exponents[aut.maps]
    return [int(g) for g in np.nonzero((imgs == chi.exponents[None, :]).all(axis=1))[0]]


__all__ = [
    "GroupMorphism", "AutomorphismGroup", "automorphism_group", "automorphism_from_images",
    "Character", "CharacterSpace", "homs_to_cyclic", "hom_count_formula", "ActionOrbits",
    "orbits_and_stabilizers", "stabilizer_of_character", "precompose_action",
]
