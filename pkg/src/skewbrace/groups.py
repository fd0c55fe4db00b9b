"""Finite groups as integer-indexed Cayley tables.

Elements are dense indices ``0..order-1``.  Tables are materialized numpy
arrays; holomorphs (which can get large) live in :mod:`skewbrace.holomorph`
and use pair arithmetic instead.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Sequence

import numpy as np

MATERIALIZE_LIMIT = 4096


class GroupError(ValueError):
    pass


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[x, y]`` is the index of ``x * y``.  ``generator_hints`` maps
    symbolic generator names (``"r"``, ``"s"``, ...) to element indices.
    ``labels`` optionally names every element for display.
    """

    def __init__(
        self,
        table,
        name: str = "",
        generator_hints: Optional[dict[str, int]] = None,
        labels: Optional[Sequence[str]] = None,
        validate: bool = True,
    ):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupError("Cayley table must be a non-empty square array")
        self.table = table
        self.table.setflags(write=False)
        self.order = table.shape[0]
        self.name = name
        self.generator_hints = dict(generator_hints or {})
        self.labels = list(labels) if labels is not None else None
        self.identity = self._find_identity()
        if validate:
            self.check_axioms()

    def _find_identity(self) -> int:
        n = self.order
        rng = np.arange(n)
        for e in range(n):
            if np.array_equal(self.table[e], rng) and np.array_equal(self.table[:, e], rng):
                return e
        raise GroupError("no identity element")

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    @cached_property
    def inverses(self) -> np.ndarray:
        rows, cols = np.nonzero(self.table == self.identity)
        if len(rows) != self.order or not np.array_equal(rows, np.arange(self.order)):
            raise GroupError("some element has no inverse")
        inv = np.empty(self.order, dtype=np.int64)
        inv[rows] = cols
        return inv

    def power(self, a: int, k: int) -> int:
        k %= self.element_orders[a]
        x = self.identity
        for _ in range(k):
            x = self.table[x, a]
        return int(x)

    def check_axioms(self) -> None:
        """Exhaustive identity, inverse and associativity check."""
        n = self.order
        t = self.table
        if t.min() < 0 or t.max() >= n:
            raise GroupError("table entries out of range")
        for row in t:
            if len(np.unique(row)) != n:
                raise GroupError("table is not a Latin square")
        inv = self.inverses
        if not np.all(t[inv, np.arange(n)] == self.identity):
            raise GroupError("left and right inverses differ")
        # (ab)c == a(bc), chunked over a to bound memory
        step = max(1, 2_000_000 // (n * n))
        for start in range(0, n, step):
            a = np.arange(start, min(n, start + step))
            left = t[t[a][:, :, None], np.arange(n)[None, None, :]]
            right = t[a[:, None, None], t[None, :, :]]
            if not np.array_equal(left, right):
                raise GroupError("multiplication is not associative")

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        x = np.arange(n)
        cur = x.copy()
        for k in range(1, n + 1):
            hit = (cur == self.identity) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            cur = self.table[cur, x]
        return orders

    def element_order(self, a: int) -> int:
        return int(self.element_orders[a])

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*map(int, self.element_orders))

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def is_cyclic(self) -> bool:
        return int(self.element_orders.max()) == self.order

    def center(self) -> "Subgroup":
        els = [z for z in range(self.order) if np.array_equal(self.table[z], self.table[:, z])]
        return Subgroup(self, tuple(els))

    @cached_property
    def order_census(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(Counter(map(int, self.element_orders)).items()))

    @cached_property
    def invariants(self) -> tuple:
        """Cheap isomorphism invariants used as a fast reject."""
        return (
            self.order,
            self.is_abelian,
            self.order_census,
            len(self.center()),
            len(derived_subgroup(self)),
        )

    def relabel(self, perm: Sequence[int], name: Optional[str] = None) -> "FiniteGroup":
        """Return an isomorphic copy where old element ``x`` becomes ``perm[x]``."""
        perm = np.asarray(perm, dtype=np.int64)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        table = perm[self.table[inv[:, None], inv[None, :]]]
        hints = {k: int(perm[v]) for k, v in self.generator_hints.items()}
        labels = None
        if self.labels is not None:
            labels = [self.labels[i] for i in inv]
        return FiniteGroup(table, name or self.name, hints, labels, validate=False)

    def gen(self, name: str) -> int:
        return self.generator_hints[name]

    def label(self, x: int) -> str:
        if self.labels is not None:
            return self.labels[x]
        return str(x)

    def word(self, *parts) -> int:
        """Evaluate a product of (generator name, exponent) pairs or bare names."""
        x = self.identity
        for part in parts:
            if isinstance(part, str):
                g, k = part, 1
            else:
                g, k = part
            x = self.table[x, self.power(self.gen(g), k)]
        return int(x)


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(set(int(e) for e in self.elements))))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return int(x) in self._set

    def __iter__(self):
        return iter(self.elements)

    @cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def is_subgroup(self) -> bool:
        g = self.parent
        if g.identity not in self._set:
            return False
        els = np.array(self.elements)
        prods = g.table[els[:, None], els[None, :]]
        return bool(np.isin(prods, els).all() and np.isin(g.inverses[els], els).all())

    def is_normal(self) -> bool:
        g = self.parent
        els = np.array(self.elements)
        conj = g.table[g.table[np.arange(g.order)[:, None], els[None, :]], g.inverses[:, None]]
        return bool(np.isin(conj, els).all())

    def as_group(self, name: str = "") -> FiniteGroup:
        """The subgroup as a standalone group on indices ``0..len-1``."""
        els = np.array(self.elements)
        pos = {e: i for i, e in enumerate(self.elements)}
        lookup = np.full(self.parent.order, -1, dtype=np.int64)
        lookup[els] = np.arange(len(els))
        table = lookup[self.parent.table[els[:, None], els[None, :]]]
        if (table < 0).any():
            raise GroupError("subset is not closed")
        labels = [self.parent.label(e) for e in self.elements]
        hints = {k: pos[v] for k, v in self.parent.generator_hints.items() if v in pos}
        return FiniteGroup(table, name, hints, labels, validate=False)


def subgroup_generated(G: FiniteGroup, gens: Sequence[int]) -> Subgroup:
    gens = [int(g) for g in gens]
    for g in gens:
        if not 0 <= g < G.order:
            raise IndexError(f"element index {g} out of range")
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(G.table[x, g])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(G, tuple(seen))


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    n = np.arange(G.order)
    t, inv = G.table, G.inverses
    comms = t[t[n[:, None], n[None, :]], inv[t[n[None, :], n[:, None]]]]
    return subgroup_generated(G, np.unique(comms))


def quotient_group(G: FiniteGroup, K: Subgroup, name: str = "") -> tuple[FiniteGroup, np.ndarray]:
    """G/K for a normal subgroup K; returns the quotient and the projection map."""
    proj = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for x in range(G.order):
        if proj[x] >= 0:
            continue
        coset = G.table[x, list(K.elements)]
        proj[coset] = len(reps)
        reps.append(x)
    reps = np.array(reps)
    table = proj[G.table[reps[:, None], reps[None, :]]]
    return FiniteGroup(table, name), proj


def abelian_invariants(G: FiniteGroup) -> list[int]:
    """Cyclic factor orders (prime powers, ascending) of an abelian group."""
    if not G.is_abelian:
        raise GroupError("group is not abelian")
    orders = G.element_orders
    factors = []
    for p in _prime_factors(G.order):
        # s[k] = log_p |{x : x^(p^k) = 1}|
        s = [0]
        while p ** s[-1] != _p_part(G.order, p):
            size = int(np.sum(p ** len(s) % orders == 0))
            s.append(round(math.log(size, p)))
        at_least = [s[k] - s[k - 1] for k in range(1, len(s))] + [0]
        for k in range(len(at_least) - 1):
            factors.extend([p ** (k + 1)] * (at_least[k] - at_least[k + 1]))
    return sorted(factors)


def abelianization_invariants(G: FiniteGroup) -> list[int]:
    D = derived_subgroup(G)
    Q, _ = quotient_group(G, D)
    return abelian_invariants(Q)


def _p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and _prime_factors(n) == [n]


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def primitive_root(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        return 1
    qs = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable")


# -- constructions ----------------------------------------------------------


def cyclic(n: int, gen_name: str = "c", name: Optional[str] = None) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group order must be positive")
    i = np.arange(n)
    table = (i[:, None] + i[None, :]) % n
    hints = {gen_name: 1 % n}
    labels = [_power_label(gen_name, k) for k in range(n)]
    return FiniteGroup(table, name or f"C{n}", hints, labels, validate=False)


def _power_label(g: str, k: int) -> str:
    if k == 0:
        return "1"
    return g if k == 1 else f"{g}^{k}"


def metacyclic(m: int, n: int, r: int, names=("x", "y"), name: str = "") -> FiniteGroup:
    """<x, y | x^m = y^n = 1, y x y^-1 = x^r>, elements x^i y^j at index i + m j.

    Requires r^n = 1 mod m so the relations close; otherwise the normal form
    would not describe a group of order m n.
    """
    if m < 1 or n < 1:
        raise GroupError("orders must be positive")
    if math.gcd(r, m) != 1 or pow(r, n, m) != 1 % m:
        raise GroupError(f"inconsistent presentation: {r}^{n} != 1 mod {m} or {r} not a unit")
    order = m * n
    idx = np.arange(order)
    i, j = idx % m, idx // m
    # (x^i y^j)(x^k y^l) = x^(i + r^j k) y^(j + l)
    rj = np.array([pow(r, int(e), m) for e in range(n)])
    ii = (i[:, None] + rj[j][:, None] * i[None, :]) % m
    jj = (j[:, None] + j[None, :]) % n
    table = ii + m * jj
    x, y = names
    labels = []
    for k in range(order):
        a, b = k % m, k // m
        parts = [p for p in (_power_label(x, a), _power_label(y, b)) if p != "1"]
        labels.append("".join(parts) or "1")
    return FiniteGroup(table, name, {x: 1 % order if m > 1 else 0, y: m % order}, labels, validate=False)


def direct_product(G: FiniteGroup, H: FiniteGroup, name: Optional[str] = None) -> FiniteGroup:
    """G x H with (g, h) at index g + |G| h."""
    a, b = G.order, H.order
    idx = np.arange(a * b)
    g, h = idx % a, idx // a
    table = G.table[g[:, None], g[None, :]] + a * H.table[h[:, None], h[None, :]]
    hints = {k: v for k, v in G.generator_hints.items()}
    for k, v in H.generator_hints.items():
        hints[k if k not in hints else k + "'"] = a * v + G.identity
    for k in list(G.generator_hints):
        hints[k] = G.generator_hints[k] + a * H.identity
    labels = None
    if G.labels is not None and H.labels is not None:
        labels = []
        for x in range(a * b):
            parts = [G.labels[x % a], H.labels[x // a]]
            parts = [p for p in parts if p != "1"]
            labels.append("".join(parts) or "1")
    return FiniteGroup(table, name or f"{G.name}x{H.name}", hints, labels, validate=False)


def abelian(*orders: int, names: Optional[Sequence[str]] = None) -> FiniteGroup:
    """C_{a1} x C_{a2} x ... with named generators (a, b, c, ... by default)."""
    names = list(names or "abcdefgh"[: len(orders)])
    G = cyclic(orders[0], names[0])
    for n, nm in zip(orders[1:], names[1:]):
        G = direct_product(G, cyclic(n, nm))
    G.name = "x".join(f"C{n}" for n in orders)
    return G


def from_permutations(gens: dict[str, Sequence[int]], name: str = "", limit: int = MATERIALIZE_LIMIT) -> FiniteGroup:
    """The permutation group generated by ``gens`` (0-based image tuples)."""
    gens_t = {k: tuple(v) for k, v in gens.items()}
    degree = len(next(iter(gens_t.values())))
    ident = tuple(range(degree))
    elements = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens_t.values():
                y = tuple(x[g[i]] for i in range(degree))  # x after g
                if y not in index:
                    index[y] = len(elements)
                    elements.append(y)
                    nxt.append(y)
                    if len(elements) > limit:
                        raise GroupError("permutation group exceeds size limit")
        frontier = nxt
    # keep identity first, rest sorted for a stable indexing
    rest = sorted(elements[1:])
    elements = [ident] + rest
    index = {e: i for i, e in enumerate(elements)}
    perms = np.array(elements)
    n = len(elements)
    # x*y is "apply y first, then x"
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        prod = perms[a][perms]  # row b: x_a o x_b
        table[a] = [index[tuple(row)] for row in prod]
    hints = {k: index[v] for k, v in gens_t.items()}
    labels = [cycle_string(e) for e in elements]
    G = FiniteGroup(table, name, hints, labels, validate=False)
    G.permutations = perms
    return G


def cycle_string(perm: Sequence[int]) -> str:
    """Cycle notation with 1-based points, e.g. ``(1,2,3)``."""
    seen = set()
    out = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        out.append("(" + ",".join(str(c + 1) for c in cyc) + ")")
    return "".join(out) or "()"


def perm_from_cycles(degree: int, *cycles: Sequence[int]) -> tuple[int, ...]:
    """1-based cycles to a 0-based image tuple."""
    img = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            img[a - 1] = b - 1
    return tuple(img)


def symmetric(n: int) -> FiniteGroup:
    gens = {"t": perm_from_cycles(n, (1, 2))}
    if n > 2:
        gens["z"] = perm_from_cycles(n, tuple(range(1, n + 1)))
    if n == 1:
        return FiniteGroup([[0]], "S1", {}, ["()"], validate=False)
    return from_permutations(gens, f"S{n}")


def alternating4() -> FiniteGroup:
    gens = {"rho": perm_from_cycles(4, (1, 2, 3)), "mu": perm_from_cycles(4, (1, 2), (3, 4))}
    return from_permutations(gens, "A4")


def dihedral(order: int) -> FiniteGroup:
    """D_{2m} of order ``order`` = 2m as <r, s | r^m, s^2, s r s = r^-1>."""
    if order % 2 or order < 2:
        raise GroupError("dihedral group order must be even")
    m = order // 2
    return metacyclic(m, 2, -1 % m if m > 1 else 0, names=("r", "s"), name=f"D{order}")


def dicyclic12() -> FiniteGroup:
    """<x, y | x^3 = y^4 = 1, y x y^-1 = x^2>."""
    return metacyclic(3, 4, 2, names=("x", "y"), name="Dic12")


def semidirect_product(kernel: FiniteGroup, quotient: FiniteGroup, action, name: str = "") -> FiniteGroup:
    """kernel x| quotient on pairs (k, q) stored at index k + |K| q.

    ``action[q]`` is the automorphism of the kernel (an image array) by which
    ``q`` acts; ``(k,q)(k',q') = (k * action[q](k'), q q')``.
    """
    K, Q = kernel.order, quotient.order
    act = np.asarray(action, dtype=np.int64)
    if act.shape != (Q, K):
        raise GroupError("action must give one kernel map per quotient element")
    # homomorphism into Aut(kernel)
    qs = np.arange(Q)
    composed = act[qs[:, None, None], act[None, :, :]]  # composed[q1, q2, :] = act[q1][act[q2][:]]
    if not np.array_equal(composed, act[quotient.table]):
        raise GroupError("action is not a homomorphism")
    for q in range(Q):
        f = act[q]
        if sorted(f) != list(range(K)) or not np.array_equal(f[kernel.table], kernel.table[f[:, None], f[None, :]]):
            raise GroupError("action lands outside Aut(kernel)")
    order = K * Q
    if order > MATERIALIZE_LIMIT:
        raise GroupError(f"product of order {order} exceeds the materialization limit")
    idx = np.arange(order)
    k, q = idx % K, idx // K
    kk = kernel.table[k[:, None], act[q[:, None], k[None, :]]]
    qq = quotient.table[q[:, None], q[None, :]]
    table = kk + K * qq
    hints = {}
    for nm, v in kernel.generator_hints.items():
        hints[nm] = v + K * quotient.identity
    for nm, v in quotient.generator_hints.items():
        hints[nm if nm not in hints else nm + "'"] = kernel.identity + K * v
    labels = None
    if kernel.labels is not None and quotient.labels is not None:
        labels = []
        for x in range(order):
            parts = [p for p in (kernel.labels[x % K], quotient.labels[x // K]) if p != "1"]
            labels.append("".join(parts) or "1")
    G = FiniteGroup(table, name, hints, labels, validate=False)
    G.components = (kernel, quotient)
    return G


# -- presets and text specs -----------------------------------------------


def preset(name: str) -> FiniteGroup:
    key = name.strip()
    if key in ("C1", "1"):
        return cyclic(1)
    if key == "A4":
        return alternating4()
    if key == "Dic12":
        return dicyclic12()
    if key == "C6xC2":
        return abelian(6, 2, names=("a", "b"))
    if key == "Q8":
        return _quaternion8()
    m = re.fullmatch(r"S(\d+)", key)
    if m:
        return symmetric(int(m.group(1)))
    m = re.fullmatch(r"D(\d+)", key)
    if m:
        return dihedral(int(m.group(1)))
    m = re.fullmatch(r"C(\d+)|Cn\((\d+)\)", key)
    if m:
        n = int(m.group(1) or m.group(2))
        return cyclic(n)
    m = re.fullmatch(r"C(\d+)(?:xC(\d+))+", key)
    if m:
        orders = [int(t) for t in re.findall(r"\d+", key)]
        return abelian(*orders)
    raise GroupError(f"unknown group preset {name!r}")


def _quaternion8() -> FiniteGroup:
    # x^i y^j with x^4 = 1, y^2 = x^2, y x y^-1 = x^-1; index i + 4 j
    table = np.empty((8, 8), dtype=np.int64)
    for a in range(8):
        for b in range(8):
            i, j = a % 4, a // 4
            k, l = b % 4, b // 4
            ii = (i + (k if j == 0 else -k)) % 4
            jj = j + l
            if jj == 2:
                ii, jj = (ii + 2) % 4, 0
            table[a, b] = ii + 4 * jj
    labels = ["1", "x", "x^2", "x^3", "y", "xy", "x^2y", "x^3y"]
    return FiniteGroup(table, "Q8", {"x": 1, "y": 4}, labels, validate=False)


PRESETS_12 = ("C12", "C6xC2", "A4", "D12", "Dic12")


def groups_of_order(n: int) -> list[FiniteGroup]:
    """Isomorphism-class representatives for the orders this library supports."""
    if n == 1:
        return [cyclic(1, name="C1")]
    if n == 12:
        return [preset(k) for k in PRESETS_12]
    if n == 8:
        return [cyclic(8), abelian(4, 2), abelian(2, 2, 2), dihedral(8), _quaternion8()]
    ps = _prime_factors(n)
    if len(ps) == 1:
        p = ps[0]
        if n == p:
            return [cyclic(n)]
        if n == p * p:
            return [cyclic(n), abelian(p, p)]
    if len(ps) == 2 and ps[0] * ps[1] == n:
        p, q = ps
        out = [cyclic(n)]
        if (q - 1) % p == 0:
            if p == 2:
                out.append(dihedral(n))
            else:
                r = _element_of_order(q, p)
                out.append(metacyclic(q, p, r, names=("x", "y"), name=f"C{q}:C{p}"))
        return out
    raise GroupError(f"no group catalog for order {n}")


def _element_of_order(q: int, p: int) -> int:
    g = primitive_root(q)
    return pow(g, (q - 1) // p, q)


def make_group(spec: str) -> FiniteGroup:
    """Parse the text syntax: ``C12``, ``C6xC2``, ``A4``, ``D12``, ``Dic12``,
    ``Cn(k)`` or ``sd(Cp, E, sigma=<id>)``."""
    text = spec.replace(" ", "")
    m = re.fullmatch(r"sd\(C(\d+),(.+),sigma=(\d+)\)", text)
    if m:
        from .dsdp import semidirect_Zp
        from .morphisms import homs_to_cyclic

        p = int(m.group(1))
        if not is_prime(p):
            raise GroupError(f"kernel C{p} must have prime order")
        E = make_group(m.group(2))
        chars = homs_to_cyclic(E, p - 1).characters
        sid = int(m.group(3))
        if sid >= len(chars):
            raise GroupError(f"sigma id {sid} out of range ({len(chars)} characters)")
        return semidirect_Zp(p, E, chars[sid])
    if text.startswith("sd("):
        raise GroupError(f"malformed semidirect spec {spec!r}")
    return preset(text)


def generating_set(G: FiniteGroup) -> list[int]:
    """Greedy small generating set, largest element orders first."""
    order_idx = sorted(range(G.order), key=lambda x: (-G.element_orders[x], x))
    gens: list[int] = []
    current = {G.identity}
    for x in order_idx:
        if len(current) == G.order:
            break
        if x in current:
            continue
        gens.append(x)
        current = set(subgroup_generated(G, gens).elements)
    return gens


@dataclass
class _Level:
    elements: np.ndarray  # BFS order, identity first
    layers: list[tuple[np.ndarray, np.ndarray, np.ndarray]]  # (child, parent, gen position)


class _GenPlan:
    """Spanning trees for the chain <g1> <= <g1,g2> <= ... used to extend
    generator images to whole maps level by level."""

    def __init__(self, G: FiniteGroup, gens: Sequence[int]):
        self.G = G
        self.gens = list(gens)
        self.levels = [self._level(i + 1) for i in range(len(self.gens))]

    def _level(self, k: int) -> _Level:
        G = self.G
        gens = self.gens[:k]
        seen = np.full(G.order, False)
        seen[G.identity] = True
        frontier = np.array([G.identity])
        layers = []
        order = [G.identity]
        while len(frontier):
            ch, pa, gi = [], [], []
            for pos, g in enumerate(gens):
                kids = G.table[frontier, g]
                for c, p in zip(kids, frontier):
                    if not seen[c]:
                        seen[c] = True
                        ch.append(c)
                        pa.append(p)
                        gi.append(pos)
            if not ch:
                break
            layers.append((np.array(ch), np.array(pa), np.array(gi)))
            order.extend(ch)
            frontier = np.array(ch)
        return _Level(np.array(order), layers)


def iter_homomorphisms(G: FiniteGroup, H: FiniteGroup, injective: bool = False,
                       gens: Optional[Sequence[int]] = None) -> Iterator[np.ndarray]:
    """All homomorphisms G -> H (as image arrays), by backtracking over
    generator images with a consistency check on each intermediate subgroup."""
    gens = list(gens) if gens is not None else generating_set(G)
    if not gens:
        img = np.full(G.order, H.identity, dtype=np.int64)
        yield img
        return
    plan = _GenPlan(G, gens)
    ords = G.element_orders
    hords = H.element_orders
    cands = []
    for g in gens:
        if injective:
            c = np.nonzero(hords == ords[g])[0]
        else:
            c = np.nonzero(ords[g] % hords == 0)[0]
        cands.append(c)
    images = [0] * len(gens)

    def extend(level: int) -> np.ndarray | None:
        lv = plan.levels[level]
        img = np.full(G.order, -1, dtype=np.int64)
        img[G.identity] = H.identity
        himg = np.array(images[: level + 1])
        for ch, pa, gi in lv.layers:
            img[ch] = H.table[img[pa], himg[gi]]
        els = lv.elements
        for pos in range(level + 1):
            g = gens[pos]
            if not np.array_equal(img[G.table[els, g]], H.table[img[els], himg[pos]]):
                return None
        if injective and len(np.unique(img[els])) != len(els):
            return None
        return img

    def rec(level: int):
        for h in cands[level]:
            images[level] = int(h)
            img = extend(level)
            if img is None:
                continue
            if level + 1 == len(gens):
                yield img
            else:
                yield from rec(level + 1)

    yield from rec(0)


def iter_isomorphisms(G: FiniteGroup, H: FiniteGroup) -> Iterator[np.ndarray]:
    if G.order != H.order:
        return
    yield from iter_homomorphisms(G, H, injective=True)


def are_isomorphic(G: FiniteGroup, H: FiniteGroup):
    """An isomorphism G -> H as a GroupMorphism, or None."""
    from .morphisms import GroupMorphism

    if G.invariants != H.invariants:
        return None
    for img in iter_isomorphisms(G, H):
        return GroupMorphism(G, H, img)
    return None


def identify(G: FiniteGroup, catalog: Sequence[FiniteGroup]) -> Optional[int]:
    """Index of the catalog group isomorphic to G."""
    for i, H in enumerate(catalog):
        if G.invariants == H.invariants and are_isomorphic(G, H) is not None:
            return i
    return None


def random_relabeling(G: FiniteGroup, rng) -> FiniteGroup:
    perm = rng.permutation(G.order)
    return G.relabel(perm)


__all__ = [
    "FiniteGroup", "Subgroup", "GroupError", "make_group", "preset", "cyclic", "abelian",
    "metacyclic", "dihedral", "dicyclic12", "alternating4", "symmetric", "direct_product",
    "semidirect_product", "subgroup_generated", "are_isomorphic", "iter_isomorphisms",
    "iter_homomorphisms", "identify", "groups_of_order", "generating_set", "PRESETS_12",
    "derived_subgroup", "abelian_invariants", "abelianization_invariants", "quotient_group",
    "is_prime", "divisors", "primitive_root",
]
