"""Double semidirect products, Aut(Z_p x|_sigma E) and the G(sigma, tau) pair."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .groups import FiniteGroup, GroupError, cyclic, generating_set, primitive_root, semidirect_product
from .holomorph import HolGroup, RegularSubgroup, SkewBrace, trivial_brace
from .morphisms import AutomorphismGroup, Character, stabilizer_of_character


def unit_values(chi: Character, p: int) -> np.ndarray:
    """sigma(a) as a unit mod p, with zeta the least primitive root."""
    return chi.values_mod_p(p, primitive_root(p))


def semidirect_Zp(p: int, E: FiniteGroup, sigma: Character, name: Optional[str] = None) -> FiniteGroup:
    """Z_p x|_sigma E, element (m, a) at index m + p*a, (m,a)(n,b) = (m + sigma(a) n, ab)."""
    if E.order % p == 0:
        raise GroupError("p must not divide |E|")
    u = unit_values(sigma, p)
    Zp = cyclic(p, gen_name="z", name=f"C{p}")
    m = np.arange(p)
    action = (u[:, None] * m[None, :]) % p
    if name is None:
        k = sigma.kernel_size
        name = f"C{p}x{E.name}" if k == E.order else f"C{p}:{k}{E.name}"
    G = semidirect_product(Zp, E, action, name)
    G.sigma = sigma
    G.prime = p
    return G


@dataclass(frozen=True)
class SemidirectAut:
    """(m, a) -> (k m + i - sigma(a) i, lam(a)); ``lam`` indexes Aut(E)."""

    k: int
    i: int
    lam: int

    def images(self, p: int, units: np.ndarray, autE: AutomorphismGroup) -> np.ndarray:
        n = len(units)
        idx = np.arange(p * n)
        m, a = idx % p, idx // p
        first = (self.k * m + self.i - units[a] * self.i) % p
        return first + p * autE.maps[self.lam][a]


def aut_of_semidirect(p: int, sigma: Character, E: FiniteGroup,
                      autE: Optional[AutomorphismGroup] = None) -> AutomorphismGroup:
    """Aut(Z_p x|_sigma E) as triples (k, i, lam) with lam in the stabilizer of sigma."""
    if E.order % p == 0:
        raise GroupError("p must not divide |E|")
    from .morphisms import automorphism_group

    if autE is None:
        autE = automorphism_group(E)
    N = semidirect_Zp(p, E, sigma)
    units = unit_values(sigma, p)
    stab = stabilizer_of_character(autE, sigma)
    shifts = [0] if sigma.is_trivial else list(range(p))
    structured = [SemidirectAut(k, i, lam) for lam in stab for k in range(1, p) for i in shifts]
    n = E.order
    idx = np.arange(p * n)
    m, a = idx % p, idx // p
    K = np.array([s.k for s in structured])[:, None]
    I = np.array([s.i for s in structured])[:, None]
    L = np.array([s.lam for s in structured])
    maps = (K * m[None, :] + I - units[a][None, :] * I) % p + p * autE.maps[L][:, a]
    A = AutomorphismGroup(N, maps, structured)
    A.autE = autE
    A.units = units
    A.prime = p
    A._struct_index = {s: j for j, s in enumerate(A.structured)}
    return A


def semidirect_aut_index(A: AutomorphismGroup, k: int, i: int, lam: int) -> int:
    if (A.units == 1).all():
        i = 0  # trivial sigma: every coboundary vanishes
    try:
        return A._struct_index[SemidirectAut(k % A.prime, i % A.prime, lam)]
    except KeyError:
        raise GroupError(f"({k}, {i}, {lam}) is not an automorphism of this semidirect product") from None


# -- double semidirect products ------------------------------------------------


@dataclass
class DsdpSpec:
    """sigma[b], tau[b] are automorphisms of A (image arrays); sigma is a
    homomorphism on (B, .), tau on (B, o)."""

    A: SkewBrace
    B: SkewBrace
    sigma: np.ndarray
    tau: np.ndarray

    def validate(self) -> None:
        A, B = self.A, self.B
        for arr, tab, what in ((self.sigma, B.add.table, "sigma"), (self.tau, B.mul.table, "tau")):
            arr = np.asarray(arr)
            if arr.shape != (B.order, A.order):
                raise GroupError(f"{what} must map each element of B to a map on A")
            for f in arr:
                if sorted(f) != list(range(A.order)):
                    raise GroupError(f"{what} takes a non-bijective value")
                for T in (A.add.table, A.mul.table):
                    if not np.array_equal(f[T], T[f[:, None], f[None, :]]):
                        raise GroupError(f"{what} takes a value outside Aut(A)")
            # homomorphism: arr[b1 b2] = arr[b1] o arr[b2]
            if not np.array_equal(arr[tab], _compose_all(arr)):
                raise GroupError(f"{what} is not a homomorphism")


def _compose_all(arr: np.ndarray) -> np.ndarray:
    """out[b1, b2] = arr[b1] o arr[b2]."""
    return arr[np.arange(len(arr))[:, None, None], arr[None, :, :]]


def check_dsdp_condition(spec: DsdpSpec) -> tuple[bool, Optional[tuple[int, int, int]]]:
    """sigma(b1 o b2 . b1^-1) lam_a = lam_a tau(b1) sigma(b2) tau(bar b1) for all a, b1, b2.

    A pass over generator pairs runs first as a quick filter; the verdict and
    any witness come from the full pass (lexicographically first (a, b1, b2)).
    """
    A, B = spec.A, spec.B
    S, T = np.asarray(spec.sigma), np.asarray(spec.tau)
    lamA = A.lam
    addB, mulB = B.add.table, B.mul.table
    inv_add, inv_mul = B.add.inverses, B.mul.inverses

    def failures(b1s, b2s) -> np.ndarray:
        out = np.zeros((A.order, len(b1s), len(b2s)), dtype=bool)
        for r, b1 in enumerate(b1s):
            c = addB[mulB[b1, b2s], inv_add[b1]]  # b1 o b2 . b1^-1
            lhs = S[c][:, lamA]  # (b2, a, x): sigma(c)(lam_a(x))
            inner = T[b1][S[b2s][:, T[inv_mul[b1]]]]  # (b2, x)
            rhs = lamA[np.arange(A.order)[None, :, None], inner[:, None, :]]  # lam_a(inner(x))
            out[:, r, :] = (lhs != rhs).any(axis=2).T
        return out

    gens = generating_set(B.add) or [B.add.identity]
    quick = failures(np.array(gens), np.array(gens))
    full = failures(np.arange(B.order), np.arange(B.order))
    bad = np.argwhere(full)
    if len(bad):
        a, b1, b2 = (int(v) for v in bad[0])
        return False, (a, b1, b2)
    assert not quick.any()
    return True, None


def double_semidirect(spec: DsdpSpec, check: bool = True) -> SkewBrace:
    """Brace on A x B, element (a, b) at index a + |A| b."""
    if check:
        ok, wit = check_dsdp_condition(spec)
        if not ok:
            raise GroupError(f"double semidirect condition fails at {wit}")
    A, B = spec.A, spec.B
    S, T = np.asarray(spec.sigma), np.asarray(spec.tau)
    na, nb = A.order, B.order
    idx = np.arange(na * nb)
    a, b = idx % na, idx // na
    add = A.add.table[a[:, None], S[b[:, None], a[None, :]]] + na * B.add.table[b[:, None], b[None, :]]
    mul = A.mul.table[a[:, None], T[b[:, None], a[None, :]]] + na * B.mul.table[b[:, None], b[None, :]]
    name = f"dsdp({A.add.name},{B.add.name})"
    return SkewBrace(FiniteGroup(add, name + ".add"), FiniteGroup(mul, name + ".mul"), name)


def trivial_prime_brace(p: int) -> SkewBrace:
    return trivial_brace(cyclic(p, gen_name="z", name=f"C{p}"))


def spec_from_characters(p: int, B: SkewBrace, sigma: Character, tau: Character) -> DsdpSpec:
    """A = trivial brace Z_p; sigma, tau act by multiplication by units."""
    A = trivial_prime_brace(p)
    m = np.arange(p)
    su, tu = unit_values(sigma, p), unit_values(tau, p)
    S = (su[:, None] * m[None, :]) % p
    T = (tu[:, None] * m[None, :]) % p
    return DsdpSpec(A, B, S, T)


# -- the G(sigma, tau) pair ----------------------------------------------------


def build_G_pair(F: RegularSubgroup, sigma: Character, tau: Character, p: int,
                 autN: Optional[AutomorphismGroup] = None) -> tuple[RegularSubgroup, RegularSubgroup]:
    """G(sigma, tau) and G(sigma, tau)' inside Hol(Z_p x|_sigma E).

    ``F`` realizes the brace in Hol(E); ``tau`` is a character of the
    multiplicative group, carried on the same index set as E.
    """
    E = F.hol.base
    autE = F.hol.aut
    L = F.lambda_maps()
    if not (sigma.exponents[L] == sigma.exponents[None, :]).all():
        raise GroupError("sigma is not a brace character: pi_2(F) is not in its stabilizer")
    if autN is None:
        autN = aut_of_semidirect(p, sigma, E, autE)
    N = autN.base
    hol = HolGroup(N, autN)
    su, tu = unit_values(sigma, p), unit_values(tau, p)
    su_inv = np.array([pow(int(v), -1, p) for v in su])
    n = E.order
    lam_G = np.empty(p * n, dtype=np.int64)
    lam_H = np.empty(p * n, dtype=np.int64)
    for a in range(n):
        fa = int(F.lam[a])
        g_idx = semidirect_aut_index(autN, int(su_inv[a] * tu[a]) % p, 0, fa)
        for m in range(p):
            lam_G[m + p * a] = g_idx
            # first coordinate m' = sigma(a) m, so the coboundary index is -sigma(a)^-1 m'
            lam_H[m + p * a] = semidirect_aut_index(autN, int(tu[a]), int(-su_inv[a] * m) % p, fa)
    return RegularSubgroup(hol, lam_G), RegularSubgroup(hol, lam_H)


@dataclass
class DsdpDecomposition:
    complement: list[int]  # the sub-brace playing the role of B, indexed like E
    sigma: np.ndarray  # unit by which each complement element acts in (.)
    tau: np.ndarray  # unit by which it acts in (o)
    handed: str  # "left": x = t.s = t o s;  "mixed": x = s.t = t o s


def dsdp_decomposition(B: SkewBrace, p: int, handed: str = "left") -> list[DsdpDecomposition]:
    """Ways to read a brace carried on Z_p x|_sigma E (our index layout) as a
    double semidirect product of the trivial brace Z_p and a sub-brace.

    Complements of Z_p in the additive group are {(i - sigma(a) i, a)}.  The
    strict ("left") reading needs t o s = t . s for t in Z_p and s in the
    complement, so that one coordinate system serves both operations.  The
    "mixed" reading asks for t o s = s . t instead, i.e. the additive
    semidirect product written with the complement acting from the right.
    """
    if handed not in ("left", "mixed"):
        raise ValueError(handed)
    n = B.order // p
    add, mul = B.add.table, B.mul.table
    inv, inv_mul = B.add.inverses, B.mul.inverses
    P = np.arange(p)  # (m, e) at index m
    if not np.array_equal(add[P][:, P], mul[P][:, P]):
        return []
    # sigma(a) read off from (0,a) . (1,e) . (0,a)^-1
    units = np.array([add[add[p * a, 1], inv[p * a]] % p for a in range(n)])
    out = []
    for i in range(p):
        S = [int((i - units[a] * i) % p + p * a) for a in range(n)]
        Sset = set(S)
        if any(mul[x, y] not in Sset for x in S for y in S):
            continue
        if handed == "left":
            agree = all(mul[t, s] == add[t, s] for t in P for s in S)
        else:
            agree = all(mul[t, s] == add[s, t] for t in P for s in S)
        if not agree:
            continue
        sig = np.array([add[add[s, 1], inv[s]] for s in S])
        tau = np.array([mul[mul[s, 1], inv_mul[s]] for s in S])
        if (sig >= p).any() or (tau >= p).any():
            continue
        out.append(DsdpDecomposition(S, sig, tau, handed))
    return out


__all__ = [
    "semidirect_Zp", "SemidirectAut", "aut_of_semidirect", "semidirect_aut_index", "DsdpSpec",
    "check_dsdp_condition", "double_semidirect", "trivial_prime_brace", "spec_from_characters",
    "build_G_pair", "unit_values", "dsdp_decomposition", "DsdpDecomposition",
]
