"""Pauli-string algebra and stabilizer linear algebra over GF(2).

A Pauli string on n sites is stored as a pair of bitmasks plus a phase
power:

    P = i^k * (prod_j X_j^{x_j}) * (prod_j Z_j^{z_j})

with ``x``, ``z`` arbitrary-precision integers (bit j = site j) and
``k`` taken mod 4.  On a computational basis state ``|s>`` this acts as

    P|s> = i^k * (-1)^{popcount(z & s)} |s XOR x>

Products track the phase exactly; commutation is the usual symplectic
form and ignores phases.  Ranks are computed by Gaussian elimination on
the (x|z) rows, using python integers as GF(2) row vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class PauliError(ValueError):
    pass


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    """Signed product of single-site Pauli factors over ``n`` sites."""

    n: int
    x: int
    z: int
    k: int = 0  # phase = i**k

    def __post_init__(self):
        if self.x >> self.n or self.z >> self.n:
            raise PauliError("mask exceeds site count")
        object.__setattr__(self, "k", self.k % 4)

    # -- constructors ------------------------------------------------

    @staticmethod
    def identity(n: int) -> "PauliString":
        return PauliString(n, 0, 0, 0)

    @staticmethod
    def sx(n: int, site: int) -> "PauliString":
        return PauliString(n, 1 << site, 0, 0)

    @staticmethod
    def sz(n: int, site: int) -> "PauliString":
        return PauliString(n, 0, 1 << site, 0)

    @staticmethod
    def sy(n: int, site: int) -> "PauliString":
        # sigma^y = i * X * Z
        return PauliString(n, 1 << site, 1 << site, 1)

    @staticmethod
    def from_masks(n: int, x: int = 0, z: int = 0, phase_power: int = 0) -> "PauliString":
        return PauliString(n, x, z, phase_power)

    @staticmethod
    def x_on(n: int, sites: Iterable[int]) -> "PauliString":
        m = 0
        for s in sites:
            m |= 1 << s
        return PauliString(n, m, 0, 0)

    @staticmethod
    def z_on(n: int, sites: Iterable[int]) -> "PauliString":
        m = 0
        for s in sites:
            m |= 1 << s
        return PauliString(n, 0, m, 0)

    @staticmethod
    def y_on(n: int, sites: Iterable[int]) -> "PauliString":
        m = 0
        c = 0
        for s in sites:
            m |= 1 << s
            c += 1
        return PauliString(n, m, m, c)

    # -- properties ---------------------------------------------------

    @property
    def phase(self) -> complex:
        return (1, 1j, -1, -1j)[self.k]

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def is_identity_mask(self) -> bool:
        return self.x == 0 and self.z == 0

    def is_hermitian(self) -> bool:
        # P+ = i^{-k} (-1)^{x.z} X^x Z^z ; hermitian iff k + popcount(x&z) even
        return (self.k + _popcount(self.x & self.z)) % 2 == 0

    def support(self) -> list[int]:
        m = self.x | self.z
        return [j for j in range(self.n) if (m >> j) & 1]

    def site_label(self, j: int) -> str:
        xb = (self.x >> j) & 1
        zb = (self.z >> j) & 1
        return ("I", "X", "Z", "Y")[xb + 2 * zb]

    def __str__(self) -> str:
        pre = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.k]
        body = "".join(self.site_label(j) for j in range(self.n))
        return pre + body

    # -- algebra ------------------------------------------------------

    def dagger(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z,
                           (-self.k + 2 * _popcount(self.x & self.z)) % 4)


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Exact operator product ``p @ q`` (p applied after q)."""
    if p.n != q.n:
        raise PauliError(f"mask lengths differ: {p.n} != {q.n}")
    # move Z^{z_p} past X^{x_q}: one (-1) per overlapping site
    k = p.k + q.k + 2 * _popcount(p.z & q.x)
    return PauliString(p.n, p.x ^ q.x, p.z ^ q.z, k % 4)


def product(strings: Sequence[PauliString]) -> PauliString:
    if not strings:
        raise PauliError("empty product")
    out = PauliString.identity(strings[0].n)
    for s in strings:
        out = multiply(out, s)
    return out


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff the symplectic form <p,q> = x_p.z_q + z_p.x_q is even."""
    if p.n != q.n:
        raise PauliError(f"mask lengths differ: {p.n} != {q.n}")
    return (_popcount(p.x & q.z) + _popcount(p.z & q.x)) % 2 == 0


def rank_gf2(strings: Sequence[PauliString]) -> int:
    """GF(2) row rank of the symplectic (x|z) representation."""
    if not strings:
        return 0
    n = strings[0].n
    basis: list[int] = []
    rank = 0
    for s in strings:
        v = (s.x << n) | s.z
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
            rank += 1
    return rank


def in_span_gf2(strings: Sequence[PauliString], p: PauliString) -> bool:
    """True iff ``p``'s masks lie in the GF(2) span of ``strings``."""
    return rank_gf2(list(strings) + [p]) == rank_gf2(strings)


@dataclass(frozen=True)
class StabilizerGroup:
    """A commuting generator set with its GF(2) rank."""

    generators: tuple[PauliString, ...]
    rank: int

    @staticmethod
    def from_generators(generators: Sequence[PauliString],
                        check_commuting: bool = True) -> "StabilizerGroup":
        gens = tuple(generators)
        if check_commuting:
            for i in range(len(gens)):
                for j in range(i + 1, len(gens)):
                    if not commutes(gens[i], gens[j]):
                        raise PauliError(
                            f"generators {i} and {j} do not commute")
        return StabilizerGroup(gens, rank_gf2(gens))

    @property
    def n(self) -> int:
        return self.generators[0].n if self.generators else 0

    def commutes_with_all(self, p: PauliString) -> bool:
        return all(commutes(g, p) for g in self.generators)

    def contains_masks(self, p: PauliString) -> bool:
        return in_span_gf2(self.generators, p)


def ground_degeneracy(lat) -> int:
    """Ground-space dimension 2^(N_active - rank) of a built lattice."""
    group = StabilizerGroup.from_generators(lat.stabilizers(),
                                            check_commuting=True)
    return 2 ** (lat.n_active - group.rank)


@dataclass(frozen=True)
class LogicalPair:
    """Conjugate logical operators of one hole."""

    hole: int
    tau_z: PauliString
    tau_x: PauliString


def logical_pair(lat, l: int) -> LogicalPair:
    """Validated logical operator pair for hole ``l`` (0-based).

    tau_z is the flux-label loop of the hole, tau_x the string that
    flips it by transporting a quasiparticle to the boundary port.
    Both are checked against the full generator list rather than
    assumed from their construction.
    """
    tz, tx = lat.logical_operators(l)
    gens = lat.stabilizers()
    for name, op in (("tau_z", tz), ("tau_x", tx)):
        for i, gp in enumerate(gens):
            if not commutes(gp, op):
                raise PauliError(
                    f"{name} of hole {l} anticommutes with stabilizer {i}")
        if not op.is_hermitian():
            raise PauliError(f"{name} of hole {l} is not hermitian")
        sq = multiply(op, op)
        if not (sq.is_identity_mask and sq.k == 0):
            raise PauliError(f"{name} of hole {l} does not square to +1")
        if in_span_gf2(gens, op):
            raise PauliError(f"{name} of hole {l} lies in the stabilizer group")
    if commutes(tz, tx):
        raise PauliError(f"tau_z and tau_x of hole {l} commute")
    # different holes' logicals must commute pairwise
    for m in range(len(lat.holes)):
        if m == l:
            continue
        oz, ox = lat.logical_operators(m)
        for a in (tz, tx):
            for b in (oz, ox):
                if not commutes(a, b):
                    raise PauliError(
                        f"logicals of holes {l} and {m} fail to commute")
    return LogicalPair(l, tz, tx)
