"""Finitely generated abelian groups stored in prime-power canonical form.

A group is ``Z^k + Z/p1^r1 + ... + Z/pm^rm`` with the cyclic summands kept
sorted by ``(p, r)``.  Two groups are equal exactly when their canonical
encodings agree, so the dataclasses can be compared and hashed directly.

>>> G = FinAbGroup.from_pairs([(3, 1), (2, 2), (2, 1)])
>>> str(G)
'Z/2 + Z/4 + Z/3'
>>> str(primary_component(G, 2))
'Z/2 + Z/4'
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable

from sympy import factorint, isprime

_isprime = lru_cache(maxsize=256)(isprime)


class SummandAbsent(ValueError):
    """Raised when removing a cyclic summand the group does not have."""


@dataclass(frozen=True, order=True)
class PrimePower:
    p: int
    r: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not _isprime(self.p):
            raise ValueError(f"{self.p!r} is not a prime")
        if not isinstance(self.r, int) or self.r < 1:
            raise ValueError(f"exponent must be >= 1, got {self.r!r}")

    @property
    def order(self) -> int:
        return self.p ** self.r

    def __str__(self):
        return f"Z/{self.order}"


@dataclass(frozen=True)
class FinAbGroup:
    free_rank: int = 0
    torsion: tuple[PrimePower, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")
        # canonical order; object.__setattr__ because the dataclass is frozen
        object.__setattr__(self, "torsion", tuple(sorted(self.torsion)))

    @classmethod
    def from_pairs(cls, pairs: Iterable, free_rank: int = 0) -> "FinAbGroup":
        return cls(free_rank, tuple(PrimePower(int(p), int(r)) for p, r in pairs))

    @classmethod
    def cyclic(cls, order: int) -> "FinAbGroup":
        """Z/order split into its primary parts; order 0 means Z."""
        if order == 0:
            return cls(1)
        if order < 1:
            raise ValueError("order must be >= 0")
        return cls.from_pairs(factorint(order).items())

    @classmethod
    def zero(cls) -> "FinAbGroup":
        return cls()

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(sorted({q.p for q in self.torsion}))

    def order(self) -> int:
        """Order of the torsion subgroup (1 for a free group)."""
        out = 1
        for q in self.torsion:
            out *= q.order
        return out

    def pairs(self) -> list[list[int]]:
        return [[q.p, q.r] for q in self.torsion]

    def to_json(self) -> dict:
        return {"rank": self.free_rank, "torsion": self.pairs()}

    @classmethod
    def from_json(cls, obj: dict) -> "FinAbGroup":
        return cls.from_pairs(obj.get("torsion", []), obj.get("rank", 0))

    def encode(self) -> bytes:
        return repr((self.free_rank, [(q.p, q.r) for q in self.torsion])).encode()

    def __add__(self, other: "FinAbGroup") -> "FinAbGroup":
        return direct_sum(self, other)

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(str(q) for q in _display_order(self.torsion))
        return " + ".join(parts) if parts else "0"


def _display_order(torsion):
    # 2-primary first, then odd primes; inside a prime by exponent
    return sorted(torsion, key=lambda q: (q.p, q.r))


def primary_component(G: FinAbGroup, p: int) -> FinAbGroup:
    return FinAbGroup(0, tuple(q for q in G.torsion if q.p == p))


def away_from(G: FinAbGroup, p: int) -> FinAbGroup:
    """Drop the p-primary torsion, keep the free part (G tensor Z[1/p])."""
    return FinAbGroup(G.free_rank, tuple(q for q in G.torsion if q.p != p))


def drop_summands(G: FinAbGroup, S: Iterable[PrimePower]) -> FinAbGroup:
    have = Counter(G.torsion)
    drop = Counter(S)
    for q, k in drop.items():
        if have[q] < k:
            raise SummandAbsent(f"{q} is not a summand of {G}")
    have.subtract(drop)
    return FinAbGroup(G.free_rank, tuple(have.elements()))


def direct_sum(*groups: FinAbGroup) -> FinAbGroup:
    rank = sum(g.free_rank for g in groups)
    torsion = tuple(q for g in groups for q in g.torsion)
    return FinAbGroup(rank, torsion)


def gcd_cyclic(n: int, q: PrimePower) -> FinAbGroup:
    """The group Z/(n, p^r), evaluated eagerly."""
    return FinAbGroup.cyclic(gcd(n, q.order))
