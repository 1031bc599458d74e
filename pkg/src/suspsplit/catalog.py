"""The closed vocabulary of elementary complexes used in wedge decompositions.

Every space that can appear in an output wedge is a :class:`SpaceTerm`: a
sphere, a prime-power Moore space, one of the two elementary Chang complexes,
or a two/three-cell complex obtained by gluing one top cell to one of those.
Homology, suspension, localization away from 2 and the detecting cohomology
operations are looked up from fixed per-kind tables.

Parameter conventions (``dim`` is always the first parameter):

============== ===================================  ==========================
kind           space                                printed as
============== ===================================  ==========================
sphere         S^m                                  ``S^m``
moore          P^m(p^r), homology Z/p^r in m-1      ``P^m(Z/q)``
chang_eta      C^{n+2}_eta = S^n u_eta e^{n+2}      ``C_eta^{n+2}``
chang_r        C^{n+2}_r                            ``C_{r}^{n+2}(Z/2^r)``
cone_eta2      S^n u_{eta^2} e^{n+3}                ``(S^n u_{eta^2} e^{n+3})``
cone_teta      P^{n+1}(2^r) u_{teta_r} e^{n+3}
cone_ieta2     P^{n+1}(2^r) u_{i eta^2} e^{n+3}
cone_teta_eta  P^n(2^r) u_{teta_r eta} e^{n+3}
cone_chang     C^{n+1}_r u_{iP teta_r eta} e^{n+3}
cone_eta3      S^m u_{eta^3} e^{m+4}
cone_alpha1    S^m u_{alpha1} e^{m+4}
cone_talpha1   P^m(3^r) u_{talpha1} e^{m+4}
cone_ialpha1   P^{m+1}(3^r) u_{i alpha1} e^{m+4}
============== ===================================  ==========================
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field, replace
from operator import attrgetter
from typing import Iterable, Union

from .torsion import FinAbGroup, PrimePower

MAX_DIM = 64

SPHERE = "sphere"
MOORE = "moore"
CHANG_ETA = "chang_eta"
CHANG_R = "chang_r"
CONE_ETA2 = "cone_eta2"
CONE_TETA = "cone_teta"
CONE_IETA2 = "cone_ieta2"
CONE_TETA_ETA = "cone_teta_eta"
CONE_CHANG = "cone_chang"
CONE_ETA3 = "cone_eta3"
CONE_ALPHA1 = "cone_alpha1"
CONE_TALPHA1 = "cone_talpha1"
CONE_IALPHA1 = "cone_ialpha1"

KINDS = (
    SPHERE, MOORE, CHANG_ETA, CHANG_R, CONE_ETA2, CONE_TETA, CONE_IETA2,
    CONE_TETA_ETA, CONE_CHANG, CONE_ETA3, CONE_ALPHA1, CONE_TALPHA1, CONE_IALPHA1,
)
_KIND_INDEX = {k: i for i, k in enumerate(KINDS)}

# smallest admissible dim parameter per kind
_MIN_DIM = {
    SPHERE: 1, MOORE: 3, CHANG_ETA: 2, CHANG_R: 2, CONE_ETA2: 2, CONE_TETA: 3,
    CONE_IETA2: 3, CONE_TETA_ETA: 4, CONE_CHANG: 4, CONE_ETA3: 3,
    CONE_ALPHA1: 3, CONE_TALPHA1: 4, CONE_IALPHA1: 3,
}
# kinds carrying a 2-primary exponent r, and 3-primary ones
_TWO_PRIMARY = {CHANG_R, CONE_TETA, CONE_IETA2, CONE_TETA_ETA, CONE_CHANG}
_THREE_PRIMARY = {CONE_TALPHA1, CONE_IALPHA1}


class RangeExceeded(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SpaceTerm:
    kind: str
    dim: int
    p: int = 0
    r: int = 0

    def __post_init__(self):
        if self.kind not in _KIND_INDEX:
            raise ValueError(f"unknown kind {self.kind!r}")
        if not _MIN_DIM[self.kind] <= self.dim <= MAX_DIM:
            raise RangeExceeded(f"{self.kind} dimension {self.dim} out of range")
        if self.kind == MOORE:
            PrimePower(self.p, self.r)  # validates
        elif self.kind in _TWO_PRIMARY:
            if self.p != 2 or self.r < 1:
                raise ValueError(f"{self.kind} needs p=2 and r>=1")
        elif self.kind in _THREE_PRIMARY:
            if self.p != 3 or self.r < 1:
                raise ValueError(f"{self.kind} needs p=3 and r>=1")
        elif self.p or self.r:
            raise ValueError(f"{self.kind} takes no torsion parameters")
        object.__setattr__(self, "_key", (_KIND_INDEX[self.kind], self.dim, self.p, self.r))
        object.__setattr__(self, "_hash", hash(self._key))

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return self._key

    @property
    def top_dim(self) -> int:
        return max(homology_table(self))

    def __str__(self):
        return format_term(self)


_term_key = attrgetter("_key")


class Terms(tuple):
    """A tuple of terms that hashes once; used for long-lived targets."""

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = self.__dict__["_hash"] = tuple.__hash__(self)
        return h


# -- constructors -----------------------------------------------------------

def sphere(m: int) -> SpaceTerm:
    return SpaceTerm(SPHERE, m)


def moore(p: int, r: int, m: int) -> SpaceTerm:
    """P^m(p^r): the Moore space with reduced homology Z/p^r in degree m-1."""
    return SpaceTerm(MOORE, m, p, r)


def chang_eta(n: int) -> SpaceTerm:
    return SpaceTerm(CHANG_ETA, n)


def chang_r(n: int, r: int) -> SpaceTerm:
    return SpaceTerm(CHANG_R, n, 2, r)


def cone_eta2(n: int) -> SpaceTerm:
    return SpaceTerm(CONE_ETA2, n)


def cone_teta(n: int, r: int) -> SpaceTerm:
    return SpaceTerm(CONE_TETA, n, 2, r)


def cone_ieta2(n: int, r: int) -> SpaceTerm:
    return SpaceTerm(CONE_IETA2, n, 2, r)


def cone_teta_eta(n: int, r: int) -> SpaceTerm:
    return SpaceTerm(CONE_TETA_ETA, n, 2, r)


def cone_chang(n: int, r: int) -> SpaceTerm:
    return SpaceTerm(CONE_CHANG, n, 2, r)


def cone_eta3(m: int = 3) -> SpaceTerm:
    return SpaceTerm(CONE_ETA3, m)


def cone_alpha1(m: int) -> SpaceTerm:
    return SpaceTerm(CONE_ALPHA1, m)


def cone_talpha1(m: int, r: int) -> SpaceTerm:
    return SpaceTerm(CONE_TALPHA1, m, 3, r)


def cone_ialpha1(m: int, r: int) -> SpaceTerm:
    return SpaceTerm(CONE_IALPHA1, m, 3, r)


# -- wedges -----------------------------------------------------------------

@dataclass(frozen=True)
class Wedge:
    """A multiset of terms in canonical order; the empty wedge is a point."""

    terms: tuple[SpaceTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(sorted(self.terms, key=_term_key)))

    @classmethod
    def of(cls, *parts: Union[SpaceTerm, "Wedge", Iterable[SpaceTerm]]) -> "Wedge":
        out = []
        for part in parts:
            if isinstance(part, SpaceTerm):
                out.append(part)
            elif isinstance(part, Wedge):
                out.extend(part.terms)
            else:
                out.extend(part)
        return cls(tuple(out))

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.terms)
            object.__setattr__(self, "_hash", h)
        return h

    def __add__(self, other: "Wedge") -> "Wedge":
        return Wedge(self.terms + other.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def count(self, term: SpaceTerm) -> int:
        return self.terms.count(term)

    def without(self, term: SpaceTerm) -> "Wedge":
        terms = list(self.terms)
        terms.remove(term)
        return Wedge(tuple(terms))

    def to_json(self) -> list:
        return [term_to_json(t) for t in self.terms]

    def __str__(self):
        return " + ".join(format_term(t) for t in self.terms) if self.terms else "*"


def spheres(m: int, k: int) -> Wedge:
    return Wedge((sphere(m),) * max(k, 0))


def moore_wedge(G: FinAbGroup, m: int) -> Wedge:
    """P^m(G) for a torsion group G, split into prime-power Moore spaces."""
    if G.free_rank:
        raise ValueError("Moore spaces are only formed on torsion groups here")
    return Wedge(tuple(moore(q.p, q.r, m) for q in G.torsion))


# -- homology ---------------------------------------------------------------

def _z():
    return FinAbGroup(1)


def _zq(p, r):
    return FinAbGroup(0, (PrimePower(p, r),))


def homology_table(t: SpaceTerm) -> dict[int, FinAbGroup]:
    """Reduced integral homology of one term, degree -> group."""
    k, n = t.kind, t.dim
    if k == SPHERE:
        return {n: _z()}
    if k == MOORE:
        return {n - 1: _zq(t.p, t.r)}
    if k == CHANG_ETA:
        return {n: _z(), n + 2: _z()}
    if k == CHANG_R:
        return {n: _zq(2, t.r), n + 2: _z()}
    if k == CONE_ETA2:
        return {n: _z(), n + 3: _z()}
    if k in (CONE_TETA, CONE_IETA2):
        return {n: _zq(2, t.r), n + 3: _z()}
    if k == CONE_TETA_ETA:
        return {n - 1: _zq(2, t.r), n + 3: _z()}
    if k == CONE_CHANG:
        return {n - 1: _zq(2, t.r), n + 1: _z(), n + 3: _z()}
    if k in (CONE_ETA3, CONE_ALPHA1):
        return {n: _z(), n + 4: _z()}
    if k == CONE_TALPHA1:
        return {n - 1: _zq(3, t.r), n + 4: _z()}
    if k == CONE_IALPHA1:
        return {n: _zq(3, t.r), n + 4: _z()}
    raise AssertionError(k)


def reduced_homology(w: Union[Wedge, SpaceTerm]) -> dict[int, FinAbGroup]:
    if isinstance(w, SpaceTerm):
        w = Wedge((w,))
    rank = defaultdict(int)
    tors = defaultdict(list)
    for t in w.terms:
        for deg, G in homology_table(t).items():
            rank[deg] += G.free_rank
            tors[deg].extend(G.torsion)
    out = {}
    for deg in sorted(set(rank) | set(tors)):
        G = FinAbGroup(rank[deg], tuple(tors[deg]))
        if not G.is_zero:
            out[deg] = G
    return out


# -- suspension and localization -------------------------------------------

def suspend(t: SpaceTerm, times: int = 1) -> SpaceTerm:
    if t.dim + times > MAX_DIM:
        raise RangeExceeded(f"cannot suspend {t} {times} times")
    return replace(t, dim=t.dim + times)


def suspend_wedge(w: Wedge, times: int = 1) -> Wedge:
    return Wedge(tuple(suspend(t, times) for t in w.terms))


def localize_term(t: SpaceTerm) -> Wedge:
    """The term after inverting 2, as a wedge of catalog terms."""
    k, n = t.kind, t.dim
    if k == SPHERE:
        return Wedge((t,))
    if k == MOORE:
        return Wedge() if t.p == 2 else Wedge((t,))
    if k == CHANG_ETA:
        return Wedge.of(sphere(n), sphere(n + 2))
    if k == CHANG_R:
        return Wedge.of(sphere(n + 2))
    if k == CONE_ETA2:
        return Wedge.of(sphere(n), sphere(n + 3))
    if k == CONE_ETA3:
        return Wedge.of(sphere(n), sphere(n + 4))
    if k in (CONE_TETA, CONE_IETA2, CONE_TETA_ETA):
        return Wedge.of(sphere(n + 3))
    if k == CONE_CHANG:
        return Wedge.of(sphere(n + 1), sphere(n + 3))
    return Wedge((t,))  # 3-primary cones survive


def localize_away_from_2(w: Wedge) -> Wedge:
    return Wedge.of(*(localize_term(t) for t in w.terms))


# -- cohomology operations --------------------------------------------------

@dataclass(frozen=True)
class OperationSignature:
    """Nontrivial stable operations of a complex, by source cohomology degree.

    ``bockstein`` holds ``(degree, p, r)``: beta_r is nonzero from mod-p
    cohomology in ``degree`` to ``degree + 1``.
    """

    sq2: frozenset = field(default_factory=frozenset)
    theta: frozenset = field(default_factory=frozenset)
    tertiary: frozenset = field(default_factory=frozenset)
    p1: frozenset = field(default_factory=frozenset)
    bockstein: frozenset = field(default_factory=frozenset)

    def shifted(self, k: int) -> "OperationSignature":
        return OperationSignature(
            frozenset(d + k for d in self.sq2),
            frozenset(d + k for d in self.theta),
            frozenset(d + k for d in self.tertiary),
            frozenset(d + k for d in self.p1),
            frozenset((d + k, p, r) for d, p, r in self.bockstein),
        )

    def __or__(self, other: "OperationSignature") -> "OperationSignature":
        return OperationSignature(
            self.sq2 | other.sq2, self.theta | other.theta,
            self.tertiary | other.tertiary, self.p1 | other.p1,
            self.bockstein | other.bockstein,
        )

    def by_degree(self) -> dict[int, dict]:
        out = defaultdict(lambda: {"sq2": False, "theta": False, "tertiary": False,
                                   "p1": False, "bockstein": []})
        for name in ("sq2", "theta", "tertiary", "p1"):
            for d in getattr(self, name):
                out[d][name] = True
        for d, p, r in sorted(self.bockstein):
            out[d]["bockstein"].append((p, r))
        return dict(sorted(out.items()))


def operation_signature(t: SpaceTerm) -> OperationSignature:
    k, n, r = t.kind, t.dim, t.r
    f = frozenset
    if k == SPHERE:
        return OperationSignature()
    if k == MOORE:
        return OperationSignature(bockstein=f({(n - 1, t.p, r)}))
    if k == CHANG_ETA:
        return OperationSignature(sq2=f({n}))
    if k == CHANG_R:
        return OperationSignature(sq2=f({n}), bockstein=f({(n, 2, r)}))
    if k == CONE_ETA2:
        return OperationSignature(theta=f({n}))
    if k == CONE_TETA:
        # Sq2 leaves the class that is the Bockstein image
        return OperationSignature(sq2=f({n + 1}), bockstein=f({(n, 2, r)}))
    if k == CONE_IETA2:
        return OperationSignature(theta=f({n}), bockstein=f({(n, 2, r)}))
    if k == CONE_TETA_ETA:
        return OperationSignature(theta=f({n}), bockstein=f({(n - 1, 2, r)}))
    if k == CONE_CHANG:
        return OperationSignature(sq2=f({n - 1}), theta=f({n}),
                                  bockstein=f({(n - 1, 2, r)}))
    if k == CONE_ETA3:
        return OperationSignature(tertiary=f({n}))
    if k == CONE_ALPHA1:
        return OperationSignature(p1=f({n}))
    if k == CONE_TALPHA1:
        return OperationSignature(p1=f({n}), bockstein=f({(n - 1, 3, r)}))
    if k == CONE_IALPHA1:
        return OperationSignature(p1=f({n}), bockstein=f({(n, 3, r)}))
    raise AssertionError(k)


def wedge_signature(w: Wedge) -> OperationSignature:
    sig = OperationSignature()
    for t in w.terms:
        sig = sig | operation_signature(t)
    return sig


# -- text format ------------------------------------------------------------

def _p(m, p, r):
    return f"P^{m}(Z/{p ** r})"


def _c(n, r):
    return f"C_{{{r}}}^{n + 2}(Z/{2 ** r})"


def _cone(base, g, top):
    return f"({base} u_{{{g}}} e^{top})"


def format_term(t: SpaceTerm) -> str:
    k, n, r = t.kind, t.dim, t.r
    if k == SPHERE:
        return f"S^{n}"
    if k == MOORE:
        return _p(n, t.p, r)
    if k == CHANG_ETA:
        return f"C_eta^{n + 2}"
    if k == CHANG_R:
        return _c(n, r)
    if k == CONE_ETA2:
        return _cone(f"S^{n}", "eta^2", n + 3)
    if k == CONE_TETA:
        return _cone(_p(n + 1, 2, r), f"teta_{r}", n + 3)
    if k == CONE_IETA2:
        return _cone(_p(n + 1, 2, r), "i*eta^2", n + 3)
    if k == CONE_TETA_ETA:
        return _cone(_p(n, 2, r), f"teta_{r}*eta", n + 3)
    if k == CONE_CHANG:
        return _cone(_c(n - 1, r), f"iP*teta_{r}*eta", n + 3)
    if k == CONE_ETA3:
        return _cone(f"S^{n}", "eta^3", n + 4)
    if k == CONE_ALPHA1:
        return _cone(f"S^{n}", "alpha1", n + 4)
    if k == CONE_TALPHA1:
        return _cone(_p(n, 3, r), "talpha1", n + 4)
    if k == CONE_IALPHA1:
        return _cone(_p(n + 1, 3, r), "i*alpha1", n + 4)
    raise AssertionError(k)


def term_to_json(t: SpaceTerm) -> dict:
    out = {"kind": t.kind, "dim": t.dim}
    if t.p:
        out["p"] = t.p
        out["r"] = t.r
    out["text"] = format_term(t)
    return out


_RE_SPHERE = re.compile(r"S\^\{?(\d+)\}?$")
_RE_MOORE = re.compile(r"P\^\{?(\d+)\}?\(Z/(\d+)\)$")
_RE_CETA = re.compile(r"(?:C_eta\^\{?(\d+)\}?|C\^\{?(\d+)\}?_\{?eta\}?)$")
_RE_CR = re.compile(r"(?:C_\{?(\d+)\}?\^\{?(\d+)\}?(?:\(Z/(\d+)\))?|C\^\{?(\d+)\}?_\{?(\d+)\}?)$")
_RE_CONE = re.compile(r"\((.+) u_\{(.+)\} e\^\{?(\d+)\}?\)$")


def _prime_power(q: int) -> tuple[int, int]:
    G = FinAbGroup.cyclic(q)
    if len(G.torsion) != 1:
        raise ValueError(f"Z/{q} is not a prime-power cyclic group")
    return G.torsion[0].p, G.torsion[0].r


def parse_term(text: str) -> SpaceTerm:
    """Inverse of :func:`format_term`; also accepts ``C^5_eta`` and ``C^5_r``."""
    s = text.strip()
    if m := _RE_SPHERE.match(s):
        return sphere(int(m[1]))
    if m := _RE_MOORE.match(s):
        p, r = _prime_power(int(m[2]))
        return moore(p, r, int(m[1]))
    if m := _RE_CETA.match(s):
        return chang_eta(int(m[1] or m[2]) - 2)
    if m := _RE_CR.match(s):
        if m[1] is not None:
            r, top = int(m[1]), int(m[2])
            if m[3] is not None and int(m[3]) != 2 ** r:
                raise ValueError(f"inconsistent Chang complex {text!r}")
        else:
            top, r = int(m[4]), int(m[5])
        return chang_r(top - 2, r)
    if m := _RE_CONE.match(s):
        base, g, top = parse_term(m[1]), m[2], int(m[3])
        t = _cone_from(base, g)
        if t.top_dim != top:
            raise ValueError(f"top cell e^{top} does not match {g} on {base}")
        return t
    raise ValueError(f"cannot parse space {text!r}")


def _cone_from(base: SpaceTerm, g: str) -> SpaceTerm:
    k, d = base.kind, base.dim
    if k == SPHERE:
        table = {"eta^2": cone_eta2, "eta^3": cone_eta3, "alpha1": cone_alpha1}
        if g in table:
            return table[g](d)
    if k == MOORE and base.p == 2:
        r = base.r
        if g in (f"teta_{r}", "teta_r"):
            return cone_teta(d - 1, r)
        if g == "i*eta^2":
            return cone_ieta2(d - 1, r)
        if g in (f"teta_{r}*eta", "teta_r*eta"):
            return cone_teta_eta(d, r)
    if k == MOORE and base.p == 3:
        if g == "talpha1":
            return cone_talpha1(d, base.r)
        if g == "i*alpha1":
            return cone_ialpha1(d - 1, base.r)
    if k == CHANG_R and g in (f"iP*teta_{base.r}*eta", "iP*teta_r*eta"):
        return cone_chang(d + 1, base.r)
    raise ValueError(f"no catalog cone for {g} on {base}")


def parse_wedge(text: str) -> Wedge:
    s = text.strip()
    if s in ("*", ""):
        return Wedge()
    return Wedge(tuple(parse_term(part) for part in _split_top(s)))


def _split_top(s: str):
    # split on " + " outside parentheses
    depth, start, out = 0, 0, []
    i = 0
    while i < len(s):
        c = s[i]
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
        elif depth == 0 and s.startswith(" + ", i):
            out.append(s[start:i])
            start = i + 3
            i += 3
            continue
        i += 1
    out.append(s[start:])
    return out
