"""Homotopy groups of catalog spaces with named generators.

Only the groups that the splitting arguments actually use are tabulated:
low homotopy of spheres, the metastable groups of Moore spaces P^{n+1}(p^r)
for n >= 3, the 6-dimensional groups of P^4(2^r), C^5_eta and C^5_r, the
7-dimensional group of P^5(2^r) and the 8-dimensional groups of odd-primary
P^5 and P^6.  Anything else raises :class:`UnsupportedPair`; a group is never
guessed to be zero.

Elements are integer coefficient vectors over the listed cyclic summands.
Composition with the standard maps between these spaces is driven by a
finite relation table (:func:`compose`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Optional

from .catalog import CHANG_ETA, CHANG_R, MOORE, SPHERE, SpaceTerm, format_term


class UnsupportedPair(LookupError):
    pass


class UnknownComposite(LookupError):
    pass


def delta(r: int) -> int:
    """1 for r = 1 and 0 for r >= 2."""
    if r < 1:
        raise ValueError("r must be >= 1")
    return 1 if r == 1 else 0


def varrho(r: int) -> int:
    """r + 1 for r in {1, 2}, r otherwise."""
    if r < 1:
        raise ValueError("r must be >= 1")
    return r + 1 if r <= 2 else r


@dataclass(frozen=True)
class GeneratorSymbol:
    tag: str
    params: tuple = ()

    @property
    def name(self) -> str:
        return _NAMES[self.tag](*self.params)

    def __str__(self):
        return self.name


_NAMES: dict[str, Callable[..., str]] = {
    "one": lambda k: "1",
    "i_n": lambda n: f"i{n}",
    "eta": lambda: "eta",
    "eta2": lambda: "eta^2",
    "eta3": lambda: "eta^3",
    "nu_prime": lambda: "nu'",
    "nu4": lambda: "nu",
    "sigma_nu_prime": lambda: "Sigma(nu')",
    "nu_m": lambda k: f"nu_{k}",
    "alpha1": lambda k: "alpha1",
    "i_eta": lambda n: f"i{n}*eta",
    "i_eta2": lambda n: f"i{n}*eta^2",
    "teta": lambda r: f"teta_{r}",
    "teta_eta": lambda r: f"teta_{r}*eta",
    "jlambda": lambda r: "j*lambda",
    "i3_nu_prime": lambda: "i3*nu'",
    "i_nu4": lambda: "i4*nu",
    "i_sigma_nu_prime": lambda: "i4*Sigma(nu')",
    "iP_jlambda": lambda r: "iP*j*lambda",
    "iP_teta_eta": lambda r: f"iP*teta_{r}*eta",
    "talpha1": lambda m: "talpha1",
    "i_alpha1": lambda m: f"i{m}*alpha1",
    "one_P": lambda: "1_P",
    "Bchi": lambda r, s: f"B(chi^{r}_{s})",
    "i_eta_q": lambda n: f"i{n}*eta*q{n + 1}",
}


@dataclass(frozen=True)
class HomotopyGroup:
    """A finitely generated abelian group with one named generator per summand.

    ``summands`` pairs each generator with its order, 0 meaning infinite.
    ``named`` maps extra element labels (e.g. ``eta^3`` in pi_6(S^3)) to
    coefficient vectors.
    """

    label: str
    summands: tuple = ()
    named: tuple = ()
    prime: Optional[int] = None
    m: Optional[int] = None
    space: Optional[SpaceTerm] = None

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(o for _, o in self.summands)

    @property
    def generators(self) -> tuple[GeneratorSymbol, ...]:
        return tuple(g for g, _ in self.summands)

    @property
    def is_zero(self) -> bool:
        return not self.summands

    def order(self) -> int:
        """Group order; 0 if infinite."""
        out = 1
        for o in self.orders:
            if o == 0:
                return 0
            out *= o
        return out

    def index(self, gen: GeneratorSymbol) -> int:
        return self.generators.index(gen)

    def zero(self) -> "FormalSum":
        return FormalSum(self, (0,) * len(self.summands))

    def gen(self, gen: GeneratorSymbol, k: int = 1) -> "FormalSum":
        v = [0] * len(self.summands)
        v[self.index(gen)] = k
        return FormalSum(self, tuple(v))

    def element(self, label: str) -> "FormalSum":
        """Look up a generator or named element by printed label."""
        for g in self.generators:
            if g.name == label:
                return self.gen(g)
        for name, vec in self.named:
            if name == label:
                return FormalSum(self, vec)
        raise KeyError(f"{label!r} not in {self.label}")

    def __str__(self):
        if not self.summands:
            return "0"
        return " + ".join(
            f"Z<{g.name}>" if o == 0 else f"Z/{o}<{g.name}>" for g, o in self.summands
        )


@dataclass(frozen=True)
class FormalSum:
    group: HomotopyGroup
    coeffs: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if len(self.coeffs) != len(self.group.summands):
            raise ValueError("coefficient vector does not match the group")
        red = tuple(c % o if o else c for c, o in zip(self.coeffs, self.group.orders))
        object.__setattr__(self, "coeffs", red)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        if other.group != self.group:
            raise ValueError("elements of different groups")
        return FormalSum(self.group, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, k: int) -> "FormalSum":
        return FormalSum(self.group, tuple(k * c for c in self.coeffs))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def terms(self):
        return [(g, c) for g, c in zip(self.group.generators, self.coeffs) if c]

    def __str__(self):
        if self.is_zero:
            return "0"
        return " + ".join(g.name if c == 1 else f"{c}*{g.name}" for g, c in self.terms())


def G(tag, *params):
    return GeneratorSymbol(tag, tuple(params))


def _group(m, t, summands, named=(), prime=None):
    label = f"pi({m}, {format_term(t)})"
    # drop trivial summands Z/1
    summands = tuple((g, o) for g, o in summands if o != 1)
    return HomotopyGroup(label, summands, tuple(named), prime, m, t)


def _named(summands, pairs):
    gens = [g for g, o in summands if o != 1]
    out = []
    for label, entries in pairs:
        vec = [0] * len(gens)
        for gen, k in entries:
            vec[gens.index(gen)] = k
        out.append((label, tuple(vec)))
    return out


def pi(m: int, t: SpaceTerm, prime: Optional[int] = None) -> HomotopyGroup:
    """pi_m(t), or its p-primary component when ``prime`` is given."""
    if prime is not None:
        return _primary(m, t, prime)
    if t.kind == SPHERE:
        return _pi_sphere(m, t)
    if t.kind == MOORE:
        return _pi_moore(m, t)
    if t.kind in (CHANG_ETA, CHANG_R):
        return _pi_chang(m, t)
    raise UnsupportedPair(f"pi_{m} of {format_term(t)} is not tabulated")


def _pi_sphere(m, t):
    k = t.dim
    i = m - k
    if i < 0:
        return _group(m, t, ())
    if i == 0:
        return _group(m, t, [(G("one", k), 0)])
    if i == 1:
        return _group(m, t, [(G("eta"), 0 if k == 2 else 2)])
    if i == 2 and k >= 2:
        return _group(m, t, [(G("eta2"), 2)])
    if i == 3 and k == 3:
        s = [(G("nu_prime"), 12)]
        # alpha1(3) = 8 nu' is the orientation making i3 alpha1(3) = 2 i3 nu'
        return _group(m, t, s, _named(s, [("eta^3", [(G("nu_prime"), 6)]),
                                          ("alpha1", [(G("nu_prime"), 8)])]))
    if i == 3 and k == 4:
        s = [(G("nu4"), 0), (G("sigma_nu_prime"), 12)]
        return _group(m, t, s, _named(s, [("eta^3", [(G("sigma_nu_prime"), 6)]),
                                          ("alpha1", [(G("sigma_nu_prime"), 8)])]))
    if i == 3 and k >= 5:
        s = [(G("nu_m", k), 24)]
        return _group(m, t, s, _named(s, [("Sigma(nu')", [(G("nu_m", k), 2)]),
                                          ("eta^3", [(G("nu_m", k), 12)]),
                                          ("alpha1", [(G("nu_m", k), 16)])]))
    raise UnsupportedPair(f"pi_{m}(S^{k}) is not tabulated")


def _pi_moore(m, t):
    p, r, k = t.p, t.r, t.dim
    n = k - 1
    i = m - n
    if n < 3:
        raise UnsupportedPair(f"{format_term(t)} is below the tabulated range")
    if i < 0:
        return _group(m, t, ())
    if i == 0:
        return _group(m, t, [(G("i_n", n), p ** r)])
    if i == 1:
        return _group(m, t, [(G("i_eta", n), 2)] if p == 2 else ())
    if i == 2:
        if p != 2:
            return _group(m, t, ())
        if r == 1:
            s = [(G("teta", 1), 4)]
            return _group(m, t, s, _named(s, [(f"i{n}*eta^2", [(G("teta", 1), 2)])]))
        return _group(m, t, [(G("teta", r), 2), (G("i_eta2", n), 2)])
    if p == 2 and k == 4 and m == 6:
        return _group(m, t, [(G("jlambda", r), 2 ** varrho(r)),
                             (G("i3_nu_prime"), 2 ** (1 - delta(r))),
                             (G("teta_eta", r), 2)])
    if p == 2 and k == 5 and m == 7:
        return _group(m, t, [(G("i_nu4"), 2 ** (r + 1)),
                             (G("i_sigma_nu_prime"), 2 ** min(r - 1, 2)),
                             (G("teta_eta", r), 2)])
    if p != 2 and m == 8 and k in (5, 6):
        order = gcd(3, p ** r)
        gen = G("talpha1", 5) if k == 5 else G("i_alpha1", 5)
        return _group(m, t, [(gen, order)], prime=p)
    raise UnsupportedPair(f"pi_{m}({format_term(t)}) is not tabulated")


def _pi_chang(m, t):
    n = t.dim
    if m < n:
        return _group(m, t, ())
    if m == n:
        # Hurewicz: the bottom cell
        order = 0 if t.kind == CHANG_ETA else 2 ** t.r
        return _group(m, t, [(G("i_n", n), order)])
    if n == 3 and m == 6:
        if t.kind == CHANG_ETA:
            return _group(m, t, [(G("i3_nu_prime"), 6)])
        r = t.r
        return _group(m, t, [(G("iP_jlambda", r), 2 ** (r + delta(r))),
                             (G("i3_nu_prime"), 2 ** (1 - delta(r))),
                             (G("iP_teta_eta", r), 2)])
    raise UnsupportedPair(f"pi_{m}({format_term(t)}) is not tabulated")


def _primary(m, t, prime):
    if t.kind == SPHERE and m - t.dim == 3 and t.dim != 4 and prime == 3:
        return _group(m, t, [(G("alpha1", t.dim), 3)], prime=3)
    full = pi(m, t)
    keep = []
    for g, o in full.summands:
        if o == 0:
            continue
        q = o
        while q % prime == 0:
            q //= prime
        if q == 1:
            keep.append((g, o))
        elif q != o:
            raise UnsupportedPair(f"{prime}-primary part of {full.label} is not tabulated")
    if len(keep) != len(full.summands):
        return _group(m, t, keep, prime=prime)
    return HomotopyGroup(full.label, full.summands, full.named, prime, m, t)


# -- maps and the relation table ------------------------------------------

@dataclass(frozen=True)
class Map:
    tag: str
    source: SpaceTerm
    target: SpaceTerm
    params: tuple = ()

    def __str__(self):
        return f"{self.tag}{self.params}: {format_term(self.source)} -> {format_term(self.target)}"


def pinch(P: SpaceTerm) -> Map:
    """q: P^k(p^r) -> S^k."""
    from .catalog import sphere
    return Map("q", P, sphere(P.dim))


def inclusion(X: SpaceTerm) -> Map:
    """Bottom-cell inclusion S^b -> X of a Moore space or Chang complex."""
    from .catalog import sphere
    bottom = X.dim - 1 if X.kind == MOORE else X.dim
    return Map("i", sphere(bottom), X)


def bchi(k: int, p: int, r: int, s: int) -> Map:
    """B(chi^r_s): P^k(p^r) -> P^k(p^s), inducing chi^r_s on homology."""
    from .catalog import moore
    return Map("B", moore(p, r, k), moore(p, s, k), (r, s))


def zeta_bar(n: int) -> Map:
    from .catalog import chang_eta, sphere
    return Map("zeta", chang_eta(n), sphere(n))


def xi_bar(n: int, r: int) -> Map:
    from .catalog import chang_r, moore
    return Map("xi", chang_r(n, r), moore(2, r + 1, n + 1), (r,))


def b_xi(n: int, s: int, r: int) -> Map:
    """The composite B(chi^{s+1}_r) xi_s: C^{n+2}_s -> P^{n+1}(2^r), r > s."""
    from .catalog import chang_r, moore
    if r <= s:
        raise ValueError("defined for r > s")
    return Map("Bxi", chang_r(n, s), moore(2, r, n + 1), (s, r))


def alpha_rs(n: int, r: int, s: int) -> Map:
    from .catalog import chang_r
    if r > s:
        raise ValueError("alpha^r_s needs r <= s")
    return Map("alpha", chang_r(n, r), chang_r(n, s), (r, s))


def i_P(n: int, r: int) -> Map:
    from .catalog import chang_r, moore
    return Map("iP", moore(2, r, n + 1), chang_r(n, r))


def _chi(p, r, s):
    """Multiplier of B(chi^r_s) on the bottom cell."""
    return 1 if r >= s else p ** (s - r)


def _img(f: Map, g: GeneratorSymbol, m: int, tgt: HomotopyGroup):
    """Image of one source generator, or None when no relation is recorded."""
    tag, tt = f.tag, f.target
    gt = g.tag
    if tag == "q":
        n = f.source.dim - 1
        if gt in ("i_n", "i_eta", "i_eta2", "i3_nu_prime", "i_alpha1"):
            return tgt.zero()
        if gt == "teta":
            return tgt.element("eta")
        if gt == "teta_eta":
            return tgt.element("eta^2")
        if gt == "talpha1":
            return tgt.element("alpha1")
        return None
    if tag == "i":
        X = tt
        if X.kind == MOORE:
            n = X.dim - 1
            table = {"one": f"i{n}", "eta": f"i{n}*eta", "eta2": f"i{n}*eta^2",
                     "nu_prime": "i3*nu'", "alpha1": f"i{n}*alpha1"}
        else:
            table = {"one": f"i{X.dim}", "nu_prime": "i3*nu'"}
            if gt == "alpha1" and X.kind == CHANG_ETA and X.dim == 3:
                return tgt.element("i3*nu'") * 2
        if gt in table:
            try:
                return tgt.element(table[gt])
            except KeyError:
                return None
        return None
    if tag == "B":
        r, s = f.params
        p = f.source.p
        n = f.source.dim - 1
        if gt in ("i_n", "i_eta", "i_eta2", "i_alpha1"):
            label = {"i_n": f"i{n}", "i_eta": f"i{n}*eta", "i_eta2": f"i{n}*eta^2",
                     "i_alpha1": f"i{n}*alpha1"}[gt]
            return tgt.element(label) * _chi(p, r, s)
        if gt == "i3_nu_prime":
            try:
                return tgt.element("i3*nu'") * _chi(p, r, s)
            except KeyError:
                return None
        if s >= r and gt == "teta":
            return tgt.element(f"teta_{s}")
        if s >= r and gt == "teta_eta":
            return tgt.element(f"teta_{s}*eta")
        if s >= r and gt == "talpha1":
            return tgt.element("talpha1")
        return None
    if tag == "zeta":
        if gt == "i_n":
            return tgt.element("1") * 2
        return None
    if tag == "xi":
        if gt == "i_n":
            return tgt.element(f"i{f.source.dim}") * 2
        return None
    if tag == "Bxi":
        s, r = f.params
        if gt == "iP_teta_eta":
            return tgt.element(f"teta_{r}*eta")
        return None
    if tag == "alpha":
        r, s = f.params
        if gt == "iP_teta_eta":
            return tgt.element(f"iP*teta_{s}*eta")
        if gt == "i_n":
            return tgt.element(f"i{f.source.dim}") * _chi(2, r, s)
        return None
    if tag == "iP":
        n = f.source.dim - 1
        table = {"i_n": f"i{n}", "jlambda": "iP*j*lambda",
                 "teta_eta": f"iP*teta_{f.source.r}*eta", "i3_nu_prime": "i3*nu'"}
        if gt in table:
            try:
                return tgt.element(table[gt])
            except KeyError:
                return None
        return None
    return None


def _target_group(m, t, prime):
    if prime:
        try:
            return pi(m, t, prime=prime)
        except UnsupportedPair:
            pass  # mixed-order target: land in the full group
    return pi(m, t)


def compose(f: Map, x: FormalSum, m: Optional[int] = None) -> FormalSum:
    """f o x for x in pi_m(source of f), using recorded relations only."""
    if x.group.space != f.source:
        raise ValueError(f"{x.group.label} is not a homotopy group of {format_term(f.source)}")
    if m is None:
        m = x.group.m
    tgt = _target_group(m, f.target, x.group.prime)
    out = tgt.zero()
    for g, c in x.terms():
        img = _img(f, g, m, tgt)
        if img is None:
            raise UnknownComposite(f"no recorded relation for {f.tag}{f.params} o {g.name}")
        out = out + img * c
    return out


def relation_pairs(f: Map, m: int, prime: Optional[int] = None):
    """All (generator, image) pairs of pi_m(source) recorded for f."""
    src = pi(m, f.source, prime) if prime else pi(m, f.source)
    tgt = _target_group(m, f.target, prime)
    out = []
    for g in src.generators:
        img = _img(f, g, m, tgt)
        if img is not None:
            out.append((src.gen(g), img))
    return out


# -- suspension status ------------------------------------------------------

@dataclass(frozen=True)
class SuspensionMarks:
    suspended: tuple  # FormalSum elements that are suspensions
    non_suspension: tuple  # generators known not to be suspensions


def suspended_generators(m: int, t: SpaceTerm) -> SuspensionMarks:
    """Suspension elements of the 6-dimensional groups entering the top cell."""
    if m != 6:
        raise UnsupportedPair(f"suspension data recorded only for pi_6, not pi_{m}")
    grp = pi(m, t)
    if t.kind == SPHERE and t.dim == 3:
        return SuspensionMarks((grp.element("eta^3"),), (G("nu_prime"),))
    if t.kind == SPHERE and t.dim == 5:
        return SuspensionMarks((grp.element("eta"),), ())
    if t.kind == MOORE and t.p == 2 and t.dim == 5:
        return SuspensionMarks((grp.element(f"teta_{t.r}"), grp.element("i4*eta^2")), ())
    if t.kind == MOORE and t.p == 2 and t.dim == 4:
        non = tuple(g for g in grp.generators if g.tag in ("jlambda", "i3_nu_prime"))
        return SuspensionMarks((grp.element(f"teta_{t.r}*eta"),), non)
    if t.kind == CHANG_ETA and t.dim == 3:
        return SuspensionMarks((), grp.generators)
    if t.kind == CHANG_R and t.dim == 3:
        non = tuple(g for g in grp.generators if g.tag in ("iP_jlambda", "i3_nu_prime"))
        return SuspensionMarks((grp.element(f"iP*teta_{t.r}*eta"),), non)
    raise UnsupportedPair(f"no suspension data for pi_6({format_term(t)})")


# -- mapping sets between Moore spaces ------------------------------------

def moore_self_maps(n: int, r: int, s: int) -> HomotopyGroup:
    """[P^{n+1}(2^r), P^{n+1}(2^s)] for n >= 3."""
    if n < 3:
        raise UnsupportedPair("mapping sets recorded for n >= 3")
    label = f"[P^{n + 1}(Z/{2 ** r}), P^{n + 1}(Z/{2 ** s})]"
    if r == s == 1:
        return HomotopyGroup(label, ((G("one_P"), 4),))
    return HomotopyGroup(label, ((G("Bchi", r, s), 2 ** min(r, s)), (G("i_eta_q", n), 2)))
