"""Normal forms for top-cell attaching maps over a wedge target.

An :class:`AttachingVector` records, for every wedge summand of the target,
the coefficients of the finitely many generators a suspended top-cell map can
hit there.  A move adds ``phi o (entry i)`` to entry ``j`` for a fixed map
``phi`` between two summands; it comes from the self-equivalence
``1 + in_j phi pr_i`` of the target, so the mapping cone is unchanged.

Slots per summand (n = 2, source S^6):

=============  =====================  ==========
summand        slots                  family
=============  =====================  ==========
P^5(2^r)       teta, i*eta^2          P5
S^3            eta^3                  S3
S^5            eta                    S5
P^4(2^r)       teta*eta               P4
C^5_r          iP*teta*eta            C5
=============  =====================  ==========

For n = 3 (source S^8, coefficients in Z/3) the families are S^5 with slot
``alpha1``, P^5(3^r) with ``talpha1`` and P^6(3^r) with ``i*alpha1``.

Normalization applies only moves that shrink the measure (number of nonzero
coefficients, then number of coefficients equal to 2), so it terminates.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import groupby
from typing import Callable, Iterable, Optional

from .catalog import (
    CHANG_R,
    MOORE,
    SPHERE,
    SpaceTerm,
    Terms,
    Wedge,
    chang_eta,
    cone_alpha1,
    cone_chang,
    cone_eta3,
    cone_ialpha1,
    cone_ieta2,
    cone_talpha1,
    cone_teta,
    cone_teta_eta,
    format_term,
    sphere,
)
from .pi_tables import FormalSum, pi


class NotNormalized(ValueError):
    pass


class DepthExceeded(RuntimeError):
    pass


class NonTermination(RuntimeError):
    """The measure failed to decrease or a stuck state was reached; a defect."""


SLOTS = {
    "P5": ("teta", "i*eta^2"),
    "S3": ("eta^3",),
    "S5": ("eta",),
    "P4": ("teta*eta",),
    "C5": ("iP*teta*eta",),
    "A5": ("alpha1",),
    "M5": ("talpha1",),
    "M6": ("i*alpha1",),
    "inert": (),
}

GENERATOR_LABELS = tuple(s for fam in SLOTS.values() for s in fam)


def family(t: SpaceTerm, n: int) -> str:
    """Slot family of a target summand for the given n."""
    if n == 2:
        if t.kind == SPHERE and t.dim == 3:
            return "S3"
        if t.kind == SPHERE and t.dim == 5:
            return "S5"
        if t.kind == MOORE and t.p == 2 and t.dim == 5:
            return "P5"
        if t.kind == MOORE and t.p == 2 and t.dim == 4:
            return "P4"
        if t.kind == CHANG_R and t.dim == 3:
            return "C5"
    elif n == 3:
        if t.kind == SPHERE and t.dim == 5:
            return "A5"
        if t.kind == MOORE and t.p == 3 and t.dim == 5:
            return "M5"
        if t.kind == MOORE and t.p == 3 and t.dim == 6:
            return "M6"
    else:
        raise ValueError("attaching vectors exist for n = 2, 3 only")
    if t.kind == MOORE and t.p >= 5:
        return "inert"  # Z/(3, p^r) = 0
    raise ValueError(f"{format_term(t)} is not an admissible target summand for n={n}")


def _element_label(t: SpaceTerm, slot: str) -> str:
    return {
        "teta": f"teta_{t.r}",
        "i*eta^2": "i4*eta^2",
        "teta*eta": f"teta_{t.r}*eta",
        "iP*teta*eta": f"iP*teta_{t.r}*eta",
        "i*alpha1": "i5*alpha1",
    }.get(slot, slot)


_DIGITS = {2: frozenset((0, 1)), 3: frozenset((0, 1, 2))}


@lru_cache(maxsize=4096)
def _slot_counts(n, target):
    return tuple(len(SLOTS[family(t, n)]) for t in target)


@dataclass(frozen=True)
class AttachingVector:
    """Coefficients of a top-cell map S^m -> target, one tuple per summand.

    ``target`` keeps the given summand order; positions matter for traces.
    """

    n: int
    target: tuple[SpaceTerm, ...]
    coeffs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if type(self.target) is not Terms:
            object.__setattr__(self, "target", Terms(self.target))
        if type(self.coeffs) is not tuple or any(type(c) is not tuple for c in self.coeffs):
            object.__setattr__(self, "coeffs", tuple(tuple(c) for c in self.coeffs))
        if len(self.target) != len(self.coeffs):
            raise ValueError("one coefficient tuple per summand")
        mod = self.modulus
        digits = _DIGITS[mod]
        for t, w, c in zip(self.target, _slot_counts(self.n, self.target), self.coeffs):
            if len(c) != w:
                raise ValueError(f"wrong slot count for {format_term(t)}")
            if not digits.issuperset(c):
                raise ValueError(f"coefficients must lie in Z/{mod}")

    @property
    def m(self) -> int:
        return 2 * self.n + 2

    @property
    def modulus(self) -> int:
        return 2 if self.n == 2 else 3

    @classmethod
    def zero(cls, n: int, target: Iterable[SpaceTerm]) -> "AttachingVector":
        target = tuple(target)
        return cls(n, target, tuple((0,) * len(SLOTS[family(t, n)]) for t in target))

    @classmethod
    def from_labels(cls, n: int, entries: list) -> "AttachingVector":
        """Build from ``[(term, {slot label: coefficient}), ...]``."""
        target, coeffs = [], []
        for t, d in entries:
            slots = SLOTS[family(t, n)]
            unknown = set(d) - set(slots)
            if unknown:
                raise ValueError(f"{sorted(unknown)} are not slots of {format_term(t)}")
            target.append(t)
            coeffs.append(tuple(int(d.get(s, 0)) % (2 if n == 2 else 3) for s in slots))
        return cls(n, tuple(target), tuple(coeffs))

    @property
    def entries(self) -> tuple[FormalSum, ...]:
        """The coefficients as elements of pi_m of each summand."""
        out = []
        for t, c in zip(self.target, self.coeffs):
            fam = family(t, self.n)
            if fam == "inert":
                out.append(pi(self.m, t).zero())
                continue
            prime = 3 if self.n == 3 else None
            grp = pi(self.m, t, prime=prime) if prime else pi(self.m, t)
            x = grp.zero()
            for slot, k in zip(SLOTS[fam], c):
                if k:
                    x = x + grp.element(_element_label(t, slot)) * k
            out.append(x)
        return tuple(out)

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if any(c)]

    def measure(self) -> tuple[int, int]:
        flat = [x for c in self.coeffs for x in c]
        return (sum(1 for x in flat if x), sum(1 for x in flat if x == 2))

    def is_normal(self) -> bool:
        sup = self.support()
        if len(sup) > 1:
            return False
        if not sup:
            return True
        c = self.coeffs[sup[0]]
        return sum(1 for x in c if x) == 1 and max(c) == 1

    def labelled(self) -> list[tuple[str, dict]]:
        return [(format_term(t), {s: k for s, k in zip(SLOTS[family(t, self.n)], c) if k})
                for t, c in zip(self.target, self.coeffs)]

    def __str__(self):
        parts = []
        for (name, d) in self.labelled():
            if d:
                gen = " + ".join(s if k == 1 else f"{k}*{s}" for s, k in d.items())
                parts.append(f"{name}: {gen}")
        return "; ".join(parts) if parts else "0"


# -- rules ------------------------------------------------------------------

@dataclass(frozen=True)
class RewriteRule:
    """entry_j += k * phi(entry_i) for summands of families (src, dst).

    ``images`` maps each source slot to the destination slots it hits; a
    source slot absent from ``images`` and listed in ``needs_zero`` must
    vanish for the rule to apply.  ``when(r_i, r_j)`` is the exponent side
    condition.  ``self_map`` rules act with i == j.
    """

    id: str
    src: str
    dst: str
    images: tuple  # ((src slot, (dst slots...)), ...)
    reason: str
    when: Callable[[int, int], bool] = field(default=lambda r, s: True)
    needs_zero: tuple = ()
    self_map: bool = False
    unit: bool = False

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.id, self.src, self.dst, self.images,
                                                self.when, self.needs_zero, self.self_map,
                                                self.unit)))

    def __hash__(self):
        return self._hash

    def image_of(self, slot: str) -> tuple:
        for s, img in self.images:
            if s == slot:
                return img
        return ()


def _le(r, s):
    return r <= s


def _lt(r, s):
    return r < s


def _gt(r, s):
    return r > s


def _ge(r, s):
    return r >= s


_N2_RULES = (
    RewriteRule("M1", "S5", "S3", (("eta", ("eta^3",)),), "eta^2: S^5 -> S^3"),
    RewriteRule("M2", "S5", "P5", (("eta", ("i*eta^2",)),), "i4 eta: S^5 -> P^5(2^s)"),
    RewriteRule("M3", "S5", "P4", (("eta", ("teta*eta",)),), "teta_s: S^5 -> P^4(2^s)"),
    RewriteRule("M4", "S5", "C5", (("eta", ("iP*teta*eta",)),), "iP teta_s: S^5 -> C^5_s"),
    RewriteRule("M5", "P5", "P5", (("teta", ("i*eta^2",)),), "i4 eta q5, q5 teta_r = eta",
                self_map=True),
    RewriteRule("M6", "P5", "S5", (("teta", ("eta",)),), "q5 teta_r = eta"),
    RewriteRule("M7", "P5", "P4", (("teta", ("teta*eta",)),), "teta_s q5"),
    RewriteRule("M8", "P5", "C5", (("teta", ("iP*teta*eta",)),), "iP teta_s q5"),
    RewriteRule("M8b", "P5", "S3", (("teta", ("eta^3",)),), "eta^2 q5"),
    RewriteRule("M9", "P5", "P5", (("teta", ("teta",)),), "B(chi^r_s) teta_r = teta_s, r < s",
                when=_lt),
    RewriteRule("M9e", "P5", "P5", (("teta", ("teta",)), ("i*eta^2", ("i*eta^2",))),
                "identity between equal Moore spaces", when=lambda r, s: r == s),
    RewriteRule("M10", "P5", "P5", (("i*eta^2", ("i*eta^2",)),),
                "B(chi^s_r) i4 eta^2 = i4 eta^2, s > r", when=_gt, needs_zero=("teta",)),
    RewriteRule("M11", "P5", "S3", (("i*eta^2", ("eta^3",)),), "bar-eta_r i4 = eta",
                needs_zero=("teta",)),
    RewriteRule("M12", "P4", "P5", (("teta*eta", ("i*eta^2",)),), "kills i4 eta^2 under teta_r eta"),
    RewriteRule("M13", "P4", "S3", (("teta*eta", ("eta^3",)),), "kills eta^3 under teta_r eta"),
    RewriteRule("M14", "P4", "P4", (("teta*eta", ("teta*eta",)),),
                "B(chi^r_s) teta_r eta = teta_s eta, r <= s", when=_le),
    RewriteRule("M15", "C5", "P5", (("iP*teta*eta", ("i*eta^2",)),),
                "kills i4 eta^2 under iP teta_r eta"),
    RewriteRule("M16", "C5", "S3", (("iP*teta*eta", ("eta^3",)),),
                "kills eta^3 under iP teta_r eta"),
    RewriteRule("M17", "C5", "C5", (("iP*teta*eta", ("iP*teta*eta",)),),
                "alpha^r_s iP teta_r eta = iP teta_s eta, r <= s", when=_le),
    RewriteRule("M18", "P4", "C5", (("teta*eta", ("iP*teta*eta",)),),
                "cross rule, r <= s", when=_le),
    RewriteRule("M19", "C5", "P4", (("iP*teta*eta", ("teta*eta",)),),
                "B(chi^{s+1}_r) xi_s iP teta_s eta = teta_r eta, r > s",
                when=lambda s, r: r > s),
    RewriteRule("M20", "S5", "S5", (("eta", ("eta",)),), "identity of S^5"),
    RewriteRule("M21", "S3", "S3", (("eta^3", ("eta^3",)),), "identity of S^3"),
)

_N3_RULES = (
    RewriteRule("N1", "M5", "A5", (("talpha1", ("alpha1",)),), "q5 talpha1 = alpha1"),
    RewriteRule("N2", "M5", "M6", (("talpha1", ("i*alpha1",)),), "i5 q5 talpha1 = i5 alpha1"),
    RewriteRule("N3", "A5", "M6", (("alpha1", ("i*alpha1",)),), "i5: S^5 -> P^6(3^s)"),
    RewriteRule("N4", "A5", "A5", (("alpha1", ("alpha1",)),), "identity of S^5"),
    RewriteRule("N5", "M5", "M5", (("talpha1", ("talpha1",)),),
                "B(chi^r_s) talpha1 = talpha1, s >= r", when=_le),
    RewriteRule("N6", "M6", "M6", (("i*alpha1", ("i*alpha1",)),),
                "B(chi^r_s) i5 = i5, r >= s", when=_ge),
    RewriteRule("U", "*", "*", (), "degree -1 self-map of a summand", self_map=True, unit=True),
)


def rule_set(n: int) -> tuple[RewriteRule, ...]:
    """Moves for n = 2 (over Z/2) or n = 3 (over Z/3), in listing order."""
    if n == 2:
        return _N2_RULES
    if n == 3:
        return _N3_RULES
    raise ValueError("rule sets exist for n = 2, 3 only")


# pivot priority by surviving slot (n = 2): teta, then the eta-composites
# teta*eta / iP*teta*eta, then i*eta^2, then eta, then eta^3
_PRIORITY = {"teta": 1, "teta*eta": 2, "iP*teta*eta": 2, "i*eta^2": 3, "eta": 4, "eta^3": 5,
             "talpha1": 1, "alpha1": 2, "i*alpha1": 3}


@dataclass(frozen=True)
class Move:
    rule: RewriteRule
    i: int
    j: int
    k: int = 1

    def __str__(self):
        mult = "" if self.k == 1 else f"x{self.k}"
        return f"{self.rule.id}({self.i}->{self.j}){mult}"


@lru_cache(maxsize=None)
def _instances(n: int, target: tuple, rules: tuple) -> tuple:
    """All (rule, i, j, matrix, zero_idx) instances for a target shape."""
    fams = tuple(family(t, n) for t in target)
    out = []
    for rule in rules:
        if rule.unit:
            for i, f in enumerate(fams):
                if SLOTS[f]:
                    out.append((rule, i, i, None, ()))
            continue
        for i, fi in enumerate(fams):
            if fi != rule.src:
                continue
            for j, fj in enumerate(fams):
                if fj != rule.dst or (i == j and not rule.self_map):
                    continue
                if not rule.when(target[i].r, target[j].r):
                    continue
                src_slots, dst_slots = SLOTS[fi], SLOTS[fj]
                mat = tuple((src_slots.index(s), tuple(dst_slots.index(d) for d in img))
                            for s, img in rule.images)
                zero = tuple(src_slots.index(s) for s in rule.needs_zero)
                out.append((rule, i, j, mat, zero))
    return tuple(out)


def _apply_local(coeffs, mod, inst, k):
    """(index, new entry) changed by a move instance, or None if blocked."""
    rule, i, j, mat, zero = inst
    src = coeffs[i]
    if rule.unit:
        return i, tuple((-x) % mod for x in src)
    if any(src[z] for z in zero):
        return None
    dst = list(coeffs[j])
    for si, dis in mat:
        c = src[si]
        if c:
            for di in dis:
                dst[di] = (dst[di] + k * c) % mod
    return j, tuple(dst)


def _apply_raw(coeffs, mod, inst, k):
    hit = _apply_local(coeffs, mod, inst, k)
    if hit is None:
        return None
    j, new = hit
    return coeffs[:j] + (new,) + coeffs[j + 1:]


def apply_move(v: AttachingVector, move: Move) -> AttachingVector:
    """Apply one move; raises ValueError if its side conditions fail."""
    rules = rule_set(v.n)
    if move.rule not in rules:
        rules = rules + (move.rule,)
    for inst in _instances(v.n, v.target, rules):
        if inst[0] == move.rule and inst[1] == move.i and inst[2] == move.j:
            out = _apply_raw(v.coeffs, v.modulus, inst, move.k)
            if out is None:
                raise ValueError(f"{move} needs a vanishing pivot slot")
            return AttachingVector(v.n, v.target, out)
    raise ValueError(f"{move} does not apply to this target")


def _measure(coeffs):
    nz = twos = 0
    for c in coeffs:
        for x in c:
            if x:
                nz += 1
                if x == 2:
                    twos += 1
    return (nz, twos)


def _entry_measure(c):
    return (len(c) - c.count(0), c.count(2))


def _raw_moves(n, target, coeffs, rules, decreasing):
    mod = 2 if n == 2 else 3
    ks = (1,) if mod == 2 else (1, 2)
    base = _measure(coeffs) if decreasing else None
    for inst in _instances(n, target, rules):
        if not any(coeffs[inst[1]]):
            continue  # a zero pivot moves nothing
        for k in ((1,) if inst[0].unit else ks):
            out = _apply_raw(coeffs, mod, inst, k)
            if out is None or out == coeffs:
                continue
            if decreasing and not _measure(out) < base:
                continue
            yield inst, k, out


def moves(v: AttachingVector, rules: Optional[tuple] = None, decreasing: bool = False):
    """Yield ``(Move, result coeffs)`` for every applicable move instance."""
    rules = rule_set(v.n) if rules is None else tuple(rules)
    for inst, k, out in _raw_moves(v.n, v.target, v.coeffs, rules, decreasing):
        yield Move(inst[0], inst[1], inst[2], k), out


def normalize(v: AttachingVector, rules: Optional[tuple] = None):
    """Reduce to normal form; returns ``(normal vector, trace)``.

    Strategy: among measure-decreasing moves take the one whose pivot entry
    carries the strongest generator (teta, then the eta-composites, then
    i*eta^2, eta, eta^3; for n = 3 talpha1, alpha1, i*alpha1), breaking
    ties by leftmost pivot, then leftmost victim.
    """
    # None keys the default rule set without hashing it on every call
    rules = None if rules is None else tuple(rules)
    nf, trace = _normalize_cached(v.n, v.target, v.coeffs, rules)
    return nf, list(trace)


@lru_cache(maxsize=4096)
def _by_pivot(n, target, rules):
    """Instances grouped by (pivot, unit), each group in (victim, rule) order."""
    groups = {}
    for inst in _instances(n, target, rules):
        groups.setdefault((inst[1], inst[0].unit), []).append(inst)
    for g in groups.values():
        g.sort(key=lambda inst: inst[2])  # stable: rule order kept within a victim
    return {key: tuple(g) for key, g in groups.items()}


def _best_move(n, coeffs, groups, slots):
    # smallest (priority, unit, pivot, victim, k) among measure-decreasing moves;
    # a move changes one entry, so the measure drops iff that entry's does
    mod = 2 if n == 2 else 3
    ks = (1,) if mod == 2 else (1, 2)
    pivots = sorted((min(_PRIORITY[s] for s, x in zip(slots[i], c) if x), i)
                    for i, c in enumerate(coeffs) if any(c))
    for _, batch in groupby(pivots, key=lambda pi_: pi_[0]):
        batch = [i for _, i in batch]
        for unit in (False, True):
            for i in batch:
                best = None
                for inst in groups.get((i, unit), ()):
                    if best is not None and inst[2] > best[0][2]:
                        break
                    for k in ((1,) if unit else ks):
                        hit = _apply_local(coeffs, mod, inst, k)
                        if hit is None:
                            continue
                        j, new = hit
                        if not _entry_measure(new) < _entry_measure(coeffs[j]):
                            continue
                        if best is None or k < best[1]:
                            best = (inst, k, coeffs[:j] + (new,) + coeffs[j + 1:])
                        break
                if best is not None:
                    return best
    return None


@lru_cache(maxsize=1 << 18)
def _normalize_cached(n, target, coeffs, rules):
    # one step, then recurse: the next vector is usually cached already
    groups = _by_pivot(n, target, rule_set(n) if rules is None else rules)
    best = _best_move(n, coeffs, groups, _target_slots(n, target))
    if best is None:
        v = AttachingVector(n, target, coeffs)
        if not v.is_normal():
            raise NonTermination(f"stuck at a non-normal vector: {v}")
        return v, ()
    inst, k, nxt = best
    nf, rest = _normalize_cached(n, target, nxt, rules)
    if len(rest) >= 2 * sum(len(c) for c in coeffs) + 1:
        raise NonTermination("no fixpoint within the step bound")
    return nf, (str(Move(inst[0], inst[1], inst[2], k)),) + rest


@lru_cache(maxsize=4096)
def _target_slots(n, target):
    return tuple(SLOTS[family(t, n)] for t in target)


def replay(v: AttachingVector, trace: list[str]) -> AttachingVector:
    """Re-apply a trace produced by :func:`normalize`."""
    by_id = {r.id: r for r in rule_set(v.n)}
    for step in trace:
        rid, rest = step.split("(", 1)
        ij, tail = rest.split(")", 1)
        i, j = (int(x) for x in ij.split("->"))
        k = int(tail[1:]) if tail.startswith("x") else 1
        v = apply_move(v, Move(by_id[rid], i, j, k))
    return v


# -- mapping cones ----------------------------------------------------------

def _cone_for(t: SpaceTerm, slot: str) -> SpaceTerm:
    if slot == "eta":
        return chang_eta(5)
    if slot == "eta^3":
        return cone_eta3(3)
    if slot == "i*eta^2":
        return cone_ieta2(4, t.r)
    if slot == "teta":
        return cone_teta(4, t.r)
    if slot == "teta*eta":
        return cone_teta_eta(4, t.r)
    if slot == "iP*teta*eta":
        return cone_chang(4, t.r)
    if slot == "alpha1":
        return cone_alpha1(5)
    if slot == "talpha1":
        return cone_talpha1(5, t.r)
    if slot == "i*alpha1":
        return cone_ialpha1(5, t.r)
    raise AssertionError(slot)


@lru_cache(maxsize=1 << 14)
def cofiber(v: AttachingVector) -> Wedge:
    """Mapping cone of a normal-form vector as a wedge."""
    if not v.is_normal():
        raise NotNormalized(f"vector is not in normal form: {v}")
    sup = v.support()
    if not sup:
        return Wedge(v.target + (sphere(v.m + 1),))
    i = sup[0]
    t = v.target[i]
    slot = SLOTS[family(t, v.n)][v.coeffs[i].index(1)]
    rest = v.target[:i] + v.target[i + 1:]
    return Wedge(rest + (_cone_for(t, slot),))


@lru_cache(maxsize=1 << 14)
def surviving_generator(v: AttachingVector):
    """``(summand, slot)`` of a normal-form vector, or None for zero."""
    if not v.is_normal():
        raise NotNormalized(f"vector is not in normal form: {v}")
    sup = v.support()
    if not sup:
        return None
    t = v.target[sup[0]]
    return t, SLOTS[family(t, v.n)][v.coeffs[sup[0]].index(1)]


# -- brute-force orbits -----------------------------------------------------

def orbit_equivalent(v1: AttachingVector, v2: AttachingVector, depth: int,
                     rules: Optional[tuple] = None,
                     invariant: Optional[Callable] = None) -> bool:
    """Breadth-first search: is v2 within ``depth`` moves of v1?

    Every move is invertible (its inverse is a move of the same kind), so
    forward search covers forward-or-inverse sequences.  ``invariant`` is an
    optional function of vectors preserved by all moves; differing values
    answer False at once.  Raises :class:`DepthExceeded` when the frontier
    is not exhausted at the depth limit.
    """
    if v1.target != v2.target or v1.n != v2.n:
        raise ValueError("vectors must share target and n")
    if v1.coeffs == v2.coeffs:
        return True
    if invariant is not None and invariant(v1) != invariant(v2):
        return False
    seen = {v1.coeffs}
    frontier = deque([v1.coeffs])
    for _ in range(depth):
        nxt = deque()
        for c in frontier:
            cur = AttachingVector(v1.n, v1.target, c)
            for _mv, out in moves(cur, rules):
                if out == v2.coeffs:
                    return True
                if out not in seen:
                    seen.add(out)
                    nxt.append(out)
        if not nxt:
            return False
        frontier = nxt
    if frontier:
        raise DepthExceeded(f"orbit not exhausted within depth {depth}")
    return False
