"""Brute-force checks that do not go through the code they verify.

* :func:`expected_homology` rebuilds the homology of Sigma M from (n, l, d, T)
  alone; :func:`check_homology` compares it with catalog homology.
* :func:`read_profile_bits` reads the operation profile straight off raw
  attaching coefficients, without normalizing.  A sound move must leave it
  unchanged, and attaching mode must land inside the operations-mode answer
  for that profile.
* :func:`check_confluence` explores every measure-decreasing move order.

Reports are plain dataclasses with a pass flag and the first witness.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, product
from math import comb
from typing import Iterator, Optional

from .catalog import Wedge, reduced_homology
from .decomposer import (
    ManifoldInput,
    OperationProfile,
    Sq2Data,
    attaching_vector,
    coeff_lengths,
    decide,
    profile_from_vector,
)
from .normalizer import (
    SLOTS,
    AttachingVector,
    NonTermination,
    cofiber,
    family,
    moves,
    normalize,
    rule_set,
)
from .torsion import FinAbGroup, away_from

DEFAULT_CAP = 10 ** 6


class CapExceeded(RuntimeError):
    pass


@dataclass
class Report:
    name: str
    passed: bool = True
    checked: int = 0
    witness: Optional[str] = None
    details: dict = field(default_factory=dict)

    def fail(self, witness: str):
        if self.passed:
            self.passed = False
            self.witness = witness

    def merge(self, other: "Report") -> "Report":
        self.checked += other.checked
        if not other.passed:
            self.fail(other.witness)
        return self

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked,
                "witness": self.witness, **self.details}

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f" witness: {self.witness}" if self.witness else ""
        return f"{status} {self.name} ({self.checked} checked){tail}"


# -- enumeration ------------------------------------------------------------

@dataclass(frozen=True)
class EnumerationBounds:
    max_l: int = 1
    max_d: int = 1
    max_t2: int = 1
    max_r: int = 2
    n_values: tuple = (2,)
    extra_torsion: FinAbGroup = field(default_factory=FinAbGroup)
    cap: Optional[int] = None

    def __post_init__(self):
        if min(self.max_l, self.max_d, self.max_t2, self.max_r) < 0:
            raise ValueError("bounds must be non-negative")
        if any(n not in (2, 3, 4, 5) for n in self.n_values):
            raise ValueError("n must lie in 2..5")

    @property
    def effective_cap(self) -> int:
        if self.cap is not None:
            return self.cap
        return int(os.environ.get("SUSPSPLIT_CAP", DEFAULT_CAP))


def _exponent_lists(b: EnumerationBounds):
    for t in range(b.max_t2 + 1):
        if t and b.max_r < 1:
            break
        yield from combinations_with_replacement(range(1, b.max_r + 1), t)


def _torsion(prime: int, exps, extra: FinAbGroup) -> FinAbGroup:
    return FinAbGroup.from_pairs([(prime, r) for r in exps]) + extra


def _n2_sections(l: int, t2: int):
    for c1 in range(l + 1):
        for c2 in range(min(t2, l - c1) + 1):
            for chosen in combinations(range(t2), c2):
                yield c1, c2, chosen


def _shapes(b: EnumerationBounds, n: int):
    prime = 2 if n == 2 else 3
    for l in range(b.max_l + 1):
        for d in range(b.max_d + 1):
            for exps in _exponent_lists(b):
                T = _torsion(prime, exps, b.extra_torsion)
                if n == 2:
                    for c1, c2, chosen in _n2_sections(l, len(exps)):
                        yield l, d, T, Sq2Data(c1=c1, c2=c2, chosen=chosen)
                else:
                    yield l, d, T, None


def count_inputs(b: EnumerationBounds, mode: str = "attach") -> int:
    """Closed-form count of :func:`enumerate_inputs` (attach mode)."""
    if mode != "attach":
        return sum(1 for _ in enumerate_inputs(b, mode))
    total = 0
    for n in b.n_values:
        for l in range(b.max_l + 1):
            for d in range(b.max_d + 1):
                for exps in _exponent_lists(b):
                    t = len(exps)
                    if n == 2:
                        for c1 in range(l + 1):
                            for c2 in range(min(t, l - c1) + 1):
                                # x, eps on P^5; y on S^3; z on S^5; s or t per summand
                                bits = 2 * t + (l - c1) + (l - c1 - c2) + t
                                total += comb(t, c2) * 2 ** bits
                    elif n == 3:
                        total += 3 ** (d + 2 * t)
                    else:
                        # one operations-mode input per profile
                        total += 1 + (len(set(exps)) if n == 4 else 0)
    return total


def _n2_profiles(l, c1, c2, T2_exps, chosen):
    yield OperationProfile(tertiary_nontrivial=False)
    if l - c1 >= 1:
        yield OperationProfile(tertiary_nontrivial=True)
        yield OperationProfile(tertiary_nontrivial=None)
    for r in sorted(set(T2_exps)):
        yield OperationProfile(theta_case="no_bockstein_link", theta_r=r, tertiary_nontrivial=None)
        yield OperationProfile(theta_case="bockstein_image", theta_r=r, tertiary_nontrivial=None)
        yield OperationProfile(w2_nonzero=True, sq2h5_case="bockstein_image", sq2h5_r=r,
                               tertiary_nontrivial=None)
    if l - c1 - c2 >= 1:
        yield OperationProfile(w2_nonzero=True, sq2h5_case="no_bockstein_image",
                               tertiary_nontrivial=None)


def _odd_profiles(n, d, T3_exps):
    yield OperationProfile(tertiary_nontrivial=None)
    if n == 3:
        if d >= 1:
            yield OperationProfile(tertiary_nontrivial=None, p1_case="a")
        for r in sorted(set(T3_exps)):
            yield OperationProfile(tertiary_nontrivial=None, p1_case="b", p1_r=r)
            yield OperationProfile(tertiary_nontrivial=None, p1_case="c", p1_r=r)
    elif n == 4:
        for r in sorted(set(T3_exps)):
            yield OperationProfile(tertiary_nontrivial=None, p1_case="nontrivial", p1_r=r)


def enumerate_inputs(b: EnumerationBounds, mode: str = "attach") -> Iterator[ManifoldInput]:
    """Every input within bounds, in a fixed order.

    ``mode="attach"`` yields every coefficient vector (n = 2, 3; n = 4, 5
    give one operations-mode input per shape, as there is nothing to
    attach); ``mode="ops"`` yields every admissible operation profile.
    """
    if mode == "attach":
        total = count_inputs(b)
        if total > b.effective_cap:
            raise CapExceeded(f"{total} inputs exceed the cap {b.effective_cap}")
    produced = 0
    cap = b.effective_cap
    for n in b.n_values:
        for l, d, T, sq2 in _shapes(b, n):
            exps = [q.r for q in T.torsion if q.p == (2 if n == 2 else 3)]
            if mode == "ops" or n >= 4:
                if n == 2:
                    profs = _n2_profiles(l, sq2.c1, sq2.c2, exps, sq2.chosen)
                else:
                    profs = _odd_profiles(n, d, exps)
                for prof in profs:
                    produced += 1
                    if produced > cap:
                        raise CapExceeded(f"more than {cap} inputs")
                    yield ManifoldInput(n, l, d, T, sq2=sq2, profile=prof)
                continue
            shape = ManifoldInput(n, l, d, T, sq2=sq2, mode="attach")
            spans, pos = [], 0
            for k, w in coeff_lengths(shape).items():
                spans.append((k, pos, pos + w))
                pos += w
            mod = 2 if n == 2 else 3
            for flat in product(range(mod), repeat=pos):
                coeffs = {k: list(flat[a:b]) for k, a, b in spans}
                produced += 1
                yield ManifoldInput(n, l, d, T, sq2=sq2, mode="attach", coeffs=coeffs)


# -- homology ---------------------------------------------------------------

def expected_homology(n: int, l: int, d: int, T: FinAbGroup, localized: bool = False) -> dict:
    """Reduced homology of Sigma M read off the homology of M."""
    if localized:
        T = away_from(T, 2)
    table = {
        n + 1: FinAbGroup(l) + T,
        n + 2: FinAbGroup(d) + T,
        n + 3: FinAbGroup(l),
        2 * n + 3: FinAbGroup(1),
    }
    return {k: g for k, g in sorted(table.items()) if not g.is_zero}


def check_homology(inp: ManifoldInput, wedge: Wedge, localized: Optional[bool] = None) -> Report:
    rep = Report("homology", checked=1)
    loc = inp.localized if localized is None else localized
    msg = _homology_mismatch(inp.n, inp.l, inp.d, inp.torsion, loc, wedge)
    if msg:
        rep.fail(msg)
    return rep


@lru_cache(maxsize=1 << 16)
def _homology_mismatch(n, l, d, T, loc, wedge) -> str:
    want = expected_homology(n, l, d, T, loc)
    got = reduced_homology(wedge)
    for k in sorted(set(want) | set(got)):
        a, b = want.get(k, FinAbGroup()), got.get(k, FinAbGroup())
        if a != b:
            return f"degree {k}: expected {a}, got {b} in {wedge}"
    return ""


# -- profiles straight from coefficients --------------------------------------

def read_profile_bits(v: AttachingVector) -> OperationProfile:
    """Operation profile of the cone of v, decided from the raw coefficients."""
    by_slot: dict[str, list[int]] = {}
    for t, c in zip(v.target, v.coeffs):
        for slot, x in zip(SLOTS[family(t, v.n)], c):
            if x:
                by_slot.setdefault(slot, []).append(t.r)
    if v.n == 2:
        if "teta" in by_slot:
            return OperationProfile(w2_nonzero=True, tertiary_nontrivial=None,
                                    sq2h5_case="bockstein_image", sq2h5_r=min(by_slot["teta"]))
        if "eta" in by_slot:
            return OperationProfile(w2_nonzero=True, tertiary_nontrivial=None,
                                    sq2h5_case="no_bockstein_image")
        linked = by_slot.get("teta*eta", []) + by_slot.get("iP*teta*eta", [])
        if linked:
            return OperationProfile(theta_case="bockstein_image", theta_r=min(linked),
                                    tertiary_nontrivial=None)
        if "i*eta^2" in by_slot:
            return OperationProfile(theta_case="no_bockstein_link",
                                    theta_r=max(by_slot["i*eta^2"]), tertiary_nontrivial=None)
        return OperationProfile(tertiary_nontrivial="eta^3" in by_slot)
    if "talpha1" in by_slot:
        return OperationProfile(tertiary_nontrivial=None, p1_case="b",
                                p1_r=min(by_slot["talpha1"]))
    if "alpha1" in by_slot:
        return OperationProfile(tertiary_nontrivial=None, p1_case="a")
    if "i*alpha1" in by_slot:
        return OperationProfile(tertiary_nontrivial=None, p1_case="c",
                                p1_r=max(by_slot["i*alpha1"]))
    return OperationProfile(tertiary_nontrivial=None)


def distinct_targets(b: EnumerationBounds, n: int) -> list[tuple]:
    """Attaching targets arising within bounds, without repeats."""
    seen, out = set(), []
    for l, d, T, sq2 in _shapes(b, n):
        if n not in (2, 3):
            continue
        shape = ManifoldInput(n, l, d, T, sq2=sq2, mode="attach")
        tgt = attaching_vector(shape).target
        if tgt not in seen:
            seen.add(tgt)
            out.append(tgt)
    return out


def all_vectors(n: int, target: tuple) -> Iterator[AttachingVector]:
    mod = 2 if n == 2 else 3
    widths = [len(SLOTS[family(t, n)]) for t in target]
    for flat in product(range(mod), repeat=sum(widths)):
        coeffs, pos = [], 0
        for w in widths:
            coeffs.append(flat[pos:pos + w])
            pos += w
        yield AttachingVector(n, target, tuple(coeffs))


def check_rule_soundness(n: int, bounds: Optional[EnumerationBounds] = None,
                         rules: Optional[tuple] = None) -> Report:
    """Each single move keeps the operation profile and the cone homology."""
    bounds = bounds or EnumerationBounds(max_l=3, max_d=1, max_t2=2, max_r=3, n_values=(n,))
    rules = rule_set(n) if rules is None else tuple(rules)
    rep = Report(f"rule soundness n={n}")
    for target in distinct_targets(bounds, n):
        memo: dict = {}

        def facts(coeffs):
            # (raw profile, cone homology), both invariants of a sound move
            if coeffs not in memo:
                v = AttachingVector(n, target, coeffs)
                nf, _ = normalize(v, rules)
                memo[coeffs] = (read_profile_bits(v), _wedge_homology(cofiber(nf)))
            return memo[coeffs]

        for v in all_vectors(n, target):
            prof, hom = facts(v.coeffs)
            for mv, out in moves(v, rules):
                rep.checked += 1
                prof_w, hom_w = facts(out)
                w = AttachingVector(n, target, out)
                if prof_w != prof:
                    rep.fail(f"{mv} changes the profile: {v} -> {w}")
                    return rep
                if hom_w != hom:
                    rep.fail(f"{mv} changes cone homology: {v} -> {w}")
                    return rep
    return rep


@lru_cache(maxsize=1 << 14)
def _wedge_homology(w: Wedge) -> dict:
    return reduced_homology(w)


def check_confluence(n: int, bounds: Optional[EnumerationBounds] = None,
                     rules: Optional[tuple] = None) -> Report:
    """Every order of measure-decreasing moves ends at the same cone.

    Fixpoints are compared by their mapping cone: equal exponents can leave
    the surviving generator on different, interchangeable summands.
    """
    bounds = bounds or EnumerationBounds(max_l=3, max_d=1, max_t2=2, max_r=3, n_values=(n,))
    rules = rule_set(n) if rules is None else tuple(rules)
    rep = Report(f"confluence n={n}")
    for target in distinct_targets(bounds, n):
        memo: dict = {}

        def ends(coeffs):
            if coeffs in memo:
                return memo[coeffs]
            v = AttachingVector(n, target, coeffs)
            nxt = [out for _mv, out in moves(v, rules, decreasing=True)]
            if not nxt:
                if not v.is_normal():
                    raise NonTermination(f"stuck at {v}")
                res = frozenset([cofiber(v)])
            else:
                res = frozenset().union(*(ends(c) for c in nxt))
            memo[coeffs] = res
            return res

        for v in all_vectors(n, target):
            rep.checked += 1
            try:
                fix = ends(v.coeffs)
            except NonTermination as exc:
                rep.fail(str(exc))
                return rep
            if len(fix) != 1:
                rep.fail(f"{v} reaches {len(fix)} fixpoints: " + " | ".join(sorted(map(str, fix))))
                return rep
    return rep


# -- mode agreement -----------------------------------------------------------

def cross_validate(inp: ManifoldInput) -> Report:
    """Attaching-mode wedge lies in the operations-mode answer."""
    rep = Report("cross validation", checked=1)
    v = attaching_vector(inp)
    prof = read_profile_bits(v)
    if profile_from_vector(v) != prof:
        rep.fail(f"profile of the normal form differs from the raw profile for {v}")
        return rep
    got = decide(inp)
    ops = decide(ManifoldInput(inp.n, inp.l, inp.d, inp.torsion, sq2=inp.sq2,
                               profile=prof, localize=inp.localize))
    if got.wedge not in ops.all_wedges():
        rep.fail(f"{v}: attaching mode gives {got.wedge}, operations mode allows "
                 + " | ".join(str(w) for w in ops.all_wedges()))
    return rep


def sweep(b: EnumerationBounds, check, mode: str = "attach", name: str = "sweep") -> Report:
    rep = Report(name)
    for inp in enumerate_inputs(b, mode):
        r = check(inp)
        rep.merge(r)
        if not rep.passed:
            break
    return rep


def homology_of_decision(inp: ManifoldInput) -> Report:
    res = decide(inp)
    rep = Report("homology")
    for w in res.all_wedges():
        rep.merge(check_homology(inp, w, res.localized))
    return rep
