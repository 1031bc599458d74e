"""Wedge decompositions of the suspension of a Poincare duality complex.

Input: an (n-1)-connected (2n+2)-dimensional complex M with

    H_n = Z^l + T,  H_{n+1} = Z^d + T,  H_{n+2} = Z^l,  H_{2n+2} = Z,

so that the reduced homology of Sigma M is Z^l + T in degree n+1,
Z^d + T in degree n+2, Z^l in degree n+3 and Z in degree 2n+3.

Two entry points: ``mode="ops"`` takes an :class:`OperationProfile` (which
stable operations act nontrivially and how they meet the Bocksteins) and
returns every wedge compatible with it; ``mode="attach"`` takes the
coefficients of the suspended top-cell attaching map, normalizes them and
returns the mapping cone.  n >= 3 results are only valid after inverting 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Optional

from .catalog import (
    CONE_ALPHA1,
    CONE_IALPHA1,
    CONE_TALPHA1,
    CONE_TETA,
    CHANG_ETA,
    Terms,
    Wedge,
    chang_eta,
    chang_r,
    cone_alpha1,
    cone_chang,
    cone_eta3,
    cone_ialpha1,
    cone_ieta2,
    cone_talpha1,
    cone_teta,
    cone_teta_eta,
    localize_away_from_2,
    moore,
    moore_wedge,
    operation_signature,
    sphere,
    spheres,
)
from .normalizer import AttachingVector, cofiber, normalize, surviving_generator
from .torsion import FinAbGroup, PrimePower, away_from, drop_summands, primary_component


class InconsistentProfile(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class LocalizationRequired(ValueError):
    pass


# -- profiles ---------------------------------------------------------------

THETA_CASES = ("trivial", "no_bockstein_link", "bockstein_image")
SQ2H5_CASES = ("no_bockstein_image", "bockstein_image")
P1_CASES_3 = ("trivial", "a", "b", "c")
P1_CASES_4 = ("trivial", "nontrivial")


@dataclass(frozen=True)
class OperationProfile:
    """Operation data of Sigma M.

    n = 2: ``w2_nonzero`` (Sq^2 on the degree-5 classes); when it is False,
    ``theta_case`` with ``theta_r`` (the maximal linked exponent for
    ``no_bockstein_link``, the minimal image exponent for
    ``bockstein_image``) and ``tertiary_nontrivial`` (None = unknown); when
    it is True, ``sq2h5_case`` with ``sq2h5_r`` (minimal image exponent).
    n = 3: ``p1_case`` in a/b/c with ``p1_r`` for b (minimal) and c
    (maximal).  n = 4: ``p1_case`` nontrivial with minimal ``p1_r``.
    """

    w2_nonzero: bool = False
    theta_case: str = "trivial"
    theta_r: Optional[int] = None
    tertiary_nontrivial: Optional[bool] = False
    sq2h5_case: Optional[str] = None
    sq2h5_r: Optional[int] = None
    p1_case: str = "trivial"
    p1_r: Optional[int] = None

    def validate(self, n: int):
        if n == 2:
            if self.theta_case not in THETA_CASES:
                raise InconsistentProfile(f"unknown theta case {self.theta_case!r}")
            if self.p1_case != "trivial":
                raise InconsistentProfile("P^1 data is meaningless for n=2")
            if self.w2_nonzero:
                if self.sq2h5_case not in SQ2H5_CASES:
                    raise InconsistentProfile("w2 nonzero needs an Sq^2 case")
                if (self.sq2h5_case == "bockstein_image") != (self.sq2h5_r is not None):
                    raise InconsistentProfile("sq2h5_r goes with bockstein_image only")
            else:
                if self.sq2h5_case is not None:
                    raise InconsistentProfile("Sq^2 case given but w2 vanishes")
                if (self.theta_case != "trivial") != (self.theta_r is not None):
                    raise InconsistentProfile("theta_r goes with nontrivial theta only")
        else:
            if self.w2_nonzero or self.theta_case != "trivial" or self.sq2h5_case:
                raise InconsistentProfile(f"2-primary operation data is meaningless for n={n}")
            allowed = {3: P1_CASES_3, 4: P1_CASES_4, 5: ("trivial",)}[n]
            if self.p1_case not in allowed:
                raise InconsistentProfile(f"p1 case {self.p1_case!r} not allowed for n={n}")
            needs_r = self.p1_case in ("b", "c", "nontrivial")
            if needs_r != (self.p1_r is not None):
                raise InconsistentProfile("p1_r goes with the Bockstein-linked cases only")

    def to_json(self, n: int) -> dict:
        if n == 2:
            out = {"w2": self.w2_nonzero}
            if self.w2_nonzero:
                out["sq2H5"] = {"case": self.sq2h5_case, "r": self.sq2h5_r}
            else:
                out["theta"] = {"case": self.theta_case, "r": self.theta_r}
                out["tertiary"] = self.tertiary_nontrivial
            return out
        return {"p1": {"case": self.p1_case, "r": self.p1_r}}


# -- input ------------------------------------------------------------------

@dataclass(frozen=True)
class Sq2Data:
    """Either the matrices (A, B) or an already reduced (c1, c2, chosen)."""

    A: Optional[tuple] = None
    B: Optional[tuple] = None
    c1: Optional[int] = None
    c2: Optional[int] = None
    chosen: Optional[tuple] = None


@dataclass(frozen=True)
class ManifoldInput:
    n: int
    l: int
    d: int
    torsion: FinAbGroup = field(default_factory=FinAbGroup)
    sq2: Optional[Sq2Data] = None
    mode: str = "ops"
    profile: Optional[OperationProfile] = None
    coeffs: Optional[dict] = None
    localize: Optional[bool] = None

    def __post_init__(self):
        if self.n not in (2, 3, 4, 5):
            raise ShapeMismatch("n must be in 2..5")
        if self.l < 0 or self.d < 0:
            raise ShapeMismatch("l and d must be non-negative")
        if self.torsion.free_rank:
            raise ShapeMismatch("torsion group must be finite")
        if self.mode not in ("ops", "attach"):
            raise ShapeMismatch("mode is 'ops' or 'attach'")
        if self.mode == "attach" and self.n > 3:
            raise ShapeMismatch("attaching mode exists for n = 2, 3 only")
        if self.mode == "attach" and self.profile is not None:
            raise ShapeMismatch("attaching mode takes coefficients, not a profile")
        if self.mode == "ops" and self.coeffs is not None:
            raise ShapeMismatch("operations mode takes a profile, not coefficients")

    @property
    def T2(self) -> FinAbGroup:
        return primary_component(self.torsion, 2)

    @property
    def t2(self) -> int:
        return len(self.T2.torsion)

    @property
    def localized(self) -> bool:
        if self.localize is None:
            return self.n >= 3
        return self.localize


# -- homology sections --------------------------------------------------------

def reduce_phi(A, B, exponents) -> tuple[int, int, list[int]]:
    """Reduce the components of the degree-(n+1) attaching map.

    Row i is the i-th sphere S^{n+1}; A (l x l) records eta onto the S^n
    summands, B (l x t2) records i_n eta onto P^{n+1}(2^{r_j}), columns in
    the order of ``exponents``.  Moves: row operations; column operations
    on A; (eta, i_n eta) ~ (eta, 0); and (i_n eta, i_n eta) ~ (i_n eta, 0)
    when the surviving column has the larger exponent.

    Returns ``(c1, c2, chosen)`` with ``chosen`` the surviving B columns.
    """
    l = len(A)
    t2 = len(exponents)
    if any(len(row) != l for row in A):
        raise ShapeMismatch("A must be l x l")
    if len(B) != l or any(len(row) != t2 for row in B):
        raise ShapeMismatch("B must be l x t2")
    # rows as bitmasks: A in bits [0, l), B in bits [l, l + t2)
    rows = [sum((int(A[i][j]) & 1) << j for j in range(l))
            | sum((int(B[i][j]) & 1) << (l + j) for j in range(t2)) for i in range(l)]
    amask = (1 << l) - 1
    # row-reduce on the A block; B rides along
    rank = 0
    for col in range(l):
        bit = 1 << col
        piv = next((i for i in range(rank, l) if rows[i] & bit), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(l):
            if i != rank and rows[i] & bit:
                rows[i] ^= rows[rank]
        rank += 1
    c1 = rank
    # an eta pivot absorbs the i_n eta entries of its row
    for i in range(c1):
        rows[i] &= amask
    rest = [row >> l for row in rows[c1:]]
    # remaining rows: pick columns by decreasing exponent, lower index first
    order = sorted(range(t2), key=lambda j: (-exponents[j], j))
    chosen = []
    r_idx = 0
    for j in order:
        bit = 1 << j
        piv = next((i for i in range(r_idx, len(rest)) if rest[i] & bit), None)
        if piv is None:
            continue
        rest[r_idx], rest[piv] = rest[piv], rest[r_idx]
        for i in range(len(rest)):
            if i != r_idx and rest[i] & bit:
                rest[i] ^= rest[r_idx]
        # column moves clear the rest of the pivot row: every other column
        # still nonzero here has exponent <= exponents[j]
        rest[r_idx] = bit
        chosen.append(j)
        r_idx += 1
    return c1, len(chosen), sorted(chosen)


def _sq2_counts(inp: ManifoldInput) -> tuple[int, int, list[int]]:
    exps = [q.r for q in inp.T2.torsion]
    s = inp.sq2
    if s is None:
        return 0, 0, []
    if s.A is not None or s.B is not None:
        if s.c1 is not None or s.c2 is not None or s.chosen is not None:
            raise ShapeMismatch("give either matrices or (c1, c2, chosen), not both")
        A = s.A if s.A is not None else [[0] * inp.l for _ in range(inp.l)]
        B = s.B if s.B is not None else [[0] * len(exps) for _ in range(inp.l)]
        return reduce_phi(A, B, exps)
    c1 = s.c1 or 0
    chosen = sorted(s.chosen or ())
    c2 = s.c2 if s.c2 is not None else len(chosen)
    if c2 != len(chosen) or len(set(chosen)) != c2:
        raise ShapeMismatch("c2 must equal the number of distinct chosen indices")
    if any(not 0 <= j < len(exps) for j in chosen):
        raise ShapeMismatch("chosen index out of range")
    if c1 < 0 or c1 + c2 > inp.l:
        raise ShapeMismatch("need 0 <= c1 and c1 + c2 <= l")
    return c1, c2, chosen


@dataclass(frozen=True)
class SectionData:
    """Bookkeeping of the homology section for n = 2."""

    c1: int
    c2: int
    chosen: tuple  # indices into the sorted 2-primary summands
    T: FinAbGroup

    @property
    def T2(self):
        return primary_component(self.T, 2)

    @property
    def chosen_summands(self) -> list[PrimePower]:
        return [self.T2.torsion[j] for j in self.chosen]

    @property
    def unchosen_summands(self) -> list[PrimePower]:
        return [q for j, q in enumerate(self.T2.torsion) if j not in self.chosen]

    @property
    def T_c2(self) -> FinAbGroup:
        """T with the chosen 2-primary summands removed."""
        return drop_summands(self.T, self.chosen_summands)


def homology_section(inp: ManifoldInput) -> Wedge:
    """The homology section M_{2n+1} as a wedge.

    For n = 2 the section is suspended once (it is then the target of the
    suspended top-cell map), so the formula is used with n = 3.
    """
    c1, c2, chosen = _sq2_counts(inp)
    sec = SectionData(c1, c2, tuple(chosen), inp.torsion)
    n = max(inp.n, 3)
    l, d = inp.l, inp.d
    return Wedge.of(
        spheres(n + 1, d),
        moore_wedge(inp.torsion, n + 2),
        spheres(n, l - c1),
        spheres(n + 2, l - c1 - c2),
        [chang_eta(n)] * c1,
        moore_wedge(sec.T_c2, n + 1),
        [chang_r(n, q.r) for q in sec.chosen_summands],
    )


# -- results ----------------------------------------------------------------

@dataclass(frozen=True)
class Alternative:
    wedge: Wedge
    condition: str


@dataclass(frozen=True)
class DecompositionResult:
    wedge: Wedge
    case: str
    alternatives: tuple = ()  # further Alternative entries
    localized: bool = False
    condition: str = ""
    c1: int = 0
    c2: int = 0
    chosen: tuple = ()

    def all_wedges(self) -> list[Wedge]:
        return [self.wedge] + [a.wedge for a in self.alternatives]

    def to_json(self) -> dict:
        out = {
            "case": self.case,
            "localized": self.localized,
            "wedge": str(self.wedge),
            "terms": self.wedge.to_json(),
        }
        if self.condition:
            out["condition"] = self.condition
        if self.alternatives:
            out["alternatives"] = [
                {"wedge": str(a.wedge), "terms": a.wedge.to_json(), "condition": a.condition}
                for a in self.alternatives
            ]
        out["section"] = {"c1": self.c1, "c2": self.c2, "chosen": list(self.chosen)}
        return out

    def __str__(self):
        lines = [str(self.wedge)]
        for a in self.alternatives:
            lines.append(f"or {a.wedge}" + (f"  [{a.condition}]" if a.condition else ""))
        return "\n".join(lines)


def _result(cands, case, sec=None, localized=False):
    """cands: list of (Wedge, condition); duplicates are merged."""
    seen, uniq = set(), []
    for w, cond in cands:
        if w not in seen:
            seen.add(w)
            uniq.append((w, cond))
    head, rest = uniq[0], uniq[1:]
    extra = {}
    if sec is not None:
        extra = dict(c1=sec.c1, c2=sec.c2, chosen=tuple(sec.chosen))
    return DecompositionResult(head[0], case, tuple(Alternative(w, c) for w, c in rest),
                               localized, head[1], **extra)


# -- n = 2 ------------------------------------------------------------------

def _summand(T: FinAbGroup, p: int, r: int) -> PrimePower:
    q = PrimePower(p, r)
    if q not in T.torsion:
        raise InconsistentProfile(f"Z/{p ** r} is not a summand of {T}")
    return q


def _n2_parts(inp: ManifoldInput, sec: SectionData) -> dict:
    l, d = inp.l, inp.d
    return dict(
        S4=spheres(4, d),
        P5=moore_wedge(inp.torsion, 5),
        S3=spheres(3, l - sec.c1),
        S5=spheres(5, l - sec.c1 - sec.c2),
        Ceta=Wedge((chang_eta(3),) * sec.c1),
        P4=moore_wedge(sec.T_c2, 4),
        Cr=Wedge(tuple(chang_r(3, q.r) for q in sec.chosen_summands)),
    )


def _assemble(parts: dict, **override) -> Wedge:
    merged = dict(parts)
    merged.update(override)
    return Wedge.of(*merged.values())


def _decide_n2_ops(inp: ManifoldInput, sec: SectionData) -> DecompositionResult:
    prof = inp.profile or OperationProfile()
    prof.validate(2)
    parts = _n2_parts(inp, sec)
    T = inp.torsion
    n_s3 = inp.l - sec.c1
    n_s5 = inp.l - sec.c1 - sec.c2
    if prof.w2_nonzero:
        if prof.sq2h5_case == "no_bockstein_image":
            if n_s5 < 1:
                raise InconsistentProfile("Sq^2 off the Bockstein image needs a free S^5")
            w = _assemble(parts, S5=spheres(5, n_s5 - 1), top=Wedge((chang_eta(5),)))
            return _result([(w, "")], "sq2_no_bockstein_image", sec)
        r = prof.sq2h5_r
        q = _summand(T, 2, r)
        w = _assemble(parts, P5=moore_wedge(drop_summands(T, [q]), 5),
                      top=Wedge((cone_teta(4, r),)))
        return _result([(w, "")], "sq2_bockstein_image", sec)

    if prof.theta_case == "trivial":
        eps0 = _assemble(parts, top=Wedge((sphere(7),)))
        eps1 = None
        if n_s3 >= 1:
            eps1 = _assemble(parts, S3=spheres(3, n_s3 - 1), top=Wedge((cone_eta3(3),)))
        if prof.tertiary_nontrivial is True:
            if eps1 is None:
                raise InconsistentProfile("nontrivial tertiary operation needs a free S^3")
            return _result([(eps1, "epsilon=1")], "theta_trivial", sec)
        if prof.tertiary_nontrivial is False or eps1 is None:
            return _result([(eps0, "epsilon=0")], "theta_trivial", sec)
        return _result([(eps0, "epsilon=0: tertiary operation trivial"),
                        (eps1, "epsilon=1: tertiary operation nontrivial")],
                       "theta_trivial", sec)

    r = prof.theta_r
    if prof.theta_case == "no_bockstein_link":
        q = _summand(T, 2, r)
        w = _assemble(parts, P5=moore_wedge(drop_summands(T, [q]), 5),
                      top=Wedge((cone_ieta2(4, r),)))
        return _result([(w, "")], "theta_bockstein_link", sec)

    q = PrimePower(2, r)
    cands = []
    if q in sec.unchosen_summands:
        w = _assemble(parts, P4=moore_wedge(drop_summands(sec.T_c2, [q]), 4),
                      top=Wedge((cone_teta_eta(4, r),)))
        cands.append((w, f"top cell on P^4(Z/{2 ** r})"))
    if q in sec.chosen_summands:
        cr = list(parts["Cr"].terms)
        cr.remove(chang_r(3, r))
        w = _assemble(parts, Cr=Wedge(tuple(cr)), top=Wedge((cone_chang(4, r),)))
        cands.append((w, f"top cell on C^5_{r}"))
    if not cands:
        raise InconsistentProfile(f"no summand Z/{2 ** r} in the section to carry the top cell")
    return _result(cands, "theta_bockstein_image", sec)


def attaching_target_n2(inp: ManifoldInput, sec: SectionData) -> tuple:
    """Target summands of the top cell for n = 2, in coefficient order."""
    return _target_n2(inp.l, sec)


@lru_cache(maxsize=4096)
def _target_n2(l, sec):
    T2 = sec.T2.torsion
    return Terms(
        tuple(moore(2, q.r, 5) for q in T2)
        + (sphere(3),) * (l - sec.c1)
        + (sphere(5),) * (l - sec.c1 - sec.c2)
        + tuple(moore(2, q.r, 4) for q in sec.unchosen_summands)
        + tuple(chang_r(3, q.r) for q in sec.chosen_summands)
    )


N2_COEFF_KEYS = ("x", "eps", "y", "z", "s", "t")
N3_COEFF_KEYS = ("a", "b", "c")


def coeff_lengths(inp: ManifoldInput, sec: Optional[SectionData] = None) -> dict:
    if inp.n == 2:
        return dict(_n2_lengths(inp.l, sec or _section(inp)))
    t3 = len(primary_component(inp.torsion, 3).torsion)
    return {"a": inp.d, "b": t3, "c": t3}


@lru_cache(maxsize=4096)
def _n2_lengths(l, sec):
    t2 = len(sec.T2.torsion)
    return (("x", t2), ("eps", t2), ("y", l - sec.c1), ("z", l - sec.c1 - sec.c2),
            ("s", t2 - sec.c2), ("t", sec.c2))


_ALLOWED = {2: frozenset((0, 1)), 3: frozenset((0, 1, 2))}


def _coeff_lists(inp, sec, keys):
    lens = coeff_lengths(inp, sec)
    given = inp.coeffs or {}
    unknown = given.keys() - set(keys)
    if unknown:
        raise ShapeMismatch(f"unknown coefficient keys {sorted(unknown)}")
    out = {}
    mod = 2 if inp.n == 2 else 3
    for k in keys:
        vals = list(given.get(k, [0] * lens[k]))
        if len(vals) != lens[k]:
            raise ShapeMismatch(f"coefficient list {k!r} needs length {lens[k]}, got {len(vals)}")
        if not _ALLOWED[mod].issuperset(vals):
            raise ShapeMismatch(f"coefficients must lie in Z/{mod}")
        out[k] = vals
    return out


def attaching_vector(inp: ManifoldInput, sec: Optional[SectionData] = None) -> AttachingVector:
    """The top-cell vector of an attaching-mode input."""
    if inp.n == 2:
        sec = sec or _section(inp)
        c = _coeff_lists(inp, sec, N2_COEFF_KEYS)
        target = attaching_target_n2(inp, sec)
        coeffs = ([(x, e) for x, e in zip(c["x"], c["eps"])]
                  + [(y,) for y in c["y"]] + [(z,) for z in c["z"]]
                  + [(s,) for s in c["s"]] + [(t,) for t in c["t"]])
        return AttachingVector(2, target, tuple(coeffs))
    if inp.n == 3:
        c = _coeff_lists(inp, None, N3_COEFF_KEYS)
        T3 = primary_component(inp.torsion, 3).torsion
        target = ((sphere(5),) * inp.d + tuple(moore(3, q.r, 5) for q in T3)
                  + tuple(moore(3, q.r, 6) for q in T3))
        coeffs = [(a,) for a in c["a"]] + [(b,) for b in c["b"]] + [(x,) for x in c["c"]]
        return AttachingVector(3, target, tuple(coeffs))
    raise ShapeMismatch("attaching vectors exist for n = 2, 3 only")


def _section(inp: ManifoldInput) -> SectionData:
    s = inp.sq2
    if s is not None and s.A is None and s.B is None:
        return _section_from_counts(inp.l, inp.torsion, s.c1, s.c2, tuple(s.chosen or ()))
    c1, c2, chosen = _sq2_counts(inp)
    return SectionData(c1, c2, tuple(chosen), inp.torsion)


@lru_cache(maxsize=4096)
def _section_from_counts(l, T, c1, c2, chosen):
    probe = ManifoldInput(2, l, 0, T, sq2=Sq2Data(c1=c1, c2=c2, chosen=list(chosen)))
    c1, c2, chosen = _sq2_counts(probe)
    return SectionData(c1, c2, tuple(chosen), T)


@lru_cache(maxsize=4096)
def _n2_split(d, T, c1):
    T_odd = away_from(T, 2)
    return Wedge.of(spheres(4, d), moore_wedge(T_odd, 5), moore_wedge(T_odd, 4),
                    [chang_eta(3)] * c1)


def _decide_n2_attach(inp: ManifoldInput, sec: SectionData) -> DecompositionResult:
    nf, _ = normalize(attaching_vector(inp, sec))
    return _n2_attach_result(inp.d, inp.torsion, sec, nf)


@lru_cache(maxsize=1 << 14)
def _n2_attach_result(d, T, sec, nf):
    w = _n2_split(d, T, sec.c1) + cofiber(nf)
    return _result([(w, "")], _case_of(nf, 2), sec)


def profile_from_vector(v: AttachingVector) -> OperationProfile:
    """The operation profile read off the cone of ``normalize(v)``."""
    nf, _ = normalize(v)
    g = surviving_generator(nf)
    if v.n == 2:
        if g is None:
            return OperationProfile(tertiary_nontrivial=False)
        t, slot = g
        if slot == "teta":
            return OperationProfile(w2_nonzero=True, theta_case="trivial", tertiary_nontrivial=None,
                                    sq2h5_case="bockstein_image", sq2h5_r=t.r)
        if slot == "eta":
            return OperationProfile(w2_nonzero=True, tertiary_nontrivial=None,
                                    sq2h5_case="no_bockstein_image")
        if slot in ("teta*eta", "iP*teta*eta"):
            return OperationProfile(theta_case="bockstein_image", theta_r=t.r,
                                    tertiary_nontrivial=None)
        if slot == "i*eta^2":
            return OperationProfile(theta_case="no_bockstein_link", theta_r=t.r,
                                    tertiary_nontrivial=None)
        if slot == "eta^3":
            return OperationProfile(tertiary_nontrivial=True)
        raise AssertionError(slot)
    if v.n == 3:
        if g is None:
            return OperationProfile(tertiary_nontrivial=None)
        t, slot = g
        if slot == "alpha1":
            return OperationProfile(tertiary_nontrivial=None, p1_case="a")
        if slot == "talpha1":
            return OperationProfile(tertiary_nontrivial=None, p1_case="b", p1_r=t.r)
        if slot == "i*alpha1":
            return OperationProfile(tertiary_nontrivial=None, p1_case="c", p1_r=t.r)
        raise AssertionError(slot)
    raise ValueError("profiles from vectors exist for n = 2, 3 only")


def _case_of(nf: AttachingVector, n: int) -> str:
    g = surviving_generator(nf)
    if n == 2:
        return {None: "theta_trivial", "teta": "sq2_bockstein_image",
                "eta": "sq2_no_bockstein_image", "teta*eta": "theta_bockstein_image",
                "iP*teta*eta": "theta_bockstein_image", "i*eta^2": "theta_bockstein_link",
                "eta^3": "theta_trivial"}[g and g[1]]
    return {None: "p1_trivial", "alpha1": "p1_a", "talpha1": "p1_b",
            "i*alpha1": "p1_c"}[g and g[1]]


# -- n >= 3 (away from 2) -----------------------------------------------------

def _odd_base(inp: ManifoldInput) -> dict:
    n, l, d = inp.n, inp.l, inp.d
    T = away_from(inp.torsion, 2)
    return dict(
        low=Wedge.of(spheres(n + 1, l), spheres(n + 3, l)),
        mid=spheres(n + 2, d),
        P1=moore_wedge(T, n + 2),
        P2=moore_wedge(T, n + 3),
        top=Wedge((sphere(2 * n + 3),)),
    )


def _decide_odd_ops(inp: ManifoldInput) -> DecompositionResult:
    prof = inp.profile or OperationProfile(tertiary_nontrivial=None)
    prof = replace(prof, tertiary_nontrivial=None)
    prof.validate(inp.n)
    n = inp.n
    base = _odd_base(inp)
    T = away_from(inp.torsion, 2)
    case = prof.p1_case
    if n == 5 or case == "trivial":
        label = "unconditional" if n == 5 else "p1_trivial"
        return _result([(_assemble(base), "")], label, localized=True)
    if n == 3:
        if case == "a":
            if inp.d < 1:
                raise InconsistentProfile("P^1 off the Bockstein classes needs a free S^5")
            w = _assemble(base, mid=spheres(5, inp.d - 1), top=Wedge((cone_alpha1(5),)))
            return _result([(w, "")], "p1_a", localized=True)
        r = prof.p1_r
        q = _summand(T, 3, r)
        if case == "b":
            w = _assemble(base, P1=moore_wedge(drop_summands(T, [q]), 5),
                          top=Wedge((cone_talpha1(5, r),)))
            return _result([(w, "")], "p1_b", localized=True)
        w = _assemble(base, P2=moore_wedge(drop_summands(T, [q]), 6),
                      top=Wedge((cone_ialpha1(5, r),)))
        return _result([(w, "")], "p1_c", localized=True)
    # n == 4, nontrivial
    r = prof.p1_r
    q = _summand(T, 3, r)
    w = _assemble(base, P2=moore_wedge(drop_summands(T, [q]), 7),
                  top=Wedge((cone_talpha1(7, r),)))
    return _result([(w, "")], "p1_nontrivial", localized=True)


def _decide_n3_attach(inp: ManifoldInput) -> DecompositionResult:
    nf, _ = normalize(attaching_vector(inp))
    return _n3_attach_result(inp.l, inp.torsion, nf)


@lru_cache(maxsize=1 << 14)
def _n3_attach_result(l, T, nf):
    T = away_from(T, 2)
    T_big = FinAbGroup(0, tuple(q for q in T.torsion if q.p != 3))
    split = Wedge.of(spheres(4, l), spheres(6, l), moore_wedge(T_big, 5), moore_wedge(T_big, 6))
    return _result([(split + cofiber(nf), "")], _case_of(nf, 3), localized=True)


# -- entry points -------------------------------------------------------------

def decide(inp: ManifoldInput) -> DecompositionResult:
    """Every wedge decomposition of Sigma M compatible with the input."""
    if inp.n >= 3:
        if inp.localize is False:
            raise LocalizationRequired(
                f"n={inp.n} decompositions hold only after inverting 2; set localize")
        if inp.mode == "attach":
            return _decide_n3_attach(inp)
        return _decide_odd_ops(inp)
    sec = _section(inp)
    if inp.mode == "attach":
        res = _decide_n2_attach(inp, sec)
    else:
        res = _decide_n2_ops(inp, sec)
    return localize_result(res) if inp.localized else res


def localize_result(res: DecompositionResult) -> DecompositionResult:
    """Invert 2 termwise; alternatives that coincide are merged."""
    cands = [(localize_away_from_2(res.wedge), res.condition)]
    cands += [(localize_away_from_2(a.wedge), a.condition) for a in res.alternatives]
    out = _result(cands, res.case, localized=True)
    return replace(out, c1=res.c1, c2=res.c2, chosen=res.chosen)


# -- reading operations back off a wedge --------------------------------------

def profile_from_wedge(w: Wedge, n: int) -> OperationProfile:
    """Operation profile carried by the cone summands of a decomposition."""
    if n == 2:
        for t in w.terms:
            if t.kind == CONE_TETA:
                return OperationProfile(w2_nonzero=True, tertiary_nontrivial=None,
                                        sq2h5_case="bockstein_image", sq2h5_r=t.r)
            if t.kind == CHANG_ETA and t.dim == 5:
                return OperationProfile(w2_nonzero=True, tertiary_nontrivial=None,
                                        sq2h5_case="no_bockstein_image")
        for t in w.terms:
            sig = operation_signature(t)
            if 4 in sig.theta:
                links = [r for d, p, r in sig.bockstein if d == 4 and p == 2]
                images = [r for d, p, r in sig.bockstein if d == 3 and p == 2]
                if links:
                    return OperationProfile(theta_case="no_bockstein_link", theta_r=links[0],
                                            tertiary_nontrivial=None)
                return OperationProfile(theta_case="bockstein_image", theta_r=images[0],
                                        tertiary_nontrivial=None)
        tert = any(3 in operation_signature(t).tertiary for t in w.terms)
        return OperationProfile(tertiary_nontrivial=tert)
    deg = {3: 5, 4: 7}.get(n)
    for t in w.terms:
        sig = operation_signature(t)
        if deg in sig.p1:
            if n == 4:
                r = [r for d, p, r in sig.bockstein if p == 3][0]
                return OperationProfile(tertiary_nontrivial=None, p1_case="nontrivial", p1_r=r)
            if t.kind == CONE_ALPHA1:
                return OperationProfile(tertiary_nontrivial=None, p1_case="a")
            if t.kind == CONE_TALPHA1:
                return OperationProfile(tertiary_nontrivial=None, p1_case="b", p1_r=t.r)
            if t.kind == CONE_IALPHA1:
                return OperationProfile(tertiary_nontrivial=None, p1_case="c", p1_r=t.r)
    return OperationProfile(tertiary_nontrivial=None)
