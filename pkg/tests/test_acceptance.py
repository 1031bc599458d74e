"""Acceptance criteria 1-6, one PASS/FAIL line each.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines are printed
to the terminal even under output capture.
"""

import time
from itertools import product
from math import gcd

import pytest

from suspsplit.catalog import Wedge, chang_eta, chang_r, moore, sphere
from suspsplit.decomposer import decide, localize_result, reduce_phi
from suspsplit.oracle import (
    EnumerationBounds,
    Report,
    check_confluence,
    check_rule_soundness,
    cross_validate,
    enumerate_inputs,
    homology_of_decision,
    sweep,
)
from suspsplit.pi_tables import moore_self_maps, pi
from suspsplit.torsion import FinAbGroup, away_from

FULL = dict(max_l=3, max_d=3, max_t2=2, max_r=3)


@pytest.fixture
def announce(capsys):
    def _announce(number, title, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}"
        with capsys.disabled():
            print(f"\n{line}" + (f" ({detail})" if detail else ""))
        assert ok, detail
    return _announce


def group(*orders):
    G = FinAbGroup()
    for q in orders:
        G = G + FinAbGroup.cyclic(q)
    return G


def as_group(H):
    return group(*H.orders)


# -- 1. homotopy tables ---------------------------------------------------------

def reference_tables():
    """(description, lookup, expected group, expected generator text or None)."""
    rows = []
    for n, r, p in product((3, 4, 5), range(1, 5), (2, 3, 5)):
        P = moore(p, r, n + 1)
        rows.append((f"pi_{n} {P}", lambda P=P, n=n: pi(n, P), group(p ** r), f"Z/{p ** r}<i{n}>"))
        low = group(2) if p == 2 else group()
        rows.append((f"pi_{n + 1} {P}", lambda P=P, n=n: pi(n + 1, P), low,
                     f"Z/2<i{n}*eta>" if p == 2 else "0"))
        if p != 2:
            top, text = group(), "0"
        elif r == 1:
            top, text = group(4), "Z/4<teta_1>"
        else:
            top, text = group(2, 2), f"Z/2<teta_{r}> + Z/2<i{n}*eta^2>"
        rows.append((f"pi_{n + 2} {P}", lambda P=P, n=n: pi(n + 2, P), top, text))
    for n, r, s in product((3, 4, 5), range(1, 5), range(1, 5)):
        want = group(4) if r == s == 1 else group(2 ** min(r, s), 2)
        rows.append((f"[P^{n + 1}(2^{r}), P^{n + 1}(2^{s})]",
                     lambda n=n, r=r, s=s: moore_self_maps(n, r, s), want, None))
    for r in range(1, 5):
        rho = r + 1 if r <= 2 else r
        delta = 1 if r == 1 else 0
        rows.append((f"pi_6 P^4(2^{r})", lambda r=r: pi(6, moore(2, r, 4)),
                     group(2 ** rho, 2 ** (1 - delta), 2), None))
        rows.append((f"pi_7 P^5(2^{r})", lambda r=r: pi(7, moore(2, r, 5)),
                     group(2 ** (r + 1), 2 ** min(r - 1, 2), 2), None))
        rows.append((f"pi_6 C^5_{r}", lambda r=r: pi(6, chang_r(3, r)),
                     group(2 ** (r + delta), 2 ** (1 - delta), 2), None))
    rows.append(("pi_6 C^5_eta", lambda: pi(6, chang_eta(3)), group(6), "Z/6<i3*nu'>"))
    for p, r in product((3, 5), range(1, 5)):
        want = group(gcd(3, p ** r))
        for k, gen in ((5, "talpha1"), (6, "i5*alpha1")):
            text = f"Z/3<{gen}>" if p == 3 else "0"
            rows.append((f"pi_8 P^{k}({p}^{r})", lambda p=p, r=r, k=k: pi(8, moore(p, r, k)),
                         want, text))
    return rows


def test_criterion_1_table_regression(announce):
    rows = reference_tables()
    start = time.perf_counter()
    got = [look() for _, look, _, _ in rows]
    elapsed = time.perf_counter() - start
    bad = [desc for (desc, _, want, text), H in zip(rows, got)
           if as_group(H) != want or (text is not None and str(H) != text)]
    ok = not bad and elapsed < 1.0
    announce(1, "homotopy tables", ok,
             f"{len(rows)} entries in {elapsed:.3f}s" + (f"; mismatches: {bad}" if bad else ""))


# -- 2. homology round trip -------------------------------------------------------

def test_criterion_2_homology_round_trip(announce):
    b = EnumerationBounds(n_values=(2, 3, 4, 5), **FULL, cap=10 ** 7)
    start = time.perf_counter()
    rep = sweep(b, homology_of_decision, "ops", "ops")
    rep.merge(sweep(b, homology_of_decision, "attach", "attach"))
    elapsed = time.perf_counter() - start
    ok = rep.passed and elapsed < 60
    announce(2, "homology round trip", ok,
             f"{rep.checked} wedges in {elapsed:.1f}s" + (f"; {rep.witness}" if rep.witness else ""))


# -- 3. mode agreement ------------------------------------------------------------

def test_criterion_3_mode_agreement(announce):
    b = EnumerationBounds(n_values=(2, 3), **FULL, cap=10 ** 7)
    rep = sweep(b, cross_validate, "attach", "mode agreement")
    announce(3, "attaching mode lies in the operations-mode answer", rep.passed,
             f"{rep.checked} vectors" + (f"; {rep.witness}" if rep.witness else ""))


# -- 4. rule soundness and confluence --------------------------------------------

def test_criterion_4_soundness_and_confluence(announce):
    reports = []
    for n in (2, 3):
        reports.append(check_rule_soundness(n))
        reports.append(check_confluence(n))
    total = Report("rules")
    for r in reports:
        total.merge(r)
    announce(4, "rule soundness and confluence", total.passed,
             "; ".join(r.line() for r in reports))


# -- 5. localization --------------------------------------------------------------

def odd_wedge(l, d, T):
    """Wedge of Sigma M after inverting 2, from (l, d, T) alone."""
    T = away_from(T, 2)
    terms = [sphere(4)] * d + [sphere(3), sphere(5)] * l + [sphere(7)]
    terms += [moore(q.p, q.r, k) for q in T.torsion for k in (4, 5)]
    return Wedge(tuple(terms))


def test_criterion_5_localization(announce):
    extra = FinAbGroup.from_pairs([(3, 1)])
    checked, bad = 0, None
    for extra_T in (FinAbGroup(), extra):
        b = EnumerationBounds(n_values=(2,), **FULL, extra_torsion=extra_T, cap=10 ** 7)
        for mode in ("ops", "attach"):
            for inp in enumerate_inputs(b, mode):
                res = decide(inp)
                want = odd_wedge(inp.l, inp.d, inp.torsion)
                loc = localize_result(res)
                checked += 1
                if loc.all_wedges() != [want]:
                    bad = f"{inp}: {loc.wedge}"
                    break
            if bad:
                break
        if bad:
            break
    announce(5, "localization away from 2", bad is None,
             f"{checked} outputs" + (f"; {bad}" if bad else ""))


# -- 6. vanishing of the homology-section counts ------------------------------------

def test_criterion_6_reduce_phi_vanishing(announce):
    checked, bad = 0, None
    for l, t in product(range(4), range(4)):
        exps = list(range(1, t + 1))
        for bits in product((0, 1), repeat=l * l + l * t):
            A = [bits[i * l:(i + 1) * l] for i in range(l)]
            B = [bits[l * l + i * t:l * l + (i + 1) * t] for i in range(l)]
            c1, c2, _ = reduce_phi(A, B, exps)
            checked += 1
            if (c1 == c2 == 0) != (not any(bits)):
                bad = f"A={A} B={B} -> ({c1}, {c2})"
                break
    announce(6, "c1 = c2 = 0 exactly when A = B = 0", bad is None,
             f"{checked} matrix pairs" + (f"; {bad}" if bad else ""))
