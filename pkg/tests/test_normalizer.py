import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from suspsplit.catalog import (
    Wedge,
    chang_eta,
    chang_r,
    cone_chang,
    cone_eta3,
    cone_ialpha1,
    cone_ieta2,
    cone_talpha1,
    cone_teta,
    cone_teta_eta,
    moore,
    reduced_homology,
    sphere,
)
from suspsplit.normalizer import (
    SLOTS,
    AttachingVector,
    DepthExceeded,
    Move,
    NotNormalized,
    apply_move,
    cofiber,
    family,
    moves,
    normalize,
    orbit_equivalent,
    replay,
    rule_set,
    surviving_generator,
)


def vec(n, *entries):
    return AttachingVector.from_labels(n, list(entries))


# -- rule sets --------------------------------------------------------------

def test_cross_rule_has_both_exponent_branches():
    rules = {r.id: r for r in rule_set(2)}
    down, up = rules["M18"], rules["M19"]
    assert (down.src, down.dst) == ("P4", "C5") and down.when(2, 2) and not down.when(3, 2)
    # when() takes (pivot exponent, victim exponent)
    assert (up.src, up.dst) == ("C5", "P4") and up.when(2, 3) and not up.when(2, 2)


def test_n3_rules_carry_talpha1_onto_alpha1():
    n1 = {r.id: r for r in rule_set(3)}["N1"]
    assert (n1.src, n1.dst, n1.images) == ("M5", "A5", (("talpha1", ("alpha1",)),))


def test_n2_rules_have_no_unit_move():
    assert not any(r.unit for r in rule_set(2))
    assert any(r.unit for r in rule_set(3))


def test_family_rejects_foreign_summands():
    assert family(moore(5, 1, 5), 3) == "inert"
    with pytest.raises(ValueError):
        family(sphere(4), 2)


# -- normal forms from the worked cases ---------------------------------------

def test_eta_composites_cross_rule_keeps_the_moore_side():
    v = vec(2, (moore(2, 2, 4), {"teta*eta": 1}), (chang_r(3, 3), {"iP*teta*eta": 1}))
    nf, trace = normalize(v)
    assert nf.coeffs == ((1,), (0,))
    assert trace == ["M18(0->1)"]


def test_eta_composites_cross_rule_other_branch():
    v = vec(2, (moore(2, 3, 4), {"teta*eta": 1}), (chang_r(3, 2), {"iP*teta*eta": 1}))
    nf, _ = normalize(v)
    assert nf.coeffs == ((0,), (1,))


def test_alpha1_is_absorbed_by_talpha1():
    v = vec(3, (sphere(5), {"alpha1": 1}), (moore(3, 1, 5), {"talpha1": 1}))
    nf, _ = normalize(v)
    assert nf.coeffs == ((0,), (1,))


def test_absorption_into_eta_tilde():
    v = vec(2, (moore(2, 1, 5), {"teta": 1, "i*eta^2": 1}))
    nf, _ = normalize(v)
    assert nf.coeffs == ((1, 0),)


def test_zero_vector_is_fixed():
    v = AttachingVector.zero(2, [sphere(3), sphere(5)])
    nf, trace = normalize(v)
    assert nf == v and trace == []
    assert cofiber(nf) == Wedge.of(sphere(3), sphere(5), sphere(7))


def test_sign_unit_for_three_primary_coefficients():
    v = vec(3, (moore(3, 2, 5), {"talpha1": 2}))
    nf, trace = normalize(v)
    assert nf.coeffs == ((1,),) and trace == ["U(0->0)"]


# -- mapping cones ------------------------------------------------------------

@pytest.mark.parametrize("term,slot,cone", [
    (sphere(5), "eta", chang_eta(5)),
    (sphere(3), "eta^3", cone_eta3(3)),
    (moore(2, 2, 5), "i*eta^2", cone_ieta2(4, 2)),
    (moore(2, 3, 5), "teta", cone_teta(4, 3)),
    (moore(2, 1, 4), "teta*eta", cone_teta_eta(4, 1)),
    (chang_r(3, 2), "iP*teta*eta", cone_chang(4, 2)),
    (moore(3, 2, 5), "talpha1", cone_talpha1(5, 2)),
    (moore(3, 1, 6), "i*alpha1", cone_ialpha1(5, 1)),
])
def test_cofiber_of_single_generator(term, slot, cone):
    n = 3 if term.p == 3 else 2
    rest = sphere(5) if n == 3 else sphere(3)
    v = vec(n, (rest, {}), (term, {slot: 1}))
    assert cofiber(v) == Wedge.of(rest, cone)
    assert surviving_generator(v) == (term, slot)


def test_cofiber_needs_normal_form():
    v = vec(2, (sphere(3), {"eta^3": 1}), (sphere(5), {"eta": 1}))
    with pytest.raises(NotNormalized):
        cofiber(v)


def test_bad_vectors_are_rejected():
    with pytest.raises(ValueError):
        AttachingVector(2, (sphere(3),), ((2,),))
    with pytest.raises(ValueError):
        AttachingVector(2, (moore(2, 1, 5),), ((1,),))
    with pytest.raises(ValueError):
        vec(2, (sphere(3), {"eta": 1}))


def test_apply_move_checks_side_conditions():
    v = vec(2, (moore(2, 1, 5), {"teta": 1, "i*eta^2": 1}), (moore(2, 2, 5), {"i*eta^2": 1}))
    m10 = {r.id: r for r in rule_set(2)}["M10"]
    with pytest.raises(ValueError):
        apply_move(v, Move(m10, 0, 1))


# -- properties over random vectors --------------------------------------------

N2_POOL = ([sphere(3), sphere(5)] + [moore(2, r, k) for r in (1, 2, 3) for k in (4, 5)]
           + [chang_r(3, r) for r in (1, 2, 3)])
N3_POOL = [sphere(5)] + [moore(3, r, k) for r in (1, 2, 3) for k in (5, 6)]


@st.composite
def vectors(draw, n=None):
    n = draw(st.sampled_from([2, 3])) if n is None else n
    pool = N2_POOL if n == 2 else N3_POOL
    target = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=6))
    mod = 2 if n == 2 else 3
    coeffs = tuple(
        tuple(draw(st.integers(0, mod - 1)) for _ in SLOTS[family(t, n)]) for t in target
    )
    return AttachingVector(n, tuple(target), coeffs)


@given(vectors())
def test_normal_form_has_at_most_one_unit_entry(v):
    nf, _ = normalize(v)
    assert nf.is_normal()
    flat = [x for c in nf.coeffs for x in c if x]
    assert flat in ([], [1])


@given(vectors())
def test_trace_replays_to_the_normal_form(v):
    nf, trace = normalize(v)
    assert replay(v, trace) == nf


@given(vectors())
def test_each_traced_step_lowers_the_measure(v):
    _, trace = normalize(v)
    cur = v
    for step in trace:
        nxt = replay(cur, [step])
        assert nxt.measure() < cur.measure()
        cur = nxt


@given(vectors())
def test_moves_keep_cone_homology(v):
    base = reduced_homology(cofiber(normalize(v)[0]))
    for _mv, out in moves(v):
        w = AttachingVector(v.n, v.target, out)
        assert reduced_homology(cofiber(normalize(w)[0])) == base


@settings(max_examples=60, deadline=None)
@given(vectors())
def test_normal_form_is_in_the_orbit(v):
    nf, trace = normalize(v)
    assert orbit_equivalent(v, nf, len(trace))


def _exponents(v, slot_names):
    rs = [t.r for t, c in zip(v.target, v.coeffs)
          for s, x in zip(SLOTS[family(t, v.n)], c) if x and s in slot_names]
    return rs


@given(vectors(n=2))
def test_exponent_selection(v):
    # teta on the least exponent wins, then eta, then the eta-composites on
    # the least exponent, then i*eta^2 on the greatest
    g = surviving_generator(normalize(v)[0])
    teta = _exponents(v, {"teta"})
    linked = _exponents(v, {"teta*eta", "iP*teta*eta"})
    ieta2 = _exponents(v, {"i*eta^2"})
    if teta:
        assert g[1] == "teta" and g[0].r == min(teta)
    elif _exponents(v, {"eta"}):
        assert g[1] == "eta"
    elif linked:
        assert g[1] in ("teta*eta", "iP*teta*eta") and g[0].r == min(linked)
    elif ieta2:
        assert g[1] == "i*eta^2" and g[0].r == max(ieta2)
    elif _exponents(v, {"eta^3"}):
        assert g[1] == "eta^3"
    else:
        assert g is None


def test_orbit_search_edge_cases():
    v = vec(2, (sphere(3), {"eta^3": 1}), (sphere(5), {"eta": 1}))
    assert orbit_equivalent(v, v, 0)
    zero = AttachingVector.zero(2, v.target)
    # the orbit of v is finite and misses zero
    assert not orbit_equivalent(v, zero, 10)
    # moves are invertible, so being nonzero is invariant; a differing
    # invariant answers at once, whatever the depth
    assert not orbit_equivalent(v, zero, 0, invariant=lambda w: bool(w.support()))
    big = vec(2, *[(moore(2, r, 5), {"teta": 1, "i*eta^2": 1}) for r in (1, 2, 3)])
    with pytest.raises(DepthExceeded):
        orbit_equivalent(big, AttachingVector.zero(2, big.target), 1)
