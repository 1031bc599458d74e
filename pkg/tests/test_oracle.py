from dataclasses import replace

import pytest

from suspsplit.catalog import Wedge, moore, sphere
from suspsplit.decomposer import ManifoldInput, OperationProfile, Sq2Data
from suspsplit.normalizer import AttachingVector, rule_set
from suspsplit.oracle import (
    CapExceeded,
    EnumerationBounds,
    Report,
    all_vectors,
    check_confluence,
    check_homology,
    check_rule_soundness,
    count_inputs,
    cross_validate,
    distinct_targets,
    enumerate_inputs,
    expected_homology,
    homology_of_decision,
    read_profile_bits,
    sweep,
)
from suspsplit.torsion import FinAbGroup

SMALL = EnumerationBounds(1, 1, 1, 2, (2, 3, 4, 5))


def test_report_keeps_the_first_witness():
    rep = Report("x", checked=2)
    rep.fail("first")
    rep.fail("second")
    other = Report("y", checked=3)
    rep.merge(other)
    assert not rep.passed and rep.witness == "first" and rep.checked == 5
    assert rep.line() == "FAIL x (5 checked) witness: first"
    assert Report("ok", checked=1).line() == "PASS ok (1 checked)"
    assert rep.to_json()["passed"] is False


def test_bounds_validation():
    with pytest.raises(ValueError):
        EnumerationBounds(-1, 0, 0, 0)
    with pytest.raises(ValueError):
        EnumerationBounds(n_values=(6,))


@pytest.mark.parametrize("b", [SMALL, EnumerationBounds(2, 1, 2, 3, (3, 4, 5)),
                               EnumerationBounds(2, 0, 2, 2, (2,))])
def test_count_matches_enumeration(b):
    assert count_inputs(b) == sum(1 for _ in enumerate_inputs(b))


def test_enumeration_is_deterministic_and_distinct():
    a = list(enumerate_inputs(SMALL))
    assert a == list(enumerate_inputs(SMALL))
    assert len(set(map(repr, a))) == len(a)


def test_cap_from_bounds_and_environment(monkeypatch):
    with pytest.raises(CapExceeded):
        next(enumerate_inputs(replace(SMALL, cap=10)))
    monkeypatch.setenv("SUSPSPLIT_CAP", "10")
    with pytest.raises(CapExceeded):
        next(enumerate_inputs(SMALL))
    with pytest.raises(CapExceeded):
        list(enumerate_inputs(SMALL, "ops"))


def test_expected_homology():
    T = FinAbGroup.from_pairs([(2, 1), (3, 1)])
    H = expected_homology(2, 1, 0, T)
    assert H == {3: FinAbGroup(1) + T, 4: T, 5: FinAbGroup(1), 7: FinAbGroup(1)}
    H = expected_homology(3, 0, 0, T, localized=True)
    assert H == {4: FinAbGroup.cyclic(3), 5: FinAbGroup.cyclic(3), 9: FinAbGroup(1)}


def test_check_homology_catches_a_wrong_wedge():
    inp = ManifoldInput(2, 1, 0)
    assert check_homology(inp, Wedge.of(sphere(3), sphere(5), sphere(7))).passed
    rep = check_homology(inp, Wedge.of(sphere(3), sphere(7)))
    assert not rep.passed and "degree 5" in rep.witness


def test_raw_profile_bits():
    v = AttachingVector.from_labels(2, [(moore(2, 1, 5), {"i*eta^2": 1}),
                                        (moore(2, 3, 5), {"i*eta^2": 1})])
    p = read_profile_bits(v)
    assert (p.theta_case, p.theta_r) == ("no_bockstein_link", 3)
    v = AttachingVector.from_labels(2, [(sphere(3), {"eta^3": 1})])
    assert read_profile_bits(v) == OperationProfile(tertiary_nontrivial=True)
    v = AttachingVector.from_labels(3, [(sphere(5), {"alpha1": 2}), (moore(3, 2, 5), {"talpha1": 1})])
    assert (read_profile_bits(v).p1_case, read_profile_bits(v).p1_r) == ("b", 2)


def test_all_vectors_covers_the_coefficient_space():
    target = (sphere(3), moore(2, 1, 5))
    vs = list(all_vectors(2, target))
    assert len(vs) == 2 ** 3 and len(set(vs)) == 8


def test_targets_are_distinct():
    ts = distinct_targets(EnumerationBounds(2, 1, 2, 2, (2,)), 2)
    assert len(ts) == len(set(ts))


def test_small_sweeps_pass():
    assert sweep(SMALL, homology_of_decision).passed
    assert sweep(SMALL, homology_of_decision, "ops").passed
    assert sweep(replace(SMALL, n_values=(2, 3)), cross_validate).passed


def test_cross_validate_single_input():
    inp = ManifoldInput(2, 1, 0, FinAbGroup.from_pairs([(2, 2)]), sq2=Sq2Data(), mode="attach",
                        coeffs={"x": [1], "eps": [1], "y": [1], "z": [0], "s": [1]})
    rep = cross_validate(inp)
    assert rep.passed and rep.checked == 1


@pytest.mark.parametrize("n", [2, 3])
def test_default_rules_are_sound_and_confluent(n):
    b = EnumerationBounds(1, 1, 2, 2, (n,))
    assert check_rule_soundness(n, b).passed
    assert check_confluence(n, b).passed


def _mutate(n, rule_id, **changes):
    return tuple(replace(r, id=rule_id + "x", **changes) if r.id == rule_id else r
                 for r in rule_set(n))


@pytest.mark.parametrize("n,rule_id", [(2, "M10"), (3, "N5")])
def test_dropping_a_side_condition_is_caught(n, rule_id):
    rules = _mutate(n, rule_id, when=lambda a, b: True)
    b = EnumerationBounds(1, 1, 2, 2, (n,))
    sound = check_rule_soundness(n, b, rules)
    conf = check_confluence(n, b, rules)
    assert not sound.passed and rule_id + "x" in sound.witness
    assert not conf.passed and "fixpoints" in conf.witness
