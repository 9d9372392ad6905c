import json
import random

import pytest

from elgauge.complex import dualize, epsilon_torus, sphere_complex
from elgauge.elgf import (ComplexMismatch, CoreField, DimensionUnsupported, ExtendedField, NotInDeckGroup,
                          SecondaryUndefined, _cohomology_data, act, ambient_element, canonical_field,
                          cellularly_equivalent, class_kernel, class_vector, classify, core_of,
                          deck_group, defect_cochain, extended_from_dict, extended_to_dict,
                          random_valid_field, validate_extended, zero_field)
from elgauge.gauge import apply_gauge, build_network, dumps, random_field, random_gauge
from elgauge.groups import SU2Model, U1Model, ZNModel

U1, SU2 = U1Model(), SU2Model()


@pytest.fixture(scope="module")
def s3():
    return dualize(sphere_complex(3))


def test_deck_groups_tetrahedron(s2):
    full = deck_group(s2, U1, "full")
    assert full.subgroup.free_rank == 12 and not full.subgroup.torsion
    assert full.relations == []
    core = deck_group(s2, U1, "core")
    assert core.ambient.free_rank == 12
    assert core.subgroup.free_rank == 6
    assert core.summary()["relations"] == {"mu": 6}


def test_zn_groups_trivial(s2, s3):
    for C in (s2, s3):
        for which in ("full", "core"):
            assert deck_group(C, ZNModel(3), which).subgroup.is_trivial()
        ck = class_kernel(C, ZNModel(3))
        assert ck.quotient.is_trivial()


def test_zero_labels_valid(s2, s3, t2):
    for C in (s2, s3, t2):
        assert validate_extended(zero_field(C, U1)).ok
    assert validate_extended(zero_field(dualize(sphere_complex(4)), SU2)).ok


def test_single_increment_breaks_theta(s3):
    E = zero_field(s3, U1)
    rel = next(r for r in E.idx.relations() if r.tag == "theta")
    slot = next(iter(rel.coeffs))
    rep = validate_extended(E.with_labels({slot: 1}))
    assert not rep.ok
    assert any(v["relation"] == "theta" for v in rep.violations)


def test_torsor_membership(s3):
    deck = deck_group(s3, U1, "full")
    rng = random.Random(4)
    for _ in range(20):
        d = deck.random_element(rng)
        assert validate_extended(act(d, zero_field(s3, U1), deck)).ok
    hits = 0
    for _ in range(20):
        x = deck.ambient.element([rng.randint(-1, 1) for _ in range(deck.ambient.ngens)])
        labels = dict(zip(deck.slots, x.coordinates))
        ok = validate_extended(ExtendedField(zero_field(s3, U1).base, labels)).ok
        assert ok == deck.contains(x)
        hits += ok
    assert hits < 20
    ok_field = random_valid_field(s3, U1, 3)
    assert validate_extended(ok_field).ok
    assert deck.contains(deck.ambient.element(ok_field.vector()))


def test_act_laws(s2, s3):
    deck = deck_group(s2, U1)
    rng = random.Random(1)
    E = random_valid_field(s2, U1, 2)
    d1, d2 = deck.random_element(rng), deck.random_element(rng)
    assert act(deck.subgroup.zero(), E, deck).vector() == E.vector()
    assert act(d1, act(d2, E, deck), deck).vector() == act(d1 + d2, E, deck).vector()
    for _ in range(20):
        d = deck.random_element(rng)
        if not d.is_zero():
            assert act(d, E, deck).vector() != E.vector()
    d3 = deck_group(s3, U1)
    bad = d3.ambient.element([1] + [0] * (d3.ambient.ngens - 1))
    assert not d3.contains(bad)
    with pytest.raises(NotInDeckGroup):
        act(bad, zero_field(s3, U1), d3)


def test_core_of_example(s2):
    tau = s2.cells(1)[0]
    v, w = (tau[0],), (tau[1],)
    E = zero_field(s2, U1).with_labels({((tau, w), tau): 5})
    core = core_of(E)
    assert isinstance(core, CoreField)
    assert core.label_int(((v, w), tau)) == 5
    assert core.label_int(((w, v), tau)) == -5
    assert sum(1 for _ in core.labels) == 2
    assert core_of(zero_field(s2, U1)).labels == {}


@pytest.mark.parametrize("name", ["s2", "s3"])
def test_core_commuting_square(name, s2, s3):
    C = {"s2": s2, "s3": s3}[name]
    deck = deck_group(C, U1)
    rng = random.Random(7)
    E = random_valid_field(C, U1, 1)
    Z = zero_field(C, U1)
    for _ in range(10):
        d = deck.random_element(rng)
        lhs = core_of(act(d, E, deck)).vector()
        rhs = [a + b for a, b in zip(core_of(E).vector(), core_of(act(d, Z, deck)).vector())]
        assert lhs == rhs


def test_core_invariants_after_projection(s3, t2):
    for C in (s3, t2):
        for seed in range(5):
            core = core_of(random_valid_field(C, U1, seed))
            assert validate_extended(core).ok   # mu, beta and triple relations


def test_classify_examples(s2, t2):
    for C in (s2, t2):
        assert classify(zero_field(C, U1)).primary.is_zero()
    for k in range(-3, 4):
        b = classify(canonical_field(s2, U1, k))
        assert b.primary_total == k
    assert classify(canonical_field(t2, U1, 2)).primary_total == 2


def test_classify_secondary():
    C = dualize(sphere_complex(4))
    for k in (-1, 0, 2):
        b = classify(canonical_field(C, SU2, k))
        assert b.secondary_total == k
        assert b.primary.is_zero()
    with pytest.raises(SecondaryUndefined):
        classify(zero_field(C, U1), secondary=True)


def test_classify_dimension_errors():
    with pytest.raises(DimensionUnsupported):
        classify(zero_field(dualize(epsilon_torus(1, 3)), U1))
    with pytest.raises(DimensionUnsupported):
        deck_group(dualize(sphere_complex(5)), U1)


def test_classify_linear_in_deck(s2):
    ck = class_kernel(s2, U1)
    deck = ck.deck
    E = random_valid_field(s2, U1, 9)
    base = class_vector(classify(E))
    rng = random.Random(3)
    for _ in range(100):
        d = deck.random_element(rng)
        got = class_vector(classify(act(d, E, deck)))
        assert [g - b for g, b in zip(got, base)] == list(ck.class_hom(d).coordinates)


def test_classify_gauge_invariant(s2, t2):
    for C in (s2, t2):
        for seed in range(5):
            E = random_valid_field(C, U1, seed)
            g = random_gauge(C, U1, seed + 50)
            assert classify(E.with_base(apply_gauge(E.base, g))) == classify(E)


def test_coboundary_invariance(t2):
    E = random_valid_field(t2, U1, 4)
    sq = _cohomology_data(t2, 2)
    faces = t2.cells(0)
    rng = random.Random(2)
    ref = defect_cochain(E)
    changed = 0
    for _ in range(10):
        shift = {tau: rng.randint(-3, 3) for tau in t2.cells(1)}
        c = defect_cochain(E, anchor_shift=shift)
        changed += c != ref
        assert sq.coords([c[s] for s in faces]) == sq.coords([ref[s] for s in faces])
    assert changed


def test_equivalence(s2, t2):
    ck = class_kernel(s2, U1)
    E = random_valid_field(s2, U1, 5)
    for i in range(ck.K.ngens):
        d = ck.embedding(ck.K.generator(i))
        assert cellularly_equivalent(E, act(d, E, ck.deck))
    assert not cellularly_equivalent(canonical_field(s2, U1, 1), canonical_field(s2, U1, 2))
    g = random_gauge(s2, U1, 1)
    assert cellularly_equivalent(E, E.with_base(apply_gauge(E.base, g)))
    with pytest.raises(ComplexMismatch):
        cellularly_equivalent(zero_field(s2, U1), zero_field(t2, U1))


def test_class_kernel_tetrahedron_and_torus(s2, t2):
    full = class_kernel(s2, U1, "full")
    assert (full.deck.subgroup.free_rank, full.K.free_rank) == (12, 11)
    core = class_kernel(s2, U1, "core")
    assert (core.deck.subgroup.free_rank, core.K.free_rank) == (6, 5)
    for ck in (full, core):
        assert ck.quotient.free_rank == 1 and not ck.quotient.torsion
    tor = class_kernel(t2, U1, "core")
    assert tor.quotient.free_rank == 1 and not tor.quotient.torsion


def test_ambient_element(s2):
    deck = deck_group(s2, U1)
    tau = s2.cells(1)[0]
    x = ambient_element(deck, {((tau, (tau[1],)), tau): 3})
    assert sum(x.coordinates) == 3
    assert classify(act(x, zero_field(s2, U1), deck)).primary_total == 3


def test_three_sphere_trivial_class(s3):
    for seed in range(3):
        assert classify(random_valid_field(s3, U1, seed)).primary.is_zero()


def test_extended_json_round_trip(t2):
    E = random_valid_field(t2, U1, 6)
    net = build_network(t2)
    text = dumps(extended_to_dict(E))
    F = extended_from_dict(json.loads(text), net)
    assert F.vector() == E.vector() and F.base.equals(E.base)
    assert dumps(extended_to_dict(F)) == text
