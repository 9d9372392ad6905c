import json
import random

import pytest

from elgauge.complex import dualize, epsilon_torus, oriented_triples
from elgauge.elgf import CoreField, defect_cochain
from elgauge.gauge import (FieldFormatError, InvalidFlag, NotAdjacent, apply_gauge, build_network,
                           clutch_value, cocycle_product, dumps, evaluate_word, field_from_dict,
                           field_to_dict, glue_value, random_field, random_gauge, trivial_field,
                           triple_values)
from elgauge.groups import S3, SU2Model, U1Model, ZNModel, triadic_act

U1, SU2 = U1Model(), SU2Model()


def test_network_counts(s2):
    net = build_network(s2)
    assert len(net) == 24
    assert len(build_network(dualize(epsilon_torus(1, 3)))) == 6
    assert build_network(s2).edges == net.edges
    for k in range(1, 3):
        for c in s2.cells(k):
            assert sum(1 for e in net.edges if e[0] == c) == len(s2.zero_cells_in_closure(c))


def test_glue_examples(s2):
    net = build_network(s2)
    F = trivial_field(net, U1)
    tau = s2.cells(1)[0]
    sigma = s2.cells(2)[0] if s2.in_closure(tau, s2.cells(2)[0]) else next(
        c for c in s2.cells(2) if s2.in_closure(tau, c))
    p = s2.zero_cells_in_closure(tau)[0]
    assert U1.is_identity(glue_value(F, tau, sigma, p))
    from fractions import Fraction as Fr
    G = F.replace({(tau, p): Fr(1, 5), (sigma, p): Fr(1, 3)})
    assert glue_value(G, tau, sigma, p) == Fr(1, 3) - Fr(1, 5)
    with pytest.raises(InvalidFlag):
        glue_value(G, sigma, tau, p)


def chains(C):
    for top in C.cells(C.n):
        for mid in C.cells(C.n - 1):
            if not C.in_closure(mid, top):
                continue
            for low in C.cells(C.n - 2):
                if C.in_closure(low, mid):
                    for p in C.zero_cells_in_closure(low):
                        yield top, mid, low, p


@pytest.mark.parametrize("model", [U1, SU2, ZNModel(4)], ids=["u1", "su2", "z4"])
def test_glue_factorisation(s2, t2, model):
    for C in (s2, t2):
        F = random_field(build_network(C), model, 3)
        for a, b, c, p in chains(C):
            lhs = glue_value(F, c, a, p)
            rhs = model.mul(glue_value(F, c, b, p), glue_value(F, b, a, p))
            assert model.eq(lhs, rhs)


def test_clutch_antisymmetry_and_errors(s2):
    F = random_field(build_network(s2), SU2, 1)
    tau = s2.cells(1)[0]
    v, w = (tau[0],), (tau[1],)
    for p in s2.zero_cells_in_closure(tau):
        assert SU2.eq(clutch_value(F, w, v, p), SU2.inv(clutch_value(F, v, w, p)))
    with pytest.raises(NotAdjacent):
        clutch_value(F, v, v, s2.zero_cells_in_closure(tau)[0])


@pytest.mark.parametrize("model", [U1, SU2], ids=["u1", "su2"])
def test_cocycle_on_random_fields(s2, t2, model):
    for C in (s2, t2):
        net = build_network(C)
        triples = oriented_triples(C)
        for seed in range(100 if model is U1 else 20):
            F = random_field(net, model, seed)
            for t in triples:
                for p in C.zero_cells_in_closure(t.sigma):
                    assert model.is_identity(cocycle_product(F, t, p))


def test_trivial_field_clutch(s2):
    F = trivial_field(build_network(s2), U1)
    for t in oriented_triples(s2):
        for p in s2.zero_cells_in_closure(t.sigma):
            assert all(U1.is_identity(x) for x in triple_values(F, t, p))


def test_gauge_left_action(s2):
    F = random_field(build_network(s2), SU2, 4)
    g, h = random_gauge(s2, SU2, 1), random_gauge(s2, SU2, 2)
    hg = {c: SU2.mul(h[c], g[c]) for c in g}
    assert apply_gauge(apply_gauge(F, g), h).equals(apply_gauge(F, hg))
    ident = {c: SU2.identity() for c in g}
    assert apply_gauge(F, ident).equals(F)


def test_gauge_constant_conjugates_clutch(s2):
    F = random_field(build_network(s2), SU2, 6)
    c = SU2.random_element(random.Random(3))
    G = apply_gauge(F, {x: c for x in s2.all_cells()})
    for tau in s2.cells(1):
        v, w = (tau[0],), (tau[1],)
        for p in s2.zero_cells_in_closure(tau):
            h = clutch_value(F, v, w, p)
            assert SU2.eq(clutch_value(G, v, w, p), SU2.mul(SU2.mul(c, h), SU2.inv(c)))
    Fu = random_field(build_network(s2), U1, 6)
    cu = U1.random_element(random.Random(1))
    Gu = apply_gauge(Fu, {x: cu for x in s2.all_cells()})
    for tau in s2.cells(1):
        for p in s2.zero_cells_in_closure(tau):
            assert clutch_value(Gu, (tau[0],), (tau[1],), p) == clutch_value(Fu, (tau[0],), (tau[1],), p)


def test_defect_gauge_invariant(s2, t2):
    cases = 0
    for C in (s2, t2):
        net = build_network(C)
        for seed in range(50):
            F = random_field(net, U1, seed)
            g = random_gauge(C, U1, seed + 1000)
            assert defect_cochain(CoreField(F)) == defect_cochain(CoreField(apply_gauge(F, g)))
            cases += 1
    assert cases == 100


@pytest.mark.parametrize("model", [U1, SU2], ids=["u1", "su2"])
def test_triples_in_VG_and_permute_by_triadic_action(t2, model):
    F = random_field(build_network(t2), model, 8)
    for t in oriented_triples(t2):
        for q in t2.zero_cells_in_closure(t.sigma):
            base = triple_values(F, t, q)
            assert model.is_identity(model.prod(base))
            for p in S3:
                got = triple_values(F, t.permuted(p), q)
                assert all(model.eq(x, y) for x, y in zip(got, triadic_act(model, p, base)))


def test_random_field_seeds(s2):
    net = build_network(s2)
    assert random_field(net, U1, 0).equals(random_field(net, U1, 0))
    assert not random_field(net, U1, 0).equals(random_field(net, U1, 1))
    assert all(SU2.contains(x) for x in random_field(net, SU2, 2).values.values())


def test_evaluate_word(s2):
    F = random_field(build_network(s2), U1, 2)
    e1, e2 = F.network.edges[:2]
    assert evaluate_word(F, [(e1, 1), (e2, -1)]) == (F.values[e1] - F.values[e2]) % 1
    assert U1.is_identity(evaluate_word(F, [(e1, 1), (e1, -1)]))


@pytest.mark.parametrize("model", [U1, SU2, ZNModel(5)], ids=["u1", "su2", "z5"])
def test_json_round_trip(t2, model):
    net = build_network(t2)
    F = random_field(net, model, 12)
    text = dumps(field_to_dict(F))
    G = field_from_dict(json.loads(text), net)
    assert G.equals(F)
    assert dumps(field_to_dict(G)) == text


def test_json_errors(s2, t2):
    d = field_to_dict(random_field(build_network(s2), U1, 0))
    with pytest.raises(FieldFormatError):
        field_from_dict(d, build_network(t2))
    d2 = dict(d, edges=d["edges"][:-1])
    with pytest.raises(FieldFormatError):
        field_from_dict(d2, build_network(s2))
    with pytest.raises(FieldFormatError):
        field_from_dict({"model": "u1"}, build_network(s2))
