import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from elgauge.groups import (CYCLE_123, S3, TRANS_12, EdgeMismatch, NotInVG, SU2Model, U1Model, UnknownModel,
                            ZNModel, canonical_arc, displacement, in_VG, make_class, model_from_name,
                            multiply_classes, perm_compose, principal, reverse_class, triadic_act,
                            vertex_defect)

U1 = U1Model()
SAMPLES = 1000


# --- independent oracle: sample a path in U(1) and count its winding ------

def path_points(c):
    """Lifted path of an anchored class: straight line in R from the lift of
    g_start covering the displacement, sampled; returned mod 1."""
    a = float(principal(Fr(c.g_start)))
    total = float(canonical_arc(c.g_start, c.g_end)) + c.label.coordinates[0]
    return [(a + total * i / SAMPLES) % 1.0 for i in range(SAMPLES + 1)]


def unwrap(points):
    tot = 0.0
    for x, y in zip(points, points[1:]):
        d = (y - x + 0.5) % 1.0 - 0.5
        tot += d
    return tot


def oracle_product_label(a, b):
    pa, pb = path_points(a), path_points(b)
    prod = [(x + y) % 1.0 for x, y in zip(pa, pb)]
    disp = unwrap(prod)
    ends = (Fr(a.g_start) + Fr(b.g_start)) % 1, (Fr(a.g_end) + Fr(b.g_end)) % 1
    return round(disp - float(canonical_arc(*ends)))


def oracle_defect(triple):
    tot = 0.0
    for c in triple:
        pts = path_points(c)
        tot += float(principal(Fr(c.g_start))) + unwrap(pts)
    return round(tot)


# -------------------------------------------------------------------------

def test_canonical_arc_ties():
    assert canonical_arc(Fr(0), Fr(1, 2)) == Fr(1, 2)
    assert canonical_arc(Fr(1, 2), Fr(0)) == Fr(1, 2)
    assert canonical_arc(Fr(0), Fr(3, 4)) == Fr(-1, 4)


def test_multiply_examples():
    a = make_class(U1, "e", Fr(0), Fr(0), 1)
    b = make_class(U1, "e", Fr(0), Fr(0), 2)
    assert multiply_classes(U1, a, b).label.coordinates == (3,)
    z = ZNModel(5)
    c = make_class(z, "e", 1, 2)
    assert multiply_classes(z, c, c).label.coordinates == ()
    with pytest.raises(EdgeMismatch):
        multiply_classes(U1, a, make_class(U1, "f", Fr(0), Fr(0)))


def test_three_quarter_turns():
    # two short arcs 0 -> 3/4 (each a quarter turn backwards) multiply to a
    # half turn backwards, ending at 1/2; the canonical arc to 1/2 goes forwards
    a = make_class(U1, "e", Fr(0), Fr(3, 4))
    p = multiply_classes(U1, a, a)
    assert (p.g_start, p.g_end) == (Fr(0), Fr(1, 2))
    assert p.label.coordinates == (oracle_product_label(a, a),) == (-1,)


fracs = st.builds(lambda p, q: Fr(p % q, q), st.integers(0, 50), st.integers(1, 12))


@settings(max_examples=150, deadline=None)
@given(fracs, fracs, fracs, fracs, st.integers(-2, 2), st.integers(-2, 2))
def test_multiply_matches_oracle(a0, a1, b0, b1, la, lb):
    a = make_class(U1, "e", a0, a1, la)
    b = make_class(U1, "e", b0, b1, lb)
    assert multiply_classes(U1, a, b).label.coordinates[0] == oracle_product_label(a, b)


@settings(max_examples=100, deadline=None)
@given(fracs, fracs, st.integers(-3, 3))
def test_reverse_is_inverse(a0, a1, l):
    c = make_class(U1, "e", a0, a1, l)
    r = reverse_class(U1, c)
    assert displacement(r) == -displacement(c)
    p = multiply_classes(U1, c, r)
    assert U1.is_identity(p.g_start) and U1.is_identity(p.g_end)
    assert p.label.coordinates == (0,)


def test_vertex_defect_examples():
    e = [make_class(U1, i, Fr(0), Fr(0)) for i in range(3)]
    assert vertex_defect(U1, e).coordinates == (0,)
    third = [make_class(U1, i, Fr(1, 3), Fr(1, 3)) for i in range(3)]
    assert vertex_defect(U1, third).coordinates == (oracle_defect(third),) == (1,)
    bumped = [make_class(U1, 0, Fr(1, 3), Fr(1, 3), 1)] + third[1:]
    assert vertex_defect(U1, bumped).coordinates == (2,)
    with pytest.raises(NotInVG):
        vertex_defect(U1, [make_class(U1, i, Fr(0), Fr(1, 5)) for i in range(3)])
    assert vertex_defect(SU2Model(), [make_class(SU2Model(), i, (1.0, 0, 0, 0), (1.0, 0, 0, 0))
                                      for i in range(3)]).is_zero()


def test_vertex_defect_random_oracle():
    rng = random.Random(11)
    for _ in range(200):
        ends = [U1.random_element(rng) for _ in range(2)]
        ends.append((-ends[0] - ends[1]) % 1)
        triple = [make_class(U1, i, U1.random_element(rng), ends[i], rng.randint(-2, 2)) for i in range(3)]
        assert vertex_defect(U1, triple).coordinates == (oracle_defect(triple),)


@pytest.mark.parametrize("model", [U1Model(), ZNModel(6), SU2Model()], ids=["u1", "z6", "su2"])
def test_group_axioms(model):
    rng = random.Random(5)
    e = model.identity()
    for _ in range(1000):
        a, b, c = (model.random_element(rng) for _ in range(3))
        assert model.contains(a)
        assert model.eq(model.mul(model.mul(a, b), c), model.mul(a, model.mul(b, c)))
        assert model.eq(model.mul(a, model.inv(a)), e)
        assert model.eq(model.mul(e, a), a)
    assert model.homotopy_group(2).is_trivial()


def test_homotopy_data():
    assert U1Model().pi1().free_rank == 1 and U1Model().homotopy_group(3).is_trivial()
    s = SU2Model()
    assert s.pi1().is_trivial() and s.homotopy_group(3).free_rank == 1
    assert all(ZNModel(3).homotopy_group(k).is_trivial() for k in range(1, 4))


def test_su2_norm_and_center():
    s = SU2Model()
    rng = random.Random(2)
    x = s.identity()
    for _ in range(500):
        x = s.mul(x, s.random_element(rng))
    assert abs(sum(c * c for c in x) - 1) < 1e-9
    assert s.is_central((-1.0, 0.0, 0.0, 0.0)) and not s.is_central(s.random_element(rng))


def test_model_names():
    assert model_from_name("u1").name == "u1"
    assert model_from_name("zN:7").N == 7
    assert model_from_name("su2").name == "su2"
    with pytest.raises(UnknownModel):
        model_from_name("so3")
    assert U1.decode(U1.encode(Fr(5, 7))) == Fr(5, 7)


def test_triadic_examples():
    a, b, c = Fr(1, 5), Fr(2, 7), Fr(1, 3)
    assert triadic_act(U1, CYCLE_123, (a, b, c)) == (c, a, b)
    assert triadic_act(U1, TRANS_12, (a, b, c)) == (U1.inv(b), U1.inv(a), U1.inv(c))
    assert triadic_act(U1, (1, 2, 3), (a, b, c)) == (a, b, c)


def random_vg(model, rng):
    x, y = model.random_element(rng), model.random_element(rng)
    return (x, y, model.inv(model.mul(x, y)))


@pytest.mark.parametrize("model", [U1Model(), SU2Model()], ids=["u1", "su2"])
def test_triadic_is_an_action(model):
    rng = random.Random(9)
    for _ in range(50):
        t = random_vg(model, rng)
        assert in_VG(model, t)
        for p in S3:
            tp = triadic_act(model, p, t)
            assert in_VG(model, tp)
            for q in S3:
                lhs = triadic_act(model, p, triadic_act(model, q, t))
                rhs = triadic_act(model, perm_compose(p, q), t)
                assert all(model.eq(x, y) for x, y in zip(lhs, rhs))
