import itertools
from math import comb

import pytest

from elgauge.abelian import FGAbelianGroup, homology
from elgauge.complex import (FacetFileError, InvalidTriangulation, NotOriented, PeriodTooSmall,
                             SimplicialComplex, dualize, epsilon_torus, format_facets, oriented_triples,
                             parse_facets, perm_sign, sphere_complex, star_and_complement,
                             validate_triangulation)

Z = FGAbelianGroup(1)


def test_validate_sphere_and_bad_inputs():
    r = validate_triangulation(SimplicialComplex(4, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]))
    assert r.ok and r.orientable
    r = validate_triangulation(SimplicialComplex(5, [(0, 1, 2), (0, 3, 4)]))
    assert not r.pseudomanifold and not r.connected
    with pytest.raises(InvalidTriangulation):
        SimplicialComplex(3, [(0, 1, 2), (0, 1, 2)])
    with pytest.raises(InvalidTriangulation):
        SimplicialComplex(3, [(0, 1, 5)])


def test_single_simplex_rejected():
    with pytest.raises(InvalidTriangulation):
        dualize(SimplicialComplex(3, [(0, 1, 2)]))


def test_torus3_valid():
    r = validate_triangulation(epsilon_torus(3, 3))
    assert r.ok and r.orientable


def test_nonorientable_report():
    # a 6-vertex RP^2
    fs = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5), (1, 2, 4), (2, 3, 5), (1, 3, 4), (1, 3, 5), (2, 4, 5)]
    r = validate_triangulation(SimplicialComplex(6, fs))
    assert r.pseudomanifold and not r.orientable
    assert r.obstruction
    with pytest.raises(NotOriented):
        SimplicialComplex(6, fs).oriented()


def test_dual_counts(s2, s4, t2):
    assert s2.counts() == [4, 6, 4]
    assert s4.counts() == [comb(6, 5 - k) for k in range(5)]
    assert t2.counts() == [18, 27, 9]
    for p in s2.cells(0):
        assert sum(1 for e in s2.cells(1) if s2.in_closure(p, e)) == 3


def test_torus_generator_counts():
    for m in (3, 4):
        assert dualize(epsilon_torus(2, m)).counts() == [2 * m * m, 3 * m * m, m * m]
    K = epsilon_torus(1, 3)
    assert len(K.facets) == 3 and K.dim == 1
    for n, m in ((2, 2), (1, 2), (3, 1)):
        with pytest.raises(PeriodTooSmall):
            epsilon_torus(n, m)


def test_homology_textbook(s2, t2):
    assert homology(s2.K.boundary_maps()) == [Z, FGAbelianGroup(), Z]
    assert homology(t2.K.boundary_maps()) == [Z, FGAbelianGroup(2), Z]
    # the dual chain complex computes the same thing
    assert homology(t2.boundary_maps()) == [Z, FGAbelianGroup(2), Z]


def test_torus3_homology(t3):
    assert homology(t3.K.boundary_maps()) == [Z, FGAbelianGroup(3), FGAbelianGroup(3), Z]


def test_closure_is_reversed_face_order(s2):
    C = s2
    for a in C.all_cells():
        for b in C.all_cells():
            assert C.in_closure(a, b) == set(b).issubset(a)


def test_intersection_cells(s4, t2):
    for C in (s4, t2):
        n = C.n
        for k in range(n):
            for c in C.cells(k):
                assert len(C.incident_higher(c)) == n - k + 1
                assert len(C.n_cells_around(c)) == n - k + 1


def test_euler_and_chain_condition(t3):
    assert t3.euler_characteristic() == t3.K.euler_characteristic() == 0
    bs = t3.boundary_maps()
    for lo, hi in zip(bs, bs[1:]):
        assert lo.compose(hi).is_zero()


def test_edge_orientation_closes_two_cells(t2, t3, s4):
    """Walking the boundary of each 2-cell with incidence signs and the
    1-cell directions gives a closed loop."""
    for C in (t2, t3, s4):
        for f in C.cells(2):
            bal = {}
            for e in C.boundary_cells(f):
                st, en = C.edge_ends(e)
                s = C.incidence(f, e)
                bal[en] = bal.get(en, 0) + s
                bal[st] = bal.get(st, 0) - s
            assert not any(bal.values())


def test_oriented_triples(s2, s4):
    ts = oriented_triples(s2)
    assert len(ts) == 4
    for t in ts:
        assert t.co_cells == ((t.vertices[1], t.vertices[2]), (t.vertices[0], t.vertices[2]),
                              (t.vertices[0], t.vertices[1]))
        assert {c[0] for c in t.n_cells} == set(t.sigma)
    assert len(oriented_triples(s4)) == 20
    rev = dualize(s2.K.reversed())
    assert [t.cyclic_class for t in oriented_triples(rev)] == [-t.cyclic_class for t in ts]


def test_triple_permutations(s2):
    t = oriented_triples(s2)[0]
    for p in itertools.permutations((1, 2, 3)):
        q = t.permuted(p)
        assert q.cyclic_class == t.cyclic_class * perm_sign(p)
    assert t.permuted((2, 3, 1)).cyclic_class == t.cyclic_class


def test_star_of_zero_cell(s2):
    star, rest = star_and_complement(s2, s2.cells(0)[0])
    assert sorted(s2.cell_dim(c) for c in star) == [0, 1, 1, 1, 2, 2, 2]
    assert len(star) + len(rest) == sum(s2.counts())


def test_facet_file_roundtrip(tmp_path):
    K = epsilon_torus(2, 3)
    text = format_facets(K)
    assert text.startswith("dim 2  vertices 9\n")
    K2 = parse_facets(text)
    assert K2 == K and format_facets(K2) == text
    with pytest.raises(FacetFileError):
        parse_facets("dim 2  vertices 3\n0 1 2\n0 1 2\n")
    with pytest.raises(FacetFileError):
        parse_facets("dim 2  vertices 3\n0 1 7\n")
    with pytest.raises(FacetFileError):
        parse_facets("garbage\n")
