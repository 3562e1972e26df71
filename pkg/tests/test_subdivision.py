import random
from collections import Counter
from math import comb

import pytest

from equichain.chainmaps import verify_all, verify_chain_map
from equichain.chains import boundary
from equichain.complexes import build_disk, vertex_carrier
from equichain.subdivision import (OrderedPartition, boundary_restriction, chromatic_subdivide,
                                   coloring_chain_map, coloring_from_json, coloring_to_json,
                                   coloring_winding, constant_coloring, count_symmetric_colorings,
                                   monochromatic_count, ordered_partitions,
                                   random_symmetric_coloring, signed_monochromatic_count,
                                   subdivision_chain_map, subdivision_from_json,
                                   subdivision_to_json, symmetric_colorings, symmetry_classes,
                                   verify_symmetric_coloring, wsb_decision_check)


def fubini(m):
    a = [1]
    for k in range(1, m + 1):
        a.append(sum(comb(k, j) * a[k - j] for j in range(1, k + 1)))
    return a[m]


def test_ordered_partitions():
    parts = list(ordered_partitions([0, 1]))
    assert len(parts) == 3
    assert OrderedPartition((frozenset({0, 1}),)) in parts
    assert [len(list(ordered_partitions(range(m)))) for m in range(1, 5)] == [1, 3, 13, 75]
    with pytest.raises(ValueError):
        OrderedPartition((frozenset({0}), frozenset({0})))


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_one_round_facets(n):
    S = chromatic_subdivide(n, 1)
    assert len(S.complex.facets) == fubini(n + 1)


def test_rounds_zero_is_disk():
    assert chromatic_subdivide(2, 0).complex.facets == build_disk(2).facets


def test_two_rounds():
    S = chromatic_subdivide(2, 2)
    assert len(S.complex.facets) == 13 ** 2
    # each boundary edge is cut into 3 * 3 pieces
    assert len(S.pieces({0, 1})) == 9
    # pseudo-manifold: interior edges in two facets, boundary edges in one
    deg = Counter(e for f in S.complex.facets for e in
                  [f[:i] + f[i + 1:] for i in range(3)])
    for e, k in deg.items():
        expected = 1 if len(S.simplex_carrier(e)) < 3 else 2
        assert k == expected


@pytest.mark.parametrize("n,r", [(1, 1), (2, 1), (3, 1), (2, 2)])
def test_chromatic_and_carriers(n, r):
    S = chromatic_subdivide(n, r)
    for f in S.complex.facets:
        assert sorted(v.color for v in f) == list(range(n + 1))
        for v in f:
            assert v.color in vertex_carrier(v)


@pytest.mark.parametrize("n,r", [(1, 0), (1, 1), (2, 1), (3, 1), (1, 2), (2, 2)])
def test_subdivision_chain_map(n, r):
    S = chromatic_subdivide(n, r)
    m = subdivision_chain_map(S)
    assert verify_chain_map(m).passed
    top = m.image(next(iter(build_disk(n).facets)))
    assert len(top.terms) == len(S.complex.facets)
    assert set(map(abs, top.terms.values())) == {1}
    # the boundary of the top image lives on the carrier boundary
    for s in boundary(top).terms:
        assert len(S.simplex_carrier(s)) <= n


def test_subdivision_map_passes_everything():
    for n in (1, 2):
        m = subdivision_chain_map(chromatic_subdivide(n, 1))
        assert all(r.passed for r in verify_all(m, full=True).values())


def test_symmetry_classes_n2():
    S = chromatic_subdivide(2, 1)
    assert len(symmetry_classes(S)) == 6
    assert count_symmetric_colorings(S) == 64


def test_constant_coloring():
    S = chromatic_subdivide(2, 1)
    b = constant_coloring(S)
    assert verify_symmetric_coloring(S, b).passed
    assert monochromatic_count(S, b) == 13
    assert wsb_decision_check(S, b)["decision"] is False
    assert coloring_winding(S, b) == 1


def test_asymmetric_edge_coloring():
    S = chromatic_subdivide(2, 1)
    b = constant_coloring(S)
    # edge {0,1} interior vertices in rank order get (0, 1); edge {1,2} gets (1, 0)
    for v in S.vertices:
        ids = vertex_carrier(v)
        if ids == {0, 1}:
            b[v] = 0 if v.color == 0 else 1
        elif ids == {1, 2}:
            b[v] = 1 if v.color == 1 else 0
    r = verify_symmetric_coloring(S, b)
    assert not r.passed and r.counterexample is not None


def test_interior_changes_keep_symmetry():
    S = chromatic_subdivide(2, 1)
    rng = random.Random(0)
    for b in list(symmetric_colorings(S))[::7]:
        for v in S.vertices:
            if len(vertex_carrier(v)) == 3:
                b[v] = rng.randint(0, 1)
        assert verify_symmetric_coloring(S, b).passed


def test_symmetry_invariant_under_relabeling():
    from equichain.symmetry import act_vertex, full_group
    S = chromatic_subdivide(2, 1)
    rng = random.Random(1)
    for _ in range(30):
        b = {v: rng.randint(0, 1) for v in S.vertices}
        ok = verify_symmetric_coloring(S, b).passed
        for g in full_group(2):
            moved = {act_vertex(g, v): x for v, x in b.items()}
            assert verify_symmetric_coloring(S, moved).passed == ok


@pytest.mark.parametrize("n,r", [(1, 1), (2, 1), (1, 2)])
def test_winding_equals_signed_count(n, r):
    S = chromatic_subdivide(n, r)
    for b in symmetric_colorings(S):
        w = coloring_winding(S, b)
        assert w == signed_monochromatic_count(S, b)
        assert monochromatic_count(S, b) % 2 == w % 2


def test_boundary_restriction_is_equivariant():
    S = chromatic_subdivide(2, 1)
    for b in list(symmetric_colorings(S))[::5]:
        m = boundary_restriction(coloring_chain_map(S, b))
        assert all(r.passed for r in verify_all(m).values())


def test_no_mono_means_winding_zero_is_impossible():
    # a coloring with no monochromatic facet lands in the annulus; such
    # colorings are never symmetric for n = 2
    S = chromatic_subdivide(2, 1)
    for b in symmetric_colorings(S):
        assert monochromatic_count(S, b) > 0


def test_two_rounds_sampled():
    S = chromatic_subdivide(2, 2)
    rng = random.Random(7)
    for _ in range(25):
        b = random_symmetric_coloring(S, rng)
        assert verify_symmetric_coloring(S, b).passed
        assert not wsb_decision_check(S, b)["decision"]
        assert (coloring_winding(S, b) - 1) % 3 == 0


def test_json_round_trip():
    S = chromatic_subdivide(2, 1)
    doc = subdivision_to_json(S)
    back = subdivision_from_json(doc)
    assert back.complex.facets == S.complex.facets
    assert subdivision_to_json(back) == doc
    b = next(iter(symmetric_colorings(S)))
    S2, b2 = coloring_from_json(coloring_to_json(S, b))
    assert b2 == b
    with pytest.raises(ValueError):
        coloring_from_json({"n": 2, "rounds": 1, "bits": [0, 1]})
