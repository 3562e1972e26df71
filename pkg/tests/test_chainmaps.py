import pytest

from equichain.chainmaps import (ChainMapTable, apply, compose, identity_map,
                                 induced_from_simplicial, map_from_json, map_to_json,
                                 resolve_complex, verify_all, verify_augmented, verify_chain_map,
                                 verify_color_preserving, verify_equivariant, z_map)
from equichain.chains import Chain, boundary, distinguished_cycle, winding
from equichain.complexes import Vertex, build_annulus, build_disk, build_output_complex


@pytest.mark.parametrize("n", [1, 2, 3])
def test_z_map_passes(n):
    reports = verify_all(z_map(n))
    assert all(r.passed for r in reports.values()), reports


@pytest.mark.parametrize("n", [2, 3])
def test_z_map_full_group(n):
    assert verify_equivariant(z_map(n), full=True).passed


@pytest.mark.parametrize("n", [1, 2, 3])
def test_z_map_winding_one(n):
    top = next(iter(build_disk(n).facets))
    c = apply(z_map(n), boundary(Chain(n, {top: 1})))
    assert c == distinguished_cycle(n)
    assert winding(c, n) == 1


def test_sign_flip_breaks_chain_map():
    m = z_map(2)
    s, img = next((s, c) for s, c in m.entries() if len(s) == 2)
    bad = m.replace(s, -img)
    r = verify_chain_map(bad)
    assert not r.passed and r.counterexample is not None
    assert not verify_equivariant(bad).passed


def test_color_violation():
    m = z_map(2)
    v = (Vertex(0, "*"),)
    bad = m.replace(v, Chain(0, {(Vertex(1, 0),): 1}))
    assert not verify_color_preserving(bad).passed


def test_augmentation_violation():
    m = z_map(1)
    bad = ChainMapTable(1, m.source, m.target,
                        {0: {s: 2 * c for s, c in m.images[0].items()}})
    assert not verify_augmented(bad).passed
    # still a chain map: every vertex agrees on the degree -1 multiplier
    assert verify_chain_map(bad).passed


def test_support_outside_target():
    K = build_disk(2)
    top = next(iter(K.facets))
    images = {q: {s: Chain(q, {tuple(Vertex(v.color, 0) for v in s): 1}) for s in K.basis(q)}
              for q in range(3)}
    m = ChainMapTable(2, "disk", "annulus", images)
    r = verify_chain_map(m)
    assert not r.passed and r.counterexample["reason"] == "image leaves the target complex"
    assert verify_chain_map(ChainMapTable(2, "disk", "output", images)).passed
    assert top in images[2]


def test_identity_and_compose():
    A = build_annulus(2)
    idm = identity_map(A, "annulus")
    assert all(r.passed for r in verify_all(idm).values())
    m = compose(idm, z_map(2))
    assert m.images == z_map(2).images
    assert m.source == "disk-boundary" and m.target == "annulus"
    with pytest.raises(ValueError):
        compose(z_map(2), idm.with_status({}))


def test_compose_status_is_conjunction():
    z = z_map(2).with_status(verify_all(z_map(2)))
    idm = identity_map(build_annulus(2), "annulus")
    assert compose(idm, z).status["chainmap"] == "unknown"
    assert compose(idm.with_status(verify_all(idm)), z).status["chainmap"] == "pass"


def test_induced_from_simplicial():
    O = build_output_complex(1)
    flip = {v: Vertex(v.color, 1 - v.label) for v in O.vertices}
    m = induced_from_simplicial(flip, O, O, "output", "output")
    assert all(r.passed for r in verify_all(m).values())
    const = {v: Vertex(0, 0) for v in O.vertices}
    with pytest.raises(ValueError):
        induced_from_simplicial(const, O, O, "output", "output")
    collapse = induced_from_simplicial(const, O, O, "output", "output", require_color=False)
    assert all(not c for s, c in collapse.entries() if len(s) == 2)


def test_resolve_complex():
    assert resolve_complex("annulus", 2) == build_annulus(2)
    assert resolve_complex("subdivision:1", 1).census() == [4, 3]
    with pytest.raises(ValueError):
        resolve_complex("torus", 2)


def test_json_round_trip():
    m = z_map(3)
    doc = map_to_json(m)
    back = map_from_json(doc)
    assert back.images == m.images and map_to_json(back) == doc
    with pytest.raises(ValueError):
        map_from_json({"n": 1})
