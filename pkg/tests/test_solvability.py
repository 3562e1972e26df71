import json
import random
import time
from math import comb

import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint

from equichain.chainmaps import verify_all, z_map
from equichain.solvability import (Certificate, binomial_gcd, build_reduced_system,
                                   enumerate_solutions, expand_solution, is_prime_power,
                                   orbit_class, renaming_verdict, sample_solutions,
                                   search_equivariant_map, solve_diophantine, winding_congruence)


@pytest.mark.parametrize("n,g", [(1, 2), (2, 3), (3, 2), (4, 5), (5, 1), (6, 7), (7, 2), (9, 1)])
def test_binomial_gcd(n, g):
    assert binomial_gcd(n) == g


@pytest.mark.parametrize("n", range(1, 21))
def test_gcd_prime_power_law(n):
    prime_power = len(factorint(n + 1)) == 1
    assert is_prime_power(n + 1) == prime_power
    assert (binomial_gcd(n) == 1) == (not prime_power)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 30))
def test_diophantine_matches_gcd(n):
    r = solve_diophantine(n)
    assert r.feasible == (binomial_gcd(n) == 1)
    if r.feasible:
        assert 1 + sum(k * comb(n + 1, i + 1) for i, k in enumerate(r.k)) == 0


def test_diophantine_examples():
    assert solve_diophantine(5).k == [-1, -1, 1, 0, 0]
    assert not solve_diophantine(2).feasible
    assert not solve_diophantine(0).feasible


def test_orbit_classes():
    for q in range(4):
        total = 0
        for k in range(q + 2):
            L = orbit_class(q, k)
            assert len(L.members) == comb(q + 1, k)
            assert all(sum(v.label for v in s) == k for s in L.members)
            total += len(L.members)
        assert total == 2 ** (q + 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_unknown_count(n):
    sys_ = build_reduced_system(n)
    assert len(sys_.unknowns) == sum(q + 2 for q in range(n + 1))


def test_n1_system():
    s = build_reduced_system(1)
    assert s.unknowns == [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2)]
    assert [1, 1, 0, 0, 0] in s.rows
    assert [0, 0, 1, 0, 0] in s.rows and [0, 0, 0, 0, 1] in s.rows


@pytest.mark.parametrize("n", [2, 3])
def test_rows_agree_with_expanded_verification(n):
    # the reduced system holds exactly when the lifted table is a valid map
    rng = random.Random(n)
    for boundary_only in (True, False):
        s = build_reduced_system(n, boundary_only)
        points = sample_solutions(s, 5, seed=n) if boundary_only else []
        for _ in range(10):
            points.append([rng.randint(-2, 2) for _ in s.unknowns])
        if points and boundary_only:
            x = list(points[0])
            x[rng.randrange(len(x))] += 1
            points.append(x)
        for x in points:
            reports = verify_all(expand_solution(s, x))
            assert s.satisfied(x) == all(r.passed for r in reports.values())


@pytest.mark.parametrize("n,g", [(1, 2), (2, 3), (3, 2), (4, 5)])
def test_nonexistence(n, g):
    c = search_equivariant_map(n)
    assert c.kind == "nonexistence" and c.g == g
    assert c.check()
    assert c.system_congruence["modulus"] == g
    assert all(x % g == 0 for x in c.class_equation["coefficients"])
    assert (c.boundary_winding - 1) % g == 0


def test_existence_n5():
    t = time.time()
    c = search_equivariant_map(5)
    assert time.time() - t < 300
    assert c.exists and c.check()
    assert all(r.passed for r in c.reports.values())
    assert c.diophantine.k == [-1, -1, 1, 0, 0]


def test_n0():
    c = search_equivariant_map(0)
    assert c.kind == "nonexistence" and c.check()


def test_certificate_json_round_trip():
    for n in (2, 5):
        doc = search_equivariant_map(n).to_json()
        text = json.dumps(doc, sort_keys=True)
        back = Certificate.from_json(json.loads(text))
        assert json.dumps(back.to_json(), sort_keys=True) == text
        assert back.check()


def test_winding_congruence_z():
    for n in (1, 2, 3):
        r = winding_congruence(z_map(n), n)
        assert r.winding == 1 and r.holds


def test_winding_congruence_rejects_bad_map():
    m = z_map(2)
    s, img = next(iter(m.entries()))
    with pytest.raises(ValueError):
        winding_congruence(m.replace(s, 2 * img), 2)


def test_enumerate_matches_brute_force():
    s = build_reduced_system(1, boundary_only=True)
    found = list(enumerate_solutions(s, 3))
    brute = [[a, b] for a in range(-3, 4) for b in range(-3, 4) if s.satisfied([a, b])]
    assert found == brute


def test_renaming_verdicts():
    assert "no wait-free 4-renaming" in renaming_verdict(2)["wait_free"]["verdict"]
    r = renaming_verdict(5)
    assert not r["wait_free"]["impossible"] and "protocol" in r["wait_free"]["verdict"]
    r = renaming_verdict(7, 2)
    assert r["t_resilient"]["gcd"] == 3
    assert "no 2-resilient 9-renaming" in r["t_resilient"]["verdict"]
    assert "unknown/possible" in renaming_verdict(7, 5)["t_resilient"]["verdict"]
    with pytest.raises(ValueError):
        renaming_verdict(3, 4)


def test_n6_nonexistence():
    c = search_equivariant_map(6)
    assert c.kind == "nonexistence" and c.g == 7 and c.check()
