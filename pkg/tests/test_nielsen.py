import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nielsenlab.groups import build, closure_mask
from nielsenlab.invariants import ic, lattice_of, rank
from nielsenlab.lattice import BudgetExceeded
from nielsenlab.nielsen import (Move, all_moves, apply, classify, epi_count, generator_moves,
                                greedy_compress, image, inverse_sequence, invert, is_redundant,
                                orbit, partial_redundancy_lift, replay, rmul, swap,
                                verify_witness, witness_from_json, witness_to_json)

from conftest import brute_closure, brute_generating_count


def explicit_orbits(g, n):
    """Connected components of G^n under every move, by plain Python BFS."""
    seen = {}
    comps = []
    moves = all_moves(n)
    for t in itertools.product(range(g.order), repeat=n):
        if t in seen:
            continue
        comp = {t}
        seen[t] = len(comps)
        stack = [t]
        while stack:
            cur = stack.pop()
            for m in moves:
                nxt = apply(g, m, cur)
                if nxt not in seen:
                    seen[nxt] = len(comps)
                    comp.add(nxt)
                    stack.append(nxt)
        comps.append(frozenset(comp))
    return comps


# moves ---------------------------------------------------------------------

def test_apply_examples():
    z6 = build("cyc:6")
    assert apply(z6, rmul(1, 0, inverse=True), (2, 3)) == (2, 1)
    s3 = build("sym:3")
    a, b = s3.parse_element("(12)"), s3.parse_element("(13)")
    out = apply(s3, rmul(0, 1), (a, b))
    assert out == (s3.parse_element("(132)"), b)
    for t in [(1, 2, 3), (0, 5, 4)]:
        for i in range(3):
            assert apply(z6, swap(i, i), t) == t


def test_move_validation_and_json():
    with pytest.raises(ValueError):
        rmul(1, 1)
    with pytest.raises(ValueError):
        Move("invert", 0, 1)
    with pytest.raises(IndexError):
        apply(build("cyc:6"), swap(0, 4), (1, 2))
    moves = all_moves(3)
    data = witness_to_json(moves)
    assert data[0] == {"op": "swap", "i": 1, "j": 2}
    assert {"op": "rmul", "i": 1, "j": 2, "inv": False} in data
    assert witness_from_json(json.dumps(data)) == moves
    assert str(rmul(1, 0, inverse=True)) == "RightMulInv(2,1)"


@pytest.mark.parametrize("spec", ["sym:3", "Q8", "lamp:3,2"])
def test_moves_are_invertible(groups, spec):
    g = groups(spec)
    rng = np.random.default_rng(0)
    for _ in range(50):
        t = tuple(int(x) for x in rng.integers(0, g.order, size=3))
        for m in all_moves(3):
            assert apply(g, m.inverse(), apply(g, m, t)) == t
        seq = [all_moves(3)[k] for k in rng.integers(0, len(all_moves(3)), size=10)]
        assert replay(g, inverse_sequence(seq), replay(g, seq, t)) == t


@pytest.mark.parametrize("spec,n", [("sym:3", 3), ("Q8", 3), ("cyc:6", 4), ("D4", 3),
                                    ("ab:2,2", 4), ("sym:4", 2)])
def test_image_invariance_exhaustive(groups, spec, n):
    g = groups(spec)
    moves = all_moves(n)
    for t in itertools.product(range(g.order), repeat=n):
        ref = brute_closure(g, t)
        for m in moves:
            assert brute_closure(g, apply(g, m, t)) == ref


# orbits --------------------------------------------------------------------

def test_orbit_examples():
    z2 = build("cyc:2")
    assert set(orbit(z2, (1, 0)).tuples()) == {(1, 0), (0, 1), (1, 1)}
    z6 = build("cyc:6")
    orb = orbit(z6, (2, 3))
    assert orb.complete and len(orb) == 24 == brute_generating_count(z6, 2)
    s3 = build("sym:3")
    t = (s3.parse_element("(12)"), s3.parse_element("(123)"))
    assert len(orbit(s3, t)) == 18 == brute_generating_count(s3, 2)
    assert all(closure_mask(s3, u).all() for u in orbit(s3, t).tuples())


def test_orbit_cap_flags_incomplete():
    g = build("sym:4")
    orb = orbit(g, (1, 2, 3), cap=100)
    assert not orb.complete and len(orb) > 100


def test_orbit_is_a_class_function():
    g = build("sym:3")
    t = (1, 2, 3)
    orb = orbit(g, t)
    rng = np.random.default_rng(3)
    tuples = orb.tuples()
    for k in rng.integers(0, len(tuples), size=5):
        other = orbit(g, tuples[k])
        assert (other.codes == orb.codes).all()


def test_generator_moves_reach_everything_all_moves_do():
    g = build("cayley:D4.json")
    for t in [(1, 4, 0), (2, 5, 6)]:
        comp = next(c for c in explicit_orbits(g, 3) if t in c)
        assert set(orbit(g, t).tuples()) == comp
    assert set(generator_moves(3)) <= set(all_moves(3))


# classification ------------------------------------------------------------

@pytest.mark.parametrize("spec,n", [("cyc:6", 2), ("sym:3", 2), ("sym:3", 3), ("ab:2,2", 2),
                                    ("Q8", 2), ("D4", 2), ("cyc:4", 3), ("ab:3,3", 2)])
def test_classify_matches_explicit_bfs(groups, spec, n):
    g = groups(spec)
    lat = lattice_of(g)
    rep = classify(g, n, lat)
    comps = explicit_orbits(g, n)
    assert sorted(o.size for o in rep.orbits) == sorted(len(c) for c in comps)
    assert rep.total == g.order ** n
    for o in rep.orbits:
        comp = next(c for c in comps if o.representative in c)
        assert len(comp) == o.size
        assert o.redundant == any(0 in t for t in comp)


def test_classify_examples():
    f3 = build("ab:3,3")
    rep = classify(f3, 2, lattice_of(f3))
    assert len(rep.orbits_with_image(lattice_of(f3).full)) == 1
    f5 = build("ab:5,5")
    lat = lattice_of(f5)
    rep = classify(f5, 2, lat)
    epi = rep.orbits_with_image(lat.full)
    assert len(epi) == 2 and not rep.matched_classification and rep.anomalies == []
    assert sorted(o.label for o in epi) == [(1, 4), (2, 3)]
    assert sum(o.size for o in epi) == epi_count(f5, 2, lat) == 480
    z6 = build("cyc:6")
    rep = classify(z6, 2, lattice_of(z6))
    assert len(rep.orbits) == 4 and rep.matched_classification
    assert all(o.is_epi_of_image for o in rep.orbits)


def test_classify_budget():
    g = build("sym:4")
    with pytest.raises(BudgetExceeded):
        classify(g, 6, lattice_of(g), cap=1000)


@pytest.mark.parametrize("spec,n", [("sym:3", 2), ("sym:3", 3), ("Q8", 2), ("cyc:6", 3),
                                    ("ab:2,2", 3), ("D4", 2)])
def test_epi_count_brute_force(groups, spec, n):
    g = groups(spec)
    assert epi_count(g, n, lattice_of(g)) == brute_generating_count(g, n)


@pytest.mark.parametrize("spec", ["cyc:6", "ab:2,2", "sym:3", "D4", "Q8"])
def test_single_epi_orbit_above_ic_plus_d(groups, spec):
    g = groups(spec)
    lat = lattice_of(g)
    n = ic(g, lat)[0] + rank(g, lat)[0]
    rep = classify(g, n, lat)
    epi = rep.orbits_with_image(lat.full)
    assert len(epi) == 1 and epi[0].size == epi_count(g, n, lat)


def test_exact_sequence_redundancy_on_lamplighter_exhaustive():
    # A = lamps (rank 3), Q = Z/3 with ic~ = 1, so n = 5 must always be redundant
    g = build("lamp:3,2")
    rep = classify(g, 5, lattice_of(g))
    assert rep.total == 24 ** 5
    assert all(o.redundant for o in rep.orbits)


def test_exact_sequence_redundancy_on_s3_exhaustive():
    g = build("sym:3")
    for t in itertools.product(range(6), repeat=3):
        res = is_redundant(g, t, 1)
        assert res.result
        assert verify_witness(g, t, res.witness, res.endpoint)
        assert (closure_mask(g, res.endpoint[:2]) == closure_mask(g, t)).all()


# redundancy ----------------------------------------------------------------

def test_is_redundant_examples():
    z6 = build("cyc:6")
    res = is_redundant(z6, (2, 3), 1)
    assert res.result and closure_mask(z6, res.endpoint[:1]).all()
    assert verify_witness(z6, (2, 3), res.witness, res.endpoint)
    s3 = build("sym:3")
    assert is_redundant(s3, (0, 0, 0, 0), 3).result
    t = tuple(s3.parse_element(c) for c in ("(12)", "(13)", "(23)"))
    res = is_redundant(s3, t, 1)
    assert res.result and verify_witness(s3, t, res.witness, res.endpoint)


def test_is_redundant_negative_and_bfs():
    z6 = build("cyc:6")
    with pytest.raises(ValueError):
        is_redundant(z6, (1,), 1)
    f5 = build("ab:5,5")
    # a basis of (F_5)^2 cannot lose a coordinate
    res = is_redundant(f5, (1, 5), 1)
    assert res.result is False
    s3 = build("sym:3")
    res = is_redundant(s3, (1, 2, 3), 1, cap=3)
    assert res.result in (True, None)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 23), min_size=4, max_size=4))
def test_greedy_compress_preserves_image(t):
    g = build("sym:4")
    moves, end = greedy_compress(g, t)
    assert replay(g, moves, t) == end
    assert verify_witness(g, t, moves, end)
    nonzero = [x for x in end if x]
    assert list(end[:len(nonzero)]) == nonzero


def test_partial_redundancy_lift_examples():
    z6 = build("cyc:6")
    t = (2, 3, 0)
    pre = is_redundant(z6, t[:2], 1)
    moves = partial_redundancy_lift(z6, t, 2, pre.witness)
    end = replay(z6, moves, t)
    assert verify_witness(z6, t, moves, end) and closure_mask(z6, end[:2]).all()
    # prefix already ending in the identity
    moves = partial_redundancy_lift(z6, (1, 0, 4), 2, [])
    end = replay(z6, moves, (1, 0, 4))
    assert end[-1] == 0 and (image(z6, end[:2]) == image(z6, (1, 0, 4))).all()
    s3 = build("sym:3")
    t = (1, 2, 4)
    assert closure_mask(s3, t[:2]).all()
    pre = is_redundant(s3, t[:2] + (t[2],), 1)
    moves = partial_redundancy_lift(s3, t, 3, pre.witness)
    end = replay(s3, moves, t)
    assert verify_witness(s3, t, moves, end) and closure_mask(s3, end[:2]).all()


def test_partial_redundancy_lift_rejects_bad_witness():
    z6 = build("cyc:6")
    with pytest.raises(ValueError):
        partial_redundancy_lift(z6, (2, 3, 0), 2, [])
    with pytest.raises(ValueError):
        partial_redundancy_lift(z6, (2, 3, 0), 2, [swap(0, 2)])
